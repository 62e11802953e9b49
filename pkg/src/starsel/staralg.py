"""Set constructions: star, complements, refinement, refinement hulls, and the
families built from one selected set or point.

All functions take and return bitmask subsets (``int``) and families
(``frozenset`` of masks); see :mod:`starsel.bits`.
"""

from starsel import bits, kernels
from starsel.errors import BudgetExceeded
from starsel.setcore import (ComplementOf, Extensional, Hull, Intensional,
                             collection_contains, complement_view)

HULL_ENUMERATION_MAX_N = 4


def star(a: int, fam) -> int:
    """Union of the members of ``fam`` that meet ``a``."""
    return kernels.star(a, fam)


def complement_family(fam, n: int):
    full = bits.full_mask(n)
    return frozenset(full ^ m for m in fam)


def complement_collection(coll, n: int):
    """The collection of complements; membership satisfies F ∈ Cᶜ iff Fᶜ ∈ C."""
    if isinstance(coll, Extensional):
        return Extensional.of(complement_family(f, n) for f in coll.families)
    if isinstance(coll, Intensional):
        return Intensional(complement_view(coll.predicate))
    if isinstance(coll, ComplementOf):
        return coll.base
    return ComplementOf(coll)


def refines(a, b) -> bool:
    """True iff every member of ``a`` lies inside some member of ``b``."""
    return kernels.refines(a, b)


_enumerated = {}


def _enumerate_collection(coll, ctx):
    key = (coll, ctx.n, tuple(sorted(ctx.families.items(), key=lambda kv: kv[0])),
           tuple(sorted(ctx.collections.items(), key=lambda kv: kv[0])))
    members = _enumerated.get(key)
    if members is None:
        if ctx.n > HULL_ENUMERATION_MAX_N:
            raise BudgetExceeded(
                f"hull over a non-extensional collection needs n <= {HULL_ENUMERATION_MAX_N}, "
                f"got n = {ctx.n}")
        members = tuple(f for f in bits.all_families(ctx.n) if collection_contains(coll, f, ctx))
        if len(_enumerated) > 256:
            _enumerated.clear()
        _enumerated[key] = members
    return members


def hull_membership(kind: str, coll, fam, ctx) -> bool:
    """Decide ``fam`` ∈ ℛ⁻(coll) (``kind="minus"``) or ℛ⁺(coll) (``kind="plus"``).

    Non-extensional collections are decided by enumerating every family over
    the ground set, which is only attempted for ``n <= 4``.
    """
    if kind not in ("minus", "plus"):
        raise ValueError(f"hull kind must be 'minus' or 'plus', got {kind!r}")
    if isinstance(coll, Extensional):
        candidates = coll.families
    else:
        candidates = _enumerate_collection(coll, ctx)
    fam = tuple(fam)
    if kind == "minus":
        return any(kernels.refines(fam, b) for b in candidates)
    return any(kernels.refines(b, fam) for b in candidates)


def build_V(fam, sel: int):
    """Unions of the nonempty subfamilies of ``fam`` whose members all meet ``sel``."""
    return frozenset(kernels.union_closure([m for m in fam if m & sel]))


def build_F(fam, sel: int, n: int):
    """Intersections of nonempty subfamilies of ``fam`` with selᶜ ∩ Eᶜ ≠ ∅ for every member E."""
    full = bits.full_mask(n)
    return frozenset(kernels.intersection_closure([e for e in fam if full & ~(sel | e)]))


def build_V_point(fam, x: int):
    """Unions of the nonempty subfamilies of ``fam`` whose members all contain ``x``."""
    return frozenset(kernels.union_closure([m for m in fam if m >> x & 1]))


def build_F_point(fam, x: int):
    """Intersections of the nonempty subfamilies of ``fam`` whose members all avoid ``x``."""
    return frozenset(kernels.intersection_closure([e for e in fam if not e >> x & 1]))


def hull(kind: str, coll):
    return Hull(kind, coll)
