"""Brute-force reference implementations used only by the tests.

Everything here works on Python sets of frozensets of ints straight from the
definitions, with no bitmasks, no deduplication and no memoization, so it
shares no code path with the library beyond the final B membership test.
"""

from itertools import chain, combinations, product

from starsel import bits
from starsel.principles import NONEMPTY_FIN, Principle
from starsel.setcore import Extensional, Hull, collection_contains

P = Principle


def to_sets(fam):
    return {frozenset(bits.elements(m)) for m in fam}


def to_masks(sets):
    return frozenset(bits.subset(s) for s in sets)


def powerset(items, nonempty=False):
    items = list(items)
    start = 1 if nonempty else 0
    return chain.from_iterable(combinations(items, k) for k in range(start, len(items) + 1))


def star(a, fam):
    out = set()
    for u in fam:
        if u & a:
            out |= u
    return frozenset(out)


def build_V(fam, sel):
    return {frozenset().union(*sub) for sub in powerset(fam, nonempty=True)
            if all(u & sel for u in sub)}


def build_F(fam, sel, n):
    ground = frozenset(range(n))
    return {frozenset.intersection(*sub) for sub in powerset(fam, nonempty=True)
            if all((ground - sel) & (ground - e) for e in sub)}


def build_V_point(fam, x):
    return {frozenset().union(*sub) for sub in powerset(fam, nonempty=True)
            if all(x in u for u in sub)}


def build_F_point(fam, x):
    return {frozenset.intersection(*sub) for sub in powerset(fam, nonempty=True)
            if all(x not in e for e in sub)}


def refines(a, b):
    return all(any(u <= v for v in b) for u in a)


def selections(p, fam, n, kappa="singletons", fin_allow_empty=False):
    """Every selection for one round, as plain Python values, in canonical order."""
    members = sorted(fam, key=bits.subset)
    nonempty = p in NONEMPTY_FIN and not fin_allow_empty
    if p in (P.S1, P.S1STAR, P.CS1, P.DS1):
        return [("element", m) for m in members]
    if p in (P.SFIN, P.SFINSTAR, P.CSFIN, P.DSFIN):
        out = []
        for mask in range(1 if nonempty else 0, 1 << len(members)):
            out.append(("subfamily", frozenset(members[j] for j in range(len(members))
                                               if mask >> j & 1)))
        return out
    if p in (P.SCS1, P.SDS1):
        return [("point", x) for x in range(n)]
    if p in (P.SCSFIN, P.SDSFIN):
        return [("points", frozenset(bits.elements(s)))
                for s in range(1 if nonempty else 0, 1 << n)]
    if p is P.SS1STAR:
        kappa = "singletons"
    elif p is P.SSFINSTAR:
        kappa = "finite_nonempty"
    if kappa == "singletons":
        ks = [1 << i for i in range(n)]
    elif kappa == "finite_nonempty":
        ks = range(1, 1 << n)
    elif kappa == "finite_with_empty":
        ks = range(1 << n)
    else:
        ks = sorted(kappa)
    return [("kappa", frozenset(bits.elements(k))) for k in ks]


def contribution(p, fam, sel, n):
    kind, value = sel
    if p in (P.S1, P.SFIN):
        return {value} if kind == "element" else set(value)
    if p in (P.S1STAR, P.SFINSTAR):
        chosen = [value] if kind == "element" else value
        return {star(u, fam) for u in chosen}
    if p in (P.CS1, P.CSFIN):
        chosen = [value] if kind == "element" else value
        return set().union(*(build_V(fam, u) for u in chosen))
    if p in (P.DS1, P.DSFIN):
        chosen = [value] if kind == "element" else value
        return set().union(*(build_F(fam, u, n) for u in chosen))
    if p in (P.SCS1, P.SCSFIN):
        points = [value] if kind == "point" else value
        return set().union(*(build_V_point(fam, x) for x in points))
    if p in (P.SDS1, P.SDSFIN):
        points = [value] if kind == "point" else value
        return set().union(*(build_F_point(fam, x) for x in points))
    return {star(value, fam)}


def _accepts(B, sets, inst):
    if isinstance(B, Hull) and isinstance(B.base, Extensional):
        members = [to_sets(f) for f in B.base.families]
        if B.kind == "minus":
            return any(refines(sets, b) for b in members)
        return any(refines(b, sets) for b in members)
    return collection_contains(B, to_masks(sets), inst)


def first_witness(p, inst, sequence, fin_allow_empty=None):
    """First selection tuple (canonical order) for ``sequence`` whose produced family is in B."""
    allow = inst.fin_allow_empty if fin_allow_empty is None else fin_allow_empty
    fams = [to_sets(inst.A.families[i]) for i in sequence]
    spaces = [selections(p, f, inst.n, inst.kappa, allow) for f in fams]
    for combo in product(*spaces):
        produced = set()
        for fam, sel in zip(fams, combo):
            produced |= contribution(p, fam, sel, inst.n)
        if _accepts(inst.B, produced, inst):
            return combo, produced
    return None


def evaluate(p, inst, fin_allow_empty=None):
    """``(holds, first failing sequence or None)`` over every sequence in A^H."""
    p = Principle(p)
    for seq in product(range(len(inst.A.families)), repeat=inst.horizon):
        if first_witness(p, inst, seq, fin_allow_empty) is None:
            return False, seq
    return True, None
