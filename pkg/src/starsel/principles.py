"""Bounded-horizon evaluation of the selection principles.

A principle holds on an instance when for every length-``horizon`` sequence of
families drawn from A there is a per-round selection whose produced family is
a member of B. The search is a depth-first sweep over rounds in canonical
selection order, so the witness found is the lexicographically first one.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Optional, Tuple

from starsel import bits, kernels
from starsel.errors import BudgetExceeded, TypeMismatch
from starsel.predicate import conjuncts, monotonicity
from starsel.setcore import ComplementOf, Extensional, Hull, Intensional, collection_contains
from starsel.staralg import build_F, build_F_point, build_V, build_V_point

DEFAULT_MAX_NODES = 5_000_000


class Principle(str, Enum):
    S1 = "s1"
    SFIN = "sfin"
    S1STAR = "s1star"
    SFINSTAR = "sfinstar"
    SSSTARK = "ssstark"
    SS1STAR = "ss1star"
    SSFINSTAR = "ssfinstar"
    CS1 = "cs1"
    CSFIN = "csfin"
    DS1 = "ds1"
    DSFIN = "dsfin"
    SCS1 = "scs1"
    SCSFIN = "scsfin"
    SDS1 = "sds1"
    SDSFIN = "sdsfin"

    @classmethod
    def parse(cls, text):
        try:
            return cls(text.lower())
        except ValueError:
            valid = ", ".join(p.value for p in cls)
            raise ValueError(f"unknown principle {text!r}; valid ids: {valid}") from None


P = Principle

ELEMENT, SUBFAMILY, POINT, POINTS, KAPPA = "element", "subfamily", "point", "points", "kappa"

SELECTOR_KIND = {
    P.S1: ELEMENT, P.S1STAR: ELEMENT, P.CS1: ELEMENT, P.DS1: ELEMENT,
    P.SFIN: SUBFAMILY, P.SFINSTAR: SUBFAMILY, P.CSFIN: SUBFAMILY, P.DSFIN: SUBFAMILY,
    P.SCS1: POINT, P.SDS1: POINT,
    P.SCSFIN: POINTS, P.SDSFIN: POINTS,
    P.SSSTARK: KAPPA, P.SS1STAR: KAPPA, P.SSFINSTAR: KAPPA,
}

# Principles whose finite selections name k >= 1 sets or points by default.
NONEMPTY_FIN = frozenset({P.CSFIN, P.DSFIN, P.SCSFIN, P.SDSFIN})


@dataclass(frozen=True)
class Selection:
    kind: str
    value: object  # int mask / point, or frozenset of masks for SUBFAMILY

    def to_json(self):
        if self.kind == SUBFAMILY:
            return {SUBFAMILY: bits.family_to_lists(self.value)}
        if self.kind == POINT:
            return {POINT: self.value}
        return {self.kind: bits.elements(self.value)}

    @classmethod
    def from_json(cls, obj):
        (kind, raw), = obj.items()
        if kind == SUBFAMILY:
            return cls(kind, frozenset(bits.subset(s) for s in raw))
        if kind == POINT:
            return cls(kind, int(raw))
        if kind in (ELEMENT, POINTS, KAPPA):
            return cls(kind, bits.subset(raw))
        raise ValueError(f"unknown selection kind {kind!r}")

    def __str__(self):
        if self.kind == SUBFAMILY:
            return bits.format_family(self.value)
        if self.kind == POINT:
            return str(self.value)
        return bits.format_subset(self.value)


def kappa_of(p, inst_kappa):
    if p is P.SS1STAR:
        return "singletons"
    if p is P.SSFINSTAR:
        return "finite_nonempty"
    return inst_kappa


def kappa_space(kappa, n):
    if kappa == "singletons":
        return [1 << i for i in range(n)]
    if kappa == "finite_nonempty":
        return list(range(1, 1 << n))
    if kappa == "finite_with_empty":
        return list(range(1 << n))
    return sorted(kappa)


def _allow_empty(p, fin_allow_empty):
    return p not in NONEMPTY_FIN or fin_allow_empty


def selector_space(p, fam, n, kappa="singletons", fin_allow_empty=False):
    """All selections for one round on family ``fam``, in canonical order."""
    p = P(p)
    kind = SELECTOR_KIND[p]
    members = bits.canonical(fam)
    if kind == ELEMENT:
        return [Selection(ELEMENT, m) for m in members]
    if kind == POINT:
        return [Selection(POINT, x) for x in range(n)]
    start = 0 if _allow_empty(p, fin_allow_empty) else 1
    if kind == SUBFAMILY:
        return [Selection(SUBFAMILY, frozenset(members[j] for j in bits.elements(s)))
                for s in range(start, 1 << len(members))]
    if kind == POINTS:
        return [Selection(POINTS, s) for s in range(start, 1 << n)]
    return [Selection(KAPPA, k) for k in kappa_space(kappa_of(p, kappa), n)]


def _member_item(p, fam, m, n):
    if p in (P.S1, P.SFIN):
        return frozenset((m,))
    if p in (P.S1STAR, P.SFINSTAR):
        return frozenset((kernels.star(m, fam),))
    if p in (P.CS1, P.CSFIN):
        return build_V(fam, m)
    return build_F(fam, m, n)


def _point_item(p, fam, x):
    if p in (P.SCS1, P.SCSFIN):
        return build_V_point(fam, x)
    return build_F_point(fam, x)


def contribution(p, fam, sel: Selection, n):
    """The part of the produced family contributed by one round."""
    p = P(p)
    kind = SELECTOR_KIND[p]
    if sel.kind != kind:
        raise TypeMismatch(f"{p.value} expects a {kind} selection, got {sel.kind}")
    full = bits.full_mask(n)
    if kind == ELEMENT:
        if sel.value not in fam:
            raise TypeMismatch(f"{bits.format_subset(sel.value)} is not a member of the round family")
        return _member_item(p, fam, sel.value, n)
    if kind == SUBFAMILY:
        if not sel.value <= fam:
            raise TypeMismatch("selected subfamily is not contained in the round family")
        out = frozenset()
        for m in sel.value:
            out |= _member_item(p, fam, m, n)
        return out
    if kind == POINT:
        if not 0 <= sel.value < n:
            raise TypeMismatch(f"point {sel.value} outside the ground set")
        return _point_item(p, fam, sel.value)
    if sel.value & ~full:
        raise TypeMismatch("selected point set leaves the ground set")
    if kind == POINTS:
        out = frozenset()
        for x in bits.elements(sel.value):
            out |= _point_item(p, fam, x)
        return out
    return frozenset((kernels.star(sel.value, fam),))


def produced_family(p, rounds, n):
    """Union of the per-round contributions for ``rounds = [(family, Selection), ...]``."""
    out = frozenset()
    for fam, sel in rounds:
        out |= contribution(p, fam, sel, n)
    return out


def selection_allowed(p, fam, sel, n, kappa="singletons", fin_allow_empty=False):
    """True iff ``sel`` lies in the selector space of ``p`` for family ``fam``."""
    p = P(p)
    kind = SELECTOR_KIND[p]
    if sel.kind != kind:
        return False
    full = bits.full_mask(n)
    empty_ok = _allow_empty(p, fin_allow_empty)
    if kind == ELEMENT:
        return sel.value in fam
    if kind == SUBFAMILY:
        return sel.value <= fam and (empty_ok or bool(sel.value))
    if kind == POINT:
        return 0 <= sel.value < n
    if kind == POINTS:
        return not sel.value & ~full and (empty_ok or sel.value != 0)
    return sel.value in set(kappa_space(kappa_of(p, kappa), n))


@lru_cache(maxsize=8192)
def round_options(p, fam, n, kappa, fin_allow_empty):
    """Distinct per-round contributions as ``(code, Selection)`` pairs.

    Each contribution keeps the canonically first selection producing it and
    the pairs are ordered by that selection, so searching them in order finds
    the same first witness as searching the full selector space.
    """
    kind = SELECTOR_KIND[p]
    members = bits.canonical(fam)
    out = {}
    if kind == ELEMENT:
        for m in members:
            out.setdefault(bits.encode(_member_item(p, fam, m, n)), Selection(ELEMENT, m))
    elif kind == POINT:
        for x in range(n):
            out.setdefault(bits.encode(_point_item(p, fam, x)), Selection(POINT, x))
    elif kind == KAPPA:
        for k in kappa_space(kappa_of(p, kappa), n):
            out.setdefault(1 << kernels.star(k, fam), Selection(KAPPA, k))
    else:
        if kind == SUBFAMILY:
            items = [bits.encode(_member_item(p, fam, m, n)) for m in members]
        else:
            items = [bits.encode(_point_item(p, fam, x)) for x in range(n)]
        pairs = kernels.sweep_or(items)
        if not _allow_empty(p, fin_allow_empty):
            pairs = pairs[1:]
            zero = next((j for j, c in enumerate(items) if c == 0), None)
            if zero is not None:
                pairs = sorted([*pairs, (0, 1 << zero)], key=lambda cs: cs[1])
        for code, idx in pairs:
            if kind == SUBFAMILY:
                sel = Selection(SUBFAMILY, frozenset(members[j] for j in bits.elements(idx)))
            else:
                sel = Selection(POINTS, idx)
            out[code] = sel
    return tuple(out.items())


@dataclass(frozen=True)
class Witness:
    principle: Principle
    rounds: Tuple  # ((family_id, family, Selection), ...)
    produced: frozenset

    @property
    def sequence(self):
        return tuple(fid for fid, _, _ in self.rounds)

    def to_json(self):
        return {
            "rounds": [{"round": r, "family_id": fid, "family": bits.family_to_lists(fam),
                        "selection": sel.to_json()}
                       for r, (fid, fam, sel) in enumerate(self.rounds)],
            "produced": bits.family_to_lists(self.produced),
        }


@dataclass(frozen=True)
class EvalResult:
    principle: Principle
    holds: bool
    witness: Optional[Witness] = None
    counterexample: Optional[Tuple[int, ...]] = None
    counterexample_families: Optional[Tuple[frozenset, ...]] = None
    witnesses: Tuple[Witness, ...] = ()
    sequences_checked: int = 0
    empty_family_selection: bool = False

    @property
    def verdict(self):
        return "holds" if self.holds else "fails"

    def to_json(self):
        doc = {"principle": self.principle.value, "verdict": self.verdict,
               "sequences_checked": self.sequences_checked}
        if self.holds:
            doc["witness"] = self.witness.to_json()["rounds"]
            doc["produced"] = self.witness.to_json()["produced"]
        else:
            doc["counterexample"] = [{"round": r, "family_id": fid,
                                      "family": bits.family_to_lists(f)}
                                     for r, (fid, f) in enumerate(
                                         zip(self.counterexample, self.counterexample_families))]
        if self.empty_family_selection:
            doc["empty_family_selection"] = True
        return doc


def _necessary_checks(coll):
    """Monotone necessary conditions for membership in ``coll``.

    Returns ``(down, up)`` lists of collections: a family in ``coll`` belongs to
    every ``down`` entry, each closed under taking subfamilies, and to every
    ``up`` entry, each closed under taking superfamilies.
    """
    if isinstance(coll, Intensional):
        down, up = [], []
        for part in conjuncts(coll.predicate):
            is_down, is_up = monotonicity(part)
            if is_down:
                down.append(Intensional(part))
            if is_up:
                up.append(Intensional(part))
        return down, up
    if isinstance(coll, Hull):
        return ([coll], []) if coll.kind == "minus" else ([], [coll])
    if isinstance(coll, ComplementOf):
        down, up = _necessary_checks(coll.base)
        return [ComplementOf(c) for c in down], [ComplementOf(c) for c in up]
    return [], []


class _Searcher:
    def __init__(self, p, inst, fin_allow_empty, prune, max_nodes):
        self.p = p
        self.inst = inst
        self.allow = inst.fin_allow_empty if fin_allow_empty is None else fin_allow_empty
        self.kappa = kappa_of(p, inst.kappa)
        self.max_nodes = max_nodes
        self.nodes = 0
        self._accepted = {}
        self.viable = None
        self.upward = False
        if prune:
            down, up = _necessary_checks(inst.B)
            if isinstance(inst.B, Extensional):
                targets = inst.B.codes
                self.viable = lambda c: any(not c & ~t for t in targets)
            elif down:
                self.viable = self._checker(down)
            if up:
                self.upward = True
                self.ceiling_ok = self._checker(up)

    def _checker(self, colls):
        cache = {}

        def check(code):
            hit = cache.get(code)
            if hit is None:
                fam = bits.decode(code)
                hit = all(collection_contains(c, fam, self.inst) for c in colls)
                cache[code] = hit
            return hit
        return check

    def accept(self, code):
        hit = self._accepted.get(code)
        if hit is None:
            hit = collection_contains(self.inst.B, bits.decode(code), self.inst)
            self._accepted[code] = hit
        return hit

    def options(self, fam):
        return round_options(self.p, fam, self.inst.n, self.kappa, self.allow)

    def search(self, families):
        """First valid selection sequence for ``families`` or ``None``."""
        opts = [self.options(f) for f in families]
        if any(not o for o in opts):
            return None
        horizon = len(opts)
        failed = [set() for _ in range(horizon)]
        viable = self.viable
        ceiling = None
        if self.upward:
            ceiling = [0] * (horizon + 1)
            for r in range(horizon - 1, -1, -1):
                top = 0
                for code, _ in opts[r]:
                    top |= code
                ceiling[r] = ceiling[r + 1] | top

        def go(r, acc):
            self.nodes += 1
            if self.nodes > self.max_nodes:
                raise BudgetExceeded(f"search exceeded {self.max_nodes} nodes")
            if r == horizon:
                return [] if self.accept(acc) else None
            if acc in failed[r]:
                return None
            if ceiling is not None and not self.ceiling_ok(acc | ceiling[r]):
                failed[r].add(acc)
                return None
            for code, sel in opts[r]:
                nxt = acc | code
                if viable is not None and not viable(nxt):
                    continue
                rest = go(r + 1, nxt)
                if rest is not None:
                    rest.append((code, sel))
                    return rest
            failed[r].add(acc)
            return None

        found = go(0, 0)
        if found is None:
            return None
        found.reverse()
        produced = 0
        for code, _ in found:
            produced |= code
        return [sel for _, sel in found], bits.decode(produced)


def find_witness(p, inst, sequence, *, fin_allow_empty=None, prune=True,
                 max_nodes=DEFAULT_MAX_NODES) -> Optional[Witness]:
    """Witness for one sequence of family ids into ``inst.A``, or ``None`` if none exists."""
    p = P(p)
    fams = [inst.A.families[i] for i in sequence]
    found = _Searcher(p, inst, fin_allow_empty, prune, max_nodes).search(fams)
    if found is None:
        return None
    sels, produced = found
    return Witness(p, tuple(zip(sequence, fams, sels)), produced)


def evaluate(p, inst, *, fin_allow_empty=None, prune=True, all_witnesses=False,
             max_nodes=DEFAULT_MAX_NODES) -> EvalResult:
    """Decide principle ``p`` on ``inst``.

    The produced family is an order-independent union of per-round pieces, so
    only sorted sequences (multisets of A) are searched; the first failing
    sorted sequence is also the lexicographically first failing sequence.
    """
    p = P(p)
    searcher = _Searcher(p, inst, fin_allow_empty, prune, max_nodes)
    fams = inst.A.families
    witnesses = []
    checked = 0
    for seq in combinations_with_replacement(range(len(fams)), inst.horizon):
        checked += 1
        round_fams = [fams[i] for i in seq]
        found = searcher.search(round_fams)
        if found is None:
            empty = any(not f and not searcher.options(f) for f in round_fams)
            return EvalResult(p, False, counterexample=seq,
                              counterexample_families=tuple(round_fams),
                              sequences_checked=checked, empty_family_selection=empty)
        if all_witnesses or not witnesses:
            sels, produced = found
            witnesses.append(Witness(p, tuple(zip(seq, round_fams, sels)), produced))
    return EvalResult(p, True, witness=witnesses[0],
                      witnesses=tuple(witnesses) if all_witnesses else (witnesses[0],),
                      sequences_checked=checked)


def replay(w: Witness, inst, *, fin_allow_empty=None) -> bool:
    """Re-derive ``w.produced`` from the selections and test it against ``inst.B``."""
    allow = inst.fin_allow_empty if fin_allow_empty is None else fin_allow_empty
    members = set(inst.A.families)
    for _, fam, sel in w.rounds:
        if fam not in members:
            return False
        if not selection_allowed(w.principle, fam, sel, inst.n, inst.kappa, allow):
            return False
    produced = produced_family(w.principle, [(fam, sel) for _, fam, sel in w.rounds], inst.n)
    if produced != w.produced:
        return False
    return collection_contains(inst.B, produced, inst)
