"""Executable theorems: instance dualization, witness mappers and a checking harness.

Every theorem is data: a list of directions, each naming a left and a right
principle, the instance view each side is evaluated on (the instance itself,
its dual, or a refinement hull of its B), and a per-round witness mapper that
carries a left witness to a right witness. One loop checks them all.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

from starsel import bits
from starsel.errors import BudgetExceeded, InvalidInputWitness, MappedWitnessRejected
from starsel.predicate import Cover
from starsel.principles import (ELEMENT, KAPPA, POINT, POINTS, SUBFAMILY, Principle,
                                Selection, Witness, evaluate, produced_family, replay)
from starsel.setcore import Extensional, Hull, Intensional, instance_to_dict
from starsel.staralg import complement_collection, complement_family

P = Principle


def dualize(inst):
    """Complement every family of A and pass B to its complement collection."""
    return inst.with_(
        A=Extensional.of(complement_family(f, inst.n) for f in inst.A.families),
        B=complement_collection(inst.B, inst.n),
    )


def specialize_to_covers(inst):
    """B := Cover and keep only the covers in A; ``None`` if no cover remains."""
    covers = [f for f in inst.A.families if bits.is_cover(f, inst.n)]
    if not covers:
        return None
    return inst.with_(A=Extensional.of(covers), B=Intensional(Cover()))


# -- per-round witness mappers: (family, selection, n) -> (family', selection') --

def _same(fam, sel, n):
    return fam, sel


def _complement(fam, sel, n):
    full = bits.full_mask(n)
    fam2 = complement_family(fam, n)
    if sel.kind == ELEMENT:
        sel = Selection(ELEMENT, full ^ sel.value)
    elif sel.kind == SUBFAMILY:
        sel = Selection(SUBFAMILY, frozenset(full ^ m for m in sel.value))
    return fam2, sel


def _lowest(mask):
    return (mask & -mask).bit_length() - 1


def _first_member_containing(fam, x):
    for m in bits.canonical(fam):
        if m >> x & 1:
            return m
    return None


def _element_to_subfamily(fam, sel, n):
    return fam, Selection(SUBFAMILY, frozenset((sel.value,)))


def _nonempty_subfamily(fam, sel, n):
    if sel.value:
        return fam, sel
    return fam, Selection(SUBFAMILY, frozenset(bits.canonical(fam)[:1]))


def _element_to_singleton(fam, sel, n):
    x = _lowest(sel.value) if sel.value else 0
    return fam, Selection(KAPPA, 1 << x)


def _subfamily_to_points(fam, sel, n):
    points = 0
    for m in sel.value:
        if m:
            points |= 1 << _lowest(m)
    return fam, Selection(KAPPA, points or 1)


def _singleton_to_element(fam, sel, n):
    m = _first_member_containing(fam, _lowest(sel.value))
    if m is None:
        m = bits.canonical(fam)[0]
    return fam, Selection(ELEMENT, m)


def _points_to_subfamily(fam, sel, n):
    chosen = {_first_member_containing(fam, x) for x in bits.elements(sel.value)}
    chosen.discard(None)
    return fam, Selection(SUBFAMILY, frozenset(chosen))


def _kappa_to_point(fam, sel, n):
    return fam, Selection(POINT, _lowest(sel.value))


def _kappa_to_points(fam, sel, n):
    return fam, Selection(POINTS, sel.value)


def _point_to_kappa(fam, sel, n):
    return fam, Selection(KAPPA, 1 << sel.value)


def _points_to_kappa(fam, sel, n):
    return fam, Selection(KAPPA, sel.value)


@dataclass(frozen=True)
class Direction:
    left: Principle
    right: Principle
    mapper: Callable
    left_view: str = "base"
    right_view: str = "base"
    right_allow_empty: Optional[bool] = None

    @property
    def name(self):
        def side(p, view):
            return p.value if view == "base" else f"{p.value}[{view}]"
        return f"{side(self.left, self.left_view)} => {side(self.right, self.right_view)}"


@dataclass(frozen=True)
class Theorem:
    id: str
    statement: str
    directions: Tuple[Direction, ...]
    covers_only: bool = False


def _imp(left, right, mapper, **kw):
    return Direction(P(left), P(right), mapper, **kw)


def _iff_dual(left, right, mapper):
    return (_imp(left, right, mapper, right_view="dual"),
            _imp(right, left, mapper, left_view="dual"))


_DIAGRAM = (
    _imp("s1", "sfin", _element_to_subfamily),
    _imp("s1", "ss1star", _element_to_singleton),
    _imp("sfin", "ssfinstar", _subfamily_to_points),
    _imp("ss1star", "ssfinstar", _same),
    _imp("ss1star", "s1star", _singleton_to_element),
    _imp("ssfinstar", "sfinstar", _points_to_subfamily),
    _imp("s1star", "sfinstar", _element_to_subfamily),
)

_P2_1 = _imp("cs1", "s1star", _same)
_P2_2 = _imp("s1star", "cs1", _same)
_P2_6 = _imp("csfin", "sfinstar", _same)
_P2_7 = _imp("sfinstar", "csfin", _nonempty_subfamily)

THEOREMS = {t.id: t for t in (
    Theorem("p2_1", "CS1 => S*1 for covers", (_P2_1,), covers_only=True),
    Theorem("p2_2", "S*1 => CS1 for covers", (_P2_2,), covers_only=True),
    Theorem("t2_4", "CS1 <=> S*1 for covers", (_P2_1, _P2_2), covers_only=True),
    Theorem("p2_6", "CSfin => S*fin for covers", (_P2_6,), covers_only=True),
    Theorem("p2_7", "S*fin => CSfin for covers", (_P2_7,), covers_only=True),
    Theorem("t2_9", "CSfin <=> S*fin for covers", (_P2_6, _P2_7), covers_only=True),
    Theorem("t3_2", "S*1(A,B) => CS1(A,R-B)",
            (_imp("s1star", "cs1", _same, right_view="hull_minus"),)),
    Theorem("t3_3", "CS1(A,B) => S*1(A,R+B)",
            (_imp("cs1", "s1star", _same, right_view="hull_plus"),)),
    Theorem("t3_4", "S*fin(A,B) => CSfin(A,R-B)",
            (_imp("sfinstar", "csfin", _same, right_view="hull_minus",
                  right_allow_empty=True),)),
    Theorem("t3_5", "CSfin(A,B) => S*fin(A,R+B)",
            (_imp("csfin", "sfinstar", _same, right_view="hull_plus"),)),
    Theorem("t3_6a", "SS*1(A,B) => SCS1(A,R-B)",
            (_imp("ss1star", "scs1", _kappa_to_point, right_view="hull_minus"),)),
    Theorem("t3_6b", "SCS1(A,B) => SS*1(A,R+B)",
            (_imp("scs1", "ss1star", _point_to_kappa, right_view="hull_plus"),)),
    Theorem("t3_6c", "SS*fin(A,B) => SCSfin(A,R-B)",
            (_imp("ssfinstar", "scsfin", _kappa_to_points, right_view="hull_minus"),)),
    Theorem("t3_6d", "SCSfin(A,B) => SS*fin(A,R+B)",
            (_imp("scsfin", "ssfinstar", _points_to_kappa, right_view="hull_plus"),)),
    Theorem("t3_7", "CS1(A,B) <=> DS1(Ac,Bc)", _iff_dual("cs1", "ds1", _complement)),
    Theorem("t3_8", "SCS1(A,B) <=> SDS1(Ac,Bc)", _iff_dual("scs1", "sds1", _complement)),
    Theorem("t3_9", "CSfin(A,B) <=> DSfin(Ac,Bc)", _iff_dual("csfin", "dsfin", _complement)),
    Theorem("t3_10", "SCSfin(A,B) <=> SDSfin(Ac,Bc)",
            _iff_dual("scsfin", "sdsfin", _complement)),
    Theorem("diag", "implication diagram for covers", _DIAGRAM, covers_only=True),
)}

HULL_THEOREMS = ("t3_2", "t3_3", "t3_4", "t3_5", "t3_6a", "t3_6b", "t3_6c", "t3_6d")
DUALITY_THEOREMS = ("t3_7", "t3_8", "t3_9", "t3_10")
COVER_THEOREMS = ("p2_1", "p2_2", "t2_4", "p2_6", "p2_7", "t2_9", "diag")


def get_theorem(tid):
    if isinstance(tid, Theorem):
        return tid
    try:
        return THEOREMS[tid.lower()]
    except KeyError:
        raise ValueError(f"unknown theorem {tid!r}; valid ids: {', '.join(THEOREMS)}") from None


def prepare(theorem, inst):
    """The instance a theorem is checked on, or ``None`` if its setting is unmet."""
    return specialize_to_covers(inst) if theorem.covers_only else inst


def view(inst, name):
    if name == "base":
        return inst
    if name == "dual":
        return dualize(inst)
    if name == "hull_minus":
        return inst.with_(B=Hull("minus", inst.B))
    if name == "hull_plus":
        return inst.with_(B=Hull("plus", inst.B))
    raise ValueError(name)


def map_witness(t, inst, w: Witness, direction: int = 0) -> Witness:
    """Carry a left-principle witness to a right-principle witness.

    ``w`` must replay on the direction's left view of ``inst``; the result is
    replayed on the right view and MappedWitnessRejected is raised if it fails.
    """
    theorem = get_theorem(t)
    d = theorem.directions[direction]
    base = prepare(theorem, inst) or inst
    left, right = view(base, d.left_view), view(base, d.right_view)
    if w.principle is not d.left or not replay(w, left):
        raise InvalidInputWitness(f"witness does not replay for {d.left.value}")
    index = {f: i for i, f in enumerate(right.A.families)}
    rounds = []
    try:
        for _, fam, sel in w.rounds:
            fam2, sel2 = d.mapper(fam, sel, base.n)
            if fam2 not in index:
                raise MappedWitnessRejected(f"{theorem.id}: mapped family "
                                            f"{bits.format_family(fam2)} is not in the target A")
            rounds.append((index[fam2], fam2, sel2))
        produced = produced_family(d.right, [(f, s) for _, f, s in rounds], base.n)
    except MappedWitnessRejected:
        raise
    except Exception as exc:
        raise MappedWitnessRejected(f"{theorem.id}: {exc!r}") from exc
    out = Witness(d.right, tuple(rounds), produced)
    if not replay(out, right, fin_allow_empty=d.right_allow_empty):
        raise MappedWitnessRejected(f"{theorem.id} [{d.name}]: mapped witness rejected")
    return out


@dataclass
class TheoremReport:
    theorem: str
    checked: int = 0
    violations: list = field(default_factory=list)
    skipped_budget: int = 0
    skipped_precondition: int = 0
    witness_roundtrips: int = 0

    @property
    def passed(self):
        return not self.violations

    def merge(self, other):
        self.checked += other.checked
        self.violations.extend(other.violations)
        self.skipped_budget += other.skipped_budget
        self.skipped_precondition += other.skipped_precondition
        self.witness_roundtrips += other.witness_roundtrips
        return self

    def to_json(self):
        return {"theorem": self.theorem, "checked": self.checked,
                "violations": self.violations, "skipped_budget": self.skipped_budget,
                "skipped_precondition": self.skipped_precondition,
                "witness_roundtrips": self.witness_roundtrips}


def check_instance(t, inst) -> TheoremReport:
    theorem = get_theorem(t)
    report = TheoremReport(theorem.id)
    base = prepare(theorem, inst)
    if base is None:
        report.skipped_precondition = 1
        return report
    try:
        for i, d in enumerate(theorem.directions):
            left, right = view(base, d.left_view), view(base, d.right_view)
            lres = evaluate(d.left, left, all_witnesses=True)
            if not lres.holds:
                continue
            rres = evaluate(d.right, right, fin_allow_empty=d.right_allow_empty)
            if not rres.holds:
                report.violations.append({
                    "direction": d.name, "kind": "implication",
                    "instance": instance_to_dict(base),
                    "right_counterexample": rres.to_json()["counterexample"],
                })
            for w in lres.witnesses:
                try:
                    map_witness(theorem, base, w, i)
                except MappedWitnessRejected as exc:
                    report.violations.append({
                        "direction": d.name, "kind": "mapped_witness_rejected",
                        "instance": instance_to_dict(base), "detail": str(exc),
                    })
                else:
                    report.witness_roundtrips += 1
    except BudgetExceeded:
        return TheoremReport(theorem.id, skipped_budget=1)
    report.checked = 1
    return report


def _check_star(args):
    return check_instance(*args)


def default_workers():
    env = os.environ.get("STARSEL_MAX_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def check_theorem(t, corpus, workers: int = 1) -> TheoremReport:
    """Check theorem ``t`` on every instance of ``corpus``.

    Reports merge in corpus order, so the result does not depend on how
    instances were scheduled across ``workers`` processes.
    """
    theorem = get_theorem(t)
    report = TheoremReport(theorem.id)
    jobs = ((theorem.id, inst) for inst in corpus)
    if workers <= 1:
        for job in jobs:
            report.merge(_check_star(job))
        return report
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_check_star, jobs, chunksize=16):
            report.merge(part)
    return report
