"""Instance corpora and the separation finder.

``enumerate_instances`` sweeps every tiny instance in a canonical order;
``random_instances`` draws a seeded stream; ``find_separation`` walks both
looking for an instance where one principle holds and another fails.
"""

import json
import random
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Optional, Union

from starsel import bits
from starsel.errors import BudgetExceeded
from starsel.predicate import Cover, parse_predicate
from starsel.principles import (Principle, evaluate, produced_family, selector_space)
from starsel.setcore import (Extensional, Instance, Intensional, dumps, instance_to_dict,
                             load_instance)

EXHAUSTIVE_MAX_N = 3

# Predicate pool sampled for intensional B.
PREDICATE_POOL = (
    "cover", "true", "false", "nonempty_members", "maxsize(1)", "maxsize(2)", "minsize(1)",
    "minsize(2)", "card_le(1)", "card_le(2)", "card_le(3)", "cover and maxsize(2)",
    "cover and card_le(2)", "cover or card_le(1)", "not cover", "nonempty_members and cover",
    "complement_view(cover)", "complement_view(maxsize(1))", "contains({0})",
    "cover and not contains({0})", "not (maxsize(1) or card_le(1))",
)

A_MODES = ("any", "nonempty_members", "covers")


@dataclass(frozen=True)
class Budget:
    max_n: int = 16
    max_family_size: int = 16
    max_A_size: int = 4
    max_horizon: int = 4
    max_instances: Optional[int] = None
    seed: Optional[int] = None
    max_B_size: int = 1
    min_n: int = 1
    min_horizon: int = 1

    def __post_init__(self):
        for name in ("max_n", "max_family_size", "max_A_size", "max_horizon", "min_n",
                     "min_horizon"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.max_B_size < 0:
            raise ValueError("max_B_size must be non-negative")


def initial_segments_instance(n: int, b_spec=None, horizon: int = 1) -> Instance:
    """A = [U] with U the n initial segments {0..k}; U is exported as family ``"U"``."""
    if not 1 <= n <= bits.MAX_N:
        raise ValueError(f"n must be in 1..{bits.MAX_N}, got {n}")
    segments = frozenset(bits.full_mask(k + 1) for k in range(n))
    if b_spec is None:
        b_spec = Intensional(parse_predicate("nonempty_members"))
    return Instance(n=n, A=Extensional.of([segments]), B=b_spec, horizon=horizon,
                    families={"U": segments}).validate()


def _family_pool(n, max_family_size, a_mode):
    pool = []
    for fam in bits.all_families(n):
        if len(fam) > max_family_size:
            continue
        if a_mode == "nonempty_members" and (not fam or 0 in fam):
            continue
        if a_mode == "covers" and not bits.is_cover(fam, n):
            continue
        pool.append(fam)
    return pool


def enumerate_instances(b: Budget, *, a_mode="any", b_mode="extensional"):
    """Every instance within budget, each exactly once, in canonical order.

    Order: n, then |A|, then A, then B (by size, then lexicographically), then
    horizon. ``b_mode="cover"`` fixes B to the Cover predicate instead of
    sweeping extensional collections.
    """
    if b.max_n > EXHAUSTIVE_MAX_N:
        raise BudgetExceeded(f"exhaustive enumeration needs max_n <= {EXHAUSTIVE_MAX_N}")
    if a_mode not in A_MODES:
        raise ValueError(f"a_mode must be one of {A_MODES}")
    emitted = 0
    for n in range(b.min_n, b.max_n + 1):
        a_pool = _family_pool(n, b.max_family_size, a_mode)
        every = list(bits.all_families(n))
        if b_mode == "cover":
            b_choices = [Intensional(Cover())]
        elif b_mode == "extensional":
            b_choices = (Extensional(tuple(sorted(c, key=bits.canonical)))
                         for size in range(b.max_B_size + 1)
                         for c in combinations(every, size))
            b_choices = list(b_choices)
        else:
            raise ValueError(f"unknown b_mode {b_mode!r}")
        for a_size in range(1, b.max_A_size + 1):
            for a in combinations(a_pool, a_size):
                A = Extensional.of(a)
                for B in b_choices:
                    for h in range(b.min_horizon, b.max_horizon + 1):
                        yield Instance(n=n, A=A, B=B, horizon=h)
                        emitted += 1
                        if b.max_instances is not None and emitted >= b.max_instances:
                            return


def _random_subset(rng, n, nonempty=False):
    lo = 1 if nonempty else 0
    return rng.randint(lo, bits.full_mask(n))


def _random_family(rng, n, max_size, a_mode="any"):
    nonempty = a_mode == "nonempty_members"
    universe = (1 << n) - (1 if nonempty else 0)
    cap = min(max_size, universe)
    if a_mode == "covers":
        cap = max(1, cap - 1)
    size = rng.randint(1 if a_mode != "any" else 0, cap)
    start = 1 if nonempty else 0
    fam = set(rng.sample(range(start, 1 << n), size))
    if a_mode == "covers":
        missing = bits.full_mask(n) & ~bits.family_union(fam)
        if missing:
            fam.add(missing | _random_subset(rng, n))
    return frozenset(fam)


_PLANT_PRINCIPLES = tuple(p for p in Principle if p is not Principle.SSSTARK)


def _planted_family(rng, A, n, horizon):
    """The produced family of a random selection sequence for a random principle."""
    p = rng.choice(_PLANT_PRINCIPLES)
    rounds = []
    for _ in range(horizon):
        fam = rng.choice(A.families)
        space = selector_space(p, fam, n)
        if not space:
            return None
        rounds.append((fam, rng.choice(space)))
    return produced_family(p, rounds, n)


def random_instances(b: Budget, *, a_mode="any", b_mode="extensional", plant=0.5):
    """Seeded stream of instances.

    Procedure per draw: n uniform in [min_n, max_n]; |A| uniform in
    [1, max_A_size]; each A family gets a size uniform up to
    min(max_family_size, 2^n) and members drawn uniformly without replacement
    (``a_mode="covers"`` then adds one member covering any missed points);
    horizon uniform in [min_horizon, max_horizon]. An extensional B has size
    uniform in [0, max_B_size]; each member is, with probability ``plant``, the
    produced family of a random selection sequence of a random principle, and
    otherwise a uniform random family. ``b_mode`` picks "extensional",
    "predicate" (uniform over PREDICATE_POOL), "cover", or "mixed" (a coin flip
    between the first two).
    """
    if b.seed is None:
        raise ValueError("random_instances needs a seed")
    rng = random.Random(b.seed)
    emitted = 0
    while b.max_instances is None or emitted < b.max_instances:
        n = rng.randint(b.min_n, b.max_n)
        a_size = rng.randint(1, b.max_A_size)
        A = Extensional.of(_random_family(rng, n, b.max_family_size, a_mode)
                           for _ in range(a_size))
        horizon = rng.randint(b.min_horizon, b.max_horizon)
        mode = b_mode
        if mode == "mixed":
            mode = rng.choice(("extensional", "predicate"))
        if mode == "cover":
            B = Intensional(Cover())
        elif mode == "predicate":
            B = Intensional(parse_predicate(rng.choice(PREDICATE_POOL)))
        elif mode == "extensional":
            members = []
            for _ in range(rng.randint(0, b.max_B_size)):
                fam = _planted_family(rng, A, n, horizon) if rng.random() < plant else None
                if fam is None:
                    fam = _random_family(rng, n, b.max_family_size)
                members.append(fam)
            B = Extensional.of(members)
        else:
            raise ValueError(f"unknown b_mode {b_mode!r}")
        inst = Instance(n=n, A=A, B=B, horizon=horizon, budget_override=True)
        # Literal predicates mention point 0 only, valid for every n >= 1.
        yield inst.with_(budget_override=False).validate()
        emitted += 1


def random_instance(b: Budget, **kw) -> Instance:
    return next(random_instances(b, **kw))


@dataclass(frozen=True)
class SeparationResult:
    left: Principle
    right: Principle
    instance: Instance
    left_result: object
    right_result: object
    source: str = "exhaustive"
    index: int = 0

    def verify(self):
        lres, rres = evaluate(self.left, self.instance), evaluate(self.right, self.instance)
        return lres.holds and not rres.holds

    def verdict_doc(self):
        return {"left": self.left.value, "right": self.right.value,
                "left_verdict": self.left_result.verdict,
                "right_verdict": self.right_result.verdict,
                "left_witness": self.left_result.to_json()["witness"],
                "right_counterexample": self.right_result.to_json()["counterexample"],
                "source": self.source, "index": self.index}

    def to_json(self):
        return {"found": True, "instance": instance_to_dict(self.instance),
                **self.verdict_doc()}


@dataclass(frozen=True)
class NotFoundWithinBudget:
    left: Principle
    right: Principle
    checked: int

    def to_json(self):
        return {"found": False, "left": self.left.value, "right": self.right.value,
                "checked": self.checked}


def find_separation(left, right, b: Budget, *, a_mode="nonempty_members",
                    random_trials=0, b_mode="extensional"
                    ) -> Union[SeparationResult, NotFoundWithinBudget]:
    """First instance (exhaustive sweep, then seeded random stream) separating ``left`` from ``right``."""
    left, right = Principle(left), Principle(right)
    streams = [("exhaustive", enumerate_instances(b, a_mode=a_mode, b_mode=b_mode))]
    if random_trials:
        rb = Budget(max_n=b.max_n, max_family_size=b.max_family_size, max_A_size=b.max_A_size,
                    max_horizon=b.max_horizon, max_instances=random_trials,
                    seed=0 if b.seed is None else b.seed, max_B_size=max(1, b.max_B_size),
                    min_n=b.min_n, min_horizon=b.min_horizon)
        streams.append(("random", random_instances(rb, a_mode=a_mode, b_mode=b_mode)))
    checked = 0
    for source, stream in streams:
        for index, inst in enumerate(stream):
            checked += 1
            lres = evaluate(left, inst)
            if not lres.holds:
                continue
            rres = evaluate(right, inst)
            if rres.holds:
                continue
            result = SeparationResult(left, right, inst, lres, rres, source, index)
            if not result.verify():
                raise AssertionError("separation did not re-verify")
            return result
    return NotFoundWithinBudget(left, right, checked)


def save_separation(result: SeparationResult, path) -> Path:
    """Write the instance document to ``path`` and the verdict sidecar next to it."""
    path = Path(path)
    path.write_text(dumps(instance_to_dict(result.instance)), encoding="utf-8")
    sidecar = path.with_name(path.stem + ".verdict.json")
    sidecar.write_text(dumps(result.verdict_doc()), encoding="utf-8")
    return sidecar


def load_separation(path) -> SeparationResult:
    """Reload a persisted separation and re-evaluate both sides."""
    path = Path(path)
    inst = load_instance(path.read_bytes())
    sidecar = json.loads(path.with_name(path.stem + ".verdict.json").read_text(encoding="utf-8"))
    left, right = Principle(sidecar["left"]), Principle(sidecar["right"])
    return SeparationResult(left, right, inst, evaluate(left, inst), evaluate(right, inst),
                            sidecar.get("source", "exhaustive"), sidecar.get("index", 0))
