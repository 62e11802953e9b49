"""Collections of families, the Instance type, and the JSON instance format."""

import json
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, Tuple, Union

from starsel import bits
from starsel.bits import Family
from starsel.errors import (BudgetExceeded, FormatError, PredicateSyntaxError,
                            UnknownReference)
from starsel.predicate import (ComplementView, Predicate, contains_literals,
                               eval_predicate, format_predicate, parse_predicate,
                               references)

MAX_FAMILY_SIZE = 16
MAX_HORIZON = 4
KAPPA_KINDS = ("singletons", "finite_nonempty", "finite_with_empty")


@dataclass(frozen=True)
class Extensional:
    """An explicit collection. Use :meth:`of` to build a normalized one."""

    families: Tuple[Family, ...]

    @classmethod
    def of(cls, families):
        uniq = {frozenset(f) for f in families}
        return cls(tuple(sorted(uniq, key=bits.canonical)))

    @cached_property
    def _members(self):
        return frozenset(self.families)

    @cached_property
    def codes(self):
        return tuple(bits.encode(f) for f in self.families)

    def __len__(self):
        return len(self.families)


@dataclass(frozen=True)
class Intensional:
    predicate: Predicate


@dataclass(frozen=True)
class Hull:
    """The refinement hull of ``base``: ``kind`` is ``"minus"`` or ``"plus"``."""

    kind: str
    base: "Collection"

    def __post_init__(self):
        if self.kind not in ("minus", "plus"):
            raise ValueError(f"hull kind must be 'minus' or 'plus', got {self.kind!r}")


@dataclass(frozen=True)
class ComplementOf:
    base: "Collection"


Collection = Union[Extensional, Intensional, Hull, ComplementOf]


def collection_contains(coll: Collection, fam, ctx) -> bool:
    if isinstance(coll, Extensional):
        return frozenset(fam) in coll._members
    if isinstance(coll, Intensional):
        return eval_predicate(coll.predicate, fam, ctx)
    if isinstance(coll, Hull):
        from starsel.staralg import hull_membership

        return hull_membership(coll.kind, coll.base, fam, ctx)
    if isinstance(coll, ComplementOf):
        full = bits.full_mask(ctx.n)
        return collection_contains(coll.base, frozenset(full ^ m for m in fam), ctx)
    raise TypeError(f"not a collection: {coll!r}")


@dataclass(frozen=True)
class Instance:
    """A finite instance: ground set ``{0..n-1}``, collections A and B, kappa, horizon."""

    n: int
    A: Extensional
    B: Collection
    horizon: int = 1
    kappa: Union[str, Tuple[int, ...]] = "singletons"
    families: Dict[str, Family] = field(default_factory=dict, hash=False)
    collections: Dict[str, Collection] = field(default_factory=dict, hash=False)
    budget_override: bool = False
    fin_allow_empty: bool = False

    @property
    def full(self):
        return bits.full_mask(self.n)

    def with_(self, **changes):
        return replace(self, **changes)

    def validate(self):
        """Check every Instance invariant; raise FormatError / BudgetExceeded / UnknownReference."""
        if not isinstance(self.n, int) or self.n < 1:
            raise FormatError(f"ground_set must be a positive integer, got {self.n!r}")
        if self.n > bits.MAX_N and not self.budget_override:
            raise BudgetExceeded(f"ground_set {self.n} exceeds {bits.MAX_N}")
        if not isinstance(self.horizon, int) or self.horizon < 1:
            raise FormatError(f"horizon must be a positive integer, got {self.horizon!r}")
        if self.horizon > MAX_HORIZON and not self.budget_override:
            raise BudgetExceeded(f"horizon {self.horizon} exceeds {MAX_HORIZON}")
        if not isinstance(self.A, Extensional):
            raise FormatError("collection A must be extensional")
        if not self.A.families:
            raise FormatError("collection A must be nonempty")
        full = self.full
        for fam in self.A.families:
            if len(fam) > MAX_FAMILY_SIZE and not self.budget_override:
                raise BudgetExceeded(f"family of {len(fam)} members exceeds {MAX_FAMILY_SIZE}")
            _check_range(fam, full)
        for fam in self.families.values():
            _check_range(fam, full)
        if isinstance(self.kappa, str):
            if self.kappa not in KAPPA_KINDS:
                raise FormatError(f"unknown kappa {self.kappa!r}")
        else:
            _check_range(self.kappa, full)
        for coll in (self.B, *self.collections.values()):
            self._check_collection(coll)
        return self

    def _check_collection(self, coll):
        if isinstance(coll, Extensional):
            for fam in coll.families:
                _check_range(fam, self.full)
        elif isinstance(coll, Intensional):
            for kind, name in references(coll.predicate):
                table = self.collections if kind == "collection" else self.families
                if name not in table:
                    raise UnknownReference(name)
            _check_range(contains_literals(coll.predicate), self.full)
        elif isinstance(coll, (Hull, ComplementOf)):
            self._check_collection(coll.base)
        else:
            raise FormatError(f"not a collection: {coll!r}")


def _check_range(masks, full):
    for m in masks:
        if m & ~full:
            raise FormatError(f"element out of range in {bits.format_subset(m)}")


# -- JSON decoding -----------------------------------------------------------

def _subset_from_json(obj):
    if not isinstance(obj, list) or not all(isinstance(e, int) and not isinstance(e, bool)
                                            and e >= 0 for e in obj):
        raise FormatError(f"a subset must be a list of non-negative integers, got {obj!r}")
    return bits.subset(obj)


def _family_from_json(obj):
    if not isinstance(obj, list):
        raise FormatError(f"a family must be a list of subsets, got {obj!r}")
    return frozenset(_subset_from_json(s) for s in obj)


def _collection_from_json(obj, families, collections):
    if not isinstance(obj, dict) or len(obj) not in (1, 2):
        raise FormatError(f"malformed collection: {obj!r}")
    if "predicate" in obj:
        if not isinstance(obj["predicate"], str):
            raise FormatError("predicate must be a string")
        try:
            return Intensional(parse_predicate(obj["predicate"], families, collections))
        except PredicateSyntaxError as exc:
            raise FormatError(f"bad predicate: {exc}") from exc
    if "extensional" in obj:
        if not isinstance(obj["extensional"], list):
            raise FormatError("extensional must be a list of families")
        return Extensional.of(_family_from_json(f) for f in obj["extensional"])
    if "hull" in obj and "of" in obj:
        if obj["hull"] not in ("minus", "plus"):
            raise FormatError(f"hull must be 'minus' or 'plus', got {obj['hull']!r}")
        return Hull(obj["hull"], _collection_from_json(obj["of"], families, collections))
    if "complement_of" in obj:
        return ComplementOf(_collection_from_json(obj["complement_of"], families, collections))
    raise FormatError(f"malformed collection: {obj!r}")


def instance_from_dict(doc, override=False) -> Instance:
    if not isinstance(doc, dict):
        raise FormatError("instance document must be a JSON object")
    known = {"ground_set", "families", "collection_A", "collection_B", "kappa", "horizon",
             "collections", "budget_override", "fin_allow_empty"}
    extra = set(doc) - known
    if extra:
        raise FormatError(f"unknown keys: {sorted(extra)}")
    for key in ("ground_set", "collection_A", "collection_B"):
        if key not in doc:
            raise FormatError(f"missing key {key!r}")
    n = doc["ground_set"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise FormatError(f"ground_set must be a positive integer, got {n!r}")

    raw_fams = doc.get("families", {})
    if not isinstance(raw_fams, dict):
        raise FormatError("families must be an object")
    families = {str(k): _family_from_json(v) for k, v in raw_fams.items()}

    raw_colls = doc.get("collections", {})
    if not isinstance(raw_colls, dict):
        raise FormatError("collections must be an object")
    coll_names = set(raw_colls)
    collections = {k: _collection_from_json(v, set(families), coll_names)
                   for k, v in raw_colls.items()}

    raw_a = doc["collection_A"]
    if not isinstance(raw_a, list):
        raise FormatError("collection_A must be a list")
    a_fams = []
    for entry in raw_a:
        if isinstance(entry, str):
            if entry not in families:
                raise UnknownReference(entry)
            a_fams.append(families[entry])
        else:
            a_fams.append(_family_from_json(entry))

    B = _collection_from_json(doc["collection_B"], set(families), coll_names)

    kappa = doc.get("kappa", "singletons")
    if isinstance(kappa, dict):
        if set(kappa) != {"extensional"} or not isinstance(kappa["extensional"], list):
            raise FormatError(f"malformed kappa: {kappa!r}")
        kappa = tuple(sorted({_subset_from_json(s) for s in kappa["extensional"]}))
    elif not isinstance(kappa, str):
        raise FormatError(f"malformed kappa: {kappa!r}")

    horizon = doc.get("horizon", 1)
    if not isinstance(horizon, int) or isinstance(horizon, bool):
        raise FormatError(f"horizon must be an integer, got {horizon!r}")

    inst = Instance(
        n=n, A=Extensional.of(a_fams), B=B, horizon=horizon, kappa=kappa,
        families=families, collections=collections,
        budget_override=bool(doc.get("budget_override", False)) or override,
        fin_allow_empty=bool(doc.get("fin_allow_empty", False)),
    )
    return inst.validate()


def load_instance(data, override=False) -> Instance:
    """Decode and validate an instance document given as bytes, str or a parsed dict."""
    if isinstance(data, (bytes, bytearray)):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError(f"instance is not UTF-8: {exc}") from exc
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}") from exc
    return instance_from_dict(data, override=override)


# -- JSON encoding -----------------------------------------------------------

def collection_to_json(coll):
    if isinstance(coll, Extensional):
        return {"extensional": [bits.family_to_lists(f) for f in coll.families]}
    if isinstance(coll, Intensional):
        return {"predicate": format_predicate(coll.predicate)}
    if isinstance(coll, Hull):
        return {"hull": coll.kind, "of": collection_to_json(coll.base)}
    if isinstance(coll, ComplementOf):
        return {"complement_of": collection_to_json(coll.base)}
    raise TypeError(f"not a collection: {coll!r}")


def instance_to_dict(inst: Instance) -> dict:
    """Canonical document form; ``load_instance(instance_to_dict(i)) == i``."""
    doc = {
        "ground_set": inst.n,
        "families": {k: bits.family_to_lists(v) for k, v in sorted(inst.families.items())},
        "collection_A": [bits.family_to_lists(f) for f in inst.A.families],
        "collection_B": collection_to_json(inst.B),
        "kappa": (inst.kappa if isinstance(inst.kappa, str)
                  else {"extensional": [bits.elements(m) for m in inst.kappa]}),
        "horizon": inst.horizon,
    }
    if inst.collections:
        doc["collections"] = {k: collection_to_json(v) for k, v in sorted(inst.collections.items())}
    if inst.budget_override:
        doc["budget_override"] = True
    if inst.fin_allow_empty:
        doc["fin_allow_empty"] = True
    return doc


def dumps(obj) -> str:
    """Byte-stable JSON rendering used for every report and document."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def instance_to_json(inst: Instance) -> str:
    return dumps(instance_to_dict(inst))


def complement_view(pred: Predicate) -> Predicate:
    """Wrap ``pred`` so it is evaluated on complemented families; unwraps a double view."""
    if isinstance(pred, ComplementView):
        return pred.child
    return ComplementView(pred)
