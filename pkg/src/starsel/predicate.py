"""Collection-predicate DSL: AST, recursive-descent parser, printer, evaluator.

Grammar::

    expr   := term { "or" term }
    term   := factor { "and" factor }
    factor := "not" factor | "(" expr ")" | atom
    atom   := "cover" | "true" | "false" | "nonempty_members"
            | "maxsize(" INT ")" | "minsize(" INT ")" | "card_le(" INT ")"
            | "subset_of(" NAME ")" | "refines(" NAME ")" | "refined_by(" NAME ")"
            | "member_of(" NAME ")" | "contains(" SETLIT ")"
            | "complement_view(" expr ")"
    SETLIT := "{" [ INT { "," INT } ] "}"

``and``/``or`` are left-associative binary nodes.
"""

import re
from dataclasses import dataclass
from typing import Optional, Set, Union

from starsel import bits, kernels
from starsel.errors import ArityError, PredicateSyntaxError, UnknownReference


@dataclass(frozen=True)
class Cover:
    pass


@dataclass(frozen=True)
class TrueAtom:
    pass


@dataclass(frozen=True)
class FalseAtom:
    pass


@dataclass(frozen=True)
class NonEmptyMembers:
    pass


@dataclass(frozen=True)
class MaxSize:
    k: int


@dataclass(frozen=True)
class MinSize:
    k: int


@dataclass(frozen=True)
class CardLE:
    k: int


@dataclass(frozen=True)
class SubsetOf:
    name: str


@dataclass(frozen=True)
class Refines:
    name: str


@dataclass(frozen=True)
class RefinedBy:
    name: str


@dataclass(frozen=True)
class Contains:
    mask: int


@dataclass(frozen=True)
class MemberOf:
    name: str


@dataclass(frozen=True)
class Not:
    child: "Predicate"


@dataclass(frozen=True)
class And:
    left: "Predicate"
    right: "Predicate"


@dataclass(frozen=True)
class Or:
    left: "Predicate"
    right: "Predicate"


@dataclass(frozen=True)
class ComplementView:
    child: "Predicate"


Predicate = Union[
    Cover, TrueAtom, FalseAtom, NonEmptyMembers, MaxSize, MinSize, CardLE,
    SubsetOf, Refines, RefinedBy, Contains, MemberOf, Not, And, Or, ComplementView,
]

_KEYWORDS = {"cover": Cover, "true": TrueAtom, "false": FalseAtom,
             "nonempty_members": NonEmptyMembers}
_INT_ATOMS = {"maxsize": MaxSize, "minsize": MinSize, "card_le": CardLE}
_NAME_ATOMS = {"subset_of": SubsetOf, "refines": Refines,
               "refined_by": RefinedBy, "member_of": MemberOf}
_RESERVED = {"and", "or", "not", "contains", "complement_view",
             *_KEYWORDS, *_INT_ATOMS, *_NAME_ATOMS}

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([(){},]))")


class _Parser:
    def __init__(self, text, families, collections):
        self.text = text
        self.families = families
        self.collections = collections
        self.tokens = []
        pos = 0
        while True:
            m = _TOKEN.match(text, pos)
            if m is None:
                rest = text[pos:]
                if rest.strip():
                    at = pos + len(rest) - len(rest.lstrip())
                    raise PredicateSyntaxError(at, "token", text)
                break
            start = m.start(m.lastindex)
            if m.group(1) is not None:
                self.tokens.append(("int", m.group(1), start))
            elif m.group(2) is not None:
                self.tokens.append(("name", m.group(2), start))
            else:
                self.tokens.append(("punct", m.group(3), start))
            pos = m.end()
        self.end = len(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("eof", "", self.end)

    def error(self, expected, cls=PredicateSyntaxError):
        return cls(self.peek()[2], expected, self.text)

    def take(self, kind, value=None, expected=None):
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            raise self.error(expected or repr(value or kind))
        self.i += 1
        return tok

    def at_keyword(self, word):
        tok = self.peek()
        return tok[0] == "name" and tok[1] == word

    def expr(self):
        node = self.term()
        while self.at_keyword("or"):
            self.i += 1
            node = Or(node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.at_keyword("and"):
            self.i += 1
            node = And(node, self.factor())
        return node

    def factor(self):
        if self.at_keyword("not"):
            self.i += 1
            return Not(self.factor())
        tok = self.peek()
        if tok == ("punct", "(", tok[2]):
            self.i += 1
            node = self.expr()
            self.take("punct", ")")
            return node
        return self.atom()

    def atom(self):
        kind, word, _ = self.peek()
        if kind != "name" or word not in _RESERVED or word in ("and", "or", "not"):
            raise self.error("atom")
        self.i += 1
        if word in _KEYWORDS:
            return _KEYWORDS[word]()
        self.take("punct", "(")
        if word in _INT_ATOMS:
            node = _INT_ATOMS[word](self.single_arg("int", "integer"))
        elif word in _NAME_ATOMS:
            name = self.single_arg("name", "name")
            known = self.collections if word == "member_of" else self.families
            if known is not None and name not in known:
                raise UnknownReference(name)
            node = _NAME_ATOMS[word](name)
        elif word == "contains":
            node = Contains(self.setlit())
        else:
            node = ComplementView(self.expr())
        self.take("punct", ")")
        return node

    def single_arg(self, kind, expected):
        tok = self.peek()
        if tok[0] == "punct" and tok[1] in "),":
            raise self.error(expected, ArityError)
        value = self.take(kind, expected=expected)[1]
        if self.peek()[:2] == ("punct", ","):
            raise self.error("')'", ArityError)
        return int(value) if kind == "int" else value

    def setlit(self):
        self.take("punct", "{")
        elems = []
        if self.peek()[:2] != ("punct", "}"):
            elems.append(int(self.take("int", expected="integer")[1]))
            while self.peek()[:2] == ("punct", ","):
                self.i += 1
                elems.append(int(self.take("int", expected="integer")[1]))
        self.take("punct", "}")
        if any(e >= 64 for e in elems):
            raise PredicateSyntaxError(self.peek()[2], "element below 64", self.text)
        return bits.subset(elems)


def parse_predicate(text: str, declared_names: Optional[Set[str]] = None,
                    declared_collections: Optional[Set[str]] = None) -> Predicate:
    """Parse predicate text.

    ``declared_names`` and ``declared_collections`` list the family and
    collection names references may use; ``None`` disables the check.
    """
    p = _Parser(text, declared_names, declared_collections)
    node = p.expr()
    if p.peek()[0] != "eof":
        raise p.error("end of input")
    return node


_PREC = {Or: 1, And: 2, Not: 3}


def format_predicate(node: Predicate) -> str:
    return _fmt(node, 0)


def _fmt(node, need):
    prec = _PREC.get(type(node), 4)
    if isinstance(node, Or):
        s = f"{_fmt(node.left, 1)} or {_fmt(node.right, 2)}"
    elif isinstance(node, And):
        s = f"{_fmt(node.left, 2)} and {_fmt(node.right, 3)}"
    elif isinstance(node, Not):
        s = f"not {_fmt(node.child, 3)}"
    else:
        s = _fmt_atom(node)
    return f"({s})" if prec < need else s


def _fmt_atom(node):
    for word, cls in _KEYWORDS.items():
        if isinstance(node, cls):
            return word
    for table in (_INT_ATOMS, _NAME_ATOMS):
        for word, cls in table.items():
            if isinstance(node, cls):
                arg = node.k if table is _INT_ATOMS else node.name
                return f"{word}({arg})"
    if isinstance(node, Contains):
        return "contains({" + ",".join(map(str, bits.elements(node.mask))) + "})"
    if isinstance(node, ComplementView):
        return f"complement_view({_fmt(node.child, 0)})"
    raise TypeError(f"not a predicate node: {node!r}")


def references(node: Predicate):
    """Yield ``(kind, name)`` for every family/collection reference in ``node``."""
    if isinstance(node, MemberOf):
        yield "collection", node.name
    elif isinstance(node, (SubsetOf, Refines, RefinedBy)):
        yield "family", node.name
    elif isinstance(node, (Not, ComplementView)):
        yield from references(node.child)
    elif isinstance(node, (And, Or)):
        yield from references(node.left)
        yield from references(node.right)


def contains_literals(node: Predicate):
    if isinstance(node, Contains):
        yield node.mask
    elif isinstance(node, (Not, ComplementView)):
        yield from contains_literals(node.child)
    elif isinstance(node, (And, Or)):
        yield from contains_literals(node.left)
        yield from contains_literals(node.right)


_DOWN_ATOMS = (NonEmptyMembers, MaxSize, MinSize, CardLE, SubsetOf, Refines)
_UP_ATOMS = (Cover, RefinedBy, Contains)


def monotonicity(node: Predicate):
    """``(down, up)``: whether the predicate's extension is provably closed under
    taking subfamilies (down) or superfamilies (up). ``False`` means unknown."""
    if isinstance(node, (TrueAtom, FalseAtom)):
        return True, True
    if isinstance(node, _DOWN_ATOMS):
        return True, False
    if isinstance(node, _UP_ATOMS):
        return False, True
    if isinstance(node, Not):
        down, up = monotonicity(node.child)
        return up, down
    if isinstance(node, ComplementView):
        # Complementing member-wise maps subfamilies to subfamilies.
        return monotonicity(node.child)
    if isinstance(node, (And, Or)):
        ld, lu = monotonicity(node.left)
        rd, ru = monotonicity(node.right)
        return ld and rd, lu and ru
    return False, False


def conjuncts(node: Predicate):
    """The top-level conjuncts of ``node`` (``node`` itself if it is not an And)."""
    if isinstance(node, And):
        return [*conjuncts(node.left), *conjuncts(node.right)]
    return [node]


def _family(ctx, name):
    try:
        return ctx.families[name]
    except KeyError:
        raise UnknownReference(name) from None


def eval_predicate(node: Predicate, fam, ctx) -> bool:
    """Decide ``node`` on family ``fam``; ``ctx`` supplies ``n``, ``families``, ``collections``."""
    match node:
        case Cover():
            return bits.family_union(fam) == bits.full_mask(ctx.n)
        case TrueAtom():
            return True
        case FalseAtom():
            return False
        case NonEmptyMembers():
            return 0 not in fam
        case MaxSize(k):
            return all(bits.popcount(m) <= k for m in fam)
        case MinSize(k):
            return all(bits.popcount(m) >= k for m in fam)
        case CardLE(k):
            return len(fam) <= k
        case SubsetOf(name):
            return frozenset(fam) <= _family(ctx, name)
        case Refines(name):
            return kernels.refines(fam, _family(ctx, name))
        case RefinedBy(name):
            return kernels.refines(_family(ctx, name), fam)
        case Contains(mask):
            return mask in fam
        case MemberOf(name):
            from starsel.setcore import collection_contains

            try:
                coll = ctx.collections[name]
            except KeyError:
                raise UnknownReference(name) from None
            return collection_contains(coll, fam, ctx)
        case Not(child):
            return not eval_predicate(child, fam, ctx)
        case And(left, right):
            return eval_predicate(left, fam, ctx) and eval_predicate(right, fam, ctx)
        case Or(left, right):
            return eval_predicate(left, fam, ctx) or eval_predicate(right, fam, ctx)
        case ComplementView(child):
            full = bits.full_mask(ctx.n)
            return eval_predicate(child, frozenset(full ^ m for m in fam), ctx)
    raise TypeError(f"not a predicate node: {node!r}")
