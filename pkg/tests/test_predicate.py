import pytest
from hypothesis import given, settings, strategies as st

from predicate_corpus import ROUNDTRIP_CORPUS
from starsel import bits
from starsel.errors import ArityError, PredicateSyntaxError, UnknownReference
from starsel.predicate import (And, CardLE, ComplementView, Contains, Cover, FalseAtom,
                               MaxSize, MemberOf, MinSize, NonEmptyMembers, Not, Or,
                               Refines, RefinedBy, SubsetOf, TrueAtom, conjuncts,
                               eval_predicate, monotonicity,
                               format_predicate, parse_predicate)
from starsel.setcore import Extensional, Instance, Intensional, collection_contains

NAMES = {"U0", "U1"}
COLLS = {"C"}


def ctx(n, **kw):
    return Instance(n=n, A=Extensional.of([frozenset({1})]), B=Intensional(TrueAtom()), **kw)


def test_parse_examples():
    assert parse_predicate("cover") == Cover()
    assert parse_predicate("cover and maxsize(2)") == And(Cover(), MaxSize(2))
    assert (parse_predicate("not (refines(U0) or true)", {"U0"})
            == Not(Or(Refines("U0"), TrueAtom())))


def test_empty_argument_is_arity_error():
    with pytest.raises(ArityError) as info:
        parse_predicate("maxsize()")
    assert info.value.position == len("maxsize(")


def test_two_arguments_is_arity_error():
    with pytest.raises(ArityError):
        parse_predicate("maxsize(1, 2)")


@pytest.mark.parametrize("text", ["", "cover and", "(cover", "cover)", "maxsize(x)",
                                  "contains(0)", "and", "cover cover", "cover & true",
                                  "unknown_atom", "contains({0,})"])
def test_syntax_errors(text):
    with pytest.raises(PredicateSyntaxError):
        parse_predicate(text, NAMES, COLLS)


def test_syntax_error_reports_position():
    with pytest.raises(PredicateSyntaxError) as info:
        parse_predicate("cover and and")
    assert info.value.position == len("cover and ")
    assert "^" in str(info.value)


def test_undeclared_reference():
    with pytest.raises(UnknownReference) as info:
        parse_predicate("refines(V)", {"U0"})
    assert info.value.name == "V"


def test_left_associative_shapes():
    assert parse_predicate("cover or true or false") == Or(Or(Cover(), TrueAtom()), FalseAtom())
    assert parse_predicate("cover or true and false") == Or(Cover(), And(TrueAtom(), FalseAtom()))


@pytest.mark.parametrize("text", ROUNDTRIP_CORPUS)
def test_roundtrip_corpus(text):
    ast = parse_predicate(text, NAMES, COLLS)
    printed = format_predicate(ast)
    assert parse_predicate(printed, NAMES, COLLS) == ast
    assert format_predicate(parse_predicate(printed, NAMES, COLLS)) == printed


def _asts():
    leaves = st.one_of(
        st.builds(Cover), st.builds(TrueAtom), st.builds(FalseAtom), st.builds(NonEmptyMembers),
        st.builds(MaxSize, st.integers(0, 9)), st.builds(MinSize, st.integers(0, 9)),
        st.builds(CardLE, st.integers(0, 9)), st.builds(SubsetOf, st.just("U0")),
        st.builds(Refines, st.just("U1")), st.builds(RefinedBy, st.just("U0")),
        st.builds(Contains, st.integers(0, 15)), st.builds(MemberOf, st.just("C")))
    return st.recursive(leaves, lambda kids: st.one_of(
        st.builds(Not, kids), st.builds(And, kids, kids), st.builds(Or, kids, kids),
        st.builds(ComplementView, kids)), max_leaves=12)


@given(_asts())
def test_print_parse_fixed_point(ast):
    assert parse_predicate(format_predicate(ast), NAMES, COLLS) == ast


def test_eval_examples():
    assert eval_predicate(Cover(), bits.family([[0, 1], [1, 2]]), ctx(3))
    assert not eval_predicate(Cover(), bits.family([[0, 1]]), ctx(3))
    assert eval_predicate(MaxSize(1), bits.family([[0], [1], []]), ctx(2))


def test_eval_references():
    c = ctx(2, families={"U0": bits.family([[0, 1]])},
            collections={"C": Extensional.of([bits.family([[0]])])})
    assert eval_predicate(Refines("U0"), bits.family([[0], [1]]), c)
    assert not eval_predicate(RefinedBy("U0"), bits.family([[0], [1]]), c)
    assert eval_predicate(SubsetOf("U0"), frozenset(), c)
    assert eval_predicate(MemberOf("C"), bits.family([[0]]), c)
    assert eval_predicate(ComplementView(Contains(0b10)), bits.family([[0]]), c)


def _reference_eval(text, fam, n):
    """Direct restatement of each atom on element lists, for the small grammar subset used below."""
    sets = [set(bits.elements(m)) for m in fam]
    return {
        "cover": set().union(*sets) == set(range(n)),
        "nonempty_members": all(sets),
        "maxsize(1)": all(len(s) <= 1 for s in sets),
        "card_le(2)": len(sets) <= 2,
        "complement_view(cover)": not set(range(n)) or all(
            any(x not in s for s in sets) for x in range(n)),
    }[text]


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("text", ["cover", "nonempty_members", "maxsize(1)", "card_le(2)",
                                  "complement_view(cover)"])
def test_intensional_agrees_with_enumerated_extension(n, text):
    coll = Intensional(parse_predicate(text))
    c = ctx(n)
    extension = Extensional.of(f for f in bits.all_families(n) if _reference_eval(text, f, n))
    for fam in bits.all_families(n):
        assert collection_contains(coll, fam, c) == collection_contains(extension, fam, c)


def _closure_holds(ast, n, c, down):
    fams = list(bits.all_families(n))
    ext = {f for f in fams if eval_predicate(ast, f, c)}
    for f in ext:
        for g in fams:
            if (g <= f if down else f <= g) and g not in ext:
                return False
    return True


@settings(max_examples=150, deadline=None)
@given(_asts(), st.integers(1, 2))
def test_monotonicity_claims_are_sound(ast, n):
    c = ctx(n, families={"U0": bits.family([[0]]), "U1": bits.family([[0], []])},
            collections={"C": Extensional.of([bits.family([[0]])])})
    down, up = monotonicity(ast)
    if down:
        assert _closure_holds(ast, n, c, down=True)
    if up:
        assert _closure_holds(ast, n, c, down=False)


def test_monotonicity_examples():
    assert monotonicity(parse_predicate("cover")) == (False, True)
    assert monotonicity(parse_predicate("maxsize(2) and card_le(3)")) == (True, False)
    assert monotonicity(parse_predicate("not (maxsize(1) or card_le(1))")) == (False, True)
    assert monotonicity(parse_predicate("cover and maxsize(2)")) == (False, False)
    assert conjuncts(parse_predicate("cover and maxsize(2) and true")) == [
        Cover(), MaxSize(2), TrueAtom()]
