import pytest
from hypothesis import given, settings, strategies as st

from starsel import bits
from starsel.errors import BudgetExceeded
from starsel.principles import Principle, evaluate
from starsel.search import (PREDICATE_POOL, Budget, NotFoundWithinBudget, SeparationResult,
                            enumerate_instances, find_separation, initial_segments_instance,
                            load_separation, random_instance, random_instances,
                            save_separation)
from starsel.setcore import Extensional, Intensional, instance_to_json
from starsel.predicate import format_predicate, parse_predicate
from starsel.staralg import star

P = Principle
F = bits.family


def test_initial_segments_examples():
    assert initial_segments_instance(3).A.families == (F([[0], [0, 1], [0, 1, 2]]),)
    assert initial_segments_instance(1).A.families == (F([[0]]),)
    inst = initial_segments_instance(4)
    assert inst.families["U"] == inst.A.families[0]
    with pytest.raises(ValueError):
        initial_segments_instance(17)


@pytest.mark.parametrize("n", [1, 5, 16])
def test_initial_segments_star_claims(n):
    segments = initial_segments_instance(n).A.families[0]
    full = bits.full_mask(n)
    for u in segments:
        assert star(u, segments) == full
    for x in range(n):
        assert star(1 << x, segments) == full


def test_enumeration_counts():
    one = Budget(max_n=1, max_A_size=1, max_horizon=1, max_B_size=0)
    assert len({inst.A for inst in enumerate_instances(one)}) == 4
    two = Budget(max_n=2, min_n=2, max_A_size=1, max_horizon=1, max_B_size=0)
    assert len(list(enumerate_instances(two))) == 16


def test_enumeration_is_replayable_and_unique():
    b = Budget(max_n=2, max_A_size=2, max_horizon=2, max_B_size=1)
    first = [instance_to_json(i) for i in enumerate_instances(b)]
    assert first == [instance_to_json(i) for i in enumerate_instances(b)]
    assert len(first) == len(set(first))


def test_enumeration_budget():
    with pytest.raises(BudgetExceeded):
        next(enumerate_instances(Budget(max_n=4)))


def test_enumeration_respects_max_instances():
    assert len(list(enumerate_instances(Budget(max_n=2, max_instances=7)))) == 7


def test_random_is_deterministic():
    assert random_instance(Budget(max_n=6, seed=42)) == random_instance(Budget(max_n=6, seed=42))
    a = [instance_to_json(i) for i in random_instances(Budget(max_n=4, seed=3, max_instances=30),
                                                      b_mode="mixed")]
    b = [instance_to_json(i) for i in random_instances(Budget(max_n=4, seed=3, max_instances=30),
                                                      b_mode="mixed")]
    assert a == b


def test_random_draws_are_valid():
    for inst in random_instances(Budget(max_n=6, seed=1, max_instances=1000), b_mode="mixed"):
        inst.validate()
        assert inst.n <= 6 and inst.horizon <= 4 and len(inst.A) <= 4


def test_predicate_mode_uses_pool():
    pool = {format_predicate(parse_predicate(t)) for t in PREDICATE_POOL}
    seen = set()
    for inst in random_instances(Budget(max_n=3, seed=2, max_instances=200), b_mode="predicate"):
        assert isinstance(inst.B, Intensional)
        seen.add(format_predicate(inst.B.predicate))
    assert seen <= pool
    assert {"cover", "maxsize(2)", "cover and maxsize(2)"} <= seen


def test_cover_mode_draws_covers():
    for inst in random_instances(Budget(max_n=5, seed=4, max_instances=200), a_mode="covers",
                                 b_mode="cover"):
        assert all(bits.is_cover(f, inst.n) for f in inst.A.families)


def test_budget_rejects_nonpositive():
    with pytest.raises(ValueError):
        Budget(max_n=0)
    with pytest.raises(ValueError):
        next(random_instances(Budget(max_n=2)))


SEP_BUDGET = Budget(max_n=3, max_A_size=1, max_horizon=1)


@pytest.mark.parametrize("right", [P.SS1STAR, P.S1STAR])
def test_separations_from_cs1(right):
    result = find_separation(P.CS1, right, SEP_BUDGET)
    assert isinstance(result, SeparationResult)
    assert result.verify()
    assert result.left_result.holds and not result.right_result.holds


def test_spec_separation_instance_separates():
    inst = find_separation(P.CS1, P.SS1STAR, SEP_BUDGET).instance
    shaped = inst.with_(n=3, A=Extensional.of([F([[0, 1], [1, 2]])]),
                        B=Extensional.of([F([[0, 1], [1, 2], [0, 1, 2]])]))
    assert evaluate(P.CS1, shaped).holds and not evaluate(P.SS1STAR, shaped).holds


def test_no_self_separation():
    result = find_separation(P.S1, P.S1, Budget(max_n=2, max_A_size=1, max_horizon=1),
                             random_trials=50)
    assert isinstance(result, NotFoundWithinBudget)
    assert result.to_json()["found"] is False


def test_no_separation_where_theorem_forbids():
    b = Budget(max_n=3, max_A_size=1, max_horizon=2)
    assert isinstance(find_separation(P.CS1, P.S1STAR, b, a_mode="covers", b_mode="cover"),
                      NotFoundWithinBudget)


def test_random_stream_finds_separation():
    b = Budget(max_n=3, min_n=3, max_A_size=2, max_horizon=1, max_B_size=0, seed=5)
    result = find_separation(P.S1, P.SS1STAR, b, random_trials=400)
    assert isinstance(result, SeparationResult) and result.source == "random"
    assert result.verify()


def test_persisted_separation_reverifies(tmp_path):
    result = find_separation(P.CS1, P.SS1STAR, SEP_BUDGET)
    sidecar = save_separation(result, tmp_path / "sep.json")
    assert sidecar.name == "sep.verdict.json"
    again = load_separation(tmp_path / "sep.json")
    assert again.verify()
    assert again.instance == result.instance
    assert again.verdict_doc() == result.verdict_doc()
