import random

import hypothesis as hyp
import pytest
from hypothesis import strategies as st

from conftest import random_ordinal
from ionkit.ordinals import (
    OMEGA,
    ONE,
    ZERO,
    Comparison,
    DeadHydraError,
    HydraTree,
    Kind,
    MaxLenExceededError,
    NotALimitError,
    Ordinal,
    OrdinalOverflowError,
    OrdinalParseError,
    add,
    classify,
    compare,
    depth,
    descent_walk,
    format_ordinal,
    from_int,
    fundamental_sequence,
    hydra_step,
    hydra_to_ordinal,
    hydra_trajectory,
    mul,
    natural_sum,
    omega_pow,
    parse_hydra,
    parse_ordinal,
    predecessor,
)

W = OMEGA


def o(text: str) -> Ordinal:
    return parse_ordinal(text)


# ---------------------------------------------------------------------------
# construction and comparison
# ---------------------------------------------------------------------------

def test_cnf_invariants_enforced():
    with pytest.raises(ValueError):
        Ordinal(((ZERO, 0),))  # coefficient must be >= 1
    with pytest.raises(ValueError):
        Ordinal(((ZERO, 1), (ONE, 1)))  # exponents must strictly decrease


def test_compare_goldens():
    assert compare(W, from_int(5)) is Comparison.GREATER
    assert compare(o("w+1"), W) is Comparison.GREATER
    assert compare(o("w^2"), o("w*3+7")) is Comparison.GREATER
    assert compare(o("w^2"), o("w^2")) is Comparison.EQUAL
    assert compare(ZERO, ONE) is Comparison.LESS


def test_rich_comparisons_match_compare():
    assert W > from_int(100)
    assert o("w^w") >= o("w^5*9+w")
    assert o("w*2") < o("w*2+1")
    assert sorted([o("w^2"), ZERO, o("w+3"), ONE]) == [ZERO, ONE, o("w+3"), o("w^2")]


# ---------------------------------------------------------------------------
# arithmetic
# ---------------------------------------------------------------------------

def test_add_goldens():
    assert add(ONE, W) == W  # left absorption
    assert add(W, ONE) == o("w+1")
    assert add(o("w+3"), o("w^2+w")) == o("w^2+w")
    assert add(o("w*2"), o("w*3")) == o("w*5")


def test_mul_goldens():
    assert mul(W, from_int(2)) == o("w*2")
    assert mul(from_int(2), W) == W
    assert mul(o("w+1"), from_int(3)) == o("w*3+1")
    assert mul(o("w+1"), W) == o("w^2")
    assert mul(o("w^2+1"), o("w+1")) == o("w^3+w^2+1")


def test_omega_pow_goldens():
    assert omega_pow(ZERO) == ONE
    assert omega_pow(ONE) == W
    assert omega_pow(omega_pow(ONE)) == o("w^w")
    assert omega_pow(o("w+1")) == o("w^(w+1)")


def test_omega_pow_depth_limit():
    a = ONE
    with pytest.raises(OrdinalOverflowError):
        for _ in range(70):
            a = omega_pow(a)


def test_natural_sum_commutes_where_add_does_not():
    assert natural_sum(ONE, W) == o("w+1")
    assert add(ONE, W) == W
    assert natural_sum(o("w^2+3"), o("w*4")) == o("w^2+w*4+3")


ordinal_exprs = st.recursive(
    st.integers(0, 5).map(from_int),
    lambda c: st.one_of(
        st.builds(add, c, c),
        st.builds(mul, c, st.integers(1, 4).map(from_int)),
        st.builds(lambda a: omega_pow(a) if depth(a) < 6 else a, c),
    ),
    max_leaves=8,
)


@hyp.given(ordinal_exprs, ordinal_exprs, ordinal_exprs)
def test_order_is_total_and_transitive(a, b, c):
    assert (compare(a, b) is Comparison.EQUAL) == (a == b)
    assert compare(a, b).value in ("Less", "Equal", "Greater")
    if a <= b and b <= c:
        assert a <= c


@hyp.given(ordinal_exprs, ordinal_exprs)
def test_add_identities(a, b):
    assert add(a, ZERO) == a
    assert add(ZERO, a) == a
    assert mul(a, ONE) == a
    assert add(a, b) >= a


@hyp.given(ordinal_exprs, ordinal_exprs, ordinal_exprs)
def test_mul_left_distributes(a, b, c):
    assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))


@hyp.given(ordinal_exprs, ordinal_exprs)
def test_natural_sum_commutative_and_dominates(a, b):
    assert natural_sum(a, b) == natural_sum(b, a)
    assert natural_sum(a, b) >= add(a, b) >= a


# ---------------------------------------------------------------------------
# classification and fundamental sequences
# ---------------------------------------------------------------------------

def test_classify_goldens():
    assert classify(ZERO) is Kind.ZERO
    assert classify(o("w+1")) is Kind.SUCCESSOR
    assert predecessor(o("w+1")) == W
    assert classify(o("w^2")) is Kind.LIMIT
    assert classify(from_int(3)) is Kind.SUCCESSOR


def test_fundamental_sequence_goldens():
    assert fundamental_sequence(W, 3) == from_int(3)
    assert fundamental_sequence(o("w^2"), 2) == o("w*2")
    assert fundamental_sequence(o("w^w"), 3) == o("w^3")
    assert fundamental_sequence(o("w*2"), 1) == o("w+1")
    assert fundamental_sequence(o("w^(w+1)"), 2) == o("w^w*2")
    assert fundamental_sequence(o("w^w*3"), 4) == o("w^w*2+w^4")


def test_fundamental_sequence_rejects_non_limits():
    with pytest.raises(NotALimitError):
        fundamental_sequence(ZERO, 1)
    with pytest.raises(NotALimitError):
        fundamental_sequence(o("w+1"), 1)


@hyp.given(ordinal_exprs, st.integers(0, 30))
def test_fs_below_and_increasing(a, n):
    hyp.assume(classify(a) is Kind.LIMIT)
    assert fundamental_sequence(a, n) < a
    assert fundamental_sequence(a, n) < fundamental_sequence(a, n + 1)


@hyp.given(ordinal_exprs, ordinal_exprs)
def test_fs_reaches_any_smaller_ordinal(lam, b):
    hyp.assume(classify(lam) is Kind.LIMIT)
    hyp.assume(b < lam)
    n = 0
    while n <= 10**4:
        if fundamental_sequence(lam, n) >= b:
            return
        n += 1
    raise AssertionError(f"{format_ordinal(lam)} never caught {format_ordinal(b)}")


# ---------------------------------------------------------------------------
# descent walks
# ---------------------------------------------------------------------------

def test_descent_walk_goldens():
    assert descent_walk(from_int(2), lambda a: 0) == [from_int(2), ONE, ZERO]
    assert descent_walk(W, lambda a: 3) == [W, from_int(3), from_int(2), ONE, ZERO]
    assert descent_walk(o("w*2"), lambda a: 1) == [o("w*2"), o("w+1"), W, ONE, ZERO]


def test_descent_walk_max_len():
    with pytest.raises(MaxLenExceededError):
        descent_walk(o("w^w"), lambda a: 9, max_len=5)


# Walk lengths are Hardy-hierarchy sized: from w^w^w a constant picker of 10
# needs ~10^10^10 steps, so boundedness can only hold per seeded run. Small
# picker values keep realized walks short; termination itself is structural.
@hyp.given(st.integers(0, 2**31), st.integers(0, 2**31))
def test_descent_walk_terminates(start_seed, pick_seed):
    start = random_ordinal(random.Random(start_seed), 4)
    rng = random.Random(pick_seed)
    walk = descent_walk(start, lambda a: rng.randint(0, 1), max_len=10**6)
    assert walk[0] == start
    assert walk[-1] == ZERO
    assert all(x > y for x, y in zip(walk, walk[1:]))


# ---------------------------------------------------------------------------
# surface syntax
# ---------------------------------------------------------------------------

def test_parse_ordinal_goldens():
    assert parse_ordinal("0") == ZERO
    assert parse_ordinal("w+1") == add(W, ONE)
    assert parse_ordinal("1+w") == W  # absorption applied on normalization
    assert parse_ordinal("w^(w+1)*3+w*2+5") == add(
        add(mul(omega_pow(o("w+1")), from_int(3)), o("w*2")), from_int(5)
    )


def test_parse_ordinal_errors():
    for bad in ("w^^2", "", "w+", "(w", "2^w", "w**2", "-1"):
        with pytest.raises(OrdinalParseError):
            parse_ordinal(bad)


def test_format_ordinal_goldens():
    assert format_ordinal(ZERO) == "0"
    assert format_ordinal(from_int(7)) == "7"
    assert format_ordinal(W) == "w"
    assert format_ordinal(o("w^2")) == "w^2"
    assert format_ordinal(o("w^w*2")) == "w^w*2"
    assert format_ordinal(o("w^(w*2)")) == "w^(w*2)"
    assert format_ordinal(o("w^(w+1)*3+w*2+5")) == "w^(w+1)*3+w*2+5"


@hyp.given(ordinal_exprs)
def test_surface_roundtrip(a):
    assert parse_ordinal(format_ordinal(a)) == a


@hyp.given(st.integers(0, 2**31))
def test_surface_roundtrip_on_corpus_shapes(seed):
    a = random_ordinal(random.Random(seed), 3)
    assert parse_ordinal(format_ordinal(a)) == a


# ---------------------------------------------------------------------------
# hydra game
# ---------------------------------------------------------------------------

def leaf() -> HydraTree:
    return HydraTree(())


def test_hydra_value_goldens():
    assert hydra_to_ordinal(HydraTree((leaf(), leaf()))) == from_int(2)
    path3 = HydraTree((HydraTree((HydraTree((leaf(),)),)),))
    assert hydra_to_ordinal(path3) == o("w^w")
    assert hydra_to_ordinal(parse_hydra("((())())")) == o("w+1")


def test_parse_hydra_roundtrip_shapes():
    assert parse_hydra("()") == leaf()
    assert parse_hydra("(()())") == HydraTree((leaf(), leaf()))
    with pytest.raises(OrdinalParseError):
        parse_hydra("(()")
    with pytest.raises(OrdinalParseError):
        parse_hydra("()()")


def test_single_leaf_hydra_dies_in_one_step():
    h = parse_hydra("(())")
    assert hydra_to_ordinal(h) == ONE
    dead = hydra_step(h, 1)
    assert hydra_to_ordinal(dead) == ZERO
    with pytest.raises(DeadHydraError):
        hydra_step(dead, 2)


def test_path_hydra_stage_two_duplication():
    # root-node-leaf: cutting the leaf leaves the node, duplicated twice at the root
    h = parse_hydra("((()))")
    assert hydra_to_ordinal(h) == W
    after = hydra_step(h, 2)
    assert hydra_to_ordinal(after) == from_int(2)


def test_hydra_trajectory_strictly_decreases_and_dies():
    values = hydra_trajectory(parse_hydra("(((())))"), max_steps=10**5)
    assert values[0] == o("w^w")
    assert values[-1] == ZERO
    assert all(x > y for x, y in zip(values, values[1:]))


ALL_SMALL_HYDRAS = [
    "()",
    "(())",
    "((()))", "(()())",
    "(((())))", "((()()))", "((())())", "(()()())",
]


@pytest.mark.parametrize("shape", ALL_SMALL_HYDRAS)
def test_every_small_hydra_dies(shape):
    values = hydra_trajectory(parse_hydra(shape), max_steps=10**5)
    assert values[-1] == ZERO
    assert all(x > y for x, y in zip(values, values[1:]))
