import itertools
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from tnorm_rearrange import (
    DUAL,
    PRIMAL,
    FAMILIES,
    circular_value,
    make_operator,
    pair_condition,
    rearrangement_value,
    search_counterexample,
    search_pair,
    sigma_m1,
    sigma_m2,
    sumprod_variant_check,
    transport_witness,
    verify_circular_extremes,
    verify_rearrangement,
)
from tnorm_rearrange.rearrangement import (
    VIOLATION_TOL,
    aggregate,
    circular_values,
    random_sequences,
    validate_permutation,
    verify_on_samples,
)
from tnorm_rearrange.norm_catalog import samples_for


def op(spec):
    name, _, a = spec.partition(":")
    return make_operator(name, float(a) if a else None)


TN, TLp = op("nilpotent_minimum"), op("bounded_sum")
TD = op("drastic")


# -- aggregate --------------------------------------------------------------


def test_aggregate_examples():
    assert aggregate(TLp, [0.3, 0.4, 0.5]) == 1.0
    assert aggregate(op("minimum"), [0.7, 0.2, 0.9]) == 0.2
    assert aggregate(op("product"), [0.5]) == 0.5
    with pytest.raises(ValueError):
        aggregate(op("product"), [])


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(["product", "frank:2", "yager_conorm:2", "joe:5", "probabilistic_sum"]),
       st.lists(st.floats(0, 1), min_size=1, max_size=7), st.randoms(use_true_random=False))
def test_aggregate_shuffle_invariant(spec, values, rnd):
    f = op(spec)
    shuffled = values[:]
    rnd.shuffle(shuffled)
    assert abs(aggregate(f, values) - aggregate(f, shuffled)) <= 1e-9


# -- pair condition ---------------------------------------------------------


def test_nilpotent_bounded_sum_counterexample():
    r = pair_condition(TN, TLp, 0.2, 0.7, 0.6, 0.9, PRIMAL)
    assert r.violated
    assert abs(r.lhs - 0.7) <= 1e-12 and abs(r.rhs - 0.8) <= 1e-12


def test_drastic_bounded_sum_dual_counterexample():
    r = pair_condition(TD, TLp, 0.38, 0.96, 0.005, 0.05, DUAL)
    assert r.violated
    assert abs(r.lhs - 0.385) <= 1e-12 and abs(r.rhs - 0.0) <= 1e-12


def test_counterexample_values_exact():
    # same quadruples in rational arithmetic
    q = [Fraction(s) for s in ("0.2", "0.7", "0.6", "0.9")]
    lhs = oracles.q_bounded_sum(oracles.q_nilpotent_min(q[0], q[2]), oracles.q_nilpotent_min(q[1], q[3]))
    rhs = oracles.q_bounded_sum(oracles.q_nilpotent_min(q[0], q[3]), oracles.q_nilpotent_min(q[1], q[2]))
    assert (lhs, rhs) == (Fraction(7, 10), Fraction(4, 5))
    q = [Fraction(s) for s in ("0.38", "0.96", "0.005", "0.05")]
    lhs = oracles.q_drastic(oracles.q_bounded_sum(q[0], q[2]), oracles.q_bounded_sum(q[1], q[3]))
    rhs = oracles.q_drastic(oracles.q_bounded_sum(q[0], q[3]), oracles.q_bounded_sum(q[1], q[2]))
    assert (lhs, rhs) == (Fraction(77, 200), 0)


CONORM_CASES = [(f + "_conorm", a) for f in FAMILIES for a in samples_for(f)]


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(CONORM_CASES), st.lists(st.floats(0, 1), min_size=4, max_size=4))
def test_minimum_with_any_conorm_holds(case, q):
    x1, x2 = sorted(q[:2])
    y1, y2 = sorted(q[2:])
    for d in (PRIMAL, DUAL):
        assert not pair_condition(op("minimum"), make_operator(*case), x1, x2, y1, y2, d).violated


def test_pair_condition_rejects_unsorted():
    with pytest.raises(ValueError):
        pair_condition(TN, TLp, 0.7, 0.2, 0.6, 0.9)
    with pytest.raises(ValueError):
        pair_condition(TN, TLp, 0.2, 0.7, 0.6, 0.9, "sideways")


# -- search -----------------------------------------------------------------


def test_search_finds_nilpotent_violation():
    r = search_counterexample(TN, TLp, PRIMAL, 10_000, 0)
    assert r is not None and r.violated
    x1, x2, y1, y2, lhs, rhs = r.witness
    assert x1 <= x2 and y1 <= y2
    again = pair_condition(TN, TLp, x1, x2, y1, y2, PRIMAL)
    assert abs(again.lhs - lhs) <= 1e-12 and abs(again.rhs - rhs) <= 1e-12
    assert rhs - lhs > VIOLATION_TOL


def test_search_minimum_with_drastic_conorm_is_clean():
    for d in (PRIMAL, DUAL):
        assert search_counterexample(op("minimum"), op("drastic_maximum"), d, 10_000, 3) is None


def test_search_bounded_sum_with_drastic_conorm_reported():
    r = search_pair(TLp, op("drastic_maximum"), PRIMAL, 100_000, 0)
    assert r.verdict in ("violated", "holds_on_samples")
    assert json.loads(r.to_json())["budget"] == 100_000


def test_search_deterministic_and_validated():
    a = search_pair(op("frank:2"), op("yager_conorm:5"), DUAL, 5000, 42)
    b = search_pair(op("frank:2"), op("yager_conorm:5"), DUAL, 5000, 42)
    assert a == b
    with pytest.raises(ValueError):
        search_counterexample(TN, TLp, PRIMAL, 0, 0)


@pytest.mark.parametrize("otimes,oplus", [
    ("nilpotent_minimum", "lukasiewicz"),
    ("bounded_sum", "nilpotent_maximum"),
    ("nilpotent_minimum", "nilpotent_maximum"),
])
def test_special_cases(otimes, oplus):
    for d in (PRIMAL, DUAL):
        r = search_counterexample(op(otimes), op(oplus), d, 100_000, 7)
        assert r is None, r.to_json()


def test_nilpotent_pair_tie_counterexample_is_exact():
    # a tie x1 + y1 = 1 puts T_n on its zero branch while T_n' saturates
    F = Fraction
    x1, x2, y1, y2 = F(1, 16), F(15, 16), F(15, 16), F(1)
    lhs = oracles.q_nilpotent_max(oracles.q_nilpotent_min(x1, y1), oracles.q_nilpotent_min(x2, y2))
    rhs = oracles.q_nilpotent_max(oracles.q_nilpotent_min(x1, y2), oracles.q_nilpotent_min(x2, y1))
    assert lhs == F(15, 16) and rhs == 1
    # and the full two-element rearrangement chain breaks with it
    v = verify_rearrangement(TN, op("nilpotent_maximum"), [1 / 16, 15 / 16], [15 / 16, 1.0])
    assert not v.holds


@pytest.mark.parametrize("oplus", ["maximum", "probabilistic_sum", "bounded_sum", "nilpotent_maximum",
                                   "frank_conorm:2", "gumbel_conorm:5", "drastic_maximum"])
def test_drastic_minimum_with_disjunctive(oplus):
    assert search_counterexample(TD, op(oplus), PRIMAL, 10_000, 1) is None


@pytest.mark.parametrize("otimes", ["minimum", "product", "lukasiewicz", "nilpotent_minimum",
                                    "frank:10", "clayton:0.5", "mayor_torrens:0.25"])
def test_drastic_maximum_dual(otimes):
    assert search_counterexample(op(otimes), op("drastic_maximum"), DUAL, 10_000, 1) is None


@pytest.mark.parametrize("otimes", ["minimum", "product", "frank:2", "gumbel:2", "joe:5",
                                    "ali_mikhail_haq:1.5", "dubois_prade:0.5", "clayton:-1"])
def test_no_zero_divisor_norm_with_drastic_maximum(otimes):
    assert search_counterexample(op(otimes), op("drastic_maximum"), PRIMAL, 10_000, 1) is None


# -- transport ----------------------------------------------------------------


@pytest.mark.parametrize("otimes,oplus", [
    ("nilpotent_minimum", "bounded_sum"), ("drastic", "lukasiewicz"), ("lukasiewicz", "drastic_maximum"),
    ("nilpotent_minimum", "probabilistic_sum"), ("nilpotent_minimum", "frank_conorm:2"), ("yager:2", "drastic_maximum"),
])
def test_transport(otimes, oplus):
    a, b = op(otimes), op(oplus)
    r = search_pair(a, b, PRIMAL, 10_000, 0)
    assert r.violated
    t = transport_witness(r, a, b)
    assert t.violated and t.direction == DUAL
    with pytest.raises(ValueError):
        transport_witness(search_pair(a, b, DUAL, 10, 0), a, b)


# -- rearrangement values and brute force -------------------------------------


def test_rearrangement_value_examples():
    mn, mx = op("minimum"), op("maximum")
    xs, ys = (0.1, 0.5, 0.9), (0.2, 0.4, 0.8)
    vals = {p: rearrangement_value(mn, mx, xs, ys, p) for p in itertools.permutations((1, 2, 3))}
    assert vals[(1, 2, 3)] == 0.8 == max(vals.values())
    assert vals[(3, 2, 1)] == 0.4 == min(vals.values())
    assert rearrangement_value(op("product"), op("probabilistic_sum"), [0.3], [0.5], (1,)) == 0.15
    with pytest.raises(ValueError):
        rearrangement_value(mn, mx, [0.1, 0.2], [0.3], (1, 2))


def test_verify_product_probsum_random():
    p, s = op("product"), op("probabilistic_sum")
    rng = np.random.default_rng(11)
    for _ in range(100):
        xs, ys = np.sort(rng.random(4)), np.sort(rng.random(4))
        assert verify_rearrangement(p, s, xs, ys).holds
        assert verify_rearrangement(p, s, xs, ys, DUAL).holds


def test_verify_nilpotent_bounded_violated():
    v = verify_rearrangement(TN, TLp, [0.2, 0.7], [0.6, 0.9])
    assert not v.holds
    # identity pairing (0.7) falls below the reversal (0.8)
    assert v.witness.sigma == (1, 2)
    assert v.witness.value == pytest.approx(0.7) and v.witness.lower == pytest.approx(0.8)


def test_verify_singleton_and_errors():
    assert verify_rearrangement(TN, TLp, [0.3], [0.4]).holds
    with pytest.raises(ValueError):
        verify_rearrangement(TN, TLp, [0.7, 0.2], [0.6, 0.9])
    with pytest.raises(ValueError):
        verify_rearrangement(TN, TLp, np.linspace(0, 1, 10), np.linspace(0, 1, 10))
    with pytest.raises(ValueError):
        validate_permutation((1, 1, 2))


@pytest.mark.parametrize("pair", [("product", "probabilistic_sum"), ("lukasiewicz", "bounded_sum"),
                                  ("frank:2", "gumbel_conorm:2"), ("minimum", "drastic_maximum")])
def test_monotone_bound(pair):
    a, b = op(pair[0]), op(pair[1])
    rng = np.random.default_rng(5)
    for n in range(2, 6):
        xs, ys = np.sort(rng.random(n)), np.sort(rng.random(n))
        ident = rearrangement_value(a, b, xs, ys, tuple(range(1, n + 1)))
        rev = rearrangement_value(a, b, xs, ys, tuple(range(n, 0, -1)))
        for sigma in itertools.permutations(range(1, n + 1)):
            v = rearrangement_value(a, b, xs, ys, sigma)
            assert rev - 1e-9 <= v <= ident + 1e-9


def test_random_sequences_shape_and_mixture():
    s = random_sequences(5, 400, 0)
    assert s.shape == (400, 2, 5)
    assert np.all(np.diff(s, axis=2) >= 0)
    flat = s.ravel()
    assert np.mean((flat == 0) | (flat == 1)) > 0.1
    assert np.mean(np.isclose(flat * 16, np.round(flat * 16))) > 0.4
    assert np.array_equal(s, random_sequences(5, 400, 0))


@pytest.mark.parametrize("otimes,oplus,direction", [
    ("drastic", "lukasiewicz", PRIMAL), ("drastic", "lukasiewicz", DUAL),
    ("bounded_sum", "drastic_maximum", PRIMAL), ("bounded_sum", "drastic_maximum", DUAL),
])
def test_boundary_only_violations_surface_with_more_sequences(otimes, oplus, direction):
    # these violations need exact 0/1 entries in two places at once
    a, b = op(otimes), op(oplus)
    assert search_pair(a, b, direction, 10_000, 0).violated
    assert not verify_on_samples(a, b, 2, 2000, 0, direction).holds


# -- sum-product variant --------------------------------------------------------


def perfect_matchings(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for i in range(len(rest)):
        for m in perfect_matchings(rest[:i] + rest[i + 1:]):
            yield [(first, rest[i])] + m


def matching_extremes(otimes, oplus, a, direction):
    vals = []
    for m in perfect_matchings(list(range(len(a)))):
        if direction == PRIMAL:
            vals.append(aggregate(oplus, [otimes(a[i], a[j]) for i, j in m]))
        else:
            vals.append(aggregate(otimes, [oplus(a[i], a[j]) for i, j in m]))
    return min(vals), max(vals)


def test_matching_count():
    assert sum(1 for _ in perfect_matchings(list(range(10)))) == 945


def test_sumprod_example():
    v = sumprod_variant_check(op("product"), op("maximum"), [0.1, 0.9, 0.2, 0.8])
    assert v.holds
    assert (v.lower, v.middle, v.upper) == (pytest.approx(0.16), pytest.approx(0.16),
                                            pytest.approx(0.72))
    lo, hi = matching_extremes(op("product"), op("maximum"), [0.1, 0.9, 0.2, 0.8], PRIMAL)
    assert lo == pytest.approx(v.lower) and hi == pytest.approx(v.upper)


def test_sumprod_length_two_and_odd():
    v = sumprod_variant_check(op("product"), op("probabilistic_sum"), [0.3, 0.6])
    assert v.lower == v.middle == v.upper
    with pytest.raises(ValueError):
        sumprod_variant_check(op("product"), op("probabilistic_sum"), [0.3, 0.6, 0.1])


def test_sumprod_product_probsum_n3():
    rng = np.random.default_rng(3)
    p, s = op("product"), op("probabilistic_sum")
    for _ in range(100):
        a = rng.random(6)
        v = sumprod_variant_check(p, s, a)
        lo, hi = matching_extremes(p, s, a, PRIMAL)
        assert v.holds and abs(v.lower - lo) <= 1e-9 and abs(v.upper - hi) <= 1e-9


# -- circular variant ---------------------------------------------------------


def test_sigma_patterns():
    assert sigma_m2(4) == (1, 3, 4, 2)
    assert sigma_m2(3) == (1, 3, 2)
    assert sigma_m1(2) == (1, 2)
    assert sigma_m1(8) == (1, 7, 3, 5, 4, 6, 2, 8)
    for n in range(2, 12):
        assert sorted(sigma_m1(n)) == list(range(1, n + 1))
        assert sorted(sigma_m2(n)) == list(range(1, n + 1))
    with pytest.raises(ValueError):
        sigma_m1(1)


def test_sigma_m2_is_circular_max_example():
    vals, _ = circular_values(op("product"), op("probabilistic_sum"), [0.1, 0.2, 0.3, 0.4])
    v = circular_value(op("product"), op("probabilistic_sum"), [0.1, 0.2, 0.3, 0.4], sigma_m2(4))
    assert v == pytest.approx(vals.max(), abs=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_sigma_m1_small_n_minimizes(n):
    rng = np.random.default_rng(n)
    for _ in range(30):
        a = np.sort(rng.random(n))
        vals, _ = circular_values(op("product"), op("probabilistic_sum"), a)
        v = circular_value(op("product"), op("probabilistic_sum"), a, sigma_m1(n))
        assert v <= vals.min() + 1e-9


def test_circular_value_examples():
    assert circular_value(op("minimum"), op("maximum"), [0.2, 0.5, 0.8], (1, 2, 3)) == 0.5
    p, s = op("product"), op("probabilistic_sum")
    assert circular_value(p, s, [0.3, 0.6], (1, 2)) == circular_value(p, s, [0.3, 0.6], (2, 1))
    vals, _ = circular_values(p, TLp, [0.2, 0.4, 0.6, 0.8])
    assert circular_value(p, TLp, [0.2, 0.4, 0.6, 0.8], sigma_m2(4)) == pytest.approx(vals.max())
    with pytest.raises(ValueError):
        circular_value(p, s, [0.3, 0.6], (1, 2, 3))


def test_circular_product_probsum_n5():
    a = np.sort(np.random.default_rng(8).random(5))
    v = verify_circular_extremes(op("product"), op("probabilistic_sum"), a)
    assert v.holds and v.at_m2 == pytest.approx(v.maximum) and v.at_m1 == pytest.approx(v.minimum)


def test_circular_bounded_sum_dual():
    a = np.sort(np.random.default_rng(9).random(4))
    assert verify_circular_extremes(TLp, op("nilpotent_maximum"), a, DUAL).holds
    assert verify_circular_extremes(TLp, op("maximum"), a, DUAL).holds


def test_circular_n2_and_bounds():
    assert verify_circular_extremes(TN, TLp, [0.3, 0.9]).holds
    with pytest.raises(ValueError):
        verify_circular_extremes(TN, TLp, np.linspace(0, 1, 9))
