import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mori.errors import HorizonError, ParameterError
from mori.forests import PossibleForest, all_possible_forests
from mori.oracle import exact_subgraph_probability
from mori.theory import (
    adjacent_pair_case_density,
    block_growth_expectation,
    constants,
    expected_triangles_on_triple,
    lemma1_probability,
    lemma2_leading,
    predicted_adjacent_pairs,
    predicted_clustering,
    predicted_triangles,
)

HALF = Fraction(1, 2)
ONE = Fraction(1)


# -- exact subgraph probability -------------------------------------------------

def test_forced_edge_collapses_to_one():
    f = PossibleForest.parse("2>1")
    for beta in (HALF, ONE, Fraction(5), Fraction(7, 3)):
        assert lemma1_probability(f, 2, beta) == 1


def test_single_edge_hand_value():
    # (beta/(beta+1)) * (1+beta) * 1/(2beta+2) * (1+1/beta) = 1/2 at beta=1
    f = PossibleForest.parse("3>1")
    assert lemma1_probability(f, 3, ONE) == HALF


def test_cherry_hand_value():
    # (1/3) * (1+beta)(2+beta) * (1/beta) * (1/(2beta+2)) at beta=1
    f = PossibleForest.parse("3>1,2>1")
    assert lemma1_probability(f, 3, ONE) == HALF


def test_edge_to_non_root_any_beta():
    # S = {(3,2)}: prefactor 1, rising (1+beta), out-factor 1/(2beta+2) -> 1/2
    f = PossibleForest.parse("3>2")
    for beta in (HALF, ONE, Fraction(2), Fraction(5)):
        assert lemma1_probability(f, 3, beta) == HALF


def test_value_independent_of_horizon():
    f = PossibleForest.parse("4>2,3>2")
    assert lemma1_probability(f, 4, HALF) == lemma1_probability(f, 7, HALF)


def test_float_mode_close_to_rational():
    f = PossibleForest.parse("5>2,4>1,3>2")
    exact = lemma1_probability(f, 5, Fraction(3, 4))
    approx = lemma1_probability(f, 5, 0.75)
    assert isinstance(approx, float)
    assert approx == pytest.approx(float(exact), rel=1e-12)


def test_matches_oracle_spot_checks():
    for spec, t, beta in [
        ("4>1", 5, HALF),
        ("4>3,2>1", 4, Fraction(2)),
        ("5>1,4>1,3>1", 6, ONE),
        ("6>5,5>4", 6, Fraction(5)),
    ]:
        f = PossibleForest.parse(spec)
        assert lemma1_probability(f, t, beta) == exact_subgraph_probability(f, t, beta)


def test_probability_range_over_catalog():
    for f in all_possible_forests(5):
        p = lemma1_probability(f, 6, Fraction(2, 3))
        assert 0 < p <= 1


def test_containment_monotone_under_edge_removal():
    # P(S) <= P(S minus one edge) for every catalog forest with >= 2 edges
    for f in all_possible_forests(5):
        if len(f.edges) < 2:
            continue
        p = lemma1_probability(f, 5, ONE)
        for drop in range(len(f.edges)):
            rest = f.edges[:drop] + f.edges[drop + 1:]
            p_sub = lemma1_probability(PossibleForest(rest), 5, ONE)
            assert p <= p_sub


def test_horizon_validation():
    f = PossibleForest.parse("5>1")
    with pytest.raises(HorizonError):
        lemma1_probability(f, 4, ONE)
    with pytest.raises(ParameterError):
        lemma1_probability(f, 5, 0.0)


# -- leading-order form ----------------------------------------------------------

def test_lemma2_is_finite_positive():
    f = PossibleForest.parse("2>1")
    v = lemma2_leading(f, 2, 1.0)
    assert 0 < v < math.inf


def test_lemma2_ratio_envelope_single_edge():
    # measured ratios for (2j, j) lie in [0.90, 1.0] and tighten monotonically
    for beta in (0.5, 1.0, 2.0):
        gaps = []
        for j in (10, 100, 1000, 10_000):
            f = PossibleForest(((2 * j, j),))
            ratio = lemma2_leading(f, 2 * j, beta) / lemma1_probability(f, 2 * j, beta)
            assert 0.8 <= ratio <= 1.25
            gaps.append(abs(ratio - 1.0))
        assert gaps == sorted(gaps, reverse=True)
        assert gaps[-1] < 1e-3


def test_lemma2_ratio_envelope_two_edges():
    gaps = []
    for j in (10, 100, 1000):
        f = PossibleForest(((2 * j, j), (3 * j, j)))
        ratio = lemma2_leading(f, 3 * j, 1.0) / lemma1_probability(f, 3 * j, 1.0)
        assert 0.8 <= ratio <= 1.25
        gaps.append(abs(ratio - 1.0))
    assert gaps == sorted(gaps, reverse=True)


# -- triangle density -------------------------------------------------------------

def test_triple_density_vanishes_for_m1():
    assert expected_triangles_on_triple(3, 7, 20, 1, 1.0) == 0.0


def test_triple_density_hand_value():
    # (40/27) * (10^2 * 20^3 * 40^4)^(-1/3)
    want = (40 / 27) * (10**2 * 20**3 * 40**4) ** (-1 / 3)
    got = expected_triangles_on_triple(10, 20, 40, 2, 1.0)
    assert got == pytest.approx(want, rel=1e-12)
    assert got == pytest.approx(1.16659e-4, rel=1e-4)


def test_triple_density_scaling():
    beta = 1.3
    v1 = expected_triangles_on_triple(5, 9, 14, 3, beta)
    v2 = expected_triangles_on_triple(10, 18, 28, 3, beta)
    assert v2 / v1 == pytest.approx(2 ** (-(6 + 3 * beta) / (2 + beta)), rel=1e-12)


def test_triple_order_enforced():
    with pytest.raises(ParameterError):
        expected_triangles_on_triple(5, 5, 9, 2, 1.0)
    with pytest.raises(ParameterError):
        adjacent_pair_case_density("middle", 4, 3, 9, 2, 1.0)
    with pytest.raises(ParameterError):
        adjacent_pair_case_density("sideways", 1, 2, 3, 2, 1.0)


# -- adjacent-pair densities -------------------------------------------------------

def test_largest_case_vanishes_for_m1():
    assert adjacent_pair_case_density("largest", 2, 5, 9, 1, 1.0) == 0.0


def _integrated_case(case, n, m, beta):
    i = np.arange(1, n + 1, dtype=np.float64)
    if case == "middle":
        ea, eb, ec = 1 / (2 + beta), 1.0, (1 + beta) / (2 + beta)
    elif case == "largest":
        ea, eb, ec = 1 / (2 + beta), 1 / (2 + beta), (2 + 2 * beta) / (2 + beta)
    else:
        ea, eb, ec = 2 / (2 + beta), (1 + beta) / (2 + beta), (1 + beta) / (2 + beta)
    coef = adjacent_pair_case_density(case, 1, 2, 3, m, beta) * (
        1.0 ** ea * 2.0 ** eb * 3.0 ** ec
    )
    ca = np.cumsum(i ** -ea)
    inner = np.cumsum(i ** -eb * np.concatenate(([0.0], ca[:-1])))
    return coef * float(np.sum(i[2:] ** -ec * inner[1:-1]))


def test_integrated_middle_case_total():
    # summed over all labelled triples the middle case approaches m^2 n
    n, m, beta = 200_000, 2, 1.0
    total = _integrated_case("middle", n, m, beta)
    assert total == pytest.approx(m * m * n, rel=0.02)
    closer = abs(_integrated_case("middle", n, m, beta) / (m * m * n) - 1)
    farther = abs(_integrated_case("middle", 2000, m, beta) / (m * m * 2000) - 1)
    assert closer < farther


def test_integrated_largest_case_total():
    n, m, beta = 200_000, 2, 1.0
    total = _integrated_case("largest", n, m, beta)
    assert total == pytest.approx(m * (m - 1) * n / 2, rel=0.01)


# -- constants and predictions -----------------------------------------------------

def test_constants_reference_point():
    cs = constants(2, 1.0)
    assert cs.c1 == pytest.approx(40 / 3, rel=1e-12)
    assert cs.c2 == pytest.approx(15.0, rel=1e-12)


def test_constants_m1_and_beta2():
    assert constants(1, 0.7).c1 == 0.0
    assert constants(1, 2.0).c2 == pytest.approx(3.0)
    for m, beta in ((1, 0.3), (2, 1.0), (4, 2.5)):
        cs = constants(m, beta)
        assert cs.c2 > 0
        assert cs.c1 > 0 if m >= 2 else cs.c1 == 0


def test_constants_blow_up_as_beta_vanishes():
    cs = constants(2, 1e-9)
    assert cs.c1 > 1e15 and cs.c2 > 1e8


def test_predicted_triangles():
    assert predicted_triangles(1000, 1, 1.0) == 0.0
    assert predicted_triangles(1000, 2, 1.0) == pytest.approx(40 / 3 * math.log(1000))
    assert predicted_triangles(1000, 2, 1.0) == pytest.approx(92.103, abs=0.001)
    delta = predicted_triangles(2000, 2, 1.0) - predicted_triangles(1000, 2, 1.0)
    assert delta == pytest.approx(40 / 3 * math.log(2), rel=1e-12)


def test_predicted_adjacent_pairs():
    assert predicted_adjacent_pairs(1000, 2, 1.0) == pytest.approx(15_000.0)
    assert predicted_adjacent_pairs(500, 1, 2.0) == pytest.approx(3 * 500)
    assert predicted_adjacent_pairs(2000, 3, 0.7) == pytest.approx(
        2 * predicted_adjacent_pairs(1000, 3, 0.7)
    )


def test_predicted_clustering():
    assert predicted_clustering(1000, 1, 1.0) == 0.0
    assert predicted_clustering(1000, 2, 1.0) == pytest.approx(0.018421, abs=1e-6)
    v1 = predicted_clustering(10**4, 2, 1.0) * 10**4 / math.log(10**4)
    v2 = predicted_clustering(10**6, 2, 1.0) * 10**6 / math.log(10**6)
    assert v1 == pytest.approx(v2, rel=1e-12)
    assert v1 == pytest.approx(8 / 3, rel=1e-12)


# -- block growth -------------------------------------------------------------------

def test_block_growth_at_anchor_is_one():
    assert block_growth_expectation(50, 50, 1.0) == pytest.approx(1.0)


def test_block_growth_reference_value():
    v = block_growth_expectation(100, 10_000, 1.0)
    assert v == pytest.approx(100 ** (1 / 3), rel=0.01)
    assert v > 100 ** (1 / 3)  # finite-size correction is upward


def test_block_growth_validation():
    with pytest.raises(ParameterError):
        block_growth_expectation(10, 5, 1.0)
    with pytest.raises(ParameterError):
        block_growth_expectation(0, 5, 1.0)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 500),
    st.integers(0, 500),
    st.integers(0, 500),
    st.floats(0.1, 5.0),
)
def test_block_growth_telescopes(s, d1, d2, beta):
    t = s + d1
    u = t + d2
    lhs = block_growth_expectation(s, t, beta) * block_growth_expectation(t, u, beta)
    assert lhs == pytest.approx(block_growth_expectation(s, u, beta), rel=1e-9)
