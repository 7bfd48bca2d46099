"""Closed-form probabilities, expectations and asymptotic constants.

The exact subgraph probability of a possible forest is a finite product: a
prefactor beta/(beta + indeg(v_1)), gamma-function ratios at integer offsets
over the in-vertices, one factor 1/((2+beta)(i-1)-2) per out-vertex, and
crossing corrections (1 + c_S(i)/((2+beta)(i-1)-2)) at every other index.
Because every gamma ratio sits at an integer offset the whole product stays
rational for rational beta, which is what the exactness tests rely on.  The
asymptotic predictions (triangle log-slope c1, adjacent-pair coefficient c2,
clustering 3*c1*log(n)/(c2*n)) deliberately drop their lower-order terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import HorizonError, ParameterError
from .forests import PossibleForest

_SMALLEST = "smallest"
_MIDDLE = "middle"
_LARGEST = "largest"
PAIR_CASES = (_SMALLEST, _MIDDLE, _LARGEST)


def _is_rational(beta) -> bool:
    return isinstance(beta, (int, Fraction)) and not isinstance(beta, bool)


def _check_beta(beta):
    if not beta > 0:
        raise ParameterError(f"beta must be > 0, got {beta!r}")
    return Fraction(beta) if _is_rational(beta) else float(beta)


def _rising_from_one(beta, d: int):
    """Gamma(1 + beta + d) / Gamma(1 + beta) as the finite product (beta+1)...(beta+d)."""
    out = beta / beta  # one, in beta's arithmetic
    for k in range(1, d + 1):
        out = out * (beta + k)
    return out


def _validate_forest_horizon(forest: PossibleForest, t: int):
    if not isinstance(forest, PossibleForest):
        raise ParameterError("expected a PossibleForest")
    if t < forest.max_vertex:
        raise HorizonError(
            f"horizon {t} is below the forest's largest vertex {forest.max_vertex}"
        )


def lemma1_probability(forest: PossibleForest, t: int, beta):
    """Exact probability that the forest is a (labelled) subgraph at horizon t.

    Exact rationals for rational beta, IEEE floats otherwise.  Every factor
    beyond the forest's largest vertex equals one, so the value does not
    depend on t once t >= s_k.
    """
    _validate_forest_horizon(forest, t)
    beta = _check_beta(beta)
    one = beta / beta

    prob = beta / (beta + forest.in_degree(1))
    for v in forest.v_minus:
        prob = prob * _rising_from_one(beta, forest.in_degree(v))
    v_plus = forest.v_plus
    cvals = forest.c_values()
    for i in range(2, forest.max_vertex + 1):
        denom = (2 + beta) * (i - 1) - 2
        if i in v_plus:
            prob = prob / denom
        elif cvals[i]:
            prob = prob * (one + cvals[i] / denom)
    return prob


def lemma2_leading(forest: PossibleForest, t: int, beta) -> float:
    """Leading-order approximation of the subgraph probability.

    Replaces the per-index product with one power-law factor per edge and
    drops the multiplicative error term entirely, so this is a float-only
    approximation, validated against :func:`lemma1_probability` by ratio.
    """
    _validate_forest_horizon(forest, t)
    beta = float(_check_beta(beta))
    prob = beta / (beta + forest.in_degree(1))
    for v in forest.v_minus:
        prob *= _rising_from_one(beta, forest.in_degree(v))
    for i, j in forest.edges:
        prob *= 1.0 / ((2 + beta) * (i ** (1 + beta) * j) ** (1 / (2 + beta)))
    return prob


def _check_triple(a, b, c):
    if not a < b < c:
        raise ParameterError(f"need a < b < c, got ({a}, {b}, {c})")
    if a < 1:
        raise ParameterError("triple indices are 1-based")


def expected_triangles_on_triple(a: int, b: int, c: int, m: int, beta) -> float:
    """Leading-order expected triangles on the labelled triple a < b < c."""
    _check_triple(a, b, c)
    beta = float(_check_beta(beta))
    r = (1 + beta) / (2 + beta)
    coef = m * (m - 1) * r * r + m * (m - 1) ** 2 * r ** 3
    scale = math.exp(
        -(2 * math.log(a) + (2 + beta) * math.log(b) + (2 + 2 * beta) * math.log(c))
        / (2 + beta)
    )
    return coef * scale


def adjacent_pair_case_density(case: str, a: int, b: int, c: int, m: int,
                               beta) -> float:
    """Leading-order expected adjacent-pair count on the labelled triple.

    The case names the position of the common vertex among a < b < c:
    "smallest" (pairs b-a, c-a), "middle" (b-a, c-b) or "largest" (c-a, c-b).
    """
    _check_triple(a, b, c)
    beta = float(_check_beta(beta))
    r = (1 + beta) / (2 + beta)
    la, lb, lc = math.log(a), math.log(b), math.log(c)
    if case == _SMALLEST:
        coef = m * (1 + beta) / (2 + beta) + m * (m - 1) * r * r
        expo = 2 * la + (1 + beta) * lb + (1 + beta) * lc
    elif case == _MIDDLE:
        coef = m * m * r * r
        expo = la + (2 + beta) * lb + (1 + beta) * lc
    elif case == _LARGEST:
        coef = m * (m - 1) * r * r
        expo = la + lb + (2 + 2 * beta) * lc
    else:
        raise ParameterError(f"case must be one of {PAIR_CASES}, got {case!r}")
    return coef * math.exp(-expo / (2 + beta))


@dataclass(frozen=True)
class TheoryConstants:
    """Asymptotic constants: triangle log-slope c1 and adjacent-pair coefficient c2."""

    c1: float
    c2: float
    m: int
    beta: float


def constants(m: int, beta) -> TheoryConstants:
    if int(m) != m or m < 1:
        raise ParameterError(f"m must be a positive integer, got {m!r}")
    beta = float(_check_beta(beta))
    c1 = (
        m * (m - 1) * (1 + beta) ** 2 / beta ** 2
        + m * (m - 1) ** 2 * (1 + beta) ** 3 / (beta ** 2 * (2 + beta))
    )
    c2 = (2 + 5 * beta) / (2 * beta) * m * m + (2 - beta) / (2 * beta) * m
    return TheoryConstants(c1, c2, int(m), beta)


def predicted_triangles(n: int, m: int, beta) -> float:
    """c1 * ln(n); the O(1) additive term is not modelled."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    return constants(m, beta).c1 * math.log(n)


def predicted_adjacent_pairs(n: int, m: int, beta) -> float:
    """c2 * n; the O(n^(2/(2+beta))) term is not modelled."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    return constants(m, beta).c2 * n


def predicted_clustering(n: int, m: int, beta) -> float:
    """3 * c1 * ln(n) / (c2 * n)."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    cs = constants(m, beta)
    return 3.0 * cs.c1 * math.log(n) / (cs.c2 * n)


def block_growth_expectation(s: int, t: int, beta) -> float:
    """Exact mean size at time t of a block that was a singleton at time s.

    Telescoping the one-step growth factor (u - 1/(2+beta)) / (u - 2/(2+beta))
    gives a ratio of gamma functions, evaluated via log-gamma differences;
    asymptotically (t/s)^(1/(2+beta)).
    """
    if not 1 <= s <= t:
        raise ParameterError(f"need 1 <= s <= t, got s={s}, t={t}")
    beta = float(_check_beta(beta))
    x = 1.0 / (2 + beta)
    return math.exp(
        math.lgamma(t - x) - math.lgamma(t - 2 * x)
        + math.lgamma(s - 2 * x) - math.lgamma(s - x)
    )
