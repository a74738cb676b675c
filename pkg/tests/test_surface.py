from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from esfme.oracle import design_matrix, float_refine, lsq_solve
from esfme.surface import (
    OFFSETS,
    CostGrid,
    SurfaceParams,
    extremum,
    fit_surface,
    fractional_refine,
    round_quarter_divfree,
)

SCALE = np.array([6, 6, 12, 12, 12])
costs9 = st.lists(st.integers(0, 1 << 20), min_size=9, max_size=9)

SHIFTED_BOWL = [[29, 5, 13], [29, 5, 13], [61, 37, 45]]  # 16(x-1/4)^2 + 16(y+1/2)^2


def test_pseudo_inverse_gives_integer_weights():
    # rows of (X^T X)^-1 X^T, scaled, are the integer weights of fit_surface
    X = design_matrix()
    pinv = np.linalg.pinv(X)[:5] * SCALE[:, None]
    assert np.allclose(pinv, np.round(pinv), atol=1e-9)
    weights = np.round(pinv).astype(int)
    for i, e in enumerate(np.eye(9, dtype=int)):
        assert tuple(fit_surface(CostGrid(e.tolist()))) == tuple(weights[:, i])


def test_reference_weight_formulas():
    # p1 = 3 sum(c x^2) - 2 sum(c), ..., p5 = 2 sum(c y)
    for e in np.eye(9, dtype=int):
        x, y = OFFSETS[int(np.argmax(e))]
        assert fit_surface(CostGrid(e.tolist())) == (3 * x * x - 2, 3 * y * y - 2, 3 * x * y, 2 * x, 2 * y)


@given(costs9)
def test_fit_matches_float_least_squares(costs):
    p = np.array(fit_surface(CostGrid(costs)), float) / SCALE
    ref = lsq_solve(design_matrix(), costs)[:5]
    assert np.allclose(p, ref, rtol=1e-9, atol=1e-9 * max(costs + [1]))


def test_flat_grid():
    assert fit_surface(CostGrid([100] * 9)) == (0, 0, 0, 0, 0)
    assert extremum(SurfaceParams(0, 0, 0, 0, 0))[2] == 0
    assert fractional_refine(CostGrid([100] * 9)) == (0, 0)


def test_unit_paraboloid():
    g = CostGrid.from_rows([[2, 1, 2], [1, 0, 1], [2, 1, 2]])
    assert g.at(-1, -1) == 2 and g.at(0, 0) == 0
    assert fit_surface(g) == (6, 6, 0, 0, 0)
    assert extremum(fit_surface(g)) == (0, 0, -576)
    assert fractional_refine(g) == (0, 0)


def test_shifted_bowl_rows_sample_the_polynomial():
    g = CostGrid.from_function(lambda x, y: 16 * Fraction(x * 4 - 1, 4) ** 2 + 16 * Fraction(y * 2 + 1, 2) ** 2)
    assert g.rows() == [tuple(r) for r in SHIFTED_BOWL]


def test_shifted_bowl_extremum_exact():
    g = CostGrid.from_rows(SHIFTED_BOWL)
    params = fit_surface(g)
    P = lsq_solve(design_matrix(), g.costs)
    assert np.allclose(np.array(params) / SCALE, P[:5])
    assert np.allclose(P[:5], [16, 16, 0, -8, 16])
    nx, ny, den = extremum(params)
    assert Fraction(nx, den) == Fraction(1, 4)
    assert Fraction(ny, den) == Fraction(-1, 2)
    assert fractional_refine(g) == (1, -2)


@given(costs9)
def test_extremum_matches_closed_form_in_floats(costs):
    P1, P2, P3, P4, P5, _ = lsq_solve(design_matrix(), costs)
    den_f = P3 * P3 - 4 * P1 * P2
    nx, ny, den = extremum(fit_surface(CostGrid(costs)))
    assert den == pytest.approx(144 * den_f, rel=1e-7, abs=1e-3)
    assume(abs(den) > 1e-6 * max(abs(P3 * P3), abs(4 * P1 * P2), 1.0) * 144)
    assert nx / den == pytest.approx((2 * P2 * P4 - P3 * P5) / den_f, rel=1e-6, abs=1e-9)
    assert ny / den == pytest.approx((2 * P1 * P5 - P3 * P4) / den_f, rel=1e-6, abs=1e-9)


def quarter_oracle(num, den, cap=3):
    v = Fraction(4 * num, den)
    k = abs(v)
    base = int(k)
    if k - base > Fraction(1, 2):
        base += 1
    base = min(base, cap)
    return -base if v < 0 else base


@pytest.mark.parametrize("num,den,k", [(0, 7, 0), (0, -7, 0), (1, 3, 1), (-5, 8, -2), (9, 2, 3),
                                       (5, 8, 2), (1, 8, 0), (-1, -3, 1), (1, -3, -1)])
def test_round_quarter_examples(num, den, k):
    assert round_quarter_divfree(num, den) == k


@given(st.integers(-10**12, 10**12), st.integers(-10**12, 10**12).filter(bool))
def test_round_quarter_matches_rational_oracle(num, den):
    assert round_quarter_divfree(num, den) == quarter_oracle(num, den)
    assert round_quarter_divfree(num, den, 2) == quarter_oracle(num, den, 2)


@given(st.integers(1, 10**6), st.integers(0, 3))
def test_round_quarter_exact_ties_go_toward_zero(den, k):
    # value exactly (2k+1)/8 pel
    num2, den2 = (2 * k + 1) * den, 8 * den
    assert round_quarter_divfree(num2, den2) == min(k, 3)
    assert round_quarter_divfree(-num2, den2) == -min(k, 3)


def test_round_quarter_needs_nonzero_den():
    with pytest.raises(ZeroDivisionError):
        round_quarter_divfree(1, 0)


@pytest.mark.parametrize("rows", [
    [[0, 0, 0], [5, 5, 5], [0, 0, 0]],          # ridge: p1 < 0
    [[4, 2, 4], [0, 0, 0], [4, 2, 4]],          # saddle
    [[10, 5, 10], [10, 5, 10], [10, 5, 10]],    # flat in y: p2 == 0
    [[0, 9, 9], [9, 9, 9], [9, 9, 0]],          # negative curvature
])
def test_fallback_on_non_minimum(rows):
    assert fractional_refine(CostGrid.from_rows(rows)) == (0, 0)


@given(costs9, st.integers(0, 1 << 30))
def test_shift_invariance(costs, c):
    g = CostGrid(costs)
    g2 = CostGrid([v + c for v in costs])
    assert fit_surface(g2) == fit_surface(g)
    assert fractional_refine(g2) == fractional_refine(g)


@given(costs9)
def test_preshift_never_changes_output(costs):
    g = CostGrid(costs)
    assert min(g.shifted().costs) == 0
    assert fractional_refine(g, preshift=False) == fractional_refine(g)


@given(costs9, st.integers(1, 1000))
def test_scale_invariance(costs, k):
    assert fractional_refine(CostGrid([v * k for v in costs])) == fractional_refine(CostGrid(costs))


@given(costs9)
def test_mirror_and_transpose(costs):
    g = CostGrid(costs)
    qx, qy = fractional_refine(g)
    assert fractional_refine(g.mirrored_x()) == (-qx, qy)
    assert fractional_refine(g.mirrored_y()) == (qx, -qy)
    assert fractional_refine(g.transposed()) == (qy, qx)


@settings(max_examples=300)
@given(costs9)
def test_refine_matches_float_oracle(costs):
    assert tuple(fractional_refine(CostGrid(costs))) == float_refine(costs)


@given(st.integers(1, 64), st.integers(1, 64), st.integers(-63, 63),
       st.integers(-56, 56), st.integers(-56, 56))
def test_exact_quadratic_recovers_rounded_minimum(a, b, c, x0, y0):
    # C = a(x-x0)^2 + b(y-y0)^2 + c(x-x0)(y-y0), minimum (x0, y0)/64, scaled by 64^2
    assume(c * c < 4 * a * b)
    def f(x, y):
        dx, dy = 64 * x - x0, 64 * y - y0
        return a * dx * dx + b * dy * dy + c * dx * dy
    g = CostGrid.from_function(f)
    expect = (quarter_oracle(x0, 64), quarter_oracle(y0, 64))
    assert fractional_refine(g) == expect


def test_grid_validation():
    with pytest.raises(ValueError):
        CostGrid([1] * 8)
    with pytest.raises(ValueError):
        CostGrid([-1] + [0] * 8)


def test_max_quarters_two():
    g = CostGrid.from_function(lambda x, y: (4 * x - 3) ** 2 + (4 * y) ** 2)
    assert fractional_refine(g) == (3, 0)
    assert fractional_refine(g, max_quarters=2) == (2, 0)
