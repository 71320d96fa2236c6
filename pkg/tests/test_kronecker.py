from fractions import Fraction
from math import factorial

import pytest

from kronlab.arith import bernoulli_number
from kronlab.checks import quadratic_character
from kronlab.dirichlet import enumerate_characters, trivial_character
from kronlab.kronecker import (
    RouteMismatchError,
    eisenstein_combo,
    g_coefficient,
    g_km,
    kron_fourier,
    kron_laurent,
    product_B,
    rc_bracket,
    rc_bracket_modified,
)
from kronlab.modforms import eisenstein_g
from kronlab.series import QSeries, qs_add, qs_mul, qs_scale, theta_op


def test_polar_slots():
    assert kron_laurent(trivial_character(1), 6, 4).jet.polar_u == 1
    assert kron_laurent(quadratic_character(5), 6, 4).jet.polar_u == 0


def test_laurent_entry_10():
    chi = quadratic_character(5)
    jet = kron_laurent(chi, 10, 4).jet
    expect = qs_scale(eisenstein_combo(2, chi, 10), -1)
    assert jet.entry(1, 0) == expect
    # parity: even total degree entries vanish
    assert jet.entry(1, 1).is_zero()
    assert jet.entry(2, 0).is_zero()


def test_fourier_q0_axis_is_coth_at_level_one():
    # (1/2) coth(u/2) = 1/u + sum B_{r+1} u^r/(r+1)!
    jet = kron_fourier(trivial_character(1), 8, 7).jet
    for r in (1, 3, 5, 7):
        expect = bernoulli_number(r + 1) / Fraction(factorial(r + 1))
        assert jet.entry(r, 0).coeffs[0] == expect
        assert jet.entry(0, r).coeffs[0] == expect


def test_fourier_q1_coefficient():
    jet = kron_fourier(trivial_character(1), 6, 4).jet
    assert jet.entry(1, 0).coeffs[1] == -2


def test_cross_expansion_exact():
    for N in (1, 5):
        for chi in enumerate_characters(N):
            if chi.is_even() and chi.is_primitive():
                assert kron_laurent(chi, 14, 7).jet == kron_fourier(chi, 14, 7).jet


def test_requires_even_primitive():
    odd3 = enumerate_characters(3)[1]
    with pytest.raises(ValueError):
        kron_laurent(odd3, 6, 4)
    imprimitive = enumerate_characters(5)[0]
    with pytest.raises(ValueError):
        kron_fourier(imprimitive, 6, 4)


def test_rc_bracket_m0_is_product():
    f = eisenstein_g(4, 10).series
    g = eisenstein_g(6, 10).series
    assert rc_bracket(f, 4, g, 6, 0) == qs_mul(f, g)


def test_rc_bracket_antisymmetry():
    f = eisenstein_g(4, 12).series
    g = eisenstein_g(6, 12).series
    for m in (1, 2, 3):
        lhs = rc_bracket(g, 6, f, 4, m)
        rhs = qs_scale(rc_bracket(f, 4, g, 6, m), (-1) ** m)
        assert lhs == rhs


def test_rc_bracket_self_odd_vanishes():
    f = eisenstein_g(4, 12).series
    assert rc_bracket(f, 4, f, 4, 1).is_zero()


def test_modified_bracket_reduces_to_plain():
    chi5 = quadratic_character(5)
    f = eisenstein_g(4, 10).series
    g = eisenstein_g(6, 10).series
    # chi(0) = 0 at N > 1
    assert rc_bracket_modified(f, 4, g, 6, 1, chi5) == rc_bracket(f, 4, g, 6, 1)
    # both weights > 2 kill the deltas even at N = 1
    triv = trivial_character(1)
    assert rc_bracket_modified(f, 4, g, 6, 2, triv) == rc_bracket(f, 4, g, 6, 2)


def test_modified_bracket_weight22_correction():
    # [f, g]_0 + chi(0)(theta f / 2 + theta g / 2) at k1 = k2 = 2
    triv = trivial_character(1)
    f = eisenstein_combo(2, triv, 12)
    out = rc_bracket_modified(f, 2, f, 2, 0, triv)
    expect = qs_add(qs_mul(f, f), theta_op(f, 1))
    assert out == expect
    # and the combination is the weight-4 Eisenstein series: (5/3) G_4 * 1!1!
    assert out == qs_scale(eisenstein_g(4, 12).series, Fraction(5, 3))


def test_modified_bracket_antisymmetry():
    triv = trivial_character(1)
    f = eisenstein_combo(2, triv, 12)
    g = eisenstein_combo(4, triv, 12)
    for m in (0, 1, 2):
        lhs = rc_bracket_modified(g, 4, f, 2, m, triv)
        rhs = qs_scale(rc_bracket_modified(f, 2, g, 4, m, triv), (-1) ** m)
        assert lhs == rhs


def test_g_coefficient_routes_small():
    triv = trivial_character(1)
    chi5 = quadratic_character(5)
    for chi in (triv, chi5):
        for k1, k2, m in [(2, 2, 0), (2, 2, 1), (4, 2, 0), (2, 4, 1), (4, 4, 0), (6, 2, 1)]:
            g_coefficient(k1, k2, m, chi, 14)  # raises RouteMismatchError on failure


def test_g_coefficient_m0_n5_is_plain_product():
    chi = quadratic_character(5)
    got = g_coefficient(4, 6, 0, chi, 10)
    e1 = eisenstein_combo(4, chi, 10)
    e2 = eisenstein_combo(6, chi.conjugate(), 10)
    expect = qs_scale(qs_mul(e1, e2), Fraction(1, factorial(3) * factorial(5)))
    assert got == expect


def test_product_principal_part():
    tri = product_B(trivial_character(1), 6, 10)
    assert tri.principal == {(0, -1): 1, (-1, 0): 1, (-1, -2): -1, (-2, -1): -1}
    tri5 = product_B(quadratic_character(5), 6, 10)
    assert tri5.principal is None


def test_product_weight2_slice_vanishes_at_higher_level():
    tri5 = product_B(quadratic_character(5), 6, 10)
    assert tri5.weights.get(2, {}) == {}


def test_product_slice_symmetry():
    # coefficient of X^(k1-1) Y^0 matches X^0 Y^(k1-1)
    tri = product_B(quadratic_character(5), 8, 12)
    for k, row in tri.weights.items():
        for (a, b), series in row.items():
            assert (b, a) in row and row[(b, a)] == series


def test_product_routes_match():
    from kronlab.checks import suite_product_routes

    for N in (1, 5):
        chi = trivial_character(1) if N == 1 else quadratic_character(5)
        rep = suite_product_routes(N, chi, 8, 16)
        assert rep["passed"], rep


def test_g_km_normalization():
    chi = quadratic_character(5)
    g = g_km(2, 0, chi, 8)
    assert g == qs_scale(eisenstein_combo(2, chi, 8), -1)


def test_bracket_routes_with_complex_character():
    chi = next(
        c for c in enumerate_characters(13)
        if c.is_even() and c.is_primitive() and c.order == 3
    )
    g_coefficient(2, 2, 0, chi, 12)
    g_coefficient(4, 2, 1, chi, 12)
