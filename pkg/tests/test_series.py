from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kronlab.arith import RingMismatchError
from kronlab.modforms import eisenstein_g
from kronlab.series import (
    BiJet,
    PrecisionError,
    QSeries,
    bijet_substitute,
    qs_add,
    qs_mul,
    qs_rescale,
    qs_scale,
    theta_op,
    trigen_mul,
)


def test_mul_example():
    a = QSeries(3, [1, 1])      # 1 + q
    b = QSeries(3, [1, -1])     # 1 - q
    assert qs_mul(a, b) == QSeries(3, [1, 0, -1])


def test_g4_square_constant():
    g4 = eisenstein_g(4, 6).series
    sq = qs_mul(g4, g4)
    assert sq.coeffs[0] == Fraction(1, 57600)


def test_precision_law():
    a = QSeries(5, [1, 2, 3, 4, 5])
    b = QSeries(3, [1, 1, 1])
    assert qs_mul(a, b).prec == 3
    assert qs_add(a, b).prec == 3


def test_coeff_beyond_precision_raises():
    a = QSeries(4, [1, 2, 3, 4])
    with pytest.raises(PrecisionError):
        a.coeff(4)
    assert a.coeff(3) == 4


def test_theta_op():
    g4 = eisenstein_g(4, 5).series
    assert theta_op(g4, 0) == g4
    assert theta_op(g4, 1).coeffs[2] == 18
    q = QSeries(4, [0, 1])
    assert theta_op(q, 2) == q


def test_rescale():
    f = QSeries(6, [0, 1, 1])  # q + q^2
    assert qs_rescale(f, 1) == f
    assert qs_rescale(f, 2) == QSeries(6, [0, 0, 1, 0, 1])
    g4 = eisenstein_g(4, 8).series
    assert qs_rescale(g4, 5).coeffs[0] == Fraction(1, 240)


def test_ring_mismatch():
    from kronlab.arith import Cyclotomic

    a = QSeries(3, [Cyclotomic.zeta(5), 0, 0])
    b = QSeries(3, [0.5 + 0j, 0, 0])
    with pytest.raises(RingMismatchError):
        qs_mul(a, b)


def _simple_jet(prec=4, degree=3):
    entries = {
        (1, 0): QSeries(prec, [Fraction(1, 2), 1]),
        (0, 1): QSeries(prec, [Fraction(1, 2), 1]),
        (2, 1): QSeries(prec, [0, -1]),
        (1, 2): QSeries(prec, [0, -1]),
    }
    return BiJet(degree, prec, entries, polar_u=1, polar_v=1)


def test_substitute_monomials():
    jet = _simple_jet()
    a = bijet_substitute(jet, "XT_YT")
    # u^1 v^0 -> X T, carrying its q-series unchanged
    assert a.layers[1][(1, 0)] == jet.entries[(1, 0)]
    # polar slots land at T^(-1) as X^(-1) resp. Y^(-1) records
    assert a.layers[-1][(-1, 0)].coeffs[0] == 1
    b = bijet_substitute(jet, "T_-XYT")
    # u^0 v^1 -> -XY T
    assert b.layers[1][(1, 1)].coeffs[0] == Fraction(-1, 2)
    # polar 1/u -> T^(-1) record at (0, 0); 1/v -> -(XY)^(-1) T^(-1)
    assert b.layers[-1][(0, 0)].coeffs[0] == 1
    assert b.layers[-1][(-1, -1)].coeffs[0] == -1


def test_trigen_principal_from_polar_product():
    jet = _simple_jet()
    tri = trigen_mul(bijet_substitute(jet, "XT_YT"), bijet_substitute(jet, "T_-XYT"), 6)
    assert tri.principal == {(0, -1): 1, (-1, 0): 1, (-1, -2): -1, (-2, -1): -1}


def test_trigen_weight_bound():
    jet = _simple_jet()
    tri = trigen_mul(bijet_substitute(jet, "XT_YT"), bijet_substitute(jet, "T_-XYT"), 4)
    for k, row in tri.weights.items():
        assert 2 <= k <= 4
        for (a, b) in row:
            assert a <= k - 1 and b <= k - 1


def test_unsupported_substitution():
    with pytest.raises(ValueError):
        bijet_substitute(_simple_jet(), "YT_XT")


@settings(max_examples=40, deadline=None, derandomize=True)
@given(
    st.lists(st.integers(-4, 4), min_size=2, max_size=6),
    st.lists(st.integers(-4, 4), min_size=2, max_size=6),
)
def test_mul_matches_polynomial_oracle(xs, ys):
    pa, pb = len(xs), len(ys)
    a = QSeries(pa, xs)
    b = QSeries(pb, ys)
    prod = qs_mul(a, b)
    prec = min(pa, pb)
    for n in range(prec):
        expect = sum(xs[i] * ys[n - i] for i in range(n + 1) if i < pa and n - i < pb)
        assert prod.coeff(n) == expect


@settings(max_examples=30, deadline=None, derandomize=True)
@given(st.integers(2, 6), st.integers(1, 3))
def test_precision_contract_fuzz(prec, d):
    f = QSeries(prec, list(range(1, prec + 1)))
    g = qs_rescale(f, d)
    assert g.prec == prec
    with pytest.raises(PrecisionError):
        g.coeff(prec)
    with pytest.raises(PrecisionError):
        qs_mul(f, QSeries(prec, [1])).coeff(prec)


def test_substitution_specializes_to_direct_product():
    # collapsing X = Y = 1 and T = u = v must reproduce the jet product values
    jet = _simple_jet()
    A = bijet_substitute(jet, "XT_YT")
    total_a = {}
    for t, rows in A.layers.items():
        for _, series in rows.items():
            total_a[t] = total_a.get(t, QSeries.zero(series.prec)) + series
    # sum over monomials at X=Y=1 equals the jet's own T-layer sums
    direct = {}
    for (r, s), series in jet.entries.items():
        t = r + s
        direct[t] = direct.get(t, QSeries.zero(series.prec)) + series
    direct[-1] = QSeries.constant(jet.polar_u + jet.polar_v, jet.prec)
    for t in direct:
        assert total_a[t] == direct[t]


def test_qseries_json_shape():
    q = QSeries(2, [Fraction(1, 2), 3])
    assert q.to_json() == {"prec": 2, "coeffs": ["1/2", "3/1"]}
