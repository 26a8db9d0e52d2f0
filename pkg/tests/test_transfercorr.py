import numpy as np
import pytest
from fractions import Fraction

from qvbs.mpscore import dense_pbc_two_point_sz
from qvbs.qnum import RatQ, q_integer
from qvbs.transfercorr import (
    SpectralGapError,
    conjecture_exact_certificate,
    conjecture_moment_identity,
    exact_trace_power,
    TransferMatrix,
    closed_form_szsz,
    conjecture_check,
    conjectured_eigenvalue,
    conjectured_eigenvalue_float,
    eigensystem,
    identity_operator,
    isotropic_szsz_limit,
    one_point_finite,
    one_point_thermo,
    sz_distribution,
    sz_distribution_exact,
    sz_operator,
    sz_probabilities_reference_spin2,
    top_eigenvector_exact,
    transfer_diag_block_exact,
    transfer_matrix,
    two_point_finite,
    two_point_thermo,
    two_point_thermo_printed_form,
)

Q_GRID = (Fraction(1, 2), Fraction(4, 5), Fraction(1), Fraction(5, 4), Fraction(2))


def test_spectrum_s2_isotropic():
    es = eigensystem(transfer_matrix(2, 1))
    vals = [(round(v), m) for v, m in es.groups]
    assert vals == [(40, 1), (-20, 3), (4, 5)]


def test_spectrum_s1():
    es = eigensystem(transfer_matrix(1, 1))
    assert [(round(v), m) for v, m in es.groups] == [(3, 1), (-1, 3)]


def test_transfer_selection_rule_and_symmetry():
    for S in (1, 2, 3, 4, 5):
        G = transfer_matrix(S, Fraction(4, 5)).matrix
        d = S + 1
        assert np.abs(G - G.T).max() < 1e-12 * np.abs(G).max()
        for a in range(d):
            for b in range(d):
                for c in range(d):
                    for e in range(d):
                        if a - b != c - e:
                            assert G[a * d + b, c * d + e] == 0.0


def test_transfer_sz_factor():
    # the sz-sandwiched matrix vanishes on entries with d == b
    S = 2
    G = transfer_matrix(S, Fraction(4, 5), "sz").matrix
    d = S + 1
    for a in range(d):
        for b in range(d):
            for c in range(d):
                if G[a * d + b, c * d + b] != 0.0:
                    raise AssertionError("sz insertion must kill d == b entries")


def test_transfer_custom_operator_matches_tagged():
    S = 2
    a = transfer_matrix(S, Fraction(4, 5), "sz").matrix
    b = transfer_matrix(S, Fraction(4, 5), sz_operator(S)).matrix
    assert np.abs(a - b).max() == 0.0


def test_transfer_rejects_nonpositive_q():
    with pytest.raises(ValueError):
        transfer_matrix(2, 0)


def test_eigensystem_properties():
    tm = transfer_matrix(2, Fraction(4, 5))
    es = eigensystem(tm)
    E = es.vectors
    assert np.abs(E.T @ E - np.eye(9)).max() < 1e-12
    recon = E @ np.diag(es.eigenvalues) @ E.T
    assert np.abs(recon - tm.matrix).max() < 1e-10 * np.abs(tm.matrix).max()
    assert sum(m for _, m in es.groups) == 9


def test_eigensystem_gap_error():
    fake = TransferMatrix(1, 4, np.diag([2.0, 2.0, 1.0, 0.5]), "id")
    with pytest.raises(SpectralGapError):
        eigensystem(fake)
    fake2 = TransferMatrix(1, 4, np.diag([2.0, -2.0, 1.0, 0.5]), "id")
    with pytest.raises(SpectralGapError):
        eigensystem(fake2)


def test_conjectured_eigenvalue_exact_s2():
    i2, i4, i5 = q_integer(2), q_integer(4), q_integer(5)
    assert conjectured_eigenvalue(2, 0) == RatQ(i5 * i4 * i2)
    assert conjectured_eigenvalue(2, 1) == RatQ(-(i5 * i2 * i2))
    assert conjectured_eigenvalue(2, 2) == RatQ(i2 * i2)


def test_conjectured_eigenvalue_s1_isotropic():
    assert conjectured_eigenvalue_float(1, 0, 1) == pytest.approx(3.0)
    assert conjectured_eigenvalue_float(1, 1, 1) == pytest.approx(-1.0)


@pytest.mark.parametrize("S", (1, 2, 3, 4, 5))
def test_conjecture_against_diagonalization(S):
    for q0 in (Fraction(1, 2), Fraction(9, 10), Fraction(13, 10)):
        assert conjecture_check(S, q0)["match"]


def test_conjectured_eigenvalue_range():
    with pytest.raises(ValueError):
        conjectured_eigenvalue(2, 3)


def test_one_point_identity_and_sz():
    for S in (1, 2, 3):
        for q0 in (Fraction(4, 5), Fraction(1)):
            assert one_point_thermo(None, S, q0) == pytest.approx(1.0, abs=1e-12)
            assert one_point_thermo("sz", S, q0) == pytest.approx(0.0, abs=1e-12)
            assert one_point_finite("sz", S, q0, 8) == pytest.approx(0.0, abs=1e-12)
            assert one_point_finite(identity_operator(S), S, q0, 8) == \
                pytest.approx(1.0, abs=1e-12)


def test_two_point_finite_matches_dense():
    for r in (2, 3, 4):
        a = two_point_finite("sz", "sz", 2, Fraction(9, 10), 8, r)
        b = dense_pbc_two_point_sz(2, 8, Fraction(9, 10), r)
        assert abs(a - b) < 1e-11


def test_two_point_finite_r_range():
    with pytest.raises(ValueError):
        two_point_finite("sz", "sz", 2, 1, 10, 1)
    with pytest.raises(ValueError):
        two_point_finite("sz", "sz", 2, 1, 10, 11)


def test_finite_converges_to_thermo():
    q0 = Fraction(9, 10)
    t = two_point_thermo("sz", "sz", 2, q0, 5)
    assert abs(two_point_finite("sz", "sz", 2, q0, 200, 5) - t) < 1e-10


def test_printed_thermo_variant_disagrees():
    # the n-independent first factor collapses the sum to zero here; this is
    # the flagged discrepancy against the finite-size route
    q0 = Fraction(9, 10)
    printed = two_point_thermo_printed_form("sz", "sz", 2, q0, 5)
    finite = two_point_finite("sz", "sz", 2, q0, 200, 5)
    assert abs(printed) < 1e-12
    assert abs(finite) > 1e-3


def test_sz_distribution_isotropic_uniform():
    probs = sz_distribution(2, 1)
    assert np.allclose(probs, 0.2, atol=1e-12)


def test_sz_distribution_sums_to_one():
    for q0 in (Fraction(1, 2), Fraction(3, 4), Fraction(3, 2), Fraction(2)):
        assert abs(sum(sz_distribution(2, q0)) - 1) < 1e-14


def test_sz_distribution_planar_preference():
    probs = sz_distribution(2, Fraction(1, 2))
    assert probs[2] > 0.2  # P(m=0) grows away from the isotropic point


def test_sz_distribution_exact_matches_printed():
    exact = sz_distribution_exact(2)
    ref = sz_probabilities_reference_spin2()
    for m in range(-2, 3):
        assert exact[m] == ref[m]
    assert sum(exact.values(), RatQ(0)) == RatQ(1)


def test_sz_distribution_exact_matches_numeric():
    for S in (1, 2, 3):
        exact = sz_distribution_exact(S)
        numeric = sz_distribution(S, Fraction(4, 5))
        for m, p in zip(range(-S, S + 1), numeric):
            assert abs(exact[m].eval_float(Fraction(4, 5)) - p) < 1e-11


def test_top_eigenvector_exact_s2_isotropic():
    lam1, v = top_eigenvector_exact(2)
    assert lam1 == q_integer(5) * q_integer(4) * q_integer(2)
    vals = [c.eval_fraction(Fraction(1)) for c in v]
    assert vals[0] == vals[1] == vals[2] != 0


def test_diag_block_values_isotropic():
    block = transfer_diag_block_exact(2)
    at1 = [[float(e.eval_fraction(Fraction(1))) for e in row] for row in block]
    assert at1 == [[4.0, 12.0, 24.0], [12.0, 16.0, 12.0], [24.0, 12.0, 4.0]]


def test_closed_form_vs_thermo():
    for S in (2, 3):
        for q0 in (Fraction(7, 10), Fraction(1), Fraction(13, 10)):
            for r in range(2, 9):
                a = closed_form_szsz(S, q0, r)
                b = two_point_thermo("sz", "sz", S, q0, r)
                assert abs(a - b) <= 1e-9 * max(1.0, abs(a))


def test_closed_form_isotropic_limits():
    for r in range(2, 9):
        assert abs(closed_form_szsz(2, 1, r) - isotropic_szsz_limit(2, r)) < 1e-12
        assert abs(closed_form_szsz(3, 1, r) - isotropic_szsz_limit(3, r)) < 1e-12
        assert isotropic_szsz_limit(2, r) == pytest.approx(-6 * (-2.0) ** (-r))


def test_closed_form_restrictions():
    with pytest.raises(ValueError):
        closed_form_szsz(2, 1, 1)
    with pytest.raises(ValueError):
        closed_form_szsz(4, 1, 3)


def test_bar_symmetry_of_spectrum_and_correlator():
    for S in (1, 2, 3):
        e1 = eigensystem(transfer_matrix(S, Fraction(4, 5)))
        e2 = eigensystem(transfer_matrix(S, Fraction(5, 4)))
        assert np.abs(e1.eigenvalues - e2.eigenvalues).max() < 1e-9 * abs(e1.top)
    for S in (2, 3):
        a = two_point_thermo("sz", "sz", S, Fraction(4, 5), 4)
        b = two_point_thermo("sz", "sz", S, Fraction(5, 4), 4)
        assert abs(a - b) < 1e-9 * max(1, abs(a))


def test_decay_rate_matches_gap():
    q0 = Fraction(9, 10)
    es = eigensystem(transfer_matrix(2, q0))
    lam_ratio = es.groups[1][0] / es.groups[0][0]
    v1 = two_point_thermo("sz", "sz", 2, q0, 12)
    v2 = two_point_thermo("sz", "sz", 2, q0, 13)
    assert abs(v2 / v1 - lam_ratio) < 1e-6


def test_spin3_isotropic_adjacent_value():
    # the printed r=2 value at the isotropic point is -80/25
    assert two_point_thermo("sz", "sz", 3, 1, 2) == pytest.approx(-3.2, abs=1e-9)
    assert isotropic_szsz_limit(3, 2) == pytest.approx(-3.2)


def test_exact_trace_matches_numeric():
    for S in (1, 2, 3):
        t = exact_trace_power(S, 2).eval_float(Fraction(4, 5))
        G = transfer_matrix(S, Fraction(4, 5)).matrix
        assert abs(t - np.trace(G @ G)) < 1e-9 * abs(t)


def test_conjecture_moment_identities_exact():
    for S in (1, 2, 3, 4):
        for k in (1, 2, 3):
            assert conjecture_moment_identity(S, k)


def test_conjecture_exact_certificates():
    # identity-level proof of the closed-form spectrum with multiplicities;
    # S=5 also passes but takes minutes, so it is not run here
    for S in (1, 2, 3):
        rep = conjecture_exact_certificate(S)
        assert rep["characteristic_factors_annihilate"]
        assert rep["moment_identities"]
        assert rep["proved"]
