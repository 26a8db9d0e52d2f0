import random
from fractions import Fraction

import pytest

from qvbs.qnum import LaurentQ, RadScalar, q_factorial, q_integer
from qvbs.weylrep import (
    HGEN,
    QH,
    QH_INV,
    XMINUS,
    XPLUS,
    SitePoly,
    StateVector,
    apply_boson,
    apply_generator,
    bond_factor,
    coproduct_apply,
    poly_to_spin,
    spin_to_poly,
    weight_radicand,
)


def test_raising_on_lowest_weight():
    # X+ on y^2 for a spin-1 site gives [2] x y
    r = apply_generator(SitePoly.var(1, "y", 2), XPLUS, 1)
    assert r == SitePoly.monomial({1: (1, 1)}, q_integer(2))


def test_raising_kills_highest_weight():
    for S in (1, 2, 3):
        assert apply_generator(SitePoly.var(1, "x", 2 * S), XPLUS, 1).is_zero


def test_qh_weight():
    # q^H multiplies x^(S+m) y^(S-m) by q^(2m)
    for S, m in ((1, 0), (2, 1), (3, -2)):
        p = SitePoly.monomial({1: (S + m, S - m)})
        assert apply_generator(p, QH, 1) == p.scale(LaurentQ.q_power(2 * m))
        assert apply_generator(p, QH_INV, 1) == p.scale(LaurentQ.q_power(-2 * m))


def test_unknown_generator_rejected():
    with pytest.raises(ValueError):
        apply_generator(SitePoly.one(), "Z", 1)


@pytest.mark.parametrize("a,b", [(a, b) for a in range(0, 9) for b in range(0, 9 - a)])
def test_algebra_relations_per_monomial(a, b):
    p = SitePoly.monomial({1: (a, b)})
    lhs = (apply_generator(apply_generator(p, XMINUS, 1), XPLUS, 1)
           - apply_generator(apply_generator(p, XPLUS, 1), XMINUS, 1))
    w = a - b
    rhs = SitePoly.zero() if w == 0 else p.scale(
        q_integer(abs(w)) * (1 if w > 0 else -1))
    assert lhs == rhs


@pytest.mark.parametrize("a,b", [(a, b) for a in range(0, 9) for b in range(0, 9 - a)])
def test_q_boson_relations(a, b):
    p = SitePoly.monomial({1: (a, b)})
    lhs = (apply_boson(apply_boson(p, "adag", 1), "a", 1)
           - apply_boson(apply_boson(p, "a", 1), "adag", 1).scale(LaurentQ.q_power(1)))
    assert lhs == p.scale(LaurentQ.q_power(-a))
    lhs = (apply_boson(apply_boson(p, "bdag", 1), "b", 1)
           - apply_boson(apply_boson(p, "b", 1), "bdag", 1).scale(LaurentQ.q_power(1)))
    assert lhs == p.scale(LaurentQ.q_power(-b))
    # number operators count
    assert apply_boson(p, "Na", 1) == (p.scale(a) if a else SitePoly.zero())
    assert apply_boson(p, "Nb", 1) == (p.scale(b) if b else SitePoly.zero())


def test_singlet_annihilated_by_coproduct():
    # the invariant two-site vector for one boson per site:
    # x_k y_l - q^-1 y_k x_l
    v = (SitePoly.monomial({1: (1, 0), 2: (0, 1)})
         - SitePoly.monomial({1: (0, 1), 2: (1, 0)}, LaurentQ.q_power(-1)))
    # spin-1/2 weights are odd, so integer-weight machinery must refuse
    with pytest.raises(ValueError):
        coproduct_apply(v, XPLUS, (1, 2))
    # the integer-spin singlet (two bosons per site) is annihilated
    s = (SitePoly.monomial({1: (1, 0), 2: (0, 1)})
         - SitePoly.monomial({1: (0, 1), 2: (1, 0)}, LaurentQ.q_power(-2))) * \
        (SitePoly.monomial({1: (1, 0), 2: (0, 1)})
         - SitePoly.monomial({1: (0, 1), 2: (1, 0)}))
    assert coproduct_apply(s, XPLUS, (1, 2)).is_zero
    assert coproduct_apply(s, XMINUS, (1, 2)).is_zero


def test_coproduct_weight_additivity():
    for S in (1, 2, 3):
        p = SitePoly.monomial({1: (2 * S, 0), 2: (2 * S, 0)})
        assert coproduct_apply(p, HGEN, (1, 2)) == p.scale(4 * S)
        assert coproduct_apply(p, QH, (1, 2)) == p.scale(LaurentQ.q_power(4 * S))


def test_poly_to_spin_highest_weight():
    st = poly_to_spin(SitePoly.var(1, "x", 4), 2, (1,))
    assert set(st.amps) == {(2,)}
    amp = st.spin_amplitude((2,))
    # bookkeeping: coefficient 1 times sqrt([4]! [0]!)
    assert amp.value_eq(RadScalar.sqrt_of(q_factorial(4)))


def test_poly_to_spin_zero_and_errors():
    assert poly_to_spin(SitePoly.zero(), 2, (1, 2)).is_zero
    with pytest.raises(ValueError):
        poly_to_spin(SitePoly.var(1, "x", 3), 2, (1,))  # inhomogeneous
    with pytest.raises(ValueError):
        poly_to_spin(SitePoly.var(3, "x", 4), 2, (1, 2))  # stray site


def test_round_trip_random_two_site():
    rng = random.Random(11)
    amps = {}
    for m1 in range(-2, 3):
        for m2 in range(-2, 3):
            c = rng.randint(-6, 6)
            if c:
                amps[(m1, m2)] = LaurentQ({rng.randint(-2, 2): c})
    st = StateVector(2, 2, amps)
    back = poly_to_spin(spin_to_poly(st, (1, 2)), 2, (1, 2))
    assert back.amps == st.amps


def test_statevector_dense_ordering():
    st = StateVector(1, 2, {(1, -1): LaurentQ.one()})
    v = st.to_dense(Fraction(1))
    # digits are S-m: (1,-1) -> (0,2) -> index 2
    assert v[2] != 0 and abs(v[2] - 2.0) < 1e-12  # sqrt([2]!)^2 at q=1 is 2
    assert (v != 0).sum() == 1


def test_norm_squared_collapses_radicals():
    st = StateVector(1, 2, {(1, -1): LaurentQ.one(), (0, 0): q_integer(2)})
    n2 = st.norm_squared()
    expect = (q_factorial(2) * q_factorial(2)
              + q_integer(2) * q_integer(2))
    assert n2 == expect


def test_proportionality_and_translation():
    st = StateVector(1, 2, {(1, -1): q_integer(2), (0, 0): q_integer(3)})
    assert st.proportional_to(st.scaled(q_integer(5)))
    other = StateVector(1, 2, {(1, -1): q_integer(2), (0, 0): q_integer(4)})
    assert not st.proportional_to(other)
    tr = st.translated()
    assert tr.amps[(-1, 1)] == q_integer(2)


def test_bond_factor_shape():
    f = bond_factor(2, 1, 2)
    assert f == (SitePoly.monomial({1: (1, 0), 2: (0, 1)}, LaurentQ.q_power(2))
                 - SitePoly.monomial({1: (0, 1), 2: (1, 0)}, LaurentQ.q_power(-2)))


def test_sitepoly_text_dump_deterministic():
    p = bond_factor(1, 2, 1) * SitePoly.var(1, "x")
    assert str(p) == str(bond_factor(1, 2, 1) * SitePoly.var(1, "x"))
    assert "x1" in str(p)


def test_weight_radicand():
    assert weight_radicand(2, 1) == q_factorial(3) * q_factorial(1)
