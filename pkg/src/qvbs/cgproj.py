"""Two-site decomposition of V_S (x) V_S: highest-weight vectors, the full
orbit bases, oblique spin-J projectors, Hamiltonian assembly, and the
divisibility checker for the bond product.

Everything exact runs per weight sector: a fixed total weight w selects one
vector from each total spin J >= |w|, so the change of basis splits into
blocks of dimension at most 2S+1 and fraction-free elimination stays cheap.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
import scipy.sparse

from .linalg import adjugate, bareiss_det
from .qnum import LaurentQ, RadScalar, RatQ, q_integer
from .weylrep import (
    XMINUS,
    XPLUS,
    SitePoly,
    bond_factor,
    coproduct_apply,
    poly_to_spin,
    weight_radicand,
)


def budget_mb():
    return float(os.environ.get("QVBS_BUDGET_MB", "1024"))


class BudgetError(RuntimeError):
    pass


def check_budget(bytes_needed, what):
    limit = budget_mb() * 1024 * 1024
    if bytes_needed > limit:
        raise BudgetError(
            "%s needs ~%.0f MB, over the QVBS_BUDGET_MB limit of %.0f MB"
            % (what, bytes_needed / 2 ** 20, budget_mb())
        )


@dataclass
class HighestWeightVector:
    """Raising-annihilated vector of total spin J in V_Sk (x) V_Sl.

    `poly` is the closed product form on sites (1, 2); `coeffs` are the
    recursion coefficients (denominators cleared), indexed by m_k from the
    bottom of the support upward. Both are fixed only up to overall scale.
    """

    S_k: int
    S_l: int
    J: int
    poly: SitePoly
    coeffs: list


def _closed_form_poly(S_k, S_l, J):
    p = SitePoly.monomial({1: (S_k - S_l + J, 0), 2: (S_l - S_k + J, 0)})
    for m in range(1, S_k + S_l - J + 1):
        f = SitePoly.monomial({1: (1, 0), 2: (0, 1)}) - SitePoly.monomial(
            {1: (0, 1), 2: (1, 0)}, LaurentQ.q_power(2 * m - 2 - S_k - S_l)
        )
        p = p * f
    return p


def highest_weight(S_k, S_l, J):
    """Highest-weight vector, built two independent ways and cross-checked.

    The closed product form and the raising-condition recursion must agree up
    to scale, and the result must be annihilated by the two-site raising
    action; both are asserted here.
    """
    if not (abs(S_k - S_l) <= J <= S_k + S_l):
        raise ValueError("J=%d outside the Clebsch-Gordan range [%d, %d]"
                         % (J, abs(S_k - S_l), S_k + S_l))
    closed = _closed_form_poly(S_k, S_l, J)

    lo = max(-S_k, J - S_l)
    hi = min(S_k, J + S_l)
    # C_{m+1} = -q^(J+1) [S_k - m] / [S_l - J + m + 1] C_m, cleared so every
    # coefficient is a plain Laurent polynomial
    ups = [(-LaurentQ.q_power(J + 1)) * q_integer(S_k - j) for j in range(lo, hi)]
    downs = [q_integer(S_l - J + j + 1) for j in range(lo, hi)]
    coeffs = []
    for m in range(lo, hi + 1):
        c = LaurentQ.one()
        for j in range(lo, m):
            c = c * ups[j - lo]
        for j in range(m, hi):
            c = c * downs[j - lo]
        coeffs.append(c)
    rec = SitePoly.zero()
    for m, c in zip(range(lo, hi + 1), coeffs):
        rec = rec + SitePoly.monomial(
            {1: (S_k + m, S_k - m), 2: (S_l + J - m, S_l - J + m)}, c
        )
    if not rec.proportional_to(closed):
        raise AssertionError("recursion and closed form disagree for J=%d" % J)
    if not coproduct_apply(closed, XPLUS, (1, 2)).is_zero:
        raise AssertionError("closed form not annihilated by raising for J=%d" % J)
    return HighestWeightVector(S_k, S_l, J, closed, coeffs)


@lru_cache(maxsize=None)
def rep_basis(S, J):
    """Lowering orbit (2J+1 vectors) generated from the highest-weight vector."""
    if not (0 <= J <= 2 * S):
        raise ValueError("need 0 <= J <= 2S")
    v = highest_weight(S, S, J).poly
    orbit = [v]
    for _ in range(2 * J):
        v = coproduct_apply(v, XMINUS, (1, 2))
        if v.is_zero:
            raise AssertionError("orbit of J=%d collapsed early" % J)
        orbit.append(v)
    if not coproduct_apply(orbit[-1], XMINUS, (1, 2)).is_zero:
        raise AssertionError("orbit of J=%d did not terminate" % J)
    return orbit


@dataclass
class SectorData:
    w: int
    pairs: list        # (m1, m2) with m1 + m2 = w, m1 descending
    Js: list           # total spins contributing to this sector, ascending
    B: list            # columns = orbit vectors in the pair basis
    det: LaurentQ
    adj: list          # adj @ B = det * I


@lru_cache(maxsize=None)
def sector_system(S):
    """Per-weight change of basis between the pair basis and the J basis."""
    orbit_amps = {}
    for J in range(0, 2 * S + 1):
        for t, poly in enumerate(rep_basis(S, J)):
            orbit_amps[(J, t)] = poly_to_spin(poly, S, (1, 2)).amps
    sectors = {}
    for w in range(-2 * S, 2 * S + 1):
        pairs = [(m1, w - m1)
                 for m1 in range(min(S, w + S), max(-S, w - S) - 1, -1)]
        Js = list(range(abs(w), 2 * S + 1))
        B = [[orbit_amps[(J, J - w)].get(p, LaurentQ.zero()) for J in Js]
             for p in pairs]
        det = bareiss_det(B)
        if det.is_zero:
            raise AssertionError("singular change of basis in sector w=%d" % w)
        sectors[w] = SectorData(w, pairs, Js, B, det, adjugate(B))
    return sectors


class Projector:
    """Oblique projector onto the total-spin-J block of the two-site space.

    Exact data lives sector by sector as a rank-one core: column of B times
    row of adj(B) over det(B). Physical-basis entries carry the usual
    sqrt-normalization dressing and are exposed as radical scalars.
    """

    def __init__(self, S, J):
        if not (0 <= J <= 2 * S):
            raise ValueError("need 0 <= J <= 2S")
        self.S = S
        self.J = J
        self.dim = (2 * S + 1) ** 2
        self._cores = {}
        for w, sec in sector_system(S).items():
            if J not in sec.Js:
                continue
            j = sec.Js.index(J)
            col = [row[j] for row in sec.B]
            dual = sec.adj[j]
            self._cores[w] = (sec.pairs, col, dual, sec.det)

    def pair_index(self, pair):
        m1, m2 = pair
        return (self.S - m1) * (2 * self.S + 1) + (self.S - m2)

    def apply_mono(self, amps):
        """Exact action on monomial-gauge pair amplitudes.

        Returns (out_amps, den): the projected amplitudes times den, with den
        the sector determinant, so callers can compare without division.
        Input must live in a single weight sector.
        """
        ws = {m1 + m2 for (m1, m2) in amps}
        if len(ws) != 1:
            raise ValueError("apply_mono expects a single weight sector")
        w = ws.pop()
        core = self._cores.get(w)
        if core is None:
            return {}, LaurentQ.one()
        pairs, col, dual, det = core
        vec = [amps.get(p, LaurentQ.zero()) for p in pairs]
        s = LaurentQ.zero()
        for d, v in zip(dual, vec):
            if not (d.is_zero or v.is_zero):
                s = s + d * v
        out = {}
        if not s.is_zero:
            for p, c in zip(pairs, col):
                v = c * s
                if not v.is_zero:
                    out[p] = v
        return out, det

    def entry_value(self, vpair, wpair):
        """Physical-basis matrix entry as (rational) * sqrt(radicand)."""
        if vpair[0] + vpair[1] != wpair[0] + wpair[1]:
            return RadScalar(LaurentQ.zero())
        core = self._cores.get(vpair[0] + vpair[1])
        if core is None:
            return RadScalar(LaurentQ.zero())
        pairs, col, dual, det = core
        iv, iw = pairs.index(vpair), pairs.index(wpair)
        fv = weight_radicand(self.S, vpair[0]) * weight_radicand(self.S, vpair[1])
        fw = weight_radicand(self.S, wpair[0]) * weight_radicand(self.S, wpair[1])
        rat = RatQ(col[iv] * dual[iw], det * fw)
        return RadScalar(rat, (fv, fw))

    def to_dense(self, q0):
        """Physical-basis matrix at a numeric point q0."""
        d = 2 * self.S + 1
        out = np.zeros((d * d, d * d))
        for w, (pairs, col, dual, det) in self._cores.items():
            dval = det.eval_float(q0)
            roots = {}
            for p in pairs:
                f = weight_radicand(self.S, p[0]) * weight_radicand(self.S, p[1])
                roots[p] = float(f.eval_fraction(q0)) ** 0.5
            for pv, cv in zip(pairs, col):
                for pw, dv in zip(pairs, dual):
                    val = cv.eval_float(q0) * dv.eval_float(q0) / dval
                    out[self.pair_index(pv), self.pair_index(pw)] = (
                        val * roots[pv] / roots[pw]
                    )
        return out


@lru_cache(maxsize=None)
def projector(S, J):
    return Projector(S, J)


def upper_dual_rows(S):
    """Per-sector dual rows selecting the J > S components.

    A two-site vector is annihilated by every projector with J > S exactly
    when all these rows pair to zero against its monomial-gauge amplitudes.
    """
    out = {}
    for w, sec in sector_system(S).items():
        rows = [(J, sec.adj[sec.Js.index(J)])
                for J in sec.Js if J > S]
        out[w] = (sec.pairs, rows)
    return out


def hamiltonian(S, L, q0, boundary="periodic", coeffs=None):
    """Sum of two-site projector embeddings as a sparse matrix at numeric q0.

    coeffs maps J in (S, 2S] to a nonnegative weight; missing entries get 1.
    """
    d = 2 * S + 1
    dim = d ** L
    check_budget(dim * d * d * 16, "hamiltonian(S=%d, L=%d)" % (S, L))
    cs = {J: 1.0 for J in range(S + 1, 2 * S + 1)}
    if coeffs:
        for J, c in coeffs.items():
            if c < 0:
                raise ValueError("projector coefficients must be >= 0")
            cs[int(J)] = float(c)
    local = np.zeros((d * d, d * d))
    for J, c in cs.items():
        if c:
            local = local + c * projector(S, J).to_dense(q0)
    bonds = [(k, k + 1) for k in range(1, L)]
    if boundary == "periodic":
        bonds.append((L, 1))
    elif boundary != "open":
        raise ValueError("boundary must be 'periodic' or 'open'")
    rows, cols, vals = [], [], []
    strides = [d ** (L - 1 - p) for p in range(L)]
    nz = [(a, b) for a in range(d * d) for b in range(d * d)
          if abs(local[a, b]) > 0.0]
    for (ka, kb) in bonds:
        pa, pb = ka - 1, kb - 1
        rest = [p for p in range(L) if p not in (pa, pb)]
        rest_dims = [d] * len(rest)
        for restidx in np.ndindex(*rest_dims) if rest else [()]:
            base = sum(strides[p] * v for p, v in zip(rest, restidx))
            for a, b in nz:
                ia, ib = divmod(a, d)
                ja, jb = divmod(b, d)
                i = base + strides[pa] * ia + strides[pb] * ib
                j = base + strides[pa] * ja + strides[pb] * jb
                rows.append(i)
                cols.append(j)
                vals.append(local[a, b])
    return scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(dim, dim))


# -- divisibility of the orbit vectors by the bond product -------------


def _term_vector(poly, key, sites):
    out = []
    for s in sites:
        dx, dy = poly.exponents_at(key, s)
        out.extend((dx, dy))
    return tuple(out)


def divide_once(p, factor, sites):
    """Division with remainder by one bond factor, lex order on `sites`.

    The factor's leading coefficient is a q-power (a unit), so quotient and
    remainder keep Laurent coefficients.
    """
    lead_key = max(factor.terms, key=lambda k: _term_vector(factor, k, sites))
    lead_vec = _term_vector(factor, lead_key, sites)
    lead_coeff = factor.terms[lead_key]
    if len(lead_coeff.key()) != 1:
        raise ValueError("divisor leading coefficient must be a q-monomial")
    exp, c = lead_coeff.key()[0]
    inv_lead = LaurentQ({-exp: Fraction(1) / c})
    quot = SitePoly.zero()
    rem = SitePoly.zero()
    work = p
    while not work.is_zero:
        key = max(work.terms, key=lambda k: _term_vector(work, k, sites))
        vec = _term_vector(work, key, sites)
        if all(v >= l for v, l in zip(vec, lead_vec)):
            expo = {}
            for i, s in enumerate(sites):
                dx = vec[2 * i] - lead_vec[2 * i]
                dy = vec[2 * i + 1] - lead_vec[2 * i + 1]
                expo[s] = (dx, dy)
            qterm = SitePoly.monomial(expo, work.terms[key] * inv_lead)
            quot = quot + qterm
            work = work - qterm * factor
        else:
            t = SitePoly({key: work.terms[key]})
            rem = rem + t
            work = work - t
    return quot, rem


def bond_product(S, site_a=1, site_b=2):
    p = SitePoly.one()
    for m in range(1, S + 1):
        p = p * bond_factor(m, site_a, site_b)
    return p


def divide_by_bond_product(poly, S, sites=(1, 2)):
    """Divide sequentially by each bond factor; returns (quotient, zero_flag)."""
    work = poly
    for m in range(1, S + 1):
        quot, rem = divide_once(work, bond_factor(m, sites[0], sites[1]), sites)
        if not rem.is_zero:
            return None, False
        work = quot
    return work, True


def check_divisibility(S, j_max=None):
    """Divisibility report for every orbit vector with j <= min(S, j_max)."""
    jm = S if j_max is None else min(S, j_max)
    report = []
    for j in range(0, jm + 1):
        for t, poly in enumerate(rep_basis(S, j)):
            quot, ok = divide_by_bond_product(poly, S)
            report.append({"S": S, "j": j, "t": t, "remainder_zero": bool(ok)})
    return report


def spin2_reference_quotients():
    """Published list of the S=2 orbit vectors with the bond product removed."""
    x1 = SitePoly.var(1, "x")
    y1 = SitePoly.var(1, "y")
    x2 = SitePoly.var(2, "x")
    y2 = SitePoly.var(2, "y")
    qp = LaurentQ.q_power
    cross_plus = x1 * y2 * qp(-2) + x2 * y1 * qp(2)
    cross_zero = x1 * y2 - x2 * y1
    cross_minus = x1 * y2 * qp(-1) - x2 * y1 * qp(1)
    two = LaurentQ({1: 1, -1: 1})
    middle = (x1 * x1 * y2 * y2) * qp(-4) + (x1 * x2 * y1 * y2) * (two * two) \
        + (x2 * x2 * y1 * y1) * qp(4)
    return {
        (2, 0): x1 * x1 * x2 * x2,
        (2, 1): x1 * x2 * cross_plus,
        (2, 2): middle,
        (2, 3): y1 * y2 * cross_plus,
        (2, 4): y1 * y1 * y2 * y2,
        (1, 0): x1 * x2 * cross_zero,
        (1, 1): cross_plus * cross_zero,
        (1, 2): y1 * y2 * cross_zero,
        (0, 0): cross_minus * cross_zero,
    }
