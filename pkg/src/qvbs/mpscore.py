"""Matrix product tensors for the chain states and their contractions.

Entry (i, j) of a site tensor carries the single physical vector |S, j-i>, so
an auxiliary path fixes the physical configuration and vice versa; exact
contraction is a walk over (S+1)^L paths with radical scalars that collapse
to Laurent polynomials along the way.
"""

from __future__ import annotations

import numpy as np

from .cgproj import check_budget
from .qnum import LaurentQ, RadScalar, q_binomial
from .weylrep import StateVector, weight_radicand


class MPSTensor:
    """(S+1) x (S+1) matrix of physical vectors, indices 1-based.

    `entry(i, j)` returns the monomial-gauge scalar of the only basis vector
    the entry touches (m = j - i); `spin_scalar(i, j)` dresses it with the
    sqrt-factorial normalization of the physical basis.
    """

    def __init__(self, S, kind, scalars):
        self.S = S
        self.kind = kind
        self._scalars = scalars  # dict (i, j) -> RadScalar, 1-based

    @property
    def dim(self):
        return self.S + 1

    def physical_m(self, i, j):
        return j - i

    def entry(self, i, j):
        return self._scalars[(i, j)]

    def spin_scalar(self, i, j):
        return self._scalars[(i, j)] * RadScalar.sqrt_of(
            weight_radicand(self.S, j - i))

    def phys_matrices(self, q0):
        """Spin-gauge entries as floats: array [m_index, i-1, j-1].

        m_index runs over the digit convention S - m.
        """
        S = self.S
        out = np.zeros((2 * S + 1, S + 1, S + 1))
        for (i, j), sc in self._scalars.items():
            m = j - i
            out[S - m, i - 1, j - 1] = self.spin_scalar(i, j).eval_float(q0)
        return out


def tensor_g(S):
    """Site tensor with the q-power carried on the row index."""
    if S < 1:
        raise ValueError("need S >= 1")
    scalars = {}
    for i in range(1, S + 2):
        for j in range(1, S + 2):
            e2 = (2 * i - 2 - S) * (S + 1)
            if e2 % 2:
                raise AssertionError("unexpected half-integer power in g")
            sign = -1 if (S - i + 1) % 2 else 1
            rat = LaurentQ.q_power(e2 // 2, sign)
            scalars[(i, j)] = RadScalar(rat, (q_binomial(S, i - 1), q_binomial(S, j - 1)))
    return MPSTensor(S, "g", scalars)


def tensor_g_start(S):
    """Boundary tensor: no sign, no q-power, same radicals as g."""
    if S < 1:
        raise ValueError("need S >= 1")
    scalars = {}
    for i in range(1, S + 2):
        for j in range(1, S + 2):
            scalars[(i, j)] = RadScalar(
                LaurentQ.one(), (q_binomial(S, i - 1), q_binomial(S, j - 1)))
    return MPSTensor(S, "g_start", scalars)


def tensor_f(S):
    """Gauge-rotated site tensor with the q-power split over both indices.

    Half-integer powers of q are kept under the radical as a factor of q, so
    scalars stay exact; they pair away in any closed contraction.
    """
    if S < 1:
        raise ValueError("need S >= 1")
    scalars = {}
    for i in range(1, S + 2):
        for j in range(1, S + 2):
            e2 = (i + j - 2 - S) * (S + 1)
            sign = -1 if (S - i + 1) % 2 else 1
            factors = [q_binomial(S, i - 1), q_binomial(S, j - 1)]
            if e2 % 2:
                rat = LaurentQ.q_power((e2 - 1) // 2, sign)
                factors.append(LaurentQ.q_power(1))
            else:
                rat = LaurentQ.q_power(e2 // 2, sign)
            scalars[(i, j)] = RadScalar(rat, tuple(factors))
    return MPSTensor(S, "f", scalars)


def _state_from_radscalars(S, L, rad_amps):
    """Pull the common radical out as the state prefactor."""
    factor_keys = {rs._factor_key() for rs in rad_amps.values() if not rs.is_zero}
    if not factor_keys:
        return StateVector(S, L)
    if len(factor_keys) > 1:
        raise AssertionError("contraction produced mixed radicands")
    amps = {}
    common = None
    for k, rs in rad_amps.items():
        if rs.is_zero:
            continue
        common = rs.factors
        if not isinstance(rs.rat, LaurentQ):
            raise AssertionError("contraction produced a non-Laurent amplitude")
        amps[k] = rs.rat
    pref = RadScalar(LaurentQ.one(), common) if common else RadScalar.one()
    return StateVector(S, L, amps, pref)


def contract_pbc(tensor, L):
    """Trace over the auxiliary chain of one repeated site tensor."""
    if L < 1:
        raise ValueError("need L >= 1")
    S = tensor.S
    check_budget((2 * S + 1) ** L * 256, "contract_pbc(S=%d, L=%d)" % (S, L))
    dim = tensor.dim
    amps = {}

    def walk(start, pos, idx, scalar, ms):
        if pos == L:
            if idx != start:
                return
            key = tuple(ms)
            prev = amps.get(key)
            amps[key] = scalar if prev is None else prev + scalar
            return
        for j in range(1, dim + 1):
            if pos == L - 1 and j != start:
                continue
            walk(start, pos + 1, j, scalar * tensor.entry(idx, j), ms + [j - idx])

    for start in range(1, dim + 1):
        walk(start, 0, start, RadScalar.one(), [])
    return _state_from_radscalars(S, L, amps)


def contract_open(S, L, p1, p2):
    """Matrix element (p1, p2) of start tensor times L-1 bulk tensors."""
    if not (1 <= p1 <= S + 1 and 1 <= p2 <= S + 1):
        raise ValueError("boundary labels must lie in 1..S+1")
    if L < 1:
        raise ValueError("need L >= 1")
    check_budget((2 * S + 1) ** L * 256, "contract_open(S=%d, L=%d)" % (S, L))
    start = tensor_g_start(S)
    bulk = tensor_g(S)
    amps = {}

    def walk(pos, idx, scalar, ms):
        if pos == L:
            if idx != p2:
                return
            key = tuple(ms)
            prev = amps.get(key)
            amps[key] = scalar if prev is None else prev + scalar
            return
        t = start if pos == 0 else bulk
        for j in range(1, S + 2):
            if pos == L - 1 and j != p2:
                continue
            walk(pos + 1, j, scalar * t.entry(idx, j), ms + [j - idx])

    walk(0, p1, RadScalar.one(), [])
    return _state_from_radscalars(S, L, amps)


# -- numeric oracles ----------------------------------------------------


def dense_pbc_state(S, L, q0, which="g"):
    """Physical amplitudes of the periodic chain as a dense float vector.

    Contracts the two chain halves separately and joins them, which keeps the
    peak memory at one (2S+1)^ceil(L/2) square matrix.
    """
    d = 2 * S + 1
    check_budget((d ** L) * 8 * 3, "dense_pbc_state(S=%d, L=%d)" % (S, L))
    tensor = {"g": tensor_g, "f": tensor_f}[which](S)
    W = tensor.phys_matrices(q0)  # [digit, i, j]

    def half(n):
        acc = np.eye(S + 1).reshape(S + 1, S + 1, 1)
        for _ in range(n):
            # acc[i, t, sigma], W[digit, t, j] -> [i, j, sigma*digit]
            acc = np.einsum("its,mtj->ijsm", acc, W)
            acc = acc.reshape(S + 1, S + 1, -1)
        return acc

    la = L // 2
    A = half(la)
    B = half(L - la)
    amp = np.einsum("ijs,jit->st", A, B)
    return amp.reshape(-1)


def dense_pbc_two_point_sz(S, L, q0, r):
    """Brute-force <S^z_1 S^z_r> on the periodic chain from the dense state."""
    if not (2 <= r <= L):
        raise ValueError("need 2 <= r <= L")
    d = 2 * S + 1
    vec = dense_pbc_state(S, L, q0)
    sq = vec * vec
    norm = sq.sum()
    digits_1 = (np.arange(d ** L) // d ** (L - 1)) % d
    digits_r = (np.arange(d ** L) // d ** (L - r)) % d
    mz = S - digits_1.astype(float)
    mr = S - digits_r.astype(float)
    return float((sq * mz * mr).sum() / norm)
