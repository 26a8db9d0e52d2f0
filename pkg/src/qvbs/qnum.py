"""Exact arithmetic in the deformation parameter q.

Laurent polynomials in q with rational coefficients, rational functions of
those, formal radical scalars, and the q-integer / q-factorial / q-binomial
constructions. Floating point enters only through the eval helpers; every
other operation is exact, so zero tests are decisive.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache


def _norm_coeff(c):
    # ints stay ints; Fractions with unit denominator collapse back to int
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class LaurentQ:
    """Laurent polynomial in q with exact rational coefficients.

    Stored as exponent -> coefficient with no zero entries kept, so equality
    is coefficient-wise and instances hash stably. Immutable by convention:
    no method mutates self after construction.
    """

    __slots__ = ("_c", "_key")

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                v = _norm_coeff(v if isinstance(v, (int, Fraction)) else Fraction(v))
                if v:
                    c[int(e)] = v
        self._c = c
        self._key = None

    # -- constructors -------------------------------------------------

    @classmethod
    def const(cls, v):
        return cls({0: v})

    @classmethod
    def q_power(cls, e, coeff=1):
        return cls({e: coeff})

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({0: 1})

    # -- basic queries ------------------------------------------------

    def items(self):
        return self._c.items()

    @property
    def is_zero(self):
        return not self._c

    def coeff(self, e):
        return self._c.get(e, 0)

    def min_exp(self):
        if not self._c:
            raise ValueError("zero polynomial has no exponents")
        return min(self._c)

    def max_exp(self):
        if not self._c:
            raise ValueError("zero polynomial has no exponents")
        return max(self._c)

    def key(self):
        if self._key is None:
            self._key = tuple(sorted(self._c.items()))
        return self._key

    def nonneg_coeffs(self):
        """True when every coefficient is >= 0 (then p(q) >= 0 for q > 0)."""
        return all(v > 0 for v in self._c.values())

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LaurentQ):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentQ.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c = dict(self._c)
        for e, v in o._c.items():
            s = c.get(e, 0) + v
            if s:
                c[e] = _norm_coeff(s)
            else:
                c.pop(e, None)
        out = LaurentQ.__new__(LaurentQ)
        out._c = c
        out._key = None
        return out

    __radd__ = __add__

    def __neg__(self):
        out = LaurentQ.__new__(LaurentQ)
        out._c = {e: -v for e, v in self._c.items()}
        out._key = None
        return out

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self._c or not o._c:
            return LaurentQ.zero()
        a, b = self._c, o._c
        if len(a) > len(b):
            a, b = b, a
        c = {}
        for ea, va in a.items():
            for eb, vb in b.items():
                e = ea + eb
                s = c.get(e, 0) + va * vb
                if s:
                    c[e] = s
                else:
                    c.pop(e, None)
        out = LaurentQ.__new__(LaurentQ)
        out._c = {e: _norm_coeff(v) for e, v in c.items() if v}
        out._key = None
        return out

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers need RatQ")
        out = LaurentQ.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k):
        """Multiply by q**k."""
        out = LaurentQ.__new__(LaurentQ)
        out._c = {e + k: v for e, v in self._c.items()}
        out._key = None
        return out

    def bar(self):
        """The involution q -> 1/q."""
        out = LaurentQ.__new__(LaurentQ)
        out._c = {-e: v for e, v in self._c.items()}
        out._key = None
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._c == o._c

    def __hash__(self):
        return hash(self.key())

    # -- division -----------------------------------------------------

    def divmod_by(self, other):
        """Long division: self = quot * other + rem, rem lower-degree.

        Works on the ordinary-polynomial images (exponents shifted to 0),
        so the remainder is only canonical up to the q-power bookkeeping;
        exactness (rem == 0) is what callers rely on.
        """
        if other.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero:
            return LaurentQ.zero(), LaurentQ.zero()
        sh_s, sh_o = self.min_exp(), other.min_exp()
        num = {e - sh_s: Fraction(v) for e, v in self._c.items()}
        den = {e - sh_o: Fraction(v) for e, v in other._c.items()}
        dd = max(den)
        dl = den[dd]
        quot = {}
        while num:
            nd = max(num)
            if nd < dd:
                break
            f = num[nd] / dl
            quot[nd - dd] = f
            for e, v in den.items():
                ne = nd - dd + e
                s = num.get(ne, 0) - f * v
                if s:
                    num[ne] = s
                else:
                    num.pop(ne, None)
        qpoly = LaurentQ({e + sh_s - sh_o: v for e, v in quot.items()})
        rpoly = LaurentQ({e + sh_s: v for e, v in num.items()})
        return qpoly, rpoly

    def divide_exact(self, other):
        q, r = self.divmod_by(other)
        if not r.is_zero:
            raise ValueError("inexact Laurent division (remainder %s)" % r)
        return q

    # -- evaluation ---------------------------------------------------

    def eval_fraction(self, q0):
        """Exact evaluation at a positive rational point."""
        q0 = Fraction(q0)
        if q0 <= 0:
            raise ValueError("evaluation point must be > 0")
        acc = Fraction(0)
        for e, v in self._c.items():
            acc += Fraction(v) * q0 ** e
        return acc

    def eval_float(self, q0):
        return float(self.eval_fraction(Fraction(q0)))

    # -- misc ---------------------------------------------------------

    def content_int(self):
        """Integer content when all coefficients are integers, else None."""
        g = 0
        for v in self._c.values():
            if isinstance(v, Fraction):
                return None
            g = math.gcd(g, abs(v))
        return g

    def primitive(self):
        """Divide out the integer content (sign-normalized on max exponent)."""
        g = self.content_int()
        if not g:
            return self
        if self._c[self.max_exp()] < 0:
            g = -g
        out = LaurentQ.__new__(LaurentQ)
        out._c = {e: v // g for e, v in self._c.items()}
        out._key = None
        return out

    def to_json_obj(self):
        return {str(e): str(Fraction(v)) for e, v in sorted(self._c.items())}

    @classmethod
    def from_json_obj(cls, obj):
        return cls({int(e): Fraction(v) for e, v in obj.items()})

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e in sorted(self._c, reverse=True):
            v = self._c[e]
            if e == 0:
                parts.append(str(v))
            elif e == 1:
                parts.append("%s*q" % v)
            else:
                parts.append("%s*q^%d" % (v, e))
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def laurent_gcd(a, b):
    """Monic gcd of two Laurent polynomials (min exponent normalized to 0)."""
    if a.is_zero:
        return _monic_min0(b)
    if b.is_zero:
        return _monic_min0(a)
    fa = _to_list(a)
    fb = _to_list(b)
    while fb:
        fa, fb = fb, _list_mod(fa, fb)
    lead = fa[-1]
    coeffs = {i: Fraction(v) / lead for i, v in enumerate(fa) if v}
    return LaurentQ(coeffs)


def _monic_min0(p):
    if p.is_zero:
        return LaurentQ.zero()
    sh = p.shift(-p.min_exp())
    lead = Fraction(sh.coeff(sh.max_exp()))
    return LaurentQ({e: Fraction(v) / lead for e, v in sh.items()})


def _to_list(p):
    sh = p.shift(-p.min_exp())
    n = sh.max_exp()
    out = [Fraction(0)] * (n + 1)
    for e, v in sh.items():
        out[e] = Fraction(v)
    return out


def _list_mod(a, b):
    a = a[:]
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and any(a):
        da = len(a) - 1
        if a[da] == 0:
            a.pop()
            continue
        f = a[da] / lb
        for i, v in enumerate(b):
            a[da - db + i] -= f * v
        while a and a[-1] == 0:
            a.pop()
    # strip a leading block of exact zeros
    while a and a[-1] == 0:
        a.pop()
    return a


class RatQ:
    """Ratio of two Laurent polynomials in q; the denominator is never zero."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, reduce=True):
        if not isinstance(num, LaurentQ):
            num = LaurentQ.const(num)
        if den is None:
            den = LaurentQ.one()
        elif not isinstance(den, LaurentQ):
            den = LaurentQ.const(den)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if reduce and not num.is_zero:
            g = laurent_gcd(num, den)
            if not (g.max_exp() == 0 and g.coeff(0) == 1 and len(g.key()) == 1):
                num = num.divide_exact(g)
                den = den.divide_exact(g)
        if len(den.key()) == 1:
            # monomial denominator: fold it into the numerator
            e, c = den.key()[0]
            num = num.shift(-e) * (Fraction(1) / c)
            den = LaurentQ.one()
        if num.is_zero:
            den = LaurentQ.one()
        self.num = num
        self.den = den

    @classmethod
    def from_laurent(cls, p):
        return cls(p, None, reduce=False)

    @property
    def is_zero(self):
        return self.num.is_zero

    def _coerce(self, other):
        if isinstance(other, RatQ):
            return other
        if isinstance(other, (int, Fraction, LaurentQ)):
            return RatQ(other, None, reduce=False)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatQ(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatQ(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatQ(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        return RatQ(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        raise TypeError("RatQ is not hashable")

    def eval_fraction(self, q0):
        d = self.den.eval_fraction(q0)
        if d == 0:
            raise ZeroDivisionError("pole at q=%s" % q0)
        return self.num.eval_fraction(q0) / d

    def eval_float(self, q0):
        return float(self.eval_fraction(Fraction(q0)))

    def to_laurent(self):
        return self.num.divide_exact(self.den)

    def to_json_obj(self):
        return {"num": self.num.to_json_obj(), "den": self.den.to_json_obj()}

    def __str__(self):
        return "(%s) / (%s)" % (self.num, self.den)

    __repr__ = __str__


# -- sign certification at q > 0 --------------------------------------

_SAMPLE_POINTS = [Fraction(5, 7), Fraction(9, 5), Fraction(13, 8), Fraction(27, 16)]


def sign_at_positive(p):
    """Sign of a Laurent polynomial somewhere on q > 0 (first nonzero sample).

    Used only for the sign bookkeeping of radical scalars, whose rational
    parts never change sign between the sampled points in this artifact.
    """
    if isinstance(p, RatQ):
        s = sign_at_positive(p.num)
        return s * sign_at_positive(p.den)
    if p.is_zero:
        return 0
    for q0 in _SAMPLE_POINTS:
        v = p.eval_fraction(q0)
        if v:
            return 1 if v > 0 else -1
    k = 101
    while True:
        v = p.eval_fraction(Fraction(k, 99))
        if v:
            return 1 if v > 0 else -1
        k += 1


class RadScalar:
    """Formal scalar rat * prod_i sqrt(f_i).

    `rat` is a LaurentQ or RatQ; each radical factor f_i is a LaurentQ that
    is positive for all q > 0 (q-factorials, q-binomials, monomials). Equal
    factors pair up into the rational part on construction, so products of
    two conjugate quantities collapse the radical exactly.
    """

    __slots__ = ("rat", "factors")

    def __init__(self, rat, factors=()):
        fs = []
        for f in factors:
            if not isinstance(f, LaurentQ):
                f = LaurentQ.const(f)
            if f.is_zero:
                rat = LaurentQ.zero()
                fs = []
                break
            if f == LaurentQ.one():
                continue
            fs.append(f)
        # pair equal factors into the rational part
        fs.sort(key=lambda f: f.key())
        kept = []
        i = 0
        while i < len(fs):
            if i + 1 < len(fs) and fs[i] == fs[i + 1]:
                rat = rat * fs[i]
                i += 2
            else:
                kept.append(fs[i])
                i += 1
        if not isinstance(rat, (LaurentQ, RatQ)):
            rat = LaurentQ.const(rat)
        if rat.is_zero:
            kept = []
        self.rat = rat
        self.factors = tuple(kept)

    @classmethod
    def one(cls):
        return cls(LaurentQ.one())

    @classmethod
    def sqrt_of(cls, *factors):
        return cls(LaurentQ.one(), factors)

    @property
    def is_zero(self):
        return self.rat.is_zero

    def _factor_key(self):
        return tuple(f.key() for f in self.factors)

    def __mul__(self, other):
        if isinstance(other, RadScalar):
            return RadScalar(self.rat * other.rat, self.factors + other.factors)
        if isinstance(other, (int, Fraction, LaurentQ, RatQ)):
            return RadScalar(self.rat * other, self.factors)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return RadScalar(-self.rat, self.factors)

    def __add__(self, other):
        if not isinstance(other, RadScalar):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self._factor_key() != other._factor_key():
            raise ValueError("cannot add radical scalars with different radicands")
        return RadScalar(self.rat + other.rat, self.factors)

    def __sub__(self, other):
        return self + (-other)

    def square(self):
        """Exact square: the radical always collapses."""
        out = self.rat * self.rat
        for f in self.factors:
            out = out * f
        return out

    def value_eq(self, other):
        """Equality as functions on q > 0 (squares plus sign comparison)."""
        if not isinstance(other, RadScalar):
            other = RadScalar(other)
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        sa, sb = sign_at_positive(self.rat), sign_at_positive(other.rat)
        if sa != sb:
            return False
        a, b = self.square(), other.square()
        if isinstance(a, LaurentQ) and isinstance(b, LaurentQ):
            return a == b
        return RatQ(1, 1, reduce=False) * a == RatQ(1, 1, reduce=False) * b

    def __eq__(self, other):
        if not isinstance(other, RadScalar):
            return NotImplemented
        return self.value_eq(other)

    def __hash__(self):
        raise TypeError("RadScalar is not hashable")

    def to_laurent(self):
        if self.factors:
            raise ValueError("radical part did not collapse: %s" % (self.factors,))
        if isinstance(self.rat, RatQ):
            return self.rat.to_laurent()
        return self.rat

    def eval_float(self, q0):
        q0 = Fraction(q0)
        acc = float(self.rat.eval_fraction(q0))
        for f in self.factors:
            v = f.eval_fraction(q0)
            if v < 0:
                raise ValueError("negative radicand at q=%s" % q0)
            acc *= math.sqrt(v)
        return acc

    def __str__(self):
        if not self.factors:
            return str(self.rat)
        return "(%s) * sqrt(%s)" % (self.rat, " * ".join("(%s)" % f for f in self.factors))

    __repr__ = __str__


# -- q-combinatorics ---------------------------------------------------


@lru_cache(maxsize=None)
def q_integer(n):
    """[n] = q^(n-1) + q^(n-3) + ... + q^(1-n); [0] = 0."""
    if n < 0:
        raise ValueError("q_integer needs n >= 0")
    return LaurentQ({n - 1 - 2 * k: 1 for k in range(n)})


@lru_cache(maxsize=None)
def q_factorial(n):
    """[n]! = [1][2]...[n]."""
    if n < 0:
        raise ValueError("q_factorial needs n >= 0")
    out = LaurentQ.one()
    for k in range(1, n + 1):
        out = out * q_integer(k)
    return out


@lru_cache(maxsize=None)
def q_binomial(n, k):
    """Gaussian binomial [n]! / ([k]! [n-k]!), computed by exact division."""
    if k < 0 or k > n:
        raise ValueError("q_binomial needs 0 <= k <= n")
    num = LaurentQ.one()
    for j in range(n - k + 1, n + 1):
        num = num * q_integer(j)
    # exact division doubles as a self-test: a nonzero remainder raises
    return num.divide_exact(q_factorial(k))


def parse_q(text):
    """Parse a q value given as 'a/b' or a decimal string into a Fraction."""
    text = str(text).strip()
    q0 = Fraction(text)
    if q0 <= 0:
        raise ValueError("q must be positive")
    return q0


def eval_at(p, q0):
    """Evaluate a LaurentQ / RatQ / RadScalar at real q0 > 0 via exact rationals."""
    q0 = Fraction(q0) if not isinstance(q0, Fraction) else q0
    if q0 <= 0:
        raise ValueError("q must be positive")
    if isinstance(p, RadScalar):
        return p.eval_float(q0)
    if isinstance(p, (LaurentQ, RatQ)):
        return p.eval_float(q0)
    return float(p)
