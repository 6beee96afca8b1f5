"""Exact arithmetic in Q(q).

A QScalar is stored as q**shift * num(q) / den(q) where num, den are integer
polynomials with nonzero constant term, coprime over Z, and den(0) > 0.
That form is canonical, so equality is representation equality.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from flint import fmpz_poly

__all__ = [
    "QScalar", "PoleAtOne", "NotInIntegralForm", "IntegralityCertificate",
    "q", "qpow", "ZERO", "ONE",
    "quantum_integer", "quantum_factorial", "quantum_binomial",
    "eval_at_one", "one_minus_q_valuation", "in_integral_form",
]


class PoleAtOne(ArithmeticError):
    pass


class NotInIntegralForm(ValueError):
    pass


_P_ONE = fmpz_poly([1])
_P_ZERO = fmpz_poly([])
_Q_MINUS_ONE = fmpz_poly([-1, 1])
# [2][3] with the unit q^-3 cleared: (1+q^2)(1+q^2+q^4)
_TWO_THREE = fmpz_poly([1, 0, 1]) * fmpz_poly([1, 0, 1, 0, 1])


def _low(p):
    # index of the lowest nonzero coefficient
    i = 0
    while p[i] == 0:
        i += 1
    return i


class QScalar:
    __slots__ = ("num", "den", "shift", "_h")

    def __init__(self, value=0):
        if isinstance(value, QScalar):
            self.num, self.den, self.shift = value.num, value.den, value.shift
        elif isinstance(value, int):
            self.num = fmpz_poly([value]) if value else _P_ZERO
            self.den, self.shift = _P_ONE, 0
        elif isinstance(value, Fraction):
            if value == 0:
                self.num, self.den, self.shift = _P_ZERO, _P_ONE, 0
            else:
                self.num = fmpz_poly([value.numerator])
                self.den = fmpz_poly([value.denominator])
                self.shift = 0
        else:
            raise TypeError(f"cannot build QScalar from {type(value).__name__}")
        self._h = None

    @classmethod
    def _raw(cls, num, den, shift):
        s = object.__new__(cls)
        s.num, s.den, s.shift, s._h = num, den, shift, None
        return s

    @classmethod
    def make(cls, num, den=None, shift=0):
        """Normalize q**shift * num/den (fmpz_poly or coefficient lists)."""
        if not isinstance(num, fmpz_poly):
            num = fmpz_poly(list(num))
        if den is None:
            den = _P_ONE
        elif not isinstance(den, fmpz_poly):
            den = fmpz_poly(list(den))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            return ZERO
        a = _low(num)
        if a:
            num = num.right_shift(a)
        b = _low(den)
        if b:
            den = den.right_shift(b)
        shift += a - b
        if not den.is_one():
            g = num.gcd(den)
            if not g.is_one():
                num = num // g
                den = den // g
            if den[0] < 0:
                num, den = -num, -den
        return cls._raw(num, den, shift)

    @classmethod
    def from_laurent(cls, terms):
        """Build from {exponent: integer coefficient}."""
        terms = {e: c for e, c in terms.items() if c}
        if not terms:
            return ZERO
        lo = min(terms)
        coeffs = [0] * (max(terms) - lo + 1)
        for e, c in terms.items():
            coeffs[e - lo] = c
        return cls.make(coeffs, None, lo)

    # predicates
    def __bool__(self):
        return not self.num.is_zero()

    def is_zero(self):
        return self.num.is_zero()

    def is_laurent(self):
        return self.den.is_one()

    def denominator_is_unit(self):
        """True when the reduced denominator is a unit of Q[q, q^-1]."""
        return self.den.degree() == 0

    def is_one(self):
        return self.shift == 0 and self.num.is_one() and self.den.is_one()

    # arithmetic
    def __neg__(self):
        if not self:
            return self
        return QScalar._raw(-self.num, self.den, self.shift)

    def __add__(self, other):
        if not isinstance(other, QScalar):
            other = _coerce(other)
            if other is NotImplemented:
                return other
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        s1, s2 = self.shift, other.shift
        m = s1 if s1 < s2 else s2
        n1 = self.num.left_shift(s1 - m) if s1 != m else self.num
        n2 = other.num.left_shift(s2 - m) if s2 != m else other.num
        if self.den.is_one() and other.den.is_one():
            n = n1 + n2
            if n.is_zero():
                return ZERO
            a = _low(n)
            if a:
                n = n.right_shift(a)
            return QScalar._raw(n, _P_ONE, m + a)
        if self.den == other.den:
            return QScalar.make(n1 + n2, self.den, m)
        return QScalar.make(n1 * other.den + n2 * self.den, self.den * other.den, m)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, QScalar):
            other = _coerce(other)
            if other is NotImplemented:
                return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QScalar):
            other = _coerce(other)
            if other is NotImplemented:
                return other
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        if self.den.is_one() and other.den.is_one():
            return QScalar._raw(self.num * other.num, _P_ONE, self.shift + other.shift)
        return QScalar.make(self.num * other.num, self.den * other.den,
                            self.shift + other.shift)

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise ZeroDivisionError("QScalar division by zero")
        return QScalar.make(self.den, self.num, -self.shift)

    def __truediv__(self, other):
        if not isinstance(other, QScalar):
            other = _coerce(other)
            if other is NotImplemented:
                return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        if not self:
            return ONE if n == 0 else ZERO
        return QScalar._raw(self.num ** n, self.den ** n, self.shift * n)

    def shifted(self, e):
        """Multiply by q**e."""
        if not self or not e:
            return self
        return QScalar._raw(self.num, self.den, self.shift + e)

    # comparison
    def __eq__(self, other):
        if not isinstance(other, QScalar):
            other = _coerce(other)
            if other is NotImplemented:
                return False
        return (self.shift == other.shift and self.num == other.num
                and self.den == other.den)

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.shift, tuple(int(c) for c in self.num.coeffs()),
                            tuple(int(c) for c in self.den.coeffs())))
        return self._h

    # views
    def numerator_terms(self):
        return {self.shift + i: int(c) for i, c in enumerate(self.num.coeffs()) if c}

    def denominator_terms(self):
        return {i: int(c) for i, c in enumerate(self.den.coeffs()) if c}

    def __call__(self, value):
        """Evaluate at a rational number (exact)."""
        value = Fraction(value)
        n = sum(Fraction(c) * value ** e for e, c in self.numerator_terms().items())
        d = sum(Fraction(c) * value ** e for e, c in self.denominator_terms().items())
        if d == 0:
            raise ZeroDivisionError(f"pole at q={value}")
        return n / d

    def to_string(self):
        """Canonical serialization "{e:c,...}/{e:c,...}"."""
        return _terms_str(self.numerator_terms()) + "/" + _terms_str(self.denominator_terms())

    @classmethod
    def from_string(cls, text):
        m = re.fullmatch(r"\s*(\{[^}]*\})\s*/\s*(\{[^}]*\})\s*", text)
        if not m:
            raise ValueError(f"bad QScalar string {text!r}")
        num, den = (_parse_terms(g) for g in m.groups())
        if not den:
            raise ZeroDivisionError("zero denominator")
        return cls.from_laurent(num) / cls.from_laurent(den)

    def __str__(self):
        n = _pretty(self.numerator_terms())
        if self.den.is_one():
            return n
        d = _pretty(self.denominator_terms())
        if len(self.numerator_terms()) > 1:
            n = f"({n})"
        return f"{n}/({d})"

    def __repr__(self):
        return f"QScalar({self})"


def _terms_str(terms):
    return "{" + ",".join(f"{e}:{c}" for e, c in sorted(terms.items())) + "}"


def _parse_terms(s):
    body = s.strip()[1:-1].strip()
    out = {}
    if not body:
        return out
    for part in body.split(","):
        e, c = part.split(":")
        out[int(e)] = out.get(int(e), 0) + int(c)
    return out


def _pretty(terms):
    if not terms:
        return "0"
    out = []
    for e, c in sorted(terms.items(), reverse=True):
        mono = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        out.append(("-" if c < 0 else "+", body))
    s = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        s += f" {sign} {body}"
    return s


def _coerce(x):
    if isinstance(x, QScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return QScalar(x)
    return NotImplemented


ZERO = QScalar._raw(_P_ZERO, _P_ONE, 0)
ONE = QScalar._raw(_P_ONE, _P_ONE, 0)


@lru_cache(maxsize=None)
def qpow(e):
    """q**e."""
    return QScalar._raw(_P_ONE, _P_ONE, e)


q = qpow(1)


@lru_cache(maxsize=None)
def quantum_integer(n, root_length_sq=2):
    """[n]_lambda with q_lambda = q^(root_length_sq/2)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if root_length_sq % 2:
        raise ValueError("root_length_sq must be even")
    t = root_length_sq // 2
    # (x^n - x^-n)/(x - x^-1) = sum_{k=0}^{n-1} x^(n-1-2k)
    return QScalar.from_laurent({t * (n - 1 - 2 * k): 1 for k in range(n)})


@lru_cache(maxsize=None)
def quantum_factorial(n, root_length_sq=2):
    out = ONE
    for k in range(1, n + 1):
        out = out * quantum_integer(k, root_length_sq)
    return out


def quantum_binomial(m, n, root_length_sq=2):
    if not 0 <= n <= m:
        raise ValueError("need 0 <= n <= m")
    top = quantum_factorial(m, root_length_sq)
    bot = quantum_factorial(n, root_length_sq) * quantum_factorial(m - n, root_length_sq)
    quo, rem = divmod(top.num, bot.num)
    if not rem.is_zero():
        raise ArithmeticError("quantum binomial is not a Laurent polynomial")
    return QScalar.make(quo, None, top.shift - bot.shift)


def eval_at_one(s):
    d = s.den(1)
    if d == 0:
        raise PoleAtOne(f"{s} has a pole at q=1")
    return Fraction(int(s.num(1)), int(d))


def _in_A(s):
    d = s.den
    while d.degree() > 0:
        g = d.gcd(_TWO_THREE)
        if g.degree() <= 0:
            return False
        d = d // g
    return True


@dataclass(frozen=True)
class IntegralityCertificate:
    in_A: bool
    # None when the scalar is zero (valuation is infinite)
    one_minus_q_valuation: int | None

    def at_least(self, k):
        return self.in_A and (self.one_minus_q_valuation is None
                              or self.one_minus_q_valuation >= k)


def one_minus_q_valuation(s):
    """Largest k with s/(1-q)^k in the integral form."""
    if not s:
        raise ValueError("valuation of zero is undefined")
    if not _in_A(s):
        raise NotInIntegralForm(str(s))
    n, k = s.num, 0
    while True:
        quo, rem = divmod(n, _Q_MINUS_ONE)
        if not rem.is_zero():
            return k
        n, k = quo, k + 1


def in_integral_form(s):
    if not s:
        return IntegralityCertificate(True, None)
    if not _in_A(s):
        return IntegralityCertificate(False, 0)
    return IntegralityCertificate(True, one_minus_q_valuation(s))
