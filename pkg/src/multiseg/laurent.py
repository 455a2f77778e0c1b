"""Exact Laurent polynomials in v = q^(1/2) with integer coefficients."""

from __future__ import annotations

from typing import Dict, Iterable, Mapping, Union

Scalar = Union[int, "Laurent"]


class Laurent:
    """Immutable element of Z[v, v^-1], stored as {exponent: coefficient}."""

    __slots__ = ("_c", "_h")

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        c = {}
        if coeffs:
            for e, x in coeffs.items():
                if x:
                    c[int(e)] = int(x)
        self._c = c
        self._h = None

    # constructors
    @classmethod
    def const(cls, n: int) -> "Laurent":
        return cls({0: n}) if n else ZERO

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "Laurent":
        return cls({exp: coeff})

    @classmethod
    def coerce(cls, x: Scalar) -> "Laurent":
        if isinstance(x, Laurent):
            return x
        return cls.const(int(x))

    # inspection
    def terms(self) -> Dict[int, int]:
        return dict(self._c)

    def coeff(self, exp: int) -> int:
        return self._c.get(exp, 0)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def low(self) -> int:
        return min(self._c)

    def high(self) -> int:
        return max(self._c)

    def at_one(self) -> int:
        return sum(self._c.values())

    def in_vZv(self) -> bool:
        """True when every exponent is >= 1 (zero counts as inside)."""
        return all(e >= 1 for e in self._c)

    def nonnegative(self) -> bool:
        return all(x > 0 for x in self._c.values())

    def is_bar_invariant(self) -> bool:
        return self == self.bar()

    # arithmetic
    def __add__(self, other):
        if isinstance(other, int):
            other = Laurent.const(other)
        elif not isinstance(other, Laurent):
            return NotImplemented
        if not other._c:
            return self
        if not self._c:
            return other
        c = dict(self._c)
        for e, x in other._c.items():
            y = c.get(e, 0) + x
            if y:
                c[e] = y
            else:
                c.pop(e, None)
        return _raw(c)

    __radd__ = __add__

    def __neg__(self):
        return _raw({e: -x for e, x in self._c.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = Laurent.const(other)
        elif not isinstance(other, Laurent):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return ZERO
            return _raw({e: x * other for e, x in self._c.items()})
        if not isinstance(other, Laurent):
            return NotImplemented
        if not self._c or not other._c:
            return ZERO
        if len(other._c) == 1:
            ((f, y),) = other._c.items()
            return _raw({e + f: x * y for e, x in self._c.items()})
        c: Dict[int, int] = {}
        for e, x in self._c.items():
            for f, y in other._c.items():
                c[e + f] = c.get(e + f, 0) + x * y
        return Laurent(c)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._c) == 1:
                ((e, x),) = self._c.items()
                if x in (1, -1):
                    return _raw({-e * (-n): x ** (-n)})
            raise ValueError("negative power of a non-unit")
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, n: int) -> "Laurent":
        """Multiply by v^n."""
        if n == 0:
            return self
        return _raw({e + n: x for e, x in self._c.items()})

    def bar(self) -> "Laurent":
        """The involution v -> v^-1."""
        return _raw({-e: x for e, x in self._c.items()})

    def divexact(self, other: Scalar) -> "Laurent":
        """Exact division; raises ArithmeticError when a remainder is left."""
        other = Laurent.coerce(other)
        if not other._c:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if not self._c:
            return ZERO
        dl, dh = other.low(), other.high()
        lead = other._c[dh]
        floor = self.low() - dl
        rem = dict(self._c)
        quot: Dict[int, int] = {}
        while rem:
            h = max(rem)
            s = h - dh
            x = rem[h]
            if s < floor or x % lead:
                raise ArithmeticError("inexact division")
            qc = x // lead
            quot[s] = qc
            for f, y in other._c.items():
                e = f + s
                z = rem.get(e, 0) - qc * y
                if z:
                    rem[e] = z
                else:
                    rem.pop(e, None)
        return Laurent(quot)

    # comparison / hashing
    def __eq__(self, other):
        if isinstance(other, int):
            return self._c == ({0: other} if other else {})
        if isinstance(other, Laurent):
            return self._c == other._c
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self._c.items()))
        return self._h

    # serialization
    def to_json(self) -> dict:
        if not self._c:
            return {"lo": 0, "coeffs": []}
        lo, hi = self.low(), self.high()
        return {"lo": lo, "coeffs": [self._c.get(e, 0) for e in range(lo, hi + 1)]}

    @classmethod
    def from_json(cls, d: Mapping) -> "Laurent":
        lo = int(d["lo"])
        return cls({lo + i: x for i, x in enumerate(d["coeffs"])})

    def __repr__(self):
        return "Laurent(%s)" % self

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e in sorted(self._c):
            x = self._c[e]
            if e == 0:
                mono = ""
            elif e == 1:
                mono = "v"
            else:
                mono = "v^%d" % e
            if mono and abs(x) == 1:
                body = mono
            else:
                body = str(abs(x)) + ("*" + mono if mono else "")
            sign = "-" if x < 0 else "+"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += " %s %s" % (sign, body)
        return s


def _raw(c: Dict[int, int]) -> Laurent:
    # trusted constructor: c has no zero entries
    out = Laurent.__new__(Laurent)
    out._c = c
    out._h = None
    return out


ZERO = Laurent()
ONE = Laurent({0: 1})
V = Laurent({1: 1})
VINV = Laurent({-1: 1})
Q = Laurent({2: 1})


def vpow(n: int) -> Laurent:
    return _raw({n: 1})


def qint(m: int) -> Laurent:
    """Symmetric quantum integer [m]_v = (v^m - v^-m)/(v - v^-1)."""
    if m <= 0:
        return ZERO
    return Laurent({e: 1 for e in range(-(m - 1), m, 2)})


def qfactorial(m: int) -> Laurent:
    out = ONE
    for i in range(2, m + 1):
        out = out * qint(i)
    return out


def q_number(m: int) -> Laurent:
    """[m]_q = 1 + q + ... + q^(m-1), in powers of v."""
    return Laurent({2 * e: 1 for e in range(m)})


def q_factorial(m: int) -> Laurent:
    out = ONE
    for i in range(2, m + 1):
        out = out * q_number(i)
    return out


def h_poly(m: int) -> Laurent:
    """h_m(q) = (1-q)(1-q^2)...(1-q^m)."""
    out = ONE
    for i in range(1, m + 1):
        out = out * Laurent({0: 1, 2 * i: -1})
    return out


def one_minus_q(power: int = 1) -> Laurent:
    return Laurent({0: 1, 2: -1}) ** power


def total(items: Iterable[Laurent]) -> Laurent:
    out = ZERO
    for x in items:
        out = out + x
    return out
