"""Exact coefficients: Laurent polynomials in q whose coefficients are
polynomials in h over the rationals, plus the q-analogue primitives built
on top of them ([x]_q, Gaussian binomials, q-falling factorials).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Optional, Union

Number = Union[int, Fraction]


class InexactDivision(ArithmeticError):
    """Raised when a Laurent-polynomial division leaves a remainder."""


def _norm(c: Number) -> Number:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _coerce_coeff(c) -> Number:
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return _norm(c)
    if isinstance(c, str):
        return _norm(Fraction(c))
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


class Scalar:
    """Element of Q[h][q, 1/q], stored as ``{(h_exp, q_exp): coefficient}``.

    Instances are immutable and always canonical: no zero coefficients are
    stored and integral rationals are kept as ``int``.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[tuple[int, int], Number]] = None):
        clean: dict[tuple[int, int], Number] = {}
        if terms:
            for (a, b), c in terms.items():
                if a < 0:
                    raise ValueError("negative powers of h are not supported")
                c = _coerce_coeff(c)
                if c:
                    clean[(int(a), int(b))] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Scalar":
        # trusted constructor: terms already canonical
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, c: Number) -> "Scalar":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, c: Number = 1, h: int = 0, q: int = 0) -> "Scalar":
        return cls({(h, q): c})

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        return cls.const(_coerce_coeff(x))

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict[tuple[int, int], Number]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def has_h(self) -> bool:
        return any(a for a, _ in self._terms)

    def h_degree(self) -> int:
        """Largest power of h present (-1 for zero)."""
        return max((a for a, _ in self._terms), default=-1)

    def h_degrees(self) -> set[int]:
        return {a for a, _ in self._terms}

    def q_range(self) -> tuple[int, int]:
        qs = [b for _, b in self._terms]
        return min(qs), max(qs)

    def constant_value(self) -> Optional[Number]:
        """The rational value if this Scalar is a constant, else None."""
        if not self._terms:
            return 0
        if set(self._terms) == {(0, 0)}:
            return self._terms[(0, 0)]
        return None

    # -- ring operations ----------------------------------------------------

    def __add__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = _norm(v)
            else:
                out.pop(k, None)
        return Scalar._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Scalar":
        return Scalar.coerce(other) - self

    def __mul__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
                if not other:
                    return ZERO
                return Scalar._raw({k: _norm(c * other) for k, c in self._terms.items()})
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        out: dict[tuple[int, int], Number] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                k = (a1 + a2, b1 + b2)
                out[k] = out.get(k, 0) + c1 * c2
        return Scalar._raw({k: _norm(c) for k, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Scalar":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                raise ZeroDivisionError("division by zero")
            return Scalar._raw({k: _norm(Fraction(c) / other) for k, c in self._terms.items()})
        if isinstance(other, Scalar):
            return self.divexact(other)
        return NotImplemented

    def __pow__(self, e: int) -> "Scalar":
        if not isinstance(e, int) or isinstance(e, bool):
            raise TypeError("exponent must be an int")
        if e < 0:
            # only monomials are units
            if len(self._terms) != 1:
                raise ValueError("negative power of a non-monomial")
            ((a, b), c), = self._terms.items()
            if a:
                raise ValueError("negative power of h")
            return Scalar({(0, b * e): Fraction(c) ** e})
        result = ONE
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._terms == Scalar.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- substitutions ------------------------------------------------------

    def subs_q_power(self, a: int) -> "Scalar":
        """Substitute q -> q**a (a may be zero or negative)."""
        if a == 1:
            return self
        out: dict[tuple[int, int], Number] = {}
        for (hh, qq), c in self._terms.items():
            k = (hh, qq * a)
            out[k] = out.get(k, 0) + c
        return Scalar._raw({k: _norm(c) for k, c in out.items() if c})

    def subs_h(self, value: Number) -> "Scalar":
        """Substitute h -> value (a rational), keeping q symbolic."""
        value = _coerce_coeff(value)
        out: dict[tuple[int, int], Number] = {}
        for (hh, qq), c in self._terms.items():
            out[(0, qq)] = out.get((0, qq), 0) + c * value ** hh
        return Scalar._raw({k: _norm(c) for k, c in out.items() if c})

    def mul_monomial(self, h: int = 0, q: int = 0) -> "Scalar":
        return Scalar._raw({(a + h, b + q): c for (a, b), c in self._terms.items()})

    def evaluate(self, point: "RationalPoint") -> Fraction:
        return evaluate(self, point)

    # -- exact division -----------------------------------------------------

    def divexact(self, divisor: "Scalar") -> "Scalar":
        """Exact division by an h-free Laurent polynomial in q.

        Raises InexactDivision when a remainder is left.
        """
        if not divisor:
            raise ZeroDivisionError("division by the zero Scalar")
        if divisor.has_h():
            raise ValueError("divisor must not involve h")
        den = {b: c for (_, b), c in divisor._terms.items()}
        out: dict[tuple[int, int], Number] = {}
        for a in sorted(self.h_degrees()):
            num = {b: c for (hh, b), c in self._terms.items() if hh == a}
            quo = _laurent_divexact(num, den)
            for b, c in quo.items():
                out[(a, b)] = c
        return Scalar._raw(out)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "terms": [
                {"c": _frac_str(c), "h": a, "q": b} for (a, b), c in sorted(self._terms.items())
            ]
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Scalar":
        return cls({(t["h"], t["q"]): Fraction(t["c"]) for t in data["terms"]})

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"Scalar({format_scalar(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        return parse_scalar(text)


def _frac_str(c: Number) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def _laurent_divexact(num: dict[int, Number], den: dict[int, Number]) -> dict[int, Number]:
    if not num:
        return {}
    dmin, dmax = min(den), max(den)
    lead = Fraction(den[dmax])
    floor = min(num) - dmin
    rem = dict(num)
    quo: dict[int, Number] = {}
    while rem:
        top = max(rem)
        t = top - dmax
        if t < floor:
            raise InexactDivision("Laurent division left a remainder")
        c = _norm(rem[top] / lead)
        quo[t] = c
        for e, d in den.items():
            k = e + t
            v = rem.get(k, 0) - c * d
            if v:
                rem[k] = _norm(v)
            else:
                rem.pop(k, None)
    return quo


ZERO = Scalar()
ONE = Scalar({(0, 0): 1})
Q = Scalar({(0, 1): 1})
H = Scalar({(1, 0): 1})


def q_pow(e: int) -> Scalar:
    return Scalar._raw({(0, e): 1})


# -- text form ----------------------------------------------------------------


def _factor_str(name: str, e: int) -> str:
    if e == 1:
        return name
    return f"{name}^{e}"


def format_scalar(x: Scalar) -> str:
    """Human-readable form, highest h power first, then highest q power.

    Example: ``2*q^2 - q^-1``.
    """
    if x.is_zero():
        return "0"
    parts = []
    for (a, b), c in sorted(x._terms.items(), reverse=True):
        factors = []
        if a:
            factors.append(_factor_str("h", a))
        if b:
            factors.append(_factor_str("q", b))
        mag = abs(Fraction(c))
        if not factors:
            body = _num_str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_num_str(mag)] + factors)
        parts.append((c < 0, body))
    neg, body = parts[0]
    out = ("-" if neg else "") + body
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


def _num_str(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def parse_scalar(text: str) -> Scalar:
    """Parse the text form produced by :func:`format_scalar`.

    Accepts sums of products of rationals, ``h``, ``q`` and their integer
    powers, e.g. ``"3/2*h^2*q^-1 - q + 4"``.
    """
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty Scalar text")
    # split on + and - that are not exponent signs
    tokens = []
    i, start, sign = 0, 0, 1
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        i = start = 1
    while i < len(s):
        ch = s[i]
        if ch in "+-" and s[i - 1] not in "^*/":
            tokens.append((sign, s[start:i]))
            sign = -1 if ch == "-" else 1
            start = i + 1
        i += 1
    tokens.append((sign, s[start:]))
    total = ZERO
    for sign, body in tokens:
        if not body:
            raise ValueError(f"malformed Scalar text: {text!r}")
        term = Scalar.const(sign)
        for factor in body.split("*"):
            term = term * _parse_factor(factor, text)
        total = total + term
    return total


def _parse_factor(factor: str, text: str) -> Scalar:
    m = re.fullmatch(r"([hq])(?:\^(-?\d+))?", factor)
    if m:
        e = int(m.group(2)) if m.group(2) else 1
        if m.group(1) == "h":
            if e < 0:
                raise ValueError("negative powers of h are not supported")
            return Scalar({(e, 0): 1})
        return Scalar({(0, e): 1})
    m = re.fullmatch(r"-?\d+(?:/\d+)?", factor)
    if m:
        return Scalar.const(Fraction(factor))
    raise ValueError(f"cannot parse factor {factor!r} in {text!r}")


# -- evaluation ---------------------------------------------------------------


@dataclass(frozen=True)
class RationalPoint:
    """A numeric evaluation point for q and h (and optionally a real s)."""

    q0: Fraction
    h0: Fraction
    s_real: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "q0", Fraction(self.q0))
        object.__setattr__(self, "h0", Fraction(self.h0))
        if self.q0 == 0:
            raise ValueError("q0 must be nonzero (Laurent terms need 1/q0)")

    @classmethod
    def parse(cls, text: str) -> "RationalPoint":
        """Parse ``"q=1/2,h=3"``."""
        vals = {}
        for part in text.split(","):
            key, _, val = part.partition("=")
            key = key.strip()
            if key not in ("q", "h", "s"):
                raise ValueError(f"unknown evaluation variable {key!r}")
            vals[key] = val.strip()
        if "q" not in vals or "h" not in vals:
            raise ValueError("evaluation point needs both q and h")
        s_real = float(vals["s"]) if "s" in vals else None
        return cls(Fraction(vals["q"]), Fraction(vals["h"]), s_real)


def evaluate(x: Scalar, p: RationalPoint) -> Fraction:
    """Substitute q -> p.q0, h -> p.h0 and return the exact rational."""
    if p.q0 == 0:
        raise ValueError("cannot evaluate at q0 = 0")
    total = Fraction(0)
    for (a, b), c in x._terms.items():
        total += c * p.h0**a * p.q0**b
    return total


# -- q-analogue primitives ----------------------------------------------------


@lru_cache(maxsize=4096)
def _q_int(x: int) -> Scalar:
    if x > 0:
        return Scalar._raw({(0, i): 1 for i in range(x)})
    if x == 0:
        return ZERO
    # (q^x - 1)/(q - 1) = -(q^x + ... + q^-1) for x < 0
    return Scalar._raw({(0, i): -1 for i in range(x, 0)})


def q_int(x: int, inverse_base: bool = False) -> Scalar:
    """The q-analogue [x]_q = (q^x - 1)/(q - 1) for any integer x.

    With ``inverse_base`` the result is [x]_{1/q}.
    """
    r = _q_int(int(x))
    return r.subs_q_power(-1) if inverse_base else r


def q_int_base(x: int, base_exp: int) -> Scalar:
    """[x]_{q^base_exp}; base_exp = 0 gives the plain integer x."""
    return _q_int(int(x)).subs_q_power(base_exp)


@lru_cache(maxsize=None)
def _gauss(n: int, k: int) -> Scalar:
    if k < 0 or k > n:
        return ZERO
    if k == 0 or k == n:
        return ONE
    return _gauss(n - 1, k - 1) + _gauss(n - 1, k).mul_monomial(q=k)


def q_binomial(n: int, k: int, base_exp: int = 1) -> Scalar:
    """Gaussian binomial [n choose k] in base q**base_exp.

    Returns zero when k > n or k < 0. ``base_exp = 0`` yields the ordinary
    binomial coefficient.
    """
    if n < 0:
        raise ValueError("q_binomial needs n >= 0")
    if k < 0 or k > n:
        return ZERO
    if base_exp == 0:
        return Scalar.const(comb(n, k))
    return _gauss(n, k).subs_q_power(base_exp)


def q_falling(base_times: int, j: int, one_minus_s: int) -> Scalar:
    """prod_{i<j} [base_times - i*one_minus_s]_q.

    This is [r]^{(j)}_{q,1-s} with base_times = r*(1-s).
    """
    if j > 0 and one_minus_s == 0:
        raise ValueError("one_minus_s must be nonzero when j > 0")
    out = ONE
    for i in range(j):
        out = out * _q_int(base_times - i * one_minus_s)
        if not out:
            return ZERO
    return out


def q_factorial_gen(k: int, one_minus_s: int) -> Scalar:
    """[k]_{q,1-s}! = prod_{i=1}^{k} [i*(1-s)]_q."""
    return q_falling(k * one_minus_s, k, one_minus_s)


def prod(factors: Iterable[Scalar]) -> Scalar:
    out = ONE
    for f in factors:
        out = out * f
    return out


def binom(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)
