"""Generalized q-Bell polynomials, the Dobinsky-type product formula, and
Spivey-type recurrences for the generalized q-Stirling numbers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .explicit import coefficients, omega, staircase_shape
from .report import Report
from .scalar import (
    H, ONE, ZERO, RationalPoint, Scalar, binom, evaluate, prod, q_binomial,
    q_factorial_gen, q_int, q_pow,
)
from .triangles import stirling_q

BELL_IDENTITIES = ("ssum", "bsum", "nmk", "nm", "qspivey", "man1", "man2", "spivey-classical")

# x-polynomials with Scalar coefficients: dict power -> Scalar


@dataclass
class BellPoly:
    coeffs: dict[int, Scalar]
    r_vec: tuple[int, ...] = ()
    s_vec: tuple[int, ...] = ()

    def number(self) -> Scalar:
        """The Bell number, i.e. the polynomial at x = 1."""
        return sum(self.coeffs.values(), ZERO)

    def at(self, x) -> Scalar:
        x = Scalar.coerce(x)
        return sum((c * x ** k for k, c in self.coeffs.items()), ZERO)

    def evaluate(self, x0, point: RationalPoint) -> Fraction:
        x0 = Fraction(x0)
        return sum((evaluate(c, point) * x0 ** k for k, c in self.coeffs.items()), Fraction(0))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in sorted(self.coeffs.items()):
            xs = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            ctext = str(c)
            if not xs:
                parts.append(f"({ctext})" if len(c.terms) > 1 else ctext)
            elif c == ONE:
                parts.append(xs)
            else:
                parts.append(f"({ctext})*{xs}" if len(c.terms) > 1 else f"{ctext}*{xs}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {
            "r": list(self.r_vec),
            "s": list(self.s_vec),
            "coeffs": [{"k": k, "coeff": c.to_json()} for k, c in sorted(self.coeffs.items())],
        }


def bell_poly(r_vec: Sequence[int], s_vec: Sequence[int], s: int, method: str = "gamma") -> BellPoly:
    """B^{r,s}[x] = sum_k S^{r,s}[k] x^k; an empty shape gives 1."""
    if len(r_vec) == 0:
        return BellPoly({0: ONE})
    return BellPoly(coefficients(r_vec, s_vec, s, method), tuple(r_vec), tuple(s_vec))


def bell_poly_staircase(n: int, s: int) -> BellPoly:
    """B_{s,h,q}[n; x] from the recurrence triangle."""
    r, sv = staircase_shape(n)
    coeffs = {k: stirling_q(n, k, s) for k in range(n + 1)}
    return BellPoly({k: c for k, c in coeffs.items() if c}, r, sv)


def bell_number(n: int, s: int) -> Scalar:
    """B_{s,h,q}[n]."""
    return sum((stirling_q(n, k, s) for k in range(n + 1)), ZERO)


def classical_bell(n: int) -> int:
    """B(n) through the Bell triangle (Aitken's array)."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


# -- Dobinsky-type product -------------------------------------------------------


@dataclass
class DobinskyResult:
    lhs: Fraction
    rhs_N: Fraction
    gap: float
    N: int
    coefficient_report: Report = field(default_factory=lambda: Report("dobinsky"))


def _dob_factors(r_vec, s_vec, s: int, N: int):
    oms = 1 - s
    total_s = sum(s_vec)
    facts = [q_factorial_gen(j, oms) for j in range(N + 1)]
    omegas = [omega(j, r_vec, s_vec, s) for j in range(N + 1)]
    return oms, total_s, facts, omegas


def dobinsky_coefficients(r_vec, s_vec, s: int, N: int, points: Sequence[RationalPoint] = ()) -> Report:
    """Coefficient-level check of the product formula up to x^N.

    Symbolically, [k]_{q,1-s}! times the x^k coefficient of the product
    (written in the variable h*x so that no power of h is negative) must
    equal [k]_{q,1-s}! h^k S^{r,s}[k]. At each rational point the x^k
    coefficient of the product as printed must equal S^{r,s}[k] exactly.
    """
    if s == 1:
        raise ValueError("the Dobinsky-type formula needs s != 1")
    rep = Report("dobinsky")
    oms, total_s, facts, omegas = _dob_factors(r_vec, s_vec, s, N)
    coeffs = coefficients(r_vec, s_vec, s, "gamma")
    for k in range(N + 1):
        lhs = ZERO
        for j in range(k + 1):
            term = q_binomial(k, j, oms).mul_monomial(h=total_s, q=binom(k - j, 2) * oms) * omegas[j]
            lhs = lhs + (-term if (k - j) % 2 else term)
        rhs = facts[k] * coeffs.get(k, ZERO).mul_monomial(h=k)
        rep.compare(f"[{k}]! x^{k} coefficient", lhs, rhs)
    for i, pt in enumerate(points):
        if any(evaluate(f, pt) == 0 for f in facts):
            rep.reject(f"pt{i}: a q-factorial vanishes at q={pt.q0}")
            continue
        a, b = _dob_series(pt, oms, total_s, facts, omegas, N)
        for k in range(N + 1):
            ck = sum((a[j] * b[k - j] for j in range(k + 1)), Fraction(0))
            rep.compare(f"x^{k} coefficient @pt{i}", ck, evaluate(coeffs.get(k, ZERO), pt))
    return rep


def _dob_series(pt: RationalPoint, oms: int, total_s: int, facts, omegas, N: int):
    h0, q0 = pt.h0, pt.q0
    a, b = [], []
    for j in range(N + 1):
        fj = evaluate(facts[j], pt)
        a.append(h0 ** (total_s - j) * (-1) ** j * q0 ** (binom(j, 2) * oms) / fj)
        b.append(evaluate(omegas[j], pt) / (h0 ** j * fj))
    return a, b


def dobinsky_check(r_vec, s_vec, s: int, point: RationalPoint, x0, N: int) -> DobinskyResult:
    """Compare the Bell polynomial at x0 with the product of the two
    N-term truncated series, and run the coefficient-level check."""
    if s == 1:
        raise ValueError("the Dobinsky-type formula needs s != 1")
    if N < sum(s_vec):
        raise ValueError("truncation order must be at least |s|")
    x0 = Fraction(x0)
    oms, total_s, facts, omegas = _dob_factors(r_vec, s_vec, s, N)
    if any(evaluate(f, point) == 0 for f in facts):
        raise ValueError(f"a q-factorial vanishes at q={point.q0}; pick another point")
    lhs = bell_poly(r_vec, s_vec, s).evaluate(x0, point)
    a, b = _dob_series(point, oms, total_s, facts, omegas, N)
    sa = sum((c * x0 ** j for j, c in enumerate(a)), Fraction(0))
    sb = sum((c * x0 ** j for j, c in enumerate(b)), Fraction(0))
    rhs = sa * sb
    return DobinskyResult(lhs, rhs, abs(float(lhs - rhs)), N, dobinsky_coefficients(r_vec, s_vec, s, min(N, total_s + 2)))


def dobinsky_classical(n: int, terms: int = 40, x: float = 1.0) -> float:
    """e^{-x} sum_{j<terms} j^n x^j / j!, the classical Dobinsky sum."""
    return math.exp(-x) * math.fsum(j ** n * x ** j / math.factorial(j) for j in range(terms))


# -- Spivey-type identities ------------------------------------------------------


@dataclass
class BellParams:
    n_max: int = 8
    s: int = 2


def _alpha(j: int, m: int, s: int) -> int:
    return j * (1 - s) + s * m


def _nmk_rhs(n: int, m: int, s: int, inner) -> Scalar:
    """Double sum shared by the (n, m) identities; ``inner(r, j)`` supplies
    the S[r, k-j] / B[r] factor."""
    total = ZERO
    for r in range(n + 1):
        for j in range(m + 1):
            smj = stirling_q(m, j, s)
            if not smj:
                continue
            tail = inner(r, j)
            if not tail:
                continue
            a = _alpha(j, m, s)
            term = q_binomial(n, r, s).mul_monomial(h=n - r, q=r * a) * smj * tail
            total = total + term * prod(q_int(a + s * i) for i in range(n - r))
    return total


def _ssum_rhs(n: int, s: int, inner) -> Scalar:
    total = ZERO
    for r in range(n):
        tail = inner(r)
        if not tail:
            continue
        term = q_binomial(n - 1, r, s).mul_monomial(h=n - r - 1, q=r) * tail
        total = total + term * prod(q_int(1 + s * i) for i in range(n - r - 1))
    return total


def _xpoly_add(p: dict, r: dict) -> dict:
    out = dict(p)
    for k, c in r.items():
        out[k] = out.get(k, ZERO) + c
    return {k: c for k, c in out.items() if c}


def _xpoly_scale_shift(p: dict, c: Scalar, shift: int) -> dict:
    return {k + shift: v * c for k, v in p.items() if v * c}


def _at_q1(x: Scalar) -> Scalar:
    return x.subs_q_power(0)


def _check_qspivey(p: BellParams, rep: Report) -> None:
    s, N = p.s, p.n_max
    polys = {n: bell_poly_staircase(n, s).coeffs for n in range(N + 1)}
    for n in range(N + 1):
        for m in range(N - n + 1):
            rhs: dict = {}
            for r in range(n + 1):
                for j in range(m + 1):
                    smj = stirling_q(m, j, s)
                    if not smj:
                        continue
                    a = _alpha(j, m, s)
                    c = (q_binomial(n, r, s).mul_monomial(h=n - r, q=r * a) * smj
                         * prod(q_int(a + s * i) for i in range(n - r)))
                    rhs = _xpoly_add(rhs, _xpoly_scale_shift(polys[r], c, j))
            rep.compare(f"B[{n}+{m};x]", _poly_text(polys[n + m]), _poly_text(rhs))
    for n in range(1, N + 1):
        rhs = {}
        for r in range(n):
            c = (q_binomial(n - 1, r, s).mul_monomial(h=n - r - 1, q=r)
                 * prod(q_int(1 + s * i) for i in range(n - r - 1)))
            rhs = _xpoly_add(rhs, _xpoly_scale_shift(polys[r], c, 1))
        rep.compare(f"B[{n};x] first-column form", _poly_text(polys[n]), _poly_text(rhs))
    # the last display, as printed, is the s = 0, h = 1 collapse
    bq = [bell_number(n, 0).subs_h(1) for n in range(N + 1)]
    for n in range(N + 1):
        for m in range(N - n + 1):
            rhs = ZERO
            for r in range(n + 1):
                for j in range(m + 1):
                    rhs = rhs + q_pow(r * j) * binom(n, r) * stirling_q(m, j, 0).subs_h(1) * bq[r] * q_int(j) ** (n - r)
            rep.compare(f"B_q[{n}+{m}] (s=0, h=1)", bq[n + m], rhs)


def _poly_text(p: dict) -> str:
    return " + ".join(f"({c})x^{k}" for k, c in sorted(p.items()) if c) or "0"


def _man2_rhs(n: int, m: int, s: int, bells: Sequence[Scalar]) -> Scalar:
    total = ZERO
    for r in range(n + 1):
        for j in range(m + 1):
            smj = _at_q1(stirling_q(m, j, s))
            if not smj:
                continue
            fac = prod(Scalar.const(_alpha(j, m, s) + s * i) for i in range(n - r))
            total = total + (smj * bells[r] * fac).mul_monomial(h=n - r) * binom(n, r)
    return total


def verify_bell_identity(tag: str, params: BellParams) -> Report:
    if tag not in BELL_IDENTITIES:
        raise ValueError(f"unknown identity {tag!r}; expected one of {BELL_IDENTITIES}")
    s, N = params.s, params.n_max
    rep = Report(tag)
    if tag == "ssum":
        for n in range(1, N + 1):
            for k in range(1, n + 1):
                rhs = _ssum_rhs(n, s, lambda r: stirling_q(r, k - 1, s))
                rep.compare(f"S[{n},{k}]", stirling_q(n, k, s), rhs)
    elif tag == "bsum":
        for n in range(1, N + 1):
            rep.compare(f"B[{n}]", bell_number(n, s), _ssum_rhs(n, s, lambda r: bell_number(r, s)))
    elif tag == "nmk":
        for n in range(N + 1):
            for m in range(N - n + 1):
                for k in range(n + m + 1):
                    rhs = _nmk_rhs(n, m, s, lambda r, j: stirling_q(r, k - j, s))
                    rep.compare(f"S[{n}+{m},{k}]", stirling_q(n + m, k, s), rhs)
    elif tag == "nm":
        for n in range(N + 1):
            for m in range(N - n + 1):
                rhs = _nmk_rhs(n, m, s, lambda r, j: bell_number(r, s))
                rep.compare(f"B[{n}+{m}]", bell_number(n + m, s), rhs)
    elif tag == "qspivey":
        _check_qspivey(params, rep)
    elif tag in ("man1", "man2"):
        bells = [_at_q1(bell_number(n, s)) for n in range(N + 1)]
        if tag == "man1":
            for n in range(1, N + 1):
                rhs = sum(
                    ((bells[r] * prod(Scalar.const(1 + s * i) for i in range(n - r - 1))).mul_monomial(h=n - r - 1)
                     * binom(n - 1, r) for r in range(n)),
                    ZERO,
                )
                rep.compare(f"B({n})", bells[n], rhs)
                # man1 is the (n -> n-1, m -> 1) case of man2
                rep.compare(f"man2(n={n - 1}, m=1) = man1 rhs", _man2_rhs(n - 1, 1, s, bells), rhs)
        else:
            for n in range(N + 1):
                for m in range(N - n + 1):
                    rep.compare(f"B({n}+{m})", bells[n + m], _man2_rhs(n, m, s, bells))
    elif tag == "spivey-classical":
        bells = [classical_bell(n) for n in range(N + 1)]
        S = lambda n, k: evaluate(stirling_q(n, k, 0), RationalPoint(1, 1))  # noqa: E731
        for n in range(N + 1):
            for m in range(N - n + 1):
                rhs = sum(binom(n, r) * S(m, j) * bells[r] * j ** (n - r) for r in range(n + 1) for j in range(m + 1))
                rep.compare(f"B({n}+{m})", Fraction(bells[n + m]), Fraction(rhs))
    return rep
