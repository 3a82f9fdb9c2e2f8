"""Closed-form coefficient formulas for the normal ordering of
H_{r,s} = V^{r_n} U^{s_n} ... V^{r_1} U^{s_1}.

Coefficient maps are ``{k: S^{r,s}[k]}`` where k is the exponent of U;
zero coefficients are omitted, matching :func:`rewrite.normal_order`.
"""

from __future__ import annotations

from itertools import product as cartesian
from typing import Sequence

from .rewrite import coeffs_by_u, normal_order, word_from_shape
from .rook import coeffs_via_rooks
from .scalar import (
    H, ONE, ZERO, InexactDivision, Scalar, binom, prod, q_binomial, q_falling,
    q_factorial_gen, q_int, q_pow,
)

METHODS = ("oracle", "rook", "gamma", "difference", "recurrence")


def _check_shape(r_vec: Sequence[int], s_vec: Sequence[int]) -> None:
    if len(r_vec) != len(s_vec) or not r_vec:
        raise ValueError("r and s must be nonempty and of equal length")
    if any(x < 0 for x in r_vec) or any(x < 0 for x in s_vec):
        raise ValueError("shape entries must be nonnegative")


def _nonzero(d: dict) -> dict:
    return {k: v for k, v in sorted(d.items()) if v}


def expand_UsVr(s_prime: int, r_prime: int, s: int) -> dict:
    """Normal form of U^{s'} V^{r'} as ``{(v_exp, u_exp): Scalar}``."""
    out = {}
    for j in range(s_prime + 1):
        c = gamma(j, r_prime, s_prime, s).mul_monomial(h=j)
        if c:
            out[(r_prime + j * (s - 1), s_prime - j)] = c
    return out


def gamma(j: int, r_prime: int, s_prime: int, s: int) -> Scalar:
    """q^{r'(s'-j)} [s' choose j]_{q^{s-1}} prod_{i<j} [r' + i(s-1)]_q."""
    if j < 0 or j > s_prime:
        return ZERO
    out = q_binomial(s_prime, j, s - 1).mul_monomial(q=r_prime * (s_prime - j))
    for i in range(j):
        out = out * q_int(r_prime + i * (s - 1))
        if not out:
            return ZERO
    return out


def coeffs_via_gamma(r_vec: Sequence[int], s_vec: Sequence[int], s: int) -> dict[int, Scalar]:
    """Coefficients from the product of Gamma factors, summed over
    j_1..j_{n-1} with 0 <= j_i <= s_{i+1}."""
    _check_shape(r_vec, s_vec)
    n = len(r_vec)
    total_s = sum(s_vec)
    out: dict[int, Scalar] = {}
    for js in cartesian(*(range(s_vec[i] + 1) for i in range(1, n))):
        term = ONE
        r_prefix = 0
        j_prefix = 0
        for i in range(1, n):
            r_prefix += r_vec[i - 1]
            term = term * gamma(js[i - 1], r_prefix + j_prefix * (s - 1), s_vec[i], s)
            if not term:
                break
            j_prefix += js[i - 1]
        if not term:
            continue
        k = total_s - j_prefix
        out[k] = out.get(k, ZERO) + term.mul_monomial(h=j_prefix)
    return _nonzero(out)


def omega(j: int, r_vec: Sequence[int], s_vec: Sequence[int], s: int) -> Scalar:
    """prod_t [j - (s_1+..+s_{t-1}) + (r_1+..+r_{t-1})/(1-s)]^{(s_t)}_{q,1-s}.

    Each factor is evaluated as q_falling with base_times equal to the
    argument times (1-s), which is always an integer.
    """
    if s == 1:
        raise ValueError("omega is undefined for s = 1")
    _check_shape(r_vec, s_vec)
    oms = 1 - s
    out = ONE
    s_prefix = r_prefix = 0
    for rt, st in zip(r_vec, s_vec):
        base_times = (j - s_prefix) * oms + r_prefix
        out = out * q_falling(base_times, st, oms)
        if not out:
            return ZERO
        s_prefix += st
        r_prefix += rt
    return out


def _difference_sum(k: int, omegas: Sequence[Scalar], s: int) -> Scalar:
    oms = 1 - s
    total = ZERO
    for j in range(k + 1):
        if not omegas[j]:
            continue
        sign = -1 if (k - j) % 2 else 1
        term = q_binomial(k, j, oms).mul_monomial(q=binom(k - j, 2) * oms) * omegas[j]
        total = total + (term if sign > 0 else -term)
    return total


def _divide_exact(num: Scalar, den: Scalar, what: str) -> Scalar:
    try:
        return num.divexact(den)
    except InexactDivision as exc:  # never expected; signals a bug upstream
        raise ArithmeticError(f"internal error: {what} is not divisible by the q-factorial") from exc


def coeffs_via_difference(r_vec: Sequence[int], s_vec: Sequence[int], s: int) -> dict[int, Scalar]:
    """Coefficients from the q-difference formula (needs s != 1)."""
    if s == 1:
        raise ValueError("the q-difference formula needs s != 1")
    _check_shape(r_vec, s_vec)
    total_s = sum(s_vec)
    omegas = [omega(j, r_vec, s_vec, s) for j in range(total_s + 1)]
    out = {}
    for k in range(total_s + 1):
        num = _difference_sum(k, omegas, s)
        if not num:
            continue
        val = _divide_exact(num, q_factorial_gen(k, 1 - s), f"coefficient k={k}")
        out[k] = val.mul_monomial(h=total_s - k)
    return _nonzero(out)


def stirling_explicit(n: int, k: int, s: int, which: str = "composition") -> Scalar:
    """S_{s,h,q}[n,k] from a closed form.

    ``composition``: a sum over 0/1 vectors (j_1..j_{n-1}) with n-k ones;
    ``difference``: the alternating q-binomial sum divided by [k]_{q,1-s}!.
    """
    if k < 0 or k > n:
        return ZERO
    if n == 0:
        return ONE
    if which == "composition":
        total = ZERO
        for js in cartesian((0, 1), repeat=n - 1):
            if sum(js) != n - k:
                continue
            term = ONE
            jp = 0
            for i, ji in enumerate(js, start=1):
                a = i + jp * (s - 1)
                term = term * (q_int(a) if ji else q_pow(a))
                jp += ji
            total = total + term
        return total.mul_monomial(h=n - k)
    if which == "difference":
        if s == 1:
            raise ValueError("the difference formula needs s != 1")
        oms = 1 - s
        total = ZERO
        for j in range(k + 1):
            # [s]_q [x]_{q^s} = [s x]_q with x = j/s + t - j - 1
            inner = prod(q_int(j * oms + (t - 1) * s) for t in range(1, n + 1))
            if not inner:
                continue
            term = q_binomial(k, j, oms).mul_monomial(q=binom(k - j, 2) * oms) * inner
            total = total + (-term if (k - j) % 2 else term)
        if s == 0:
            den = q_factorial_gen(k, 1)
        else:
            den = q_factorial_gen(k, oms)
        return _divide_exact(total, den, f"S[{n},{k}]").mul_monomial(h=n - k)
    raise ValueError(f"unknown variant {which!r}; expected 'composition' or 'difference'")


def coefficients(r_vec: Sequence[int], s_vec: Sequence[int], s: int, method: str = "oracle") -> dict[int, Scalar]:
    """Dispatch to one of the coefficient methods in :data:`METHODS`."""
    _check_shape(r_vec, s_vec)
    if method == "oracle":
        if s < 0:
            raise ValueError("the rewrite oracle needs s >= 0")
        return _nonzero(coeffs_by_u(normal_order(word_from_shape(r_vec, s_vec), s)))
    if method == "rook":
        return _nonzero(coeffs_via_rooks(r_vec, s_vec, s, "row-creation" if s >= 0 else "pre-weight"))
    if method == "gamma":
        return coeffs_via_gamma(r_vec, s_vec, s)
    if method == "difference":
        return coeffs_via_difference(r_vec, s_vec, s)
    if method == "recurrence":
        if any(x != 1 for x in r_vec) or any(x != 1 for x in s_vec):
            raise ValueError("the recurrence method covers staircase shapes (all r_i = s_i = 1) only")
        from .triangles import stirling_q

        n = len(r_vec)
        return _nonzero({k: stirling_q(n, k, s) for k in range(n + 1)})
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def staircase_shape(n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return (1,) * n, (1,) * n
