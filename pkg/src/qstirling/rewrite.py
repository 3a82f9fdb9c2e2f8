"""Brute-force normal ordering of words in U, V under UV = qVU + hV^s.

This is the ground truth every closed formula in the package is checked
against. Words are plain strings over ``"UV"``.

Termination: an alpha step (UV -> VU) keeps the number of U's and lowers
the number of (U before V) pairs by one; a beta step (UV -> V^s) removes
one U. The pair (#U, #inversions) therefore decreases lexicographically on
every rewrite, so any strategy terminates.
"""

from __future__ import annotations

import heapq
import re
from typing import Iterable, Mapping

from .scalar import H, ONE, Q, Scalar

Word = str
NormalForm = dict  # (v_exp, u_exp) -> Scalar

_BLOCK_RE = re.compile(r"([UV])(?:\^(\d+))?")


def parse_word(text: str) -> Word:
    """Expand caret notation, e.g. ``"V^2U^3V"`` -> ``"VVUUUV"``."""
    text = text.replace(" ", "").replace("*", "")
    pos, out = 0, []
    for m in _BLOCK_RE.finditer(text):
        if m.start() != pos:
            break
        out.append(m.group(1) * (int(m.group(2)) if m.group(2) else 1))
        pos = m.end()
    if pos != len(text):
        raise ValueError(f"invalid word {text!r}: only U, V and ^<n> are allowed")
    return "".join(out)


def format_word(word: Word) -> str:
    """Compress runs with carets: ``"VVUUUV"`` -> ``"V^2U^3V"``."""
    out = []
    for m in re.finditer(r"U+|V+", word):
        run = m.group(0)
        out.append(run[0] if len(run) == 1 else f"{run[0]}^{len(run)}")
    return "".join(out)


def word_from_shape(r_vec, s_vec) -> Word:
    """H_{r,s} = V^{r_n} U^{s_n} ... V^{r_1} U^{s_1} (r_1, s_1 rightmost)."""
    if len(r_vec) != len(s_vec):
        raise ValueError("r and s vectors must have equal length")
    return "".join("V" * r + "U" * s for r, s in zip(reversed(r_vec), reversed(s_vec)))


def staircase(n: int) -> Word:
    return "VU" * n


def _measure(word: Word) -> tuple[int, int]:
    us = inv = 0
    for ch in word:
        if ch == "U":
            us += 1
        else:
            inv += us
    return us, inv


def normal_order(word: Word, s: int, strategy: str = "rightmost", observer=None) -> NormalForm:
    """Normally ordered form of ``word`` as ``{(v_exp, u_exp): Scalar}``.

    ``strategy`` picks which UV is rewritten first ("rightmost" or
    "leftmost"); the result does not depend on it. ``observer``, if given,
    is called as ``observer(word, coeff)`` for every intermediate word.
    """
    if s < 0:
        raise ValueError("normal ordering needs s >= 0")
    if strategy not in ("rightmost", "leftmost"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if set(word) - {"U", "V"}:
        raise ValueError("words may only contain U and V")
    pending: dict[Word, Scalar] = {word: ONE}
    # max-heap on the termination measure so each word is expanded once,
    # after every contribution to it has been merged
    heap = [(_neg(_measure(word)), word)]
    result: NormalForm = {}
    vs = "V" * s
    while heap:
        _, w = heapq.heappop(heap)
        coeff = pending.pop(w, None)
        if coeff is None:
            continue
        if observer is not None:
            observer(w, coeff)
        find = w.rfind if strategy == "rightmost" else w.find
        i = find("UV")
        if i < 0:
            key = (w.count("V"), w.count("U"))
            total = result.get(key, Scalar()) + coeff
            if total:
                result[key] = total
            else:
                result.pop(key, None)
            continue
        for nw, c in ((w[:i] + "VU" + w[i + 2:], coeff * Q), (w[:i] + vs + w[i + 2:], coeff * H)):
            if nw in pending:
                pending[nw] = pending[nw] + c
            else:
                pending[nw] = c
                heapq.heappush(heap, (_neg(_measure(nw)), nw))
    return {k: v for k, v in result.items() if v}


def _neg(m: tuple[int, int]) -> tuple[int, int]:
    return (-m[0], -m[1])


def coeffs_by_u(nf: Mapping[tuple[int, int], Scalar]) -> dict[int, Scalar]:
    """Re-key a normal form by the U exponent (V exponent is implied)."""
    out: dict[int, Scalar] = {}
    for (v, u), c in nf.items():
        if u in out:
            raise ValueError(f"two terms share U exponent {u}")
        out[u] = c
    return out


def format_normal_form(nf: Mapping[tuple[int, int], Scalar]) -> str:
    """Text form, lowest U power first: ``h*V^2 + q*V*U``."""
    if not nf:
        return "0"
    parts = []
    for (v, u), c in sorted(nf.items(), key=lambda kv: (kv[0][1], -kv[0][0])):
        mono = []
        if v:
            mono.append("V" if v == 1 else f"V^{v}")
        if u:
            mono.append("U" if u == 1 else f"U^{u}")
        ctext = str(c)
        if not mono:
            parts.append(ctext if len(c.terms) == 1 else f"({ctext})")
            continue
        if c == ONE:
            parts.append("*".join(mono))
        elif c == -ONE:
            parts.append("-" + "*".join(mono))
        elif len(c.terms) == 1:
            parts.append(ctext + "*" + "*".join(mono))
        else:
            parts.append(f"({ctext})*" + "*".join(mono))
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def normal_form_to_json(nf: Mapping[tuple[int, int], Scalar], s: int) -> dict:
    return {
        "s": s,
        "terms": [
            {"v": v, "u": u, "coeff": c.to_json()}
            for (v, u), c in sorted(nf.items(), key=lambda kv: (kv[0][1], kv[0][0]))
        ],
    }


def normal_form_from_json(data: Mapping) -> tuple[NormalForm, int]:
    nf = {(t["v"], t["u"]): Scalar.from_json(t["coeff"]) for t in data["terms"]}
    return nf, data["s"]


def board_heights(word: Word) -> list[int]:
    """Column heights of B(word), left to right.

    Each U is a column whose height is the number of V's to its right, so
    (VU)^n gives [n-1, ..., 1, 0].
    """
    heights = []
    vs = 0
    for ch in reversed(word):
        if ch == "V":
            vs += 1
        elif ch == "U":
            heights.append(vs)
        else:
            raise ValueError("words may only contain U and V")
    return heights[::-1]


def words_of_length(n: int) -> Iterable[Word]:
    if n == 0:
        yield ""
        return
    for w in words_of_length(n - 1):
        yield w + "U"
        yield w + "V"


def shape_from_word(word: Word) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Inverse of :func:`word_from_shape`: split the word into blocks
    V^{r_i} U^{s_i} read from the right."""
    r_vec, s_vec = [], []
    i = len(word)
    while i > 0:
        j = i
        while j > 0 and word[j - 1] == "U":
            j -= 1
        k = j
        while k > 0 and word[k - 1] == "V":
            k -= 1
        s_vec.append(i - j)
        r_vec.append(j - k)
        i = k
    if set(word) - {"U", "V"}:
        raise ValueError("words may only contain U and V")
    return tuple(r_vec), tuple(s_vec)
