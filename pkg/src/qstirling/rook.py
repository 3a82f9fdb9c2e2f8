"""Ferrers boards and weighted rook placements.

Three placement rules are supported:

``row-creation``
    Integer s >= 0. A rook may sit in any subcell of a cell; subcells below
    it weigh q each, cells above it are canceled (weight 1), the rook weighs
    h, and every cell to its left in the same row gains s - 1 subcells.
``pre-weight``
    Any s. Cells carry a pre-weight p (default 1, or a per-column default
    for the bottom cell); a rook adds s - 1 to each cell to its left in its
    row. Free cells weigh q^p, the rook cell h*[p]_q, canceled cells 1.
``modified``
    Staircase boards only. The t-th rook (counting from the right) adds
    s - 1 to the cell t places above the bottom cell of every column to its
    left, wherever the rooks themselves sit.

Boards are described by column heights listed left to right. Rows are
numbered from the top: row 1 is the longest row. A column of height H
holds rows 1..H and its bottom cell is row H. Rooks are placed column by
column from right to left.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .rewrite import board_heights, word_from_shape
from .scalar import H, ONE, ZERO, RationalPoint, Scalar, q_int, q_pow

RULES = ("row-creation", "pre-weight", "modified")


@dataclass(frozen=True)
class FerrersBoard:
    heights: tuple[int, ...]
    # optional default pre-weight of the bottom cell, one per column
    defaults: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "heights", tuple(int(x) for x in self.heights))
        if any(x < 0 for x in self.heights):
            raise ValueError("column heights must be nonnegative")
        if any(a < b for a, b in zip(self.heights, self.heights[1:])):
            raise ValueError("heights must weakly decrease from left to right")
        if self.defaults is not None:
            d = tuple(self.defaults)
            if len(d) != len(self.heights):
                raise ValueError("one default pre-weight per column is required")
            object.__setattr__(self, "defaults", d)

    @classmethod
    def from_word(cls, word: str) -> "FerrersBoard":
        return cls(tuple(board_heights(word)))

    @classmethod
    def staircase(cls, n: int) -> "FerrersBoard":
        """J_n, the board of (VU)^n."""
        return cls(tuple(range(n - 1, -1, -1)))

    @classmethod
    def staircase_plus(cls, n: int, alpha=1) -> "FerrersBoard":
        """J'_{n,alpha}: the board of (VU)^n V with bottom pre-weights alpha."""
        return cls(tuple(range(n, 0, -1)), (alpha,) * n)

    @property
    def ncols(self) -> int:
        return len(self.heights)

    @property
    def num_cells(self) -> int:
        return sum(self.heights)

    @property
    def positive_columns(self) -> int:
        return sum(1 for x in self.heights if x > 0)

    @property
    def max_height(self) -> int:
        return max(self.heights, default=0)

    def base_weight(self, col: int, row: int):
        """Default pre-weight (or subcell count) of cell (col, row)."""
        if self.defaults is not None and row == self.heights[col]:
            return self.defaults[col]
        return 1

    def is_staircase(self) -> bool:
        """True for J_n and for J'_{n,alpha}-shaped boards."""
        rtl = self.heights[::-1]
        if not rtl:
            return True
        return all(b - a == 1 for a, b in zip(rtl, rtl[1:])) and rtl[0] in (0, 1)

    def to_json(self) -> dict:
        out: dict = {"heights": list(self.heights)}
        if self.defaults is not None:
            out["defaults"] = [_json_num(d) for d in self.defaults]
        return out

    @classmethod
    def from_json(cls, data) -> "FerrersBoard":
        defaults = data.get("defaults")
        if defaults is not None:
            defaults = tuple(_parse_num(d) for d in defaults)
        return cls(tuple(data["heights"]), defaults)


def board_of(word: str) -> FerrersBoard:
    """B(word): one column per U, as tall as the number of V's to its right."""
    if not word:
        raise ValueError("board_of needs a nonempty word")
    return FerrersBoard.from_word(word)


def _json_num(d):
    if isinstance(d, Fraction):
        return f"{d.numerator}/{d.denominator}"
    return d


def _parse_num(d):
    if isinstance(d, str):
        f = Fraction(d)
        return f.numerator if f.denominator == 1 else f
    return d


@dataclass(frozen=True)
class RookPlacement:
    """Rooks as (column, row, subcell) triples, column indices left to right.

    ``subcell`` counts from the bottom of the cell and is always 0 outside
    the row-creation rule.
    """

    rooks: tuple[tuple[int, int, int], ...]
    rule: str
    s: object = field(default=None)

    @property
    def k(self) -> int:
        return len(self.rooks)

    def row_of(self, col: int) -> Optional[int]:
        for c, r, _ in self.rooks:
            if c == col:
                return r
        return None


# -- weight kits --------------------------------------------------------------
# The enumeration only ever needs q^p and h*[p]_q (or h*q^e for a single
# subcell); swapping the kit switches between exact and floating-point mode.


class _SymbolicKit:
    zero = ZERO
    one = ONE

    def qp(self, p) -> Scalar:
        return q_pow(_as_int(p))

    def rook(self, p) -> Scalar:
        return H * q_int(_as_int(p))

    def rook_sub(self, e) -> Scalar:
        return Scalar._raw({(1, e): 1})


class _NumericKit:
    zero = 0.0
    one = 1.0

    def __init__(self, q0: float, h0: float):
        self.q0 = q0
        self.h0 = h0

    def qp(self, p) -> float:
        return self.q0 ** p

    def rook(self, p) -> float:
        if self.q0 == 1.0:
            return self.h0 * p
        return self.h0 * (self.q0 ** p - 1.0) / (self.q0 - 1.0)

    def rook_sub(self, e) -> float:
        return self.h0 * self.q0 ** e


def _as_int(p) -> int:
    if isinstance(p, int):
        return p
    f = Fraction(p)
    if f.denominator != 1:
        raise ValueError("symbolic mode needs integral pre-weights; use the numeric path")
    return f.numerator


def _check_rule(board: FerrersBoard, s, rule: str) -> None:
    if rule not in RULES:
        raise ValueError(f"unknown rule {rule!r}; expected one of {RULES}")
    if rule == "row-creation":
        if not isinstance(s, int) or s < 0:
            raise ValueError("the row-creation rule needs an integer s >= 0")
        if board.defaults is not None and any(
            not isinstance(d, int) or d < 0 for d in board.defaults
        ):
            raise ValueError("row-creation defaults must be nonnegative integers (subcell counts)")
    if rule == "modified" and not board.is_staircase():
        raise ValueError("the modified pre-weight rule is defined on staircase boards only")


def _column_options(board, col, state, s, rule, kit):
    """Yield (rook_row, subcell, weight, new_state) for one column.

    ``state`` is the per-row rook count (row-creation, pre-weight) or the
    number of rooks already placed (modified).
    """
    height = board.heights[col]
    if rule == "modified":
        t = state
        pw = [board.base_weight(col, height - u) + ((s - 1) if 1 <= u <= t else 0) for u in range(height)]
        # pw[u] is the pre-weight u places above the bottom cell
        total = sum(pw)
        yield None, 0, kit.qp(total), t
        below = 0
        for u in range(height):
            row = height - u
            yield row, 0, kit.qp(below) * kit.rook(pw[u]), t + 1
            below += pw[u]
        return

    counts = state
    weights = {row: board.base_weight(col, row) + (s - 1) * counts[row - 1] for row in range(1, height + 1)}
    yield None, 0, kit.qp(sum(weights.values())), counts
    below = 0
    for row in range(height, 0, -1):
        nxt = counts[: row - 1] + (counts[row - 1] + 1,) + counts[row:]
        m = weights[row]
        if rule == "row-creation":
            for i in range(m):
                yield row, i, kit.rook_sub(below + i), nxt
        else:
            yield row, 0, kit.qp(below) * kit.rook(m), nxt
        below += m


def _initial_state(board, rule):
    return 0 if rule == "modified" else (0,) * board.max_height


def enumerate_placements(board: FerrersBoard, k: int, s, rule: str = "row-creation") -> Iterator[tuple[RookPlacement, Scalar]]:
    """Yield every k-rook placement on ``board`` with its exact weight."""
    _check_rule(board, s, rule)
    kit = _SymbolicKit()
    ncols = board.ncols

    def walk(col, state, placed, rooks, weight):
        if col < 0:
            if placed == k:
                yield RookPlacement(tuple(sorted(rooks)), rule, s), weight
            return
        # columns left of (and including) col that could still take a rook
        if k - placed > sum(1 for c in range(col + 1) if board.heights[c] > 0):
            return
        for row, sub, w, nxt in _column_options(board, col, state, s, rule, kit):
            if row is None:
                yield from walk(col - 1, nxt, placed, rooks, weight * w)
            elif placed < k:
                yield from walk(col - 1, nxt, placed + 1, rooks + [(col, row, sub)], weight * w)

    yield from walk(ncols - 1, _initial_state(board, rule), 0, [], ONE)


def _rook_dp(board: FerrersBoard, s, rule: str, kit, kmax: Optional[int] = None) -> dict:
    """Transfer-matrix sum over columns; returns {k: total weight}."""
    layer = {(_initial_state(board, rule), 0): kit.one}
    for col in range(board.ncols - 1, -1, -1):
        nxt: dict = {}
        for (state, k), w in layer.items():
            for row, _, cw, new_state in _column_options(board, col, state, s, rule, kit):
                kk = k if row is None else k + 1
                if kmax is not None and kk > kmax:
                    continue
                key = (new_state, kk)
                val = w * cw
                nxt[key] = nxt[key] + val if key in nxt else val
        layer = nxt
    totals: dict = {}
    for (_, k), w in layer.items():
        totals[k] = totals[k] + w if k in totals else w
    return totals


def rook_numbers(board: FerrersBoard, s, rule: str = "row-creation") -> dict[int, Scalar]:
    """All rook numbers R_{s,h,q}[board, k], as {k: Scalar} (zeros dropped)."""
    _check_rule(board, s, rule)
    totals = _rook_dp(board, s, rule, _SymbolicKit())
    return {k: v for k, v in sorted(totals.items()) if v}


def rook_number(board: FerrersBoard, k: int, s, rule: str = "row-creation") -> Scalar:
    """R_{s,h,q}[board, k]: total weight of the k-rook placements."""
    _check_rule(board, s, rule)
    if k < 0 or k > board.positive_columns:
        return ZERO
    return _rook_dp(board, s, rule, _SymbolicKit(), kmax=k).get(k, ZERO)


def rook_number_numeric(board: FerrersBoard, k: int, s_real: float, point: RationalPoint,
                        rule: str = "pre-weight") -> float:
    """Floating-point rook number for real s under a pre-weight rule."""
    if rule not in ("pre-weight", "modified"):
        raise ValueError("numeric mode is defined for the pre-weight rules only")
    if rule == "modified" and not board.is_staircase():
        raise ValueError("the modified pre-weight rule is defined on staircase boards only")
    if point.q0 <= 0:
        raise ValueError("numeric mode needs q0 > 0 for real exponents")
    if k < 0 or k > board.positive_columns:
        return 0.0
    kit = _NumericKit(float(point.q0), float(point.h0))
    return float(_rook_dp(board, float(s_real), rule, kit, kmax=k).get(k, 0.0))


def coeffs_via_rooks(r_vec: Sequence[int], s_vec: Sequence[int], s, rule: str = "row-creation") -> dict[int, Scalar]:
    """Normal-ordering coefficients of H_{r,s} read off the rook numbers.

    The coefficient of U^k is R[B(H_{r,s}), |s| - k].
    """
    board = FerrersBoard.from_word(word_from_shape(r_vec, s_vec))
    total = sum(s_vec)
    return {total - j: v for j, v in sorted(rook_numbers(board, s, rule).items(), reverse=True)}


# -- placement anatomy --------------------------------------------------------


def rook_positions(board: FerrersBoard, placement: RookPlacement, s) -> dict[int, tuple[int, int]]:
    """For each column: (index of the rook's subcell counted from the bottom
    of the column, total subcells in the column) under row creation.

    Columns without a rook report ``(None, total)``.
    """
    counts = [0] * board.max_height
    rooks = {c: (r, i) for c, r, i in placement.rooks}
    out = {}
    for col in range(board.ncols - 1, -1, -1):
        height = board.heights[col]
        m = {row: board.base_weight(col, row) + (s - 1) * counts[row - 1] for row in range(1, height + 1)}
        total = sum(m.values())
        if col in rooks:
            row, i = rooks[col]
            below = sum(m[r] for r in range(row + 1, height + 1))
            out[col] = (below + i, total)
            counts[row - 1] += 1
        else:
            out[col] = (None, total)
    return out


def column_collection(board: FerrersBoard, placement: RookPlacement, s) -> list[int]:
    """The canonical column collection C of a row-creation placement on J_n.

    Scanning right to left, a column joins C when its rook lies in its
    bottom 1 + s*t subcells, t being the size of C so far.
    """
    pos = rook_positions(board, placement, s)
    chosen: list[int] = []
    for col in range(board.ncols - 1, -1, -1):
        if board.heights[col] == 0:
            continue
        p, _ = pos[col]
        if p is not None and p < 1 + s * len(chosen):
            chosen.append(col)
    return chosen


def render_placement(board: FerrersBoard, placement: RookPlacement, s=None) -> str:
    """ASCII picture: one line per row (row 1 on top), rooks as "●",
    canceled cells as "×", other cells as their subcell count."""
    rooks = {c: r for c, r, _ in placement.rooks}
    s = placement.s if s is None else s
    counts = [0] * board.max_height
    cells: dict[tuple[int, int], str] = {}
    for col in range(board.ncols - 1, -1, -1):
        height = board.heights[col]
        for row in range(1, height + 1):
            if col in rooks and row < rooks[col]:
                cells[(col, row)] = "×"
            elif col in rooks and row == rooks[col]:
                cells[(col, row)] = "●"
            else:
                m = board.base_weight(col, row) + ((s - 1) * counts[row - 1] if s is not None else 0)
                cells[(col, row)] = str(m)
        if col in rooks:
            counts[rooks[col] - 1] += 1
    lines = []
    for row in range(1, board.max_height + 1):
        line = "".join(cells.get((col, row), " ").rjust(2) for col in range(board.ncols))
        lines.append(line.rstrip())
    return "\n".join(lines)
