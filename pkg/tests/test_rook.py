import math
import random
from fractions import Fraction

import pytest

from oracles import rook_count_classical
from qstirling.rewrite import coeffs_by_u, normal_order, parse_word, word_from_shape
from qstirling.rook import (
    FerrersBoard, RookPlacement, board_of, column_collection, coeffs_via_rooks, enumerate_placements,
    render_placement, rook_number, rook_number_numeric, rook_numbers,
)
from qstirling.scalar import H, ONE, Q, ZERO, RationalPoint, Scalar, evaluate, q_binomial, q_int, q_pow
from qstirling.triangles import stirling_q

FIG1 = parse_word("V^2U^3V^3U^2")


def test_figure_one():
    board = board_of(FIG1)
    assert board.heights == (3, 3, 3, 0, 0)
    target = Scalar.monomial(1, h=2, q=8)
    hits = [p for p, w in enumerate_placements(board, 2, 2) if w == target]
    assert RookPlacement(((1, 2, 1), (2, 2, 0)), "row-creation", 2) in hits
    # the coefficient of V^7 U^3 collects those placements
    assert coeffs_via_rooks((3, 2), (2, 3), 2)[3] == normal_order(FIG1, 2)[(7, 3)]
    pic = render_placement(board, RookPlacement(((1, 2, 1), (2, 2, 0)), "row-creation", 2))
    assert pic.splitlines()[0].split() == ["1", "×", "×"]


def test_examples():
    j3 = FerrersBoard.staircase(3)
    one = RationalPoint(1, 1)
    assert evaluate(rook_number(j3, 1, 0), one) == 3
    assert rook_number(FerrersBoard.staircase(2), 1, 5) == H
    assert rook_number(j3, 3, 2) == ZERO
    board = FerrersBoard((2, 1, 0))
    assert list(enumerate_placements(board, 0, 2)) == [(RookPlacement((), "row-creation", 2), q_pow(board.num_cells))]
    assert [w for _, w in enumerate_placements(FerrersBoard((1, 0)), 1, 0)] == [H]
    assert coeffs_via_rooks((3,), (2,), 2) == {2: ONE}


def test_numeric_examples():
    j3, j4 = FerrersBoard.staircase(3), FerrersBoard.staircase(4)
    assert rook_number_numeric(j3, 1, 0.5, RationalPoint(1, 1)) == pytest.approx(3.0, abs=1e-12)
    assert rook_number_numeric(j3, 0, 1.7, RationalPoint(2, 1)) == pytest.approx(2.0 ** j3.num_cells)
    pt = RationalPoint(Fraction(3, 2), Fraction(2, 3))
    for k in range(4):
        exact = float(evaluate(rook_number(j4, k, 2, "pre-weight"), pt))
        assert math.isclose(rook_number_numeric(j4, k, 2.0, pt), exact, rel_tol=1e-12, abs_tol=1e-12)
    with pytest.raises(ValueError):
        rook_number_numeric(j3, 1, 0.5, RationalPoint(-1, 1))


def test_rule_validation():
    with pytest.raises(ValueError):
        rook_number(FerrersBoard((2, 2, 0)), 1, 2, "modified")
    with pytest.raises(ValueError):
        rook_number(FerrersBoard((1, 0)), 1, -1, "row-creation")
    with pytest.raises(ValueError):
        FerrersBoard((0, 1))


def test_classical_rook_numbers():
    # at s = 0, q = h = 1 the row-creation weights count ordinary rook placements
    rng = random.Random(1)
    one = RationalPoint(1, 1)
    for _ in range(25):
        heights = sorted((rng.randint(0, 4) for _ in range(rng.randint(1, 5))), reverse=True)
        b = FerrersBoard(heights)
        for k in range(b.positive_columns + 1):
            assert evaluate(rook_number(b, k, 0), one) == rook_count_classical(heights, k)


def test_enumeration_sums_to_dp():
    rng = random.Random(2)
    for _ in range(20):
        heights = sorted((rng.randint(0, 3) for _ in range(rng.randint(1, 4))), reverse=True)
        b = FerrersBoard(heights)
        for rule in ("row-creation", "pre-weight"):
            for s in (0, 1, 2, 3):
                for k in range(b.positive_columns + 1):
                    total = sum((w for _, w in enumerate_placements(b, k, s, rule)), ZERO)
                    assert total == rook_number(b, k, s, rule)


@pytest.mark.parametrize("s", [0, 1, 2, 3])
def test_oracle_equivalence(s):
    rng = random.Random(10 + s)
    for _ in range(30):
        w = "".join(rng.choice("UV") for _ in range(rng.randint(1, 8)))
        if "U" not in w:
            continue
        from qstirling.rewrite import shape_from_word

        r, sv = shape_from_word(w)
        assert coeffs_via_rooks(r, sv, s) == coeffs_by_u(normal_order(w, s))


def test_monotone_zero():
    rng = random.Random(4)
    for _ in range(30):
        heights = sorted((rng.randint(0, 3) for _ in range(rng.randint(1, 5))), reverse=True)
        b = FerrersBoard(heights)
        for s in (1, 2, 3):
            nums = rook_numbers(b, s)
            assert set(nums) == set(range(b.positive_columns + 1))


def test_modified_rule_per_column_choice():
    # the modified rule keeps the total for every fixed set of rook columns
    for n in range(1, 6):
        for board in (FerrersBoard.staircase(n), FerrersBoard.staircase_plus(n, 2)):
            for s in (-1, 0, 2, 3):
                for k in range(board.positive_columns + 1):
                    by_cols = {}
                    for rule in ("pre-weight", "modified"):
                        for p, w in enumerate_placements(board, k, s, rule):
                            key = (rule, tuple(c for c, _, _ in p.rooks))
                            by_cols[key] = by_cols.get(key, ZERO) + w
                    cols = {key[1] for key in by_cols}
                    for c in cols:
                        assert by_cols.get(("pre-weight", c), ZERO) == by_cols.get(("modified", c), ZERO)


def test_board_json():
    b = FerrersBoard.staircase_plus(3, Fraction(1, 2))
    assert FerrersBoard.from_json(b.to_json()) == b


def test_column_collection_partition():
    # grouping placements on J_n by their collection size reproduces the
    # summands of the first-column recurrence
    for s in (1, 2, 3):
        for n in range(2, 6):
            board = FerrersBoard.staircase(n)
            for k in range(1, n + 1):
                groups = {}
                for p, w in enumerate_placements(board, n - k, s):
                    m = len(column_collection(board, p, s))
                    groups[m] = groups.get(m, ZERO) + w
                for m in range(n):
                    total = groups.get(m, ZERO)
                    r = n - 1 - m
                    expect = (q_binomial(n - 1, r, s).mul_monomial(h=n - r - 1, q=r) * stirling_q(r, k - 1, s))
                    for i in range(n - r - 1):
                        expect = expect * q_int(1 + s * i)
                    assert total == expect
