"""Acceptance suite: one test per criterion, each printing a single
PASS/FAIL line with its runtime."""

import math
import random
import time
from fractions import Fraction

import pytest

from oracles import bell_by_partitions, stirling2_by_partitions
from qstirling.bell import (
    BellParams, bell_number, classical_bell, dobinsky_classical, dobinsky_coefficients,
    verify_bell_identity,
)
from qstirling.explicit import coefficients, coeffs_via_difference, coeffs_via_gamma, staircase_shape
from qstirling.report import Report
from qstirling.rewrite import board_heights, coeffs_by_u, normal_order, parse_word, word_from_shape
from qstirling.rook import (
    FerrersBoard, board_of, coeffs_via_rooks, enumerate_placements, rook_number_numeric, rook_numbers,
)
from qstirling.scalar import RationalPoint, Scalar, evaluate, q_int, q_pow, ZERO
from qstirling.triangles import (
    IdentityParams, WeightSeq, random_points, sq_triangle, stirling_q, verify_triangle_identity,
)

SEED = 0


@pytest.fixture
def announce(capsys):
    def emit(num: int, ok: bool, detail: str, elapsed: float):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail} ({elapsed:.2f}s)")
    return emit


def _nonzero(d):
    return {k: v for k, v in sorted(d.items()) if v}


def test_criterion_01_staircase_agreement(announce):
    t0 = time.perf_counter()
    mismatches = []
    for n in range(1, 7):
        r, sv = staircase_shape(n)
        for s in (0, 2, 3):
            maps = {
                "normal_order": _nonzero(coeffs_by_u(normal_order("VU" * n, s))),
                "recurrence": _nonzero({k: stirling_q(n, k, s) for k in range(n + 1)}),
                "rooks": _nonzero(coeffs_via_rooks(r, sv, s)),
                "gamma": coeffs_via_gamma(r, sv, s),
                "difference": coeffs_via_difference(r, sv, s),
            }
            ref = maps["normal_order"]
            mismatches += [(n, s, name) for name, m in maps.items() if m != ref]
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 60
    announce(1, ok, f"5-way agreement on (VU)^n, n<=6, s in {{0,2,3}}; mismatches={mismatches}", elapsed)
    assert ok


def test_criterion_02_general_words(announce):
    t0 = time.perf_counter()
    rng = random.Random(SEED)
    shapes = []
    for _ in range(30):
        n = rng.randint(1, 3)
        shapes.append((tuple(rng.randint(0, 3) for _ in range(n)), tuple(rng.randint(0, 3) for _ in range(n))))
    bad = []
    for r, sv in shapes:
        for s in (0, 2, 3):
            oracle = _nonzero(coeffs_by_u(normal_order(word_from_shape(r, sv), s)))
            if not (oracle == _nonzero(coeffs_via_rooks(r, sv, s)) == coeffs_via_gamma(r, sv, s)):
                bad.append((r, sv, s))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 120
    announce(2, ok, f"30 seeded shapes x 3 values of s, oracle = rooks = gamma; failures={bad}", elapsed)
    assert ok


def test_criterion_03_figure_one(announce):
    t0 = time.perf_counter()
    word = parse_word("V^2U^3V^3U^2")
    board = board_of(word)
    target = Scalar.monomial(1, h=2, q=8)
    hits = [p for p, w in enumerate_placements(board, 2, 2) if w == target]
    # two rooks leave |s| - 2 = 3 copies of U; V-degree 5 + 2*(s-1) = 7
    total = sum((w for _, w in enumerate_placements(board, 2, 2)), ZERO)
    coeff = normal_order(word, 2)[(7, 3)]
    elapsed = time.perf_counter() - t0
    ok = bool(hits) and total == coeff and coeff.terms.get((2, 8), 0) == len(hits)
    announce(3, ok, f"{len(hits)} placements of weight h^2*q^8 feed the V^7U^3 coefficient", elapsed)
    assert ok


WEIGHT_TAGS = ("matfac", "orth", "inv1", "inv2", "conv", "rec1", "rec2", "rec3")
S_TAGS = ("recx", "recy", "recz", "exp1", "c-orth", "bnk")


def test_criterion_04_triangle_identities(announce):
    t0 = time.perf_counter()
    summary = Report("triangles")
    for s in (-1, 0, 2, 3):
        base = IdentityParams(n_max=8, s=s, l_max=5, m_max=5)
        for tag in WEIGHT_TAGS + S_TAGS:
            summary.extend(verify_triangle_identity(tag, base))
    for i in range(5):
        v, w = WeightSeq.random(f"{SEED}/{i}:v"), WeightSeq.random(f"{SEED}/{i}:w")
        params = IdentityParams(n_max=8, v=v, w=w, l_max=5, m_max=5)
        for tag in WEIGHT_TAGS:
            summary.extend(verify_triangle_identity(tag, params))
    elapsed = time.perf_counter() - t0
    ok = summary.passed and elapsed < 120
    fail = summary.first_failure()
    announce(4, ok, f"{summary.npassed}/{summary.total} symbolic checks pass"
             + (f"; first failure {fail.label}" if fail else ""), elapsed)
    assert ok


def test_criterion_05_division_bearing(announce):
    t0 = time.perf_counter()
    pts = random_points(SEED)
    assert len(pts) == 8 and all(p.q0 not in (0, 1) for p in pts)
    summary = Report("division")
    for s in (-1, 0, 2, 3):
        params = IdentityParams(n_max=6, s=s, points=pts)
        for tag in ("distinct-w", "exp2", "carlitz", "carl-gen"):
            summary.extend(verify_triangle_identity(tag, params))
    for i in range(5):
        v, w = WeightSeq.random(f"{SEED}/{i}:v"), WeightSeq.random(f"{SEED}/{i}:w")
        params = IdentityParams(n_max=6, s=2, v=v, w=w, points=pts)
        for tag in ("distinct-w", "carl-gen"):
            summary.extend(verify_triangle_identity(tag, params))
    elapsed = time.perf_counter() - t0
    ok = summary.passed and summary.total > 0 and elapsed < 60
    announce(5, ok, f"{summary.npassed}/{summary.total} exact-rational checks pass, "
             f"{len(summary.rejected)} instances rejected for colliding w", elapsed)
    assert ok


def _sample_boards(count: int):
    rng = random.Random(SEED)
    seen, boards = set(), []
    while len(boards) < count:
        w = "".join(rng.choice("UV") for _ in range(rng.randint(1, 8)))
        heights = tuple(board_heights(w))
        if not heights or sum(heights) > 10 or heights in seen:
            continue
        seen.add(heights)
        boards.append(FerrersBoard(heights))
    return boards


def test_criterion_06_rule_equivalence(announce):
    t0 = time.perf_counter()
    bad = []
    for b in _sample_boards(50):
        for s in (0, 1, 2, 3):
            if rook_numbers(b, s, "row-creation") != rook_numbers(b, s, "pre-weight"):
                bad.append(("rc/pw", b.heights, s))
    for n in range(1, 7):
        j = FerrersBoard.staircase(n)
        for s in (-1, 0, 1, 2, 3):
            if rook_numbers(j, s, "modified") != rook_numbers(j, s, "pre-weight"):
                bad.append(("mod", n, s))
    worst = 0.0
    pts = [RationalPoint(Fraction(3, 2), Fraction(2, 3)), RationalPoint(Fraction(1, 2), 2), RationalPoint(1, 1)]
    for n in range(1, 7):
        j = FerrersBoard.staircase(n)
        for s in (0, 2, 3):
            exact = rook_numbers(j, s, "pre-weight")
            for pt in pts:
                for k in range(n):
                    num = rook_number_numeric(j, k, float(s), pt)
                    ref = float(evaluate(exact.get(k, ZERO), pt))
                    if not math.isclose(num, ref, rel_tol=1e-12, abs_tol=1e-12):
                        bad.append(("numeric", n, s, k))
                    worst = max(worst, abs(num - ref) / max(1.0, abs(ref)))
    elapsed = time.perf_counter() - t0
    ok = not bad
    announce(6, ok, f"pre-weight = row-creation on 50 boards, modified = pre-weight on J_n; "
             f"max relative numeric gap {worst:.1e}; failures={bad[:5]}", elapsed)
    assert ok


def test_criterion_07_bell_suite(announce):
    t0 = time.perf_counter()
    summary = Report("bell")
    for s in (0, 2, 3):
        for tag in ("ssum", "bsum", "nmk", "nm", "qspivey"):
            summary.extend(verify_bell_identity(tag, BellParams(8, s)))
    one = RationalPoint(1, 1)
    want = [1, 1, 2, 5, 15, 52, 203, 877]
    got = [int(evaluate(bell_number(n, 0), one)) for n in range(8)]
    oracle = [bell_by_partitions(n) for n in range(8)]
    elapsed = time.perf_counter() - t0
    ok = summary.passed and got == want == oracle and elapsed < 60
    announce(7, ok, f"{summary.npassed}/{summary.total} Bell identity checks; B(0..7) = {got}", elapsed)
    assert ok


def test_criterion_08_dobinsky(announce):
    t0 = time.perf_counter()
    summary = Report("dobinsky")
    for n in range(1, 5):
        for s in (0, 2):
            summary.extend(dobinsky_coefficients((1,) * n, (1,) * n, s, 6, random_points(SEED, 3)))
    gaps = [abs(dobinsky_classical(n, 40) - bell_by_partitions(n)) for n in range(6)]
    elapsed = time.perf_counter() - t0
    ok = summary.passed and max(gaps) < 1e-9
    announce(8, ok, f"{summary.npassed}/{summary.total} coefficient checks to order 6; "
             f"max classical gap {max(gaps):.1e}", elapsed)
    assert ok


def test_criterion_09_classical_regressions(announce):
    t0 = time.perf_counter()
    one = RationalPoint(1, 1)
    bad = []
    for n in range(9):
        counts = stirling2_by_partitions(n)
        for k in range(n + 1):
            if evaluate(stirling_q(n, k, 0), one) != counts.get(k, 0):
                bad.append(("S", n, k))
    sq = sq_triangle(8)
    for n in range(1, 9):
        for k in range(1, n + 1):
            rhs = q_pow(k - 1) * sq[n - 1, k - 1] + (q_int(k) * sq[n - 1, k] if k < n else ZERO)
            if sq[n, k] != rhs:
                bad.append(("Sq", n, k))
    elapsed = time.perf_counter() - t0
    ok = not bad
    announce(9, ok, f"classical S(n,k) and the S_q recurrence for n<=8; failures={bad}", elapsed)
    assert ok


def _rand_scalar(rng):
    return Scalar({
        (rng.randint(0, 3), rng.randint(-4, 4)): Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        for _ in range(rng.randint(0, 5))
    })


def _rand_point(rng):
    q0 = Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9))
    return RationalPoint(q0, Fraction(rng.randint(-9, 9), rng.randint(1, 9)))


def test_criterion_10_scalar_laws(announce):
    t0 = time.perf_counter()
    rng = random.Random(SEED)
    failures = 0
    for _ in range(1000):
        a, b, c = _rand_scalar(rng), _rand_scalar(rng), _rand_scalar(rng)
        laws = (
            a + b == b + a, a * b == b * a, (a + b) + c == a + (b + c), (a * b) * c == a * (b * c),
            a * (b + c) == a * b + a * c, a - a == ZERO, (a + b).to_json() == (b + a).to_json(),
        )
        failures += not all(laws)
    for _ in range(1000):
        a, b, c, p = _rand_scalar(rng), _rand_scalar(rng), _rand_scalar(rng), _rand_point(rng)
        failures += evaluate(a * b + c, p) != evaluate(a, p) * evaluate(b, p) + evaluate(c, p)
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and elapsed < 10
    announce(10, ok, f"1000 ring-law and 1000 eval-homomorphism instances, {failures} failures", elapsed)
    assert ok
