"""Acceptance suite: every exit criterion at its stated tolerance.

Each test prints one PASS line (run with ``pytest -v -s`` to see them);
a failing assertion keeps the criterion red rather than loosening it.
"""

import math
import random
import time
from fractions import Fraction

import numpy as np

import heismoduli as hm
from conftest import brute_force_minimum, random_integer_gram, random_rational_spd


def _report(name, elapsed, limit):
    print(f"[acceptance] PASS {name} ({elapsed:.2f}s < {limit:.0f}s)")


def test_criterion_1_counterexample_reproduction():
    start = time.perf_counter()
    for k in range(11):
        Y = hm.counterexample_family(k)
        assert hm.determinant(Y.matrix) == 1
        assert hm.first_minimum(Y).value == 1
        got = hm.d_spectrum(Y).d
        expected = hm.counterexample_spectrum(k)
        for g, e in zip(got, expected):
            assert abs(g - e) <= 1e-9 * e
    d2_1 = hm.d_spectrum(hm.counterexample_family(1)).d[1]
    d2_10 = hm.d_spectrum(hm.counterexample_family(10)).d[1]
    assert abs(d2_1 - 1.6180339887) <= 1e-9
    assert abs(d2_10 - 10.0990195) <= 1e-7
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    _report("criterion 1: counterexample reproduction", elapsed, 1)


def test_criterion_2_torus_bounds_do_not_control_the_family():
    start = time.perf_counter()
    grams = [hm.counterexample_family(k) for k in range(11)]
    torus = hm.mahler_certificate(grams, C0=1, C1=1)
    assert torus.certified

    r = hm.DivisibilityTuple((1, 1))
    family = hm.MetricFamily(tuple(
        hm.NormalizedMetric(Y, Fraction(1), r) for Y in grams
    ))
    heis = hm.heisenberg_certificate(family, C2=2)
    assert not heis.certified

    tops = [hm.d_spectrum(Y).d_max for Y in grams]
    assert all(a < b for a, b in zip(tops, tops[1:]))
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    _report("criterion 2: torus bounds insufficient", elapsed, 1)


def test_criterion_3_key_inequality_sweeps():
    start = time.perf_counter()
    for dim, seed in ((2, 301), (4, 302), (6, 303)):
        result = hm.key_inequality_sweep(dim, 10_000, seed)
        assert result.total == 10_000
        assert result.held == 10_000
        assert result.worst_slack >= -1e-9
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    _report("criterion 3: key inequality, 3 x 10^4 samples", elapsed, 30)


def test_criterion_4_spectrum_invariance_under_similitudes():
    start = time.perf_counter()
    rng = random.Random(2024)
    worst = 0.0
    for _ in range(1000):
        n = rng.choice((1, 2, 3))
        Y = random_integer_gram(rng, 2 * n)
        S = hm.random_symplectic_integer(n, rng.randrange(2**32), rng.randint(0, 12))
        Ys = hm.SpdMatrix(hm.congruence(Y.matrix, S))  # exact congruence
        d0 = hm.d_spectrum(Y).d
        d1 = hm.d_spectrum(Ys).d
        worst = max(worst, max(abs(a - b) / a for a, b in zip(d0, d1)))
    assert worst <= 1e-8
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    _report(f"criterion 4: spectrum invariance (worst dev {worst:.2e})", elapsed, 10)


def test_criterion_5_first_minimum_oracle_equivalence():
    start = time.perf_counter()
    rng = random.Random(99)
    for _ in range(500):
        n = rng.choice((2, 3, 4))
        Y = random_rational_spd(rng, n)
        assert hm.first_minimum(Y).value == brute_force_minimum(Y)
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    _report("criterion 5: enumeration vs brute-force oracle, 500 samples", elapsed, 60)


def test_criterion_6_reduction_lands_in_the_fundamental_domain():
    start = time.perf_counter()
    rng = random.Random(123)
    for _ in range(200):
        n = rng.choice((2, 3, 4))
        Y = random_rational_spd(rng, n)
        reduced, U = hm.minkowski_reduce(Y)
        assert hm.minkowski_membership(reduced).member
        assert hm.determinant(reduced.matrix) == hm.determinant(Y.matrix)
        assert hm.congruence(Y.matrix, U.matrix()).entries == reduced.entries
        assert hm.first_minimum(reduced).value == reduced.entries[0][0]
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    _report("criterion 6: Minkowski reduction, 200 samples", elapsed, 60)


def test_criterion_7_constant_spectrum_identities():
    start = time.perf_counter()
    rng = random.Random(7)
    roots = {Fraction(1, 4): Fraction(1, 2), Fraction(1): Fraction(1), Fraction(4): Fraction(2)}
    r = hm.DivisibilityTuple((1, 1))
    for i in range(100):
        g = rng.choice(list(roots))
        S = hm.random_symplectic_integer(2, rng.randrange(2**32), rng.randint(1, 10))
        base = hm.congruence(hm.identity(4), S)
        h = hm.SpdMatrix.from_rows([[roots[g] * x for x in row] for row in base.entries])
        metric = hm.NormalizedMetric(h, g, r)
        assert hm.is_heisenberg_type(metric)
        det = hm.determinant(h.matrix)
        target = g ** 2
        assert abs(det - target) <= Fraction(1, 10**8) * target
        bound = hm.curvature_upper_bound(metric)
        expected = float(g) ** -2
        assert abs(bound - expected) <= 1e-8 * expected
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    _report("criterion 7: constant-spectrum identities, 100 metrics", elapsed, 10)


def test_criterion_8_curvatures_below_the_bound():
    start = time.perf_counter()
    rng = random.Random(88)
    r = hm.DivisibilityTuple((1, 1))
    for _ in range(100):
        h = random_integer_gram(rng, 4)
        g = Fraction(rng.randint(2, 8), 4)  # within (0, 2], where the bound holds
        metric = hm.NormalizedMetric(h, g, r)
        bound = hm.curvature_upper_bound(metric)
        hn = h.to_numpy()
        g_f = float(g)
        for _ in range(100):
            u = np.array([rng.gauss(0, 1) for _ in range(4)])
            u = u / math.sqrt(u @ hn @ u)
            if rng.random() < 0.5:
                v = np.array([rng.gauss(0, 1) for _ in range(4)])
                v = v - (v @ hn @ u) * u
                v = v / math.sqrt(v @ hn @ v)
                vvec = hm.LieAlgebraVector(tuple(v[:2]), tuple(v[2:]), 0.0)
            else:
                vvec = hm.LieAlgebraVector((0.0, 0.0), (0.0, 0.0), 1.0 / math.sqrt(g_f))
            uvec = hm.LieAlgebraVector(tuple(u[:2]), tuple(u[2:]), 0.0)
            k = hm.sectional_curvature(metric, uvec, vvec)
            assert k <= bound + 1e-9
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    _report("criterion 8: sampled curvatures below the bound", elapsed, 30)


def test_criterion_9_group_law_suite_exact():
    start = time.perf_counter()
    rng = random.Random(9)

    def rand_scalar():
        return Fraction(rng.randint(-12, 12), rng.randint(1, 6))

    def rand_element(n):
        return hm.HeisenbergElement(
            tuple(rand_scalar() for _ in range(n)),
            tuple(rand_scalar() for _ in range(n)),
            rand_scalar(),
        )

    def rand_vector(n):
        return hm.LieAlgebraVector(
            tuple(rand_scalar() for _ in range(n)),
            tuple(rand_scalar() for _ in range(n)),
            rand_scalar(),
        )

    for _ in range(1000):
        n = rng.choice((1, 2, 3))
        p, q, s = rand_element(n), rand_element(n), rand_element(n)
        assert hm.group_mul(hm.group_mul(p, q), s) == hm.group_mul(p, hm.group_mul(q, s))
        ident = hm.HeisenbergElement.identity(n)
        assert hm.group_mul(p, hm.group_inv(p)) == ident
        assert hm.group_mul(hm.group_inv(p), p) == ident
        assert hm.group_mul(p, ident) == p

        v, w = rand_vector(n), rand_vector(n)
        assert hm.log_map(hm.exp_map(v)) == v
        assert hm.exp_map(hm.log_map(p)) == p
        br = hm.bracket(v, w)
        bch = hm.LieAlgebraVector(
            tuple(a + b for a, b in zip(v.x, w.x)),
            tuple(a + b for a, b in zip(v.y, w.y)),
            v.s + w.s + Fraction(1, 2) * br.s,
        )
        assert hm.group_mul(hm.exp_map(v), hm.exp_map(w)) == hm.exp_map(bch)
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    _report("criterion 9: exact group-law suite, 10^3 samples", elapsed, 5)
