from __future__ import annotations

import random
from fractions import Fraction

import pytest

from qmaj.compare import Outcome
from qmaj.discrete import (
    QuasiVector,
    StochasticMatrix,
    apply_matrix,
    negative_volume_vec,
    thermal_embedding_demo,
    vec_compare,
    vec_lorenz,
    vec_statement4,
)
from qmaj.errors import ConfigError


def test_vec_lorenz_simple():
    pos, neg = vec_lorenz(QuasiVector((1, 0)))
    assert pos == [(0, 0), (1, 1), (2, 1)]
    assert neg == [(0, 0), (2, 0)]


def test_vec_lorenz_signed():
    pos, neg = vec_lorenz(QuasiVector((2, -1)))
    assert pos == [(0, 0), (1, 2), (2, 2)]
    assert neg == [(0, 0), (1, -1), (2, -1)]


def test_signed_pair_majorizes():
    assert vec_compare((2, -1), (1, 0)).outcome is Outcome.MAJORIZES


def test_two_outcome_classic():
    verdict = vec_compare((Fraction(1, 2), Fraction(1, 2)), (1, 0))
    assert verdict.outcome is Outcome.MAJORIZED_BY


def test_peaked_vector_majorizes_probabilities():
    assert vec_compare((1, 0, 0), (Fraction(1, 3),) * 3).outcome is Outcome.MAJORIZES


def test_float_example():
    assert vec_compare((1.2, -0.2), (0.9, 0.1)).outcome is Outcome.MAJORIZES


def test_sum_mismatch():
    with pytest.raises(ConfigError):
        vec_compare((1, 0), (2, 0))


def test_length_padding():
    assert vec_compare((1, 0, 0, 0), (1, 0)).outcome is Outcome.EQUIVALENT


def test_extreme_point_facts():
    rng = random.Random(5)
    for _ in range(50):
        k = rng.randint(2, 6)
        cuts = sorted(rng.random() for _ in range(k - 1))
        p = [Fraction(x).limit_denominator(50) for x in cuts] + [Fraction(1)]
        probs = tuple(b - a for a, b in zip([Fraction(0)] + p[:-1], p))
        peak = (1,) + (0,) * (k - 1)
        assert vec_compare(peak, probs).outcome in (
            Outcome.MAJORIZES,
            Outcome.EQUIVALENT,
        )
        a = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        signed = (1 + a, -a) + (0,) * (k - 2)
        assert vec_compare(signed, peak).outcome is Outcome.MAJORIZES


def _random_vector(rng, length):
    return tuple(
        Fraction(rng.randint(-6, 9), rng.randint(1, 6)) for _ in range(length)
    )


def _matched_pair(rng):
    k = rng.randint(2, 6)
    f = _random_vector(rng, k)
    g = list(_random_vector(rng, k))
    g[-1] = sum(f) - sum(g[:-1])  # force equal totals
    return f, tuple(g)


def test_statement_equivalence_random():
    rng = random.Random(17)
    for _ in range(300):
        f, g = _matched_pair(rng)
        verdict = vec_compare(f, g).outcome
        fwd, bwd = vec_statement4(f, g)
        assert fwd == (verdict in (Outcome.MAJORIZES, Outcome.EQUIVALENT))
        assert bwd == (verdict in (Outcome.MAJORIZED_BY, Outcome.EQUIVALENT))


def test_statement_equivalence_random_relative():
    rng = random.Random(23)
    for _ in range(200):
        f, g = _matched_pair(rng)
        q = tuple(Fraction(rng.randint(1, 8), rng.randint(1, 4)) for _ in f)
        verdict = vec_compare(f, g, q).outcome
        fwd, bwd = vec_statement4(f, g, q)
        assert fwd == (verdict in (Outcome.MAJORIZES, Outcome.EQUIVALENT))
        assert bwd == (verdict in (Outcome.MAJORIZED_BY, Outcome.EQUIVALENT))


def test_nv_monotone_under_majorization():
    rng = random.Random(29)
    checked = 0
    while checked < 100:
        f, g = _matched_pair(rng)
        if vec_compare(f, g).outcome is Outcome.MAJORIZES:
            assert negative_volume_vec(f) >= negative_volume_vec(g)
            checked += 1


def test_apply_permutation_is_equivalent():
    perm = StochasticMatrix(((0, 1, 0), (0, 0, 1), (1, 0, 0)))
    f = QuasiVector((Fraction(3, 2), Fraction(-1, 2), 0))
    assert vec_compare(f, apply_matrix(perm, f)).outcome is Outcome.EQUIVALENT


def test_apply_averaging_matrix():
    s = StochasticMatrix(((Fraction(1, 2), Fraction(1, 2)),) * 2)
    out = apply_matrix(s, (1, 0))
    assert out.entries == (Fraction(1, 2), Fraction(1, 2))
    assert vec_compare((1, 0), out).outcome is Outcome.MAJORIZES


def _random_doubly_stochastic(rng, k):
    # convex combination of permutation matrices (square SDS must be DS)
    mats = []
    weights = [Fraction(rng.randint(1, 5)) for _ in range(3)]
    total = sum(weights)
    rows = [[Fraction(0)] * k for _ in range(k)]
    for w in weights:
        perm = list(range(k))
        rng.shuffle(perm)
        for i, j in enumerate(perm):
            rows[i][j] += Fraction(w, total)
    return StochasticMatrix(tuple(tuple(r) for r in rows))


def test_random_ds_never_reverses():
    rng = random.Random(31)
    for _ in range(200):
        k = 5
        s = _random_doubly_stochastic(rng, k)
        assert s.is_sds()
        f = _random_vector(rng, k)
        out = apply_matrix(s, f)
        assert vec_compare(f, out).outcome in (
            Outcome.MAJORIZES,
            Outcome.EQUIVALENT,
        )


def test_rectangular_strict_sds():
    # 3 -> 6 spreading map: columns stochastic, every row sum strictly < 1
    third = Fraction(1, 3)
    rows = (
        (third, 0, 0),
        (third, third, 0),
        (third, 0, third),
        (0, third, third),
        (0, third, 0),
        (0, 0, third),
    )
    s = StochasticMatrix(rows)
    assert s.is_sds()
    assert all(sum(r) < 1 for r in rows)
    f = (Fraction(3, 2), Fraction(-1, 4), Fraction(-1, 4))
    out = apply_matrix(s, f)
    assert vec_compare(f, out).outcome is Outcome.MAJORIZES


def _random_q_stochastic(rng, q):
    # compose two-level moves that preserve q exactly
    k = len(q)
    rows = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]

    def mult(a, b):
        return [
            [sum(a[i][m] * b[m][j] for m in range(k)) for j in range(k)]
            for i in range(k)
        ]

    for _ in range(3):
        i, j = rng.sample(range(k), 2)
        a = Fraction(rng.randint(0, 4), 4)
        b = a * q[i] / q[j]
        if b > 1:
            continue
        move = [[Fraction(int(r == c)) for c in range(k)] for r in range(k)]
        move[i][i] = 1 - a
        move[j][i] = a
        move[j][j] = 1 - b
        move[i][j] = b
        rows = mult(move, rows)
    return StochasticMatrix(tuple(tuple(r) for r in rows))


def test_random_sqs_never_reverses_relative():
    rng = random.Random(37)
    for _ in range(150):
        k = 4
        q = tuple(Fraction(rng.randint(1, 6)) for _ in range(k))
        s = _random_q_stochastic(rng, q)
        assert s.is_sqs(q)
        f = _random_vector(rng, k)
        out = apply_matrix(s, f)
        assert vec_compare(f, out, q).outcome in (
            Outcome.MAJORIZES,
            Outcome.EQUIVALENT,
        )


def test_preorder_properties_via_chains():
    rng = random.Random(41)
    for _ in range(40):
        k = 5
        f = _random_vector(rng, k)
        g = apply_matrix(_random_doubly_stochastic(rng, k), f)
        h = apply_matrix(_random_doubly_stochastic(rng, k), g)
        assert vec_compare(f, f).outcome is Outcome.EQUIVALENT
        for a, b in ((f, g), (g, h), (f, h)):
            fwd = vec_compare(a, b).outcome
            rev = vec_compare(b, a).outcome
            assert fwd in (Outcome.MAJORIZES, Outcome.EQUIVALENT)
            assert (fwd is Outcome.MAJORIZES) == (rev is Outcome.MAJORIZED_BY)


def test_thermal_embedding_uniform_reduces_to_regular():
    f = (Fraction(9, 10), Fraction(1, 10))
    pos, neg, q = thermal_embedding_demo(f, 0.0, [0.0, 1.0])
    assert q == (0.5, 0.5)
    reg_pos, _ = vec_lorenz(QuasiVector(f))
    # same curve up to the uniform rescaling of the abscissa
    assert [(2 * s, l) for s, l in pos] == [(s, l) for s, l in reg_pos]
    verdict_rel = vec_compare(f, (Fraction(1, 2), Fraction(1, 2)), q)
    verdict_reg = vec_compare(f, (Fraction(1, 2), Fraction(1, 2)))
    assert verdict_rel.outcome == verdict_reg.outcome


def test_thermal_embedding_gibbs_is_flat_line():
    import math

    beta, energies = 0.7, [0.0, 1.0, 2.0]
    z = sum(math.exp(-beta * e) for e in energies)
    f = tuple(math.exp(-beta * e) / z for e in energies)
    pos, neg, q = thermal_embedding_demo(f, beta, energies)
    for s, l in pos:
        assert l == pytest.approx(s, abs=1e-12)
    assert neg == [(0, 0), (1, 0)]


def test_thermal_embedding_two_level_slopes():
    f = (0.9, 0.1)
    pos, _, q = thermal_embedding_demo(f, 1.0, [0.0, 1.0])
    slopes = [
        (pos[k][1] - pos[k - 1][1]) / (pos[k][0] - pos[k - 1][0])
        for k in range(1, len(pos))
    ]
    ratios = sorted((f[0] / q[0], f[1] / q[1]), reverse=True)
    assert slopes == pytest.approx(ratios)


def test_exactness_of_fraction_pipeline():
    f = (Fraction(5, 3), Fraction(-2, 3))
    pos, neg = vec_lorenz(QuasiVector(f), (Fraction(1, 2), Fraction(3, 2)))
    for s, l in pos + neg:
        assert isinstance(s, (int, Fraction))
        assert isinstance(l, (int, Fraction))
