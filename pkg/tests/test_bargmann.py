import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from latticeprop.bargmann import (
    BargmannFactors,
    bargmann_decompose,
    recombine,
    reconstruct_from_core,
    symmetric_core,
)
from latticeprop.sp2 import DomainError, Mat2, boost, max_abs_diff, rotation

angle = st.floats(-math.pi, math.pi, allow_nan=False)
rapidity = st.floats(0.0, 5.0, allow_nan=False)


def rel(a, b):
    return max_abs_diff(a, b) / max(1.0, b.max_abs())


def test_pure_rotation_canonical():
    f = bargmann_decompose(rotation(0.6))
    assert f.theta1 == pytest.approx(0.6, abs=1e-15)
    assert f.lam == 0.0 and f.theta2 == 0.0


def test_pure_boost():
    f = bargmann_decompose(boost(0.5))
    assert (f.theta1, f.theta2) == (0.0, 0.0)
    assert f.lam == pytest.approx(0.5, rel=1e-15)


def test_round_trip_example():
    m = rotation(0.3) @ boost(0.7) @ rotation(-0.1)
    f = bargmann_decompose(m)
    assert max_abs_diff(f.matrix(), m) <= 1e-12
    assert f.lam == pytest.approx(0.7, rel=1e-14)


def test_rejects_non_unimodular():
    with pytest.raises(DomainError):
        bargmann_decompose(Mat2(1.0, 1.0, 1.0, 1.0))
    with pytest.raises(DomainError):
        bargmann_decompose(Mat2(2.0, 0.0, 0.0, 2.0))


def test_recombine_examples():
    r = recombine(BargmannFactors(0.8, 0.0, 0.8))
    assert (r.theta, r.delta) == (0.8, 0.0)
    r = recombine(BargmannFactors(0.8, 0.0, -0.8))
    assert (r.theta, r.delta) == (0.0, 0.8)
    r = recombine(BargmannFactors(0.5, 0.9, 0.1))
    assert r.theta == pytest.approx(0.3) and r.delta == pytest.approx(0.2)
    f = BargmannFactors(0.5, 0.9, 0.1)
    assert max_abs_diff(reconstruct_from_core(f), f.matrix()) <= 1e-12


def test_recombination_rotation_identities():
    f = BargmannFactors(1.3, 0.4, -2.2)
    r = recombine(f)
    assert max_abs_diff(rotation(f.theta1) @ rotation(f.theta2), rotation(r.theta) @ rotation(r.theta)) <= 1e-15
    assert max_abs_diff(rotation(f.theta1), rotation(r.delta) @ rotation(r.theta)) <= 1e-15


def test_symmetric_core_examples():
    f = BargmannFactors(0.7, 0.4, 0.7)
    assert max_abs_diff(symmetric_core(f), f.matrix()) <= 1e-15
    assert max_abs_diff(symmetric_core(bargmann_decompose(boost(1.3))), boost(1.3)) <= 1e-14
    f = BargmannFactors(0.9, 1.1, 0.3)
    d = recombine(f).delta
    assert max_abs_diff(rotation(d) @ symmetric_core(f) @ rotation(-d), f.matrix()) <= 1e-12


def test_singular_values_match_numpy():
    rng = np.random.default_rng(11)
    for _ in range(200):
        a, b = rng.uniform(-math.pi, math.pi, 2)
        lam = rng.uniform(0, 5)
        m = rotation(a) @ boost(lam) @ rotation(b)
        sv = np.linalg.svd(m.to_array(), compute_uv=False)
        f = bargmann_decompose(m)
        assert math.exp(f.lam) == pytest.approx(sv[0], rel=1e-10)
        assert math.exp(-f.lam) == pytest.approx(sv[1], rel=1e-10)


def test_round_trip_bulk():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(10_000):
        a, b = rng.uniform(-math.pi, math.pi, 2)
        m = rotation(a) @ boost(rng.uniform(0, 5)) @ rotation(b)
        f = bargmann_decompose(m)
        assert f.lam >= 0.0
        assert -2 * math.pi < f.theta1 <= 2 * math.pi and -2 * math.pi < f.theta2 <= 2 * math.pi
        worst = max(worst, rel(f.matrix(), m))
    assert worst <= 1e-10


@settings(max_examples=300)
@given(angle, rapidity, angle)
def test_core_similarity(a, lam, b):
    f = BargmannFactors(a, lam, b)
    assert rel(reconstruct_from_core(f), f.matrix()) <= 1e-12
