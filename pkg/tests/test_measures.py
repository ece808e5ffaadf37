import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import focksobolev as fs


def delta(w=0.0 + 0.0j, weight=1.0):
    return fs.AtomicMeasure(np.array([w]), np.array([weight]), 1)


def test_atomic_measure_validates_lengths():
    with pytest.raises(ValueError):
        fs.AtomicMeasure(np.array([0.0 + 0.0j]), np.array([1.0, 2.0]), 1)


def test_ball_mass_lebesgue_n1():
    val = fs.ball_mass(fs.lebesgue(1), 0.0 + 0.0j, 1.0)
    assert abs(val - math.pi) / math.pi < 2e-3


def test_ball_mass_lebesgue_n2():
    val = fs.ball_mass(fs.lebesgue(2), np.array([0.0 + 0.0j, 0.0 + 0.0j]), 1.0)
    expect = math.pi ** 2 / 2.0
    assert abs(val - expect) / expect < 2e-2


def test_ball_mass_translation_invariance():
    a = fs.ball_mass(fs.lebesgue(1), 0.0 + 0.0j, 1.0)
    b = fs.ball_mass(fs.lebesgue(1), 3.0 + 2.0j, 1.0)
    assert a == pytest.approx(b, rel=1e-9)


def test_ball_mass_atomic_counts_inside():
    mu = fs.AtomicMeasure(np.array([0.0 + 0.0j, 2.0 + 0.0j]), np.array([1.0, 5.0]), 1)
    assert fs.ball_mass(mu, 0.0 + 0.0j, 1.0) == pytest.approx(1.0)
    assert fs.ball_mass(mu, 2.0 + 0.0j, 0.5) == pytest.approx(5.0)
    assert fs.ball_mass(mu, 1.0 + 0.0j, 0.5) == pytest.approx(0.0)


def test_ball_mass_many_matches_single():
    mu = fs.gaussian(1.0, 1)
    centers = np.array([[0.0 + 0.0j], [1.0 + 0.0j], [2.0 + 1.0j]])
    many = fs.ball_mass_many(mu, centers, 0.8)
    singles = [fs.ball_mass(mu, c, 0.8) for c in centers]
    assert np.allclose(many, singles, rtol=1e-9)


def test_berezin_of_lebesgue_is_constant():
    """Smoothing Lebesgue measure gives exactly (2 pi / (t alpha))^n."""
    t, alpha = 2.0, 1.0
    atoms = fs.discretize(fs.lebesgue(1), radius=8.0, step=0.1)
    for w in (0.0 + 0.0j, 1.0 + 1.0j):
        val = fs.berezin_value(atoms, w, t, 0.0, alpha)
        expect = 2.0 * math.pi / (t * alpha)
        assert abs(val - expect) / expect < 1e-3


def test_berezin_value_matches_direct_sum():
    rng = np.random.default_rng(7)
    locs = rng.normal(size=5) + 1j * rng.normal(size=5)
    wts = rng.uniform(0.5, 2.0, size=5)
    mu = fs.AtomicMeasure(locs, wts, 1)
    w = 0.5 + 0.25j
    t, s, alpha = 2.0, 1.0, 1.0
    direct = float(
        (wts * (1.0 + np.abs(locs)) ** (-s) * np.exp(-t * alpha * np.abs(locs - w) ** 2 / 2.0)).sum()
    )
    assert fs.berezin_value(mu, w, t, s, alpha) == pytest.approx(direct, rel=1e-12)


def test_berezin_field_matches_value():
    mu = delta()
    field = fs.berezin_field(mu, 2.0, 0.0, 1.0)
    pts = np.array([[0.0 + 0.0j], [1.0 + 0.0j]])
    vals = field.evaluate(pts)
    assert vals[0] == pytest.approx(1.0)
    assert vals[1] == pytest.approx(math.exp(-1.0))


def test_averaging_field_lebesgue_flat():
    field = fs.averaging_field(fs.lebesgue(1), 1.0, 0.0)
    vals = field.evaluate(np.array([[0.0 + 0.0j], [2.0 + 0.0j]]))
    assert np.allclose(vals, math.pi, rtol=2e-3)


def test_averaging_field_discount():
    flat = fs.averaging_field(fs.lebesgue(1), 1.0, 0.0)
    tilted = fs.averaging_field(fs.lebesgue(1), 1.0, 2.0)
    pt = np.array([[3.0 + 0.0j]])
    ratio = tilted.evaluate(pt)[0] / flat.evaluate(pt)[0]
    assert ratio == pytest.approx((1.0 + 3.0) ** -2.0, rel=1e-9)


def test_averaging_sequence_on_lattice(unit_lattice):
    vals = fs.averaging_sequence(delta(), unit_lattice, 1.0, 0.0)
    assert vals.shape == (len(unit_lattice),)
    # the origin atom is seen by every lattice ball within distance 1
    assert vals.max() == pytest.approx(1.0)
    assert vals.min() == 0.0


def test_sequence_lp_matches_numpy():
    v = np.array([3.0, 4.0, 0.0])
    assert fs.sequence_lp(v, 2.0) == pytest.approx(5.0)
    assert fs.sequence_lp(v, 1.0) == pytest.approx(7.0)
    assert fs.sequence_lp(v, math.inf) == pytest.approx(4.0)


def test_discretize_conserves_mass():
    atoms = fs.discretize(fs.gaussian(1.0, 1), radius=8.0, step=0.1)
    total = float(atoms.weights.sum())
    assert abs(total - math.pi) / math.pi < 1e-3


def test_discretize_atomic_passthrough():
    mu = fs.AtomicMeasure(np.array([0.0 + 0.0j, 5.0 + 0.0j]), np.array([1.0, 2.0]), 1)
    kept = fs.discretize(mu, radius=2.0, step=0.1)
    assert len(kept.weights) == 1
    assert kept.weights[0] == pytest.approx(1.0)


def test_effective_radius_kinds():
    assert fs.effective_radius(fs.lebesgue(1)) is None
    assert fs.effective_radius(fs.polygrowth(2.0, 1)) is None
    assert fs.effective_radius(fs.gaussian(1.0, 1)) is not None
    ring = fs.ring(2.0, 0.2, 1)
    assert fs.effective_radius(ring) == pytest.approx(ring.compact_extent)
    atoms = delta(3.0 + 4.0j)
    assert fs.effective_radius(atoms) >= 5.0


def test_total_weighted_mass_delta():
    assert fs.total_weighted_mass(delta(), 2.0, 5.0) == pytest.approx(1.0)
    assert fs.total_weighted_mass(delta(1.0 + 0.0j), 2.0, 5.0) == pytest.approx(0.25)


def test_weighted_mass_divergence_rule():
    # net power - s >= -2n marks a divergent discounted mass integral
    assert fs.weighted_mass_divergent(fs.lebesgue(1), 0.0)
    assert not fs.weighted_mass_divergent(fs.lebesgue(1), 3.0)
    assert fs.weighted_mass_divergent(fs.polygrowth(2.0, 1), 4.0)
    assert not fs.weighted_mass_divergent(fs.polygrowth(2.0, 1), 4.5)
    assert not fs.weighted_mass_divergent(fs.gaussian(1.0, 1), 0.0)


def test_ring_mass():
    ring = fs.ring(2.0, 0.2, 1)
    total = fs.total_weighted_mass(ring, 0.0, 4.0)
    expect = 2.0 * math.pi * 2.0 * 0.2
    assert abs(total - expect) / expect < 2e-2


@settings(max_examples=20, deadline=None)
@given(scale=st.floats(min_value=0.1, max_value=10.0))
def test_density_scale_linearity(scale):
    base = fs.ball_mass(fs.gaussian(1.0, 1), 0.0 + 0.0j, 1.0)
    scaled = fs.ball_mass(fs.gaussian(1.0, 1, scale=scale), 0.0 + 0.0j, 1.0)
    assert scaled == pytest.approx(scale * base, rel=1e-9)


@settings(max_examples=20, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=500),
    t=st.floats(min_value=0.5, max_value=4.0),
    s=st.floats(min_value=0.0, max_value=3.0),
)
def test_berezin_positive_and_monotone_in_weights(seed, t, s):
    rng = np.random.default_rng(seed)
    locs = rng.normal(size=4) + 1j * rng.normal(size=4)
    wts = rng.uniform(0.1, 1.0, size=4)
    mu = fs.AtomicMeasure(locs, wts, 1)
    mu2 = fs.AtomicMeasure(locs, 2.0 * wts, 1)
    w = complex(rng.normal(), rng.normal())
    a = fs.berezin_value(mu, w, t, s, 1.0)
    b = fs.berezin_value(mu2, w, t, s, 1.0)
    assert a > 0.0
    assert b == pytest.approx(2.0 * a, rel=1e-12)
