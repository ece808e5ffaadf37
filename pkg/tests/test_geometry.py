import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial import cKDTree

import focksobolev as fs


def test_make_lattice_rejects_tiny_domain():
    with pytest.raises(ValueError):
        fs.make_lattice(1.0, 1.0, n=1)


def test_lattice_basic_shape(unit_lattice):
    lat = unit_lattice
    assert lat.centers.shape == (len(lat), 2)
    assert lat.n == 1
    zs = lat.as_complex()
    assert zs.shape == (len(lat), 1)
    assert np.allclose(zs[:, 0].real, lat.centers[:, 0])
    assert np.allclose(zs[:, 0].imag, lat.centers[:, 1])


def test_lattice_separation_exact(unit_lattice):
    tree = cKDTree(unit_lattice.centers)
    d, _ = tree.query(unit_lattice.centers, k=2)
    assert d[:, 1].min() >= unit_lattice.r


def test_lattice_points_inside_domain(unit_lattice):
    radii = np.linalg.norm(unit_lattice.centers, axis=1)
    assert radii.max() <= unit_lattice.domain_radius + 1e-12


def test_verify_lattice_covers(unit_lattice):
    rep = fs.verify_lattice(unit_lattice, 20_000, seed=3)
    assert rep.uncovered_probe_count == 0
    assert rep.min_pair_distance >= unit_lattice.r
    assert rep.max_probe_distance < unit_lattice.r
    assert rep.probe_count == 20_000


def test_verify_lattice_deterministic(unit_lattice):
    a = fs.verify_lattice(unit_lattice, 5_000, seed=9)
    b = fs.verify_lattice(unit_lattice, 5_000, seed=9)
    assert a == b


def test_covering_multiplicity_bound(unit_lattice):
    rng = np.random.default_rng(1)
    probes = rng.uniform(-5.0, 5.0, size=(5_000, 2))
    mult = fs.covering_multiplicity(unit_lattice, 2.0 * unit_lattice.r, probes)
    assert 1 <= mult <= 25


def test_covering_multiplicity_single_ball():
    lat = fs.make_lattice(6.0, 1.0, n=1)
    probes = lat.centers[:1] + 0.01
    assert fs.covering_multiplicity(lat, 0.05, probes) == 1


def test_d4_lattice_n2():
    lat = fs.make_lattice(4.0, 1.0, n=2)
    assert lat.centers.shape[1] == 4
    assert lat.construction == "d4"
    tree = cKDTree(lat.centers)
    d, _ = tree.query(lat.centers, k=2)
    assert d[:, 1].min() >= lat.r
    rep = fs.verify_lattice(lat, 20_000, seed=5)
    assert rep.uncovered_probe_count == 0


@settings(max_examples=20, deadline=None)
@given(
    r=st.floats(min_value=0.4, max_value=1.5),
    dom=st.floats(min_value=3.5, max_value=7.0),
    n=st.sampled_from([1, 2]),
)
def test_lattice_separation_property(r, dom, n):
    """Pairwise separation at least r holds for any admissible geometry."""
    lat = fs.make_lattice(dom, r, n=n)
    tree = cKDTree(lat.centers)
    d, _ = tree.query(lat.centers, k=2)
    assert d[:, 1].min() >= r - 1e-12
    assert np.linalg.norm(lat.centers, axis=1).max() <= dom + 1e-12


@settings(max_examples=15, deadline=None)
@given(r=st.floats(min_value=0.4, max_value=1.2), seed=st.integers(min_value=0, max_value=50))
def test_lattice_covering_property(r, seed):
    lat = fs.make_lattice(5.0, r, n=1)
    rep = fs.verify_lattice(lat, 2_000, seed=seed)
    assert rep.uncovered_probe_count == 0
