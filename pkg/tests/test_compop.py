import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import focksobolev as fs


def test_identity_bounded_not_compact(params_m0):
    v = fs.classify_compop(fs.identity_symbol(1), params_m0)
    assert v.bounded
    assert not v.compact
    assert not v.divergent


def test_contraction_compact(params_m0):
    sym = fs.affine_symbol([[0.5]])
    v = fs.classify_compop(sym, params_m0)
    assert v.bounded
    assert v.compact


def test_rotation_bounded_not_compact(params_m0):
    theta = 0.7
    sym = fs.affine_symbol([[complex(math.cos(theta), math.sin(theta))]])
    v = fs.classify_compop(sym, params_m0)
    assert v.bounded
    assert not v.compact


def test_expansion_unbounded(params_m0):
    v = fs.classify_compop(fs.affine_symbol([[2.0]]), params_m0)
    assert not v.bounded
    assert v.divergent
    assert math.isinf(v.norm_estimate)


def test_translation_unbounded(params_m0):
    v = fs.classify_compop(fs.affine_symbol([[1.0]], [1.0]), params_m0)
    assert not v.bounded


def test_zero_weight_trivial(params_m0):
    sym = fs.affine_symbol([[0.0]], None, fs.polynomial({}, 1))
    v = fs.classify_compop(sym, params_m0)
    assert v.bounded
    assert v.compact
    assert v.norm_estimate == 0.0


def test_polynomial_symbol_flagged(params_m0):
    sq = fs.polynomial({(2,): 1.0}, 1)
    sym = fs.SymbolPair(fs.PolynomialMap((sq,)), fs.one(1))
    v = fs.classify_compop(sym, params_m0)
    assert not v.bounded
    assert any("outside" in note for note in v.notes)


def test_linear_symbol_check_witnesses():
    chk = fs.linear_symbol_check([[1.0]], [1.0])
    assert chk["op_norm"] == pytest.approx(1.0)
    assert not chk["admissible_bounded"]
    assert chk["offset_overlap"] == pytest.approx(1.0)
    ok = fs.linear_symbol_check([[0.5]], [3.0])
    assert ok["admissible_bounded"]
    assert ok["admissible_compact"]


def test_contraction_transform_closed_form(params_m0):
    """For psi = z/2 with unit weight the smoothed criterion is
    pi * exp(-3|w|^2 / 4) at alpha = 1, q = 2."""
    sym = fs.affine_symbol([[0.5]])
    for w, expect in [(0.0, math.pi), (2.0, math.pi * math.exp(-3.0))]:
        val = fs.berezin_compop(sym, params_m0, np.array([w + 0.0j]))
        assert abs(val - expect) / expect < 1e-6


def test_transform_profile_shapes(params_m0):
    radii, logs, divergent = fs.transform_profile(fs.affine_symbol([[0.5]]), params_m0, count=9)
    assert len(radii) == len(logs) == 9
    assert not divergent
    assert logs[-1] < logs[0]


def test_weight_profile_decay(params_m0):
    sym = fs.affine_symbol([[0.5]], None, fs.kernel([1.0 + 0.0j], n=1))
    radii, logs = fs.weight_profile(sym, params_m0, z_radius=5.0, count=11)
    assert len(radii) == len(logs) == 11
    assert logs[-1] < logs[0]


def test_direct_norm_identity_exact(params_m0):
    assert fs.direct_operator_norm(fs.identity_symbol(1), params_m0) == 1.0


def test_direct_norm_contraction(params_m0):
    val = fs.direct_operator_norm(fs.affine_symbol([[0.5]]), params_m0)
    assert val == pytest.approx(1.0, abs=1e-9)


def test_essential_norm_compact_case(params_m0):
    val = fs.essential_norm_estimate(fs.affine_symbol([[0.5]]), params_m0)
    assert val <= 1e-3


def test_essential_norm_requires_valid_exponents():
    P = fs.Params(n=1, alpha=1.0, m=0, p=1.0, q=2.0)
    with pytest.raises(ValueError):
        fs.essential_norm_estimate(fs.identity_symbol(1), P)


def test_pullback_transform_identity(params_m0):
    """The pulled-back measure reproduces the operator transform."""
    sym = fs.affine_symbol([[0.5]])
    lam = fs.pullback_measure(sym, params_m0)
    for w in (0.0 + 0.0j, 1.0 + 0.5j):
        a = fs.berezin_value(lam, w, params_m0.q, 0.0, params_m0.alpha)
        b = fs.berezin_compop(sym, params_m0, np.array([w]))
        assert abs(a - b) / b < 1e-3


def test_pullback_consistency_contraction(params_m0):
    sym = fs.affine_symbol([[0.5]])
    op = fs.classify_compop(sym, params_m0)
    lam = fs.pullback_measure(sym, params_m0, q=params_m0.q)
    emb = fs.classify_carleson(lam, params_m0, t=params_m0.q, stage_radius=6.0)
    assert op.bounded == emb.is_carleson


def test_probe_family_nonempty(params_m0):
    fam = fs.probe_family(params_m0, seed=1)
    assert len(fam) > 0
    for name, f in fam:
        assert name
        norm = fs.fock_sobolev_norm(f, params_m0)
        assert 0.0 < norm < math.inf


def test_mixed_exponent_identity_unbounded():
    P = fs.Params(n=1, alpha=1.0, m=0, p=4.0, q=2.0)
    v = fs.classify_compop(fs.identity_symbol(1), P)
    assert not v.bounded


def test_sup_target_identity_bounded():
    P = fs.Params(n=1, alpha=1.0, m=0, p=2.0, q=math.inf)
    v = fs.classify_compop(fs.identity_symbol(1), P)
    assert v.bounded
    assert not v.compact


def test_suite_expectations_match(params_m0):
    for sc in fs.composition_suite(params_m0):
        v = fs.classify_compop(sc.symbol, params_m0)
        assert v.bounded == sc.expect_bounded, sc.name
        assert v.compact == sc.expect_compact, sc.name


@settings(max_examples=30, deadline=None)
@given(
    a=st.floats(min_value=-1.5, max_value=1.5),
    b=st.floats(min_value=-1.5, max_value=1.5),
    c=st.floats(min_value=-1.5, max_value=1.5),
    d=st.floats(min_value=-1.5, max_value=1.5),
)
def test_linear_check_matches_svd(a, b, c, d):
    mat = np.array([[a, b], [c, d]])
    chk = fs.linear_symbol_check(mat, [0.0, 0.0])
    expect = float(np.linalg.svd(mat, compute_uv=False)[0])
    assert chk["op_norm"] == pytest.approx(expect, abs=1e-12)
    assert chk["admissible_bounded"] == (expect <= 1.0 + 1e-8)
    assert chk["admissible_compact"] == (expect < 1.0 - 1e-8)
    if chk["admissible_compact"]:
        assert chk["admissible_bounded"]


@settings(max_examples=15, deadline=None)
@given(scale=st.floats(min_value=0.1, max_value=0.9))
def test_scalar_contractions_compact(scale):
    chk = fs.linear_symbol_check([[scale]], [0.0])
    assert chk["admissible_compact"]
