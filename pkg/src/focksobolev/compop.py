"""Weighted composition operators: f -> u * (f o psi) between the spaces.

The operator is probed through a composition transform: the q-th power
of the normalised kernel pulled through the symbol pair,

    B(w) = int |k_w(psi(z))|^q (1+|psi(z)|)^{-mq} |u(z)|^q |z|^{qm}
               exp(-q a |z|^2 / 2) dV(z),

together with its pullback measure, whose atoms sit at psi(z_i) and
reproduce B as a measure transform. All exponent arithmetic is done in
log space; affine symbols complete the square exactly, so their
z-integrals converge for every matrix, and unboundedness shows up only
in the growth of B along w. Polynomial symbols of higher degree get a
staged truncation check on the z side instead.

Boundedness and compactness are decided per exponent regime: sup and
decay of B at or above the diagonal, pullback measure classification
below it and for a sup-norm source, and the weight profile

    |z|^m |u(z)| (1+|psi(z)|)^{-m} exp((a/2)(|psi(z)|^2 - |z|^2))

for a sup-norm target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from scipy.special import logsumexp

from .carleson import CarlesonVerdict, classify_carleson
from .funcspace import (
    EntireFunction,
    EvaluationOverflow,
    KernelCombo,
    Params,
    Polynomial,
    log_abs,
    norm_constant,
    polynomial,
    probe_family,
)
from .measures import AtomicMeasure
from .quadrature import DEFAULT_EPS_TAIL, truncation_radius

__all__ = [
    "AffineMap",
    "PolynomialMap",
    "SymbolPair",
    "CompOpVerdict",
    "identity_symbol",
    "affine_symbol",
    "one",
    "log_berezin_compop",
    "berezin_compop",
    "transform_profile",
    "weight_profile",
    "pullback_measure",
    "classify_compop",
    "direct_operator_norm",
    "essential_norm_estimate",
    "linear_symbol_check",
]

_Z_CELLS = {1: 128, 2: 16}
_POLY_Z_RADIUS = {1: 4.0, 2: 3.0}
_W_RADIUS = {1: 6.0, 2: 4.0}
_COMPOSE_CELLS = {1: 192, 2: 24}
_LOG_CAP = 709.0
_WEIGHT_LOG_CAP = 700.0


@dataclass(frozen=True)
class AffineMap:
    """z -> matrix @ z + offset on C^n."""

    matrix: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim == 0:
            mat = mat.reshape(1, 1)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("matrix must be square")
        off = np.asarray(self.offset, dtype=complex).reshape(mat.shape[0])
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "offset", off)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def apply(self, pts: np.ndarray) -> np.ndarray:
        return pts @ self.matrix.T + self.offset[None, :]

    def adjoint(self, w: np.ndarray) -> np.ndarray:
        return np.conj(self.matrix).T @ np.asarray(w, dtype=complex).reshape(self.n)

    @property
    def op_norm(self) -> float:
        return float(np.linalg.svd(self.matrix, compute_uv=False)[0])

    @property
    def degree(self) -> int:
        return 1


@dataclass(frozen=True)
class PolynomialMap:
    """Component-wise polynomial map on C^n."""

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("a polynomial map needs at least one component")
        dims = {c.n for c in comps}
        if dims != {len(comps)}:
            raise ValueError("component count must match their variable count")
        object.__setattr__(self, "components", comps)

    @property
    def n(self) -> int:
        return len(self.components)

    def apply(self, pts: np.ndarray) -> np.ndarray:
        from .funcspace import _poly_values

        cols = [_poly_values(c, pts) for c in self.components]
        return np.stack(cols, axis=1)

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.components)


SymbolMap = Union[AffineMap, PolynomialMap]


def one(n: int) -> Polynomial:
    return polynomial({(0,) * n: 1.0}, n)


@dataclass(frozen=True)
class SymbolPair:
    """Composition symbol psi plus multiplier weight u."""

    psi: SymbolMap
    u: EntireFunction

    def __post_init__(self):
        if self.psi.n != self.u.n:
            raise ValueError("symbol and weight live on different dimensions")

    @property
    def n(self) -> int:
        return self.psi.n

    @property
    def is_affine(self) -> bool:
        return isinstance(self.psi, AffineMap)


def identity_symbol(n: int) -> SymbolPair:
    return SymbolPair(psi=AffineMap(np.eye(n), np.zeros(n)), u=one(n))


def affine_symbol(matrix, offset=None, u: Optional[EntireFunction] = None) -> SymbolPair:
    mat = np.asarray(matrix, dtype=complex)
    if mat.ndim == 0:
        mat = mat.reshape(1, 1)
    n = mat.shape[0]
    off = np.zeros(n) if offset is None else offset
    return SymbolPair(psi=AffineMap(mat, off), u=one(n) if u is None else u)


def _u_kernel_shift(sym: SymbolPair) -> tuple:
    """Completion-of-square shift from a single-kernel weight, plus pad."""
    u = sym.u
    if isinstance(u, KernelCombo) and len(u.terms) == 1:
        return np.asarray(u.terms[0].center, dtype=complex), 0.0
    if isinstance(u, KernelCombo):
        return np.zeros(sym.n, dtype=complex), u.max_center_norm
    return np.zeros(sym.n, dtype=complex), 0.0


def _u_degree(sym: SymbolPair) -> int:
    return sym.u.degree if isinstance(sym.u, Polynomial) else 0


def _cube_offsets(radius: float, cells: int, n: int) -> tuple:
    h = 2.0 * radius / cells
    ax = (np.arange(cells) - cells / 2.0 + 0.5) * h
    mesh = np.meshgrid(*([ax] * (2 * n)), indexing="ij")
    real = np.stack([m.ravel() for m in mesh], axis=1)
    return real[:, 0::2] + 1j * real[:, 1::2], h


def _log_integrand(sym: SymbolPair, params: Params, q: float, w: np.ndarray,
                   pts: np.ndarray, include_discount: bool = True) -> np.ndarray:
    a, m = params.alpha, params.m
    psi_v = sym.psi.apply(pts)
    la_u = log_abs(sym.u, pts, params)
    r2 = np.sum(np.abs(pts) ** 2, axis=1)
    pairing = (psi_v @ np.conj(w)).real
    L = q * a * pairing - q * a * float(np.vdot(w, w).real) / 2.0
    L = L + q * la_u - q * a * r2 / 2.0
    if m > 0:
        with np.errstate(divide="ignore"):
            L = L + q * m * 0.5 * np.log(r2)
            if include_discount:
                rpsi = np.linalg.norm(psi_v, axis=1)
                L = L - q * m * np.log1p(rpsi)
    return L


def _z_radius(sym: SymbolPair, params: Params, q: float) -> float:
    if sym.is_affine:
        grow = q * (params.m + _u_degree(sym))
        _, pad = _u_kernel_shift(sym)
        return truncation_radius(q * params.alpha / 2.0, grow, DEFAULT_EPS_TAIL,
                                 params.n) + pad
    return _POLY_Z_RADIUS[params.n]


def _pullback_geometry(sym: SymbolPair, n: int) -> tuple:
    """Default z-grid for the pullback: radius covering the outer
    classification stage through psi, and the matching step.

    An affine map needs preimages of the whole outer stage cube, so the
    radius scales with the pseudoinverse; a cap keeps the atom count at
    desk scale and only bites where the weights are already negligible.
    """
    T2 = 1.5 * (6.0 if n == 1 else 4.0)
    step = 0.25 if n == 1 else 0.45
    if not sym.is_affine:
        # tighter than the transform grid: pullback weights live in
        # linear scale, so the cube corner must stay under the exp cap
        # for a quadratic map
        return (3.5 if n == 1 else 2.4), step
    pinv_norm = float(np.linalg.norm(np.linalg.pinv(sym.psi.matrix), 2))
    off_norm = float(np.linalg.norm(sym.psi.offset))
    rad = pinv_norm * (T2 + off_norm) + 1.0
    return max(2.0, min(rad, 12.0 if n == 1 else 7.0)), step


def log_berezin_compop(
    sym: SymbolPair,
    params: Params,
    w,
    q: Optional[float] = None,
    z_radius: Optional[float] = None,
    z_cells: Optional[int] = None,
    include_discount: bool = True,
    staged: bool = False,
):
    """log of the composition transform at w; optionally a staged pair.

    With ``staged`` the value is recomputed on a cube enlarged by half at
    the same step, and both logs are returned so callers can detect a
    divergent z-integral (only polynomial symbols can produce one).
    """
    q = params.q if q is None else float(q)
    if math.isinf(q):
        raise ValueError("the transform needs a finite exponent q")
    n = params.n
    wv = np.asarray(w, dtype=complex).reshape(n)
    radius = _z_radius(sym, params, q) if z_radius is None else z_radius
    cells = _Z_CELLS[n] if z_cells is None else z_cells
    if sym.is_affine:
        shift, _ = _u_kernel_shift(sym)
        center = sym.psi.adjoint(wv) + shift
    else:
        center = np.zeros(n, dtype=complex)

    def _value(rad: float, cls: int) -> float:
        offs, h = _cube_offsets(rad, cls, n)
        pts = offs + center[None, :]
        L = _log_integrand(sym, params, q, wv, pts, include_discount)
        with np.errstate(over="ignore"):
            val = float(logsumexp(L)) + 2 * n * math.log(h)
        return val

    base = _value(radius, cells)
    if not staged:
        return base
    grown = _value(1.5 * radius, int(round(1.5 * cells)))
    return base, grown


def berezin_compop(sym: SymbolPair, params: Params, w, q: Optional[float] = None,
                   **kw) -> float:
    """Composition transform value at w (inf once past the float range)."""
    log_v = log_berezin_compop(sym, params, w, q=q, **kw)
    if log_v > _LOG_CAP:
        return math.inf
    return math.exp(log_v)


def _directions(n: int) -> list:
    if n == 1:
        return [np.array([np.exp(1j * k * math.pi / 8.0)]) for k in range(16)]
    s = 1.0 / math.sqrt(2.0)
    raw = [
        [1.0, 0.0], [0.0, 1.0], [s, s], [1j, 0.0],
        [0.0, 1j], [s, s * 1j], [s * 1j, s], [s, -s],
    ]
    return [np.array(d, dtype=complex) for d in raw]


def transform_profile(
    sym: SymbolPair,
    params: Params,
    q: Optional[float] = None,
    w_radius: Optional[float] = None,
    count: int = 21,
    staged_z: Optional[bool] = None,
) -> tuple:
    """Directional maxima of log B over shells |w| = rho.

    Returns (radii, log values, z-divergence flag). The z-staging runs
    only for non-affine symbols unless forced.
    """
    q = params.q if q is None else float(q)
    n = params.n
    W = _W_RADIUS[n] if w_radius is None else w_radius
    radii = np.linspace(0.0, W, count)
    staged = (not sym.is_affine) if staged_z is None else staged_z
    dirs = _directions(n)
    out = np.full(count, -math.inf)
    z_divergent = False
    for i, rho in enumerate(radii):
        cand = dirs if rho > 0 else dirs[:1]
        for d in cand:
            w = rho * d
            if staged:
                b1, b2 = log_berezin_compop(sym, params, w, q=q, staged=True)
                if b2 > b1 + math.log1p(0.05) and b2 > -600.0:
                    z_divergent = True
                val = b2
            else:
                val = log_berezin_compop(sym, params, w, q=q)
            if val > out[i]:
                out[i] = val
    return radii, out, z_divergent


def weight_profile(sym: SymbolPair, params: Params, z_radius: float,
                   count: int = 31) -> tuple:
    """Shell maxima of the sup-target weight function, in log form."""
    a, m, n = params.alpha, params.m, params.n
    radii = np.linspace(0.0, z_radius, count)
    dirs = _directions(n)
    out = np.full(count, -math.inf)
    for i, rho in enumerate(radii):
        cand = dirs if rho > 0 else dirs[:1]
        pts = np.stack([rho * d for d in cand], axis=0)
        psi_v = sym.psi.apply(pts)
        la_u = log_abs(sym.u, pts, params)
        rpsi = np.linalg.norm(psi_v, axis=1)
        L = la_u + (a / 2.0) * (rpsi ** 2 - rho ** 2)
        if m > 0:
            with np.errstate(divide="ignore"):
                L = L + m * (math.log(rho) if rho > 0 else -math.inf)
            L = L - m * np.log1p(rpsi)
        out[i] = float(np.max(L))
    return radii, out


def pullback_measure(sym: SymbolPair, params: Params, q: Optional[float] = None,
                     radius: Optional[float] = None,
                     step: Optional[float] = None) -> AtomicMeasure:
    """Discrete pullback: atoms at psi(z_i) carrying the operator weights.

    Cell weights are ``|u|^q |z|^{qm} exp(-q a |z|^2/2) h^{2n}`` scaled by
    ``exp(+q a |psi(z)|^2 / 2)`` so that the measure transform of the
    result reproduces the composition transform with damping s = m q.
    """
    q = params.q if q is None else float(q)
    if math.isinf(q):
        raise ValueError("the pullback construction needs a finite exponent q")
    n, a, m = params.n, params.alpha, params.m
    default_radius, default_step = _pullback_geometry(sym, n)
    if radius is None:
        radius = default_radius
    if step is None:
        step = default_step
    cells = max(2, int(math.ceil(2.0 * radius / step)))
    offs, h = _cube_offsets(radius, cells, n)
    psi_v = sym.psi.apply(offs)
    la_u = log_abs(sym.u, offs, params)
    r2 = np.sum(np.abs(offs) ** 2, axis=1)
    rpsi2 = np.sum(np.abs(psi_v) ** 2, axis=1)
    log_w = q * la_u - q * a * r2 / 2.0 + q * a * rpsi2 / 2.0 + 2 * n * math.log(h)
    if m > 0:
        with np.errstate(divide="ignore"):
            log_w = log_w + q * m * 0.5 * np.log(r2)
    top = float(np.max(log_w)) if log_w.size else -math.inf
    if top > _WEIGHT_LOG_CAP:
        raise EvaluationOverflow(
            f"pullback weight exponent {top:.0f} exceeds {_WEIGHT_LOG_CAP}; "
            "shrink the pullback radius"
        )
    with np.errstate(over="ignore"):
        wts = np.exp(log_w)
    keep = wts > 1e-300
    return AtomicMeasure(locations=psi_v[keep], weights=wts[keep], n=n)


@dataclass(frozen=True)
class CompOpVerdict:
    """Boundedness and compactness outcome for one symbol pair."""

    regime: str
    p: float
    q: float
    bounded: bool
    compact: bool
    divergent: bool
    norm_estimate: float
    criterion_values: dict
    profile_radii: tuple
    profile_values: tuple
    stage_radii: tuple
    notes: tuple = field(default_factory=tuple)
    carleson: Optional[CarlesonVerdict] = None


def _safe_exp(x: float) -> float:
    if x > _LOG_CAP:
        return math.inf
    if x == -math.inf:
        return 0.0
    return math.exp(x)


def _trend_divergent(radii: np.ndarray, logs: np.ndarray, outer_radius: float,
                     expansion: float, growth_tol: float) -> bool:
    """Three-stage trend test on shell maxima in log form.

    Growth below the tolerance between the middle and outer stages reads
    as convergence. Above it, the increment trend decides: shrinking
    increments signal a transient approaching a finite supremum, steady
    or growing increments signal divergence. A profile converging like
    C - c/rho shrinks its increments by the expansion factor per stage,
    while any power-or-faster growth keeps them at least steady.
    """
    s_mid = outer_radius / expansion
    s_lo = outer_radius / expansion ** 2
    m0 = logs[radii <= s_lo + 1e-9]
    m1 = logs[radii <= s_mid + 1e-9]
    s0 = float(np.max(m0)) if m0.size else -math.inf
    s1 = float(np.max(m1)) if m1.size else -math.inf
    s2 = float(np.max(logs))
    if not (s2 > s1 + math.log1p(growth_tol) and s2 > -600.0):
        return False
    g01 = s1 - s0
    g12 = s2 - s1
    if not math.isfinite(g01) or g01 <= 0.0:
        return True
    return g12 > 0.8 * g01


def classify_compop(
    sym: SymbolPair,
    params: Params,
    little_o_target: bool = False,
    w_radius: Optional[float] = None,
    expansion: float = 1.5,
    growth_tol: float = 0.05,
    vanish_tol: float = 1e-3,
) -> CompOpVerdict:
    """Regime dispatch: decide boundedness and compactness of the operator."""
    p, q, n = params.p, params.q, params.n
    notes = []
    if sym.is_affine:
        chk = linear_symbol_check(sym.psi.matrix, sym.psi.offset)
        notes.append(f"affine op_norm={chk['op_norm']:.6g}")
    else:
        notes.append("polynomial symbol: outside the affine classification")

    if math.isinf(q):
        Z1 = 7.0 if n == 1 else 5.0
        Z2 = expansion * Z1
        radii, logs = weight_profile(sym, params, Z2, count=40)
        inner = logs[radii <= Z1]
        sup1 = float(np.max(inner))
        sup2 = float(np.max(logs))
        divergent = _trend_divergent(radii, logs, Z2, expansion, growth_tol)
        bounded = not divergent
        peak = sup2
        outer = logs[radii >= Z2 - 1.0]
        vanishing = peak == -math.inf or (
            float(np.max(outer)) <= peak + math.log(vanish_tol)
        )
        compact = bounded and vanishing
        if little_o_target and not vanishing:
            bounded = False
            notes.append("sup criterion fails the little-o target")
        norm_est = math.inf if divergent else _safe_exp(sup2)
        return CompOpVerdict(
            regime="sup-infinity", p=p, q=q, bounded=bounded, compact=compact,
            divergent=divergent, norm_estimate=norm_est,
            criterion_values={"log_sup": sup2, "log_sup_base": sup1},
            profile_radii=tuple(float(r) for r in radii),
            profile_values=tuple(_safe_exp(v) for v in logs),
            stage_radii=(Z1, Z2), notes=tuple(notes),
        )

    if not math.isinf(p) and p <= q:
        W1 = _W_RADIUS[n] if w_radius is None else w_radius
        W2 = expansion * W1
        count = 31 if n == 1 else 21
        radii, logs, z_div = transform_profile(sym, params, q=q, w_radius=W2,
                                               count=count)
        sup1 = float(np.max(logs[radii <= W1]))
        sup2 = float(np.max(logs))
        w_div = _trend_divergent(radii, logs, W2, expansion, growth_tol)
        divergent = w_div or z_div
        if z_div:
            notes.append("z-integral grows under truncation expansion")
        bounded = not divergent
        peak = sup2
        outer = logs[radii >= W2 - 1.0]
        vanishing = peak == -math.inf or (
            float(np.max(outer)) <= peak + math.log(vanish_tol)
        )
        compact = bounded and vanishing
        if little_o_target and not vanishing:
            bounded = False
            notes.append("transform fails the little-o target")
        norm_est = math.inf if divergent else _safe_exp(sup2 / q)
        return CompOpVerdict(
            regime="sup", p=p, q=q, bounded=bounded, compact=compact,
            divergent=divergent, norm_estimate=norm_est,
            criterion_values={"log_transform_sup": sup2,
                              "log_transform_sup_base": sup1},
            profile_radii=tuple(float(r) for r in radii),
            profile_values=tuple(_safe_exp(v) for v in logs),
            stage_radii=(W1, W2), notes=tuple(notes),
        )

    # below the diagonal, or a sup-norm source: classify the pullback.
    # The atom cloud must extend past the outer classification stage or
    # the staged growth test would read the truncation as decay, so the
    # stages are fixed first and the z-grid is sized to fill them.
    T1 = 6.0 if n == 1 else 4.0
    try:
        lam = pullback_measure(sym, params, q=q)
    except EvaluationOverflow as exc:
        notes.append(f"pullback overflow: {exc}")
        return CompOpVerdict(
            regime="pullback", p=p, q=q, bounded=False, compact=False,
            divergent=True, norm_estimate=math.inf, criterion_values={},
            profile_radii=(), profile_values=(), stage_radii=(),
            notes=tuple(notes),
        )
    verdict = classify_carleson(lam, params, t=q, expansion=expansion,
                                growth_tol=growth_tol, vanish_tol=vanish_tol,
                                stage_radius=T1)
    bounded = verdict.is_carleson
    compact = bounded
    notes.append("boundedness and compactness coincide in this regime")
    notes.extend(verdict.notes)
    tval = verdict.criterion_values.get("transform", 0.0)
    norm_est = math.inf if verdict.divergent else tval ** (1.0 / q)
    return CompOpVerdict(
        regime="pullback-" + verdict.regime, p=p, q=q, bounded=bounded,
        compact=compact, divergent=verdict.divergent, norm_estimate=norm_est,
        criterion_values=dict(verdict.criterion_values),
        profile_radii=(), profile_values=(),
        stage_radii=verdict.stage_radii, notes=tuple(notes),
        carleson=verdict,
    )


def _compose_log_norm(sym: SymbolPair, f: EntireFunction, params: Params,
                      exponent: float, radius: float, cells: int) -> float:
    """log of the target-space norm of u * (f o psi) on a fixed grid.

    The same grid serves every symbol so that identical integrands give
    bit-identical results.
    """
    a, m, n = params.alpha, params.m, params.n
    offs, h = _cube_offsets(radius, cells, n)
    psi_v = sym.psi.apply(offs)
    la = log_abs(sym.u, offs, params) + log_abs(f, psi_v, params)
    r2 = np.sum(np.abs(offs) ** 2, axis=1)
    if math.isinf(exponent):
        L = la - a * r2 / 2.0
        if m > 0:
            with np.errstate(divide="ignore"):
                L = L + m * 0.5 * np.log(r2)
        return float(np.max(L))
    L = exponent * la - exponent * a * r2 / 2.0
    if m > 0:
        with np.errstate(divide="ignore"):
            L = L + exponent * m * 0.5 * np.log(r2)
    with np.errstate(over="ignore"):
        log_int = float(logsumexp(L)) + 2 * n * math.log(h)
    log_c = math.log(norm_constant(exponent, m, n, a))
    return (log_c + log_int) / exponent


def _probe_reach(sym: SymbolPair, f: EntireFunction, params: Params) -> float:
    reach = 0.0
    if isinstance(f, KernelCombo):
        reach = f.max_center_norm
    opn = sym.psi.op_norm if sym.is_affine else 1.0
    shift, pad = _u_kernel_shift(sym)
    reach = max(reach, opn * reach + float(np.linalg.norm(shift)) + pad)
    return reach


def direct_operator_norm(sym: SymbolPair, params: Params, family=None,
                         cap: float = 1e3, seed: int = 3) -> float:
    """Largest norm ratio over a probe family; inf once any ratio tops cap.

    Numerator and denominator run through the same log-space integrator
    on the same grid, so the identity symbol scores exactly one.
    """
    p, q, n = params.p, params.q, params.n
    if family is None:
        family = probe_family(params, seed=seed, kernel_radius=3.0,
                              monomial_degree=3, combos=3)
    ident = identity_symbol(n)
    dec = params.alpha * min(p if not math.isinf(p) else q,
                             q if not math.isinf(q) else p) / 2.0
    best = 0.0
    for _, f in family:
        deg = f.degree if isinstance(f, Polynomial) else 0
        grow = max(p if not math.isinf(p) else 1.0,
                   q if not math.isinf(q) else 1.0) * (params.m + deg + _u_degree(sym))
        base = truncation_radius(dec, grow, DEFAULT_EPS_TAIL, n)
        radius = base + _probe_reach(sym, f, params)
        cells = _COMPOSE_CELLS[n]
        den = _compose_log_norm(ident, f, params, p, radius, cells)
        if den == -math.inf:
            continue
        num = _compose_log_norm(sym, f, params, q, radius, cells)
        log_ratio = num - den
        if log_ratio > math.log(cap):
            return math.inf
        best = max(best, math.exp(log_ratio))
    return best


def essential_norm_estimate(sym: SymbolPair, params: Params,
                            shell_width: float = 1.0) -> float:
    """Outer-shell estimate of the essential norm.

    Valid for source exponents strictly between one and infinity with
    p <= q; the sup-target case reads the weight profile instead.
    """
    p, q, n = params.p, params.q, params.n
    if p <= 1 or math.isinf(p):
        raise ValueError("essential norm estimate needs 1 < p < inf")
    if math.isinf(q):
        Z2 = 1.5 * (7.0 if n == 1 else 5.0)
        radii, logs = weight_profile(sym, params, Z2, count=40)
        outer = logs[radii >= Z2 - shell_width]
        return _safe_exp(float(np.max(outer)))
    if p > q:
        raise ValueError("essential norm estimate applies at or above the diagonal")
    W2 = 1.5 * _W_RADIUS[n]
    radii, logs, _ = transform_profile(sym, params, q=q, w_radius=W2, count=31)
    outer = logs[radii >= W2 - shell_width]
    return _safe_exp(float(np.max(outer)) / q)


def linear_symbol_check(matrix, offset, tol: float = 1e-8) -> dict:
    """Spectral admissibility of an affine symbol.

    Boundedness requires operator norm at most one and the offset to be
    orthogonal to every direction the matrix moves isometrically;
    compactness requires operator norm strictly below one.
    """
    mat = np.asarray(matrix, dtype=complex)
    if mat.ndim == 0:
        mat = mat.reshape(1, 1)
    off = np.asarray(offset, dtype=complex).reshape(mat.shape[0])
    U, sigma, Vh = np.linalg.svd(mat)
    op_norm = float(sigma[0])
    unit = np.abs(sigma - 1.0) <= tol
    overlap = 0.0
    for i in np.nonzero(unit)[0]:
        overlap = max(overlap, float(np.abs(np.vdot(off, U[:, i]))))
    scale = 1.0 + float(np.linalg.norm(off))
    bounded = op_norm <= 1.0 + tol and overlap <= tol * scale
    compact = op_norm < 1.0 - tol
    return {
        "op_norm": op_norm,
        "admissible_bounded": bounded,
        "admissible_compact": compact,
        "unit_directions": int(np.count_nonzero(unit)),
        "offset_overlap": overlap,
    }
