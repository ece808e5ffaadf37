"""Positive Borel measures on C^n and their averaged transforms.

Measures come in two concrete flavours: finite atom lists and densities
against volume from a small catalog (Lebesgue, Gaussian, polynomial
growth, a compact ring). Densities are discretised onto cell-center
grids when a computation needs point masses; atomic sums are exact.

The two observables driving the embedding theory are the ball mass
``mu(B(w, r))`` scaled by ``(1 + |w|)^{-s}`` and the Gaussian-kernel
transform ``w -> int exp(-t a |z - w|^2 / 2) (1 + |z|)^{-s} dmu(z)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from scipy.spatial import cKDTree

from .quadrature import (
    QuasiNormError,
    ScalarField,
    scalar_field,
    truncation_radius,
)

__all__ = [
    "AtomicMeasure",
    "DensityMeasure",
    "Measure",
    "lebesgue",
    "gaussian",
    "polygrowth",
    "ring",
    "atoms_on_lattice",
    "discretize",
    "ball_mass",
    "ball_mass_many",
    "averaging_field",
    "averaging_sequence",
    "berezin_field",
    "berezin_value",
    "sequence_lp",
    "total_weighted_mass",
    "weighted_mass_divergent",
    "effective_radius",
]

_BALL_CELLS = {1: 32, 2: 16}
_SUM_CUTOFF = 1e-14


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite sum of point masses: locations (k, n) complex, weights (k,)."""

    locations: np.ndarray
    weights: np.ndarray
    n: int

    def __post_init__(self):
        loc = np.asarray(self.locations, dtype=complex).reshape(-1, self.n)
        wts = np.asarray(self.weights, dtype=float).reshape(-1)
        if loc.shape[0] != wts.shape[0]:
            raise ValueError("locations and weights disagree in length")
        if np.any(wts < 0):
            raise ValueError("weights must be nonnegative")
        object.__setattr__(self, "locations", loc)
        object.__setattr__(self, "weights", wts)

    @property
    def extent(self) -> float:
        if self.locations.shape[0] == 0:
            return 0.0
        return float(np.max(np.linalg.norm(self.locations, axis=1)))

    def __len__(self) -> int:
        return int(self.weights.shape[0])


@dataclass(frozen=True)
class DensityMeasure:
    """Measure rho(z) dV with rho from a fixed catalog.

    kind is one of "lebesgue", "gaussian", "polygrowth", "ring"; ``rate``
    is the Gaussian decay, ``power`` the polynomial growth exponent,
    ``ring_radius``/``ring_width`` the annulus geometry, ``scale`` a
    global multiplier.
    """

    kind: str
    n: int
    scale: float = 1.0
    rate: float = 0.0
    power: float = 0.0
    ring_radius: float = 0.0
    ring_width: float = 0.0

    def __post_init__(self):
        if self.kind not in ("lebesgue", "gaussian", "polygrowth", "ring"):
            raise ValueError(f"unknown density kind {self.kind!r}")
        if self.scale < 0:
            raise ValueError("scale must be nonnegative")
        if self.kind == "gaussian" and not (self.rate > 0):
            raise ValueError("gaussian density needs a positive rate")
        if self.kind == "ring" and not (self.ring_radius > 0 and self.ring_width > 0):
            raise ValueError("ring density needs positive radius and width")

    def density(self, pts: np.ndarray) -> np.ndarray:
        """Density values on a batch (N, n) of complex points."""
        r = np.linalg.norm(pts, axis=1)
        if self.kind == "lebesgue":
            out = np.ones_like(r)
        elif self.kind == "gaussian":
            out = np.exp(-self.rate * r ** 2)
        elif self.kind == "polygrowth":
            out = (1.0 + r) ** self.power
        else:
            half = self.ring_width / 2.0
            out = (np.abs(r - self.ring_radius) <= half).astype(float)
        return self.scale * out

    @property
    def compact_extent(self) -> Optional[float]:
        if self.kind == "ring":
            return self.ring_radius + self.ring_width / 2.0
        return None


Measure = Union[AtomicMeasure, DensityMeasure]


def lebesgue(n: int, scale: float = 1.0) -> DensityMeasure:
    return DensityMeasure(kind="lebesgue", n=n, scale=scale)


def gaussian(rate: float, n: int, scale: float = 1.0) -> DensityMeasure:
    return DensityMeasure(kind="gaussian", n=n, scale=scale, rate=rate)


def polygrowth(power: float, n: int, scale: float = 1.0) -> DensityMeasure:
    return DensityMeasure(kind="polygrowth", n=n, scale=scale, power=power)


def ring(ring_radius: float, ring_width: float, n: int, scale: float = 1.0) -> DensityMeasure:
    return DensityMeasure(
        kind="ring", n=n, scale=scale, ring_radius=ring_radius, ring_width=ring_width
    )


def atoms_on_lattice(lat, weights=None) -> AtomicMeasure:
    """Point masses on the centers of a lattice; unit weights by default."""
    loc = lat.as_complex()
    if weights is None:
        wts = np.ones(loc.shape[0])
    else:
        wts = np.asarray(weights, dtype=float)
    return AtomicMeasure(locations=loc, weights=wts, n=lat.n)


def effective_radius(mu: Measure, eps: float = 1e-12) -> Optional[float]:
    """Radius holding all but an eps fraction of decaying mass, if finite."""
    if isinstance(mu, AtomicMeasure):
        return mu.extent
    if mu.compact_extent is not None:
        return mu.compact_extent
    if mu.kind == "gaussian":
        return truncation_radius(mu.rate, 0.0, eps * max(mu.scale, 1e-300), mu.n)
    return None


def _grid_axes(radius: float, step: float) -> np.ndarray:
    """Cell-center coordinates covering [-radius, radius] with spacing step."""
    half = int(math.ceil(radius / step))
    return (np.arange(2 * half) - half + 0.5) * step


def _grid_points(center: np.ndarray, radius: float, step: float, n: int):
    """Cell-center grid on the cube of the given radius around center (2n real)."""
    axes = [center[k] + _grid_axes(radius, step) for k in range(2 * n)]
    mesh = np.meshgrid(*axes, indexing="ij")
    real = np.stack([m.ravel() for m in mesh], axis=1)
    return real[:, 0::2] + 1j * real[:, 1::2]


def discretize(mu: Measure, radius: float, step: float) -> AtomicMeasure:
    """Cell-center point-mass approximation of a measure on a centred cube.

    Atomic input is filtered to the cube; density input becomes one atom
    per cell with weight density * step^(2n). Zero-weight atoms are
    dropped.
    """
    if isinstance(mu, AtomicMeasure):
        if len(mu) == 0:
            return mu
        keep = np.max(np.abs(mu.locations.view(float).reshape(len(mu), -1)), axis=1) <= radius
        return AtomicMeasure(mu.locations[keep], mu.weights[keep], mu.n)
    n = mu.n
    pts = _grid_points(np.zeros(2 * n), radius, step, n)
    wts = mu.density(pts) * step ** (2 * n)
    keep = wts > 0
    return AtomicMeasure(locations=pts[keep], weights=wts[keep], n=n)


def _ball_step(radius: float, n: int, step_cap: Optional[float],
               mu: Optional["DensityMeasure"] = None) -> float:
    h = 2.0 * radius / _BALL_CELLS[n]
    if step_cap is not None:
        h = min(h, step_cap)
    if mu is not None and mu.kind == "ring":
        h = min(h, mu.ring_width / 4.0)
    return h


def ball_mass(
    mu: Measure,
    center,
    radius: float,
    step_cap: Optional[float] = None,
) -> float:
    """mu(B(center, radius)), the strict Euclidean ball.

    Atomic measures are summed exactly. Densities are integrated on a
    local cell-center grid over the bounding cube; cells crossing the
    boundary sphere contribute fractionally, with the covered fraction
    taken linear in the signed distance across one cell width.
    """
    c = np.asarray(center, dtype=complex).reshape(-1)
    if isinstance(mu, AtomicMeasure):
        if len(mu) == 0:
            return 0.0
        d = np.linalg.norm(mu.locations - c[None, :], axis=1)
        return float(mu.weights[d < radius].sum())
    n = mu.n
    h = _ball_step(radius, n, step_cap, mu)
    creal = np.empty(2 * n)
    creal[0::2] = c.real
    creal[1::2] = c.imag
    pts = _grid_points(creal, radius, h, n)
    dist = np.linalg.norm(pts - c[None, :], axis=1)
    frac = np.clip((radius - dist) / h + 0.5, 0.0, 1.0)
    keep = frac > 0.0
    if not np.any(keep):
        return 0.0
    return float((mu.density(pts[keep]) * frac[keep]).sum() * h ** (2 * n))


def ball_mass_many(
    mu: Measure,
    centers: np.ndarray,
    radius: float,
    step_cap: Optional[float] = None,
) -> np.ndarray:
    """Ball masses at a batch of centers (N, n) complex."""
    cs = np.asarray(centers, dtype=complex).reshape(-1, _measure_dim(mu))
    if isinstance(mu, AtomicMeasure):
        if len(mu) == 0:
            return np.zeros(cs.shape[0])
        tree = cKDTree(_to_real(mu.locations))
        hits = tree.query_ball_point(_to_real(cs), r=radius)
        out = np.empty(cs.shape[0])
        for i, idx in enumerate(hits):
            if not idx:
                out[i] = 0.0
                continue
            d = np.linalg.norm(mu.locations[idx] - cs[i][None, :], axis=1)
            out[i] = mu.weights[idx][d < radius].sum()
        return out
    return np.array([ball_mass(mu, c, radius, step_cap) for c in cs])


def _measure_dim(mu: Measure) -> int:
    return mu.n


def _to_real(pts: np.ndarray) -> np.ndarray:
    out = np.empty((pts.shape[0], 2 * pts.shape[1]))
    out[:, 0::2] = pts.real
    out[:, 1::2] = pts.imag
    return out


def averaging_field(
    mu: Measure,
    r: float,
    s: float,
    support_radius: Optional[float] = None,
    step_cap: Optional[float] = None,
) -> ScalarField:
    """Field w -> mu(B(w, r)) / (1 + |w|)^s.

    With ``support_radius`` set the field is tagged compact on that cube,
    which is how staged truncation comparisons integrate it without a
    decay certificate.
    """
    if isinstance(mu, AtomicMeasure) and len(mu) > 0:
        tree = cKDTree(_to_real(mu.locations))
    else:
        tree = None

    def _eval(pts: np.ndarray) -> np.ndarray:
        if tree is not None:
            hits = tree.query_ball_point(_to_real(pts), r=r)
            mass = np.empty(pts.shape[0])
            for i, idx in enumerate(hits):
                if not idx:
                    mass[i] = 0.0
                    continue
                d = np.linalg.norm(mu.locations[idx] - pts[i][None, :], axis=1)
                mass[i] = mu.weights[idx][d < r].sum()
        elif isinstance(mu, AtomicMeasure):
            mass = np.zeros(pts.shape[0])
        else:
            mass = ball_mass_many(mu, pts, r, step_cap)
        return mass / (1.0 + np.linalg.norm(pts, axis=1)) ** s

    decay = 1.0
    if isinstance(mu, DensityMeasure) and mu.kind == "gaussian":
        decay = mu.rate / 2.0
    compact = support_radius if support_radius is not None else _compact_of(mu, r)
    return scalar_field(
        _eval, n=mu.n, decay=decay, growth=0.0, compact_radius=compact
    )


def _compact_of(mu: Measure, pad: float) -> Optional[float]:
    if isinstance(mu, AtomicMeasure):
        return mu.extent + pad
    if mu.compact_extent is not None:
        return mu.compact_extent + pad
    return None


def averaging_sequence(mu: Measure, lat, r: float, s: float) -> np.ndarray:
    """Averaging-field values at the lattice centers."""
    centers = lat.as_complex()
    mass = ball_mass_many(mu, centers, r)
    return mass / (1.0 + np.linalg.norm(centers, axis=1)) ** s


def _kernel_sum_radius(t: float, alpha: float) -> float:
    return math.sqrt(-2.0 * math.log(_SUM_CUTOFF) / (t * alpha))


def berezin_value(mu: AtomicMeasure, w, t: float, s: float, alpha: float) -> float:
    """int exp(-t alpha |z - w|^2 / 2) (1 + |z|)^{-s} dmu(z), atomic mu."""
    wv = np.asarray(w, dtype=complex).reshape(-1)
    if len(mu) == 0:
        return 0.0
    d2 = np.sum(np.abs(mu.locations - wv[None, :]) ** 2, axis=1)
    damp = (1.0 + np.linalg.norm(mu.locations, axis=1)) ** (-s)
    return float(np.sum(mu.weights * damp * np.exp(-t * alpha * d2 / 2.0)))


def berezin_field(
    mu: AtomicMeasure,
    t: float,
    s: float,
    alpha: float,
    support_radius: Optional[float] = None,
) -> ScalarField:
    """Kernel transform of an atomic (or pre-discretised) measure as a field.

    Pruned atom sums: only atoms within the distance where the Gaussian
    factor clears 1e-14 contribute at each evaluation point.
    """
    if not isinstance(mu, AtomicMeasure):
        raise TypeError("berezin_field expects atoms; discretize densities first")
    cutoff = _kernel_sum_radius(t, alpha)
    if len(mu) > 0:
        tree = cKDTree(_to_real(mu.locations))
        damp = mu.weights * (1.0 + np.linalg.norm(mu.locations, axis=1)) ** (-s)
    else:
        tree = None
        damp = None

    def _eval(pts: np.ndarray) -> np.ndarray:
        out = np.zeros(pts.shape[0])
        if tree is None:
            return out
        hits = tree.query_ball_point(_to_real(pts), r=cutoff)
        for i, idx in enumerate(hits):
            if not idx:
                continue
            d2 = np.sum(np.abs(mu.locations[idx] - pts[i][None, :]) ** 2, axis=1)
            out[i] = np.sum(damp[idx] * np.exp(-t * alpha * d2 / 2.0))
        return out

    compact = support_radius
    if compact is None and len(mu) > 0:
        compact = mu.extent + cutoff
    return scalar_field(
        _eval, n=mu.n, decay=t * alpha / 4.0, growth=0.0, compact_radius=compact
    )


def sequence_lp(values: np.ndarray, k: float) -> float:
    """l^k size of a nonnegative sequence; k = inf takes the supremum."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return 0.0
    if math.isinf(k):
        return float(np.max(v))
    if k < 1:
        raise QuasiNormError(f"sequence exponent {k} is below 1")
    return float(np.sum(v ** k) ** (1.0 / k))


def total_weighted_mass(mu: Measure, s: float, radius: float,
                        step_cap: Optional[float] = None) -> float:
    """int_{|z| <= radius} (1 + |z|)^{-s} dmu(z), truncated at the radius."""
    if isinstance(mu, AtomicMeasure):
        if len(mu) == 0:
            return 0.0
        r = np.linalg.norm(mu.locations, axis=1)
        keep = r <= radius
        return float(np.sum(mu.weights[keep] * (1.0 + r[keep]) ** (-s)))
    n = mu.n
    h = _ball_step(radius, n, step_cap, mu)
    pts = _grid_points(np.zeros(2 * n), radius, h, n)
    r = np.linalg.norm(pts, axis=1)
    keep = r <= radius
    vals = mu.density(pts[keep]) * (1.0 + r[keep]) ** (-s)
    return float(vals.sum() * h ** (2 * n))


def weighted_mass_divergent(mu: Measure, s: float) -> bool:
    """Analytic divergence check for the weighted total mass.

    For the density catalog the integral of (1+|z|)^{power - s} over C^n
    diverges exactly when power - s >= -2n; compact and Gaussian cases
    always converge.
    """
    if isinstance(mu, AtomicMeasure):
        return False
    if mu.kind in ("gaussian", "ring") or mu.scale == 0:
        return False
    power = mu.power if mu.kind == "polygrowth" else 0.0
    return power - s >= -2 * mu.n
