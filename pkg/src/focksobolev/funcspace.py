"""Entire functions and weighted norms on C^n.

Two function families are supported.

:class:`Polynomial`
    Finite multi-index coefficient tables. Closed under the coordinate
    derivatives used by the derivative-sum norm.

:class:`KernelCombo`
    Finite combinations of exponential kernels ``K_w(z) = exp(alpha <z, w>)``
    with ``<z, w> = sum_j z_j conj(w_j)``. Terms can carry the unit-norm
    normalisation ``k_w = K_w exp(-alpha |w|^2 / 2)`` and the extra
    ``(1 + |w|)^{-m}`` damping that keeps the family bounded in the
    m-weighted norms.

Two norms of order m are implemented for exponent p:

* the derivative form, the sum of plain Fock norms of all partials up to
  total order m (polynomials only), and
* the integral form, a single weighted integral against ``|z|^{mp}`` with
  the normalising constant chosen so the constant function 1 has norm 1
  for every p, m and n.

All kernel arithmetic runs through log-amplitudes so that large centers
cannot overflow before the Gaussian weight is applied. A hard cap at
exponent 709 guards the points where a caller asks for a plain value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from .quadrature import (
    DEFAULT_CELLS,
    DEFAULT_EPS_TAIL,
    QuadratureScheme,
    ScalarField,
    integrate_gaussian,
    scalar_field,
    scheme_for,
    sup_field_norm,
    truncation_radius,
)

__all__ = [
    "Params",
    "Polynomial",
    "KernelTerm",
    "KernelCombo",
    "EntireFunction",
    "EvaluationOverflow",
    "polynomial",
    "kernel",
    "evaluate",
    "log_abs",
    "norm_constant",
    "norm_integrand_field",
    "fock_sobolev_norm",
    "derivative_norm",
    "tail_projection",
    "pointwise_bound_ratio",
    "probe_family",
    "random_polynomial",
]

OVERFLOW_CAP = 709.0


class EvaluationOverflow(ArithmeticError):
    """Requested a plain (non-log) value whose exponent exceeds the float range."""


@dataclass(frozen=True)
class Params:
    """Space parameters: dimension n, weight alpha, order m, exponents p and q.

    ``p`` and ``q`` may be ``math.inf``; the target space with q infinite is
    the sup-normed one.
    """

    n: int
    alpha: float
    m: int
    p: float
    q: float

    def __post_init__(self):
        if self.n not in (1, 2):
            raise ValueError("only n in {1, 2} is supported")
        if not (self.alpha > 0):
            raise ValueError("alpha must be positive")
        if self.m < 0 or int(self.m) != self.m:
            raise ValueError("m must be a nonnegative integer")
        if not (self.p > 0):
            raise ValueError("p must be positive (inf allowed)")
        if not (self.q > 0):
            raise ValueError("q must be positive (inf allowed)")


@dataclass(frozen=True)
class Polynomial:
    """Polynomial in n complex variables as a sorted multi-index table."""

    n: int
    coeffs: tuple  # tuple of (beta tuple, complex coefficient)

    @property
    def degree(self) -> int:
        return max((sum(b) for b, _ in self.coeffs), default=0)

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0


@dataclass(frozen=True)
class KernelTerm:
    """One kernel summand: coeff * K_w, optionally normalised and m-damped."""

    center: tuple
    coeff: complex = 1.0 + 0.0j
    normalized: bool = True
    sobolev_scaled: bool = False


@dataclass(frozen=True)
class KernelCombo:
    n: int
    terms: tuple  # tuple of KernelTerm

    @property
    def max_center_norm(self) -> float:
        if not self.terms:
            return 0.0
        return max(
            float(np.linalg.norm(np.asarray(t.center, dtype=complex))) for t in self.terms
        )


EntireFunction = Union[Polynomial, KernelCombo]


def polynomial(coeffs: Mapping[tuple, complex], n: int) -> Polynomial:
    """Canonicalise a {multi-index: coefficient} table.

    :param coeffs: mapping from length-n integer tuples to coefficients.
    :param n: complex dimension.
    """
    clean = {}
    for beta, c in coeffs.items():
        beta = tuple(int(b) for b in beta)
        if len(beta) != n:
            raise ValueError(f"multi-index {beta} has length {len(beta)}, expected {n}")
        if any(b < 0 for b in beta):
            raise ValueError(f"multi-index {beta} has a negative entry")
        c = complex(c)
        if c != 0:
            clean[beta] = clean.get(beta, 0) + c
    items = tuple(sorted((b, c) for b, c in clean.items() if c != 0))
    return Polynomial(n=n, coeffs=items)


def kernel(
    center: Sequence[complex],
    n: int = 1,
    coeff: complex = 1.0,
    normalized: bool = True,
    sobolev_scaled: bool = False,
) -> KernelCombo:
    """Single-term kernel combination centred at ``center``."""
    w = tuple(complex(c) for c in np.asarray(center, dtype=complex).reshape(n))
    term = KernelTerm(center=w, coeff=complex(coeff), normalized=normalized,
                      sobolev_scaled=sobolev_scaled)
    return KernelCombo(n=n, terms=(term,))


def _as_points(z, n: int) -> tuple[np.ndarray, bool]:
    """Normalise input to a complex array (N, n); flag scalar input."""
    arr = np.asarray(z, dtype=complex)
    if arr.ndim == 0:
        if n != 1:
            raise ValueError("scalar input is only valid for n = 1")
        return arr.reshape(1, 1), True
    if arr.ndim == 1:
        if arr.shape[0] == n:
            return arr.reshape(1, n), True
        if n == 1:
            return arr.reshape(-1, 1), False
        raise ValueError(f"cannot interpret shape {arr.shape} as points in C^{n}")
    if arr.shape[-1] != n:
        raise ValueError(f"cannot interpret shape {arr.shape} as points in C^{n}")
    return arr.reshape(-1, n), False


def _poly_values(f: Polynomial, pts: np.ndarray) -> np.ndarray:
    out = np.zeros(pts.shape[0], dtype=complex)
    for beta, c in f.coeffs:
        term = np.full(pts.shape[0], c, dtype=complex)
        for j, b in enumerate(beta):
            if b:
                term = term * pts[:, j] ** b
        out += term
    return out


def _kernel_log_terms(f: KernelCombo, pts: np.ndarray, params: Params) -> np.ndarray:
    """Complex log-amplitudes, shape (T, N): log coeff + alpha <z, w> - shifts."""
    a = params.alpha
    out = np.empty((len(f.terms), pts.shape[0]), dtype=complex)
    for i, t in enumerate(f.terms):
        w = np.asarray(t.center, dtype=complex)
        shift = 0.0
        if t.normalized:
            shift += a * float(np.vdot(w, w).real) / 2.0
        if t.sobolev_scaled:
            shift += params.m * math.log1p(float(np.linalg.norm(w)))
        log_c = np.log(complex(t.coeff)) if t.coeff != 0 else complex(-math.inf, 0.0)
        out[i] = log_c + a * (pts @ np.conj(w)) - shift
    return out


def evaluate(f: EntireFunction, z, params: Params):
    """Value of f at one point or a batch of points.

    Raises :class:`EvaluationOverflow` when a kernel exponent would exceed
    the float range.
    """
    pts, scalar = _as_points(z, f.n)
    if isinstance(f, Polynomial):
        vals = _poly_values(f, pts)
    else:
        if not f.terms:
            vals = np.zeros(pts.shape[0], dtype=complex)
        else:
            logs = _kernel_log_terms(f, pts, params)
            worst = float(np.max(logs.real))
            if worst > OVERFLOW_CAP:
                raise EvaluationOverflow(
                    f"kernel exponent {worst:.1f} exceeds the cap {OVERFLOW_CAP}"
                )
            vals = np.exp(logs).sum(axis=0)
    return complex(vals[0]) if scalar else vals


def log_abs(f: EntireFunction, pts: np.ndarray, params: Params) -> np.ndarray:
    """log |f| on a batch of points (N, n), stable for large kernel centers.

    Returns -inf where f vanishes.
    """
    if isinstance(f, Polynomial):
        with np.errstate(divide="ignore"):
            return np.log(np.abs(_poly_values(f, pts)))
    if not f.terms:
        return np.full(pts.shape[0], -math.inf)
    logs = _kernel_log_terms(f, pts, params)
    peak = np.max(logs.real, axis=0)
    peak = np.where(np.isfinite(peak), peak, 0.0)
    total = np.exp(logs - peak[None, :]).sum(axis=0)
    with np.errstate(divide="ignore"):
        return peak + np.log(np.abs(total))


def _function_degree(f: EntireFunction) -> int:
    return f.degree if isinstance(f, Polynomial) else 0


def _center_pad(f: EntireFunction) -> float:
    return 0.0 if isinstance(f, Polynomial) else f.max_center_norm


def _single_center(f: EntireFunction) -> Optional[tuple]:
    if isinstance(f, KernelCombo) and len(f.terms) == 1:
        return f.terms[0].center
    return None


def norm_constant(p: float, m: int, n: int, alpha: float) -> float:
    """Normalising constant of the integral-form norm.

    Chosen so the weighted integral of ``|z|^{mp} exp(-alpha p |z|^2 / 2)``
    over C^n equals 1, hence the constant function has norm 1.
    """
    log_c = (
        (m * p / 2.0 + n) * math.log(alpha * p / 2.0)
        + math.lgamma(n)
        - n * math.log(math.pi)
        - math.lgamma(m * p / 2.0 + n)
    )
    return math.exp(log_c)


def norm_integrand_field(f: EntireFunction, params: Params, p: float) -> ScalarField:
    """Field z -> |z|^{mp} |f(z)|^p exp(-alpha p |z|^2 / 2) with envelope."""
    m, a, n = params.m, params.alpha, f.n

    def _eval(pts: np.ndarray) -> np.ndarray:
        la = log_abs(f, pts, params)
        r2 = np.abs(pts[:, 0:1]) ** 2
        for j in range(1, n):
            r2 = r2 + np.abs(pts[:, j:j + 1]) ** 2
        r2 = r2[:, 0]
        expo = p * la - a * p * r2 / 2.0
        if m * p > 0:
            with np.errstate(divide="ignore"):
                expo = expo + (m * p / 2.0) * np.log(r2)
        with np.errstate(invalid="ignore"):
            out = np.exp(expo)
        return np.where(np.isnan(out), 0.0, out)

    return scalar_field(
        _eval,
        n=n,
        decay=a * p / 2.0,
        growth=m * p + p * _function_degree(f),
        center=_single_center(f),
    )


def _default_norm_scheme(f: EntireFunction, params: Params, p: float) -> QuadratureScheme:
    pad = _center_pad(f) if _single_center(f) is None else 0.0
    return scheme_for(
        params.n,
        params.alpha * p / 2.0,
        params.m * p + p * _function_degree(f),
        pad=pad,
    )


def _sup_norm(f: EntireFunction, params: Params) -> float:
    m, a, n = params.m, params.alpha, f.n

    def _eval(pts: np.ndarray) -> np.ndarray:
        la = log_abs(f, pts, params)
        r = np.linalg.norm(pts, axis=1)
        expo = la - a * r ** 2 / 2.0
        if m > 0:
            with np.errstate(divide="ignore"):
                expo = expo + m * np.log(r)
        with np.errstate(invalid="ignore"):
            out = np.exp(expo)
        return np.where(np.isnan(out), 0.0, out)

    field = scalar_field(_eval, n=n, decay=a / 2.0, growth=m + _function_degree(f))
    radius = truncation_radius(a / 2.0, m + _function_degree(f), DEFAULT_EPS_TAIL, n)
    radius = 1.1 * radius + _center_pad(f) + 1.0
    step = 2.0 * radius / (256 if n == 1 else 40)
    value, _ = sup_field_norm(field, radius, step)
    return value


def fock_sobolev_norm(
    f: EntireFunction, params: Params, scheme: Optional[QuadratureScheme] = None
) -> float:
    """Integral-form norm of order m with exponent params.p.

    For finite p this is ``(C int |z|^{mp} |f|^p e^{-alpha p |z|^2/2})^{1/p}``
    with C from :func:`norm_constant`; for p infinite it is the supremum of
    ``|z|^m |f(z)| e^{-alpha |z|^2 / 2}``.
    """
    if f.n != params.n:
        raise ValueError("function and parameter dimensions disagree")
    p = params.p
    if math.isinf(p):
        return _sup_norm(f, params)
    field = norm_integrand_field(f, params, p)
    if scheme is None:
        scheme = _default_norm_scheme(f, params, p)
    value, _ = integrate_gaussian(field, scheme)
    if value <= 0.0:
        return 0.0
    c = norm_constant(p, params.m, params.n, params.alpha)
    return (c * value) ** (1.0 / p)


def _partial(f: Polynomial, j: int) -> Polynomial:
    out = {}
    for beta, c in f.coeffs:
        if beta[j] == 0:
            continue
        nb = list(beta)
        nb[j] -= 1
        key = tuple(nb)
        out[key] = out.get(key, 0) + c * beta[j]
    return polynomial(out, f.n)


def _partials_up_to(f: Polynomial, m: int) -> Iterable[Polynomial]:
    """All derivatives d^beta f over multi-indices with total order <= m."""
    frontier = {(0,) * f.n: f}
    yield f
    for _ in range(m):
        nxt = {}
        for beta, g in frontier.items():
            for j in range(f.n):
                nb = list(beta)
                nb[j] += 1
                key = tuple(nb)
                if key not in nxt:
                    nxt[key] = _partial(g, j)
        for g in nxt.values():
            yield g
        frontier = nxt


def derivative_norm(
    f: Polynomial, params: Params, scheme: Optional[QuadratureScheme] = None
) -> float:
    """Derivative-form norm: sum of order-zero norms of all partials up to m."""
    if not isinstance(f, Polynomial):
        raise TypeError("the derivative-form norm is only defined for polynomials here")
    flat = replace(params, m=0)
    total = 0.0
    for g in _partials_up_to(f, params.m):
        total += fock_sobolev_norm(g, flat, scheme)
    return total


def tail_projection(f: Polynomial, j: int) -> Polynomial:
    """Drop every homogeneous component of total degree below j."""
    if j < 0:
        raise ValueError("projection order must be nonnegative")
    kept = {beta: c for beta, c in f.coeffs if sum(beta) >= j}
    return polynomial(kept, f.n)


def pointwise_bound_ratio(
    f: EntireFunction, params: Params, samples, scheme: Optional[QuadratureScheme] = None
) -> float:
    """max over samples of |f(z)| (1+|z|)^m e^{-alpha |z|^2/2} / norm(f).

    The pointwise growth bound says this stays below a constant independent
    of f; callers assert an empirical ceiling.
    """
    pts, _ = _as_points(samples, f.n)
    nrm = fock_sobolev_norm(f, params, scheme)
    if nrm == 0.0:
        raise ValueError("bound ratio is undefined for the zero function")
    la = log_abs(f, pts, params)
    r = np.linalg.norm(pts, axis=1)
    vals = np.exp(la - params.alpha * r ** 2 / 2.0 + params.m * np.log1p(r))
    return float(np.max(vals)) / nrm


def random_polynomial(n: int, degree: int, rng: np.random.Generator) -> Polynomial:
    """Dense random polynomial with standard complex Gaussian coefficients."""
    coeffs = {}
    if n == 1:
        betas = [(d,) for d in range(degree + 1)]
    else:
        betas = [(i, j) for i in range(degree + 1) for j in range(degree + 1 - i)]
    for beta in betas:
        c = rng.standard_normal() + 1j * rng.standard_normal()
        coeffs[beta] = c
    return polynomial(coeffs, n)


def _kernel_centers_grid(n: int, radius: float) -> list:
    """Deterministic polar grid of kernel centers with |w| <= radius."""
    centers = [np.zeros(n, dtype=complex)]
    radii = [r for r in (1.0, 2.0, 3.0, 4.0) if r <= radius]
    dirs = []
    if n == 1:
        for k in range(8):
            ang = k * math.pi / 4.0
            dirs.append(np.array([math.cos(ang) + 1j * math.sin(ang)]))
    else:
        dirs = [
            np.array([1.0, 0.0], dtype=complex),
            np.array([0.0, 1.0], dtype=complex),
            np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0),
            np.array([1j, 0.0], dtype=complex),
            np.array([0.0, 1j], dtype=complex),
            np.array([1.0, 1j], dtype=complex) / math.sqrt(2.0),
            np.array([1j, 1.0], dtype=complex) / math.sqrt(2.0),
            np.array([1.0, -1.0], dtype=complex) / math.sqrt(2.0),
        ]
    for r in radii:
        for d in dirs:
            centers.append(r * d)
    return centers


def probe_family(
    params: Params,
    seed: int = 0,
    lattice=None,
    kernel_radius: float = 4.0,
    monomial_degree: int = 6,
    combos: int = 20,
) -> list:
    """Test-function family for embedding lower bounds and operator probes.

    Contains normalised kernels on a polar grid of centers, their m-damped
    variants when m >= 1, monomials up to the given total degree, and
    seeded random kernel combinations placed on lattice centers with
    square-summable coefficients.

    Returns a list of (name, EntireFunction) pairs.
    """
    out = []
    for i, w in enumerate(_kernel_centers_grid(params.n, kernel_radius)):
        out.append((f"kernel[{i}]", kernel(w, n=params.n)))
        if params.m >= 1:
            out.append((f"damped-kernel[{i}]", kernel(w, n=params.n, sobolev_scaled=True)))
    if params.n == 1:
        betas = [(d,) for d in range(monomial_degree + 1)]
    else:
        betas = [
            (i, j)
            for i in range(monomial_degree + 1)
            for j in range(monomial_degree + 1 - i)
        ]
    for beta in betas:
        out.append((f"monomial{beta}", polynomial({beta: 1.0}, params.n)))
    if combos > 0:
        rng = np.random.default_rng(seed)
        if lattice is not None:
            sites = lattice.as_complex()
        else:
            sites = np.array([[complex(x, y)] for x in (-2.0, -1.0, 0.0, 1.0, 2.0)
                              for y in (-2.0, 0.0, 2.0)])
            if params.n == 2:
                sites = np.concatenate([sites, np.zeros_like(sites)], axis=1)
        order = np.argsort(np.linalg.norm(sites, axis=1), kind="stable")
        sites = sites[order][:40]
        for draw in range(combos):
            count = min(6, len(sites))
            idx = rng.choice(len(sites), size=count, replace=False)
            terms = []
            for rank, i in enumerate(idx):
                c = (rng.standard_normal() + 1j * rng.standard_normal()) / (1.0 + rank) ** 2
                terms.append(
                    KernelTerm(center=tuple(sites[i]), coeff=complex(c), normalized=True)
                )
            out.append((f"combo[{draw}]", KernelCombo(n=params.n, terms=tuple(terms))))
    return out
