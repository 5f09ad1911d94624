"""Radon densities of spectral measures: total-variation norms, ball
reconstruction, affine fitting, and harmonic moments.

A symmetry-closed atomic spectral measure induces a density on hyperplane
space whose sphere marginal is atomic: finitely many unit directions, each
carrying a per-direction profile

    g_w(b) = sum_j Re(w_j * exp(-i t_j b)),   w_j = -t_j^2 * c_j,

supported on b in (-R, R).  The pair (directions, profiles) is the measure
through which everything else is computed: its total variation equals the
Radon-based representation norm of f on the ball of radius R, ramp
integrals against it reconstruct f up to an affine part, and its pairings
with harmonic-times-monomial densities are the moments used by the
null-space analysis.  Profiles may also carry a polynomial component so
that those harmonic null densities can be merged in as direction atoms of a
sphere rule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    InvalidInputError,
    InvariantViolationError,
    SingularFitError,
    UnsupportedDimensionError,
)
from .harmonics import harmonic_eval
from .quadrature import BallGrid, QuadratureRule, gauss_legendre, map_rule
from .spectrum import SpectralMeasure

_REAL_TOL = 1e-12
_ROOT_SCAN = 512
_ROOT_TOL = 1e-12

DEFAULT_PANEL_RULE = gauss_legendre(48, -1.0, 1.0)


@dataclass(frozen=True)
class DirectionProfile:
    """Profile b -> g(b) of one direction: trigonometric plus polynomial part."""

    trig_freqs: np.ndarray
    trig_weights: np.ndarray
    poly_coefs: np.ndarray

    def __post_init__(self):
        tf = np.asarray(self.trig_freqs, dtype=float)
        tw = np.asarray(self.trig_weights, dtype=complex)
        pc = np.asarray(self.poly_coefs, dtype=float)
        if tf.shape != tw.shape:
            raise InvalidInputError("trig frequencies and weights must align")
        for arr in (tf, tw, pc):
            arr.setflags(write=False)
        object.__setattr__(self, "trig_freqs", tf)
        object.__setattr__(self, "trig_weights", tw)
        object.__setattr__(self, "poly_coefs", pc)

    def __call__(self, b):
        """Real value of the profile (vectorized over any-shape b)."""
        b = np.asarray(b, dtype=float)
        out = np.zeros(b.shape)
        if len(self.trig_freqs):
            tb = np.multiply.outer(b, self.trig_freqs)
            out = np.cos(tb) @ self.trig_weights.real + np.sin(tb) @ self.trig_weights.imag
        if len(self.poly_coefs):
            out = out + np.polynomial.polynomial.polyval(b, self.poly_coefs)
        return out

    def imag_residue(self, b) -> float:
        """Largest imaginary part of the complex profile sum (realness check)."""
        if not len(self.trig_freqs):
            return 0.0
        b = np.asarray(b, dtype=float)
        tb = np.multiply.outer(b, self.trig_freqs)
        vals = np.exp(-1j * tb) @ self.trig_weights
        return float(np.abs(vals.imag).max())

    def merged(self, other: "DirectionProfile") -> "DirectionProfile":
        freqs = np.concatenate([self.trig_freqs, other.trig_freqs])
        weights = np.concatenate([self.trig_weights, other.trig_weights])
        p, q = self.poly_coefs, other.poly_coefs
        coefs = np.zeros(max(len(p), len(q)))
        coefs[: len(p)] += p
        coefs[: len(q)] += q
        return DirectionProfile(freqs, weights, coefs)


@dataclass(frozen=True)
class RadonDensity:
    """Even real density on S^{d-1} x (-R, R) with an atomic sphere marginal."""

    d: int
    R: float
    directions: np.ndarray
    profiles: tuple[DirectionProfile, ...]

    def __post_init__(self):
        dirs = np.atleast_2d(np.asarray(self.directions, dtype=float))
        if len(self.profiles) != len(dirs) and len(dirs) > 0:
            raise InvalidInputError("one profile per direction required")
        dirs.setflags(write=False)
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "profiles", tuple(self.profiles))

    def __len__(self) -> int:
        return len(self.profiles)

    @property
    def is_empty(self) -> bool:
        return len(self.profiles) == 0

    def validate(self, tol: float = _REAL_TOL, n_check: int = 17) -> None:
        """Spot-check realness and the evenness g_w(b) = g_{-w}(-b)."""
        if self.is_empty:
            return
        b = np.linspace(-self.R, self.R, n_check)
        index = {tuple(w): i for i, w in enumerate(np.round(self.directions, 12).tolist())}
        for i, profile in enumerate(self.profiles):
            if profile.imag_residue(b) > tol:
                raise InvariantViolationError("profile is not real: spectral symmetry broken")
            key = tuple(np.round(-self.directions[i], 12).tolist())
            j = index.get(key)
            if j is None:
                raise InvariantViolationError("direction set is not antipodally symmetric")
            if np.max(np.abs(profile(b) - self.profiles[j](-b))) > tol * max(1.0, self._scale()):
                raise InvariantViolationError("evenness g_w(b) = g_{-w}(-b) violated")

    def _scale(self) -> float:
        return max(
            (float(np.abs(p.trig_weights).sum() + np.abs(p.poly_coefs).sum()) for p in self.profiles),
            default=1.0,
        )

    def merged_with(self, other: "RadonDensity") -> "RadonDensity":
        """Union of two densities on the same ball (profiles add on shared directions)."""
        if other.is_empty:
            return self
        if self.is_empty:
            return other
        if self.d != other.d or self.R != other.R:
            raise InvalidInputError("densities live on different hyperplane spaces")
        index = {tuple(w): i for i, w in enumerate(self.directions.tolist())}
        dirs = [w for w in self.directions]
        profs = list(self.profiles)
        for w, p in zip(other.directions, other.profiles):
            i = index.get(tuple(w.tolist()))
            if i is None:
                dirs.append(w)
                profs.append(p)
            else:
                profs[i] = profs[i].merged(p)
        return RadonDensity(self.d, self.R, np.array(dirs), tuple(profs))


def density_from_spectrum(mu: SpectralMeasure, R: float) -> RadonDensity:
    """Per-direction profile weights -t^2 c, grouped by the atomic directions.

    Directions are sorted lexicographically for reproducible summation order.
    """
    if R <= 0:
        raise InvalidInputError("ball radius must be positive")
    groups: dict = {}
    for atom in mu.atoms:
        key = tuple(atom.omega.tolist())
        groups.setdefault(key, []).append((atom.t, -atom.t**2 * atom.c))
    keys = sorted(groups)
    directions = np.array(keys).reshape(len(keys), mu.d)
    profiles = []
    for key in keys:
        freqs = np.array([t for t, _ in groups[key]])
        weights = np.array([w for _, w in groups[key]])
        profiles.append(DirectionProfile(freqs, weights, np.zeros(0)))
    density = RadonDensity(d=mu.d, R=float(R), directions=directions, profiles=tuple(profiles))
    density.validate()
    return density


def _bisect_root(fn, a: float, b: float, fa: float, tol: float = _ROOT_TOL) -> float:
    while b - a > tol:
        m = 0.5 * (a + b)
        fm = float(fn(np.array([m]))[0])
        if fa * fm <= 0:
            b = m
        else:
            a, fa = m, fm
    return 0.5 * (a + b)


def sign_change_roots(fn, lo: float, hi: float, scan: int = _ROOT_SCAN) -> list[float]:
    """Roots of a scalar function located by a fixed scan plus bisection.

    Sign changes between adjacent scan points are bracketed and bisected to
    ``_ROOT_TOL``; roots that do not flip the sign on the scan grid are
    invisible by design (fixed, reproducible cost).
    """
    xs = np.linspace(lo, hi, scan)
    vals = np.asarray(fn(xs), dtype=float)
    signs = np.sign(vals)
    signs[signs == 0] = 1.0
    roots = []
    for i in np.nonzero(signs[:-1] * signs[1:] < 0)[0]:
        roots.append(_bisect_root(fn, float(xs[i]), float(xs[i + 1]), float(vals[i])))
    return roots


def _panel_edges(fn, lo: float, hi: float) -> list[float]:
    return [lo] + sign_change_roots(fn, lo, hi) + [hi]


def _abs_integral(fn, lo: float, hi: float, rule: QuadratureRule) -> float:
    """Integral of |fn| over (lo, hi) by sign-split Gauss-Legendre panels."""
    if hi <= lo:
        return 0.0
    edges = _panel_edges(fn, lo, hi)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        if b - a <= 0:
            continue
        nodes, weights = map_rule(rule, a, b)
        total += abs(float(weights @ np.asarray(fn(nodes), dtype=float)))
    return total


def direction_masses(density: RadonDensity, rule: QuadratureRule | None = None, lo: float | None = None, hi: float | None = None) -> np.ndarray:
    """Per-direction integral of |g| over (lo, hi); defaults to (-R, R)."""
    rule = rule or DEFAULT_PANEL_RULE
    lo = -density.R if lo is None else lo
    hi = density.R if hi is None else hi
    return np.array([_abs_integral(p, lo, hi, rule) for p in density.profiles])


def tv_norm(density: RadonDensity, rule: QuadratureRule | None = None) -> float:
    """Total variation of the density: the representation norm of f on the ball.

    The sphere marginal being atomic, this is an exact finite sum of
    one-dimensional integrals of |g_w| over (-R, R), each computed on
    Gauss-Legendre panels split at the sign-change roots of g_w.
    """
    if density.is_empty:
        return 0.0
    return float(direction_masses(density, rule).sum())


def profile_moment(density: RadonDensity, i: int, power: int, lo: float, hi: float, rule: QuadratureRule | None = None) -> float:
    """Signed integral of b^power * g_i(b) over (lo, hi) (no sign splitting)."""
    rule = rule or DEFAULT_PANEL_RULE
    if hi <= lo:
        return 0.0
    nodes, weights = map_rule(rule, lo, hi)
    return float(weights @ (nodes**power * density.profiles[i](nodes)))


def second_derivative_norm_1d(f_second_derivative, R: float, rule: QuadratureRule | None = None) -> float:
    """Independent d=1 oracle: integral of |f''| over (-R, R).

    Deliberately separate from the density path: it scans the callable for
    sign changes, bisects, and integrates panel by panel.
    """
    rule = rule or DEFAULT_PANEL_RULE
    fn = lambda b: np.asarray(f_second_derivative(np.asarray(b, dtype=float)), dtype=float)
    xs = np.linspace(-R, R, _ROOT_SCAN)
    vals = fn(xs)
    signs = np.sign(vals)
    signs[signs == 0] = 1.0
    edges = [-R]
    for i in np.nonzero(signs[:-1] * signs[1:] < 0)[0]:
        edges.append(_bisect_root(fn, float(xs[i]), float(xs[i + 1]), float(vals[i])))
    edges.append(R)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        nodes, weights = map_rule(rule, a, b)
        total += abs(float(weights @ fn(nodes)))
    return total


def spectral_second_moment(mu: SpectralMeasure) -> float:
    """Second frequency moment sum |c| t^2 of the atomic spectral measure.

    For a cosine sum this equals the Euclidean Fourier constant C_f.
    """
    return float(sum(abs(a.c) * a.t**2 for a in mu.atoms))


def check_fourier_bound(mu: SpectralMeasure, R: float, rule: QuadratureRule | None = None, slack: float = 1e-10) -> tuple[float, float, bool]:
    """Compare the computed ball norm against the bound 2 R C_f.

    Returns (norm, bound, ok) with ok = (norm <= bound + slack).
    """
    density = density_from_spectrum(mu, R)
    norm = tv_norm(density, rule)
    bound = 2.0 * R * spectral_second_moment(mu)
    return norm, bound, norm <= bound + slack


@dataclass(frozen=True)
class AffinePart:
    """Affine remainder (v, c) with the sup residual of its least-squares fit."""

    v: np.ndarray
    c: float
    max_affine_residual: float = 0.0

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.v, dtype=float))
        v.setflags(write=False)
        object.__setattr__(self, "v", v)

    @staticmethod
    def zero(d: int) -> "AffinePart":
        return AffinePart(v=np.zeros(d), c=0.0, max_affine_residual=0.0)

    def __call__(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return X @ self.v + self.c


def ramp_integral_grid(density: RadonDensity, X, rule: QuadratureRule | None = None) -> np.ndarray:
    """Ramp pairing x -> integral of (<w, x> - b)_+ g_w(b) db, summed over directions.

    The ramp kink at b = <w, x> is handled exactly by integrating only over
    (-R, <w, x>), where the integrand is smooth; one Gauss-Legendre panel
    per direction and point suffices.
    """
    rule = rule or DEFAULT_PANEL_RULE
    X = np.atleast_2d(np.asarray(X, dtype=float))
    out = np.zeros(len(X))
    if density.is_empty:
        return out
    ref = gauss_legendre(len(rule), 0.0, 1.0)
    R = density.R
    for w, profile in zip(density.directions, density.profiles):
        u = X @ w
        width = u + R
        nodes = -R + width[:, None] * ref.nodes[None, :]
        weights = width[:, None] * ref.weights[None, :]
        vals = (u[:, None] - nodes) * profile(nodes)
        out += np.einsum("ij,ij->i", weights, vals)
    return out


def reconstruct(density: RadonDensity, affine: AffinePart, x, rule: QuadratureRule | None = None) -> float:
    """Evaluate the ramp representation at one interior point of the ball."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.linalg.norm(x) >= density.R:
        raise DomainError(f"|x| = {np.linalg.norm(x)} is not inside the open ball of radius {density.R}")
    return float(ramp_integral_grid(density, x[None, :], rule)[0] + affine(x[None, :])[0])


def reconstruct_grid(density: RadonDensity, affine: AffinePart, X, rule: QuadratureRule | None = None) -> np.ndarray:
    """Vectorized reconstruct over a batch of interior points."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if np.any(np.linalg.norm(X, axis=1) >= density.R):
        raise DomainError("grid contains points outside the open ball")
    return ramp_integral_grid(density, X, rule) + affine(X)


def fit_affine(mu: SpectralMeasure, density: RadonDensity, grid: BallGrid, rule: QuadratureRule | None = None) -> AffinePart:
    """Least-squares affine part of f minus its ramp pairing on a ball grid.

    The residual r(x) = f(x) - ramp(x) is affine in exact arithmetic; the
    returned ``max_affine_residual`` certifies how affine it is on this grid.
    """
    X = grid.points
    if len(X) < density.d + 2:
        raise InvalidInputError(f"need at least d+2 = {density.d + 2} grid points")
    design = np.column_stack([X, np.ones(len(X))])
    if np.linalg.matrix_rank(design) < density.d + 1:
        raise SingularFitError("grid points are not in general position")
    target = mu.evaluate(X) - ramp_integral_grid(density, X, rule)
    theta, *_ = np.linalg.lstsq(design, target, rcond=None)
    residual = float(np.max(np.abs(target - design @ theta)))
    return AffinePart(v=theta[:-1], c=float(theta[-1]), max_affine_residual=residual)


def harmonic_moment(density: RadonDensity, k: int, j: int, kprime: int, rule: QuadratureRule | None = None) -> float:
    """Pairing of the density with the harmonic-times-monomial Y_{k,j} (x) b^{k'}.

    Computed as sum_w Y_{k,j}(w) * integral of b^{k'} g_w(b) db, the exact
    pairing for an atomic sphere marginal.
    """
    if density.d not in (2, 3):
        raise UnsupportedDimensionError("harmonic moments need d in {2, 3}")
    if kprime < 0 or kprime >= k:
        raise InvalidInputError("moment degree must satisfy 0 <= k' < k")
    if (k - kprime) % 2 != 0:
        raise InvalidInputError("k and k' must share parity (even densities)")
    rule = rule or DEFAULT_PANEL_RULE
    if density.is_empty:
        return 0.0
    nodes, weights = map_rule(rule, -density.R, density.R)
    bpow = nodes**kprime
    total = 0.0
    for w, profile in zip(density.directions, density.profiles):
        total += float(harmonic_eval(k, j, density.d, w)) * float(weights @ (bpow * profile(nodes)))
    return total
