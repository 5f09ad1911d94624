"""Finite-width ReLU networks sampled from a Radon density.

Sampling (convention ``thm2``): neurons (w_i, b_i) are drawn i.i.d. from the
normalized absolute density |g|/norm -- directions with probability
proportional to their mass, biases by inverse-CDF on a piecewise-linear
table -- and the coefficient a_i = sign(g_w(b_i)) is the positive/negative
part indicator of the signed density.  With outer scale kappa equal to the
density norm, the expectation of the sampled network is exactly the ramp
pairing, and the sup error over the ball of radius R decays like
R * norm / sqrt(n).

The ``prop2`` convention additionally folds the negative-bias mass into the
affine part and pushes neurons through (w, b) -> (w/|w|_1, b/|w|_1), giving
coefficients |a_i| <= 1, l1-unit directions, biases in [0, 1], and outer
scale at most sqrt(d) times the norm (requires R <= 1).
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMeasureError, DomainError, InvalidInputError
from .quadrature import BallGrid, QuadratureRule, ball_grid
from .radon_measure import (
    AffinePart,
    RadonDensity,
    density_from_spectrum,
    direction_masses,
    fit_affine,
    profile_moment,
    tv_norm,
)
from .spectrum import SpectralMeasure

CDF_KNOTS = 4096
CONVENTIONS = ("thm2", "prop2", "quadrature")


@dataclass(frozen=True)
class TwoLayerNet:
    """Finite-width ReLU network with skip term.

    Evaluation: kappa/n * sum_i a_i (<w_i, x> - b_i)_+ + <v, x> + c.
    ``convention`` tags the weight-constraint profile: ``thm2`` (|a_i| = 1,
    l2-unit directions, biases in (-R, R)), ``prop2`` (|a_i| <= 1, l1-unit
    directions, biases in [0, 1]), or ``quadrature`` (free coefficients,
    kappa/n = 1).
    """

    d: int
    a: np.ndarray
    omegas: np.ndarray
    b: np.ndarray
    kappa: float
    v: np.ndarray
    c: float
    convention: str = "thm2"

    def __post_init__(self):
        if self.convention not in CONVENTIONS:
            raise InvalidInputError(f"unknown convention {self.convention!r}")
        a = np.atleast_1d(np.asarray(self.a, dtype=float))
        omegas = np.asarray(self.omegas, dtype=float).reshape(len(a), self.d)
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        v = np.atleast_1d(np.asarray(self.v, dtype=float))
        if len(b) != len(a):
            raise InvalidInputError("coefficient and bias counts differ")
        for arr in (a, omegas, b, v):
            arr.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "v", v)

    @property
    def n(self) -> int:
        return len(self.a)

    def evaluate(self, X):
        """Network value at points of shape (d,) or (N, d)."""
        pts = np.asarray(X, dtype=float)
        single = pts.ndim <= 1
        pts = np.atleast_2d(pts if pts.ndim else pts.reshape(1))
        if pts.shape[1] != self.d:
            raise InvalidInputError(f"points of shape {pts.shape} do not match d={self.d}")
        out = pts @ self.v + self.c
        if self.n:
            ramp = np.maximum(pts @ self.omegas.T - self.b, 0.0)
            out = out + (self.kappa / self.n) * (ramp @ self.a)
        return float(out[0]) if single else out

    def check_convention(self, R: float | None = None, norm: float | None = None, slack: float = 1e-10) -> None:
        """Assert the weight constraints of the declared convention."""
        if self.n == 0:
            return
        if self.convention == "thm2":
            if not np.all(np.abs(self.a) == 1.0):
                raise InvalidInputError("thm2 coefficients must be exactly +-1")
            if np.max(np.abs(np.linalg.norm(self.omegas, axis=1) - 1.0)) > 1e-12:
                raise InvalidInputError("thm2 directions must be l2-unit")
            if R is not None and not np.all((self.b > -R) & (self.b < R)):
                raise InvalidInputError("thm2 biases must lie in (-R, R)")
            if norm is not None and self.kappa != norm:
                raise InvalidInputError("thm2 outer scale must equal the density norm")
        elif self.convention == "prop2":
            l1 = np.abs(self.omegas).sum(axis=1)
            if not np.all(l1 == 1.0):
                raise InvalidInputError("prop2 directions must be exactly l1-unit")
            if not np.all((self.b >= 0.0) & (self.b <= 1.0)):
                raise InvalidInputError("prop2 biases must lie in [0, 1]")
            if not np.all(np.abs(self.a) <= 1.0):
                raise InvalidInputError("prop2 coefficients must satisfy |a| <= 1")
            if norm is not None and self.kappa > math.sqrt(self.d) * norm + slack:
                raise InvalidInputError("prop2 outer scale exceeds sqrt(d) * norm")

    def with_added(self, other: "TwoLayerNet", scale: float = 1.0) -> "TwoLayerNet":
        """Concatenate another network, folding outer scales into coefficients.

        The result uses the ``quadrature`` convention (kappa/n = 1) so that
        heterogeneous outer scales combine exactly.
        """
        if other.d != self.d:
            raise InvalidInputError("networks have different input dimensions")
        a_self = self.a * (self.kappa / self.n) if self.n else np.zeros(0)
        a_other = other.a * (scale * other.kappa / other.n) if other.n else np.zeros(0)
        a = np.concatenate([a_self, a_other])
        omegas = np.vstack([self.omegas, other.omegas]) if len(a) else np.zeros((0, self.d))
        b = np.concatenate([self.b, other.b])
        return TwoLayerNet(
            d=self.d,
            a=a,
            omegas=omegas,
            b=b,
            kappa=float(len(a)),
            v=self.v + scale * other.v,
            c=self.c + scale * other.c,
            convention="quadrature",
        )


def _bias_tables(density: RadonDensity, lo: float, hi: float) -> tuple[np.ndarray, list[np.ndarray]]:
    """Piecewise-linear inverse-CDF tables of |g_w| on (lo, hi), per direction."""
    grid = np.linspace(lo, hi, CDF_KNOTS + 2)[1:-1]
    cdfs = []
    for profile in density.profiles:
        pdf = np.abs(profile(grid))
        cdf = np.concatenate([[0.0], np.cumsum(0.5 * (pdf[1:] + pdf[:-1]) * np.diff(grid))])
        total = cdf[-1]
        cdfs.append(cdf / total if total > 0 else np.linspace(0.0, 1.0, len(grid)))
    return grid, cdfs


def sample_network(
    density: RadonDensity,
    norm: float,
    affine: AffinePart,
    n: int,
    seed,
    rule: QuadratureRule | None = None,
) -> TwoLayerNet:
    """Importance-sample an n-neuron network from |density|/norm (convention thm2).

    Deterministic for a fixed seed: one direction draw, one uniform draw for
    the bias inverse-CDF, signs read off the signed profile.
    """
    if n < 1:
        raise InvalidInputError("need at least one neuron")
    masses = direction_masses(density, rule)
    total = float(masses.sum()) if len(masses) else 0.0
    if total <= 0 or norm <= 0:
        raise DegenerateMeasureError("cannot sample from a zero-mass density")
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(masses), size=n, p=masses / total)
    u = rng.random(n)
    grid, cdfs = _bias_tables(density, -density.R, density.R)
    b = np.empty(n)
    a = np.empty(n)
    for i in range(n):
        b[i] = np.interp(u[i], cdfs[idx[i]], grid)
        g = float(density.profiles[idx[i]](b[i]))
        a[i] = 1.0 if g >= 0 else -1.0
    return TwoLayerNet(
        d=density.d,
        a=a,
        omegas=density.directions[idx],
        b=b,
        kappa=float(norm),
        v=affine.v,
        c=affine.c,
        convention="thm2",
    )


def _exact_l1_unit(w: np.ndarray) -> np.ndarray:
    """Rescale w to unit l1 norm, exactly in floating point.

    The largest-magnitude coordinate is rewritten as the complement of the
    others so that the absolute values sum to 1.0 under sequential float
    addition (guaranteed for d <= 8, where numpy sums sequentially).
    """
    s = float(np.abs(w).sum())
    out = w / s
    k = int(np.argmax(np.abs(out)))
    rest = float(np.sum(np.abs(np.delete(out, k))))
    out[k] = math.copysign(max(1.0 - rest, 0.0), out[k] if out[k] != 0 else 1.0)
    return out


def l1_normalized_network(
    density: RadonDensity,
    affine: AffinePart,
    n: int,
    seed,
    rule: QuadratureRule | None = None,
) -> TwoLayerNet:
    """Sample an l1-normalized network (convention prop2) on a ball with R <= 1.

    Negative-bias mass folds into the affine part through the reflection
    identity (b - u)_+ = (u - b)_+ - u + b, doubling the positive-bias
    density; neurons are then pushed through (w, b) -> (w/|w|_1, b/|w|_1)
    with the l1 weight absorbed into the outer scale kappa.
    """
    if density.R > 1.0:
        raise DomainError("l1-normalized networks require the ball radius R <= 1")
    if n < 1:
        raise InvalidInputError("need at least one neuron")
    half_masses = direction_masses(density, rule, lo=0.0, hi=density.R)
    l1 = np.abs(density.directions).sum(axis=1)
    weighted = 2.0 * half_masses * l1
    kappa = float(weighted.sum())
    if kappa <= 0:
        raise DegenerateMeasureError("cannot sample from a zero-mass density")
    # affine corrections from folding b < 0 onto b > 0
    v = affine.v.copy()
    c = affine.c
    for i, w in enumerate(density.directions):
        m0 = profile_moment(density, i, 0, 0.0, density.R, rule)
        m1 = profile_moment(density, i, 1, 0.0, density.R, rule)
        v = v - w * m0
        c = c + m1
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(weighted), size=n, p=weighted / kappa)
    u = rng.random(n)
    grid, cdfs = _bias_tables(density, 0.0, density.R)
    a = np.empty(n)
    b = np.empty(n)
    omegas = np.empty((n, density.d))
    for i in range(n):
        raw_b = float(np.interp(u[i], cdfs[idx[i]], grid))
        g = float(density.profiles[idx[i]](raw_b))
        a[i] = 1.0 if g >= 0 else -1.0
        w = density.directions[idx[i]]
        s = float(np.abs(w).sum())
        omegas[i] = _exact_l1_unit(w.copy())
        b[i] = min(raw_b / s, 1.0)
    net = TwoLayerNet(
        d=density.d,
        a=a,
        omegas=omegas,
        b=b,
        kappa=kappa,
        v=v,
        c=float(c),
        convention="prop2",
    )
    net.check_convention()
    return net


def sup_error(net: TwoLayerNet, mu: SpectralMeasure, grid: BallGrid) -> float:
    """Largest deviation between the network and the represented function."""
    if net.d != mu.d:
        raise InvalidInputError("network and measure dimensions differ")
    return float(np.max(np.abs(net.evaluate(grid.points) - mu.evaluate(grid.points))))


@dataclass(frozen=True)
class ApproxReport:
    """Sup-error statistics of seeded sampling trials at one width n."""

    n: int
    trials: int
    seed: int
    bound: float
    errors: tuple[float, ...]
    grid_size: int

    def __post_init__(self):
        if self.trials != len(self.errors):
            raise InvalidInputError("trial count does not match error list")
        if min(self.errors) > sum(self.errors) / len(self.errors) + 1e-15:
            raise InvalidInputError("min error cannot exceed the mean")

    @property
    def mean_error(self) -> float:
        return float(np.mean(self.errors))

    @property
    def min_error(self) -> float:
        return float(min(self.errors))

    @property
    def max_error(self) -> float:
        return float(max(self.errors))


def _max_workers() -> int:
    raw = os.environ.get("RADONLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def error_decay_experiment(
    mu: SpectralMeasure,
    R: float,
    n_list,
    trials: int,
    seed: int,
    grid_size: int = 500,
    rule: QuadratureRule | None = None,
    fit_grid: BallGrid | None = None,
    convention: str = "thm2",
) -> list[ApproxReport]:
    """Sample `trials` networks at each width and record sup errors on a fixed grid.

    Each (width, trial) pair derives its own RNG stream from
    (seed, width index, trial index), so results are identical whatever the
    schedule; RADONLAB_THREADS > 1 runs trials concurrently.
    """
    n_list = [int(n) for n in n_list]
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise InvalidInputError("widths must be strictly increasing")
    density = density_from_spectrum(mu, R)
    norm = tv_norm(density, rule)
    grid = ball_grid(mu.d, R, grid_size, mode="low-discrepancy")
    fit_grid = fit_grid or ball_grid(mu.d, R, max(200, mu.d + 2), mode="low-discrepancy")
    affine = fit_affine(mu, density, fit_grid, rule)

    def one_trial(args):
        ni, n, t = args
        stream = [seed, ni, t]
        if convention == "prop2":
            net = l1_normalized_network(density, affine, n, stream, rule)
        else:
            net = sample_network(density, norm, affine, n, stream, rule)
        return sup_error(net, mu, grid)

    jobs = [(ni, n, t) for ni, n in enumerate(n_list) for t in range(trials)]
    workers = _max_workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(one_trial, jobs))
    else:
        flat = [one_trial(j) for j in jobs]
    reports = []
    for ni, n in enumerate(n_list):
        errs = tuple(flat[ni * trials : (ni + 1) * trials])
        reports.append(
            ApproxReport(
                n=n,
                trials=trials,
                seed=seed,
                bound=R * norm / math.sqrt(n),
                errors=errs,
                grid_size=len(grid),
            )
        )
    return reports


def decay_slope(reports: list[ApproxReport]) -> float:
    """Log-log regression slope of mean sup error against width."""
    x = np.log([r.n for r in reports])
    y = np.log([r.mean_error for r in reports])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def save_network(path, net: TwoLayerNet) -> None:
    """Write the canonical network JSON schema."""
    payload = {
        "d": net.d,
        "convention": net.convention,
        "kappa": net.kappa,
        "neurons": [
            {"a": float(a), "omega": [float(x) for x in w], "b": float(b)}
            for a, w, b in zip(net.a, net.omegas, net.b)
        ],
        "v": [float(x) for x in net.v],
        "c": float(net.c),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_network(path) -> TwoLayerNet:
    with open(path) as fh:
        payload = json.load(fh)
    try:
        neurons = payload["neurons"]
        d = int(payload["d"])
        return TwoLayerNet(
            d=d,
            a=np.array([x["a"] for x in neurons], dtype=float),
            omegas=np.array([x["omega"] for x in neurons], dtype=float).reshape(len(neurons), d),
            b=np.array([x["b"] for x in neurons], dtype=float),
            kappa=float(payload["kappa"]),
            v=np.asarray(payload["v"], dtype=float),
            c=float(payload["c"]),
            convention=str(payload["convention"]),
        )
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"malformed network file: {exc}") from exc


def write_decay_csv(path, reports: list[ApproxReport]) -> None:
    """Plot-ready decay curve: n, bound, mean_err, min_err, max_err."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "bound", "mean_err", "min_err", "max_err"])
        for r in reports:
            writer.writerow([r.n, repr(r.bound), repr(r.mean_error), repr(r.min_error), repr(r.max_error)])
