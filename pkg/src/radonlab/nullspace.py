"""Harmonic-times-monomial densities that represent the zero function on a ball.

A density h(w, b) = coeff * Y_{k,j}(w) * b^{k'} with matching parity and
k' < k - 2 pairs to zero against every ramp (<w, x> - b)_+ for x inside the
ball: the bias integral of the ramp against b^{k'} is a polynomial of
degree k' + 2 < k in <w, x>, hence orthogonal to the degree-k harmonic.
At the threshold k' = k - 2 the degree-k term survives and the pairing is
proportional to |x|^k Y_{k,j}(x/|x|), the non-null witness.  Discretizing a
null density on a product quadrature yields finite ReLU networks with
substantial coefficient mass and near-zero function values: displacement
directions of near-constant loss.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidInputError, PreconditionError
from .harmonics import harmonic_dim, harmonic_eval, sphere_surface, weighted_profile_integral
from .quadrature import BallGrid, QuadratureRule, gauss_legendre, sphere_rule
from .radon_measure import DirectionProfile, RadonDensity
from .sparsifier import TwoLayerNet


@dataclass(frozen=True)
class HarmonicNullTerm:
    """One density coeff * Y_{k,j} (x) b^{k'} on S^{d-1} x (-R, R)."""

    k: int
    j: int
    kprime: int
    coeff: float
    d: int
    R: float

    def __post_init__(self):
        if self.kprime < 0:
            raise InvalidInputError("monomial degree must be nonnegative")
        if (self.k - self.kprime) % 2 != 0:
            raise InvalidInputError("k and k' must share parity")
        n = harmonic_dim(self.k, self.d)
        if not 1 <= self.j <= n:
            raise InvalidInputError(f"index j={self.j} outside 1..{n}")
        if self.R <= 0:
            raise InvalidInputError("ball radius must be positive")

    @property
    def in_set_a(self) -> bool:
        """Null membership: strictly below the k-2 threshold."""
        return self.kprime < self.k - 2

    @property
    def in_set_b(self) -> bool:
        return self.kprime < self.k

    def density(self, omega, b):
        """Pointwise density value h(omega, b)."""
        y = np.asarray(harmonic_eval(self.k, self.j, self.d, omega), dtype=float)
        return self.coeff * y * np.asarray(b, dtype=float) ** self.kprime


@dataclass(frozen=True)
class NullVerificationReport:
    term: HarmonicNullTerm
    points: int
    max_ramp_integral: float
    tolerance: float

    @property
    def verdict(self) -> bool:
        return self.max_ramp_integral <= self.tolerance


@dataclass(frozen=True)
class ModeConnectReport:
    """Functional and parameter-space effect of adding a scaled null network."""

    scale: float
    added_neurons: int
    functional_change: float
    displacement: float
    coefficient_mass: float
    grid_size: int


def ramp_moment_closed_form(c: float, kprime: int, R: float) -> float:
    """Closed-form bias integral of the ramp against b^{k'} over (-R, R).

    For |c| < R:
        integral (c - b)_+ b^{k'} db
      = (c^{k'+2} - (-R)^{k'+2}) / ((k'+1)(k'+2)) - (-R)^{k'+1} (c+R) / (k'+1),
    the degree-(k'+2) polynomial obtained by integrating the monomial twice.
    """
    if kprime < 0:
        raise InvalidInputError("monomial degree must be nonnegative")
    if abs(c) >= R:
        raise DomainError(f"kink position |c| = {abs(c)} must lie inside (-R, R)")
    k1 = kprime + 1
    k2 = kprime + 2
    return (c**k2 - (-R) ** k2) / (k1 * k2) - (-R) ** k1 * (c + R) / k1


def verify_null(term: HarmonicNullTerm, xs: BallGrid, rule: QuadratureRule, tolerance: float = 1e-8) -> NullVerificationReport:
    """Check that the term pairs to ~0 against every ramp centered in the grid.

    The bias integral uses the closed form, so the only numerical error is
    the sphere rule's; pass a rule exact to degree >= 2k.
    """
    if not term.in_set_a:
        raise PreconditionError(
            "term is outside the null set (needs k' < k - 2); use witness_nonzero "
            "for the threshold case k' = k - 2"
        )
    if xs.d != term.d:
        raise InvalidInputError("grid and term dimensions differ")
    if xs.R > term.R:
        raise InvalidInputError("grid must lie inside the term's ball")
    nodes = rule.nodes
    weights = rule.weights
    y = np.asarray(harmonic_eval(term.k, term.j, term.d, nodes), dtype=float)
    worst = 0.0
    for x in xs.points:
        u = nodes @ x
        q = np.array([ramp_moment_closed_form(float(ui), term.kprime, term.R) for ui in u])
        val = term.coeff * float(weights @ (y * q))
        worst = max(worst, abs(val))
    return NullVerificationReport(term=term, points=len(xs), max_ramp_integral=worst, tolerance=tolerance)


def witness_nonzero(k: int, j: int, d: int, R: float, x) -> float:
    """Ramp pairing of Y_{k,j} (x) b^{k-2}: the term that is NOT null.

    Equals |S^{d-2}|/(k(k-1)) * |x|^k * Y_{k,j}(x/|x|) * m_k, where m_k is
    the weighted moment of t^k against the degree-k Legendre polynomial in
    dimension d (nonzero).  Vanishes only on the zero set of the harmonic.
    """
    if k < 2:
        raise InvalidInputError("witness needs degree k >= 2")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    r = float(np.linalg.norm(x))
    if r >= R:
        raise DomainError("witness point must lie inside the open ball")
    if r == 0.0:
        warnings.warn("witness at x = 0 is degenerate (harmonic direction undefined)")
        return 0.0
    moment = weighted_profile_integral(lambda t: t**k, k, d, m=max(64, 2 * k))
    y = float(harmonic_eval(k, j, d, x / r))
    return sphere_surface(d - 1) / (k * (k - 1)) * r**k * y * moment


def null_term_density(term: HarmonicNullTerm, m: int | None = None) -> RadonDensity:
    """Interpret the term as a RadonDensity on the direction atoms of a sphere rule.

    The continuous sphere marginal is discretized on an antipodally symmetric
    rule; quadrature weights fold into polynomial bias profiles.
    """
    m = m or (64 if term.d == 2 else 16)
    rule = sphere_rule(term.d, m)
    y = np.asarray(harmonic_eval(term.k, term.j, term.d, rule.nodes), dtype=float)
    profiles = []
    for yi, wi in zip(y, rule.weights):
        coefs = np.zeros(term.kprime + 1)
        coefs[term.kprime] = term.coeff * yi * wi
        profiles.append(DirectionProfile(np.zeros(0), np.zeros(0, dtype=complex), coefs))
    return RadonDensity(d=term.d, R=term.R, directions=rule.nodes, profiles=tuple(profiles))


def _factor_neurons(n: int, d: int) -> tuple[int, int]:
    """Split a neuron budget into (sphere nodes, bias nodes).

    Bias quadrature fights the ramp kink, so it gets the square-root share;
    the sphere factor is rounded up to keep the harmonic pairing exact.
    """
    m_b = max(4, int(round(math.sqrt(n))))
    if d == 2:
        m_s = max(8, n // m_b)
        return m_s, m_b
    # d == 3: the product sphere rule uses 2 m^2 nodes
    m = max(4, int(round(math.sqrt(n / (2 * m_b)))))
    return m, m_b


def discretize_null(term: HarmonicNullTerm, n: int, R: float | None = None) -> TwoLayerNet:
    """Product-quadrature ReLU network carrying the term's density.

    Neurons sit at (direction node, bias node) with coefficients
    h(w_i, b_j) * weight_i * weight_j; the quadrature convention makes the
    network value the quadrature approximation of the (null) ramp pairing.
    """
    R = term.R if R is None else R
    if n < 16:
        raise InvalidInputError("need at least 16 neurons to factor the product rule")
    m_s, m_b = _factor_neurons(n, term.d)
    srule = sphere_rule(term.d, m_s)
    brule = gauss_legendre(m_b, -R, R)
    y = np.asarray(harmonic_eval(term.k, term.j, term.d, srule.nodes), dtype=float)
    h = term.coeff * np.multiply.outer(y * srule.weights, brule.nodes**term.kprime * brule.weights)
    n_dir = len(srule.nodes)
    omegas = np.repeat(srule.nodes, m_b, axis=0)
    biases = np.tile(brule.nodes, n_dir)
    a = h.ravel()
    return TwoLayerNet(
        d=term.d,
        a=a,
        omegas=omegas,
        b=biases,
        kappa=float(len(a)),
        v=np.zeros(term.d),
        c=0.0,
        convention="quadrature",
    )


def mode_connect_perturb(
    base: TwoLayerNet,
    term: HarmonicNullTerm,
    n: int,
    s: float,
    grid: BallGrid,
) -> ModeConnectReport:
    """Add s times a discretized null network and measure what moved.

    Reports the sup change of the represented function on the grid next to
    the parameter-space displacement sum |s a_i|: large displacement with
    near-zero functional change is the flat direction being exhibited.
    """
    if base.d != term.d:
        raise InvalidInputError("network and term dimensions differ")
    if grid.R > term.R:
        raise InvalidInputError("grid must lie inside the term's ball")
    null_net = discretize_null(term, n)
    perturbed = base.with_added(null_net, scale=s)
    assert perturbed.n == base.n + null_net.n
    # the perturbation is additive, so the functional change is exactly the
    # scaled added component; evaluating it alone keeps s = 0 exactly zero
    change = float(abs(s) * np.max(np.abs(null_net.evaluate(grid.points))))
    displacement = float(np.abs(s * null_net.a).sum())
    return ModeConnectReport(
        scale=float(s),
        added_neurons=null_net.n,
        functional_change=change,
        displacement=displacement,
        coefficient_mass=float(np.abs(null_net.a).sum()),
        grid_size=len(grid),
    )


def save_null_term(path, term: HarmonicNullTerm) -> None:
    """Write the CLI-facing term JSON: {"k","j","kprime","coeff","d","R"}."""
    payload = {
        "k": term.k,
        "j": term.j,
        "kprime": term.kprime,
        "coeff": float(term.coeff),
        "d": term.d,
        "R": float(term.R),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_null_term(path) -> HarmonicNullTerm:
    with open(path) as fh:
        payload = json.load(fh)
    try:
        return HarmonicNullTerm(
            k=int(payload["k"]),
            j=int(payload["j"]),
            kprime=int(payload["kprime"]),
            coeff=float(payload["coeff"]),
            d=int(payload["d"]),
            R=float(payload["R"]),
        )
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"malformed null-term file: {exc}") from exc
