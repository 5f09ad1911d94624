"""Radon densities: profiles, TV norms, Fourier bound, reconstruction, moments."""

from __future__ import annotations

import math

import numpy as np
import pytest

import radonlab as rl
from radonlab.errors import DomainError, InvalidInputError, SingularFitError, UnsupportedDimensionError
from radonlab.radon_measure import DirectionProfile, RadonDensity, profile_moment, ramp_integral_grid

from conftest import EPS, near_cancel_fpp, random_cosine_terms


@pytest.fixture
def cos_density(cos_measure):
    return rl.density_from_spectrum(cos_measure, math.pi / 2)


def test_cos_profile_is_half_negative_cosine(cos_density):
    # symbolic oracle: -1/4 (e^{-ib} + e^{ib}) = -cos(b)/2 on each direction
    b = np.linspace(-1.5, 1.5, 31)
    for profile in cos_density.profiles:
        assert np.allclose(profile(b), -0.5 * np.cos(b), atol=1e-14)


def test_near_cancel_profile_is_half_second_derivative(near_cancel_measure):
    density = rl.density_from_spectrum(near_cancel_measure, 1.0)
    b = np.linspace(-1, 1, 41)
    for profile in density.profiles:
        assert np.allclose(profile(b), 0.5 * near_cancel_fpp(b), atol=1e-13)


def test_empty_spectrum_gives_zero_norm():
    mu = rl.SpectralMeasure(d=1, atoms=())
    density = rl.density_from_spectrum(mu, 1.0)
    assert rl.tv_norm(density) == 0.0


def test_tv_norm_cosine_closed_form(cos_density):
    # analytic oracle: sum over S^0 of int |cos b| / 2 over (-pi/2, pi/2) = 2
    assert rl.tv_norm(cos_density) == pytest.approx(2.0, abs=1e-12)


def test_tv_norm_matches_second_derivative_oracle(near_cancel_measure):
    density = rl.density_from_spectrum(near_cancel_measure, 1.0)
    norm = rl.tv_norm(density)
    oracle = rl.second_derivative_norm_1d(near_cancel_fpp, 1.0)
    assert norm == pytest.approx(oracle, abs=1e-8)
    # f'' is positive on (-1, 1), so the oracle integral is f'(1) - f'(-1)
    fp = lambda x: -math.sin(x) + (1 + EPS) * math.sin((1 + EPS) * x)
    assert oracle == pytest.approx(fp(1.0) - fp(-1.0), abs=1e-12)


def test_second_derivative_oracle_trivia():
    assert rl.second_derivative_norm_1d(lambda b: -np.cos(b), math.pi / 2) == pytest.approx(2.0, abs=1e-12)
    assert rl.second_derivative_norm_1d(lambda b: np.zeros_like(b), 1.0) == 0.0


def test_d1_norm_identity_on_random_cosine_sums():
    rng = np.random.default_rng(7)
    for _ in range(10):
        terms = random_cosine_terms(rng, 1, n_terms=int(rng.integers(1, 5)))
        mu = rl.from_cosine_sum(1, terms)
        R = float(rng.uniform(0.5, 2.0))
        norm = rl.tv_norm(rl.density_from_spectrum(mu, R))

        def fpp(b, terms=terms):
            b = np.asarray(b, dtype=float)
            return sum(-a * xi[0] ** 2 * np.cos(xi[0] * b) for a, xi in terms)

        assert norm == pytest.approx(rl.second_derivative_norm_1d(fpp, R), abs=1e-8)


def test_tv_norm_monotone_in_radius(near_cancel_measure):
    radii = [0.5, 1.0, 1.5, 2.0, 3.0]
    norms = [rl.tv_norm(rl.density_from_spectrum(near_cancel_measure, R)) for R in radii]
    assert all(a <= b + 1e-12 for a, b in zip(norms, norms[1:]))


def test_fourier_bound_example_values(near_cancel_measure, cos_measure):
    norm, bound, ok = rl.check_fourier_bound(near_cancel_measure, 1.0)
    assert ok and norm <= bound
    assert bound == pytest.approx(4.0402, abs=1e-12)
    assert norm == pytest.approx(0.0276583565, abs=1e-8)
    norm, bound, ok = rl.check_fourier_bound(cos_measure, math.pi / 2)
    assert ok
    assert norm == pytest.approx(2.0, abs=1e-10)
    assert bound == pytest.approx(math.pi, abs=1e-12)
    norm, bound, ok = rl.check_fourier_bound(rl.SpectralMeasure(d=1, atoms=()), 1.0)
    assert ok and norm == 0.0 and bound == 0.0


def test_fourier_bound_on_random_spectra():
    rng = np.random.default_rng(11)
    for d in (1, 2, 3):
        for R in (0.5, 1.0, 2.0):
            terms = random_cosine_terms(rng, d, n_terms=3)
            mu = rl.from_cosine_sum(d, terms)
            norm, bound, ok = rl.check_fourier_bound(mu, R)
            assert ok, (d, R, norm, bound)
            assert bound == pytest.approx(2 * R * rl.fourier_constant_l2(terms), rel=1e-12)


def test_reconstruct_affine_only():
    density = RadonDensity(d=2, R=1.0, directions=np.zeros((0, 2)), profiles=())
    affine = rl.AffinePart(v=[2.0, -1.0], c=0.5)
    assert rl.reconstruct(density, affine, [0.3, 0.4]) == pytest.approx(2 * 0.3 - 0.4 + 0.5, abs=1e-15)


def test_reconstruct_cosine(cos_measure, cos_density):
    grid = rl.ball_grid(1, math.pi / 2, 64, mode="lattice")
    affine = rl.fit_affine(cos_measure, cos_density, grid)
    assert affine.max_affine_residual < 1e-8
    assert rl.reconstruct(cos_density, affine, 0.3) == pytest.approx(math.cos(0.3), abs=1e-8)


def test_reconstruct_near_cancel_on_grid(near_cancel_measure):
    density = rl.density_from_spectrum(near_cancel_measure, 1.0)
    grid = rl.ball_grid(1, 1.0, 50, mode="lattice")
    affine = rl.fit_affine(near_cancel_measure, density, grid)
    values = rl.reconstruct_grid(density, affine, grid.points)
    assert np.max(np.abs(values - near_cancel_measure.evaluate(grid.points))) <= 1e-7


def test_reconstruct_outside_ball_rejected(cos_density):
    affine = rl.AffinePart.zero(1)
    with pytest.raises(DomainError):
        rl.reconstruct(cos_density, affine, math.pi / 2 + 0.1)


def test_fit_affine_zero_spectrum():
    mu = rl.SpectralMeasure(d=1, atoms=())
    density = rl.density_from_spectrum(mu, 1.0)
    grid = rl.ball_grid(1, 1.0, 20, mode="lattice")
    affine = rl.fit_affine(mu, density, grid)
    assert np.allclose(affine.v, 0.0, atol=1e-14)
    assert affine.c == pytest.approx(0.0, abs=1e-14)
    assert affine.max_affine_residual <= 1e-14


def test_fit_affine_negative_control_detects_non_null_corruption(cos_measure, cos_density):
    # adding a density that does NOT represent zero must break the affine fit
    corrupt = RadonDensity(
        d=1,
        R=cos_density.R,
        directions=cos_density.directions,
        profiles=tuple(
            p.merged(DirectionProfile(np.array([0.9]), np.array([0.8 + 0j]), np.zeros(0)))
            for p in cos_density.profiles
        ),
    )
    grid = rl.ball_grid(1, math.pi / 2, 64, mode="lattice")
    affine = rl.fit_affine(cos_measure, corrupt, grid)
    assert affine.max_affine_residual > 1e-3


def test_fit_affine_rank_deficient_grid(cos_measure):
    density = rl.density_from_spectrum(cos_measure, 1.0)
    mu2 = rl.from_cosine_sum(2, [(1.0, [1.0, 0.0])])
    density2 = rl.density_from_spectrum(mu2, 1.0)
    # collinear points in d=2: rank-deficient affine design
    pts = np.column_stack([np.linspace(-0.5, 0.5, 10), np.zeros(10)])
    grid = rl.BallGrid(d=2, R=1.0, points=pts, mode="lattice", max_spacing=0.1)
    with pytest.raises(SingularFitError):
        rl.fit_affine(mu2, density2, grid)


def test_thm1_residual_on_random_spectra_d1_d2():
    rng = np.random.default_rng(23)
    for d in (1, 2):
        for _ in range(5):
            terms = random_cosine_terms(rng, d, n_terms=3)
            mu = rl.from_cosine_sum(d, terms)
            R = 1.0
            density = rl.density_from_spectrum(mu, R)
            grid = rl.ball_grid(d, R, 200, mode="low-discrepancy")
            affine = rl.fit_affine(mu, density, grid)
            assert affine.max_affine_residual <= 1e-6


def test_harmonic_moment_parity_zero():
    # profile even in b against an odd monomial integrates to zero
    mu = rl.from_cosine_sum(2, [(1.0, [2.0, 0.0])])
    density = rl.density_from_spectrum(mu, 1.0)
    assert rl.harmonic_moment(density, 3, 1, 1) == pytest.approx(0.0, abs=1e-12)


def test_harmonic_moment_self_pairing_positive():
    term = rl.HarmonicNullTerm(k=4, j=1, kprime=0, coeff=1.0, d=2, R=1.0)
    density = rl.null_term_density(term, m=64)
    # self-pairing oracle: coeff * int Y^2 over the circle (= 1, orthonormal)
    # times int b^0 db over (-R, R) = 2 R
    got = rl.harmonic_moment(density, 4, 1, 0)
    assert got == pytest.approx(2.0, rel=1e-10)
    assert got > 0.5


def test_harmonic_moment_empty_and_errors():
    mu = rl.SpectralMeasure(d=2, atoms=())
    density = rl.density_from_spectrum(mu, 1.0)
    assert rl.harmonic_moment(density, 4, 1, 0) == 0.0
    with pytest.raises(InvalidInputError):
        rl.harmonic_moment(density, 4, 1, 1)  # parity violation
    with pytest.raises(InvalidInputError):
        rl.harmonic_moment(density, 2, 1, 4)  # k' >= k
    mu1 = rl.SpectralMeasure(d=1, atoms=())
    with pytest.raises(UnsupportedDimensionError):
        rl.harmonic_moment(rl.density_from_spectrum(mu1, 1.0), 2, 1, 0)


def test_density_validate_catches_broken_evenness():
    bad = RadonDensity(
        d=1,
        R=1.0,
        directions=np.array([[1.0], [-1.0]]),
        profiles=(
            DirectionProfile(np.array([1.0]), np.array([1.0 + 0j]), np.zeros(0)),
            DirectionProfile(np.array([1.0]), np.array([2.0 + 0j]), np.zeros(0)),
        ),
    )
    with pytest.raises(rl.InvariantViolationError):
        bad.validate()


def test_profile_moment_matches_analytic():
    # int b * (-cos b)/2 over (0, R): odd x even integrand, do it analytically
    mu = rl.from_cosine_sum(1, [(1.0, [1.0])])
    density = rl.density_from_spectrum(mu, 1.0)
    # direction +1 profile is -cos(b)/2; int_0^1 b(-cos b)/2 db
    # = -(cos 1 + 1*sin 1 - 1)/2
    i_plus = [i for i, w in enumerate(density.directions) if w[0] > 0][0]
    expected = -0.5 * (math.cos(1.0) + math.sin(1.0) - 1.0)
    assert profile_moment(density, i_plus, 1, 0.0, 1.0) == pytest.approx(expected, abs=1e-12)


def test_null_density_added_to_density_leaves_reconstruct_unchanged(near_cancel_measure):
    # d=2 spectrum plus a null-term overlay
    rng = np.random.default_rng(3)
    terms = random_cosine_terms(rng, 2, n_terms=2)
    mu = rl.from_cosine_sum(2, terms)
    density = rl.density_from_spectrum(mu, 1.0)
    grid = rl.ball_grid(2, 1.0, 100, mode="low-discrepancy")
    affine = rl.fit_affine(mu, density, grid)
    base_vals = rl.reconstruct_grid(density, affine, grid.points)
    term = rl.HarmonicNullTerm(k=4, j=1, kprime=0, coeff=1.0, d=2, R=1.0)
    merged = density.merged_with(rl.null_term_density(term, m=64))
    merged_vals = rl.reconstruct_grid(merged, affine, grid.points)
    assert np.max(np.abs(merged_vals - base_vals)) <= 1e-6


def test_ramp_integral_closed_form_for_cosine(cos_density):
    # analytic oracle: ramp pairing of the cosine density over both S^0
    # directions equals cos(x) - (R sin R + cos R)
    R = math.pi / 2
    xs = np.linspace(-1.2, 1.2, 9)
    got = ramp_integral_grid(cos_density, xs[:, None])
    expected = np.cos(xs) - (R * math.sin(R) + math.cos(R))
    assert np.allclose(got, expected, atol=1e-12)
