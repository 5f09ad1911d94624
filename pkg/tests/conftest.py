"""Shared fixtures: bundled example spectra and random cosine sums."""

from __future__ import annotations

import numpy as np
import pytest

import radonlab as rl

EPS = 0.01


@pytest.fixture
def cos_measure():
    """f(x) = cos(x) in d=1."""
    return rl.from_cosine_sum(1, [(1.0, [1.0])])


@pytest.fixture
def near_cancel_terms():
    """The bundled nearly-cancelling pair cos(x) - cos(1.01 x)."""
    return [(1.0, np.array([1.0])), (-1.0, np.array([1.0 + EPS]))]


@pytest.fixture
def near_cancel_measure(near_cancel_terms):
    return rl.from_cosine_sum(1, near_cancel_terms)


def near_cancel_fpp(b):
    """Second derivative of cos(x) - cos(1.01 x)."""
    b = np.asarray(b, dtype=float)
    return -np.cos(b) + (1.0 + EPS) ** 2 * np.cos((1.0 + EPS) * b)


def random_cosine_terms(rng, d, n_terms=3, freq_range=(0.5, 5.0), amp_range=(-2.0, 2.0)):
    """Random cosine sum with frequencies bounded away from zero."""
    terms = []
    for _ in range(n_terms):
        direction = rng.normal(size=d)
        direction /= np.linalg.norm(direction)
        xi = direction * rng.uniform(*freq_range)
        terms.append((float(rng.uniform(*amp_range)), xi))
    return terms
