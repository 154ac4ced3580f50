"""Seeded random instances for property sweeps."""

from __future__ import annotations

import numpy as np

from .quantum import PureState


def instance_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent stream for ``(seed, *key)``, e.g. key = (dim, trial index)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *key])))


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    """Gaussian Hermitian matrix (GUE up to normalization)."""
    X = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * 0.5 * (X + X.conj().T)


def random_state(rng: np.random.Generator, dim: int) -> PureState:
    """Normalized complex Gaussian vector (Haar-distributed pure state)."""
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return PureState(v / np.linalg.norm(v))


def random_real_function(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    return scale * rng.normal(size=dim)
