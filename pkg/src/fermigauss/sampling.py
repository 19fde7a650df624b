"""Seeded random inputs for verification runs.

All draws go through :func:`numpy.random.default_rng` (the 64-bit PCG64
generator), so a fixed seed reproduces every result bit for bit.
Gaussian parameters are drawn with entries uniform in the complex unit
square scaled by 0.4, the anomalous blocks antisymmetrised; draws whose
covariance is badly conditioned are rejected and redrawn, keeping the
whole sequence deterministic.
"""

from __future__ import annotations

import numpy as np

from .gaussian import GaussianParams, covariance_from_params

__all__ = ["random_gaussian_params", "random_density_matrix"]

DEFAULT_SCALE = 0.4
_CONDITION_CAP = 1e8


def _complex_square(rng, shape, scale):
    return scale * (rng.random(shape) + 1j * rng.random(shape))


def random_gaussian_params(
    modes: int,
    rng: np.random.Generator | int,
    kind: str = "generic",
    omega: complex = 1.0,
    scale: float = DEFAULT_SCALE,
) -> GaussianParams:
    """Random Gaussian parameters with a well-conditioned covariance.

    ``kind`` is "generic" (non-Hermitian), "thermal" (m = mplus = 0) or
    "physical" (Hermitian n with spectrum inside [0, 1] and
    ``mplus = m^dagger``).
    """
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    for _ in range(64):
        n = _complex_square(rng, (modes, modes), scale)
        if kind == "thermal":
            m = mplus = np.zeros((modes, modes))
        else:
            a = _complex_square(rng, (modes, modes), scale)
            m = (a - a.T) / 2.0
            a = _complex_square(rng, (modes, modes), scale)
            mplus = (a - a.T) / 2.0
        if kind == "physical":
            herm = (n + n.conj().T) / 2.0
            eigs, vecs = np.linalg.eigh(herm)
            squashed = 0.5 + 0.8 * (eigs - eigs.mean()) / max(np.ptp(eigs), 1.0)
            n = vecs @ np.diag(squashed) @ vecs.conj().T
            mplus = m.conj().T
        params = GaussianParams(omega, n, m, mplus)
        if np.linalg.cond(covariance_from_params(params)) < _CONDITION_CAP:
            return params
    raise RuntimeError("failed to draw a well-conditioned covariance")


def random_density_matrix(
    modes: int,
    rng: np.random.Generator | int,
    components: int = 4,
) -> np.ndarray:
    """Random superselection-respecting density matrix.

    A convex mixture of random pure states, each supported on a single
    fermion-parity sector so no odd-difference coherences appear.
    """
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    dim = 1 << modes
    parity = np.bitwise_count(np.arange(dim)) % 2
    weights = rng.random(components)
    weights /= weights.sum()
    rho = np.zeros((dim, dim), dtype=complex)
    for w in weights:
        sector = parity == rng.integers(2)
        psi = np.zeros(dim, dtype=complex)
        psi[sector] = rng.normal(size=sector.sum()) + 1j * rng.normal(size=sector.sum())
        psi /= np.linalg.norm(psi)
        rho += w * np.outer(psi, psi.conj())
    return rho
