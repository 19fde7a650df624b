"""Normalised fermionic Gaussian operators.

A Gaussian operator is parametrised by ``lambda = (Omega, n, m, mplus)``:
a complex weight, an M x M normal (number) correlation matrix and two
antisymmetric M x M anomalous correlation matrices.  Its covariance

    sigma = [[n.T - I, m], [mplus, I - n]]

characterises it completely; the normalised operator is the unnormalised
exponential divided by its trace ``Pf[antisymmetrize(sigma)^-1]``, so
that ``Tr Lambda = Omega`` (the Pfaffian fixes the sign unambiguously,
no square roots are taken anywhere).

Moments returned by this module are unnormalised traces ``Tr[. Lambda]``,
i.e. ``Omega`` times the expectation value; divide by ``Omega`` for
expectations.

Ordering convention for moments: a trace ``Tr[: X Lambda :]`` places the
creation operators of X to the left of Lambda and the annihilation
operators to its right (with the fermionic permutation sign), matching
the block tables used for the differential identities.  The plain
normally ordered expectations ``<:n_i n_j:>`` etc. are provided
separately (:func:`number_number_moment`, :func:`number_triple_moment`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import fock, linalg
from .errors import (
    BranchAmbiguityError,
    IndexOutOfRangeError,
    ModeCountError,
    NotAntisymmetricError,
    NotGeneralizedAntisymmetricError,
    NotPhysicalError,
    SingularCovarianceError,
)

__all__ = [
    "GaussianParams",
    "two_mode_params",
    "hermitian_conjugate",
    "covariance_from_params",
    "params_from_covariance",
    "mu_from_sigma",
    "normalization_constant",
    "trace",
    "materialize",
    "two_mode_closed_form",
    "first_moments",
    "moment_matrix",
    "mgf",
    "second_moment",
    "third_moment",
    "number_number_moment",
    "number_triple_moment",
    "number_variance",
]

_ATOL = 1e-12


@dataclass(frozen=True)
class GaussianParams:
    """Parameters ``(Omega, n, m, mplus)`` of a normalised Gaussian operator.

    ``m`` and ``mplus`` must be antisymmetric to 1e-12; they default to
    zero (the thermal subset).  Instances are immutable and safe to share.
    """

    omega: complex
    n: np.ndarray
    m: np.ndarray = None
    mplus: np.ndarray = None
    _modes: int = field(init=False, repr=False, default=0)

    def __post_init__(self):
        n = np.atleast_2d(np.asarray(self.n, dtype=complex))
        modes = n.shape[0]
        if n.shape != (modes, modes):
            raise ValueError("n must be a square matrix")
        if not 1 <= modes <= fock.MAX_MODES:
            raise ModeCountError(f"mode count must be in 1..{fock.MAX_MODES}")
        m = self.m if self.m is not None else np.zeros_like(n)
        mplus = self.mplus if self.mplus is not None else np.zeros_like(n)
        m = np.asarray(m, dtype=complex)
        mplus = np.asarray(mplus, dtype=complex)
        for name, a in (("m", m), ("mplus", mplus)):
            if a.shape != (modes, modes):
                raise ValueError(f"{name} must match the shape of n")
            scale = max(np.abs(a).max(), 1.0)
            if np.abs(a + a.T).max() > _ATOL * scale:
                raise NotAntisymmetricError(f"{name} must be antisymmetric")
        for a in (n, m, mplus):
            a.setflags(write=False)
        object.__setattr__(self, "omega", complex(self.omega))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "mplus", mplus)
        object.__setattr__(self, "_modes", modes)

    @property
    def modes(self) -> int:
        return self._modes

    @property
    def is_thermal(self) -> bool:
        return bool(np.abs(self.m).max() == 0 and np.abs(self.mplus).max() == 0)

    def is_physical(self, tol: float = 1e-10) -> bool:
        """Hermitian n with spectrum in [0, 1] and ``mplus == m^dagger``."""
        if np.abs(self.n - self.n.conj().T).max() > tol:
            return False
        if np.abs(self.mplus - self.m.conj().T).max() > tol:
            return False
        eigs = np.linalg.eigvalsh((self.n + self.n.conj().T) / 2)
        return bool(eigs.min() >= -tol and eigs.max() <= 1 + tol)

    @cached_property
    def covariance(self) -> np.ndarray:
        return covariance_from_params(self)


def two_mode_params(omega, n, m_scalar, mplus_scalar) -> GaussianParams:
    """Two-mode parameters from the scalar squeezing convention.

    The scalars are the anomalous expectations ``<b_0 b_1>`` and
    ``<bdag_1 bdag_0>``; in matrix form ``m[0,1] = m_scalar`` and
    ``mplus[0,1] = -mplus_scalar``.
    """
    n = np.asarray(n, dtype=complex)
    if n.shape != (2, 2):
        raise ValueError("two_mode_params needs a 2x2 n")
    m = np.array([[0, m_scalar], [-m_scalar, 0]], dtype=complex)
    mplus = np.array([[0, -mplus_scalar], [mplus_scalar, 0]], dtype=complex)
    return GaussianParams(omega, n, m, mplus)


def hermitian_conjugate(params: GaussianParams) -> GaussianParams:
    """Parameters of the Hermitian conjugate operator."""
    return GaussianParams(
        np.conj(params.omega),
        params.n.conj().T,
        params.mplus.conj().T,
        params.m.conj().T,
    )


def covariance_from_params(params: GaussianParams) -> np.ndarray:
    """Extended covariance ``[[n.T - I, m], [mplus, I - n]]``."""
    eye = np.eye(params.modes)
    return linalg.assemble(params.n.T - eye, params.m, params.mplus, eye - params.n)


def params_from_covariance(sigma, omega=1.0) -> GaussianParams:
    """Recover ``(n, m, mplus)`` from a covariance matrix (exact round trip)."""
    ul, ur, ll, lr = linalg.blocks(sigma)
    modes = ul.shape[0]
    n = np.eye(modes) - lr
    if not linalg.check_generalized_antisymmetry(np.asarray(sigma)):
        raise NotGeneralizedAntisymmetricError("covariance lacks generalized antisymmetry")
    return GaussianParams(omega, n, ur, ll)


def _sigma_inverse(sigma) -> np.ndarray:
    try:
        return linalg.inverse(sigma)
    except linalg.SingularMatrixError as exc:
        raise SingularCovarianceError(str(exc)) from exc


def mu_from_sigma(sigma) -> np.ndarray:
    """Exponent matrix ``mu_bar = sigma^-1 - 2I_bar``, partitioned as
    ``[[mu, xi], [xiplus, -mu.T]]``."""
    sigma = np.asarray(sigma, dtype=complex)
    modes = sigma.shape[0] // 2
    return _sigma_inverse(sigma) - 2.0 * linalg.constant_i(modes)


def normalization_constant(params: GaussianParams) -> complex:
    """Prefactor ``1 / Tr[Lambda^(u)] = 1 / Pf[antisymmetrize(sigma)^-1]``.

    For thermal parameters this equals ``det[I - n]``.
    """
    siginv = _sigma_inverse(params.covariance)
    pf = linalg.pfaffian(linalg.antisymmetrize_dual(siginv))
    if pf == 0:
        raise SingularCovarianceError("vanishing normalisation Pfaffian")
    return 1.0 / pf


def trace(params: GaussianParams) -> complex:
    """Trace of the normalised Gaussian; equals Omega by construction."""
    _sigma_inverse(params.covariance)  # enforce the invertibility contract
    return params.omega


def _materialize_regular(params: GaussianParams) -> np.ndarray:
    siginv = _sigma_inverse(params.covariance)
    mubar = siginv - 2.0 * linalg.constant_i(params.modes)
    mu, xi, xiplus, _ = linalg.blocks(mubar)
    norm = 1.0 / linalg.pfaffian(linalg.antisymmetrize_dual(siginv))
    return params.omega * norm * fock.gaussian_unnormalized_dense(mu, xi, xiplus)


def _materialize_diagonal_thermal(params: GaussianParams) -> np.ndarray:
    occ = np.diag(params.n)
    out = np.ones((1, 1), dtype=complex)
    for nj in occ:
        out = np.kron(out, np.diag([1.0 - nj, nj]))
    return params.omega * out


def two_mode_closed_form(params: GaussianParams) -> np.ndarray:
    """Dense two-mode Gaussian from its number-state projector expansion.

    Polynomial in the parameters, hence valid where the covariance is
    singular (number-state projectors, pure-state Gaussians).
    """
    if params.modes != 2:
        raise ModeCountError("closed form is for M = 2")
    n = params.n
    ms = params.m[0, 1]
    mps = -params.mplus[0, 1]
    det_n = n[0, 0] * n[1, 1] - n[0, 1] * n[1, 0]
    det_one_minus_n = (1 - n[0, 0]) * (1 - n[1, 1]) - n[0, 1] * n[1, 0]
    out = np.zeros((4, 4), dtype=complex)
    i00, i01, i10, i11 = 0, 1, 2, 3
    out[i00, i00] = det_one_minus_n + ms * mps
    out[i10, i10] = n[0, 0] * (1 - n[1, 1]) + n[0, 1] * n[1, 0] - ms * mps
    out[i01, i01] = n[1, 1] * (1 - n[0, 0]) + n[0, 1] * n[1, 0] - ms * mps
    out[i11, i11] = det_n + ms * mps
    out[i10, i01] = n[1, 0]
    out[i01, i10] = n[0, 1]
    out[i11, i00] = -ms
    out[i00, i11] = -mps
    return params.omega * out


def materialize(params: GaussianParams) -> np.ndarray:
    """Dense normalised Gaussian operator on the 2**M Fock space.

    Regular covariances go through the Pfaffian-normalised exponential
    expansion.  Singular covariances are handled where an exact
    polynomial form exists (any M = 1 or 2 Gaussian; thermal Gaussians
    with diagonal n, which factor into single-mode mixtures); otherwise
    :class:`SingularCovarianceError` propagates.
    """
    sigma = params.covariance
    cond = np.linalg.cond(sigma)
    if np.isfinite(cond) and cond <= linalg.MAX_CONDITION:
        return _materialize_regular(params)
    if params.modes == 1:
        n = params.n[0, 0]
        return params.omega * np.diag([1.0 - n, n]).astype(complex)
    if params.modes == 2:
        return two_mode_closed_form(params)
    if params.is_thermal and np.abs(params.n - np.diag(np.diag(params.n))).max() == 0:
        return _materialize_diagonal_thermal(params)
    raise SingularCovarianceError(
        "covariance is singular and no exact polynomial form applies")


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------


def moment_matrix(params: GaussianParams) -> np.ndarray:
    """First-moment matrix ``Tr[: b_bar b_bar^dag Lambda :] = Omega sigma``."""
    return params.omega * params.covariance


def first_moments(params: GaussianParams):
    """Unnormalised first moments ``(Omega n, Omega m, Omega mplus)``.

    Entry (i, j) of the three blocks is ``Tr[bdag_i b_j Lambda]``,
    ``Tr[b_i b_j Lambda]`` and ``Tr[bdag_i bdag_j Lambda]``.
    """
    trace(params)
    w = params.omega
    return w * params.n, w * params.m, w * params.mplus


def mgf(params: GaussianParams, tau) -> complex:
    """Moment generating function ``M(tau) = sqrt(det[I - sigma tau])``.

    ``tau`` must carry the generalized antisymmetry.  Evaluated as the
    Pfaffian ratio ``Pf[(sigma_A)^-1 - tau_A] / Pf[(sigma_A)^-1]`` (the
    interleavings matched to the inverse pattern), which is the branch
    continuous from ``M(0) = 1`` with no square root taken.

    Paired derivatives in the independent tau entries generate the
    normally ordered moments: the first derivative at 0 in direction
    ``(theta, phi)`` equals ``-Omega sigma[phi, theta]``.
    """
    tau = np.asarray(tau, dtype=complex)
    if not linalg.check_generalized_antisymmetry(tau):
        raise NotGeneralizedAntisymmetricError("tau lacks generalized antisymmetry")
    siginv = _sigma_inverse(params.covariance)
    denom = linalg.pfaffian(linalg.antisymmetrize_dual(siginv))
    if denom == 0:
        raise BranchAmbiguityError("normalisation Pfaffian vanishes")
    numer = linalg.pfaffian(linalg.antisymmetrize_dual(siginv - tau))
    return params.omega * numer / denom


def _check_extended_indices(params: GaussianParams, indices) -> None:
    top = 2 * params.modes
    for mu in indices:
        if not 0 <= int(mu) < top:
            raise IndexOutOfRangeError(f"extended index {mu} not in 0..{top - 1}")


def second_moment(params: GaussianParams, indices) -> complex:
    """Second-order moment ``Tr[: b_mu1 bdag_mu2 b_mu3 bdag_mu4 Lambda :]``.

    ``indices`` are four extended indices; the closed form is the Wick
    sum ``s12 s34 - s14 s32 + (sX)13 (Xs)42`` in the covariance.
    """
    m1, m2, m3, m4 = (int(i) for i in indices)
    _check_extended_indices(params, (m1, m2, m3, m4))
    s = params.covariance
    x = linalg.constant_x(params.modes)
    sx = s @ x
    xs = x @ s
    val = s[m1, m2] * s[m3, m4] - s[m1, m4] * s[m3, m2] + sx[m1, m3] * xs[m4, m2]
    return params.omega * complex(val)


def third_moment(params: GaussianParams, indices) -> complex:
    """Third-order moment
    ``Tr[: b_mu1 bdag_mu2 b_mu3 bdag_mu4 b_mu5 bdag_mu6 Lambda :]``.

    Fifteen Wick terms: six pure covariance products plus nine carrying
    one anomalous pair each through ``sigma X`` and ``X sigma``.  The
    three pair transpositions relating this pattern to the dagger-first
    one contribute an overall minus sign relative to the second-order
    case; the signs below are fixed against the Fock oracle for every
    index tuple.
    """
    mu = tuple(int(i) for i in indices)
    if len(mu) != 6:
        raise ValueError("third_moment takes six extended indices")
    _check_extended_indices(params, mu)
    m1, m2, m3, m4, m5, m6 = mu
    s = params.covariance
    x = linalg.constant_x(params.modes)
    sx = s @ x
    xs = x @ s
    val = (
        s[m1, m2] * s[m3, m4] * s[m5, m6]
        + s[m1, m4] * s[m3, m6] * s[m5, m2]
        + s[m1, m6] * s[m3, m2] * s[m5, m4]
        - s[m1, m2] * s[m3, m6] * s[m5, m4]
        - s[m1, m4] * s[m3, m2] * s[m5, m6]
        - s[m1, m6] * s[m3, m4] * s[m5, m2]
        + s[m1, m2] * sx[m3, m5] * xs[m6, m4]
        + s[m3, m4] * sx[m1, m5] * xs[m6, m2]
        + s[m5, m6] * sx[m1, m3] * xs[m4, m2]
        - s[m1, m4] * sx[m3, m5] * xs[m6, m2]
        + s[m1, m6] * sx[m3, m5] * xs[m4, m2]
        - s[m3, m2] * sx[m1, m5] * xs[m6, m4]
        - s[m3, m6] * sx[m1, m5] * xs[m4, m2]
        + s[m5, m2] * sx[m1, m3] * xs[m6, m4]
        - s[m5, m4] * sx[m1, m3] * xs[m6, m2]
    )
    return params.omega * complex(val)


def number_number_moment(params: GaussianParams, i: int, j: int) -> complex:
    """Normally ordered number-number moment ``Tr[:n_i n_j: Lambda]``.

    Equals ``n_ii n_jj - n_ij n_ji - m_ij mplus_ij`` (times Omega).
    """
    modes = params.modes
    if not (0 <= i < modes and 0 <= j < modes):
        raise IndexOutOfRangeError("mode index out of range")
    n, m, mp = params.n, params.m, params.mplus
    val = n[i, i] * n[j, j] - n[i, j] * n[j, i] - m[i, j] * mp[i, j]
    return params.omega * complex(val)


def number_triple_moment(params: GaussianParams, i: int, j: int, k: int) -> complex:
    """Normally ordered triple number moment ``Tr[:n_i n_j n_k: Lambda]``.

    The fifteen-term Wick expansion in the (n, m, mplus) blocks.
    """
    modes = params.modes
    for idx in (i, j, k):
        if not 0 <= idx < modes:
            raise IndexOutOfRangeError("mode index out of range")
    n, m, mp = params.n, params.m, params.mplus
    val = (
        n[i, i] * n[j, j] * n[k, k]
        - n[i, i] * (n[j, k] * n[k, j] + m[j, k] * mp[j, k])
        + n[i, j] * n[j, k] * n[k, i]
        - n[j, j] * (n[i, k] * n[k, i] + m[i, k] * mp[i, k])
        + n[j, i] * n[k, j] * n[i, k]
        - n[k, k] * (n[i, j] * n[j, i] + m[i, j] * mp[i, j])
        + n[i, j] * m[i, k] * mp[j, k]
        + n[j, i] * m[j, k] * mp[i, k]
        + n[j, k] * m[j, i] * mp[k, i]
        + n[k, j] * m[k, i] * mp[j, i]
        + n[k, i] * m[k, j] * mp[i, j]
        + n[i, k] * m[i, j] * mp[k, j]
    )
    return params.omega * complex(val)


def number_variance(params: GaussianParams, i: int) -> float:
    """Number variance ``<n_i>(1 - <n_i>)`` of a physical Gaussian."""
    if not params.is_physical():
        raise NotPhysicalError("number_variance requires physical parameters")
    if not 0 <= i < params.modes:
        raise IndexOutOfRangeError("mode index out of range")
    occ = params.n[i, i].real
    return float(occ * (1.0 - occ))
