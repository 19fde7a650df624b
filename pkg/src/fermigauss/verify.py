"""Two-route verification runners: closed formulas against the Fock oracle.

Each check evaluates one of the library's closed-form results (Pfaffian
normalisation, covariance moments, moment generating function, Wick
formulas) and the same quantity by brute force in the dense Fock basis,
returning the worst absolute deviation.  The runners aggregate checks
over seeded random parameter draws into :class:`ResidualReport` records.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from . import fock, linalg
from .gaussian import (
    GaussianParams,
    materialize,
    mgf,
    normalization_constant,
    number_number_moment,
    number_triple_moment,
    second_moment,
    third_moment,
)
from .identities import (
    ResidualReport,
    verify_antinormal_identity,
    verify_mixed_identity,
    verify_normal_identity,
    verify_thermal_identities,
)
from .sampling import random_gaussian_params

__all__ = [
    "oracle_first_moments",
    "oracle_ordered_moment",
    "oracle_closed_number_moment",
    "check_normalization",
    "check_thermal_normalization",
    "check_first_moments",
    "check_mgf_derivatives",
    "check_second_moments",
    "check_third_moments",
    "check_number_moments",
    "run_theorem",
    "THEOREMS",
]


def oracle_first_moments(params: GaussianParams, lam: np.ndarray | None = None):
    """Dense traces ``Tr[bdag_i b_j L]``, ``Tr[b_i b_j L]``, ``Tr[bdag_i bdag_j L]``."""
    modes = params.modes
    if lam is None:
        lam = materialize(params)
    ops = fock.ladder_matrices(modes)
    b, bd = ops[:modes], ops[modes:]
    n = np.array([[fock.trace_product([bd[i], b[j], lam]) for j in range(modes)]
                  for i in range(modes)])
    m = np.array([[fock.trace_product([b[i], b[j], lam]) for j in range(modes)]
                  for i in range(modes)])
    mp = np.array([[fock.trace_product([bd[i], bd[j], lam]) for j in range(modes)]
                   for i in range(modes)])
    return n, m, mp


def oracle_ordered_moment(lam: np.ndarray, modes: int, indices) -> complex:
    """Dense ``Tr[: b_mu1 bdag_mu2 ... L :]`` with creators moved left of L.

    Odd positions draw from the extended column vector, even positions
    from the adjoint row; the normal ordering is the formal signed
    rearrangement (vanishing on repeated operators).
    """
    ops = []
    for pos, mu in enumerate(indices):
        mu = int(mu)
        mode = mu - modes if mu >= modes else mu
        is_creator = (mu < modes) if pos % 2 else (mu >= modes)
        ops.append((is_creator, mode))
    ordered = fock.normal_order_monomial(ops)
    if ordered is None:
        return 0.0
    (creators, annihilators), sign = ordered
    acc = lam
    for s in reversed(creators):
        acc = fock.creator(modes, s) @ acc
    for t in annihilators:
        acc = acc @ fock.annihilator(modes, t)
    return sign * complex(np.trace(acc))


def oracle_closed_number_moment(lam: np.ndarray, modes: int, which) -> complex:
    """Dense ``Tr[:n_i n_j ...: L]`` (ordering closed before the operator)."""
    ops = []
    for i in which:
        ops.extend([(True, int(i)), (False, int(i))])
    ordered = fock.normal_order_monomial(ops)
    if ordered is None:
        return 0.0
    (creators, annihilators), sign = ordered
    acc = np.eye(lam.shape[0], dtype=complex)
    for s in creators:
        acc = acc @ fock.creator(modes, s)
    for t in annihilators:
        acc = acc @ fock.annihilator(modes, t)
    return sign * complex(np.trace(acc @ lam))


def check_normalization(params: GaussianParams) -> float:
    """|dense trace - Omega| for the Pfaffian-normalised operator."""
    return abs(complex(np.trace(materialize(params))) - params.omega)


def check_thermal_normalization(params: GaussianParams) -> float:
    """|normalisation constant - det(I - n)| on the thermal subset."""
    expected = np.linalg.det(np.eye(params.modes) - params.n)
    return abs(normalization_constant(params) - expected)


def check_first_moments(params: GaussianParams) -> float:
    lam = materialize(params)
    n, m, mp = oracle_first_moments(params, lam)
    w = params.omega
    return float(max(np.abs(n - w * params.n).max(),
                     np.abs(m - w * params.m).max(),
                     np.abs(mp - w * params.mplus).max()))


def check_mgf_derivatives(params: GaussianParams, step: float = 1e-5) -> float:
    """Paired central differences of the MGF at tau = 0 against the
    first-moment matrix (derivative in direction (theta, phi) equals
    ``-Omega sigma[phi, theta]``)."""
    modes = params.modes
    sigma = params.covariance
    two_m = 2 * modes
    worst = 0.0
    for theta in range(two_m):
        for phi in range(two_m):
            pt, pp = linalg.swap_half(phi, modes), linalg.swap_half(theta, modes)
            if (theta, phi) == (pt, pp):
                continue
            tau = np.zeros((two_m, two_m), dtype=complex)
            tau[theta, phi] += step
            tau[pt, pp] -= step
            deriv = (mgf(params, tau) - mgf(params, -tau)) / (2.0 * step)
            worst = max(worst, abs(deriv + params.omega * sigma[phi, theta]))
    return worst


def check_second_moments(params: GaussianParams, lam=None) -> float:
    """Wick formula vs oracle over every extended 4-tuple."""
    if lam is None:
        lam = materialize(params)
    modes = params.modes
    worst = 0.0
    for idx in product(range(2 * modes), repeat=4):
        worst = max(worst, abs(second_moment(params, idx)
                               - oracle_ordered_moment(lam, modes, idx)))
    return worst


def check_third_moments(params: GaussianParams, lam=None, tuples=None) -> float:
    """Fifteen-term formula vs oracle; all 6-tuples unless given."""
    if lam is None:
        lam = materialize(params)
    modes = params.modes
    if tuples is None:
        tuples = product(range(2 * modes), repeat=6)
    worst = 0.0
    for idx in tuples:
        worst = max(worst, abs(third_moment(params, idx)
                               - oracle_ordered_moment(lam, modes, idx)))
    return worst


def check_number_moments(params: GaussianParams, lam=None) -> float:
    """Closed number-number and triple-number formulas vs oracle."""
    if lam is None:
        lam = materialize(params)
    modes = params.modes
    worst = 0.0
    for i in range(modes):
        for j in range(modes):
            worst = max(worst, abs(number_number_moment(params, i, j)
                                   - oracle_closed_number_moment(lam, modes, (i, j))))
    for idx in product(range(modes), repeat=3):
        worst = max(worst, abs(number_triple_moment(params, *idx)
                               - oracle_closed_number_moment(lam, modes, idx)))
    return worst


def _theorem_residual(theorem: str, params: GaussianParams, tol: float,
                      seed: int | None) -> ResidualReport:
    if theorem == "1":
        residual = check_normalization(params)
        thermal = GaussianParams(params.omega, params.n)
        residual = max(residual, check_thermal_normalization(thermal))
        return ResidualReport("normalization", params.modes, float(residual),
                              tol, residual <= tol, seed)
    if theorem == "2":
        residual = check_first_moments(params)
        return ResidualReport("first-moments", params.modes, float(residual),
                              tol, residual <= tol, seed)
    if theorem == "3":
        lam = materialize(params)
        residual = max(check_mgf_derivatives(params),
                       check_second_moments(params, lam),
                       check_number_moments(params, lam))
        return ResidualReport("moment-generating", params.modes, float(residual),
                              tol, residual <= tol, seed)
    if theorem == "4":
        return verify_normal_identity(params, tol=tol, seed=seed)
    if theorem == "5":
        return verify_mixed_identity(params, tol=tol, seed=seed)
    if theorem == "6":
        return verify_antinormal_identity(params, tol=tol, seed=seed)
    if theorem == "thermal":
        return verify_thermal_identities(params, tol=tol, seed=seed)
    raise ValueError(f"unknown theorem {theorem!r}")


#: Theorem labels accepted by :func:`run_theorem`.
THEOREMS = ("1", "2", "3", "4", "5", "6", "thermal")


def run_theorem(theorem: str, modes: int, seed: int, count: int = 1,
                tol: float = 1e-6) -> list[ResidualReport]:
    """Run one theorem's check over ``count`` deterministic seeds."""
    theorem = str(theorem)
    reports = []
    for k in range(count):
        s = seed + k
        kind = "thermal" if theorem == "thermal" else "generic"
        params = random_gaussian_params(modes, s, kind=kind)
        reports.append(_theorem_residual(theorem, params, tol, s))
    return reports
