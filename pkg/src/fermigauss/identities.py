"""Numerical verification of the first-order differential identities.

Each identity expresses an ordered product of a ladder-operator pair and
a Gaussian operator as a first-order differential operator in the
covariance:

    normal      : b_bar b_bar^dag L :  =  s L - s (dL/ds) s
    mixed      { b_bar : b_bar^dag L :} = -s L + (s - I) (dL/ds) s
    antinormal { b_bar b_bar^dag L }   = (s - I) L - (s - I) (dL/ds) (s - I)

with ``s`` the covariance and ``I`` the constant diag(-I, I).  The
derivative uses the transpose layout ``(dL/ds)[mu, nu] = dL/ds[nu, mu]``
and respects the generalized-antisymmetry constraint: perturbing entry
``(theta, phi)`` moves its partner ``(X phi, X theta)`` oppositely, so
every independent element effectively appears twice.

The left-hand sides are assembled densely from the Fock oracle; the
derivative is taken by paired central finite differences of the
materialised Gaussian.  Agreement is therefore a genuine two-route test.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import fock, linalg
from .errors import NotThermalError, StepTooLargeError
from .gaussian import GaussianParams, materialize, params_from_covariance

__all__ = [
    "ResidualReport",
    "quadratic_table",
    "derivative_field_numeric",
    "derivative_field_analytic",
    "dlambda_dsigma",
    "thermal_derivative_field",
    "verify_all_identities",
    "verify_normal_identity",
    "verify_mixed_identity",
    "verify_antinormal_identity",
    "verify_thermal_identities",
    "verify_double_application",
    "pfaffian_derivative_residual",
]

DEFAULT_STEP = 1e-5
DEFAULT_TOL = 1e-6
ANALYTIC_GUARD = 1e-4


@dataclass(frozen=True)
class ResidualReport:
    """Outcome of one identity verification run."""

    identity: str
    modes: int
    residual: float
    tolerance: float
    passed: bool
    seed: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def _report(identity, modes, residual, tolerance, seed) -> ResidualReport:
    residual = float(residual)
    return ResidualReport(identity, modes, residual, float(tolerance),
                          residual <= tolerance, seed)


def quadratic_table(lam: np.ndarray, modes: int, kind: str) -> np.ndarray:
    """Ordered pair products around a dense operator, as a (2M, 2M) table.

    ``kind`` selects the ordering: "normal" for ``: b b^dag L :``,
    "antinormal" for ``{ b b^dag L }``, "mixed" for ``{ b : b^dag L :}``
    and "mixed_right" for ``{: L b : b^dag}``.  Entry (mu, nu) is a dense
    operator; creation operators end up left of L and annihilation
    operators right of it exactly per the block conventions.
    """
    ops = fock.ladder_matrices(modes)
    b = ops[:modes]
    bd = ops[modes:]
    dim = lam.shape[0]
    out = np.empty((2 * modes, 2 * modes, dim, dim), dtype=complex)
    for i in range(modes):
        for j in range(modes):
            if kind == "normal":
                out[i, j] = -bd[j] @ lam @ b[i]
                out[i, modes + j] = lam @ b[i] @ b[j]
                out[modes + i, j] = bd[i] @ bd[j] @ lam
                out[modes + i, modes + j] = bd[i] @ lam @ b[j]
            elif kind == "antinormal":
                out[i, j] = b[i] @ lam @ bd[j]
                out[i, modes + j] = b[i] @ b[j] @ lam
                out[modes + i, j] = lam @ bd[i] @ bd[j]
                out[modes + i, modes + j] = -b[j] @ lam @ bd[i]
            elif kind == "mixed":
                out[i, j] = b[i] @ bd[j] @ lam
                out[i, modes + j] = b[i] @ lam @ b[j]
                out[modes + i, j] = -bd[j] @ lam @ bd[i]
                out[modes + i, modes + j] = -lam @ b[j] @ bd[i]
            elif kind == "mixed_right":
                out[i, j] = lam @ b[i] @ bd[j]
                out[i, modes + j] = -b[j] @ lam @ b[i]
                out[modes + i, j] = bd[i] @ lam @ bd[j]
                out[modes + i, modes + j] = -b[j] @ bd[i] @ lam
            else:
                raise ValueError(f"unknown ordering kind {kind!r}")
    return out


def derivative_field_numeric(params: GaussianParams, step: float = DEFAULT_STEP) -> np.ndarray:
    """Central-difference field ``field[theta, phi] = dL/ds[theta, phi]``.

    Each entry is perturbed jointly with its antisymmetry partner; the
    self-paired entries ``(theta, X theta)`` are pinned to zero by the
    constraint and their derivative vanishes identically.
    """
    modes = params.modes
    sigma = params.covariance
    dim = 1 << modes
    two_m = 2 * modes
    field = np.zeros((two_m, two_m, dim, dim), dtype=complex)
    for theta in range(two_m):
        for phi in range(two_m):
            pt, pp = linalg.swap_half(phi, modes), linalg.swap_half(theta, modes)
            if (theta, phi) == (pt, pp):
                continue
            delta = np.zeros_like(sigma)
            delta[theta, phi] += step
            delta[pt, pp] -= step
            plus = materialize(params_from_covariance(sigma + delta, params.omega))
            minus = materialize(params_from_covariance(sigma - delta, params.omega))
            field[theta, phi] = (plus - minus) / (2.0 * step)
    return field


def derivative_field_analytic(params: GaussianParams) -> np.ndarray:
    """Analytic derivative in the transpose layout,
    ``D = s^-1 L - s^-1 (: b b^dag L :) s^-1`` with ``D[mu, nu] = dL/ds[nu, mu]``."""
    sigma = params.covariance
    siginv = np.linalg.inv(sigma)
    lam = materialize(params)
    table = quadratic_table(lam, params.modes, "normal")
    contracted = np.einsum("ma,abxy,bn->mnxy", siginv, table, siginv)
    return siginv[:, :, None, None] * lam[None, None, :, :] - contracted


def dlambda_dsigma(params: GaussianParams, step: float = DEFAULT_STEP):
    """Numeric and analytic derivative fields, cross-checked.

    Returns ``(numeric, analytic)`` where ``numeric[theta, phi]`` is the
    plain-layout finite-difference derivative and ``analytic`` carries
    the transpose layout (``analytic[mu, nu] == numeric[nu, mu]``).

    Raises
    ------
    StepTooLargeError
        If the two disagree beyond 1e-4 entrywise.
    """
    numeric = derivative_field_numeric(params, step)
    analytic = derivative_field_analytic(params)
    mismatch = np.abs(analytic - numeric.transpose(1, 0, 2, 3)).max()
    if mismatch > ANALYTIC_GUARD:
        raise StepTooLargeError(
            f"numeric/analytic derivative mismatch {mismatch:.3e} at step {step:g}")
    return numeric, analytic


def _contract(a: np.ndarray, field: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("ma,abxy,bn->mnxy", a, field, b)


def _scalar_times(mat: np.ndarray, lam: np.ndarray) -> np.ndarray:
    return mat[:, :, None, None] * lam[None, None, :, :]


def _identity_residual(kind: str, params: GaussianParams, step: float) -> float:
    modes = params.modes
    sigma = params.covariance
    lam = materialize(params)
    numeric = derivative_field_numeric(params, step)
    deriv = numeric.transpose(1, 0, 2, 3)  # transpose layout
    ibar = linalg.constant_i(modes)
    lhs = quadratic_table(lam, modes, kind)
    if kind == "normal":
        rhs = _scalar_times(sigma, lam) - _contract(sigma, deriv, sigma)
    elif kind == "mixed":
        rhs = -_scalar_times(sigma, lam) + _contract(sigma - ibar, deriv, sigma)
    elif kind == "antinormal":
        rhs = _scalar_times(sigma - ibar, lam) - _contract(
            sigma - ibar, deriv, sigma - ibar)
    else:
        raise ValueError(kind)
    return float(np.abs(lhs - rhs).max())


def verify_all_identities(params, step=DEFAULT_STEP, tol=DEFAULT_TOL, seed=None):
    """All three pair-ordering identities sharing one derivative field."""
    modes = params.modes
    sigma = params.covariance
    lam = materialize(params)
    deriv = derivative_field_numeric(params, step).transpose(1, 0, 2, 3)
    ibar = linalg.constant_i(modes)
    shifted = sigma - ibar
    rhs = {
        "normal": _scalar_times(sigma, lam) - _contract(sigma, deriv, sigma),
        "mixed": -_scalar_times(sigma, lam) + _contract(shifted, deriv, sigma),
        "antinormal": _scalar_times(shifted, lam) - _contract(shifted, deriv, shifted),
    }
    return [
        _report(kind, modes, np.abs(quadratic_table(lam, modes, kind) - rhs[kind]).max(),
                tol, seed)
        for kind in ("normal", "mixed", "antinormal")
    ]


def verify_normal_identity(params, step=DEFAULT_STEP, tol=DEFAULT_TOL, seed=None):
    """Normally ordered pair identity (first differential identity)."""
    return _report("normal", params.modes,
                   _identity_residual("normal", params, step), tol, seed)


def verify_mixed_identity(params, step=DEFAULT_STEP, tol=DEFAULT_TOL, seed=None):
    """Mixed-order pair identity."""
    return _report("mixed", params.modes,
                   _identity_residual("mixed", params, step), tol, seed)


def verify_antinormal_identity(params, step=DEFAULT_STEP, tol=DEFAULT_TOL, seed=None):
    """Antinormally ordered pair identity."""
    return _report("antinormal", params.modes,
                   _identity_residual("antinormal", params, step), tol, seed)


def thermal_derivative_field(params: GaussianParams, step: float = DEFAULT_STEP) -> np.ndarray:
    """Plain central-difference field ``field[i, j] = dL/dn[i, j]`` for
    thermal parameters (all n entries independent)."""
    if not params.is_thermal:
        raise NotThermalError("thermal derivative needs m = mplus = 0")
    modes = params.modes
    dim = 1 << modes
    field = np.zeros((modes, modes, dim, dim), dtype=complex)
    for i in range(modes):
        for j in range(modes):
            delta = np.zeros((modes, modes), dtype=complex)
            delta[i, j] = step
            plus = materialize(GaussianParams(params.omega, params.n + delta))
            minus = materialize(GaussianParams(params.omega, params.n - delta))
            field[i, j] = (plus - minus) / (2.0 * step)
    return field


def verify_thermal_identities(params, step=DEFAULT_STEP, tol=DEFAULT_TOL, seed=None):
    """All four thermal-subset identities against n-derivatives.

    The four lines relate ``bdag.T b.T L``, ``L bdag.T b.T``,
    ``bdag.T L b.T`` and ``(b L bdag).T`` to first derivatives in n with
    coefficient matrices built from n and I - n.
    """
    if not params.is_thermal:
        raise NotThermalError("thermal identities need m = mplus = 0")
    modes = params.modes
    n = params.n
    eye = np.eye(modes)
    lam = materialize(params)
    deriv = thermal_derivative_field(params, step).transpose(1, 0, 2, 3)
    ops = fock.ladder_matrices(modes)
    b, bd = ops[:modes], ops[modes:]
    dim = lam.shape[0]

    tables = np.empty((4, modes, modes, dim, dim), dtype=complex)
    for i in range(modes):
        for j in range(modes):
            tables[0, i, j] = bd[i] @ b[j] @ lam
            tables[1, i, j] = lam @ bd[i] @ b[j]
            tables[2, i, j] = bd[i] @ lam @ b[j]
            tables[3, i, j] = b[j] @ lam @ bd[i]
    rhs = np.empty_like(tables)
    rhs[0] = _scalar_times(n, lam) + _contract(eye - n, deriv, n)
    rhs[1] = _scalar_times(n, lam) + _contract(n, deriv, eye - n)
    rhs[2] = _scalar_times(eye - n, lam) + _contract(eye - n, deriv, eye - n)
    rhs[3] = _scalar_times(n, lam) - _contract(n, deriv, n)
    residual = float(np.abs(tables - rhs).max())
    return _report("thermal", modes, residual, tol, seed)


def verify_double_application(params, outer, inner, step=1e-4, tol=1e-5, seed=None):
    """Two-body product as a second derivative: apply the normal identity
    to the dense first application and finite-difference the result.

    ``outer`` and ``inner`` are extended index pairs (alpha, beta) and
    (gamma, delta); the check is

        : b_a b^dag_b (: b_g b^dag_d L :) :  ==
            s[a,b] X - (s . dX/ds . s)[a,b],   X = : b_g b^dag_d L :

    where dX/ds uses the same paired finite differences, so the right
    side implicitly contains second derivatives of the Gaussian.
    """
    alpha, beta = outer
    gamma, delta = inner
    modes = params.modes
    sigma = params.covariance

    def inner_op(sig):
        lam = materialize(params_from_covariance(sig, params.omega))
        return quadratic_table(lam, modes, "normal")[gamma, delta]

    # dense LHS: flat normal ordering of all four extended operators
    def ext(mu):
        is_creator = mu >= modes
        mode = mu - modes if mu >= modes else mu
        return is_creator, mode

    ops = []
    for mu, dag in ((alpha, False), (beta, True), (gamma, False), (delta, True)):
        is_creator, mode = ext(mu)
        if dag:
            is_creator = not is_creator
        ops.append((is_creator, mode))
    ordered = fock.normal_order_monomial(ops)
    lam = materialize(params)
    dim = lam.shape[0]
    if ordered is None:
        lhs = np.zeros((dim, dim), dtype=complex)
    else:
        (creators, annihilators), sgn = ordered
        left = np.eye(dim, dtype=complex)
        for s in creators:
            left = left @ fock.creator(modes, s)
        right = np.eye(dim, dtype=complex)
        for t in annihilators:
            right = right @ fock.annihilator(modes, t)
        lhs = sgn * left @ lam @ right

    # numeric derivative of the inner application
    two_m = 2 * modes
    dX = np.zeros((two_m, two_m, dim, dim), dtype=complex)
    for theta in range(two_m):
        for phi in range(two_m):
            pt, pp = linalg.swap_half(phi, modes), linalg.swap_half(theta, modes)
            if (theta, phi) == (pt, pp):
                continue
            dlt = np.zeros_like(sigma)
            dlt[theta, phi] += step
            dlt[pt, pp] -= step
            dX[theta, phi] = (inner_op(sigma + dlt) - inner_op(sigma - dlt)) / (2 * step)
    deriv = dX.transpose(1, 0, 2, 3)
    inner_val = quadratic_table(lam, modes, "normal")[gamma, delta]
    rhs = sigma[alpha, beta] * inner_val - _contract(sigma, deriv, sigma)[alpha, beta]
    residual = float(np.abs(lhs - rhs).max())
    return _report("double", modes, residual, tol, seed)


def pfaffian_derivative_residual(params: GaussianParams, step: float = DEFAULT_STEP) -> float:
    """Residual of ``d Pf[sigma_A] / d sigma = Pf[sigma_A] sigma^-1``.

    ``Pf[antisymmetrize(sigma)]`` is a fixed constant times the square
    root of ``det sigma``, so this checks the determinant derivative rule
    (with its factor of two from the doubled elements) without any branch
    ambiguity.  The transpose layout applies as for the Gaussian
    derivative.
    """
    sigma = params.covariance
    modes = params.modes

    def pf(sig):
        return linalg.pfaffian(linalg.antisymmetrize(sig))

    base = pf(sigma)
    expect = base * np.linalg.inv(sigma)
    two_m = 2 * modes
    worst = 0.0
    for theta in range(two_m):
        for phi in range(two_m):
            pt, pp = linalg.swap_half(phi, modes), linalg.swap_half(theta, modes)
            if (theta, phi) == (pt, pp):
                continue
            delta = np.zeros_like(sigma)
            delta[theta, phi] += step
            delta[pt, pp] -= step
            numeric = (pf(sigma + delta) - pf(sigma - delta)) / (2 * step)
            worst = max(worst, abs(numeric - expect[phi, theta]))
    return worst
