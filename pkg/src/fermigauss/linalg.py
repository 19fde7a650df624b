"""Dense complex linear algebra for extended 2M x 2M matrices.

The 2M x 2M matrices appearing throughout the package ("extended"
matrices) carry a generalized antisymmetry

    sigma = -X sigma.T X,      X = [[0, I], [I, 0]],

which ties their four M x M blocks together: with sigma = [[a, b], [c, d]]
it forces a = -d.T and makes b, c antisymmetric.  Such a matrix can be
turned into an explicitly antisymmetric one by a fixed interleaving of
rows and columns (:func:`antisymmetrize`), whose Pfaffian then carries
the normalisation of a Gaussian operator with an unambiguous sign.

Conventions
-----------
Extended indices are 0-based, ``mu = 0..2M-1``; the first half indexes
annihilation-type rows/columns and the second half creation-type ones.
``swap_half(mu, modes)`` maps ``mu`` to its partner index ``mu +- M``.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    NotAntisymmetricError,
    NotGeneralizedAntisymmetricError,
    OddDimensionError,
    SingularMatrixError,
)

__all__ = [
    "pfaffian",
    "det",
    "inverse",
    "constant_i",
    "constant_x",
    "swap_half",
    "blocks",
    "assemble",
    "check_generalized_antisymmetry",
    "antisymmetrize",
    "antisymmetrize_dual",
]

#: Relative tolerance used for structural (antisymmetry) checks on inputs.
STRUCTURE_RTOL = 1e-12

#: Condition-number ceiling beyond which inverses are refused.
MAX_CONDITION = 1e12


def _as_square(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def pfaffian(a, rtol: float = STRUCTURE_RTOL) -> complex:
    """Pfaffian of a complex antisymmetric matrix of even dimension.

    Uses Parlett-Reid skew-symmetric tridiagonalisation with partial
    pivoting, accumulating the permutation sign exactly, so the result
    carries an unambiguous sign (no square roots are involved).

    Raises
    ------
    OddDimensionError
        If the dimension is odd.
    NotAntisymmetricError
        If ``a.T != -a`` beyond ``rtol`` relative to ``max|a|``.
    """
    a = _as_square(a)
    n = a.shape[0]
    if n % 2:
        raise OddDimensionError(f"Pfaffian needs even dimension, got {n}")
    if n == 0:
        return 1.0 + 0.0j
    scale = np.abs(a).max()
    if np.abs(a + a.T).max() > rtol * max(scale, 1.0):
        raise NotAntisymmetricError("matrix is not antisymmetric")

    m = a.copy()
    pf = 1.0 + 0.0j
    for k in range(0, n - 1, 2):
        # pivot: largest entry in column k below the diagonal
        kp = k + 1 + int(np.argmax(np.abs(m[k + 1 :, k])))
        if kp != k + 1:
            m[[k + 1, kp], :] = m[[kp, k + 1], :]
            m[:, [k + 1, kp]] = m[:, [kp, k + 1]]
            pf = -pf
        pivot = m[k + 1, k]
        if pivot == 0.0:
            return 0.0 + 0.0j
        pf *= m[k, k + 1]
        if k + 2 < n:
            tau = m[k + 2 :, k] / pivot
            col = m[k + 2 :, k + 1]
            m[k + 2 :, k + 2 :] += np.outer(tau, col) - np.outer(col, tau)
    return complex(pf)


def det(a) -> complex:
    """Determinant of a complex square matrix."""
    return complex(np.linalg.det(_as_square(a)))


def inverse(a, max_condition: float = MAX_CONDITION) -> np.ndarray:
    """Matrix inverse, refusing inputs with condition number above the cap.

    Raises
    ------
    SingularMatrixError
        If the condition estimate exceeds ``max_condition``.
    """
    a = _as_square(a)
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > max_condition:
        raise SingularMatrixError(f"matrix is singular (cond ~ {cond:.3g})")
    return np.linalg.inv(a)


def constant_i(modes: int) -> np.ndarray:
    """The constant diagonal matrix diag(-I, I) of size 2M x 2M."""
    d = np.ones(2 * modes)
    d[:modes] = -1.0
    return np.diag(d).astype(complex)


def constant_x(modes: int) -> np.ndarray:
    """The half-swapping matrix [[0, I], [I, 0]] of size 2M x 2M."""
    x = np.zeros((2 * modes, 2 * modes), dtype=complex)
    x[:modes, modes:] = np.eye(modes)
    x[modes:, :modes] = np.eye(modes)
    return x


def swap_half(mu: int, modes: int) -> int:
    """Partner index under X: mu + M for mu < M, else mu - M."""
    return mu + modes if mu < modes else mu - modes


def blocks(ext) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Split a 2M x 2M matrix into (upper-left, upper-right, lower-left,
    lower-right) M x M blocks."""
    ext = _as_square(ext)
    n = ext.shape[0]
    if n % 2:
        raise OddDimensionError("extended matrices have even dimension")
    m = n // 2
    return ext[:m, :m], ext[:m, m:], ext[m:, :m], ext[m:, m:]


def assemble(ul, ur, ll, lr) -> np.ndarray:
    """Assemble four M x M blocks into a 2M x 2M matrix."""
    return np.block([[np.asarray(ul, dtype=complex), np.asarray(ur, dtype=complex)],
                     [np.asarray(ll, dtype=complex), np.asarray(lr, dtype=complex)]])


def check_generalized_antisymmetry(sig, tol: float | None = None) -> bool:
    """True iff ``max|sigma + X sigma.T X| <= tol``.

    ``tol`` defaults to ``STRUCTURE_RTOL`` relative to ``max(|sigma|, 1)``.
    """
    sig = _as_square(sig)
    if sig.shape[0] % 2:
        return False
    m = sig.shape[0] // 2
    x = constant_x(m)
    resid = np.abs(sig + x @ sig.T @ x).max()
    if tol is None:
        tol = STRUCTURE_RTOL * max(np.abs(sig).max(), 1.0)
    return bool(resid <= tol)


def _interleave_indices(modes: int) -> tuple[np.ndarray, np.ndarray]:
    # row pattern: (0, M, 1, M+1, ...); column pattern: (M, 0, M+1, 1, ...)
    rows = np.empty(2 * modes, dtype=int)
    cols = np.empty(2 * modes, dtype=int)
    rows[0::2] = np.arange(modes)
    rows[1::2] = np.arange(modes) + modes
    cols[0::2] = np.arange(modes) + modes
    cols[1::2] = np.arange(modes)
    return rows, cols


def antisymmetrize(sig, tol: float | None = None) -> np.ndarray:
    """Interleave a generalized-antisymmetric matrix into explicit
    antisymmetric form.

    Rows of the lower half are inserted after the corresponding upper-half
    row, and columns of the right half before the corresponding left-half
    column; with blocks [[a, b], [c, d]] the result reads, per 2x2 cell,

        [[b_ij, a_ij],
         [d_ij, c_ij]].

    The output differs from the block form only by this fixed permutation,
    so its determinant equals ``(-1)**M det(sigma)`` and its Pfaffian is a
    single-signed square root of that.

    Raises
    ------
    NotGeneralizedAntisymmetricError
        If the input violates ``sigma == -X sigma.T X``.
    """
    sig = _as_square(sig)
    if not check_generalized_antisymmetry(sig, tol):
        raise NotGeneralizedAntisymmetricError(
            "input does not satisfy sigma == -X sigma.T X")
    rows, cols = _interleave_indices(sig.shape[0] // 2)
    return sig[np.ix_(rows, cols)]


def antisymmetrize_dual(a, tol: float | None = None) -> np.ndarray:
    """Interleave with the row/column patterns exchanged.

    This is the variant that matches inverses: for invertible sigma with
    generalized antisymmetry,

        antisymmetrize_dual(inv(sigma)) == inv(antisymmetrize(sigma)),

    so the trace normalisation Pf[antisymmetrize(sigma)^-1] can be
    evaluated directly from sigma^-1 without a second inversion.
    """
    a = _as_square(a)
    if not check_generalized_antisymmetry(a, tol):
        raise NotGeneralizedAntisymmetricError(
            "input does not satisfy sigma == -X sigma.T X")
    rows, cols = _interleave_indices(a.shape[0] // 2)
    return a[np.ix_(cols, rows)]
