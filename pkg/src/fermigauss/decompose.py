"""Constructive positive expansions of fermionic density matrices.

Any superselection-respecting density matrix decomposes into normalised
Gaussian operators with *nonnegative* weights:

* diagonal matrices exactly, one diagonal Gaussian per occupied projector;
* any two-mode matrix exactly, two triangular (possibly squeezed)
  Gaussians per diagonal entry, weight half the entry;
* general matrices projector by projector, where each off-diagonal
  number-state projector is the scaled limit of a one-parameter Gaussian
  family (manifestly positive weight, coefficient absorbed into the
  family).

Limit families converge linearly in the parameter eps; reconstruction
evaluates them on a small eps schedule and extrapolates polynomially
to eps = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fock
from .errors import (
    NotDiagonalError,
    NotPositiveError,
    OddNumberDifferenceError,
    SuperselectionError,
    TotalNumberMismatchError,
)
from .gaussian import GaussianParams, hermitian_conjugate, materialize, two_mode_params

__all__ = [
    "DEFAULT_EPSILONS",
    "LimitFamily",
    "Decomposition",
    "check_density_matrix",
    "decompose_diagonal",
    "decompose_two_mode",
    "decompose",
    "limit_gaussian_thermal",
    "limit_gaussian_squeezed",
    "evaluate_family",
    "reconstruct",
]

DEFAULT_EPSILONS = (1e-1, 1e-2, 1e-3)
_TOL = 1e-10


@dataclass(frozen=True)
class LimitFamily:
    """One-parameter Gaussian family converging to an off-diagonal projector.

    ``weight * coefficient * |ket><bra|`` is the density-matrix component
    carried by the family; ``exponent`` is the eps power scaling the
    materialised Gaussian (the number of thermal pairs, plus the number
    of squeezing pairs for non-number-conserving targets).
    """

    ket: tuple[int, ...]
    bra: tuple[int, ...]
    coefficient: complex
    weight: float
    exponent: int
    epsilons: tuple[float, ...] = DEFAULT_EPSILONS

    @property
    def modes(self) -> int:
        return len(self.ket)

    def params(self, eps: float) -> GaussianParams:
        """Family member at finite eps (coefficient folded in)."""
        return limit_gaussian_squeezed(self.ket, self.bra, eps, self.coefficient)


@dataclass
class Decomposition:
    """Positive-weight Gaussian expansion of a density matrix."""

    modes: int
    terms: list[tuple[float, GaussianParams]] = field(default_factory=list)
    families: list[LimitFamily] = field(default_factory=list)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.terms] + [f.weight for f in self.families])


def check_density_matrix(rho, tol: float = _TOL) -> int:
    """Validate a density matrix; returns the mode count.

    Requires Hermiticity and unit trace to ``tol``, positive
    semidefiniteness (smallest eigenvalue above ``-tol``) and the
    superselection rule: no coherences between number sectors whose
    totals differ by an odd integer.
    """
    rho = np.asarray(rho, dtype=complex)
    dim = rho.shape[0]
    modes = dim.bit_length() - 1
    if rho.shape != (dim, dim) or 1 << modes != dim:
        raise ValueError("density matrix dimension must be a power of two")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise NotPositiveError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise NotPositiveError("density matrix trace is not one")
    if np.linalg.eigvalsh((rho + rho.conj().T) / 2).min() < -tol:
        raise NotPositiveError("density matrix is not positive semidefinite")
    counts = np.bitwise_count(np.arange(dim))
    odd = (counts[:, None] - counts[None, :]) % 2 == 1
    if np.abs(rho[odd]).max(initial=0.0) > tol:
        raise SuperselectionError(
            "coherences between sectors of odd number difference")
    return modes


def _occupations(modes: int, index: int) -> tuple[int, ...]:
    return tuple((index >> (modes - 1 - j)) & 1 for j in range(modes))


def decompose_diagonal(rho, tol: float = _TOL) -> Decomposition:
    """Exact expansion of a diagonal density matrix.

    One term per nonzero diagonal entry: weight ``rho_nn`` and the
    diagonal Gaussian with ``n = diag(occupations)``.
    """
    modes = check_density_matrix(rho, tol)
    rho = np.asarray(rho, dtype=complex)
    if np.abs(rho - np.diag(np.diag(rho))).max() > tol:
        raise NotDiagonalError("density matrix has off-diagonal weight")
    out = Decomposition(modes)
    for idx in range(rho.shape[0]):
        w = rho[idx, idx].real
        if w <= 0.0:
            continue
        occ = np.array(_occupations(modes, idx), dtype=complex)
        out.terms.append((w, GaussianParams(1.0, np.diag(occ))))
    return out


def decompose_two_mode(rho, tol: float = _TOL) -> Decomposition:
    """Exact positive expansion of an arbitrary two-mode density matrix.

    For each diagonal occupation pair two Gaussians of weight
    ``rho_nn / 2`` absorb the off-diagonal elements: one upper-triangular
    in n carrying ``2 rho_(01),(10)`` and the squeezing ``-2 rho_(11),(00)``,
    one lower-triangular carrying their partners.  All weights are
    nonnegative for any positive semidefinite input and the
    reconstruction is exact.
    """
    modes = check_density_matrix(rho, tol)
    if modes != 2:
        raise ValueError("decompose_two_mode needs exactly two modes")
    rho = np.asarray(rho, dtype=complex)
    i00, i01, i10, i11 = 0, 1, 2, 3
    upper_coh = 2.0 * rho[i01, i10]
    lower_coh = 2.0 * rho[i10, i01]
    m_upper = -2.0 * rho[i11, i00]
    mplus_lower = -2.0 * rho[i00, i11]
    out = Decomposition(2)
    for idx in range(4):
        w = rho[idx, idx].real
        if w <= 0.0:
            continue
        n1, n2 = _occupations(2, idx)
        n_up = np.array([[n1, upper_coh], [0.0, n2]], dtype=complex)
        n_lo = np.array([[n1, 0.0], [lower_coh, n2]], dtype=complex)
        out.terms.append((w / 2.0, two_mode_params(1.0, n_up, m_upper, 0.0)))
        out.terms.append((w / 2.0, two_mode_params(1.0, n_lo, 0.0, mplus_lower)))
    return out


def decompose(rho, tol: float = _TOL, epsilons=DEFAULT_EPSILONS) -> Decomposition:
    """Positive Gaussian expansion of any superselection-respecting input.

    Dispatches to the exact diagonal or two-mode constructions where they
    apply; otherwise emits diagonal terms plus one limit family per
    nonzero off-diagonal projector, with weight ``(rho_nn + rho_mm) / 2``
    (nonnegative, and bounding the coherence for any positive input).
    """
    modes = check_density_matrix(rho, tol)
    rho = np.asarray(rho, dtype=complex)
    if np.abs(rho - np.diag(np.diag(rho))).max() <= tol:
        return decompose_diagonal(rho, tol)
    if modes == 2:
        return decompose_two_mode(rho, tol)
    out = Decomposition(modes)
    dim = rho.shape[0]
    for idx in range(dim):
        w = rho[idx, idx].real
        if w > 0.0:
            occ = np.array(_occupations(modes, idx), dtype=complex)
            out.terms.append((w, GaussianParams(1.0, np.diag(occ))))
    for u in range(dim):
        for v in range(dim):
            if u == v or abs(rho[u, v]) <= tol:
                continue
            weight = (rho[u, u].real + rho[v, v].real) / 2.0
            if weight <= 0.0:
                raise NotPositiveError(
                    "off-diagonal element without diagonal support")
            out.families.append(
                LimitFamily(
                    ket=_occupations(modes, u),
                    bra=_occupations(modes, v),
                    coefficient=complex(rho[u, v] / weight),
                    weight=weight,
                    epsilons=tuple(epsilons),
                    exponent=_family_exponent(
                        _occupations(modes, u), _occupations(modes, v)),
                )
            )
    return out


# ---------------------------------------------------------------------------
# limit families
# ---------------------------------------------------------------------------


def _family_exponent(ket, bra) -> int:
    diff = int(np.sum(ket)) - int(np.sum(bra))
    if diff % 2:
        raise OddNumberDifferenceError("ket and bra totals differ by an odd number")
    if diff < 0:
        ket, bra = bra, ket
    _, thermal, squeeze = _limit_structure(ket, bra)
    return len(thermal) + len(squeeze)


def _limit_structure(ket, bra):
    """Pair bookkeeping shared by the limit constructions.

    Returns (base occupations n', thermal pairs [(raised, lowered)],
    squeeze pairs [(larger, smaller)]) after removing the excess fermion
    pairs from the ket side (largest-index occupied modes first).
    """
    ket = np.asarray(ket, dtype=int)
    bra = np.asarray(bra, dtype=int)
    modes = len(ket)
    diff = int(ket.sum() - bra.sum())
    squeeze: list[tuple[int, int]] = []
    reduced = ket.copy()
    if diff:
        removed = [j for j in reversed(range(modes)) if ket[j]][: diff]
        removed = sorted(removed)
        squeeze = [(removed[k + 1], removed[k]) for k in range(0, len(removed), 2)]
        reduced[removed] = 0
    base = np.minimum(reduced, bra)
    raised = [j for j in range(modes) if reduced[j] > base[j]]
    lowered = [j for j in range(modes) if bra[j] > base[j]]
    thermal = list(zip(raised, lowered))
    return base, thermal, squeeze


def _limit_sign(modes, base_occ, thermal, squeeze) -> int:
    """Exact sign of the leading projector produced by the pair factors.

    The leading term of the expanded family is the normally ordered
    string of pair operators around the base diagonal projector; its
    single nonzero matrix element is +-1.  Evaluated densely with the
    ladder matrices.
    """
    ops: list[tuple[bool, int]] = []
    for a, b in squeeze:
        ops.extend([(True, a), (True, b)])
    for i, j in thermal:
        ops.extend([(True, i), (False, j)])
    ordered = fock.normal_order_monomial(ops)
    assert ordered is not None, "limit pairs always involve distinct modes"
    (creators, annihilators), sgn = ordered
    dim = 1 << modes
    base_idx = fock.number_state_index(base_occ)
    ket_vec = np.zeros(dim)
    ket_vec[base_idx] = 1.0
    for s in reversed(creators):  # rightmost creator acts first
        ket_vec = (fock.creator(modes, s) @ ket_vec).real
    # <base| b_t1 .. b_tl  ==  (bdag_tl .. bdag_t1 |base>)^dagger
    bra_vec = np.zeros(dim)
    bra_vec[base_idx] = 1.0
    for t in annihilators:
        bra_vec = (fock.creator(modes, t) @ bra_vec).real
    amp = sgn * ket_vec.sum() * bra_vec.sum()  # single +-1 entry each
    return int(round(amp))


def _limit_params(ket, bra, eps: float, coeff: complex) -> GaussianParams:
    ket_t = tuple(int(x) for x in ket)
    bra_t = tuple(int(x) for x in bra)
    modes = len(ket_t)
    base, thermal, squeeze = _limit_structure(ket_t, bra_t)
    n_pairs = len(thermal) + len(squeeze)
    if n_pairs == 0:
        if coeff != 1.0:
            raise ValueError("diagonal projectors carry their weight externally")
        return GaussianParams(1.0, np.diag(base.astype(complex)))
    sign = _limit_sign(modes, tuple(base), thermal, squeeze)

    # distribute |coeff| uniformly over the pair scales, folding the phase
    # and the Jordan-Wigner sign into the first pair
    radius = abs(coeff) ** (1.0 / n_pairs)
    scales = [radius] * n_pairs
    scales[0] = sign * coeff / (radius ** (n_pairs - 1)) if radius else 0.0

    # occupied-on-both-sides modes pin n' at one, where the exponent
    # parametrisation degenerates; pull them to 1 - eps (absorbed in the
    # same first-order limit)
    base_reg = base.astype(complex)
    base_reg[base_reg == 1] = 1.0 - eps
    kdiag = np.diag(1.0 - base_reg)

    off = np.zeros((modes, modes), dtype=complex)
    for (i, j), scale in zip(thermal, scales[len(squeeze):]):
        off[i, j] = -scale / eps
    xi = np.zeros((modes, modes), dtype=complex)
    for (a, b), scale in zip(squeeze, scales[: len(squeeze)]):
        xi[a, b] = -scale / eps
        xi[b, a] = scale / eps

    eye = np.eye(modes)
    # (2I - mu)^-1 through the unipotent series: mu = D + off with
    # diag(2 - mu_ii) = 1/(1 - n'_i); no fermion-line cycles, so the
    # inverse is exact and the normalisation stays diagonal
    w = np.linalg.inv(eye - kdiag @ off) @ kdiag
    n_mat = eye - np.linalg.inv(eye - kdiag @ off.T) @ kdiag
    m_mat = w @ xi @ w.T
    m_mat = (m_mat - m_mat.T) / 2.0  # scrub roundoff asymmetry
    return GaussianParams(1.0, n_mat, m_mat, np.zeros((modes, modes)))


def limit_gaussian_thermal(ket, bra, eps: float, coeff: complex = 1.0) -> GaussianParams:
    """Number-conserving limit Gaussian for the projector ``|ket><bra|``.

    ``eps**d * materialize(...)`` converges linearly in eps to
    ``coeff * |ket><bra|``, with ``d`` the number of raised/lowered mode
    pairs.  Requires equal total occupation.
    """
    if int(np.sum(ket)) != int(np.sum(bra)):
        raise TotalNumberMismatchError("thermal families conserve total number")
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    return _limit_params(ket, bra, eps, complex(coeff))


def limit_gaussian_squeezed(ket, bra, eps: float, coeff: complex = 1.0) -> GaussianParams:
    """Limit Gaussian for a projector changing the total number by 2S.

    Excess ket fermions are removed in pairs (largest-index occupied
    modes) and re-created through squeezing entries ``-1/eps``; the case
    of a bra excess is handled by Hermitian conjugation.  Scaling by
    ``eps**(S + d)`` converges to ``coeff * |ket><bra|``.
    """
    diff = int(np.sum(ket)) - int(np.sum(bra))
    if diff % 2:
        raise OddNumberDifferenceError("total numbers differ by an odd integer")
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    if diff == 0:
        return limit_gaussian_thermal(ket, bra, eps, coeff)
    if diff < 0:
        return hermitian_conjugate(
            limit_gaussian_squeezed(bra, ket, eps, np.conj(coeff)))
    return _limit_params(ket, bra, eps, complex(coeff))


def evaluate_family(family: LimitFamily) -> np.ndarray:
    """Extrapolated dense value ``lim eps**d Gaussian(eps)`` of a family.

    Evaluates the scaled family on its eps schedule and extrapolates to
    zero with the Lagrange polynomial through all schedule points (exact
    whenever the scaled family is polynomial in eps of lower degree).
    """
    eps = np.asarray(family.epsilons, dtype=float)
    samples = np.array(
        [e ** family.exponent * materialize(family.params(e)) for e in eps]
    )
    weights = np.array(
        [
            np.prod([eps[j] / (eps[j] - eps[i]) for j in range(len(eps)) if j != i])
            for i in range(len(eps))
        ]
    )
    return np.tensordot(weights, samples, axes=1)


def reconstruct(decomp: Decomposition, target=None):
    """Dense sum of a decomposition; with ``target`` also the residual.

    Terms are summed in a fixed order for bit-reproducible output.
    """
    dim = 1 << decomp.modes
    total = np.zeros((dim, dim), dtype=complex)
    for weight, params in decomp.terms:
        total += weight * materialize(params)
    for family in decomp.families:
        total += family.weight * evaluate_family(family)
    if target is None:
        return total
    residual = float(np.abs(total - np.asarray(target, dtype=complex)).max())
    return total, residual
