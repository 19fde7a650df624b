"""Brute-force Fock-space oracle: dense ladder operators and an exact
normally ordered polynomial algebra.

Everything in this module is exact (integer signs, finite expansions) and
deliberately independent of the Pfaffian/covariance machinery, so it can
serve as ground truth for every identity in the package.

Basis convention
----------------
Basis index ``k`` of the 2**M dimensional space encodes occupations
``(n_0, ..., n_{M-1})`` with mode 0 as the *most significant* bit, i.e.
``|n_0 n_1 ... >`` reads like the binary expansion of ``k``.  Number
states are built by applying creation operators in ascending mode order
to the vacuum, and the annihilator ``b_j`` carries the Jordan-Wigner
string ``(-1)**(n_0 + ... + n_{j-1})`` over the modes before it.  With
this choice ``bdag_1 bdag_0 |00> = -|11>`` at M = 2.

Mode indices are 0-based throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import (
    DimensionMismatchError,
    ModeCountError,
    ModeMismatchError,
    NotAntisymmetricError,
)

__all__ = [
    "MAX_MODES",
    "ladder_matrices",
    "annihilator",
    "creator",
    "extended_op",
    "total_number_operator",
    "number_state_index",
    "NormalPolynomial",
    "normal_order_monomial",
    "normal_poly_multiply",
    "poly_to_dense",
    "gaussian_unnormalized_poly",
    "gaussian_unnormalized_dense",
    "trace_product",
]

#: Dense oracle cap; 2**6 = 64 keeps everything desk scale.
MAX_MODES = 6


def _check_modes(modes: int) -> None:
    if not 1 <= modes <= MAX_MODES:
        raise ModeCountError(f"mode count must be in 1..{MAX_MODES}, got {modes}")


def _bit(modes: int, mode: int) -> int:
    return 1 << (modes - 1 - mode)


def _jw_mask(modes: int, mode: int) -> int:
    # bits of all modes strictly before `mode` (positions above its own)
    return ((1 << modes) - 1) ^ ((1 << (modes - mode)) - 1)


def _string_parity(states: np.ndarray, modes: int, mode: int) -> np.ndarray:
    """Parity (0/1, int64) of the Jordan-Wigner string before `mode`."""
    counts = np.bitwise_count(states & _jw_mask(modes, mode))
    return counts.astype(np.int64) % 2


@lru_cache(maxsize=None)
def ladder_matrices(modes: int) -> tuple[np.ndarray, ...]:
    """Dense ladder operators ``(b_0, ..., b_{M-1}, bdag_0, ..., bdag_{M-1})``.

    Entries are exactly 0 or +-1 and the matrices satisfy the canonical
    anticommutation relations exactly.  The tuple is cached per mode
    count; treat the arrays as read-only.
    """
    _check_modes(modes)
    dim = 1 << modes
    states = np.arange(dim)
    ops: list[np.ndarray] = []
    for j in range(modes):
        bit = _bit(modes, j)
        sign = 1.0 - 2.0 * _string_parity(states, modes, j)
        occupied = (states & bit) != 0
        b = np.zeros((dim, dim), dtype=complex)
        src = states[occupied]
        b[src ^ bit, src] = sign[occupied]
        ops.append(b)
    ops.extend(b.T.copy() for b in ops[:modes])
    for op in ops:
        op.setflags(write=False)
    return tuple(ops)


def annihilator(modes: int, mode: int) -> np.ndarray:
    return ladder_matrices(modes)[mode]


def creator(modes: int, mode: int) -> np.ndarray:
    return ladder_matrices(modes)[modes + mode]


def extended_op(modes: int, mu: int, dagger: bool = False) -> np.ndarray:
    """Entry ``mu`` of the extended column vector (or of the adjoint row
    vector when ``dagger`` is set).

    The column vector stacks the M annihilators above the M creators; the
    adjoint row holds the creators first.
    """
    if not 0 <= mu < 2 * modes:
        raise IndexError(f"extended index {mu} out of range for M={modes}")
    ops = ladder_matrices(modes)
    if dagger:
        mu = mu + modes if mu < modes else mu - modes
    return ops[mu]


def total_number_operator(modes: int) -> np.ndarray:
    _check_modes(modes)
    states = np.arange(1 << modes)
    return np.diag(np.bitwise_count(states).astype(complex))


def number_state_index(occupations) -> int:
    """Basis index of the number state with the given 0/1 occupation list."""
    idx = 0
    for n in occupations:
        idx = (idx << 1) | int(n)
    return idx


# ---------------------------------------------------------------------------
# normally ordered polynomial algebra
# ---------------------------------------------------------------------------

Key = tuple[tuple[int, ...], tuple[int, ...]]


@dataclass
class NormalPolynomial:
    """Exact normally ordered operator polynomial.

    ``terms`` maps ``(creators, annihilators)`` (both strictly ascending
    index tuples) to a complex coefficient; the pair stands for the
    monomial ``bdag_{s1}..bdag_{sk} b_{t1}..b_{tl}``.  Keys with repeated
    indices never occur (such monomials vanish), and zero coefficients
    are pruned on construction.
    """

    modes: int
    terms: dict[Key, complex] = field(default_factory=dict)

    def __post_init__(self) -> None:
        _check_modes(self.modes)
        self.terms = {k: complex(v) for k, v in self.terms.items() if v != 0}

    @classmethod
    def identity(cls, modes: int) -> "NormalPolynomial":
        return cls(modes, {((), ()): 1.0})

    @classmethod
    def zero(cls, modes: int) -> "NormalPolynomial":
        return cls(modes, {})

    @classmethod
    def monomial(cls, modes, creators, annihilators, coeff=1.0) -> "NormalPolynomial":
        creators = tuple(creators)
        annihilators = tuple(annihilators)
        for group in (creators, annihilators):
            if list(group) != sorted(set(group)):
                raise ValueError("monomial indices must be strictly ascending")
            if group and not (0 <= min(group) and max(group) < modes):
                raise IndexError("monomial index out of range")
        return cls(modes, {(creators, annihilators): coeff})

    def copy(self) -> "NormalPolynomial":
        return NormalPolynomial(self.modes, dict(self.terms))

    def __eq__(self, other) -> bool:
        if not isinstance(other, NormalPolynomial):
            return NotImplemented
        return self.modes == other.modes and self.terms == other.terms

    def isclose(self, other: "NormalPolynomial", tol: float = 1e-12) -> bool:
        keys = set(self.terms) | set(other.terms)
        return self.modes == other.modes and all(
            abs(self.terms.get(k, 0.0) - other.terms.get(k, 0.0)) <= tol for k in keys
        )


def _sorted_with_parity(indices) -> tuple[tuple[int, ...], int] | None:
    """Ascending sort with transposition parity; None on a repeated index."""
    items = list(indices)
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(items, items[1:]):
        if a == b:
            return None
    return tuple(items), sign


def normal_order_monomial(ops) -> tuple[Key, int] | None:
    """Formally reorder a ladder sequence into normal order.

    ``ops`` is a sequence of ``(is_creator, mode)`` pairs.  This is the
    ordering *symbol* ``: ... :`` -- a pure signed rearrangement with no
    contractions; a repeated operator makes the monomial vanish (None).
    Returns the canonical key and the permutation sign.
    """
    seq = list(ops)
    creators = [i for c, i in seq if c]
    annihilators = [i for c, i in seq if not c]
    # parity of the creators-first interleaving: count annihilators that
    # precede each creator
    sign = 1
    seen_annihilators = 0
    for c, _ in seq:
        if c:
            sign *= -1 if seen_annihilators % 2 else 1
        else:
            seen_annihilators += 1
    sc = _sorted_with_parity(creators)
    sa = _sorted_with_parity(annihilators)
    if sc is None or sa is None:
        return None
    return (sc[0], sa[0]), sign * sc[1] * sa[1]


@lru_cache(maxsize=200_000)
def _reorder_product(seq: tuple[tuple[bool, int], ...]) -> tuple[tuple[Key, int], ...]:
    """Rewrite an operator *product* in canonical normal order.

    Unlike :func:`normal_order_monomial` this uses the anticommutator
    ``b_i bdag_j = delta_ij - bdag_j b_i``, so contraction terms appear.
    Returns ``(key, integer coefficient)`` pairs.
    """
    for p in range(len(seq) - 1):
        (c1, i1), (c2, i2) = seq[p], seq[p + 1]
        if (not c1) and c2:
            out: dict[Key, int] = {}
            swapped = seq[:p] + (seq[p + 1], seq[p]) + seq[p + 2 :]
            for key, coeff in _reorder_product(swapped):
                out[key] = out.get(key, 0) - coeff
            if i1 == i2:
                for key, coeff in _reorder_product(seq[:p] + seq[p + 2 :]):
                    out[key] = out.get(key, 0) + coeff
            return tuple((k, v) for k, v in out.items() if v)
    ordered = normal_order_monomial(seq)
    if ordered is None:
        return ()
    key, sign = ordered
    return ((key, sign),)


def normal_poly_multiply(p: NormalPolynomial, q: NormalPolynomial) -> NormalPolynomial:
    """Operator product ``p * q`` re-expressed in canonical normal order."""
    if p.modes != q.modes:
        raise ModeMismatchError(f"mode mismatch: {p.modes} vs {q.modes}")
    out: dict[Key, complex] = {}
    for (s1, t1), c1 in p.terms.items():
        for (s2, t2), c2 in q.terms.items():
            seq = tuple(
                [(True, i) for i in s1]
                + [(False, i) for i in t1]
                + [(True, i) for i in s2]
                + [(False, i) for i in t2]
            )
            c = c1 * c2
            for key, sign in _reorder_product(seq):
                out[key] = out.get(key, 0.0) + c * sign
    return NormalPolynomial(p.modes, out)


@lru_cache(maxsize=100_000)
def _monomial_action(
    modes: int, creators: tuple[int, ...], annihilators: tuple[int, ...]
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sparse action (rows, cols, signs) of a canonical monomial on the basis."""
    dim = 1 << modes
    cols = np.arange(dim)
    state = cols.copy()
    sign = np.ones(dim, dtype=np.int64)
    alive = np.ones(dim, dtype=bool)
    # rightmost factor acts first: annihilators in descending index order,
    # then creators likewise
    for t in reversed(annihilators):
        bit = _bit(modes, t)
        alive &= (state & bit) != 0
        sign *= 1 - 2 * _string_parity(state, modes, t)
        state = state ^ (bit * ((state & bit) != 0))
    for s in reversed(creators):
        bit = _bit(modes, s)
        alive &= (state & bit) == 0
        sign *= 1 - 2 * _string_parity(state, modes, s)
        state = state | (bit * ((state & bit) == 0))
    rows = state[alive]
    rows.setflags(write=False)
    out_cols = cols[alive]
    out_cols.setflags(write=False)
    out_sign = sign[alive]
    out_sign.setflags(write=False)
    return rows, out_cols, out_sign


def poly_to_dense(poly: NormalPolynomial) -> np.ndarray:
    """Materialise a normally ordered polynomial as a dense 2**M matrix."""
    dim = 1 << poly.modes
    out = np.zeros((dim, dim), dtype=complex)
    for (creators, annihilators), coeff in poly.terms.items():
        rows, cols, signs = _monomial_action(poly.modes, creators, annihilators)
        out[rows, cols] += coeff * signs
    return out


# ---------------------------------------------------------------------------
# unnormalised Gaussian operators
# ---------------------------------------------------------------------------


def _check_antisymmetric(a: np.ndarray, name: str, rtol: float = 1e-12) -> None:
    if a.shape[0] != a.shape[1]:
        raise NotAntisymmetricError(f"{name} must be square")
    scale = max(np.abs(a).max() if a.size else 0.0, 1.0)
    if np.abs(a + a.T).max() > rtol * scale:
        raise NotAntisymmetricError(f"{name} is not antisymmetric")


def _insert_creator(s: Key, idx: int) -> tuple[Key, int] | None:
    creators, annihilators = s
    if idx in creators:
        return None
    sign = -1 if (len(annihilators) + sum(c > idx for c in creators)) % 2 else 1
    new_creators = tuple(sorted(creators + (idx,)))
    return (new_creators, annihilators), sign


def _insert_annihilator(s: Key, idx: int) -> tuple[Key, int] | None:
    creators, annihilators = s
    if idx in annihilators:
        return None
    sign = -1 if sum(t > idx for t in annihilators) % 2 else 1
    new_annihilators = tuple(sorted(annihilators + (idx,)))
    return (creators, new_annihilators), sign


def _apply_quadratic_factor(terms, op1, op2, coeff):
    """Multiply, inside the ordering symbol, by ``(1 + coeff * op1 op2)``.

    Valid because even monomials commute under the ordering symbol, so the
    normally ordered exponential is the ordered product of its factors in
    any order.  ``op1``/``op2`` are ``(is_creator, index)`` pairs.
    """
    inserters = {True: _insert_creator, False: _insert_annihilator}
    new = dict(terms)
    for key, c in terms.items():
        step1 = inserters[op1[0]](key, op1[1])
        if step1 is None:
            continue
        key1, sign1 = step1
        step2 = inserters[op2[0]](key1, op2[1])
        if step2 is None:
            continue
        key2, sign2 = step2
        new[key2] = new.get(key2, 0.0) + coeff * c * sign1 * sign2
    return new


def gaussian_unnormalized_poly(mu, xi=None, xiplus=None) -> NormalPolynomial:
    """Expand the normally ordered Gaussian exponential exactly.

    Implements ``:exp[-bdag mu b - (b xi+ b + bdag xi bdag)/2]:`` as the
    finite product of its quadratic factors (repeated operators vanish,
    so the series terminates).  ``xi`` and ``xiplus`` are antisymmetric
    M x M matrices; omitting them gives the number-conserving case.
    """
    mu = np.asarray(mu, dtype=complex)
    modes = mu.shape[0]
    _check_modes(modes)
    if mu.shape != (modes, modes):
        raise ValueError("mu must be square")
    if xi is None:
        xi = np.zeros((modes, modes), dtype=complex)
    if xiplus is None:
        xiplus = np.zeros((modes, modes), dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    xiplus = np.asarray(xiplus, dtype=complex)
    _check_antisymmetric(xi, "xi")
    _check_antisymmetric(xiplus, "xiplus")

    terms: dict[Key, complex] = {((), ()): 1.0}
    for i, j in product(range(modes), repeat=2):
        if mu[i, j] != 0:
            terms = _apply_quadratic_factor(terms, (True, i), (False, j), -mu[i, j])
    for i in range(modes):
        for j in range(i):
            if xi[i, j] != 0:
                terms = _apply_quadratic_factor(terms, (True, i), (True, j), -xi[i, j])
            if xiplus[i, j] != 0:
                terms = _apply_quadratic_factor(
                    terms, (False, i), (False, j), -xiplus[i, j]
                )
    return NormalPolynomial(modes, terms)


def gaussian_unnormalized_dense(mu, xi=None, xiplus=None) -> np.ndarray:
    """Dense matrix of the unnormalised Gaussian (see
    :func:`gaussian_unnormalized_poly`)."""
    return poly_to_dense(gaussian_unnormalized_poly(mu, xi, xiplus))


def trace_product(ops) -> complex:
    """Trace of a product of dense operators."""
    ops = [np.asarray(op, dtype=complex) for op in ops]
    if not ops:
        raise ValueError("need at least one operator")
    dim = ops[0].shape[0]
    for op in ops:
        if op.shape != (dim, dim):
            raise DimensionMismatchError("operator dimensions do not match")
    if len(ops) == 1:
        return complex(np.trace(ops[0]))
    acc = ops[0]
    for op in ops[1:-1]:
        acc = acc @ op
    return complex(np.sum(acc * ops[-1].T))
