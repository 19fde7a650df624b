"""JSON serialisation of matrices, parameters and decompositions.

Complex numbers are two-element arrays ``[re, im]``; matrices are
row-major nested arrays of those with explicit ``rows``/``cols``.
Python's shortest-round-trip float formatting makes the encoding
bit-exact at double precision.
"""

from __future__ import annotations

import json

import numpy as np

from .decompose import Decomposition, LimitFamily
from .errors import ParseError, ValidationError
from .gaussian import GaussianParams

__all__ = [
    "encode_complex",
    "decode_complex",
    "encode_matrix",
    "decode_matrix",
    "encode_params",
    "decode_params",
    "encode_decomposition",
    "decode_decomposition",
    "dumps",
    "load_json",
]


def encode_complex(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def decode_complex(obj) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, list) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    raise ParseError(f"expected [re, im] or a real number, got {obj!r}")


def encode_matrix(a) -> dict:
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    return {
        "rows": a.shape[0],
        "cols": a.shape[1],
        "data": [[encode_complex(z) for z in row] for row in a],
    }


def decode_matrix(obj) -> np.ndarray:
    try:
        rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    except (KeyError, TypeError) as exc:
        raise ParseError("matrix objects need rows/cols/data") from exc
    if len(data) != rows or any(len(r) != cols for r in data):
        raise ValidationError("matrix data does not match rows/cols")
    return np.array([[decode_complex(z) for z in row] for row in data])


def encode_params(params: GaussianParams) -> dict:
    return {
        "omega": encode_complex(params.omega),
        "n": encode_matrix(params.n),
        "m": encode_matrix(params.m),
        "mplus": encode_matrix(params.mplus),
    }


def decode_params(obj) -> GaussianParams:
    try:
        omega = decode_complex(obj.get("omega", 1.0))
        n = decode_matrix(obj["n"])
    except (KeyError, AttributeError) as exc:
        raise ParseError("params objects need at least an 'n' matrix") from exc
    m = decode_matrix(obj["m"]) if "m" in obj else None
    mplus = decode_matrix(obj["mplus"]) if "mplus" in obj else None
    return GaussianParams(omega, n, m, mplus)


def encode_decomposition(decomp: Decomposition) -> dict:
    return {
        "modes": decomp.modes,
        "terms": [
            {"weight": w, "params": encode_params(p)} for w, p in decomp.terms
        ],
        "families": [
            {
                "ket": list(f.ket),
                "bra": list(f.bra),
                "coefficient": encode_complex(f.coefficient),
                "weight": f.weight,
                "exponent": f.exponent,
                "epsilons": list(f.epsilons),
            }
            for f in decomp.families
        ],
    }


def decode_decomposition(obj) -> Decomposition:
    try:
        decomp = Decomposition(int(obj["modes"]))
        for term in obj.get("terms", []):
            decomp.terms.append((float(term["weight"]), decode_params(term["params"])))
        for fam in obj.get("families", []):
            decomp.families.append(
                LimitFamily(
                    ket=tuple(int(x) for x in fam["ket"]),
                    bra=tuple(int(x) for x in fam["bra"]),
                    coefficient=decode_complex(fam["coefficient"]),
                    weight=float(fam["weight"]),
                    exponent=int(fam["exponent"]),
                    epsilons=tuple(float(e) for e in fam.get("epsilons", (0.1, 0.01, 0.001))),
                )
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed decomposition: {exc}") from exc
    return decomp


def dumps(obj) -> str:
    """Deterministic JSON text (sorted keys, two-space indent)."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON in {path}: {exc}") from exc
