"""JSON conventions: complex numbers are ``[re, im]`` pairs, matrices are row-major."""

import json

import numpy as np

from .algebra import GroupRingSpec, build_algebra, cyclic_table, group_ring
from .errors import PreconditionError
from .spectral import RationalFn


class InputError(ValueError):
    """Malformed input document; ``position`` is ``(line, column)`` when known."""

    def __init__(self, message, position=None):
        self.position = position
        where = f" at line {position[0]}, column {position[1]}" if position else ""
        super().__init__(f"{message}{where}")


def load_json(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: {exc.msg}", (exc.lineno, exc.colno)) from exc


def to_complex(x):
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise InputError(f"complex entry must be [re, im], got {x!r}")
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, (int, float)):
        return complex(x)
    raise InputError(f"not a number: {x!r}")


def matrix_from_json(rows):
    try:
        m = np.array([[to_complex(v) for v in row] for row in rows], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InputError(f"matrix must be a list of equal-length rows of [re, im] pairs ({exc})") from exc
    if m.ndim != 2:
        raise InputError("matrix must be a list of equal-length rows")
    return m


def vector_from_json(data):
    if isinstance(data, dict):
        data = data.get("x", data.get("vector"))
    return np.array([to_complex(v) for v in data], dtype=complex)


def complex_to_json(z):
    z = complex(z)
    return [float(z.real), float(z.imag)]


def array_to_json(a):
    a = np.asarray(a)
    if a.ndim == 0:
        return complex_to_json(a)
    return [array_to_json(x) for x in a]


def matrix_input(data):
    """A bare matrix or ``{"matrix": ...}``."""
    if isinstance(data, dict):
        if "matrix" not in data:
            raise InputError("expected a 'matrix' field")
        data = data["matrix"]
    return matrix_from_json(data)


def group_spec_from_json(data):
    g = data["group"]
    if "cyclic" in g:
        table = cyclic_table(int(g["cyclic"]))
    elif "table" in g:
        table = np.array(g["table"], dtype=int)
    else:
        raise InputError("group must be {'cyclic': N} or {'table': [[...]]}")
    coeffs = {int(k): to_complex(v) for k, v in data.get("coefficients", {}).items()}
    return GroupRingSpec(table, coeffs)


def algebra_from_json(data, tol=1e-10):
    """Algebra document: ``{"ambient_dim", "generators"}`` or a group spec.

    Returns ``(algebra, generators)``; for a group ring the generators are
    the permutation matrices of the group elements.
    """
    if not isinstance(data, dict):
        raise InputError("algebra document must be a JSON object")
    if "group" in data:
        spec = group_spec_from_json(data)
        alg, emb = group_ring(spec)
        return alg, [emb[g] for g in range(spec.order)]
    if "generators" not in data:
        raise InputError("algebra document needs 'generators' or 'group'")
    gens = [matrix_from_json(g) for g in data["generators"]]
    n = data.get("ambient_dim")
    if n is not None:
        for g in gens:
            if g.shape != (n, n):
                raise PreconditionError("build_algebra: generators match ambient_dim",
                                        f"generator of shape {g.shape}, ambient_dim {n}")
    return build_algebra(gens, tol=tol, n=n), gens


def rational_from_json(data):
    return RationalFn(tuple(to_complex(c) for c in data["num"]),
                      tuple(to_complex(c) for c in data.get("den", [[1, 0]])))


def functional_matrix_from_json(data):
    return matrix_from_json(data["F"])


def rep_from_json(data):
    return [matrix_from_json(m) for m in (data["rep"] if isinstance(data, dict) else data)]
