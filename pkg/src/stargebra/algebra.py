"""Finite-dimensional matrix *-algebras, group rings and element decompositions."""

from dataclasses import dataclass, field
from itertools import permutations
from typing import Mapping

import numpy as np

from .errors import DimensionMismatchError, InvalidGroupError, PreconditionError
from .linalg import adj, as_matrix, check_same_dim, principal_angle

DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class StarAlgebra:
    """A unital or non-unital *-closed subalgebra of ``M_n``.

    ``basis`` has shape ``(k, n, n)`` and is orthonormal for the trace inner
    product ``<x, y> = trace(y* x)``.
    """

    ambient_dim: int
    basis: np.ndarray
    unital: bool
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        basis = np.array(self.basis, dtype=complex).reshape(-1, self.ambient_dim, self.ambient_dim)
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self):
        return self.basis.shape[0]

    def __len__(self):
        return self.dim

    @property
    def identity(self):
        return np.eye(self.ambient_dim, dtype=complex)

    def vectors(self):
        """Basis flattened to the columns of an ``n^2 x k`` matrix."""
        return self.basis.reshape(self.dim, -1).T

    def coords(self, a):
        """Coordinates of ``a`` (or its orthogonal projection) in the stored basis."""
        a = np.asarray(a, dtype=complex)
        if a.shape != (self.ambient_dim, self.ambient_dim):
            raise DimensionMismatchError("element dimension", f"got {a.shape}")
        return np.conj(self.vectors()).T @ a.reshape(-1)

    def element(self, coords):
        coords = np.asarray(coords, dtype=complex).reshape(-1)
        if coords.shape[0] != self.dim:
            raise DimensionMismatchError("coordinate length", f"got {coords.shape[0]}, basis has {self.dim}")
        return np.tensordot(coords, self.basis, axes=1)

    def project(self, a):
        return self.element(self.coords(a))

    def residual(self, a):
        """Hilbert-Schmidt distance from ``a`` to the span of the basis."""
        a = np.asarray(a, dtype=complex)
        return float(np.linalg.norm(a - self.project(a)))

    def contains(self, a, tol=None):
        tol = self.tol if tol is None else tol
        return self.residual(a) <= tol * max(1.0, float(np.linalg.norm(a)))

    def closure_defect(self):
        """Largest residual of a basis product or basis adjoint outside the span."""
        worst = 0.0
        for b in self.basis:
            worst = max(worst, self.residual(adj(b)))
            prods = np.einsum("ij,kjl->kil", b, self.basis)
            for p in prods:
                worst = max(worst, self.residual(p))
        return worst

    def is_commutative(self, tol=None):
        tol = self.tol if tol is None else tol
        b = self.basis
        comm = np.einsum("aij,bjk->abik", b, b) - np.einsum("bij,ajk->abik", b, b)
        return float(np.max(np.abs(comm), initial=0.0)) <= tol

    def same_span(self, other, tol=1e-10):
        return principal_angle(self.vectors(), _vectors(other)) <= tol


def _vectors(space):
    if hasattr(space, "vectors"):
        return space.vectors()
    arr = np.asarray(space, dtype=complex)
    return arr.reshape(arr.shape[0], -1).T


def _absorb(basis_cols, candidates, tol):
    """Append orthonormal directions of ``candidates`` not already spanned.

    Candidates are products of unit-norm basis elements (or normalised
    seeds), so ``tol`` acts as a relative residual threshold.
    """
    if candidates.shape[1] == 0:
        return basis_cols, basis_cols[:, :0]
    for _ in range(2):
        candidates = candidates - basis_cols @ (np.conj(basis_cols).T @ candidates)
    res = np.linalg.norm(candidates, axis=0)
    candidates = candidates[:, res > tol]
    if candidates.shape[1] == 0:
        return basis_cols, basis_cols[:, :0]
    u, s, _ = np.linalg.svd(candidates, full_matrices=False)
    new = u[:, s > tol * max(1.0, s[0])]
    for _ in range(2):
        new = new - basis_cols @ (np.conj(basis_cols).T @ new)
    new, _ = np.linalg.qr(new)
    return np.hstack([basis_cols, new]), new


def _unit_columns(cols):
    norms = np.linalg.norm(cols, axis=0)
    keep = norms > 0
    return cols[:, keep] / norms[keep]


def build_algebra(generators, tol=DEFAULT_TOL, n=None):
    """Smallest unital *-subalgebra of ``M_n`` containing ``generators``.

    Breadth-first closure: adjoints and products against the current basis
    are Gram-Schmidt orthogonalised in the trace inner product until a full
    pass adds nothing above ``tol`` (residual of a product of unit-norm
    basis elements).

    Parameters
    ----------
    generators : sequence of (n, n) array_like
    tol : float
        Relative residual below which a candidate is considered spanned.
    n : int, optional
        Ambient dimension; required only when ``generators`` is empty.
    """
    if tol <= 0:
        raise PreconditionError("build_algebra: tol > 0", f"got {tol}")
    gens = [as_matrix(g, "generator") for g in generators]
    check_same_dim(gens, "build_algebra")
    if gens:
        n = gens[0].shape[0]
    elif n is None:
        n = 1
    eye = np.eye(n, dtype=complex).reshape(-1, 1)
    basis = eye / np.sqrt(n)
    seeds = np.array([g.reshape(-1) for g in gens] + [adj(g).reshape(-1) for g in gens]).T
    if seeds.size:
        basis, _ = _absorb(basis, _unit_columns(seeds), tol)
        frontier = basis
    else:
        frontier = basis[:, :0]
    while frontier.shape[1]:
        F = frontier.T.reshape(-1, n, n)
        B = basis.T.reshape(-1, n, n)
        cands = [
            np.einsum("aij,bjk->abik", F, B).reshape(-1, n * n),
            np.einsum("bij,ajk->abik", B, F).reshape(-1, n * n),
            adj(F).reshape(-1, n * n),
        ]
        basis, frontier = _absorb(basis, np.vstack(cands).T, tol)
    return StarAlgebra(n, basis.T.reshape(-1, n, n), unital=True, tol=tol)


def algebra_from_basis(matrices, unital=None, tol=DEFAULT_TOL):
    """Wrap a spanning set that is already *-closed into a StarAlgebra.

    The set is orthonormalised; ``unital`` is detected when not given.
    """
    mats = [as_matrix(m) for m in matrices]
    check_same_dim(mats, "algebra_from_basis")
    n = mats[0].shape[0]
    cols = np.array([m.reshape(-1) for m in mats]).T
    basis, _ = _absorb(np.zeros((n * n, 0), dtype=complex), _unit_columns(cols), tol)
    alg = StarAlgebra(n, basis.T.reshape(-1, n, n), unital=False, tol=tol)
    if unital is None:
        unital = alg.contains(np.eye(n), tol=1e-8)
    return StarAlgebra(n, alg.basis, unital=bool(unital), tol=tol)


def unitize(algebra):
    """Adjoin the ambient identity unless it is already in the span."""
    eye = np.eye(algebra.ambient_dim, dtype=complex)
    if algebra.contains(eye, tol=max(algebra.tol, 1e-8)):
        return StarAlgebra(algebra.ambient_dim, algebra.basis, True, algebra.tol)
    basis, _ = _absorb(algebra.vectors(), _unit_columns(eye.reshape(-1, 1)), algebra.tol)
    n = algebra.ambient_dim
    return StarAlgebra(n, basis.T.reshape(-1, n, n), True, algebra.tol)


def hermitian_parts(a):
    """Split ``a = h + i k`` with ``h``, ``k`` Hermitian."""
    a = as_matrix(a)
    h = (a + adj(a)) / 2
    k = (a - adj(a)) / 2j
    return h, k


# --- group rings -----------------------------------------------------------


@dataclass(frozen=True)
class GroupRingSpec:
    """A finite group given by its 0-indexed Cayley table, plus coefficients.

    Element 0 need not be the identity; it is located from the table.
    """

    table: np.ndarray
    coefficients: Mapping[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        table = np.array(self.table, dtype=int)
        table.setflags(write=False)
        object.__setattr__(self, "table", table)
        validate_table(table)

    @classmethod
    def cyclic(cls, order, coefficients=None):
        return cls(cyclic_table(order), dict(coefficients or {}))

    @property
    def order(self):
        return self.table.shape[0]

    @property
    def identity(self):
        return group_identity(self.table)

    def inverse(self, g):
        return int(np.flatnonzero(self.table[g] == self.identity)[0])


def cyclic_table(order):
    if order < 1:
        raise InvalidGroupError("cyclic group order N >= 1", f"got {order}")
    idx = np.arange(order)
    return (idx[:, None] + idx[None, :]) % order


def symmetric_table(k):
    """Cayley table of the symmetric group on ``k`` letters (composition p∘q)."""
    perms = list(permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    return np.array([[index[tuple(p[q[j]] for j in range(k))] for q in perms] for p in perms])


def group_identity(table):
    n = table.shape[0]
    for e in range(n):
        if np.array_equal(table[e], np.arange(n)) and np.array_equal(table[:, e], np.arange(n)):
            return e
    raise InvalidGroupError("group_ring: identity element", "Cayley table has no identity")


def validate_table(table):
    table = np.asarray(table)
    if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] < 1:
        raise InvalidGroupError("group_ring: square Cayley table", f"shape {table.shape}")
    n = table.shape[0]
    if table.min() < 0 or table.max() >= n:
        raise InvalidGroupError("group_ring: closed operation", "entries out of range")
    e = group_identity(table)
    for g in range(n):
        if not np.any(table[g] == e) or not np.any(table[:, g] == e):
            raise InvalidGroupError("group_ring: inverses", f"element {g} has no inverse")
    # (gh)k == g(hk) for all triples, vectorised
    left = table[table, :]  # left[g, h, k] = table[table[g, h], k]
    right = table[:, table]  # right[g, h, k] = table[g, table[h, k]]
    if not np.array_equal(left, right):
        raise InvalidGroupError("group_ring: associativity", "Cayley table is not associative")


def regular_matrix(table, g):
    """Left-regular matrix of ``g``: it sends basis vector ``h`` to ``gh``."""
    n = table.shape[0]
    m = np.zeros((n, n), dtype=complex)
    m[table[g], np.arange(n)] = 1.0
    return m


def group_ring(spec):
    """Left-regular realisation of the group ring ``C[G]``.

    Returns
    -------
    algebra : StarAlgebra
        Spanned by the (mutually orthogonal) permutation matrices ``δ_g``.
    embedding : dict
        Maps each group element index to its permutation matrix.
    """
    if not isinstance(spec, GroupRingSpec):
        spec = GroupRingSpec(spec)
    n = spec.order
    embedding = {g: regular_matrix(spec.table, g) for g in range(n)}
    basis = np.array([embedding[g] for g in range(n)]) / np.sqrt(n)
    return StarAlgebra(n, basis, unital=True), embedding


def group_element(spec, coefficients=None):
    """Matrix ``Σ a(g) δ_g`` of a coefficient map in the left-regular representation."""
    if not isinstance(spec, GroupRingSpec):
        spec = GroupRingSpec(spec)
    coefficients = spec.coefficients if coefficients is None else coefficients
    out = np.zeros((spec.order, spec.order), dtype=complex)
    for g, c in _items(coefficients):
        out += c * regular_matrix(spec.table, g)
    return out


def convolve(a, b, table):
    """Convolution ``(a*b)(k) = Σ_{gh=k} a(g) b(h)`` of coefficient vectors."""
    table = np.asarray(table)
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    out = np.zeros(table.shape[0], dtype=complex)
    np.add.at(out, table.reshape(-1), np.outer(a, b).reshape(-1))
    return out


def group_adjoint(a, table):
    """Coefficients of ``a* = Σ conj(a(g)) δ_{g^-1}``."""
    table = np.asarray(table)
    e = group_identity(table)
    inv = np.array([np.flatnonzero(row == e)[0] for row in table])
    a = np.asarray(a, dtype=complex)
    out = np.zeros_like(a)
    out[inv] = np.conj(a)
    return out


def _items(coeffs):
    if isinstance(coeffs, Mapping):
        return coeffs.items()
    return enumerate(np.asarray(coeffs, dtype=complex).reshape(-1))


def ell1_norm(coeffs):
    """``Σ_g |a(g)|`` for a finitely supported coefficient map or vector."""
    return float(sum(abs(c) for _, c in _items(coeffs)))


def weighted_norm(coeffs, gamma):
    """``Σ_n |a(n)| γ^n`` on ``C[Z]``; ``coeffs`` maps integers to scalars."""
    return float(sum(abs(c) * float(gamma) ** n for n, c in coeffs.items()))


def counterexample_ratio(gamma, n):
    """Growth of ``|τ(δ_{-n})| / |δ_{-n}|`` for a Hermitian character of ``C[Z]``.

    Under the weighted norm ``|a| = Σ |a(n)| γ^n`` (``γ > 1``) the point
    masses ``δ_{-n}`` shrink like ``γ^{-n}`` while every Hermitian character
    sends them to the unit circle, so the ratio is ``γ^n``: the character is
    unbounded.  The character used here is evaluation at ``u = 1``.
    """
    if not gamma > 1:
        raise PreconditionError("counterexample_ratio: gamma > 1", f"got {gamma}")
    if n < 0:
        raise PreconditionError("counterexample_ratio: n >= 0", f"got {n}")
    delta = {-n: 1.0}
    u = 1.0 + 0.0j
    tau = sum(c * u ** k for k, c in delta.items())
    return abs(tau) / weighted_norm(delta, gamma)
