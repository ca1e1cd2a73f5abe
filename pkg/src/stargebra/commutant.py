"""Commutants, bicommutants and the von Neumann algebras they generate."""

from dataclasses import dataclass

import numpy as np

from .algebra import StarAlgebra
from .errors import DimensionMismatchError, NotCommutativeError, PreconditionError
from .linalg import adj, as_matrix, as_vector, op_norm, orth, principal_angle

NULL_RTOL = 1e-10


@dataclass(frozen=True)
class Subspace:
    """Linear space of ``n x n`` matrices with a trace-orthonormal basis ``(k, n, n)``."""

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        n = self.ambient_dim
        basis = np.array(self.basis, dtype=complex).reshape(-1, n, n)
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self):
        return self.basis.shape[0]

    def __len__(self):
        return self.dim

    def vectors(self):
        return self.basis.reshape(self.dim, -1).T

    def project(self, x):
        v = self.vectors()
        return (v @ (np.conj(v).T @ np.asarray(x, dtype=complex).reshape(-1))).reshape(x.shape)

    def contains(self, x, tol=1e-9):
        x = np.asarray(x, dtype=complex)
        return np.linalg.norm(x - self.project(x)) <= tol * max(1.0, np.linalg.norm(x))

    def angle(self, other):
        """Largest principal angle to another space of matrices (``pi/2`` if dimensions differ)."""
        return principal_angle(self.vectors(), _as_vectors(other))

    def same_span(self, other, tol=1e-10):
        return self.angle(other) <= tol

    def includes(self, other, tol=1e-9):
        """True when every basis matrix of ``other`` lies in this space."""
        return all(self.contains(b, tol) for b in _as_basis(other))

    def is_algebra(self, tol=1e-9):
        b = self.basis
        prods = np.einsum("aij,bjk->abik", b, b).reshape(-1, self.ambient_dim, self.ambient_dim)
        return all(self.contains(p, tol) for p in prods)

    def is_star_closed(self, tol=1e-9):
        return all(self.contains(adj(b), tol) for b in self.basis)

    def is_commutative(self, tol=1e-9):
        b = self.basis
        comm = np.einsum("aij,bjk->abik", b, b) - np.einsum("bij,ajk->abik", b, b)
        return float(np.max(np.abs(comm), initial=0.0)) <= tol


def _as_basis(space):
    if isinstance(space, (Subspace, StarAlgebra)):
        return space.basis
    return np.asarray(space, dtype=complex)


def _as_vectors(space):
    b = _as_basis(space)
    return b.reshape(b.shape[0], -1).T


def _matrices(S, n=None):
    if isinstance(S, (Subspace, StarAlgebra)):
        return list(S.basis), S.ambient_dim
    mats = [as_matrix(s) for s in S]
    dims = {m.shape[0] for m in mats}
    if len(dims) > 1:
        raise DimensionMismatchError("commutant: common dimension", f"got {sorted(dims)}")
    if mats:
        n = mats[0].shape[0]
    if n is None:
        raise PreconditionError("commutant: dimension known", "empty set needs n")
    return mats, n


def _commutator_map(s, t=None):
    """Matrix of ``x -> x s - t x`` on row-major ``vec(x)`` (``t`` defaults to ``s``)."""
    t = s if t is None else t
    n = s.shape[0]
    eye = np.eye(n)
    return np.kron(eye, s.T) - np.kron(t, eye)


def joint_intertwiners(pairs, n_in, n_out=None, rtol=NULL_RTOL):
    """Orthonormal basis of ``{x : x s = t x for all (s, t)}``.

    ``x`` maps the space of ``s`` (dimension ``n_in``) into that of ``t``.
    The joint null space is found by restricting successively: a random
    combination first, which cuts the space down cheaply, then each pair.
    Singular values below ``rtol * 2 max ||s||, ||t||`` count as zero.
    """
    n_out = n_in if n_out is None else n_out
    pairs = [(np.asarray(s, dtype=complex), np.asarray(t, dtype=complex)) for s, t in pairs]
    dim = n_in * n_out
    if not pairs:
        return np.eye(dim, dtype=complex).T.reshape(-1, n_out, n_in)
    scale = 2 * max(max(op_norm(s), op_norm(t)) for s, t in pairs)
    if scale == 0:
        return np.eye(dim, dtype=complex).T.reshape(-1, n_out, n_in)
    rng = np.random.default_rng(0)
    w = rng.standard_normal(len(pairs))
    w /= np.abs(w).sum()
    mix = (sum(c * s for c, (s, _) in zip(w, pairs)), sum(c * t for c, (_, t) in zip(w, pairs)))
    basis = np.eye(dim, dtype=complex)
    for s, t in [mix] + pairs:
        if basis.shape[1] == 0:
            break
        k = np.kron(np.eye(n_out), s.T) - np.kron(t, np.eye(n_in))
        m = k @ basis
        _, sv, vh = np.linalg.svd(m, full_matrices=True)
        rank = int(np.sum(sv > rtol * scale))
        basis = basis @ adj(vh[rank:])
        basis, _ = np.linalg.qr(basis)
    return basis.T.reshape(-1, n_out, n_in)


def commutant(S, n=None):
    """``S' = {x : x s = s x for all s in S}`` as a :class:`Subspace`."""
    mats, n = _matrices(S, n)
    basis = joint_intertwiners([(s, s) for s in mats], n)
    return Subspace(n, basis)


def intertwiners(n1, n2):
    """Basis of ``{a : a n1 = n2 a}``, the null space of a Sylvester map."""
    n1 = as_matrix(n1, "n1")
    n2 = as_matrix(n2, "n2")
    return joint_intertwiners([(n1, n2)], n1.shape[0], n2.shape[0])


def bicommutant(S, n=None):
    mats, n = _matrices(S, n)
    return commutant(commutant(mats, n), n)


def wstar(S, n=None):
    """Von Neumann algebra ``(S ∪ S*)''`` generated by ``S``."""
    mats, n = _matrices(S, n)
    return bicommutant(mats + [adj(m) for m in mats], n)


def center(A):
    """``A ∩ A'`` for a StarAlgebra or Subspace."""
    b = _as_basis(A)
    k, n = b.shape[0], b.shape[1]
    # coefficients c with Σ c_i [b_i, b_j] = 0 for every j
    comm = np.einsum("aij,bjk->abik", b, b) - np.einsum("bij,ajk->abik", b, b)
    m = comm.transpose(1, 2, 3, 0).reshape(-1, k)
    scale = max(float(np.max(np.abs(m), initial=0.0)), 1.0)
    _, sv, vh = np.linalg.svd(m, full_matrices=True)
    rank = int(np.sum(sv > NULL_RTOL * scale))
    coeffs = adj(vh[rank:]).T
    mats = np.tensordot(coeffs, b, axes=1)
    cols = orth(mats.reshape(mats.shape[0], -1).T, rtol=0.0, atol=NULL_RTOL)
    return Subspace(n, cols.T.reshape(-1, n, n))


def is_maximal_commutative(A, tol=1e-10):
    """``A`` is maximal commutative exactly when ``A' = A``."""
    if not A.is_commutative(1e-9):
        raise NotCommutativeError("is_maximal_commutative: A commutative")
    return commutant(A).angle(A) <= tol * 100 and commutant(A).dim == A.dim


def is_von_neumann(A, tol=1e-10):
    return bicommutant(A).angle(A) <= tol


def projections_span_check(A, tol=1e-9):
    """Whether the spectral projections of Hermitian elements of ``A`` span ``A``."""
    from .measures import resolve_normal

    if not is_von_neumann(A, 1e-8):
        raise PreconditionError("projections_span_check: A = A''", "input is not bicommutant-closed")
    projections = []
    for b in _as_basis(A):
        for h in ((b + adj(b)) / 2, (b - adj(b)) / 2j):
            if np.linalg.norm(h) <= 1e-12:
                continue
            projections.extend(resolve_normal(h).projections)
    if not projections:
        return False
    cols = np.array([p.reshape(-1) for p in projections]).T
    span = orth(cols, rtol=1e-8)
    return principal_angle(span, _as_vectors(A)) <= tol


def cyclic_separating_duality(A, x, tol=1e-9):
    """``(x cyclic for A, x separating for A')``; the two always agree."""
    b = _as_basis(A)
    n = b.shape[1]
    x = as_vector(x, n)
    nx = np.linalg.norm(x)
    if abs(nx - 1) > 1e-8:
        raise PreconditionError("cyclic_separating_duality: unit vector", f"||x|| = {nx:.6g}")
    orbit = np.einsum("kij,j->ik", b, x)
    sv = np.linalg.svd(orbit, compute_uv=False)
    cyclic = sv.size >= n and sv[n - 1] > tol * max(sv[0], 1e-300)
    comm = commutant(list(b), n).basis
    images = np.einsum("kij,j->ik", comm, x)
    sv2 = np.linalg.svd(images, compute_uv=False)
    separating = bool(sv2[-1] > tol)
    return bool(cyclic), separating
