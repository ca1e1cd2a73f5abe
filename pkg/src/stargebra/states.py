"""Positive functionals, variation, the GNS construction and state classification."""

from dataclasses import dataclass

import numpy as np

from .algebra import StarAlgebra
from .commutant import commutant
from .errors import DegenerateRepresentationError, NotPositiveError, NumericalError, PreconditionError
from .linalg import adj, as_matrix, as_vector, check_same_dim, invariant_closure, op_norm, orth

GNS_RTOL = 1e-10


@dataclass(frozen=True)
class Functional:
    """Linear functional ``φ(a) = trace(F a)`` on a StarAlgebra."""

    F: np.ndarray
    algebra: StarAlgebra

    def __post_init__(self):
        F = as_matrix(self.F, "F")
        if F.shape[0] != self.algebra.ambient_dim:
            raise PreconditionError("Functional: F matches ambient dimension")
        F.setflags(write=False)
        object.__setattr__(self, "F", F)

    def __call__(self, a):
        return complex(np.trace(self.F @ np.asarray(a, dtype=complex)))

    def __add__(self, other):
        return Functional(self.F + other.F, self.algebra)

    def __rmul__(self, scalar):
        return Functional(scalar * self.F, self.algebra)

    def on_basis(self):
        """``(φ(b_1), ..., φ(b_k))``."""
        return np.einsum("ij,kji->k", self.F, self.algebra.basis)

    def gram(self):
        """``G_ij = φ(b_i* b_j)``."""
        b = self.algebra.basis
        prods = np.einsum("aji,bjk->abik", np.conj(b), b)
        return np.einsum("ij,abji->ab", self.F, prods)

    @classmethod
    def vector_state(cls, x, algebra):
        """``a -> <a x, x>``."""
        x = as_vector(x, algebra.ambient_dim)
        return cls(np.outer(x, np.conj(x)), algebra)

    @classmethod
    def trace_state(cls, algebra):
        n = algebra.ambient_dim
        return cls(np.eye(n) / n, algebra)


def _gram_checked(phi, tol):
    g = phi.gram()
    scale = max(float(np.max(np.abs(g), initial=0.0)), np.finfo(float).tiny)
    hermitian = np.max(np.abs(g - adj(g)), initial=0.0) <= tol * max(scale, 1.0)
    return (g + adj(g)) / 2, hermitian


def is_positive(phi, tol=1e-10):
    """Whether ``φ(a*a) >= 0`` on the algebra.

    A positive functional always has a Hermitian Gram matrix, so a Gram
    matrix that is not Hermitian beyond ``tol`` means ``φ`` is not positive.
    """
    g, hermitian = _gram_checked(phi, tol)
    if not hermitian:
        return False
    w = np.linalg.eigvalsh(g)
    top = max(abs(w[0]), abs(w[-1]))
    return bool(w[0] >= -tol * top)


def _reproducing_data(phi, tol):
    g, _ = _gram_checked(phi, tol)
    w, v = np.linalg.eigh(g)
    top = w[-1] if w.size else 0.0
    keep = w > GNS_RTOL * top if top > 0 else np.zeros_like(w, dtype=bool)
    return w, v, keep


def variation(phi, tol=1e-10):
    """Best constant ``v`` in ``|φ(a)|^2 <= v φ(a*a)``.

    Largest generalised Rayleigh quotient of the rank-one form ``|φ|^2``
    against the Gram form on the non-null directions.  Returns ``inf`` when
    ``φ`` does not vanish on the null directions and ``0`` for ``φ = 0``.
    """
    if not is_positive(phi, tol):
        raise NotPositiveError("variation: φ positive")
    f = phi.on_basis()
    w, v, keep = _reproducing_data(phi, tol)
    g = v.T @ f
    if not np.any(keep):
        return 0.0 if np.max(np.abs(f), initial=0.0) <= tol else float("inf")
    leak = np.max(np.abs(g[~keep]), initial=0.0)
    if leak > 1e-7 * max(1.0, np.max(np.abs(f))):
        return float("inf")
    return float(np.sum(np.abs(g[keep]) ** 2 / w[keep]))


@dataclass(frozen=True)
class GnsResult:
    """GNS data of a positive functional.

    ``rep[i]`` represents basis element ``b_i`` on the quotient, whose
    coordinates are given by ``quotient_map @ coords``.
    """

    quotient_dim: int
    rep: np.ndarray
    cyclic_vector: np.ndarray
    quotient_map: np.ndarray
    gram: np.ndarray
    algebra: StarAlgebra

    def represent(self, a):
        """``π_φ(a)`` for a matrix ``a`` of the algebra."""
        c = self.algebra.coords(a)
        return np.tensordot(c, self.rep, axes=1)

    def quotient_image(self, a):
        return self.quotient_map @ self.algebra.coords(a)

    def state_value(self, a):
        """``<π_φ(a) c_φ, c_φ>``."""
        c = self.cyclic_vector
        return complex(np.vdot(c, self.represent(a) @ c))


def gns(phi, tol=1e-10):
    """GNS representation of a positive functional.

    The Gram matrix ``G = V Λ V*`` is cut at ``GNS_RTOL * λ_max``; the kept
    directions give quotient coordinates ``Λ^(1/2) V*``.  Left multiplication
    in the algebra is pushed through the quotient to obtain ``π_φ``, and the
    cyclic vector is the reproducing vector ``c`` with ``<a, c> = φ(a)``.
    """
    if not is_positive(phi, tol):
        raise NotPositiveError("gns: φ positive")
    alg = phi.algebra
    w, v, keep = _reproducing_data(phi, tol)
    if not np.any(keep):
        if np.max(np.abs(phi.F)) > 0 and np.max(np.abs(phi.on_basis())) > tol:
            raise NumericalError("gns: quotient dimension 0 for a nonzero functional")
        raise PreconditionError("gns: φ nonzero", "the zero functional has no GNS representation")
    lam = w[keep]
    vk = v[:, keep]
    q = np.sqrt(lam)[:, None] * adj(vk)
    q_pinv = vk / np.sqrt(lam)[None, :]
    b = alg.basis
    k = alg.dim
    prods = np.einsum("aij,bjk->abik", b, b).reshape(k * k, -1)
    structure = (np.conj(alg.vectors()).T @ prods.T).reshape(k, k, k)  # [m, i, j]: coords of b_i b_j
    left = structure.transpose(1, 0, 2)  # left[i] maps coords x to coords of b_i x
    rep = np.einsum("mk,ikj,jl->iml", q, left, q_pinv)
    f = phi.on_basis()
    cyc = adj(q_pinv) @ np.conj(f)
    return GnsResult(int(keep.sum()), rep, cyc, q, phi.gram(), alg)


@dataclass(frozen=True)
class StateReport:
    is_positive: bool
    variation: float
    is_state: bool
    is_pure: bool
    commutant_dim: int


def classify_state(phi, tol=1e-10):
    """Positivity, variation and purity of ``φ``.

    Purity is decided on the GNS representation: it is irreducible exactly
    when its commutant is one-dimensional.
    """
    if not is_positive(phi, tol):
        raise NotPositiveError("classify_state: φ positive")
    v = variation(phi, tol)
    res = gns(phi, tol)
    cdim = commutant(list(res.rep)).dim
    is_state = bool(abs(v - 1) <= 1e-8)
    return StateReport(True, v, is_state, is_state and cdim == 1, cdim)


def decompose_cyclic(rep, seed=0, tol=1e-9):
    """Split a non-degenerate *-representation into orthogonal cyclic pieces.

    Seeds are the standard basis vectors in turn, projected onto what is not
    yet covered; a seeded random vector is used only if none is usable.

    Returns
    -------
    list of (basis, cyclic_vector)
        ``basis`` has orthonormal columns spanning an invariant subspace that
        is generated by the unit vector ``cyclic_vector``.
    """
    mats = [as_matrix(m) for m in rep]
    check_same_dim(mats, "decompose_cyclic")
    mats = mats + [adj(m) for m in mats]
    m = mats[0].shape[0]
    stacked = np.vstack(mats)
    scale = max(op_norm(x) for x in mats)
    _, sv, vh = np.linalg.svd(stacked, full_matrices=True)
    rank = int(np.sum(sv > tol * scale)) if scale > 0 else 0
    if rank < m:
        raise DegenerateRepresentationError("decompose_cyclic: π non-degenerate",
                                            f"common null space of dimension {m - rank}",
                                            null_space=adj(vh[rank:]))
    rng = np.random.default_rng(seed)
    covered = np.zeros((m, 0), dtype=complex)
    pieces = []
    while covered.shape[1] < m:
        x = None
        for j in range(m):
            e = np.zeros(m, dtype=complex)
            e[j] = 1
            r = e - covered @ (adj(covered) @ e)
            if np.linalg.norm(r) > 1e-6:
                x = r / np.linalg.norm(r)
                break
        if x is None:
            r = rng.standard_normal(m) + 1j * rng.standard_normal(m)
            r = r - covered @ (adj(covered) @ r)
            x = r / np.linalg.norm(r)
        block = invariant_closure(mats, x, tol)
        block = orth(block - covered @ (adj(covered) @ block), rtol=0.0, atol=0.5)
        pieces.append((block, x))
        covered = np.hstack([covered, block])
    return pieces


def gn_norm(coords, algebra):
    """``sup_ψ ψ(a*a)^(1/2)`` over vector states, attained at the top eigenvector of ``a*a``."""
    a = algebra.element(coords)
    aa = adj(a) @ a
    w, v = np.linalg.eigh(aa)
    x = v[:, -1]
    return float(np.sqrt(max(np.vdot(x, aa @ x).real, 0.0)))


def eigen_state_check(b, x, tol=1e-9):
    """Whether the vector state of ``x`` lies in ``E(b)``, i.e. ``|ψ(b)|^2 = ψ(b*b)``.

    Returns ``(flag, ψ(b))``; the flag is equivalent to ``b x = ψ(b) x``.
    """
    b = as_matrix(b)
    x = as_vector(x, b.shape[0])
    if abs(np.linalg.norm(x) - 1) > 1e-8:
        raise PreconditionError("eigen_state_check: unit vector", f"||x|| = {np.linalg.norm(x):.6g}")
    value = complex(np.vdot(x, b @ x))
    second = np.vdot(x, adj(b) @ (b @ x)).real
    gap = abs(abs(value) ** 2 - second)
    return bool(gap <= tol * max(op_norm(b) ** 2, 1e-300)), value
