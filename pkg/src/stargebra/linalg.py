"""Small dense linear-algebra helpers shared by all modules."""

import numpy as np
import scipy.linalg

from .errors import DimensionMismatchError, NotHermitianError, NotNormalError, PreconditionError


def as_matrix(a, name="a"):
    """Return ``a`` as a square complex ndarray, rejecting NaN/Inf."""
    m = np.asarray(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionMismatchError("square matrix", f"{name} has shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise PreconditionError("finite entries", f"{name} contains NaN or Inf")
    return m


def as_vector(x, n=None, name="x"):
    v = np.asarray(x, dtype=complex).reshape(-1)
    if n is not None and v.shape[0] != n:
        raise DimensionMismatchError("vector dimension", f"{name} has length {v.shape[0]}, expected {n}")
    if not np.all(np.isfinite(v)):
        raise PreconditionError("finite entries", f"{name} contains NaN or Inf")
    return v


def adj(a):
    return np.conj(np.swapaxes(a, -1, -2))


def op_norm(a):
    """Operator (spectral) norm, the largest singular value."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def hermitian_defect(a):
    return op_norm(a - adj(a))


def normal_defect(a):
    return op_norm(adj(a) @ a - a @ adj(a))


def is_hermitian(a, tol=1e-10):
    return hermitian_defect(a) <= tol * max(op_norm(a), 1.0)


def is_normal(a, tol=1e-10):
    return normal_defect(a) <= tol * max(op_norm(a) ** 2, 1.0)


def require_hermitian(a, tol, where):
    if not is_hermitian(a, tol):
        raise NotHermitianError(f"{where}: input must be Hermitian",
                                f"||a - a*|| = {hermitian_defect(a):.3e}")


def require_normal(a, tol, where):
    if not is_normal(a, tol):
        raise NotNormalError(f"{where}: input must be normal",
                             f"||b*b - bb*|| = {normal_defect(a):.3e}")


def unitary_diagonalize(b, hermitian=None):
    """Eigenvalues and a unitary ``Z`` with ``b ~= Z diag(w) Z*`` for normal ``b``.

    Hermitian input goes through ``eigh``; otherwise the complex Schur form is
    used, whose triangular factor is diagonal for a normal matrix.
    """
    b = np.asarray(b, dtype=complex)
    if hermitian is None:
        hermitian = is_hermitian(b, 1e-12)
    if hermitian:
        w, z = np.linalg.eigh((b + adj(b)) / 2)
        return w.astype(complex), z
    t, z = scipy.linalg.schur(b, output="complex")
    return np.diag(t).copy(), z


def hausdorff(x, y):
    """Hausdorff distance between two finite point sets in the complex plane.

    Multiplicities are ignored; two empty sets are at distance 0 and an empty
    set is infinitely far from a non-empty one.
    """
    x = np.asarray(x, dtype=complex).reshape(-1)
    y = np.asarray(y, dtype=complex).reshape(-1)
    if x.size == 0 and y.size == 0:
        return 0.0
    if x.size == 0 or y.size == 0:
        return np.inf
    d = np.abs(x[:, None] - y[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def multiset_hausdorff(x, y):
    """Largest distance in a greedy nearest-pair matching of two multisets.

    Pairs are taken closest first.  Multisets of different size fall back to
    the set distance :func:`hausdorff`.
    """
    x = np.asarray(x, dtype=complex).reshape(-1)
    y = np.asarray(y, dtype=complex).reshape(-1)
    if x.size != y.size:
        return hausdorff(x, y)
    if x.size == 0:
        return 0.0
    d = np.abs(x[:, None] - y[None, :])
    used_x = np.zeros(x.size, dtype=bool)
    used_y = np.zeros(y.size, dtype=bool)
    worst = 0.0
    for flat in np.argsort(d, axis=None, kind="stable"):
        i, j = divmod(int(flat), y.size)
        if used_x[i] or used_y[j]:
            continue
        used_x[i] = used_y[j] = True
        worst = max(worst, float(d[i, j]))
    return worst


def orth(columns, rtol=1e-10, atol=0.0):
    """Orthonormal basis (as columns) of the column span, via SVD."""
    columns = np.asarray(columns, dtype=complex)
    if columns.size == 0:
        return np.zeros((columns.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(columns, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((columns.shape[0], 0), dtype=complex)
    keep = s > max(rtol * s[0], atol)
    return u[:, keep]


def null_space(m, rtol=1e-10, scale=None):
    """Orthonormal basis (columns) of the numerical null space of ``m``."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    if scale is None:
        scale = s[0] if s.size else 0.0
    rank = int(np.sum(s > rtol * scale)) if scale > 0 else 0
    return adj(vh[rank:])


def principal_angle(u, v):
    """Largest principal angle between the column spans of ``u`` and ``v``.

    Spans of different dimension are reported as ``pi/2``.
    """
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape[1] != v.shape[1]:
        return np.pi / 2
    if u.shape[1] == 0:
        return 0.0
    return float(np.max(scipy.linalg.subspace_angles(u, v)))


def invariant_closure(ops, x, rtol=1e-9):
    """Orthonormal basis of the smallest subspace containing ``x`` and invariant under ``ops``."""
    basis = orth(np.asarray(x, dtype=complex).reshape(-1, 1), rtol=0.0, atol=1e-300)
    if basis.shape[1] == 0:
        return basis
    frontier = basis
    while frontier.shape[1]:
        cand = np.hstack([op @ frontier for op in ops]) if len(ops) else frontier[:, :0]
        cand = cand - basis @ (adj(basis) @ cand)
        cand = cand - basis @ (adj(basis) @ cand)
        if cand.shape[1] == 0:
            break
        scale = max(op_norm(op) for op in ops)
        new = orth(cand, rtol=0.0, atol=rtol * max(scale, 1.0))
        if new.shape[1] == 0:
            break
        new = orth(new - basis @ (adj(basis) @ new), rtol=0.0, atol=0.5)
        basis = np.hstack([basis, new])
        frontier = new
    return basis


def check_same_dim(mats, where):
    dims = {np.asarray(m).shape for m in mats}
    if len(dims) > 1:
        raise DimensionMismatchError(f"{where}: common dimension", f"got shapes {sorted(dims)}")
