"""Cayley transforms, spectral integrals of large-valued symbols and unitary evolution.

Unbounded self-adjoint operators are modelled by Hermitian truncations, for
instance ``diag(1, 2, ..., N)``; on a finite resolution every symbol is
defined on the whole space.
"""

import numpy as np

from .errors import NotInvertibleError, PreconditionError
from .linalg import adj, as_matrix, as_vector, op_norm, require_hermitian
from .measures import _evaluate


def truncated_model(eigenvalue, n):
    """``diag(λ_1, ..., λ_N)`` for an eigenvalue sequence ``k -> λ_k`` (``k`` from 1)."""
    return np.diag([complex(eigenvalue(k)) for k in range(1, n + 1)])


def cayley(a, tol=1e-10):
    """``u = (a - i)(a + i)^-1``."""
    a = as_matrix(a)
    require_hermitian(a, tol, "cayley")
    e = np.eye(a.shape[0], dtype=complex)
    return np.linalg.solve(a + 1j * e, a - 1j * e)


def inverse_cayley(u, tol=1e-10):
    """``a = i (e + u)(e - u)^-1`` for a unitary ``u`` without eigenvalue 1."""
    u = as_matrix(u)
    e = np.eye(u.shape[0], dtype=complex)
    if op_norm(adj(u) @ u - e) > tol * 100:
        raise PreconditionError("inverse_cayley: u unitary", f"||u*u - e|| = {op_norm(adj(u) @ u - e):.3e}")
    gap = np.min(np.abs(np.linalg.eigvals(u) - 1))
    if gap <= tol:
        raise NotInvertibleError("inverse_cayley: 1 not in sp(u)",
                                 f"distance of sp(u) to 1 is {gap:.3e}; the inverse transform is unbounded")
    return 1j * np.linalg.solve(e - u, e + u)


def psi_P(P, f):
    """``Σ f(λ_i) P_i`` for a symbol that may take arbitrarily large finite values."""
    out = np.zeros((P.dim, P.dim), dtype=complex)
    for pt, proj, r in zip(P.points, P.projections, P.ranks):
        if r == 0:
            continue
        out = out + _evaluate(f, pt) * proj
    return out


def _eigh(a, tol):
    a = as_matrix(a)
    require_hermitian(a, tol, "evolve")
    w, v = np.linalg.eigh((a + adj(a)) / 2)
    return w, v


def propagator(a, t, tol=1e-10):
    """``U_t = exp(-i t a)`` built from the spectral resolution of ``a``."""
    w, v = _eigh(a, tol)
    return (v * np.exp(-1j * t * w)) @ adj(v)


def evolve(a, x, t, tol=1e-10):
    """``U_t x``; ``t`` may be a scalar or a 1-D array (one row per time)."""
    w, v = _eigh(a, tol)
    x = as_vector(x, w.shape[0])
    y = adj(v) @ x
    ts = np.asarray(t, dtype=float)
    phases = np.exp(-1j * np.multiply.outer(ts, w))
    return (phases * y) @ v.T


def ivp_residual(a, x, t, h, tol=1e-10):
    """``|| -(1/(i h)) (U_{t+h} x - U_t x) - a U_t x ||``, which is ``O(h)``."""
    if h == 0:
        raise PreconditionError("ivp_residual: h != 0")
    a = as_matrix(a)
    ut = evolve(a, x, t, tol)
    uth = evolve(a, x, t + h, tol)
    return float(np.linalg.norm(-(uth - ut) / (1j * h) - a @ ut))
