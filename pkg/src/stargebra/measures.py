"""Finite resolutions of the identity and the spectral theorems at matrix scale."""

from dataclasses import dataclass
from numbers import Number
from typing import Mapping

import numpy as np

from .commutant import intertwiners
from .errors import (
    DegenerateRepresentationError,
    InvalidResolutionError,
    NotCommutativeError,
    NotCyclicError,
    NumericalError,
    PreconditionError,
)
from .gelfand import DiscreteMeasure, joint_diagonalize
from .linalg import (
    adj,
    as_matrix,
    as_vector,
    check_same_dim,
    invariant_closure,
    is_normal,
    op_norm,
    orth,
    require_normal,
    unitary_diagonalize,
)


@dataclass(frozen=True)
class Resolution:
    """Finite resolution of the identity: labels paired with orthogonal projections."""

    points: tuple
    projections: np.ndarray
    tol: float = 1e-8

    def __post_init__(self):
        points = tuple(self.points)
        proj = np.array(self.projections, dtype=complex)
        if proj.ndim != 3 or proj.shape[0] != len(points):
            raise InvalidResolutionError("Resolution: one projection per point")
        proj.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "projections", proj)
        self._validate()

    def _validate(self):
        tol = self.tol
        n = self.dim
        for p in self.projections:
            if op_norm(p - adj(p)) > tol or op_norm(p @ p - p) > tol:
                raise InvalidResolutionError("Resolution: Hermitian idempotents")
        for i in range(len(self.points)):
            for j in range(i):
                if op_norm(self.projections[i] @ self.projections[j]) > tol:
                    raise InvalidResolutionError("Resolution: mutually orthogonal projections")
        if op_norm(self.projections.sum(axis=0) - np.eye(n)) > tol:
            raise InvalidResolutionError("Resolution: projections sum to identity")
        if len(set(self.points)) != len(self.points):
            raise InvalidResolutionError("Resolution: distinct labels")

    @property
    def dim(self):
        return self.projections.shape[1]

    def __len__(self):
        return len(self.points)

    @property
    def ranks(self):
        return [int(round(np.trace(p).real)) for p in self.projections]

    @property
    def support(self):
        return [pt for pt, r in zip(self.points, self.ranks) if r > 0]

    def index(self, label):
        return self.points.index(label)

    def projection(self, omega):
        """``P(ω)`` for a collection of labels."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for label in omega:
            out = out + self.projections[self.index(label)]
        return out


def _evaluate(f, point):
    try:
        val = f[point] if isinstance(f, Mapping) else f(point)
        val = complex(val)
    except (KeyError, ValueError, ZeroDivisionError, ArithmeticError, TypeError) as exc:
        raise PreconditionError("f defined on the support", f"f failed at {point!r}: {exc}") from exc
    if not np.isfinite(val):
        raise PreconditionError("f defined on the support", f"f({point!r}) is not finite")
    return val


def resolve_normal(b, tol=1e-8):
    """Spectral resolution ``b = Σ λ_i P_i`` of a normal matrix.

    Eigenvalues are clustered by single linkage at ``tol max(1, ||b||)`` and
    each cluster is labelled by its centroid.
    """
    b = as_matrix(b)
    require_normal(b, tol, "resolve_normal")
    w, z = unitary_diagonalize(b)
    thresh = tol * max(1.0, op_norm(b))
    labels = _single_linkage(w, thresh)
    points, projs = [], []
    for k in range(labels.max() + 1):
        idx = np.flatnonzero(labels == k)
        points.append(complex(np.mean(w[idx])))
        projs.append(z[:, idx] @ adj(z[:, idx]))
    order = sorted(range(len(points)), key=lambda i: (round(points[i].real, 12), round(points[i].imag, 12)))
    points = [_tidy(points[i]) for i in order]
    projs = [projs[i] for i in order]
    res = Resolution(tuple(points), np.array(projs), max(tol, 1e-8))
    err = op_norm(b - sum(p * q for p, q in zip(points, projs)))
    if err > 10 * tol * max(1.0, op_norm(b)):
        raise NumericalError(f"resolve_normal: reconstruction residual {err:.3e}")
    return res


def _tidy(z):
    """Drop a rounding-level imaginary part so real spectra get real labels."""
    return complex(z.real, 0.0) if abs(z.imag) <= 1e-14 * max(1.0, abs(z)) else z


def _single_linkage(w, thresh):
    n = len(w)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i):
            if abs(w[i] - w[j]) <= thresh:
                parent[find(i)] = find(j)
    roots = {}
    return np.array([roots.setdefault(find(i), len(roots)) for i in range(n)])


def pi_P(P, f):
    """``Σ f(λ_i) P_i``; ``f`` is a callable or a mapping from labels."""
    out = np.zeros((P.dim, P.dim), dtype=complex)
    for pt, proj, r in zip(P.points, P.projections, P.ranks):
        if r == 0:
            continue
        out = out + _evaluate(f, pt) * proj
    return out


@dataclass(frozen=True)
class VectorMeasure:
    """Weights ``||P_i x||^2`` of a vector over the points of a resolution."""

    points: tuple
    weights: np.ndarray

    @property
    def total(self):
        return float(self.weights.sum())

    def integrate(self, f):
        return complex(sum(_evaluate(f, p) * w for p, w in zip(self.points, self.weights) if w > 0))


def vector_measure(P, x):
    x = as_vector(x, P.dim)
    w = np.array([np.linalg.norm(p @ x) ** 2 for p in P.projections])
    return VectorMeasure(P.points, w)


def image_resolution(P, f):
    """Image of ``P`` under ``f``: projections with equal image labels are merged.

    Numeric labels within ``P.tol`` of each other count as equal.
    """
    images = [f(pt) for pt in P.points]
    labels, projs = [], []
    for img, proj in zip(images, P.projections):
        hit = None
        for k, lab in enumerate(labels):
            if isinstance(img, Number) and isinstance(lab, Number):
                if abs(complex(img) - complex(lab)) <= P.tol * max(1.0, abs(complex(lab))):
                    hit = k
                    break
            elif img == lab:
                hit = k
                break
        if hit is None:
            labels.append(img)
            projs.append(np.array(proj))
        else:
            projs[hit] = projs[hit] + proj
    return Resolution(tuple(labels), np.array(projs), P.tol)


def resolve_representation(rep, chars, tol=1e-8, seed=0):
    """Resolution ``π(a) = Σ_τ τ(a) P_τ`` labelled by character indices.

    ``rep[i]`` is the image of the basis element ``b_i`` of ``chars.algebra``.
    Only characters with a nonzero projection are kept.
    """
    mats = [as_matrix(m) for m in rep]
    check_same_dim(mats, "resolve_representation")
    if len(mats) != chars.values.shape[1]:
        raise PreconditionError("resolve_representation: one matrix per basis element")
    m = mats[0].shape[0]
    scale = max(1.0, max(op_norm(x) for x in mats))
    for x in mats:
        for y in mats:
            if op_norm(x @ y - y @ x) > tol * scale ** 2:
                raise NotCommutativeError("resolve_representation: commutative range")
        if not is_normal(x, tol):
            raise NotCommutativeError("resolve_representation: normal range (π a *-representation)")
    stacked = np.vstack(mats)
    sv = np.linalg.svd(stacked, compute_uv=False)
    if sv[min(m, len(sv)) - 1] <= tol * scale or len(sv) < m:
        raise DegenerateRepresentationError("resolve_representation: π non-degenerate")
    u, blocks = joint_diagonalize(mats, seed, tol)
    labels = {}
    for blk in blocks:
        v = u[:, blk]
        pattern = np.array([np.trace(adj(v) @ x @ v) / len(blk) for x in mats])
        dist = np.max(np.abs(chars.values - pattern[None, :]), axis=1)
        t = int(np.argmin(dist))
        if dist[t] > 1e-6 * scale:
            raise PreconditionError("resolve_representation: π is a representation of the character algebra",
                                    f"joint eigenvalue pattern matches no character (distance {dist[t]:.3e})")
        labels.setdefault(t, []).append(v)
    points = sorted(labels)
    projs = []
    for t in points:
        v = np.hstack(labels[t])
        projs.append(v @ adj(v))
    res = Resolution(tuple(points), np.array(projs), tol)
    err = max(op_norm(x - sum(chars.values[t, i] * p for t, p in zip(points, projs))) for i, x in enumerate(mats))
    if err > 1e-6 * scale:
        raise NumericalError(f"resolve_representation: reconstruction residual {err:.3e}")
    return res


def atom_eigen_check(P, lam, tol=None, b=None):
    """``(is_atom, eigenspace)`` for the point ``lam`` of a resolution.

    The eigenspace is an orthonormal basis (columns) of the range of
    ``P({lam})``.  A numeric ``lam`` away from every point is not an atom;
    a non-numeric label must be one of the points.  When ``b`` is given,
    ``b v = lam v`` is verified on the returned basis.
    """
    tol = P.tol if tol is None else tol
    hit = None
    for k, pt in enumerate(P.points):
        if isinstance(lam, Number) and isinstance(pt, Number):
            if abs(complex(lam) - complex(pt)) <= tol * max(1.0, abs(complex(pt))):
                hit = k
                break
        elif lam == pt:
            hit = k
            break
    if hit is None:
        if not isinstance(lam, Number):
            raise PreconditionError("atom_eigen_check: λ is a point of P", f"unknown label {lam!r}")
        return False, np.zeros((P.dim, 0), dtype=complex)
    basis = orth(P.projections[hit], rtol=0.5)
    if b is not None and basis.shape[1]:
        b = as_matrix(b)
        resid = op_norm(b @ basis - complex(P.points[hit]) * basis)
        if resid > 1e-6 * max(1.0, op_norm(b)):
            raise NumericalError(f"atom_eigen_check: eigen-equation residual {resid:.3e}")
    return basis.shape[1] > 0, basis


def fuglede_check(n1, n2, a, tol=1e-9):
    """Whether ``a n1* = n2* a`` given normal ``n1, n2`` and ``a n1 = n2 a``."""
    n1 = as_matrix(n1, "n1")
    n2 = as_matrix(n2, "n2")
    a = np.asarray(a, dtype=complex)
    require_normal(n1, tol, "fuglede_check (n1)")
    require_normal(n2, tol, "fuglede_check (n2)")
    scale = max(op_norm(a), 1e-300) * max(op_norm(n1), op_norm(n2), 1e-300)
    if op_norm(a @ n1 - n2 @ a) > tol * scale:
        raise PreconditionError("fuglede_check: a n1 = n2 a", "a does not intertwine n1 and n2")
    return bool(op_norm(a @ adj(n1) - adj(n2) @ a) <= 10 * tol * scale)


def random_intertwiner(n1, n2, rng=None):
    """Random element of the null space of ``a -> a n1 - n2 a`` (zero if trivial)."""
    rng = np.random.default_rng(rng)
    basis = intertwiners(n1, n2)
    if basis.shape[0] == 0:
        return np.zeros((np.shape(n2)[0], np.shape(n1)[0]), dtype=complex)
    c = rng.standard_normal(basis.shape[0]) + 1j * rng.standard_normal(basis.shape[0])
    return np.tensordot(c, basis, axes=1)


def spectral_representation(rep, c, chars, tol=1e-9, seed=0):
    """Spatial equivalence of a cyclic commutative representation with multiplication operators.

    Returns
    -------
    mu : DiscreteMeasure
        ``μ_τ = ||P_τ c||^2`` on the characters occurring in ``π``.
    V : ndarray
        Unitary with ``V π(a) c = (sqrt(μ_τ) τ(a))_τ``, i.e. ``π(a) c ↦ â``
        in the orthonormal basis ``δ_τ / sqrt(μ_τ)`` of ``ℓ²(μ)``; it
        satisfies ``V π(a) = diag(â) V``.
    """
    mats = [as_matrix(m) for m in rep]
    m = mats[0].shape[0]
    c = as_vector(c, m, "c")
    if abs(np.linalg.norm(c) - 1) > 1e-8:
        raise PreconditionError("spectral_representation: unit cyclic vector")
    closure = invariant_closure(mats + [adj(x) for x in mats], c, tol)
    if closure.shape[1] < m:
        raise NotCyclicError("spectral_representation: c cyclic",
                             f"closure has dimension {closure.shape[1]} < {m}")
    P = resolve_representation(mats, chars, seed=seed)
    weights = vector_measure(P, c).weights
    rows = []
    for t, proj, w in zip(P.points, P.projections, weights):
        if w <= tol:
            raise NotCyclicError("spectral_representation: c cyclic", f"character {t} carries no mass")
        rows.append(np.conj(proj @ c) / np.sqrt(w))
    V = np.array(rows)
    if op_norm(adj(V) @ V - np.eye(m)) > 1e-8:
        raise NumericalError("spectral_representation: V not unitary (multiplicity > 1?)")
    return DiscreteMeasure(list(P.points), weights), V
