"""Characters and Gelfand transforms of commutative matrix *-algebras."""

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .algebra import StarAlgebra
from .errors import (
    DimensionMismatchError,
    NotCommutativeError,
    NotInvertibleError,
    NotPositiveError,
    NumericalError,
    PreconditionError,
)
from .linalg import adj
from .states import Functional, is_positive, variation

CHAR_TOL = 1e-8
MAX_RETRIES = 8


def _hermitian_family(mats):
    out = []
    for m in mats:
        out.append((m + adj(m)) / 2)
        out.append((m - adj(m)) / 2j)
    return out


def _clusters(w, thresh):
    """Split sorted real eigenvalues wherever consecutive gaps exceed ``thresh``."""
    cuts = np.flatnonzero(np.diff(w) > thresh) + 1
    return np.split(np.arange(len(w)), cuts)


def joint_diagonalize(mats, rng=None, tol=1e-9):
    """Unitary ``U`` diagonalising a commuting family of normal matrices.

    A random real combination of the Hermitian parts is diagonalised; each
    degenerate eigenspace is refined with a fresh combination restricted to
    it, until every member acts as a scalar there.
    """
    rng = np.random.default_rng(rng)
    mats = [np.asarray(m, dtype=complex) for m in mats]
    n = mats[0].shape[0]
    herm = [h for h in _hermitian_family(mats) if np.linalg.norm(h) > 0]
    if not herm:
        return np.eye(n, dtype=complex), [np.arange(n)]
    scale = max(np.linalg.norm(h, 2) for h in herm)
    done = []
    stack = [(np.eye(n, dtype=complex), 0)]
    while stack:
        u, tries = stack.pop()
        if all(_is_scalar(adj(u) @ h @ u, tol * scale) for h in herm):
            done.append(u)
            continue
        if tries >= MAX_RETRIES:
            raise NumericalError("joint_diagonalize: refinement failed after retry cap")
        c = rng.standard_normal(len(herm))
        h = sum(ci * hi for ci, hi in zip(c, herm))
        hc = adj(u) @ h @ u
        w, v = np.linalg.eigh((hc + adj(hc)) / 2)
        groups = _clusters(w, CHAR_TOL * scale * max(1.0, np.abs(c).sum()))
        for g in groups:
            stack.append((u @ v[:, g], tries + 1 if len(groups) == 1 else 0))
    big = np.hstack(done)
    blocks, start = [], 0
    for b in done:
        blocks.append(np.arange(start, start + b.shape[1]))
        start += b.shape[1]
    return big, blocks


def _is_scalar(m, tol):
    k = m.shape[0]
    if k == 1:
        return True
    return np.linalg.norm(m - np.trace(m) / k * np.eye(k), 2) <= tol


@dataclass(frozen=True)
class CharacterSet:
    """Characters of a commutative StarAlgebra.

    ``values[t, i]`` is ``τ_t(b_i)``; ``block_pattern[t]`` lists the columns of
    ``joint_diagonalizer`` on which the algebra acts by ``τ_t``.
    """

    characters: list
    joint_diagonalizer: np.ndarray
    block_pattern: list
    values: np.ndarray
    algebra: StarAlgebra

    def __len__(self):
        return len(self.characters)

    def evaluate(self, a):
        """``(τ(a))_τ`` for a matrix ``a`` of the algebra."""
        return gelfand_transform(self.algebra.coords(a), self)


def characters(A, seed=0, tol=1e-9):
    """Characters of a commutative *-closed algebra via joint diagonalisation."""
    if not A.is_commutative(tol):
        raise NotCommutativeError("characters: A commutative")
    rng = np.random.default_rng(seed)
    for _ in range(MAX_RETRIES):
        u, blocks = joint_diagonalize(list(A.basis), rng, tol)
        diag = np.einsum("ji,kjl,li->ik", np.conj(u), A.basis, u)  # [column, basis index]
        patterns = []
        members = []
        for blk in blocks:
            p = diag[blk].mean(axis=0)
            hit = next((t for t, q in enumerate(patterns) if np.max(np.abs(p - q)) <= CHAR_TOL), None)
            if hit is None:
                patterns.append(p)
                members.append(list(blk))
            else:
                members[hit].extend(blk)
        if len(patterns) == A.dim:
            break
    else:
        raise NumericalError("characters: character count differs from algebra dimension")
    chars = []
    for cols in members:
        v = u[:, cols]
        chars.append(Functional(v @ adj(v) / len(cols), A))
    values = np.array([[f(b) for b in A.basis] for f in chars])
    return CharacterSet(chars, u, [np.array(m) for m in members], values, A)


def gelfand_transform(coords, chars):
    """``â = (τ(a))_τ`` from the coordinates of ``a``."""
    coords = np.asarray(coords, dtype=complex).reshape(-1)
    if coords.shape[0] != chars.values.shape[1]:
        raise DimensionMismatchError("gelfand_transform: coordinate length",
                                     f"got {coords.shape[0]}, expected {chars.values.shape[1]}")
    return chars.values @ coords


@dataclass(frozen=True)
class DiscreteMeasure:
    """Probability weights on a finite set of character indices."""

    support: list
    weights: np.ndarray

    def integrate(self, values):
        values = np.asarray(values)
        return complex(np.sum(values[self.support] * self.weights))


def bochner_measure(psi, chars=None, seed=0, tol=1e-9):
    """Unique probability weights ``μ`` with ``ψ(a) = Σ_τ â(τ) μ_τ``."""
    A = psi.algebra
    chars = characters(A, seed) if chars is None else chars
    if not is_positive(psi):
        raise NotPositiveError("bochner_measure: ψ positive")
    v = variation(psi)
    if abs(v - 1) > tol:
        raise PreconditionError("bochner_measure: v(ψ) = 1", f"v(ψ) = {v:.12g}")
    target = psi.on_basis()
    mu = np.linalg.solve(chars.values.T, target)
    if np.max(np.abs(mu.imag), initial=0.0) > tol:
        raise NumericalError("bochner_measure: weights not real")
    mu = mu.real
    if mu.min(initial=0.0) < -tol:
        raise NumericalError(f"bochner_measure: negative weight {mu.min():.3e}")
    resid = np.max(np.abs(chars.values.T @ mu - target), initial=0.0)
    if resid > tol:
        raise NumericalError(f"bochner_measure: reconstruction residual {resid:.3e}")
    return DiscreteMeasure(list(range(len(mu))), mu)


def dft_values(coeffs):
    """``(Σ_n a(n) ω^(kn))_k`` with ``ω = exp(2πi/N)``: the characters of ``C[Z/N]``."""
    a = np.asarray(coeffs, dtype=complex)
    return len(a) * np.fft.ifft(a)


def wiener_inverse_demo(coeffs, n=None, tol=1e-12):
    """Convolution inverse on ``C[Z/N]`` from pointwise reciprocals of the transform."""
    if isinstance(coeffs, Mapping):
        if n is None:
            raise PreconditionError("wiener_inverse_demo: N given for a coefficient map")
        a = np.zeros(n, dtype=complex)
        for k, c in coeffs.items():
            a[k % n] += c
    else:
        a = np.asarray(coeffs, dtype=complex).reshape(-1)
    ahat = dft_values(a)
    smallest = np.min(np.abs(ahat))
    if smallest <= tol * max(1.0, np.max(np.abs(ahat))):
        raise NotInvertibleError("wiener_inverse_demo: â nowhere zero",
                                 f"min |â(τ)| = {smallest:.3e}")
    return np.fft.fft(1 / ahat) / len(a)
