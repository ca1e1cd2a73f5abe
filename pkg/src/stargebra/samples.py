"""Seeded random test objects: unitaries, normal and positive matrices, algebras, states."""

import numpy as np

from .algebra import build_algebra


def complex_gaussian(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_unitary(rng, n):
    q, r = np.linalg.qr(complex_gaussian(rng, (n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng, n):
    x = complex_gaussian(rng, (n, n))
    return (x + x.conj().T) / 2


def random_normal(rng, n, eigenvalues=None):
    if eigenvalues is None:
        eigenvalues = complex_gaussian(rng, n)
    u = random_unitary(rng, n)
    return (u * np.asarray(eigenvalues)) @ u.conj().T


def random_positive(rng, n, rank=None):
    rank = n if rank is None else rank
    y = complex_gaussian(rng, (n, rank))
    return y @ y.conj().T


def random_density(rng, n, rank=None):
    rho = random_positive(rng, n, rank)
    return rho / np.trace(rho).real


def random_projection(rng, n, rank):
    q = random_unitary(rng, n)[:, :rank]
    return q @ q.conj().T


def block_structure(rng, n):
    """Random ``[(block size, multiplicity), ...]`` with ``Σ size * mult = n``."""
    blocks = []
    left = n
    while left:
        size = int(rng.integers(1, min(left, 3) + 1))
        mult = int(rng.integers(1, left // size + 1))
        mult = min(mult, 2)
        blocks.append((size, mult))
        left -= size * mult
    return blocks


def random_star_algebra(rng, n, blocks=None):
    """Unitarily rotated ``⊕ M_size ⊗ 1_mult`` built from random generators.

    Returns ``(algebra, generators, blocks)``.
    """
    blocks = block_structure(rng, n) if blocks is None else blocks
    u = random_unitary(rng, n)
    gens = []
    for _ in range(2):
        parts = [np.kron(complex_gaussian(rng, (s, s)) + 2 * k * np.eye(s), np.eye(m))
                 for k, (s, m) in enumerate(blocks)]
        d = _block_diag(parts)
        gens.append(u @ d @ u.conj().T)
    return build_algebra(gens), gens, blocks


def random_commutative_algebra(rng, n, k=None):
    """Commutative *-algebra spanned by ``k`` rotated orthogonal spectral projections."""
    k = int(rng.integers(1, n + 1)) if k is None else k
    labels = np.concatenate([np.arange(k), rng.integers(0, k, n - k)])
    rng.shuffle(labels)
    values = complex_gaussian(rng, k)
    u = random_unitary(rng, n)
    b = (u * values[labels]) @ u.conj().T
    return build_algebra([b]), b


def _block_diag(parts):
    n = sum(p.shape[0] for p in parts)
    out = np.zeros((n, n), dtype=complex)
    i = 0
    for p in parts:
        k = p.shape[0]
        out[i:i + k, i:i + k] = p
        i += k
    return out
