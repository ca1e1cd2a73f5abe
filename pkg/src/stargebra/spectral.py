"""Spectra, spectral radius, the Pták function and functional calculus of matrices."""

from dataclasses import dataclass

import numpy as np

from .errors import (
    NotInvertibleError,
    NotPositiveError,
    NumericalError,
    PoleOnSpectrumError,
    PreconditionError,
)
from .linalg import (
    adj,
    as_matrix,
    is_hermitian,
    op_norm,
    require_hermitian,
    require_normal,
    unitary_diagonalize,
)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of a matrix, repeated according to algebraic multiplicity."""

    eigenvalues: np.ndarray
    tol: float = 1e-10

    def __len__(self):
        return len(self.eigenvalues)

    def __iter__(self):
        return iter(self.eigenvalues)

    @property
    def radius(self):
        return float(np.max(np.abs(self.eigenvalues), initial=0.0))

    def nonzero(self, tol=None):
        tol = self.tol if tol is None else tol
        return self.eigenvalues[np.abs(self.eigenvalues) > tol]


def spectrum(a, tol=1e-10):
    """Spectrum of ``a`` with multiplicity.

    Hermitian input is routed to the symmetric solver so its eigenvalues come
    back exactly real.  Zero appears whenever ``a`` is singular, which covers
    every element of a non-unital subalgebra (such an algebra contains no
    invertible matrix).
    """
    a = as_matrix(a)
    if is_hermitian(a, tol):
        w = np.linalg.eigvalsh((a + adj(a)) / 2).astype(complex)
    else:
        w = np.linalg.eigvals(a)
    order = np.lexsort((w.imag, w.real))
    return Spectrum(w[order], tol)


def spectral_radius(a):
    return spectrum(a).radius


def spectral_radius_limit(a, k):
    """``||a^(2^k)||^(1/2^k)`` by ``k`` normalised squarings.

    Each square is rescaled to unit operator norm and the logarithm of the
    discarded factor is accumulated, so the huge or tiny powers never
    materialise.
    """
    a = as_matrix(a)
    if k < 0:
        raise PreconditionError("spectral_radius_limit: k >= 0", f"got {k}")
    s = op_norm(a)
    if s == 0:
        return 0.0
    b = a / s
    log_norm = np.log(s)
    for _ in range(k):
        b = b @ b
        s = op_norm(b)
        if s == 0:
            return 0.0
        b = b / s
        log_norm = 2 * log_norm + np.log(s)
    return float(np.exp(log_norm / 2.0 ** k))


def ptak(a):
    """``r_λ(a*a)^(1/2)``, the largest singular value of ``a``."""
    a = as_matrix(a)
    w = np.linalg.eigvalsh(adj(a) @ a)
    return float(np.sqrt(max(w[-1], 0.0)))


# --- rational functions ----------------------------------------------------


@dataclass(frozen=True)
class RationalFn:
    """``num(z) / den(z)`` with coefficient lists in ascending degree."""

    num: tuple
    den: tuple = (1.0,)

    def __post_init__(self):
        num = _trim(self.num)
        den = _trim(self.den)
        if not np.any(den):
            raise PreconditionError("RationalFn: denominator not identically zero")
        object.__setattr__(self, "num", tuple(complex(c) for c in num))
        object.__setattr__(self, "den", tuple(complex(c) for c in den))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.polyval(self.num[::-1], z) / np.polyval(self.den[::-1], z)

    def factors(self, tol=1e-8):
        """``(γ, zeros, poles)`` with ``r(x) = γ Π(α - x) / Π(β - x)`` and common roots cancelled."""
        zeros = list(np.roots(self.num[::-1])) if len(self.num) > 1 else []
        poles = list(np.roots(self.den[::-1])) if len(self.den) > 1 else []
        gamma = self.num[-1] * (-1) ** len(zeros) / (self.den[-1] * (-1) ** len(poles))
        kept = []
        for z in zeros:
            hit = next((i for i, p in enumerate(poles) if abs(p - z) <= tol * (1 + abs(p))), None)
            if hit is None:
                kept.append(z)
            else:
                poles.pop(hit)
        return complex(gamma), np.array(kept, dtype=complex), np.array(poles, dtype=complex)

    @property
    def poles(self):
        return self.factors()[2]

    def is_constant(self):
        _, zeros, poles = self.factors()
        return zeros.size == 0 and poles.size == 0


def _trim(coeffs):
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    nz = np.flatnonzero(c)
    if nz.size == 0:
        return c[:1] if c.size else np.zeros(1, dtype=complex)
    return c[: nz[-1] + 1]


def rational_apply(a, r, tol=1e-8):
    """``r(a) = γ Π(α_i e - a) Π(β_j e - a)^-1`` via one linear solve per pole."""
    a = as_matrix(a)
    if r.is_constant():
        raise PreconditionError("rational_apply: r non-constant")
    gamma, zeros, poles = r.factors()
    sp = spectrum(a).eigenvalues
    scale = max(1.0, op_norm(a))
    for beta in poles:
        gap = np.min(np.abs(sp - beta))
        if gap <= tol * scale:
            raise PoleOnSpectrumError("rational_apply: no pole of r on sp(a)",
                                      f"pole {beta:.6g} at distance {gap:.3e}")
    e = np.eye(a.shape[0], dtype=complex)
    out = gamma * e
    for alpha in zeros:
        out = out @ (alpha * e - a)
    for beta in poles:
        m = beta * e - a
        if np.linalg.cond(m) > 1e13:
            raise NumericalError(f"rational_apply: ill-conditioned solve at pole {beta:.6g}")
        out = np.linalg.solve(m, out)
    return out


# --- square roots, moduli and decompositions -------------------------------


def sqrt_series(a, tol=1e-14, max_terms=10_000):
    """``b = Σ_{n>=1} binom(1/2, n) a^n`` so that ``(e + b)^2 = e + a``.

    Requires ``r_λ(a) < 1``.  Summation stops once a term drops below
    ``tol (1 + ||a||)``.
    """
    a = as_matrix(a)
    if spectral_radius(a) >= 1:
        raise PreconditionError("sqrt_series: r_λ(a) < 1", f"r_λ(a) = {spectral_radius(a):.6g}")
    cutoff = tol * (1 + op_norm(a))
    b = np.zeros_like(a)
    power = np.eye(a.shape[0], dtype=complex)
    coef = 1.0
    for n in range(1, max_terms + 1):
        coef *= (0.5 - (n - 1)) / n
        power = power @ a
        term = coef * power
        b += term
        if op_norm(term) < cutoff:
            return b
    raise NumericalError(f"sqrt_series: no convergence within {max_terms} terms")


def positive_sqrt(a, tol=1e-10):
    """Unique positive square root of a positive matrix.

    Eigenvalues in ``[-tol ||a||, 0)`` are treated as rounding and clamped
    to zero; anything more negative is rejected.
    """
    a = as_matrix(a)
    require_hermitian(a, tol, "positive_sqrt")
    w, v = np.linalg.eigh((a + adj(a)) / 2)
    floor = -tol * max(op_norm(a), np.finfo(float).tiny)
    if w[0] < floor:
        raise NotPositiveError("positive_sqrt: a >= 0", f"smallest eigenvalue {w[0]:.3e}")
    r = np.sqrt(np.clip(w, 0.0, None))
    return (v * r) @ adj(v)


def abs_value(a, tol=1e-10):
    """``|a| = (a*a)^(1/2)``."""
    a = as_matrix(a)
    return positive_sqrt(adj(a) @ a, tol)


def polar_factorize(a, tol=1e-10):
    """Polar factors ``(u, p)`` of an invertible ``a``: ``a = u p``, ``p = |a|``."""
    a = as_matrix(a)
    s = np.linalg.svd(a, compute_uv=False)
    if s[-1] <= tol * s[0]:
        raise NotInvertibleError("polar_factorize: a invertible",
                                 f"smallest singular value {s[-1]:.3e}")
    p = abs_value(a, tol)
    # u = a p^-1, solved from p u* = a*
    u = adj(np.linalg.solve(p, adj(a)))
    return u, p


def orth_decompose(a, tol=1e-10):
    """``(a_+, a_-)`` with ``a = a_+ - a_-``, both positive and ``a_+ a_- = 0``."""
    a = as_matrix(a)
    require_hermitian(a, tol, "orth_decompose")
    m = abs_value(a, tol)
    return (m + a) / 2, (m - a) / 2


def reflection_split(u, tol=1e-10):
    """Complementary projections ``(p, q)`` with ``u = p - q`` for a Hermitian unitary ``u``."""
    u = as_matrix(u)
    require_hermitian(u, tol, "reflection_split")
    e = np.eye(u.shape[0], dtype=complex)
    if op_norm(u @ u - e) > tol * 10:
        raise PreconditionError("reflection_split: u unitary", f"||u^2 - e|| = {op_norm(u @ u - e):.3e}")
    return (e + u) / 2, (e - u) / 2


def cayley_bounded(a, mu, tol=1e-10):
    """``(a - iμe)(a + iμe)^-1`` for Hermitian ``a`` and ``μ > r_λ(a)``."""
    a = as_matrix(a)
    require_hermitian(a, tol, "cayley_bounded")
    r = spectral_radius(a)
    if not mu > r:
        raise PreconditionError("cayley_bounded: mu > r_λ(a)", f"mu = {mu}, r_λ(a) = {r:.6g}")
    e = np.eye(a.shape[0], dtype=complex)
    # (a - iμ)(a + iμ)^-1 = (a + iμ)^-1 (a - iμ): both are functions of a
    return np.linalg.solve(a + 1j * mu * e, a - 1j * mu * e)


def functional_calculus(b, f, tol=1e-10):
    """``f(b)`` for a normal ``b``, applying ``f`` to eigenvalues in a unitary eigenbasis."""
    b = as_matrix(b)
    require_normal(b, tol, "functional_calculus")
    w, z = unitary_diagonalize(b)
    vals = np.empty_like(w)
    for i, lam in enumerate(w):
        try:
            with np.errstate(all="ignore"):  # non-finite results are reported below
                vals[i] = complex(f(lam))
        except (ValueError, ZeroDivisionError, ArithmeticError) as exc:
            raise PreconditionError("functional_calculus: f defined on sp(b)",
                                    f"f failed at {lam:.6g}: {exc}") from exc
        if not np.isfinite(vals[i]):
            raise PreconditionError("functional_calculus: f defined on sp(b)",
                                    f"f({lam:.6g}) is not finite")
    return (z * vals) @ adj(z)
