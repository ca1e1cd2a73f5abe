"""Randomised invariant suite behind ``stargebra check``.

Every property draws its cases from its own child of one seed sequence, so
results do not depend on scheduling when properties run on worker threads.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import samples
from .algebra import GroupRingSpec, convolve, counterexample_ratio, cyclic_table, ell1_norm, group_ring
from .commutant import bicommutant, commutant
from .evolution import cayley, evolve, inverse_cayley
from .gelfand import bochner_measure, characters, gelfand_transform
from .linalg import adj, hausdorff, multiset_hausdorff, op_norm
from .measures import fuglede_check, random_intertwiner, resolve_normal
from .spectral import (
    RationalFn,
    orth_decompose,
    polar_factorize,
    rational_apply,
    spectral_radius_limit,
    spectrum,
    sqrt_series,
)
from .states import Functional, classify_state, gns, variation


@dataclass(frozen=True)
class PropertyResult:
    """Worst residuals of one property, keyed by the quantity measured."""

    name: str
    residuals: dict
    thresholds: dict
    cases: int

    @property
    def passed(self):
        return all(self.residuals[k] <= self.thresholds[k] for k in self.thresholds)


def _bump(worst, key, value):
    worst[key] = max(worst[key], float(value))


def _c_star(rng, cases):
    worst = 0.0
    for _ in range(cases):
        n = int(rng.integers(2, 9))
        a = samples.complex_gaussian(rng, (n, n))
        worst = max(worst, abs(op_norm(adj(a) @ a) - op_norm(a) ** 2) / op_norm(a) ** 2)
    return worst


def _radius(rng, cases):
    worst = 0.0
    for _ in range(cases):
        a = samples.complex_gaussian(rng, (6, 6))
        rho = np.max(np.abs(np.linalg.eigvals(a)))
        worst = max(worst, abs(spectral_radius_limit(a, 30) - rho) / (1 + rho))
    return worst


def _rational(rng, cases):
    worst = 0.0
    for _ in range(cases):
        n = int(rng.integers(2, 7))
        a = samples.complex_gaussian(rng, (n, n))
        sp = np.linalg.eigvals(a)
        pole = sp[0] + 0.5 * np.exp(2j * np.pi * rng.random())
        if np.min(np.abs(sp - pole)) < 0.1:
            pole = np.max(np.abs(sp)) + 1.0
        r = RationalFn((1.0, rng.standard_normal(), 1.0), (-pole, 1.0))
        worst = max(worst, multiset_hausdorff(spectrum(rational_apply(a, r)).eigenvalues, r(sp)))
    return worst


def _ab_ba(rng, cases):
    worst = 0.0
    for _ in range(cases):
        n, m = 6, int(rng.integers(2, 6))
        a = samples.complex_gaussian(rng, (n, m))
        b = samples.complex_gaussian(rng, (m, n))
        ab = spectrum(a @ b).nonzero(1e-9)
        ba = spectrum(b @ a).nonzero(1e-9)
        worst = max(worst, hausdorff(ab, ba))
    return worst


def _sqrt(rng, cases):
    worst = {"oracle": 0.0, "hermitian": 0.0}
    for _ in range(cases):
        n = int(rng.integers(1, 7))
        h = samples.random_hermitian(rng, n)
        h *= 0.9 / max(np.max(np.abs(np.linalg.eigvalsh(h))), 1e-12)
        w, v = np.linalg.eigh(np.eye(n) + h)
        oracle = (v * np.sqrt(w)) @ adj(v) - np.eye(n)
        b = sqrt_series(h)
        _bump(worst, "oracle", op_norm(b - oracle))
        _bump(worst, "hermitian", op_norm(b - adj(b)))
    return worst


def _shirali_ford(rng, cases):
    worst = 0.0
    for _ in range(cases):
        n = int(rng.integers(2, 9))
        a = samples.complex_gaussian(rng, (n, n))
        worst = max(worst, -np.linalg.eigvalsh(adj(a) @ a)[0] / op_norm(a) ** 2)
    return max(worst, 0.0)


def _polar(rng, cases):
    recon = unitary = 0.0
    for _ in range(cases):
        n = int(rng.integers(2, 9))
        a = samples.complex_gaussian(rng, (n, n))
        u, p = polar_factorize(a)
        recon = max(recon, op_norm(a - u @ p) / op_norm(a))
        unitary = max(unitary, op_norm(adj(u) @ u - np.eye(n)))
    return {"reconstruction": recon, "unitarity": unitary}


def _orth(rng, cases):
    worst = 0.0
    for _ in range(cases):
        h = samples.random_hermitian(rng, int(rng.integers(2, 9)))
        ap, am = orth_decompose(h)
        worst = max(worst, op_norm(ap @ am) / op_norm(h) ** 2)
    return worst


def _monotone_inverse(rng, cases):
    worst = 0.0
    for _ in range(cases):
        n = int(rng.integers(2, 7))
        a = samples.random_positive(rng, n) + 0.1 * np.eye(n)
        b = a + samples.random_positive(rng, n, int(rng.integers(1, n + 1)))
        d = np.linalg.inv(a) - np.linalg.inv(b)
        worst = max(worst, -np.linalg.eigvalsh((d + adj(d)) / 2)[0])
    return max(worst, 0.0)


def _gelfand(rng, cases):
    worst = {"isometry": 0.0, "multiplicative": 0.0}
    for _ in range(cases):
        A, _ = samples.random_commutative_algebra(rng, int(rng.integers(1, 7)))
        chars = characters(A, seed=int(rng.integers(2**31)))
        if len(chars) != A.dim:
            return {"isometry": np.inf, "multiplicative": np.inf}
        x = samples.complex_gaussian(rng, A.dim)
        y = samples.complex_gaussian(rng, A.dim)
        a, b = A.element(x), A.element(y)
        ah = gelfand_transform(x, chars)
        abh = chars.evaluate(a @ b)
        _bump(worst, "isometry", abs(np.max(np.abs(ah)) - op_norm(a)) / op_norm(a))
        _bump(worst, "multiplicative", np.max(np.abs(abh - ah * gelfand_transform(y, chars))))
    return worst


def _gns(rng, cases):
    worst = {"recovery": 0.0, "cyclic_norm": 0.0, "unit_value": 0.0}
    for _ in range(cases):
        n = int(rng.integers(1, 6))
        A, _, _ = samples.random_star_algebra(rng, n)
        phi = Functional(samples.random_positive(rng, n, int(rng.integers(1, n + 1))), A)
        res = gns(phi)
        scale = op_norm(phi.F)
        rec = max(abs(phi(b) - res.state_value(b)) for b in A.basis) / scale
        v = variation(phi)
        _bump(worst, "recovery", rec)
        _bump(worst, "cyclic_norm", abs(v - np.vdot(res.cyclic_vector, res.cyclic_vector).real))
        _bump(worst, "unit_value", abs(v - phi(np.eye(n)).real))
    return worst


def _variation_additive(rng, cases):
    worst = 0.0
    for _ in range(cases):
        n = int(rng.integers(1, 6))
        A, _, _ = samples.random_star_algebra(rng, n)
        p1 = Functional(samples.random_positive(rng, n, 1), A)
        p2 = Functional(samples.random_positive(rng, n, 1), A)
        worst = max(worst, abs(variation(p1 + p2) - variation(p1) - variation(p2)))
    return worst


def _purity(rng, cases):
    failures = 0
    for n in range(1, min(cases, 4) + 1):
        A, _, _ = samples.random_star_algebra(rng, n, [(n, 1)])
        x = samples.complex_gaussian(rng, n)
        pure = classify_state(Functional.vector_state(x / np.linalg.norm(x), A))
        failures += not (pure.is_pure and pure.commutant_dim == 1)
        if n >= 2:
            mixed = classify_state(Functional.trace_state(A))
            failures += mixed.is_pure or mixed.commutant_dim != n * n
    return {"misclassified": float(failures)}


def _spectral_theorem(rng, cases):
    worst = {"reconstruction": 0.0, "multiplicativity": 0.0}
    for _ in range(cases):
        n = int(rng.integers(2, 7))
        vals = samples.complex_gaussian(rng, n)
        vals[rng.integers(0, n)] = vals[0]
        b = samples.random_normal(rng, n, vals)
        P = resolve_normal(b)
        recon = op_norm(b - sum(p * q for p, q in zip(P.points, P.projections)))
        pts = list(P.points)
        w1 = [p for p in pts if rng.random() < 0.5]
        w2 = [p for p in pts if rng.random() < 0.5]
        inter = [p for p in w1 if p in w2]
        mult = op_norm(P.projection(inter) - P.projection(w1) @ P.projection(w2))
        _bump(worst, "reconstruction", recon / op_norm(b))
        _bump(worst, "multiplicativity", mult)
    return worst


def _bicommutant(rng, cases):
    worst = 0.0
    for _ in range(cases):
        A, _, _ = samples.random_star_algebra(rng, int(rng.integers(1, 6)))
        worst = max(worst, bicommutant(A).angle(A))
    return {"principal_angle": worst}


def _triple(rng, cases):
    worst = 0.0
    for _ in range(cases):
        _, S, _ = samples.random_star_algebra(rng, int(rng.integers(2, 6)))
        S = S[: int(rng.integers(1, 3))]
        once = commutant(S)
        worst = max(worst, commutant(bicommutant(S)).angle(once))
    return {"principal_angle": worst}


def _fuglede(rng, cases):
    worst = 0.0
    for _ in range(cases):
        n = int(rng.integers(2, 6))
        shared = samples.complex_gaussian(rng, 2)
        v1 = np.concatenate([shared, samples.complex_gaussian(rng, n - 2)]) if n > 2 else shared
        v2 = np.concatenate([shared[::-1], samples.complex_gaussian(rng, n - 2)]) if n > 2 else shared[::-1]
        n1 = samples.random_normal(rng, n, v1)
        n2 = samples.random_normal(rng, n, v2)
        a = random_intertwiner(n1, n2, rng)
        scale = op_norm(a) * max(op_norm(n1), op_norm(n2))
        worst = max(worst, op_norm(a @ adj(n1) - adj(n2) @ a) / scale)
        if not fuglede_check(n1, n2, a):
            return {"commutes_with_adjoints": np.inf}
    return {"commutes_with_adjoints": worst}


def _cayley(rng, cases):
    worst = {"round_trip": 0.0, "unitarity": 0.0}
    for _ in range(cases):
        n = int(rng.integers(1, 8))
        a = samples.random_hermitian(rng, n) * rng.uniform(0.1, 10)
        u = cayley(a)
        _bump(worst, "round_trip", op_norm(inverse_cayley(u) - a) / (1 + op_norm(a)))
        _bump(worst, "unitarity", op_norm(adj(u) @ u - np.eye(n)))
    return worst


def _group_law(rng, cases):
    worst = 0.0
    for _ in range(cases):
        n = int(rng.integers(1, 7))
        a = samples.random_hermitian(rng, n)
        x = samples.complex_gaussian(rng, n)
        s, t = rng.uniform(-5, 5, 2)
        lhs = evolve(a, x, s + t)
        rhs = evolve(a, evolve(a, x, s), t)
        worst = max(worst, np.linalg.norm(lhs - rhs) / np.linalg.norm(x))
    return worst


def _bochner(rng, cases):
    worst = {"reconstruction": 0.0, "total_mass": 0.0, "negativity": 0.0}
    for _ in range(cases):
        n = int(rng.integers(1, 7))
        A, _ = samples.random_commutative_algebra(rng, n)
        psi = Functional(samples.random_density(rng, n), A)
        mu = bochner_measure(psi)
        chars = characters(A)
        rec = np.max(np.abs(chars.values.T @ mu.weights - psi.on_basis()))
        _bump(worst, "reconstruction", rec)
        _bump(worst, "total_mass", abs(mu.weights.sum() - 1))
        _bump(worst, "negativity", -min(mu.weights.min(), 0.0))
    return worst


def _ell1(rng, cases):
    table = cyclic_table(8)
    worst = 0.0
    for _ in range(cases):
        a = samples.complex_gaussian(rng, 8)
        b = samples.complex_gaussian(rng, 8)
        worst = max(worst, ell1_norm(convolve(a, b, table)) - ell1_norm(a) * ell1_norm(b))
    return max(worst, 0.0)


def _group_ring(rng, cases):
    _, emb = group_ring(GroupRingSpec.cyclic(int(rng.integers(1, 9))))
    n = len(emb)
    worst = 0.0
    for g in range(n):
        for h in range(n):
            worst = max(worst, np.max(np.abs(emb[g] @ emb[h] - emb[(g + h) % n])))
        worst = max(worst, np.max(np.abs(adj(emb[g]) - emb[(-g) % n])))
    return worst


def _counterexample(rng, cases):
    return float(max(abs(counterexample_ratio(2, n) - 2.0 ** n) for n in range(31)))


PROPERTIES = [
    ("c_star_identity", _c_star, 1e-9),
    ("spectral_radius_formula", _radius, 1e-6),
    ("rational_spectral_mapping", _rational, 1e-6),
    ("sp_ab_equals_sp_ba", _ab_ba, 1e-8),
    ("square_root_series", _sqrt, {"oracle": 1e-8, "hermitian": 1e-12}),
    ("shirali_ford", _shirali_ford, 1e-10),
    ("polar_factorisation", _polar, {"reconstruction": 1e-8, "unitarity": 1e-10}),
    ("orthogonal_decomposition", _orth, 1e-9),
    ("monotone_inverse", _monotone_inverse, 1e-8),
    ("gelfand_transform", _gelfand, {"isometry": 1e-9, "multiplicative": 1e-8}),
    ("gns_recovery", _gns, {"recovery": 1e-8, "cyclic_norm": 1e-8, "unit_value": 1e-9}),
    ("variation_additive", _variation_additive, 1e-8),
    ("purity_schur", _purity, {"misclassified": 0.0}),
    ("spectral_theorem", _spectral_theorem, {"reconstruction": 1e-8, "multiplicativity": 1e-10}),
    ("bicommutant", _bicommutant, {"principal_angle": 1e-10}),
    ("triple_commutant", _triple, {"principal_angle": 1e-10}),
    ("fuglede_putnam", _fuglede, {"commutes_with_adjoints": 1e-8}),
    ("cayley_transform", _cayley, {"round_trip": 1e-8, "unitarity": 1e-10}),
    ("evolution_group_law", _group_law, 1e-10),
    ("bochner", _bochner, {"reconstruction": 1e-9, "total_mass": 1e-12, "negativity": 1e-12}),
    ("ell1_submultiplicative", _ell1, 1e-12),
    ("group_ring_relations", _group_ring, 0.0),
    ("counterexample_ratio", _counterexample, 0.0),
]


def run_checks(seed=0, cases=20, workers=1, names=None):
    """Run the invariant suite and return one :class:`PropertyResult` per property."""
    chosen = [p for p in PROPERTIES if names is None or p[0] in names]
    children = np.random.SeedSequence(seed).spawn(len(chosen))

    def run(item):
        (name, fn, threshold), child = item
        out = fn(np.random.default_rng(child), cases)
        if not isinstance(threshold, dict):
            threshold = {"residual": threshold}
        if not isinstance(out, dict):
            out = {next(iter(threshold)): out}
        return PropertyResult(name, {k: float(v) for k, v in out.items()}, threshold, cases)

    items = list(zip(chosen, children))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run, items))
    return [run(item) for item in items]
