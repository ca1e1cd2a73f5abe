import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import matrix_unit, unit
from stargebra.algebra import algebra_from_basis, build_algebra
from stargebra.commutant import commutant
from stargebra.errors import DegenerateRepresentationError, NotPositiveError, PreconditionError
from stargebra.linalg import op_norm
from stargebra.samples import complex_gaussian, random_density, random_normal, random_star_algebra
from stargebra.states import (
    Functional,
    classify_state,
    decompose_cyclic,
    eigen_state_check,
    gn_norm,
    gns,
    is_positive,
    variation,
)


def full(n):
    return build_algebra([matrix_unit(n, i, j) for i in range(n) for j in range(n)])


def diagonal(n):
    return build_algebra([np.diag(np.arange(1.0, n + 1))])


class TestPositivity:
    def test_trace(self):
        assert is_positive(Functional.trace_state(full(2)))

    def test_off_diagonal_entry(self):
        # φ(a) = a_12 = trace(E_21 a); Gram eigenvalues have both signs
        assert not is_positive(Functional(matrix_unit(2, 1, 0), full(2)))

    def test_point_evaluation(self):
        assert is_positive(Functional(matrix_unit(2, 0, 0), diagonal(2)))

    def test_negative(self):
        assert not is_positive(Functional(-np.eye(2), full(2)))

    @given(st.integers(0, 2**32 - 1), st.integers(1, 4))
    @settings(max_examples=25, deadline=None)
    def test_density_functionals(self, seed, n):
        rng = np.random.default_rng(seed)
        assert is_positive(Functional(random_density(rng, n), full(n)))


class TestVariation:
    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_trace(self, n):
        assert variation(Functional.trace_state(full(n))) == pytest.approx(1, abs=1e-12)

    def test_homogeneous(self):
        phi = 3 * Functional.vector_state(unit(3, 1), full(3))
        assert variation(phi) == pytest.approx(3, abs=1e-12)

    def test_additive(self, rng):
        A = full(3)
        p, q = Functional(random_density(rng, 3), A), Functional(2 * random_density(rng, 3), A)
        assert variation(p + q) == pytest.approx(variation(p) + variation(q), abs=1e-9)

    @pytest.mark.parametrize("seed", range(5))
    def test_unital_value(self, seed):
        rng = np.random.default_rng(seed)
        A, _, _ = random_star_algebra(rng, 4)
        phi = Functional(3 * random_density(rng, 4, rank=2), A)
        assert variation(phi) == pytest.approx(phi(np.eye(4)).real, abs=1e-9)

    def test_zero(self):
        assert variation(Functional(np.zeros((2, 2)), full(2))) == 0.0

    def test_non_unital_algebra(self):
        # span{E_11} has its own unit E_11, so v(φ) = φ(E_11)
        A = algebra_from_basis([matrix_unit(2, 0, 0)])
        assert variation(Functional(np.eye(2), A)) == pytest.approx(1)

    def test_not_positive(self):
        with pytest.raises(NotPositiveError):
            variation(Functional(-np.eye(2), full(2)))


class TestGns:
    def test_first_entry_on_m2(self):
        A = full(2)
        phi = Functional(matrix_unit(2, 0, 0), A)
        res = gns(phi)
        assert res.quotient_dim == 2
        # spatially the standard representation: irreducible, same spectra
        assert commutant(list(res.rep)).dim == 1
        a = np.array([[1, 2], [3, 4j]])
        assert np.allclose(np.sort_complex(np.linalg.eigvals(res.represent(a))), np.sort_complex(np.linalg.eigvals(a)))
        assert classify_state(phi).is_pure

    def test_point_evaluation_on_diagonal(self):
        A = diagonal(2)
        res = gns(Functional(matrix_unit(2, 0, 0), A))
        assert res.quotient_dim == 1
        assert res.represent(np.diag([7.0, -2.0]))[0, 0] == pytest.approx(7.0)

    def test_trace_on_m2(self):
        phi = Functional.trace_state(full(2))
        res = gns(phi)
        assert res.quotient_dim == 4
        rep = classify_state(phi)
        assert not rep.is_pure and rep.commutant_dim == 4

    @pytest.mark.parametrize("seed", range(8))
    def test_recovery(self, seed):
        rng = np.random.default_rng(seed)
        A, _, _ = random_star_algebra(rng, 4)
        phi = Functional(2.5 * random_density(rng, 4, rank=int(rng.integers(1, 5))), A)
        res = gns(phi)
        scale = op_norm(phi.F)
        for b in A.basis:
            assert abs(phi(b) - res.state_value(b)) <= 1e-8 * scale
        c = res.cyclic_vector
        assert np.vdot(c, c).real == pytest.approx(variation(phi), abs=1e-8)
        # π is a *-homomorphism on the quotient
        x, y = A.basis[0], A.basis[-1]
        assert np.allclose(res.represent(x @ y), res.represent(x) @ res.represent(y), atol=1e-9)
        assert np.allclose(res.represent(x.conj().T), res.represent(x).conj().T, atol=1e-9)

    def test_not_positive(self):
        with pytest.raises(NotPositiveError):
            gns(Functional(matrix_unit(2, 1, 0), full(2)))


class TestClassify:
    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_vector_state_pure(self, n, rng):
        x = complex_gaussian(rng, n)
        report = classify_state(Functional.vector_state(x / np.linalg.norm(x), full(n)))
        assert report.is_state and report.is_pure and report.commutant_dim == 1

    @pytest.mark.parametrize("n", [2, 3])
    def test_trace_not_pure(self, n):
        report = classify_state(Functional.trace_state(full(n)))
        assert report.is_state and not report.is_pure and report.commutant_dim == n * n

    def test_one_dimensional_algebra(self, rng):
        A = build_algebra([], n=3)
        assert classify_state(Functional(random_density(rng, 3), A)).is_pure

    def test_non_state_is_not_pure(self):
        report = classify_state(2 * Functional.vector_state(unit(2, 0), full(2)))
        assert report.commutant_dim == 1 and not report.is_state and not report.is_pure


class TestDecomposeCyclic:
    @pytest.mark.parametrize("n", [1, 3])
    def test_full_matrix_algebra(self, n):
        pieces = decompose_cyclic(list(full(n).basis))
        assert len(pieces) == 1 and pieces[0][0].shape[1] == n

    def test_diagonal(self):
        pieces = decompose_cyclic([matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)])
        assert [p[0].shape[1] for p in pieces] == [1, 1]

    def test_two_copies_of_m2(self):
        rep = [np.kron(np.eye(2), matrix_unit(2, i, j)) for i in range(2) for j in range(2)]
        pieces = decompose_cyclic(rep)
        assert [p[0].shape[1] for p in pieces] == [2, 2]
        self._check(rep, pieces)

    @pytest.mark.parametrize("seed", range(5))
    def test_random(self, seed):
        rng = np.random.default_rng(seed)
        A, gens, _ = random_star_algebra(rng, 6)
        pieces = decompose_cyclic(list(A.basis), seed=seed)
        self._check(list(A.basis), pieces)

    @staticmethod
    def _check(rep, pieces):
        bases = [b for b, _ in pieces]
        m = rep[0].shape[0]
        assert sum(b.shape[1] for b in bases) == m
        for i, b in enumerate(bases):
            proj = b @ b.conj().T
            for r in rep:
                assert op_norm(r @ b - proj @ r @ b) <= 1e-9
            for c in bases[i + 1:]:
                assert op_norm(b.conj().T @ c) <= 1e-10
        for b, x in pieces:
            assert np.linalg.norm(b @ (b.conj().T @ x) - x) <= 1e-10

    def test_degenerate(self):
        with pytest.raises(DegenerateRepresentationError) as exc:
            decompose_cyclic([matrix_unit(2, 0, 0)])
        null = exc.value.null_space
        assert null.shape == (2, 1)
        assert abs(abs(null[1, 0]) - 1) <= 1e-12


class TestGnNorm:
    def test_unit(self):
        A = full(2)
        assert gn_norm(A.coords(np.eye(2)), A) == pytest.approx(1)

    def test_diagonal(self):
        A = diagonal(2)
        assert gn_norm(A.coords(np.diag([1.0, 3.0])), A) == pytest.approx(3)

    def test_random(self, rng):
        A = full(4)
        a = complex_gaussian(rng, (4, 4))
        assert gn_norm(A.coords(a), A) == pytest.approx(np.linalg.svd(a, compute_uv=False)[0], rel=1e-9)


class TestEigenState:
    def test_eigenvector(self):
        ok, value = eigen_state_check(np.diag([1.0, 2.0]), unit(2, 0))
        assert ok and value == pytest.approx(1)

    def test_not_eigenvector(self):
        ok, _ = eigen_state_check(np.diag([1.0, 2.0]), np.ones(2) / np.sqrt(2))
        assert not ok

    def test_random_normal(self, rng):
        b = random_normal(rng, 5)
        w, v = np.linalg.eig(b)
        ok, value = eigen_state_check(b, v[:, 2] / np.linalg.norm(v[:, 2]))
        assert ok and value == pytest.approx(w[2], abs=1e-9)

    def test_non_unit(self):
        with pytest.raises(PreconditionError):
            eigen_state_check(np.eye(2), np.ones(2))
