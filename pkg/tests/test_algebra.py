from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import matrix_unit
from stargebra.algebra import (
    GroupRingSpec,
    algebra_from_basis,
    build_algebra,
    convolve,
    counterexample_ratio,
    cyclic_table,
    ell1_norm,
    group_adjoint,
    group_element,
    group_ring,
    hermitian_parts,
    symmetric_table,
    unitize,
    weighted_norm,
)
from stargebra.commutant import center
from stargebra.errors import DimensionMismatchError, InvalidGroupError, PreconditionError
from stargebra.samples import complex_gaussian, random_star_algebra


def full_matrix_algebra(n):
    return build_algebra([matrix_unit(n, i, j) for i in range(n) for j in range(n)])


class TestBuildAlgebra:
    def test_empty_is_scalars(self):
        A = build_algebra([], n=2)
        assert A.dim == 1
        assert A.contains(np.eye(2))

    def test_diagonal_generator(self):
        A = build_algebra([np.diag([1.0, 2.0])])
        assert A.dim == 2
        assert A.contains(np.diag([5.0, -1j]))
        assert not A.contains(matrix_unit(2, 0, 1))

    def test_matrix_unit_generates_m2(self):
        # E12 -> E21 = E12*, E11 = E12 E21, E22 = E21 E12
        A = build_algebra([matrix_unit(2, 0, 1)])
        assert A.dim == 4
        for i in range(2):
            for j in range(2):
                assert A.contains(matrix_unit(2, i, j))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            build_algebra([np.eye(2), np.eye(3)])

    def test_non_finite(self):
        with pytest.raises(PreconditionError):
            build_algebra([np.array([[np.nan, 0], [0, 1]])])

    def test_empty_without_size_is_c(self):
        A = build_algebra([])
        assert A.ambient_dim == 1 and A.dim == 1

    @pytest.mark.parametrize("seed", range(5))
    def test_closed_under_products_and_adjoints(self, seed):
        rng = np.random.default_rng(seed)
        A, gens, blocks = random_star_algebra(rng, 5)
        assert A.closure_defect() <= 1e-9
        assert A.dim == sum(s * s for s, _ in blocks)
        for g in gens:
            assert A.contains(g)
            assert A.contains(g.conj().T)

    def test_basis_orthonormal(self, rng):
        A, _, _ = random_star_algebra(rng, 4)
        v = A.vectors()
        assert np.allclose(v.conj().T @ v, np.eye(A.dim), atol=1e-12)

    def test_coords_round_trip(self, rng):
        A = full_matrix_algebra(3)
        a = complex_gaussian(rng, (3, 3))
        assert np.allclose(A.element(A.coords(a)), a)


class TestUnitize:
    def test_scalars_unchanged(self):
        A = build_algebra([], n=3)
        assert unitize(A).dim == 1

    def test_adds_identity(self):
        A = algebra_from_basis([matrix_unit(2, 0, 0)])
        assert not A.unital
        U = unitize(A)
        assert U.dim == 2
        assert U.contains(np.eye(2))
        assert U.contains(matrix_unit(2, 0, 0))

    def test_full_unchanged(self):
        A = full_matrix_algebra(3)
        assert unitize(A).dim == 9


class TestHermitianParts:
    def test_hermitian(self):
        a = np.array([[1, 2 - 1j], [2 + 1j, 3]])
        h, k = hermitian_parts(a)
        assert np.allclose(h, a)
        assert np.allclose(k, 0)

    def test_i_identity(self):
        h, k = hermitian_parts(1j * np.eye(3))
        assert np.allclose(h, 0)
        assert np.allclose(k, np.eye(3))

    @given(st.integers(1, 6), st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_recomposition(self, n, seed):
        a = complex_gaussian(np.random.default_rng(seed), (n, n))
        h, k = hermitian_parts(a)
        assert np.allclose(h, h.conj().T) and np.allclose(k, k.conj().T)
        assert np.max(np.abs(a - (h + 1j * k))) <= 1e-14 * max(1, np.max(np.abs(a)))


class TestGroupRing:
    def test_trivial_group(self):
        A, emb = group_ring(GroupRingSpec.cyclic(1))
        assert A.dim == 1
        assert np.allclose(emb[0], [[1]])

    def test_cyclic_shift(self):
        A, emb = group_ring(GroupRingSpec.cyclic(4))
        shift = np.roll(np.eye(4), 1, axis=0)
        assert np.allclose(emb[1], shift)
        assert np.allclose(np.linalg.matrix_power(emb[1], 4), np.eye(4))
        assert A.dim == 4 and A.is_commutative()

    def test_s3_center(self):
        spec = GroupRingSpec(symmetric_table(3))
        A, emb = group_ring(spec)
        assert A.dim == 6
        assert not A.is_commutative()
        # brute-force oracle: class sums span the center, one per conjugacy class
        inv = [spec.inverse(g) for g in range(6)]
        classes = {frozenset(spec.table[spec.table[h, g], inv[h]] for h in range(6)) for g in range(6)}
        assert len(classes) == 3
        Z = center(A)
        assert Z.dim == 3
        for cls in classes:
            assert Z.contains(sum(emb[g] for g in cls))

    def test_embedding_is_homomorphism(self):
        spec = GroupRingSpec(symmetric_table(3))
        _, emb = group_ring(spec)
        for g in range(6):
            assert np.allclose(emb[g].conj().T, emb[spec.inverse(g)])
            for h in range(6):
                assert np.allclose(emb[g] @ emb[h], emb[spec.table[g, h]])

    def test_identity_need_not_be_first(self):
        spec = GroupRingSpec(np.array([[1, 0], [0, 1]]))
        assert spec.identity == 1
        assert spec.inverse(0) == 0

    @pytest.mark.parametrize("table, what", [
        ([[0, 1], [1, 1]], "inverses"),
        ([[0, 0], [0, 0]], "identity"),
        ([[0, 1, 2], [1, 0, 0], [2, 0, 0]], "associativity"),
        ([[0, 1], [1, 5]], "closed"),
    ])
    def test_invalid_tables(self, table, what):
        with pytest.raises(InvalidGroupError) as exc:
            GroupRingSpec(np.array(table))
        assert what in exc.value.invariant

    def test_group_element_matches_convolution(self, rng):
        spec = GroupRingSpec(symmetric_table(3))
        a = complex_gaussian(rng, 6)
        b = complex_gaussian(rng, 6)
        lhs = group_element(spec, a) @ group_element(spec, b)
        assert np.allclose(lhs, group_element(spec, convolve(a, b, spec.table)))
        assert np.allclose(group_element(spec, a).conj().T, group_element(spec, group_adjoint(a, spec.table)))


class TestNorms:
    def test_delta_e(self):
        assert ell1_norm({0: 1}) == 1

    def test_absolute_sum(self):
        assert ell1_norm({0: 2, 3: -3}) == 5

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_submultiplicative_z8(self, seed):
        rng = np.random.default_rng(seed)
        a, b = complex_gaussian(rng, 8), complex_gaussian(rng, 8)
        # direct convolution oracle, independent of the table-based routine
        ab = np.array([sum(a[g] * b[(k - g) % 8] for g in range(8)) for k in range(8)])
        assert np.allclose(convolve(a, b, cyclic_table(8)), ab)
        assert ell1_norm(ab) <= ell1_norm(a) * ell1_norm(b) * (1 + 1e-12)

    def test_weighted_norm(self):
        assert weighted_norm({2: 1, -1: 2}, 2.0) == 5.0


class TestCounterexample:
    @pytest.mark.parametrize("n, expected", [(5, 32.0), (0, 1.0)])
    def test_gamma_two(self, n, expected):
        assert counterexample_ratio(2, n) == expected

    def test_gamma_one_and_a_half(self):
        assert counterexample_ratio(1.5, 10) == pytest.approx(57.6650390625, rel=1e-14)

    @pytest.mark.parametrize("gamma", [1.0, 0.5])
    def test_gamma_at_most_one(self, gamma):
        with pytest.raises(PreconditionError):
            counterexample_ratio(gamma, 3)


def test_symmetric_table_is_a_group():
    t = symmetric_table(3)
    perms = list(permutations(range(3)))
    assert t.shape == (6, 6)
    # p∘q evaluated directly
    p, q = perms[1], perms[3]
    comp = tuple(p[q[j]] for j in range(3))
    assert perms[t[1, 3]] == comp
