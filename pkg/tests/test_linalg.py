import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stargebra.errors import DimensionMismatchError, PreconditionError
from stargebra.linalg import (
    as_matrix,
    as_vector,
    hausdorff,
    invariant_closure,
    is_hermitian,
    is_normal,
    multiset_hausdorff,
    null_space,
    orth,
    principal_angle,
    unitary_diagonalize,
)
from stargebra.samples import complex_gaussian, random_normal


class TestValidation:
    @pytest.mark.parametrize("bad", [np.ones((2, 3)), np.ones(3), np.array([[np.nan]])])
    def test_as_matrix(self, bad):
        with pytest.raises(PreconditionError):
            as_matrix(bad)

    def test_as_vector_length(self):
        with pytest.raises(DimensionMismatchError):
            as_vector([1, 2], 3)


class TestPredicates:
    def test_scale_invariant_normality(self, rng):
        b = random_normal(rng, 4)
        assert is_normal(b) and is_normal(1e8 * b)
        assert not is_normal(np.array([[0, 1], [0, 0]]))

    def test_hermitian(self):
        assert is_hermitian(np.array([[1, 1j], [-1j, 2]]))
        assert not is_hermitian(np.array([[1, 1j], [1j, 2]]))


class TestDistances:
    def test_set_distance_ignores_multiplicity(self):
        assert hausdorff([1, 1, 2], [1, 2]) == 0.0

    def test_multiset_sees_multiplicity(self):
        assert multiset_hausdorff([1, 1, 2], [1, 2, 2]) == pytest.approx(1.0)

    def test_empty(self):
        assert hausdorff([], []) == 0.0 and hausdorff([], [1]) == np.inf

    @given(st.integers(0, 2**32 - 1), st.integers(1, 8))
    @settings(max_examples=30, deadline=None)
    def test_permutation_invariant(self, seed, n):
        rng = np.random.default_rng(seed)
        x = complex_gaussian(rng, n)
        assert multiset_hausdorff(x, rng.permutation(x)) == 0.0
        y = x + 1e-3 * complex_gaussian(rng, n)
        assert hausdorff(x, y) <= multiset_hausdorff(x, y) + 1e-15


class TestSubspaces:
    def test_orth_rank(self, rng):
        u = complex_gaussian(rng, (6, 2))
        cols = np.hstack([u, u @ complex_gaussian(rng, (2, 3))])
        q = orth(cols)
        assert q.shape == (6, 2)
        assert principal_angle(q, u) <= 1e-10

    def test_null_space(self, rng):
        m = complex_gaussian(rng, (2, 5))
        z = null_space(m)
        assert z.shape == (5, 3) and np.allclose(m @ z, 0, atol=1e-12)

    def test_angle_dimension_mismatch(self):
        assert principal_angle(np.eye(3)[:, :1], np.eye(3)[:, :2]) == pytest.approx(np.pi / 2)

    def test_invariant_closure(self):
        shift = np.roll(np.eye(4), 1, axis=0)
        assert invariant_closure([shift], np.eye(4)[0]).shape[1] == 4
        assert invariant_closure([shift], np.ones(4)).shape[1] == 1


def test_unitary_diagonalize_normal(rng):
    b = random_normal(rng, 5)
    w, z = unitary_diagonalize(b)
    assert np.allclose(z.conj().T @ z, np.eye(5))
    assert np.allclose((z * w) @ z.conj().T, b)
