import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from qpsim.numerics import TimeGrid, expm, hermitian_check, kron, min_eigenvalue_hermitian

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)
I2 = np.eye(2)


def random_hermitian(rng, n, norm):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = a + a.conj().T
    return h * norm / np.linalg.norm(h, 2)


class TestKron:
    def test_identity(self):
        assert np.array_equal(kron(I2, I2), np.eye(4))

    def test_sigma_x_with_projector(self):
        out = kron(SX, np.diag([1, 0]))
        expected = np.zeros((4, 4))
        expected[0, 2] = expected[2, 0] = 1
        assert np.array_equal(out, expected)

    def test_shape_law(self):
        assert kron(np.ones((2, 2)), np.ones((3, 3))).shape == (6, 6)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            kron(np.zeros((0, 0)), I2)

    @given(st.lists(arrays(np.int64, (2, 2), elements=st.integers(-5, 5)), min_size=3, max_size=3))
    def test_associative(self, ms):
        a, b, c = ms
        assert np.array_equal(kron(kron(a, b), c), kron(a, kron(b, c)))


class TestExpm:
    def test_zero(self):
        assert np.allclose(expm(np.zeros((3, 3))), np.eye(3), atol=0)

    def test_rotation_closed_form(self):
        theta = np.pi / 2
        expected = np.cos(theta) * I2 - 1j * np.sin(theta) * SX
        assert np.max(np.abs(expm(-1j * theta * SX) - expected)) < 1e-10
        assert np.max(np.abs(expm(-1j * theta * SX) - (-1j * SX))) < 1e-10

    def test_diagonal(self):
        out = expm(np.diag([0.3, -2.0]))
        assert np.allclose(out, np.diag(np.exp([0.3, -2.0])), rtol=1e-12, atol=0)

    def test_large_norm_relative_accuracy(self):
        # norm-50 Hermitian generator: compare against the eigendecomposition
        rng = np.random.default_rng(3)
        h = random_hermitian(rng, 6, 50)
        w, v = np.linalg.eigh(h)
        exact = (v * np.exp(w)) @ v.conj().T
        assert np.linalg.norm(expm(h) - exact) / np.linalg.norm(exact) < 1e-10

    def test_non_square(self):
        with pytest.raises(ValueError):
            expm(np.zeros((2, 3)))

    @settings(max_examples=30)
    @given(st.integers(0, 2**32 - 1), st.floats(0.1, 10))
    def test_inverse_and_unitarity(self, seed, norm):
        rng = np.random.default_rng(seed)
        a = random_hermitian(rng, 4, norm)
        ea, eb = expm(a), expm(-a)
        # beyond norm ~8 the matmul's own rounding, n*eps*|e^A||e^-A|, exceeds 1e-8
        floor = 4 * np.finfo(float).eps * np.linalg.norm(ea, 2) * np.linalg.norm(eb, 2)
        assert np.max(np.abs(ea @ eb - np.eye(4))) < max(1e-8, floor)
        u = expm(-1j * a)
        assert np.max(np.abs(u.conj().T @ u - np.eye(4))) < 1e-8


class TestMinEigenvalue:
    @pytest.mark.parametrize("m, expected", [
        (np.diag([1.0, 0.0]), 0.0),
        (SX, -1.0),
        (0.5 * (I2 + SZ), 0.0),
    ])
    def test_examples(self, m, expected):
        assert abs(min_eigenvalue_hermitian(m) - expected) < 1e-9

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            min_eigenvalue_hermitian(np.array([[0, 1], [0, 0]]))


def test_hermitian_check_tolerance():
    m = SX.copy()
    m[0, 1] += 1e-10
    assert hermitian_check(m)
    m[0, 1] += 1e-6
    assert not hermitian_check(m)


def test_time_grid():
    g = TimeGrid(0.0, 1.0, 11)
    assert g.dt == pytest.approx(0.1)
    assert np.all(np.diff(g.times) > 0)
    with pytest.raises(ValueError):
        TimeGrid(0.0, 1.0, 1)
    with pytest.raises(ValueError):
        TimeGrid(1.0, 1.0, 5)
