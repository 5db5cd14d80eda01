"""Kronecker algebra, eigenvalue certificates, PD sampling, matrix files."""

import math

import numpy as np
import pytest

from conftest import random_hermitian

from hlawka.errors import BudgetError, InputError
from hlawka.linalg import (
    HermitianMatrix,
    PdSampleConfig,
    SpectrumKind,
    Verdict,
    dump_matrix,
    hermitian_eigenvalues,
    kron,
    load_hermitian,
    load_matrix,
    loewner_geq,
    min_eigenvalue,
    parse_matrix,
    psd_certificate,
    random_pd,
    save_matrix,
    tensor_power,
)


class TestHermitianMatrix:
    def test_rejects_non_square(self):
        with pytest.raises(InputError):
            HermitianMatrix(np.ones((2, 3)))

    def test_rejects_non_finite(self):
        with pytest.raises(InputError):
            HermitianMatrix([[np.nan, 0], [0, 1]])
        with pytest.raises(InputError):
            HermitianMatrix([[np.inf, 0], [0, 1]])

    def test_rejects_non_hermitian(self):
        with pytest.raises(InputError):
            HermitianMatrix([[1, 2], [3, 4]])

    def test_accepts_and_symmetrizes_near_hermitian(self):
        eps = 1e-14
        h = HermitianMatrix([[1, 1 + 2j], [1 - 2j + eps * 1j, 3]])
        assert np.array_equal(h.array, h.array.conj().T)
        assert np.all(h.array.diagonal().imag == 0.0)

    def test_array_is_read_only(self):
        h = HermitianMatrix.identity(2)
        with pytest.raises(ValueError):
            h.array[0, 0] = 5.0

    def test_arithmetic_stays_exactly_hermitian(self, rng):
        a = random_hermitian(rng, 4)
        b = random_hermitian(rng, 4)
        for result in (a + b, a - b, 2.5 * a, -a):
            assert np.array_equal(result.array, result.array.conj().T)


class TestKron:
    def test_identity_factor_gives_block_diagonal(self, rng):
        a = random_hermitian(rng, 3).array
        out = kron(np.eye(2), a)
        expected = np.zeros((6, 6), dtype=complex)
        expected[:3, :3] = a
        expected[3:, 3:] = a
        assert np.array_equal(out, expected)

    def test_dimension_product(self, rng):
        out = kron(random_hermitian(rng, 2), random_hermitian(rng, 3))
        assert out.shape == (6, 6)

    def test_diagonal_case(self):
        out = kron(np.diag([1.0, 2.0]), np.diag([3.0, 5.0]))
        assert np.array_equal(out, np.diag([3.0, 5.0, 6.0, 10.0]).astype(complex))

    def test_budget_error(self, rng):
        a = random_hermitian(rng, 8)
        with pytest.raises(BudgetError):
            kron(a, a, max_dim=63)

    def test_mixed_product_property(self, rng):
        # kron(A,B) @ kron(C,D) == kron(A@C, B@D) for random 2x2 blocks
        for _ in range(50):
            a, b, c, d = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(4))
            left = kron(a, b) @ kron(c, d)
            right = kron(a @ c, b @ d)
            rel = np.linalg.norm(left - right) / np.linalg.norm(right)
            assert rel < 1e-12

    def test_spectrum_is_pairwise_products(self, rng):
        for _ in range(20):
            a = random_hermitian(rng, 3)
            b = random_hermitian(rng, 2)
            got = np.sort(np.linalg.eigvalsh(kron(a, b)))
            ea, eb = hermitian_eigenvalues(a), hermitian_eigenvalues(b)
            expected = np.sort(np.outer(ea, eb).ravel())
            scale = max(1.0, np.abs(expected).max())
            assert np.max(np.abs(got - expected)) < 1e-9 * scale

    def test_positivity_closure(self):
        a = random_pd(PdSampleConfig(dim=3, seed=11))
        b = random_pd(PdSampleConfig(dim=2, seed=12))
        assert min_eigenvalue(HermitianMatrix(kron(a, b))) > 0


class TestTensorPower:
    def test_power_one_is_identity_operation(self, rng):
        a = random_hermitian(rng, 3)
        assert np.array_equal(tensor_power(a, 1).array, a.array)

    def test_diagonal_square(self):
        out = tensor_power(HermitianMatrix.diagonal([1.0, 2.0]), 2)
        assert np.array_equal(out.array, np.diag([1.0, 2.0, 2.0, 4.0]).astype(complex))

    def test_matches_left_associated_kron(self, rng):
        a = random_hermitian(rng, 2)
        expected = np.kron(np.kron(a.array, a.array), a.array)
        assert np.array_equal(tensor_power(a, 3).array, expected)

    def test_budget_boundary(self):
        a = HermitianMatrix.identity(2)
        assert tensor_power(a, 12, max_dim=4096).dim == 4096
        with pytest.raises(BudgetError):
            tensor_power(a, 13, max_dim=4096)

    def test_power_must_be_positive(self, rng):
        with pytest.raises(InputError):
            tensor_power(random_hermitian(rng, 2), 0)


class TestEigenvalues:
    def test_diagonal(self):
        assert min_eigenvalue(HermitianMatrix.diagonal([3.0, -1.0, 2.0])) == -1.0

    def test_identity(self):
        assert min_eigenvalue(HermitianMatrix.identity(5)) == pytest.approx(1.0, abs=1e-14)

    def test_two_by_two(self):
        assert min_eigenvalue(HermitianMatrix([[2.0, 1.0], [1.0, 2.0]])) == pytest.approx(1.0, abs=1e-12)

    def test_against_characteristic_polynomial_2x2(self, rng):
        # Independent closed-form root of the characteristic polynomial.
        for _ in range(200):
            h = random_hermitian(rng, 2)
            a = h.array[0, 0].real
            c = h.array[1, 1].real
            b = h.array[0, 1]
            lo = (a + c) / 2 - math.sqrt(((a - c) / 2) ** 2 + abs(b) ** 2)
            scale = max(1.0, abs(a), abs(c), abs(b))
            assert abs(min_eigenvalue(h) - lo) < 1e-12 * scale

    def test_deterministic(self, rng):
        h = random_hermitian(rng, 6)
        first = hermitian_eigenvalues(h)
        for _ in range(3):
            assert np.array_equal(hermitian_eigenvalues(h), first)


class TestLoewner:
    def test_equality(self, rng):
        a = random_hermitian(rng, 3)
        cert = loewner_geq(a, a, 1e-9)
        assert cert.verdict is Verdict.EQUALITY
        assert cert.ok

    def test_holds(self):
        two = 2.0 * HermitianMatrix.identity(3)
        cert = loewner_geq(two, HermitianMatrix.identity(3), 1e-9)
        assert cert.verdict is Verdict.HOLDS
        assert cert.min_eigenvalue == pytest.approx(1.0, abs=1e-12)

    def test_fails(self):
        cert = loewner_geq(HermitianMatrix.identity(3), 2.0 * HermitianMatrix.identity(3), 1e-9)
        assert cert.verdict is Verdict.FAILS
        assert cert.min_eigenvalue == pytest.approx(-1.0, abs=1e-12)
        assert not cert.ok

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            loewner_geq(HermitianMatrix.identity(2), HermitianMatrix.identity(3))

    def test_verdict_consistent_with_invariants(self, rng):
        for trial in range(50):
            d = random_hermitian(rng, 3)
            cert = psd_certificate(d, 1e-8)
            band = cert.tolerance * max(1.0, cert.scale)
            eigs = hermitian_eigenvalues(d)
            if cert.verdict is Verdict.EQUALITY:
                assert np.max(np.abs(eigs)) <= band
            assert (cert.min_eigenvalue >= -band) == (cert.verdict is not Verdict.FAILS)

    def test_superadditivity_of_tensor_powers(self):
        a = random_pd(PdSampleConfig(dim=2, seed=101))
        b = random_pd(PdSampleConfig(dim=2, seed=102))
        for p in range(1, 5):
            lhs = tensor_power(a + b, p)
            rhs = tensor_power(a, p) + tensor_power(b, p)
            assert loewner_geq(lhs, rhs).ok


class TestRandomPd:
    def test_positive_definite(self):
        for seed in range(20):
            h = random_pd(PdSampleConfig(dim=4, seed=seed))
            assert min_eigenvalue(h) > 0

    def test_bit_identical_for_same_seed(self):
        cfg = PdSampleConfig(dim=5, seed=987654321, condition_target=50.0)
        a, b = random_pd(cfg), random_pd(cfg)
        assert a.array.tobytes() == b.array.tobytes()

    def test_condition_number_tracks_target(self):
        for seed in (1, 2, 3, 4, 5):
            h = random_pd(PdSampleConfig(dim=3, seed=seed, condition_target=100.0))
            eigs = hermitian_eigenvalues(h)
            ratio = eigs[-1] / eigs[0]
            assert 50.0 <= ratio <= 200.0

    def test_uniform_spectrum_kind(self):
        h = random_pd(PdSampleConfig(dim=4, seed=3, condition_target=7.0,
                                     spectrum_kind=SpectrumKind.UNIFORM))
        eigs = hermitian_eigenvalues(h)
        assert np.allclose(eigs, np.linspace(1.0, 7.0, 4), rtol=1e-9)

    def test_config_validation(self):
        with pytest.raises(InputError):
            PdSampleConfig(dim=0, seed=1)
        with pytest.raises(InputError):
            PdSampleConfig(dim=2, seed=1, condition_target=0.5)
        with pytest.raises(InputError):
            PdSampleConfig(dim=2, seed=-1)


class TestMatrixFile:
    def test_round_trip_is_bit_exact(self, rng, tmp_path):
        arr = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        arr[0, 0] = math.pi + 1j / 3
        arr[1, 2] = 1e-300 - 1e300j
        path = tmp_path / "m.json"
        save_matrix(path, arr)
        back = load_matrix(path)
        assert back.tobytes() == arr.tobytes()

    def test_hermitian_round_trip(self, tmp_path):
        h = random_pd(PdSampleConfig(dim=3, seed=77))
        path = tmp_path / "h.json"
        save_matrix(path, h)
        back = load_hermitian(path)
        assert np.array_equal(back.array, h.array)

    def test_dump_format_fields(self):
        text = dump_matrix(np.eye(2))
        assert '"dim": 2' in text
        assert '"entries"' in text

    def test_parse_errors(self):
        with pytest.raises(InputError):
            parse_matrix("not json")
        with pytest.raises(InputError):
            parse_matrix('{"dim": 2, "entries": [[1, 0]]}')
        with pytest.raises(InputError):
            parse_matrix('{"dim": 1, "entries": [[1]]}')
        with pytest.raises(InputError):
            parse_matrix('{"entries": []}')
