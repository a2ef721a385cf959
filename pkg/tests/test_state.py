import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qorbit.errors import DimensionError, MatrixFormatError, NotHermitianError
from qorbit.state import (
    bloch_decode,
    bloch_encode,
    dumps_matrix,
    eigenvalues_desc,
    gell_mann,
    loads_matrix,
    random_densities,
    random_density,
    su_basis,
    validate,
)

# lambda_1 .. lambda_8 as printed for su(3)
STANDARD_GELL_MANN = [
    [[0, 1, 0], [1, 0, 0], [0, 0, 0]],
    [[0, -1j, 0], [1j, 0, 0], [0, 0, 0]],
    [[1, 0, 0], [0, -1, 0], [0, 0, 0]],
    [[0, 0, 1], [0, 0, 0], [1, 0, 0]],
    [[0, 0, -1j], [0, 0, 0], [1j, 0, 0]],
    [[0, 0, 0], [0, 0, 1], [0, 1, 0]],
    [[0, 0, 0], [0, 0, -1j], [0, 1j, 0]],
    np.diag([1, 1, -2]) / np.sqrt(3),
]


def test_validate_maximally_mixed():
    rep = validate(np.eye(3) / 3)
    assert rep.hermitian and rep.unit_trace and rep.psd
    assert rep.min_eigenvalue == pytest.approx(1 / 3, abs=1e-15)
    assert rep.rank == 3


def test_validate_indefinite():
    rep = validate(np.diag([1.0, 1.0, -1.0]))
    assert rep.hermitian and rep.unit_trace
    assert not rep.psd


def test_validate_pure_qubit():
    m = np.array([[0.5, 0.5j], [-0.5j, 0.5]])
    rep = validate(m)
    assert rep.physical
    assert rep.rank == 1
    np.testing.assert_allclose(eigenvalues_desc(m), [1.0, 0.0], atol=1e-15)


def test_validate_flags_each_property_independently():
    rep = validate(np.array([[0.5, 1.0], [0.0, 0.5]]))
    assert not rep.hermitian and rep.unit_trace
    rep = validate(np.eye(3) * 0.3)
    assert rep.hermitian and rep.psd and not rep.unit_trace


def test_validate_rejects_non_square():
    with pytest.raises(DimensionError):
        validate(np.zeros((2, 3)))


@pytest.mark.parametrize(
    "diag, want",
    [
        ([0.2, 0.5, 0.3], [0.5, 0.3, 0.2]),
        ([1 / 3] * 3, [1 / 3] * 3),
        ([0.5, 0.0, 0.5], [0.5, 0.5, 0.0]),
    ],
)
def test_eigenvalues_desc(diag, want):
    np.testing.assert_allclose(eigenvalues_desc(np.diag(diag)), want, atol=1e-15)


def test_eigenvalues_desc_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        eigenvalues_desc(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_random_density_contract():
    rho = random_density(4, 4, seed=11)
    assert abs(np.trace(rho) - 1) <= 1e-14
    assert np.linalg.eigvalsh(rho).min() >= -1e-14
    pure = random_density(3, 1, seed=5)
    assert abs(np.trace(pure @ pure).real - 1) <= 1e-12


def test_random_density_is_deterministic():
    a = random_density(5, 3, seed=123)
    b = random_density(5, 3, seed=123)
    assert a.tobytes() == b.tobytes()
    assert random_density(5, 3, seed=124).tobytes() != a.tobytes()


def test_random_density_rank_out_of_range():
    for rank in (0, 4):
        with pytest.raises(ValueError):
            random_density(3, rank, seed=0)


@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_random_densities_validate(d):
    rhos = random_densities(d, 3000, seed=9)
    ranks = 1 + np.arange(3000) % d
    for rho, r in zip(rhos[:300], ranks[:300]):
        rep = validate(rho, 1e-12)
        assert rep.physical
        assert rep.rank == r


def test_random_densities_blocks_are_independent_of_n():
    # a prefix of a longer batch is the same batch
    a = random_densities(3, 1500, seed=4)
    b = random_densities(3, 2500, seed=4)
    assert a.tobytes() == b[:1500].tobytes()


def test_gell_mann_d3_is_the_standard_list():
    np.testing.assert_array_equal(gell_mann(3), np.array(STANDARD_GELL_MANN, dtype=complex))


def test_gell_mann_embeds_lower_dimension():
    g3 = gell_mann(3)
    g4 = gell_mann(4)
    np.testing.assert_array_equal(g4[:8, :3, :3], g3)
    assert np.all(g4[:8, 3, :] == 0) and np.all(g4[:8, :, 3] == 0)


def test_su3_structure_constants():
    f = su_basis(3).f_tensor
    s3 = np.sqrt(3)
    # f_123 = 2 f_147 = 2 f_246 = 2 f_257 = 2 f_345 = -2 f_156 = -2 f_367
    #       = (2/sqrt3) f_458 = (2/sqrt3) f_678 = 1
    expected = {
        (1, 2, 3): 1.0,
        (1, 4, 7): 0.5,
        (2, 4, 6): 0.5,
        (2, 5, 7): 0.5,
        (3, 4, 5): 0.5,
        (1, 5, 6): -0.5,
        (3, 6, 7): -0.5,
        (4, 5, 8): s3 / 2,
        (6, 7, 8): s3 / 2,
    }
    for (i, j, k), v in expected.items():
        assert f[i - 1, j - 1, k - 1] == pytest.approx(v, abs=1e-14)
    # nothing else survives besides permutations of these
    nonzero = {tuple(sorted(idx + 1)) for idx in np.argwhere(np.abs(f) > 1e-12)}
    assert nonzero == set(expected)


def test_su2_tensors():
    b = su_basis(2)
    eps = np.zeros((3, 3, 3))
    for (i, j, k), s in {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1, (1, 0, 2): -1, (0, 2, 1): -1, (2, 1, 0): -1}.items():
        eps[i, j, k] = s
    np.testing.assert_allclose(b.f_tensor, eps, atol=1e-15)
    np.testing.assert_allclose(b.d_tensor, 0.0, atol=1e-15)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_basis_normalization_and_products(d):
    b = su_basis(d)
    lam = b.generators
    gram = np.einsum("iab,jba->ij", lam, lam)
    np.testing.assert_array_equal(np.round(gram.real, 13), 2 * np.eye(d * d - 1))
    assert np.abs(gram.imag).max() < 1e-15
    # l_i l_j = (2/d) delta_ij I + (d_ijk + i f_ijk) l_k
    prod = np.einsum("iab,jbc->ijac", lam, lam)
    recon = (2.0 / d) * np.einsum("ij,ac->ijac", np.eye(d * d - 1), np.eye(d)) + np.einsum(
        "ijk,kac->ijac", b.d_tensor + 1j * b.f_tensor, lam
    )
    assert np.abs(prod - recon).max() <= 1e-12


@pytest.mark.parametrize("d", [2, 3, 4])
def test_tensor_symmetries(d):
    b = su_basis(d)
    f, dt = b.f_tensor, b.d_tensor
    for perm in [(1, 0, 2), (0, 2, 1), (2, 1, 0)]:
        np.testing.assert_allclose(f, -f.transpose(perm), atol=1e-14)
        np.testing.assert_allclose(dt, dt.transpose(perm), atol=1e-14)


def test_bloch_examples():
    np.testing.assert_allclose(bloch_decode(3, np.zeros(8)), np.eye(3) / 3, atol=1e-16)
    xi = np.zeros(8)
    xi[7] = 0.5
    np.testing.assert_allclose(bloch_decode(3, xi), np.diag([0.5, 0.5, 0.0]), atol=1e-15)
    np.testing.assert_allclose(bloch_decode(4, np.zeros(15)), np.eye(4) / 4, atol=1e-16)


def test_bloch_rejects_wrong_length():
    with pytest.raises(DimensionError):
        bloch_decode(3, np.zeros(7))


def test_pure_states_are_unit_bloch_vectors():
    for d in (2, 3, 4):
        xi = bloch_encode(random_density(d, 1, seed=d))
        assert np.dot(xi, xi) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 4]), st.integers(0, 2**32 - 1))
def test_bloch_roundtrip(d, seed):
    xi = np.random.default_rng(seed).normal(size=d * d - 1)
    m = bloch_decode(d, xi)
    assert np.abs(m - m.conj().T).max() <= 1e-15
    assert abs(np.trace(m) - 1) <= 1e-14
    np.testing.assert_allclose(bloch_encode(m), xi, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (3, 3), elements=st.floats(-1, 1)), arrays(np.float64, (3, 3), elements=st.floats(-1, 1)))
def test_encode_then_decode_is_identity_on_unit_trace(re, im):
    h = re + 1j * im
    h = h + h.conj().T
    h = h - np.trace(h) / 3 * np.eye(3) + np.eye(3) / 3
    np.testing.assert_allclose(bloch_decode(3, bloch_encode(h)), h, atol=1e-12)


def test_matrix_file_roundtrip():
    rho = random_density(3, 2, seed=1)
    text = dumps_matrix(rho)
    doc = json.loads(text)
    assert doc["dim"] == 3 and len(doc["entries"]) == 3
    back = loads_matrix(text)
    assert back.tobytes() == rho.tobytes()


def test_matrix_file_uses_17_digits():
    text = dumps_matrix(np.eye(2) / 3)
    assert "0.33333333333333331" in text


@pytest.mark.parametrize(
    "text",
    [
        '{"dim": 2, "entries": [[1, 0]',
        '{"dim": 2}',
        '{"dim": 0, "entries": []}',
        '{"dim": 2, "entries": [[[1,0],[0,0]]]}',
        '{"dim": 1, "entries": [[[1, "x"]]]}',
        '[1, 2]',
    ],
)
def test_matrix_file_errors(text):
    with pytest.raises(MatrixFormatError):
        loads_matrix(text)


def test_matrix_file_error_position():
    with pytest.raises(MatrixFormatError) as info:
        loads_matrix('{\n "dim": 2,\n "entries": [[[1, 0] [0, 0]]]\n}')
    assert info.value.line == 3
    assert info.value.column is not None
