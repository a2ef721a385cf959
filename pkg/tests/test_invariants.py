from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qorbit.errors import DimensionError
from qorbit.invariants import (
    CasimirPoint,
    casimirs_d4,
    discriminant,
    extend_traces,
    moments,
    newton_S_to_t,
    newton_t_to_S,
    qutrit_reality,
    s_from_casimirs,
    trace_invariants,
)
from qorbit.state import bloch_encode, eigenvalues_desc, random_densities, random_density, su_basis


def elementary(x, k):
    return sum(np.prod(c) for c in combinations(x, k))


def direct_traces(rho, kmax):
    out, p = [], np.eye(rho.shape[0])
    for _ in range(kmax):
        p = p @ rho
        out.append(np.trace(p).real)
    return np.array(out)


@pytest.mark.parametrize(
    "rho, kmax, want",
    [
        (np.eye(3) / 3, 3, [1, 1 / 3, 1 / 9]),
        (np.diag([1.0, 0, 0]), 4, [1, 1, 1, 1]),
        (np.diag([0.5, 0.5, 0]), 3, [1, 0.5, 0.25]),
    ],
)
def test_trace_invariants_examples(rho, kmax, want):
    np.testing.assert_allclose(trace_invariants(rho, kmax), want, atol=1e-15)


def test_trace_invariants_match_matrix_powers():
    rhos = random_densities(5, 50, seed=3)
    for rho in rhos:
        np.testing.assert_allclose(trace_invariants(rho, 7), direct_traces(rho, 7), rtol=1e-12, atol=1e-15)


def test_trace_invariants_batch_shape():
    rhos = random_densities(3, 10, seed=1)
    assert trace_invariants(rhos, 5).shape == (10, 5)


@pytest.mark.parametrize(
    "t, want",
    [
        ([1, 1, 1], [1, 0, 0]),
        ([1, 1 / 3, 1 / 9], [1, 1 / 3, 1 / 27]),
        ([1, 0.38, 0.16], [1, 0.31, 0.03]),
    ],
)
def test_newton_examples(t, want):
    np.testing.assert_allclose(newton_t_to_S(t), want, atol=1e-15)


def test_newton_against_brute_force():
    x = np.array([0.5, 0.3, 0.2])
    t = [sum(x**k) for k in (1, 2, 3)]
    expected = [elementary(x, k) for k in (1, 2, 3)]
    np.testing.assert_allclose(newton_t_to_S(t), expected, atol=1e-15)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_newton_roundtrip(d, seed):
    x = np.random.default_rng(seed).dirichlet(np.ones(d))
    t = np.array([np.sum(x**k) for k in range(1, d + 1)])
    np.testing.assert_allclose(newton_S_to_t(newton_t_to_S(t)), t, atol=1e-12)


@pytest.mark.parametrize(
    "t, want",
    [
        ([1, 1, 1], 1.0),
        ([1, 1 / 3, 1 / 9], 1 / 27),
        # 0.5**4 + 0.3**4 + 0.2**4
        ([1, 0.38, 0.16], 0.0722),
    ],
)
def test_extend_examples(t, want):
    assert extend_traces(t, 4)[0] == pytest.approx(want, abs=1e-15)


def test_extend_rejects_small_kmax():
    with pytest.raises(ValueError):
        extend_traces([1, 0.5, 0.3], 3)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_extend_matches_direct_traces(d):
    rhos = random_densities(d, 10_000, seed=d)
    kmax = 2 * d + 2
    full = trace_invariants(rhos, kmax)
    ext = extend_traces(full[:, :d], kmax)
    assert np.abs(ext - full[:, d:]).max() <= 1e-10


def test_moments_prepend_dimension():
    m = moments([1, 0.38, 0.16], 4)
    np.testing.assert_allclose(m, [3, 1, 0.38, 0.16, 0.0722], atol=1e-15)


@pytest.mark.parametrize(
    "x, want",
    [([1 / 3] * 3, 0.0), ([1, 0, 0], 0.0), ([0.5, 0.3, 0.2], 3.6e-5)],
)
def test_discriminant_examples(x, want):
    assert discriminant(x) == pytest.approx(want, abs=1e-18)


def test_discriminant_is_squared_vandermonde():
    x = np.random.default_rng(0).uniform(size=(20, 5))
    v = x[:, :, None] ** np.arange(5)
    np.testing.assert_allclose(discriminant(x), np.linalg.det(v) ** 2, rtol=1e-9)


def test_qutrit_reality_is_discriminant():
    rhos = random_densities(3, 2000, seed=8, ranks=3)
    x = eigenvalues_desc(rhos)
    t = trace_invariants(rhos, 3)
    np.testing.assert_allclose(qutrit_reality(t[:, 1], t[:, 2]), discriminant(x), rtol=1e-9)


def test_casimirs_examples():
    assert casimirs_d4(np.zeros(15)) == CasimirPoint(0.0, 0.0, 0.0)
    xi = np.random.default_rng(1).normal(size=15)
    assert casimirs_d4(xi).c2 == pytest.approx(float(np.dot(xi, xi)), rel=1e-15)
    for seed in range(5):
        c = casimirs_d4(bloch_encode(random_density(4, 1, seed=seed)))
        np.testing.assert_allclose(c, (1, 1, 1), atol=1e-10)


def test_casimirs_reject_other_dimensions():
    with pytest.raises(DimensionError):
        casimirs_d4(np.zeros(8))
    with pytest.raises(DimensionError):
        casimirs_d4(np.zeros(15), su_basis(3))


def test_casimirs_dense_oracle():
    d = su_basis(4).d_tensor
    xi = np.random.default_rng(2).normal(size=15)
    c3 = np.sqrt(1.5) * np.einsum("ijk,i,j,k->", d, xi, xi, xi)
    c4 = 1.5 * np.einsum("ijk,lmk,i,j,l,m->", d, d, xi, xi, xi, xi)
    got = casimirs_d4(xi)
    assert got.c3 == pytest.approx(c3, rel=1e-12)
    assert got.c4 == pytest.approx(c4, rel=1e-12)


def test_s_from_casimirs_examples():
    assert s_from_casimirs((0, 0, 0)) == (3 / 8, 1 / 16, 1 / 256)
    assert s_from_casimirs((1, 1, 1)) == (0.0, 0.0, 0.0)
    assert s_from_casimirs((1, 0, 0))[1] == -1 / 8


def test_s_formulas_end_to_end():
    rhos = random_densities(4, 10_000, seed=44)
    c = casimirs_d4(bloch_encode(rhos))
    s = np.stack(s_from_casimirs(c), axis=1)
    x = eigenvalues_desc(rhos)
    e = np.stack([sum(np.prod(x[:, list(ix)], axis=1) for ix in combinations(range(4), k)) for k in (2, 3, 4)], axis=1)
    assert np.abs(s - e).max() <= 1e-10
