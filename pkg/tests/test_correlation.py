import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from corrminor.correlation import (
    correlation_matrix,
    fnf_blocks,
    operator_schmidt,
    pure_operator_schmidt,
    realign,
    realignment_singulars,
    state_from_correlation,
)
from corrminor.hermitian_basis import generalized_gell_mann, random_orthogonal, rotate_basis
from corrminor.states import maximally_mixed, pure_from_schmidt, random_state, werner

from conftest import DIM_PAIRS, bell_state


def test_bell_correlation_matrix():
    c = correlation_matrix(bell_state()).entries
    # <sx sx> = 1, <sy sy> = -1, <sz sz> = 1, each over 2
    np.testing.assert_allclose(c, np.diag([0.5, 0.5, -0.5, 0.5]), atol=1e-15)


def test_maximally_mixed_has_single_coefficient():
    c = correlation_matrix(maximally_mixed(3, 2))
    assert c.entries.shape == (9, 4)
    sv = c.singular_values()
    assert sv[0] == pytest.approx(1 / np.sqrt(6))
    np.testing.assert_allclose(sv[1:], 0, atol=1e-15)


@pytest.mark.parametrize("da, db", DIM_PAIRS)
def test_state_roundtrip(da, db, rng):
    rho = random_state(da, db, rng)
    back = state_from_correlation(correlation_matrix(rho))
    np.testing.assert_allclose(back, rho.matrix, atol=1e-13)


@pytest.mark.parametrize("da, db", DIM_PAIRS)
def test_operator_schmidt_reconstructs(da, db, rng):
    rho = random_state(da, db, rng)
    dec = operator_schmidt(rho)
    np.testing.assert_allclose(dec.reconstruct(), rho.matrix, atol=1e-13)
    assert np.all(np.diff(dec.coefficients) <= 1e-15)
    # the local operators are orthonormal
    ga = dec.ops_a.reshape(len(dec.coefficients), -1)
    np.testing.assert_allclose(ga.conj() @ ga.T, np.eye(len(dec.coefficients)), atol=1e-12)


def test_realign_shape():
    assert realign(random_state(3, 2, 0)).shape == (9, 4)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(DIM_PAIRS), st.integers(0, 2**31))
def test_singulars_match_realignment(dims, seed):
    rho = random_state(*dims, rng=seed)
    np.testing.assert_allclose(correlation_matrix(rho).singular_values(), realignment_singulars(rho), atol=1e-12)


def test_singulars_basis_independent(rng):
    rho = random_state(3, 2, rng)
    ba = rotate_basis(generalized_gell_mann(3), random_orthogonal(9, rng))
    bb = rotate_basis(generalized_gell_mann(2), random_orthogonal(4, rng))
    np.testing.assert_allclose(
        correlation_matrix(rho, ba, bb).singular_values(), correlation_matrix(rho).singular_values(), atol=1e-12
    )


def test_pure_operator_schmidt_is_pairwise_products():
    s = np.array([0.7, 0.6, np.sqrt(1 - 0.85)])
    s = np.sort(s)[::-1]
    expected = np.sort(np.outer(s, s).ravel())[::-1]
    np.testing.assert_allclose(pure_operator_schmidt(s), expected, atol=1e-15)
    np.testing.assert_allclose(correlation_matrix(pure_from_schmidt(s, 3, 3)).singular_values(), expected, atol=1e-12)


def test_fnf_blocks_werner():
    blocks = fnf_blocks(correlation_matrix(werner(2, 0.6)))
    assert blocks.corner == pytest.approx(0.5)
    np.testing.assert_allclose(blocks.r, 0, atol=1e-15)
    np.testing.assert_allclose(blocks.s, 0, atol=1e-15)
    np.testing.assert_allclose(np.abs(np.diag(blocks.t)), 0.3, atol=1e-15)
    np.testing.assert_allclose(blocks.assemble(), correlation_matrix(werner(2, 0.6)).entries, atol=1e-15)


def test_fnf_blocks_require_identity_first(rng):
    c = correlation_matrix(random_state(2, 2, rng), rotate_basis(generalized_gell_mann(2), random_orthogonal(4, rng)))
    with pytest.raises(ValueError):
        fnf_blocks(c)


def test_csv_has_twelve_significant_digits():
    text = correlation_matrix(werner(2, 0.6)).to_csv()
    first = text.strip().splitlines()[0].split(",")[0]
    mantissa = first.split("e")[0].lstrip("-").replace(".", "")
    assert len(mantissa) == 12
