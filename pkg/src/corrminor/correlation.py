"""Correlation matrices, operator-Schmidt decompositions and FNF blocks."""

from dataclasses import dataclass

import numpy as np

from ._validation import IMAG_TOL
from .hermitian_basis import generalized_gell_mann
from .states import check_schmidt


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """Real ``d_A^2 x d_B^2`` matrix ``C_ij = tr(rho A_i (x) B_j)``."""

    dim_a: int
    dim_b: int
    entries: np.ndarray
    identity_first: bool = True

    def __post_init__(self):
        e = np.array(self.entries, dtype=float)
        if e.shape != (self.dim_a**2, self.dim_b**2):
            raise ValueError(f"entries must be {self.dim_a**2}x{self.dim_b**2}, got {e.shape}")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    def singular_values(self):
        """Descending singular values; there are ``min(d_A, d_B)**2`` of them."""
        return np.linalg.svd(self.entries, compute_uv=False)

    def to_csv(self):
        rows = [",".join(f"{x:.11e}" for x in row) for row in self.entries]
        return "\n".join(rows) + "\n"


@dataclass(frozen=True, eq=False)
class OperatorSchmidt:
    """``rho = sum_k coefficients[k] ops_a[k] (x) ops_b[k]``.

    ``ops_a``/``ops_b`` are fixed only up to paired signs and rotations inside
    degenerate coefficient blocks.
    """

    coefficients: np.ndarray
    ops_a: np.ndarray
    ops_b: np.ndarray

    def reconstruct(self):
        da, db = self.ops_a.shape[1], self.ops_b.shape[1]
        rho = np.einsum("k,kab,kcd->acbd", self.coefficients, self.ops_a, self.ops_b)
        return rho.reshape(da * db, da * db)


@dataclass(frozen=True, eq=False)
class FnfBlocks:
    """``C = [[corner, s^T], [r, T]]`` for identity-first bases."""

    corner: float
    r: np.ndarray
    s: np.ndarray
    t: np.ndarray

    def assemble(self):
        top = np.concatenate([[self.corner], self.s])
        bottom = np.hstack([self.r[:, None], self.t])
        return np.vstack([top, bottom])


def _default_bases(rho, basis_a, basis_b):
    if basis_a is None:
        basis_a = generalized_gell_mann(rho.dim_a)
    if basis_b is None:
        basis_b = generalized_gell_mann(rho.dim_b)
    if basis_a.dim != rho.dim_a or basis_b.dim != rho.dim_b:
        raise ValueError(
            f"basis dims ({basis_a.dim}, {basis_b.dim}) do not match state dims {rho.dims}"
        )
    return basis_a, basis_b


def correlation_matrix(rho, basis_a=None, basis_b=None):
    """Correlation matrix of ``rho`` in the given bases (Gell-Mann by default).

    Raises
    ------
    ValueError
        If the dims disagree or an entry has imaginary part above 1e-10.
    """
    basis_a, basis_b = _default_bases(rho, basis_a, basis_b)
    t = rho.matrix.reshape(rho.dim_a, rho.dim_b, rho.dim_a, rho.dim_b)
    # tr(rho A_i (x) B_j) = sum rho[a b, a' b'] A_i[a', a] B_j[b', b]
    c = np.einsum("abcd,ica,jdb->ij", t, basis_a.elements, basis_b.elements, optimize=True)
    imag = np.abs(c.imag).max()
    if imag > IMAG_TOL:
        raise ValueError(f"correlation matrix has imaginary residue {imag:.3e}; inputs are not Hermitian")
    return CorrelationMatrix(
        rho.dim_a, rho.dim_b, c.real, identity_first=basis_a.identity_first and basis_b.identity_first
    )


def state_from_correlation(corr, basis_a=None, basis_b=None):
    """Inverse of :func:`correlation_matrix`: ``rho = sum_ij C_ij A_i (x) B_j``."""
    basis_a = basis_a or generalized_gell_mann(corr.dim_a)
    basis_b = basis_b or generalized_gell_mann(corr.dim_b)
    rho = np.einsum("ij,iab,jcd->acbd", corr.entries, basis_a.elements, basis_b.elements)
    n = corr.dim_a * corr.dim_b
    return rho.reshape(n, n)


def operator_schmidt(rho, basis_a=None, basis_b=None):
    """Operator-Schmidt decomposition read off the SVD ``C = U S V^T``.

    ``G_k = sum_i U_ik A_i`` and ``H_k = sum_j V_jk B_j``; coefficients are the
    singular values, descending. Ties keep LAPACK's order.
    """
    basis_a, basis_b = _default_bases(rho, basis_a, basis_b)
    c = correlation_matrix(rho, basis_a, basis_b).entries
    u, sv, vt = np.linalg.svd(c, full_matrices=False)
    ops_a = np.einsum("ik,iab->kab", u, basis_a.elements)
    ops_b = np.einsum("jk,jab->kab", vt.T, basis_b.elements)
    return OperatorSchmidt(sv, ops_a, ops_b)


def realign(rho):
    """Realigned matrix ``R[(a a'), (b b')] = rho[(a b), (a' b')]``."""
    da, db = rho.dim_a, rho.dim_b
    t = rho.matrix.reshape(da, db, da, db)
    return t.transpose(0, 2, 1, 3).reshape(da * da, db * db)


def realignment_singulars(rho):
    """Singular values of the realigned matrix (basis-free route to the spectrum)."""
    return np.linalg.svd(realign(rho), compute_uv=False)


def fnf_blocks(corr, tol=1e-8):
    """Split an identity-first correlation matrix into ``corner, r, s, T``."""
    expected = 1 / np.sqrt(corr.dim_a * corr.dim_b)
    corner = corr.entries[0, 0]
    if abs(corner - expected) > tol:
        raise ValueError(
            f"corner entry {corner:.6g} != 1/sqrt(d_A d_B) = {expected:.6g}; "
            "correlation matrix was not built from identity-first bases"
        )
    e = corr.entries
    return FnfBlocks(float(corner), e[1:, 0].copy(), e[0, 1:].copy(), e[1:, 1:].copy())


def pure_operator_schmidt(s, d=None):
    """All ordered products ``s_k s_l``, sorted descending.

    With ``d`` given the result is zero-padded to length ``d**2``.
    """
    s = check_schmidt(s)
    if d is not None:
        if d < s.size:
            raise ValueError(f"d={d} is smaller than the number of coefficients ({s.size})")
        s = np.concatenate([s, np.zeros(d - s.size)])
    return np.sort(np.outer(s, s).ravel())[::-1]
