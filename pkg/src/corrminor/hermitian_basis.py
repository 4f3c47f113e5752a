"""Orthonormal bases of the real vector space of d x d Hermitian matrices.

Bases are normalized as ``tr(E_i E_j) = delta_ij`` (no factor of 2), and the
generalized Gell-Mann construction puts the scalar matrix ``1/sqrt(d)`` first.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._validation import ORTHO_TOL, check_dimension, check_hermitian, check_orthogonal


@dataclass(frozen=True, eq=False)
class HermitianBasis:
    """Ordered orthonormal Hermitian basis.

    Attributes
    ----------
    dim : int
        Matrix size d.
    elements : ndarray, shape (d**2, d, d)
        Basis matrices, read-only.
    identity_first : bool
        True when ``elements[0]`` is ``1/sqrt(d)``. Rotated bases clear it.
    """

    dim: int
    elements: np.ndarray
    identity_first: bool = True

    def __post_init__(self):
        el = np.array(self.elements, dtype=complex)
        d = self.dim
        if el.shape != (d * d, d, d):
            raise ValueError(f"expected {d * d} elements of shape ({d}, {d}), got {el.shape}")
        el.setflags(write=False)
        object.__setattr__(self, "elements", el)

    def __len__(self):
        return self.dim * self.dim

    def __getitem__(self, i):
        return self.elements[i]

    def gram(self):
        """Matrix of trace inner products ``tr(E_i E_j)`` (real part)."""
        flat = self.elements.reshape(len(self), -1)
        # tr(E_i E_j) = sum_ab (E_i)_ab (E_j)_ba = <E_i^dagger, E_j> for Hermitian E
        return np.real(flat.conj() @ flat.T)

    def check(self, tol=ORTHO_TOL):
        """Raise ``ValueError`` if any basis invariant fails."""
        for i, e in enumerate(self.elements):
            check_hermitian(e, tol=1e-12, name=f"element {i}")
        dev = np.max(np.abs(self.gram() - np.eye(len(self))))
        if dev > tol:
            raise ValueError(f"basis is not orthonormal (max Gram deviation {dev:.3e})")
        if self.identity_first:
            d = self.dim
            if np.max(np.abs(self.elements[0] - np.eye(d) / np.sqrt(d))) > 1e-12:
                raise ValueError("element 0 is not 1/sqrt(d)")
            traces = np.abs(np.trace(self.elements[1:], axis1=1, axis2=2))
            if traces.size and traces.max() > 1e-12:
                raise ValueError("non-identity elements must be traceless")
        return self


@lru_cache(maxsize=None)
def _gell_mann_elements(d):
    elements = [np.eye(d, dtype=complex) / np.sqrt(d)]
    pairs = [(k, l) for k in range(d) for l in range(k + 1, d)]
    for k, l in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[k, l] = m[l, k] = 1 / np.sqrt(2)
        elements.append(m)
    for k, l in pairs:
        m = np.zeros((d, d), dtype=complex)
        # -i|k><l| + i|l><k| (k < l), so d = 2 gives +sigma_y
        m[k, l] = -1j / np.sqrt(2)
        m[l, k] = 1j / np.sqrt(2)
        elements.append(m)
    for m in range(1, d):
        diag = np.zeros(d)
        diag[:m] = 1.0
        diag[m] = -m
        elements.append(np.diag(diag / np.linalg.norm(diag)).astype(complex))
    out = np.array(elements)
    out.setflags(write=False)
    return out


def generalized_gell_mann(d):
    """Generalized Gell-Mann basis with trace normalization 1.

    Order: ``1/sqrt(d)``, the symmetric off-diagonal generators, the
    antisymmetric ones, then the ``d - 1`` traceless diagonal generators.
    For d = 2 this is ``(1, sigma_x, sigma_y, sigma_z) / sqrt(2)``.
    """
    d = check_dimension(d)
    return HermitianBasis(d, _gell_mann_elements(d), identity_first=True)


def rotate_basis(basis, rotation):
    """Apply a real orthogonal mixing ``E'_i = sum_k R_ik E_k``.

    The output is flagged ``identity_first=False`` unless ``rotation`` fixes
    index 0 (first row and column equal to e_0).
    """
    n = len(basis)
    r = check_orthogonal(rotation)
    if r.shape != (n, n):
        raise ValueError(f"rotation must be {n}x{n} for a basis of dimension {basis.dim}")
    new = np.einsum("ik,kab->iab", r, basis.elements)
    keeps_identity = (
        basis.identity_first
        and abs(r[0, 0] - 1.0) <= ORTHO_TOL
        and np.allclose(r[0, 1:], 0.0, atol=ORTHO_TOL)
        and np.allclose(r[1:, 0], 0.0, atol=ORTHO_TOL)
    )
    if keeps_identity:
        new[0] = basis.elements[0]
    return HermitianBasis(basis.dim, new, identity_first=keeps_identity)


def expand(operator, basis):
    """Real coordinates ``c_i = tr(E_i X)`` of a Hermitian operator."""
    x = check_hermitian(np.asarray(operator, dtype=complex))
    if x.shape != (basis.dim, basis.dim):
        raise ValueError(f"operator shape {x.shape} does not match basis dimension {basis.dim}")
    coords = np.einsum("iab,ba->i", basis.elements, x)
    return coords.real


def reconstruct(coords, basis):
    """Inverse of :func:`expand`."""
    c = np.asarray(coords, dtype=float)
    if c.shape != (len(basis),):
        raise ValueError(f"expected {len(basis)} coordinates, got shape {c.shape}")
    return np.einsum("i,iab->ab", c, basis.elements)


def random_orthogonal(n, rng=None):
    """Haar-random element of O(n)."""
    from scipy.stats import ortho_group

    if n == 1:
        rng = np.random.default_rng(rng)
        return np.array([[rng.choice([-1.0, 1.0])]])
    return ortho_group.rvs(n, random_state=np.random.default_rng(rng))
