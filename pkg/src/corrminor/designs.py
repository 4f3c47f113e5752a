"""Regular, coherent, degree-1 quantum designs built from pure projectors."""

from dataclasses import dataclass

import numpy as np

from ._validation import check_dimension

DESIGN_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class QuantumDesign:
    """``v`` rank-one projectors in dimension ``b`` with common overlap ``mu``."""

    dim: int
    projectors: np.ndarray
    overlap: float

    def __post_init__(self):
        p = np.array(self.projectors, dtype=complex)
        if p.ndim != 3 or p.shape[1:] != (self.dim, self.dim):
            raise ValueError(f"projectors must have shape (v, {self.dim}, {self.dim}), got {p.shape}")
        p.setflags(write=False)
        object.__setattr__(self, "projectors", p)
        object.__setattr__(self, "overlap", float(self.overlap))

    @property
    def size(self):
        return self.projectors.shape[0]

    def expected_overlap(self):
        """``(v - b) / (b (v - 1))``; 0 for a single-element design."""
        v, b = self.size, self.dim
        return 0.0 if v == 1 else (v - b) / (b * (v - 1))


@dataclass(frozen=True)
class DesignReport:
    regular_r1: bool
    coherent: bool
    degree1: bool
    measured_overlap: float
    overlap_formula_ok: bool
    max_regular_deviation: float
    max_coherence_deviation: float
    max_degree1_deviation: float

    @property
    def ok(self):
        return self.regular_r1 and self.coherent and self.degree1 and self.overlap_formula_ok


def _from_vectors(vectors, overlap):
    vecs = np.asarray(vectors, dtype=complex)
    vecs = vecs / np.linalg.norm(vecs, axis=1, keepdims=True)
    projectors = np.einsum("ka,kb->kab", vecs, vecs.conj())
    return QuantumDesign(vecs.shape[1], projectors, overlap)


def orthonormal_basis_design(b):
    """Computational-basis projectors ``|k><k|``; overlap 0."""
    b = check_dimension(b, "b")
    return _from_vectors(np.eye(b), 0.0)


def simplex_vectors(b):
    """``b + 1`` real unit vectors in R^b with pairwise dot product ``-1/b``.

    Built recursively: the first vertex is ``e_0`` and the remaining ones are
    ``(-1/b, sqrt(1 - 1/b**2) * w)`` for the vertices ``w`` of the
    (b-1)-simplex.
    """
    b = check_dimension(b, "b")
    if b == 1:
        return np.array([[1.0], [-1.0]])
    lower = simplex_vectors(b - 1)
    scale = np.sqrt(1.0 - 1.0 / b**2)
    rest = np.hstack([np.full((b, 1), -1.0 / b), scale * lower])
    first = np.zeros((1, b))
    first[0, 0] = 1.0
    return np.vstack([first, rest])


def simplex_design(b):
    """``b + 1`` projectors onto regular-simplex vertices; overlap ``1/b**2``."""
    b = check_dimension(b, "b", minimum=2)
    return _from_vectors(simplex_vectors(b), 1.0 / b**2)


def _weyl_heisenberg_orbit(fiducial):
    b = fiducial.size
    omega = np.exp(2j * np.pi / b)
    shift = np.roll(np.eye(b), 1, axis=0)
    clock = np.diag(omega ** np.arange(b))
    vecs = []
    for j in range(b):
        for k in range(b):
            op = np.linalg.matrix_power(shift, j) @ np.linalg.matrix_power(clock, k)
            vecs.append(op @ fiducial)
    return np.array(vecs)


def sic_povm(b):
    """SIC-POVM in dimension 2 or 3 (``b**2`` projectors, overlap ``1/(b+1)``).

    For b = 2 the Bloch vectors form a tetrahedron with one vertex on the
    +z axis (the state |0>) and the other three at polar cosine -1/3, azimuths
    0, 2pi/3, 4pi/3. For b = 3 the set is the Weyl-Heisenberg orbit of the
    fiducial ``(0, 1, -1)/sqrt(2)``.
    """
    b = check_dimension(b, "b")
    if b == 2:
        vecs = [np.array([1.0, 0.0], dtype=complex)]
        for k in range(3):
            vecs.append(np.array([1 / np.sqrt(3), np.sqrt(2 / 3) * np.exp(2j * np.pi * k / 3)]))
        design = _from_vectors(vecs, 1.0 / 3.0)
    elif b == 3:
        fiducial = np.array([0.0, 1.0, -1.0], dtype=complex) / np.sqrt(2)
        design = _from_vectors(_weyl_heisenberg_orbit(fiducial), 0.25)
    else:
        raise ValueError(f"sic_povm supports b in {{2, 3}} only, got b={b}")
    report = verify_design(design)
    if not report.ok:  # pragma: no cover - hardcoded fiducials
        raise RuntimeError(f"SIC construction failed verification: {report}")
    return design


def tetrahedral_sic():
    """Qubit SIC with Bloch vectors ``(+-1, +-1, +-1)/sqrt(3)``, even sign count.

    Same spectra as :func:`sic_povm` (2) in every design-state theorem, but a
    different orientation relative to the computational basis.
    """
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]])
    sz = np.diag([1.0, -1.0]).astype(complex)
    signs = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    projs = [
        (np.eye(2) + (a * sx + b * sy + c * sz) / np.sqrt(3)) / 2 for a, b, c in signs
    ]
    return QuantumDesign(2, np.array(projs), 1.0 / 3.0)


def verify_design(design, tol=DESIGN_TOL):
    """Check regularity (r=1), coherence and degree 1; never raises."""
    p = design.projectors
    v, b = p.shape[0], design.dim
    herm = np.abs(p - np.conj(np.transpose(p, (0, 2, 1)))).max(initial=0.0)
    idem = np.abs(p @ p - p).max(initial=0.0)
    tr = np.abs(np.trace(p, axis1=1, axis2=2) - 1.0).max(initial=0.0)
    reg_dev = float(max(herm, idem, tr))

    coh_dev = float(np.abs(p.sum(axis=0) - (v / b) * np.eye(b)).max())

    overlaps = np.real(np.einsum("kab,lba->kl", p, p))
    off = overlaps[~np.eye(v, dtype=bool)]
    if off.size:
        mu = float(off.mean())
        deg_dev = float(np.abs(off - mu).max())
    else:
        mu, deg_dev = 0.0, 0.0
    expected = 0.0 if v == 1 else (v - b) / (b * (v - 1))
    return DesignReport(
        regular_r1=reg_dev <= tol,
        coherent=coh_dev <= tol,
        degree1=deg_dev <= tol,
        measured_overlap=mu,
        overlap_formula_ok=abs(mu - expected) <= tol,
        max_regular_deviation=reg_dev,
        max_coherence_deviation=coh_dev,
        max_degree1_deviation=deg_dev,
    )
