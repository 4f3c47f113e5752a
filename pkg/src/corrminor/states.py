"""Bipartite density matrices: constructors, validation and standard oracles.

Tensor ordering is a-major: the row index of a ``d_A d_B`` matrix is
``a * d_B + b``.
"""

import json
from dataclasses import dataclass

import numpy as np

from ._validation import (
    HERMITIAN_TOL,
    PSD_TOL,
    PURITY_TOL,
    TRACE_TOL,
    InvalidStateError,
    check_dimension,
    check_probability_vector,
    check_unit_interval,
)
from .designs import simplex_design, sic_povm

SUBSYSTEMS = ("A", "B")


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated bipartite state.

    Parameters
    ----------
    dim_a, dim_b : int
        Local dimensions.
    matrix : array_like, shape (dim_a * dim_b, dim_a * dim_b)
        Complex density matrix in a-major ordering.
    """

    dim_a: int
    dim_b: int
    matrix: np.ndarray

    def __post_init__(self):
        check_dimension(self.dim_a, "dim_a")
        check_dimension(self.dim_b, "dim_b")
        m = np.array(self.matrix, dtype=complex)
        n = self.dim_a * self.dim_b
        if m.shape != (n, n):
            raise InvalidStateError(
                f"matrix shape {m.shape} does not match dims ({self.dim_a}, {self.dim_b})",
                invariant="shape",
            )
        herm = np.abs(m - m.conj().T).max()
        if herm > HERMITIAN_TOL:
            raise InvalidStateError(f"not Hermitian (deviation {herm:.3e})", invariant="hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidStateError(f"trace is {tr:.12g}, expected 1", invariant="trace")
        lam = np.linalg.eigvalsh((m + m.conj().T) / 2).min()
        if lam < -PSD_TOL:
            raise InvalidStateError(f"not positive semidefinite (min eigenvalue {lam:.3e})", invariant="psd")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dims(self):
        return (self.dim_a, self.dim_b)

    @property
    def d(self):
        """Smaller local dimension."""
        return min(self.dim_a, self.dim_b)

    @property
    def D(self):
        """Larger local dimension."""
        return max(self.dim_a, self.dim_b)

    def purity(self):
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def to_dict(self):
        return {
            "dim_a": self.dim_a,
            "dim_b": self.dim_b,
            "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix],
        }

    @classmethod
    def from_dict(cls, data):
        try:
            dim_a, dim_b = int(data["dim_a"]), int(data["dim_b"])
            raw = np.asarray(data["matrix"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidStateError(f"malformed state record: {exc}", invariant="format") from exc
        if raw.ndim != 3 or raw.shape[2] != 2:
            raise InvalidStateError(
                "matrix entries must be [re, im] pairs", invariant="format"
            )
        return cls(dim_a, dim_b, raw[..., 0] + 1j * raw[..., 1])

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidStateError(f"malformed JSON: {exc}", invariant="format") from exc
        return cls.from_dict(data)


def as_state(rho, dims=None):
    """Coerce an array (with ``dims``) or a DensityMatrix into a DensityMatrix."""
    if isinstance(rho, DensityMatrix):
        return rho
    if dims is None:
        raise ValueError("dims are required when passing a raw matrix")
    return DensityMatrix(dims[0], dims[1], rho)


def check_schmidt(s):
    """Validate and sort pure-state Schmidt coefficients (descending)."""
    s = np.asarray(s, dtype=float).ravel()
    if s.size == 0 or np.any(s < 0):
        raise ValueError("Schmidt coefficients must be a non-empty non-negative vector")
    if abs(np.sum(s**2) - 1.0) > 1e-12:
        raise ValueError(f"Schmidt coefficients must satisfy sum s_k^2 = 1 (got {np.sum(s**2):.15g})")
    return np.sort(s)[::-1]


def _ket(index, dim):
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def pure_state(vector, dim_a, dim_b):
    """Projector onto a (normalized) vector in a-major ordering."""
    psi = np.asarray(vector, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(dim_a, dim_b, np.outer(psi, psi.conj()))


def pure_from_schmidt(s, dim_a, dim_b):
    """``|psi> = sum_k s_k |k>|k>`` in the computational bases."""
    dim_a, dim_b = check_dimension(dim_a, "dim_a"), check_dimension(dim_b, "dim_b")
    s = check_schmidt(s)
    if s.size > min(dim_a, dim_b):
        raise ValueError(f"{s.size} Schmidt coefficients exceed min(dim_a, dim_b) = {min(dim_a, dim_b)}")
    psi = np.zeros(dim_a * dim_b, dtype=complex)
    for k, sk in enumerate(s):
        psi[k * dim_b + k] = sk
    return DensityMatrix(dim_a, dim_b, np.outer(psi, psi.conj()))


def design_state(design_a, design_b):
    """Equal mixture ``(1/v) sum_k P_k^A (x) P_k^B`` of paired design elements."""
    if design_a.size != design_b.size:
        raise ValueError(f"designs have different sizes ({design_a.size} vs {design_b.size})")
    rho = np.einsum("kab,kcd->acbd", design_a.projectors, design_b.projectors)
    n = design_a.dim * design_b.dim
    return DensityMatrix(design_a.dim, design_b.dim, rho.reshape(n, n) / design_a.size)


def maximally_mixed(dim_a, dim_b):
    n = dim_a * dim_b
    return DensityMatrix(dim_a, dim_b, np.eye(n) / n)


def werner(d, c):
    """Isotropic state ``c |Phi><Phi| + (1 - c) 1/d^2`` with ``|Phi> = sum|kk>/sqrt(d)``."""
    d = check_dimension(d)
    c = check_unit_interval(c, "c")
    phi = np.zeros(d * d)
    phi[[k * d + k for k in range(d)]] = 1 / np.sqrt(d)
    rho = c * np.outer(phi, phi) + (1 - c) * np.eye(d * d) / d**2
    return DensityMatrix(d, d, rho)


def gap_state_components():
    """``(rho_1, rho_0)`` for the 3x2 mixture of :func:`ccnr_gap_state`."""
    rho0 = design_state(simplex_design(3), sic_povm(2))
    psi = (np.kron(_ket(1, 3), _ket(1, 2)) + np.kron(_ket(2, 3), _ket(0, 2))) / np.sqrt(2)
    rho1 = pure_state(psi, 3, 2)
    return rho1, rho0


def ccnr_gap_state(q):
    """``q |psi><psi| + (1 - q) rho_0`` on 3x2 with ``psi = (|11> + |20>)/sqrt 2``.

    ``rho_0`` is the design state of the 4-element simplex design in dimension
    3 paired with the qubit SIC. Entangled by PPT near q = 0.3, yet below the
    CCNR threshold.
    """
    q = check_unit_interval(q, "q")
    rho1, rho0 = gap_state_components()
    return DensityMatrix(3, 2, q * rho1.matrix + (1 - q) * rho0.matrix)


def virzi_family(q, r):
    """Two-qubit family supported on span{|01>, |10>} with coherence ``-r sqrt(q(1-q))``."""
    q = check_unit_interval(q, "q")
    r = check_unit_interval(r, "r")
    rho = np.zeros((4, 4))
    off = -r * np.sqrt(q * (1 - q))
    rho[1, 1], rho[2, 2] = q, 1 - q
    rho[1, 2] = rho[2, 1] = off
    return DensityMatrix(2, 2, rho)


def haar_vector(dim, rng):
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def random_pure(dim_a, dim_b, rng=None):
    rng = np.random.default_rng(rng)
    return pure_state(haar_vector(dim_a * dim_b, rng), dim_a, dim_b)


def random_state(dim_a, dim_b, rng=None, rank=None):
    """Random mixed state from the induced (Ginibre) measure."""
    rng = np.random.default_rng(rng)
    n = dim_a * dim_b
    k = n if rank is None else rank
    g = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    rho = g @ g.conj().T
    return DensityMatrix(dim_a, dim_b, rho / np.trace(rho).real)


def product_mixture(weights, vecs_a, vecs_b):
    """``sum_k w_k |a_k><a_k| (x) |b_k><b_k|`` from local pure vectors.

    Returns the raw matrix; vectors are assumed normalized.
    """
    a = np.asarray(vecs_a, dtype=complex)
    b = np.asarray(vecs_b, dtype=complex)
    w = check_probability_vector(weights, a.shape[0])
    if b.shape[0] != a.shape[0]:
        raise ValueError(f"{a.shape[0]} A-side vectors but {b.shape[0]} B-side vectors")
    pa = np.einsum("ka,kb->kab", a, a.conj())
    pb = np.einsum("ka,kb->kab", b, b.conj())
    rho = np.einsum("k,kab,kcd->acbd", w, pa, pb)
    n = a.shape[1] * b.shape[1]
    return rho.reshape(n, n)


def random_separable(dim_a, dim_b, n_terms, seed=None):
    """Convex mixture of ``n_terms`` Haar-random pure product states.

    Weights are Dirichlet(1, ..., 1). Deterministic for a fixed ``seed``.
    """
    dim_a, dim_b = check_dimension(dim_a, "dim_a"), check_dimension(dim_b, "dim_b")
    n_terms = check_dimension(n_terms, "n_terms")
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(n_terms))
    va = np.array([haar_vector(dim_a, rng) for _ in range(n_terms)])
    vb = np.array([haar_vector(dim_b, rng) for _ in range(n_terms)])
    return DensityMatrix(dim_a, dim_b, product_mixture(weights, va, vb))


def mix(states, weights):
    states = list(states)
    if not states:
        raise ValueError("need at least one state")
    dims = states[0].dims
    if any(s.dims != dims for s in states):
        raise ValueError("all states must share the same dims")
    w = check_probability_vector(weights, len(states))
    rho = sum(wk * s.matrix for wk, s in zip(w, states))
    return DensityMatrix(dims[0], dims[1], rho)


def _blocks(rho):
    a, b = rho.dim_a, rho.dim_b
    return rho.matrix.reshape(a, b, a, b)


def partial_transpose(rho, subsystem="B"):
    """Partial transpose on ``subsystem`` ('A' or 'B') as a plain array."""
    t = _blocks(rho)
    if subsystem == "B":
        t = t.transpose(0, 3, 2, 1)
    elif subsystem == "A":
        t = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    n = rho.dim_a * rho.dim_b
    return t.reshape(n, n)


def ppt_min_eigenvalue(rho):
    return float(np.linalg.eigvalsh(partial_transpose(rho, "B")).min())


def ppt_entangled(rho, tol=PSD_TOL):
    """True iff the partial transpose has an eigenvalue below ``-tol``."""
    return ppt_min_eigenvalue(rho) < -tol


def reduced_state(rho, keep="A"):
    t = _blocks(rho)
    if keep == "A":
        return np.einsum("abcb->ac", t)
    if keep == "B":
        return np.einsum("abad->bd", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def swap_subsystems(rho):
    """The same state with the roles of A and B exchanged."""
    t = _blocks(rho).transpose(1, 0, 3, 2)
    n = rho.dim_a * rho.dim_b
    return DensityMatrix(rho.dim_b, rho.dim_a, t.reshape(n, n))


def entanglement_entropy(rho):
    """Entropy of entanglement in bits; rejects mixed input."""
    if rho.purity() < 1 - PURITY_TOL:
        raise ValueError("entanglement entropy requires a pure state (tr rho^2 < 1 - 1e-8)")
    p = np.linalg.eigvalsh(reduced_state(rho, "A"))
    p = p[p > 1e-15]
    return float(max(0.0, -np.sum(p * np.log2(p))))


def is_fnf(rho, tol=1e-9):
    """True iff both marginals are maximally mixed within ``tol`` (entrywise)."""
    ra = reduced_state(rho, "A")
    rb = reduced_state(rho, "B")
    dev_a = np.abs(ra - np.eye(rho.dim_a) / rho.dim_a).max()
    dev_b = np.abs(rb - np.eye(rho.dim_b) / rho.dim_b).max()
    return bool(max(dev_a, dev_b) <= tol)
