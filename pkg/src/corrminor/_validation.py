"""Shared tolerances and input checks."""

import numpy as np

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9
ORTHO_TOL = 1e-10
IMAG_TOL = 1e-10
PURITY_TOL = 1e-8


class InvalidStateError(ValueError):
    """Raised when a matrix fails a density-matrix invariant.

    The ``invariant`` attribute names the failed check so the CLI can report it.
    """

    def __init__(self, message, invariant=None):
        super().__init__(message)
        self.invariant = invariant


def check_dimension(d, name="d", minimum=1):
    if isinstance(d, bool) or not isinstance(d, (int, np.integer)):
        raise ValueError(f"{name} must be an integer, got {d!r}")
    if d < minimum:
        raise ValueError(f"invalid dimension {name}={d}; must be >= {minimum}")
    return int(d)


def check_square(matrix, name="matrix"):
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be a square 2-D array, got shape {m.shape}")
    return m


def is_hermitian(matrix, tol=HERMITIAN_TOL):
    m = np.asarray(matrix)
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def check_hermitian(matrix, tol=HERMITIAN_TOL, name="operator"):
    m = check_square(matrix, name)
    if not is_hermitian(m, tol):
        dev = np.max(np.abs(m - m.conj().T))
        raise ValueError(f"{name} is not Hermitian (max deviation {dev:.3e} > {tol:g})")
    return m


def check_unit_interval(x, name):
    x = float(x)
    if not 0.0 <= x <= 1.0 or np.isnan(x):
        raise ValueError(f"{name} must lie in [0, 1], got {x}")
    return x


def check_probability_vector(weights, n=None, tol=1e-12):
    w = np.asarray(weights, dtype=float).ravel()
    if n is not None and w.size != n:
        raise ValueError(f"expected {n} weights, got {w.size}")
    if np.any(w < 0):
        raise ValueError("weights must be non-negative")
    if abs(w.sum() - 1.0) > tol:
        raise ValueError(f"weights must sum to 1 (sum = {w.sum():.15g})")
    return w


def check_orthogonal(matrix, tol=ORTHO_TOL):
    r = np.asarray(matrix, dtype=float)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise ValueError(f"rotation must be square, got shape {r.shape}")
    dev = np.max(np.abs(r.T @ r - np.eye(r.shape[0])), initial=0.0)
    if dev > tol:
        raise ValueError(f"rotation is not orthogonal (max |R^T R - 1| = {dev:.3e})")
    return r
