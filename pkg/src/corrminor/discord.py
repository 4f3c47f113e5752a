"""CMN-based discord with respect to subsystem A.

``D_{h,p}(rho) = M_{h,p}(rho)^p - max_Pi M_{h,p}(Pi[rho])^p``, the maximum
running over non-selective projective measurements on A. A measurement maps
the correlation matrix ``C -> A C`` with ``A = X X^T``, ``X_il = <l|A_i|l>``.
Since X has orthonormal columns, ``A C`` and ``X^T C`` share their non-zero
singular values; the optimizer works with the smaller ``X^T C``.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.stats import unitary_group

from .cmn_detect import INFINITY, CmnParams, cmn_from_singulars
from .correlation import correlation_matrix
from .hermitian_basis import generalized_gell_mann
from .states import DensityMatrix, reduced_state

NEGATIVE_DISCORD_TOL = 1e-8


class DiscordInvariantError(RuntimeError):
    """Raw discord came out negative beyond round-off."""


@dataclass(frozen=True, eq=False)
class ProjectiveMeasurement:
    """Rank-one projective measurement given by an orthonormal frame.

    ``vectors[:, l]`` is the l-th basis vector ``|l>``.
    """

    dim: int
    vectors: np.ndarray

    def __post_init__(self):
        v = np.array(self.vectors, dtype=complex)
        if v.shape != (self.dim, self.dim):
            raise ValueError(f"vectors must be {self.dim}x{self.dim}, got {v.shape}")
        dev = np.abs(v.conj().T @ v - np.eye(self.dim)).max()
        if dev > 1e-10:
            raise ValueError(f"measurement vectors are not orthonormal (deviation {dev:.3e})")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @classmethod
    def computational(cls, dim):
        return cls(dim, np.eye(dim))

    @property
    def projectors(self):
        v = self.vectors
        return np.einsum("al,bl->lab", v, v.conj())


def measure_channel(rho, measurement):
    """``sum_l (Pi_l (x) 1) rho (Pi_l (x) 1)``."""
    if measurement.dim != rho.dim_a:
        raise ValueError(f"measurement dim {measurement.dim} != dim_a {rho.dim_a}")
    eye_b = np.eye(rho.dim_b)
    out = np.zeros_like(rho.matrix)
    for p in measurement.projectors:
        k = np.kron(p, eye_b)
        out += k @ rho.matrix @ k
    return DensityMatrix(rho.dim_a, rho.dim_b, out)


def _x_matrix(vectors, elements):
    # X_il = <l|A_i|l> = tr(A_i |l><l|)
    d = vectors.shape[0]
    outer = vectors[:, None, :] * vectors.conj()[None, :, :]  # [a, b, l] = u_al conj(u_bl)
    return np.real(elements.reshape(-1, d * d) @ outer.transpose(1, 0, 2).reshape(d * d, d))


def measurement_projector(measurement, basis_a=None):
    """Real ``d_A^2 x d_A^2`` projector ``A = X X^T`` of rank ``d_A``."""
    basis_a = basis_a or generalized_gell_mann(measurement.dim)
    if basis_a.dim != measurement.dim:
        raise ValueError(f"basis dim {basis_a.dim} != measurement dim {measurement.dim}")
    x = _x_matrix(measurement.vectors, basis_a.elements)
    return x @ x.T


@dataclass
class OptimizerConfig:
    """Multi-restart Nelder-Mead over measurement frames ``U0 expm(iH)``.

    Restart 0 starts from the computational basis, restart 1 from the
    eigenbasis of the reduced state on A, the rest from Haar-random frames.
    """

    restarts: int = 32
    seed: int = 0
    xatol: float = 1e-6
    fatol: float = 1e-10
    maxiter: int = 4000


@dataclass
class DiscordResult:
    value: float
    raw_value: float
    best_measurement: ProjectiveMeasurement
    pre_value: float
    post_value: float
    restarts_used: int
    converged: bool
    restart_values: list = field(default_factory=list, repr=False)


def _hermitian_from_params(theta, d):
    h = np.zeros((d, d), dtype=complex)
    iu = np.triu_indices(d, 1)
    n = iu[0].size
    h[iu] = theta[:n] + 1j * theta[n:]
    return h + h.conj().T


def _unitary_from_params(theta, d):
    w, v = np.linalg.eigh(_hermitian_from_params(theta, d))
    return (v * np.exp(1j * w)) @ v.conj().T


def _post_value(frame, elements, c, params):
    xt_c = _x_matrix(frame, elements).T @ c
    # the remaining singular values of A C are zero
    sv = np.linalg.svd(xt_c, compute_uv=False)
    return _cmn_power(sv, params.h, params.p)


def _cmn_power(sv, h, p):
    """``M_{h,p}^p`` for finite p, zero when h exceeds the non-zero count."""
    if h > sv.size:
        return 0.0
    x = np.sort(sv)[::-1] ** p
    e = np.zeros(h + 1)
    e[0] = 1.0
    for xi in x:
        e[1:] = e[1:] + xi * e[:-1]
    return float(e[h])


def cmn_discord(rho, params, opt=None):
    """Estimate ``D^A_{h,p}`` by maximizing the post-measurement CMN.

    The maximization is local and multi-start, so ``post_value`` is a lower
    bound on the true maximum and ``value`` an upper bound on the discord.

    Raises
    ------
    ValueError
        For ``p = INFINITY``, where the p-th power is undefined.
    DiscordInvariantError
        If the raw difference is below ``-1e-8``.
    """
    if params.p is INFINITY:
        raise ValueError("CMN discord is undefined for p = INFINITY")
    opt = opt or OptimizerConfig()
    da = rho.dim_a
    basis_a = generalized_gell_mann(da)
    c = correlation_matrix(rho, basis_a).entries
    params.validate(min(c.shape))
    pre = cmn_from_singulars(np.linalg.svd(c, compute_uv=False), params) ** params.p

    n_params = da * (da - 1)
    rng = np.random.default_rng(opt.seed)
    frames = [np.eye(da, dtype=complex), np.linalg.eigh(reduced_state(rho, "A"))[1]]
    while len(frames) < opt.restarts:
        frames.append(unitary_group.rvs(da, random_state=rng) if da > 1 else np.eye(1, dtype=complex))
    frames = frames[: max(opt.restarts, 1)]

    best_val, best_frame, best_ok = -np.inf, frames[0], True
    restart_values = []
    for frame0 in frames:
        if n_params == 0:
            val, frame, ok = _post_value(frame0, basis_a.elements, c, params), frame0, True
        else:

            def objective(theta, frame0=frame0):
                u = frame0 @ _unitary_from_params(theta, da)
                return -_post_value(u, basis_a.elements, c, params)

            res = minimize(
                objective,
                np.zeros(n_params),
                method="Nelder-Mead",
                options={
                    "xatol": opt.xatol,
                    "fatol": opt.fatol,
                    "maxiter": opt.maxiter,
                    "initial_simplex": _initial_simplex(n_params),
                },
            )
            val, ok = -float(res.fun), bool(res.success)
            frame = frame0 @ _unitary_from_params(res.x, da)
        restart_values.append(val)
        # strict comparison keeps the earliest restart on ties
        if val > best_val:
            best_val, best_frame, best_ok = val, frame, ok

    raw = pre - best_val
    if raw < -NEGATIVE_DISCORD_TOL:
        raise DiscordInvariantError(f"negative discord {raw:.3e} for {params.label()}")
    q, _ = np.linalg.qr(best_frame)
    return DiscordResult(
        value=max(raw, 0.0),
        raw_value=raw,
        best_measurement=ProjectiveMeasurement(da, q),
        pre_value=pre,
        post_value=best_val,
        restarts_used=len(frames),
        converged=best_ok,
        restart_values=restart_values,
    )


def _initial_simplex(n, size=0.5):
    return np.vstack([np.zeros(n), size * np.eye(n)])


_PAULIS = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]]),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def geometric_discord_2q_oracle(rho):
    """Closed-form two-qubit geometric discord.

    ``(|x|^2 + ||T||_F^2 - lambda_max(x x^T + T T^T)) / 4`` with
    ``x_i = <sigma_i (x) 1>`` and ``T_ij = <sigma_i (x) sigma_j>``.
    """
    if rho.dims != (2, 2):
        raise ValueError(f"two-qubit state required, got dims {rho.dims}")
    m = rho.matrix
    x = np.array([np.trace(m @ np.kron(s, np.eye(2))).real for s in _PAULIS])
    t = np.array([[np.trace(m @ np.kron(a, b)).real for b in _PAULIS] for a in _PAULIS])
    k = np.outer(x, x) + t @ t.T
    return float((x @ x + np.sum(t * t) - np.linalg.eigvalsh(k).max()) / 4)


def discord_sweep_virzi(q_grid, r_grid, params_list, opt=None, n_jobs=None):
    """Discord surface over the two-qubit ``rho(q, r)`` family.

    Rows are ``(q, r, h, p, discord)`` in q-major grid order, then params order.
    """
    from joblib import Parallel, delayed

    from .states import virzi_family

    q_grid = [float(q) for q in q_grid]
    r_grid = [float(r) for r in r_grid]
    params_list = [p if isinstance(p, CmnParams) else CmnParams(*p) for p in params_list]

    def cell(q, r):
        rho = virzi_family(q, r)
        return [(q, r, pr.h, pr.p, cmn_discord(rho, pr, opt).value) for pr in params_list]

    cells = [(q, r) for q in q_grid for r in r_grid]
    if n_jobs in (None, 1):
        chunks = [cell(q, r) for q, r in cells]
    else:
        chunks = Parallel(n_jobs=n_jobs)(delayed(cell)(q, r) for q, r in cells)
    return [row for chunk in chunks for row in chunk]
