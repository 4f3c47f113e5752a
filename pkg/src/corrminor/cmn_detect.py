"""Correlation Minor Norms, separable bounds and entanglement criteria.

The CMN with parameters ``(h, p)`` is the Schatten p-norm of the h-th compound
matrix of the correlation matrix. Because the singular values of a compound
matrix are the h-fold products of singular values, it reduces to
``S_h(sigma_1^p, ..., sigma_n^p)^(1/p)`` where ``S_h`` is the elementary
symmetric polynomial; for ``p = INFINITY`` it is the product of the h largest
singular values.
"""

import enum
import itertools
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .correlation import correlation_matrix, fnf_blocks
from .states import DensityMatrix, haar_vector, is_fnf, ppt_min_eigenvalue, product_mixture
from ._validation import PURITY_TOL, check_dimension

VIOLATION_TOL = 1e-9


class _Infinity(enum.Enum):
    INFINITY = "inf"

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"


INFINITY = _Infinity.INFINITY


def parse_p(p):
    """Normalize ``p``: ``'inf'``, ``math.inf`` and INFINITY map to INFINITY."""
    if p is INFINITY:
        return INFINITY
    if isinstance(p, str):
        if p.strip().lower() in ("inf", "infinity", "oo"):
            return INFINITY
        p = float(p)
    p = float(p)
    if math.isinf(p) and p > 0:
        return INFINITY
    if not p >= 1.0:
        raise ValueError(f"p must be >= 1 or INFINITY, got {p}")
    return p


def format_p(p):
    p = parse_p(p)
    if p is INFINITY:
        return "inf"
    return str(int(p)) if float(p).is_integer() else repr(p)


@dataclass(frozen=True)
class CmnParams:
    h: int
    p: object = 1.0

    def __post_init__(self):
        check_dimension(self.h, "h")
        object.__setattr__(self, "h", int(self.h))
        object.__setattr__(self, "p", parse_p(self.p))

    def validate(self, n):
        """Check ``h <= n`` where ``n`` is the number of singular values (d**2)."""
        if self.h > n:
            raise ValueError(f"h={self.h} exceeds the number of singular values d^2={n}")
        return self

    def label(self):
        return f"CMN({self.h},{format_p(self.p)})"


def elementary_symmetric(h, values):
    """``S_h(x_1, ..., x_n)``: sum over all products of ``h`` distinct entries.

    Uses the recurrence ``e_k <- e_k + x e_{k-1}`` over the values taken in
    descending magnitude, which involves no cancellation for non-negative input.
    """
    x = np.asarray(values, dtype=float).ravel()
    if isinstance(h, bool) or int(h) != h or h < 0:
        raise ValueError(f"h must be a non-negative integer, got {h!r}")
    h = int(h)
    if h > x.size:
        raise ValueError(f"h={h} exceeds the number of values ({x.size})")
    e = np.zeros(h + 1)
    e[0] = 1.0
    for xi in x[np.argsort(-np.abs(x), kind="stable")]:
        e[1:] = e[1:] + xi * e[:-1]
    return float(e[h])


def elementary_symmetric_bruteforce(h, values):
    """Subset enumeration; test oracle for small inputs."""
    x = list(np.asarray(values, dtype=float).ravel())
    return float(sum(math.prod(c) for c in itertools.combinations(x, h)))


def cmn_from_singulars(sigma, params):
    """CMN evaluated on a vector of singular values."""
    s = np.asarray(sigma, dtype=float).ravel()
    if np.any(s < -1e-15):
        raise ValueError("singular values must be non-negative")
    s = np.clip(s, 0.0, None)
    params.validate(s.size)
    if params.p is INFINITY:
        return float(np.prod(np.sort(s)[::-1][: params.h]))
    p = params.p
    total = elementary_symmetric(params.h, s**p)
    return float(total ** (1.0 / p))


def compound_matrix(m, h):
    """h-th compound matrix: all h x h minors, combinations in lexicographic order."""
    m = np.asarray(m, dtype=float)
    rows, cols = m.shape
    if isinstance(h, bool) or int(h) != h or h < 1:
        raise ValueError(f"h must be a positive integer, got {h!r}")
    if h > min(rows, cols):
        raise ValueError(f"h={h} exceeds min(rows, cols)={min(rows, cols)}")
    rset = list(itertools.combinations(range(rows), h))
    cset = list(itertools.combinations(range(cols), h))
    ri = np.array(rset)
    ci = np.array(cset)
    sub = m[ri[:, None, :, None], ci[None, :, None, :]]
    return np.linalg.det(sub)


def schatten_norm(m, p):
    sv = np.linalg.svd(np.asarray(m, dtype=float), compute_uv=False)
    p = parse_p(p)
    if p is INFINITY:
        return float(sv.max(initial=0.0))
    return float(np.sum(sv**p) ** (1.0 / p))


def singulars(rho, basis_a=None, basis_b=None):
    return correlation_matrix(rho, basis_a, basis_b).singular_values()


def cmn(rho, params, basis_a=None, basis_b=None):
    """CMN of a state, from the singular values of its correlation matrix."""
    return cmn_from_singulars(singulars(rho, basis_a, basis_b), params)


def cmn_via_compound(rho, params, basis_a=None, basis_b=None):
    """Same quantity, as the Schatten norm of the explicit compound matrix."""
    c = correlation_matrix(rho, basis_a, basis_b).entries
    params.validate(min(c.shape))
    return schatten_norm(compound_matrix(c, params.h), params.p)


def _dims(dim_a, dim_b):
    dim_a, dim_b = check_dimension(dim_a, "dim_a"), check_dimension(dim_b, "dim_b")
    return max(dim_a, dim_b), min(dim_a, dim_b)


def design_constants(dim_a, dim_b):
    """``(alpha, beta)`` of the p = 1 bound."""
    D, d = _dims(dim_a, dim_b)
    alpha = 1 / math.sqrt(D * d)
    beta = math.sqrt((D - 1) * (d - 1) / (D * d * (d * d - 1) ** 2)) if d > 1 else 0.0
    return alpha, beta


def bound_p1(dim_a, dim_b, h):
    """Separable upper bound ``S_h(alpha, beta, ..., beta)`` on ``M_{h,1}``.

    Valid for FNF states with ``h > 1`` and ``D <= d**3``.
    """
    D, d = _dims(dim_a, dim_b)
    if h <= 1:
        raise ValueError(f"hypothesis h > 1 failed (h={h})")
    if D > d**3:
        raise ValueError(f"hypothesis D <= d^3 failed (D={D}, d={d})")
    if h > d * d:
        raise ValueError(f"h={h} exceeds d^2={d * d}")
    alpha, beta = design_constants(dim_a, dim_b)
    return elementary_symmetric(h, [alpha] + [beta] * (d * d - 1))


def rank_h_beta(dim_a, dim_b, h):
    D, d = _dims(dim_a, dim_b)
    return math.sqrt((D - 1) * (d - 1) / (D * d * (h - 1) ** 2))


def bound_pinf(dim_a, dim_b, h):
    """Separable upper bound on ``M_{h,inf}`` for FNF states with ``h >= sqrt(D d)``."""
    D, d = _dims(dim_a, dim_b)
    if h < 2:
        raise ValueError(f"hypothesis h >= 2 failed (h={h})")
    if h * h < D * d:
        raise ValueError(f"hypothesis h >= sqrt(D d) failed (h={h}, sqrt(D d)={math.sqrt(D * d):.4g})")
    if h > d * d:
        raise ValueError(f"h={h} exceeds d^2={d * d}")
    ratio = (D - 1) * (d - 1) / (D * d * (h - 1) ** 2)
    return (1 / math.sqrt(D * d)) * ratio ** ((h - 1) / 2)


@dataclass(frozen=True)
class CriterionResult:
    name: str
    value: float
    bound: float
    violated: bool
    applicable: bool = True
    theorem_backed: bool = True

    def to_dict(self):
        return asdict(self)


def ccnr(rho, tol=VIOLATION_TOL):
    """``M_{1,1} <= 1`` for every separable state."""
    value = cmn(rho, CmnParams(1, 1))
    return CriterionResult("CCNR", value, 1.0, value > 1.0 + tol)


def cm_bound(dim_a, dim_b):
    D, d = _dims(dim_a, dim_b)
    return (1 + math.sqrt((D - 1) * (d - 1))) / math.sqrt(D * d)


def cm_criterion(rho, tol=VIOLATION_TOL, fnf_tol=1e-9):
    """CM criterion in CMN form; applies only to FNF states."""
    bound = cm_bound(rho.dim_a, rho.dim_b)
    value = cmn(rho, CmnParams(1, 1))
    if not is_fnf(rho, fnf_tol):
        return CriterionResult("CM", value, bound, False, applicable=False)
    return CriterionResult("CM", value, bound, value > bound + tol)


def dv_bound(dim_a, dim_b):
    D, d = _dims(dim_a, dim_b)
    return math.sqrt((D - 1) * (d - 1) / (D * d))


def dv_criterion(rho, tol=VIOLATION_TOL, fnf_tol=1e-9):
    """Trace norm of the traceless correlation block vs ``sqrt((D-1)(d-1)/(D d))``."""
    bound = dv_bound(rho.dim_a, rho.dim_b)
    blocks = fnf_blocks(correlation_matrix(rho))
    value = float(np.linalg.svd(blocks.t, compute_uv=False).sum()) if blocks.t.size else 0.0
    if not is_fnf(rho, fnf_tol):
        return CriterionResult("dV", value, bound, False, applicable=False)
    return CriterionResult("dV", value, bound, value > bound + tol)


def cmn_bound(dim_a, dim_b, params):
    """Separable bound for ``params`` and the name of its source, or ``(None, reason)``.

    h = 1 uses the CCNR bound 1 (any p, since p-norms shrink with p). For h > 1,
    p = INFINITY uses the p = inf bound; finite p uses the p = 1 bound, which
    also caps every finite p because ``||x||_p <= ||x||_1``.
    """
    h, p = params.h, params.p
    D, d = _dims(dim_a, dim_b)
    if h > d * d:
        return None, f"h={h} exceeds d^2={d * d}"
    if h == 1:
        return 1.0, "CCNR"
    try:
        if p is INFINITY:
            return bound_pinf(dim_a, dim_b, h), "p=inf bound"
        return bound_p1(dim_a, dim_b, h), "p=1 bound"
    except ValueError as exc:
        return None, str(exc)


@dataclass
class Verdict:
    """Aggregated detection outcome.

    ``entangled`` is true iff some applicable criterion is violated. The PPT
    entry is informational and never contributes.
    """

    entangled: bool
    triggered_by: list
    criteria: list
    fnf: bool
    singular_values: list = field(default_factory=list)
    ppt: dict = field(default_factory=dict)

    @property
    def values(self):
        return {c.name: (c.value, c.bound) for c in self.criteria if c.applicable}

    def to_dict(self):
        return {
            "entangled": self.entangled,
            "triggered_by": list(self.triggered_by),
            "fnf": self.fnf,
            "singular_values": [float(x) for x in self.singular_values],
            "ppt": self.ppt,
            "criteria": [c.to_dict() for c in self.criteria],
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)


def detect(rho, h_list=None, p_list=None, tol=VIOLATION_TOL):
    """Run CCNR, CM, dV and every requested ``(h, p)`` CMN test on ``rho``.

    Defaults: ``h = 1, ..., d**2`` and ``p in {1, INFINITY}``. Pairs without a
    valid bound are reported as not applicable. CMN bounds are theorems only for
    FNF states; on other states a violation is still reported (and triggers)
    but carries ``theorem_backed=False``.
    """
    d = rho.d
    sigma = singulars(rho)
    fnf = is_fnf(rho)
    if h_list is None:
        h_list = range(1, d * d + 1)
    if p_list is None:
        p_list = [1, INFINITY]
    criteria = [ccnr(rho, tol), cm_criterion(rho, tol), dv_criterion(rho, tol)]
    seen = {"CCNR"}
    for h in h_list:
        for p in p_list:
            params = CmnParams(h, p)
            name = params.label()
            if name in seen or (h == 1 and params.p == 1.0):
                continue
            seen.add(name)
            bound, source = cmn_bound(rho.dim_a, rho.dim_b, params)
            if bound is None or h > sigma.size:
                criteria.append(
                    CriterionResult(name, float("nan"), float("nan"), False, applicable=False, theorem_backed=False)
                )
                continue
            value = cmn_from_singulars(sigma, params)
            backed = h == 1 or fnf
            criteria.append(CriterionResult(name, value, bound, value > bound + tol, True, backed))
    triggered = [c.name for c in criteria if c.applicable and c.violated]
    lam = ppt_min_eigenvalue(rho)
    return Verdict(
        entangled=bool(triggered),
        triggered_by=triggered,
        criteria=criteria,
        fnf=fnf,
        singular_values=list(sigma),
        ppt={"min_eigenvalue": lam, "entangled": lam < -1e-9},
    )


def schmidt_rank_pure(rho, tol=1e-8, p=1):
    """Largest ``t`` with ``M_{t^2, p} > tol``; rejects mixed input."""
    if rho.purity() < 1 - PURITY_TOL:
        raise ValueError("schmidt_rank_pure requires a pure state")
    sigma = singulars(rho)
    rank = 1
    for t in range(1, rho.d + 1):
        if cmn_from_singulars(sigma, CmnParams(t * t, p)) > tol:
            rank = t
    return rank


@dataclass
class SeparableCandidate:
    weights: np.ndarray
    vecs_a: np.ndarray
    vecs_b: np.ndarray

    def state(self):
        da, db = self.vecs_a.shape[1], self.vecs_b.shape[1]
        return DensityMatrix(da, db, product_mixture(self.weights, self.vecs_a, self.vecs_b))

    def to_dict(self):
        def cplx(a):
            return [[[float(z.real), float(z.imag)] for z in row] for row in a]

        return {"weights": [float(w) for w in self.weights], "vecs_a": cplx(self.vecs_a), "vecs_b": cplx(self.vecs_b)}


def _random_candidate(da, db, n_terms, rng):
    return SeparableCandidate(
        rng.dirichlet(np.ones(n_terms)),
        np.array([haar_vector(da, rng) for _ in range(n_terms)]),
        np.array([haar_vector(db, rng) for _ in range(n_terms)]),
    )


def _perturb(cand, step, rng):
    w = cand.weights * np.exp(step * rng.standard_normal(cand.weights.size))
    w /= w.sum()

    def jitter(v):
        z = v + step * (rng.standard_normal(v.shape) + 1j * rng.standard_normal(v.shape))
        return z / np.linalg.norm(z, axis=1, keepdims=True)

    return SeparableCandidate(w, jitter(cand.vecs_a), jitter(cand.vecs_b))


def _candidate_value(cand, params):
    rho = product_mixture(cand.weights, cand.vecs_a, cand.vecs_b)
    da, db = cand.vecs_a.shape[1], cand.vecs_b.shape[1]
    return cmn(DensityMatrix(da, db, rho), params)


def separable_max_search(dim_a, dim_b, params, budget=10_000, seed=0, n_terms=None, restart_every=2_000):
    """Stochastic hill climb for the largest CMN over separable states.

    Candidates are mixtures of pure product states; each step perturbs the
    weights (log-normal) and local vectors (complex Gaussian) and keeps
    improvements. The step size halves after 50 consecutive rejections and the
    chain restarts from a fresh random sample every ``restart_every`` steps.
    ``budget`` counts perturbation steps, so ``budget=0`` scores the initial
    sample only.

    Returns
    -------
    (float, SeparableCandidate)
    """
    dim_a, dim_b = check_dimension(dim_a, "dim_a"), check_dimension(dim_b, "dim_b")
    d = min(dim_a, dim_b)
    params.validate(d * d)
    n_terms = n_terms or max(dim_a, dim_b) ** 2
    rng = np.random.default_rng(seed)
    current = _random_candidate(dim_a, dim_b, n_terms, rng)
    cur_val = _candidate_value(current, params)
    best, best_val = current, cur_val
    step, rejects = 0.3, 0
    for i in range(1, budget + 1):
        if restart_every and i % restart_every == 0:
            current = _random_candidate(dim_a, dim_b, n_terms, rng)
            cur_val = _candidate_value(current, params)
            step, rejects = 0.3, 0
            if cur_val > best_val:
                best, best_val = current, cur_val
            continue
        trial = _perturb(current, step, rng)
        val = _candidate_value(trial, params)
        if val > cur_val:
            current, cur_val, rejects = trial, val, 0
            if val > best_val:
                best, best_val = trial, val
        else:
            rejects += 1
            if rejects >= 50:
                step = max(step / 2, 1e-4)
                rejects = 0
    return best_val, best
