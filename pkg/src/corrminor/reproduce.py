"""Reference-value reproductions and data tables used by the CLI."""

import math
from dataclasses import dataclass

import numpy as np

from .cmn_detect import INFINITY, CmnParams, bound_p1, bound_pinf, cmn, cmn_from_singulars, detect, singulars, design_constants, rank_h_beta
from .designs import orthonormal_basis_design, sic_povm, simplex_design, tetrahedral_sic
from .states import ccnr_gap_state, design_state, entanglement_entropy, is_fnf, ppt_entangled, pure_from_schmidt

GAP_Q = 0.295
GAP_M11 = 0.9981
GAP_M21 = 0.3509
GAP_TOL = 5e-4
SATURATION_TOL = 1e-8


def gap_bound():
    return (2 + 3 * math.sqrt(2)) / 18


def reproduce_gap(q=GAP_Q, tol=GAP_TOL):
    """Values and PASS/FAIL checks for the 3x2 state missed by CCNR."""
    rho = ccnr_gap_state(q)
    m11 = cmn(rho, CmnParams(1, 1))
    m21 = cmn(rho, CmnParams(2, 1))
    bound = bound_p1(3, 2, 2)
    ppt = ppt_entangled(rho)
    verdict = detect(rho)
    checks = {
        "M11": abs(m11 - GAP_M11) <= tol,
        "M21": abs(m21 - GAP_M21) <= tol,
        "bound": abs(bound - gap_bound()) <= 1e-15,
        "PPT": ppt,
        "CMN(2,1) detects": "CMN(2,1)" in verdict.triggered_by,
        "CCNR silent": "CCNR" not in verdict.triggered_by,
    }
    return {
        "q": q,
        "M11": m11,
        "M21": m21,
        "bound": bound,
        "ppt_entangled": ppt,
        "triggered_by": verdict.triggered_by,
        "checks": checks,
        "passed": all(checks.values()),
    }


@dataclass
class SaturationCase:
    family: str
    label: str
    spectrum_residual: float
    bound_residual: float
    fnf: bool

    @property
    def residual(self):
        return max(self.spectrum_residual, self.bound_residual)


def full_design_pairs():
    """Available d**2-element design pairs, keyed by label."""
    return {
        "(2,2) sic2 x sic2": (sic_povm(2), sic_povm(2)),
        "(2,2) sic2 x tetrahedral": (sic_povm(2), tetrahedral_sic()),
        "(3,2) simplex3 x sic2": (simplex_design(3), sic_povm(2)),
        "(2,3) sic2 x simplex3": (sic_povm(2), simplex_design(3)),
        "(3,3) sic3 x sic3": (sic_povm(3), sic_povm(3)),
    }


def rank_h_design_pairs():
    """h-element design pairs with their h; keyed by label."""
    return {
        "(2,2) onb2 x onb2, h=2": (orthonormal_basis_design(2), orthonormal_basis_design(2), 2),
        "(3,3) onb3 x onb3, h=3": (orthonormal_basis_design(3), orthonormal_basis_design(3), 3),
        "(3,2) onb3 x trine, h=3": (orthonormal_basis_design(3), simplex_design(2), 3),
        "(2,3) trine x onb3, h=3": (simplex_design(2), orthonormal_basis_design(3), 3),
        "(2,2) trine x trine, h=3": (simplex_design(2), simplex_design(2), 3),
        "(3,3) simplex3 x simplex3, h=4": (simplex_design(3), simplex_design(3), 4),
    }


def full_design_case(label, design_a, design_b):
    rho = design_state(design_a, design_b)
    da, db = rho.dims
    d = rho.d
    alpha, beta = design_constants(da, db)
    sigma = singulars(rho)
    expected = np.array([alpha] + [beta] * (d * d - 1))
    spec_res = float(np.abs(np.sort(sigma)[::-1] - np.sort(expected)[::-1]).max())
    bound_res = max(
        abs(cmn_from_singulars(sigma, CmnParams(h, 1)) - bound_p1(da, db, h)) for h in range(2, d * d + 1)
    )
    return SaturationCase("full design", label, spec_res, bound_res, is_fnf(rho))


def rank_h_design_case(label, design_a, design_b, h):
    rho = design_state(design_a, design_b)
    da, db = rho.dims
    d = rho.d
    alpha, _ = design_constants(da, db)
    beta = rank_h_beta(da, db, h)
    sigma = singulars(rho)
    expected = np.array([alpha] + [beta] * (h - 1) + [0.0] * (d * d - h))
    spec_res = float(np.abs(np.sort(sigma)[::-1] - np.sort(expected)[::-1]).max())
    bound_res = abs(cmn_from_singulars(sigma, CmnParams(h, INFINITY)) - bound_pinf(da, db, h))
    return SaturationCase("rank-h design", label, spec_res, bound_res, is_fnf(rho))


def verify_theorems():
    cases = [full_design_case(k, *v) for k, v in full_design_pairs().items()]
    cases += [rank_h_design_case(k, *v) for k, v in rank_h_design_pairs().items()]
    return cases


def angle_grid(resolution):
    return np.linspace(0.0, np.pi / 2, resolution)


def angle_schmidt(theta, phi):
    s = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
    # cos(pi/2) and friends evaluate to ~6e-17, not 0
    s[np.abs(s) < 1e-15] = 0.0
    return s / np.linalg.norm(s)


SWEEP_PURE_COLUMNS = ["theta", "phi", "S", "M4_p1", "M4_p2", "M4_pinf", "M9_p1", "M9_p2", "M9_pinf"]


def sweep_pure(resolution):
    """Rows ``(theta, phi, S, M_4 for p=1,2,inf, M_9 for p=1,2,inf)`` for two qutrits."""
    if resolution < 2:
        raise ValueError("grid resolution must be >= 2")
    rows = []
    ps = (1, 2, INFINITY)
    for theta in angle_grid(resolution):
        for phi in angle_grid(resolution):
            s = angle_schmidt(theta, phi)
            rho = pure_from_schmidt(s, 3, 3)
            sigma = singulars(rho)
            m4 = [cmn_from_singulars(sigma, CmnParams(4, p)) for p in ps]
            m9 = [cmn_from_singulars(sigma, CmnParams(9, p)) for p in ps]
            rows.append((float(theta), float(phi), entanglement_entropy(rho), *m4, *m9))
    return rows


def bounds_table(d_max):
    """Rows ``(d_a, d_b, h, p, bound or None)`` for p in {1, inf}, 2 <= d_a, d_b <= d_max."""
    rows = []
    for da in range(2, d_max + 1):
        for db in range(2, d_max + 1):
            d = min(da, db)
            for h in range(1, d * d + 1):
                for p, fn in (("1", bound_p1), ("inf", bound_pinf)):
                    try:
                        value = fn(da, db, h)
                    except ValueError:
                        value = None
                    rows.append((da, db, h, p, value))
    return rows
