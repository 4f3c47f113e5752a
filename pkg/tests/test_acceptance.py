"""Acceptance checks; each test prints one PASS/FAIL line for its criterion."""

import itertools
import math
import time

import numpy as np
import pytest
from scipy.optimize import bisect
from scipy.stats import unitary_group

from corrminor.cmn_detect import (
    INFINITY,
    CmnParams,
    bound_p1,
    bound_pinf,
    ccnr,
    cm_criterion,
    cmn,
    cmn_bound,
    cmn_from_singulars,
    cmn_via_compound,
    dv_criterion,
    singulars,
)
from corrminor.correlation import correlation_matrix, realignment_singulars
from corrminor.designs import orthonormal_basis_design, sic_povm, simplex_design
from corrminor.discord import (
    OptimizerConfig,
    ProjectiveMeasurement,
    cmn_discord,
    discord_sweep_virzi,
    geometric_discord_2q_oracle,
    measurement_projector,
)
from corrminor.hermitian_basis import generalized_gell_mann, random_orthogonal, rotate_basis
from corrminor.reproduce import (
    full_design_case,
    full_design_pairs,
    rank_h_design_case,
    rank_h_design_pairs,
    reproduce_gap,
    sweep_pure,
)
from corrminor.states import (
    DensityMatrix,
    is_fnf,
    ppt_min_eigenvalue,
    pure_from_schmidt,
    random_pure,
    random_separable,
    random_state,
    werner,
)

P_VALUES = (1, 2, INFINITY)


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else ""))
        assert ok, detail

    return emit


def test_criterion_01_gap_state(report):
    start = time.perf_counter()
    rep = reproduce_gap()
    elapsed = time.perf_counter() - start
    ok = rep["passed"] and elapsed < 1.0
    detail = f"M11={rep['M11']:.6f}, M21={rep['M21']:.6f}, bound={rep['bound']:.6f}, {elapsed:.3f}s"
    report(1, "CCNR-gap reproduction", ok, detail)


def test_criterion_02_full_design_saturation(report):
    labels = ["(2,2) sic2 x sic2", "(3,2) simplex3 x sic2", "(3,3) sic3 x sic3"]
    pairs = full_design_pairs()
    worst, slowest = 0.0, 0.0
    for label in labels:
        start = time.perf_counter()
        case = full_design_case(label, *pairs[label])
        slowest = max(slowest, time.perf_counter() - start)
        worst = max(worst, case.residual)
    ok = worst < 1e-8 and slowest < 1.0
    report(2, "full-design spectrum and p=1 bound saturation", ok, f"max residual {worst:.2e}, slowest {slowest:.3f}s")


def test_criterion_03_rank_h_design_saturation(report):
    labels = ["(2,2) onb2 x onb2, h=2", "(3,3) onb3 x onb3, h=3", "(3,2) onb3 x trine, h=3", "(2,3) trine x onb3, h=3"]
    pairs = rank_h_design_pairs()
    cases = [rank_h_design_case(label, *pairs[label]) for label in labels]
    worst = max(c.residual for c in cases)
    report(3, "rank-h design spectrum and p=inf bound saturation", worst < 1e-8, f"max residual {worst:.2e}")


def test_criterion_04_pure_state_identities(report):
    rng = np.random.default_rng(4)
    dims = [(2, 2), (2, 3), (3, 2), (3, 3)]
    dev_m12 = max(
        abs(cmn(random_pure(*dims[i % 4], rng), CmnParams(1, 2)) - 1.0) for i in range(200)
    )
    dev_m4 = 0.0
    for _ in range(100):
        s1 = math.sqrt(rng.uniform(0.5, 1.0))
        rho = pure_from_schmidt([s1, math.sqrt(1 - s1 * s1)], 2, 2)
        expected = (s1 * s1 * (1 - s1 * s1)) ** 2
        for p in P_VALUES:
            dev_m4 = max(dev_m4, abs(cmn_via_compound(rho, CmnParams(4, p)) - expected))
    dev_os = 0.0
    for _ in range(100):
        s = np.sort(np.abs(rng.standard_normal(3)))[::-1]
        s /= np.linalg.norm(s)
        expected = np.sort(np.outer(s, s).ravel())[::-1]
        dev_os = max(dev_os, np.abs(singulars(pure_from_schmidt(s, 3, 3)) - expected).max())
    ok = max(dev_m12, dev_m4, dev_os) < 1e-9
    report(4, "pure-state identities", ok, f"M12 {dev_m12:.1e}, det-path M4 {dev_m4:.1e}, Schmidt products {dev_os:.1e}")


def test_criterion_05_oracle_equivalence(report):
    start = time.perf_counter()
    rng = np.random.default_rng(5)
    dims = [(2, 2), (2, 3), (3, 2), (3, 3)]
    dev_svd = 0.0
    for i in range(500):
        rho = random_state(*dims[i % 4], rng)
        dev_svd = max(dev_svd, np.abs(correlation_matrix(rho).singular_values() - realignment_singulars(rho)).max())
    dev_compound = 0.0
    for da, db in dims:
        for _ in range(3):
            rho = random_state(da, db, rng)
            sigma = singulars(rho)
            for h in range(1, min(da, db) ** 2 + 1):
                for p in P_VALUES:
                    params = CmnParams(h, p)
                    a = cmn_from_singulars(sigma, params)
                    b = cmn_via_compound(rho, params)
                    dev_compound = max(dev_compound, abs(a - b) / max(1.0, abs(b)))
    elapsed = time.perf_counter() - start
    ok = dev_svd < 1e-9 and dev_compound < 1e-8 and elapsed < 30
    report(5, "oracle equivalence", ok, f"SVD vs realignment {dev_svd:.1e}, formula vs compound {dev_compound:.1e}, {elapsed:.1f}s")


def test_criterion_06_basis_invariance(report):
    rng = np.random.default_rng(6)
    dims = [(2, 2), (2, 3), (3, 2), (3, 3)]
    worst = 0.0
    for trial in range(100):
        da, db = dims[trial % 4]
        rho = random_state(da, db, rng)
        ba = rotate_basis(generalized_gell_mann(da), random_orthogonal(da * da, rng))
        bb = rotate_basis(generalized_gell_mann(db), random_orthogonal(db * db, rng))
        ref, rot = singulars(rho), singulars(rho, ba, bb)
        for h in range(1, min(da, db) ** 2 + 1):
            for p in P_VALUES:
                params = CmnParams(h, p)
                worst = max(worst, abs(cmn_from_singulars(ref, params) - cmn_from_singulars(rot, params)))
    report(6, "basis invariance", worst < 1e-9, f"max deviation {worst:.1e} over 100 trials")


def _design_pairs(da, db):
    designs = {
        (2, 2): [(sic_povm(2), sic_povm(2)), (orthonormal_basis_design(2),) * 2, (simplex_design(2),) * 2],
        (3, 2): [(simplex_design(3), sic_povm(2)), (orthonormal_basis_design(3), simplex_design(2))],
        (3, 3): [(sic_povm(3), sic_povm(3)), (orthonormal_basis_design(3),) * 2, (simplex_design(3),) * 2],
    }
    return designs[(da, db)]


def random_fnf_separable(da, db, rng):
    """Mixture of locally rotated, randomly paired design states, plus some noise.

    Every term is a uniform mixture of product projectors whose marginals are
    maximally mixed, so the result is separable and FNF.
    """
    pairs = _design_pairs(da, db)
    k = int(rng.integers(1, 4))
    weights = rng.dirichlet(np.ones(k + 1))
    if rng.random() < 0.5:
        weights[-1] = 0.0
        weights /= weights.sum()
    rho = weights[-1] * np.eye(da * db) / (da * db)
    for w in weights[:-1]:
        pa, pb = pairs[rng.integers(len(pairs))]
        u = unitary_group.rvs(da, random_state=rng)
        v = unitary_group.rvs(db, random_state=rng)
        perm = rng.permutation(pa.size)
        qa = u @ pa.projectors @ u.conj().T
        qb = (v @ pb.projectors @ v.conj().T)[perm]
        term = np.einsum("kab,kcd->acbd", qa, qb).reshape(da * db, da * db) / pa.size
        rho = rho + w * term
    return DensityMatrix(da, db, rho)


def test_criterion_07_separable_bounds(report):
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    tol = 1e-9
    ccnr_viol = fnf_viol = conjectured_viol = fnf_count = 0
    worst_fnf = 0.0
    for da, db in [(2, 2), (3, 2), (3, 3)]:
        d = min(da, db)
        cmn_params = [CmnParams(h, p) for h in range(2, d * d + 1) for p in (1, INFINITY)]
        bounds = [(pr, cmn_bound(da, db, pr)[0]) for pr in cmn_params]
        bounds = [(pr, b) for pr, b in bounds if b is not None]
        generic = [random_separable(da, db, int(rng.integers(1, 10)), seed=int(rng.integers(2**31))) for _ in range(1000)]
        fnf_states = [random_fnf_separable(da, db, rng) for _ in range(1000)]
        for rho in generic + fnf_states:
            sigma = singulars(rho)
            ccnr_viol += ccnr(rho, tol).violated
            fnf = is_fnf(rho)
            over = [cmn_from_singulars(sigma, pr) - b for pr, b in bounds]
            if fnf:
                fnf_count += 1
                cm, dv = cm_criterion(rho, tol), dv_criterion(rho, tol)
                worst_fnf = max([worst_fnf, cm.value - cm.bound, dv.value - dv.bound] + over)
                fnf_viol += cm.violated or dv.violated or any(o > tol for o in over)
            else:
                conjectured_viol += any(o > tol for o in over)
    elapsed = time.perf_counter() - start
    ok = ccnr_viol == 0 and fnf_viol == 0 and fnf_count >= 3000 and elapsed < 120
    detail = (
        f"CCNR violations {ccnr_viol}, FNF violations {fnf_viol} of {fnf_count} (max excess {worst_fnf:.1e}), "
        f"non-FNF conjectured-bound findings {conjectured_viol}, {elapsed:.1f}s"
    )
    report(7, "separable states respect the bounds", ok, detail)


def test_criterion_08_werner_thresholds(report):
    def crossing(f):
        return bisect(f, 1e-3, 1 - 1e-3, xtol=1e-9)

    c_ccnr = crossing(lambda c: ccnr(werner(2, c)).value - 1.0)
    c_dv = crossing(lambda c: (lambda r: r.value - r.bound)(dv_criterion(werner(2, c))))
    c_ppt2 = crossing(lambda c: ppt_min_eigenvalue(werner(2, c)))
    c_ppt3 = crossing(lambda c: ppt_min_eigenvalue(werner(3, c)))
    devs = [abs(c_ccnr - 1 / 3), abs(c_dv - 1 / 3), abs(c_ppt2 - 1 / 3), abs(c_ppt3 - 1 / 4)]
    detail = f"CCNR {c_ccnr:.7f}, dV {c_dv:.7f}, PPT(2) {c_ppt2:.7f}, PPT(3) {c_ppt3:.7f}"
    report(8, "Werner thresholds", max(devs) < 1e-6, detail)


def _local_state(d, rng):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    return m / np.trace(m).real


def _zero_discord_states(da, db, rng):
    u = unitary_group.rvs(da, random_state=rng)
    p = rng.dirichlet(np.ones(da))
    cq = sum(w * np.kron(np.outer(u[:, l], u[:, l].conj()), _local_state(db, rng)) for l, w in enumerate(p))
    return [
        DensityMatrix(da, db, np.kron(_local_state(da, rng), _local_state(db, rng))),
        DensityMatrix(da, db, np.diag(rng.dirichlet(np.ones(da * db)))),
        DensityMatrix(da, db, cq),
    ]


def test_criterion_09_discord(report):
    start = time.perf_counter()
    rng = np.random.default_rng(9)
    opt = OptimizerConfig(restarts=32, seed=9)
    raw_min = np.inf

    zero_max = 0.0
    for dims, params in [((2, 2), CmnParams(1, 2)), ((2, 2), CmnParams(2, 2)), ((3, 2), CmnParams(1, 2)), ((3, 2), CmnParams(2, 1))]:
        for rho in _zero_discord_states(*dims, rng):
            res = cmn_discord(rho, params, opt)
            raw_min = min(raw_min, res.raw_value)
            zero_max = max(zero_max, res.value)

    # measure the constant relating D_{1,2} to the closed form, then pin it
    ratios, pairs = [], []
    for _ in range(8):
        rho = random_state(2, 2, rng)
        res = cmn_discord(rho, CmnParams(1, 2), opt)
        raw_min = min(raw_min, res.raw_value)
        oracle = geometric_discord_2q_oracle(rho)
        pairs.append((res.value, oracle))
        ratios.append(res.value / oracle)
    constant = float(np.median(ratios))
    oracle_dev = max(abs(v - constant * o) for v, o in pairs)

    werner_dev = 0.0
    for c in (0.1, 0.3, 0.5, 0.8, 1.0):
        res = cmn_discord(werner(2, c), CmnParams(1, 2), opt)
        raw_min = min(raw_min, res.raw_value)
        werner_dev = max(werner_dev, abs(res.value - constant * c * c / 2))

    mono_worst = -np.inf
    dims_cycle = [(2, 2), (3, 2), (2, 3), (3, 3)]
    for i in range(500):
        da, db = dims_cycle[i % 4]
        rho = random_state(da, db, rng)
        c = correlation_matrix(rho).entries
        a = measurement_projector(ProjectiveMeasurement(da, unitary_group.rvs(da, random_state=rng)))
        before = np.linalg.svd(c, compute_uv=False)
        after = np.linalg.svd(a @ c, compute_uv=False)
        mono_worst = max(mono_worst, float((after - before).max()))

    elapsed = time.perf_counter() - start
    ok = (
        raw_min >= -1e-8
        and zero_max <= 1e-6
        and abs(constant - 1.0) < 1e-4
        and oracle_dev < 1e-5
        and werner_dev < 1e-5
        and mono_worst <= 1e-10
        and elapsed < 120
    )
    detail = (
        f"min raw {raw_min:.1e}, zero-discord max {zero_max:.1e}, measured constant {constant:.6f}, "
        f"oracle dev {oracle_dev:.1e}, Werner dev {werner_dev:.1e}, monotonicity {mono_worst:.1e}, {elapsed:.1f}s"
    )
    report(9, "discord suite", ok, detail)


def _pure_sweep():
    rows = np.array(sweep_pure(25))
    theta, phi = rows[:, 0], rows[:, 1]
    s = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=1)
    s[np.abs(s) < 1e-15] = 0.0
    return rows, np.abs(s)


def test_criterion_10a_pure_sweep_zero_sets_strict(report):
    rows, s = _pure_sweep()
    m4, m9, entropy = rows[:, 3:6], rows[:, 6:9], rows[:, 2]
    rank = (s > 0).sum(axis=1)
    m9_zero = np.all(m9 <= 1e-9, axis=1)
    m4_zero = np.all(m4 <= 1e-9, axis=1)
    s_zero = entropy <= 1e-9
    m9_iff = np.array_equal(m9_zero, s.min(axis=1) == 0)
    m4_iff = np.array_equal(m4_zero, rank == 1)
    same = np.array_equal(s_zero, m4_zero)
    detail = (
        f"M9 iff min(s)=0: {m9_iff} ({int((m9_zero != (s.min(axis=1) == 0)).sum())} cells disagree), "
        f"M4 iff rank 1: {m4_iff}, S and M4 zero sets equal: {same}"
    )
    report("10a", "pure-sweep zero sets at the literal 1e-9 threshold", m9_iff and m4_iff and same, detail)


def test_criterion_10b_pure_sweep_zero_sets_exact(report):
    rows, s = _pure_sweep()
    m4, m9, entropy = rows[:, 3:6], rows[:, 6:9], rows[:, 2]
    rank = (s > 0).sum(axis=1)
    # M_9 equals (s1 s2 s3)^6 for every p
    analytic = np.prod(s, axis=1) ** 6
    on_zero = s.min(axis=1) == 0
    m9_ok = np.all(m9[on_zero] <= 1e-9) and np.all(m9[~on_zero] > 0)
    m9_ok &= np.allclose(m9, analytic[:, None], rtol=1e-8, atol=1e-300)
    m4_ok = np.all(m4[rank == 1] <= 1e-9) and np.all(m4[rank > 1] > 1e-9)
    same = np.array_equal(entropy <= 1e-9, np.all(m4 <= 1e-9, axis=1))
    detail = f"M9 zero exactly on min(s)=0 and equal to (s1 s2 s3)^6 elsewhere: {m9_ok}, M4: {m4_ok}, S/M4: {same}"
    report("10b", "pure-sweep zero sets against the analytic structure", bool(m9_ok and m4_ok and same), detail)


def test_criterion_10c_virzi_symmetry(report):
    grid = np.linspace(0.0, 1.0, 21)
    rows = discord_sweep_virzi(grid, grid, [(1, 2)], OptimizerConfig(restarts=8, seed=10))
    surface = np.array([r[4] for r in rows]).reshape(21, 21)
    asym = float(np.abs(surface - surface[::-1, :]).max())
    report("10c", "discord surface symmetric under q <-> 1-q", asym < 1e-6, f"max asymmetry {asym:.1e} on 21x21")
