"""Property suite: every desk-checkable claim, one named check each.

Checks are registered in a fixed order and selected by name.  Each check
returns a measured residual against a pinned threshold; results never abort
the suite (infrastructure failures do).  Reports are deterministic up to the
wall-clock fields, which the caller can zero out.

Convergence-style checks (reconstruction, commutator stability, lattice
Hermiticity of x-dependent metrics) need at least two resolutions and report
the observed order from the residual ratio of one doubling.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ._util import (GLOBAL_SEED, as_dense, herm_residual, opnorm, spectral_norm,
                    unit_probes)
from .assembler import (AssembledOperator, TimeGrid, algebra_operator, assemble_lorentzian,
                        assemble_riemannian, assemble_trivial, lapse_homotopy_resolvents,
                        spectrum)
from .clifford import (LORENTZIAN, RIEMANNIAN, build_even_rep, build_odd_rep, check_relations,
                       tilde_rep)
from .expressions import Expression
from .family import (TripleFamily, check_family_axioms, conjugated_family, from_scenario)
from .lattice import (CONSTANT_DIAGONAL, DIAGONAL_FIELD, LapseBoundError, LapseFamily,
                      MetricFamily, hypersurface_dirac, lapse_matrix, mean_curvature,
                      volume_function)
from .oracle import SpacetimeGrid, extrinsic_curvature, flat_spectrum, intrinsic_dirac
from .scenario import Scenario

__all__ = ["CheckResult", "SuiteReport", "run_suite", "lorentz_type_axioms",
           "available_checks", "DEFAULT_EIG_COUNT"]

DEFAULT_EIG_COUNT = 10


@dataclass
class CheckResult:
    check_id: str
    claim: str
    status: str  # "passed" | "failed" | "skipped"
    residual: float | None = None
    threshold: float | None = None
    runtime_ms: float = 0.0
    notes: str = ""
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "passed"

    def to_json(self) -> dict:
        return {
            "check_id": self.check_id,
            "claim": self.claim,
            "status": self.status,
            "passed": self.passed,
            "residual": self.residual,
            "threshold": self.threshold,
            "runtime_ms": self.runtime_ms,
            "notes": self.notes,
            "extras": self.extras,
        }


@dataclass
class SuiteReport:
    scenario_name: str
    resolutions: list
    seed: int
    results: list

    @property
    def passed(self) -> bool:
        return all(r.status != "failed" for r in self.results)

    def to_json(self, include_timing: bool = True, timestamp: str | None = None) -> dict:
        checks = [r.to_json() for r in self.results]
        if not include_timing:
            for c in checks:
                c["runtime_ms"] = 0.0
        out = {
            "scenario": self.scenario_name,
            "resolutions": [list(r) for r in self.resolutions],
            "seed": self.seed,
            "passed": self.passed,
            "checks": checks,
        }
        if timestamp is not None:
            out["timestamp"] = timestamp
        return out


class _Context:
    """Lazy per-resolution cache of grids, families and assembled operators."""

    def __init__(self, scenario: Scenario, resolutions, seed: int = GLOBAL_SEED):
        self.base = scenario
        self.resolutions = [(int(l), int(nt)) for l, nt in resolutions]
        self.seed = seed
        self._cache: dict = {}

    def scenario(self, i: int = 0) -> Scenario:
        pts, nt = self.resolutions[i]
        return self.base.with_resolution(points_per_axis=pts, num_time_nodes=nt)

    def _memo(self, key, builder):
        if key not in self._cache:
            self._cache[key] = builder()
        return self._cache[key]

    def time_grid(self, i: int = 0) -> TimeGrid:
        return self._memo(("tg", i), lambda: TimeGrid.from_scenario(self.scenario(i)))

    def family(self, i: int = 0) -> TripleFamily:
        return self._memo(("fam", i), lambda: from_scenario(self.scenario(i)))

    def probe_lapse(self) -> LapseFamily:
        omega = 2.0 * math.pi / self.base.timescale
        return LapseFamily(kind="time_only",
                           expr=Expression.parse(f"1 + 0.25*cos({omega!r}*t)"),
                           bounds=(0.5, 2.0))

    def probe_family(self, i: int = 0) -> TripleFamily:
        """The scenario family, with a nonconstant lapse substituted when N = 1."""
        def build():
            if self.base.lapse.is_identity:
                scn = self.scenario(i).with_lapse(self.probe_lapse())
                return from_scenario(scn)
            return self.family(i)
        return self._memo(("probe_fam", i), build)

    def riemannian(self, i: int = 0, sign: int = +1) -> AssembledOperator:
        return self._memo(("riem", i, sign),
                          lambda: assemble_riemannian(self.family(i), self.time_grid(i), sign))

    def lorentzian(self, i: int = 0) -> AssembledOperator:
        return self._memo(("lor", i),
                          lambda: assemble_lorentzian(self.family(i), self.time_grid(i)))

    def trivial(self, i: int = 0, sign: int = +1) -> AssembledOperator:
        return self._memo(("triv", i, sign),
                          lambda: assemble_trivial(self.family(i), self.time_grid(i), sign))

    def signature_operator(self, i: int = 0) -> AssembledOperator:
        if self.base.signature.kind == "lorentzian":
            return self.lorentzian(i)
        return self.riemannian(i, +1)

    def oracle(self, i: int = 0):
        return self._memo(("oracle", i),
                          lambda: intrinsic_dirac(SpacetimeGrid.build(self.scenario(i))))

    def interior_time(self) -> float:
        t = self.base.time
        if t.kind == "circle":
            return t.period / 3.0
        t0, t1 = t.t_range
        return t0 + 0.5 * (t1 - t0)

    def sample_points(self, count: int = 5):
        rng = np.random.default_rng(self.seed)
        x = tuple(rng.uniform(0.0, c, size=count) for c in self.base.circumferences)
        return x


# ---------------------------------------------------------------------------
# individual checks; each returns (status, residual, threshold, notes, extras)


def _check_clifford(ctx: _Context):
    worst = 0.0
    for n in (1, 3, 5):
        odd = build_odd_rep(n)
        worst = max(worst, check_relations(odd).max_residual)
        for sig in (RIEMANNIAN, LORENTZIAN):
            even = build_even_rep(odd, sig)
            worst = max(worst, check_relations(even).max_residual)
            spatial = tilde_rep(even)
            worst = max(worst, check_relations(spatial).max_residual)
            for j, g in enumerate(spatial.generators):
                expected = sig.tau0 * even.generators[0] @ even.generators[1 + j]
                worst = max(worst, opnorm(g - expected))
                half = odd.spinor_dim
                worst = max(worst, opnorm(g[:half, :half] - odd.generators[j]))
                worst = max(worst, opnorm(g[:half, half:]))
                worst = max(worst, opnorm(g[half:, :half]))
    return ("passed" if worst <= 1e-12 else "failed", worst, 1e-12, "", {})


def _check_grading(ctx: _Context):
    ops = [ctx.trivial(0, +1), ctx.riemannian(0, +1), ctx.riemannian(0, -1), ctx.lorentzian(0)]
    worst = 0.0
    for op in ops:
        gamma, j = op.grading, op.fundamental_symmetry
        eye = sp.identity(op.dim, format="csr")
        worst = max(worst,
                    opnorm(gamma @ op.matrix @ gamma + op.matrix),
                    opnorm(gamma @ gamma - eye),
                    opnorm(j @ j - eye),
                    opnorm(gamma @ j + j @ gamma))
    return ("passed" if worst <= 1e-14 else "failed", worst, 1e-14, "", {})


def _check_wick(ctx: _Context):
    dplus = ctx.riemannian(0, +1).matrix
    dminus = ctx.riemannian(0, -1).matrix
    dlor = ctx.lorentzian(0).matrix
    resid = opnorm(dlor - 0.5 * (dplus + dminus) - 0.5j * (dplus - dminus))
    return ("passed" if resid <= 1e-12 else "failed", resid, 1e-12, "", {})


def _check_lapse_conjugation(ctx: _Context):
    fam = ctx.probe_family(0)
    tg = ctx.time_grid(0)
    conj = conjugated_family(fam)
    roots_inv = sp.block_diag(
        [sp.diags(1.0 / fam.lapse_sqrt(k).diagonal().real) for k in range(fam.num_nodes)],
        format="csr")
    sandwich = sp.block_diag([roots_inv, roots_inv], format="csr")
    resid = 0.0
    for sign in (+1, -1):
        direct = assemble_riemannian(fam, tg, sign).matrix
        absorbed = assemble_riemannian(conj, tg, sign).matrix
        resid = max(resid, opnorm(direct - sandwich @ absorbed @ sandwich))
    notes = "probe lapse substituted" if ctx.base.lapse.is_identity else ""
    return ("passed" if resid <= 1e-12 else "failed", resid, 1e-12, notes, {})


def _check_riemannian_selfadjoint(ctx: _Context):
    if ctx.base.time.kind != "circle":
        return ("skipped", None, None, "interval time: Hermiticity not asserted", {})
    resid = max(herm_residual(ctx.riemannian(0, +1).matrix),
                herm_residual(ctx.riemannian(0, -1).matrix))
    return ("passed" if resid <= 1e-10 else "failed", resid, 1e-10, "", {})


def _check_krein_selfadjoint(ctx: _Context):
    if ctx.base.time.kind != "circle":
        return ("skipped", None, None, "interval time: Krein symmetry not asserted", {})
    resid = herm_residual(ctx.lorentzian(0).krein_symmetrized())
    return ("passed" if resid <= 1e-10 else "failed", resid, 1e-10, "", {})


def _check_lattice_hermiticity(ctx: _Context):
    fams = [ctx.family(0)]
    if len(ctx.resolutions) > 1:
        fams.append(ctx.family(1))
    resids = [max(herm_residual(d) for d in fam.dirac) for fam in fams]
    extras = {"residuals": resids}
    if ctx.base.metric.kind == CONSTANT_DIAGONAL:
        ok = resids[0] <= 1e-12
        return ("passed" if ok else "failed", resids[0], 1e-12, "", extras)
    if len(resids) < 2:
        return ("skipped", resids[0], None, "x-dependent metric: need 2 resolutions", extras)
    ok = resids[1] <= max(resids[0] / 4.0, 1e-13)
    if resids[1] > 1e-16 and resids[0] > 1e-16:
        extras["observed_order"] = math.log2(resids[0] / resids[1])
    return ("passed" if ok else "failed", resids[1], max(resids[0] / 4.0, 1e-13),
            "defect must fall at least quadratically under refinement", extras)


def _check_frame_scaling(ctx: _Context):
    scn = ctx.scenario(0)
    if scn.metric.kind != CONSTANT_DIAGONAL:
        return ("skipped", None, None, "frame scaling needs an x-independent metric", {})
    texts = {e.text for e in scn.metric.scale_exprs}
    if len(texts) != 1:
        return ("skipped", None, None, "frame scaling needs one shared scale factor", {})
    if scn.spatial_grid().hilbert_dim > 2048:
        return ("skipped", None, None, "dense eigensolve too large", {})
    grid = scn.spatial_grid()
    rep = build_odd_rep(scn.n)
    ref_metric = MetricFamily.from_strings(scn.n, CONSTANT_DIAGONAL, ["1"] * scn.n)
    ref_vals = np.linalg.eigvalsh(as_dense(hypersurface_dirac(ref_metric, grid, rep, 0.0)))
    worst = 0.0
    for t in scn.time_nodes()[:3]:
        a = float(scn.metric.scales((), t)[0])
        vals = np.linalg.eigvalsh(as_dense(hypersurface_dirac(scn.metric, grid, rep, t)))
        worst = max(worst, float(np.max(np.abs(vals - ref_vals / a))))
    return ("passed" if worst <= 1e-11 else "failed", worst, 1e-11, "", {})


def _check_volume_cocycle(ctx: _Context):
    scn = ctx.base
    x = ctx.sample_points()
    rng = np.random.default_rng(ctx.seed + 1)
    t0 = scn.time.start
    worst = 0.0
    for _ in range(4):
        tmid = t0 + rng.uniform(0.1, 0.9) * scn.timescale
        tend = t0 + rng.uniform(0.1, 0.9) * scn.timescale
        direct = volume_function(scn.metric, x, tend, base_time=t0)
        chained = (volume_function(scn.metric, x, tmid, base_time=t0)
                   * volume_function(scn.metric, x, tend, base_time=tmid))
        worst = max(worst, float(np.max(np.abs(direct - chained))))
    return ("passed" if worst <= 1e-13 else "failed", worst, 1e-13, "", {})


def _check_curvature_identity(ctx: _Context):
    scn = ctx.base
    x = ctx.sample_points()
    t = ctx.interior_time()
    h = 1e-3 * scn.timescale
    lat_exact = mean_curvature(scn.metric, scn.lapse, scn.signature, x, t, analytic=True)
    orc_exact = extrinsic_curvature(scn.metric, scn.lapse, scn.signature, x, t, analytic=True)
    resid_analytic = float(np.max(np.abs(lat_exact - orc_exact["H"])))

    def numeric_gap(step):
        lat = mean_curvature(scn.metric, scn.lapse, scn.signature, x, t,
                             h_t=step, analytic=False)
        orc = extrinsic_curvature(scn.metric, scn.lapse, scn.signature, x, t,
                                  h_t=step, analytic=False)
        return float(np.max(np.abs(lat - orc["H"])))

    gap_h = numeric_gap(h)
    gap_h2 = numeric_gap(h / 2.0)
    extras = {"numeric_gap": [gap_h, gap_h2]}
    order_ok = True
    if gap_h > 1e-12 and gap_h2 > 1e-14:
        extras["observed_order"] = math.log2(gap_h / gap_h2)
        order_ok = extras["observed_order"] >= 1.6
    status = "passed" if (resid_analytic <= 1e-6 and order_ok) else "failed"
    return (status, resid_analytic, 1e-6,
            "analytic routes agree; numeric gap closes at second order", extras)


def _check_commutator_stability(ctx: _Context):
    if len(ctx.resolutions) < 2:
        return ("skipped", None, None, "needs two resolutions", {})
    if not ctx.base.algebra:
        return ("skipped", None, None, "no algebra samples in scenario", {})
    label = ctx.base.algebra[0].text
    omega = 2.0 * math.pi / ctx.base.timescale
    norms, commutators = [], []
    for i in (0, 1):
        op = ctx.signature_operator(i)
        pi = algebra_operator(ctx.family(i), ctx.time_grid(i), label,
                              time_profile=lambda t: math.cos(omega * t))
        commutators.append(spectral_norm(op.matrix @ pi - pi @ op.matrix))
        norms.append(spectral_norm(op.matrix))
    drift = abs(commutators[1] - commutators[0]) / commutators[0]
    growth = norms[1] / norms[0] - 1.0
    ok = drift < 0.10 and growth >= 0.80
    extras = {"commutator_norms": commutators, "operator_norms": norms,
              "drift": drift, "growth": growth}
    return ("passed" if ok else "failed", drift, 0.10,
            f"operator norm grew {100 * growth:.0f}%", extras)


def _is_flat(scn: Scenario) -> bool:
    flat_metric = all(e.is_constant and float(e()) == 1.0 for e in scn.metric.scale_exprs)
    return flat_metric and scn.lapse.is_identity


def _check_flat_reconstruction(ctx: _Context):
    scn = ctx.scenario(0)
    if not _is_flat(scn) or scn.time.kind != "circle":
        return ("skipped", None, None, "needs the flat static scenario", {})
    if 2 * scn.time.num_nodes * scn.spatial_grid().hilbert_dim > 4096:
        return ("skipped", None, None, "dense eigensolve too large", {})
    assembled = spectrum(ctx.riemannian(0, +1), assume="hermitian").values
    exact = flat_spectrum(
        scn.n,
        (scn.time.period,) + scn.circumferences,
        (scn.time.spin_structure,) + scn.spin_structure,
        modes_per_axis=(scn.time.num_nodes,) + (scn.points_per_axis,) * scn.n)
    resid = float(np.max(np.abs(np.sort(assembled) - np.sort(exact))))
    extras = {"smallest_magnitude": float(np.min(np.abs(assembled)))}
    notes = "all lattice modes match the closed form"
    if scn.signature.kind == "lorentzian":
        # hyperbolic branch: the full i J D spectra of the two code paths coincide
        sa = spectrum(ctx.lorentzian(0).krein_symmetrized(), assume="hermitian").values
        sb = spectrum(ctx.oracle(0).krein_symmetrized(), assume="hermitian").values
        krein_gap = float(np.max(np.abs(np.sort(sa) - np.sort(sb))))
        extras["krein_cross_path"] = krein_gap
        resid = max(resid, krein_gap)
        notes += "; Lorentzian i J D spectra agree across code paths"
    return ("passed" if resid <= 1e-8 else "failed", resid, 1e-8, notes, extras)


def _reconstruction_magnitudes(ctx: _Context, i: int, count: int):
    """Lowest eigenvalue magnitudes of the elliptic branch on both code paths."""
    op = ctx.riemannian(i, +1)
    orc = ctx._memo(("oracle_riem", i), lambda: intrinsic_dirac(
        SpacetimeGrid.build(ctx.scenario(i).with_signature(RIEMANNIAN))))
    a = spectrum(op, assume="hermitian")
    b = spectrum(orc.matrix, assume="hermitian")
    return (np.sort(np.abs(a.values))[:count], np.sort(np.abs(b.values))[:count],
            max(a.asymmetry, b.asymmetry))


def _check_reconstruction(ctx: _Context):
    scn = ctx.scenario(0)
    if scn.time.kind != "circle":
        return ("skipped", None, None, "needs a Fourier time circle", {})
    if scn.metric.kind != CONSTANT_DIAGONAL or scn.lapse.kind != "time_only":
        return ("skipped", None, None,
                "spectral agreement asserted only for x-independent data (geodesic normal)", {})
    if 2 * scn.time.num_nodes * scn.spatial_grid().hilbert_dim > 4096:
        return ("skipped", None, None, "dense eigensolve too large", {})
    count = DEFAULT_EIG_COUNT
    a0, b0, asym0 = _reconstruction_magnitudes(ctx, 0, count)
    resid0 = float(np.max(np.abs(a0 - b0)))
    extras = {"residuals": [resid0], "asymmetry": asym0}
    notes = ""
    if scn.signature.kind == "lorentzian":
        # the Lorentzian operators differ from the elliptic pair by the exact
        # Wick identity; their own low-magnitude modes sit on the light cone,
        # where lattice Nyquist effects dominate, so the cross-path gap of
        # i J D is reported without an assertion
        sa = spectrum(ctx.lorentzian(0).krein_symmetrized(), assume="hermitian").values
        sb = spectrum(ctx.oracle(0).krein_symmetrized(), assume="hermitian").values
        extras["krein_gap_exploratory"] = float(
            np.max(np.abs(np.sort(np.abs(sa))[:count] - np.sort(np.abs(sb))[:count])))
        notes = "asserted through the Wick-rotated elliptic branch; "
    if len(ctx.resolutions) < 2:
        status = "passed" if resid0 <= 1e-2 else "failed"
        return (status, resid0, 1e-2, notes + "single resolution: no order estimate", extras)
    a1, b1, _ = _reconstruction_magnitudes(ctx, 1, count)
    resid1 = float(np.max(np.abs(a1 - b1)))
    extras["residuals"].append(resid1)
    if resid1 <= 1e-8:
        order = math.log2(max(resid0, 1e-300) / max(resid1, 1e-300))
        extras["observed_order"] = order
        status = "passed" if resid0 <= 1e-2 else "failed"
        return (status, resid0, 1e-2,
                notes + "agreement near machine precision at the finer grid", extras)
    order = math.log2(max(resid0, 1e-300) / max(resid1, 1e-300))
    extras["observed_order"] = order
    ok = resid0 <= 1e-2 and order >= 2.0
    return ("passed" if ok else "failed", resid0, 1e-2,
            notes + f"observed convergence order {order:.1f}", extras)


def _check_sylvester(ctx: _Context):
    fam = ctx.probe_family(0)
    if fam.hilbert_dim > 2048:
        return ("skipped", None, None, "dense eigensolve too large", {})
    conj = conjugated_family(fam)
    mismatches = 0
    for k in range(fam.num_nodes):
        w0 = np.linalg.eigvalsh(as_dense(fam.dirac[k]))
        w1 = np.linalg.eigvalsh(as_dense(conj.dirac[k]))
        cut0 = 1e-9 * max(1.0, float(np.max(np.abs(w0))))
        cut1 = 1e-9 * max(1.0, float(np.max(np.abs(w1))))
        inertia0 = (int((w0 < -cut0).sum()), int((np.abs(w0) <= cut0).sum()), int((w0 > cut0).sum()))
        inertia1 = (int((w1 < -cut1).sum()), int((np.abs(w1) <= cut1).sum()), int((w1 > cut1).sum()))
        mismatches += inertia0 != inertia1
    return ("passed" if mismatches == 0 else "failed", float(mismatches), 0.0,
            "inertia preserved under the lapse congruence", {})


def _check_family_axioms(ctx: _Context):
    report = check_family_axioms(ctx.family(0), seed=ctx.seed)
    extras = report.to_json()
    return ("passed" if report.passed else "failed", report.hermiticity,
            report.tolerance, "constants reported in extras", extras)


def _check_unitary_invariance(ctx: _Context):
    fam = ctx.family(0)
    if fam.hilbert_dim > 1024:
        return ("skipped", None, None, "dense conjugation too large", {})
    rng = np.random.default_rng(ctx.seed + 2)
    z = rng.standard_normal((fam.hilbert_dim, fam.hilbert_dim)) \
        + 1j * rng.standard_normal((fam.hilbert_dim, fam.hilbert_dim))
    q, _ = np.linalg.qr(z)
    probes = unit_probes(fam.hilbert_dim, 8, seed=ctx.seed)
    base = check_family_axioms(fam, seed=ctx.seed, probes=probes)
    rotated = TripleFamily(
        fam.time_nodes,
        tuple(sp.csr_matrix(q @ as_dense(D) @ q.conj().T) for D in fam.dirac),
        tuple(sp.csr_matrix(q @ as_dense(N) @ q.conj().T) for N in fam.lapse),
        {k: sp.csr_matrix(q @ as_dense(a) @ q.conj().T) for k, a in fam.algebra.items()},
        provenance=fam.provenance + ":rotated")
    after = check_family_axioms(rotated, seed=ctx.seed, probes=probes @ q.T)
    pairs = [
        (base.hermiticity, after.hermiticity),
        (base.derivative_bound, after.derivative_bound),
        (base.lapse_dirac_commutator, after.lapse_dirac_commutator),
        (base.graph_norm_lower, after.graph_norm_lower),
        (base.graph_norm_upper, after.graph_norm_upper),
    ]
    resid = max(abs(a - b) / max(1.0, abs(a)) for a, b in pairs)
    return ("passed" if resid <= 1e-9 else "failed", resid, 1e-9,
            "reported constants are basis independent", {})


def _check_homotopy(ctx: _Context):
    fam = ctx.probe_family(0)
    dim = 2 * ctx.time_grid(0).num_nodes * fam.hilbert_dim
    if dim > 2048:
        return ("skipped", None, None, "dense resolvents too large", {})
    data = lapse_homotopy_resolvents(fam, ctx.time_grid(0), sign=+1, samples=9)
    bound = data["lipschitz_constant"] * data["ds"] + 1e-15
    within_c = bool(np.all(data["resolvent_diffs"] <= bound))
    within_op = bool(np.all(data["resolvent_diffs"] <= data["operator_diffs"] + 1e-12))
    resid = float(np.max(data["resolvent_diffs"] - data["operator_diffs"]))
    extras = {"lipschitz_constant": data["lipschitz_constant"],
              "resolvent_diffs": data["resolvent_diffs"].tolist(),
              "operator_diffs": data["operator_diffs"].tolist()}
    ok = within_c and within_op
    notes = "diffs bounded by C*ds and by the operator increments (resolvent identity)"
    if ctx.base.lapse.is_identity:
        notes += "; probe lapse substituted"
    return ("passed" if ok else "failed", resid, 0.0, notes, extras)


def lorentz_type_axioms(op: AssembledOperator, fam: TripleFamily, tg: TimeGrid,
                        timescale: float | None = None) -> dict:
    """Finite-dimensional surrogate battery for the Krein-triple axioms."""
    if op.signature.kind != "lorentzian":
        raise ValueError("axiom battery applies to the Lorentzian operator")
    gamma, j = op.grading, op.fundamental_symmetry
    eye = sp.identity(op.dim, format="csr")
    odd = opnorm(gamma @ op.matrix @ gamma + op.matrix)
    krein = herm_residual(op.krein_symmetrized())
    relations = max(opnorm(gamma @ j + j @ gamma), opnorm(j @ j - eye), opnorm(gamma @ gamma - eye))
    algebra_comm = 0.0
    commutator = 0.0
    omega = 2.0 * math.pi / (timescale or (tg.nodes[-1] - tg.nodes[0] + 1e-300))
    for label in fam.algebra:
        pi = algebra_operator(fam, tg, label, time_profile=lambda t: math.cos(omega * t))
        algebra_comm = max(algebra_comm, opnorm(j @ pi - pi @ j))
        commutator = max(commutator, spectral_norm(op.matrix @ pi - pi @ op.matrix))
    return {
        "odd_residual": odd,
        "krein_residual": krein,
        "symmetry_relations": relations,
        "algebra_commutes_with_J": algebra_comm,
        "bounded_commutator_norm": commutator,
        "domain_inclusion": "trivial on a finite-dimensional space",
        "local_compactness": "trivial on a finite-dimensional space",
        "passed": bool(odd <= 1e-14 and krein <= 1e-10 and relations <= 1e-14
                       and algebra_comm <= 1e-14),
    }


def _check_lorentz_axioms(ctx: _Context):
    report = lorentz_type_axioms(ctx.lorentzian(0), ctx.family(0), ctx.time_grid(0),
                                 timescale=ctx.base.timescale)
    resid = max(report["odd_residual"], report["krein_residual"],
                report["symmetry_relations"], report["algebra_commutes_with_J"])
    return ("passed" if report["passed"] else "failed", resid, 1e-10,
            "odd + Krein-self-adjoint + J commutes with the algebra", report)


def _check_lapse_bounds(ctx: _Context):
    scn = ctx.scenario(0)
    grid = scn.spatial_grid()
    try:
        for t in scn.time_nodes():
            lapse_matrix(scn.lapse, grid, t)
    except LapseBoundError as exc:
        return ("failed", None, None, str(exc), {})
    return ("passed", 0.0, None, "lapse positive within declared bounds at every node", {})


_REGISTRY = [
    ("lapse_bounds", "lapse stays positive within its declared bounds", _check_lapse_bounds),
    ("clifford_battery", "generator relations, Hermiticity, grading, block identities",
     _check_clifford),
    ("grading_oddness", "assembled operators are odd; grading and swap symmetry interlock",
     _check_grading),
    ("wick_identity", "Lorentzian operator is the reverse Wick rotation of the pair D+/D-",
     _check_wick),
    ("lapse_conjugation", "lapse absorbs into the family by the half-density conjugation",
     _check_lapse_conjugation),
    ("riemannian_selfadjoint", "product operators are self-adjoint on circle time",
     _check_riemannian_selfadjoint),
    ("krein_selfadjoint", "i J D is self-adjoint on circle time", _check_krein_selfadjoint),
    ("lattice_hermiticity", "hypersurface Dirac matrices are Hermitian (up to scheme order)",
     _check_lattice_hermiticity),
    ("frame_scaling", "uniform metric rescaling scales the spectrum exactly",
     _check_frame_scaling),
    ("volume_cocycle", "volume density rebasing is multiplicative", _check_volume_cocycle),
    ("curvature_identity", "volume-density route equals the Weingarten route for H",
     _check_curvature_identity),
    ("commutator_stability", "algebra commutators stay bounded while the operator grows",
     _check_commutator_stability),
    ("flat_reconstruction", "assembled flat spectrum equals the closed-form mode sum",
     _check_flat_reconstruction),
    ("reconstruction", "assembled and intrinsic spectra agree and converge",
     _check_reconstruction),
    ("sylvester_inertia", "lapse congruence preserves eigenvalue inertia", _check_sylvester),
    ("family_axioms", "sampled family satisfies the axiom surrogates", _check_family_axioms),
    ("unitary_invariance", "reported constants are invariant under unitary conjugation",
     _check_unitary_invariance),
    ("homotopy_resolvent", "resolvents move Lipschitz-continuously along the lapse homotopy",
     _check_homotopy),
    ("lorentz_axioms", "Lorentz-type axiom battery", _check_lorentz_axioms),
]


def available_checks() -> list[str]:
    return [name for name, _, _ in _REGISTRY]


def run_suite(scenario: Scenario, resolutions=None, checks="all",
              seed: int = GLOBAL_SEED) -> SuiteReport:
    """Run the selected checks and collect a deterministic report."""
    if resolutions is None:
        resolutions = [(scenario.points_per_axis, scenario.time.num_nodes)]
    ctx = _Context(scenario, resolutions, seed=seed)
    if checks == "all":
        selected = [name for name, _, _ in _REGISTRY]
    else:
        selected = list(checks)
        unknown = set(selected) - set(available_checks())
        if unknown:
            raise ValueError(f"unknown checks: {sorted(unknown)}")
    if scenario.signature.kind != "lorentzian" and checks == "all":
        selected = [s for s in selected if s != "lorentz_axioms"]

    results = []
    for name, claim, fn in _REGISTRY:
        if name not in selected:
            continue
        start = time.perf_counter()
        try:
            status, resid, thresh, notes, extras = fn(ctx)
        except LapseBoundError as exc:
            status, resid, thresh, notes, extras = (
                "skipped", None, None, f"family unavailable: {exc}", {})
        elapsed = (time.perf_counter() - start) * 1000.0
        results.append(CheckResult(check_id=name, claim=claim, status=status,
                                   residual=resid, threshold=thresh,
                                   runtime_ms=elapsed, notes=notes, extras=extras))
    return SuiteReport(scenario_name=scenario.name,
                       resolutions=[(int(l), int(nt)) for l, nt in ctx.resolutions],
                       seed=seed, results=results)
