"""Ground-truth constructions on the full (n+1)-dimensional torus.

This module never calls the lattice/assembler machinery: the space(time)
Dirac operator is discretized directly from the warped diagonal metric

    g = sum_j a_j(x,T)^2 dx_j^2 + eps0 N(x,T)^2 dT^2

in the orthonormal frame E_0 = N^{-1} d/dT, E_j = a_j^{-1} d/dx_j, with
frame connection coefficients computed from the metric's Christoffel symbols
(first derivatives of the diagonal entries) and its own FFT-circulant
pseudospectral derivatives.  The returned matrix is conjugated by the square
root of the volume density N * prod_j a_j, an exact similarity that makes it
Hermitian (Riemannian) or i*J-symmetric (Lorentzian) up to discretization
residual, with J = gamma(E_0).

Also here: the closed-form flat-torus spectrum and the Weingarten-map route
to the extrinsic curvature, both used as cross-checks against the foliation
side of the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np
import scipy.sparse as sp

from .clifford import CliffordRep, Signature, build_even_rep, build_odd_rep
from .lattice import ANTIPERIODIC, LapseFamily, MetricFamily
from .scenario import Scenario

__all__ = ["SpacetimeGrid", "OracleOperator", "intrinsic_dirac", "flat_spectrum",
           "extrinsic_curvature"]


def _fft_derivative(npts: int, length: float, antiperiodic: bool) -> np.ndarray:
    """Circulant pseudospectral d/dx built through the FFT.

    Antiperiodic sections are handled as phase * (periodic function): the
    integer-mode circulant is shifted to half-integer wavenumbers and
    conjugated by the phase.  Wavenumbers without a negative partner in the
    window are zeroed so that the matrix stays exactly anti-Hermitian.
    """
    if npts < 2:
        return np.zeros((npts, npts), dtype=complex)
    kappa = np.fft.fftfreq(npts, d=1.0 / npts)
    if antiperiodic:
        kappa = kappa + 0.5
    paired = np.isin(-kappa, kappa)
    k = (2.0 * math.pi / length) * np.where(paired, kappa, 0.0)
    circulant = np.fft.ifft(np.fft.fft(np.eye(npts), axis=0) * (1j * k)[:, None], axis=0)
    if antiperiodic:
        x = np.arange(npts) * (length / npts)
        phase = np.exp(1j * math.pi * x / length)
        circulant = circulant * np.outer(phase, phase.conj())
    return circulant


@dataclass(frozen=True)
class SpacetimeGrid:
    """The (n+1)-dimensional product grid with its even Clifford representation.

    Axis order is (T, x_1, ..., x_n); grid functions are flattened in
    C-order, and the Hilbert space is spinor (x) grid.
    """

    scenario: Scenario
    rep: CliffordRep = field(repr=False)

    @classmethod
    def build(cls, scenario: Scenario) -> "SpacetimeGrid":
        if scenario.time.kind != "circle":
            raise ValueError("the intrinsic construction needs a Fourier time circle")
        rep = build_even_rep(build_odd_rep(scenario.n), scenario.signature)
        return cls(scenario=scenario, rep=rep)

    @property
    def signature(self) -> Signature:
        return self.scenario.signature

    @property
    def axis_lengths(self) -> tuple[float, ...]:
        return (self.scenario.time.period,) + self.scenario.circumferences

    @property
    def axis_points_counts(self) -> tuple[int, ...]:
        return (self.scenario.time.num_nodes,) + (self.scenario.points_per_axis,) * self.scenario.n

    @property
    def axis_antiperiodic(self) -> tuple[bool, ...]:
        return ((self.scenario.time.spin_structure == ANTIPERIODIC,)
                + tuple(s == ANTIPERIODIC for s in self.scenario.spin_structure))

    @property
    def volume(self) -> int:
        return int(np.prod(self.axis_points_counts))

    @property
    def hilbert_dim(self) -> int:
        return self.rep.spinor_dim * self.volume

    def coordinates(self) -> tuple[np.ndarray, ...]:
        axes = [np.arange(c) * (l / c)
                for c, l in zip(self.axis_points_counts, self.axis_lengths)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return tuple(m.reshape(-1) for m in mesh)

    def axis_derivative(self, axis: int) -> sp.csr_matrix:
        shape = self.axis_points_counts
        d1 = _fft_derivative(shape[axis], self.axis_lengths[axis], self.axis_antiperiodic[axis])
        before = int(np.prod(shape[:axis])) if axis > 0 else 1
        after = int(np.prod(shape[axis + 1:])) if axis + 1 < len(shape) else 1
        # lifting order matches the C-order flattening of (T, x_1, ..., x_n)
        out = sp.csr_matrix(d1)
        if before > 1:
            out = sp.kron(sp.identity(before, format="csr"), out, format="csr")
        if after > 1:
            out = sp.kron(out, sp.identity(after, format="csr"), format="csr")
        return out


@dataclass(frozen=True)
class OracleOperator:
    matrix: sp.csr_matrix = field(repr=False)
    grading: sp.csr_matrix = field(repr=False)
    fundamental_symmetry: sp.csr_matrix = field(repr=False)
    signature: Signature
    hermitian_expected: bool

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def krein_symmetrized(self) -> sp.csr_matrix:
        return (1j * self.fundamental_symmetry @ self.matrix).tocsr()


def _frame_fields(sg: SpacetimeGrid):
    """Frame scales c_mu, their first derivatives, and the signature signs."""
    scn = sg.scenario
    coords = sg.coordinates()
    tval, xval = coords[0], coords[1:]
    n = scn.n
    c = np.empty((n + 1, sg.volume))
    c[0] = np.broadcast_to(np.asarray(scn.lapse.value(xval, tval), dtype=float), (sg.volume,))
    a = scn.metric.scales(xval, tval)
    for j in range(n):
        c[1 + j] = np.broadcast_to(np.asarray(a[j], dtype=float), (sg.volume,))

    # dc[lam, mu] = d c_mu / d(axis lam), axes ordered (T, x_1..x_n); analytic.
    var_names = ["t"] + [f"x{j + 1}" for j in range(n)]
    exprs = [scn.lapse.expr] + list(scn.metric.scale_exprs)
    dc = np.zeros((n + 1, n + 1, sg.volume))
    for lam, var in enumerate(var_names):
        for mu, expr in enumerate(exprs):
            dc[lam, mu] = np.broadcast_to(
                np.asarray(expr.diff(var)(t=tval, x=xval), dtype=float), (sg.volume,))
    eta = np.array([scn.signature.epsilon0] + [1] * n)
    return c, dc, eta


def intrinsic_dirac(sg: SpacetimeGrid) -> OracleOperator:
    """Volume-density conjugated Dirac matrix of the warped product metric.

    Assembled as sum_mu eps_mu gamma_mu (c_mu^{-1} d_mu + connection), with
    the only nonzero frame coefficients of a diagonal metric,

        w[l, l, nu] = -eta_l (d_nu c_l) / (c_l c_nu),
        w[nu, l, nu] = +eta_nu (d_l c_nu) / (c_l c_nu),      l != nu,

    entering as (1/2) eps_l eps_mu eps_nu w[l, mu, nu] gamma_l gamma_mu gamma_nu.
    """
    scn = sg.scenario
    n = scn.n
    c, dc, eta = _frame_fields(sg)
    gammas = sg.rep.generators
    spinor_eye = sp.identity(sg.rep.spinor_dim, format="csr")

    total = sp.csr_matrix((sg.hilbert_dim, sg.hilbert_dim), dtype=np.complex128)
    for mu in range(n + 1):
        term = sp.diags(1.0 / c[mu]) @ sg.axis_derivative(mu)
        total = total + eta[mu] * sp.kron(sp.csr_matrix(gammas[mu]), term, format="csr")

    for l in range(n + 1):
        for mu in range(n + 1):
            for nu in range(mu + 1, n + 1):
                if l == mu:
                    omega = -eta[mu] * dc[nu, mu] / (c[mu] * c[nu])
                elif l == nu:
                    omega = eta[nu] * dc[mu, nu] / (c[mu] * c[nu])
                else:
                    continue
                if not np.any(omega):
                    continue
                coeff = 0.5 * eta[l] * eta[mu] * eta[nu]
                gamma_block = coeff * (gammas[l] @ gammas[mu] @ gammas[nu])
                total = total + sp.kron(sp.csr_matrix(gamma_block), sp.diags(omega),
                                        format="csr")

    weight = np.sqrt(np.prod(c, axis=0))
    w_op = sp.kron(spinor_eye, sp.diags(weight), format="csr")
    w_inv = sp.kron(spinor_eye, sp.diags(1.0 / weight), format="csr")
    total = (w_op @ total @ w_inv).tocsr()

    grid_eye = sp.identity(sg.volume, format="csr")
    grading = sp.kron(sp.csr_matrix(sg.rep.grading), grid_eye, format="csr")
    fundamental = sp.kron(sp.csr_matrix(gammas[0]), grid_eye, format="csr")
    return OracleOperator(matrix=total, grading=grading, fundamental_symmetry=fundamental,
                          signature=scn.signature,
                          hermitian_expected=scn.signature.kind == "riemannian")


def _axis_modes(npts: int | None, antiperiodic: bool, max_kappa: float) -> np.ndarray:
    """Mode window for one axis; lattice windows zero their unpaired member."""
    shift = 0.5 if antiperiodic else 0.0
    if npts is None:
        top = int(math.ceil(max_kappa)) + 1
        return np.arange(-top, top + 1, dtype=float) + shift
    kappa = np.arange(-(npts // 2), npts - npts // 2, dtype=float) + shift
    return np.where(np.isin(-kappa, kappa), kappa, 0.0)


def flat_spectrum(n: int, circumferences, spin_structures, count: int | None = None,
                  modes_per_axis=None) -> np.ndarray:
    """Closed-form flat Dirac eigenvalues on T^(n+1), sorted by magnitude.

    ``circumferences`` and ``spin_structures`` cover the n+1 axes in the
    order (time, x_1, ..., x_n).  Each nonzero mode vector contributes
    +-|2 pi kappa / L| with multiplicity 2^((n+1)/2 - 1) per sign; an
    all-periodic zero mode contributes 0 with the full spinor multiplicity.
    With ``modes_per_axis`` the enumeration reproduces a lattice mode window
    (including its zeroed unpaired modes) instead of the continuum.
    """
    circumferences = tuple(float(c) for c in circumferences)
    anti = tuple(s == ANTIPERIODIC for s in spin_structures)
    if len(circumferences) != n + 1 or len(anti) != n + 1:
        raise ValueError(f"need {n + 1} circumferences and spin structures")
    spinor = 2 ** ((n + 1) // 2)
    if modes_per_axis is None:
        if count is None:
            raise ValueError("need either count or modes_per_axis")
        # grow the window until the requested magnitudes are certainly covered
        max_kappa = 2.0
        while True:
            vals = _enumerate_flat(circumferences, anti, spinor,
                                   [_axis_modes(None, a, max_kappa) for a in anti])
            guard = 2.0 * math.pi * max_kappa / max(circumferences)
            if len(vals) >= count and abs(vals[min(count, len(vals)) - 1]) < guard:
                return vals[:count]
            max_kappa *= 2.0
    windows = [_axis_modes(m, a, 0.0) for m, a in zip(modes_per_axis, anti)]
    vals = _enumerate_flat(circumferences, anti, spinor, windows)
    return vals[:count] if count is not None else vals


def _enumerate_flat(circumferences, anti, spinor, windows) -> np.ndarray:
    branch_mult = spinor // 2
    values = []
    for kappas in product(*windows):
        k = [2.0 * math.pi * kap / circ for kap, circ in zip(kappas, circumferences)]
        mag = math.sqrt(sum(ki * ki for ki in k))
        if mag == 0.0:
            values.extend([0.0] * spinor)
        else:
            values.extend([mag] * branch_mult)
            values.extend([-mag] * branch_mult)
    values = np.asarray(values)
    order = np.lexsort((values, np.abs(values)))
    return values[order]


def extrinsic_curvature(metric: MetricFamily, lapse: LapseFamily, signature: Signature,
                        x: tuple, t, h_t: float | None = None,
                        analytic: bool = True) -> dict:
    """Second fundamental form of the slice through the Weingarten map.

    For the warped diagonal metric the frame components are
    K_jj = -eps0 (d_T a_j) / (N a_j); the mean curvature is their average.
    ``analytic`` uses exact time derivatives, otherwise centered differences
    with step ``h_t``.
    """
    a = metric.scales(x, t)
    if analytic:
        da = metric.dt_scales(x, t)
    else:
        if h_t is None or h_t <= 0.0:
            raise ValueError("numeric extrinsic curvature requires a positive step h_t")
        da = (metric.scales(x, t + h_t) - metric.scales(x, t - h_t)) / (2.0 * h_t)
    nval = lapse.value(x, t)
    k_diag = -signature.epsilon0 * da / (nval * a)
    return {"K": k_diag, "H": np.mean(k_diag, axis=0)}
