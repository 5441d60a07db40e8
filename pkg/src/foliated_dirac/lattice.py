"""Hypersurface geometry discretized on flat tori T^n with diagonal metrics.

The metric family is g_t = sum_j a_j(x,t)^2 dx_j^2 with strictly positive
scale factors a_j; the orthonormal frame is e_j = a_j^{-1} d/dx_j.  Spatial
derivatives are Fourier pseudospectral, with half-integer modes on axes whose
spinors are antiperiodic, so the bare derivative matrix is exactly
anti-Hermitian.  The hypersurface Dirac matrices returned here are the
volume-density conjugated operators rho_t D_{M_t} rho_t^{-1} acting on one
fixed Hilbert space C^{spinor} (x) grid functions, expressed in the basis
that orthonormalizes the reference volume measure; for diagonal warped
families the coordinate frame is parallel along the normal, so no further
spinor transport enters.  In that basis the spin-connection and volume terms
contract per axis into (1/2){a_k^{-1}, d_k}, so the matrices are exactly
Hermitian at every resolution, while multiplication operators for algebra
elements are dealiased (Galerkin) so that their commutators with the Dirac
matrices stay uniformly bounded under refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from ._util import axis_operator
from .clifford import CliffordRep, Signature
from .expressions import Expression

__all__ = [
    "InvalidMetricError",
    "LapseBoundError",
    "ResolutionError",
    "MetricFamily",
    "LapseFamily",
    "SpatialGrid",
    "fourier_derivative_matrix",
    "volume_function",
    "mean_curvature",
    "hypersurface_dirac",
    "lapse_matrix",
    "algebra_sample",
]

MIN_POINTS_PER_AXIS = 4

CONSTANT_DIAGONAL = "constant_diagonal"
DIAGONAL_FIELD = "diagonal_field"

PERIODIC = "periodic"
ANTIPERIODIC = "antiperiodic"


class InvalidMetricError(ValueError):
    """Metric coefficients fail positivity on the sampled domain."""


class LapseBoundError(ValueError):
    """Lapse samples violate positivity or the declared bounds."""


class ResolutionError(ValueError):
    """Grid too small for the pseudospectral stencil."""


@dataclass(frozen=True)
class MetricFamily:
    """Diagonal metric family, either x-independent or a full diagonal field.

    ``scale_exprs[j]`` evaluates the frame scale a_j (so g_jj = a_j^2).
    """

    n: int
    kind: str
    scale_exprs: tuple[Expression, ...]

    def __post_init__(self):
        if self.kind not in (CONSTANT_DIAGONAL, DIAGONAL_FIELD):
            raise InvalidMetricError(f"unsupported metric kind {self.kind!r}")
        if len(self.scale_exprs) != self.n:
            raise InvalidMetricError(
                f"metric needs {self.n} scale entries, got {len(self.scale_exprs)}")
        if self.kind == CONSTANT_DIAGONAL:
            for j, e in enumerate(self.scale_exprs):
                if any(v.startswith("x") for v in e.variables):
                    raise InvalidMetricError(
                        f"constant_diagonal scale entry {j} depends on x: {e.text!r}")

    @classmethod
    def from_strings(cls, n: int, kind: str, scales) -> "MetricFamily":
        return cls(n=n, kind=kind, scale_exprs=tuple(Expression.parse(s) for s in scales))

    def scales(self, x: tuple, t) -> np.ndarray:
        """Stacked a_j(x, t) with shape (n,) + broadcast shape of x/t."""
        vals = np.stack([np.asarray(e(t=t, x=x), dtype=float) for e in self.scale_exprs])
        if np.any(vals <= 0.0) or not np.all(np.isfinite(vals)):
            raise InvalidMetricError("metric scale factors must be positive and finite")
        return vals

    def dt_scales(self, x: tuple, t) -> np.ndarray:
        """Analytic time derivatives of the scale factors."""
        shape = np.shape(np.asarray(self.scale_exprs[0](t=t, x=x)))
        return np.stack([
            np.broadcast_to(np.asarray(e.diff("t")(t=t, x=x), dtype=float), shape).copy()
            for e in self.scale_exprs
        ])

    def dx_scale(self, j: int, axis: int, x: tuple, t) -> np.ndarray:
        """Analytic d a_j / d x_axis (0-based axis)."""
        return np.asarray(self.scale_exprs[j].diff(f"x{axis + 1}")(t=t, x=x), dtype=float)

    @property
    def is_static(self) -> bool:
        return not any(e.depends_on("t") for e in self.scale_exprs)


@dataclass(frozen=True)
class LapseFamily:
    """Positive lapse N(x, t), sampled as a multiplication operator."""

    kind: str  # "time_only" | "spacetime"
    expr: Expression
    bounds: tuple[float, float] | None = None

    def __post_init__(self):
        if self.kind not in ("time_only", "spacetime"):
            raise LapseBoundError(f"unsupported lapse kind {self.kind!r}")
        if self.kind == "time_only" and any(v.startswith("x") for v in self.expr.variables):
            raise LapseBoundError(f"time_only lapse depends on x: {self.expr.text!r}")
        if self.bounds is not None:
            n1, n2 = self.bounds
            if not (0.0 < n1 <= n2):
                raise LapseBoundError(f"invalid lapse bounds {self.bounds!r}")

    @classmethod
    def constant(cls, value: float = 1.0) -> "LapseFamily":
        return cls(kind="time_only", expr=Expression.parse(value))

    def value(self, x: tuple, t) -> np.ndarray:
        vals = np.asarray(self.expr(t=t, x=x), dtype=float)
        if np.any(vals <= 0.0) or not np.all(np.isfinite(vals)):
            raise LapseBoundError("lapse must stay positive and finite")
        if self.bounds is not None:
            n1, n2 = self.bounds
            if np.any(vals < n1) or np.any(vals > n2):
                raise LapseBoundError(
                    f"lapse sample outside declared bounds [{n1}, {n2}]")
        return vals

    def dt_value(self, x: tuple, t) -> np.ndarray:
        return np.asarray(self.expr.diff("t")(t=t, x=x), dtype=float)

    @property
    def is_identity(self) -> bool:
        return self.expr.is_constant and float(self.expr()) == 1.0


def fourier_derivative_matrix(npts: int, circumference: float, antiperiodic: bool) -> np.ndarray:
    """Exact pseudospectral d/dx on a uniform periodic grid.

    Modes are integers (periodic) or half-integers (antiperiodic).  When the
    window contains a mode without its negative partner (even npts periodic,
    odd npts antiperiodic) that mode's derivative is zeroed, which keeps the
    matrix exactly anti-Hermitian.
    """
    if npts < MIN_POINTS_PER_AXIS:
        raise ResolutionError(f"need at least {MIN_POINTS_PER_AXIS} points per axis, got {npts}")
    shift = 0.5 if antiperiodic else 0.0
    kappa = np.arange(-(npts // 2), npts - npts // 2, dtype=float) + shift
    unpaired = ~np.isin(-kappa, kappa)
    k = 2.0 * math.pi / circumference * kappa
    k[unpaired] = 0.0
    x = np.arange(npts) * (circumference / npts)
    modes = np.exp(1j * np.outer(x, k)) / math.sqrt(npts)  # unitary (grid orthonormality)
    return (modes * (1j * k)) @ modes.conj().T


@lru_cache(maxsize=None)
def _cached_derivative(npts: int, circumference: float, antiperiodic: bool):
    return fourier_derivative_matrix(npts, circumference, antiperiodic)


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform periodic grid on T^n with per-axis spinor boundary conditions."""

    n: int
    points_per_axis: int
    circumferences: tuple[float, ...]
    spin_structure: tuple[str, ...]

    def __post_init__(self):
        if self.n < 1 or self.n % 2 == 0:
            raise ValueError(f"spatial dimension must be odd, got {self.n}")
        if self.points_per_axis < MIN_POINTS_PER_AXIS:
            raise ResolutionError(
                f"need at least {MIN_POINTS_PER_AXIS} points per axis, got {self.points_per_axis}")
        if len(self.circumferences) != self.n or len(self.spin_structure) != self.n:
            raise ValueError("per-axis data must match the spatial dimension")
        for s in self.spin_structure:
            if s not in (PERIODIC, ANTIPERIODIC):
                raise ValueError(f"unknown spin structure {s!r}")

    @classmethod
    def make(cls, n: int, points_per_axis: int, circumferences=None,
             spin_structure=ANTIPERIODIC) -> "SpatialGrid":
        circ = tuple(float(c) for c in (circumferences or (2.0 * math.pi,) * n))
        ss = (spin_structure,) * n if isinstance(spin_structure, str) else tuple(spin_structure)
        return cls(n=n, points_per_axis=points_per_axis, circumferences=circ, spin_structure=ss)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_axis,) * self.n

    @property
    def volume(self) -> int:
        return self.points_per_axis ** self.n

    @property
    def spinor_dim(self) -> int:
        return 2 ** ((self.n - 1) // 2)

    @property
    def hilbert_dim(self) -> int:
        return self.spinor_dim * self.volume

    def axis_points(self, axis: int) -> np.ndarray:
        return np.arange(self.points_per_axis) * (self.circumferences[axis] / self.points_per_axis)

    def meshgrid_flat(self) -> tuple[np.ndarray, ...]:
        """Coordinates of all grid points, flattened in C-order (axis 0 slowest)."""
        axes = [self.axis_points(j) for j in range(self.n)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return tuple(m.reshape(-1) for m in mesh)

    def derivative_1d(self, axis: int, force_periodic: bool = False) -> np.ndarray:
        anti = (self.spin_structure[axis] == ANTIPERIODIC) and not force_periodic
        return _cached_derivative(self.points_per_axis, self.circumferences[axis], anti)

    def axis_derivative(self, axis: int, force_periodic: bool = False):
        """Derivative along one axis lifted to the full grid (V x V sparse)."""
        return axis_operator(self.derivative_1d(axis, force_periodic), axis, self.shape)

    def differentiate_field(self, values: np.ndarray, axis: int) -> np.ndarray:
        """Pseudospectral derivative of a periodic scalar field given as flat samples."""
        return (self.axis_derivative(axis, force_periodic=True) @ values.astype(complex)).real


def volume_function(metric: MetricFamily, x: tuple, t, base_time: float = 0.0) -> np.ndarray:
    """rho_t(x) = (det g_t / det g_base)^(1/4), normalized to 1 at the base time."""
    num = metric.scales(x, t)
    den = metric.scales(x, base_time)
    det_ratio = np.prod(num, axis=0) ** 2 / np.prod(den, axis=0) ** 2
    if np.any(det_ratio <= 0.0):
        raise InvalidMetricError("metric determinant must stay positive")
    return det_ratio ** 0.25


def _dt_log_rho(metric: MetricFamily, x: tuple, t, h_t: float | None,
                analytic: bool) -> np.ndarray:
    """d/dt log rho_t, either exactly or by a centered difference rebased at t."""
    if analytic:
        a = metric.scales(x, t)
        da = np.stack([np.broadcast_to(
            np.asarray(metric.scale_exprs[j].diff("t")(t=t, x=x), dtype=float),
            a.shape[1:]).copy() for j in range(metric.n)])
        return 0.5 * np.sum(da / a, axis=0)
    if h_t is None or h_t <= 0.0:
        raise ValueError("numeric d/dt rho requires a positive step h_t")
    plus = volume_function(metric, x, t + h_t, base_time=t)
    minus = volume_function(metric, x, t - h_t, base_time=t)
    return (plus - minus) / (2.0 * h_t)  # rho(t) = 1 in the rebased gauge


def mean_curvature(metric: MetricFamily, lapse: LapseFamily, signature: Signature,
                   x: tuple, t, h_t: float | None = None,
                   analytic: bool = True) -> np.ndarray:
    """Mean curvature from the volume-density route.

    Uses -eps0 (n/2) H_t = N_t^{-1} rho_t^{-1} d rho_t/dt, i.e.
    H_t = -(2 / (n eps0)) N^{-1} d/dt log rho_t.
    """
    dlog = _dt_log_rho(metric, x, t, h_t=h_t, analytic=analytic)
    nval = lapse.value(x, t)
    return -(2.0 / (metric.n * signature.epsilon0)) * dlog / nval


def hypersurface_dirac(metric: MetricFamily, grid: SpatialGrid, rep: CliffordRep, t) -> sp.csr_matrix:
    """Density-conjugated hypersurface Dirac matrix rho_t D_{M_t} rho_t^{-1}.

    For a diagonal metric the frame connection coefficients are
    w_{j,jk} = -(d_k a_j)/(a_j a_k); combined with the conjugations by the
    volume density rho_t and by the square root of the reference measure
    (which orthonormalizes the discrete inner product), every multiplication
    term contracts per axis to

        a_k^{-1} d_k - (1/2) a_k^{-1} (d_k log a_k) ~ (1/2) {a_k^{-1}, d_k},

    the symmetric product of the inverse scale with the pseudospectral
    derivative.  That form is exactly anti-Hermitian at any resolution and
    agrees with the literal connection assembly to spectral accuracy, so the
    returned matrix is exactly Hermitian; for x-independent metrics it
    reduces to sum_j a_j(t)^{-1} gamma_j (x) d_j.
    """
    if metric.n != grid.n:
        raise InvalidMetricError("metric and grid dimensions differ")
    if rep.is_even or rep.ambient_dim != grid.n:
        raise ValueError("need the odd spatial Clifford representation of matching dimension")
    x = grid.meshgrid_flat()
    a = metric.scales(x, t)  # (n, V) after broadcast
    a = np.broadcast_to(a.reshape(metric.n, -1), (metric.n, grid.volume))
    inv_a = 1.0 / a

    total = sp.csr_matrix((grid.hilbert_dim, grid.hilbert_dim), dtype=np.complex128)
    for j in range(grid.n):
        deriv = grid.axis_derivative(j)
        if metric.kind == CONSTANT_DIAGONAL:
            term = sp.diags(inv_a[j]) @ deriv
        else:
            mult = sp.diags(inv_a[j])
            term = 0.5 * (mult @ deriv + deriv @ mult)
        total = total + sp.kron(sp.csr_matrix(rep.generators[j]), term, format="csr")
    return total.tocsr()


def lapse_matrix(lapse: LapseFamily, grid: SpatialGrid, t) -> sp.csr_matrix:
    """Multiplication by N(., t), identical on all spinor components."""
    x = grid.meshgrid_flat()
    vals = np.broadcast_to(np.asarray(lapse.value(x, t), dtype=float), (grid.volume,))
    return sp.kron(sp.identity(grid.spinor_dim), sp.diags(vals), format="csr")


def _axis_mode_basis(npts: int, circumference: float, antiperiodic: bool) -> np.ndarray:
    """Unitary matrix whose columns are the retained Fourier modes on the grid."""
    shift = 0.5 if antiperiodic else 0.0
    kappa = np.arange(-(npts // 2), npts - npts // 2, dtype=float) + shift
    x = np.arange(npts) * (circumference / npts)
    return np.exp(1j * np.outer(x, 2.0 * math.pi / circumference * kappa)) / math.sqrt(npts)


def dealiased_multiplication_1d(values_fine: np.ndarray, npts: int, circumference: float,
                                antiperiodic: bool) -> np.ndarray:
    """Galerkin matrix of multiplication by a periodic function on one axis.

    ``values_fine`` samples the function on the doubled (2*npts) grid, which
    resolves every mode difference exactly.  In the retained mode basis the
    operator is the Toeplitz matrix of Fourier coefficients with no
    wrap-around, so commutators with the pseudospectral derivative stay
    bounded as the grid refines (the wrapped collocation diagonal couples
    opposite Nyquist modes with an O(npts) coefficient instead).
    """
    coeffs = np.fft.fft(np.asarray(values_fine, dtype=complex)) / (2 * npts)
    shift = 0.5 if antiperiodic else 0.0
    kappa = np.arange(-(npts // 2), npts - npts // 2, dtype=float) + shift
    diff = np.rint(kappa[:, None] - kappa[None, :]).astype(int)
    toeplitz = coeffs[np.mod(diff, 2 * npts)]
    basis = _axis_mode_basis(npts, circumference, antiperiodic)
    out = basis @ toeplitz @ basis.conj().T
    return 0.5 * (out + out.conj().T)


def dealiased_multiplication(grid: SpatialGrid, expr: Expression, t=0.0) -> np.ndarray:
    """Galerkin multiplication operator on the full spatial grid (V x V)."""
    fine_axes = [np.arange(2 * grid.points_per_axis) *
                 (grid.circumferences[j] / (2 * grid.points_per_axis))
                 for j in range(grid.n)]
    mesh = np.meshgrid(*fine_axes, indexing="ij")
    vals = np.broadcast_to(np.asarray(expr(t=t, x=tuple(m.reshape(-1) for m in mesh)),
                                      dtype=float), (mesh[0].size,))
    coeffs = np.fft.fftn(vals.reshape(mesh[0].shape)) / mesh[0].size
    kappas, bases = [], []
    for j in range(grid.n):
        shift = 0.5 if grid.spin_structure[j] == ANTIPERIODIC else 0.0
        npts = grid.points_per_axis
        kappas.append(np.arange(-(npts // 2), npts - npts // 2, dtype=float) + shift)
        bases.append(_axis_mode_basis(npts, grid.circumferences[j], shift == 0.5))
    mode_grids = np.meshgrid(*kappas, indexing="ij")
    flat_modes = [m.reshape(-1) for m in mode_grids]
    index = tuple(
        np.mod(np.rint(fm[:, None] - fm[None, :]).astype(int), 2 * grid.points_per_axis)
        for fm in flat_modes)
    toeplitz = coeffs[index]
    basis = bases[0]
    for b in bases[1:]:
        basis = np.kron(basis, b)
    out = basis @ toeplitz @ basis.conj().T
    return 0.5 * (out + out.conj().T)


def algebra_sample(grid: SpatialGrid, funcs) -> list[sp.csr_matrix]:
    """Dealiased multiplication operators for smooth periodic functions.

    Each operator acts identically on the spinor components, is exactly
    Hermitian with norm at most sup|a|, acts as pointwise multiplication on
    band-limited grid functions, and has [D_t, pi(a)] uniformly bounded under
    grid refinement.  Constant functions yield exact scalar matrices.
    """
    out = []
    for f in funcs:
        expr = f if isinstance(f, Expression) else Expression.parse(f)
        if expr.is_constant:
            mult = float(expr()) * np.eye(grid.volume)
        else:
            mult = dealiased_multiplication(grid, expr)
        out.append(sp.kron(sp.identity(grid.spinor_dim), sp.csr_matrix(mult), format="csr"))
    return out
