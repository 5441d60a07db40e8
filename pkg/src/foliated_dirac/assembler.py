"""Total operators on the doubled time-extended space.

With D_blk = blkdiag_k(D_k), N_blk = blkdiag_k(N_k) and the time derivative
Dt lifted to M := N_blk^{-1/2} (Dt (x) 1) N_blk^{-1/2}, the assembled
operators on C^2 (x) C^K (x) H are

    trivial     [[0,  s*i*Dt + i D_blk], [s*i*Dt - i D_blk, 0]]
    riemannian  [[0,  s*i*M  + i D_blk], [s*i*M  - i D_blk, 0]]      s = +-1
    lorentzian  [[0,  -M + i D_blk],     [-M - i D_blk,     0]]

all odd for the grading Gamma = diag(1, -1) and interlocked with the swap
symmetry J = [[0, 1], [1, 0]].  On a time circle Dt is exactly
anti-Hermitian, so the riemannian operators are Hermitian and i*J*D is
Hermitian in the lorentzian case; on an interval the centered-difference Dt
has zeroed Dirichlet boundary rows and the defect is reported, not asserted.

Index map, fixed once: basis vector (c, k, h) -> index c*(K*H) + k*H + h for
component c in {0: plus, 1: minus}, time node k, and hypersurface Hilbert
index h (which the lattice orders spinor-major over grid points).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ._util import DENSE_LIMIT, as_dense, fmt_float, herm_residual, opnorm, sort_by_magnitude
from .clifford import LORENTZIAN, RIEMANNIAN, Signature
from .family import TripleFamily
from .lattice import ANTIPERIODIC, PERIODIC, fourier_derivative_matrix
from .scenario import Scenario

__all__ = ["TimeGrid", "AssembledOperator", "assemble_trivial", "assemble_riemannian",
           "assemble_lorentzian", "algebra_operator", "spectrum", "SpectrumResult",
           "spectrum_to_csv", "operator_to_triplets", "lapse_homotopy_resolvents"]


@dataclass(frozen=True)
class TimeGrid:
    """Time nodes plus the matching derivative matrix."""

    kind: str  # "circle" | "interval"
    nodes: np.ndarray
    derivative: np.ndarray
    spin_structure: str | None = None

    @classmethod
    def circle(cls, period: float, num_nodes: int, spin_structure: str = ANTIPERIODIC,
               start: float = 0.0) -> "TimeGrid":
        nodes = start + np.arange(num_nodes) * (period / num_nodes)
        if num_nodes == 1:
            deriv = np.zeros((1, 1), dtype=complex)
        else:
            deriv = fourier_derivative_matrix(num_nodes, period,
                                              spin_structure == ANTIPERIODIC)
        return cls(kind="circle", nodes=nodes, derivative=deriv, spin_structure=spin_structure)

    @classmethod
    def interval(cls, start: float, stop: float, num_nodes: int) -> "TimeGrid":
        """Centered differences with zeroed Dirichlet boundary rows."""
        nodes = np.linspace(start, stop, num_nodes)
        h = (stop - start) / (num_nodes - 1)
        deriv = np.zeros((num_nodes, num_nodes), dtype=complex)
        for i in range(1, num_nodes - 1):
            deriv[i, i + 1] = 0.5 / h
            deriv[i, i - 1] = -0.5 / h
        return cls(kind="interval", nodes=nodes, derivative=deriv)

    @classmethod
    def from_scenario(cls, scenario: Scenario) -> "TimeGrid":
        t = scenario.time
        if t.kind == "circle":
            return cls.circle(t.period, t.num_nodes, t.spin_structure)
        return cls.interval(t.t_range[0], t.t_range[1], t.num_nodes)

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    def antihermiticity_residual(self) -> float:
        return opnorm(self.derivative + self.derivative.conj().T)


@dataclass(frozen=True)
class AssembledOperator:
    """Total operator with its grading and fundamental symmetry."""

    matrix: sp.csr_matrix = field(repr=False)
    signature: Signature
    provenance: str
    time_grid: TimeGrid = field(repr=False)
    block_dim: int
    hermitian_expected: bool

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def grading(self) -> sp.csr_matrix:
        ones = np.ones(self.block_dim)
        return sp.diags(np.concatenate([ones, -ones])).tocsr()

    @property
    def fundamental_symmetry(self) -> sp.csr_matrix:
        eye = sp.identity(self.block_dim, format="csr")
        return sp.bmat([[None, eye], [eye, None]], format="csr")

    def krein_symmetrized(self) -> sp.csr_matrix:
        """i J D, the operator whose Hermiticity expresses Krein-self-adjointness."""
        return (1j * self.fundamental_symmetry @ self.matrix).tocsr()


def _check_nodes(fam: TripleFamily, tg: TimeGrid) -> None:
    if fam.num_nodes != tg.num_nodes or not np.allclose(fam.time_nodes, tg.nodes,
                                                        rtol=0.0, atol=1e-12):
        raise ValueError("family nodes and time grid nodes do not coincide")


def _dirac_blockdiag(fam: TripleFamily) -> sp.csr_matrix:
    return sp.block_diag(fam.dirac, format="csr")


def _time_derivative_lifted(fam: TripleFamily, tg: TimeGrid) -> sp.csr_matrix:
    return sp.kron(sp.csr_matrix(tg.derivative), sp.identity(fam.hilbert_dim), format="csr")


def _doubled(upper: sp.spmatrix, lower: sp.spmatrix) -> sp.csr_matrix:
    return sp.bmat([[None, upper], [lower, None]], format="csr")


def assemble_trivial(fam: TripleFamily, tg: TimeGrid, sign: int = +1) -> AssembledOperator:
    """Product with the bare time derivative (lapse ignored)."""
    _check_nodes(fam, tg)
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    dblk = _dirac_blockdiag(fam)
    m = _time_derivative_lifted(fam, tg)
    matrix = _doubled(sign * 1j * m + 1j * dblk, sign * 1j * m - 1j * dblk)
    return AssembledOperator(matrix=matrix, signature=RIEMANNIAN,
                             provenance=f"trivial{'+' if sign > 0 else '-'}",
                             time_grid=tg, block_dim=tg.num_nodes * fam.hilbert_dim,
                             hermitian_expected=tg.kind == "circle")


def _lapse_sandwich(fam: TripleFamily, tg: TimeGrid) -> sp.csr_matrix:
    """M = N_blk^{-1/2} (Dt (x) 1) N_blk^{-1/2}; anti-Hermitian on a circle."""
    roots = [fam.lapse_sqrt(k) for k in range(fam.num_nodes)]
    inv_roots = []
    for r in roots:
        if sp.issparse(r) and (r - sp.diags(r.diagonal())).nnz == 0:
            inv_roots.append(sp.diags(1.0 / r.diagonal().real).tocsr())
        else:
            inv_roots.append(sp.csr_matrix(np.linalg.inv(as_dense(r))))
    inv_blk = sp.block_diag(inv_roots, format="csr")
    return (inv_blk @ _time_derivative_lifted(fam, tg) @ inv_blk).tocsr()


def assemble_riemannian(fam: TripleFamily, tg: TimeGrid, sign: int = +1) -> AssembledOperator:
    """Product operator with the lapse at half density on both sides of d/dt."""
    _check_nodes(fam, tg)
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    dblk = _dirac_blockdiag(fam)
    m = _lapse_sandwich(fam, tg)
    matrix = _doubled(sign * 1j * m + 1j * dblk, sign * 1j * m - 1j * dblk)
    return AssembledOperator(matrix=matrix, signature=RIEMANNIAN,
                             provenance=f"riemannian{'+' if sign > 0 else '-'}",
                             time_grid=tg, block_dim=tg.num_nodes * fam.hilbert_dim,
                             hermitian_expected=tg.kind == "circle")


def assemble_lorentzian(fam: TripleFamily, tg: TimeGrid) -> AssembledOperator:
    """Lorentzian total operator J(-M - i diag(D_blk, -D_blk)); i J D is Krein-symmetric."""
    _check_nodes(fam, tg)
    dblk = _dirac_blockdiag(fam)
    m = _lapse_sandwich(fam, tg)
    matrix = _doubled(-m + 1j * dblk, -m - 1j * dblk)
    return AssembledOperator(matrix=matrix, signature=LORENTZIAN, provenance="lorentzian",
                             time_grid=tg, block_dim=tg.num_nodes * fam.hilbert_dim,
                             hermitian_expected=False)


def algebra_operator(fam: TripleFamily, tg: TimeGrid, label: str,
                     time_profile=None) -> sp.csr_matrix:
    """pi(a (x) f) on the doubled space: diagonal in time, equal on both components."""
    a = fam.algebra[label]
    if time_profile is None:
        f = np.ones(tg.num_nodes)
    else:
        f = np.asarray([float(time_profile(t)) for t in tg.nodes])
    block = sp.kron(sp.diags(f), a, format="csr")
    return sp.block_diag([block, block], format="csr")


@dataclass(frozen=True)
class SpectrumResult:
    values: np.ndarray
    asymmetry: float
    method: str

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)


def spectrum(op, count: int | None = None, which: str = "all",
             assume: str = "auto") -> SpectrumResult:
    """Eigenvalues sorted by magnitude then value.

    ``assume`` controls symmetrization: "auto" symmetrizes only when the
    asymmetry is below 1e-8 * ||op|| (and otherwise reports a complex
    spectrum), "hermitian" forces symmetrization for operators known to be
    Hermitian up to discretization, "general" never symmetrizes.
    """
    if which not in ("all", "smallest"):
        raise ValueError("which must be 'all' or 'smallest'")
    mat = op.matrix if isinstance(op, AssembledOperator) else op
    dim = mat.shape[0]
    asym = herm_residual(mat)
    scale = opnorm(mat)
    treat_hermitian = {
        "auto": asym <= 1e-8 * max(scale, 1e-300),
        "hermitian": True,
        "general": False,
    }[assume]

    if treat_hermitian:
        if which == "smallest" and count is not None and dim > DENSE_LIMIT:
            herm = (mat + mat.conj().T) * 0.5
            vals = spla.eigsh(herm.tocsc(), k=count, sigma=0.0, which="LM",
                              return_eigenvectors=False)
            return SpectrumResult(sort_by_magnitude(np.real(vals)), asym, "eigsh-shift-invert")
        if dim > DENSE_LIMIT:
            raise ValueError(f"full dense solve refused for dimension {dim} > {DENSE_LIMIT}")
        dense = as_dense(mat)
        vals = np.linalg.eigvalsh((dense + dense.conj().T) * 0.5)
        vals = sort_by_magnitude(vals)
        if which == "smallest" and count is not None:
            vals = vals[:count]
        return SpectrumResult(vals, asym, "eigvalsh")

    if dim > DENSE_LIMIT:
        k = count or 16
        vals = spla.eigs(mat.tocsc(), k=k, sigma=0.0, which="LM", return_eigenvectors=False)
        return SpectrumResult(sort_by_magnitude(vals), asym, "eigs-shift-invert")
    vals = np.linalg.eigvals(as_dense(mat))
    vals = sort_by_magnitude(vals)
    if which == "smallest" and count is not None:
        vals = vals[:count]
    return SpectrumResult(vals, asym, "eigvals")


def spectrum_to_csv(result: SpectrumResult) -> str:
    lines = ["index,re,im,magnitude"]
    vals = np.atleast_1d(result.values)
    for i, v in enumerate(vals):
        z = complex(v)
        lines.append(f"{i},{fmt_float(z.real)},{fmt_float(z.imag)},{fmt_float(abs(z))}")
    return "\n".join(lines) + "\n"


def operator_to_triplets(op) -> str:
    """Sparse text dump, one ``row col re im`` line per stored entry."""
    mat = (op.matrix if isinstance(op, AssembledOperator) else sp.csr_matrix(op)).tocoo()
    lines = [f"{r} {c} {fmt_float(v.real)} {fmt_float(v.imag)}"
             for r, c, v in sorted(zip(mat.row, mat.col, mat.data), key=lambda x: (x[0], x[1]))]
    return "\n".join(lines) + ("\n" if lines else "")


def lapse_homotopy_resolvents(fam: TripleFamily, tg: TimeGrid, sign: int = +1,
                              samples: int = 9) -> dict:
    """Resolvents along the straight-line lapse homotopy N(s)^{1/2} = s + (1-s) N^{1/2}.

    Returns the sample points, successive resolvent difference norms, the
    operator difference norms (which dominate them, since the resolvents of
    self-adjoint operators at +-i are contractions), and the reported
    Lipschitz constant C = max diff / ds.
    """
    svals = np.linspace(0.0, 1.0, samples)
    eye_h = sp.identity(fam.hilbert_dim, format="csr")
    resolvents = []
    operators = []
    for s in svals:
        lapse_s = []
        for k in range(fam.num_nodes):
            root = fam.lapse_sqrt(k)
            root_s = (s * eye_h + (1.0 - s) * root).tocsr()
            lapse_s.append((root_s @ root_s).tocsr())
        fam_s = fam.with_lapse(tuple(lapse_s), provenance_suffix=f"homotopy:{s:.3f}")
        op = assemble_riemannian(fam_s, tg, sign=sign)
        a = as_dense(op.matrix)
        operators.append(a)
        resolvents.append(np.linalg.inv(a + 1j * np.eye(a.shape[0])))
    ds = float(svals[1] - svals[0])
    diffs = np.array([opnorm(resolvents[i + 1] - resolvents[i]) for i in range(samples - 1)])
    op_diffs = np.array([opnorm(operators[i + 1] - operators[i]) for i in range(samples - 1)])
    c = float(diffs.max() / ds) if samples > 1 else 0.0
    return {"s": svals, "resolvent_diffs": diffs, "operator_diffs": op_diffs,
            "ds": ds, "lipschitz_constant": c}
