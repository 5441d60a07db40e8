"""Sampled families of hypersurface Dirac operators with lapse operators.

A :class:`TripleFamily` holds Hermitian matrices D_k and positive lapse
matrices N_k at strictly increasing time nodes, together with multiplication
operators for a few algebra elements, all on one fixed finite-dimensional
Hilbert space.  The axioms of the abstract setting (common domain, uniformly
bounded weak derivative, lapse positivity, lapse/algebra commutation) become
measured constants here: on finite matrices they cannot fail to be finite, so
the meaningful desk-scale content is their size and stability, which
:func:`check_family_axioms` reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from ._util import (GLOBAL_SEED, as_dense, fro_norm, matrix_from_reim, matrix_to_reim,
                    unit_probes)
from .clifford import build_odd_rep
from .lattice import algebra_sample, hypersurface_dirac, lapse_matrix
from .scenario import Scenario

__all__ = ["TripleFamily", "FamilyAxiomReport", "from_scenario", "conjugated_family",
           "check_family_axioms", "family_to_json", "family_from_json"]


def _sqrt_positive(mat) -> sp.csr_matrix:
    """Positive square root; entrywise for diagonal matrices, eigh otherwise."""
    if sp.issparse(mat):
        offdiag = mat - sp.diags(mat.diagonal())
        if offdiag.nnz == 0 or np.max(np.abs(offdiag.data)) == 0.0:
            d = mat.diagonal().real
            if np.any(d <= 0):
                raise ValueError("matrix is not positive definite")
            return sp.diags(np.sqrt(d)).tocsr()
        mat = mat.toarray()
    mat = np.asarray(mat)
    w, v = np.linalg.eigh(mat)
    if np.any(w <= 0):
        raise ValueError("matrix is not positive definite")
    return sp.csr_matrix((v * np.sqrt(w)) @ v.conj().T)


@dataclass(frozen=True)
class TripleFamily:
    """Matrices {D_k}, {N_k} and algebra samples on a fixed Hilbert space."""

    time_nodes: np.ndarray
    dirac: tuple
    lapse: tuple
    algebra: dict = field(default_factory=dict)
    provenance: str = "user"

    def __post_init__(self):
        nodes = np.asarray(self.time_nodes, dtype=float)
        object.__setattr__(self, "time_nodes", nodes)
        if len(self.dirac) != len(nodes) or len(self.lapse) != len(nodes):
            raise ValueError("need one D_k and one N_k per time node")
        if len(nodes) > 1 and np.any(np.diff(nodes) <= 0):
            raise ValueError("time nodes must be strictly increasing")
        dims = {m.shape[0] for m in self.dirac} | {m.shape[0] for m in self.lapse}
        if len(dims) != 1:
            raise ValueError("all family matrices must share one Hilbert space")

    @property
    def num_nodes(self) -> int:
        return len(self.time_nodes)

    @property
    def hilbert_dim(self) -> int:
        return self.dirac[0].shape[0]

    @property
    def lapse_is_identity(self) -> bool:
        return all(
            sp.issparse(N) and (N - sp.identity(N.shape[0])).nnz == 0
            or (not sp.issparse(N)) and np.array_equal(as_dense(N), np.eye(N.shape[0]))
            for N in self.lapse
        )

    def lapse_sqrt(self, k: int) -> sp.csr_matrix:
        return _sqrt_positive(self.lapse[k])

    def with_lapse(self, lapse: tuple, provenance_suffix: str = "relapsed") -> "TripleFamily":
        return TripleFamily(self.time_nodes, self.dirac, tuple(lapse), dict(self.algebra),
                            provenance=f"{self.provenance}:{provenance_suffix}")


def from_scenario(scenario: Scenario, grid=None, rep=None) -> TripleFamily:
    """Assemble the family at the scenario's time nodes from the lattice operators."""
    grid = grid or scenario.spatial_grid()
    rep = rep or build_odd_rep(scenario.n)
    nodes = scenario.time_nodes()
    dirac = tuple(hypersurface_dirac(scenario.metric, grid, rep, t) for t in nodes)
    lapse = tuple(lapse_matrix(scenario.lapse, grid, t) for t in nodes)
    algebra = {expr.text: mat for expr, mat in
               zip(scenario.algebra, algebra_sample(grid, scenario.algebra))}
    return TripleFamily(time_nodes=nodes, dirac=dirac, lapse=lapse, algebra=algebra,
                        provenance=f"lattice:{scenario.name}")


def conjugated_family(fam: TripleFamily) -> TripleFamily:
    """Absorb the lapse: D'_k = N_k^(1/2) D_k N_k^(1/2), N'_k = 1."""
    dim = fam.hilbert_dim
    eye = sp.identity(dim, format="csr")
    dirac = []
    for k in range(fam.num_nodes):
        root = fam.lapse_sqrt(k)
        dirac.append((root @ fam.dirac[k] @ root).tocsr())
    return TripleFamily(fam.time_nodes, tuple(dirac), (eye,) * fam.num_nodes,
                        dict(fam.algebra), provenance=f"{fam.provenance}:conjugated")


@dataclass(frozen=True)
class FamilyAxiomReport:
    """Measured surrogates for the family axioms, plus pass/fail flags."""

    hermiticity: float
    lapse_min_eigenvalue: float
    lapse_condition: float
    lapse_algebra_commutator: float
    derivative_norms: np.ndarray
    flagged_nodes: tuple[int, ...]
    graph_norm_lower: float
    graph_norm_upper: float
    lapse_dirac_commutator: float
    seed: int
    tolerance: float

    @property
    def derivative_bound(self) -> float:
        return float(self.derivative_norms.max()) if self.derivative_norms.size else 0.0

    @property
    def passed(self) -> bool:
        return (
            self.hermiticity <= self.tolerance
            and self.lapse_min_eigenvalue > 0.0
            and self.lapse_algebra_commutator <= 1e-13
            and not self.flagged_nodes
            and np.isfinite(self.derivative_bound)
        )

    def to_json(self) -> dict:
        return {
            "hermiticity": self.hermiticity,
            "lapse_min_eigenvalue": self.lapse_min_eigenvalue,
            "lapse_condition": self.lapse_condition,
            "lapse_algebra_commutator": self.lapse_algebra_commutator,
            "derivative_bound": self.derivative_bound,
            "flagged_nodes": list(self.flagged_nodes),
            "graph_norm_constants": [self.graph_norm_lower, self.graph_norm_upper],
            "lapse_dirac_commutator": self.lapse_dirac_commutator,
            "seed": self.seed,
            "passed": self.passed,
        }


def check_family_axioms(fam: TripleFamily, tol: float = 1e-10, probes=8,
                        seed: int = GLOBAL_SEED, jump_factor: float = 5.0) -> FamilyAxiomReport:
    """Measure the finite-dimensional axiom surrogates.

    Matrix constants are reported in the Frobenius norm so they are exactly
    invariant under unitary conjugation of the whole family.  Graph-norm
    equivalence constants are estimated over fixed seeded unit vectors
    (``probes`` may also be an explicit matrix of row vectors), with
    the first node's graph norm playing the role of the common domain norm.
    Interior nodes whose centered difference norm exceeds ``jump_factor``
    times the median are flagged as discontinuities.
    """
    herm = max(fro_norm(D - D.conj().T) for D in fam.dirac)

    lapse_min = np.inf
    lapse_cond = 1.0
    for N in fam.lapse:
        dense_diag = N.diagonal().real if sp.issparse(N) else np.diag(as_dense(N)).real
        offdiag_free = sp.issparse(N) and (N - sp.diags(N.diagonal())).nnz == 0
        if offdiag_free:
            w = dense_diag
        else:
            w = np.linalg.eigvalsh(as_dense(N))
        lapse_min = min(lapse_min, float(w.min()))
        if w.min() > 0:
            lapse_cond = max(lapse_cond, float(w.max() / w.min()))

    comm = 0.0
    roots = [fam.lapse_sqrt(k) for k in range(fam.num_nodes)]
    for root in roots:
        for mat in fam.algebra.values():
            comm = max(comm, fro_norm(root @ mat - mat @ root))

    if fam.num_nodes >= 3:
        t = fam.time_nodes
        diffs = np.array([
            fro_norm((fam.dirac[k + 1] - fam.dirac[k - 1]) / (t[k + 1] - t[k - 1]))
            for k in range(1, fam.num_nodes - 1)
        ])
    else:
        diffs = np.zeros(0)
    flagged: tuple[int, ...] = ()
    if diffs.size >= 3:
        med = float(np.median(diffs))
        floor = max(med, 1e-12)
        flagged = tuple(int(k + 1) for k in np.nonzero(diffs > jump_factor * floor)[0])

    if isinstance(probes, (int, np.integer)):
        probes_mat = unit_probes(fam.hilbert_dim, int(probes), seed=seed)
    else:
        probes_mat = np.asarray(probes)
    ref = fam.dirac[0]
    ref_norms = np.sqrt(1.0 + np.linalg.norm(as_dense(ref @ probes_mat.T), axis=0) ** 2)
    c_lo, c_hi = np.inf, 0.0
    for D in fam.dirac:
        norms = np.sqrt(1.0 + np.linalg.norm(as_dense(D @ probes_mat.T), axis=0) ** 2)
        ratios = norms / ref_norms
        c_lo = min(c_lo, float(ratios.min()))
        c_hi = max(c_hi, float(ratios.max()))

    lapse_comm = max(
        fro_norm(fam.dirac[k] @ roots[k] - roots[k] @ fam.dirac[k]) for k in range(fam.num_nodes)
    )

    return FamilyAxiomReport(
        hermiticity=float(herm), lapse_min_eigenvalue=float(lapse_min),
        lapse_condition=float(lapse_cond), lapse_algebra_commutator=float(comm),
        derivative_norms=diffs, flagged_nodes=flagged,
        graph_norm_lower=float(c_lo), graph_norm_upper=float(c_hi),
        lapse_dirac_commutator=float(lapse_comm), seed=seed, tolerance=float(tol))


def family_to_json(fam: TripleFamily) -> dict:
    """Dense JSON bundle so user-supplied abstract families can round-trip."""
    return {
        "hilbert_dim": fam.hilbert_dim,
        "time_nodes": [float(t) for t in fam.time_nodes],
        "dirac": [matrix_to_reim(D) for D in fam.dirac],
        "lapse": [matrix_to_reim(N) for N in fam.lapse],
        "algebra": {label: matrix_to_reim(mat) for label, mat in fam.algebra.items()},
        "provenance": fam.provenance,
    }


def family_from_json(source) -> TripleFamily:
    if isinstance(source, (str, Path)):
        source = json.loads(Path(source).read_text())
    dirac = tuple(sp.csr_matrix(matrix_from_reim(m)) for m in source["dirac"])
    lapse = tuple(sp.csr_matrix(matrix_from_reim(m)) for m in source["lapse"])
    algebra = {label: sp.csr_matrix(matrix_from_reim(m))
               for label, m in source.get("algebra", {}).items()}
    return TripleFamily(
        time_nodes=np.asarray(source["time_nodes"], dtype=float),
        dirac=dirac, lapse=lapse, algebra=algebra,
        provenance=str(source.get("provenance", "user")))
