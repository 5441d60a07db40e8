"""Complex Clifford algebra representations in both signatures.

Generators satisfy  g_j g_l + g_l g_j = -2 delta_jl eps_j  with eps_j = +1 on
spatial directions; the distinguished normal direction e0 of an
even-dimensional algebra carries eps_0 = +1 (Riemannian) or -1 (Lorentzian).
Spatial generators are anti-Hermitian and square to -I; the e0 generator is
anti-Hermitian with square -I for eps_0 = +1 and Hermitian with square +I for
eps_0 = -1.

Construction is fully deterministic.  The odd chain starts from the 1x1 base
generator -i and alternates two steps: doubling to the even algebra

    g(w)  -> [[0, i g(w)], [-i g(w), 0]],      g(e0) = [[0, i tau0 eps0], [i tau0 eps0, 0]],

and extending back to an odd algebra two dimensions up by keeping the
block-diagonal spatial images tau0 g(e0) g(w) = diag(g(w), -g(w)) together
with g(e0) and the chirality-twisted normal i*Gamma*g(e0).  Even algebras
carry the grading Gamma = diag(I, -I), which anticommutes with every
generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._util import matrix_to_reim, opnorm

__all__ = [
    "Signature",
    "RIEMANNIAN",
    "LORENTZIAN",
    "CliffordRep",
    "RelationReport",
    "build_odd_rep",
    "build_even_rep",
    "tilde_rep",
    "check_relations",
]


@dataclass(frozen=True)
class Signature:
    """Riemannian (eps0 = +1, tau0 = 1) or Lorentzian (eps0 = -1, tau0 = i)."""

    kind: str

    def __post_init__(self):
        if self.kind not in ("riemannian", "lorentzian"):
            raise ValueError(f"unknown signature kind {self.kind!r}")

    @property
    def epsilon0(self) -> int:
        return 1 if self.kind == "riemannian" else -1

    @property
    def tau0(self) -> complex:
        return 1.0 + 0.0j if self.kind == "riemannian" else 1.0j

    @classmethod
    def parse(cls, text: str) -> "Signature":
        return cls(str(text).strip().lower())

    def __str__(self) -> str:
        return self.kind


RIEMANNIAN = Signature("riemannian")
LORENTZIAN = Signature("lorentzian")


@dataclass(frozen=True)
class CliffordRep:
    """A tuple of generator matrices with their squares' signs.

    For even ambient_dim the generators are ordered (e0, e1, ..., e_{k-1})
    and a grading matrix is present; for odd ambient_dim they are
    (e1, ..., ek) and all spatial.  ``irreducible`` is False for the
    block-diagonal spatial representation living on the doubled spinor space.
    """

    ambient_dim: int
    signature: Signature
    generators: tuple = field(repr=False)
    grading: np.ndarray | None = field(default=None, repr=False)
    irreducible: bool = True

    def __post_init__(self):
        gens = tuple(np.asarray(g, dtype=np.complex128) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        if len(gens) != self.ambient_dim:
            raise ValueError("generator count does not match ambient dimension")
        if self.is_even and self.grading is None:
            raise ValueError("even-dimensional representation requires a grading")
        if not self.is_even and self.grading is not None:
            raise ValueError("odd-dimensional representation carries no grading")

    @property
    def is_even(self) -> bool:
        return self.ambient_dim % 2 == 0

    @property
    def spinor_dim(self) -> int:
        return self.generators[0].shape[0]

    @property
    def epsilons(self) -> tuple[int, ...]:
        """Sign of -g_j^2 per generator, in storage order."""
        if self.is_even:
            return (self.signature.epsilon0,) + (1,) * (self.ambient_dim - 1)
        return (1,) * self.ambient_dim

    @property
    def index_offset(self) -> int:
        """Basis label of the first stored generator (0 if even, 1 if odd)."""
        return 0 if self.is_even else 1

    def generator(self, j: int) -> np.ndarray:
        """Generator for basis vector e_j (j = 0 only in the even case)."""
        return self.generators[j - self.index_offset]

    def to_json(self) -> dict:
        out = {
            "ambient_dim": self.ambient_dim,
            "signature": str(self.signature),
            "spinor_dim": self.spinor_dim,
            "generators": [matrix_to_reim(g) for g in self.generators],
        }
        if self.grading is not None:
            out["grading"] = matrix_to_reim(self.grading)
        return out


def build_odd_rep(n: int) -> CliffordRep:
    """Irreducible representation with n all-spatial generators on C^{2^((n-1)/2)}."""
    if not isinstance(n, (int, np.integer)) or n < 1 or n % 2 == 0:
        raise ValueError(f"odd positive dimension required, got {n!r}")
    gens = [np.array([[-1j]], dtype=np.complex128)]
    m = 1
    while m < n:
        even = build_even_rep(CliffordRep(m, RIEMANNIAN, tuple(gens)), RIEMANNIAN)
        e0 = even.generators[0]
        spatial = tilde_rep(even).generators
        gens = list(spatial) + [e0, 1j * even.grading @ e0]
        m += 2
    return CliffordRep(n, RIEMANNIAN, tuple(gens))


def build_even_rep(rep_odd: CliffordRep, signature: Signature) -> CliffordRep:
    """Double an odd representation to ambient dimension n+1 with generator e0.

    Block structure (per doubled spinor space, upper/lower = grading +/-):
    spatial generators are off-diagonal +-i g(w), the normal generator is
    off-diagonal i*tau0*eps0, and the grading is diag(I, -I).
    """
    if rep_odd.is_even:
        raise ValueError("input representation must have odd ambient dimension")
    d = rep_odd.spinor_dim
    zero = np.zeros((d, d), dtype=np.complex128)
    eye = np.eye(d, dtype=np.complex128)
    phase = 1j * signature.tau0 * signature.epsilon0
    e0 = np.block([[zero, phase * eye], [phase * eye, zero]])
    gens = [e0]
    for g in rep_odd.generators:
        gens.append(np.block([[zero, 1j * g], [-1j * g, zero]]))
    grading = np.block([[eye, zero], [zero, -eye]])
    return CliffordRep(rep_odd.ambient_dim + 1, signature, tuple(gens), grading=grading)


def tilde_rep(rep_even: CliffordRep) -> CliffordRep:
    """Spatial algebra represented on the doubled spinor space.

    Returns the n generators tau0 * g(e0) g(e_j) = diag(g(e_j), -g(e_j)); the
    result is reducible (block-diagonal) and carries no grading.
    """
    if not rep_even.is_even:
        raise ValueError("input must be an even-dimensional representation with an e0 generator")
    tau0 = rep_even.signature.tau0
    e0 = rep_even.generators[0]
    gens = tuple(tau0 * e0 @ g for g in rep_even.generators[1:])
    return CliffordRep(rep_even.ambient_dim - 1, rep_even.signature, gens, irreducible=False)


@dataclass(frozen=True)
class RelationReport:
    """Residuals of the anticommutation relations and symmetry properties."""

    relation_residuals: np.ndarray
    hermiticity_residuals: np.ndarray
    unitarity_residuals: np.ndarray
    grading_residual: float
    tolerance: float

    @property
    def max_residual(self) -> float:
        return float(max(
            self.relation_residuals.max(),
            self.hermiticity_residuals.max(),
            self.unitarity_residuals.max(),
            self.grading_residual,
        ))

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance


def check_relations(rep: CliffordRep, tol: float = 1e-12) -> RelationReport:
    """Measure ||g_j g_l + g_l g_j + 2 delta_jl eps_j I|| plus symmetry checks."""
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    k = rep.ambient_dim
    d = rep.spinor_dim
    eye = np.eye(d)
    eps = rep.epsilons
    relation = np.zeros((k, k))
    for j in range(k):
        for l in range(j, k):
            anti = rep.generators[j] @ rep.generators[l] + rep.generators[l] @ rep.generators[j]
            if j == l:
                anti = anti + 2.0 * eps[j] * eye
            relation[j, l] = relation[l, j] = opnorm(anti)
    herm = np.zeros(k)
    for j in range(k):
        sign = -1.0 if eps[j] == 1 else 1.0  # anti-Hermitian iff square is -I
        herm[j] = opnorm(rep.generators[j] - sign * rep.generators[j].conj().T)
    unit = np.array([opnorm(g.conj().T @ g - eye) for g in rep.generators])
    grading = 0.0
    if rep.grading is not None:
        g = rep.grading
        grading = max(
            opnorm(g @ g - eye),
            opnorm(g - g.conj().T),
            max(opnorm(g @ gen + gen @ g) for gen in rep.generators),
        )
    return RelationReport(relation, herm, unit, float(grading), float(tol))
