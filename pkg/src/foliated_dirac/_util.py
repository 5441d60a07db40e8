"""Shared numerical helpers: norms, kron plumbing, spectra sorting, probes."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

# Seed used for every randomized norm probe in the package; recorded in reports.
GLOBAL_SEED = 20260810

# Dense linear algebra is used up to this dimension; beyond it we fall back to
# sparse bounds / iterative solvers.
DENSE_LIMIT = 4096


def as_dense(a) -> np.ndarray:
    if sp.issparse(a):
        return a.toarray()
    return np.asarray(a)


def is_sparse(a) -> bool:
    return sp.issparse(a)


# exact dense 2-norms are cheap up to this size; above it opnorm switches to
# the Holder bound sqrt(norm1 * norminf) >= norm2
_EXACT_NORM_LIMIT = 1024


def _holder_bound(a) -> float:
    if sp.issparse(a):
        a = a.tocsr()
        if a.nnz == 0:
            return 0.0
        n1 = float(np.max(np.abs(a).sum(axis=0)))
        ninf = float(np.max(np.abs(a).sum(axis=1)))
        return float(np.sqrt(n1 * ninf))
    a = np.asarray(a)
    return float(np.sqrt(np.linalg.norm(a, 1) * np.linalg.norm(a, np.inf)))


def opnorm(a) -> float:
    """Spectral norm, exact for small matrices and bounded above for large ones.

    The Holder bound used beyond the exact-size limit dominates the 2-norm,
    so residual thresholds checked against this value are conservative.
    """
    if a.shape[0] <= _EXACT_NORM_LIMIT:
        return float(np.linalg.norm(as_dense(a), 2))
    return _holder_bound(a)


def spectral_norm(a) -> float:
    """Accurate largest singular value at any size (iterative when large)."""
    if a.shape[0] <= _EXACT_NORM_LIMIT:
        return float(np.linalg.norm(as_dense(a), 2))
    mat = sp.csr_matrix(a) if not sp.issparse(a) else a.tocsr()
    if mat.nnz == 0:
        return 0.0
    try:
        import scipy.sparse.linalg as spla
        return float(spla.svds(mat, k=1, return_singular_vectors=False, tol=1e-9)[0])
    except Exception:
        return _holder_bound(mat)


def fro_norm(a) -> float:
    """Frobenius norm (unitarily invariant, cheap for sparse matrices)."""
    if sp.issparse(a):
        return float(np.sqrt(np.sum(np.abs(a.data) ** 2))) if a.nnz else 0.0
    return float(np.linalg.norm(np.asarray(a)))


def herm_residual(a) -> float:
    """||A - A^dagger|| in the norm of :func:`opnorm`."""
    return opnorm(a - a.conj().T)


def max_abs(a) -> float:
    if sp.issparse(a):
        return float(np.max(np.abs(a.data))) if a.nnz else 0.0
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def kron_chain(*mats, format: str = "csr"):
    out = mats[0]
    for m in mats[1:]:
        out = sp.kron(out, m, format=format)
    return out


def axis_operator(mat, axis: int, shape: tuple[int, ...]):
    """Lift a 1-axis operator to the full tensor-product grid (C-order)."""
    before = int(np.prod(shape[:axis], dtype=np.int64)) if axis > 0 else 1
    after = int(np.prod(shape[axis + 1:], dtype=np.int64)) if axis + 1 < len(shape) else 1
    out = sp.csr_matrix(mat) if not sp.issparse(mat) else mat.tocsr()
    if before > 1:
        out = sp.kron(sp.identity(before, format="csr"), out, format="csr")
    if after > 1:
        out = sp.kron(out, sp.identity(after, format="csr"), format="csr")
    return out


def sort_by_magnitude(values: np.ndarray) -> np.ndarray:
    """Deterministic eigenvalue order: magnitude first, then sign/real/imag."""
    values = np.asarray(values)
    if np.iscomplexobj(values):
        order = np.lexsort((values.imag, values.real, np.abs(values)))
    else:
        order = np.lexsort((values, np.abs(values)))
    return values[order]


def unit_probes(dim: int, count: int, seed: int = GLOBAL_SEED) -> np.ndarray:
    """Fixed seeded complex unit vectors, one per row."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def matrix_to_reim(a) -> list:
    """Row-major nested lists of [re, im] pairs."""
    a = as_dense(a).astype(np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def matrix_from_reim(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ValueError("expected a nested list of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def fmt_float(x: float) -> str:
    """Shortest round-trip decimal form, for byte-stable CSV/JSON output."""
    return repr(float(x))
