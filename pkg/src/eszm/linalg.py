"""Dense complex linear algebra shared by the rest of the package.

Conventions used everywhere:

* operators are ``numpy.complex128`` matrices in row-major layout;
* a two-site gate is either a matrix of shape ``(d1*d2, d1*d2)`` or a
  4-index tensor with axes ``(out1, out2, in1, in2)``, the two forms being
  related by the plain row-major reshape, so composite indices flatten
  lexicographically as ``(k1, k2) -> k1*d2 + k2``;
* site labels in public signatures are 1-based (matching the usual
  spin-chain numbering); everything internal is 0-based.
"""

from dataclasses import dataclass
from math import prod

import numpy as np

__all__ = [
    "SpectrumResult",
    "kron",
    "tensor4_to_matrix",
    "matrix_to_tensor4",
    "partial_trace",
    "hs_inner",
    "hs_norm",
    "max_abs",
    "proportionality_residual",
    "hermiticity_residual",
    "commutator_residual",
    "eig_general",
    "eig_hermitian",
    "embed_operator",
    "apply_gate_left",
    "permutation_operator",
]

# condition number of the eigenvector matrix beyond which a general
# eigendecomposition is treated as near-defective
_DEFECTIVE_COND = 1e8


def kron(a, b):
    """Kronecker product of two matrices."""
    return np.kron(a, b)


def tensor4_to_matrix(t):
    """Reshape a gate tensor (out1, out2, in1, in2) to its matrix form."""
    d1, d2, d3, d4 = t.shape
    return t.reshape(d1 * d2, d3 * d4)


def matrix_to_tensor4(m, dims):
    """Inverse of :func:`tensor4_to_matrix`; ``dims`` = (out1, out2, in1, in2)."""
    return m.reshape(dims)


def max_abs(a):
    """Max-norm of an array (0.0 for empty input)."""
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def partial_trace(op, site_dims, traced_sites):
    """Trace out the given (1-based) sites of an operator on a product space.

    The result acts on the kept sites, in their original order.  The total
    trace is preserved: ``tr(result) == tr(op)``.
    """
    dims = list(site_dims)
    n = len(dims)
    d_total = prod(dims)
    if op.shape != (d_total, d_total):
        raise ValueError(
            f"operator of shape {op.shape} does not match site dims {dims}"
        )
    traced = sorted(set(traced_sites))
    if traced and (traced[0] < 1 or traced[-1] > n):
        raise ValueError(f"traced sites {traced} out of range 1..{n}")
    t = op.reshape(dims + dims)
    for k, s in enumerate(traced):
        ax = (s - 1) - k
        t = np.trace(t, axis1=ax, axis2=ax + (n - k))
    d_kept = prod(d for i, d in enumerate(dims) if (i + 1) not in traced)
    return t.reshape(d_kept, d_kept)


def hs_inner(a, b, L, N):
    """Hilbert-Schmidt inner product N^{-L} tr(a^dag b) on N^L x N^L operators."""
    d = N**L
    if a.shape != (d, d) or b.shape != (d, d):
        raise ValueError(f"operands must be {d}x{d} for L={L}, N={N}")
    return complex(np.vdot(a, b)) / d


def hs_norm(a, L, N):
    """Hilbert-Schmidt norm induced by :func:`hs_inner`."""
    return float(np.sqrt(hs_inner(a, a, L, N).real))


def proportionality_residual(a, b):
    """How far ``a`` is from a scalar multiple of ``b``.

    Uses the least-squares coefficient c = tr(b^dag a)/tr(b^dag b) and
    reports ||a - c b|| / ||a|| in the max-norm (scale-free, deterministic).
    """
    na = max_abs(a)
    if na == 0.0:
        return 0.0
    c = np.vdot(b, a) / np.vdot(b, b)
    return max_abs(a - c * b) / na


def hermiticity_residual(a):
    """||a - a^dag|| / ||a|| in the max-norm."""
    na = max_abs(a)
    if na == 0.0:
        return 0.0
    return max_abs(a - a.conj().T) / na


def commutator_residual(a, b):
    """||[a, b]|| / (||a|| ||b||) in the max-norm."""
    return max_abs(a @ b - b @ a) / (max_abs(a) * max_abs(b))


@dataclass(frozen=True)
class SpectrumResult:
    """Eigendecomposition sorted by descending eigenvalue modulus.

    ``eigenvectors[:, k]`` belongs to ``eigenvalues[k]``, has unit 2-norm and
    its first nonzero component made real-positive.  ``near_defective`` is
    set when the eigenvector matrix is so ill-conditioned that spectral
    functions of the matrix should not be trusted.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    near_defective: bool


def _normalize_columns(v):
    v = v / np.linalg.norm(v, axis=0, keepdims=True)
    for k in range(v.shape[1]):
        col = v[:, k]
        idx = np.argmax(np.abs(col) > 1e-12 * np.max(np.abs(col)))
        phase = col[idx] / abs(col[idx])
        v[:, k] = col / phase
    return v


def eig_general(a):
    """Full eigendecomposition of a general square matrix."""
    w, v = np.linalg.eig(np.asarray(a, dtype=complex))
    order = np.argsort(-np.abs(w), kind="stable")
    w, v = w[order], v[:, order]
    v = _normalize_columns(v)
    near_defective = not np.isfinite(np.linalg.cond(v)) or np.linalg.cond(v) > _DEFECTIVE_COND
    return SpectrumResult(w, v, bool(near_defective))


def eig_hermitian(h):
    """Eigendecomposition of a Hermitian matrix; rejects non-Hermitian input."""
    res = hermiticity_residual(h)
    if res > 1e-10:
        raise ValueError(f"matrix is not Hermitian (residual {res:.2e})")
    w, v = np.linalg.eigh(np.asarray(h, dtype=complex))
    order = np.argsort(-np.abs(w), kind="stable")
    w, v = w[order].astype(complex), v[:, order]
    v = _normalize_columns(v)
    return SpectrumResult(w, v, False)


def permutation_operator(d):
    """Swap operator P on C^d (x) C^d, P (x⊗y) = y⊗x."""
    p = np.zeros((d, d, d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            p[j, i, i, j] = 1.0
    return tensor4_to_matrix(p)


def embed_operator(op, site_dims, sites):
    """Embed ``op`` acting on the given (ordered, 1-based) sites into the
    full product space, identity elsewhere."""
    dims = list(site_dims)
    n = len(dims)
    sites0 = [s - 1 for s in sites]
    rest0 = [k for k in range(n) if k not in sites0]
    d_rest = prod(dims[k] for k in rest0) if rest0 else 1
    full = np.kron(op, np.eye(d_rest, dtype=complex))
    # kron ordering is (sites..., rest...); permute back to natural order
    shape = [dims[k] for k in sites0 + rest0]
    t = full.reshape(shape + shape)
    inv = np.argsort(sites0 + rest0)
    t = t.transpose(list(inv) + [n + k for k in inv])
    d = prod(dims)
    return t.reshape(d, d)


def apply_gate_left(gate4, mat, site_dims, site_a, site_b):
    """Compute embed(gate) @ mat without materializing the embedded gate.

    ``gate4`` is a 4-index tensor acting on (1-based) sites ``site_a`` and
    ``site_b`` of the row space of ``mat``.
    """
    dims = list(site_dims)
    a0, b0 = site_a - 1, site_b - 1
    da, db = dims[a0], dims[b0]
    ncols = mat.shape[1]
    t = mat.reshape(dims + [ncols])
    t = np.moveaxis(t, (a0, b0), (0, 1))
    rest_shape = t.shape[2:]
    t = tensor4_to_matrix(gate4) @ t.reshape(da * db, -1)
    t = np.moveaxis(t.reshape((da, db) + rest_shape), (0, 1), (a0, b0))
    return t.reshape(mat.shape[0], ncols)
