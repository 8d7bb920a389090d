"""Dense matrix exponential by Pade scaling-and-squaring, batched over leading axes.

The grid sweeps spend nearly all their time exponentiating stacks of small
(4x4 or 3x3) matrices, so the kernel is written against (..., n, n) arrays
with every operation batched; one squaring exponent is shared across the
batch (taken from the largest 1-norm), which only ever over-scales.
"""

from __future__ import annotations

import numpy as np

# Degree-13 Pade numerator coefficients and its validity radius.
_PADE13 = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)
_THETA13 = 5.371920351148152
_NORM_LIMIT = 700.0  # exp overflows double precision well before this 1-norm


def expm_batch(a: np.ndarray) -> np.ndarray:
    """exp(a) for a stack of square matrices of shape (..., n, n)."""
    a = np.asarray(a)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError("expm_batch expects (..., n, n)")
    if not np.isfinite(a).all():
        raise OverflowError("matrix exponential of non-finite input")
    n = a.shape[-1]
    norms = np.abs(a).sum(axis=-2).max(axis=-1)
    nmax = float(norms.max()) if norms.size else 0.0
    if nmax > _NORM_LIMIT:
        raise OverflowError(f"matrix 1-norm {nmax:.3g} too large for a dense exponential")
    if nmax == 0.0:
        return np.broadcast_to(np.eye(n, dtype=a.dtype), a.shape).copy()
    s = int(np.ceil(np.log2(nmax / _THETA13))) if nmax > _THETA13 else 0
    if s > 0:
        a = a * (2.0 ** -s)
    b = _PADE13
    ident = np.broadcast_to(np.eye(n, dtype=a.dtype), a.shape)
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a2 @ a4
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    r = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        r = r @ r
    return r


def matrix_exponential(m: np.ndarray, scale: float = 1.0) -> np.ndarray:
    """exp(scale * m) for one square matrix."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix_exponential expects a square matrix")
    if not np.isfinite(scale):
        raise OverflowError("non-finite scale")
    return expm_batch(scale * m)


def ordered_product(stack: np.ndarray) -> np.ndarray:
    """stack[-1] @ ... @ stack[1] @ stack[0] by pairwise tree reduction.

    Matrix multiplication is associative, so reducing adjacent ordered pairs
    reproduces the time-ordered product in log depth.
    """
    m = np.asarray(stack)
    if m.ndim < 3:
        raise ValueError("ordered_product expects (k, ..., n, n)")
    while m.shape[0] > 1:
        k = m.shape[0] // 2
        prod = m[1 : 2 * k : 2] @ m[0 : 2 * k : 2]
        if m.shape[0] % 2:
            prod = np.concatenate([prod, m[-1:]], axis=0)
        m = prod
    return m[0]
