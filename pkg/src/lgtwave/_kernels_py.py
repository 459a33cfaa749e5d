"""Pure-numpy fallback for the compiled kernels (same contracts).

Complex products are expanded into real arithmetic so each elementary
operation rounds once; this keeps results bit-identical to the compiled
kernel (built with -ffp-contract=off) and to scalar Python arithmetic.
"""

import numpy as np

_INDEX_CACHE: dict[int, np.ndarray] = {}


def _indices(dim: int) -> np.ndarray:
    idx = _INDEX_CACHE.get(dim)
    if idx is None:
        idx = np.arange(dim, dtype=np.uint64)
        _INDEX_CACHE[dim] = idx
    return idx


def apply_term(z: int, x: int, coeff: complex, src: np.ndarray, out: np.ndarray) -> None:
    """out[i] += coeff * (-1)^popcount((i^x) & z) * src[i ^ x], for all i."""
    idx = _indices(src.shape[0])
    srcidx = idx ^ np.uint64(x)
    parity = np.bitwise_count(srcidx & np.uint64(z)) & np.uint8(1)
    signs = 1.0 - 2.0 * parity
    gathered = src[srcidx]
    sr = gathered.real
    si = gathered.imag
    cr, ci = coeff.real, coeff.imag
    vr = (cr * sr - ci * si) * signs
    vi = (cr * si + ci * sr) * signs
    out.real += vr
    out.imag += vi


def apply_sum(zs, xs, coeffs, src, out) -> None:
    """Accumulate every term in fixed order (bit-stable reduction)."""
    for z, x, c in zip(zs, xs, coeffs):
        apply_term(int(z), int(x), complex(c), src, out)
