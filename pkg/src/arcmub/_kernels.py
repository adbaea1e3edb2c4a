"""Hot search kernels: exhaustive arc-extension census over a plane.

The census walks the full arc tree (each arc visited once, in lexicographic
order) keeping an incrementally updated forbidden-point bitmask: a point is
extendable only if it lies on no secant of the current arc.  Two
interchangeable backends implement the same contract:

  * a numba @njit kernel on uint64 bitmask words (the default), and
  * a pure-Python fallback on arbitrary-width int bitmasks.

Selection: env ARCMUB_NUMBA=0 forces the fallback, ARCMUB_NUMBA=1 demands
numba (ImportError surfaces), unset picks numba when importable.  Both
backends return byte-identical results; the benchmark in benchmarks/
compares their throughput and the test suite checks their agreement.
"""

from __future__ import annotations

import os

import numpy as np

_FORCED = os.environ.get("ARCMUB_NUMBA", "").strip().lower()


def numba_available() -> bool:
    if _FORCED in {"0", "false", "off", "no"}:
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        if _FORCED in {"1", "true", "on", "yes"}:
            raise
        return False
    return True


def backend_name() -> str:
    return "numba" if numba_available() else "python"


# -- pure-Python backend ------------------------------------------------------------


def census_chunk_python(
    pairs_i: np.ndarray,
    pairs_j: np.ndarray,
    line_through: np.ndarray,
    line_masks: list[int],
    n_points: int,
    max_k: int,
    size_a: int,
    size_b: int,
):
    """Walk the arc subtrees rooted at the given 2-arcs (pure Python ints as masks).

    Returns (arc_counts, complete_counts, arcs_of_size_a, arcs_of_size_b); the
    collected arcs appear in lexicographic order.
    """
    arc_counts = np.zeros(max_k + 1, dtype=np.int64)
    complete_counts = np.zeros(max_k + 1, dtype=np.int64)
    out_a: list[tuple[int, ...]] = []
    out_b: list[tuple[int, ...]] = []
    full = (1 << n_points) - 1
    lt = line_through
    arc = [0] * max_k
    forb = [0] * (max_k + 1)
    ptrs = [0] * (max_k + 1)
    for i, j in zip(pairs_i.tolist(), pairs_j.tolist()):
        arc[0], arc[1] = i, j
        forb[2] = line_masks[int(lt[i, j])]
        ptrs[2] = j + 1
        t = 2
        while t >= 2:
            free_mask = (~forb[t]) & (full >> ptrs[t] << ptrs[t]) if ptrs[t] < n_points else 0
            if free_mask == 0:
                t -= 1
                continue
            lsb = free_mask & -free_mask
            p = lsb.bit_length() - 1
            ptrs[t] = p + 1
            arc[t] = p
            acc = forb[t]
            for u in range(t):
                acc |= line_masks[int(lt[arc[u], p])]
            k = t + 1
            forb[k] = acc
            arc_counts[k] += 1
            if acc == full:
                complete_counts[k] += 1
            if k == size_a:
                out_a.append(tuple(arc[:k]))
            elif k == size_b:
                out_b.append(tuple(arc[:k]))
            if acc != full and k < max_k:
                ptrs[k] = p + 1
                t = k
    arr_a = np.array(out_a, dtype=np.int32) if out_a else np.zeros((0, size_a), dtype=np.int32)
    arr_b = np.array(out_b, dtype=np.int32) if out_b else np.zeros((0, size_b), dtype=np.int32)
    return arc_counts, complete_counts, arr_a, arr_b


# -- numba backend ------------------------------------------------------------------

_NUMBA_KERNEL = None


def _get_numba_kernel():
    global _NUMBA_KERNEL
    if _NUMBA_KERNEL is not None:
        return _NUMBA_KERNEL
    from numba import njit, uint64

    @njit(nogil=True, cache=True)
    def _popcount(x):
        x = x - ((x >> uint64(1)) & uint64(0x5555555555555555))
        x = (x & uint64(0x3333333333333333)) + ((x >> uint64(2)) & uint64(0x3333333333333333))
        x = (x + (x >> uint64(4))) & uint64(0x0F0F0F0F0F0F0F0F)
        return (x * uint64(0x0101010101010101)) >> uint64(56)

    @njit(nogil=True, cache=True)
    def _census(pairs_i, pairs_j, line_through, mask_words, n_points, max_k, size_a, size_b):
        W = mask_words.shape[1]
        arc_counts = np.zeros(max_k + 1, dtype=np.int64)
        complete_counts = np.zeros(max_k + 1, dtype=np.int64)
        cap_a, cap_b = 1024, 1024
        out_a = np.empty((cap_a, size_a), dtype=np.int32)
        out_b = np.empty((cap_b, size_b), dtype=np.int32)
        n_a, n_b = 0, 0
        arc = np.zeros(max_k, dtype=np.int32)
        forb = np.zeros((max_k + 1, W), dtype=np.uint64)
        ptrs = np.zeros(max_k + 1, dtype=np.int64)
        lids = np.zeros(max_k, dtype=np.int64)
        for pair_idx in range(pairs_i.shape[0]):
            i = pairs_i[pair_idx]
            j = pairs_j[pair_idx]
            arc[0], arc[1] = i, j
            lid0 = line_through[i, j]
            for w in range(W):
                forb[2, w] = mask_words[lid0, w]
            ptrs[2] = j + 1
            t = 2
            while t >= 2:
                p = -1
                pp = ptrs[t]
                while pp < n_points:
                    if (forb[t, pp >> 6] >> uint64(pp & 63)) & uint64(1) == uint64(0):
                        p = pp
                        break
                    pp += 1
                if p < 0:
                    t -= 1
                    continue
                ptrs[t] = p + 1
                arc[t] = p
                for u in range(t):
                    lids[u] = line_through[arc[u], p]
                nset = 0
                for w in range(W):
                    acc = forb[t, w]
                    for u in range(t):
                        acc |= mask_words[lids[u], w]
                    forb[t + 1, w] = acc
                    nset += _popcount(acc)
                free = n_points - nset
                k = t + 1
                arc_counts[k] += 1
                if free == 0:
                    complete_counts[k] += 1
                if k == size_a:
                    if n_a == cap_a:
                        bigger = np.empty((cap_a * 2, size_a), dtype=np.int32)
                        bigger[:cap_a] = out_a
                        out_a = bigger
                        cap_a *= 2
                    for u in range(size_a):
                        out_a[n_a, u] = arc[u]
                    n_a += 1
                elif k == size_b:
                    if n_b == cap_b:
                        bigger = np.empty((cap_b * 2, size_b), dtype=np.int32)
                        bigger[:cap_b] = out_b
                        out_b = bigger
                        cap_b *= 2
                    for u in range(size_b):
                        out_b[n_b, u] = arc[u]
                    n_b += 1
                if free > 0 and k < max_k:
                    ptrs[k] = p + 1
                    t = k
        return arc_counts, complete_counts, out_a[:n_a].copy(), out_b[:n_b].copy()

    _NUMBA_KERNEL = _census
    return _census


def mask_words(line_masks: list[int], n_points: int) -> np.ndarray:
    """Pack per-line Python-int bitmasks into uint64 words for the numba kernel."""
    W = (n_points + 63) // 64
    out = np.zeros((len(line_masks), W), dtype=np.uint64)
    for lid, m in enumerate(line_masks):
        for w in range(W):
            out[lid, w] = (m >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    return out


def census_chunk(
    pairs_i: np.ndarray,
    pairs_j: np.ndarray,
    line_through: np.ndarray,
    line_masks: list[int],
    words: np.ndarray | None,
    n_points: int,
    max_k: int,
    size_a: int,
    size_b: int,
    use_numba: bool,
):
    if use_numba:
        kernel = _get_numba_kernel()
        assert words is not None
        return kernel(
            pairs_i.astype(np.int32),
            pairs_j.astype(np.int32),
            line_through,
            words,
            n_points,
            max_k,
            size_a,
            size_b,
        )
    return census_chunk_python(
        pairs_i, pairs_j, line_through, line_masks, n_points, max_k, size_a, size_b
    )
