"""Compiled inner loops.

Everything here works on plain float64/int64 arrays so the kernels can be
called from worker threads with the GIL released.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True, inline="always")
def _first_not_below(tops, size, v):
    # lower_bound on tops[:size]; the halving form keeps the loop branch-light
    base = 0
    length = size
    while length > 0:
        half = length >> 1
        if tops[base + half] < v:
            base = base + half + 1
            length = length - half - 1
        else:
            length = half
    return base


@njit(cache=True, nogil=True)
def prefix_lis(values):
    """Length of the longest strictly increasing subsequence of every prefix.

    ``out[i]`` is the LIS length of ``values[:i + 1]`` (patience sorting with
    binary search over pile tops).
    """
    n = values.shape[0]
    tops = np.empty(n, dtype=np.float64)
    out = np.empty(n, dtype=np.int64)
    piles = 0
    for i in range(n):
        v = values[i]
        lo = _first_not_below(tops, piles, v)
        tops[lo] = v
        if lo == piles:
            piles += 1
        out[i] = piles
    return out


@njit(cache=True, nogil=True)
def lis_length(values):
    n = values.shape[0]
    tops = np.empty(n, dtype=np.float64)
    piles = 0
    for i in range(n):
        v = values[i]
        lo = _first_not_below(tops, piles, v)
        tops[lo] = v
        if lo == piles:
            piles += 1
    return piles


@njit(cache=True, nogil=True)
def lis_with_path(values):
    """Patience sorting with back pointers.

    A value landing on pile k links to the current top of pile k-1.  Returns
    the indices of one maximal increasing subsequence, read back from the
    top of the last pile.
    """
    n = values.shape[0]
    tops = np.empty(n, dtype=np.float64)
    top_idx = np.empty(n, dtype=np.int64)
    back = np.full(n, -1, dtype=np.int64)
    piles = 0
    for i in range(n):
        v = values[i]
        lo = _first_not_below(tops, piles, v)
        tops[lo] = v
        top_idx[lo] = i
        if lo > 0:
            back[i] = top_idx[lo - 1]
        if lo == piles:
            piles += 1
    path = np.empty(piles, dtype=np.int64)
    if piles == 0:
        return path
    k = top_idx[piles - 1]
    for j in range(piles - 1, -1, -1):
        path[j] = k
        k = back[k]
    return path


@njit(cache=True, nogil=True)
def lattice_dp_row(weights, x0, t0, x1, t1):
    """Last-passage values from (x0, t0) to every (x, t1), x0 <= x <= x1.

    ``weights[t, x]``; the start cell's weight is excluded and every other
    visited cell counts.  Memory is one row of the rectangle.
    """
    ncols = x1 - x0 + 1
    row = np.empty(ncols, dtype=np.float64)
    # bottom row: only rightward moves
    row[0] = 0.0
    for j in range(1, ncols):
        row[j] = row[j - 1] + weights[t0, x0 + j]
    for t in range(t0 + 1, t1 + 1):
        row[0] = row[0] + weights[t, x0]
        for j in range(1, ncols):
            left = row[j - 1]
            below = row[j]
            best = left if left > below else below
            row[j] = best + weights[t, x0 + j]
    return row


@njit(cache=True, nogil=True)
def hammersley_evolve(positions, bulk_x, bulk_t, right_edge):
    """Run the Hammersley particle dynamics through time-ordered bulk points.

    At each point (x, s) inside the window the leftmost particle strictly to
    the right of x jumps to x; with no such particle a new one is created at
    x.  A jump never changes the order of the particles and a creation always
    happens to the right of every particle, so a sorted buffer with an
    append is enough.
    """
    m = positions.shape[0]
    buf = np.empty(m + bulk_x.shape[0], dtype=np.float64)
    for i in range(m):
        buf[i] = positions[i]
    count = m
    for k in range(bulk_x.shape[0]):
        x = bulk_x[k]
        if x > right_edge:
            continue
        lo = 0
        hi = count
        while lo < hi:
            mid = (lo + hi) >> 1
            if buf[mid] <= x:
                lo = mid + 1
            else:
                hi = mid
        if lo == count:
            buf[count] = x
            count += 1
        else:
            buf[lo] = x
    return buf[:count].copy()
