"""Compiled inner loops: diagram histograms, canonical edge masks, embedding counts."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def diagram_histogram(n, r, core_a, core_b, end_a, end_k, m, connected_only):
    """Histogram ``h[|rho|, e(rho_G)]`` over non-flat partitions of [n] x [r].

    ``core_a/core_b`` are 0-based core edge columns with ``core_b < core_a``
    (so the partner is already assigned when ``core_a`` is placed);
    ``end_a/end_k`` pair a 0-based core column with a 0-based endpoint.
    Cells are visited in row-major order with restricted-growth labels and a
    label is never reused inside a row, so every leaf is non-flat.  When
    ``connected_only`` is set, leaves whose blocks do not link all rows are
    skipped.
    """
    total = n * r
    e_core = core_a.shape[0]
    e_end = end_a.shape[0]
    hist = np.zeros((total + 1, n * (e_core + e_end) + 1), dtype=np.int64)
    labels = np.full(total, -1, dtype=np.int64)
    nbb = np.zeros(total + 1, dtype=np.int64)
    nxt = np.zeros(total + 1, dtype=np.int64)
    first_row = np.zeros(total, dtype=np.int64)
    row_used = np.zeros(n, dtype=np.int64)
    mult = np.zeros((total, total), dtype=np.int64)
    pmult = np.zeros((total, max(m, 1)), dtype=np.int64)
    parent = np.zeros(n, dtype=np.int64)
    ecount = 0

    k = 0
    while k >= 0:
        if k == total:
            ok = True
            if connected_only:
                for i in range(n):
                    parent[i] = i
                for c in range(r, total):
                    row = c // r
                    fr = first_row[labels[c]]
                    if fr != row:
                        x = row
                        while parent[x] != x:
                            x = parent[x]
                        y = fr
                        while parent[y] != y:
                            y = parent[y]
                        if x != y:
                            parent[x] = y
                root = 0
                while parent[root] != root:
                    root = parent[root]
                for i in range(1, n):
                    x = i
                    while parent[x] != x:
                        x = parent[x]
                    if x != root:
                        ok = False
                        break
            if ok:
                hist[nbb[total], ecount] += 1
            k -= 1
        else:
            row = k // r
            col = k - row * r
            lab = nxt[k]
            limit = nbb[k]
            while lab <= limit and (row_used[row] >> lab) & 1:
                lab += 1
            if lab > limit:
                k -= 1
            else:
                nxt[k] = lab + 1
                labels[k] = lab
                row_used[row] |= 1 << lab
                for t in range(e_core):
                    if core_a[t] == col:
                        w = labels[row * r + core_b[t]]
                        u = lab
                        if u > w:
                            u, w = w, u
                        mult[u, w] += 1
                        if mult[u, w] == 1:
                            ecount += 1
                for t in range(e_end):
                    if end_a[t] == col:
                        pmult[lab, end_k[t]] += 1
                        if pmult[lab, end_k[t]] == 1:
                            ecount += 1
                if lab == limit:
                    first_row[lab] = row
                    nbb[k + 1] = limit + 1
                else:
                    nbb[k + 1] = limit
                k += 1
                nxt[k] = 0
                continue
        # undo the assignment of cell k (we are backtracking into it)
        if k >= 0:
            row = k // r
            col = k - row * r
            lab = labels[k]
            row_used[row] &= ~(1 << lab)
            for t in range(e_core):
                if core_a[t] == col:
                    w = labels[row * r + core_b[t]]
                    u = lab
                    if u > w:
                        u, w = w, u
                    mult[u, w] -= 1
                    if mult[u, w] == 0:
                        ecount -= 1
            for t in range(e_end):
                if end_a[t] == col:
                    pmult[lab, end_k[t]] -= 1
                    if pmult[lab, end_k[t]] == 0:
                        ecount -= 1
            labels[k] = -1
    return hist


@njit(cache=True, nogil=True)
def min_edge_mask(ea, eb, perms):
    """Smallest edge bitmask over all relabelings ``perms[p, old] = new``.

    Pair ``(i, j)`` with ``i < j`` maps to bit ``j*(j-1)/2 + i``.
    """
    best = np.int64(-1)
    for p in range(perms.shape[0]):
        mask = np.int64(0)
        for t in range(ea.shape[0]):
            i = perms[p, ea[t]]
            j = perms[p, eb[t]]
            if i > j:
                i, j = j, i
            mask |= np.int64(1) << (j * (j - 1) // 2 + i)
        if best < 0 or mask < best:
            best = mask
    return best


@njit(cache=True, nogil=True)
def _lower_bound(indices, a, b, value):
    """First position in the sorted slice indices[a:b] holding an entry >= value."""
    while a < b:
        mid = (a + b) // 2
        if indices[mid] < value:
            a = mid + 1
        else:
            b = mid
    return a


@njit(cache=True, nogil=True)
def count_embeddings(indptr, indices, npts, order, back_ptr, back_idx, end_ptr, end_idx, end_adj,
                     lt_ptr, lt_idx, gt_ptr, gt_idx):
    """Ordered injective embeddings of a template core into a sampled graph.

    ``order`` lists core vertices in placement order (each after position 0
    adjacent to an earlier one).  For placement step ``s``,
    ``back_idx[back_ptr[s]:back_ptr[s+1]]`` are earlier steps that must be
    adjacent, and ``end_idx[end_ptr[s]:end_ptr[s+1]]`` are endpoints that
    must be adjacent (``end_adj[point, endpoint]``).  Optional symmetry
    breaking: the point at step ``s`` must exceed the points at steps
    ``lt_idx[lt_ptr[s]:lt_ptr[s+1]]`` and be below those at
    ``gt_idx[gt_ptr[s]:gt_ptr[s+1]]``.  CSR rows must be sorted.
    """
    r = order.shape[0]
    placed = np.full(r, -1, dtype=np.int64)
    used = np.zeros(npts, dtype=np.bool_)
    cursor = np.zeros(r, dtype=np.int64)
    lo_at = np.zeros(r, dtype=np.int64)
    hi_at = np.zeros(r, dtype=np.int64)
    total = np.int64(0)
    if r == 0 or npts < r:
        return total

    # Steps checked as a non-anchor back-edge get their neighbourhood stamped
    # into a row of ``mark`` so adjacency tests are O(1).
    needs_mark = np.zeros(r, dtype=np.bool_)
    for s in range(r):
        for t in range(back_ptr[s] + 1, back_ptr[s + 1]):
            needs_mark[back_idx[t]] = True
    mark = np.zeros((r, npts), dtype=np.int64)
    stamp = np.zeros(r, dtype=np.int64)
    clock = np.int64(0)

    s = 0
    lo_at[0] = 0
    hi_at[0] = npts
    while s >= 0:
        lo = lo_at[s]
        hi = hi_at[s]
        found = -1
        c = cursor[s]
        while lo + c < hi:
            cand = (lo + c) if s == 0 else indices[lo + c]
            c += 1
            if used[cand]:
                continue
            good = True
            for t in range(end_ptr[s], end_ptr[s + 1]):
                if not end_adj[cand, end_idx[t]]:
                    good = False
                    break
            if not good:
                continue
            for t in range(back_ptr[s] + 1, back_ptr[s + 1]):
                step = back_idx[t]
                if mark[step, cand] != stamp[step]:
                    good = False
                    break
            if good:
                found = cand
                break
        cursor[s] = c
        if found < 0:
            s -= 1
            if s >= 0:
                used[placed[s]] = False
                placed[s] = -1
            continue
        if s == r - 1:
            total += 1
            continue
        placed[s] = found
        used[found] = True
        if needs_mark[s]:
            clock += 1
            stamp[s] = clock
            for k in range(indptr[found], indptr[found + 1]):
                mark[s, indices[k]] = clock
        s += 1
        cursor[s] = 0
        # candidates: the sorted row of the anchor, clipped to the order window
        anchor = placed[back_idx[back_ptr[s]]]
        above = np.int64(-1)
        for t in range(lt_ptr[s], lt_ptr[s + 1]):
            above = max(above, placed[lt_idx[t]])
        below = np.int64(npts)
        for t in range(gt_ptr[s], gt_ptr[s + 1]):
            below = min(below, placed[gt_idx[t]])
        a = indptr[anchor]
        b = indptr[anchor + 1]
        lo_at[s] = _lower_bound(indices, a, b, above + 1)
        hi_at[s] = _lower_bound(indices, lo_at[s], b, below)
    return total

    # Steps checked as a non-anchor back-edge get their neighbourhood stamped
    # into a row of ``mark`` so adjacency tests are O(1).
    needs_mark = np.zeros(r, dtype=np.bool_)
    for s in range(r):
        for t in range(back_ptr[s] + 1, back_ptr[s + 1]):
            needs_mark[back_idx[t]] = True
    mark = np.zeros((r, npts), dtype=np.int64)
    stamp = np.zeros(r, dtype=np.int64)
    clock = np.int64(0)

    s = 0
    cursor[0] = 0
    while s >= 0:
        # candidate source: all points at step 0, else neighbours of the first back-edge
        if s == 0:
            lo = 0
            hi = npts
        else:
            anchor = placed[back_idx[back_ptr[s]]]
            lo = indptr[anchor]
            hi = indptr[anchor + 1]
        found = -1
        c = cursor[s]
        while lo + c < hi:
            cand = (lo + c) if s == 0 else indices[lo + c]
            c += 1
            if used[cand]:
                continue
            good = True
            for t in range(end_ptr[s], end_ptr[s + 1]):
                if not end_adj[cand, end_idx[t]]:
                    good = False
                    break
            if not good:
                continue
            for t in range(back_ptr[s] + 1, back_ptr[s + 1]):
                step = back_idx[t]
                if mark[step, cand] != stamp[step]:
                    good = False
                    break
            if good:
                found = cand
                break
        cursor[s] = c
        if found < 0:
            s -= 1
            if s >= 0:
                used[placed[s]] = False
                placed[s] = -1
            continue
        if s == r - 1:
            total += 1
            continue
        placed[s] = found
        used[found] = True
        if needs_mark[s]:
            clock += 1
            stamp[s] = clock
            for k in range(indptr[found], indptr[found + 1]):
                mark[s, indices[k]] = clock
        s += 1
        cursor[s] = 0
    return total

    s = 0
    cursor[0] = 0
    while s >= 0:
        # candidate source: all points at step 0, else neighbours of the first back-edge
        if s == 0:
            lo = 0
            hi = npts
        else:
            anchor = placed[back_idx[back_ptr[s]]]
            lo = indptr[anchor]
            hi = indptr[anchor + 1]
        found = -1
        c = cursor[s]
        while lo + c < hi:
            cand = (lo + c) if s == 0 else indices[lo + c]
            c += 1
            if used[cand]:
                continue
            good = True
            for t in range(end_ptr[s], end_ptr[s + 1]):
                if not end_adj[cand, end_idx[t]]:
                    good = False
                    break
            if not good:
                continue
            for t in range(back_ptr[s] + 1, back_ptr[s + 1]):
                other = placed[back_idx[t]]
                # binary search in the sorted CSR row of cand
                a = indptr[cand]
                b = indptr[cand + 1]
                while a < b:
                    mid = (a + b) // 2
                    if indices[mid] < other:
                        a = mid + 1
                    else:
                        b = mid
                if a == indptr[cand + 1] or indices[a] != other:
                    good = False
                    break
            if good:
                found = cand
                break
        cursor[s] = c
        if found < 0:
            s -= 1
            if s >= 0:
                used[placed[s]] = False
                placed[s] = -1
            continue
        if s == r - 1:
            total += 1
            continue
        placed[s] = found
        used[found] = True
        s += 1
        cursor[s] = 0
    return total
