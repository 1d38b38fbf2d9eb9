"""Numba lane: jit-compiled loop kernels.

Every function here has a signature-identical twin in ``_numpy_impl``; the
active lane is chosen in ``kernels``.  Masks are uint8 (0/1), distances are
int64 in fixed-point units, and 2**62 marks "unreachable".
"""
import numpy as np
from numba import njit

INF64 = np.int64(1) << np.int64(62)


@njit(cache=True)
def window_first_visits(word, start, steps, length, forward, stop_count):
    """First-visit step per window code along a shift orbit.

    Observation n (0..steps) is the length-`length` window of the point at
    orbit index start+n (forward) or start-n (backward); windows start at
    point index minus length//2.  Returns (first_seen[2**length], last step
    scanned); scanning stops early once stop_count distinct codes were seen
    (stop_count == 0 disables early stop).
    """
    mask = (np.int64(1) << length) - 1
    first_seen = np.full(1 << length, -1, dtype=np.int64)
    base = start - length // 2
    code = np.int64(0)
    for t in range(length):
        code = (code << 1) | np.int64(word[base + t])
    seen = np.int64(0)
    scanned = np.int64(0)
    n = np.int64(0)
    while True:
        if first_seen[code] < 0:
            first_seen[code] = n
            seen += 1
        scanned = n
        if stop_count > 0 and seen >= stop_count:
            break
        if n >= steps:
            break
        n += 1
        if forward:
            code = ((code << 1) & mask) | np.int64(word[base + n + length - 1])
        else:
            code = (code >> 1) | (np.int64(word[base - n]) << (length - 1))
    return first_seen, scanned


@njit(cache=True)
def counter_first_visits(start_state, steps, length, forward, stop_count):
    """window_first_visits twin for the odometer: the code is a counter mod 2**length."""
    size = np.int64(1) << length
    first_seen = np.full(size, -1, dtype=np.int64)
    state = np.int64(start_state) % size
    seen = np.int64(0)
    scanned = np.int64(0)
    n = np.int64(0)
    while True:
        if first_seen[state] < 0:
            first_seen[state] = n
            seen += 1
        scanned = n
        if stop_count > 0 and seen >= stop_count:
            break
        if n >= steps:
            break
        n += 1
        if forward:
            state = (state + 1) % size
        else:
            state = (state - 1) % size
    return first_seen, scanned


@njit(cache=True)
def window_pair_first_visits(word, start_a, start_b, steps, length, dense, total, stop_count):
    """First-visit step per (code_a, code_b) pair along a simultaneous orbit.

    `dense` maps raw window codes to [0,total); pairs index first_seen as
    dense_a * total + dense_b.  Inadmissible codes (dense < 0) are skipped.
    """
    mask = (np.int64(1) << length) - 1
    first_seen = np.full(total * total, -1, dtype=np.int64)
    base_a = start_a - length // 2
    base_b = start_b - length // 2
    ca = np.int64(0)
    cb = np.int64(0)
    for t in range(length):
        ca = (ca << 1) | np.int64(word[base_a + t])
        cb = (cb << 1) | np.int64(word[base_b + t])
    seen = np.int64(0)
    scanned = np.int64(0)
    n = np.int64(0)
    while True:
        da = dense[ca]
        db = dense[cb]
        if da >= 0 and db >= 0:
            idx = da * total + db
            if first_seen[idx] < 0:
                first_seen[idx] = n
                seen += 1
        scanned = n
        if stop_count > 0 and seen >= stop_count:
            break
        if n >= steps:
            break
        n += 1
        ca = ((ca << 1) & mask) | np.int64(word[base_a + n + length - 1])
        cb = ((cb << 1) & mask) | np.int64(word[base_b + n + length - 1])
    return first_seen, scanned


@njit(cache=True)
def counter_pair_first_visits(start_a, start_b, steps, length, stop_count):
    """Pair coverage twin for the odometer (both coordinates add one)."""
    size = np.int64(1) << length
    first_seen = np.full(size * size, -1, dtype=np.int64)
    sa = np.int64(start_a) % size
    sb = np.int64(start_b) % size
    seen = np.int64(0)
    scanned = np.int64(0)
    n = np.int64(0)
    while True:
        idx = sa * size + sb
        if first_seen[idx] < 0:
            first_seen[idx] = n
            seen += 1
        scanned = n
        if stop_count > 0 and seen >= stop_count:
            break
        if n >= steps:
            break
        n += 1
        sa = (sa + 1) % size
        sb = (sb + 1) % size
    return first_seen, scanned


@njit(cache=True)
def dijkstra_all(indptr, nbrs, wts):
    """All-pairs shortest paths on a CSR graph with int64 weights."""
    n = indptr.shape[0] - 1
    cap = nbrs.shape[0] + 1
    out = np.full((n, n), INF64, dtype=np.int64)
    heap_key = np.empty(cap, dtype=np.int64)
    heap_node = np.empty(cap, dtype=np.int64)
    for src in range(n):
        dist = out[src]
        dist[src] = 0
        heap_key[0] = 0
        heap_node[0] = src
        size = 1
        while size > 0:
            top_key = heap_key[0]
            top = heap_node[0]
            size -= 1
            heap_key[0] = heap_key[size]
            heap_node[0] = heap_node[size]
            i = 0
            while True:
                left = 2 * i + 1
                right = left + 1
                small = i
                if left < size and heap_key[left] < heap_key[small]:
                    small = left
                if right < size and heap_key[right] < heap_key[small]:
                    small = right
                if small == i:
                    break
                heap_key[i], heap_key[small] = heap_key[small], heap_key[i]
                heap_node[i], heap_node[small] = heap_node[small], heap_node[i]
                i = small
            if top_key > dist[top]:
                continue
            for e in range(indptr[top], indptr[top + 1]):
                v = nbrs[e]
                nd = top_key + wts[e]
                if nd < dist[v]:
                    dist[v] = nd
                    j = size
                    heap_key[j] = nd
                    heap_node[j] = v
                    size += 1
                    while j > 0:
                        par = (j - 1) // 2
                        if heap_key[par] <= heap_key[j]:
                            break
                        heap_key[j], heap_key[par] = heap_key[par], heap_key[j]
                        heap_node[j], heap_node[par] = heap_node[par], heap_node[j]
                        j = par
    return out


@njit(cache=True)
def pair_graph_components(nbr_indptr, nbr_ids, kept, nbase):
    """Connected components of the kept product nodes of a base graph square.

    Product node (a, b) has id a*nbase+b; its neighbours are ball(a) x ball(b)
    where the CSR ball lists include the node itself.  kept is a uint8 mask
    over product ids.  Returns (labels, count, kept_edge_count); labels are
    -1 outside the kept set and are numbered by increasing minimum node id.
    """
    n = nbase * nbase
    parent = np.arange(n, dtype=np.int64)
    n_edges = np.int64(0)
    for a in range(nbase):
        for b in range(nbase):
            i = a * nbase + b
            if kept[i] == 0:
                continue
            for ai in range(nbr_indptr[a], nbr_indptr[a + 1]):
                a2 = nbr_ids[ai]
                row = np.int64(a2) * nbase
                for bi in range(nbr_indptr[b], nbr_indptr[b + 1]):
                    j = row + nbr_ids[bi]
                    if j <= i or kept[j] == 0:
                        continue
                    n_edges += 1
                    ri = i
                    while parent[ri] != ri:
                        ri = parent[ri]
                    rj = j
                    while parent[rj] != rj:
                        rj = parent[rj]
                    # compress both paths
                    x = i
                    while parent[x] != ri:
                        nxt = parent[x]
                        parent[x] = ri
                        x = nxt
                    x = j
                    while parent[x] != rj:
                        nxt = parent[x]
                        parent[x] = rj
                        x = nxt
                    if ri != rj:
                        if ri < rj:
                            parent[rj] = ri
                        else:
                            parent[ri] = rj
    labels = np.full(n, -1, dtype=np.int64)
    count = np.int64(0)
    for i in range(n):
        if kept[i] == 0:
            continue
        r = i
        while parent[r] != r:
            r = parent[r]
        if labels[r] < 0:
            labels[r] = count
            count += 1
        labels[i] = labels[r]
    return labels, count, n_edges


@njit(cache=True)
def min_max_to_diagonal(dist):
    """Per product node (a,b): min over c of max(dist[a,c], dist[b,c])."""
    n = dist.shape[0]
    out = np.empty(n * n, dtype=np.int64)
    for a in range(n):
        for b in range(n):
            best = INF64
            for c in range(n):
                da = dist[a, c]
                db = dist[b, c]
                m = da if da > db else db
                if m < best:
                    best = m
            out[a * n + b] = best
    return out


@njit(cache=True)
def bfs_route(nbr_indptr, nbr_ids, kept, nbase, src, dst):
    """BFS over kept product nodes; returns parents (-2 unvisited, -1 at src)."""
    n = nbase * nbase
    parents = np.full(n, -2, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    head = 0
    tail = 0
    parents[src] = -1
    queue[tail] = src
    tail += 1
    while head < tail:
        i = queue[head]
        head += 1
        if i == dst:
            break
        a = i // nbase
        b = i % nbase
        for ai in range(nbr_indptr[a], nbr_indptr[a + 1]):
            row = np.int64(nbr_ids[ai]) * nbase
            for bi in range(nbr_indptr[b], nbr_indptr[b + 1]):
                j = row + nbr_ids[bi]
                if parents[j] == -2 and kept[j] != 0:
                    parents[j] = i
                    queue[tail] = j
                    tail += 1
    return parents


@njit(cache=True)
def fiber_scan(vals, xs, ys, tol):
    """Max planar distance over pairs whose sorted values differ by <= tol.

    Arrays are sorted by value.  Returns (max_distance, pair_count, i, j)
    with (i, j) attaining the maximum.
    """
    n = vals.shape[0]
    best = 0.0
    besti = np.int64(0)
    bestj = np.int64(0)
    count = np.int64(0)
    hi = 0
    for i in range(n):
        if hi < i + 1:
            hi = i + 1
        while hi < n and vals[hi] - vals[i] <= tol:
            hi += 1
        for j in range(i + 1, hi):
            dx = xs[i] - xs[j]
            dy = ys[i] - ys[j]
            d = (dx * dx + dy * dy) ** 0.5
            count += 1
            if d > best:
                best = d
                besti = i
                bestj = j
    return best, count, besti, bestj
