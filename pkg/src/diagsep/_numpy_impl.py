"""NumPy lane: vectorised (or plain-Python) twins of the numba kernels.

Outputs are bit-for-bit identical to ``_numba_impl``; the graph-walk kernels
(`pair_graph_components`, `bfs_route`) degrade to Python loops and are only
meant for small instances on this lane.
"""
from collections import deque

import numpy as np

INF64 = np.int64(1) << np.int64(62)

_CHUNK = 1 << 20


def _sliding_codes(segment: np.ndarray, length: int) -> np.ndarray:
    pow2 = (1 << np.arange(length - 1, -1, -1)).astype(np.int64)
    view = np.lib.stride_tricks.sliding_window_view(segment, length)
    return view.astype(np.int64) @ pow2


def window_first_visits(word, start, steps, length, forward, stop_count):
    word = np.asarray(word)
    first_seen = np.full(1 << length, -1, dtype=np.int64)
    base = int(start) - length // 2
    seen = 0
    scanned = 0
    n0 = 0
    steps = int(steps)
    while True:
        n1 = min(steps, n0 + _CHUNK - 1)
        if forward:
            seg = word[base + n0 : base + n1 + length]
            codes = _sliding_codes(seg, length)
        else:
            seg = word[base - n1 : base - n0 + length]
            codes = _sliding_codes(seg, length)[::-1]
        uniq, idx = np.unique(codes, return_index=True)
        fresh = first_seen[uniq] < 0
        new_codes = uniq[fresh]
        new_firsts = idx[fresh].astype(np.int64) + n0
        if stop_count > 0 and seen + len(new_codes) >= stop_count:
            need = stop_count - seen
            cut = int(np.sort(new_firsts)[need - 1])
            keep = new_firsts <= cut
            first_seen[new_codes[keep]] = new_firsts[keep]
            scanned = cut
            break
        first_seen[new_codes] = new_firsts
        seen += len(new_codes)
        scanned = n1
        if n1 >= steps:
            break
        n0 = n1 + 1
    return first_seen, np.int64(scanned)


def counter_first_visits(start_state, steps, length, forward, stop_count):
    size = 1 << length
    steps = int(steps)
    span = min(steps, size - 1)
    n = np.arange(span + 1, dtype=np.int64)
    sign = 1 if forward else -1
    states = (int(start_state) + sign * n) % size
    first_seen = np.full(size, -1, dtype=np.int64)
    if stop_count > 0 and span + 1 >= stop_count:
        first_seen[states[:stop_count]] = n[:stop_count]
        return first_seen, np.int64(stop_count - 1)
    first_seen[states] = n
    return first_seen, np.int64(steps)


def window_pair_first_visits(word, start_a, start_b, steps, length, dense, total, stop_count):
    word = np.asarray(word)
    dense = np.asarray(dense)
    total = int(total)
    first_seen = np.full(total * total, -1, dtype=np.int64)
    base_a = int(start_a) - length // 2
    base_b = int(start_b) - length // 2
    seen = 0
    scanned = 0
    n0 = 0
    steps = int(steps)
    while True:
        n1 = min(steps, n0 + _CHUNK - 1)
        ca = _sliding_codes(word[base_a + n0 : base_a + n1 + length], length)
        cb = _sliding_codes(word[base_b + n0 : base_b + n1 + length], length)
        da = dense[ca]
        db = dense[cb]
        valid = (da >= 0) & (db >= 0)
        pair = da[valid].astype(np.int64) * total + db[valid]
        n_at = np.nonzero(valid)[0].astype(np.int64) + n0
        uniq, idx = np.unique(pair, return_index=True)
        fresh = first_seen[uniq] < 0
        new_pairs = uniq[fresh]
        new_firsts = n_at[idx[fresh]]
        if stop_count > 0 and seen + len(new_pairs) >= stop_count:
            need = stop_count - seen
            cut = int(np.sort(new_firsts)[need - 1])
            keep = new_firsts <= cut
            first_seen[new_pairs[keep]] = new_firsts[keep]
            scanned = cut
            break
        first_seen[new_pairs] = new_firsts
        seen += len(new_pairs)
        scanned = n1
        if n1 >= steps:
            break
        n0 = n1 + 1
    return first_seen, np.int64(scanned)


def counter_pair_first_visits(start_a, start_b, steps, length, stop_count):
    size = 1 << length
    steps = int(steps)
    span = min(steps, size - 1)
    n = np.arange(span + 1, dtype=np.int64)
    pair = ((int(start_a) + n) % size) * size + (int(start_b) + n) % size
    first_seen = np.full(size * size, -1, dtype=np.int64)
    if stop_count > 0 and span + 1 >= stop_count:
        first_seen[pair[:stop_count]] = n[:stop_count]
        return first_seen, np.int64(stop_count - 1)
    first_seen[pair] = n
    return first_seen, np.int64(steps)


def dijkstra_all(indptr, nbrs, wts):
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import dijkstra as _sp_dijkstra

    n = len(indptr) - 1
    graph = csr_matrix(
        (wts.astype(np.float64), nbrs.astype(np.int64), indptr.astype(np.int64)),
        shape=(n, n),
    )
    dist = _sp_dijkstra(graph, directed=True)
    out = np.where(np.isinf(dist), np.float64(INF64), dist)
    # integer weights, path sums far below 2**53: the cast is exact
    return out.astype(np.int64)


def pair_graph_components(nbr_indptr, nbr_ids, kept, nbase):
    nbase = int(nbase)
    n = nbase * nbase
    parent = list(range(n))

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    n_edges = 0
    for a in range(nbase):
        ball_a = nbr_ids[nbr_indptr[a] : nbr_indptr[a + 1]]
        for b in range(nbase):
            i = a * nbase + b
            if not kept[i]:
                continue
            ball_b = nbr_ids[nbr_indptr[b] : nbr_indptr[b + 1]]
            for a2 in ball_a:
                row = int(a2) * nbase
                for b2 in ball_b:
                    j = row + int(b2)
                    if j <= i or not kept[j]:
                        continue
                    n_edges += 1
                    ri, rj = find(i), find(j)
                    if ri != rj:
                        if ri < rj:
                            parent[rj] = ri
                        else:
                            parent[ri] = rj
    labels = np.full(n, -1, dtype=np.int64)
    count = 0
    for i in range(n):
        if not kept[i]:
            continue
        r = find(i)
        if labels[r] < 0:
            labels[r] = count
            count += 1
        labels[i] = labels[r]
    return labels, np.int64(count), np.int64(n_edges)


def min_max_to_diagonal(dist):
    n = dist.shape[0]
    out = np.empty(n * n, dtype=np.int64)
    for a in range(n):
        out[a * n : (a + 1) * n] = np.maximum(dist[a][None, :], dist).min(axis=1)
    return out


def bfs_route(nbr_indptr, nbr_ids, kept, nbase, src, dst):
    nbase = int(nbase)
    n = nbase * nbase
    parents = np.full(n, -2, dtype=np.int64)
    parents[src] = -1
    queue = deque([int(src)])
    while queue:
        i = queue.popleft()
        if i == dst:
            break
        a, b = divmod(i, nbase)
        for a2 in nbr_ids[nbr_indptr[a] : nbr_indptr[a + 1]]:
            row = int(a2) * nbase
            for b2 in nbr_ids[nbr_indptr[b] : nbr_indptr[b + 1]]:
                j = row + int(b2)
                if parents[j] == -2 and kept[j]:
                    parents[j] = i
                    queue.append(j)
    return parents


def fiber_scan(vals, xs, ys, tol):
    n = len(vals)
    best = 0.0
    besti = 0
    bestj = 0
    count = 0
    for i in range(n):
        hi = np.searchsorted(vals, vals[i] + tol, side="right")
        if hi <= i + 1:
            continue
        dx = xs[i] - xs[i + 1 : hi]
        dy = ys[i] - ys[i + 1 : hi]
        d = np.hypot(dx, dy)
        count += len(d)
        jloc = int(np.argmax(d))
        if d[jloc] > best:
            best = float(d[jloc])
            besti = i
            bestj = i + 1 + jloc
    return best, np.int64(count), np.int64(besti), np.int64(bestj)
