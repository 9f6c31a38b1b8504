"""Compiled inner loops for the n log n solvers.

Everything here works on small integer codes (see ``order.PlacementGrid``), so
the compiled and interpreted versions give identical answers.  Without numba
the functions run as plain Python.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

NEG = -(1 << 62)


@njit(cache=True)
def tree_size(n):
    size = 1
    while size < n:
        size *= 2
    return size


@njit(cache=True)
def max_update(tree, size, pos, value):
    """Point update ``tree[pos] = max(tree[pos], value)`` of a bottom-up max tree."""
    p = pos + size
    if tree[p] >= value:
        return
    tree[p] = value
    p >>= 1
    while p >= 1:
        a = tree[2 * p]
        b = tree[2 * p + 1]
        m = a if a > b else b
        if tree[p] == m:
            break
        tree[p] = m
        p >>= 1


@njit(cache=True)
def max_query(tree, size, lo, hi):
    """Maximum over positions ``lo..hi`` inclusive (NEG when empty)."""
    res = NEG
    lo += size
    hi += size + 1
    while lo < hi:
        if lo & 1:
            if tree[lo] > res:
                res = tree[lo]
            lo += 1
        if hi & 1:
            hi -= 1
            if tree[hi] > res:
                res = tree[hi]
        lo >>= 1
        hi >>= 1
    return res


@njit(cache=True)
def cover_update(tree, size, lo, hi, value):
    """Raise every position in ``lo..hi`` to at least ``value`` (tags on canonical nodes)."""
    lo += size
    hi += size + 1
    while lo < hi:
        if lo & 1:
            if tree[lo] < value:
                tree[lo] = value
            lo += 1
        if hi & 1:
            hi -= 1
            if tree[hi] < value:
                tree[hi] = value
        lo >>= 1
        hi >>= 1


@njit(cache=True)
def cover_query(tree, size, pos):
    """Largest value covering ``pos`` among ``cover_update`` calls."""
    p = pos + size
    res = NEG
    while p >= 1:
        if tree[p] > res:
            res = tree[p]
        p >>= 1
    return res


@njit(cache=True)
def span_raise(tag, sub, size, lo, hi, value):
    """Raise every position in ``lo..hi`` to at least ``value`` so ``span_max`` sees it."""
    a = lo + size
    b = hi + size + 1
    while a < b:
        if a & 1:
            if tag[a] < value:
                tag[a] = value
            if sub[a] < value:
                sub[a] = value
            a += 1
        if b & 1:
            b -= 1
            if tag[b] < value:
                tag[b] = value
            if sub[b] < value:
                sub[b] = value
        a >>= 1
        b >>= 1
    # sub[p] is the largest value raised anywhere below p
    for leaf in (lo + size, hi + size):
        p = leaf >> 1
        while p >= 1:
            if sub[p] < value:
                sub[p] = value
            p >>= 1


@njit(cache=True)
def span_max(tag, sub, size, lo, hi):
    """Largest value raised at any position in ``lo..hi`` (NEG when none)."""
    res = NEG
    a = lo + size
    b = hi + size + 1
    while a < b:
        if a & 1:
            if sub[a] > res:
                res = sub[a]
            a += 1
        if b & 1:
            b -= 1
            if sub[b] > res:
                res = sub[b]
        a >>= 1
        b >>= 1
    for leaf in (lo + size, hi + size):
        p = leaf
        while p >= 1:
            if tag[p] > res:
                res = tag[p]
            p >>= 1
    return res


@njit(cache=True)
def skip_bands(t, own_lo, own_hi, start, stop):
    """Advance ``t`` past the open bands ``(own_lo[i], own_hi[i])``, sorted ascending."""
    for i in range(start, stop):
        if own_lo[i] < t < own_hi[i]:
            t = own_hi[i]
    return t


@njit(cache=True)
def place_in_order(order, col_ptr, col_pts, px, py, band_lo, band_hi, xl, xr, nx, floor):
    """Bottommost placement of buses in the given bottom-to-top order.

    The order only binds buses whose spans overlap; disjoint buses may sit at
    any relative height.
    Returns ``(bus, fail_pos, fail_point, blocker_pos)``; ``fail_pos`` is -1 on
    success.  ``bus[i]`` is the code of the i-th bus in ``order``.  Points of a
    color are listed in ``col_pts[col_ptr[c]:col_ptr[c+1]]`` sorted by height,
    with their own bands in ``band_lo``/``band_hi`` at the same positions.
    """
    k = order.shape[0]
    size = tree_size(nx)
    pts = np.full(2 * size, NEG, np.int64)
    cover = np.full(2 * size, NEG, np.int64)
    btag = np.full(2 * size, NEG, np.int64)
    bsub = np.full(2 * size, NEG, np.int64)
    bus = np.zeros(k, np.int64)
    for pos in range(k):
        c = order[pos]
        t = floor
        # above every lower bus whose span overlaps, and every processed point in the span
        m = span_max(btag, bsub, size, xl[c], xr[c])
        if m != NEG and m + 1 > t:
            t = m + 1
        m = max_query(pts, size, xl[c], xr[c])
        if m != NEG and m + 1 > t:
            t = m + 1
        t = skip_bands(t, band_lo, band_hi, col_ptr[c], col_ptr[c + 1])
        bus[pos] = t
        for a in range(col_ptr[c], col_ptr[c + 1]):
            q = col_pts[a]
            j = cover_query(cover, size, px[q])
            if j != NEG and bus[j] >= py[q]:
                return bus, pos, q, j
        for a in range(col_ptr[c], col_ptr[c + 1]):
            q = col_pts[a]
            max_update(pts, size, px[q], py[q])
        cover_update(cover, size, xl[c], xr[c], pos)
        span_raise(btag, bsub, size, xl[c], xr[c], t)
    return bus, -1, -1, -1


@njit(cache=True)
def fenwick_add(fw, n, i, delta):
    i += 1
    while i <= n:
        fw[i] += delta
        i += i & (-i)


@njit(cache=True)
def fenwick_prefix(fw, i):
    """Sum over positions ``0..i-1``."""
    s = 0
    while i > 0:
        s += fw[i]
        i -= i & (-i)
    return s


@njit(cache=True)
def fenwick_kth(fw, n, kth, logn):
    """Position of the kth (1-based) active element."""
    pos = 0
    step = logn
    while step > 0:
        nxt = pos + step
        if nxt <= n and fw[nxt] < kth:
            pos = nxt
            kth -= fw[nxt]
        step >>= 1
    return pos


@njit(cache=True)
def sweep_sqcap(order_y, level_of, pos_color, col_ptr, col_slots, xl, xr, mult):
    """Bottom-to-top sweep that closes a color once its points form a contiguous run.

    ``order_y`` lists point slots (unique x positions) by increasing height and
    ``level_of[i]`` is the height code of ``order_y[i]``.  A color closed at
    level ``L`` gets stacking index ``s >= 1``: one more than the largest index
    of a color closed inside its span at the same level.  Returns per color the
    closing level (-1 if never closed) and stacking index, the number of
    removed points and the number of points left active.
    """
    n = order_y.shape[0]
    k = xl.shape[0]
    fw = np.zeros(n + 1, np.int64)
    logn = 1
    while logn * 2 <= n:
        logn *= 2
    seen = np.zeros(k, np.int64)
    closed_level = np.full(k, -1, np.int64)
    stack_idx = np.zeros(k, np.int64)
    size = tree_size(n)
    depth = np.full(2 * size, NEG, np.int64)
    active_color = np.full(n, -1, np.int64)
    removals = 0
    active = 0
    queue = np.zeros(3 * n + 2, np.int64)
    i = 0
    while i < n:
        lev = level_of[i]
        j = i
        while j < n and level_of[j] == lev:
            s = order_y[j]
            c = pos_color[s]
            active_color[s] = c
            fenwick_add(fw, n, s, 1)
            active += 1
            seen[c] += 1
            j += 1
        qh = 0
        qt = 0
        for a in range(i, j):
            queue[qt] = pos_color[order_y[a]]
            qt += 1
        while qh < qt:
            c = queue[qh]
            qh += 1
            if c < 0 or closed_level[c] >= 0:
                continue
            total = col_ptr[c + 1] - col_ptr[c]
            if seen[c] < total:
                continue
            cnt = fenwick_prefix(fw, xr[c] + 1) - fenwick_prefix(fw, xl[c])
            if cnt != total:
                continue
            base = lev * mult
            inner = max_query(depth, size, xl[c], xr[c])
            sidx = 1
            if inner >= base:
                sidx = inner - base + 1
            closed_level[c] = lev
            stack_idx[c] = sidx
            max_update(depth, size, xl[c], base + sidx)
            for a in range(col_ptr[c], col_ptr[c + 1]):
                s = col_slots[a]
                active_color[s] = -1
                fenwick_add(fw, n, s, -1)
                active -= 1
                removals += 1
            before = fenwick_prefix(fw, xl[c])
            if before > 0:
                left = fenwick_kth(fw, n, before, logn)
                queue[qt] = active_color[left]
                qt += 1
            if before < active:
                right = fenwick_kth(fw, n, before + 1, logn)
                queue[qt] = active_color[right]
                qt += 1
        i = j
    return closed_level, stack_idx, removals, active


@njit(cache=True)
def scc_tarjan(num_nodes, adj_ptr, adj):
    """Iterative Tarjan; component ids come out in reverse topological order."""
    index = np.full(num_nodes, -1, np.int64)
    low = np.zeros(num_nodes, np.int64)
    comp = np.full(num_nodes, -1, np.int64)
    onstack = np.zeros(num_nodes, np.bool_)
    stack = np.zeros(num_nodes, np.int64)
    sp = 0
    call_node = np.zeros(num_nodes, np.int64)
    call_edge = np.zeros(num_nodes, np.int64)
    counter = 0
    ncomp = 0
    for root in range(num_nodes):
        if index[root] != -1:
            continue
        depth = 0
        call_node[0] = root
        call_edge[0] = adj_ptr[root]
        index[root] = counter
        low[root] = counter
        counter += 1
        stack[sp] = root
        sp += 1
        onstack[root] = True
        while depth >= 0:
            v = call_node[depth]
            e = call_edge[depth]
            if e < adj_ptr[v + 1]:
                call_edge[depth] = e + 1
                w = adj[e]
                if index[w] == -1:
                    index[w] = counter
                    low[w] = counter
                    counter += 1
                    stack[sp] = w
                    sp += 1
                    onstack[w] = True
                    depth += 1
                    call_node[depth] = w
                    call_edge[depth] = adj_ptr[w]
                elif onstack[w] and index[w] < low[v]:
                    low[v] = index[w]
            else:
                if low[v] == index[v]:
                    while True:
                        sp -= 1
                        w = stack[sp]
                        onstack[w] = False
                        comp[w] = ncomp
                        if w == v:
                            break
                    ncomp += 1
                depth -= 1
                if depth >= 0:
                    u = call_node[depth]
                    if low[v] < low[u]:
                        low[u] = low[v]
    return comp
