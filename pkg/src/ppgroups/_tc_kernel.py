"""Compiled HLT coset enumeration kernel (coincidences, lookahead, compaction).

Columns: generator g (0-based) uses column 2g, its inverse 2g + 1.
"""

from __future__ import annotations

import numpy as np
from numba import njit

DONE = 0
EXCEEDED = 1


@njit(cache=True)
def _rep(p, k):
    r = k
    while p[r] != r:
        r = p[r]
    while p[k] != r:
        nxt = p[k]
        p[k] = r
        k = nxt
    return r


@njit(cache=True)
def _merge(p, queue, qlen, a, b):
    a = _rep(p, a)
    b = _rep(p, b)
    if a == b:
        return qlen
    if a > b:
        a, b = b, a
    p[b] = a
    queue[qlen] = b
    return qlen + 1


@njit(cache=True)
def _coincidence(table, p, queue, ncols, a, b):
    """Merge cosets a and b and everything that follows; returns number killed."""
    qlen = _merge(p, queue, 0, a, b)
    i = 0
    while i < qlen:
        gamma = queue[i]
        i += 1
        for x in range(ncols):
            delta = table[gamma, x]
            if delta >= 0:
                xi = x ^ 1
                table[delta, xi] = -1
                mu = _rep(p, gamma)
                nu = _rep(p, delta)
                if table[mu, x] >= 0:
                    qlen = _merge(p, queue, qlen, nu, table[mu, x])
                elif table[nu, xi] >= 0:
                    qlen = _merge(p, queue, qlen, mu, table[nu, xi])
                else:
                    table[mu, x] = nu
                    table[nu, xi] = mu
    return qlen


@njit(cache=True)
def _scan(table, p, queue, ncols, rel, lo, hi, c, define, nalloc, cap):
    """Scan relator rel[lo:hi] at coset c.

    Returns (status, nalloc, killed) where status 0 = ok, 1 = needs a new coset
    but the table is full.
    """
    killed = 0
    while True:
        f = c
        i = lo
        while i < hi and table[f, rel[i]] >= 0:
            f = table[f, rel[i]]
            i += 1
        if i == hi:
            if f != c:
                killed += _coincidence(table, p, queue, ncols, f, c)
            return 0, nalloc, killed
        b = c
        j = hi - 1
        while j >= i and table[b, rel[j] ^ 1] >= 0:
            b = table[b, rel[j] ^ 1]
            j -= 1
        if j < i:
            killed += _coincidence(table, p, queue, ncols, f, b)
            return 0, nalloc, killed
        if j == i:
            table[f, rel[i]] = b
            table[b, rel[i] ^ 1] = f
            return 0, nalloc, killed
        if not define:
            return 0, nalloc, killed
        if nalloc >= table.shape[0]:
            return 1, nalloc, killed
        table[nalloc, :] = -1
        p[nalloc] = nalloc
        table[f, rel[i]] = nalloc
        table[nalloc, rel[i] ^ 1] = f
        nalloc += 1


@njit(cache=True)
def _compact(table, p, nalloc, ncols):
    newidx = np.full(nalloc, -1, dtype=np.int64)
    k = 0
    for c in range(nalloc):
        if p[c] == c:
            newidx[c] = k
            k += 1
    for c in range(nalloc):
        if p[c] == c:
            d = newidx[c]
            for x in range(ncols):
                t = table[c, x]
                table[d, x] = newidx[t] if t >= 0 else -1
    for c in range(k):
        p[c] = c
    return k, newidx


@njit(cache=True)
def _grow(table, p, queue, cap):
    size = min(cap, 2 * table.shape[0])
    t2 = np.full((size, table.shape[1]), -1, dtype=np.int64)
    t2[:table.shape[0]] = table
    p2 = np.arange(size)
    p2[:p.shape[0]] = p
    return t2, p2, np.empty(size, dtype=np.int64)


@njit(cache=True)
def enumerate_hlt(ncols, rels, offsets, subs, soffsets, cap, initial):
    """Return (status, table, live_count).

    ``rels``/``subs`` are flattened column sequences with offset arrays. The
    table starts with ``initial`` rows and doubles up to ``cap``.
    """
    size = max(1, min(cap, initial))
    table = np.full((size, ncols), -1, dtype=np.int64)
    p = np.arange(size)
    queue = np.empty(size, dtype=np.int64)
    nalloc = 1
    nrel = offsets.shape[0] - 1
    # subgroup generators at coset 0
    for s in range(soffsets.shape[0] - 1):
        while True:
            st, nalloc, _ = _scan(table, p, queue, ncols, subs, soffsets[s], soffsets[s + 1], 0, True, nalloc, cap)
            if st == 0:
                break
            if table.shape[0] >= cap:
                return EXCEEDED, table, nalloc
            table, p, queue = _grow(table, p, queue, cap)
    c = 0
    while c < nalloc:
        if p[c] != c:
            c += 1
            continue
        r = 0
        while r < nrel and p[c] == c:
            st, nalloc, _ = _scan(table, p, queue, ncols, rels, offsets[r], offsets[r + 1], c, True, nalloc, cap)
            if st == 1 and table.shape[0] < cap:
                table, p, queue = _grow(table, p, queue, cap)
                continue
            if st == 1:
                # lookahead: scan everything without defining, then compact
                for d in range(nalloc):
                    if p[d] != d:
                        continue
                    for r2 in range(nrel):
                        if p[d] != d:
                            break
                        _scan(table, p, queue, ncols, rels, offsets[r2], offsets[r2 + 1], d, False, nalloc, cap)
                old_c = c
                live_before = 0
                for d in range(old_c):
                    if p[d] == d:
                        live_before += 1
                nalloc, newidx = _compact(table, p, nalloc, ncols)
                # give up unless the lookahead freed a useful share of the table;
                # otherwise every few new cosets would trigger another full pass
                if nalloc > table.shape[0] - max(1, table.shape[0] // 16):
                    return EXCEEDED, table, nalloc
                # resume at the first live coset at or after old_c
                c = live_before
                r = 0
                continue
            r += 1
        if p[c] == c:
            for x in range(ncols):
                if table[c, x] < 0:
                    if nalloc >= table.shape[0] and table.shape[0] < cap:
                        table, p, queue = _grow(table, p, queue, cap)
                    if nalloc >= table.shape[0]:
                        nalloc, newidx = _compact(table, p, nalloc, ncols)
                        c = newidx[c]
                        if nalloc >= table.shape[0]:
                            return EXCEEDED, table, nalloc
                    table[nalloc, :] = -1
                    p[nalloc] = nalloc
                    table[c, x] = nalloc
                    table[nalloc, x ^ 1] = c
                    nalloc += 1
        c += 1
    nalloc, _ = _compact(table, p, nalloc, ncols)
    return DONE, table, nalloc


@njit(cache=True)
def standardize(table, n, ncols):
    """Renumber cosets in first-discovery order scanning columns left to right."""
    newidx = np.full(n, -1, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    newidx[0] = 0
    order[0] = 0
    k = 1
    i = 0
    while i < k:
        c = order[i]
        for x in range(ncols):
            d = table[c, x]
            if newidx[d] < 0:
                newidx[d] = k
                order[k] = d
                k += 1
        i += 1
    out = np.empty((n, ncols), dtype=np.int64)
    for c in range(n):
        for x in range(ncols):
            out[newidx[c], x] = newidx[table[c, x]]
    return out


@njit(cache=True)
def expand_and_reduce(flat, offs, dflat, doffs):
    """Substitute definitions (letter k -> dflat[doffs[k-1]:doffs[k]]) into every
    word and freely reduce. Returns (flat, offsets)."""
    n = offs.shape[0] - 1
    total = 0
    for i in range(n):
        for j in range(offs[i], offs[i + 1]):
            g = abs(flat[j])
            total += doffs[g] - doffs[g - 1]
    out = np.empty(total, dtype=np.int64)
    oofs = np.zeros(n + 1, dtype=np.int64)
    pos = 0
    for i in range(n):
        start = pos
        for j in range(offs[i], offs[i + 1]):
            x = flat[j]
            g = abs(x)
            lo, hi = doffs[g - 1], doffs[g]
            if x > 0:
                for t in range(lo, hi):
                    y = dflat[t]
                    if pos > start and out[pos - 1] == -y:
                        pos -= 1
                    else:
                        out[pos] = y
                        pos += 1
            else:
                for t in range(hi - 1, lo - 1, -1):
                    y = -dflat[t]
                    if pos > start and out[pos - 1] == -y:
                        pos -= 1
                    else:
                        out[pos] = y
                        pos += 1
        oofs[i + 1] = pos
    return out[:pos], oofs


@njit(cache=True)
def _less_rotation(w, n, a, b):
    """Is rotation a of w (length n) lexicographically smaller than rotation b?"""
    for k in range(n):
        x = w[(a + k) % n]
        y = w[(b + k) % n]
        if x != y:
            return x < y
    return False


@njit(cache=True)
def canonical_words(flat, offs):
    """Cyclically reduce each word, then take the least rotation of it or its
    inverse. Returns (flat, offsets) of the canonical words."""
    n = offs.shape[0] - 1
    out = np.empty(flat.shape[0], dtype=np.int64)
    oofs = np.zeros(n + 1, dtype=np.int64)
    pos = 0
    for i in range(n):
        lo, hi = offs[i], offs[i + 1]
        while hi - lo >= 2 and flat[lo] == -flat[hi - 1]:
            lo += 1
            hi -= 1
        m = hi - lo
        if m == 0:
            oofs[i + 1] = pos
            continue
        w = flat[lo:hi].copy()
        v = np.empty(m, dtype=np.int64)
        for k in range(m):
            v[k] = -w[m - 1 - k]
        best_w = -1
        low = w.min()
        for k in range(m):
            if w[k] == low and (best_w < 0 or _less_rotation(w, m, k, best_w)):
                best_w = k
        best_v = -1
        lowv = v.min()
        for k in range(m):
            if v[k] == lowv and (best_v < 0 or _less_rotation(v, m, k, best_v)):
                best_v = k
        use_v = False
        for k in range(m):
            x = w[(best_w + k) % m]
            y = v[(best_v + k) % m]
            if x != y:
                use_v = y < x
                break
        src = v if use_v else w
        start = best_v if use_v else best_w
        for k in range(m):
            out[pos + k] = src[(start + k) % m]
        pos += m
        oofs[i + 1] = pos
    return out[:pos], oofs
