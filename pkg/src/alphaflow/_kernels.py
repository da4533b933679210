"""numba kernels for the exhaustive weight enumeration.

All field arithmetic goes through the dense tables of
:class:`alphaflow.ffield.FieldTables`; matrices hold element codes as int32.
Every kernel is ``nogil`` so worker threads run truly in parallel.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_JIT = dict(nogil=True, cache=True)


# ---------------------------------------------------------------------------
# per-assignment elimination (reference hot path)
# ---------------------------------------------------------------------------

@njit(**_JIT)
def rank_eta(M, n, active, add, sub, mul, inv, eta, eta_m1):
    """Principal-pivot congruence elimination of ``M`` in place.

    Returns ``(rank, eta of the maximal nonsingular principal minor)``.
    Pivot rule: lowest-index nonzero diagonal, else the lowest-index nonzero
    off-diagonal pair as a 2x2 block.
    """
    for i in range(n):
        active[i] = 1
    rank = 0
    sign = 1
    while True:
        piv = -1
        for i in range(n):
            if active[i] and M[i, i] != 0:
                piv = i
                break
        if piv >= 0:
            d = M[piv, piv]
            sign *= eta[d]
            rank += 1
            active[piv] = 0
            inv_d = inv[d]
            for j in range(n):
                if active[j] and M[j, piv] != 0:
                    f = mul[M[j, piv], inv_d]
                    for k in range(n):
                        if active[k]:
                            M[j, k] = sub[M[j, k], mul[f, M[piv, k]]]
            continue
        pi = -1
        pj = -1
        for i in range(n):
            if not active[i]:
                continue
            for j in range(i + 1, n):
                if active[j] and M[i, j] != 0:
                    pi = i
                    pj = j
                    break
            if pi >= 0:
                break
        if pi < 0:
            break
        inv_a = inv[M[pi, pj]]
        active[pi] = 0
        active[pj] = 0
        sign *= eta_m1
        rank += 2
        for k in range(n):
            if not active[k]:
                continue
            cki = M[k, pi]
            ckj = M[k, pj]
            if cki == 0 and ckj == 0:
                continue
            for l in range(n):
                if active[l]:
                    s = add[mul[cki, M[pj, l]], mul[ckj, M[pi, l]]]
                    M[k, l] = sub[M[k, l], mul[s, inv_a]]
    return rank, sign


@njit(**_JIT)
def direct_enumerate(n, tails, heads, radix, fix_first, start, count,
                     add, sub, mul, inv, eta, eta_m1, zero_ok, out_signed, out_count):
    """Enumerate weight assignments with mixed-radix indices in [start, start+count).

    Free edges are ``0..m-1`` (or ``1..m-1`` when ``fix_first``; edge 0 then
    has weight code 1). A free edge's weight code is its digit (``zero_ok``)
    or digit + 1 (nonzero weights only).
    """
    m = tails.shape[0]
    first_free = 1 if fix_first else 0
    nfree = m - first_free
    offset = 0 if zero_ok else 1
    L = np.zeros((n, n), dtype=np.int32)
    M = np.zeros((n, n), dtype=np.int32)
    active = np.zeros(n, dtype=np.int8)
    digits = np.zeros(max(nfree, 1), dtype=np.int64)
    w = np.zeros(max(m, 1), dtype=np.int32)

    rem = start
    for t in range(nfree):
        digits[t] = rem % radix
        rem //= radix
    if fix_first and m > 0:
        w[0] = 1
    for t in range(nfree):
        w[first_free + t] = digits[t] + offset
    for e in range(m):
        u = tails[e]
        v = heads[e]
        c = w[e]
        L[u, u] = add[L[u, u], c]
        L[v, v] = add[L[v, v], c]
        L[u, v] = sub[L[u, v], c]
        L[v, u] = sub[L[v, u], c]

    for _ in range(count):
        for i in range(n):
            for j in range(n):
                M[i, j] = L[i, j]
        r, s = rank_eta(M, n, active, add, sub, mul, inv, eta, eta_m1)
        out_signed[r] += s
        out_count[r] += 1
        # odometer step with incremental Laplacian update
        t = 0
        while t < nfree:
            e = first_free + t
            old = w[e]
            digits[t] += 1
            carry = digits[t] == radix
            if carry:
                digits[t] = 0
            new = digits[t] + offset
            w[e] = new
            dlt = sub[new, old]
            u = tails[e]
            v = heads[e]
            L[u, u] = add[L[u, u], dlt]
            L[v, v] = add[L[v, v], dlt]
            L[u, v] = sub[L[u, v], dlt]
            L[v, u] = sub[L[v, u], dlt]
            if not carry:
                break
            t += 1


@njit(**_JIT)
def det_minor_nonzero_count(n, tails, heads, q, start, count, add, sub, mul, inv, out):
    """Count assignments in F_q^E (index range) whose Laplacian minor at vertex 0 is nonzero."""
    m = tails.shape[0]
    L = np.zeros((n, n), dtype=np.int32)
    M = np.zeros((n, n), dtype=np.int32)
    digits = np.zeros(max(m, 1), dtype=np.int64)
    rem = start
    for t in range(m):
        digits[t] = rem % q
        rem //= q
    for e in range(m):
        u = tails[e]
        v = heads[e]
        c = np.int32(digits[e])
        L[u, u] = add[L[u, u], c]
        L[v, v] = add[L[v, v], c]
        L[u, v] = sub[L[u, v], c]
        L[v, u] = sub[L[v, u], c]
    nz = 0
    for _ in range(count):
        for i in range(n):
            for j in range(n):
                M[i, j] = L[i, j]
        # plain Gaussian elimination on rows/cols 1..n-1
        ok = True
        for c in range(1, n):
            piv = -1
            for r in range(c, n):
                if M[r, c] != 0:
                    piv = r
                    break
            if piv < 0:
                ok = False
                break
            if piv != c:
                for k in range(1, n):
                    tmp = M[c, k]
                    M[c, k] = M[piv, k]
                    M[piv, k] = tmp
            inv_p = inv[M[c, c]]
            for r in range(c + 1, n):
                if M[r, c] != 0:
                    f = mul[M[r, c], inv_p]
                    for k in range(c, n):
                        M[r, k] = sub[M[r, k], mul[f, M[c, k]]]
        if ok:
            nz += 1
        t = 0
        while t < m:
            old = np.int32(digits[t])
            digits[t] += 1
            carry = digits[t] == q
            if carry:
                digits[t] = 0
            dlt = sub[np.int32(digits[t]), old]
            u = tails[t]
            v = heads[t]
            L[u, u] = add[L[u, u], dlt]
            L[v, v] = add[L[v, v], dlt]
            L[u, v] = sub[L[u, v], dlt]
            L[v, u] = sub[L[v, u], dlt]
            if not carry:
                break
            t += 1
    out[0] += nz


# ---------------------------------------------------------------------------
# frontier dynamic programme
# ---------------------------------------------------------------------------

@njit(**_JIT)
def _hash_key(key, klen):
    h = np.uint64(14695981039346656037)
    prime = np.uint64(1099511628211)
    for t in range(klen):
        h = (h ^ np.uint64(key[t])) * prime
    h ^= h >> np.uint64(29)
    return h


@njit(**_JIT)
def _closure(M, lo_closed, hi_closed, live, add, sub, mul, inv, eta, eta_m1):
    """Pivot closed vertices (slots < hi_closed) of M until none qualifies.

    Slots ``>= hi_closed`` are open: their rows may still change, so they are
    never pivots, but Schur updates reach them. Returns (rank added, sign).
    """
    rank = 0
    sign = 1
    while True:
        piv = -1
        for i in range(lo_closed, hi_closed):
            if M[i, i] != 0:
                piv = i
                break
        if piv >= 0:
            d = M[piv, piv]
            sign *= eta[d]
            rank += 1
            inv_d = inv[d]
            for j in range(live):
                if j != piv and M[j, piv] != 0:
                    f = mul[M[j, piv], inv_d]
                    for k in range(live):
                        if k != piv and M[piv, k] != 0:
                            M[j, k] = sub[M[j, k], mul[f, M[piv, k]]]
            for k in range(live):
                M[piv, k] = 0
                M[k, piv] = 0
            continue
        pi = -1
        pj = -1
        for i in range(lo_closed, hi_closed):
            for j in range(i + 1, hi_closed):
                if M[i, j] != 0:
                    pi = i
                    pj = j
                    break
            if pi >= 0:
                break
        if pi < 0:
            break
        inv_a = inv[M[pi, pj]]
        sign *= eta_m1
        rank += 2
        for k in range(live):
            if k == pi or k == pj:
                continue
            cki = M[k, pi]
            ckj = M[k, pj]
            if cki == 0 and ckj == 0:
                continue
            for l in range(live):
                if l == pi or l == pj:
                    continue
                s = add[mul[cki, M[pj, l]], mul[ckj, M[pi, l]]]
                if s != 0:
                    M[k, l] = sub[M[k, l], mul[s, inv_a]]
        for k in range(live):
            M[pi, k] = 0
            M[k, pi] = 0
            M[pj, k] = 0
            M[k, pj] = 0
    return rank, sign


@njit(**_JIT)
def dp_step(n,
            in_keys, in_vals, in_cnts, in_used, ki_in, kj_in, klen_in,
            e_u, e_v, radix, offset, fix_first, a_lo, a_hi,
            lo_closed, hi_closed, live,
            out_keys, out_vals, out_cnts, out_used, ki_out, kj_out, klen_out,
            track_counts, add, sub, mul, inv, eta, eta_m1):
    """Advance every stored state by one vertex step.

    For each stored state, each assignment (index range [a_lo, a_hi)) of the
    step's new edges is applied, the newly closed vertex is pivoted when
    possible, and the resulting state is merged into the output table.
    Returns the number of occupied output slots, or -1 when the output table
    passes 70% load (the caller grows it and retries).
    """
    cap_in = in_used.shape[0]
    cap_out = out_used.shape[0]
    mask = np.uint64(cap_out - 1)
    limit = (cap_out * 7) // 10
    nranks = in_vals.shape[1]
    n_new = e_u.shape[0]
    first_free = 1 if fix_first else 0
    nfree = n_new - first_free

    base = np.zeros((n, n), dtype=np.int32)
    M = np.zeros((n, n), dtype=np.int32)
    key = np.zeros(max(klen_out, 1), dtype=np.int32)
    digits = np.zeros(max(nfree, 1), dtype=np.int64)
    w = np.zeros(max(n_new, 1), dtype=np.int32)

    occupied = 0
    for t in range(cap_out):
        if out_used[t]:
            occupied += 1

    for s_in in range(cap_in):
        if not in_used[s_in]:
            continue
        for i in range(live):
            for j in range(live):
                base[i, j] = 0
        for t in range(klen_in):
            i = ki_in[t]
            j = kj_in[t]
            c = in_keys[s_in, t]
            base[i, j] = c
            base[j, i] = c

        rem = a_lo
        for t in range(nfree):
            digits[t] = rem % radix
            rem //= radix
        for a in range(a_lo, a_hi):
            for i in range(live):
                for j in range(live):
                    M[i, j] = base[i, j]
            if fix_first:
                w[0] = 1
            for t in range(nfree):
                w[first_free + t] = digits[t] + offset
            for e in range(n_new):
                u = e_u[e]
                v = e_v[e]
                c = w[e]
                M[u, u] = add[M[u, u], c]
                M[v, v] = add[M[v, v], c]
                M[u, v] = sub[M[u, v], c]
                M[v, u] = sub[M[v, u], c]
            dr, sg = _closure(M, lo_closed, hi_closed, live, add, sub, mul, inv, eta, eta_m1)

            for t in range(klen_out):
                key[t] = M[ki_out[t], kj_out[t]]
            h = _hash_key(key, klen_out) & mask
            slot = np.int64(h)
            while True:
                if not out_used[slot]:
                    out_used[slot] = 1
                    for t in range(klen_out):
                        out_keys[slot, t] = key[t]
                    occupied += 1
                    break
                same = True
                for t in range(klen_out):
                    if out_keys[slot, t] != key[t]:
                        same = False
                        break
                if same:
                    break
                slot = (slot + 1) & np.int64(cap_out - 1)
            for r in range(nranks - dr):
                v_in = in_vals[s_in, r]
                if v_in != 0:
                    out_vals[slot, r + dr] += sg * v_in
            if track_counts:
                for r in range(nranks - dr):
                    out_cnts[slot, r + dr] += in_cnts[s_in, r]
            if occupied > limit:
                return -1

            t = 0
            while t < nfree:
                digits[t] += 1
                if digits[t] < radix:
                    break
                digits[t] = 0
                t += 1
    return occupied
