# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled search kernels.  Mirrors ``_pure`` node for node."""

from libc.stdlib cimport malloc, calloc, free
from libc.string cimport memcpy, memset
from libc.stdint cimport uint64_t

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

cdef enum:
    RANK = 0
    LEAKAGE = 1
    PARETO = 2


cdef struct FitCtx:
    int q
    int nrows
    int ncols
    int objective
    int floor
    int *base
    int *free_off
    int *free_cols
    int *inv
    int *proj_cols      # 3 * ncols
    int proj_len[3]
    int use[3]
    int *brow           # 3 * nrows * ncols
    int *bpiv           # 3 * nrows
    int bcount[3]
    int *scratch        # ncols
    int *vec            # nrows * ncols
    int *assign
    int nfree
    int best
    int *best_assign
    int have_best
    int *pval           # nrows + 1
    int *pwit           # (nrows + 1) * nfree
    long long nodes


cdef inline int _insert(FitCtx *c, int p, int *row)  noexcept nogil:
    cdef int q = c.q, w = c.proj_len[p], nc = c.ncols
    cdef int *tmp = c.scratch
    cdef int *cols = c.proj_cols + p * nc
    cdef int k, b, f, piv, inv
    cdef int *br
    for k in range(w):
        tmp[k] = row[cols[k]]
    for b in range(c.bcount[p]):
        piv = c.bpiv[p * c.nrows + b]
        f = tmp[piv]
        if f:
            br = c.brow + (p * c.nrows + b) * nc
            for k in range(w):
                tmp[k] = (tmp[k] + (q - f) * br[k]) % q
    for k in range(w):
        if tmp[k]:
            inv = c.inv[tmp[k]]
            b = c.bcount[p]
            br = c.brow + (p * c.nrows + b) * nc
            for piv in range(w):
                br[piv] = (tmp[piv] * inv) % q
            c.bpiv[p * c.nrows + b] = k
            c.bcount[p] = b + 1
            return 1
    return 0


cdef inline int _bound(FitCtx *c)  noexcept nogil:
    if c.objective == RANK:
        return c.bcount[0]
    if c.objective == LEAKAGE:
        return c.bcount[1] - c.bcount[2]
    return -1


cdef void _rec(FitCtx *c, int i)  noexcept nogil:
    cdef int nc = c.ncols, q = c.q
    cdef int *row
    cdef int fo, nf, k, p, r, leak, val, x
    cdef int added[3]
    c.nodes += 1
    if i == c.nrows:
        if c.objective == PARETO:
            r = c.bcount[0]
            leak = c.bcount[1] - c.bcount[2]
            if c.pval[r] < 0 or leak < c.pval[r]:
                c.pval[r] = leak
                if c.nfree:
                    memcpy(c.pwit + r * c.nfree, c.assign, c.nfree * sizeof(int))
            return
        val = _bound(c)
        if val < c.best:
            c.best = val
            c.have_best = 1
            if c.nfree:
                memcpy(c.best_assign, c.assign, c.nfree * sizeof(int))
        return
    row = c.vec + i * nc
    memcpy(row, c.base + i * nc, nc * sizeof(int))
    fo = c.free_off[i]
    nf = c.free_off[i + 1] - fo
    for k in range(nf):
        c.assign[fo + k] = 0
        row[c.free_cols[fo + k]] = 0
    while True:
        for p in range(3):
            added[p] = 0
            if c.use[p]:
                added[p] = _insert(c, p, row)
        if c.objective == PARETO or _bound(c) < c.best:
            _rec(c, i + 1)
        for p in range(3):
            c.bcount[p] -= added[p]
        if c.objective != PARETO and c.best <= c.floor:
            return
        k = nf - 1
        while k >= 0:
            x = c.assign[fo + k] + 1
            if x < q:
                c.assign[fo + k] = x
                row[c.free_cols[fo + k]] = x
                break
            c.assign[fo + k] = 0
            row[c.free_cols[fo + k]] = 0
            k -= 1
        if k < 0:
            break


def fitting_search(int q, int nrows, int ncols, base, free_cells, col_class,
                   int objective, int floor=-1):
    """See ``_pure.fitting_search``."""
    cdef FitCtx c
    cdef int i, j, k, p, n
    memset(&c, 0, sizeof(FitCtx))
    c.q = q
    c.nrows = nrows
    c.ncols = ncols
    c.objective = objective
    c.floor = floor
    c.nfree = sum(len(f) for f in free_cells)
    c.best = nrows + ncols + 1
    cdef int rows_alloc = nrows if nrows > 0 else 1
    cdef int cols_alloc = ncols if ncols > 0 else 1
    c.base = <int *>malloc(rows_alloc * cols_alloc * sizeof(int))
    c.free_off = <int *>malloc((nrows + 1) * sizeof(int))
    c.free_cols = <int *>malloc((c.nfree + 1) * sizeof(int))
    c.inv = <int *>calloc(q, sizeof(int))
    c.proj_cols = <int *>malloc(3 * cols_alloc * sizeof(int))
    c.brow = <int *>malloc(3 * rows_alloc * cols_alloc * sizeof(int))
    c.bpiv = <int *>malloc(3 * rows_alloc * sizeof(int))
    c.scratch = <int *>malloc(cols_alloc * sizeof(int))
    c.vec = <int *>malloc(rows_alloc * cols_alloc * sizeof(int))
    c.assign = <int *>calloc(c.nfree + 1, sizeof(int))
    c.best_assign = <int *>calloc(c.nfree + 1, sizeof(int))
    c.pval = <int *>malloc((nrows + 1) * sizeof(int))
    c.pwit = <int *>calloc((nrows + 1) * (c.nfree + 1), sizeof(int))
    try:
        for i in range(nrows * ncols):
            c.base[i] = base[i]
        k = 0
        for i in range(nrows):
            c.free_off[i] = k
            for j in free_cells[i]:
                c.free_cols[k] = j
                k += 1
        c.free_off[nrows] = k
        for i in range(1, q):
            c.inv[i] = pow(i, q - 2, q)
        for p in range(3):
            n = 0
            for j in range(ncols):
                if p == 0 or (p == 1 and col_class[j] in (1, 2)) or (p == 2 and col_class[j] == 2):
                    c.proj_cols[p * ncols + n] = j
                    n += 1
            c.proj_len[p] = n
        c.use[0] = objective in (RANK, PARETO)
        c.use[1] = objective in (LEAKAGE, PARETO)
        c.use[2] = objective in (LEAKAGE, PARETO)
        for i in range(nrows + 1):
            c.pval[i] = -1
        with nogil:
            _rec(&c, 0)
        if objective == PARETO:
            vals = [c.pval[i] for i in range(nrows + 1)]
            wits = [[c.pwit[i * c.nfree + j] for j in range(c.nfree)] if c.pval[i] >= 0 else None
                    for i in range(nrows + 1)]
            return vals, wits, c.nodes
        best_assign = [c.best_assign[j] for j in range(c.nfree)] if c.have_best else None
        return c.best, best_assign, c.nodes
    finally:
        free(c.base); free(c.free_off); free(c.free_cols); free(c.inv)
        free(c.proj_cols); free(c.brow); free(c.bpiv); free(c.scratch)
        free(c.vec); free(c.assign); free(c.best_assign); free(c.pval); free(c.pwit)


# --- maximum independent set --------------------------------------------------

cdef struct MisCtx:
    int nv
    int W
    uint64_t *adj
    int best
    int *best_set
    int *cur
    int cur_size
    long long nodes


cdef inline int _empty(uint64_t *s, int W)  noexcept nogil:
    cdef int w
    for w in range(W):
        if s[w]:
            return 0
    return 1


cdef int _expand(MisCtx *c, uint64_t *P)  noexcept nogil:
    cdef int W = c.W
    cdef int cnt = 0, k = 0, idx, v, w
    cdef uint64_t low
    cdef uint64_t *U = <uint64_t *>malloc(4 * W * sizeof(uint64_t))
    cdef uint64_t *Q = U + W
    cdef uint64_t *Pl = U + 2 * W
    cdef uint64_t *newP = U + 3 * W
    cdef int *order
    cdef int *bounds
    cdef int pop = 0
    c.nodes += 1
    for w in range(W):
        U[w] = P[w]
        Pl[w] = P[w]
        pop += __builtin_popcountll(P[w])
    order = <int *>malloc(2 * (pop + 1) * sizeof(int))
    bounds = order + pop + 1
    while not _empty(U, W):
        k += 1
        for w in range(W):
            Q[w] = U[w]
        w = 0
        while w < W:
            if Q[w] == 0:
                w += 1
                continue
            low = Q[w] & (~Q[w] + 1)
            v = w * 64 + __builtin_ctzll(Q[w])
            U[w] &= ~low
            Q[w] &= ~low
            for idx in range(W):
                Q[idx] &= c.adj[v * W + idx]
            order[cnt] = v
            bounds[cnt] = k
            cnt += 1
    idx = cnt - 1
    while idx >= 0:
        if c.cur_size + bounds[idx] <= c.best:
            break
        v = order[idx]
        c.cur[c.cur_size] = v
        c.cur_size += 1
        for w in range(W):
            newP[w] = Pl[w] & ~c.adj[v * W + w]
        newP[v >> 6] &= ~((<uint64_t>1) << (v & 63))
        if not _empty(newP, W):
            _expand(c, newP)
        elif c.cur_size > c.best:
            c.best = c.cur_size
            memcpy(c.best_set, c.cur, c.cur_size * sizeof(int))
        c.cur_size -= 1
        Pl[v >> 6] &= ~((<uint64_t>1) << (v & 63))
        idx -= 1
    free(order)
    free(U)
    return 0


def max_independent_set(int nv, adj):
    """See ``_pure.max_independent_set``; ``adj`` holds Python-int bitsets."""
    cdef MisCtx c
    cdef int W = (nv + 63) // 64 if nv > 0 else 1
    cdef int v, w
    cdef uint64_t *P
    memset(&c, 0, sizeof(MisCtx))
    c.nv = nv
    c.W = W
    c.adj = <uint64_t *>calloc(<size_t>(nv if nv > 0 else 1) * W, sizeof(uint64_t))
    c.best_set = <int *>malloc((nv + 1) * sizeof(int))
    c.cur = <int *>malloc((nv + 1) * sizeof(int))
    P = <uint64_t *>calloc(W, sizeof(uint64_t))
    mask = (1 << 64) - 1
    try:
        for v in range(nv):
            a = adj[v]
            for w in range(W):
                c.adj[v * W + w] = <uint64_t>((a >> (64 * w)) & mask)
        for v in range(nv):
            P[v >> 6] |= (<uint64_t>1) << (v & 63)
        if nv:
            with nogil:
                _expand(&c, P)
        return c.best, sorted(c.best_set[i] for i in range(c.best)), c.nodes
    finally:
        free(c.adj); free(c.best_set); free(c.cur); free(P)
