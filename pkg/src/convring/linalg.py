"""Exact rank computations behind the convolution kernel.

Three families of routines live here:

* dense elimination over F_p (numba), bit-packed elimination over F_2 and
  fraction-free (Bareiss) elimination over Z, used on explicit matrices;
* rank tables for the homogeneous blocks of multiplication by (x + y)^i on
  k[x, y]/(x^m, y^n), which is how the additive operator is handled fast;
* Smith-form ranks over the chain ring C = F_p[x]/(x^m) for C-linear maps,
  which covers every group law and the blockwise Kronecker product.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

# Residues mod this prime multiply inside int64.  Used to certify char-0 ranks:
# rank over Z is at least the rank mod any prime.
CERT_PRIME = 2147483647


@njit(cache=True, nogil=True)
def _inv(a, p):
    result = 1
    base = a % p
    e = p - 2
    while e > 0:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


@njit(cache=True, nogil=True)
def _rank_mod_inplace(M, p):
    rows, cols = M.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        piv = -1
        for r in range(rank, rows):
            if M[r, c] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(c, cols):
                t = M[piv, j]
                M[piv, j] = M[rank, j]
                M[rank, j] = t
        inv = _inv(M[rank, c], p)
        for r in range(rank + 1, rows):
            f = M[r, c] * inv % p
            if f != 0:
                for j in range(c, cols):
                    M[r, j] = (M[r, j] - f * M[rank, j]) % p
        rank += 1
    return rank


def rank_mod_p(matrix, p: int) -> int:
    """Rank of an integer matrix reduced mod the prime p."""
    if p >= 2**31:
        raise ValueError("modulus too large for int64 elimination")
    M = np.asarray(matrix)
    if M.size == 0:
        return 0
    M = np.mod(M.astype(object), p).astype(np.int64) if M.dtype == object else np.mod(M, p).astype(np.int64)
    return int(_rank_mod_inplace(np.ascontiguousarray(M), p))


def gf2_rank(rows: list[int]) -> int:
    """Rank over F_2 of rows packed into Python ints (bit j = column j)."""
    pivots: dict[int, int] = {}
    for v in rows:
        while v:
            top = v.bit_length() - 1
            other = pivots.get(top)
            if other is None:
                pivots[top] = v
                break
            v ^= other
    return len(pivots)


def bareiss_rank(matrix) -> int:
    """Rank over Q by fraction-free elimination on Python integers."""
    M = [[int(v) for v in row] for row in matrix]
    if not M or not M[0]:
        return 0
    rows, cols = len(M), len(M[0])
    rank = 0
    prev = 1
    for c in range(cols):
        if rank == rows:
            break
        piv = next((r for r in range(rank, rows) if M[r][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        pr = M[rank]
        a = pr[c]
        for r in range(rank + 1, rows):
            row = M[r]
            b = row[c]
            # Sylvester identity keeps the division exact.
            M[r] = [(a * row[j] - b * pr[j]) // prev for j in range(cols)]
        prev = a
        rank += 1
    return rank


# --- explicit matrices ------------------------------------------------------


@njit(cache=True, nogil=True)
def _sparse_apply(rows, cols, vals, P, p):
    out = np.zeros_like(P)
    width = P.shape[1]
    for k in range(rows.shape[0]):
        r = rows[k]
        c = cols[k]
        v = vals[k]
        for j in range(width):
            out[r, j] = (out[r, j] + v * P[c, j]) % p
    return out


def _profile_mod_p(N: np.ndarray, p: int) -> list[int]:
    size = N.shape[0]
    rows, cols = np.nonzero(N)
    vals = N[rows, cols].astype(np.int64)
    rows = rows.astype(np.int64)
    cols = cols.astype(np.int64)
    ranks = [size]
    P = np.eye(size, dtype=np.int64)
    for _ in range(size):
        P = _sparse_apply(rows, cols, vals, P, p)
        r = int(_rank_mod_inplace(P.copy(), p))
        ranks.append(r)
        if r == 0:
            return ranks
    raise ValueError("operator is not nilpotent")


def _profile_gf2(N: np.ndarray) -> list[int]:
    size = N.shape[0]
    # Row r of N^(i+1) is the XOR of the rows k of N^i with N[r, k] = 1.
    support = [np.flatnonzero(N[r] & 1).tolist() for r in range(size)]
    current = [1 << r for r in range(size)]
    ranks = [size]
    for _ in range(size):
        nxt = []
        for r in range(size):
            v = 0
            for k in support[r]:
                v ^= current[k]
            nxt.append(v)
        current = nxt
        r = gf2_rank(current)
        ranks.append(r)
        if r == 0:
            return ranks
    raise ValueError("operator is not nilpotent")


def _profile_exact(N) -> list[int]:
    size = len(N)
    entries = [[(k, int(v)) for k, v in enumerate(row) if v] for row in N]
    current = [[int(i == j) for j in range(size)] for i in range(size)]
    ranks = [size]
    for _ in range(size):
        nxt = []
        for r in range(size):
            acc = [0] * size
            for k, v in entries[r]:
                src = current[k]
                for j in range(size):
                    if src[j]:
                        acc[j] += v * src[j]
            nxt.append(acc)
        current = nxt
        r = bareiss_rank(current)
        ranks.append(r)
        if r == 0:
            return ranks
    raise ValueError("operator is not nilpotent")


def explicit_rank_profile(operator, p: int) -> list[int]:
    """Ranks of N^0, N^1, ... down to 0 for an explicit square nilpotent matrix.

    Powers are formed by sparse application of N to the previous power.
    Raises ValueError if N^size is not zero.
    """
    N = np.asarray(operator)
    if N.ndim != 2 or N.shape[0] != N.shape[1]:
        raise ValueError("operator must be a square matrix")
    if N.shape[0] == 0:
        return [0]
    if p == 0:
        return _profile_exact(N.tolist())
    N = np.mod(N.astype(object) if N.dtype == object else N, p).astype(np.int64)
    if p == 2:
        return _profile_gf2(N)
    return _profile_mod_p(N, p)


# --- homogeneous blocks of (x + y)^i ----------------------------------------


@njit(cache=True, nogil=True)
def _binom_table(size, mod):
    T = np.zeros((size, size), np.int64)
    for a in range(size):
        T[a, 0] = 1 % mod
        for b in range(1, a + 1):
            T[a, b] = (T[a - 1, b - 1] + T[a - 1, b]) % mod
    return T


@njit(cache=True, nogil=True)
def _degree_range(d, m, n):
    lo = d - n + 1
    if lo < 0:
        lo = 0
    hi = d
    if hi > m - 1:
        hi = m - 1
    return lo, hi


@njit(cache=True, nogil=True)
def _graded_block(i, d, m, n, binom):
    src_lo, src_hi = _degree_range(d, m, n)
    dst_lo, dst_hi = _degree_range(d + i, m, n)
    rows = dst_hi - dst_lo + 1
    cols = src_hi - src_lo + 1
    if rows < 0:
        rows = 0
    if cols < 0:
        cols = 0
    M = np.zeros((rows, cols), np.int64)
    for r in range(rows):
        for c in range(cols):
            j = dst_lo + r - src_lo - c
            if 0 <= j <= i:
                M[r, c] = binom[i, j]
    return M


@njit(cache=True, nogil=True)
def _graded_rank_table(m, n, mod, stop_early):
    top = m + n - 2
    binom = _binom_table(m + n, mod)
    ranks = np.zeros((m + n, top + 1), np.int64)
    full = np.zeros((m + n, top + 1), np.int64)
    for i in range(1, m + n):
        total = 0
        for d in range(0, top - i + 1):
            M = _graded_block(i, d, m, n, binom)
            rows, cols = M.shape
            full[i, d] = min(rows, cols)
            if rows and cols:
                ranks[i, d] = _rank_mod_inplace(M, mod)
                total += ranks[i, d]
        if stop_early and total == 0:
            break
    return ranks, full


def graded_block_exact(i: int, d: int, m: int, n: int) -> list[list[int]]:
    """Integer matrix of (x+y)^i from degree d to degree d+i."""
    src_lo, src_hi = _degree_range(d, m, n)
    dst_lo, dst_hi = _degree_range(d + i, m, n)
    return [
        [math.comb(i, a2 - a) if 0 <= a2 - a <= i else 0 for a in range(src_lo, src_hi + 1)]
        for a2 in range(dst_lo, dst_hi + 1)
    ]


def graded_rank_table(m: int, n: int, p: int) -> np.ndarray:
    """``table[i, d]`` = rank of (x+y)^i : A_d -> A_(d+i), A = k[x,y]/(x^m,y^n).

    For p = 0 each block is reduced mod a large prime; a full-rank result is
    then exact (rank over Z is at least the rank mod a prime) and any
    deficient block is redone by fraction-free elimination.
    """
    mod = p if p else CERT_PRIME
    # mod p a zero power means every later power is zero; mod the
    # certification prime nothing can be concluded from that
    ranks, full = _graded_rank_table(m, n, mod, p != 0)
    if p == 0:
        for i, d in zip(*np.nonzero(ranks < full)):
            ranks[i, d] = bareiss_rank(graded_block_exact(int(i), int(d), m, n))
    return ranks


def degree_dimensions(m: int, n: int) -> list[int]:
    """dim of the degree-d part of k[x,y]/(x^m, y^n) for d = 0 .. m+n-2."""
    return [min(d, m - 1) - max(0, d - n + 1) + 1 for d in range(m + n - 1)]


# --- C-linear maps, C = F_p[x]/(x^m) ----------------------------------------


@njit(cache=True, nogil=True)
def _series_inverse(u, length, p):
    inv = np.zeros(length, np.int64)
    inv0 = _inv(u[0], p)
    inv[0] = inv0
    for k in range(1, length):
        s = 0
        for j in range(1, k + 1):
            s = (s + u[j] * inv[k - j]) % p
        inv[k] = (p - s) % p * inv0 % p
    return inv


@njit(cache=True, nogil=True)
def _valuation(A, r, c):
    m = A.shape[2]
    for k in range(m):
        if A[r, c, k] != 0:
            return k
    return m


@njit(cache=True, nogil=True)
def _chain_rank(T, p):
    A = T.copy()
    nr, nc, m = A.shape
    row_alive = np.ones(nr, np.bool_)
    col_alive = np.ones(nc, np.bool_)
    vals = np.empty(nc, np.int64)
    rank = 0
    while True:
        best = m
        br = -1
        bc = -1
        for r in range(nr):
            if not row_alive[r]:
                continue
            for c in range(nc):
                if col_alive[c]:
                    v = _valuation(A, r, c)
                    if v < best:
                        best = v
                        br = r
                        bc = c
            if best == 0:
                break
        if br < 0:
            break
        v = best
        length = m - v
        rank += length
        uinv = _series_inverse(A[br, bc, v:], length, p)
        for c in range(nc):
            vals[c] = _valuation(A, br, c) if col_alive[c] else m
        q = np.zeros(length, np.int64)
        for r in range(nr):
            if r == br or not row_alive[r]:
                continue
            if _valuation(A, r, bc) == m:
                continue
            # q = (A[r, bc] / x^v) * uinv mod x^length; exact since v is minimal
            for k in range(length):
                s = 0
                for j in range(k + 1):
                    s = (s + A[r, bc, v + j] * uinv[k - j]) % p
                q[k] = s
            for c in range(nc):
                if not col_alive[c] or vals[c] == m:
                    continue
                w0 = vals[c]
                # q is only known mod x^length, but x^length * x^w0 = 0 here
                for k in range(w0, m):
                    s = 0
                    for j in range(0, k - w0 + 1):
                        s = (s + q[j] * A[br, c, k - j]) % p
                    A[r, c, k] = (A[r, c, k] - s) % p
        row_alive[br] = False
        col_alive[bc] = False
    return rank


@njit(cache=True, nogil=True)
def _cmat_mul(A, B, p):
    nr, nk, m = A.shape
    nc = B.shape[1]
    out = np.zeros((nr, nc, m), np.int64)
    for r in range(nr):
        for k in range(nk):
            va = _valuation(A, r, k)
            if va == m:
                continue
            for c in range(nc):
                vb = _valuation(B, k, c)
                if va + vb >= m:
                    continue
                for i in range(va, m - vb):
                    a = A[r, k, i]
                    if a == 0:
                        continue
                    for j in range(vb, m - i):
                        out[r, c, i + j] = (out[r, c, i + j] + a * B[k, c, j]) % p
    return out


def chain_ring_rank(blocks: np.ndarray, p: int) -> int:
    """F_p-rank of the C-linear map with matrix ``blocks`` (shape (rows, cols, m))."""
    return int(_chain_rank(np.ascontiguousarray(blocks, dtype=np.int64) % p, p))


def chain_ring_rank_profile(blocks: np.ndarray, p: int) -> list[int]:
    """Rank profile of a nilpotent C-linear operator given by square ``blocks``."""
    T = np.ascontiguousarray(blocks, dtype=np.int64) % p
    n, n2, m = T.shape
    if n != n2:
        raise ValueError("operator blocks must be square")
    ranks = [n * m]
    P = T
    for _ in range(n * m):
        r = int(_chain_rank(P, p))
        ranks.append(r)
        if r == 0:
            return ranks
        P = _cmat_mul(T, P, p)
    raise ValueError("operator is not nilpotent")
