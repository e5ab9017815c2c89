# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: rank over F_p and the exact star-discrepancy corner sweep.

Deviation numerators are accumulated in 128-bit integers; the caller
guarantees ``N * P**s < 2**126``.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef extern from *:
    ctypedef long long int128 "__int128"
    ctypedef unsigned long long uint128 "unsigned __int128"


cdef long long _inv_mod(long long a, long long p):
    cdef long long t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def rank_mod_p(mat, long long p):
    """Row rank of an integer matrix reduced mod ``p``."""
    cdef cnp.int64_t[:, ::1] a = np.ascontiguousarray(np.asarray(mat, dtype=np.int64) % p)
    cdef Py_ssize_t rows = a.shape[0], cols = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef long long inv, f, tmp
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, cols):
                tmp = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = tmp
        inv = _inv_mod(a[r, c], p)
        for j in range(c, cols):
            a[r, j] = a[r, j] * inv % p
        for i in range(r + 1, rows):
            f = a[i, c]
            if f != 0:
                for j in range(c, cols):
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
                    if a[i, j] < 0:
                        a[i, j] += p
        r += 1
    return r


cdef object _to_py(int128 v):
    cdef bint neg = v < 0
    cdef uint128 u = <uint128>(-v if neg else v)
    cdef unsigned long long lo = <unsigned long long>(u & <uint128>0xFFFFFFFFFFFFFFFFULL)
    cdef unsigned long long hi = <unsigned long long>(u >> 64)
    out = (int(hi) << 64) | int(lo)
    return -out if neg else out


def star_corner_max(coords, long long P):
    """Maximum over grid corners of the anchored-box deviation numerator.

    ``coords`` is an ``(N, s)`` array of integer numerators over ``P``,
    ``1 <= s <= 3``. Returns ``(num, corner, closed)`` with the deviation
    equal to ``num / (N * P**s)``; ``corner`` holds the numerators of the
    box's upper corner and ``closed`` tells whether the count included
    points on the upper faces.
    """
    coords = np.asarray(coords, dtype=np.int64)
    cdef Py_ssize_t N = coords.shape[0], s = coords.shape[1]
    grids = [np.unique(np.append(coords[:, j], P)) for j in range(s)]
    ranks = [np.searchsorted(grids[j], coords[:, j]).astype(np.int64) for j in range(s)]
    while len(grids) < 3:
        grids.append(np.array([1], dtype=np.int64))
        ranks.append(np.zeros(N, dtype=np.int64))
    cdef cnp.int64_t[::1] gx = grids[0], gy = grids[1], gz = grids[2]
    cdef Py_ssize_t nx = gx.shape[0], ny = gy.shape[0], nz = gz.shape[0]
    cdef int128 Ps = 1
    cdef Py_ssize_t k
    for k in range(s):
        Ps *= P
    # points bucketed by x rank
    order = np.argsort(ranks[0], kind="stable")
    cdef cnp.int64_t[::1] rx = np.ascontiguousarray(ranks[0][order])
    cdef cnp.int64_t[::1] ry = np.ascontiguousarray(ranks[1][order])
    cdef cnp.int64_t[::1] rz = np.ascontiguousarray(ranks[2][order])
    # acc[y, z]: points with x-rank <= current row
    cdef cnp.int64_t[:, ::1] acc = np.zeros((ny, nz), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] closed = np.zeros((ny, nz), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] opened = np.zeros((ny, nz), dtype=np.int64)
    cdef Py_ssize_t i, jy, jz, ptr = 0
    cdef int128 best = -1, vol, dev
    cdef Py_ssize_t bi = 0, bj = 0, bk = 0
    cdef bint bclosed = True
    cdef long long c_o, c_c
    cdef Py_ssize_t jy2, jz2
    cdef bint yreal = s >= 2, zreal = s >= 3
    for i in range(nx):
        # prefix sums of acc before row i: points with x < gx[i]
        for jy in range(ny):
            for jz in range(nz):
                c_o = acc[jy, jz]
                if jy > 0:
                    c_o += opened[jy - 1, jz]
                if jz > 0:
                    c_o += opened[jy, jz - 1]
                if jy > 0 and jz > 0:
                    c_o -= opened[jy - 1, jz - 1]
                opened[jy, jz] = c_o
        while ptr < N and rx[ptr] == i:
            acc[ry[ptr], rz[ptr]] += 1
            ptr += 1
        for jy in range(ny):
            for jz in range(nz):
                c_c = acc[jy, jz]
                if jy > 0:
                    c_c += closed[jy - 1, jz]
                if jz > 0:
                    c_c += closed[jy, jz - 1]
                if jy > 0 and jz > 0:
                    c_c -= closed[jy - 1, jz - 1]
                closed[jy, jz] = c_c
        for jy in range(ny):
            for jz in range(nz):
                vol = <int128>gx[i] * <int128>gy[jy] * <int128>gz[jz] * <int128>N
                # open: strictly below the corner in every real dimension
                jy2 = jy - 1 if yreal else jy
                jz2 = jz - 1 if zreal else jz
                if jy2 < 0 or jz2 < 0:
                    c_o = 0
                else:
                    c_o = opened[jy2, jz2]
                dev = vol - <int128>c_o * Ps
                if dev > best:
                    best = dev
                    bi = i
                    bj = jy
                    bk = jz
                    bclosed = False
                dev = <int128>closed[jy, jz] * Ps - vol
                if dev > best:
                    best = dev
                    bi = i
                    bj = jy
                    bk = jz
                    bclosed = True
    corner = (int(gx[bi]), int(gy[bj]), int(gz[bk]))[:s]
    return _to_py(best), corner, bool(bclosed)
