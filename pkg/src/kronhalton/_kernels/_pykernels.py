"""Pure-Python/numpy versions of the compiled kernels.

Results are identical to the compiled ones, including tie-breaking: the
first maximal corner in sweep order wins, and at one corner the open
variant is tried before the closed one.
"""

from __future__ import annotations

import numpy as np

_TOL = 1e-9


def rank_mod_p(mat, p: int) -> int:
    """Row rank of an integer matrix reduced mod ``p``."""
    a = np.array(mat, dtype=np.int64) % p
    if a.ndim != 2 or a.size == 0:
        return 0
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        below = a[r + 1:, c].copy()
        if below.any():
            a[r + 1:] = (a[r + 1:] - below[:, None] * a[r]) % p
        r += 1
    return r


def star_corner_max(coords, P: int):
    """Maximum over grid corners of the anchored-box deviation numerator.

    Same contract as the compiled kernel: returns ``(num, corner, closed)``
    with deviation ``num / (N * P**s)``. Each sweep row is screened in
    float64; corners within a small tolerance of the running maximum are
    kept with their exact counts and settled in integer arithmetic.
    """
    coords = np.asarray(coords)
    N, s = coords.shape
    if not 1 <= s <= 3:
        raise ValueError("corner sweep supports 1 to 3 dimensions")
    cols = [[int(v) for v in coords[:, j]] for j in range(s)]
    grids = [sorted(set(c) | {int(P)}) for c in cols]
    ranks = []
    for g, c in zip(grids, cols):
        pos = {v: k for k, v in enumerate(g)}
        ranks.append(np.array([pos[v] for v in c], dtype=np.int64))
    real = [True] * s
    while len(grids) < 3:
        grids.append([1])
        ranks.append(np.zeros(N, dtype=np.int64))
        real.append(False)
    gx, gy, gz = grids
    ny, nz = len(gy), len(gz)
    Ps = int(P) ** s
    fy = np.array([v / P for v in gy]) if real[1] else np.ones(1)
    fz = np.array([v / P for v in gz]) if real[2] else np.ones(1)
    fyz = fy[:, None] * fz[None, :]

    order = np.argsort(ranks[0], kind="stable")
    rx, ry, rz = (r[order] for r in ranks)
    row_start = np.searchsorted(rx, np.arange(len(gx) + 1))

    acc = np.zeros((ny, nz), dtype=np.int64)

    def prefix(a):
        return a.cumsum(axis=0).cumsum(axis=1)

    best_f = -1.0
    cands: list = []  # (f, sweep key, i, jy, jz, closed, count)
    for i in range(len(gx)):
        opened = prefix(acc)
        lo, hi = row_start[i], row_start[i + 1]
        np.add.at(acc, (ry[lo:hi], rz[lo:hi]), 1)
        closed = prefix(acc)
        # open counts are shifted by one grid cell in every real dimension
        shifted = np.zeros_like(opened)
        sy = 1 if real[1] else 0
        sz = 1 if real[2] else 0
        shifted[sy:, sz:] = opened[: ny - sy, : nz - sz]
        vol = (gx[i] / P if real[0] else 1.0) * fyz
        dev_o = vol - shifted / N
        dev_c = closed / N - vol
        row_best = max(float(dev_o.max()), float(dev_c.max()))
        if row_best < best_f - _TOL:
            continue
        if row_best > best_f:
            best_f = row_best
            cands = [c for c in cands if c[0] >= best_f - _TOL]
        thr = best_f - _TOL
        for flag, dev, cnt in ((False, dev_o, shifted), (True, dev_c, closed)):
            for jy, jz in zip(*np.nonzero(dev >= thr)):
                key = (i, int(jy), int(jz), flag)
                cands.append((float(dev[jy, jz]), key, i, int(jy), int(jz), flag,
                              int(cnt[jy, jz])))

    best = None
    for _, key, i, jy, jz, flag, cnt in sorted(cands, key=lambda c: c[1]):
        vol = gx[i] * gy[jy] * gz[jz] * N
        num = cnt * Ps - vol if flag else vol - cnt * Ps
        if best is None or num > best[0]:
            best = (num, (gx[i], gy[jy], gz[jz])[:s], flag)
    return best
