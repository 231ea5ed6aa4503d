"""Numba hot loops for the lattice Monte Carlo engine.

All kernels operate on a padded (L+2)x(L+2) int8 spin array whose border row
and column hold the fixed boundary value (+1 for plus boundary, 0 for free).
A zero border contributes nothing to energies or neighbor sums, which is
exactly the free-boundary Hamiltonian.

Every proposal consumes a fixed number of RNG draws whether or not the move
is performed (glauber: 2, pair exchange: 3), so trajectories are bit-for-bit
reproducible functions of (seed, stream) alone.

Acceptance lookup tables cover the even energy change dh via index
(dh >> 1) + 8, valid for dh in [-16, 20] (table length 19).
"""

import numpy as np
from numba import njit

ACC_TABLE_SIZE = 19


def acceptance_table(beta: float) -> np.ndarray:
    """min(1, exp(-beta*dh)) for even dh in [-16, 20], indexed by (dh>>1)+8."""
    dh = 2.0 * (np.arange(ACC_TABLE_SIZE) - 8.0)
    return np.minimum(1.0, np.exp(-beta * dh))


@njit(cache=True, nogil=True)
def energy_of(s, L):
    """-sum(sigma_x sigma_y) over all bonds with at least one interior end."""
    e = 0
    for i in range(1, L + 1):
        for j in range(0, L + 1):
            e -= s[i, j] * s[i, j + 1]
    for i in range(0, L + 1):
        for j in range(1, L + 1):
            e -= s[i, j] * s[i + 1, j]
    return e


@njit(cache=True, nogil=True)
def glauber_run(s, L, m, e, acc, n, rng):
    """n single-site Metropolis proposals; returns updated (m, e)."""
    for _ in range(n):
        idx = rng.integers(0, L * L)
        u = rng.random()
        i = 1 + idx // L
        j = 1 + idx % L
        k = s[i, j] * (s[i - 1, j] + s[i + 1, j] + s[i, j - 1] + s[i, j + 1])
        if u < acc[k + 8]:
            m -= 2 * s[i, j]
            e += 2 * k
            s[i, j] = -s[i, j]
    return m, e


@njit(cache=True, nogil=True)
def glauber_record_m(s, L, m, e, acc, cadence, out_m, rng):
    """Record magnetization after every `cadence` proposals into out_m."""
    for t in range(out_m.shape[0]):
        m, e = glauber_run(s, L, m, e, acc, cadence, rng)
        out_m[t] = m
    return m, e


@njit(cache=True, nogil=True)
def exchange_local_run(s, L, e, acc, n, rng):
    """n adjacent-pair exchange proposals (conserved magnetization)."""
    for _ in range(n):
        idx = rng.integers(0, L * L)
        d = rng.integers(0, 4)
        u = rng.random()
        ai = 1 + idx // L
        aj = 1 + idx % L
        if d == 0:
            bi, bj = ai - 1, aj
        elif d == 1:
            bi, bj = ai + 1, aj
        elif d == 2:
            bi, bj = ai, aj - 1
        else:
            bi, bj = ai, aj + 1
        if bi < 1 or bi > L or bj < 1 or bj > L:
            continue
        sa = s[ai, aj]
        sb = s[bi, bj]
        if sa == sb:
            continue
        na = s[ai - 1, aj] + s[ai + 1, aj] + s[ai, aj - 1] + s[ai, aj + 1]
        nb = s[bi - 1, bj] + s[bi + 1, bj] + s[bi, bj - 1] + s[bi, bj + 1]
        dh = 2 * sa * na + 2 * sb * nb + 4
        if u < acc[(dh >> 1) + 8]:
            s[ai, aj] = sb
            s[bi, bj] = sa
            e += dh
    return e


@njit(cache=True, nogil=True)
def exchange_nonlocal_run(s, L, e, acc, minus_pos, plus_pos, n_minus, n_plus, n, rng):
    """n arbitrary-distance minus/plus pair exchanges.

    minus_pos[:n_minus] and plus_pos[:n_plus] hold flat padded indices of the
    current minus and plus interior sites; counts are conserved, entries are
    swapped in place on acceptance.
    """
    w = L + 2
    for _ in range(n):
        im = rng.integers(0, max(n_minus, 1))
        ip = rng.integers(0, max(n_plus, 1))
        u = rng.random()
        if n_minus == 0 or n_plus == 0:
            continue
        a = minus_pos[im]
        b = plus_pos[ip]
        ai, aj = a // w, a % w
        bi, bj = b // w, b % w
        na = s[ai - 1, aj] + s[ai + 1, aj] + s[ai, aj - 1] + s[ai, aj + 1]
        nb = s[bi - 1, bj] + s[bi + 1, bj] + s[bi, bj - 1] + s[bi, bj + 1]
        # sa = -1, sb = +1 by list membership
        dh = -2 * na + 2 * nb
        if abs(ai - bi) + abs(aj - bj) == 1:
            dh += 4
        if u < acc[(dh >> 1) + 8]:
            s[ai, aj] = 1
            s[bi, bj] = -1
            e += dh
            minus_pos[im] = b
            plus_pos[ip] = a
    return e


@njit(cache=True, nogil=True)
def wang_landau_run(s, L, m, e, beta, weights, visits, m_min, lnf, n, rng):
    """n reweighted single-site flips, learning log-weights on the fly.

    Sampling density is exp(-beta*H + w(M)); after every proposal the weight
    of the current magnetization bin is lowered by lnf and its visit count
    incremented.  Moves leaving [m_min, m_min + 2*(len(weights)-1)] are
    rejected.
    """
    m_max = m_min + 2 * (weights.shape[0] - 1)
    for _ in range(n):
        idx = rng.integers(0, L * L)
        u = rng.random()
        i = 1 + idx // L
        j = 1 + idx % L
        mnew = m - 2 * s[i, j]
        if m_min <= mnew <= m_max:
            k = s[i, j] * (s[i - 1, j] + s[i + 1, j] + s[i, j - 1] + s[i, j + 1])
            arg = -beta * 2.0 * k + weights[(mnew - m_min) >> 1] - weights[(m - m_min) >> 1]
            if arg >= 0.0 or u < np.exp(arg):
                e += 2 * k
                s[i, j] = -s[i, j]
                m = mnew
        cur = (m - m_min) >> 1
        weights[cur] -= lnf
        visits[cur] += 1
    return m, e


@njit(cache=True, nogil=True)
def multicanonical_production_run(s, L, m, e, beta, weights, counts, m_min, n, rng):
    """n flips under frozen weights, accumulating bin visit counts."""
    m_max = m_min + 2 * (weights.shape[0] - 1)
    for _ in range(n):
        idx = rng.integers(0, L * L)
        u = rng.random()
        i = 1 + idx // L
        j = 1 + idx % L
        mnew = m - 2 * s[i, j]
        if m_min <= mnew <= m_max:
            k = s[i, j] * (s[i - 1, j] + s[i + 1, j] + s[i, j - 1] + s[i, j + 1])
            arg = -beta * 2.0 * k + weights[(mnew - m_min) >> 1] - weights[(m - m_min) >> 1]
            if arg >= 0.0 or u < np.exp(arg):
                e += 2 * k
                s[i, j] = -s[i, j]
                m = mnew
        counts[(m - m_min) >> 1] += 1
    return m, e


@njit(cache=True, nogil=True)
def trace_contours(s, L, lengths, diams, vols, inner_spins, starts, vrows, vcols):
    """Walk all spin-boundary loops on the dual lattice.

    Corners live on the (L+1)x(L+1) grid; cell (i, j) (0-based interior)
    spans corners (i..i+1, j..j+1).  A vertical boundary edge at (i, j) runs
    between corners (i, j) and (i+1, j) and separates cells (i, j-1) and
    (i, j); a horizontal edge at (i, j) runs between corners (i, j) and
    (i, j+1) and separates cells (i-1, j) and (i, j).

    At a four-valent corner the crossing is split so the south edge pairs
    with the east edge and the north edge with the west edge, which keeps
    every loop edge-disjoint and non-self-crossing.

    Outputs per contour k: lengths[k], diams[k] (L-infinity corner extent),
    vols[k] (enclosed cells, nested islands included), inner_spins[k] (spin
    of the first interior cell in scan order).  The vertical edges of
    contour k are vrows/vcols[starts[k]:starts[k+1]] (cell row, corner col),
    for interior reconstruction.  Returns the number of contours.
    """
    vmask = np.zeros((L, L + 1), dtype=np.uint8)
    hmask = np.zeros((L + 1, L), dtype=np.uint8)
    for i in range(L):
        for j in range(L + 1):
            if s[i + 1, j] != s[i + 1, j + 1]:
                vmask[i, j] = 1
    for i in range(L + 1):
        for j in range(L):
            if s[i, j + 1] != s[i + 1, j + 1]:
                hmask[i, j] = 1

    n_edges = 0
    count = 0
    for si in range(L):
        for sj in range(L + 1):
            if vmask[si, sj] != 1:
                continue
            # walk this loop starting down the vertical edge (si, sj);
            # arrive at corner (si+1, sj) coming in on its north edge
            vmask[si, sj] = 2
            vrows[n_edges] = si
            vcols[n_edges] = sj
            n_edges += 1
            length = 1
            min_i, max_i = si, si + 1
            min_j, max_j = sj, sj
            # twice the shoelace area, corners as (x=col, y=row); the
            # initial downward step contributes x*dy = sj
            area2 = sj
            ci = si + 1
            cj = sj
            din = 0  # 0 N, 1 S, 2 W, 3 E
            while True:
                n_in = ci > 0 and vmask[ci - 1, cj] > 0
                s_in = ci < L and vmask[ci, cj] > 0
                w_in = cj > 0 and hmask[ci, cj - 1] > 0
                e_in = cj < L and hmask[ci, cj] > 0
                if n_in and s_in and w_in and e_in:
                    # four-valent corner: pair (S,E) and (N,W)
                    if din == 0:
                        dout = 2
                    elif din == 2:
                        dout = 0
                    elif din == 1:
                        dout = 3
                    else:
                        dout = 1
                else:
                    if n_in and din != 0:
                        dout = 0
                    elif s_in and din != 1:
                        dout = 1
                    elif w_in and din != 2:
                        dout = 2
                    else:
                        dout = 3
                if dout == 0:
                    if vmask[ci - 1, cj] == 2:
                        break
                    vmask[ci - 1, cj] = 2
                    vrows[n_edges] = ci - 1
                    vcols[n_edges] = cj
                    n_edges += 1
                    area2 -= cj
                    ci -= 1
                    din = 1
                elif dout == 1:
                    if vmask[ci, cj] == 2:
                        break
                    vmask[ci, cj] = 2
                    vrows[n_edges] = ci
                    vcols[n_edges] = cj
                    n_edges += 1
                    area2 += cj
                    ci += 1
                    din = 0
                elif dout == 2:
                    if hmask[ci, cj - 1] == 2:
                        break
                    hmask[ci, cj - 1] = 2
                    area2 += ci
                    cj -= 1
                    din = 3
                else:
                    if hmask[ci, cj] == 2:
                        break
                    hmask[ci, cj] = 2
                    area2 -= ci
                    cj += 1
                    din = 2
                length += 1
                if ci < min_i:
                    min_i = ci
                if ci > max_i:
                    max_i = ci
                if cj < min_j:
                    min_j = cj
                if cj > max_j:
                    max_j = cj
            lengths[count] = length
            di = max_i - min_i
            dj = max_j - min_j
            diams[count] = di if di > dj else dj
            vols[count] = (area2 if area2 > 0 else -area2) // 2
            # start edge is the contour's first vertical edge in scan order,
            # so the cell to its right is interior
            inner_spins[count] = s[si + 1, sj + 1]
            starts[count + 1] = n_edges
            count += 1
    return count


@njit(cache=True, nogil=True)
def paint_interior_depth(L, count, starts, vrows, vcols, depth):
    """Increment depth over each contour's interior by row-wise parity.

    After the call depth[i, j] is the number of contours containing cell
    (i, j); a contour's nesting depth is depth at its first interior cell
    minus one.
    """
    cols = np.empty(L + 1, dtype=np.int64)
    for k in range(count):
        lo = starts[k]
        hi = starts[k + 1]
        rmin = L
        rmax = -1
        for t in range(lo, hi):
            if vrows[t] < rmin:
                rmin = vrows[t]
            if vrows[t] > rmax:
                rmax = vrows[t]
        for r in range(rmin, rmax + 1):
            nc = 0
            for t in range(lo, hi):
                if vrows[t] == r:
                    cols[nc] = vcols[t]
                    nc += 1
            # insertion sort: crossing columns per row are few
            for a in range(1, nc):
                key = cols[a]
                b = a - 1
                while b >= 0 and cols[b] > key:
                    cols[b + 1] = cols[b]
                    b -= 1
                cols[b + 1] = key
            for a in range(0, nc, 2):
                for c in range(cols[a], cols[a + 1]):
                    depth[r, c] += 1
