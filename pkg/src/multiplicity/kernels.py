"""Hot loops: marching-squares segment extraction, segment linking, streamlines.

Each kernel has a numba implementation (``*_nb``) and a pure numpy/Python
one (``*_np``); the public name is bound to the numba one unless
``MULTIPLICITY_NO_NUMBA=1``.  Both paths must stay result-identical, which
the test suite checks.

Grid conventions: node ``(i, j)`` has x index ``j`` and y index ``i``.  Edge
ids are horizontal edges ``i*(n-1) + j`` followed by vertical edges
``n*(n-1) + i*n + j``.
"""
import numpy as np

from ._accel import USE_NUMBA, optional_njit


# ---------------------------------------------------------------------------
# marching squares


@optional_njit(cache=True)
def cell_segments_nb(pos, center_pos, active):
    n = pos.shape[0]
    nh = n * (n - 1)
    m = n - 1
    segs = np.empty((2 * m * m, 2), dtype=np.int64)
    saddles = np.empty(m * m, dtype=np.int64)
    ns = 0
    nsad = 0
    e = np.empty(4, dtype=np.int64)
    x = np.empty(4, dtype=np.bool_)
    for i in range(m):
        for j in range(m):
            if not active[i, j]:
                continue
            s0 = pos[i, j]
            s1 = pos[i, j + 1]
            s2 = pos[i + 1, j + 1]
            s3 = pos[i + 1, j]
            x[0] = s0 != s1
            x[1] = s1 != s2
            x[2] = s2 != s3
            x[3] = s3 != s0
            e[0] = i * m + j
            e[1] = nh + i * n + j + 1
            e[2] = (i + 1) * m + j
            e[3] = nh + i * n + j
            if x[0] and x[1] and x[2] and x[3]:
                saddles[nsad] = i * m + j
                nsad += 1
                if center_pos[i, j] == s0:
                    segs[ns, 0] = e[0]; segs[ns, 1] = e[1]
                    segs[ns + 1, 0] = e[2]; segs[ns + 1, 1] = e[3]
                else:
                    segs[ns, 0] = e[3]; segs[ns, 1] = e[0]
                    segs[ns + 1, 0] = e[1]; segs[ns + 1, 1] = e[2]
                ns += 2
            else:
                k = 0
                for t in range(4):
                    if x[t]:
                        segs[ns, k] = e[t]
                        k += 1
                if k == 2:
                    ns += 1
    return segs[:ns].copy(), saddles[:nsad].copy()


def cell_segments_np(pos, center_pos, active):
    n = pos.shape[0]
    m = n - 1
    nh = n * (n - 1)
    s0 = pos[:-1, :-1]
    s1 = pos[:-1, 1:]
    s2 = pos[1:, 1:]
    s3 = pos[1:, :-1]
    x = np.stack([s0 != s1, s1 != s2, s2 != s3, s3 != s0], axis=-1) & active[..., None]
    ii, jj = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    e = np.stack([ii * m + jj, nh + ii * n + jj + 1, (ii + 1) * m + jj, nh + ii * n + jj], axis=-1)
    count = x.sum(axis=-1)

    single = count == 2
    # the two crossed edges of a non-saddle cell, in edge order
    order = np.argsort(~x[single], axis=-1, kind="stable")[:, :2]
    e_single = np.take_along_axis(e[single], order, axis=-1)
    cell_single = (ii * m + jj)[single]

    saddle = count == 4
    es = e[saddle]
    same = (center_pos == s0)[saddle]
    first = np.where(same[:, None], es[:, [0, 1]], es[:, [3, 0]])
    second = np.where(same[:, None], es[:, [2, 3]], es[:, [1, 2]])
    cell_saddle = (ii * m + jj)[saddle]

    # emit in cell order with saddle pairs adjacent to match the numba kernel
    cells = np.concatenate([cell_single, cell_saddle, cell_saddle])
    rank = np.concatenate([np.zeros(cell_single.size), np.zeros(cell_saddle.size), np.ones(cell_saddle.size)])
    segs = np.concatenate([e_single, first, second]).astype(np.int64)
    idx = np.lexsort((rank, cells))
    return segs[idx].reshape(-1, 2), cell_saddle.astype(np.int64)


# ---------------------------------------------------------------------------
# segment linking


@optional_njit(cache=True)
def link_segments_nb(segs, n_edges):
    ns = segs.shape[0]
    inc0 = np.full(n_edges, -1, dtype=np.int64)
    inc1 = np.full(n_edges, -1, dtype=np.int64)
    for s in range(ns):
        for k in range(2):
            ed = segs[s, k]
            if inc0[ed] < 0:
                inc0[ed] = s
            else:
                inc1[ed] = s
    used = np.zeros(ns, dtype=np.bool_)
    order = np.empty(2 * ns + 1, dtype=np.int64)
    offsets = np.empty(ns + 2, dtype=np.int64)
    closed = np.empty(ns + 1, dtype=np.bool_)
    no = 0
    nc = 0
    offsets[0] = 0
    for phase in range(2):
        for s0 in range(ns):
            if used[s0]:
                continue
            if phase == 0:
                # open chains start at an edge with a single incidence
                a = segs[s0, 0]
                b = segs[s0, 1]
                if inc1[a] < 0:
                    start = a
                elif inc1[b] < 0:
                    start = b
                else:
                    continue
            else:
                start = segs[s0, 0]
            ed = start
            s = s0
            order[no] = ed
            no += 1
            while True:
                used[s] = True
                nxt = segs[s, 1] if segs[s, 0] == ed else segs[s, 0]
                ed = nxt
                if phase == 1 and ed == start:
                    break
                order[no] = ed
                no += 1
                c = inc0[ed] if inc0[ed] != s else inc1[ed]
                if c < 0 or used[c]:
                    break
                s = c
            closed[nc] = phase == 1
            nc += 1
            offsets[nc] = no
    return order[:no].copy(), offsets[: nc + 1].copy(), closed[:nc].copy()


def link_segments_np(segs, n_edges):
    incid = {}
    for s, (a, b) in enumerate(segs.tolist()):
        incid.setdefault(a, []).append(s)
        incid.setdefault(b, []).append(s)
    used = [False] * len(segs)
    order, offsets, closed = [], [0], []
    seg_list = segs.tolist()
    for phase in (0, 1):
        for s0 in range(len(seg_list)):
            if used[s0]:
                continue
            a, b = seg_list[s0]
            if phase == 0:
                if len(incid[a]) == 1:
                    start = a
                elif len(incid[b]) == 1:
                    start = b
                else:
                    continue
            else:
                start = a
            ed, s = start, s0
            order.append(ed)
            while True:
                used[s] = True
                x, y = seg_list[s]
                ed = y if x == ed else x
                if phase == 1 and ed == start:
                    break
                order.append(ed)
                nxt = [c for c in incid[ed] if c != s and not used[c]]
                if not nxt:
                    break
                s = nxt[0]
            closed.append(phase == 1)
            offsets.append(len(order))
    return (np.array(order, dtype=np.int64), np.array(offsets, dtype=np.int64),
            np.array(closed, dtype=bool))


# ---------------------------------------------------------------------------
# streamlines of grad f, fixed-step RK4 on the unit direction field


@optional_njit(cache=True)
def _horner(desc, c):
    acc = 0j
    for k in range(desc.shape[0]):
        acc = acc * c + desc[k]
    return acc


@optional_njit(cache=True)
def _grad_point(qd, q1d, pd, p1d, c):
    a = 2.0 / (1.0 + c.real * c.real + c.imag * c.imag)
    p = _horner(pd, c)
    p1 = _horner(p1d, c)
    q = _horner(qd, c)
    q1 = _horner(q1d, c)
    gp = 2.0 * p * np.conj(p1) * a ** 6 - 6.0 * a ** 7 * c * abs(p) ** 2
    gq = 2.0 * q * np.conj(q1) * a ** 2 - 2.0 * a ** 3 * c * abs(q) ** 2
    return gp - gq


@optional_njit(cache=True)
def _unit_dir(qd, q1d, pd, p1d, c, sign, stop):
    g = _grad_point(qd, q1d, pd, p1d, c)
    m = abs(g)
    if m < stop:
        return 0j, m
    return sign * g / m, m


@optional_njit(cache=True)
def streamlines_nb(qd, q1d, pd, p1d, seeds, step, max_steps, sign, half_width, stop):
    ns = seeds.shape[0]
    paths = np.empty((ns, max_steps + 1), dtype=np.complex128)
    counts = np.zeros(ns, dtype=np.int64)
    for s in range(ns):
        c = seeds[s]
        paths[s, 0] = c
        k = 1
        while k <= max_steps:
            k1, m = _unit_dir(qd, q1d, pd, p1d, c, sign, stop)
            if m < stop:
                break
            k2, m2 = _unit_dir(qd, q1d, pd, p1d, c + 0.5 * step * k1, sign, stop)
            k3, m3 = _unit_dir(qd, q1d, pd, p1d, c + 0.5 * step * k2, sign, stop)
            k4, m4 = _unit_dir(qd, q1d, pd, p1d, c + step * k3, sign, stop)
            d = (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
            # a reversal of direction means we stepped over a critical point
            if (d.real * k1.real + d.imag * k1.imag) < 0.0:
                break
            c = c + step * d
            paths[s, k] = c
            k += 1
            if abs(c.real) > half_width or abs(c.imag) > half_width:
                break
        counts[s] = k
    return paths, counts


def _grad_vec(qd, q1d, pd, p1d, c):
    a = 2.0 / (1.0 + c.real ** 2 + c.imag ** 2)
    p = np.polyval(pd, c)
    p1 = np.polyval(p1d, c)
    q = np.polyval(qd, c)
    q1 = np.polyval(q1d, c)
    gp = 2.0 * p * np.conj(p1) * a ** 6 - 6.0 * a ** 7 * c * np.abs(p) ** 2
    gq = 2.0 * q * np.conj(q1) * a ** 2 - 2.0 * a ** 3 * c * np.abs(q) ** 2
    return gp - gq


def streamlines_np(qd, q1d, pd, p1d, seeds, step, max_steps, sign, half_width, stop):
    seeds = np.asarray(seeds, dtype=complex)
    ns = seeds.size
    paths = np.empty((ns, max_steps + 1), dtype=complex)
    paths[:, 0] = seeds
    counts = np.ones(ns, dtype=np.int64)
    live = np.ones(ns, dtype=bool)
    c = seeds.copy()

    def unit(x):
        g = _grad_vec(qd, q1d, pd, p1d, x)
        m = np.abs(g)
        with np.errstate(invalid="ignore", divide="ignore"):
            u = np.where(m < stop, 0j, sign * g / m)
        return u, m

    for k in range(1, max_steps + 1):
        if not live.any():
            break
        idx = np.nonzero(live)[0]
        x = c[idx]
        k1, m1 = unit(x)
        k2, _ = unit(x + 0.5 * step * k1)
        k3, _ = unit(x + 0.5 * step * k2)
        k4, _ = unit(x + step * k3)
        d = (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
        halt = (m1 < stop) | ((d.real * k1.real + d.imag * k1.imag) < 0.0)
        go = idx[~halt]
        live[idx[halt]] = False
        c[go] = x[~halt] + step * d[~halt]
        paths[go, k] = c[go]
        counts[go] = k + 1
        out = (np.abs(c[go].real) > half_width) | (np.abs(c[go].imag) > half_width)
        live[go[out]] = False
    return paths, counts


if USE_NUMBA:
    cell_segments = cell_segments_nb
    link_segments = link_segments_nb
    streamlines = streamlines_nb
else:
    cell_segments = cell_segments_np
    link_segments = link_segments_np
    streamlines = streamlines_np
