"""Jitted inner loops: hashing, packed codecs, and the event engine.

Everything here mirrors the pure-Python definitions in ``graphs`` and is
shared by the simulator, the cluster explorer, and tests.  Sampling is
counter-based: a passage time is a pure function of (seed, edge, color),
so infinite graphs need no pregenerated randomness and any edge can be
re-queried independently of simulation order.

The event queue is a calendar ring of fixed-width time slabs feeding a
small 4-ary heap.  Events land in their slab's bucket on push and are
heapified only when the simulation clock enters that slab, which keeps
the heap cache-resident even for runs with millions of pending events.
Total pop order is by (fire time, payload); the payload packs the color
into its top bit with blue below red, so simultaneous events resolve
blue-first deterministically.
"""
import numpy as np
from numba import njit, types
from numba.typed import Dict

EMPTY = 0
RED = 1
BLUE = 2

HALF_LINE = 0
LINE = 1
LADDER = 2
TREE = 3
LATTICE = 4
ORIENTED = 5

EXPONENTIAL = 0
ATOMIC = 1

STATUS_EXTINCT = 0
STATUS_REACHED = 1
STATUS_CENSORED = 2

RING = 64
INF = np.inf

_U = np.uint64
_GOLD = _U(0x9E3779B97F4A7C15)
_MULA = _U(0xBF58476D1CE4E5B9)
_MULB = _U(0x94D049BB133111EB)
_MULC = _U(0xC2B2AE3D27D4EB4F)


@njit(cache=True, nogil=True, inline="always")
def _mix(z):
    z = (z ^ (z >> _U(30))) * _MULA
    z = (z ^ (z >> _U(27))) * _MULB
    return z ^ (z >> _U(31))


@njit(cache=True, nogil=True)
def derive_seed(base_seed, index):
    """Per-run seed stream, collision-resistant mix of base seed and index."""
    h = _mix(_U(base_seed) ^ _GOLD)
    h = _mix(h ^ (_U(index) * _MULC))
    return np.int64(h)


@njit(cache=True, nogil=True, inline="always")
def edge_uniform(seed, a, b, color):
    """Uniform in (0,1), a pure function of (seed, edge endpoints, color)."""
    h = _mix(_U(seed) ^ (_U(a) * _GOLD))
    h = _mix(h ^ (_U(b) * _MULC))
    h = _mix(h ^ _U(color))
    return (np.float64(h >> _U(11)) + 0.5) * (2.0 ** -53)


@njit(cache=True, nogil=True, inline="always")
def passage_from_uniform(u, color, model_kind, mp, mm):
    # exponential: red rate mp, blue rate 1; atomic: open prob mp, blue lag mm
    if model_kind == EXPONENTIAL:
        if color == RED:
            return -np.log1p(-u) / mp
        return -np.log1p(-u)
    if color == RED:
        return 1.0 if u < mp else INF
    return 0.0 if u < mp else mm


# ---- packed codecs (mirror graphs.Topology exactly) ----------------------


@njit(cache=True, nogil=True, inline="always")
def _zz(x):
    return 2 * x if x >= 0 else -2 * x - 1


@njit(cache=True, nogil=True, inline="always")
def _unzz(z):
    return z >> 1 if (z & 1) == 0 else -((z + 1) >> 1)


@njit(cache=True, nogil=True)
def key_to_coords(kind, dim, bits, key, out):
    for j in range(dim):
        out[j] = 0
    for i in range(bits):
        for j in range(dim):
            out[j] |= ((key >> (i * dim + j)) & 1) << i
    if kind == LATTICE:
        for j in range(dim):
            out[j] = _unzz(out[j])


@njit(cache=True, nogil=True)
def coords_to_key(kind, dim, bits, coords):
    key = np.int64(0)
    for j in range(dim):
        c = coords[j] if kind != LATTICE else _zz(coords[j])
        for i in range(bits):
            key |= ((c >> i) & 1) << (i * dim + j)
    return key


@njit(cache=True, nogil=True)
def lattice_roundtrip_ok(kind, dim, bits, keys):
    scratch = np.empty(dim, dtype=np.int64)
    for idx in range(keys.shape[0]):
        key_to_coords(kind, dim, bits, keys[idx], scratch)
        if coords_to_key(kind, dim, bits, scratch) != keys[idx]:
            return False
    return True


@njit(cache=True, nogil=True)
def dist_for_key(kind, param, key):
    """Root distance of a packed key (AUX is never passed here)."""
    if kind == HALF_LINE:
        return key
    if kind == LINE:
        x = _unzz(key)
        return x if x >= 0 else -x
    if kind == LADDER:
        x = _unzz(key >> 1)
        return (x if x >= 0 else -x) + (key & 1)
    if kind == TREE:
        depth = np.int64(0)
        k = key
        while k > 0:
            k = (k - 1) // param
            depth += 1
        return depth
    bits = 63 // param
    scratch = np.empty(param, dtype=np.int64)
    key_to_coords(kind, param, bits, key, scratch)
    s = np.int64(0)
    for j in range(param):
        c = scratch[j]
        s += c if c >= 0 else -c
    return s


# ---- the event engine -----------------------------------------------------
#
# Site addressing is per topology family:
#   flat  (half-line / line / ladder): keys are already dense, index = key+1
#   tree: discovery order, children of a vertex get d consecutive slots
#   dict (lattices): hash map from packed key to discovery index
# Dense index 0 is always the auxiliary blue vertex.


@njit(cache=True, nogil=True)
def run_core(kind, param, model_kind, mp, mm, seed,
             max_radius, max_events, max_time, flat_cap,
             record_sites, record_trace, record_holes):
    d = param
    bits = 63 // param if param > 0 else 0
    oriented = kind == ORIENTED
    mode_flat = kind <= LADDER
    mode_tree = kind == TREE

    scratch = np.empty(param if param > 0 else 1, dtype=np.int64)
    max_deg = 3 if kind <= LINE else (4 if kind == LADDER else
                                      (d + 1 if kind == TREE else 2 * d + 1))
    nb_keys = np.empty(max_deg, dtype=np.int64)

    # site state
    if mode_flat:
        cap = flat_cap
    else:
        cap = 1 << 12
    code = np.empty(cap, dtype=np.int64)
    color = np.empty(cap, dtype=np.uint8)
    dist = np.empty(cap, dtype=np.int32)
    parent = np.empty(cap if mode_tree else 1, dtype=np.int32)
    cbase = np.empty(cap if mode_tree else 1, dtype=np.int32)
    site_index = Dict.empty(types.int64, types.int64)
    if mode_flat:
        for i in range(cap):
            color[i] = EMPTY
        nsite = cap
        for i in range(cap):
            code[i] = i - 1
    else:
        code[0] = -1
        color[0] = BLUE
        dist[0] = -1
        code[1] = 0
        color[1] = RED
        dist[1] = 0
        if mode_tree:
            parent[0] = -1
            cbase[0] = -1
            parent[1] = 0
            cbase[1] = -1
        else:
            site_index[np.int64(-1)] = 0
            site_index[np.int64(0)] = 1
        nsite = 2
    root = 1
    if mode_flat:
        color[0] = BLUE
        color[1] = RED

    track_times = record_sites != 0
    tcap = cap if track_times else 1
    red_t = np.full(tcap, np.nan, dtype=np.float64)
    blue_t = np.full(tcap, np.nan, dtype=np.float64)
    if track_times:
        red_t[root] = 0.0
        blue_t[0] = 0.0

    # calendar queue
    if model_kind == ATOMIC:
        delta = 1.0
    else:
        delta = 0.125 / mp if mp > 1.0 else 0.125
    hcap = 1 << 10
    qt = np.empty(hcap, dtype=np.float64)
    qp = np.empty(hcap, dtype=np.int64)
    hn = 0
    bcap = 1 << 8
    bt = np.empty((RING, bcap), dtype=np.float64)
    bp = np.empty((RING, bcap), dtype=np.int64)
    bn = np.zeros(RING, dtype=np.int64)
    ocap = 1 << 8
    ot = np.empty(ocap, dtype=np.float64)
    op = np.empty(ocap, dtype=np.int64)
    on = 0
    cur = np.int64(0)
    repart_at = np.int64(RING)
    pending = 0

    # trace / hole recording
    trcap = 1 << 10 if record_trace else 1
    tr_t = np.empty(trcap, dtype=np.float64)
    tr_src = np.empty(trcap, dtype=np.int64)
    tr_dst = np.empty(trcap, dtype=np.int64)
    tr_col = np.empty(trcap, dtype=np.uint8)
    tr_app = np.empty(trcap, dtype=np.uint8)
    trn = 0
    hscap = 1 << 10 if record_holes else 1
    hs_t = np.empty(hscap, dtype=np.float64)
    hs_h = np.empty(hscap, dtype=np.int64)
    hsn = 0
    col_red = np.zeros((flat_cap >> 1) + 2 if record_holes else 1, dtype=np.uint8)
    holes = 0

    live_red = 1
    ever_red = 1
    max_rad = np.int64(0)
    events = np.int64(0)
    status = STATUS_CENSORED
    ext_time = np.nan

    pend_dense = root          # vertex that just turned red, schedule next
    pend_t = 0.0

    while True:
        # -------- scheduling for a vertex that just turned red ------------
        if pend_dense >= 0:
            v = pend_dense
            t0 = pend_t
            pend_dense = -1
            vkey = code[v]

            # collect out-neighbors (and allocate their slots)
            if mode_tree:
                if cbase[v] < 0:
                    if nsite + d > cap:
                        ncap = cap * 2
                        while nsite + d > ncap:
                            ncap *= 2
                        t8 = np.empty(ncap, dtype=np.int64); t8[:cap] = code; code = t8
                        t1 = np.empty(ncap, dtype=np.uint8); t1[:cap] = color; color = t1
                        t4 = np.empty(ncap, dtype=np.int32); t4[:cap] = dist; dist = t4
                        t4 = np.empty(ncap, dtype=np.int32); t4[:cap] = parent; parent = t4
                        t4 = np.empty(ncap, dtype=np.int32); t4[:cap] = cbase; cbase = t4
                        if track_times:
                            tf8 = np.empty(ncap, dtype=np.float64); tf8[:cap] = red_t; red_t = tf8
                            tf8 = np.empty(ncap, dtype=np.float64); tf8[:cap] = blue_t; blue_t = tf8
                            for z in range(cap, ncap):
                                red_t[z] = np.nan
                                blue_t[z] = np.nan
                        cap = ncap
                    cbase[v] = nsite
                    dp = dist[v] + 1
                    for i in range(d):
                        w = nsite + i
                        code[w] = vkey * d + 1 + i
                        dist[w] = dp
                        parent[w] = v
                        cbase[w] = -1
                        color[w] = EMPTY
                        if track_times:
                            red_t[w] = np.nan
                            blue_t[w] = np.nan
                    nsite += d
                nout = d + 1
                base = cbase[v]
                for i in range(d):
                    nb_keys[i] = base + i          # dense, not key, for trees
                nb_keys[d] = parent[v]
            elif mode_flat:
                if kind == HALF_LINE:
                    if vkey == 0:
                        nb_keys[0] = 1
                        nb_keys[1] = -1
                        nout = 2
                    else:
                        nb_keys[0] = vkey - 1
                        nb_keys[1] = vkey + 1
                        nout = 2
                elif kind == LINE:
                    x = _unzz(vkey)
                    nb_keys[0] = _zz(x - 1)
                    nb_keys[1] = _zz(x + 1)
                    nout = 2
                    if vkey == 0:
                        nb_keys[2] = -1
                        nout = 3
                else:  # ladder
                    x = _unzz(vkey >> 1)
                    y = vkey & 1
                    nb_keys[0] = _zz(x - 1) * 2 + y
                    nb_keys[1] = _zz(x + 1) * 2 + y
                    nb_keys[2] = _zz(x) * 2 + (1 - y)
                    nout = 3
                    if vkey == 0:
                        nb_keys[3] = -1
                        nout = 4
            else:
                key_to_coords(kind, d, bits, vkey, scratch)
                nout = 0
                for j in range(d):
                    cj = scratch[j]
                    scratch[j] = cj + 1
                    nb_keys[nout] = coords_to_key(kind, d, bits, scratch)
                    nout += 1
                    if not oriented:
                        scratch[j] = cj - 1
                        nb_keys[nout] = coords_to_key(kind, d, bits, scratch)
                        nout += 1
                    scratch[j] = cj
                if not oriented and vkey == 0:
                    nb_keys[nout] = -1
                    nout += 1

            # room for this event's pushes plus the oriented in-scan
            need = hn + nout + (d if oriented else 0) + 1
            while need > hcap:
                ncap = hcap * 2
                tf8 = np.empty(ncap, dtype=np.float64); tf8[:hcap] = qt; qt = tf8
                t8 = np.empty(ncap, dtype=np.int64); t8[:hcap] = qp; qp = t8
                hcap = ncap

            for i in range(nout):
                if mode_tree:
                    w = np.int64(nb_keys[i])
                    wkey = code[w]
                else:
                    wkey = nb_keys[i]
                    if mode_flat:
                        w = wkey + 1
                    else:
                        w = site_index.get(wkey, np.int64(-2))
                cw = EMPTY if w == -2 else color[w]
                if cw == EMPTY:
                    u = edge_uniform(seed, vkey if vkey < wkey else wkey,
                                     wkey if vkey < wkey else vkey, RED) \
                        if not oriented else edge_uniform(seed, vkey, wkey, RED)
                    tf = t0 + passage_from_uniform(u, RED, model_kind, mp, mm)
                    if tf != INF:
                        if w == -2:
                            if nsite + 1 > cap:
                                ncap = cap * 2
                                t8 = np.empty(ncap, dtype=np.int64); t8[:cap] = code; code = t8
                                t1 = np.empty(ncap, dtype=np.uint8); t1[:cap] = color; color = t1
                                t4 = np.empty(ncap, dtype=np.int32); t4[:cap] = dist; dist = t4
                                if track_times:
                                    tf8 = np.empty(ncap, dtype=np.float64); tf8[:cap] = red_t; red_t = tf8
                                    tf8 = np.empty(ncap, dtype=np.float64); tf8[:cap] = blue_t; blue_t = tf8
                                    for z in range(cap, ncap):
                                        red_t[z] = np.nan
                                        blue_t[z] = np.nan
                                cap = ncap
                            w = nsite
                            nsite += 1
                            code[w] = wkey
                            color[w] = EMPTY
                            dist[w] = dist_for_key(kind, d, wkey)
                            if track_times:
                                red_t[w] = np.nan
                                blue_t[w] = np.nan
                            site_index[wkey] = w
                        pp = (np.int64(1) << 62) | (np.int64(v) << 31) | np.int64(w)
                        # push
                        slab = np.int64(tf / delta)
                        if slab <= cur:
                            j = hn
                            hn += 1
                            while j > 0:
                                pj = (j - 1) >> 2
                                if qt[pj] > tf or (qt[pj] == tf and qp[pj] > pp):
                                    qt[j] = qt[pj]; qp[j] = qp[pj]
                                    j = pj
                                else:
                                    break
                            qt[j] = tf; qp[j] = pp
                        elif slab < repart_at:
                            b = slab & (RING - 1)
                            if bn[b] == bcap:
                                ncap = bcap * 2
                                nbt = np.empty((RING, ncap), dtype=np.float64)
                                nbp = np.empty((RING, ncap), dtype=np.int64)
                                for r in range(RING):
                                    for z in range(bn[r]):
                                        nbt[r, z] = bt[r, z]
                                        nbp[r, z] = bp[r, z]
                                bt = nbt; bp = nbp; bcap = ncap
                            bt[b, bn[b]] = tf
                            bp[b, bn[b]] = pp
                            bn[b] += 1
                        else:
                            if on == ocap:
                                ncap = ocap * 2
                                tf8 = np.empty(ncap, dtype=np.float64); tf8[:ocap] = ot; ot = tf8
                                t8 = np.empty(ncap, dtype=np.int64); t8[:ocap] = op; op = t8
                                ocap = ncap
                            ot[on] = tf
                            op[on] = pp
                            on += 1
                        pending += 1
                elif cw == BLUE and not oriented:
                    # blue neighbor sees this fresh red site
                    u = edge_uniform(seed, vkey if vkey < wkey else wkey,
                                     wkey if vkey < wkey else vkey, BLUE)
                    tf = t0 + passage_from_uniform(u, BLUE, model_kind, mp, mm)
                    pp = (np.int64(w) << 31) | np.int64(v)
                    slab = np.int64(tf / delta)
                    if slab <= cur:
                        j = hn
                        hn += 1
                        while j > 0:
                            pj = (j - 1) >> 2
                            if qt[pj] > tf or (qt[pj] == tf and qp[pj] > pp):
                                qt[j] = qt[pj]; qp[j] = qp[pj]
                                j = pj
                            else:
                                break
                        qt[j] = tf; qp[j] = pp
                    elif slab < repart_at:
                        b = slab & (RING - 1)
                        if bn[b] == bcap:
                            ncap = bcap * 2
                            nbt = np.empty((RING, ncap), dtype=np.float64)
                            nbp = np.empty((RING, ncap), dtype=np.int64)
                            for r in range(RING):
                                for z in range(bn[r]):
                                    nbt[r, z] = bt[r, z]
                                    nbp[r, z] = bp[r, z]
                            bt = nbt; bp = nbp; bcap = ncap
                        bt[b, bn[b]] = tf
                        bp[b, bn[b]] = pp
                        bn[b] += 1
                    else:
                        if on == ocap:
                            ncap = ocap * 2
                            tf8 = np.empty(ncap, dtype=np.float64); tf8[:ocap] = ot; ot = tf8
                            t8 = np.empty(ncap, dtype=np.int64); t8[:ocap] = op; op = t8
                            ocap = ncap
                        ot[on] = tf
                        op[on] = pp
                        on += 1
                    pending += 1

            if oriented:
                # in-neighbors are the only possible blue sources
                key_to_coords(kind, d, bits, vkey, scratch)
                for j in range(d + 1):
                    if j < d:
                        if scratch[j] == 0:
                            continue
                        scratch[j] -= 1
                        wkey = coords_to_key(kind, d, bits, scratch)
                        scratch[j] += 1
                    else:
                        if vkey != 0:
                            continue
                        wkey = np.int64(-1)
                    w = site_index.get(wkey, np.int64(-2))
                    if w == -2 or color[w] != BLUE:
                        continue
                    u = edge_uniform(seed, wkey, vkey, BLUE)
                    tf = t0 + passage_from_uniform(u, BLUE, model_kind, mp, mm)
                    pp = (np.int64(w) << 31) | np.int64(v)
                    slab = np.int64(tf / delta)
                    if slab <= cur:
                        jj = hn
                        hn += 1
                        while jj > 0:
                            pj = (jj - 1) >> 2
                            if qt[pj] > tf or (qt[pj] == tf and qp[pj] > pp):
                                qt[jj] = qt[pj]; qp[jj] = qp[pj]
                                jj = pj
                            else:
                                break
                        qt[jj] = tf; qp[jj] = pp
                    elif slab < repart_at:
                        b = slab & (RING - 1)
                        if bn[b] == bcap:
                            ncap = bcap * 2
                            nbt = np.empty((RING, ncap), dtype=np.float64)
                            nbp = np.empty((RING, ncap), dtype=np.int64)
                            for r in range(RING):
                                for z in range(bn[r]):
                                    nbt[r, z] = bt[r, z]
                                    nbp[r, z] = bp[r, z]
                            bt = nbt; bp = nbp; bcap = ncap
                        bt[b, bn[b]] = tf
                        bp[b, bn[b]] = pp
                        bn[b] += 1
                    else:
                        if on == ocap:
                            ncap = ocap * 2
                            tf8 = np.empty(ncap, dtype=np.float64); tf8[:ocap] = ot; ot = tf8
                            t8 = np.empty(ncap, dtype=np.int64); t8[:ocap] = op; op = t8
                            ocap = ncap
                        ot[on] = tf
                        op[on] = pp
                        on += 1
                    pending += 1
            continue

        # -------- pop the next event --------------------------------------
        while hn == 0:
            if pending == 0:
                break
            cur += 1
            if cur == repart_at:
                keep = 0
                limit = repart_at + RING
                for z in range(on):
                    slab = np.int64(ot[z] / delta)
                    if slab < limit:
                        b = slab & (RING - 1)
                        if bn[b] == bcap:
                            ncap = bcap * 2
                            nbt = np.empty((RING, ncap), dtype=np.float64)
                            nbp = np.empty((RING, ncap), dtype=np.int64)
                            for r in range(RING):
                                for y in range(bn[r]):
                                    nbt[r, y] = bt[r, y]
                                    nbp[r, y] = bp[r, y]
                            bt = nbt; bp = nbp; bcap = ncap
                        bt[b, bn[b]] = ot[z]
                        bp[b, bn[b]] = op[z]
                        bn[b] += 1
                    else:
                        ot[keep] = ot[z]
                        op[keep] = op[z]
                        keep += 1
                on = keep
                repart_at += RING
            b = cur & (RING - 1)
            m = bn[b]
            if m > 0:
                need = hn + m
                while need > hcap:
                    ncap = hcap * 2
                    tf8 = np.empty(ncap, dtype=np.float64); tf8[:hcap] = qt; qt = tf8
                    t8 = np.empty(ncap, dtype=np.int64); t8[:hcap] = qp; qp = t8
                    hcap = ncap
                for z in range(m):
                    tf = bt[b, z]
                    pp = bp[b, z]
                    j = hn
                    hn += 1
                    while j > 0:
                        pj = (j - 1) >> 2
                        if qt[pj] > tf or (qt[pj] == tf and qp[pj] > pp):
                            qt[j] = qt[pj]; qp[j] = qp[pj]
                            j = pj
                        else:
                            break
                    qt[j] = tf; qp[j] = pp
                bn[b] = 0
        if hn == 0:
            status = STATUS_EXTINCT if live_red == 0 else STATUS_CENSORED
            break

        t = qt[0]
        pp = qp[0]
        hn -= 1
        if hn > 0:
            tl = qt[hn]; pl = qp[hn]
            j = 0
            while True:
                c0 = 4 * j + 1
                if c0 >= hn:
                    break
                cm = c0
                tm = qt[c0]; pm = qp[c0]
                last = c0 + 4
                if last > hn:
                    last = hn
                for c in range(c0 + 1, last):
                    if qt[c] < tm or (qt[c] == tm and qp[c] < pm):
                        cm = c; tm = qt[c]; pm = qp[c]
                if tm < tl or (tm == tl and pm < pl):
                    qt[j] = tm; qp[j] = pm
                    j = cm
                else:
                    break
            qt[j] = tl; qp[j] = pl
        pending -= 1

        if t > max_time:
            status = STATUS_CENSORED
            break
        events += 1
        if events > max_events:
            status = STATUS_CENSORED
            break

        is_red = (pp >> 62) != 0
        src = (pp >> 31) & np.int64(0x7FFFFFFF)
        dst = pp & np.int64(0x7FFFFFFF)
        applied = False

        if is_red:
            if color[src] == RED and color[dst] == EMPTY:
                applied = True
                color[dst] = RED
                if track_times:
                    red_t[dst] = t
                ever_red += 1
                live_red += 1
                dd = np.int64(dist[dst]) if not mode_flat else \
                    dist_for_key(kind, d, code[dst])
                if dd > max_rad:
                    max_rad = dd
                if record_holes:
                    cidx = code[dst] >> 1
                    cc = col_red[cidx]
                    if cc == 0:
                        holes += 1
                    elif cc == 1:
                        holes -= 1
                    col_red[cidx] = cc + 1
                if record_trace:
                    if trn == trcap:
                        ncap = trcap * 2
                        tf8 = np.empty(ncap, dtype=np.float64); tf8[:trcap] = tr_t; tr_t = tf8
                        t8 = np.empty(ncap, dtype=np.int64); t8[:trcap] = tr_src; tr_src = t8
                        t8 = np.empty(ncap, dtype=np.int64); t8[:trcap] = tr_dst; tr_dst = t8
                        t1 = np.empty(ncap, dtype=np.uint8); t1[:trcap] = tr_col; tr_col = t1
                        t1 = np.empty(ncap, dtype=np.uint8); t1[:trcap] = tr_app; tr_app = t1
                        trcap = ncap
                    tr_t[trn] = t; tr_src[trn] = code[src]; tr_dst[trn] = code[dst]
                    tr_col[trn] = RED; tr_app[trn] = 1
                    trn += 1
                if record_holes:
                    if hsn == hscap:
                        ncap = hscap * 2
                        tf8 = np.empty(ncap, dtype=np.float64); tf8[:hscap] = hs_t; hs_t = tf8
                        t8 = np.empty(ncap, dtype=np.int64); t8[:hscap] = hs_h; hs_h = t8
                        hscap = ncap
                    hs_t[hsn] = t; hs_h[hsn] = holes
                    hsn += 1
                if dd >= max_radius:
                    status = STATUS_REACHED
                    break
                pend_dense = dst
                pend_t = t
                continue
        else:
            if color[src] == BLUE and color[dst] == RED:
                applied = True
                color[dst] = BLUE
                if track_times:
                    blue_t[dst] = t
                live_red -= 1
                if record_holes:
                    cidx = code[dst] >> 1
                    cc = col_red[cidx]
                    if cc == 2:
                        holes += 1
                    elif cc == 1:
                        holes -= 1
                    col_red[cidx] = cc - 1
                if record_trace:
                    if trn == trcap:
                        ncap = trcap * 2
                        tf8 = np.empty(ncap, dtype=np.float64); tf8[:trcap] = tr_t; tr_t = tf8
                        t8 = np.empty(ncap, dtype=np.int64); t8[:trcap] = tr_src; tr_src = t8
                        t8 = np.empty(ncap, dtype=np.int64); t8[:trcap] = tr_dst; tr_dst = t8
                        t1 = np.empty(ncap, dtype=np.uint8); t1[:trcap] = tr_col; tr_col = t1
                        t1 = np.empty(ncap, dtype=np.uint8); t1[:trcap] = tr_app; tr_app = t1
                        trcap = ncap
                    tr_t[trn] = t; tr_src[trn] = code[src]; tr_dst[trn] = code[dst]
                    tr_col[trn] = BLUE; tr_app[trn] = 1
                    trn += 1
                if record_holes:
                    if hsn == hscap:
                        ncap = hscap * 2
                        tf8 = np.empty(ncap, dtype=np.float64); tf8[:hscap] = hs_t; hs_t = tf8
                        t8 = np.empty(ncap, dtype=np.int64); t8[:hscap] = hs_h; hs_h = t8
                        hscap = ncap
                    hs_t[hsn] = t; hs_h[hsn] = holes
                    hsn += 1
                if live_red == 0:
                    status = STATUS_EXTINCT
                    ext_time = t
                    break
                # chase any red out-neighbors of the newly blue site
                vkey = code[dst]
                if mode_tree:
                    base = cbase[dst]
                    nout = 0
                    if base >= 0:
                        for i in range(d):
                            nb_keys[nout] = base + i
                            nout += 1
                    pv = parent[dst]
                    if pv >= 0:
                        nb_keys[nout] = pv
                        nout += 1
                elif mode_flat:
                    if kind == HALF_LINE:
                        if vkey == 0:
                            nb_keys[0] = 1
                            nout = 1
                        else:
                            nb_keys[0] = vkey - 1
                            nb_keys[1] = vkey + 1
                            nout = 2
                    elif kind == LINE:
                        x = _unzz(vkey)
                        nb_keys[0] = _zz(x - 1)
                        nb_keys[1] = _zz(x + 1)
                        nout = 2
                    else:
                        x = _unzz(vkey >> 1)
                        y = vkey & 1
                        nb_keys[0] = _zz(x - 1) * 2 + y
                        nb_keys[1] = _zz(x + 1) * 2 + y
                        nb_keys[2] = _zz(x) * 2 + (1 - y)
                        nout = 3
                else:
                    key_to_coords(kind, d, bits, vkey, scratch)
                    nout = 0
                    for j in range(d):
                        cj = scratch[j]
                        scratch[j] = cj + 1
                        nb_keys[nout] = coords_to_key(kind, d, bits, scratch)
                        nout += 1
                        if not oriented:
                            scratch[j] = cj - 1
                            nb_keys[nout] = coords_to_key(kind, d, bits, scratch)
                            nout += 1
                        scratch[j] = cj
                need = hn + nout
                while need > hcap:
                    ncap = hcap * 2
                    tf8 = np.empty(ncap, dtype=np.float64); tf8[:hcap] = qt; qt = tf8
                    t8 = np.empty(ncap, dtype=np.int64); t8[:hcap] = qp; qp = t8
                    hcap = ncap
                for i in range(nout):
                    if mode_tree:
                        w = np.int64(nb_keys[i])
                        wkey = code[w]
                    else:
                        wkey = nb_keys[i]
                        if mode_flat:
                            w = wkey + 1
                        else:
                            w = site_index.get(wkey, np.int64(-2))
                    if w == -2 or color[w] != RED:
                        continue
                    if oriented:
                        u = edge_uniform(seed, vkey, wkey, BLUE)
                    else:
                        u = edge_uniform(seed, vkey if vkey < wkey else wkey,
                                         wkey if vkey < wkey else vkey, BLUE)
                    tf = t + passage_from_uniform(u, BLUE, model_kind, mp, mm)
                    pp2 = (np.int64(dst) << 31) | np.int64(w)
                    slab = np.int64(tf / delta)
                    if slab <= cur:
                        j = hn
                        hn += 1
                        while j > 0:
                            pj = (j - 1) >> 2
                            if qt[pj] > tf or (qt[pj] == tf and qp[pj] > pp2):
                                qt[j] = qt[pj]; qp[j] = qp[pj]
                                j = pj
                            else:
                                break
                        qt[j] = tf; qp[j] = pp2
                    elif slab < repart_at:
                        b = slab & (RING - 1)
                        if bn[b] == bcap:
                            ncap = bcap * 2
                            nbt = np.empty((RING, ncap), dtype=np.float64)
                            nbp = np.empty((RING, ncap), dtype=np.int64)
                            for r in range(RING):
                                for z in range(bn[r]):
                                    nbt[r, z] = bt[r, z]
                                    nbp[r, z] = bp[r, z]
                            bt = nbt; bp = nbp; bcap = ncap
                        bt[b, bn[b]] = tf
                        bp[b, bn[b]] = pp2
                        bn[b] += 1
                    else:
                        if on == ocap:
                            ncap = ocap * 2
                            tf8 = np.empty(ncap, dtype=np.float64); tf8[:ocap] = ot; ot = tf8
                            t8 = np.empty(ncap, dtype=np.int64); t8[:ocap] = op; op = t8
                            ocap = ncap
                        ot[on] = tf
                        op[on] = pp2
                        on += 1
                    pending += 1
                continue

        # stale event
        if record_trace:
            if trn == trcap:
                ncap = trcap * 2
                tf8 = np.empty(ncap, dtype=np.float64); tf8[:trcap] = tr_t; tr_t = tf8
                t8 = np.empty(ncap, dtype=np.int64); t8[:trcap] = tr_src; tr_src = t8
                t8 = np.empty(ncap, dtype=np.int64); t8[:trcap] = tr_dst; tr_dst = t8
                t1 = np.empty(ncap, dtype=np.uint8); t1[:trcap] = tr_col; tr_col = t1
                t1 = np.empty(ncap, dtype=np.uint8); t1[:trcap] = tr_app; tr_app = t1
                trcap = ncap
            tr_t[trn] = t; tr_src[trn] = code[src]; tr_dst[trn] = code[dst]
            tr_col[trn] = RED if is_red else BLUE; tr_app[trn] = 0
            trn += 1
        if record_holes:
            if hsn == hscap:
                ncap = hscap * 2
                tf8 = np.empty(ncap, dtype=np.float64); tf8[:hscap] = hs_t; hs_t = tf8
                t8 = np.empty(ncap, dtype=np.int64); t8[:hscap] = hs_h; hs_h = t8
                hscap = ncap
            hs_t[hsn] = t; hs_h[hsn] = holes
            hsn += 1

    # -------- site dump ----------------------------------------------------
    if record_sites:
        ndump = 0
        for i in range(nsite):
            if color[i] != EMPTY:
                ndump += 1
        s_key = np.empty(ndump, dtype=np.int64)
        s_col = np.empty(ndump, dtype=np.uint8)
        s_rt = np.empty(ndump, dtype=np.float64)
        s_bt = np.empty(ndump, dtype=np.float64)
        z = 0
        for i in range(nsite):
            if color[i] != EMPTY:
                s_key[z] = code[i]
                s_col[z] = color[i]
                s_rt[z] = red_t[i] if track_times else np.nan
                s_bt[z] = blue_t[i] if track_times else np.nan
                z += 1
    else:
        s_key = np.empty(0, dtype=np.int64)
        s_col = np.empty(0, dtype=np.uint8)
        s_rt = np.empty(0, dtype=np.float64)
        s_bt = np.empty(0, dtype=np.float64)

    return (np.int64(status), ext_time, np.int64(ever_red), max_rad, events,
            s_key, s_col, s_rt, s_bt,
            tr_t[:trn].copy(), tr_src[:trn].copy(), tr_dst[:trn].copy(),
            tr_col[:trn].copy(), tr_app[:trn].copy(),
            hs_t[:hsn].copy(), hs_h[:hsn].copy())


@njit(cache=True, nogil=True)
def run_batch(kind, param, model_kind, mp, mm, seeds,
              max_radius, max_events, max_time, flat_cap):
    n = seeds.shape[0]
    status = np.empty(n, dtype=np.int64)
    ext = np.empty(n, dtype=np.float64)
    ever = np.empty(n, dtype=np.int64)
    maxr = np.empty(n, dtype=np.int64)
    ev = np.empty(n, dtype=np.int64)
    for i in range(n):
        out = run_core(kind, param, model_kind, mp, mm, seeds[i],
                       max_radius, max_events, max_time, flat_cap, 0, 0, 0)
        status[i] = out[0]
        ext[i] = out[1]
        ever[i] = out[2]
        maxr[i] = out[3]
        ev[i] = out[4]
    return status, ext, ever, maxr, ev


@njit(cache=True, nogil=True)
def explore_cluster(dim, p, gen_cap, seed, max_sites):
    """BFS over open oriented edges (red passage time 1) from the origin.

    Returns (reached, frontier_sizes, truncated).  Shares edge_uniform
    with the engine, so cluster membership and dynamics agree edge for
    edge under one seed.
    """
    bits = 63 // dim
    seen = Dict.empty(types.int64, types.int64)
    frontier = np.empty(16, dtype=np.int64)
    frontier[0] = 0
    nf = 1
    seen[np.int64(0)] = 1
    sizes = np.zeros(gen_cap + 1, dtype=np.int64)
    sizes[0] = 1
    total = 1
    truncated = False
    scratch = np.empty(dim, dtype=np.int64)
    for g in range(gen_cap):
        nxt = np.empty(max(16, nf * dim), dtype=np.int64)
        nn = 0
        for i in range(nf):
            vkey = frontier[i]
            key_to_coords(ORIENTED, dim, bits, vkey, scratch)
            for j in range(dim):
                scratch[j] += 1
                wkey = coords_to_key(ORIENTED, dim, bits, scratch)
                scratch[j] -= 1
                if edge_uniform(seed, vkey, wkey, RED) < p and wkey not in seen:
                    seen[wkey] = 1
                    nxt[nn] = wkey
                    nn += 1
                    total += 1
        if total > max_sites:
            truncated = True
            sizes[g + 1] = nn
            return False, sizes, truncated
        frontier = nxt
        nf = nn
        sizes[g + 1] = nn
        if nn == 0:
            break
    return sizes[gen_cap] > 0, sizes, truncated
