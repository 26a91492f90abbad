"""Hot numeric kernels.

Every public function here dispatches to a numba-compiled loop or to a
vectorised numpy equivalent depending on :func:`lcluster._backend.active`.
The two paths are written independently and are cross-checked in
``tests/test_kernels.py``.

Sparse matrices are passed as raw CSR (``indptr, indices, data``) or CSC
arrays so the numba path needs no scipy objects.
"""
import numpy as np
import scipy.sparse as sp

from . import _backend
from ._backend import njit

# Oracle ties: conductances (and volumes) closer than this are equal.
TIE_TOL = 1e-12
# Gray-code scan recomputes cut/volume from scratch this often to stop drift.
BAND_CAP = 4096  # conductance-tied sets buffered by the numba oracle
RESYNC_EVERY = 1024


def _use_numba():
    return _backend.active() == "numba"


# ---------------------------------------------------------------------------
# x @ P and the fixed-point iteration shared by stationary / PPR solvers


@njit
def _vecmat_nb(indptr, indices, data, x):
    n = indptr.shape[0] - 1
    out = np.zeros(n)
    for u in range(n):
        xu = x[u]
        if xu == 0.0:
            continue
        for k in range(indptr[u], indptr[u + 1]):
            out[indices[k]] += xu * data[k]
    return out


def _vecmat_np(indptr, indices, data, x):
    n = indptr.shape[0] - 1
    counts = np.diff(indptr)
    return np.bincount(indices, weights=np.repeat(x, counts) * data, minlength=n)


def vecmat(indptr, indices, data, x):
    """Row vector times CSR matrix, ``x @ P``."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    if _use_numba():
        return _vecmat_nb(indptr, indices, data, x)
    return _vecmat_np(indptr, indices, data, x)


@njit
def _fixed_point_nb(indptr, indices, data, s, alpha, walk, p0, tol, target, max_iter):
    n = p0.shape[0]
    p = p0.copy()
    resid = np.inf
    prev = np.inf
    stay = 1.0 - walk
    keep = 1.0 - alpha
    for it in range(1, max_iter + 1):
        y = np.zeros(n)
        for u in range(n):
            pu = p[u]
            if pu == 0.0:
                continue
            for k in range(indptr[u], indptr[u + 1]):
                y[indices[k]] += pu * data[k]
        resid = 0.0
        for i in range(n):
            new = alpha * s[i] + keep * (stay * p[i] + walk * y[i])
            resid += abs(new - p[i])
            p[i] = new
        if resid <= target or (alpha > 0.0 and resid <= tol and resid >= prev):
            return p, it, resid
        prev = resid
    return p, -1, resid


def _fixed_point_np(indptr, indices, data, s, alpha, walk, p0, tol, target, max_iter):
    p = p0.copy()
    resid = prev = np.inf
    base = alpha * s
    for it in range(1, max_iter + 1):
        y = _vecmat_np(indptr, indices, data, p)
        new = base + (1.0 - alpha) * ((1.0 - walk) * p + walk * y)
        resid = float(np.abs(new - p).sum())
        p = new
        if resid <= target or (alpha > 0.0 and resid <= tol and resid >= prev):
            return p, it, resid
        prev = resid
    return p, -1, resid


def fixed_point(indptr, indices, data, s, alpha, walk, p0, tol, max_iter):
    """Iterate ``p <- alpha*s + (1-alpha) * p @ ((1-walk) I + walk P)``.

    With ``alpha > 0`` the map contracts by ``1 - alpha`` in L1, so a step
    change ``c`` bounds the distance to the fixed point by
    ``c (1 - alpha) / alpha``. We stop once that bound is ``<= tol``, or once
    the change is ``<= tol`` and no longer shrinking (roundoff floor). With
    ``alpha == 0`` (stationary solve) we stop on a step change ``<= tol``.
    Returns ``(p, iterations, last_change)``; ``iterations == -1`` means
    ``max_iter`` was exhausted.
    """
    s = np.ascontiguousarray(s, dtype=np.float64)
    p0 = np.ascontiguousarray(p0, dtype=np.float64)
    alpha = float(alpha)
    target = tol if alpha <= 0.0 or alpha >= 0.5 else tol * alpha / (1.0 - alpha)
    fn = _fixed_point_nb if _use_numba() else _fixed_point_np
    p, it, resid = fn(indptr, indices, data, s, alpha, float(walk), p0, float(tol), float(target), int(max_iter))
    return p, int(it), float(resid)


# ---------------------------------------------------------------------------
# Incremental sweep


@njit
def _sweep_nb(order, phi, indptr, indices, data, cindptr, cindices, cdata, patience):
    n = phi.shape[0]
    m = order.shape[0]
    inside = np.zeros(n, dtype=np.bool_)
    cut = np.zeros(m)
    vol = np.zeros(m)
    cond = np.full(m, np.nan)
    run_cut = 0.0
    run_vol = 0.0
    best = np.inf
    since = 0
    scanned = m
    for j in range(m):
        x = order[j]
        gained_in = 0.0
        for k in range(cindptr[x], cindptr[x + 1]):
            u = cindices[k]
            if inside[u]:
                gained_in += phi[u] * cdata[k]
        lost_out = 0.0
        for k in range(indptr[x], indptr[x + 1]):
            v = indices[k]
            if v != x and not inside[v]:
                lost_out += data[k]
        inside[x] = True
        run_cut = run_cut - gained_in + phi[x] * lost_out
        if run_cut < 0.0:
            run_cut = 0.0
        run_vol += phi[x]
        cut[j] = run_cut
        vol[j] = run_vol
        if j < n - 1:
            den = min(run_vol, 1.0 - run_vol)
            c = run_cut / den if den > 0.0 else np.nan
            if c > 1.0:
                c = 1.0
            cond[j] = c
            if c < best:
                best = c
                since = 0
            else:
                since += 1
        else:
            since += 1
        if patience > 0 and since >= patience:
            scanned = j + 1
            break
    return cut[:scanned], vol[:scanned], cond[:scanned], scanned


def _sweep_np(order, phi, indptr, indices, data, cindptr, cindices, cdata, patience):
    # Difference-array form: edge (u, v) crosses prefix j iff rank[u] <= j < rank[v].
    n = phi.shape[0]
    m = order.shape[0]
    rank = np.full(n, m, dtype=np.int64)
    rank[order] = np.arange(m)
    rows = np.repeat(np.arange(n), np.diff(indptr))
    flow = phi[rows] * data
    ru = rank[rows]
    rv = rank[indices]
    keep = (ru < rv) & (rows != indices)
    diff = np.zeros(m + 1)
    np.add.at(diff, ru[keep], flow[keep])
    np.add.at(diff, rv[keep], -flow[keep])
    cut = np.maximum(np.cumsum(diff[:m]), 0.0)
    vol = np.cumsum(phi[order])
    cond = np.full(m, np.nan)
    idx = np.arange(m)
    valid = idx < n - 1
    den = np.minimum(vol, 1.0 - vol)
    ok = valid & (den > 0.0)
    cond[ok] = np.minimum(cut[ok] / den[ok], 1.0)
    scanned = m
    if patience > 0 and m > 0:
        finite = np.where(np.isnan(cond), np.inf, cond)
        prev_best = np.concatenate(([np.inf], np.minimum.accumulate(finite)[:-1]))
        improved = finite < prev_best
        last = np.maximum.accumulate(np.where(improved, idx, -1))
        stale = idx - last
        hit = np.flatnonzero(stale >= patience)
        if hit.size:
            scanned = int(hit[0]) + 1
    return cut[:scanned], vol[:scanned], cond[:scanned], scanned


def sweep(order, phi, indptr, indices, data, cindptr, cindices, cdata, patience=0):
    """Cut, volume and conductance of every prefix of ``order``.

    ``patience > 0`` stops the scan once the running minimum conductance has
    not improved for that many consecutive prefixes. The full vertex set,
    when reached, gets conductance NaN. Returns ``(cut, vol, cond, scanned)``.
    """
    order = np.ascontiguousarray(order, dtype=np.int64)
    fn = _sweep_nb if _use_numba() else _sweep_np
    cut, vol, cond, scanned = fn(order, phi, indptr, indices, data, cindptr, cindices, cdata, int(patience))
    return cut, vol, cond, int(scanned)


# ---------------------------------------------------------------------------
# EDVW hypergraph transition matrix


@njit
def _hyper_rows_nb(n, v_indptr, v_edges, e_indptr, e_members, e_gamma, omega, d_v, d_e):
    # Each row built in a dense scratch row; columns emitted in ascending order.
    scratch = np.zeros(n)
    touched = np.zeros(n, dtype=np.bool_)
    indptr = np.zeros(n + 1, dtype=np.int64)
    cols = np.empty(n, dtype=np.int64)
    out_idx = []
    out_val = []
    for u in range(n):
        nc = 0
        for a in range(v_indptr[u], v_indptr[u + 1]):
            e = v_edges[a]
            coef = omega[e] / (d_v[u] * d_e[e])
            for b in range(e_indptr[e], e_indptr[e + 1]):
                v = e_members[b]
                if not touched[v]:
                    touched[v] = True
                    cols[nc] = v
                    nc += 1
                scratch[v] += coef * e_gamma[b]
        row_cols = np.sort(cols[:nc])
        for t in range(nc):
            v = row_cols[t]
            out_idx.append(v)
            out_val.append(scratch[v])
            scratch[v] = 0.0
            touched[v] = False
        indptr[u + 1] = indptr[u] + nc
    indices = np.empty(len(out_idx), dtype=np.int64)
    data = np.empty(len(out_val))
    for t in range(len(out_idx)):
        indices[t] = out_idx[t]
        data[t] = out_val[t]
    return indptr, indices, data


def _hyper_rows_np(n, v_indptr, v_edges, e_indptr, e_members, e_gamma, omega, d_v, d_e):
    # Sparse matrix form D_V^-1 W D_E^-1 R.
    n_e = omega.shape[0]
    e_of = np.repeat(np.arange(n_e), np.diff(e_indptr))
    R = sp.csr_matrix((e_gamma, (e_of, e_members)), shape=(n_e, n))
    W = sp.csr_matrix((omega[e_of], (e_members, e_of)), shape=(n, n_e))
    P = sp.diags(1.0 / d_v) @ W @ sp.diags(1.0 / d_e) @ R
    P = sp.csr_matrix(P)
    P.sum_duplicates()
    P.sort_indices()
    return P.indptr.astype(np.int64), P.indices.astype(np.int64), P.data.astype(np.float64)


def hyper_transition(n, v_indptr, v_edges, e_indptr, e_members, e_gamma, omega, d_v, d_e):
    """CSR arrays of ``P_{u,v} = sum_{e ni u} omega(e)/d(u) * gamma_e(v)/delta(e)``."""
    fn = _hyper_rows_nb if _use_numba() else _hyper_rows_np
    return fn(int(n), v_indptr, v_edges, e_indptr, e_members, e_gamma, omega, d_v, d_e)


# ---------------------------------------------------------------------------
# Brute-force conductance oracle (Gray-code enumeration)


@njit
def _exact_state(F, phi, mask, n):
    cut = 0.0
    vol = 0.0
    for u in range(n):
        if (mask >> u) & 1:
            vol += phi[u]
            for v in range(n):
                if not (mask >> v) & 1:
                    cut += F[u, v]
    return cut, vol


@njit
def _flip(F, phi, mask, x, n, cut, vol):
    # Toggle vertex x; returns the new (mask, cut, vol).
    bit = np.int64(1) << x
    into = 0.0
    outof = 0.0
    for u in range(n):
        if u != x and (mask >> u) & 1:
            into += F[u, x]
    for v in range(n):
        if v != x and not (mask >> v) & 1:
            outof += F[x, v]
    if mask & bit:
        return mask ^ bit, cut + into - outof, vol - phi[x]
    return mask | bit, cut - into + outof, vol + phi[x]


@njit
def _lex_less(a, b):
    # Sorted-id-list lexicographic order on bitmask sets.
    if a == b:
        return False
    d = a ^ b
    low = d & (-d)
    above = ~((low << 1) - 1)
    if a & low:
        return (b & above) != 0
    return (a & above) == 0


@njit
def _ctz(i):
    c = 0
    while (i & 1) == 0:
        i >>= 1
        c += 1
    return c


@njit
def _oracle_scan_nb(F, phi, free, must_mask, n, phi_cap, vol_cap):
    f = free.shape[0]
    full = (np.int64(1) << n) - 1
    mask = must_mask
    cut, vol = _exact_state(F, phi, mask, n)
    best_phi = np.inf
    best_vol = np.inf
    best_mask = np.int64(-1)
    count = 0
    total = np.int64(1) << f
    for i in range(total):
        if i > 0:
            x = free[_ctz(i)]
            mask, cut, vol = _flip(F, phi, mask, x, n, cut, vol)
            if i % RESYNC_EVERY == 0:
                cut, vol = _exact_state(F, phi, mask, n)
        if mask == 0 or mask == full:
            continue
        count += 1
        den = min(vol, 1.0 - vol)
        c = max(cut, 0.0) / den
        if c > phi_cap or vol > vol_cap:
            continue
        if c < best_phi:
            best_phi = c
        if vol < best_vol:
            best_vol = vol
        if best_mask < 0 or _lex_less(mask, best_mask):
            best_mask = mask
    return best_phi, best_vol, best_mask, count


@njit
def _oracle_band_nb(F, phi, free, must_mask, n, phi_cap, out_masks, out_vols):
    # collects sets with conductance <= phi_cap; returns how many matched
    f = free.shape[0]
    full = (np.int64(1) << n) - 1
    cap = out_masks.shape[0]
    mask = must_mask
    cut, vol = _exact_state(F, phi, mask, n)
    k = 0
    total = np.int64(1) << f
    for i in range(total):
        if i > 0:
            x = free[_ctz(i)]
            mask, cut, vol = _flip(F, phi, mask, x, n, cut, vol)
            if i % RESYNC_EVERY == 0:
                cut, vol = _exact_state(F, phi, mask, n)
        if mask == 0 or mask == full:
            continue
        den = min(vol, 1.0 - vol)
        if max(cut, 0.0) / den > phi_cap:
            continue
        if k < cap:
            out_masks[k] = mask
            out_vols[k] = vol
        k += 1
    return k


def _masks_to_lists(masks, n):
    bits = (masks[:, None] >> np.arange(n)) & 1
    return [tuple(np.flatnonzero(row).tolist()) for row in bits]


def _oracle_all_np(F, phi, free, must_mask, n, chunk=1 << 15):
    f = free.shape[0]
    total = 1 << f
    must = np.array([(must_mask >> u) & 1 for u in range(n)], dtype=np.float64)
    weights = (np.int64(1) << free.astype(np.int64))
    phis = np.empty(total)
    vols = np.empty(total)
    masks = np.empty(total, dtype=np.int64)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        bits = ((codes[:, None] >> np.arange(f)) & 1).astype(np.float64)
        X = np.tile(must, (codes.size, 1))
        X[:, free] = bits
        vol = X @ phi
        cut = ((X @ F) * (1.0 - X)).sum(axis=1)
        den = np.minimum(vol, 1.0 - vol)
        with np.errstate(divide="ignore", invalid="ignore"):
            c = np.maximum(cut, 0.0) / den
        sl = slice(start, start + codes.size)
        phis[sl] = c
        vols[sl] = vol
        masks[sl] = must_mask | (bits.astype(np.int64) @ weights)
    full = (1 << n) - 1
    valid = (masks != 0) & (masks != full)
    return phis[valid], vols[valid], masks[valid]


def optimal_subset(F, phi, free, must_mask, n):
    """Minimum-conductance set among ``must ⊆ S ⊊ V``, ``S`` nonempty.

    ``F`` is the dense flow matrix ``phi(u) P[u, v]``. Ties within
    :data:`TIE_TOL` in conductance go to the smaller volume (same
    tolerance), then to the lexicographically smallest sorted id list.
    Returns ``(mask, sets_evaluated)``.
    """
    F = np.ascontiguousarray(F, dtype=np.float64)
    phi = np.ascontiguousarray(phi, dtype=np.float64)
    free = np.ascontiguousarray(free, dtype=np.int64)
    must_mask = int(must_mask)
    if _use_numba():
        m_phi, _, _, count = _oracle_scan_nb(F, phi, free, must_mask, n, np.inf, np.inf)
        if count == 0:
            return -1, 0
        cand = np.empty(BAND_CAP, dtype=np.int64)
        cvol = np.empty(BAND_CAP)
        k = _oracle_band_nb(F, phi, free, must_mask, n, m_phi + TIE_TOL, cand, cvol)
        if k <= BAND_CAP:
            return _resolve_band(cand[:k], cvol[:k], n), int(count)
        # band too wide to buffer: two more scans instead
        _, m_vol, _, _ = _oracle_scan_nb(F, phi, free, must_mask, n, m_phi + TIE_TOL, np.inf)
        _, _, mask, _ = _oracle_scan_nb(F, phi, free, must_mask, n, m_phi + TIE_TOL, m_vol + TIE_TOL)
        return int(mask), int(count)
    phis, vols, masks = _oracle_all_np(F, phi, free, must_mask, n)
    if masks.size == 0:
        return -1, 0
    band = phis <= phis.min() + TIE_TOL
    return _resolve_band(masks[band], vols[band], n), int(masks.size)


def _resolve_band(masks, vols, n):
    cands = masks[vols <= vols.min() + TIE_TOL]
    lists = _masks_to_lists(cands, n)
    best = min(range(len(lists)), key=lambda i: lists[i])
    return int(cands[best])


@njit
def _gray_trace_nb(F, phi, free, must_mask, n):
    f = free.shape[0]
    total = np.int64(1) << f
    masks = np.empty(total, dtype=np.int64)
    cuts = np.empty(total)
    vols = np.empty(total)
    mask = must_mask
    cut, vol = _exact_state(F, phi, mask, n)
    for i in range(total):
        if i > 0:
            mask, cut, vol = _flip(F, phi, mask, free[_ctz(i)], n, cut, vol)
        masks[i] = mask
        cuts[i] = cut
        vols[i] = vol
    return masks, cuts, vols


def _gray_trace_py(F, phi, free, must_mask, n):
    total = 1 << len(free)
    masks = np.empty(total, dtype=np.int64)
    cuts = np.empty(total)
    vols = np.empty(total)
    mask = must_mask
    inside = np.array([(mask >> u) & 1 for u in range(n)], dtype=bool)
    cut = float(F[np.ix_(inside, ~inside)].sum())
    vol = float(phi[inside].sum())
    for i in range(total):
        if i > 0:
            x = int(free[(i & -i).bit_length() - 1])
            others = np.arange(n) != x
            into = F[inside & others, x].sum()
            outof = F[x, ~inside & others].sum()
            if inside[x]:
                cut, vol = cut + into - outof, vol - phi[x]
            else:
                cut, vol = cut - into + outof, vol + phi[x]
            inside[x] = not inside[x]
            mask ^= 1 << x
        masks[i] = mask
        cuts[i] = cut
        vols[i] = vol
    return masks, cuts, vols


def gray_trace(F, phi, free, must_mask, n):
    """Every set visited by the Gray-code walk with its incremental cut and volume.

    No resynchronisation is applied, so this exposes raw incremental drift.
    """
    F = np.ascontiguousarray(F, dtype=np.float64)
    phi = np.ascontiguousarray(phi, dtype=np.float64)
    free = np.ascontiguousarray(free, dtype=np.int64)
    if _use_numba():
        return _gray_trace_nb(F, phi, free, int(must_mask), n)
    return _gray_trace_py(F, phi, free, int(must_mask), n)
