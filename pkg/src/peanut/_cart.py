"""Compiled kernels for regression-tree growing and prediction.

Trees are stored as flat arrays: ``feature[i] == -1`` marks a leaf, otherwise
rows with ``x[feature[i]] <= threshold[i]`` go to ``left[i]``.
"""

import numpy as np
from numba import njit

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


@njit(cache=True, nogil=True)
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


@njit(cache=True, nogil=True)
def _unit(key, counter):
    z = _mix64(key + np.uint64(counter + 1) * _GAMMA)
    return np.float64(z >> np.uint64(11)) * (2.0 ** -53)


@njit(cache=True, nogil=True)
def _candidates(p, n_cand, key, node):
    feats = np.arange(p)
    if n_cand >= p:
        return feats
    # partial Fisher-Yates driven by the node's own counter range
    for j in range(n_cand):
        u = _unit(key, node * p + j)
        r = j + min(int(u * (p - j)), p - j - 1)
        tmp = feats[j]
        feats[j] = feats[r]
        feats[r] = tmp
    return np.sort(feats[:n_cand])


@njit(cache=True, nogil=True)
def grow_tree(X, y, max_depth, min_samples_leaf, min_samples_split, n_cand, key):
    n, p = X.shape
    idx = np.empty((p, n), dtype=np.int64)
    for f in range(p):
        idx[f] = np.argsort(X[:, f], kind="mergesort")
    buf = np.empty(n, dtype=np.int64)
    go_left = np.zeros(n, dtype=np.bool_)

    cap = 2 * n + 1
    feature = np.full(cap, -1, dtype=np.int64)
    threshold = np.zeros(cap)
    left = np.full(cap, -1, dtype=np.int64)
    right = np.full(cap, -1, dtype=np.int64)
    value = np.zeros(cap)

    st_node = np.empty(cap, dtype=np.int64)
    st_start = np.empty(cap, dtype=np.int64)
    st_end = np.empty(cap, dtype=np.int64)
    st_depth = np.empty(cap, dtype=np.int64)
    st_node[0] = 0
    st_start[0] = 0
    st_end[0] = n
    st_depth[0] = 0
    top = 1
    n_nodes = 1

    while top > 0:
        top -= 1
        node = st_node[top]
        s = st_start[top]
        e = st_end[top]
        depth = st_depth[top]
        nn = e - s

        total = 0.0
        lo = np.inf
        hi = -np.inf
        for i in range(s, e):
            v = y[idx[0, i]]
            total += v
            lo = min(lo, v)
            hi = max(hi, v)
        if lo == hi:
            value[node] = lo
        else:
            value[node] = min(max(total / nn, lo), hi)

        if (lo == hi or nn < min_samples_split or nn < 2 * min_samples_leaf
                or (max_depth >= 0 and depth >= max_depth)):
            continue

        mean = total / nn
        ctot = 0.0
        for i in range(s, e):
            ctot += y[idx[0, i]] - mean

        best = 0.0
        best_f = -1
        best_thr = 0.0
        for f in _candidates(p, n_cand, key, node):
            cum = 0.0
            for i in range(s, e - 1):
                a = idx[f, i]
                cum += y[a] - mean
                nl = i - s + 1
                nr = nn - nl
                if nl < min_samples_leaf:
                    continue
                if nr < min_samples_leaf:
                    break
                xv = X[a, f]
                xn = X[idx[f, i + 1], f]
                if not xn > xv:
                    continue
                cr = ctot - cum
                score = cum * cum / nl + cr * cr / nr
                if score > best:
                    best = score
                    best_f = f
                    mid = 0.5 * xv + 0.5 * xn
                    if not (xv <= mid and mid < xn):
                        mid = xv
                    best_thr = mid
        if best_f < 0:
            continue

        for i in range(s, e):
            a = idx[0, i]
            go_left[a] = X[a, best_f] <= best_thr
        n_left = 0
        for f in range(p):
            k = s
            m = 0
            for i in range(s, e):
                a = idx[f, i]
                if go_left[a]:
                    idx[f, k] = a
                    k += 1
                else:
                    buf[m] = a
                    m += 1
            for j in range(m):
                idx[f, k + j] = buf[j]
            n_left = k - s

        feature[node] = best_f
        threshold[node] = best_thr
        li = n_nodes
        ri = n_nodes + 1
        n_nodes += 2
        left[node] = li
        right[node] = ri

        st_node[top] = ri
        st_start[top] = s + n_left
        st_end[top] = e
        st_depth[top] = depth + 1
        top += 1
        st_node[top] = li
        st_start[top] = s
        st_end[top] = s + n_left
        st_depth[top] = depth + 1
        top += 1

    return (feature[:n_nodes].copy(), threshold[:n_nodes].copy(),
            left[:n_nodes].copy(), right[:n_nodes].copy(), value[:n_nodes].copy())


@njit(cache=True, nogil=True)
def predict_tree(feature, threshold, left, right, value, X):
    n = X.shape[0]
    out = np.empty(n)
    for r in range(n):
        i = 0
        while feature[i] >= 0:
            if X[r, feature[i]] <= threshold[i]:
                i = left[i]
            else:
                i = right[i]
        out[r] = value[i]
    return out


@njit(cache=True, nogil=True)
def accumulate(total, lo, hi, pred):
    for r in range(pred.shape[0]):
        v = pred[r]
        total[r] += v
        if v < lo[r]:
            lo[r] = v
        if v > hi[r]:
            hi[r] = v
