"""Depth-first branch-and-bound over an integer box.

Both searches visit leaves in lexicographic order (variables in index order,
values ascending) and only accept strictly better leaves, so the incumbent
returned is the lexicographically smallest optimum.

Rows are integer ``w·y >= r``.  A node fixes ``y_0..y_{i-1}``; interval
arithmetic over the free coordinates gives, per row, the largest and
smallest activity any completion can reach.
"""

from __future__ import annotations

import numpy as np

from .rational import INF, integer_row

_INT64_SAFE = 2**62


def integerize(rows) -> list[tuple[list[int], int]]:
    return [integer_row(w, r) for w, r in rows]


def _extremes(w, lower, upper):
    lo = [min(c * l, c * u) for c, l, u in zip(w, lower, upper)]
    hi = [max(c * l, c * u) for c, l, u in zip(w, lower, upper)]
    return lo, hi


def _suffix(vals):
    out = [0] * (len(vals) + 1)
    for i in range(len(vals) - 1, -1, -1):
        out[i] = out[i + 1] + vals[i]
    return out


def solve_min(objective, rows, lower, upper):
    """Exact ``min objective·y`` over box integers satisfying every row.

    ``objective`` is an integer vector, ``rows`` a list of ``(w, r)`` integer
    rows.  Returns ``(value, y)`` or ``(INF, None)`` when infeasible.
    """
    n = len(lower)
    obj_lo, _ = _extremes(objective, lower, upper)
    obj_rest = _suffix(obj_lo)
    # lexicographically smallest minimiser of each free coordinate
    greedy_pick = [l if c >= 0 else u for c, l, u in zip(objective, lower, upper)]
    W = [w for w, _ in rows]
    R = [r for _, r in rows]
    max_rest, min_rest = [], []
    for w in W:
        lo, hi = _extremes(w, lower, upper)
        max_rest.append(_suffix(hi))
        min_rest.append(_suffix(lo))
    nrows = len(rows)
    best_val = INF
    best_y = None
    y = [0] * n

    def dfs(i, obj, act):
        nonlocal best_val, best_y
        if obj + obj_rest[i] >= best_val:
            return
        certain = True
        for k in range(nrows):
            if act[k] + max_rest[k][i] < R[k]:
                return
            if act[k] + min_rest[k][i] < R[k]:
                certain = False
        if certain:
            # every completion is feasible; take the coordinatewise best one
            best_val = obj + obj_rest[i]
            best_y = tuple(y[:i] + greedy_pick[i:])
            return
        c = objective[i]
        col = [w[i] for w in W]
        for v in range(lower[i], upper[i] + 1):
            y[i] = v
            dfs(i + 1, obj + c * v, [a + w * v for a, w in zip(act, col)])

    dfs(0, 0, [0] * nrows)
    return best_val, best_y


class MaxCoverSearch:
    """Find ``y`` in the box maximising the number of scenarios whose rows all hold.

    ``groups`` maps each candidate scenario to its integer rows; ``hard`` are
    rows every ``y`` must satisfy (deterministic constraints of Y).
    """

    def __init__(self, groups, hard, lower, upper):
        self.n = len(lower)
        self.lower, self.upper = list(lower), list(upper)
        self.n_groups = len(groups)
        width = max((len(g) for g in groups), default=1) or 1
        W, r = [], []
        for g in groups:
            for w, rhs in g:
                W.append(w)
                r.append(rhs)
            # padding rows 0 >= -1 are always satisfied
            for _ in range(width - len(g)):
                W.append([0] * self.n)
                r.append(-1)
        self.width = width
        self.W, self.r = self._arrays(W, r)
        self.Wh, self.rh = self._arrays([w for w, _ in hard], [x for _, x in hard])

    def _arrays(self, W, r):
        n = self.n
        if not W:
            return np.zeros((0, n), dtype=np.int64), np.zeros(0, dtype=np.int64)
        big = max(max(abs(l), abs(u)) for l, u in zip(self.lower, self.upper)) if n else 0
        worst = max(sum(abs(c) for c in w) * big + abs(x) for w, x in zip(W, r))
        dtype = np.int64 if worst < _INT64_SAFE else object
        return np.array(W, dtype=dtype).reshape(len(W), n), np.array(r, dtype=dtype)

    def _rest(self, W):
        lo = np.minimum(W * np.array(self.lower, dtype=W.dtype), W * np.array(self.upper, dtype=W.dtype))
        hi = np.maximum(W * np.array(self.lower, dtype=W.dtype), W * np.array(self.upper, dtype=W.dtype))
        # column i holds the sum over coordinates i..n-1
        zeros = np.zeros((W.shape[0], 1), dtype=W.dtype)
        lo_rest = np.concatenate([np.cumsum(lo[:, ::-1], axis=1)[:, ::-1], zeros], axis=1)
        hi_rest = np.concatenate([np.cumsum(hi[:, ::-1], axis=1)[:, ::-1], zeros], axis=1)
        return np.ascontiguousarray(lo_rest.T), np.ascontiguousarray(hi_rest.T)

    def run(self):
        """Return ``(count, y, mask)``; ``mask[g]`` tells whether group ``g`` is covered."""
        n, G, width = self.n, self.n_groups, self.width
        lo_rest, hi_rest = self._rest(self.W)
        hlo_rest, hhi_rest = self._rest(self.Wh)
        cols = np.ascontiguousarray(self.W.T)
        hcols = np.ascontiguousarray(self.Wh.T)
        r, rh = self.r, self.rh
        has_hard = self.Wh.shape[0] > 0
        best = [-1, None, None]
        y = list(self.lower)

        def dfs(i, act, hact):
            if has_hard and np.any(hact + hhi_rest[i] < rh):
                return
            possible = (act + hi_rest[i] >= r).reshape(G, width).all(axis=1)
            bound = int(possible.sum())
            if bound <= best[0]:
                return
            if i == n:
                best[:] = [bound, tuple(y), possible]
                return
            sure = (act + lo_rest[i] >= r).reshape(G, width).all(axis=1)
            if (sure | ~possible).all() and (not has_hard or np.all(hact + hlo_rest[i] >= rh)):
                # lower completion is the first leaf of this subtree and already
                # attains the bound
                best[:] = [bound, tuple(y[:i] + self.lower[i:]), possible]
                return
            col, hcol = cols[i], hcols[i]
            for v in range(self.lower[i], self.upper[i] + 1):
                y[i] = v
                dfs(i + 1, act + col * v, hact + hcol * v if has_hard else hact)
            y[i] = self.lower[i]

        act0 = np.zeros(len(r), dtype=self.W.dtype)
        hact0 = np.zeros(len(rh), dtype=self.Wh.dtype)
        dfs(0, act0, hact0)
        return best[0], best[1], best[2]
