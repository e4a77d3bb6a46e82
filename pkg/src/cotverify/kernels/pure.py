"""Pure-Python minimax kernels over bitmask version spaces.

Same contract as the compiled kernel in _fast.pyx; selected as a fallback
at import time.  All version spaces are int bitmasks over verifier ids;
costs arrive pre-scaled to integers.

Each function takes a memo dict and a two-slot stats list
[nodes_expanded, memo_hits] that it mutates in place.
"""

from __future__ import annotations

BACKEND = "pure"

# Sequence-level label code for "all steps correct".
INF_LABEL = 0


def ldim(yes_masks, alive, memo, stats):
    """Littlestone dimension of the alive set."""
    if alive & (alive - 1) == 0:
        return 0
    cached = memo.get(alive)
    if cached is not None:
        stats[1] += 1
        return cached
    stats[0] += 1
    best = 0
    for m in yes_masks:
        y = m & alive
        if y == 0 or y == alive:
            continue
        n = alive & ~m
        cand = 1 + min(ldim(yes_masks, y, memo, stats),
                       ldim(yes_masks, n, memo, stats))
        if cand > best:
            best = cand
    memo[alive] = best
    return best


def sc_ldim(yes_masks, alive, k, memo, stats):
    """Budgeted dimension: curvy branches keep k, straight branches burn it.

    With k == 0 the straight subtree is unconstrained (any path through it
    already exceeds the budget), so only the curvy branch contributes.
    """
    if alive & (alive - 1) == 0:
        return 0
    key = (alive, k)
    cached = memo.get(key)
    if cached is not None:
        stats[1] += 1
        return cached
    stats[0] += 1
    best = 0
    for m in yes_masks:
        y = m & alive
        if y == 0 or y == alive:
            continue
        cand = 1 + sc_ldim(yes_masks, y, k, memo, stats)
        if k > 0:
            straight = 1 + sc_ldim(yes_masks, alive & ~m, k - 1, memo, stats)
            if straight < cand:
                cand = straight
        if cand > best:
            best = cand
    memo[key] = best
    return best


def wsc_ldim(yes_masks, alive, ws, wc, memo, stats):
    """Weighted dimension with integer edge weights (ws straight, wc curvy)."""
    if alive & (alive - 1) == 0:
        return 0
    cached = memo.get(alive)
    if cached is not None:
        stats[1] += 1
        return cached
    stats[0] += 1
    best = 0
    for m in yes_masks:
        y = m & alive
        if y == 0 or y == alive:
            continue
        cand = min(
            ws + wsc_ldim(yes_masks, alive & ~m, ws, wc, memo, stats),
            wc + wsc_ldim(yes_masks, y, ws, wc, memo, stats),
        )
        if cand > best:
            best = cand
    memo[alive] = best
    return best


def scl_ldim(label_masks, alive, ws, wc, wl, memo, stats):
    """Sequence-level weighted dimension.

    label_masks: per instance, a list of (label_code, mask) pairs where
    label_code is 1..L for a first-fault location and INF_LABEL for a fully
    correct trace.  At each node the adversary commits to either two
    distinct fault labels (two l-edges) or one fault label plus the
    all-correct label (s-edge + c-edge).
    """
    if alive & (alive - 1) == 0:
        return 0
    cached = memo.get(alive)
    if cached is not None:
        stats[1] += 1
        return cached
    stats[0] += 1
    best = 0
    for pairs in label_masks:
        faults = []
        inf_mask = 0
        for label, m in pairs:
            sub = m & alive
            if not sub:
                continue
            if sub == alive:
                # Every alive verifier agrees on this instance, so no
                # second label survives and no branch is possible here.
                faults = []
                inf_mask = 0
                break
            if label == INF_LABEL:
                inf_mask = sub
            else:
                faults.append(sub)
        if inf_mask:
            inf_val = scl_ldim(label_masks, inf_mask, ws, wc, wl, memo, stats)
            for sub in faults:
                cand = min(
                    ws + scl_ldim(label_masks, sub, ws, wc, wl, memo, stats),
                    wc + inf_val,
                )
                if cand > best:
                    best = cand
        for i in range(len(faults)):
            vi = scl_ldim(label_masks, faults[i], ws, wc, wl, memo, stats)
            for j in range(i + 1, len(faults)):
                vj = scl_ldim(label_masks, faults[j], ws, wc, wl, memo, stats)
                cand = wl + min(vi, vj)
                if cand > best:
                    best = cand
    memo[alive] = best
    return best


class LdimEngine:
    """Memo-carrying wrapper; one engine per verifier class."""

    def __init__(self, yes_masks):
        self.yes_masks = list(yes_masks)
        self.memo = {}
        self._stats = [0, 0]

    def value(self, alive):
        return ldim(self.yes_masks, alive, self.memo, self._stats)

    def stats(self):
        return tuple(self._stats)


class ScEngine:
    def __init__(self, yes_masks):
        self.yes_masks = list(yes_masks)
        self.memo = {}
        self._stats = [0, 0]

    def value(self, alive, k):
        return sc_ldim(self.yes_masks, alive, k, self.memo, self._stats)

    def stats(self):
        return tuple(self._stats)


class WscEngine:
    def __init__(self, yes_masks, ws, wc):
        self.yes_masks = list(yes_masks)
        self.ws = ws
        self.wc = wc
        self.memo = {}
        self._stats = [0, 0]

    def value(self, alive):
        return wsc_ldim(self.yes_masks, alive, self.ws, self.wc,
                        self.memo, self._stats)

    def stats(self):
        return tuple(self._stats)


class SclEngine:
    def __init__(self, label_masks, ws, wc, wl):
        self.label_masks = [list(pairs) for pairs in label_masks]
        self.ws = ws
        self.wc = wc
        self.wl = wl
        self.memo = {}
        self._stats = [0, 0]

    def value(self, alive):
        return scl_ldim(self.label_masks, alive, self.ws, self.wc, self.wl,
                        self.memo, self._stats)

    def stats(self):
        return tuple(self._stats)
