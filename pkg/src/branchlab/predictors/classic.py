"""Perfect, one-bit, gshare, local, loop and perceptron predictors."""
from __future__ import annotations

import numpy as np
from numba import njit

from .base import PC_SHIFT, Predictor, check_pow2


class Perfect(Predictor):
    """Oracle: always predicts the actual outcome."""

    kind = "perfect"

    def _run(self, pcs, outcomes):
        return outcomes.copy()


# ---------------------------------------------------------------------------
# one-bit
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _one_bit_run(table, pcs, outcomes, preds):
    mask = table.shape[0] - 1
    for i in range(pcs.shape[0]):
        k = (pcs[i] >> PC_SHIFT) & mask
        preds[i] = table[k]
        table[k] = outcomes[i]
    return preds


class OneBit(Predictor):
    """Last outcome per PC slot; slots start not-taken."""

    kind = "one_bit"

    def __init__(self, size: int = 1 << 14):
        check_pow2("size", size)
        self.table = np.zeros(size, dtype=np.uint8)

    def _run(self, pcs, outcomes):
        return _one_bit_run(self.table, pcs, outcomes, np.empty(len(pcs), np.uint8))


# ---------------------------------------------------------------------------
# gshare
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def _bump2(ctr, k, taken):
    if taken:
        if ctr[k] < 3:
            ctr[k] += 1
    elif ctr[k] > 0:
        ctr[k] -= 1


@njit(cache=True, nogil=True)
def _gshare_run(ctr, hist, hist_bits, pcs, outcomes, preds):
    mask = ctr.shape[0] - 1
    hmask = (1 << hist_bits) - 1
    h = hist[0]
    for i in range(pcs.shape[0]):
        k = ((pcs[i] >> PC_SHIFT) ^ h) & mask
        preds[i] = 1 if ctr[k] >= 2 else 0
        o = outcomes[i]
        _bump2(ctr, k, o)
        h = ((h << 1) | o) & hmask
    hist[0] = h
    return preds


class GShare(Predictor):
    """2-bit counters indexed by PC xor global history."""

    kind = "gshare"

    def __init__(self, size: int = 1 << 16, hist: int = 16):
        check_pow2("size", size)
        if not 1 <= hist <= 62:
            raise ValueError("history length must be in [1, 62]")
        self.hist_bits = hist
        self.ctr = np.ones(size, dtype=np.int8)
        self.hist = np.zeros(1, dtype=np.int64)

    def _run(self, pcs, outcomes):
        return _gshare_run(self.ctr, self.hist, self.hist_bits, pcs, outcomes,
                           np.empty(len(pcs), np.uint8))


# ---------------------------------------------------------------------------
# local (two-level, per-branch history)
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _local_run(bht, pht, hist_bits, pcs, outcomes, preds):
    bmask = bht.shape[0] - 1
    pmask = pht.shape[0] - 1
    hmask = (1 << hist_bits) - 1
    for i in range(pcs.shape[0]):
        b = (pcs[i] >> PC_SHIFT) & bmask
        k = bht[b] & pmask
        preds[i] = 1 if pht[k] >= 2 else 0
        o = outcomes[i]
        _bump2(pht, k, o)
        bht[b] = ((bht[b] << 1) | o) & hmask
    return preds


class Local(Predictor):
    """Per-branch history registers selecting shared 2-bit pattern counters."""

    kind = "local"

    def __init__(self, histories: int = 1 << 10, hist: int = 10, pattern: int = 1 << 10):
        check_pow2("histories", histories)
        check_pow2("pattern", pattern)
        if not 1 <= hist <= 62:
            raise ValueError("history length must be in [1, 62]")
        self.hist_bits = hist
        self.bht = np.zeros(histories, dtype=np.int64)
        self.pht = np.ones(pattern, dtype=np.int8)

    def _run(self, pcs, outcomes):
        return _local_run(self.bht, self.pht, self.hist_bits, pcs, outcomes,
                          np.empty(len(pcs), np.uint8))


# ---------------------------------------------------------------------------
# loop
# ---------------------------------------------------------------------------

# entry fields
L_VALID, L_TAG, L_TRIP, L_ITER, L_CONF, L_DIR, L_STAMP = range(7)
LOOP_CONF_MAX = 3
# Trip count is trusted once confirmed by one repeat instance.
LOOP_CONF_USE = 1


@njit(cache=True, nogil=True)
def _loop_run(tab, clock, tag_bits, pcs, outcomes, preds):
    n_sets = tab.shape[0]
    ways = tab.shape[1]
    set_bits = 0
    while (1 << set_bits) < n_sets:
        set_bits += 1
    tmask = (1 << tag_bits) - 1
    t = clock[0]
    for i in range(pcs.shape[0]):
        a = pcs[i] >> PC_SHIFT
        s = a & (n_sets - 1)
        tag = (a >> set_bits) & tmask
        o = outcomes[i]
        hit = -1
        for w in range(ways):
            if tab[s, w, L_VALID] and tab[s, w, L_TAG] == tag:
                hit = w
                break
        t += 1
        if hit < 0:
            preds[i] = 1
            victim = 0
            for w in range(ways):
                if not tab[s, w, L_VALID]:
                    victim = w
                    break
                if tab[s, w, L_STAMP] < tab[s, victim, L_STAMP]:
                    victim = w
            tab[s, victim, L_VALID] = 1
            tab[s, victim, L_TAG] = tag
            tab[s, victim, L_TRIP] = 0
            tab[s, victim, L_ITER] = 1
            tab[s, victim, L_CONF] = 0
            tab[s, victim, L_DIR] = o
            tab[s, victim, L_STAMP] = t
            continue

        e = tab[s, hit]
        d = e[L_DIR]
        if e[L_CONF] >= LOOP_CONF_USE and e[L_TRIP] > 0 and e[L_ITER] == e[L_TRIP]:
            preds[i] = 1 - d
        else:
            preds[i] = d
        if o == d:
            e[L_ITER] += 1
            if e[L_TRIP] > 0 and e[L_ITER] > e[L_TRIP]:
                e[L_TRIP] = 0
                e[L_CONF] = 0
        elif e[L_ITER] == 0:
            # two opposite outcomes in a row: the body direction was wrong
            e[L_DIR] = o
            e[L_ITER] = 1
            e[L_TRIP] = 0
            e[L_CONF] = 0
        else:
            if e[L_TRIP] > 0 and e[L_ITER] == e[L_TRIP]:
                if e[L_CONF] < LOOP_CONF_MAX:
                    e[L_CONF] += 1
            else:
                e[L_TRIP] = e[L_ITER]
                e[L_CONF] = 0
            e[L_ITER] = 0
        e[L_STAMP] = t
    clock[0] = t
    return preds


class Loop(Predictor):
    """Set-associative trip-count tracker.

    An entry learns how many consecutive body outcomes (its ``direction``)
    precede one opposite exit outcome. Once that count repeats, the exit is
    predicted after exactly that many body outcomes. Two opposite outcomes in
    a row flip the entry's direction. Misses predict taken and allocate into
    the least recently used way.
    """

    kind = "loop"

    def __init__(self, entries: int = 128, ways: int = 2, tag_bits: int = 6):
        check_pow2("entries", entries)
        check_pow2("ways", ways)
        if ways > entries:
            raise ValueError("ways cannot exceed entries")
        if not 1 <= tag_bits <= 32:
            raise ValueError("tag_bits must be in [1, 32]")
        self.tag_bits = tag_bits
        self.tab = np.zeros((entries // ways, ways, 7), dtype=np.int64)
        self.clock = np.zeros(1, dtype=np.int64)

    def _run(self, pcs, outcomes):
        return _loop_run(self.tab, self.clock, self.tag_bits, pcs, outcomes,
                         np.empty(len(pcs), np.uint8))


# ---------------------------------------------------------------------------
# perceptron
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _perceptron_run(W, ghr, theta, wmin, wmax, pcs, outcomes, preds):
    rmask = W.shape[0] - 1
    H = ghr.shape[0]
    for i in range(pcs.shape[0]):
        r = (pcs[i] >> PC_SHIFT) & rmask
        y = np.int64(W[r, 0])
        for j in range(H):
            if ghr[j]:
                y += W[r, j + 1]
            else:
                y -= W[r, j + 1]
        p = 1 if y >= 0 else 0
        preds[i] = p
        o = outcomes[i]
        if p != o or abs(y) <= theta:
            v = W[r, 0] + (1 if o else -1)
            W[r, 0] = min(max(v, wmin), wmax)
            for j in range(H):
                v = W[r, j + 1] + (1 if ghr[j] == o else -1)
                W[r, j + 1] = min(max(v, wmin), wmax)
        for j in range(H - 1, 0, -1):
            ghr[j] = ghr[j - 1]
        ghr[0] = o
    return preds


class Perceptron(Predictor):
    """Per-PC weight vector dotted with global outcome history."""

    kind = "perceptron"

    def __init__(self, rows: int = 1 << 12, H: int = 28, bits: int = 8,
                 theta: int | None = None):
        check_pow2("rows", rows)
        if H < 1:
            raise ValueError("H must be >= 1")
        if not 2 <= bits <= 16:
            raise ValueError("weight width must be in [2, 16] bits")
        self.H = H
        self.theta = int(1.93 * H + 14) if theta is None else int(theta)
        self.wmin = -(1 << (bits - 1))
        self.wmax = (1 << (bits - 1)) - 1
        self.W = np.zeros((rows, H + 1), dtype=np.int16)
        self.ghr = np.zeros(H, dtype=np.int8)

    def _run(self, pcs, outcomes):
        return _perceptron_run(self.W, self.ghr, self.theta, self.wmin, self.wmax,
                               pcs, outcomes, np.empty(len(pcs), np.uint8))
