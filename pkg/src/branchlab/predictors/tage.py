"""TAGE: bimodal base plus tagged tables over geometric history lengths."""
from __future__ import annotations

import numpy as np
from numba import njit

from .base import PC_SHIFT, Predictor, check_pow2

GHIST_SIZE = 1024  # ring buffer capacity, must exceed the longest history
CTR_MAX, CTR_MIN = 3, -4  # 3-bit signed prediction counters
U_MAX = 3  # 2-bit useful counters
ALT_MAX, ALT_MIN = 7, -8

# per-table entry fields
E_TAG, E_CTR, E_U = range(3)
# folded history slots per table
F_IDX, F_TAG0, F_TAG1 = range(3)
# scalar state slots
S_PTR, S_TICK, S_ALT = range(3)


@njit(cache=True, inline="always")
def _fold_update(folds, t, slot, new_bit, old_bit, hist_len, width):
    c = (folds[t, slot] << 1) | new_bit
    c ^= old_bit << (hist_len % width)
    c ^= c >> width
    folds[t, slot] = c & ((1 << width) - 1)


@njit(cache=True, nogil=True)
def _tage_run(base, tables, folds, ghist, state, hist_lens, log_entries, tag_bits,
              reset_period, pcs, outcomes, preds):
    n_tables = tables.shape[0]
    n_entries = tables.shape[1]
    emask = n_entries - 1
    tmask = (1 << tag_bits) - 1
    bmask = base.shape[0] - 1
    idx = np.empty(n_tables, dtype=np.int64)
    tags = np.empty(n_tables, dtype=np.int64)
    ptr = state[S_PTR]
    tick = state[S_TICK]
    use_alt = state[S_ALT]
    for i in range(pcs.shape[0]):
        a = pcs[i] >> PC_SHIFT
        o = outcomes[i]
        for t in range(n_tables):
            idx[t] = (a ^ (a >> (log_entries - t)) ^ folds[t, F_IDX]) & emask
            tags[t] = (a ^ folds[t, F_TAG0] ^ (folds[t, F_TAG1] << 1)) & tmask

        provider = -1
        alt = -1
        for t in range(n_tables - 1, -1, -1):
            if tables[t, idx[t], E_TAG] == tags[t]:
                if provider < 0:
                    provider = t
                else:
                    alt = t
                    break
        b = a & bmask
        base_pred = 1 if base[b] >= 2 else 0
        if alt >= 0:
            alt_pred = 1 if tables[alt, idx[alt], E_CTR] >= 0 else 0
        else:
            alt_pred = base_pred

        weak_new = False
        if provider >= 0:
            pctr = tables[provider, idx[provider], E_CTR]
            prov_pred = 1 if pctr >= 0 else 0
            weak_new = (pctr == 0 or pctr == -1) and tables[provider, idx[provider], E_U] == 0
            final = alt_pred if (weak_new and use_alt >= 0) else prov_pred
        else:
            prov_pred = base_pred
            final = base_pred
        preds[i] = final

        # --- update ---
        if provider >= 0:
            if weak_new and prov_pred != alt_pred:
                if alt_pred == o:
                    use_alt = min(use_alt + 1, ALT_MAX)
                else:
                    use_alt = max(use_alt - 1, ALT_MIN)
            e = tables[provider, idx[provider]]
            if o:
                e[E_CTR] = min(e[E_CTR] + 1, CTR_MAX)
            else:
                e[E_CTR] = max(e[E_CTR] - 1, CTR_MIN)
            if prov_pred != alt_pred:
                if prov_pred == o:
                    e[E_U] = min(e[E_U] + 1, U_MAX)
                else:
                    e[E_U] = max(e[E_U] - 1, 0)
            if e[E_U] == 0:
                if alt >= 0:
                    ea = tables[alt, idx[alt]]
                    if o:
                        ea[E_CTR] = min(ea[E_CTR] + 1, CTR_MAX)
                    else:
                        ea[E_CTR] = max(ea[E_CTR] - 1, CTR_MIN)
                else:
                    if o:
                        base[b] = min(base[b] + 1, 3)
                    else:
                        base[b] = max(base[b] - 1, 0)
        else:
            if o:
                base[b] = min(base[b] + 1, 3)
            else:
                base[b] = max(base[b] - 1, 0)

        if final != o and provider < n_tables - 1:
            placed = False
            for t in range(provider + 1, n_tables):
                if tables[t, idx[t], E_U] == 0:
                    tables[t, idx[t], E_TAG] = tags[t]
                    tables[t, idx[t], E_CTR] = 0 if o else -1
                    placed = True
                    break
            if not placed:
                for t in range(provider + 1, n_tables):
                    if tables[t, idx[t], E_U] > 0:
                        tables[t, idx[t], E_U] -= 1

        tick += 1
        if tick >= reset_period:
            tick = 0
            for t in range(n_tables):
                for k in range(n_entries):
                    tables[t, k, E_U] = 0

        # --- history ---
        ptr = (ptr - 1) & (GHIST_SIZE - 1)
        ghist[ptr] = o
        for t in range(n_tables):
            L = hist_lens[t]
            old = ghist[(ptr + L) & (GHIST_SIZE - 1)]
            _fold_update(folds, t, F_IDX, o, old, L, log_entries)
            _fold_update(folds, t, F_TAG0, o, old, L, tag_bits)
            _fold_update(folds, t, F_TAG1, o, old, L, tag_bits - 1)
    state[S_PTR] = ptr
    state[S_TICK] = tick
    state[S_ALT] = use_alt
    return preds


class TAGE(Predictor):
    kind = "tage"

    def __init__(self, base: int = 1 << 13, entries: int = 1 << 10, tag_bits: int = 9,
                 hists: tuple[int, ...] = (5, 15, 44, 130), reset: int = 1 << 18):
        check_pow2("base", base)
        check_pow2("entries", entries)
        hists = tuple(int(h) for h in hists)
        if not hists or any(h < 1 for h in hists) or list(hists) != sorted(hists):
            raise ValueError("history lengths must be positive and increasing")
        if hists[-1] >= GHIST_SIZE:
            raise ValueError(f"history lengths must be < {GHIST_SIZE}")
        if not 2 <= tag_bits <= 30:
            raise ValueError("tag_bits must be in [2, 30]")
        if reset < 1:
            raise ValueError("reset period must be >= 1")
        self.log_entries = entries.bit_length() - 1
        if self.log_entries < len(hists):
            raise ValueError("tagged tables too small for the number of tables")
        self.tag_bits = tag_bits
        self.reset = reset
        self.hist_lens = np.array(hists, dtype=np.int64)
        self.base = np.ones(base, dtype=np.int8)
        self.tables = np.zeros((len(hists), entries, 3), dtype=np.int64)
        self.tables[:, :, E_TAG] = -1  # no entry matches before allocation
        self.folds = np.zeros((len(hists), 3), dtype=np.int64)
        self.ghist = np.zeros(GHIST_SIZE, dtype=np.int64)
        self.state = np.zeros(3, dtype=np.int64)

    def _run(self, pcs, outcomes):
        return _tage_run(self.base, self.tables, self.folds, self.ghist, self.state,
                         self.hist_lens, self.log_entries, self.tag_bits, self.reset,
                         pcs, outcomes, np.empty(len(pcs), np.uint8))
