"""
Piecewise linear branch predictor with pluggable row indexing.

Weights live in ``W[N][M][H+1]``: the row is chosen from the branch PC (see
:data:`INDEX_SCHEMES`), the middle coordinate from the address key of the
j-th most recent branch, and the last coordinate is the history position j
(position 0 of key 0 holds the bias weight). The output is::

    W[i][0][0] + sum_j (+/-) W[i][GA[j] mod M][j]

with the sign given by the outcome of the j-th most recent branch.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from .base import Predictor, check_pow2
from .hashing import as_i64, fold_xor, hybrid32, rotl64

INDEX_SCHEMES = ("modulo", "curr_pc_hash", "last_n_pc_hash")
ADDRESS_KEY_MASK = 0xFFFF
LAST_PC_ROTATION = 7

# ctrl slots
THETA, TC, ADAPTIVE, TC_MAX, TC_MIN, THETA_MAX = range(6)


def default_theta(history: int) -> int:
    return int(2.14 * (history + 1) + 20.58)


@njit(cache=True, inline="always")
def plbp_index_nb(scheme, pc, prev_pcs, n_rows):
    if scheme == 0:
        return pc & (n_rows - 1)
    key = pc
    if scheme == 2:
        for k in range(prev_pcs.shape[0]):
            key ^= rotl64(prev_pcs[k], LAST_PC_ROTATION * (k + 1))
    return hybrid32(fold_xor(key, 32)) & (n_rows - 1)


@njit(cache=True, inline="always")
def plbp_predict_nb(W, ga, ghr, idx):
    m_mask = W.shape[1] - 1
    out = np.int64(W[idx, 0, 0])
    for j in range(1, W.shape[2]):
        w = W[idx, ga[j - 1] & m_mask, j]
        if ghr[j - 1]:
            out += w
        else:
            out -= w
    return out


@njit(cache=True, inline="always")
def _sat_add(W, i, a, j, delta, wmin, wmax):
    v = W[i, a, j] + delta
    if v > wmax:
        v = wmax
    elif v < wmin:
        v = wmin
    W[i, a, j] = v


@njit(cache=True)
def plbp_train_nb(W, ga, ghr, ctrl, wmin, wmax, idx, pc, outcome, output):
    m_mask = W.shape[1] - 1
    pred = 1 if output >= 0 else 0
    mag = output if output >= 0 else -output
    wrong = pred != outcome
    if wrong or mag < ctrl[THETA]:
        _sat_add(W, idx, 0, 0, 1 if outcome else -1, wmin, wmax)
        for j in range(1, W.shape[2]):
            a = ga[j - 1] & m_mask
            _sat_add(W, idx, a, j, 1 if ghr[j - 1] == outcome else -1, wmin, wmax)
        if ctrl[ADAPTIVE]:
            if wrong:
                ctrl[TC] += 1
                if ctrl[TC] >= ctrl[TC_MAX]:
                    ctrl[THETA] = min(ctrl[THETA] + 1, ctrl[THETA_MAX])
                    ctrl[TC] = 0
            else:
                ctrl[TC] -= 1
                if ctrl[TC] <= ctrl[TC_MIN]:
                    ctrl[THETA] = max(ctrl[THETA] - 1, 1)
                    ctrl[TC] = 0
    for j in range(ga.shape[0] - 1, 0, -1):
        ga[j] = ga[j - 1]
        ghr[j] = ghr[j - 1]
    ga[0] = pc & ADDRESS_KEY_MASK
    ghr[0] = outcome


@njit(cache=True, inline="always")
def _push_pc(prev_pcs, pc):
    for k in range(prev_pcs.shape[0] - 1, 0, -1):
        prev_pcs[k] = prev_pcs[k - 1]
    if prev_pcs.shape[0]:
        prev_pcs[0] = pc


@njit(cache=True, nogil=True)
def plbp_run_nb(W, ga, ghr, ctrl, prev_pcs, scheme, wmin, wmax, pcs, outcomes, preds):
    for i in range(pcs.shape[0]):
        pc = pcs[i]
        o = outcomes[i]
        idx = plbp_index_nb(scheme, pc, prev_pcs, W.shape[0])
        out = plbp_predict_nb(W, ga, ghr, idx)
        preds[i] = 1 if out >= 0 else 0
        plbp_train_nb(W, ga, ghr, ctrl, wmin, wmax, idx, pc, o, out)
        _push_pc(prev_pcs, pc)
    return preds


class PLBP(Predictor):
    """Stateful predictor; :meth:`run` replays whole traces in compiled code.

    ``n_last_pcs`` counts the current PC, so ``n_last_pcs - 1`` prior branch
    PCs are remembered (zero until the predictor has seen that many).
    """

    kind = "plbp"

    def __init__(self, N: int = 256, M: int = 256, H: int = 26, bits: int = 8,
                 theta: int | str | None = None, index_scheme: str = "modulo",
                 n_last_pcs: int = 4):
        check_pow2("N", N)
        check_pow2("M", M)
        if H < 1:
            raise ValueError("H must be >= 1")
        if not 2 <= bits <= 16:
            raise ValueError("weight width must be in [2, 16] bits")
        if index_scheme not in INDEX_SCHEMES:
            raise ValueError(f"index_scheme must be one of {INDEX_SCHEMES}")
        if n_last_pcs < 1:
            raise ValueError("n_last_pcs must be >= 1")
        self.N, self.M, self.H, self.bits = N, M, H, bits
        self.index_scheme = index_scheme
        self.n_last_pcs = n_last_pcs
        self.wmin = -(1 << (bits - 1))
        self.wmax = (1 << (bits - 1)) - 1
        adaptive = theta == "adaptive"
        if theta is None or adaptive:
            theta = default_theta(H)
        if adaptive:
            theta = min(max(theta, 1), 4 * H)
        self.W = np.zeros((N, M, H + 1), dtype=np.int16)
        self.ga = np.zeros(H, dtype=np.int64)
        self.ghr = np.zeros(H, dtype=np.int8)
        # 7-bit signed threshold counter
        self.ctrl = np.array([int(theta), 0, int(adaptive), 63, -64, 4 * H], dtype=np.int64)
        self.prev_pcs = np.zeros(n_last_pcs - 1, dtype=np.int64)
        self._scheme = INDEX_SCHEMES.index(index_scheme)

    @property
    def theta(self) -> int:
        return int(self.ctrl[THETA])

    def index(self, pc: int) -> int:
        return int(plbp_index_nb(self._scheme, as_i64(pc), self.prev_pcs, self.N))

    def predict(self, idx: int) -> tuple[bool, int]:
        out = int(plbp_predict_nb(self.W, self.ga, self.ghr, idx))
        return out >= 0, out

    def train(self, idx: int, pc: int, outcome: bool, output: int) -> None:
        plbp_train_nb(self.W, self.ga, self.ghr, self.ctrl, self.wmin, self.wmax,
                      idx, as_i64(pc), int(bool(outcome)), output)
        _push_pc(self.prev_pcs, as_i64(pc))

    def step(self, pc: int, outcome: bool) -> bool:
        idx = self.index(pc)
        pred, out = self.predict(idx)
        self.train(idx, pc, outcome, out)
        return pred

    def _run(self, pcs, outcomes):
        preds = np.empty(len(pcs), dtype=np.uint8)
        return plbp_run_nb(self.W, self.ga, self.ghr, self.ctrl, self.prev_pcs,
                           self._scheme, self.wmin, self.wmax, pcs, outcomes, preds)
