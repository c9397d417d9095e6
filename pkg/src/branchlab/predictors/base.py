from __future__ import annotations

import numpy as np

# Classic predictors drop the low instruction-alignment bits before indexing.
PC_SHIFT = 2


def pc_array(pcs) -> np.ndarray:
    """PCs as contiguous int64 (uint64 inputs are reinterpreted, not converted)."""
    arr = np.asarray(pcs)
    if arr.dtype == np.uint64:
        return np.ascontiguousarray(arr).view(np.int64)
    return np.ascontiguousarray(arr, dtype=np.int64)


def outcome_array(outcomes) -> np.ndarray:
    return np.ascontiguousarray(outcomes, dtype=np.uint8)


def check_pow2(name: str, n: int) -> None:
    if n < 1 or n & (n - 1):
        raise ValueError(f"{name} must be a power of two, got {n}")


class Predictor:
    """Uniform interface: ``step`` predicts one branch then trains on its outcome.

    ``run`` does the same over whole arrays and returns the predictions
    (uint8, 1 = taken). Subclasses implement ``_run`` with compiled code and
    inherit ``step`` as a one-element ``run``.
    """

    kind = "?"

    def step(self, pc: int, outcome: bool) -> bool:
        from .hashing import as_i64
        preds = self._run(np.array([as_i64(pc)], dtype=np.int64),
                          np.array([int(bool(outcome))], dtype=np.uint8))
        return bool(preds[0])

    def run(self, pcs, outcomes) -> np.ndarray:
        pcs = pc_array(pcs)
        outcomes = outcome_array(outcomes)
        if pcs.shape != outcomes.shape:
            raise ValueError("pcs and outcomes differ in length")
        return self._run(pcs, outcomes)

    def _run(self, pcs: np.ndarray, outcomes: np.ndarray) -> np.ndarray:
        raise NotImplementedError
