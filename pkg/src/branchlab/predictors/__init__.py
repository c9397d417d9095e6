"""The predictor zoo.

Every predictor follows the same online protocol: for each branch it
predicts from state built by earlier branches only, then trains on the actual
outcome. :func:`make_predictor` builds one from a :class:`PredictorConfig`.
"""
from __future__ import annotations

from .base import Predictor
from .classic import GShare, Local, Loop, OneBit, Perceptron, Perfect
from .config import KINDS, ConfigError, PredictorConfig, parse_config
from .hashing import (folded_xor, four_hybrid12, hash7shift, jenkins32, wang3shift,
                      wang4shift)
from .plbp import INDEX_SCHEMES, PLBP, default_theta
from .tage import TAGE

__all__ = [
    "Predictor", "Perfect", "OneBit", "GShare", "Local", "Loop", "Perceptron", "TAGE",
    "PLBP", "PredictorConfig", "ConfigError", "parse_config", "make_predictor",
    "predict_train", "folded_xor", "four_hybrid12", "wang4shift", "wang3shift",
    "jenkins32", "hash7shift", "INDEX_SCHEMES", "KINDS", "default_theta",
    "ZOO", "PLBP_VARIANTS",
]


def make_predictor(cfg: PredictorConfig | str) -> Predictor:
    if isinstance(cfg, str):
        cfg = parse_config(cfg)
    p = cfg.as_dict()
    kind = cfg.kind
    if kind == "perfect":
        return Perfect()
    if kind == "one_bit":
        return OneBit(p["size"])
    if kind == "gshare":
        return GShare(p["size"], p["hist"])
    if kind == "local":
        return Local(p["histories"], p["hist"], p["pattern"])
    if kind == "loop":
        return Loop(p["entries"], p["ways"], p["tag_bits"])
    if kind == "perceptron":
        theta = None if p["theta"] == "auto" else p["theta"]
        return Perceptron(p["rows"], p["H"], p["bits"], theta)
    if kind == "tage":
        hists = tuple(int(h) for h in str(p["hists"]).split(","))
        return TAGE(p["base"], p["entries"], p["tag_bits"], hists, p["reset"])
    if kind == "plbp":
        theta = None if p["theta"] == "auto" else p["theta"]
        return PLBP(p["N"], p["M"], p["H"], p["bits"], theta, p["index_scheme"], p["n"])
    raise ConfigError(f"unknown predictor kind {kind!r}", "kind")


def predict_train(predictor: Predictor, pc: int, outcome: bool) -> bool:
    """Predict one branch, then train on ``outcome``; returns the prediction."""
    if not isinstance(predictor, Predictor):
        raise TypeError("predictor is not an initialized Predictor")
    return predictor.step(pc, outcome)


PLBP_VARIANTS = (
    PredictorConfig.make("plbp", index_scheme="modulo"),
    PredictorConfig.make("plbp", index_scheme="curr_pc_hash"),
    PredictorConfig.make("plbp", index_scheme="last_n_pc_hash"),
)
ZOO = tuple(PredictorConfig(k) for k in KINDS if k != "plbp") + PLBP_VARIANTS
