"""Predictor configurations and their ``key=value`` text form.

Example::

    kind=plbp index_scheme=last_n_pc_hash n=4 N=256 M=256 H=26 theta=adaptive

Keys are case-sensitive (``n`` is the last-PC window, ``N`` the row count).
"""
from __future__ import annotations

import shlex
from dataclasses import dataclass

# kind -> {key: default}; the default's type drives parsing
DEFAULTS: dict[str, dict[str, object]] = {
    "perfect": {},
    "one_bit": {"size": 1 << 14},
    "gshare": {"size": 1 << 16, "hist": 16},
    "local": {"histories": 1 << 10, "hist": 10, "pattern": 1 << 10},
    "loop": {"entries": 128, "ways": 2, "tag_bits": 6},
    "perceptron": {"rows": 1 << 12, "H": 28, "bits": 8, "theta": "auto"},
    "tage": {"base": 1 << 13, "entries": 1 << 10, "tag_bits": 9,
             "hists": "5,15,44,130", "reset": 1 << 18},
    "plbp": {"index_scheme": "modulo", "n": 4, "N": 256, "M": 256, "H": 26,
             "bits": 8, "theta": "auto"},
}
KINDS = tuple(DEFAULTS)
POW2_KEYS = {"size", "histories", "pattern", "entries", "ways", "rows", "base", "N", "M"}


class ConfigError(ValueError):
    """Invalid predictor configuration; ``key`` names the offending key."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


def _coerce(kind: str, key: str, raw: str):
    default = DEFAULTS[kind][key]
    if key == "theta":
        if kind == "perceptron" and raw == "adaptive":
            raise ConfigError("perceptron has no adaptive threshold", key)
        if raw in ("auto", "adaptive"):
            return raw
    if key == "hists":
        try:
            vals = [int(x) for x in raw.split(",")]
        except ValueError:
            raise ConfigError(f"{key}: expected comma-separated integers, got {raw!r}", key) from None
        return ",".join(str(v) for v in vals)
    if isinstance(default, int) or key == "theta":
        try:
            return int(raw, 0)
        except ValueError:
            raise ConfigError(f"{key}: expected an integer, got {raw!r}", key) from None
    return raw


@dataclass(frozen=True)
class PredictorConfig:
    kind: str
    params: tuple[tuple[str, object], ...] = ()

    def __post_init__(self):
        if self.kind not in DEFAULTS:
            raise ConfigError(f"unknown predictor kind {self.kind!r}", "kind")
        merged = dict(DEFAULTS[self.kind])
        for k, v in self.params:
            if k not in merged:
                raise ConfigError(f"unknown key {k!r} for kind={self.kind}", k)
            merged[k] = _coerce(self.kind, k, v) if isinstance(v, str) else v
        object.__setattr__(self, "params", tuple(merged.items()))
        self._validate()

    @classmethod
    def make(cls, kind: str, **params) -> "PredictorConfig":
        return cls(kind, tuple(params.items()))

    def __getitem__(self, key: str):
        return dict(self.params)[key]

    def as_dict(self) -> dict[str, object]:
        return dict(self.params)

    def _validate(self) -> None:
        p = self.as_dict()
        for k, v in p.items():
            if k in POW2_KEYS and (not isinstance(v, int) or v < 1 or v & (v - 1)):
                raise ConfigError(f"{k} must be a power of two, got {v}", k)
        for k in ("hist", "H", "n"):
            if k in p and p[k] < 1:
                raise ConfigError(f"{k} must be >= 1", k)
        if self.kind == "plbp":
            from .plbp import INDEX_SCHEMES
            if p["index_scheme"] not in INDEX_SCHEMES:
                raise ConfigError(f"index_scheme must be one of {INDEX_SCHEMES}",
                                  "index_scheme")
        if "theta" in p and isinstance(p["theta"], int) and p["theta"] < 1:
            raise ConfigError("theta must be >= 1", "theta")

    @property
    def text(self) -> str:
        """Canonical ``key=value`` form listing only non-default keys."""
        parts = [f"kind={self.kind}"]
        for k, v in self.params:
            if v != DEFAULTS[self.kind][k]:
                parts.append(f"{k}={v}")
        return " ".join(parts)

    @property
    def slug(self) -> str:
        """Filesystem-safe name, e.g. ``plbp-index_scheme_curr_pc_hash``."""
        parts = [self.kind]
        for k, v in self.params:
            if v != DEFAULTS[self.kind][k]:
                parts.append(f"{k}_{v}".replace(",", "-"))
        return "-".join(parts)

    def __str__(self) -> str:
        return self.text


def parse_config(text: str) -> PredictorConfig:
    """Parse ``kind=... key=value ...``; unknown keys raise :class:`ConfigError`."""
    pairs = []
    kind = None
    for token in shlex.split(text):
        if "=" not in token:
            raise ConfigError(f"expected key=value, got {token!r}", token)
        key, _, value = token.partition("=")
        if key == "kind":
            kind = value
        else:
            pairs.append((key, value))
    if kind is None:
        raise ConfigError("missing kind=...", "kind")
    seen = set()
    for key, _ in pairs:
        if key in seen:
            raise ConfigError(f"duplicate key {key!r}", key)
        seen.add(key)
    return PredictorConfig(kind, tuple(pairs))
