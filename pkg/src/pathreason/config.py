"""Pipeline configuration: ``key = value`` files with command-line overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields

from .reasoner import ReasonerConfig

ARTIFACT_ENV = "REASONER_ARTIFACTS"

# maximum branch number per benchmark; other datasets fall back to DEFAULT_K
BRANCH_TABLE = {
    "fb15k-237-10%": 15,
    "fb15k-237-20%": 5,
    "fb15k-237-50%": 3,
    "nell23k": 30,
    "wd-singer": 30,
}
DEFAULT_K = 10


class ConfigError(ValueError):
    """Invalid or unparseable configuration value."""


@dataclass
class PipelineConfig:
    dataset: str = ""
    artifacts: str = ""
    type_map: str = ""
    l_max: int = 3
    k: int = 0  # 0 = look up BRANCH_TABLE
    alpha: float = 0.8
    beta: float = 0.5
    n_top: int = 200
    m_inter: int = 200
    mode: str = "dg"
    walks_per_triple: int = 100
    seed: int = 0
    threads: int = 1
    exclude_target_edge: bool = True
    filtered: bool = True
    both_directions: bool = False
    no_intra: bool = False
    no_inter: bool = False
    count_mode: str = "walks"
    repeats: int = 3

    def __post_init__(self):
        if self.k == 0:
            self.k = default_k(self.dataset)
        if not self.artifacts:
            root = os.environ.get(ARTIFACT_ENV, "artifacts")
            name = os.path.basename(os.path.normpath(self.dataset)) if self.dataset else "default"
            self.artifacts = os.path.join(root, name)
        self.validate()

    def validate(self):
        checks = [
            ("l_max", self.l_max >= 1, ">= 1"),
            ("k", self.k >= 1, ">= 1"),
            ("alpha", 0 < self.alpha < 1, "in (0, 1)"),
            ("beta", 0 < self.beta < 1, "in (0, 1)"),
            ("n_top", self.n_top >= 1, ">= 1"),
            ("m_inter", self.m_inter >= 2, ">= 2"),
            ("mode", self.mode in ("dg", "rw"), "'dg' or 'rw'"),
            ("walks_per_triple", self.walks_per_triple >= 1, ">= 1"),
            ("threads", self.threads != 0, "non-zero"),
            ("count_mode", self.count_mode in ("walks", "entities"), "'walks' or 'entities'"),
            ("repeats", self.repeats >= 1, ">= 1"),
        ]
        for key, ok, expected in checks:
            if not ok:
                raise ConfigError(f"{key} must be {expected}, got {getattr(self, key)!r}")

    def reasoner(self) -> ReasonerConfig:
        return ReasonerConfig(alpha=self.alpha, beta=self.beta, n_top=self.n_top,
                              m_inter=self.m_inter, l_max=self.l_max, k=self.k,
                              use_intra=not self.no_intra, use_inter=not self.no_inter)


def default_k(dataset: str) -> int:
    name = os.path.basename(os.path.normpath(dataset)).lower() if dataset else ""
    return BRANCH_TABLE.get(name, DEFAULT_K)


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _coerce(key, raw, typ):
    if isinstance(raw, typ) and not (typ is int and isinstance(raw, bool)):
        return raw
    text = str(raw).strip()
    try:
        if typ is bool:
            if text.lower() in _TRUE:
                return True
            if text.lower() in _FALSE:
                return False
            raise ValueError(text)
        return typ(text)
    except ValueError:
        raise ConfigError(f"cannot parse {key} = {raw!r} as {typ.__name__}") from None


def parse_config_file(path) -> dict[str, str]:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def load_config(path=None, overrides=None) -> PipelineConfig:
    """Merge a config file with flag overrides (overrides win); unknown keys are errors."""
    types = {f.name: f.type for f in fields(PipelineConfig)}
    types = {k: {"int": int, "float": float, "str": str, "bool": bool}[v] for k, v in types.items()}
    merged = parse_config_file(path) if path else {}
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    unknown = sorted(set(merged) - set(types))
    if unknown:
        raise ConfigError(f"unknown configuration key(s): {', '.join(unknown)}")
    values = {k: _coerce(k, v, types[k]) for k, v in merged.items()}
    return PipelineConfig(**values)
