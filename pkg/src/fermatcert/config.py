"""Run configuration: tolerance overrides, caps, seed and output settings."""
from __future__ import annotations

import json
import os
from contextlib import contextmanager
from dataclasses import asdict, dataclass, fields

from . import nevanlinna, polynomial, theorems
from .errors import DomainError

ENV_VAR = "FERMATCERT_CONFIG"
FORMATS = ("structured-text", "human")


@dataclass
class RunConfig:
    root_residual_tol: float = polynomial.ROOT_RESIDUAL_TOL
    cluster_eps: float = polynomial.CLUSTER_EPS
    equality_eps: float = theorems.EQ_TOL
    node_cap: int = nevanlinna.NODE_CAP
    term_cap: int = theorems.PN_TERM_CAP
    seed: int = 0
    output: str | None = None
    output_format: str = "structured-text"

    def __post_init__(self):
        for name in ("root_residual_tol", "cluster_eps", "equality_eps"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not v > 0:
                raise DomainError(f"{name} must be positive, got {v!r}")
        defaults = RunConfig.__dataclass_fields__
        for name in ("node_cap", "term_cap"):
            v = getattr(self, name)
            floor = defaults[name].default // 4
            if not isinstance(v, int) or v < floor:
                raise DomainError(f"{name} must be an integer >= {floor}, got {v!r}")
        if self.output_format not in FORMATS:
            raise DomainError(f"output_format must be one of {FORMATS}")

    @classmethod
    def from_mapping(cls, data):
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise DomainError(f"unknown config keys: {sorted(extra)}")
        return cls(**data)

    def to_dict(self):
        return asdict(self)


def load_config(path=None):
    """Config from ``path``, else from $FERMATCERT_CONFIG, else defaults."""
    path = path or os.environ.get(ENV_VAR)
    if not path:
        return RunConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise DomainError("config file must hold a JSON object")
    return RunConfig.from_mapping(data)


@contextmanager
def applied(cfg):
    """Temporarily install the config's tolerances as module defaults."""
    saved = (polynomial.ROOT_RESIDUAL_TOL, polynomial.CLUSTER_EPS, theorems.EQ_TOL, nevanlinna.NODE_CAP)
    polynomial.ROOT_RESIDUAL_TOL = cfg.root_residual_tol
    polynomial.CLUSTER_EPS = cfg.cluster_eps
    theorems.EQ_TOL = cfg.equality_eps
    nevanlinna.NODE_CAP = cfg.node_cap
    try:
        yield cfg
    finally:
        polynomial.ROOT_RESIDUAL_TOL, polynomial.CLUSTER_EPS, theorems.EQ_TOL, nevanlinna.NODE_CAP = saved
