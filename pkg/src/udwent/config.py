"""``key = value`` run configuration with a canonical, hashable echo."""
from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, fields
from pathlib import Path
from typing import get_type_hints

from .errors import ConfigError
from .quadrature import METHODS, QuadratureSpec

SCENARIOS = ("vacuum", "thermal", "desitter")
KERNELS = ("vacuum", "thermal", "desitter", "response", "delta_response")
FORMATS = ("csv", "json", "svg")
BEGIN, END = "udwent-config-begin", "udwent-config-end"

# keys that cannot change any number in an output; they stay out of the echo and the hash
RUNTIME_KEYS = ("out", "workers")

_Q = QuadratureSpec()


@dataclass(frozen=True)
class RunConfig:
    scenario: str = "vacuum"
    scenarios: tuple[str, ...] = SCENARIOS
    two_pi_T_sigma: float = 1e-3
    L: float = 10.0
    omega: float = 1.0
    u: float = 0.0
    v: float = 0.0
    epsilon: float = 0.0
    kernel: str = "vacuum"
    L_lo: float = 10.0
    L_hi: float = 1e4
    L_count: int = 49
    omega_lo: float = 1e-1
    omega_hi: float = 1e3
    omega_count: int = 40
    lattice_L_lo: float = 1e2
    lattice_L_hi: float = 5e3
    lattice_L_count: int = 40
    per_decade: int = 64
    method: str = "auto"
    rel_tol_1d: float = _Q.rel_tol_1d
    rel_tol_2d: float = _Q.rel_tol_2d
    window_cut: float = _Q.window_cut
    series_order: int = _Q.series_order
    formats: tuple[str, ...] = FORMATS
    out: str = "out"
    workers: int = 1

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"scenario must be one of {SCENARIOS}")
        bad = [s for s in self.scenarios if s not in SCENARIOS]
        if bad or not self.scenarios:
            raise ConfigError(f"unknown scenarios {bad}")
        if self.kernel not in KERNELS:
            raise ConfigError(f"kernel must be one of {KERNELS}")
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}")
        bad = [f for f in self.formats if f not in FORMATS]
        if bad:
            raise ConfigError(f"unknown formats {bad}")
        if not self.two_pi_T_sigma >= 0:
            raise ConfigError("two_pi_T_sigma must be >= 0")
        for lo, hi, n in (("L_lo", "L_hi", "L_count"), ("omega_lo", "omega_hi", "omega_count"),
                          ("lattice_L_lo", "lattice_L_hi", "lattice_L_count")):
            a, b, k = getattr(self, lo), getattr(self, hi), getattr(self, n)
            if not (0 < a <= b) or k < 1:
                raise ConfigError(f"need 0 < {lo} <= {hi} and {n} >= 1")
        if self.workers < 1 or self.per_decade < 2:
            raise ConfigError("workers >= 1 and per_decade >= 2 required")
        self.quadrature()

    def quadrature(self) -> QuadratureSpec:
        try:
            return QuadratureSpec(rel_tol_1d=self.rel_tol_1d, rel_tol_2d=self.rel_tol_2d,
                                  window_cut=self.window_cut, series_order=self.series_order,
                                  method=self.method)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def replace(self, **kw) -> "RunConfig":
        return dataclasses.replace(self, **kw)

    # ----- provenance

    def normalized(self) -> str:
        lines = []
        for f in fields(self):
            if f.name in RUNTIME_KEYS:
                continue
            lines.append(f"{f.name} = {_format(getattr(self, f.name))}")
        return "\n".join(lines) + "\n"

    def content_hash(self) -> str:
        from . import __version__
        text = f"udwent {__version__}\n{self.normalized()}"
        return hashlib.sha256(text.encode("utf-8")).hexdigest()

    def echo_lines(self, prefix: str = "# ") -> list[str]:
        body = [f"{prefix}{line}" for line in self.normalized().splitlines()]
        return [f"{prefix}{BEGIN}", *body, f"{prefix}content_hash = {self.content_hash()}", f"{prefix}{END}"]


def _format(value) -> str:
    if isinstance(value, tuple):
        return ",".join(_format(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


_HINTS = None


def _coerce(name: str, raw: str):
    global _HINTS
    if _HINTS is None:
        _HINTS = get_type_hints(RunConfig)
    if name not in _HINTS:
        raise ConfigError(f"unknown configuration key {name!r}")
    kind = _HINTS[name]
    raw = raw.strip()
    try:
        if kind is float:
            return float(raw)
        if kind is int:
            return int(raw)
        if kind is str:
            return raw
        return tuple(p.strip() for p in raw.split(",") if p.strip())
    except ValueError as exc:
        raise ConfigError(f"bad value for {name}: {raw!r}") from exc


def parse_pairs(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines. A block between the begin/end markers that
    was written into an output file is accepted with its comment prefix."""
    out: dict[str, str] = {}
    inside = False
    # an output file: only its embedded block is configuration
    embedded = any(l.strip().lstrip("#").strip() == BEGIN for l in text.splitlines())
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        bare = s.lstrip("#").strip()
        if bare == BEGIN:
            inside = True
            continue
        if bare == END:
            inside = False
            continue
        if inside:
            s = bare
        elif embedded or s.startswith("#"):
            continue
        if not s:
            continue
        if "=" not in s:
            if inside:
                continue
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (p.strip() for p in s.split("=", 1))
        if key == "content_hash":
            continue
        out[key] = value
    return out


def read_config_file(path: str | Path) -> dict[str, str]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if path.suffix == ".json":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        if isinstance(obj, list):
            obj = obj[0] if obj else {}
        cfg = obj.get("config", obj) if isinstance(obj, dict) else {}
        return {k: str(v) for k, v in cfg.items() if k != "content_hash"}
    return parse_pairs(text)


def build_config(pairs: dict[str, str] | None = None, overrides: dict[str, str] | None = None) -> RunConfig:
    """Defaults, then file pairs, then flag overrides (flags win)."""
    merged = dict(pairs or {})
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    kw = {k: _coerce(k, v) for k, v in merged.items()}
    try:
        return RunConfig(**kw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def config_dict(cfg: RunConfig) -> dict[str, str]:
    """The normalized echo as a JSON-friendly mapping (values as canonical strings)."""
    d = parse_pairs(cfg.normalized())
    d["content_hash"] = cfg.content_hash()
    return d
