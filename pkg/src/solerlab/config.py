"""Run configuration with a plain key = value file format.

The file format is line-oriented: `key = value`, one per line, `#` comments
and blank lines ignored.  Values are parsed by the declared field type;
list-valued fields use comma separation.  parse(emit(config)) round-trips
exactly.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

__all__ = ["RunConfig", "emit_config", "parse_config", "load_config", "save_config"]


@dataclass
class RunConfig:
    """All sweep knobs in one place; CLI flags override file values."""

    mass: float = 1.0
    omega_min: float = 0.12
    omega_max: float = 0.99
    steps: int = 30
    ell_max: int = 2
    m_values: list = field(default_factory=list)  # empty = all 0..ell
    eta_norm_sq: list = field(default_factory=lambda: [0.0])
    n: int = 300
    map_scale: float = 10.0
    re_tol: float = 1e-4
    zero_tol: float = 1e-5
    band_tol: float = 1e-3
    match_tol: float = 1e-2
    tail_tol: float = 1e-3
    tail_frac: float = 0.75
    refine_tol: float = 1e-3
    solver_rtol: float = 1e-12
    jobs: int = 1
    out_dir: str = "."


_LIST_ELEM = {"m_values": int, "eta_norm_sq": float}


def emit_config(cfg):
    lines = []
    for f in dataclasses.fields(RunConfig):
        val = getattr(cfg, f.name)
        if isinstance(val, list):
            val = ",".join(repr(x) for x in val)
        elif isinstance(val, float):
            val = repr(val)
        lines.append(f"{f.name} = {val}")
    return "\n".join(lines) + "\n"


def parse_config(text, base=None):
    cfg = dataclasses.replace(base) if base is not None else RunConfig()
    types = {f.name: f.type for f in dataclasses.fields(RunConfig)}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not sep or key not in types:
            raise ValueError(f"bad config line {lineno}: {raw!r}")
        if key in _LIST_ELEM:
            elems = [v for v in (s.strip() for s in val.split(",")) if v]
            setattr(cfg, key, [_LIST_ELEM[key](v) for v in elems])
        elif isinstance(getattr(cfg, key), bool):
            setattr(cfg, key, val.lower() in ("1", "true", "yes"))
        elif isinstance(getattr(cfg, key), int):
            setattr(cfg, key, int(val))
        elif isinstance(getattr(cfg, key), float):
            setattr(cfg, key, float(val))
        else:
            setattr(cfg, key, val)
    return cfg


def load_config(path, base=None):
    with open(path) as fh:
        return parse_config(fh.read(), base)


def save_config(cfg, path):
    from .profile import _atomic_write
    _atomic_write(path, emit_config(cfg))
