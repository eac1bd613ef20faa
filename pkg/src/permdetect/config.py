"""YAML scenario configs and the embedded figure presets.

A config file is one YAML mapping::

    description: free text (optional)
    n: 40                      # even
    p: 23
    noise: gaussian            # or student_t (with df)
    df: 3
    covariance: {kind: ar1, rho: 0.6}   # identity | ar1 | brownian | random_corr (seed) | hetero_diag
    signal: {direction: pc, pc: lowest, norm_mode: mahalanobis}
    # or, for mixture alternatives:  signal: {mixture: true, magnitude: 3.0}
    effects: [0, 0.25, 0.5]    # c for shift signals, pi for mixtures
    replications: 1000
    permutations: 300
    statistics: ["@basic", "SVM.Boot.3"]   # names or @basic/@bootstrap/@highdim/@location
    alpha: 0.05
    V: 4
    balanced: true
    refold: true
    pvalue_mode: paper         # or add_one
    tie_break: false
    hdrda_mix: 0.5

Unknown keys and bad values raise :class:`~permdetect.exceptions.ConfigError`
naming the field and its line.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import asdict, fields
from importlib import resources
from pathlib import Path

import yaml

from .exceptions import ConfigError
from .simgen import CovarianceSpec, MixtureSpec, ScenarioConfig, SignalSpec, prepare
from .statistics import KNOWN_NAMES, TABLE_BASIC, TABLE_BOOTSTRAP, TABLE_HIGHDIM, TABLE_LOCATION

GROUPS = {
    "@basic": TABLE_BASIC,
    "@bootstrap": TABLE_BOOTSTRAP,
    "@highdim": TABLE_HIGHDIM,
    "@location": TABLE_LOCATION,
}
_SCENARIO_KEYS = {f.name for f in fields(ScenarioConfig)} - {"name"}
_TOP_KEYS = _SCENARIO_KEYS | {"description", "name"}


def preset_names() -> list[str]:
    files = resources.files("permdetect").joinpath("presets").iterdir()
    return sorted(f.name[:-5] for f in files if f.name.endswith(".yaml"))


def preset_text(name: str) -> str:
    if name not in preset_names():
        raise ConfigError(f"unknown preset {name!r}; valid presets: {', '.join(preset_names())}")
    return resources.files("permdetect").joinpath("presets", f"{name}.yaml").read_text("utf-8")


def preset_description(name: str) -> str:
    return yaml.safe_load(preset_text(name)).get("description", "")


def _key_lines(text):
    """Line number (1-based) of every top-level and nested mapping key."""
    lines = {}
    try:
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}" if mark else ""
        raise ConfigError(f"invalid YAML{where}: {exc}") from None
    if isinstance(root, yaml.MappingNode):
        for k, v in root.value:
            lines[k.value] = k.start_mark.line + 1
            if isinstance(v, yaml.MappingNode):
                for kk, _ in v.value:
                    lines[f"{k.value}.{kk.value}"] = kk.start_mark.line + 1
    return lines


def _expand_statistics(items, where):
    out = []
    for item in items:
        if not isinstance(item, str):
            raise ConfigError(f"{where}: statistic names must be strings, got {item!r}")
        if item.startswith("@"):
            if item not in GROUPS:
                raise ConfigError(f"{where}: unknown statistic group {item!r}; groups: {sorted(GROUPS)}")
            out.extend(GROUPS[item])
        elif item in KNOWN_NAMES:
            out.append(item)
        else:
            raise ConfigError(f"{where}: unknown statistic {item!r}")
    seen = set()
    return tuple(s for s in out if not (s in seen or seen.add(s)))


def parse_config(text: str, name: str = "config", **overrides) -> ScenarioConfig:
    """Parse YAML text into a validated :class:`ScenarioConfig`.

    ``overrides`` (e.g. ``replications=200``) replace file values; ``None`` values
    are ignored.
    """
    lines = _key_lines(text)
    data = yaml.safe_load(text) or {}
    if not isinstance(data, dict):
        raise ConfigError("config must be a YAML mapping")

    def loc(key):
        return f"field {key!r} (line {lines[key]})" if key in lines else f"field {key!r}"

    for key in data:
        if key not in _TOP_KEYS:
            raise ConfigError(f"unknown {loc(key)}; allowed: {sorted(_TOP_KEYS)}")
    kw = {k: v for k, v in data.items() if k in _SCENARIO_KEYS}
    kw.update({k: v for k, v in overrides.items() if v is not None})
    try:
        cov = dict(kw.pop("covariance", {}) or {})
        p = int(kw.get("p", 23))
        for key in cov:
            if key not in ("kind", "rho", "seed"):
                raise ConfigError(f"unknown {loc('covariance.' + key)}")
        kw["covariance"] = CovarianceSpec(p=p, **cov)
        sig = dict(kw.pop("signal", {}) or {})
        if sig.pop("mixture", False):
            for key in sig:
                if key != "magnitude":
                    raise ConfigError(f"unknown {loc('signal.' + key)} for a mixture signal")
            kw["signal"] = MixtureSpec(**sig)
        else:
            for key in sig:
                if key not in ("direction", "pc", "norm_mode", "c"):
                    raise ConfigError(f"unknown {loc('signal.' + key)}")
            kw["signal"] = SignalSpec(**sig)
        if "statistics" in kw:
            kw["statistics"] = _expand_statistics(kw["statistics"], loc("statistics"))
        if "effects" in kw:
            kw["effects"] = tuple(float(e) for e in kw["effects"])
        cfg = ScenarioConfig(name=str(data.get("name", name)), **kw)
        for effect in cfg.effects:
            prepare(cfg, effect)  # surfaces bad rho, pc index or singular Sigma now
        return cfg
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name}: {_locate(str(exc), lines)}") from None


def _locate(message, lines):
    """Prefix a validation message with the line of the field it names."""
    if "(line " in message:
        return message
    for w in re.findall(r"[A-Za-z_]+", message)[:3]:
        for key in (w, f"covariance.{w}", f"signal.{w}"):
            if key in lines:
                return f"field {key!r} (line {lines[key]}): {message}"
    return message


def load_config(source: str, **overrides) -> ScenarioConfig:
    """Load a preset by name or a YAML file by path."""
    path = Path(source)
    if path.suffix in (".yaml", ".yml") or path.exists():
        if not path.exists():
            raise ConfigError(f"config file {source!r} not found")
        return parse_config(path.read_text("utf-8"), name=path.stem, **overrides)
    return parse_config(preset_text(source), name=source, **overrides)


def dump_config(cfg: ScenarioConfig) -> str:
    """Fully resolved config as YAML (the form recorded next to run outputs)."""
    d = asdict(cfg)
    sig = d["signal"]
    if isinstance(cfg.signal, MixtureSpec):
        d["signal"] = {"mixture": True, "magnitude": sig["magnitude"]}
    else:
        sig.pop("c", None)
    d["covariance"].pop("p", None)
    d["effects"] = list(cfg.effects)
    d["statistics"] = list(cfg.statistics)
    return yaml.safe_dump(d, sort_keys=True)


def config_digest(cfg: ScenarioConfig) -> str:
    return hashlib.sha256(dump_config(cfg).encode("utf-8")).hexdigest()
