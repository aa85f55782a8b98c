"""Experiment configuration: a flat ``key = value`` file plus flag overrides.

Example::

    # experiment.cfg
    synth = true
    synth_nodes = 20
    protocols = hoten, epidemic, simbet
    ttl_sweep = 500, 1000, 2000, 4000, 8000, 15000
    grid_size = auto

Lines starting with ``#`` or ``;`` are comments. Every key can also be given
on the command line as ``--<key>`` (underscores or dashes).
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from .entropy import EntropyParams
from .errors import ConfigInvalid
from .hotspots import DEFAULT_CANDIDATES
from .protocols import PROTOCOLS
from .sim.engine import DEFAULT_TTLS, SimConfig
from .sim.synth import SynthSpec
from .traces import StayPointParams

_SECTION = "experiment"


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _floats(text: str) -> tuple[float, ...]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    return tuple(float(p) for p in parts)


def _strings(text: str) -> tuple[str, ...]:
    return tuple(p.strip() for p in text.split(",") if p.strip())


def _grid(text: str) -> float | None:
    return None if text.strip().lower() == "auto" else float(text)


# key -> (parser, default, help)
KEYS: dict[str, tuple[Callable[[str], Any], Any, str]] = {
    "traces": (_strings, (), "comma-separated GPS log CSV paths"),
    "synth": (_bool, False, "generate synthetic traces instead of reading logs"),
    "synth_nodes": (int, SynthSpec.n_nodes, "synthetic node count"),
    "synth_hotspots": (int, SynthSpec.n_hotspots, "synthetic hotspot count"),
    "synth_zipf_s": (float, SynthSpec.zipf_s, "Zipf exponent of hotspot popularity"),
    "synth_area": (float, SynthSpec.area, "square area in m^2"),
    "synth_duration": (float, SynthSpec.duration, "trace duration in s"),
    "synth_pause_min": (float, SynthSpec.pause_min, "minimum pause in s"),
    "synth_pause_max": (float, SynthSpec.pause_max, "maximum pause in s"),
    "protocols": (_strings, PROTOCOLS, "protocols to simulate"),
    "R": (float, 250.0, "transmission range in m"),
    "tick": (float, 10.0, "contact sampling tick in s"),
    "runtime": (float, 15000.0, "simulated time in s"),
    "ttl_sweep": (_floats, DEFAULT_TTLS, "message TTLs in s"),
    "alpha": (float, 1 / 3, "centrality weight"),
    "beta": (float, 1 / 3, "similarity weight"),
    "gamma": (float, 1 / 3, "personality weight"),
    "delta": (float, 1e-6, "substitute for zero weights"),
    "divergence_floor": (float, None, "lower bound on divergences (default: delta)"),
    "grid_size": (_grid, None, "hotspot cell size in m, or 'auto'"),
    "grid_candidates": (_floats, DEFAULT_CANDIDATES, "cell sizes tried by 'auto'"),
    "k_ratio": (float, 0.15, "share of cells kept in advertised vectors"),
    "stay_dist": (float, 5.0, "stay-point radius in m"),
    "stay_time": (float, 30.0, "stay-point minimum duration in s"),
    "confidence": (float, 0.9, "weight mass for the visited-hotspot ratio"),
    "seed": (int, 42, "RNG seed for synthetic traces"),
    "oracle_public": (_bool, False, "use global public weights instead of gossip"),
    "events": (_bool, False, "write per-run event logs"),
    "out": (str, "out", "output directory"),
}


def _case_map() -> dict[str, str]:
    return {k.lower(): k for k in KEYS}


def parse_value(key: str, text: str) -> Any:
    conv = KEYS[key][0]
    try:
        return conv(text)
    except (TypeError, ValueError) as exc:
        raise ConfigInvalid(f"bad value for {key}: {exc}") from None


def read_config_file(path) -> dict[str, Any]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigInvalid(f"cannot read config {path}: {exc}") from None
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(f"[{_SECTION}]\n{text}", source=str(path))
    except configparser.Error as exc:
        raise ConfigInvalid(f"{path}: {exc}") from None
    names = _case_map()
    values = {}
    for raw, text in parser.items(_SECTION):
        key = names.get(raw.lower().replace("-", "_"))
        if key is None:
            raise ConfigInvalid(f"{path}: unknown key {raw!r}")
        values[key] = parse_value(key, text)
    return values


@dataclass
class ExperimentConfig:
    values: dict[str, Any] = field(default_factory=dict)

    def __getitem__(self, key: str) -> Any:
        if key in self.values:
            return self.values[key]
        return KEYS[key][1]

    def explicitly_set(self, key: str) -> bool:
        return key in self.values

    @classmethod
    def load(cls, path=None, overrides: dict[str, Any] | None = None) -> "ExperimentConfig":
        values = read_config_file(path) if path else {}
        values.update(overrides or {})
        return cls(values)

    @property
    def out_dir(self) -> Path:
        return Path(self["out"])

    def require_source(self) -> str:
        """'traces' or 'synth'; exactly one must be configured."""
        has_traces = bool(self["traces"])
        has_synth = bool(self["synth"])
        if has_traces == has_synth:
            raise ConfigInvalid("configure exactly one input: 'traces' or 'synth = true'")
        return "traces" if has_traces else "synth"

    def synth_spec(self) -> SynthSpec:
        try:
            return SynthSpec(
                n_nodes=self["synth_nodes"], n_hotspots=self["synth_hotspots"],
                zipf_s=self["synth_zipf_s"], area=self["synth_area"],
                duration=self["synth_duration"], pause_min=self["synth_pause_min"],
                pause_max=self["synth_pause_max"], seed=self["seed"],
            )
        except ValueError as exc:
            raise ConfigInvalid(str(exc)) from None

    def entropy_params(self) -> EntropyParams:
        try:
            return EntropyParams(self["delta"], self["divergence_floor"],
                                 self["alpha"], self["beta"], self["gamma"])
        except ValueError as exc:
            raise ConfigInvalid(str(exc)) from None

    def stay_params(self) -> StayPointParams:
        try:
            return StayPointParams(self["stay_dist"], self["stay_time"])
        except ValueError as exc:
            raise ConfigInvalid(str(exc)) from None

    def protocols(self) -> tuple[str, ...]:
        protos = self["protocols"]
        if not protos:
            raise ConfigInvalid("protocol list is empty")
        bad = [p for p in protos if p not in PROTOCOLS]
        if bad:
            raise ConfigInvalid(f"unknown protocols {bad}; choose from {PROTOCOLS}")
        return protos

    def sim_config(self, protocol: str) -> SimConfig:
        cfg = SimConfig(
            protocol=protocol, R=self["R"], tick=self["tick"], runtime=self["runtime"],
            ttl_sweep=tuple(self["ttl_sweep"]), entropy=self.entropy_params(),
            grid_size=self["grid_size"], grid_candidates=tuple(self["grid_candidates"]),
            k_ratio=self["k_ratio"], stay=self.stay_params(),
            oracle_public=self["oracle_public"], rng_seed=self["seed"],
        )
        cfg.validate()
        return cfg
