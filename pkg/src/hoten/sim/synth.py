"""Synthetic hotspot-biased pedestrian traces.

Hotspot centres are scattered over a square area. Every node ranks the
hotspots by a noisy copy of one shared popularity order and picks its next
destination from a Zipf law over its own ranking, so personal favourites
overlap without being identical. A node walks to a point inside the chosen
hotspot at constant speed, then pauses there with small GPS jitter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..traces import Trace


@dataclass(frozen=True)
class SynthSpec:
    n_nodes: int = 20
    n_hotspots: int = 20
    zipf_s: float = 1.2
    area: float = 4.0e6
    duration: float = 15000.0
    pause_min: float = 60.0
    pause_max: float = 900.0
    speed_min: float = 1.0
    speed_max: float = 2.0
    hotspot_radius: float = 50.0
    jitter: float = 1.5
    fix_interval: float = 10.0
    rank_noise: float = 0.25
    seed: int = 42

    def __post_init__(self):
        if self.n_nodes < 1 or self.n_hotspots < 1:
            raise ValueError("need at least one node and one hotspot")
        if self.zipf_s < 0:
            raise ValueError("zipf_s must be non-negative")
        if not (self.area > 0 and self.duration > 0 and self.fix_interval > 0):
            raise ValueError("area, duration and fix_interval must be positive")
        if not 0 < self.pause_min <= self.pause_max:
            raise ValueError("need 0 < pause_min <= pause_max")
        if not 0 < self.speed_min <= self.speed_max:
            raise ValueError("need 0 < speed_min <= speed_max")
        if self.jitter < 0 or self.hotspot_radius < 0 or self.rank_noise < 0:
            raise ValueError("jitter, hotspot_radius and rank_noise must be non-negative")


def zipf_weights(n: int, s: float) -> np.ndarray:
    w = 1.0 / np.arange(1, n + 1) ** s
    return w / w.sum()


def node_ids(n: int) -> list[str]:
    width = len(str(max(n - 1, 0)))
    return [f"n{i:0{width}d}" for i in range(n)]


def hotspot_centres(spec: SynthSpec, rng: np.random.Generator) -> np.ndarray:
    side = math.sqrt(spec.area)
    margin = min(spec.hotspot_radius, side / 4)
    return rng.uniform(margin, side - margin, size=(spec.n_hotspots, 2))


def personal_preferences(spec: SynthSpec, rng: np.random.Generator) -> np.ndarray:
    """(n_nodes, n_hotspots) visit probabilities."""
    base = np.arange(spec.n_hotspots, dtype=float)
    zipf = zipf_weights(spec.n_hotspots, spec.zipf_s)
    prefs = np.empty((spec.n_nodes, spec.n_hotspots))
    for i in range(spec.n_nodes):
        noisy = base + rng.normal(0.0, spec.rank_noise * spec.n_hotspots, spec.n_hotspots)
        order = np.argsort(noisy, kind="stable")
        prefs[i, order] = zipf
    return prefs


def _disc(rng: np.random.Generator, radius: float) -> np.ndarray:
    r = radius * math.sqrt(rng.uniform())
    a = rng.uniform(0, 2 * math.pi)
    return np.array([r * math.cos(a), r * math.sin(a)])


def _walk_node(node: str, centres: np.ndarray, pref: np.ndarray, spec: SynthSpec,
               rng: np.random.Generator) -> Trace:
    dt = spec.fix_interval
    times, xs, ys = [], [], []

    def fix(t, p):
        times.append(t)
        xs.append(float(p[0]))
        ys.append(float(p[1]))

    h = rng.choice(len(centres), p=pref)
    pos = centres[h] + _disc(rng, spec.hotspot_radius)
    t = 0.0
    while t <= spec.duration:
        pause_end = t + rng.uniform(spec.pause_min, spec.pause_max)
        while t <= min(pause_end, spec.duration):
            fix(t, pos + _disc(rng, spec.jitter))
            t += dt
        h = rng.choice(len(centres), p=pref)
        target = centres[h] + _disc(rng, spec.hotspot_radius)
        speed = rng.uniform(spec.speed_min, spec.speed_max)
        dist = float(np.hypot(*(target - pos)))
        steps = max(1, math.ceil(dist / (speed * dt)))
        for k in range(1, steps + 1):
            if t > spec.duration:
                break
            fix(t, pos + (target - pos) * (k / steps))
            t += dt
        pos = target
    return Trace(node, np.array(times), np.array(xs), np.array(ys))


def synth_traces(n_nodes: int = 20, n_hotspots: int = 20, zipf_s: float = 1.2,
                 area: float = 4.0e6, duration: float = 15000.0,
                 pause: tuple[float, float] = (60.0, 900.0), seed: int = 42,
                 **kwargs) -> list[Trace]:
    spec = SynthSpec(n_nodes=n_nodes, n_hotspots=n_hotspots, zipf_s=zipf_s, area=area,
                     duration=duration, pause_min=pause[0], pause_max=pause[1],
                     seed=seed, **kwargs)
    return synth_from_spec(spec)


def synth_from_spec(spec: SynthSpec) -> list[Trace]:
    rng = np.random.default_rng(spec.seed)
    centres = hotspot_centres(spec, rng)
    prefs = personal_preferences(spec, rng)
    return [_walk_node(node, centres, prefs[i], spec, rng)
            for i, node in enumerate(node_ids(spec.n_nodes))]
