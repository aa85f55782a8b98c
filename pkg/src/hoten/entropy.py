"""Entropy-based node utilities: centrality, similarity, personality and the
combined Hoten utility.

All logs are natural. Zero weights are replaced by ``delta`` before any
logarithm is taken, without renormalizing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import LengthMismatch
from .hotspots import WeightVector


@dataclass(frozen=True)
class EntropyParams:
    delta: float = 1e-6
    divergence_floor: Optional[float] = None
    alpha: float = 1 / 3
    beta: float = 1 / 3
    gamma: float = 1 / 3

    def __post_init__(self):
        if self.divergence_floor is None:
            object.__setattr__(self, "divergence_floor", self.delta)
        if not (self.delta > 0 and self.divergence_floor > 0):
            raise ValueError("delta and divergence_floor must be positive")
        if min(self.alpha, self.beta, self.gamma) < 0:
            raise ValueError("alpha, beta, gamma must be non-negative")
        if abs(self.alpha + self.beta + self.gamma - 1.0) > 1e-12:
            raise ValueError("alpha + beta + gamma must equal 1")


@dataclass(frozen=True)
class NodeProfile:
    """A node's hotspot knowledge.

    ``personal`` is the full local vector (used for centrality and
    personality); ``advertised`` is what peers see, normally the top-k
    truncation, and feeds similarity. It defaults to ``personal``.
    """

    node_id: str
    personal: WeightVector | np.ndarray
    version: int = 1
    advertised: WeightVector | np.ndarray | None = None

    @property
    def shared(self):
        return self.personal if self.advertised is None else self.advertised


@dataclass(frozen=True)
class PublicProfile:
    public: WeightVector | np.ndarray


def _vec(w) -> np.ndarray:
    if isinstance(w, WeightVector):
        return w.weights
    return np.asarray(w, dtype=float)


def substitute_zeros(w, delta: float) -> np.ndarray:
    v = _vec(w)
    return np.where(v == 0, delta, v)


def _pair(p, q, delta):
    a, b = _vec(p), _vec(q)
    if a.shape != b.shape:
        raise LengthMismatch(f"vector lengths differ: {a.shape} vs {b.shape}")
    return substitute_zeros(a, delta), substitute_zeros(b, delta)


def kl_divergence(p, q, delta: float = 1e-6) -> float:
    a, b = _pair(p, q, delta)
    # difference of logs: a ratio of tiny weights can overflow
    return float(np.sum(a * (np.log(a) - np.log(b))))


def centrality(personal, public, params: EntropyParams = EntropyParams()) -> float:
    """Reciprocal relative entropy of the personal vector from the public one."""
    kl = kl_divergence(personal, public, params.delta)
    return 1.0 / max(kl, params.divergence_floor)


def similarity(a, b, params: EntropyParams = EntropyParams()) -> float:
    """Inverse symmetrized relative entropy."""
    x, y = _pair(a, b, params.delta)
    lx, ly = np.log(x), np.log(y)
    # one shared expression keeps similarity(a, b) == similarity(b, a) bit-for-bit
    sym = float(np.sum((x - y) * (lx - ly)))
    return 1.0 / max(sym, params.divergence_floor)


def personality(personal, params: EntropyParams = EntropyParams()) -> float:
    """Shannon entropy of the personal vector."""
    v = substitute_zeros(personal, params.delta)
    return float(-np.sum(v * np.log(v)))


def share(a: float, b: float) -> float:
    """a / (a + b), with 0/0 taken as an even split."""
    s = a + b
    return 0.5 if s == 0 else a / s


def combine(params: EntropyParams, c_i, c_j, s_i, s_j, p_i, p_j) -> float:
    return (params.alpha * share(c_i, c_j)
            + params.beta * share(s_i, s_j)
            + params.gamma * share(p_i, p_j))


def hoten_utility(i: NodeProfile, j: NodeProfile, dest: NodeProfile,
                  public: PublicProfile, params: EntropyParams = EntropyParams()) -> float:
    """Utility of ``i`` (against peer ``j``) as a carrier towards ``dest``.

    The value for ``j`` is ``hoten_utility(j, i, ...)`` and the two sum to 1.
    """
    pub = public.public
    c_i = centrality(i.personal, pub, params)
    c_j = centrality(j.personal, pub, params)
    s_i = similarity(i.shared, dest.shared, params)
    s_j = similarity(j.shared, dest.shared, params)
    p_i = personality(i.personal, params)
    p_j = personality(j.personal, params)
    return combine(params, c_i, c_j, s_i, s_j, p_i, p_j)
