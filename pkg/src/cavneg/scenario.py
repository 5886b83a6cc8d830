"""Trajectory scenarios and the general second-order negativity.

One cavity of an initially maximally entangled pair travels along a piecewise
trajectory: uniformly accelerated stretches with a sign and inertial coasts,
each with a proper duration measured at the cavity centre.  Every accelerated
stretch is booked as boost into the accelerated basis, free evolution there,
boost back, so the cavity starts and ends each segment in an inertial frame.
A kickstart scenario drops the final boost back, describing a trajectory that
ends while still accelerating.

The end-to-end transform of a scenario feeds the second-order negativity: for
an excitation in mode k,

    negativity = 1/2 - h**2 * sum_{n != k} (|alpha1[n, k]|**2 / 2
                                            + |beta1[n, k]|**2)

where the sum, the scaled deficit, is independent of h because the transform
blocks are stored per unit h.
"""

from __future__ import annotations

import math
import threading
from collections import OrderedDict
from dataclasses import dataclass
from typing import Union

import numpy as np

from .bogoliubov import (
    PerturbativeTransform,
    compose,
    identity_transform,
    massive_boost_transform,
    massless_boost_transform,
    phase_rotation,
)
from .spectrum import CavityConfig, ValidityReport, rindler_frequency

__all__ = [
    "Accelerated",
    "Inertial",
    "TrajectorySegment",
    "Scenario",
    "NegativityResult",
    "effective_transform",
    "negativity_general",
    "scenario_negativity",
    "log_negativity",
    "one_way_scenario",
    "alpha_centauri_scenario",
    "round_trip_scenario",
    "kickstart_scenario",
]


@dataclass(frozen=True)
class Accelerated:
    """Uniformly accelerated stretch: sign +1 or -1, proper duration >= 0."""

    sign: int
    duration: float

    def __post_init__(self) -> None:
        if self.sign not in (-1, 1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        if self.duration < 0:
            raise ValueError(f"duration must be non-negative, got {self.duration}")


@dataclass(frozen=True)
class Inertial:
    """Inertial coast with proper duration >= 0."""

    duration: float

    def __post_init__(self) -> None:
        if self.duration < 0:
            raise ValueError(f"duration must be non-negative, got {self.duration}")


TrajectorySegment = Union[Accelerated, Inertial]


@dataclass(frozen=True)
class Scenario:
    """Ordered trajectory segments plus the cavity configuration.

    kickstart=True omits the boost back to the inertial basis after the final
    segment, which must then be an Accelerated one.
    """

    segments: tuple
    cfg: CavityConfig
    kickstart: bool = False

    def __post_init__(self) -> None:
        segs = tuple(self.segments)
        for seg in segs:
            if not isinstance(seg, (Accelerated, Inertial)):
                raise TypeError(f"unsupported segment {seg!r}")
        if self.kickstart and (not segs or not isinstance(segs[-1], Accelerated)):
            raise ValueError("a kickstart scenario must end with an Accelerated segment")
        object.__setattr__(self, "segments", segs)


@dataclass(frozen=True)
class NegativityResult:
    """Negativity of the mode pair after a scenario.

    negativity equals 1/2 - h_used**2 * deficit_scaled exactly; the scaled
    deficit is non-negative and independent of h.  truncation_tail estimates
    the absolute deficit error from the mode cutoff.
    """

    negativity: float
    deficit_scaled: float
    h_used: float
    k_used: int
    validity: ValidityReport
    truncation_tail: float

    @classmethod
    def from_deficit(
        cls,
        deficit_scaled: float,
        h: float,
        k: int,
        validity: ValidityReport,
        truncation_tail: float = 0.0,
    ) -> "NegativityResult":
        return cls(
            negativity=0.5 - h * h * deficit_scaled,
            deficit_scaled=deficit_scaled,
            h_used=h,
            k_used=k,
            validity=validity,
            truncation_tail=truncation_tail,
        )


# Boost blocks and per-segment transforms are pure functions of a handful of
# scalars, and sweeps revisit the same values constantly; small keyed caches
# keep the big matrices alive across calls without unbounded growth.
_BOOST_CACHE: OrderedDict = OrderedDict()
_BOOST_LOCK = threading.Lock()
_SEGMENT_CACHE: OrderedDict = OrderedDict()
_SEGMENT_LOCK = threading.Lock()
_BOOST_CACHE_SIZE = 4
_SEGMENT_CACHE_SIZE = 8


def _cache_get(cache, lock, key):
    with lock:
        if key in cache:
            cache.move_to_end(key)
            return cache[key]
    return None


def _cache_put(cache, lock, key, value, size):
    with lock:
        cache[key] = value
        cache.move_to_end(key)
        while len(cache) > size:
            cache.popitem(last=False)


def clear_caches() -> None:
    """Drop cached boost blocks and segment transforms (mostly for tests)."""
    with _BOOST_LOCK:
        _BOOST_CACHE.clear()
    with _SEGMENT_LOCK:
        _SEGMENT_CACHE.clear()


def _boost_blocks(n_max: int, M: float):
    key = (n_max, M)
    hit = _cache_get(_BOOST_CACHE, _BOOST_LOCK, key)
    if hit is not None:
        return hit
    boost = (
        massless_boost_transform(n_max)
        if M == 0
        else massive_boost_transform(n_max, M)
    )
    alpha_sq = np.real(boost.alpha1) ** 2
    beta_sq = np.real(boost.beta1) ** 2
    alpha_sq.setflags(write=False)
    beta_sq.setflags(write=False)
    value = (boost, alpha_sq, beta_sq)
    _cache_put(_BOOST_CACHE, _BOOST_LOCK, key, value, _BOOST_CACHE_SIZE)
    return value


def _inertial_frequencies(cfg: CavityConfig) -> np.ndarray:
    n = np.arange(1, cfg.n_max + 1, dtype=float)
    return np.sqrt(cfg.M * cfg.M + (math.pi * n) ** 2) / cfg.delta


def _accelerated_frequencies(cfg: CavityConfig) -> np.ndarray:
    if cfg.M == 0:
        base = rindler_frequency(1, cfg)
        return base * np.arange(1, cfg.n_max + 1, dtype=float)
    # No accelerated spectrum is known at M > 0; the h -> 0 phase rule reuses
    # the inertial frequencies, an O(h) phase error that leaves the
    # second-order deficit structure untouched.
    return _inertial_frequencies(cfg)


def _accelerated_segment(
    cfg: CavityConfig, sign: int, duration: float, open_ended: bool
) -> PerturbativeTransform:
    key = (cfg.n_max, cfg.M, cfg.delta, cfg.h, sign, duration, open_ended)
    hit = _cache_get(_SEGMENT_CACHE, _SEGMENT_LOCK, key)
    if hit is not None:
        return hit
    boost, alpha_sq, beta_sq = _boost_blocks(cfg.n_max, cfg.M)
    z = np.exp(1j * _accelerated_frequencies(cfg) * duration)
    if open_ended:
        # boost then accelerated-frame evolution, no boost back
        alpha1 = sign * z[:, None] * boost.alpha1
        beta1 = sign * z[:, None] * boost.beta1
        alpha2 = z * boost.alpha2_diag
    else:
        # boost, evolution, inverse boost collapse to a closed form: the
        # antisymmetry of alpha1 and symmetry of beta1 in the boost blocks
        # turn the chain into phase differences
        alpha1 = sign * boost.alpha1 * (z[:, None] - z[None, :])
        beta1 = sign * boost.beta1 * (z[:, None] - np.conj(z)[None, :])
        alpha2 = (
            2.0 * z * boost.alpha2_diag
            + np.einsum("mn,m->n", alpha_sq, z)
            - np.einsum("mn,m->n", beta_sq, np.conj(z))
        )
    out = PerturbativeTransform(z, alpha1, beta1, alpha2, 1.0)
    _cache_put(_SEGMENT_CACHE, _SEGMENT_LOCK, key, out, _SEGMENT_CACHE_SIZE)
    return out


def _apply_phase(phases: np.ndarray, t: PerturbativeTransform) -> PerturbativeTransform:
    """Left-compose a pure phase rotation; same as compose() with a diagonal
    second factor but skips the arithmetic on its zero blocks."""
    alpha2 = None if t.alpha2_diag is None else phases * t.alpha2_diag
    return PerturbativeTransform(
        phases * t.order0,
        phases[:, None] * t.alpha1,
        phases[:, None] * t.beta1,
        alpha2,
        t.h_value,
    )


def effective_transform(s: Scenario) -> PerturbativeTransform:
    """End-to-end transform of a scenario, per unit h.

    Accelerated segments contribute boost, accelerated-frame phases, inverse
    boost (the inverse omitted only for the kickstart tail); inertial
    segments contribute inertial phases.  Segments compose in trajectory
    order.  An empty scenario gives the identity.
    """
    cfg = s.cfg
    total = None
    last = len(s.segments) - 1
    for i, seg in enumerate(s.segments):
        if isinstance(seg, Inertial):
            phases = np.exp(1j * _inertial_frequencies(cfg) * seg.duration)
            if total is None:
                total = phase_rotation(seg.duration, _inertial_frequencies(cfg), cfg.n_max)
            else:
                total = _apply_phase(phases, total)
            continue
        t = _accelerated_segment(
            cfg, seg.sign, seg.duration, open_ended=(s.kickstart and i == last)
        )
        total = t if total is None else compose(t, total)
    if total is None:
        return identity_transform(cfg.n_max)
    return total


def negativity_general(
    t: PerturbativeTransform, k: int, h: float, M: float = 0.0
) -> NegativityResult:
    """Second-order negativity for an excitation in mode k.

    Sums |alpha1[n, k]|**2 / 2 + |beta1[n, k]|**2 over n != k down column k
    of the transform; k must stay at or below n_max / 2 so the truncated sum
    retains headroom.  M only feeds the validity flags.
    """
    n_max = t.n_max
    if not 1 <= k <= n_max // 2:
        raise ValueError(
            f"k must satisfy 1 <= k <= n_max/2 = {n_max // 2}, got {k}"
        )
    acol = np.abs(t.alpha1[:, k - 1]) ** 2
    bcol = np.abs(t.beta1[:, k - 1]) ** 2
    w = 0.5 * acol + bcol
    deficit = float(w.sum() - w[k - 1])
    # Entries fall off like m**-5, so the neglected sum is roughly the local
    # mean times n_max/4; averaging a block of rows irons out interference
    # phases and parity blanks, and the factor 3 absorbs their drift.
    block = w[-min(20, n_max):]
    tail = float(3.0 * np.mean(block) * n_max / 4.0)
    validity = ValidityReport.from_parameters(k, h, M)
    return NegativityResult.from_deficit(deficit, h, k, validity, tail)


def scenario_negativity(s: Scenario) -> NegativityResult:
    """Convenience wrapper: effective transform plus column sum in one call."""
    return negativity_general(effective_transform(s), s.cfg.k, s.cfg.h, s.cfg.M)


def log_negativity(result: NegativityResult) -> float:
    """ln(1 + negativity), an upper bound on distillable entanglement."""
    if result.negativity < 0:
        raise ValueError(
            "negativity fell below zero, the parameters left the perturbative range"
        )
    return math.log1p(result.negativity)


def one_way_scenario(tau_bar: float, cfg: CavityConfig) -> Scenario:
    """Single accelerated stretch of proper duration tau_bar."""
    return Scenario((Accelerated(1, tau_bar),), cfg)


def alpha_centauri_scenario(
    tau_bar: float, tau_prime: float, cfg: CavityConfig
) -> Scenario:
    """Accelerate out, coast for tau_prime, decelerate to rest."""
    return Scenario(
        (Accelerated(1, tau_bar), Inertial(tau_prime), Accelerated(-1, tau_bar)),
        cfg,
    )


def round_trip_scenario(
    tau_bar: float, tau_prime: float, tau_dprime: float, cfg: CavityConfig
) -> Scenario:
    """Out, coast, brake, rest for tau_dprime, and the mirror image home."""
    return Scenario(
        (
            Accelerated(1, tau_bar),
            Inertial(tau_prime),
            Accelerated(-1, tau_bar),
            Inertial(tau_dprime),
            Accelerated(-1, tau_bar),
            Inertial(tau_prime),
            Accelerated(1, tau_bar),
        ),
        cfg,
    )


def kickstart_scenario(tau_bar: float, cfg: CavityConfig) -> Scenario:
    """Accelerated stretch that never turns the engines off."""
    return Scenario((Accelerated(1, tau_bar),), cfg, kickstart=True)
