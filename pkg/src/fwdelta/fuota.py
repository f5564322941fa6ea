"""Analytical cost model for LoRaWAN firmware update sessions.

Models a Class C download session as one fragment per downlink interval.
Each interval splits into continuous listening at the Class C sleep current
and one fragment reception window at its own measured current, so for F
fragments:

    duration = F * interval
    energy   = [I_c * (duration - F * t_rx) + I_rx * F * t_rx] / 3.6e6  mAh

with currents in microamps and times in seconds. This is a model of the
transmission phase only; on-device reconstruction cost is exposed as a
separate additive constant roughly three orders of magnitude smaller.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ProfileError

_UAS_PER_MAH = 3_600_000.0  # microamp-seconds per milliamp-hour

# Scenario thresholds on the patch/image size ratio.
NO_UPDATE_RATIO = 0.005
MAJOR_UPDATE_RATIO = 0.20


class ScenarioClass(enum.Enum):
    """Update scenario by patch-to-image size ratio."""

    NU = "NU"  # no update: ratio below 0.5%
    MN = "MN"  # minor update: the middle band, boundaries included
    MJ = "MJ"  # major update: ratio above 20%


@dataclass(frozen=True)
class LinkProfile:
    """Link and power parameters of one deployment.

    Defaults describe an 868 MHz SF9 node under fair-use duty cycling
    (530 downlinks/hour), powered at the nominal battery voltage.
    """

    payload_bytes_per_fragment: int = 112
    downlink_interval_s: float = 7.0
    class_c_current_uA: float = 6459.8
    class_a_current_uA: float = 1.75
    fragment_rx_current_uA: float = 6060.58
    fragment_rx_time_ms: float = 18.8
    redundancy_fraction: float = 0.0
    supply_voltage_v: float = 3.6
    spreading_factor: int = 9
    reconstruction_energy_uAh: float = 16.6

    def __post_init__(self) -> None:
        if self.payload_bytes_per_fragment < 1:
            raise ProfileError("fragment payload must be at least 1 byte")
        for name in (
            "downlink_interval_s",
            "class_c_current_uA",
            "class_a_current_uA",
            "fragment_rx_current_uA",
            "fragment_rx_time_ms",
            "supply_voltage_v",
        ):
            if getattr(self, name) <= 0:
                raise ProfileError(f"{name} must be positive")
        if self.redundancy_fraction < 0:
            raise ProfileError("redundancy_fraction must be non-negative")
        if self.fragment_rx_time_ms / 1000.0 > self.downlink_interval_s:
            raise ProfileError(
                "fragment_rx_time_ms cannot exceed the downlink interval"
            )


DEFAULT_PROFILE = LinkProfile()


@dataclass(frozen=True)
class UpdateEstimate:
    fragments: int
    duration_s: float
    energy_mAh: float


@dataclass(frozen=True)
class UpdateSavings:
    """Full-image versus incremental session costs for one update."""

    full: UpdateEstimate
    incremental: UpdateEstimate
    time_ratio: float  # full duration / incremental duration
    energy_saved_mAh: float
    reconstruction_overhead_mAh: float  # on-device cost, not in the estimates


def fragment_count(image_bytes: int, profile: LinkProfile = DEFAULT_PROFILE) -> int:
    """Downlink fragments needed for `image_bytes`, redundancy included."""
    if image_bytes < 0:
        raise ValueError("image size must be non-negative")
    if image_bytes == 0:
        return 0
    payload = profile.payload_bytes_per_fragment
    if profile.redundancy_fraction == 0.0:
        return -(-image_bytes // payload)
    return math.ceil(image_bytes * (1.0 + profile.redundancy_fraction) / payload)


def estimate_update(image_bytes: int, profile: LinkProfile = DEFAULT_PROFILE) -> UpdateEstimate:
    """Estimate fragments, session duration, and energy for one download."""
    frags = fragment_count(image_bytes, profile)
    duration = frags * profile.downlink_interval_s
    rx_s = profile.fragment_rx_time_ms / 1000.0
    listen_s = duration - frags * rx_s
    energy = (
        profile.class_c_current_uA * listen_s
        + profile.fragment_rx_current_uA * frags * rx_s
    ) / _UAS_PER_MAH
    return UpdateEstimate(frags, duration, energy)


def compare_strategies(
    full_image_bytes: int,
    patch_bytes: int,
    profile: LinkProfile = DEFAULT_PROFILE,
) -> UpdateSavings:
    """Compare a full-image download against downloading only the patch."""
    full = estimate_update(full_image_bytes, profile)
    inc = estimate_update(patch_bytes, profile)
    if inc.duration_s > 0:
        ratio = full.duration_s / inc.duration_s
    else:
        ratio = math.inf if full.duration_s > 0 else 1.0
    return UpdateSavings(
        full=full,
        incremental=inc,
        time_ratio=ratio,
        energy_saved_mAh=full.energy_mAh - inc.energy_mAh,
        reconstruction_overhead_mAh=profile.reconstruction_energy_uAh / 1000.0,
    )


def classify_scenario(patch_bytes: int, image_bytes: int) -> ScenarioClass:
    """Classify the update by patch/image ratio; boundary values are MN."""
    if image_bytes <= 0:
        raise ValueError("image size must be positive to classify")
    if patch_bytes < 0:
        raise ValueError("patch size must be non-negative")
    ratio = patch_bytes / image_bytes
    if ratio < NO_UPDATE_RATIO:
        return ScenarioClass.NU
    if ratio > MAJOR_UPDATE_RATIO:
        return ScenarioClass.MJ
    return ScenarioClass.MN


_INT_FIELDS = {"payload_bytes_per_fragment", "spreading_factor"}
_PROFILE_FIELDS = {f.name for f in fields(LinkProfile)}


def load_profile(path: str | Path) -> LinkProfile:
    """Load a profile from a `key = value` text file.

    Unset keys keep their defaults; '#' starts a comment. Unknown keys and
    unparsable values are errors.
    """
    values: dict[str, float | int] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, text = line.partition("=")
        key = key.strip()
        text = text.strip()
        if not sep or not key or not text:
            raise ProfileError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        if key not in _PROFILE_FIELDS:
            raise ProfileError(f"{path}:{lineno}: unknown profile key {key!r}")
        try:
            values[key] = int(text) if key in _INT_FIELDS else float(text)
        except ValueError:
            raise ProfileError(f"{path}:{lineno}: bad value for {key}: {text!r}") from None
    return LinkProfile(**values)
