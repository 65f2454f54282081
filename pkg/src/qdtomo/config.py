"""Experiment configuration: defaults, key=value file format, config digest.

The on-disk format is a flat, commented, line-based ``key = value`` file.
Unknown keys are rejected with the offending line number; missing keys fall
back to defaults. A config round-trips parse -> serialize -> parse to
identical values.

The 32-byte config digest covers the *physics and instrument* parameters
only: ``seed``, ``pulse1_pol`` and ``pulse2_pol`` identify a particular run,
not the physical system, and are excluded so that the H- and D-excitation
runs of one experiment share a digest (the tomography stage requires both
runs to come from an identical physical configuration).
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, fields, replace

from .spin_core import FieldConfig, Polarization, SpinSpecies


class ConfigError(ValueError):
    """Invalid configuration content; carries the offending key/line."""

    def __init__(self, message, key=None, line=None):
        self.key = key
        self.line = line
        where = ""
        if key is not None:
            where += f" (key {key!r}"
            where += f", line {line})" if line is not None else ")"
        elif line is not None:
            where += f" (line {line})"
        super().__init__(message + where)


@dataclass(frozen=True)
class ExperimentConfig:
    """All physical, instrument, and run parameters of the experiment."""

    # physics
    g_hole: float = 0.254
    g_electron: float = 0.10
    t2_star_hole_ps: float = 7000.0
    t2_star_electron_ps: float = 700.0
    b_field_tesla: float = 1.2
    hole_axis: tuple[float, float, float] = (0.0, 1.0, 0.0)
    electron_axis: tuple[float, float, float] = (0.0, 1.0, 0.0)
    precession_sign: int = +1
    radiative_lifetime_ps: float = 800.0
    # pulse schedule
    rep_period_ps: float = 12500.0
    pulse_separation_ps: float = 2500.0
    pulse1_pol: str | float = "H"
    pulse2_pol: str | float = "H"
    excitation_prob: float = 0.5
    d_phase_offset_rad: float = 0.0
    # instrument
    detector_jitter_sigma_ps: float = 17.0
    detection_efficiency: float = 1.0
    dark_count_rate_per_ps: float = 0.0
    # run identity
    seed: int = 20260810

    # keys excluded from the physics digest (run identity, not physics)
    _RUN_KEYS = ("seed", "pulse1_pol", "pulse2_pol")

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not self.g_hole > 0 or not self.g_electron > 0:
            raise ConfigError("g-factors must be positive", key="g_hole/g_electron")
        if not self.t2_star_hole_ps > 0 or not self.t2_star_electron_ps > 0:
            raise ConfigError("T2* values must be positive (inf allowed)", key="t2_star")
        if self.b_field_tesla < 0:
            raise ConfigError("b_field_tesla must be >= 0", key="b_field_tesla")
        if not self.radiative_lifetime_ps > 0:
            raise ConfigError("radiative_lifetime_ps must be positive", key="radiative_lifetime_ps")
        if not (0 < self.pulse_separation_ps < self.rep_period_ps):
            raise ConfigError("need 0 < pulse_separation_ps < rep_period_ps", key="pulse_separation_ps")
        if not (0 < self.excitation_prob <= 1):
            raise ConfigError("excitation_prob must be in (0, 1]", key="excitation_prob")
        if not (0 <= self.detection_efficiency <= 1):
            raise ConfigError("detection_efficiency must be in [0, 1]", key="detection_efficiency")
        if self.detector_jitter_sigma_ps < 0:
            raise ConfigError("detector_jitter_sigma_ps must be >= 0", key="detector_jitter_sigma_ps")
        if self.dark_count_rate_per_ps < 0:
            raise ConfigError("dark_count_rate_per_ps must be >= 0", key="dark_count_rate_per_ps")
        if self.precession_sign not in (+1, -1):
            raise ConfigError("precession_sign must be +1 or -1", key="precession_sign")
        for key in ("hole_axis", "electron_axis"):
            ax = getattr(self, key)
            n = math.sqrt(sum(c * c for c in ax))
            if abs(n - 1.0) > 1e-6:
                raise ConfigError(f"{key} must be a unit vector", key=key)
        for key in ("pulse1_pol", "pulse2_pol"):
            Polarization.linear_angle(getattr(self, key))

    # --- derived views -----------------------------------------------------

    def hole_species(self) -> SpinSpecies:
        return SpinSpecies(self.g_hole, self.t2_star_hole_ps, "hole")

    def electron_species(self) -> SpinSpecies:
        return SpinSpecies(self.g_electron, self.t2_star_electron_ps, "electron")

    def hole_field(self) -> FieldConfig:
        return FieldConfig(self.b_field_tesla, _unit(self.hole_axis), self.precession_sign)

    def electron_field(self) -> FieldConfig:
        return FieldConfig(self.b_field_tesla, _unit(self.electron_axis), self.precession_sign)

    def pulse2_angle(self) -> float:
        """Effective z-rotation angle of pulse 2, including the D-phase offset.

        The offset models an imperfect D pulse (phase error away from pi/2
        between the circular components); it is not applied to H pulses.
        """
        theta = Polarization.linear_angle(self.pulse2_pol)
        rot = 2.0 * theta
        if abs(theta) > 1e-12:
            rot += self.d_phase_offset_rad
        return rot

    def with_pulse2(self, pol) -> "ExperimentConfig":
        return replace(self, pulse2_pol=pol)

    # --- serialization -----------------------------------------------------

    def serialize(self) -> str:
        lines = ["# qdtomo experiment configuration"]
        for f in fields(self):
            lines.append(f"{f.name} = {_format_value(getattr(self, f.name))}")
        return "\n".join(lines) + "\n"

    def digest(self) -> bytes:
        """32-byte SHA-256 over the canonical physics/instrument parameters."""
        parts = []
        for f in sorted(fields(self), key=lambda f: f.name):
            if f.name in self._RUN_KEYS:
                continue
            parts.append(f"{f.name}={_format_value(getattr(self, f.name))}")
        return hashlib.sha256(";".join(parts).encode("ascii")).digest()


def _unit(ax):
    n = math.sqrt(sum(c * c for c in ax))
    return tuple(c / n for c in ax)


def _format_value(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, tuple):
        return ",".join(repr(float(c)) for c in v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isinf(v):
            return "inf"
        return repr(v)
    raise TypeError(f"unsupported config value type: {type(v)}")


_FLOAT_KEYS = {
    "g_hole", "g_electron", "t2_star_hole_ps", "t2_star_electron_ps",
    "b_field_tesla", "radiative_lifetime_ps", "rep_period_ps",
    "pulse_separation_ps", "excitation_prob", "d_phase_offset_rad",
    "detector_jitter_sigma_ps", "detection_efficiency", "dark_count_rate_per_ps",
}
_INT_KEYS = {"precession_sign", "seed"}
_AXIS_KEYS = {"hole_axis", "electron_axis"}
_POL_KEYS = {"pulse1_pol", "pulse2_pol"}
_ALL_KEYS = _FLOAT_KEYS | _INT_KEYS | _AXIS_KEYS | _POL_KEYS


def parse_config(text: str) -> ExperimentConfig:
    """Parse a key=value config file body into an :class:`ExperimentConfig`."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.split("#", 1)[0].strip()
        if key not in _ALL_KEYS:
            raise ConfigError("unknown key", key=key, line=lineno)
        if key in values:
            raise ConfigError("duplicate key", key=key, line=lineno)
        try:
            values[key] = _parse_value(key, val)
        except ConfigError:
            raise
        except Exception as exc:
            raise ConfigError(f"invalid value {val!r}: {exc}", key=key, line=lineno) from exc
    try:
        return ExperimentConfig(**values)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _parse_value(key, val):
    if key in _FLOAT_KEYS:
        return float(val)
    if key in _INT_KEYS:
        return int(val)
    if key in _AXIS_KEYS:
        parts = [p for p in val.split(",") if p.strip()]
        if len(parts) != 3:
            raise ValueError("axis needs exactly 3 comma-separated components")
        return tuple(float(p) for p in parts)
    if key in _POL_KEYS:
        if val in ("H", "D"):
            return val
        return float(val)  # linear angle in radians
    raise KeyError(key)


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def save_config(config: ExperimentConfig, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(config.serialize())
