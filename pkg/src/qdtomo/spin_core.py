"""Bloch-vector model of the hole/trion spin system in a transverse field.

Coordinate conventions (used everywhere in this package):

* ``z`` is the optical/growth axis. The circular detection eigenstates sit at
  the poles: a trion with ``S_z = +1`` emits an R photon, ``S_z = -1`` an L
  photon, and recombination projects the hole back onto the matching pole.
* The magnetic field is applied in-plane (Voigt geometry), by default along
  ``y``, so both spins precess in the ``x-z`` plane of their Bloch spheres.
* ``precession_sign = +1`` means a quarter turn about ``+y`` carries ``+z``
  onto ``+x`` (right-handed rotation about the axis).
* A linear excitation pulse at angle ``theta`` (H = 0, D = pi/4) rotates the
  ground-state Bloch vector by ``2*theta`` about ``z`` before it is lifted,
  unchanged otherwise, into the trion.

Inhomogeneous dephasing is a Gaussian envelope ``exp(-(t/T2*)**2)`` applied to
the Bloch components transverse to the precession axis; the axis-parallel
component does not decay (no spin T1 in the model).

All functions are pure and accept either a :class:`BlochVector` or any
array-like of shape ``(..., 3)``; vectorised input is evaluated row-wise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Bohr magneton and Planck constant in (micro-eV, tesla, picosecond) units.
MU_B_UEV_PER_T = 57.8838
PLANCK_H_UEV_PS = 4135.667696

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PhysicalConstants:
    """Fixed unit constants; never mutated."""

    mu_b: float = MU_B_UEV_PER_T
    planck_h: float = PLANCK_H_UEV_PS


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class BlochVector:
    """Spin polarization vector (dimensionless, |S| <= 1 for physical states)."""

    sx: float
    sy: float
    sz: float

    def as_array(self) -> np.ndarray:
        return np.array([self.sx, self.sy, self.sz], dtype=float)

    # lets plain numpy code consume BlochVector transparently
    def __array__(self, dtype=None, copy=None):
        arr = self.as_array()
        return arr.astype(dtype) if dtype is not None else arr

    @classmethod
    def from_array(cls, a) -> "BlochVector":
        a = np.asarray(a, dtype=float)
        if a.shape != (3,):
            raise ValueError(f"expected shape (3,), got {a.shape}")
        return cls(float(a[0]), float(a[1]), float(a[2]))

    def norm(self) -> float:
        return math.sqrt(self.sx**2 + self.sy**2 + self.sz**2)


@dataclass(frozen=True)
class SpinSpecies:
    """One precessing spin species: its g-factor and dephasing time.

    ``t2_star`` is in picoseconds; ``math.inf`` disables dephasing.
    """

    g_factor: float
    t2_star: float
    label: str = "hole"

    def __post_init__(self):
        if not self.g_factor > 0:
            raise ValueError(f"g_factor must be positive, got {self.g_factor}")
        if not self.t2_star > 0:
            raise ValueError(f"t2_star must be positive, got {self.t2_star}")
        if self.label not in ("hole", "electron"):
            raise ValueError(f"label must be 'hole' or 'electron', got {self.label!r}")


@dataclass(frozen=True)
class FieldConfig:
    """Magnetic-field configuration: magnitude, precession axis, and sign.

    The axis is a unit vector; the default ``(0, 1, 0)`` is the ideal Voigt
    geometry. Tilting the axis models effective-field anomalies (anisotropic
    g-tensor, quasi-static nuclear field) collapsed into one parameter.
    """

    b_magnitude: float
    precession_axis: tuple[float, float, float] = (0.0, 1.0, 0.0)
    precession_sign: int = +1

    def __post_init__(self):
        if self.b_magnitude < 0:
            raise ValueError(f"b_magnitude must be >= 0, got {self.b_magnitude}")
        n = np.asarray(self.precession_axis, dtype=float)
        if abs(np.linalg.norm(n) - 1.0) > 1e-9:
            raise ValueError(f"precession_axis must be a unit vector, got {self.precession_axis}")
        if self.precession_sign not in (+1, -1):
            raise ValueError(f"precession_sign must be +1 or -1, got {self.precession_sign}")

    def axis_array(self) -> np.ndarray:
        n = np.asarray(self.precession_axis, dtype=float)
        return n / np.linalg.norm(n)


class Polarization:
    """Polarization labels: circular detection bases R/L, linear pulse bases H/D."""

    R = "R"
    L = "L"
    H = "H"
    D = "D"

    CIRCULAR = ("R", "L")
    LINEAR_ANGLES = {"H": 0.0, "D": math.pi / 4.0}

    @staticmethod
    def linear_angle(pol) -> float:
        """Linear polarization angle in radians; passes floats through."""
        if isinstance(pol, str):
            try:
                return Polarization.LINEAR_ANGLES[pol]
            except KeyError:
                raise ValueError(f"not a linear polarization: {pol!r}") from None
        return float(pol)


def larmor_period(g: float, b: float) -> float:
    """Larmor precession period h / (g * mu_B * B) in picoseconds."""
    if not (g > 0 and b > 0):
        raise ValueError(f"g and b must be positive, got g={g}, b={b}")
    return PLANCK_H_UEV_PS / (g * MU_B_UEV_PER_T * b)


def g_from_period(t_prec: float, b: float) -> float:
    """Exact inverse of :func:`larmor_period`."""
    if not (t_prec > 0 and b > 0):
        raise ValueError(f"t_prec and b must be positive, got t_prec={t_prec}, b={b}")
    return PLANCK_H_UEV_PS / (MU_B_UEV_PER_T * b * t_prec)


def angular_frequency(g: float, b: float, sign: int = +1) -> float:
    """Signed Larmor angular frequency in rad/ps; zero field gives zero."""
    return sign * TWO_PI * g * MU_B_UEV_PER_T * b / PLANCK_H_UEV_PS


def _wrap_in(s):
    """Return (array view of s, wrap-back flag)."""
    if isinstance(s, BlochVector):
        return s.as_array(), True
    return np.asarray(s, dtype=float), False


def precess(s, axis, angle):
    """Rodrigues rotation of ``s`` about a unit ``axis`` by ``angle`` radians.

    Norm-preserving to machine precision. ``s`` may be shape ``(..., 3)`` and
    ``angle`` any broadcast-compatible shape.
    """
    vec, wrap = _wrap_in(s)
    n = np.asarray(axis, dtype=float)
    if n.shape[-1] != 3:
        raise ValueError(f"axis must have 3 components, got shape {n.shape}")
    norms = np.linalg.norm(n, axis=-1)
    if np.any(np.abs(norms - 1.0) > 1e-9):
        raise ValueError("axis must be a unit vector")
    ang = np.asarray(angle, dtype=float)
    c = np.cos(ang)[..., None]
    si = np.sin(ang)[..., None]
    ndots = np.sum(n * vec, axis=-1)[..., None]
    out = vec * c + np.cross(n, vec) * si + n * ndots * (1.0 - c)
    if wrap and out.shape == (3,):
        return BlochVector.from_array(out)
    return out

def evolve(s, dt, species: SpinSpecies, fieldcfg: FieldConfig, *, coherence_start: float = 0.0):
    """Ensemble evolution for ``dt`` ps: Larmor rotation plus Gaussian dephasing.

    Rotates ``s`` about the field axis by ``sign * omega * dt`` and damps the
    transverse components so that the cumulative envelope after a total
    coherent interval ``t`` equals ``exp(-(t/T2*)**2)``. Because the Gaussian
    envelope is not multiplicative across sub-intervals, a split evolution
    must pass the elapsed coherent time of the same spin as
    ``coherence_start``; the default 0 starts a fresh coherence clock.

    Parameters
    ----------
    s : BlochVector or (..., 3) array
    dt : float
        Evolution interval in ps, >= 0.
    species, fieldcfg
        Spin species (g-factor, T2*) and field (axis, magnitude, sign).
    coherence_start : float, optional
        Coherent time already elapsed for this spin before the interval.
    """
    if np.any(np.asarray(dt) < 0):
        raise ValueError(f"dt must be >= 0, got {dt}")
    vec, wrap = _wrap_in(s)
    n = fieldcfg.axis_array()
    omega = angular_frequency(species.g_factor, fieldcfg.b_magnitude, fieldcfg.precession_sign)
    rotated = precess(vec, n, omega * np.asarray(dt, dtype=float))
    if math.isfinite(species.t2_star):
        t0 = coherence_start
        t1 = coherence_start + np.asarray(dt, dtype=float)
        env = np.exp(-(t1 * t1 - t0 * t0) / species.t2_star**2)
        par = np.sum(rotated * n, axis=-1)[..., None] * n
        rotated = par + np.asarray(env)[..., None] * (rotated - par)
    if wrap and rotated.shape == (3,):
        return BlochVector.from_array(rotated)
    return rotated


def map_excitation(s, pol):
    """Ground-to-trion mapping of a linear excitation pulse.

    A pulse at linear angle ``theta`` rotates the Bloch vector by ``2*theta``
    about ``z``: H (theta=0) is the identity, D (theta=pi/4) sends
    ``(x, y, z) -> (-y, x, z)``. ``pol`` is ``"H"``, ``"D"`` or an angle in
    radians.
    """
    theta = Polarization.linear_angle(pol)
    vec, wrap = _wrap_in(s)
    out = rotate_z(vec, 2.0 * theta)
    if wrap and out.shape == (3,):
        return BlochVector.from_array(out)
    return out


def rotate_z(s, angle):
    """Rotation about the z axis by ``angle`` radians (vectorised)."""
    vec, wrap = _wrap_in(s)
    c, si = np.cos(angle), np.sin(angle)
    out = np.empty_like(vec)
    out[..., 0] = vec[..., 0] * c - vec[..., 1] * si
    out[..., 1] = vec[..., 0] * si + vec[..., 1] * c
    out[..., 2] = vec[..., 2]
    if wrap and out.shape == (3,):
        return BlochVector.from_array(out)
    return out


def emission_probabilities(s_excited):
    """Circular emission probabilities of a trion with Bloch vector ``s``.

    Returns ``(p_R, p_L)`` with ``p_R = (1 + S_z)/2`` and ``p_L = 1 - p_R``
    (exact sum by construction). Raises if ``|S| > 1 + 1e-9``.
    """
    vec, _ = _wrap_in(s_excited)
    norm = np.linalg.norm(vec, axis=-1)
    if np.any(norm > 1.0 + 1e-9):
        raise ValueError(f"Bloch vector norm exceeds 1: max |S| = {np.max(norm)}")
    p_r = (1.0 + vec[..., 2]) / 2.0
    p_r = np.clip(p_r, 0.0, 1.0)
    p_l = 1.0 - p_r
    if vec.shape == (3,):
        return float(p_r), float(p_l)
    return p_r, p_l


def collapse_after_emission(pol: str) -> BlochVector:
    """Ground-state Bloch vector after a circularly polarized emission."""
    if pol == Polarization.R:
        return BlochVector(0.0, 0.0, 1.0)
    if pol == Polarization.L:
        return BlochVector(0.0, 0.0, -1.0)
    raise ValueError(f"collapse requires a circular polarization (R/L), got {pol!r}")
