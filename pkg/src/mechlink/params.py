"""Laboratory parameters and the derived quantities of the linearized dynamics.

A single :class:`PhysicalParams` describes *both* optomechanical devices
(symmetric network): identical cavities, mirrors and pumps.  Frequencies are
given as ordinary frequencies in Hz (the way they are quoted on a lab sheet);
everything downstream works with angular frequencies in rad/s.
"""

from __future__ import annotations

import math
import cmath
from dataclasses import dataclass, replace
from pathlib import Path

from .constants import HBAR, KB, C_LIGHT

__all__ = [
    "PhysicalParams",
    "DerivedParams",
    "InvalidParameterError",
    "derive",
    "thermal_occupancy",
    "load_config",
    "REFERENCE_PARAMS",
]


class InvalidParameterError(ValueError):
    """A physical parameter is missing, non-positive or otherwise out of range."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class PhysicalParams:
    """Laboratory-unit description of one symmetric two-cavity experiment.

    Attributes
    ----------
    mech_freq : float
        Mechanical resonance frequency, ordinary frequency [Hz].
    mech_damping : float
        Mechanical damping rate, ordinary frequency [Hz].
    cavity_decay : float
        Cavity energy decay rate, ordinary frequency [Hz].
    mass : float
        Effective mass of each movable mirror [kg].
    cavity_length : float
        Cavity length [m].
    laser_wavelength : float
        Pump laser wavelength [m].
    pump_power : float
        Pump power per cavity [W].
    detuning : float
        Effective cavity-laser detuning [rad/s]; treated as an independent,
        experimentally tunable input.
    bath_temperature : float
        Temperature of each mechanical bath [K].
    squeezing_r : float
        Squeezing modulus of the shared two-mode squeezed drive.
    squeezing_phase : float
        Squeezing phase [rad].
    """

    mech_freq: float
    mech_damping: float
    cavity_decay: float
    mass: float
    cavity_length: float
    laser_wavelength: float
    pump_power: float
    detuning: float
    bath_temperature: float = 0.0
    squeezing_r: float = 0.0
    squeezing_phase: float = 0.0

    def validate(self):
        """Raise :class:`InvalidParameterError` on the first bad field."""
        positive = (
            "mech_freq", "mech_damping", "cavity_decay", "mass",
            "cavity_length", "laser_wavelength", "pump_power",
        )
        for name in positive:
            value = getattr(self, name)
            if not (value > 0.0) or not math.isfinite(value):
                raise InvalidParameterError(name, f"must be strictly positive, got {value!r}")
        if not math.isfinite(self.detuning):
            raise InvalidParameterError("detuning", f"must be finite, got {self.detuning!r}")
        if self.bath_temperature < 0.0 or not math.isfinite(self.bath_temperature):
            raise InvalidParameterError(
                "bath_temperature", f"must be >= 0, got {self.bath_temperature!r}")
        if self.squeezing_r < 0.0 or not math.isfinite(self.squeezing_r):
            raise InvalidParameterError(
                "squeezing_r", f"must be >= 0, got {self.squeezing_r!r}")
        if not math.isfinite(self.squeezing_phase):
            raise InvalidParameterError(
                "squeezing_phase", f"must be finite, got {self.squeezing_phase!r}")


@dataclass(frozen=True)
class DerivedParams:
    """Angular/dimensionless quantities that parameterize the linearized dynamics.

    ``omega_m``, ``gamma_m``, ``kappa``, ``delta`` are angular frequencies in
    rad/s.  ``chi`` is the cavity-frequency pull per unit mirror displacement,
    ``drive_amp`` the classical pump rate, ``g`` the single-photon
    optomechanical coupling, ``c_s`` the complex intracavity amplitude and
    ``q_s`` the static mirror displacement.  ``nbar`` is the thermal phonon
    occupancy of each mechanical bath; ``big_n`` / ``big_m`` are the
    occupancy-like parameters of the two-mode squeezed drive.
    """

    omega_m: float
    gamma_m: float
    kappa: float
    delta: float
    chi: float
    drive_amp: float
    g: float
    c_s: complex
    q_s: float
    nbar: float
    big_n: float
    big_m: complex


def thermal_occupancy(omega, temperature):
    """Bose-Einstein occupancy at angular frequency ``omega`` and temperature T [K]."""
    if temperature <= 0.0:
        return 0.0
    x = HBAR * omega / (KB * temperature)
    return 1.0 / math.expm1(x)


def derive(p: PhysicalParams) -> DerivedParams:
    """Convert laboratory parameters into the derived dynamical quantities.

    Pure and deterministic: identical inputs give bit-identical outputs.
    """
    p.validate()
    omega_m = 2.0 * math.pi * p.mech_freq
    gamma_m = 2.0 * math.pi * p.mech_damping
    kappa = 2.0 * math.pi * p.cavity_decay
    delta = p.detuning

    omega_laser = 2.0 * math.pi * C_LIGHT / p.laser_wavelength
    chi = omega_laser / p.cavity_length
    drive_amp = math.sqrt(2.0 * kappa * p.pump_power / (HBAR * omega_laser))
    c_s = drive_amp / complex(kappa, delta)
    q_s = HBAR * chi * abs(c_s) ** 2 / (p.mass * omega_m**2)
    g = chi * math.sqrt(HBAR / (2.0 * p.mass * omega_m))

    nbar = thermal_occupancy(omega_m, p.bath_temperature)
    r = p.squeezing_r
    big_n = math.sinh(r) ** 2
    big_m = math.sinh(r) * math.cosh(r) * cmath.exp(1j * p.squeezing_phase)

    return DerivedParams(
        omega_m=omega_m, gamma_m=gamma_m, kappa=kappa, delta=delta,
        chi=chi, drive_amp=drive_amp, g=g, c_s=c_s, q_s=q_s,
        nbar=nbar, big_n=big_n, big_m=big_m,
    )


# Parameter set of the Groeblacher et al. strong-coupling experiment, used as
# the default working point throughout (detuning set on the mechanical
# sideband).
REFERENCE_PARAMS = PhysicalParams(
    mech_freq=947e3,
    mech_damping=140.0,
    cavity_decay=215e3,
    mass=145e-12,
    cavity_length=25e-3,
    laser_wavelength=1064e-9,
    pump_power=11e-3,
    detuning=2.0 * math.pi * 947e3,
    bath_temperature=2e-3,
    squeezing_r=1.0,
    squeezing_phase=0.0,
)


_CONFIG_FIELDS = {
    "mech_freq", "mech_damping", "cavity_decay", "mass", "cavity_length",
    "laser_wavelength", "pump_power", "detuning", "bath_temperature",
    "squeezing_r", "squeezing_phase",
}


def load_config(path) -> PhysicalParams:
    """Parse a ``key = value`` config file into :class:`PhysicalParams`.

    Keys are the lower_snake_case field names, values in SI units.
    ``detuning_over_omega_m`` may be given instead of ``detuning``; it is
    interpreted as a multiple of the angular mechanical frequency.  Lines
    starting with ``#`` and blank lines are ignored.
    """
    raw = {}
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidParameterError(f"line {lineno}", f"expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_FIELDS and key != "detuning_over_omega_m":
            raise InvalidParameterError(key, "unknown config key")
        if key in raw or (key == "detuning_over_omega_m" and "detuning" in raw) \
                or (key == "detuning" and "detuning_over_omega_m" in raw):
            raise InvalidParameterError(key, "duplicate or conflicting key")
        try:
            raw[key] = float(value)
        except ValueError:
            raise InvalidParameterError(key, f"not a number: {value!r}") from None

    ratio = raw.pop("detuning_over_omega_m", None)
    required = _CONFIG_FIELDS - {"detuning", "bath_temperature", "squeezing_r", "squeezing_phase"}
    missing = sorted(required - raw.keys())
    if missing:
        raise InvalidParameterError(missing[0], "missing from config")
    if ratio is not None:
        raw["detuning"] = ratio * 2.0 * math.pi * raw["mech_freq"]
    elif "detuning" not in raw:
        raise InvalidParameterError("detuning", "missing from config")

    params = PhysicalParams(**raw)
    params.validate()
    return params


def with_point(p: PhysicalParams, *, detuning=None, squeezing_r=None,
               bath_temperature=None) -> PhysicalParams:
    """Return a copy of ``p`` with the given sweep coordinates replaced."""
    kwargs = {}
    if detuning is not None:
        kwargs["detuning"] = detuning
    if squeezing_r is not None:
        kwargs["squeezing_r"] = squeezing_r
    if bath_temperature is not None:
        kwargs["bath_temperature"] = bath_temperature
    return replace(p, **kwargs)
