"""Unit system and conversions between experimental and internal quantities.

Internally everything runs in natural units with hbar = c = 1: energies (and
frequencies) in eV, lengths in nm, charges in units of the elementary charge
and masses in proton masses.  Oscillator strengths f = q^2/m are therefore
dimensionless multiples of e^2/m_p, and the combination f/(4 pi eps0), which
is what actually enters couplings and polarizabilities, carries units of
nm^3 eV^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import PolaritonError

__all__ = [
    "UnitSystem",
    "UNITS",
    "OscillatorStrength",
    "dipole_moment_to_oscillator_strength",
    "oscillator_strength_to_dipole_moment",
    "coupling_from_mode_volume",
    "coupling_dipole_dipole",
    "plasmon_oscillator_strength",
    "angular_factor",
]


@dataclass(frozen=True)
class UnitSystem:
    """Physical constants of the eV/nm/e/m_p natural-unit system (CODATA)."""

    hbar_c: float = 197.3269804  # eV nm
    coulomb_const: float = 1.43996448  # e^2/(4 pi eps0), eV nm
    proton_mass_energy: float = 9.38272088e8  # m_p c^2, eV
    debye_in_e_nm: float = 0.020819434  # e nm per Debye
    light_speed: float = 1.0

    def __post_init__(self):
        for name in ("hbar_c", "coulomb_const", "proton_mass_energy", "debye_in_e_nm", "light_speed"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise PolaritonError(f"unit-system constant {name} must be finite and positive, got {v}")


UNITS = UnitSystem()


@dataclass(frozen=True)
class OscillatorStrength:
    """Oscillator strength f = q^2/m of a dipolar excitation, in e^2/m_p units."""

    value: float

    def __post_init__(self):
        if not (math.isfinite(self.value) and self.value >= 0.0):
            raise PolaritonError(f"oscillator strength must be finite and >= 0, got {self.value}")

    def reduced(self, units: UnitSystem = UNITS) -> float:
        """f/(4 pi eps0) in nm^3 eV^2 -- the combination entering couplings."""
        return self.value * units.coulomb_const * units.hbar_c**2 / units.proton_mass_energy

    def __float__(self) -> float:
        return self.value


def _require_positive(name: str, value: float) -> float:
    if not (math.isfinite(value) and value > 0):
        raise PolaritonError(f"{name} must be finite and positive, got {value}")
    return value


def _require_nonnegative(name: str, value: float) -> float:
    if not (math.isfinite(value) and value >= 0):
        raise PolaritonError(f"{name} must be finite and >= 0, got {value}")
    return value


def dipole_moment_to_oscillator_strength(
    mu: float, omega: float, units: UnitSystem = UNITS
) -> OscillatorStrength:
    """Oscillator strength of a transition with dipole moment ``mu``.

    Inverts mu = sqrt(f / (2 omega)) (natural units), i.e. f = 2 omega mu^2.

    Parameters
    ----------
    mu : float
        Transition dipole moment in Debye, >= 0.
    omega : float
        Transition frequency in eV, > 0.
    """
    _require_nonnegative("dipole moment", mu)
    _require_positive("omega", omega)
    mu_e_nm = mu * units.debye_in_e_nm
    f = 2.0 * units.proton_mass_energy * omega * (mu_e_nm / units.hbar_c) ** 2
    return OscillatorStrength(f)


def oscillator_strength_to_dipole_moment(
    f: OscillatorStrength, omega: float, units: UnitSystem = UNITS
) -> float:
    """Transition dipole moment in Debye for oscillator strength ``f`` at ``omega``."""
    _require_positive("omega", omega)
    mu_e_nm = math.sqrt(f.value / (2.0 * units.proton_mass_energy * omega)) * units.hbar_c
    return mu_e_nm / units.debye_in_e_nm


def coupling_from_mode_volume(
    f_mat: OscillatorStrength,
    V_eff: float,
    xi: float,
    cos_theta: float,
    units: UnitSystem = UNITS,
) -> float:
    """Light-matter coupling strength (eV) of a dipole in a cavity mode.

    g = (1/2) sqrt(f_mat / (eps0 V_eff)) * Xi * cos(theta), with Xi the
    normalized mode amplitude at the dipole position and theta the angle
    between the dipole and the mode polarization.
    """
    _require_positive("V_eff", V_eff)
    if not (math.isfinite(xi) and -1.0 <= xi <= 1.0):
        raise PolaritonError(f"mode amplitude xi must lie in [-1, 1], got {xi}")
    if not (math.isfinite(cos_theta) and -1.0 <= cos_theta <= 1.0):
        raise PolaritonError(f"cos_theta must lie in [-1, 1], got {cos_theta}")
    f_red = f_mat.reduced(units)  # nm^3 eV^2
    return 0.5 * math.sqrt(4.0 * math.pi * f_red / V_eff) * xi * cos_theta


def _unit_vector(name: str, n) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    if n.shape != (3,) or not np.all(np.isfinite(n)):
        raise PolaritonError(f"{name} must be a finite 3-vector")
    if abs(np.linalg.norm(n) - 1.0) > 1e-12:
        raise PolaritonError(f"{name} must be normalized to 1 within 1e-12, |{name}| = {np.linalg.norm(n)!r}")
    return n


def angular_factor(n_a: np.ndarray, n_b: np.ndarray, axis: np.ndarray) -> float:
    """Dipole-dipole angular factor n_a.n_b - 3 (n_a.axis)(n_b.axis); in [-2, 2]."""
    return float(n_a @ n_b - 3.0 * (n_a @ axis) * (n_b @ axis))


def coupling_dipole_dipole(
    f_cav: OscillatorStrength,
    f_mat: OscillatorStrength,
    r_cav,
    r_mat,
    n_dcav,
    n_dmat,
    omega_cav: float,
    omega_mat: float,
    units: UnitSystem = UNITS,
) -> float:
    """Signed quasistatic dipole-dipole coupling strength (eV).

    Two dipolar oscillators at ``r_cav`` and ``r_mat`` with orientations
    ``n_dcav``/``n_dmat`` couple through their near fields with

        g = (1/2) sqrt(f_cav f_mat / (4 pi eps0)^2) * A / (|r|^3 sqrt(w_cav w_mat))

    where A = n_dcav.n_dmat - 3 (n_dcav.r_hat)(n_dmat.r_hat) is the angular
    factor (|A| <= 2, A = -2 for the collinear head-to-tail arrangement).
    The sign of g follows A; symmetric under swapping the two oscillators.
    """
    _require_positive("omega_cav", omega_cav)
    _require_positive("omega_mat", omega_mat)
    r_cav = np.asarray(r_cav, dtype=float)
    r_mat = np.asarray(r_mat, dtype=float)
    if r_cav.shape != (3,) or r_mat.shape != (3,):
        raise PolaritonError("positions must be 3-vectors")
    n_dcav = _unit_vector("n_dcav", n_dcav)
    n_dmat = _unit_vector("n_dmat", n_dmat)
    sep = r_mat - r_cav
    dist = float(np.linalg.norm(sep))
    if dist <= 0.0:
        raise PolaritonError("dipole positions coincide; separation must be > 0")
    axis = sep / dist
    ang = angular_factor(n_dcav, n_dmat, axis)
    f_red = math.sqrt(f_cav.reduced(units) * f_mat.reduced(units))
    return 0.5 * f_red * ang / (dist**3 * math.sqrt(omega_cav * omega_mat))


def plasmon_oscillator_strength(
    R: float, omega_cav: float, units: UnitSystem = UNITS
) -> OscillatorStrength:
    """Oscillator strength of the dipolar mode of a small metal sphere.

    f_cav = 4 pi eps0 R^3 omega_cav^2, expressed in e^2/m_p units.
    """
    _require_positive("R", R)
    _require_positive("omega_cav", omega_cav)
    f = R**3 * omega_cav**2 * units.proton_mass_energy / (units.coulomb_const * units.hbar_c**2)
    return OscillatorStrength(f)
