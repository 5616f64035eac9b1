"""Steady-state response of the coupled models to a monochromatic drive.

Losses enter through complex bare frequencies: every occurrence of a bare
frequency in the frequency-domain system — the diagonal ``omega_a^2`` terms
and the ``sqrt(omega_cav omega_mat)`` normalization of the amplitude
coupling — is evaluated at ``omega_a - i rate_a / 2``.  A lone lossy
oscillator then responds with ``alpha(omega) = f / ((omega_0 - i kappa/2)^2
- omega^2)`` (reduced oscillator strengths in nm^3 eV^2, alpha in nm^3),
and the coupled-dipole solver at the bottom of this module carries the same
substitution so the two descriptions of a dipole pair remain exactly
equivalent, losses included.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import PoleError, PolaritonError
from .models import CoupledModel, ModelVariant, frequency_domain_matrix
from .units import UNITS, UnitSystem, angular_factor, _unit_vector

__all__ = [
    "DriveSpec",
    "ResponseAmplitudes",
    "driven_spc",
    "driven_mc",
    "scattering_cross_section",
    "polarizability_oracle",
]


@dataclass(frozen=True)
class DriveSpec:
    """Monochromatic drive of amplitude ``E_inc`` at frequency ``omega``.

    ``f_cav`` and ``f_mat`` are the reduced oscillator strengths of the two
    constituents.  The drive forces ``F_alpha = sqrt(f_alpha) |E_inc|`` are
    derived quantities (real, in phase), never stored.
    """

    E_inc: float
    omega: float
    f_cav: float
    f_mat: float

    def __post_init__(self):
        if not math.isfinite(self.E_inc):
            raise PolaritonError(f"E_inc must be finite, got {self.E_inc}")
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise PolaritonError(f"drive frequency must be positive, got {self.omega}")
        if not (math.isfinite(self.f_cav) and self.f_cav >= 0):
            raise PolaritonError(f"f_cav must be >= 0, got {self.f_cav}")
        if not (math.isfinite(self.f_mat) and self.f_mat >= 0):
            raise PolaritonError(f"f_mat must be >= 0, got {self.f_mat}")

    @property
    def F_cav(self) -> float:
        return math.sqrt(self.f_cav) * abs(self.E_inc)

    @property
    def F_mat(self) -> float:
        return math.sqrt(self.f_mat) * abs(self.E_inc)


@dataclass(frozen=True)
class ResponseAmplitudes:
    x_cav: complex
    x_mat: complex
    d_cav: complex
    d_mat: complex


def _solve_response(matrix: np.ndarray, drive: DriveSpec) -> ResponseAmplitudes:
    det = matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0]
    scale = math.sqrt(
        (abs(matrix[0, 0]) ** 2 + abs(matrix[0, 1]) ** 2)
        * (abs(matrix[1, 0]) ** 2 + abs(matrix[1, 1]) ** 2)
    )
    if abs(det) <= 1e-12 * max(scale, np.finfo(float).tiny):
        raise PoleError(
            "driven response diverges: drive frequency sits on an undamped hybrid mode"
        )
    rhs = np.array([drive.F_cav, drive.F_mat], dtype=complex)
    x = np.linalg.solve(matrix, rhs)
    return ResponseAmplitudes(
        x_cav=complex(x[0]),
        x_mat=complex(x[1]),
        d_cav=math.sqrt(drive.f_cav) * complex(x[0]),
        d_mat=math.sqrt(drive.f_mat) * complex(x[1]),
    )


def driven_spc(model: CoupledModel, drive: DriveSpec) -> ResponseAmplitudes:
    """Amplitude-coupled steady state under the drive."""
    if model.variant is not ModelVariant.SPC:
        raise PolaritonError(f"driven_spc needs an SpC model, got {model.variant.value}")
    return _solve_response(frequency_domain_matrix(model, drive.omega), drive)


def driven_mc(model: CoupledModel, drive: DriveSpec) -> ResponseAmplitudes:
    """Velocity-coupled steady state under the drive."""
    if model.variant is not ModelVariant.MOC:
        raise PolaritonError(f"driven_mc needs an MoC model, got {model.variant.value}")
    return _solve_response(frequency_domain_matrix(model, drive.omega), drive)


def scattering_cross_section(
    resp: ResponseAmplitudes,
    n_dcav,
    n_dmat,
    E_inc: float,
    omega: float,
    units: UnitSystem = UNITS,
) -> float:
    """Dipole-radiation scattering cross section in nm^2.

    The two induced dipoles add vectorially along their orientation axes; the
    cross section is ``(8 pi / 3) (omega / hbar c)^4 |d_tot / E_inc|^2``.
    """
    if not E_inc > 0:
        raise PolaritonError(f"E_inc must be positive, got {E_inc}")
    if omega <= 0:
        raise PolaritonError(f"omega must be positive, got {omega}")
    nc = _unit_vector("n_dcav", n_dcav)
    nm_ = _unit_vector("n_dmat", n_dmat)
    total = resp.d_cav * nc + resp.d_mat * nm_
    k = omega / units.hbar_c
    return (8.0 * math.pi / 3.0) * k**4 * float(np.sum(np.abs(total / E_inc) ** 2))


def polarizability_oracle(
    f_cav: float,
    f_mat: float,
    omega_cav: float,
    omega_mat: float,
    kappa: float,
    gamma: float,
    r_cav,
    r_mat,
    n_dcav,
    n_dmat,
    E_inc: float,
    omega: float,
) -> ResponseAmplitudes:
    """Coupled-dipole steady state built only from Lorentzian polarizabilities.

    Each constituent is a point polarizability ``f / ((w0 - i rate/2)^2 -
    w^2)`` at its own position; the two interact through the quasistatic
    dipole-dipole kernel and are both driven by the incident field along
    their axes.  The kernel inherits the module's complex-frequency loss
    convention through the ``sqrt(omega_cav omega_mat)`` normalization it
    carries in the coupled-oscillator picture (for lossless constituents it
    reduces to the bare geometric kernel).  This shares no code with the
    model solvers and serves as an independent check on ``driven_spc``.
    """
    if f_cav <= 0 or f_mat <= 0:
        raise PolaritonError("oscillator strengths must be positive")
    if omega <= 0 or omega_cav <= 0 or omega_mat <= 0:
        raise PolaritonError("frequencies must be positive")
    if kappa < 0 or gamma < 0:
        raise PolaritonError("decay rates must be >= 0")
    rc = np.asarray(r_cav, dtype=float)
    rm = np.asarray(r_mat, dtype=float)
    sep = rm - rc
    dist = float(np.linalg.norm(sep))
    if dist == 0:
        raise PolaritonError("constituent positions must differ")
    axis = sep / dist
    nc = _unit_vector("n_dcav", n_dcav)
    nm_ = _unit_vector("n_dmat", n_dmat)
    wc = omega_cav - 0.5j * kappa
    wm = omega_mat - 0.5j * gamma
    # field of dipole 2 projected on the axis of dipole 1: -(angular factor)/r^3,
    # dressed by the loss convention of the sqrt(w_cav w_mat) coupling factor
    dressing = cmath.sqrt(wc * wm) / math.sqrt(omega_cav * omega_mat)
    coupling_kernel = -angular_factor(nc, nm_, axis) / dist**3 * dressing
    inv_alpha_c = (wc * wc - omega**2) / f_cav
    inv_alpha_m = (wm * wm - omega**2) / f_mat
    matrix = np.array(
        [[inv_alpha_c, -coupling_kernel], [-coupling_kernel, inv_alpha_m]], dtype=complex
    )
    det = matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0]
    scale = abs(matrix[0, 0] * matrix[1, 1]) + abs(matrix[0, 1] * matrix[1, 0])
    if abs(det) <= 1e-12 * max(scale, np.finfo(float).tiny):
        raise PoleError("coupled-dipole system is singular at this frequency")
    d = np.linalg.solve(matrix, np.array([abs(E_inc), abs(E_inc)], dtype=complex))
    return ResponseAmplitudes(
        x_cav=complex(d[0]) / math.sqrt(f_cav),
        x_mat=complex(d[1]) / math.sqrt(f_mat),
        d_cav=complex(d[0]),
        d_mat=complex(d[1]),
    )
