"""Two-oscillator models of hybrid light-matter modes.

Two coupling structures cover all model variants used here:

* amplitude coupling -- the coupling force is proportional to the partner's
  displacement (terms ``2 g sqrt(w_cav w_mat) x`` in the equations of motion);
* velocity coupling -- the coupling force is proportional to the partner's
  velocity (terms ``2 g x'`` with opposite signs in the two equations).

The dressed alternative variants reuse these two structures with transformed
bare frequencies and couplings, so that their spectra coincide exactly with
the model they were derived from.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import PoleError, PolaritonError

__all__ = [
    "ModelVariant",
    "OscillatorPair",
    "CoupledModel",
    "HybridModes",
    "MinSplitting",
    "eigenfrequencies",
    "eigenvector_ratio",
    "frequency_domain_matrix",
    "generic_eigenfrequencies",
    "min_splitting",
    "spc_lower_branch_exists",
    "alternative_model_equivalence",
    "linearized_eigenfrequencies",
]


class ModelVariant(enum.Enum):
    SPC = "SpC"
    MOC = "MoC"
    LINEARIZED = "Linearized"
    ALT_COULOMB_DRESSED_CAVITY = "AltCoulombDressedCavity"
    ALT_DIPOLE_DRESSED_MATTER = "AltDipoleDressedMatter"
    ALT_DIPOLE_DIPOLE_DRESSED_CAVITY = "AltDipoleDipoleDressedCavity"


# variants whose coupling term is proportional to the partner amplitude
_AMPLITUDE_FORM = frozenset(
    {ModelVariant.SPC, ModelVariant.ALT_COULOMB_DRESSED_CAVITY, ModelVariant.ALT_DIPOLE_DRESSED_MATTER}
)
# variants whose coupling term is proportional to the partner velocity
_VELOCITY_FORM = frozenset({ModelVariant.MOC, ModelVariant.ALT_DIPOLE_DIPOLE_DRESSED_CAVITY})


@dataclass(frozen=True)
class OscillatorPair:
    """Bare cavity and matter oscillators, with optional decay rates.

    Losses enter every eigenvalue computation through the complex bare
    frequencies ``omega - i rate / 2``.
    """

    omega_cav: float
    omega_mat: float
    kappa: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.omega_cav) and self.omega_cav > 0):
            raise PolaritonError(f"omega_cav must be positive, got {self.omega_cav}")
        if not (math.isfinite(self.omega_mat) and self.omega_mat > 0):
            raise PolaritonError(f"omega_mat must be positive, got {self.omega_mat}")
        if not (math.isfinite(self.kappa) and self.kappa >= 0):
            raise PolaritonError(f"kappa must be >= 0, got {self.kappa}")
        if not (math.isfinite(self.gamma) and self.gamma >= 0):
            raise PolaritonError(f"gamma must be >= 0, got {self.gamma}")

    @property
    def lossless(self) -> bool:
        return self.kappa == 0.0 and self.gamma == 0.0

    @property
    def complex_cav(self) -> complex:
        return self.omega_cav - 0.5j * self.kappa

    @property
    def complex_mat(self) -> complex:
        return self.omega_mat - 0.5j * self.gamma


@dataclass(frozen=True)
class CoupledModel:
    pair: OscillatorPair
    variant: ModelVariant
    g: float

    def __post_init__(self):
        if not math.isfinite(self.g):
            raise PolaritonError(f"coupling strength must be finite, got {self.g}")
        if self.variant in (ModelVariant.MOC, ModelVariant.LINEARIZED) and self.g < 0:
            raise PolaritonError(f"{self.variant.value} coupling must be >= 0, got {self.g}")


@dataclass(frozen=True)
class HybridModes:
    """Both hybrid branches; frequencies are complex with Im <= 0 (decay)."""

    omega_plus: complex
    omega_minus: complex
    ratio_plus: complex
    ratio_minus: complex
    lower_branch_real: bool


class MinSplitting(NamedTuple):
    Omega_min: float
    omega_cav_at_min: float


def spc_lower_branch_exists(omega_cav: float, omega_mat: float, g: float) -> bool:
    """Whether the amplitude-coupled model has a real lower branch.

    The lower branch frequency squared is proportional to
    ``omega_cav * omega_mat - 4 g**2``; it turns imaginary when the cavity is
    tuned below ``4 g**2 / omega_mat``.
    """
    if omega_cav <= 0 or omega_mat <= 0:
        raise PolaritonError("frequencies must be positive")
    return omega_cav * omega_mat - 4.0 * g * g >= 0.0


def _amplitude_modes_sq(wc, wm, g):
    """Branch frequencies squared of the amplitude-coupled quartic (stable forms)."""
    a, b = wc * wc, wm * wm
    rad = (a - b) ** 2 + 16.0 * g * g * wc * wm
    root = np.sqrt(rad) if isinstance(rad, np.ndarray) else cmath.sqrt(rad)
    s_plus = 0.5 * (a + b + root)
    # (a + b)^2 - rad = 4 wc wm (wc wm - 4 g^2): cancellation-free lower branch
    s_minus = 2.0 * wc * wm * (wc * wm - 4.0 * g * g) / (a + b + root)
    return s_plus, s_minus


def _velocity_modes_sq(wc, wm, g):
    """Branch frequencies squared of the velocity-coupled quartic (stable forms)."""
    a, b = wc * wc, wm * wm
    s = a + b + 4.0 * g * g
    rad = ((wc - wm) ** 2 + 4.0 * g * g) * ((wc + wm) ** 2 + 4.0 * g * g)
    root = np.sqrt(rad) if isinstance(rad, np.ndarray) else cmath.sqrt(rad)
    s_plus = 0.5 * (s + root)
    s_minus = 2.0 * a * b / (s + root)  # product identity s+ s- = a b
    return s_plus, s_minus


def _branch_sqrt(s):
    """Frequency from frequency-squared: real branch if s >= 0, else +i sqrt(-s)."""
    if isinstance(s, complex):
        w = cmath.sqrt(s)
        return w if w.real >= 0 else -w
    if s >= 0.0:
        return complex(math.sqrt(s), 0.0)
    return complex(0.0, math.sqrt(-s))


def frequency_domain_matrix(model: CoupledModel, omega: complex) -> np.ndarray:
    """2x2 matrix M(omega) with M @ (x_cav, x_mat) = 0 on an eigenmode."""
    wc, wm = model.pair.complex_cav, model.pair.complex_mat
    g = model.g
    if model.variant in _AMPLITUDE_FORM:
        cross = 2.0 * g * np.sqrt(wc * wm + 0j)
        return np.array(
            [[wc * wc - omega**2, cross], [cross, wm * wm - omega**2]], dtype=complex
        )
    if model.variant in _VELOCITY_FORM:
        cross = 2.0j * omega * g
        return np.array(
            [[wc * wc - omega**2, cross], [-cross, wm * wm - omega**2]], dtype=complex
        )
    # linearized: first order in omega
    return np.array([[wc - omega, g], [g, wm - omega]], dtype=complex)


def generic_eigenfrequencies(model: CoupledModel) -> tuple[complex, complex]:
    """Eigenfrequencies from the 2x2 system matrices, without closed forms.

    Amplitude-coupled systems are an eigenproblem in omega^2; velocity-coupled
    systems are quadratic in omega and are linearized to a 4x4 companion
    problem.  Of each +/- frequency pair the root with Re(omega) >= 0 is kept.
    """
    wc, wm = model.pair.complex_cav, model.pair.complex_mat
    g = model.g
    if model.variant in _AMPLITUDE_FORM:
        cross = 2.0 * g * cmath.sqrt(wc * wm)
        k = np.array([[wc * wc, cross], [cross, wm * wm]], dtype=complex)
        omegas = [_branch_sqrt(complex(s)) for s in np.linalg.eigvals(k)]
    elif model.variant in _VELOCITY_FORM:
        k = np.diag([wc * wc, wm * wm]).astype(complex)
        j = np.array([[0.0, -2.0 * g], [2.0 * g, 0.0]], dtype=complex)
        comp = np.zeros((4, 4), dtype=complex)
        comp[:2, 2:] = np.eye(2)
        comp[2:, :2] = -k
        comp[2:, 2:] = -j
        freqs = 1j * np.linalg.eigvals(comp)  # x ~ exp(-i w t) => lambda = -i w
        omegas = sorted(freqs, key=lambda w: (-w.real, -w.imag))[:2]
    else:
        m = np.array([[wc, g], [g, wm]], dtype=complex)
        omegas = [complex(w) for w in np.linalg.eigvals(m)]
    omegas.sort(key=lambda w: (w.real, w.imag))
    return omegas[1], omegas[0]


def _mode_ratio(model: CoupledModel, omega: complex) -> complex:
    """x_cav / x_mat on the branch with eigenfrequency ``omega``."""
    wc, wm = model.pair.complex_cav, model.pair.complex_mat
    g = model.g
    if model.variant is ModelVariant.LINEARIZED:
        den = wc - omega
        num = -g
    elif model.variant in _AMPLITUDE_FORM:
        den = wc * wc - omega * omega
        num = -2.0 * g * cmath.sqrt(wc * wm)
    else:
        den = wc * wc - omega * omega
        num = -2.0j * omega * g
    if den == 0:
        raise PoleError(
            "eigenvector ratio has a pole: branch frequency coincides with the bare cavity frequency"
        )
    return num / den


def eigenfrequencies(model: CoupledModel) -> HybridModes:
    """Hybrid-mode frequencies and amplitude ratios of a coupled model.

    Lossless parameters use the closed-form branch expressions; lossy
    parameters go through the generic matrix solver with complex bare
    frequencies.  ``lower_branch_real`` reports whether the lower branch is a
    real oscillation frequency (it is not in the amplitude-coupled model below
    the low-cavity-frequency cutoff, where the frequency is returned on the
    positive imaginary axis).
    """
    pair = model.pair
    g = model.g
    if model.variant is ModelVariant.LINEARIZED:
        if pair.lossless:
            wp, wm_ = linearized_eigenfrequencies(pair.omega_cav, pair.omega_mat, g)
            plus, minus = complex(wp), complex(wm_)
        else:
            plus, minus = generic_eigenfrequencies(model)
    elif pair.lossless:
        fn = _amplitude_modes_sq if model.variant in _AMPLITUDE_FORM else _velocity_modes_sq
        s_plus, s_minus = fn(pair.omega_cav, pair.omega_mat, g)
        plus, minus = _branch_sqrt(complex(s_plus)), _branch_sqrt(complex(s_minus))
    else:
        plus, minus = generic_eigenfrequencies(model)

    if plus.real < minus.real or (plus.real == minus.real and plus.imag < minus.imag):
        plus, minus = minus, plus
    lower_real = minus.imag == 0.0 and minus.real >= 0.0

    def safe_ratio(w: complex) -> complex:
        try:
            return _mode_ratio(model, w)
        except PoleError:
            return complex(math.inf, 0.0)

    return HybridModes(
        omega_plus=plus,
        omega_minus=minus,
        ratio_plus=safe_ratio(plus),
        ratio_minus=safe_ratio(minus),
        lower_branch_real=lower_real,
    )


def eigenvector_ratio(model: CoupledModel, branch: int) -> complex:
    """x_cav / x_mat on the upper (+1) or lower (-1) branch.

    Raises :class:`PoleError` when the branch frequency coincides with the
    bare cavity frequency (uncoupled degenerate case).
    """
    if branch not in (+1, -1):
        raise PolaritonError(f"branch must be +1 or -1, got {branch!r}")
    modes = eigenfrequencies(model)
    omega = modes.omega_plus if branch == +1 else modes.omega_minus
    return _mode_ratio(model, omega)


def _splitting_curve(
    variant: ModelVariant, g: float, omega_mat: float, omega_cavs: np.ndarray
) -> np.ndarray:
    """Vectorized branch splitting over a grid of cavity frequencies.

    Grid points where the lower branch is not a real frequency give NaN.
    """
    wc = np.asarray(omega_cavs, dtype=float)
    wm = float(omega_mat)
    if variant is ModelVariant.LINEARIZED:
        return np.sqrt((wc - wm) ** 2 + 4.0 * abs(g) ** 2)
    fn = _amplitude_modes_sq if variant in _AMPLITUDE_FORM else _velocity_modes_sq
    s_plus, s_minus = fn(wc, wm, g)
    out = np.full(wc.shape, np.nan)
    valid = s_minus >= 0.0
    out[valid] = np.sqrt(s_plus[valid]) - np.sqrt(s_minus[valid])
    return out


def min_splitting(
    variant: ModelVariant,
    g: float,
    omega_mat: float,
    sweep=None,
) -> MinSplitting:
    """Minimum branch splitting over a cavity-frequency sweep.

    The sweep grid must span at least [0.2, 3] * omega_mat with >= 1000
    points; the coarse grid minimum is then refined by a golden-section search
    to an abscissa tolerance of 1e-6 * omega_mat.  Only cavity frequencies
    where both branches are real contribute.
    """
    if omega_mat <= 0:
        raise PolaritonError("omega_mat must be positive")
    if sweep is None:
        grid = np.linspace(0.2, 3.0, 1201) * omega_mat
    else:
        grid = np.sort(np.asarray(sweep, dtype=float))
        if grid.size < 1000 or grid[0] > 0.2 * omega_mat + 1e-12 or grid[-1] < 3.0 * omega_mat - 1e-12:
            raise PolaritonError(
                "sweep grid must span at least [0.2, 3] * omega_mat with >= 1000 points"
            )
    split = _splitting_curve(variant, g, omega_mat, grid)
    if np.all(np.isnan(split)):
        raise PolaritonError("no cavity frequency in the sweep has two real branches")
    i = int(np.nanargmin(split))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]

    def f(wc: float) -> float:
        val = _splitting_curve(variant, g, omega_mat, np.array([wc]))[0]
        return math.inf if math.isnan(val) else val

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > 1e-6 * omega_mat:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    best = 0.5 * (a + b)
    return MinSplitting(Omega_min=f(best), omega_cav_at_min=best)


def alternative_model_equivalence(
    base: CoupledModel, target: ModelVariant | None = None
) -> CoupledModel:
    """Dressed alternative model with the same spectrum as ``base``.

    A velocity-coupled base maps onto one of the two amplitude-coupled
    dressings (Coulomb-dressed cavity by default, or dipole-dressed matter);
    an amplitude-coupled base maps onto the velocity-coupled dressed
    dipole-dipole model.  Defined for lossless models.
    """
    if base.variant not in (ModelVariant.SPC, ModelVariant.MOC):
        raise PolaritonError("equivalence mapping starts from an SpC or MoC model")
    if not base.pair.lossless:
        raise PolaritonError("dressing transformations are defined for lossless models")
    wc, wm, g = base.pair.omega_cav, base.pair.omega_mat, base.g
    if base.variant is ModelVariant.MOC:
        if target is None:
            target = ModelVariant.ALT_COULOMB_DRESSED_CAVITY
        if target is ModelVariant.ALT_COULOMB_DRESSED_CAVITY:
            wc_dressed = math.sqrt(wc * wc + 4.0 * g * g)
            g_dressed = -g * math.sqrt(wm / wc_dressed)
            return CoupledModel(OscillatorPair(wc_dressed, wm), target, g_dressed)
        if target is ModelVariant.ALT_DIPOLE_DRESSED_MATTER:
            wm_dressed = math.sqrt(wm * wm + 4.0 * g * g)
            g_dressed = g * math.sqrt(wc / wm_dressed)
            return CoupledModel(OscillatorPair(wc, wm_dressed), target, g_dressed)
        raise PolaritonError(f"no MoC dressing for target {target}")
    # amplitude-coupled base
    if target not in (None, ModelVariant.ALT_DIPOLE_DIPOLE_DRESSED_CAVITY):
        raise PolaritonError(f"no SpC dressing for target {target}")
    g_dressed = g * math.sqrt(wc / wm)
    wc_sq = wc * wc - 4.0 * g_dressed * g_dressed
    if wc_sq <= 0.0:
        raise PolaritonError(
            "invalid dressing: dressed cavity frequency squared "
            f"omega_cav^2 - 4 g'^2 = {wc_sq:.6g} is not positive"
        )
    return CoupledModel(
        OscillatorPair(math.sqrt(wc_sq), wm),
        ModelVariant.ALT_DIPOLE_DIPOLE_DRESSED_CAVITY,
        g_dressed,
    )


def linearized_eigenfrequencies(
    omega_cav: float, omega_mat: float, g_lin: complex
) -> tuple[float, float]:
    """Branch frequencies of the model linear in omega (valid outside USC)."""
    if omega_cav <= 0 or omega_mat <= 0:
        raise PolaritonError("frequencies must be positive")
    gabs = abs(g_lin)
    root = math.sqrt((omega_cav - omega_mat) ** 2 + 4.0 * gabs * gabs)
    return 0.5 * (omega_cav + omega_mat + root), 0.5 * (omega_cav + omega_mat - root)
