"""Bulk permittivity, reststrahlen band, and polariton dispersion."""

import math

import numpy as np
import pytest

from polariton_lab import PoleError, PolaritonError
from polariton_lab.material import (
    DispersionBranch,
    PermittivityModel,
    PermittivityVariant,
    bulk_dispersion,
    coupling_profiles,
    permittivity_mc,
    permittivity_spc,
    reststrahlen_band,
    reststrahlen_fit,
    self_consistent_epsilon_mode,
)
from polariton_lab.units import UNITS

_SIC_TO = 0.0983  # eV
_SIC_LO = 0.1205  # eV


def _mc(omega=1.0, g=0.3, eps_inf=1.0):
    return PermittivityModel(Omega_mat=omega, G=g, epsilon_inf=eps_inf)


def _spc(omega=1.0, g=0.3):
    return PermittivityModel(Omega_mat=omega, G=g, variant=PermittivityVariant.SPC)


# ---------------------------------------------------------------------------
# velocity-form (Lorentz) permittivity


def test_lorentz_permittivity_hand_values():
    model = _mc()
    assert permittivity_mc(model, 0.0) == pytest.approx(1.0 + 0.36, rel=1e-14)
    assert permittivity_mc(model, 1.1) == pytest.approx(
        1.0 + 0.36 / (1.0 - 1.21), rel=1e-13
    )
    assert permittivity_mc(model, 100.0) == pytest.approx(1.0, rel=1e-3)


def test_lorentz_permittivity_sign_structure():
    model = _mc()
    lo, hi = reststrahlen_band(model)
    assert (lo, hi) == (1.0, pytest.approx(math.sqrt(1.36), rel=1e-14))
    inside = np.linspace(lo * 1.001, hi * 0.999, 500)
    assert np.all(permittivity_mc(model, inside) < 0.0)
    below = np.linspace(0.0, lo * 0.999, 500)
    assert np.all(permittivity_mc(model, below) > 0.0)
    above = np.linspace(hi * 1.001, 10.0, 500)
    assert np.all(permittivity_mc(model, above) > 0.0)
    # the band closes exactly at the longitudinal edge
    assert permittivity_mc(model, hi) == pytest.approx(0.0, abs=1e-12)


def test_lorentz_permittivity_pole_and_variant_guards():
    with pytest.raises(PoleError):
        permittivity_mc(_mc(), 1.0)
    with pytest.raises(PolaritonError):
        permittivity_mc(_spc(), 0.5)
    with pytest.raises(PolaritonError):
        permittivity_mc(_mc(), -0.5)


# ---------------------------------------------------------------------------
# amplitude-form permittivity


def test_amplitude_permittivity_is_nonnegative_everywhere():
    model = _spc()
    grid = np.concatenate(
        [np.linspace(0.01, 0.999, 300), np.linspace(1.001, 12.0, 300)]
    )
    eps = permittivity_spc(model, grid)
    assert np.all(eps >= 0.0)
    # approaches vacuum from above at high frequency
    assert permittivity_spc(model, 50.0) == pytest.approx(1.0, abs=1e-3)


def test_amplitude_permittivity_diverges_at_zero():
    model = _spc()
    with pytest.raises(PoleError, match="omega = 0"):
        permittivity_spc(model, 0.0)
    assert permittivity_spc(model, 1e-5) > 1e8


def test_amplitude_permittivity_guards():
    with pytest.raises(PoleError):
        permittivity_spc(_spc(), 1.0)
    with pytest.raises(PolaritonError):
        permittivity_spc(_mc(), 0.5)


def test_amplitude_permittivity_trivial_without_coupling():
    model = PermittivityModel(Omega_mat=1.0, G=0.0, variant=PermittivityVariant.SPC)
    grid = np.array([0.3, 0.9, 2.5])
    assert permittivity_spc(model, grid) == pytest.approx([1.0, 1.0, 1.0], rel=1e-14)


def test_no_reststrahlen_band_for_amplitude_medium():
    with pytest.raises(PolaritonError, match="no reststrahlen band"):
        reststrahlen_band(_spc())


# ---------------------------------------------------------------------------
# fitting measured band edges


def test_band_fit_round_trip():
    model = reststrahlen_fit(_SIC_TO, _SIC_LO, epsilon_inf=6.52)
    lo, hi = reststrahlen_band(model)
    assert lo == pytest.approx(_SIC_TO, rel=1e-14)
    assert hi == pytest.approx(_SIC_LO, rel=1e-12)
    assert model.G == pytest.approx(0.5 * math.sqrt(_SIC_LO**2 - _SIC_TO**2), rel=1e-14)
    assert model.variant is PermittivityVariant.POLAR_LORENTZ


def test_fitted_static_permittivity_obeys_the_edge_ratio():
    # eps(0) / eps_inf = (omega_LO / omega_TO)^2 for any Lorentz medium
    model = reststrahlen_fit(_SIC_TO, _SIC_LO, epsilon_inf=6.52)
    eps0 = permittivity_mc(model, 0.0)
    assert eps0 / 6.52 == pytest.approx((_SIC_LO / _SIC_TO) ** 2, rel=1e-12)


def test_band_fit_validation():
    with pytest.raises(PolaritonError):
        reststrahlen_fit(-0.1, 0.2)
    with pytest.raises(PolaritonError):
        reststrahlen_fit(0.2, 0.1)
    # degenerate edges are legal and give an uncoupled medium
    assert reststrahlen_fit(0.1, 0.1).G == 0.0


# ---------------------------------------------------------------------------
# bulk polariton dispersion


def _k_grid(omega_to=_SIC_TO, n=101, upto=10.0):
    return np.linspace(0.0, upto, n) * omega_to / UNITS.hbar_c


def test_dispersion_parameterizations_agree():
    g = 0.3 * _SIC_TO
    k = _k_grid()
    reference = bulk_dispersion("MoC", _SIC_TO, g, k)
    for name in ("A1", "A2"):
        branches = bulk_dispersion(name, _SIC_TO, g, k)
        for ref, got in zip(reference, branches):
            assert np.max(np.abs(got.omega - ref.omega)) < 1e-10


def test_dispersion_zone_center_limits():
    g = 0.3 * _SIC_TO
    omega_lo = math.sqrt(_SIC_TO**2 + 4.0 * g**2)
    for name in ("MoC", "A1", "A2"):
        lower, upper = bulk_dispersion(name, _SIC_TO, g, _k_grid())
        assert lower.omega[0] == 0.0
        assert upper.omega[0] == pytest.approx(omega_lo, rel=1e-14)


def test_dispersion_branches_avoid_the_band():
    g = 0.3 * _SIC_TO
    omega_lo = math.sqrt(_SIC_TO**2 + 4.0 * g**2)
    lower, upper = bulk_dispersion("MoC", _SIC_TO, g, _k_grid())
    assert np.all(lower.omega <= _SIC_TO + 1e-15)
    assert np.all(upper.omega >= omega_lo - 1e-15)
    # both branches grow monotonically with k
    assert np.all(np.diff(lower.omega) >= 0.0)
    assert np.all(np.diff(upper.omega) >= 0.0)


def test_dispersion_asymptotes():
    g = 0.3 * _SIC_TO
    k = _k_grid(upto=40.0)
    lower, upper = bulk_dispersion("MoC", _SIC_TO, g, k)
    omega_k = UNITS.hbar_c * k[-1]
    # far from resonance the upper branch rides the photon line, the lower
    # saturates at the transverse edge
    assert upper.omega[-1] == pytest.approx(omega_k, rel=5e-3)
    assert lower.omega[-1] == pytest.approx(_SIC_TO, rel=5e-3)


def test_uncoupled_dispersion_is_photon_plus_flat_line():
    k = _k_grid()
    lower, upper = bulk_dispersion("MoC", _SIC_TO, 0.0, k)
    photon = UNITS.hbar_c * k
    expect_upper = np.maximum(photon, _SIC_TO)
    expect_lower = np.minimum(photon, _SIC_TO)
    assert np.max(np.abs(upper.omega - expect_upper)) < 1e-12
    assert np.max(np.abs(lower.omega - expect_lower)) < 1e-12


def test_background_dielectric_slows_the_photon_line():
    g = 0.3 * _SIC_TO
    k = _k_grid(upto=40.0)
    _, upper_vac = bulk_dispersion("MoC", _SIC_TO, g, k)
    _, upper_bg = bulk_dispersion("MoC", _SIC_TO, g, k, epsilon_inf=4.0)
    assert upper_bg.omega[-1] == pytest.approx(upper_vac.omega[-1] / 2.0, rel=1e-2)


def test_dispersion_validation():
    with pytest.raises(PolaritonError, match="expected one of"):
        bulk_dispersion("SpC", _SIC_TO, 0.01, _k_grid())
    with pytest.raises(PolaritonError):
        bulk_dispersion("MoC", _SIC_TO, -0.01, _k_grid())
    with pytest.raises(PolaritonError):
        bulk_dispersion("MoC", _SIC_TO, 0.01, np.array([-1.0, 0.0]))
    with pytest.raises(PolaritonError):
        DispersionBranch(k=np.array([0.0]), omega=np.array([1.0]), branch="middle", model="MoC")


# ---------------------------------------------------------------------------
# k-dependent coupling profiles


def test_coupling_profiles_shapes():
    g = 0.3 * _SIC_TO
    k = _k_grid()
    moc = coupling_profiles("MoC", _SIC_TO, g, k)
    assert np.all(moc == g)
    a2 = coupling_profiles("A2", _SIC_TO, g, k)
    assert a2[0] == 0.0
    # grows like the square root of the photon frequency
    assert a2[40] / a2[10] == pytest.approx(2.0, rel=1e-12)
    a1 = coupling_profiles("A1", _SIC_TO, g, k)
    assert np.all(a1 < 0.0)
    assert abs(a1[0]) == pytest.approx(g * math.sqrt(_SIC_TO / (2.0 * g)), rel=1e-12)
    with pytest.raises(PolaritonError):
        coupling_profiles("bogus", _SIC_TO, g, k)


# ---------------------------------------------------------------------------
# permittivity / dispersion consistency


def test_branches_solve_the_bulk_mode_condition():
    # on either branch, omega^2 eps(omega) = (hbar c k)^2
    g = 0.3 * _SIC_TO
    model = _mc(omega=_SIC_TO, g=g)
    k = _k_grid(n=41)[1:]  # skip k = 0
    lower, upper = bulk_dispersion("MoC", _SIC_TO, g, k)
    for branch in (lower, upper):
        target = (UNITS.hbar_c * branch.k) ** 2
        value = branch.omega**2 * permittivity_mc(model, branch.omega)
        assert np.max(np.abs(value - target) / np.maximum(target, 1e-30)) < 1e-8


def test_self_consistent_mode_with_constant_permittivity():
    omega = self_consistent_epsilon_mode(lambda w: 4.0, omega_cav=2.0, omega_start=1.5)
    assert omega == pytest.approx(1.0, rel=1e-10)


def test_self_consistent_mode_reproduces_the_upper_branch():
    g = 0.3 * _SIC_TO
    model = _mc(omega=_SIC_TO, g=g)
    k = 3.0 * _SIC_TO / UNITS.hbar_c
    _, upper = bulk_dispersion("MoC", _SIC_TO, g, np.array([k]))
    omega_cav = UNITS.hbar_c * k
    got = self_consistent_epsilon_mode(
        lambda w: permittivity_mc(model, w), omega_cav=omega_cav, omega_start=omega_cav
    )
    assert got == pytest.approx(upper.omega[0], rel=1e-9)


def test_self_consistent_mode_rejects_negative_permittivity():
    model = _mc()
    lo, hi = reststrahlen_band(model)
    inside = 0.5 * (lo + hi)
    with pytest.raises(PolaritonError, match="not self-consistent"):
        self_consistent_epsilon_mode(
            lambda w: permittivity_mc(model, inside), omega_cav=1.0, omega_start=1.0
        )


def test_self_consistent_mode_validation():
    with pytest.raises(PolaritonError):
        self_consistent_epsilon_mode(lambda w: 1.0, omega_cav=-1.0, omega_start=1.0)
    with pytest.raises(PolaritonError):
        self_consistent_epsilon_mode(lambda w: 1.0, omega_cav=1.0, omega_start=0.0)


def test_permittivity_model_validation():
    with pytest.raises(PolaritonError):
        PermittivityModel(Omega_mat=0.0, G=0.1)
    with pytest.raises(PolaritonError):
        PermittivityModel(Omega_mat=1.0, G=-0.1)
    with pytest.raises(PolaritonError):
        PermittivityModel(Omega_mat=1.0, G=0.1, epsilon_inf=0.2)
    with pytest.raises(PolaritonError):
        PermittivityModel(Omega_mat=1.0, G=0.1, variant="MoC")