"""Many-dipole ensembles in a planar mirror cavity and their collective reduction.

The full system couples N identical dipoles to M cavity standing-wave modes:
dipole-mode blocks are velocity couplings weighted by the mode profile at
each dipole, dipole-dipole blocks are amplitude couplings from the
quasistatic interaction.  ``collective_reduce`` collapses each cavity mode's
partner to a single collective matter oscillator with coupling
``G = g_max sqrt(N_eff)`` and a dressed frequency shifted by the lattice sum
``g_shift``; ``full_vs_reduced_check`` quantifies how well that reduction
reproduces the exact polariton branches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import PolaritonError
from .models import CoupledModel, ModelVariant, OscillatorPair, eigenfrequencies
from .units import UNITS, OscillatorStrength, _unit_vector

__all__ = [
    "FabryPerotSpec",
    "DipoleLattice",
    "CollectiveMode",
    "FullSystem",
    "FullVsReducedReport",
    "cubic_dipole_lattice",
    "build_full_system",
    "collective_reduce",
    "full_vs_reduced_check",
]

_MAX_DIPOLES = 500


def _reduced_strength(f, units=UNITS) -> float:
    if isinstance(f, OscillatorStrength):
        return f.reduced(units)
    return OscillatorStrength(float(f)).reduced(units)


@dataclass(frozen=True)
class FabryPerotSpec:
    """Planar cavity of spacing ``L_cav`` with periodic lateral boundary.

    Modes are labeled by (n, k_parallel) with the standing-wave profile
    ``sin(n pi z / L_cav) exp(i k_par . r_par)``; z runs over (0, L_cav).
    """

    L_cav: float
    lateral_period: float
    modes: tuple
    epsilon_inf: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.L_cav) and self.L_cav > 0):
            raise PolaritonError(f"L_cav must be positive, got {self.L_cav}")
        if not (math.isfinite(self.lateral_period) and self.lateral_period > 0):
            raise PolaritonError(f"lateral_period must be positive, got {self.lateral_period}")
        if not (math.isfinite(self.epsilon_inf) and self.epsilon_inf >= 1.0):
            raise PolaritonError(f"epsilon_inf must be >= 1, got {self.epsilon_inf}")
        normalized = []
        for mode in self.modes:
            n, k_par = mode
            n = int(n)
            if n < 1:
                raise PolaritonError(f"mode index n must be >= 1, got {n}")
            k_vec = np.asarray(k_par, dtype=float)
            if k_vec.shape != (2,) or not np.all(np.isfinite(k_vec)):
                raise PolaritonError(f"k_parallel must be a finite 2-vector, got {k_par!r}")
            normalized.append((n, (float(k_vec[0]), float(k_vec[1]))))
        object.__setattr__(self, "modes", tuple(normalized))

    @property
    def V_eff(self) -> float:
        """Mode volume: lateral period squared times L_cav/2 (sin^2 average)."""
        return self.lateral_period**2 * self.L_cav / 2.0

    def mode_frequency(self, mode) -> float:
        n, k_par = mode
        kz = n * math.pi / self.L_cav
        k2 = kz * kz + k_par[0] ** 2 + k_par[1] ** 2
        return UNITS.hbar_c * math.sqrt(k2) / math.sqrt(self.epsilon_inf)

    def mode_profile(self, mode, r) -> complex:
        n, k_par = mode
        phase = k_par[0] * r[0] + k_par[1] * r[1]
        return math.sin(n * math.pi * r[2] / self.L_cav) * complex(
            math.cos(phase), math.sin(phase)
        )

    def g_max(self, f_dip_reduced: float) -> float:
        return 0.5 * math.sqrt(4.0 * math.pi * f_dip_reduced / self.V_eff)


@dataclass(frozen=True)
class DipoleLattice:
    positions: np.ndarray
    orientation: np.ndarray
    f_dip: object
    omega_dip: float
    spacing: float

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 3 or not np.all(np.isfinite(pos)):
            raise PolaritonError("positions must be an (N, 3) array of finite coordinates")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "orientation", _unit_vector("orientation", self.orientation))
        if not (math.isfinite(self.omega_dip) and self.omega_dip > 0):
            raise PolaritonError(f"omega_dip must be positive, got {self.omega_dip}")
        if not (math.isfinite(self.spacing) and self.spacing > 0):
            raise PolaritonError(f"spacing must be positive, got {self.spacing}")
        _reduced_strength(self.f_dip)

    @property
    def n_dip(self) -> int:
        return self.positions.shape[0]

    @property
    def f_dip_reduced(self) -> float:
        return _reduced_strength(self.f_dip)


@dataclass(frozen=True)
class CollectiveMode:
    Omega_mat: float
    G: float
    N_eff: float
    g_shift: float
    mode: tuple
    g_shift_spread: float


def cubic_dipole_lattice(
    fp: FabryPerotSpec,
    spacing: float,
    shape: tuple,
    f_dip,
    omega_dip: float,
    orientation=(1.0, 0.0, 0.0),
) -> DipoleLattice:
    """Rectangular lattice of nx*ny*nz dipoles spanning the cavity gap.

    The nz layers sit at the midpoint heights z_k = (k - 1/2) L_cav / nz, so
    the sin^2 profile sums to exactly nz/2 per lateral site for mode indices
    n < nz; lateral sites are a square grid of the given spacing centered in
    the lateral period.  The lattice is simple cubic when L_cav = nz*spacing.
    """
    nx, ny, nz = (int(v) for v in shape)
    if nx < 1 or ny < 1 or nz < 1:
        raise PolaritonError(f"lattice shape must be positive, got {shape!r}")
    xs = fp.lateral_period / 2.0 + spacing * (np.arange(nx) - (nx - 1) / 2.0)
    ys = fp.lateral_period / 2.0 + spacing * (np.arange(ny) - (ny - 1) / 2.0)
    zs = (np.arange(1, nz + 1) - 0.5) * fp.L_cav / nz
    pts = [(x, y, z) for z in zs for y in ys for x in xs]
    return DipoleLattice(
        positions=np.array(pts),
        orientation=orientation,
        f_dip=f_dip,
        omega_dip=omega_dip,
        spacing=spacing,
    )


def _pairwise_couplings(lattice: DipoleLattice) -> tuple[np.ndarray, np.ndarray]:
    """(distance matrix, amplitude-coupling matrix g_ij) with zero diagonals.

    ``g_ij = f 1/2 (1 - 3 (n.rhat)^2) / (r^3 omega_dip)`` for the shared
    orientation; raises on coincident dipoles.
    """
    pos = lattice.positions
    n = pos.shape[0]
    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=2))
    off = ~np.eye(n, dtype=bool)
    if np.any(dist[off] == 0.0):
        i, j = np.argwhere((dist == 0.0) & off)[0]
        raise PolaritonError(f"dipoles {i} and {j} overlap at {pos[i]}")
    safe = np.where(off, dist, 1.0)
    cos_align = np.einsum("ijk,k->ij", diff, lattice.orientation) / safe
    ang = 1.0 - 3.0 * cos_align**2
    g = np.where(off, 0.5 * lattice.f_dip_reduced * ang / (safe**3 * lattice.omega_dip), 0.0)
    return dist, g


@dataclass(frozen=True)
class FullSystem:
    """Frequency-domain system x'' + K x + J x' = 0 over [dipoles..., modes...]."""

    K: np.ndarray
    J: np.ndarray
    n_dip: int
    n_modes: int

    def frequency_domain_matrix(self, omega: float) -> np.ndarray:
        n = self.K.shape[0]
        return self.K - omega**2 * np.eye(n) - 1j * omega * self.J

    def eigenfrequencies(self) -> np.ndarray:
        """Positive-frequency spectrum, sorted ascending by real part."""
        n = self.K.shape[0]
        comp = np.zeros((2 * n, 2 * n), dtype=complex)
        comp[:n, n:] = np.eye(n)
        comp[n:, :n] = -self.K
        comp[n:, n:] = -self.J
        freqs = 1j * np.linalg.eigvals(comp)  # x ~ exp(-i w t)
        freqs = freqs[freqs.real > 0.0]
        return freqs[np.argsort(freqs.real)]


def build_full_system(
    lattice: DipoleLattice, fp: FabryPerotSpec, include_dipole_dipole: bool = True
) -> FullSystem:
    """Assemble the N-dipole + M-mode coupled system.

    Dipole-mode couplings are profile-weighted velocity terms; dipole-dipole
    couplings are quasistatic amplitude terms over all pairs (no cutoff).
    The assembled blocks are verified Hermitian (K) and anti-Hermitian (J).
    """
    n = lattice.n_dip
    if n == 0:
        raise PolaritonError("lattice has no dipoles")
    if n > _MAX_DIPOLES:
        raise PolaritonError(f"N={n} exceeds the desk-scale bound of {_MAX_DIPOLES} dipoles")
    z = lattice.positions[:, 2]
    if np.any(z <= 0.0) or np.any(z >= fp.L_cav):
        raise PolaritonError("all dipoles must lie strictly between the mirrors (0 < z < L_cav)")
    _, g_pairs = _pairwise_couplings(lattice)
    m = len(fp.modes)
    dim = n + m
    big_k = np.zeros((dim, dim), dtype=complex)
    big_j = np.zeros((dim, dim), dtype=complex)
    wd = lattice.omega_dip
    big_k[:n, :n] = wd * wd * np.eye(n)
    if include_dipole_dipole:
        big_k[:n, :n] += 2.0 * wd * g_pairs
    gmax = fp.g_max(lattice.f_dip_reduced)
    for alpha, mode in enumerate(fp.modes):
        col = n + alpha
        big_k[col, col] = fp.mode_frequency(mode) ** 2
        for i in range(n):
            g_ai = gmax * fp.mode_profile(mode, lattice.positions[i])
            big_j[i, col] = 2.0 * g_ai
            big_j[col, i] = -2.0 * np.conj(g_ai)
    scale = max(float(np.max(np.abs(big_k))), 1.0)
    if float(np.max(np.abs(big_k - big_k.conj().T))) > 1e-12 * scale:
        raise PolaritonError("assembled stiffness block is not Hermitian")
    jscale = max(float(np.max(np.abs(big_j))), 1.0)
    if float(np.max(np.abs(big_j + big_j.conj().T))) > 1e-12 * jscale:
        raise PolaritonError("assembled velocity-coupling block is not anti-Hermitian")
    return FullSystem(K=big_k, J=big_j, n_dip=n, n_modes=m)


def collective_reduce(
    lattice: DipoleLattice,
    fp: FabryPerotSpec,
    mode,
    include_dipole_dipole: bool = True,
    cutoff_factor: float = 10.0,
) -> CollectiveMode:
    """Collapse the lattice onto one collective oscillator for one cavity mode.

    ``N_eff`` is the profile-squared sum; the collective coupling is
    ``g_max sqrt(N_eff)``.  ``g_shift`` is the lattice sum of phased
    dipole-dipole couplings within ``cutoff_factor * spacing`` of each
    reference dipole, averaged over reference dipoles; the spread field
    reports the largest deviation of a single reference dipole's sum from
    that average (a homogeneity diagnostic).
    """
    if lattice.n_dip == 0:
        raise PolaritonError("lattice has no dipoles")
    mode = (int(mode[0]), (float(mode[1][0]), float(mode[1][1])))
    if mode not in fp.modes:
        raise PolaritonError(f"mode {mode!r} is not among the cavity's modes")
    profile = np.array([fp.mode_profile(mode, r) for r in lattice.positions])
    n_eff = float(np.sum(np.abs(profile) ** 2))
    if n_eff == 0.0:
        raise PolaritonError("mode profile vanishes on every dipole; no collective mode")
    gmax = fp.g_max(lattice.f_dip_reduced)
    big_g = gmax * math.sqrt(n_eff)
    wd = lattice.omega_dip
    if include_dipole_dipole and lattice.n_dip > 1:
        dist, g_pairs = _pairwise_couplings(lattice)
        cutoff = cutoff_factor * lattice.spacing * (1.0 + 1e-12)
        within = (dist > 0.0) & (dist <= cutoff)
        k_par = np.array(mode[1])
        rel_phase = np.einsum(
            "ijk,k->ij",
            lattice.positions[:, None, :2] - lattice.positions[None, :, :2],
            k_par,
        )
        # sum over neighbors i of each reference j, phased by k_par.(r_i - r_j)
        phased = np.where(within, g_pairs, 0.0) * np.exp(-1j * rel_phase.T)
        sums = phased.sum(axis=1)
        mean = complex(np.mean(sums))
        g_shift = mean.real
        spread = float(np.max(np.abs(sums - mean)))
    else:
        g_shift = 0.0
        spread = 0.0
    radicand = wd * wd + 2.0 * wd * g_shift
    if radicand <= 0.0:
        raise PolaritonError(
            f"dipole-dipole shift g_shift={g_shift:.6g} eV destabilizes the collective mode "
            f"(Omega_mat^2 = {radicand:.6g} eV^2 <= 0)"
        )
    return CollectiveMode(
        Omega_mat=math.sqrt(radicand),
        G=big_g,
        N_eff=n_eff,
        g_shift=g_shift,
        mode=mode,
        g_shift_spread=spread,
    )


@dataclass(frozen=True)
class FullVsReducedReport:
    max_rel_deviation: float
    omega_full: tuple
    omega_reduced: tuple
    tolerance: float
    passed: bool
    collective: CollectiveMode


def full_vs_reduced_check(
    lattice: DipoleLattice,
    fp: FabryPerotSpec,
    mode,
    tolerance: float = 1e-2,
    include_dipole_dipole: bool = True,
) -> FullVsReducedReport:
    """Compare the exact polariton branches against the collective reduction.

    The full system's eigenfrequencies nearest the reduced model's two
    branches are matched up and the maximum relative deviation reported.
    """
    cm = collective_reduce(lattice, fp, mode, include_dipole_dipole=include_dipole_dipole)
    omega_cav = fp.mode_frequency(mode)
    reduced = eigenfrequencies(
        CoupledModel(OscillatorPair(omega_cav, cm.Omega_mat), ModelVariant.MOC, cm.G)
    )
    targets = (reduced.omega_plus.real, reduced.omega_minus.real)
    full = build_full_system(lattice, fp, include_dipole_dipole=include_dipole_dipole)
    freqs = full.eigenfrequencies().real
    if freqs.size < 2:
        raise PolaritonError("full system produced fewer than two positive eigenfrequencies")
    picked = tuple(float(freqs[np.argmin(np.abs(freqs - t))]) for t in targets)
    dev = max(abs(p - t) / t for p, t in zip(picked, targets))
    return FullVsReducedReport(
        max_rel_deviation=dev,
        omega_full=picked,
        omega_reduced=targets,
        tolerance=tolerance,
        passed=dev <= tolerance,
        collective=cm,
    )
