"""Quantum two-mode oracle for the classical coupled-oscillator models.

A pair of bosonic modes with a bilinear position-position coupling and an
optional quadratic self-term on the photon mode reproduces, mode for mode,
the classical branch frequencies: the self-term coefficient ``D`` selects the
model (``D = 0`` for amplitude coupling, ``D = g**2 / omega_mat`` for
velocity coupling).  The module provides both the closed-form branch
frequencies of that quadratic Hamiltonian and a brute-force truncated Fock
diagonalization, so the two can be cross-checked without sharing any code
path with the classical solvers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvalsh

from .exceptions import PolaritonError

__all__ = [
    "HopfieldParams",
    "QuantumSpectrum",
    "hopfield_quartic_eigen",
    "truncated_fock_spectrum",
    "frame_equivalence_check",
]


@dataclass(frozen=True)
class HopfieldParams:
    omega_cav: float
    omega_mat: float
    g_qed: float
    D: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.omega_cav) and self.omega_cav > 0):
            raise PolaritonError(f"omega_cav must be positive, got {self.omega_cav}")
        if not (math.isfinite(self.omega_mat) and self.omega_mat > 0):
            raise PolaritonError(f"omega_mat must be positive, got {self.omega_mat}")
        if not (math.isfinite(self.g_qed) and self.g_qed >= 0):
            raise PolaritonError(f"g_qed must be >= 0, got {self.g_qed}")
        if not (math.isfinite(self.D) and self.D >= 0):
            raise PolaritonError(f"D must be >= 0, got {self.D}")

    @property
    def stable(self) -> bool:
        """True when both normal-mode frequencies squared are positive."""
        a = self.omega_cav**2 + 4.0 * self.D * self.omega_cav
        c = 4.0 * self.g_qed**2 * self.omega_cav * self.omega_mat
        return a * self.omega_mat**2 > c


@dataclass(frozen=True)
class QuantumSpectrum:
    excitation_energies: np.ndarray
    ground_state_energy: float
    truncation: int


def hopfield_quartic_eigen(p: HopfieldParams) -> tuple[float, float]:
    """Closed-form normal-mode frequencies (omega_plus, omega_minus) in eV.

    The characteristic polynomial is a quadratic in omega^2, solved
    analytically.  Unstable parameters (negative lower root) are rejected
    with a diagnostic rather than returning an imaginary frequency.
    """
    a = p.omega_cav**2 + 4.0 * p.D * p.omega_cav
    b = p.omega_mat**2
    c = 4.0 * p.g_qed**2 * p.omega_cav * p.omega_mat
    root = math.sqrt((a - b) ** 2 + 4.0 * c)
    u_plus = 0.5 * (a + b + root)
    # (a + b)^2 - ((a - b)^2 + 4 c) = 4 (a b - c): cancellation-free lower mode
    u_minus = 2.0 * (a * b - c) / (a + b + root)
    if u_minus < 0.0:
        raise PolaritonError(
            "unstable parameters: lower normal mode is imaginary "
            f"(omega_minus^2 = {u_minus:.6g} eV^2 < 0)"
        )
    return math.sqrt(u_plus), math.sqrt(u_minus)


def _ladder(dim: int) -> np.ndarray:
    """Single-mode annihilation operator on a ``dim``-level Fock space."""
    return np.diag(np.sqrt(np.arange(1.0, dim)), k=1)


def _fock_hamiltonian(
    p: HopfieldParams, n_max: int, *, momentum_frame: bool = False, rwa: bool = False
) -> np.ndarray:
    d = n_max + 1
    low = _ladder(d)
    num = np.diag(np.arange(d, dtype=float))
    q = low + low.T
    eye = np.eye(d)
    wc, wm, g, dd = p.omega_cav, p.omega_mat, p.g_qed, p.D
    if rwa:
        coupling = g * (np.kron(low, low.T) + np.kron(low.T, low))
        self_term = dd * (2.0 * num + eye)  # counter-rotating pieces of the quadratic term dropped
    elif momentum_frame:
        coupling = g * np.kron(q, 1j * (low - low.T))
        self_term = dd * (q @ q)
    else:
        coupling = g * np.kron(q, q)
        self_term = dd * (q @ q)
    h = np.kron(wc * num + self_term, eye) + np.kron(eye, wm * num) + coupling
    h += 0.5 * (wc + wm) * np.eye(d * d)
    return h


def _all_levels(h: np.ndarray, d: int) -> np.ndarray:
    """Eigenvalues of a two-mode Fock Hamiltonian, via its parity blocks.

    Every interaction used here changes the total excitation number by 0 or
    +/-2, so (n_a + n_b) mod 2 is conserved and the matrix splits into two
    blocks of roughly half the dimension.
    """
    idx = np.arange(d * d)
    parity = (idx // d + idx % d) % 2
    levels = []
    for par in (0, 1):
        mask = parity == par
        block = h[np.ix_(mask, mask)]
        levels.append(eigvalsh(block, check_finite=False))
    return np.sort(np.concatenate(levels))


def truncated_fock_spectrum(
    p: HopfieldParams, n_max: int, n_levels: int, rwa: bool = False
) -> QuantumSpectrum:
    """Diagonalize the two-mode Hamiltonian in a truncated Fock basis.

    Returns the lowest ``n_levels`` excitation energies (level minus ground
    state) together with the ground-state energy itself.  With ``rwa=True``
    the counter-rotating coupling terms are dropped, which removes the
    ground-state dressing and reduces the excitation energies to the
    first-order (linearized) branch values when ``D = 0``.
    """
    if n_max < 2:
        raise PolaritonError(f"n_max must be >= 2, got {n_max}")
    total = (n_max + 1) ** 2
    if total > 4096:
        raise PolaritonError(
            f"Fock matrix dimension {total} exceeds the desk-scale bound of 4096 rows"
        )
    if not 1 <= n_levels <= total - 1:
        raise PolaritonError(
            f"n_levels must be in [1, {total - 1}] for n_max={n_max}, got {n_levels}"
        )
    h = _fock_hamiltonian(p, n_max, rwa=rwa)
    levels = _all_levels(h, n_max + 1)
    e0 = float(levels[0])
    return QuantumSpectrum(
        excitation_energies=levels[1 : 1 + n_levels] - e0,
        ground_state_energy=e0,
        truncation=n_max,
    )


def frame_equivalence_check(p: HopfieldParams, n_max: int = 40) -> float:
    """Max deviation of the lowest five levels between the two coupling frames.

    The position-position coupled Hamiltonian and its momentum-coupled
    counterpart (same ``g_qed`` and ``D``; coupling through i(b - b^dag))
    are isospectral before truncation; this diagonalizes both in the same
    truncated basis and reports the largest absolute level difference.
    """
    if n_max < 2:
        raise PolaritonError(f"n_max must be >= 2, got {n_max}")
    if (n_max + 1) ** 2 > 4096:
        raise PolaritonError(
            f"Fock matrix dimension {(n_max + 1) ** 2} exceeds the desk-scale bound of 4096 rows"
        )
    d = n_max + 1
    lv1 = _all_levels(_fock_hamiltonian(p, n_max), d)[:5]
    lv2 = _all_levels(_fock_hamiltonian(p, n_max, momentum_frame=True), d)[:5]
    return float(np.max(np.abs(lv1 - lv2)))
