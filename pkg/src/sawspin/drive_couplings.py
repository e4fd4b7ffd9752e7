"""Drive coupling Hamiltonians and the transition amplitudes they induce.

Two drive mechanisms are modeled.  Dynamic strain couples quadratically to
the spin (Sx Sx, Sy Sy and the symmetrized shear product), which in ladder
form contains only S+S+, S-S-, S+S- and S-S+, so it connects m states with
Delta m = 0, +-2 and, between the labeled eigenstates of the static
Hamiltonian, drives only the alpha' - alpha = +-2 pairs.  An oscillating
magnetic field couples linearly (Delta m = 0, +-1) and can reach every
eigenstate pair once the zero-field splitting mixes the Sz basis.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .spin_core import LABELS, MU_B_MHZ_PER_MT, SPIN_MATRICES, EigenSolution, SpinMatrices


class DriveKind(enum.Enum):
    """Which mechanism drives a transition."""

    SAW = "saw"
    MW = "mw"


class EmptyRateMatrixError(RuntimeError):
    """All off-diagonal transition rates are exactly zero."""


@dataclass(frozen=True)
class StrainDrive:
    """Strain drive: coupling scale (MHz per unit strain) and amplitudes.

    The coupling constant is not known in absolute units, so rates carry
    an arbitrary overall scale; defaults give typical SAW strain levels.
    """

    xi_scale: float = 1.0
    u_xx: float = 1e-5
    u_yy: float = 1e-5
    u_xy: float = 1e-5

    def __post_init__(self) -> None:
        if self.xi_scale < 0:
            raise ValueError(f"xi_scale must be >= 0, got {self.xi_scale}")


@dataclass(frozen=True)
class MwDrive:
    """Oscillating magnetic field components in mT plus the g-factor."""

    b_x: float = 0.0
    b_y: float = 0.0
    b_z: float = 0.0
    g: float = 2.0


@dataclass
class TransitionRateMatrix:
    """|<E_a'|H'|E_a>|^2 for all label pairs, in MHz^2.

    Diagonal entries are kept for completeness but describe no transition.
    """

    rates: np.ndarray  # (4, 4), indexed in LABELS order

    def rate(self, alpha_from: str, alpha_to: str) -> float:
        return float(self.rates[LABELS.index(alpha_to), LABELS.index(alpha_from)])

    def max_rate(self) -> float:
        return float(self.rates.max())


def build_saw_hamiltonian(
    drive: StrainDrive,
    ops: SpinMatrices = SPIN_MATRICES,
    symmetrize: bool = True,
) -> np.ndarray:
    """Strain coupling H'/h = Xi*(u_xx SxSx + u_yy SySy + u_xy {Sx,Sy}).

    The shear term is symmetrized by default so the operator is Hermitian;
    symmetrize=False keeps the literal 2*u_xy*SxSy product (non-Hermitian,
    differing by i*u_xy*Sz) for equivalence checks.
    """
    sx, sy = ops.sx, ops.sy
    h = drive.u_xx * (sx @ sx) + drive.u_yy * (sy @ sy)
    if symmetrize:
        h = h + drive.u_xy * (sx @ sy + sy @ sx)
    else:
        h = h + 2.0 * drive.u_xy * (sx @ sy)
    return drive.xi_scale * h


def build_mw_hamiltonian(drive: MwDrive, ops: SpinMatrices = SPIN_MATRICES) -> np.ndarray:
    """Magnetic coupling H'/h = g*(mu_B/h)*(b_x Sx + b_y Sy + b_z Sz), MHz."""
    gm = drive.g * MU_B_MHZ_PER_MT
    return gm * (drive.b_x * ops.sx + drive.b_y * ops.sy + drive.b_z * ops.sz)


def transition_rates(eigs: EigenSolution, h_drive: np.ndarray) -> TransitionRateMatrix:
    """Squared drive matrix elements between all labeled eigenstates."""
    v = eigs.states
    amp = v.conj().T @ np.asarray(h_drive, dtype=complex) @ v
    return TransitionRateMatrix(rates=np.abs(amp) ** 2)


def allowed_transitions(
    rates: TransitionRateMatrix, rel_tol: float = 1e-12
) -> list[tuple[str, str]]:
    """Label pairs whose rate exceeds rel_tol times the largest
    off-diagonal rate, ordered low-m label first.

    Raises EmptyRateMatrixError when every off-diagonal rate is exactly
    zero (e.g. a vanishing drive).
    """
    if not 0.0 < rel_tol < 1.0:
        raise ValueError(f"rel_tol must be in (0, 1), got {rel_tol}")
    off = rates.rates.copy()
    np.fill_diagonal(off, 0.0)
    top = float(off.max())
    if top == 0.0:
        raise EmptyRateMatrixError("all off-diagonal transition rates are zero")
    pairs = []
    for j in range(4):  # from-state index
        for i in range(j):  # to-state above it in LABELS order (higher m)
            if off[i, j] > rel_tol * top:
                pairs.append((LABELS[j], LABELS[i]))
    return pairs
