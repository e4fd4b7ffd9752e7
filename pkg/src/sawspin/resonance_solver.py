"""Resonant magnetic fields: where a spin transition matches the drive.

For a given center, temperature and drive frequency the solver scans the
transition frequency on a uniform field grid, brackets every sign change
and refines each bracket with Brent's method.  The Delta alpha = +-2 pairs
also admit a closed-form quadratic solution (their frequencies are
2*sqrt(D^2 -+ gamma_b*D + gamma_b^2)), which is always computed as a
cross-check against the root finder.

Note the {-1/2, +3/2} pair frequency is not monotonic in field: it falls
from 2D to a minimum sqrt(3)*D at gamma_b = D/2 before rising, so when the
drive lies between those values the pair resonates at two fields (the
origin of the low-field branch of the excited-state resonance).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import drive_couplings as dc
from .center_models import CenterModel, canonical_pair, zfs_at
from .spin_core import (
    LABELS,
    M_VALUES,
    MU_B_MHZ_PER_MT,
    HamiltonianParams,
    _energies_from_gamma,
    build_h0,
    diagonalize,
)

log = logging.getLogger(__name__)

DEFAULT_DRIVE_FREQ_MHZ = 920.0
DEFAULT_GRID_STEP_MT = 0.05
FREQ_TOL_MHZ = 1e-4
CROSS_CHECK_TOL_MT = 1e-6


class CrossCheckError(RuntimeError):
    """Root finder and closed-form solution disagree beyond tolerance."""


@dataclass(frozen=True)
class TransitionSpec:
    """An eigenstate pair and the mechanism meant to drive it."""

    alpha_from: str
    alpha_to: str
    drive_kind: dc.DriveKind = dc.DriveKind.SAW

    def __post_init__(self) -> None:
        for lab in (self.alpha_from, self.alpha_to):
            if lab not in LABELS:
                raise ValueError(f"unknown label {lab!r}")
        if self.alpha_from == self.alpha_to:
            raise ValueError("alpha_from and alpha_to must differ")

    @property
    def delta_m(self) -> float:
        return abs(M_VALUES[self.alpha_to] - M_VALUES[self.alpha_from])

    @property
    def pair(self) -> tuple[str, str]:
        return canonical_pair(self.alpha_from, self.alpha_to)


def default_saw_transitions() -> list[TransitionSpec]:
    """The two strain-allowed Delta alpha = +-2 pairs."""
    return [
        TransitionSpec("-1/2", "+3/2", dc.DriveKind.SAW),
        TransitionSpec("-3/2", "+1/2", dc.DriveKind.SAW),
    ]


def default_mw_transitions() -> list[TransitionSpec]:
    """The three adjacent Delta alpha = +-1 pairs."""
    return [
        TransitionSpec("+1/2", "+3/2", dc.DriveKind.MW),
        TransitionSpec("-1/2", "+1/2", dc.DriveKind.MW),
        TransitionSpec("-3/2", "-1/2", dc.DriveKind.MW),
    ]


@dataclass
class ResonanceLine:
    """One resonance: field, transition, drive amplitude and ODMR sign."""

    b_res: float
    transition: TransitionSpec
    center: CenterModel
    temperature: float
    relative_amplitude: float
    sign: int


def _pair_frequency(d_half: float, gamma_b, spec: TransitionSpec):
    """|E_to - E_from| in MHz; gamma_b may be a scalar or an array."""
    energies = _energies_from_gamma(d_half, gamma_b)
    return np.abs(energies[spec.alpha_to] - energies[spec.alpha_from])


def transition_frequency(
    center: CenterModel, temperature: float, b_field: float, spec: TransitionSpec
) -> float:
    """Transition frequency (MHz) at one field, positive by convention."""
    d_half = zfs_at(center, temperature) / 2.0
    gamma_b = center.g * MU_B_MHZ_PER_MT * b_field
    return float(_pair_frequency(d_half, gamma_b, spec))


def frequency_bounds(
    center: CenterModel,
    temperature: float,
    spec: TransitionSpec,
    b_max: float,
    grid_step: float = DEFAULT_GRID_STEP_MT,
) -> tuple[float, float]:
    """Min/max transition frequency over [0, b_max], for diagnostics."""
    d_half = zfs_at(center, temperature) / 2.0
    gamma = center.g * MU_B_MHZ_PER_MT
    grid = _field_grid(b_max, grid_step)
    freqs = _pair_frequency(d_half, gamma * grid, spec)
    return float(freqs.min()), float(freqs.max())


def _field_grid(b_max: float, step: float) -> np.ndarray:
    n = int(math.ceil(b_max / step)) + 1
    grid = np.linspace(0.0, step * (n - 1), n)
    return np.minimum(grid, b_max)


def _closed_form_fields(
    d_half: float, gamma: float, f_drive: float, spec: TransitionSpec, b_max: float
) -> list[float]:
    """Quadratic roots for the Delta alpha = +-2 pairs.

    The pair frequency is 2*sqrt(x^2 + s*D*x + D^2) with x = gamma_b and
    s = -1 for {-1/2,+3/2}, +1 for {+1/2,-3/2}; setting it to f gives
    x^2 + s*D*x + D^2 - (f/2)^2 = 0.
    """
    s = -1.0 if spec.pair == ("-1/2", "+3/2") else 1.0
    disc = f_drive * f_drive - 3.0 * d_half * d_half
    if disc < 0:
        return []
    root = math.sqrt(disc)
    fields = []
    for x in ((-s * d_half - root) / 2.0, (-s * d_half + root) / 2.0):
        b = x / gamma
        if 0.0 <= b <= b_max:
            fields.append(b)
    return sorted(set(fields))


def _line_amplitude(
    center: CenterModel,
    d_half: float,
    b_res: float,
    spec: TransitionSpec,
    strain: dc.StrainDrive,
    mw: dc.MwDrive,
) -> float:
    """Drive rate at the resonant field times the population contrast."""
    params = HamiltonianParams(d_half=d_half, g=center.g, b_field=b_res)
    eigs = diagonalize(build_h0(params), params)
    if spec.drive_kind is dc.DriveKind.SAW:
        h_drive = dc.build_saw_hamiltonian(strain)
    else:
        h_drive = dc.build_mw_hamiltonian(mw)
    rate = dc.transition_rates(eigs, h_drive).rate(spec.alpha_from, spec.alpha_to)
    contrast = abs(
        center.population_weights[spec.alpha_from]
        - center.population_weights[spec.alpha_to]
    )
    return rate * contrast


def find_resonant_fields(
    center: CenterModel,
    temperature: float,
    f_drive: float,
    spec: TransitionSpec,
    b_max: float,
    grid_step: float = DEFAULT_GRID_STEP_MT,
    strain: dc.StrainDrive | None = None,
    mw: dc.MwDrive | None = None,
) -> list[ResonanceLine]:
    """All fields in [0, b_max] where the transition matches f_drive.

    Sign changes of f(B) - f_drive on the scan grid are refined with
    Brent's method to |delta f| < 1e-4 MHz.  For Delta alpha = +-2 pairs
    the closed-form quadratic is cross-checked to 1e-6 mT (CrossCheckError
    on disagreement).  An empty list means no resonance; the frequency
    range scanned is logged for diagnosis.
    """
    if f_drive <= 0:
        raise ValueError(f"f_drive must be > 0, got {f_drive}")
    if b_max <= 0:
        raise ValueError(f"b_max must be > 0, got {b_max}")

    d_half = zfs_at(center, temperature) / 2.0
    gamma = center.g * MU_B_MHZ_PER_MT
    grid = _field_grid(b_max, grid_step)
    resid = _pair_frequency(d_half, gamma * grid, spec) - f_drive

    roots: list[float] = []
    for i in np.flatnonzero(resid == 0.0):
        roots.append(float(grid[i]))
    for i in np.flatnonzero(resid[:-1] * resid[1:] < 0.0):
        b_root = brentq(
            lambda b: float(_pair_frequency(d_half, gamma * b, spec)) - f_drive,
            float(grid[i]),
            float(grid[i + 1]),
            xtol=1e-12,
            rtol=8.9e-16,
        )
        roots.append(float(b_root))
    roots = sorted(set(roots))

    for b in roots:
        err = abs(float(_pair_frequency(d_half, gamma * b, spec)) - f_drive)
        if err > FREQ_TOL_MHZ:
            raise CrossCheckError(
                f"refined root at {b} mT misses the drive by {err} MHz"
            )

    if spec.delta_m == 2.0:
        expected = _closed_form_fields(d_half, gamma, f_drive, spec, b_max)
        if len(expected) != len(roots) or any(
            abs(a - b) > CROSS_CHECK_TOL_MT for a, b in zip(expected, roots)
        ):
            raise CrossCheckError(
                f"{center.key} {spec.alpha_from}->{spec.alpha_to}: root finder "
                f"found {roots} mT but the closed form gives {expected} mT"
            )

    if not roots:
        fmin, fmax = float(np.min(resid) + f_drive), float(np.max(resid) + f_drive)
        log.info(
            "%s %s->%s at T=%g K: no resonance with %g MHz in [0, %g] mT "
            "(transition frequency spans %.6g..%.6g MHz)",
            center.key, spec.alpha_from, spec.alpha_to, temperature,
            f_drive, b_max, fmin, fmax,
        )
        return []

    strain = strain if strain is not None else dc.StrainDrive()
    mw = mw if mw is not None else dc.MwDrive(b_x=1e-3, g=center.g)
    lines = []
    for b in roots:
        lines.append(
            ResonanceLine(
                b_res=b,
                transition=spec,
                center=center,
                temperature=temperature,
                relative_amplitude=_line_amplitude(center, d_half, b, spec, strain, mw),
                sign=center.sign_for(spec.alpha_from, spec.alpha_to),
            )
        )
    return lines


@dataclass
class SweepEntry:
    """One temperature/transition combination; line is None when absent."""

    temperature: float
    spec: TransitionSpec
    line: ResonanceLine | None


def temperature_sweep(
    center: CenterModel,
    f_drive: float,
    specs: list[TransitionSpec],
    t_range: tuple[float, float],
    t_step: float,
    b_max: float = 50.0,
    grid_step: float = DEFAULT_GRID_STEP_MT,
) -> list[SweepEntry]:
    """Resonance fields on an inclusive temperature grid.

    Output is ordered by (temperature, spec, field); combinations with no
    resonance are kept as explicit absent entries.
    """
    t_lo, t_hi = t_range
    lo, hi = center.zfs.valid_range
    if t_lo > t_hi:
        raise ValueError(f"empty temperature range {t_range}")
    if t_lo < lo or t_hi > hi:
        raise ValueError(
            f"sweep range {t_range} K exceeds {center.key} valid range [{lo}, {hi}] K"
        )
    if t_step <= 0:
        raise ValueError(f"t_step must be > 0, got {t_step}")

    temperatures = []
    t = t_lo
    while t <= t_hi + 1e-9:
        temperatures.append(min(t, t_hi))
        t += t_step

    entries: list[SweepEntry] = []
    for temp in temperatures:
        for spec in specs:
            lines = find_resonant_fields(
                center, temp, f_drive, spec, b_max, grid_step=grid_step
            )
            if lines:
                entries.extend(SweepEntry(temp, spec, ln) for ln in lines)
            else:
                entries.append(SweepEntry(temp, spec, None))
    return entries
