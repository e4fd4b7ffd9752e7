"""S=3/2 operator algebra, the uniaxial static spin Hamiltonian, and its
labeled eigensolutions.

The rotated frame has the static magnetic field along z and the crystal
c axis along y, so the zero-field splitting term goes with Sy^2 while the
Zeeman term goes with Sz.  All Hamiltonians are stored divided by Planck's
constant (MHz); magnetic fields are in mT.

In the Sz basis (ordered m = +3/2, +1/2, -1/2, -3/2) the static Hamiltonian
couples only m states differing by 2, so it is block diagonal in the pairs
{+3/2, -1/2} and {+1/2, -3/2}.  Each block is solved in closed form
(`analytic_energies`) and numerically (`diagonalize`); labels refer to the
adiabatically connected high-field eigenstate throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

# Bohr magneton over Planck's constant, MHz per mT.
MU_B_MHZ_PER_MT = 13.996245

# Sz basis order (descending m) and the label strings used everywhere.
LABELS = ("+3/2", "+1/2", "-1/2", "-3/2")
M_VALUES = {"+3/2": 1.5, "+1/2": 0.5, "-1/2": -0.5, "-3/2": -1.5}

# Invariant subspaces of the uniaxial Hamiltonian: (basis indices, labels).
# The first label of each block is the upper branch for every (D, B).
_BLOCKS = (((0, 2), ("+3/2", "-1/2")), ((1, 3), ("+1/2", "-3/2")))

_S = 1.5  # total spin


class DegenerateLabelingError(RuntimeError):
    """Two eigenvectors claim the same Sz label (exact level crossing)."""


@dataclass(frozen=True)
class SpinMatrices:
    """The 4x4 spin-3/2 operator set in the Sz basis, dimensionless units."""

    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray
    s_plus: np.ndarray
    s_minus: np.ndarray


def build_spin_matrices() -> SpinMatrices:
    """Construct Sx, Sy, Sz and the ladder operators for S=3/2.

    Basis order is m = +3/2, +1/2, -1/2, -3/2; ladder elements follow
    sqrt(S(S+1) - m(m+1)).
    """
    m = np.array([M_VALUES[lab] for lab in LABELS])
    sz = np.diag(m).astype(complex)
    s_plus = np.zeros((4, 4), dtype=complex)
    for col in range(1, 4):
        s_plus[col - 1, col] = math.sqrt(_S * (_S + 1) - m[col] * (m[col] + 1))
    s_minus = s_plus.conj().T
    sx = (s_plus + s_minus) / 2.0
    sy = (s_plus - s_minus) / 2.0j
    for arr in (sx, sy, sz, s_plus, s_minus):
        arr.flags.writeable = False
    return SpinMatrices(sx=sx, sy=sy, sz=sz, s_plus=s_plus, s_minus=s_minus)


# Shared read-only instance; operators are immutable so reuse is safe.
SPIN_MATRICES = build_spin_matrices()


@dataclass(frozen=True)
class HamiltonianParams:
    """Static Hamiltonian inputs: D/h in MHz, Lande g, field in mT.

    d_half is half the 2D doublet splitting (quoted values are 2D/h and
    must be halved before they end up here).
    """

    d_half: float
    g: float = 2.0
    b_field: float = 0.0

    def __post_init__(self) -> None:
        if self.b_field < 0:
            raise ValueError(f"b_field must be >= 0, got {self.b_field}")
        if self.g <= 0:
            raise ValueError(f"g must be > 0, got {self.g}")

    @property
    def gamma_b(self) -> float:
        """Zeeman frequency g*(mu_B/h)*B in MHz."""
        return self.g * MU_B_MHZ_PER_MT * self.b_field


class Mixing(NamedTuple):
    """Low-field mixing coefficients of the two doublet blocks.

    a mixes |+3/2> with |-1/2>, b mixes |+1/2> with |-3/2>; both vanish in
    the high-field limit and are signed so the upper states read
    |alpha> - coeff |partner>.
    """

    a: float
    b: float


@dataclass
class EigenSolution:
    """Labeled eigenenergies (MHz), eigenvectors (Sz basis), and mixing."""

    energies: dict[str, float]
    states: np.ndarray  # (4, 4) complex, column i belongs to LABELS[i]
    mixing: Mixing

    def energy(self, label: str) -> float:
        return self.energies[label]

    def state(self, label: str) -> np.ndarray:
        return self.states[:, LABELS.index(label)]


def build_h0(params: HamiltonianParams, ops: SpinMatrices = SPIN_MATRICES) -> np.ndarray:
    """Static Hamiltonian H0/h = d_half*(Sy^2 - 5/4) + gamma_b*Sz, in MHz."""
    sy2 = ops.sy @ ops.sy
    h = params.d_half * (sy2 - 1.25 * np.eye(4)) + params.gamma_b * ops.sz
    return h


def _energies_from_gamma(d_half, gamma_b):
    """Closed-form level energies; accepts scalars or numpy arrays.

    Returns a dict keyed by label.  The two radicals are
    R-+ = sqrt(D^2 -+ gamma_b*D + gamma_b^2) for the {+3/2,-1/2} and
    {+1/2,-3/2} blocks respectively.
    """
    d = np.asarray(d_half, dtype=float)
    x = np.asarray(gamma_b, dtype=float)
    r_minus = np.sqrt(d * d - x * d + x * x)
    r_plus = np.sqrt(d * d + x * d + x * x)
    return {
        "+3/2": x / 2.0 + r_minus,
        "+1/2": -x / 2.0 + r_plus,
        "-1/2": x / 2.0 - r_minus,
        "-3/2": -x / 2.0 - r_plus,
    }


def analytic_energies(params: HamiltonianParams) -> dict[str, float]:
    """Closed-form eigenenergies of build_h0, labeled, in MHz."""
    raw = _energies_from_gamma(params.d_half, params.gamma_b)
    return {lab: float(raw[lab]) for lab in LABELS}


def _check_hermitian(h0: np.ndarray) -> None:
    scale = max(float(np.abs(h0).max()), 1.0)
    if float(np.abs(h0 - h0.conj().T).max()) > 1e-10 * scale:
        raise ValueError("h0 is not Hermitian to 1e-10 relative")


def _off_block_magnitude(h0: np.ndarray) -> float:
    mask = np.zeros((4, 4), dtype=bool)
    for idx, _ in _BLOCKS:
        mask[np.ix_(idx, idx)] = True
    return float(np.abs(h0[~mask]).max())


def diagonalize(h0: np.ndarray, params: HamiltonianParams) -> EigenSolution:
    """Numerically diagonalize h0 and label the eigenpairs.

    For the uniaxial Hamiltonian the two 2x2 blocks are solved separately,
    which keeps the eigenvectors exactly supported on their block even when
    the cross-block doublets are quasi-degenerate at small field.  Within a
    block the branches never cross, so the upper eigenpair carries the
    block's high-m label (the adiabatically connected high-field state) and
    agrees with the closed-form energies for every (D, B).

    Inputs that are not block diagonal in the Sz basis fall back to a full
    eigendecomposition with plain maximum-overlap labeling.

    Raises DegenerateLabelingError at exact crossings, where the labels of
    a degenerate pair are not determined.
    """
    h0 = np.asarray(h0, dtype=complex)
    if h0.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {h0.shape}")
    _check_hermitian(h0)

    scale = max(float(np.abs(h0).max()), 1.0)
    if _off_block_magnitude(h0) > 1e-9 * scale:
        return _diagonalize_general(h0)

    energies: dict[str, float] = {}
    states = np.zeros((4, 4), dtype=complex)
    mixing_by_block: dict[str, float] = {}

    for idx, (label_hi, label_lo) in _BLOCKS:
        block = h0[np.ix_(idx, idx)]
        vals, vecs = np.linalg.eigh(block)
        if vals[1] - vals[0] == 0.0:
            raise DegenerateLabelingError(
                f"exact crossing in the {{{label_hi}, {label_lo}}} block at "
                f"energy {vals[0]:g} MHz; both eigenvectors are candidates "
                f"for either label"
            )
        for col, label in ((1, label_hi), (0, label_lo)):
            vec = vecs[:, col]
            # Fix the phase so the component on the label's own basis state
            # is real and positive (Appendix-style sign convention).
            own = idx.index(LABELS.index(label))
            ref = vec[own]
            if abs(ref) > 0:
                vec = vec * (ref.conjugate() / abs(ref))
            full = np.zeros(4, dtype=complex)
            full[list(idx)] = vec
            states[:, LABELS.index(label)] = full
            energies[label] = float(vals[col])
            if col == 1:
                # Upper state reads |label> - coeff |partner>.
                other = 1 - own
                coeff = -(vec[other] / vec[own]).real if abs(vec[own]) > 0 else math.inf
                mixing_by_block[label] = coeff

    return EigenSolution(
        energies=energies,
        states=states,
        mixing=Mixing(a=mixing_by_block["+3/2"], b=mixing_by_block["+1/2"]),
    )


def _diagonalize_general(h0: np.ndarray) -> EigenSolution:
    """Fallback for non-block-structured Hermitian input: label each
    eigenvector by its maximum squared overlap with the Sz basis."""
    vals, vecs = np.linalg.eigh(h0)
    claims: dict[int, int] = {}
    for k in range(4):
        best = int(np.argmax(np.abs(vecs[:, k]) ** 2))
        if best in claims:
            raise DegenerateLabelingError(
                f"eigenvectors {claims[best]} and {k} (energies "
                f"{vals[claims[best]]:g} and {vals[k]:g} MHz) both claim "
                f"label {LABELS[best]}"
            )
        claims[best] = k

    energies = {}
    states = np.zeros((4, 4), dtype=complex)
    for basis_idx, k in claims.items():
        label = LABELS[basis_idx]
        vec = vecs[:, k]
        ref = vec[basis_idx]
        if abs(ref) > 0:
            vec = vec * (ref.conjugate() / abs(ref))
        states[:, basis_idx] = vec
        energies[label] = float(vals[k])

    def _coeff(label: str, partner: str) -> float:
        v = states[:, LABELS.index(label)]
        num = v[LABELS.index(partner)]
        den = v[LABELS.index(label)]
        return -(num / den).real if abs(den) > 0 else math.inf

    return EigenSolution(
        energies=energies,
        states=states,
        mixing=Mixing(a=_coeff("+3/2", "-1/2"), b=_coeff("+1/2", "-3/2")),
    )
