"""Parameter registry for the V1 and V2 silicon-vacancy centers.

Each center/state combination carries a linear temperature law for the
zero-field splitting 2D/h (MHz), a g-factor, optical-cycle population
weights per spin sublevel, and per-transition signs for rendering ODMR
peaks versus dips.

Built-in laws (2D/h in MHz, T in K):

    V2 GS:  70                      (temperature independent)
    V2 ES:  1060   - 2.1   * T
    V1 GS:  4                       (temperature independence assumed)
    V1 ES:  986.28 - 0.254 * T

The registry can be overridden from a TOML file; see ``load_registry``.
"""

from __future__ import annotations

import sys
import warnings
from dataclasses import dataclass, field

if sys.version_info >= (3, 11):
    import tomllib as _toml
else:
    import tomli as _toml

from .spin_core import M_VALUES

CENTER_NAMES = ("V1", "V2")
STATE_NAMES = ("GS", "ES")

# TOML keys for the four sublevel weights (labels are not valid bare keys).
_WEIGHT_KEYS = {"+3/2": "w_p32", "+1/2": "w_p12", "-1/2": "w_m12", "-3/2": "w_m32"}

_LABELS = tuple(_WEIGHT_KEYS)


class NegativeSplittingError(ValueError):
    """A splitting law evaluated to a non-positive 2D/h."""


class ExtrapolationWarning(UserWarning):
    """Temperature lies outside the law's validated range."""


@dataclass(frozen=True)
class ZfsLaw:
    """Linear law for the doublet splitting: 2D/h = c0 + c1*T (MHz)."""

    c0: float
    c1: float = 0.0
    valid_range: tuple[float, float] = (4.0, 320.0)

    def __post_init__(self) -> None:
        lo, hi = self.valid_range
        if not lo < hi:
            raise ValueError(f"empty valid_range {self.valid_range}")
        for t in (lo, hi):
            if self.c0 + self.c1 * t <= 0:
                raise ValueError(
                    f"splitting law {self.c0} + {self.c1}*T is non-positive "
                    f"at T={t} K inside its valid range"
                )


def canonical_pair(alpha_a: str, alpha_b: str) -> tuple[str, str]:
    """Order a transition pair low-m label first (pairs are unordered)."""
    if M_VALUES[alpha_a] <= M_VALUES[alpha_b]:
        return (alpha_a, alpha_b)
    return (alpha_b, alpha_a)


def _default_weights(state: str, favored: float = 0.35) -> dict[str, float]:
    if not 0.0 <= favored <= 0.5:
        raise ValueError(f"favored weight must be in [0, 0.5], got {favored}")
    other = 0.5 - favored
    if state == "ES":
        return {"+3/2": other, "+1/2": favored, "-1/2": favored, "-3/2": other}
    return {"+3/2": favored, "+1/2": other, "-1/2": other, "-3/2": favored}


@dataclass
class CenterModel:
    """One center/state: splitting law, g, populations, ODMR signs."""

    name: str
    state: str
    zfs: ZfsLaw
    g: float = 2.0
    population_weights: dict[str, float] | None = None
    odmr_sign: dict[tuple[str, str], int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.name not in CENTER_NAMES:
            raise ValueError(f"unknown center {self.name!r}")
        if self.state not in STATE_NAMES:
            raise ValueError(f"unknown state {self.state!r}")
        if self.population_weights is None:
            self.population_weights = _default_weights(self.state)
        missing = set(_LABELS) - set(self.population_weights)
        if missing:
            raise ValueError(f"population_weights missing labels {sorted(missing)}")
        if any(w < 0 for w in self.population_weights.values()):
            raise ValueError("population weights must be >= 0")
        total = sum(self.population_weights.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"population weights sum to {total}, expected 1")

    @property
    def key(self) -> str:
        return f"{self.name}.{self.state}"

    def sign_for(self, alpha_from: str, alpha_to: str) -> int:
        """ODMR sign for a transition pair; dips (-1) unless overridden."""
        return self.odmr_sign.get(canonical_pair(alpha_from, alpha_to), -1)


def zfs_at(model: CenterModel, temperature: float) -> float:
    """Evaluate the 2D/h splitting law (MHz) at a temperature (K).

    Warns with ExtrapolationWarning outside the law's validated range and
    raises NegativeSplittingError if the law evaluates to <= 0 there.
    """
    lo, hi = model.zfs.valid_range
    if not lo <= temperature <= hi:
        warnings.warn(
            f"{model.key}: T={temperature} K is outside the validated "
            f"range [{lo}, {hi}] K; extrapolating",
            ExtrapolationWarning,
            stacklevel=2,
        )
    value = model.zfs.c0 + model.zfs.c1 * temperature
    if value <= 0:
        raise NegativeSplittingError(
            f"{model.key}: splitting law gives {value} MHz at T={temperature} K"
        )
    return value


def default_population_weights(model: CenterModel, favored: float = 0.35) -> dict[str, float]:
    """Optical-cycle occupancies: the favored doublet of the state gets
    `favored` per sublevel, the other doublet the remainder (sum is 1).

    Excited states favor m = +-1/2, ground states m = +-3/2; favored=0.25
    reproduces the unpolarized limit.
    """
    return _default_weights(model.state, favored)


def builtin_registry() -> dict[str, CenterModel]:
    """Fresh registry with the built-in center parameters."""
    models = [
        CenterModel("V2", "GS", ZfsLaw(70.0, 0.0)),
        CenterModel("V2", "ES", ZfsLaw(1060.0, -2.1)),
        CenterModel("V1", "GS", ZfsLaw(4.0, 0.0)),
        CenterModel("V1", "ES", ZfsLaw(986.28, -0.254)),
    ]
    return {m.key: m for m in models}


def load_registry(path, base: dict[str, CenterModel] | None = None) -> dict[str, CenterModel]:
    """Load center models from a TOML file, overriding `base` entries.

    Expected layout (keys other than c0_mhz optional):

        [V1.ES]
        c0_mhz = 986.28
        c1_mhz_per_k = -0.254
        g = 2.0
        t_min_k = 4.0
        t_max_k = 320.0
        w_p32 = 0.15
        w_p12 = 0.35
        w_m12 = 0.35
        w_m32 = 0.15
    """
    registry = dict(base if base is not None else builtin_registry())
    with open(path, "rb") as fh:
        data = _toml.load(fh)
    for name, states in data.items():
        if name not in CENTER_NAMES:
            raise ValueError(f"{path}: unknown center section [{name}]")
        for state, entry in states.items():
            if state not in STATE_NAMES:
                raise ValueError(f"{path}: unknown state section [{name}.{state}]")
            if "c0_mhz" not in entry:
                raise ValueError(f"{path}: [{name}.{state}] is missing c0_mhz")
            old = registry.get(f"{name}.{state}")
            law = ZfsLaw(
                c0=float(entry["c0_mhz"]),
                c1=float(entry.get("c1_mhz_per_k", 0.0)),
                valid_range=(
                    float(entry.get("t_min_k", 4.0)),
                    float(entry.get("t_max_k", 320.0)),
                ),
            )
            weights = None
            if any(k in entry for k in _WEIGHT_KEYS.values()):
                weights = {
                    lab: float(entry[key]) for lab, key in _WEIGHT_KEYS.items()
                }
            elif old is not None:
                weights = dict(old.population_weights)
            registry[f"{name}.{state}"] = CenterModel(
                name=name,
                state=state,
                zfs=law,
                g=float(entry.get("g", 2.0)),
                population_weights=weights,
                odmr_sign=dict(old.odmr_sign) if old is not None else {},
            )
    return registry


def save_registry(registry: dict[str, CenterModel], path) -> None:
    """Write a registry in the load_registry TOML layout.

    Floats are written with repr() so a save/load round trip reproduces
    the coefficients bit for bit.
    """
    lines = []
    for key in sorted(registry):
        model = registry[key]
        lines.append(f"[{model.name}.{model.state}]")
        lines.append(f"c0_mhz = {model.zfs.c0!r}")
        lines.append(f"c1_mhz_per_k = {model.zfs.c1!r}")
        lines.append(f"t_min_k = {model.zfs.valid_range[0]!r}")
        lines.append(f"t_max_k = {model.zfs.valid_range[1]!r}")
        lines.append(f"g = {model.g!r}")
        for lab, tomlkey in _WEIGHT_KEYS.items():
            lines.append(f"{tomlkey} = {model.population_weights[lab]!r}")
        lines.append("")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines))
