"""Cross-check of the area characteristic function against Hofstadter-Harper powers.

With H1 the nearest-neighbour hop on a line of columns and H2 the diagonal
operator 2 cos(phi * x + nu), the diagonal element of the part of
(H1 + H2)^{2(n1+n2)} carrying exactly 2 n1 factors of H1 and 2 n2 factors of
H2, averaged over nu, equals sum_gamma exp(i phi Area(gamma)) over
Gamma(n1, n2).

The mixed power is extracted with a power-tagged state: amplitudes are
indexed by (column, #H1 applied, #H2 applied), so one sweep of
H1 + H2 collects every interleaving at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .walk_oracle import (
    AreaDistribution,
    SizeError,
    StepCounts,
    cardinal,
    char_function,
    enumerate_dp,
)

MAX_WALK_LENGTH = 16
MIXED_POWER_MAX_LENGTH = 32


@dataclass(frozen=True)
class FluxParams:
    phi: float
    nu: float | np.ndarray = 0.0

    def __post_init__(self):
        if not math.isfinite(self.phi) or not np.all(np.isfinite(self.nu)):
            raise ValueError("phi and nu must be finite")
        object.__setattr__(self, "phi", float(self.phi) % (2 * math.pi))


@dataclass
class MixedPowerState:
    """Amplitudes over (column, H1 count, H2 count), with optional leading batch axes.

    ``amp[..., j, p1, p2]`` belongs to column ``x_min + j``.
    """

    amp: np.ndarray
    x_min: int

    @classmethod
    def unit(cls, n1: int, n2: int, base: int = 0, margin: int | None = None,
             batch: tuple[int, ...] = ()) -> MixedPowerState:
        X = n1 + 1 if margin is None else margin
        amp = np.zeros(batch + (2 * X + 1, 2 * n1 + 1, 2 * n2 + 1), dtype=complex)
        amp[..., X, 0, 0] = 1.0
        return cls(amp, base - X)

    @property
    def columns(self) -> np.ndarray:
        return np.arange(self.x_min, self.x_min + self.amp.shape[-3])


def apply_h1(state: MixedPowerState) -> MixedPowerState:
    """Move each amplitude to both neighbouring columns and bump the H1 tag.

    Tags beyond the array are dropped (they belong to higher powers than
    the one being extracted).  Amplitude on the outermost columns would
    leave the truncated range, which is an error.
    """
    a = state.amp
    edge = np.concatenate([a[..., 0, :-1, :].ravel(), a[..., -1, :-1, :].ravel()])
    if np.any(edge != 0):
        raise SizeError("H1 would move amplitude past the column truncation")
    out = np.zeros_like(a)
    out[..., 1:, 1:, :] += a[..., :-1, :-1, :]
    out[..., :-1, 1:, :] += a[..., 1:, :-1, :]
    return MixedPowerState(out, state.x_min)


def apply_h2(state: MixedPowerState, fp: FluxParams) -> MixedPowerState:
    """Multiply by 2 cos(phi * x + nu) and bump the H2 tag."""
    a = state.amp
    nu = np.asarray(fp.nu, dtype=float)
    x = state.columns.astype(float)
    factor = 2.0 * np.cos(fp.phi * x + nu[..., None])  # (..., columns)
    out = np.zeros_like(a)
    out[..., :, :, 1:] = a[..., :, :, :-1] * factor[..., :, None, None]
    return MixedPowerState(out, state.x_min)


def _drop_unreturnable(state: MixedPowerState, base: int, n1: int) -> None:
    # an amplitude with p1 hops already used sits too far out if it cannot
    # get back to the base column with the 2 n1 - p1 hops left
    dist = np.abs(state.columns - base)[:, None]
    left = (2 * n1 - np.arange(2 * n1 + 1))[None, :]
    mask = dist > left
    state.amp[..., mask, :] = 0


def mixed_power_diag(n1: int, n2: int, fp: FluxParams, base: int = 0,
                     margin: int | None = None) -> complex | np.ndarray:
    """Diagonal element at column ``base`` of the (2 n1, 2 n2) mixed power of H1 + H2.

    Returns an array when ``fp.nu`` is an array (one value per nu).
    """
    if n1 < 0 or n2 < 0:
        raise ValueError("step counts must be nonnegative")
    if 2 * (n1 + n2) > MIXED_POWER_MAX_LENGTH:
        raise SizeError(f"mixed power limited to 2(n1+n2) <= {MIXED_POWER_MAX_LENGTH}")
    batch = np.shape(fp.nu)
    state = MixedPowerState.unit(n1, n2, base, margin, batch)
    X = (state.amp.shape[-3] - 1) // 2
    for _ in range(2 * (n1 + n2)):
        _drop_unreturnable(state, base, n1)
        h1 = apply_h1(state)
        h2 = apply_h2(state, fp)
        state = MixedPowerState(h1.amp + h2.amp, state.x_min)
    value = state.amp[..., X, 2 * n1, 2 * n2]
    return complex(value) if value.ndim == 0 else value


def nu_integral(n1: int, n2: int, phi: float, points: int | None = None,
                base: int = 0) -> complex:
    """Average of the mixed-power diagonal over nu on a uniform grid.

    The integrand is a trigonometric polynomial of degree <= 2 n2 in nu, so
    any grid with more than 2 n2 points gives the integral exactly (up to
    rounding).  Default is 2 (n1 + n2) + 2 points.
    """
    if points is None:
        points = 2 * (n1 + n2) + 2
    if points < 2 * n2 + 1:
        raise ValueError(f"need at least 2*n2+1 = {2 * n2 + 1} quadrature points, got {points}")
    nus = 2 * math.pi * np.arange(points) / points
    values = mixed_power_diag(n1, n2, FluxParams(phi, nus), base=base)
    return complex(np.mean(values))


@dataclass(frozen=True)
class HHSample:
    n1: int
    n2: int
    phi: float
    lhs: complex  # sum over walks of exp(i phi Area)
    rhs: complex  # nu-averaged mixed power
    tol: float

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol * cardinal(self.n1, self.n2)

    def to_json_obj(self) -> dict:
        return {
            "n1": self.n1,
            "n2": self.n2,
            "phi": self.phi,
            "lhs_re": self.lhs.real,
            "lhs_im": self.lhs.imag,
            "rhs_re": self.rhs.real,
            "rhs_im": self.rhs.imag,
            "residual": self.residual,
            "pass": self.passed,
        }


def check_identity(n1: int, n2: int, phi_samples: Sequence[float], tol: float = 1e-9,
                   dist: AreaDistribution | None = None,
                   points: int | None = None) -> list[HHSample]:
    """Compare both sides at each flux sample; pass when |lhs - rhs| <= tol * cardinal."""
    if 2 * (n1 + n2) > MAX_WALK_LENGTH:
        raise SizeError(f"identity check limited to 2(n1+n2) <= {MAX_WALK_LENGTH}")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if dist is None:
        dist = enumerate_dp(StepCounts(n1, n2))
    return [
        HHSample(n1, n2, float(phi), char_function(dist, phi),
                 nu_integral(n1, n2, phi, points), tol)
        for phi in phi_samples
    ]
