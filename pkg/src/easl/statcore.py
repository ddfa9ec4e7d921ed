"""Numerically safe statistical kernels shared by every rating model.

Standard normal pdf/cdf and beta-distribution summaries (mode, variance).
The cdf is computed from ``math.erfc`` (machine precision, far below the
1e-12 budget the callers assume); the pdf/cdf ratio needed by the
surprisal factors is routed through the scaled complementary error
function so it stays finite deep in the lower tail where pdf and cdf both
underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import erfcx

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)

# Smallest positive subnormal double. std_normal_cdf floors at this value so
# the ratio pathways never see an exact zero for finite input.
_CDF_FLOOR = 5e-324


@dataclass(frozen=True)
class GaussianParams:
    """Latent Gaussian score: mean ``mu`` and variance ``sigma2`` (> 0)."""

    mu: float
    sigma2: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma2)):
            raise ValueError(f"non-finite Gaussian parameters: {self}")
        if self.sigma2 <= 0.0:
            raise ValueError(f"sigma2 must be > 0, got {self.sigma2}")


@dataclass(frozen=True)
class BetaParams:
    """Beta shape parameters. Both must be >= 1: items start at (1, 1) and
    every update rule only adds non-negative mass."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise ValueError(f"non-finite beta parameters: {self}")
        if self.alpha < 1.0 or self.beta < 1.0:
            raise ValueError(
                f"beta parameters must be >= 1, got ({self.alpha}, {self.beta})"
            )


def _require_finite(x: float, name: str = "x") -> float:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"{name} must be finite, got {x}")
    return x


def std_normal_pdf(x: float) -> float:
    """Density of the standard normal at ``x``."""
    x = _require_finite(x)
    return _INV_SQRT_2PI * math.exp(-0.5 * x * x)


def std_normal_cdf(x: float) -> float:
    """P(Z <= x) for a standard normal Z.

    Strictly positive for all finite inputs: values that underflow double
    precision are floored at the smallest subnormal so tail ratios never
    divide by zero.
    """
    x = _require_finite(x)
    val = 0.5 * math.erfc(-x / _SQRT2)
    if val <= 0.0:
        return _CDF_FLOOR
    return min(val, 1.0)


def pdf_over_cdf(x: float) -> float:
    """phi(x) / Phi(x), stable over the whole real line.

    Rewritten as sqrt(2/pi) / erfcx(-x / sqrt(2)) so the lower tail
    (where both pdf and cdf underflow) evaluates without 0/0; the result
    approaches -x there. For large positive x, erfcx overflows to inf and
    the ratio correctly flushes to 0.
    """
    x = _require_finite(x)
    return _SQRT_2_OVER_PI / float(erfcx(-x / _SQRT2))


def beta_mode(p: BetaParams) -> float:
    """Mode (alpha-1)/(alpha+beta-2) of a Beta(alpha, beta) with both >= 1.

    The 0/0 case alpha = beta = 1 (uniform distribution) is defined as 0.5,
    the midpoint every item starts from.
    """
    denom = p.alpha + p.beta - 2.0
    if denom == 0.0:
        return 0.5
    # The quotient is in [0, 1] exactly; clamp float rounding spill.
    return min(max((p.alpha - 1.0) / denom, 0.0), 1.0)


def beta_variance(p: BetaParams) -> float:
    """Variance of Beta(alpha, beta); in (0, 1/12] for alpha, beta >= 1."""
    s = p.alpha + p.beta
    return (p.alpha * p.beta) / (s * s * (s + 1.0))
