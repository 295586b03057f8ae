"""Two-sided perturbation intervals for the largest C-eigenvalue.

For a piezoelectric-type tensor A perturbed to A-tilde = A + E, three
intervals are guaranteed to contain the largest C-eigenvalue of the
perturbed tensor:

* ``interval_21`` (additive): lambda_a +/- lambda_Cmax(E);
* ``interval_24`` (spectral): lambda_a +/- the spectral norm of the
  n x n^2 slice unfolding of E, which dominates lambda_Cmax(E);
* ``interval_25`` (quadratic shift): square roots of lambda_a^2 shifted
  by the extreme Z-values of the difference of the fourth-order
  companions of A-tilde and A.

The quadratic interval nests inside the additive one, which nests inside
the spectral one; ``check_nesting`` verifies that chain on a report.
The numeric suffixes match the column labels used in emitted tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    DimensionMismatch,
    NegativeInput,
    PropertyViolation,
    RadicandNegative,
    ValidationError,
)
from .spectral import SolverConfig, c_max_via_lift, z_max, z_min
from .tensors import lift, unfold_spectral_norm

_NEG_BAND = 1e-8  # numerical band inside which a negative radicand is clamped


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if self.lo > self.hi + 1e-12:
            raise PropertyViolation(f"interval endpoints out of order: [{self.lo}, {self.hi}]")

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, value, slack=0.0):
        return self.lo - slack <= value <= self.hi + slack

    def nests_in(self, outer, slack=0.0):
        """True when self sits inside `outer`, endpoint-wise with slack."""
        return self.lo >= outer.lo - slack and self.hi <= outer.hi + slack


def _require_nonneg(**named):
    for label, value in named.items():
        if value < 0.0:
            raise NegativeInput(f"{label} must be nonnegative, got {value!r}")


def bound_additive(lambda_a, lambda_e):
    """[lambda_a - lambda_e, lambda_a + lambda_e].

    The lower endpoint may be negative and is reported as-is.
    """
    lambda_a, lambda_e = float(lambda_a), float(lambda_e)
    _require_nonneg(lambda_a=lambda_a, lambda_e=lambda_e)
    return Interval(lambda_a - lambda_e, lambda_a + lambda_e)


def bound_spectral(lambda_a, norm_e2):
    """[lambda_a - ||E||_2, lambda_a + ||E||_2] for the slice unfolding norm."""
    lambda_a, norm_e2 = float(lambda_a), float(norm_e2)
    _require_nonneg(lambda_a=lambda_a, norm_e2=norm_e2)
    return Interval(lambda_a - norm_e2, lambda_a + norm_e2)


def bound_quadratic(lambda_a, zmin_diff, zmax_diff):
    """Square-root interval from the companion-difference Z-extremes.

    Radicands are clamped at zero only inside a -1e-8 numerical band; a
    radicand genuinely below that signals inconsistent inputs and raises.
    """
    lambda_a = float(lambda_a)
    zmin_diff, zmax_diff = float(zmin_diff), float(zmax_diff)
    _require_nonneg(lambda_a=lambda_a)
    if zmin_diff > zmax_diff:
        # tolerate solver rounding on degenerate differences, reject the rest
        if zmin_diff - zmax_diff > 1e-10 * max(1.0, abs(zmax_diff)):
            raise ValidationError(
                f"zmin_diff {zmin_diff!r} exceeds zmax_diff {zmax_diff!r}"
            )
        zmin_diff = zmax_diff
    sq = lambda_a * lambda_a
    endpoints = []
    for shift in (zmin_diff, zmax_diff):
        radicand = sq + shift
        if radicand < -_NEG_BAND:
            raise RadicandNegative(
                f"lambda_a^2 + {shift!r} = {radicand!r} is negative beyond tolerance"
            )
        endpoints.append(math.sqrt(max(radicand, 0.0)))
    return Interval(endpoints[0], endpoints[1])


@dataclass(frozen=True)
class BoundReport:
    """All scalars of one perturbation analysis plus the three intervals."""

    lambda_a: float
    lambda_e: float
    norm_e2: float
    zmin_diff: float
    zmax_diff: float
    interval_21: Interval
    interval_24: Interval
    interval_25: Interval

    def __post_init__(self):
        _require_nonneg(
            lambda_a=self.lambda_a, lambda_e=self.lambda_e, norm_e2=self.norm_e2
        )
        if self.lambda_a ** 2 + self.zmin_diff < -_NEG_BAND:
            raise RadicandNegative(
                "lambda_a^2 + zmin_diff is negative beyond tolerance"
            )


def full_report(A, E, cfg=SolverConfig()):
    """Assemble the three intervals for the perturbation A -> A + E.

    Solves for lambda_Cmax of A and of E, the unfolding norm of E, and
    the Z-extremes of the companion difference lift(A+E) - lift(A).
    """
    if A.n != E.n:
        raise DimensionMismatch(f"dimension mismatch: A has n={A.n}, E has n={E.n}")
    a_tilde = A + E
    lambda_a = c_max_via_lift(A, cfg).value
    lambda_e = c_max_via_lift(E, cfg).value
    norm_e2 = unfold_spectral_norm(E)
    diff = lift(a_tilde) - lift(A)
    zmin_diff = z_min(diff, cfg).value
    zmax_diff = z_max(diff, cfg).value
    return BoundReport(
        lambda_a=lambda_a,
        lambda_e=lambda_e,
        norm_e2=norm_e2,
        zmin_diff=zmin_diff,
        zmax_diff=zmax_diff,
        interval_21=bound_additive(lambda_a, lambda_e),
        interval_24=bound_spectral(lambda_a, norm_e2),
        interval_25=bound_quadratic(lambda_a, zmin_diff, zmax_diff),
    )


def check_nesting(r, slack=1e-8):
    """True iff interval_25 is inside interval_21 is inside interval_24."""
    return r.interval_25.nests_in(r.interval_21, slack) and r.interval_21.nests_in(
        r.interval_24, slack
    )
