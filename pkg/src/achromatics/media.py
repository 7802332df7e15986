"""Refraction ratios per spectral line and the two competing dispersion laws.

A *ratio of refraction* ``m`` is the index of a medium relative to air for one
kind of ray. Only the mean ratio of most media is measured; the ratio for the
red (least refrangible) or violet (most refrangible) rays is derived from a
reference medium whose pair ``(m, M)`` is known, using either

* the linear law ``(m - M) / (m - 1) = (n - N) / (n - 1)``, or
* the power law ``n = m**a``, ``N = M**a``.

Functions here accept ``fractions.Fraction`` as well as ``float``. The linear
law is rational, so rational inputs give exact rational outputs. Anything that
goes through a logarithm comes back as a 64-bit float.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, NamedTuple, Optional, Union

from .errors import DegenerateReference, MissingLineData, OutOfDomain

Real = Union[int, float, Fraction]

LINEAR = "linear"
POWER = "power"
LAW_KINDS = (LINEAR, POWER)


class SpectralLine(enum.IntEnum):
    """The three ray kinds, ordered by refrangibility."""

    RED = 0
    MEAN = 1
    VIOLET = 2

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, text: str) -> "SpectralLine":
        aliases = {
            "red": cls.RED,
            "least_refrangible": cls.RED,
            "mean": cls.MEAN,
            "violet": cls.VIOLET,
            "most_refrangible": cls.VIOLET,
        }
        try:
            return aliases[text.strip().lower()]
        except KeyError:
            raise ValueError(f"unknown spectral line {text!r}") from None


@dataclass(frozen=True)
class RefractionPair:
    """Measured ratios of one medium: mean rays and one other line."""

    mean_ratio: Real
    line_ratio: Real
    line: SpectralLine = SpectralLine.RED

    def __post_init__(self):
        if self.mean_ratio <= 0 or self.line_ratio <= 0:
            raise OutOfDomain("refraction ratios must be positive")
        if self.line is SpectralLine.MEAN:
            raise ValueError("the non-mean member of a pair cannot be the mean line")


@dataclass(frozen=True)
class OpticalMedium:
    """A named medium.

    ``explicit_lines`` holds measured per-line ratios; when present they take
    precedence over any dispersion law.
    """

    name: str
    mean_ratio: Real
    explicit_lines: Mapping[SpectralLine, Real] = field(default_factory=dict)

    def __post_init__(self):
        if self.mean_ratio <= 0:
            raise OutOfDomain(f"medium {self.name!r}: mean ratio must be positive")
        for line, value in self.explicit_lines.items():
            if value <= 0:
                raise OutOfDomain(f"medium {self.name!r}: {line.label} ratio must be positive")
        red = self.explicit_lines.get(SpectralLine.RED)
        if red is not None and red > self.mean_ratio:
            raise ValueError(f"medium {self.name!r}: red ratio exceeds the mean ratio")

    def pair(self, line: SpectralLine = SpectralLine.RED) -> RefractionPair:
        """The measured (mean, line) pair, for anchoring a law to this medium."""
        if line not in self.explicit_lines:
            raise MissingLineData(f"medium {self.name!r} has no measured {line.label} ratio")
        return RefractionPair(self.mean_ratio, self.explicit_lines[line], line)


AIR = OpticalMedium("air", 1)


@dataclass(frozen=True)
class DispersionLaw:
    """A derivation rule anchored to a reference medium's measured pair(s).

    ``reference`` anchors the red line. ``violet_reference`` is optional and
    is used the same way for the violet line.
    """

    kind: str
    reference: RefractionPair
    violet_reference: Optional[RefractionPair] = None

    def __post_init__(self):
        if self.kind not in LAW_KINDS:
            raise ValueError(f"unknown dispersion law {self.kind!r}")
        for ref in (self.reference, self.violet_reference):
            if ref is not None and ref.mean_ratio == 1:
                raise DegenerateReference("reference mean ratio must differ from 1")

    @classmethod
    def anchored_to(cls, kind: str, medium: OpticalMedium) -> "DispersionLaw":
        """Build a law from a medium's measured red (and, if any, violet) ratio."""
        violet = None
        if SpectralLine.VIOLET in medium.explicit_lines:
            violet = medium.pair(SpectralLine.VIOLET)
        return cls(kind, medium.pair(SpectralLine.RED), violet)

    def reference_for(self, line: SpectralLine) -> RefractionPair:
        if line is SpectralLine.RED:
            return self.reference
        if line is SpectralLine.VIOLET and self.violet_reference is not None:
            return self.violet_reference
        raise MissingLineData(f"{self.kind} law has no reference for the {line.label} line")

    def derive(self, target_mean: Real, line: SpectralLine) -> Real:
        """Ratio for ``line`` in a medium whose mean ratio is ``target_mean``."""
        if line is SpectralLine.MEAN:
            return target_mean
        ref = self.reference_for(line)
        if self.kind == LINEAR:
            return derive_line_ratio_linear(target_mean, ref)
        return derive_line_ratio_power(target_mean, ref).ratio


class PowerDerivation(NamedTuple):
    ratio: float
    exponent: float


def derive_line_ratio_linear(target_mean: Real, reference: RefractionPair) -> Real:
    """Line ratio of a medium under the linear proportion.

    Solves ``(m - 1) : (n - 1) :: (m - M) : (n - N)`` for ``N`` given the
    reference pair ``(m, M)`` and the target mean ratio ``n``.

    >>> from fractions import Fraction as F
    >>> derive_line_ratio_linear(F(4, 3), RefractionPair(F(31, 20), F(77, 50)))
    Fraction(73, 55)
    """
    m, big_m = reference.mean_ratio, reference.line_ratio
    if m == 1:
        raise DegenerateReference("linear law needs a reference mean ratio other than 1")
    return target_mean - (target_mean - 1) * (m - big_m) / (m - 1)


def power_exponent(target_mean: Real, reference_mean: Real) -> float:
    """Exponent ``a`` with ``target_mean == reference_mean ** a``."""
    if reference_mean == 1:
        raise DegenerateReference("power law needs a reference mean ratio other than 1")
    if target_mean < 1:
        raise OutOfDomain(f"target mean ratio {target_mean} is below 1")
    if target_mean == reference_mean:
        return 1.0
    return math.log(target_mean) / math.log(reference_mean)


def derive_line_ratio_power(target_mean: Real, reference: RefractionPair) -> PowerDerivation:
    """Line ratio of a medium under the power law ``N = M ** a``.

    Returns the ratio together with the exponent ``a = log(n) / log(m)``.
    """
    a = power_exponent(target_mean, reference.mean_ratio)
    if a == 1.0:
        return PowerDerivation(float(reference.line_ratio), a)
    return PowerDerivation(float(reference.line_ratio) ** a, a)


class RatioGap(NamedTuple):
    ratio: float
    limit: float


def euler_ratio_gap(mean_ratio: Real, alpha: Real) -> RatioGap:
    """Compare ``(m - m**alpha) / (m - 1)`` against its small-dispersion limit.

    With ``m = 1 + w`` the ratio tends to ``1 - alpha`` and the gap is
    ``O(w)``. The numerator is evaluated as ``w - expm1(alpha * log1p(w))``
    so it keeps full precision for ``w`` down to 1e-8 and below.
    """
    if mean_ratio <= 1:
        raise OutOfDomain(f"mean ratio {mean_ratio} must exceed 1")
    if not 0 < alpha <= 1:
        raise OutOfDomain(f"alpha {alpha} must lie in (0, 1]")
    w = mean_ratio - 1
    if alpha == 1:
        return RatioGap(0.0, 0.0)
    # w is exact for Fraction input; for floats it carries the representation error of m
    wf = float(w)
    ratio = (wf - math.expm1(float(alpha) * math.log1p(wf))) / wf
    return RatioGap(ratio, 1.0 - float(alpha))


@dataclass(frozen=True)
class ChainSpec:
    step_red: Real
    step_violet: Real
    steps: int

    def __post_init__(self):
        if self.steps < 0 or int(self.steps) != self.steps:
            raise ValueError("chain steps must be a non-negative integer")
        if self.step_red <= 0 or self.step_violet <= 0:
            raise OutOfDomain("per-step ratios must be positive")


def chain_media(spec: ChainSpec) -> tuple:
    """Composite (red, violet) ratios across ``spec.steps`` identical passages.

    Each passage multiplies the ratio, so the composite is ``(r**k, v**k)``.
    """
    k = int(spec.steps)
    return spec.step_red ** k, spec.step_violet ** k


def line_ratio(medium: OpticalMedium, line: SpectralLine, law: Optional[DispersionLaw]) -> Real:
    """Ratio of ``medium`` for ``line``.

    The mean line always returns ``medium.mean_ratio``. Otherwise an explicit
    measured value wins, and failing that the law derives one.
    """
    if line is SpectralLine.MEAN:
        return medium.mean_ratio
    if line in medium.explicit_lines:
        return medium.explicit_lines[line]
    if medium.mean_ratio == 1:
        return medium.mean_ratio
    if law is None:
        raise MissingLineData(
            f"medium {medium.name!r} has no {line.label} ratio and no dispersion law was given"
        )
    return law.derive(medium.mean_ratio, line)


def reference_glass() -> OpticalMedium:
    """Crown glass as measured in 1747: mean 31/20, red 77/50."""
    return OpticalMedium("glass", Fraction(31, 20), {SpectralLine.RED: Fraction(77, 50)})


def reference_water() -> OpticalMedium:
    """Water, mean 4/3; its red ratio is left to the chosen law."""
    return OpticalMedium("water", Fraction(4, 3))
