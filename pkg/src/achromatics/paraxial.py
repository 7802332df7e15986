"""First-order optics of the four-surface glass/water/glass objective.

Sign conventions used throughout:

* curvature ``c = 1/R`` is positive when the centre of curvature lies on the
  image side; a flat face has ``c = 0``;
* the object distance ``a`` is entered as a positive number for a real object
  in front of the system, and ``math.inf`` for a distant object;
* image distances are positive on the image side, measured from the last
  vertex.

A zero-power system therefore images an object at distance ``a`` to
``-a``: the image sits on the object itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import AfocalOrConjugateAtInfinity
from .media import AIR, DispersionLaw, OpticalMedium, Real, SpectralLine, line_ratio

INFINITY = math.inf


def inverse_distance(distance: Real) -> Real:
    """``1/distance`` with the infinite distance mapped to an exact 0."""
    if distance == INFINITY:
        return 0
    if distance == 0:
        raise ValueError("object distance must be nonzero")
    return 1 / distance


@dataclass(frozen=True)
class CompoundObjective:
    """Curvatures of the four faces air|glass|water|glass|air."""

    c_f: Real
    c_g: Real
    c_h: Real
    c_k: Real
    glass: OpticalMedium
    water: OpticalMedium

    def __post_init__(self):
        for name in ("c_f", "c_g", "c_h", "c_k"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.glass.mean_ratio < 1 or self.water.mean_ratio < 1:
            raise ValueError("media mean ratios must be at least 1")

    @property
    def curvatures(self) -> tuple:
        return (self.c_f, self.c_g, self.c_h, self.c_k)

    def scaled(self, factor: Real) -> "CompoundObjective":
        return CompoundObjective(
            self.c_f * factor, self.c_g * factor, self.c_h * factor, self.c_k * factor,
            self.glass, self.water,
        )


@dataclass(frozen=True)
class ImagingQuery:
    object_distance: Real = INFINITY
    line: SpectralLine = SpectralLine.MEAN
    law: Optional[DispersionLaw] = None

    def __post_init__(self):
        if not self.object_distance > 0:
            raise ValueError("object distance must be positive or infinite")


@dataclass(frozen=True)
class ParaxialSurface:
    curvature: Real
    index_before: Real
    index_after: Real
    thickness_after: Real = 0

    def __post_init__(self):
        if self.index_before <= 0 or self.index_after <= 0:
            raise ValueError("refractive indices must be positive")
        if self.thickness_after < 0:
            raise ValueError("thickness must be non-negative")


def aggregates(obj: CompoundObjective) -> tuple:
    """The two curvature combinations that carry the water and glass powers.

    Returns ``(x, y)`` with ``x = c_g - c_h`` and
    ``y = c_f - c_g + c_h - c_k``; ``x + y == c_f - c_k``.
    """
    x = obj.c_g - obj.c_h
    y = obj.c_f - obj.c_g + obj.c_h - obj.c_k
    return x, y


def line_indices(obj: CompoundObjective, line: SpectralLine, law: Optional[DispersionLaw]) -> tuple:
    """(glass, water) ratios for one line."""
    return line_ratio(obj.glass, line, law), line_ratio(obj.water, line, law)


def system_power(obj: CompoundObjective, line: SpectralLine = SpectralLine.MEAN,
                 law: Optional[DispersionLaw] = None) -> Real:
    """Thin-system power ``(n - 1) x + (m - 1) y`` for one spectral line."""
    m, n = line_indices(obj, line, law)
    x, y = aggregates(obj)
    return (n - 1) * x + (m - 1) * y


def focal_denominator(obj: CompoundObjective, query: ImagingQuery) -> Real:
    """``n x + m y - 1/a - c_f + c_k``, the unreduced denominator of the focal formula."""
    m, n = line_indices(obj, query.line, query.law)
    x, y = aggregates(obj)
    return n * x + m * y - inverse_distance(query.object_distance) - obj.c_f + obj.c_k


def euler_focal_distance(obj: CompoundObjective, query: ImagingQuery, rel_tol: float = 1e-14) -> Real:
    """Image distance behind the thin objective for the query's object and line.

    Equals ``1 / (P - 1/a)``, so ``1/P`` for a distant object. Raises
    AfocalOrConjugateAtInfinity when the denominator vanishes relative to the
    size of its terms.
    """
    denom = focal_denominator(obj, query)
    m, n = line_indices(obj, query.line, query.law)
    x, y = aggregates(obj)
    scale = abs(n * x) + abs(m * y) + abs(obj.c_f) + abs(obj.c_k)
    scale += abs(inverse_distance(query.object_distance))
    if denom == 0 or abs(denom) <= rel_tol * scale:
        raise AfocalOrConjugateAtInfinity(
            "image at infinity: system power equals the object vergence",
            power=system_power(obj, query.line, query.law),
        )
    return 1 / denom


def objective_surfaces(obj: CompoundObjective, line: SpectralLine = SpectralLine.MEAN,
                       law: Optional[DispersionLaw] = None) -> list:
    """The objective as a zero-thickness stack of ParaxialSurface."""
    m, n = line_indices(obj, line, law)
    air = AIR.mean_ratio
    return [
        ParaxialSurface(obj.c_f, air, m),
        ParaxialSurface(obj.c_g, m, n),
        ParaxialSurface(obj.c_h, n, m),
        ParaxialSurface(obj.c_k, m, air),
    ]


def paraxial_trace(surfaces: Sequence[ParaxialSurface], object_distance: Real = INFINITY) -> Real:
    """Image distance after the last surface, by surface-by-surface recursion.

    A marginal ray of unit height at the first vertex is refracted with
    ``u' = u n1/n2 + h c (n1 - n2)/n2`` and transferred with ``h' = h + t u'``.
    The thickness after the last surface is ignored.
    """
    if not surfaces:
        raise ValueError("at least one surface is required")
    h = 1
    u = inverse_distance(object_distance)
    last = len(surfaces) - 1
    for i, s in enumerate(surfaces):
        u = u * s.index_before / s.index_after + h * s.curvature * (s.index_before - s.index_after) / s.index_after
        if i < last:
            h = h + s.thickness_after * u
    if u == 0:
        raise AfocalOrConjugateAtInfinity("emergent paraxial ray is parallel to the axis")
    return -h / u


def paraxial_power(surfaces: Sequence[ParaxialSurface]) -> Real:
    """Reduced power ``-n_final * u_final`` of a unit-height parallel ray."""
    if not surfaces:
        raise ValueError("at least one surface is required")
    h, u = 1, 0
    last = len(surfaces) - 1
    for i, s in enumerate(surfaces):
        u = u * s.index_before / s.index_after + h * s.curvature * (s.index_before - s.index_after) / s.index_after
        if i < last:
            h = h + s.thickness_after * u
    return -u * surfaces[-1].index_after


def chromatic_focal_shift(obj: CompoundObjective, law: DispersionLaw,
                          line: SpectralLine = SpectralLine.RED) -> Real:
    """``P_mean - P_line`` in reciprocal length; zero exactly for an achromat."""
    return system_power(obj, SpectralLine.MEAN, law) - system_power(obj, line, law)
