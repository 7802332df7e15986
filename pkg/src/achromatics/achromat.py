"""Achromatic condition, the degeneracy theorem, and the achromat solver.

The objective is achromatic for the mean and red lines when

    (n - N) x + (m - M) y = 0,

with ``x, y`` the aggregates of :func:`achromatics.paraxial.aggregates`. Its
mean power is ``P = (n - 1) x + (m - 1) y``. Eliminating ``x`` gives
``P = y D / (n - N)`` with the dispersion determinant

    D = (m - 1)(n - N) - (n - 1)(m - M).

Under the linear law ``D`` vanishes identically, so every achromat has zero
power. Under the power law it does not, and a unit-power achromat exists,
though only with steep interior faces.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DegeneracyViolation, DegenerateLaw, NotApplicable
from .media import DispersionLaw, OpticalMedium, Real, SpectralLine, line_ratio
from .paraxial import CompoundObjective, aggregates, system_power

DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class AchromatTarget:
    target_power: Real
    law: DispersionLaw
    glass: OpticalMedium
    water: OpticalMedium
    free_c_f: Real = 0
    free_c_g: Optional[Real] = None
    line: SpectralLine = SpectralLine.RED

    def __post_init__(self):
        measured = self.glass.explicit_lines.get(self.line)
        if measured is not None:
            ref = self.law.reference_for(self.line)
            if ref.mean_ratio != self.glass.mean_ratio or ref.line_ratio != measured:
                raise ValueError("law must be anchored to the glass's measured pair")


@dataclass(frozen=True)
class AchromatSolution:
    """A solved objective plus the numbers that describe its quality.

    ``sensitivity`` is dx/dN, the change in the water aggregate per unit
    change of the water's derived line ratio. For the 1747 constants it is
    about 1e5, which is why N has to be known to ~1e-7 to pin x to ~0.01.
    """

    objective: CompoundObjective
    x: Real
    y: Real
    interior_curvature_max: Real
    residual: Real
    target_power: Real
    determinant: Real
    sensitivity: Real


def line_differences(glass: OpticalMedium, water: OpticalMedium, law: DispersionLaw,
                     line: SpectralLine = SpectralLine.RED) -> tuple:
    """``(m, m - M, n, n - N)`` for the mean line against ``line``."""
    m = glass.mean_ratio
    n = water.mean_ratio
    return m, m - line_ratio(glass, line, law), n, n - line_ratio(water, line, law)


def dispersion_determinant(glass: OpticalMedium, water: OpticalMedium, law: DispersionLaw,
                           line: SpectralLine = SpectralLine.RED) -> Real:
    m, dm, n, dn = line_differences(glass, water, law, line)
    return (m - 1) * dn - (n - 1) * dm


def achromatic_residual(obj: CompoundObjective, law: DispersionLaw,
                        line: SpectralLine = SpectralLine.RED) -> Real:
    """``(n - N) x + (m - M) y``; zero iff the mean and ``line`` powers coincide."""
    _, dm, _, dn = line_differences(obj.glass, obj.water, law, line)
    x, y = aggregates(obj)
    return dn * x + dm * y


def _random_real(rng: random.Random, exact: bool, span: int = 100) -> Real:
    if exact:
        return Fraction(rng.randint(-span * 1000, span * 1000), 1000)
    return rng.uniform(-span, span)


@dataclass(frozen=True)
class DegeneracyReport:
    samples: int
    max_power: Real
    max_scaled_power: float
    violations: int
    counterexample: Optional[CompoundObjective]
    exact: bool
    seed: int


def dollond_degeneracy_check(samples: int, glass: OpticalMedium, water: OpticalMedium,
                             law: DispersionLaw, seed: int = 1752, exact: bool = False,
                             strict: bool = True, tol: float = 1e-12) -> DegeneracyReport:
    """Check that achromatic objectives have zero mean power.

    Each sample draws ``y``, ``c_f`` and ``c_g`` at random, sets
    ``x = -y (m - M)/(n - N)`` so the achromatic condition holds, and records
    the mean power. With ``exact=True`` the draws are rationals and the media
    are expected to be rational too, so the power is an exact Fraction.

    A sample whose power exceeds ``tol * max(1, |x| + |y|)`` is a violation;
    with ``strict`` the first one raises DegeneracyViolation, otherwise the
    violations are counted in the report.
    """
    rng = random.Random(seed)
    _, dm, _, dn = line_differences(glass, water, law)
    if dn == 0:
        raise DegenerateLaw("water has no dispersion; x is unconstrained")
    max_power = 0
    max_scaled = 0.0
    violations = 0
    counterexample = None
    for _ in range(samples):
        y = _random_real(rng, exact)
        c_f = _random_real(rng, exact)
        c_g = _random_real(rng, exact)
        x = -y * dm / dn
        obj = CompoundObjective(c_f, c_g, c_g - x, c_f - x - y, glass, water)
        power = system_power(obj, SpectralLine.MEAN, law)
        scale = max(1.0, float(abs(x) + abs(y)))
        if abs(power) > abs(max_power):
            max_power = power
        max_scaled = max(max_scaled, float(abs(power)) / scale)
        if abs(power) > tol * scale:
            violations += 1
            if counterexample is None:
                counterexample = obj
            if strict:
                raise DegeneracyViolation(
                    f"achromatic objective with nonzero power {float(power):.6g}",
                    counterexample=obj,
                )
    return DegeneracyReport(samples, max_power, max_scaled, violations, counterexample, exact, seed)


def solve_achromat(target: AchromatTarget) -> AchromatSolution:
    """Curvatures of an achromat with the requested mean power.

    ``x = -P (m - M)/D`` and ``y = P (n - N)/D``. The front curvature is
    ``free_c_f``. Without ``free_c_g`` the interior faces are split
    symmetrically, ``c_g = x/2`` and ``c_h = -x/2``, which minimises the
    steeper of the two. Raises DegenerateLaw when ``|D|`` is negligible
    against ``(m - 1)(n - N)``: no achromat of nonzero power exists then.
    """
    glass, water, law, power = target.glass, target.water, target.law, target.target_power
    m, dm, n, dn = line_differences(glass, water, law, target.line)
    det = (m - 1) * dn - (n - 1) * dm
    if power == 0:
        x = y = 0 * power
    else:
        if abs(det) <= DEGENERACY_TOL * abs((m - 1) * dn) or det == 0:
            raise DegenerateLaw(
                "no achromat of nonzero power exists: the achromatic condition forces zero power",
                determinant=det,
            )
        x = -power * dm / det
        y = power * dn / det
    c_f = target.free_c_f
    if target.free_c_g is None:
        c_g = x / 2
        c_h = -x / 2
    else:
        c_g = target.free_c_g
        c_h = c_g - x
    c_k = c_f - x - y
    obj = CompoundObjective(c_f, c_g, c_h, c_k, glass, water)
    residual = achromatic_residual(obj, law, target.line)
    sensitivity = -power * dm * (m - 1) / det ** 2 if det != 0 else 0 * power
    return AchromatSolution(
        objective=obj,
        x=x,
        y=y,
        interior_curvature_max=max(abs(c_g), abs(c_h)),
        residual=residual,
        target_power=power,
        determinant=det,
        sensitivity=sensitivity,
    )


def interior_curvature_report(solution: AchromatSolution) -> Real:
    """Steepest interior curvature per unit of system power (dimensionless)."""
    if solution.target_power == 0:
        raise NotApplicable("severity is undefined for a zero-power objective")
    return solution.interior_curvature_max / abs(solution.target_power)
