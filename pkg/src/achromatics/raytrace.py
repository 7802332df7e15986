"""Exact meridional ray tracing through centred spherical surfaces.

Rays live in the (z, y) plane of a rotationally symmetric system. Surfaces
are traced sequentially: a ray meets surface ``i`` wherever the line of the
ray crosses its sphere cap, even if that is behind the previous surface.
Zero-thickness stacks are therefore legal and reproduce the thin model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence

from .errors import AfocalOrConjugateAtInfinity, RayTraceError
from .media import AIR, DispersionLaw, OpticalMedium, SpectralLine, line_ratio
from .paraxial import INFINITY, ParaxialSurface, paraxial_power, paraxial_trace

OK = "ok"
MISSED = "missed_surface"
TIR = "total_internal_reflection"
CLIPPED = "aperture_clipped"


@dataclass(frozen=True)
class Surface:
    """One refracting face; ``medium`` is the medium after it."""

    curvature: float
    thickness: float
    medium: str
    semi_aperture: float

    def __post_init__(self):
        if self.thickness < 0:
            raise ValueError("thickness must be non-negative")
        if not self.semi_aperture > 0:
            raise ValueError("semi-aperture must be positive")


@dataclass(frozen=True)
class Prescription:
    surfaces: Sequence[Surface]
    media: Mapping[str, OpticalMedium]
    object_distance: float = INFINITY

    def __post_init__(self):
        if not self.surfaces:
            raise ValueError("a prescription needs at least one surface")
        for s in self.surfaces:
            if s.medium not in self.media and s.medium != AIR.name:
                raise ValueError(f"undefined medium {s.medium!r}")
        if not self.object_distance > 0:
            raise ValueError("object distance must be positive or infinite")

    def medium(self, name: str) -> OpticalMedium:
        if name in self.media:
            return self.media[name]
        if name == AIR.name:
            return AIR
        raise KeyError(name)

    def vertices(self) -> List[float]:
        z, out = 0.0, []
        for s in self.surfaces:
            out.append(z)
            z += s.thickness
        return out

    def indices(self, line: SpectralLine, law: Optional[DispersionLaw]) -> List[float]:
        """Refractive index before the first surface and after every surface."""
        return [1.0] + [float(line_ratio(self.medium(s.medium), line, law)) for s in self.surfaces]

    def paraxial_surfaces(self, line: SpectralLine, law: Optional[DispersionLaw]) -> List[ParaxialSurface]:
        idx = self.indices(line, law)
        return [
            ParaxialSurface(s.curvature, idx[i], idx[i + 1], s.thickness)
            for i, s in enumerate(self.surfaces)
        ]

    def scaled(self, factor: float) -> "Prescription":
        """Same design with every length multiplied by ``factor``."""
        surfaces = [
            Surface(s.curvature / factor, s.thickness * factor, s.medium, s.semi_aperture * factor)
            for s in self.surfaces
        ]
        return Prescription(surfaces, self.media, self.object_distance * factor)


@dataclass(frozen=True)
class StackSurface:
    """A surface resolved for one spectral line: where it is and what it joins."""

    vertex_z: float
    curvature: float
    n_before: float
    n_after: float
    semi_aperture: float


def resolve(rx: Prescription, line: SpectralLine, law: Optional[DispersionLaw]) -> List[StackSurface]:
    idx = rx.indices(line, law)
    return [
        StackSurface(z, float(s.curvature), idx[i], idx[i + 1], float(s.semi_aperture))
        for i, (z, s) in enumerate(zip(rx.vertices(), rx.surfaces))
    ]


def reverse_stack(stack: Sequence[StackSurface]) -> List[StackSurface]:
    """Mirror a stack through z = 0 so it can be traced backwards."""
    return [
        StackSurface(-s.vertex_z, -s.curvature, s.n_after, s.n_before, s.semi_aperture)
        for s in reversed(stack)
    ]


@dataclass(frozen=True)
class MeridionalRay:
    z: float
    y: float
    dz: float
    dy: float

    @classmethod
    def towards(cls, z, y, dz, dy) -> "MeridionalRay":
        norm = math.hypot(dz, dy)
        return cls(z, y, dz / norm, dy / norm)


@dataclass(frozen=True)
class Refraction:
    """Record of one refraction, kept for residual checks."""

    point: tuple
    normal: tuple
    incident: tuple
    refracted: tuple
    n_before: float
    n_after: float

    def snell_residual(self) -> float:
        sin_in = _cross(self.incident, self.normal)
        sin_out = _cross(self.refracted, self.normal)
        return abs(self.n_before * sin_in - self.n_after * sin_out)


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def intersect_sphere(ray: MeridionalRay, curvature: float, vertex_z: float,
                     semi_aperture: float = INFINITY) -> tuple:
    """First crossing of the ray line with a sphere cap, and the unit normal there.

    The sphere through ``(vertex_z, 0)`` with curvature ``c`` satisfies
    ``c (w**2 + y**2) - 2 w = 0`` for ``w = z - vertex_z``. Substituting the
    ray gives ``c t**2 + 2 B t + C = 0``, solved as ``q = -(B + sign(B) s)``
    with roots ``q / c`` and ``C / q``, so neither root suffers cancellation
    as ``c -> 0``. The cap is the half of the sphere on the vertex side of its
    centre (``c w < 1``); a flat face is handled as an exact plane.

    Returns ``((z, y), (nz, ny))`` with the normal pointing against the ray.
    """
    c = curvature
    w = ray.z - vertex_z
    if c == 0:
        if ray.dz == 0:
            raise RayTraceError(MISSED, "ray parallel to a plane surface")
        t = -w / ray.dz
    else:
        b = c * (w * ray.dz + ray.y * ray.dy) - ray.dz
        cc = c * (w * w + ray.y * ray.y) - 2 * w
        disc = b * b - c * cc
        if disc < 0:
            raise RayTraceError(MISSED, "ray does not meet the sphere")
        q = -(b + math.copysign(math.sqrt(disc), b))
        roots = [q / c] + ([cc / q] if q != 0 else [])
        on_cap = [r for r in roots if c * (w + r * ray.dz) < 1]
        if not on_cap:
            raise RayTraceError(MISSED, "ray does not meet the sphere cap")
        t = min(on_cap, key=lambda r: abs(w + r * ray.dz))
    z = ray.z + t * ray.dz
    y = ray.y + t * ray.dy
    wz = z - vertex_z
    if abs(y) > semi_aperture:
        raise RayTraceError(CLIPPED, f"height {y:.6g} exceeds semi-aperture {semi_aperture:.6g}")
    nz, ny = c * wz - 1.0, c * y
    norm = math.hypot(nz, ny)
    nz, ny = nz / norm, ny / norm
    if nz * ray.dz + ny * ray.dy > 0:
        nz, ny = -nz, -ny
    return (z, y), (nz, ny)


def refract(direction: tuple, normal: tuple, n_before: float, n_after: float) -> tuple:
    """Snell refraction of a unit direction at a unit normal facing the ray."""
    dz, dy = direction
    nz, ny = normal
    if n_before == n_after:
        return (dz, dy)
    mu = n_before / n_after
    cos_i = -(dz * nz + dy * ny)
    sin2_t = mu * mu * (1.0 - cos_i * cos_i)
    if sin2_t > 1.0:
        raise RayTraceError(TIR, "total internal reflection")
    k = mu * cos_i - math.sqrt(1.0 - sin2_t)
    tz, ty = mu * dz + k * nz, mu * dy + k * ny
    norm = math.hypot(tz, ty)
    return (tz / norm, ty / norm)


def propagate(ray: MeridionalRay, stack: Sequence[StackSurface],
              history: Optional[list] = None) -> MeridionalRay:
    """Trace a ray through every surface of a resolved stack.

    Returns the ray at the last surface, heading out. A RayTraceError carries
    the index of the failing surface.
    """
    for i, s in enumerate(stack):
        try:
            point, normal = intersect_sphere(ray, s.curvature, s.vertex_z, s.semi_aperture)
            direction = refract((ray.dz, ray.dy), normal, s.n_before, s.n_after)
        except RayTraceError as err:
            err.surface = i
            raise
        if history is not None:
            history.append(Refraction(point, normal, (ray.dz, ray.dy), direction, s.n_before, s.n_after))
        ray = MeridionalRay(point[0], point[1], direction[0], direction[1])
    return ray


@dataclass(frozen=True)
class TraceOutcome:
    status: str
    back_focal_distance: Optional[float] = None
    surface: Optional[int] = None
    ray: Optional[MeridionalRay] = None

    @property
    def ok(self) -> bool:
        return self.status == OK


def launch_ray(rx: Prescription, height: float) -> MeridionalRay:
    """Input ray of the given height at the first vertex plane.

    Distant objects give a ray parallel to the axis; a finite object gives the
    ray from the axial object point aimed at that height on the vertex plane.
    """
    if rx.object_distance == INFINITY:
        return MeridionalRay(0.0, float(height), 1.0, 0.0)
    a = float(rx.object_distance)
    return MeridionalRay.towards(0.0, float(height), a, float(height))


def paraxial_bfd(rx: Prescription, line: SpectralLine, law: Optional[DispersionLaw]) -> float:
    return float(paraxial_trace(rx.paraxial_surfaces(line, law), rx.object_distance))


def trace_ray(rx: Prescription, height: float, line: SpectralLine = SpectralLine.MEAN,
              law: Optional[DispersionLaw] = None, history: Optional[list] = None) -> TraceOutcome:
    """Trace one meridional ray and report where it crosses the axis.

    The back focal distance is measured from the last vertex. A height of
    exactly zero is the axial ray; its crossing is the paraxial image
    distance, which is what it tends to as the height shrinks.
    """
    stack = resolve(rx, line, law)
    if abs(height) > stack[0].semi_aperture:
        return TraceOutcome(CLIPPED, surface=0)
    try:
        out = propagate(launch_ray(rx, height), stack, history)
    except RayTraceError as err:
        return TraceOutcome(err.status, surface=err.surface)
    last = stack[-1].vertex_z
    if height == 0:
        try:
            return TraceOutcome(OK, paraxial_bfd(rx, line, law), ray=out)
        except AfocalOrConjugateAtInfinity:
            return TraceOutcome(OK, None, ray=out)
    if out.dy == 0:
        return TraceOutcome(OK, None, ray=out)
    crossing = out.z - out.y * out.dz / out.dy
    return TraceOutcome(OK, crossing - last, ray=out)


@dataclass(frozen=True)
class ScanRow:
    height: float
    line: SpectralLine
    status: str
    back_focal_distance: Optional[float]
    spherical: Optional[float]


@dataclass
class AberrationReport:
    """Back focal distances over a grid of heights and lines.

    ``rows`` is ordered by (height, line) and always starts with the
    height-0 rows. ``spherical[line][h] = BFD(h) - BFD(0)`` and
    ``chromatic[h] = BFD_red(h) - BFD_mean(h)``.
    """

    rows: List[ScanRow]
    spherical: Dict[SpectralLine, Dict[float, float]] = field(default_factory=dict)
    chromatic: Dict[float, float] = field(default_factory=dict)

    def bfd(self, height: float, line: SpectralLine) -> Optional[float]:
        for row in self.rows:
            if row.height == height and row.line is line:
                return row.back_focal_distance
        raise KeyError((height, line))


def aberration_scan(rx: Prescription, heights: Sequence[float],
                    lines: Sequence[SpectralLine] = (SpectralLine.MEAN, SpectralLine.RED),
                    law: Optional[DispersionLaw] = None) -> AberrationReport:
    """Tabulate BFD per (height, line) with spherical and chromatic summaries.

    Failed rays stay in the table with their status and no distance.
    """
    heights = list(heights)
    if any(h <= 0 for h in heights) or heights != sorted(heights):
        raise ValueError("heights must be positive and ascending")
    lines = sorted(set(lines))
    report = AberrationReport(rows=[])
    base = {}
    for h in [0.0] + heights:
        for line in lines:
            outcome = trace_ray(rx, h, line, law)
            bfd = outcome.back_focal_distance
            if h == 0:
                base[line] = bfd
            lsa = None
            if bfd is not None and base.get(line) is not None:
                lsa = bfd - base[line]
                report.spherical.setdefault(line, {})[h] = lsa
            report.rows.append(ScanRow(h, line, outcome.status, bfd, lsa))
        if SpectralLine.RED in lines and SpectralLine.MEAN in lines:
            red, mean = report.bfd(h, SpectralLine.RED), report.bfd(h, SpectralLine.MEAN)
            if red is not None and mean is not None:
                report.chromatic[h] = red - mean
    return report


def default_heights(rx: Prescription, line: SpectralLine = SpectralLine.MEAN,
                    law: Optional[DispersionLaw] = None) -> List[float]:
    """Report heights {1e-4, 0.01, 0.02, 0.05} in units of the focal length."""
    power = float(paraxial_power(rx.paraxial_surfaces(line, law)))
    scale = 1.0 / abs(power) if power else max(s.semi_aperture for s in rx.surfaces)
    return [f * scale for f in (1e-4, 0.01, 0.02, 0.05)]


def paraxial_limit_check(rx: Prescription, line: SpectralLine = SpectralLine.MEAN,
                         law: Optional[DispersionLaw] = None, height: Optional[float] = None) -> float:
    """Observed order p of ``|BFD(h) - BFD_paraxial|`` from heights h and h/2.

    ``p = log2(e(h) / e(h/2))``; about 2 for any system with spherical
    aberration. A system with no deviation at either height returns inf.
    The default height is 1e-3 of the focal length (or of the first
    semi-aperture for an afocal system).
    """
    try:
        target = paraxial_bfd(rx, line, law)
    except AfocalOrConjugateAtInfinity:
        target = None
    if height is None:
        power = float(paraxial_power(rx.paraxial_surfaces(line, law)))
        scale = 1.0 / abs(power) if power else rx.surfaces[0].semi_aperture
        height = 1e-3 * min(scale, rx.surfaces[0].semi_aperture)
    errors = []
    for h in (height, height / 2):
        outcome = trace_ray(rx, h, line, law)
        if not outcome.ok:
            raise RayTraceError(outcome.status, f"ray at height {h:.6g} failed", outcome.surface)
        bfd = outcome.back_focal_distance
        if (bfd is None) != (target is None):
            raise AfocalOrConjugateAtInfinity("exact and paraxial rays disagree on afocality")
        errors.append(0.0 if bfd is None else abs(bfd - target))
    if errors[1] == 0:
        return INFINITY
    return math.log2(errors[0] / errors[1])
