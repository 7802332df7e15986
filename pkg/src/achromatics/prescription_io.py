"""Line-oriented prescription files.

Grammar, one directive per line, ``#`` to end of line is a comment::

    unit m|mm
    medium <name> mean=<num> [red=<num>] [violet=<num>]
    law linear|power ref=<medium-name>
    object distance=<num>|inf
    surface radius=<num>|flat thickness=<num> medium=<name> aperture=<num>

``<num>`` is a decimal (parsed as float) or ``p/q`` with integers p and q
(parsed as an exact Fraction). Key order within a directive is free.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Dict, List, Optional, Tuple, Union

from .errors import PrescriptionError
from .media import AIR, LAW_KINDS, DispersionLaw, OpticalMedium, SpectralLine
from .paraxial import INFINITY, CompoundObjective
from .raytrace import Prescription, Surface

Number = Union[float, Fraction]

UNITS = {"m": 1, "mm": Fraction(1, 1000)}
FLAT = "flat"

_RATIONAL = re.compile(r"^[+-]?\d+/[+-]?\d+$")


def parse_number(text: str) -> Number:
    """``p/q`` gives a Fraction, anything else must be a finite decimal float."""
    if _RATIONAL.match(text):
        num, den = text.split("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    value = float(text)
    if value != value or value in (INFINITY, -INFINITY):
        raise ValueError(f"{text!r} is not a finite number")
    return value


def format_number(value: Number) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


@dataclass(frozen=True)
class MediumSpec:
    name: str
    mean: Number
    red: Optional[Number] = None
    violet: Optional[Number] = None

    def to_medium(self) -> OpticalMedium:
        lines = {}
        if self.red is not None:
            lines[SpectralLine.RED] = self.red
        if self.violet is not None:
            lines[SpectralLine.VIOLET] = self.violet
        return OpticalMedium(self.name, self.mean, lines)


@dataclass(frozen=True)
class SurfaceSpec:
    radius: Optional[Number]  # None for a flat face
    thickness: Number
    medium: str
    aperture: Number

    @property
    def curvature(self) -> Number:
        if self.radius is None:
            return 0
        return 1 / self.radius


@dataclass
class PrescriptionDocument:
    unit: str
    media: Dict[str, MediumSpec] = field(default_factory=dict)
    law: Optional[Tuple[str, str]] = None
    object_distance: Optional[Number] = None
    surfaces: List[SurfaceSpec] = field(default_factory=list)

    @property
    def scale(self) -> Number:
        """Metres per document unit."""
        return UNITS[self.unit]

    def optical_media(self) -> Dict[str, OpticalMedium]:
        return {name: spec.to_medium() for name, spec in self.media.items()}

    def dispersion_law(self, kind: Optional[str] = None) -> Optional[DispersionLaw]:
        """The declared law, optionally with its kind overridden.

        Without a law block the reference is the first medium with a measured
        red ratio; None when there is no such medium.
        """
        if self.law is not None:
            ref_name = self.law[1]
            kind = kind or self.law[0]
        else:
            candidates = [m for m in self.media.values() if m.red is not None]
            if not candidates or kind is None:
                return None
            ref_name = candidates[0].name
        return DispersionLaw.anchored_to(kind, self.media[ref_name].to_medium())

    def _metres(self, value: Number) -> Number:
        scale = self.scale
        if isinstance(value, float) and isinstance(scale, Fraction):
            return value * float(scale)
        return value * scale

    def to_prescription(self) -> Prescription:
        """Raytrace prescription with every length converted to metres."""
        if not self.surfaces:
            raise PrescriptionError("document has no surfaces")
        surfaces = [
            Surface(
                curvature=s.curvature / self._metres(1) if s.radius is not None else 0,
                thickness=self._metres(s.thickness),
                medium=s.medium,
                semi_aperture=self._metres(s.aperture),
            )
            for s in self.surfaces
        ]
        distance = INFINITY if self.object_distance is None else self._metres(self.object_distance)
        return Prescription(surfaces, self.optical_media(), distance)

    def compound_objective(self) -> Optional[CompoundObjective]:
        """The thin four-face objective, if the surfaces describe one.

        That means four zero-thickness surfaces with media X, Y, X, air.
        """
        s = self.surfaces
        if len(s) != 4 or any(f.thickness != 0 for f in s):
            return None
        outer, inner = s[0].medium, s[1].medium
        if s[2].medium != outer or s[3].medium != AIR.name or outer == inner:
            return None
        media = self.optical_media()
        media.setdefault(AIR.name, AIR)
        curv = [f.curvature / self._metres(1) if f.radius is not None else 0 for f in s]
        return CompoundObjective(*curv, glass=media[outer], water=media[inner])


def _fields(tokens, line_no) -> Dict[str, str]:
    out = {}
    for tok in tokens:
        key, sep, value = tok.partition("=")
        if not sep or not key or not value:
            raise PrescriptionError(f"expected key=value, got {tok!r}", line_no)
        if key in out:
            raise PrescriptionError(f"duplicate key {key!r}", line_no)
        out[key] = value
    return out


def _check_keys(fields, required, optional, line_no):
    missing = [k for k in required if k not in fields]
    if missing:
        raise PrescriptionError(f"missing {', '.join(missing)}", line_no)
    extra = set(fields) - set(required) - set(optional)
    if extra:
        raise PrescriptionError(f"unexpected key(s) {', '.join(sorted(extra))}", line_no)


def _num(fields, key, line_no) -> Number:
    try:
        return parse_number(fields[key])
    except ValueError as err:
        raise PrescriptionError(f"bad value for {key}: {err}", line_no) from None


def parse_prescription(text: str) -> PrescriptionDocument:
    """Parse prescription text; errors name the offending line."""
    unit = None
    media: Dict[str, MediumSpec] = {}
    law = None
    law_line = None
    object_distance = None
    seen_object = False
    surfaces: List[SurfaceSpec] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        directive, args = tokens[0], tokens[1:]
        if directive == "unit":
            if unit is not None:
                raise PrescriptionError("duplicate unit declaration", line_no)
            if len(args) != 1 or args[0] not in UNITS:
                raise PrescriptionError("unit must be 'm' or 'mm'", line_no)
            unit = args[0]
        elif directive == "medium":
            if not args or "=" in args[0]:
                raise PrescriptionError("medium needs a name", line_no)
            name = args[0]
            if name in media:
                raise PrescriptionError(f"medium {name!r} defined twice", line_no)
            f = _fields(args[1:], line_no)
            _check_keys(f, ["mean"], ["red", "violet"], line_no)
            spec = MediumSpec(
                name,
                _num(f, "mean", line_no),
                _num(f, "red", line_no) if "red" in f else None,
                _num(f, "violet", line_no) if "violet" in f else None,
            )
            try:
                spec.to_medium()
            except ValueError as err:
                raise PrescriptionError(str(err), line_no) from None
            media[name] = spec
        elif directive == "law":
            if law is not None:
                raise PrescriptionError("duplicate law block", line_no)
            if not args or args[0] not in LAW_KINDS:
                raise PrescriptionError("law must be 'linear' or 'power'", line_no)
            f = _fields(args[1:], line_no)
            _check_keys(f, ["ref"], [], line_no)
            law, law_line = (args[0], f["ref"]), line_no
        elif directive == "object":
            if seen_object:
                raise PrescriptionError("duplicate object block", line_no)
            seen_object = True
            f = _fields(args, line_no)
            _check_keys(f, ["distance"], [], line_no)
            if f["distance"] == "inf":
                object_distance = None
            else:
                object_distance = _num(f, "distance", line_no)
                if object_distance <= 0:
                    raise PrescriptionError("object distance must be positive", line_no)
        elif directive == "surface":
            f = _fields(args, line_no)
            _check_keys(f, ["radius", "thickness", "medium", "aperture"], [], line_no)
            radius = None if f["radius"] == FLAT else _num(f, "radius", line_no)
            if radius == 0:
                raise PrescriptionError("radius 0 is not allowed; write radius=flat", line_no)
            thickness = _num(f, "thickness", line_no)
            if thickness < 0:
                raise PrescriptionError("thickness must be non-negative", line_no)
            aperture = _num(f, "aperture", line_no)
            if aperture <= 0:
                raise PrescriptionError("aperture must be positive", line_no)
            if f["medium"] not in media and f["medium"] != AIR.name:
                raise PrescriptionError(f"undefined medium {f['medium']!r}", line_no)
            surfaces.append(SurfaceSpec(radius, thickness, f["medium"], aperture))
        else:
            raise PrescriptionError(f"unknown directive {directive!r}", line_no)

    if unit is None:
        raise PrescriptionError("missing unit declaration")
    if law is not None:
        ref = media.get(law[1])
        if ref is None:
            raise PrescriptionError(f"law references undefined medium {law[1]!r}", law_line)
        if ref.red is None:
            raise PrescriptionError(f"law reference {law[1]!r} has no red ratio", law_line)
        if ref.mean == 1:
            raise PrescriptionError("law reference has mean ratio 1", law_line)
    return PrescriptionDocument(unit, media, law, object_distance, surfaces)


def emit_prescription(doc: PrescriptionDocument) -> str:
    """Normal form: unit, media, law, object, surfaces, one per line."""
    out = [f"unit {doc.unit}"]
    for spec in doc.media.values():
        parts = [f"medium {spec.name}", f"mean={format_number(spec.mean)}"]
        if spec.red is not None:
            parts.append(f"red={format_number(spec.red)}")
        if spec.violet is not None:
            parts.append(f"violet={format_number(spec.violet)}")
        out.append(" ".join(parts))
    if doc.law is not None:
        out.append(f"law {doc.law[0]} ref={doc.law[1]}")
    dist = "inf" if doc.object_distance is None else format_number(doc.object_distance)
    out.append(f"object distance={dist}")
    for s in doc.surfaces:
        radius = FLAT if s.radius is None else format_number(s.radius)
        out.append(
            f"surface radius={radius} thickness={format_number(s.thickness)} "
            f"medium={s.medium} aperture={format_number(s.aperture)}"
        )
    return "\n".join(out) + "\n"


def load_bundled(name: str = "historical.rx") -> str:
    return resources.files("achromatics").joinpath("data", name).read_text()
