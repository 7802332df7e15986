"""Command-line entry point.

Exit codes: 0 success, 1 parse or validation failure, 2 mathematical
degeneracy (no achromat of nonzero power, or an image at infinity).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .achromat import (
    AchromatTarget,
    dollond_degeneracy_check,
    interior_curvature_report,
    solve_achromat,
)
from .errors import AfocalOrConjugateAtInfinity, DegenerateLaw, OpticsError
from .media import AIR, LINEAR, POWER, DispersionLaw, SpectralLine, line_ratio
from .paraxial import (
    ImagingQuery,
    aggregates,
    euler_focal_distance,
    paraxial_power,
    paraxial_trace,
    system_power,
)
from .prescription_io import (
    MediumSpec,
    PrescriptionDocument,
    SurfaceSpec,
    emit_prescription,
    load_bundled,
    parse_number,
    parse_prescription,
)
from .raytrace import aberration_scan, default_heights
from .report import emit_report, format_value

DEFAULT_SEED = 1752
EXIT_OK, EXIT_INVALID, EXIT_DEGENERATE = 0, 1, 2


@dataclass
class CommandResult:
    code: int
    stdout: str
    stderr: str


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _read_document(path: Optional[str]) -> PrescriptionDocument:
    if path is None:
        return parse_prescription(load_bundled())
    with open(path, encoding="utf-8") as fh:
        return parse_prescription(fh.read())


def _glass_and_water(doc: PrescriptionDocument):
    media = doc.optical_media()
    if doc.law is not None:
        glass_name = doc.law[1]
    else:
        with_red = [m.name for m in doc.media.values() if m.red is not None]
        if not with_red:
            raise OpticsError("no medium carries a measured red ratio")
        glass_name = with_red[0]
    others = [name for name in media if name not in (glass_name, AIR.name)]
    if not others:
        raise OpticsError("need a second medium besides the reference glass")
    return media[glass_name], media[others[0]]


def _analyze(args, out: List[str], err: List[str]) -> int:
    doc = _read_document(args.file)
    line = SpectralLine.parse(args.line)
    law = doc.dispersion_law(args.law)
    scale = float(doc.scale)
    obj = doc.compound_objective()
    rows = []

    def add(quantity, value):
        rows.append({"quantity": quantity, "value": value})

    if obj is not None:
        add("method", "closed_form")
        x, y = aggregates(obj)
        add("x", x * scale)
        add("y", y * scale)
        p_mean = system_power(obj, SpectralLine.MEAN, law)
        p_line = system_power(obj, line, law)
    else:
        rx = doc.to_prescription()
        add("method", "paraxial_trace")
        p_mean = paraxial_power(rx.paraxial_surfaces(SpectralLine.MEAN, law))
        p_line = paraxial_power(rx.paraxial_surfaces(line, law))
    add("power_mean", p_mean * scale)
    add(f"power_{line.label}", p_line * scale)
    add("chromatic_shift", (p_mean - p_line) * scale)

    code = EXIT_OK
    distances = [("focal_length", None)]
    if doc.object_distance is not None:
        distances.append(("image_distance", doc.to_prescription().object_distance))
    for quantity, distance in distances:
        try:
            if obj is not None:
                query = ImagingQuery(line=SpectralLine.MEAN, law=law) if distance is None else \
                    ImagingQuery(distance, SpectralLine.MEAN, law)
                value = euler_focal_distance(obj, query)
            else:
                rx = doc.to_prescription()
                surfaces = rx.paraxial_surfaces(SpectralLine.MEAN, law)
                value = paraxial_trace(surfaces) if distance is None else paraxial_trace(surfaces, distance)
            add(quantity, float(value) / scale)
        except AfocalOrConjugateAtInfinity:
            add(quantity, "inf")
            add("note", f"{quantity}: image at infinity (AfocalOrConjugateAtInfinity)")
            err.append(f"{quantity}: AfocalOrConjugateAtInfinity")
            code = EXIT_DEGENERATE
    if p_mean == 0 and doc.object_distance is not None:
        add("note", "zero power: the image coincides with the object")
    out.append(emit_report(rows, ["quantity", "value"]))
    return code


def _solution_document(solution, glass, water, aperture, kind) -> PrescriptionDocument:
    media = {}
    for medium in (glass, water):
        media[medium.name] = MediumSpec(
            medium.name,
            medium.mean_ratio,
            medium.explicit_lines.get(SpectralLine.RED),
            medium.explicit_lines.get(SpectralLine.VIOLET),
        )
    o = solution.objective
    surfaces = []
    for c, medium in zip(o.curvatures, (glass.name, water.name, glass.name, AIR.name)):
        radius = None if c == 0 else 1 / c
        surfaces.append(SurfaceSpec(radius, 0, medium, aperture))
    return PrescriptionDocument("m", media, (kind, glass.name), None, surfaces)


def _solve(args, out: List[str], err: List[str]) -> int:
    doc = _read_document(args.media)
    glass, water = _glass_and_water(doc)
    law = DispersionLaw.anchored_to(args.law, glass)
    power = parse_number(args.power)
    target = AchromatTarget(
        power, law, glass, water,
        free_c_f=parse_number(args.cf) if args.cf is not None else 0,
        free_c_g=parse_number(args.cg) if args.cg is not None else None,
    )
    try:
        solution = solve_achromat(target)
    except DegenerateLaw as exc:
        err.append(
            f"DegenerateLaw: {exc} (law={args.law}, determinant={exc.determinant})"
        )
        return EXIT_DEGENERATE
    aperture = args.aperture
    if aperture is None:
        aperture = 0.05 / abs(float(power)) if power else 0.05
    rx_doc = _solution_document(solution, glass, water, aperture, args.law)
    lines = [
        f"# law={args.law} target_power={format_value(power)}",
        f"# x={format_value(solution.x)} y={format_value(solution.y)}",
        f"# residual={format_value(solution.residual)} determinant={format_value(solution.determinant)}",
        f"# water_red={format_value(line_ratio(water, SpectralLine.RED, law))}",
        f"# dx_dN={format_value(solution.sensitivity)} (change in x per unit error in the water red ratio)",
    ]
    if power != 0:
        lines.append(f"# severity={format_value(interior_curvature_report(solution))}")
    out.append("\n".join(lines) + "\n" + emit_prescription(rx_doc))
    return EXIT_OK


def duel_report(samples: int, seed: int = DEFAULT_SEED) -> str:
    """Both sides of the argument on one page, as CSV."""
    doc = parse_prescription(load_bundled())
    glass, water = _glass_and_water(doc)
    linear = DispersionLaw.anchored_to(LINEAR, glass)
    power = DispersionLaw.anchored_to(POWER, glass)
    rows = []

    def add(section, quantity, value):
        rows.append({"section": section, "quantity": quantity, "value": value})

    add("setup", "seed", seed)
    add("setup", "samples", samples)
    add("setup", "glass_mean", glass.mean_ratio)
    add("setup", "glass_red", glass.explicit_lines[SpectralLine.RED])
    add("setup", "water_mean", water.mean_ratio)

    floating = dollond_degeneracy_check(samples, glass, water, linear, seed=seed)
    exact = dollond_degeneracy_check(samples, glass, water, linear, seed=seed, exact=True)
    add("linear", "water_red", line_ratio(water, SpectralLine.RED, linear))
    add("linear", "max_abs_power", abs(floating.max_power))
    add("linear", "max_scaled_power", floating.max_scaled_power)
    add("linear", "max_abs_power_exact", abs(exact.max_power))
    add("linear", "violations", floating.violations)
    try:
        solve_achromat(AchromatTarget(1, linear, glass, water))
        add("linear", "unit_power_achromat", "found")
    except DegenerateLaw:
        add("linear", "unit_power_achromat", "none (DegenerateLaw)")

    solution = solve_achromat(AchromatTarget(1.0, power, glass, water))
    o = solution.objective
    add("power", "water_red", line_ratio(water, SpectralLine.RED, power))
    for name, value in (("x", solution.x), ("y", solution.y), ("c_f", o.c_f), ("c_g", o.c_g),
                        ("c_h", o.c_h), ("c_k", o.c_k)):
        add("power", name, value)
    add("power", "mean_power", system_power(o, SpectralLine.MEAN, power))
    add("power", "residual", solution.residual)
    add("power", "severity", interior_curvature_report(solution))
    add("power", "dx_dN", solution.sensitivity)
    euler = dollond_degeneracy_check(samples, glass, water, power, seed=seed, strict=False)
    add("power", "achromat_max_abs_power", abs(euler.max_power))
    add("power", "achromat_violations", euler.violations)
    return emit_report(rows, ["section", "quantity", "value"])


def _duel(args, out: List[str], err: List[str]) -> int:
    if args.samples < 1:
        raise _UsageError("--samples must be at least 1")
    err.append(f"seed={args.seed}")
    out.append(duel_report(args.samples, args.seed))
    return EXIT_OK


def _trace(args, out: List[str], err: List[str]) -> int:
    doc = _read_document(args.file)
    rx = doc.to_prescription()
    law = doc.dispersion_law(args.law)
    scale = float(doc.scale)
    lines = [SpectralLine.parse(t) for t in args.lines.split(",") if t.strip()]
    if args.heights:
        heights = [float(parse_number(t.strip())) * scale for t in args.heights.split(",") if t.strip()]
    else:
        heights = default_heights(rx, SpectralLine.MEAN, law)
    report = aberration_scan(rx, heights, lines, law)
    rows = []
    for row in report.rows:
        lca = report.chromatic.get(row.height)
        rows.append({
            "height": row.height / scale,
            "line": row.line.label,
            "status": row.status,
            "back_focal_distance": None if row.back_focal_distance is None else row.back_focal_distance / scale,
            "longitudinal_spherical": None if row.spherical is None else row.spherical / scale,
            "longitudinal_chromatic": None if lca is None else lca / scale,
        })
    columns = ["height", "line", "status", "back_focal_distance",
               "longitudinal_spherical", "longitudinal_chromatic"]
    out.append(emit_report(rows, columns))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="achromatics", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="paraxial powers, focal distance and chromatic shift")
    p.add_argument("file")
    p.add_argument("--law", choices=[LINEAR, POWER])
    p.add_argument("--line", choices=["red", "violet"], default="red")
    p.set_defaults(func=_analyze)

    p = sub.add_parser("solve", help="solve for an achromat of given power")
    p.add_argument("--law", choices=[LINEAR, POWER], default=POWER)
    p.add_argument("--power", required=True)
    p.add_argument("--cf")
    p.add_argument("--cg")
    p.add_argument("--media", help="prescription file supplying glass and water (default: bundled)")
    p.add_argument("--aperture", type=float, help="semi-aperture written for each surface, in m")
    p.set_defaults(func=_solve)

    p = sub.add_parser("duel", help="degeneracy check (linear law) against the power-law achromat")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=_duel)

    p = sub.add_parser("trace", help="exact-ray aberration scan as CSV")
    p.add_argument("file")
    p.add_argument("--heights", help="comma-separated ray heights in the file's unit")
    p.add_argument("--lines", default="mean,red")
    p.add_argument("--law", choices=[LINEAR, POWER])
    p.set_defaults(func=_trace)
    return parser


def run_command(argv: Sequence[str]) -> CommandResult:
    """Run one command without touching the process streams."""
    out: List[str] = []
    err: List[str] = []
    try:
        args = build_parser().parse_args(list(argv))
        code = args.func(args, out, err)
    except _UsageError as exc:
        err.append(str(exc))
        code = EXIT_INVALID
    except SystemExit as exc:  # --help
        code = int(exc.code or 0)
    except (DegenerateLaw, AfocalOrConjugateAtInfinity) as exc:
        err.append(f"{type(exc).__name__}: {exc}")
        code = EXIT_DEGENERATE
    except (OpticsError, ValueError, OSError) as exc:
        err.append(f"{type(exc).__name__}: {exc}")
        code = EXIT_INVALID
    stderr = "\n".join(err) + ("\n" if err else "")
    return CommandResult(code, "".join(out), stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    result = run_command(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(result.stdout)
    sys.stderr.write(result.stderr)
    return result.code


if __name__ == "__main__":
    sys.exit(main())
