"""Acceptance criteria, one test per check, each at its stated tolerance.

The terminal summary prints one PASS/FAIL line per test in this file.
"""

import math
import random
import time
from fractions import Fraction as F

import oracles
from achromatics import (
    AchromatTarget,
    ChainSpec,
    CompoundObjective,
    DegenerateLaw,
    ImagingQuery,
    OpticalMedium,
    RefractionPair,
    SpectralLine,
    chain_media,
    chromatic_focal_shift,
    derive_line_ratio_linear,
    derive_line_ratio_power,
    dollond_degeneracy_check,
    euler_focal_distance,
    euler_ratio_gap,
    interior_curvature_report,
    paraxial_trace,
    solve_achromat,
    trace_ray,
)
from achromatics.cli import run_command
from achromatics.paraxial import objective_surfaces
from achromatics.prescription_io import emit_prescription, load_bundled, parse_prescription
from achromatics.raytrace import paraxial_bfd, paraxial_limit_check

MEAN, RED = SpectralLine.MEAN, SpectralLine.RED
GLASS_PAIR = RefractionPair(F(31, 20), F(77, 50))


# 1. Linear-law achromats have zero power.

def test_c1_linear_achromats_have_zero_power(glass, water, linear_law):
    start = time.perf_counter()
    report = dollond_degeneracy_check(1000, glass, water, linear_law)
    elapsed = time.perf_counter() - start
    assert report.samples == 1000
    assert abs(report.max_power) <= 1e-12
    assert elapsed < 1.0


def test_c1_exact_mode_is_identically_zero(glass, water, linear_law):
    start = time.perf_counter()
    report = dollond_degeneracy_check(1000, glass, water, linear_law, exact=True)
    assert report.max_power == 0
    assert time.perf_counter() - start < 1.0


# 2. Linear-law water red ratio.

def test_c2_linear_water_red_exact():
    ratio = derive_line_ratio_linear(F(4, 3), GLASS_PAIR)
    assert ratio == F(73, 55)
    assert ratio == oracles.linear_law_red()


# 3. Power-law water red ratio and exponent.

def test_c3_power_law_water_red():
    ratio, exponent = derive_line_ratio_power(F(4, 3), GLASS_PAIR)
    assert abs(ratio - 1.3276807) <= 1e-6
    assert abs(exponent - 0.6564263) <= 1e-6
    assert abs(ratio - float(oracles.power_law_red())) <= 1e-14
    assert abs(exponent - float(oracles.power_law_exponent())) <= 1e-14


# 4. The 1 - alpha approximation improves tenfold per decade.

def test_c4_ratio_gap_decade_scaling():
    alpha = 0.6564263
    gaps = []
    for omega in (1e-2, 1e-3, 1e-4):
        ratio, _ = euler_ratio_gap(1 + omega, alpha)
        gaps.append(abs(ratio - (1 - alpha)))
    for big, small in zip(gaps, gaps[1:]):
        assert 8.0 <= big / small <= 12.0


# 5. Chained-media log identity.

def test_c5_chained_media_log_identity():
    rng = random.Random(1752)
    for _ in range(200):
        r = rng.uniform(1, 1.5)
        v = rng.uniform(1, 1.5)
        steps = rng.randint(1, 6)
        big_r, big_v = chain_media(ChainSpec(r, v, steps))
        lhs = math.log(big_r) * math.log(v)
        assert abs(lhs - math.log(big_v) * math.log(r)) <= 1e-13 * abs(lhs)


# 6. Unit-power achromat under the power law.

def test_c6_unit_power_achromat(glass, water, power_law):
    s = solve_achromat(AchromatTarget(1.0, power_law, glass, water))
    assert s.objective.c_f == 0
    assert s.objective.c_g == -s.objective.c_h
    assert abs(s.x - 44.6) <= 0.5
    assert abs(s.y + 25.2) <= 0.5
    assert abs(interior_curvature_report(s) - 22.3) <= 0.3
    assert abs(chromatic_focal_shift(s.objective, power_law)) <= 1e-9
    # the solver reports dx/dN
    assert math.isfinite(s.sensitivity) and abs(s.sensitivity) > 1e4


# 7. Closed form matches the zero-thickness recursion.

def test_c7_closed_form_matches_recursion():
    rng = random.Random(7)
    worst = 0.0
    for _ in range(1000):
        glass = OpticalMedium("g", rng.uniform(1.0, 2.0))
        water = OpticalMedium("w", rng.uniform(1.0, 2.0))
        obj = CompoundObjective(*[rng.uniform(-50, 50) for _ in range(4)], glass, water)
        a = rng.choice([math.inf, rng.uniform(0.1, 10)])
        closed = euler_focal_distance(obj, ImagingQuery(a))
        traced = paraxial_trace(objective_surfaces(obj), a)
        worst = max(worst, abs(closed - traced) / abs(traced))
    assert worst <= 1e-12


# 8. Exact meridional tracer on the solved achromat.

def test_c8_snell_residual(euler_rx, power_law):
    for line in (MEAN, RED):
        for h in (1e-4, 0.01, 0.02):
            history = []
            outcome = trace_ray(euler_rx, h, line, power_law, history=history)
            assert outcome.ok
            assert len(history) == 4
            assert max(step.snell_residual() for step in history) <= 1e-12


def test_c8_paraxial_convergence_order(euler_rx, power_law):
    for line in (MEAN, RED):
        assert abs(paraxial_limit_check(euler_rx, line, power_law) - 2.0) <= 0.2


def test_c8_spherical_aberration_grows_with_aperture(euler_rx, power_law):
    base = paraxial_bfd(euler_rx, MEAN, power_law)
    deviations = []
    for h in (0.01, 0.02, 0.05):
        outcome = trace_ray(euler_rx, h, MEAN, power_law)
        assert outcome.ok, f"h={h}: {outcome.status} at surface {outcome.surface}"
        deviations.append(abs(outcome.back_focal_distance - base))
    assert deviations[0] < deviations[1] < deviations[2]


def test_c8_small_aperture_lca(euler_solution, euler_rx, power_law):
    focal = 1 / euler_solution.target_power
    mean = trace_ray(euler_rx, 1e-4, MEAN, power_law).back_focal_distance
    red = trace_ray(euler_rx, 1e-4, RED, power_law).back_focal_distance
    assert abs(mean - red) <= 1e-6 * abs(focal)


# 9. Command line.

def test_c9_duel_is_deterministic():
    first = run_command(["duel", "--samples", "1000", "--seed", "1752"])
    second = run_command(["duel", "--samples", "1000", "--seed", "1752"])
    assert first.code == second.code == 0
    assert first.stdout.encode() == second.stdout.encode()


def test_c9_solve_linear_exits_2():
    result = run_command(["solve", "--law", "linear", "--power", "1"])
    assert result.code == 2
    assert DegenerateLaw.__name__ in result.stderr


def test_c9_prescription_round_trip():
    doc = parse_prescription(load_bundled())
    text = emit_prescription(doc)
    again = parse_prescription(text)
    assert again == doc
    assert emit_prescription(again) == text
    solved = run_command(["solve", "--power", "1"]).stdout
    assert parse_prescription(emit_prescription(parse_prescription(solved))) == parse_prescription(solved)
