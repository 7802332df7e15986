import pytest

from achromatics import (
    AchromatTarget,
    DispersionLaw,
    Prescription,
    Surface,
    reference_glass,
    reference_water,
    solve_achromat,
)


@pytest.fixture
def glass():
    return reference_glass()


@pytest.fixture
def water():
    return reference_water()


@pytest.fixture
def linear_law(glass):
    return DispersionLaw.anchored_to("linear", glass)


@pytest.fixture
def power_law(glass):
    return DispersionLaw.anchored_to("power", glass)


@pytest.fixture
def euler_solution(glass, water, power_law):
    return solve_achromat(AchromatTarget(1.0, power_law, glass, water))


def objective_prescription(obj, aperture=1.0):
    names = [obj.glass.name, obj.water.name, obj.glass.name, "air"]
    surfaces = [Surface(c, 0.0, name, aperture) for c, name in zip(obj.curvatures, names)]
    return Prescription(surfaces, {obj.glass.name: obj.glass, obj.water.name: obj.water})


@pytest.fixture
def euler_rx(euler_solution):
    return objective_prescription(euler_solution.objective)


def pytest_terminal_summary(terminalreporter):
    results = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py::" in getattr(rep, "nodeid", "") and rep.when == "call":
                results.append((rep.nodeid.split("::")[-1], outcome))
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(results):
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {name}")
