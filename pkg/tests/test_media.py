import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

import oracles
from achromatics import (
    ChainSpec,
    DegenerateReference,
    DispersionLaw,
    OpticalMedium,
    OutOfDomain,
    RefractionPair,
    SpectralLine,
    chain_media,
    derive_line_ratio_linear,
    derive_line_ratio_power,
    euler_ratio_gap,
    line_ratio,
)
from achromatics.errors import MissingLineData

GLASS_PAIR = RefractionPair(F(31, 20), F(77, 50))

# 60-digit values from tests/oracles.py, frozen.
POWER_EXPONENT = 0.65642632209647044870
POWER_WATER_RED = 1.32768037891697380728


def test_spectral_line_order():
    assert SpectralLine.RED < SpectralLine.MEAN < SpectralLine.VIOLET
    assert SpectralLine.parse("least_refrangible") is SpectralLine.RED
    assert SpectralLine.parse("Violet") is SpectralLine.VIOLET
    with pytest.raises(ValueError):
        SpectralLine.parse("green")


class TestLinearLaw:
    def test_water_red_is_exact(self):
        assert derive_line_ratio_linear(F(4, 3), GLASS_PAIR) == F(73, 55)

    def test_matches_proportion_oracle(self):
        assert derive_line_ratio_linear(F(4, 3), GLASS_PAIR) == oracles.linear_law_red()

    def test_reference_medium_inherits_its_line(self):
        assert derive_line_ratio_linear(F(31, 20), GLASS_PAIR) == F(77, 50)

    def test_zero_dispersion_reference(self):
        assert derive_line_ratio_linear(F(4, 3), RefractionPair(F(31, 20), F(31, 20))) == F(4, 3)

    def test_float_inputs(self):
        assert derive_line_ratio_linear(4 / 3, RefractionPair(1.55, 1.54)) == pytest.approx(73 / 55, rel=1e-15)

    def test_degenerate_reference(self):
        with pytest.raises(DegenerateReference):
            derive_line_ratio_linear(F(4, 3), RefractionPair(1, F(99, 100)))


class TestPowerLaw:
    def test_water_red(self):
        ratio, exponent = derive_line_ratio_power(F(4, 3), GLASS_PAIR)
        assert ratio == pytest.approx(1.3276807, abs=1e-6)
        assert exponent == pytest.approx(0.6564263, abs=1e-6)
        assert ratio == pytest.approx(POWER_WATER_RED, rel=1e-14)
        assert exponent == pytest.approx(POWER_EXPONENT, rel=1e-14)

    def test_live_mpmath_oracle(self):
        ratio, exponent = derive_line_ratio_power(F(4, 3), GLASS_PAIR)
        assert abs(ratio - float(oracles.power_law_red())) < 1e-14
        assert abs(exponent - float(oracles.power_law_exponent())) < 1e-14

    def test_vacuum(self):
        assert derive_line_ratio_power(1, GLASS_PAIR) == (1.0, 0.0)

    def test_identity_exponent(self):
        ratio, exponent = derive_line_ratio_power(F(31, 20), GLASS_PAIR)
        assert exponent == 1.0
        assert ratio == float(F(77, 50))

    def test_errors(self):
        with pytest.raises(DegenerateReference):
            derive_line_ratio_power(F(4, 3), RefractionPair(1, F(99, 100)))
        with pytest.raises(OutOfDomain):
            derive_line_ratio_power(0.9, GLASS_PAIR)


class TestRatioGap:
    def test_example(self):
        ratio, limit = euler_ratio_gap(1.001, 0.6564263)
        assert ratio == pytest.approx(0.343687, abs=1e-5)
        assert limit == pytest.approx(0.3435737, abs=1e-12)
        assert ratio == pytest.approx(float(oracles.ratio_gap(F(1001, 1000), "0.6564263")[0]), rel=1e-12)

    def test_alpha_one(self):
        assert euler_ratio_gap(1.7, 1) == (0.0, 0.0)

    @pytest.mark.parametrize("omega", [1e-2, 1e-3, 1e-4, 1e-6])
    def test_against_oracle(self, omega):
        ratio, _ = euler_ratio_gap(F(1) + F(omega), 0.6564263)
        expected, _ = oracles.ratio_gap(F(1) + F(omega), "0.6564263")
        assert ratio == pytest.approx(float(expected), rel=1e-12)

    def test_gap_shrinks_tenfold_per_decade(self):
        gaps = [abs(euler_ratio_gap(1 + w, 0.6564263).ratio - (1 - 0.6564263)) for w in (1e-2, 1e-3, 1e-4)]
        # oracle gaps: 1.1226e-3, 1.1271e-4, 1.1276e-5
        for big, small in zip(gaps, gaps[1:]):
            assert big / small == pytest.approx(10, rel=0.2)

    def test_domain(self):
        with pytest.raises(OutOfDomain):
            euler_ratio_gap(1, 0.5)
        with pytest.raises(OutOfDomain):
            euler_ratio_gap(1.5, 0)


class TestChain:
    def test_three_steps(self):
        red, violet = chain_media(ChainSpec(1.02, 1.025, 3))
        assert red == pytest.approx(1.061208, rel=1e-15)
        assert violet == pytest.approx(1.076890625, rel=1e-15)
        assert red == pytest.approx(oracles.repeated_product(1.02, 3), rel=1e-15)

    def test_empty_chain(self):
        assert chain_media(ChainSpec(1.3, 1.4, 0)) == (1, 1)

    def test_symmetric(self):
        red, violet = chain_media(ChainSpec(1.01, 1.01, 5))
        assert red == violet

    def test_exact_rationals(self):
        assert chain_media(ChainSpec(F(51, 50), F(41, 40), 2)) == (F(51, 50) ** 2, F(41, 40) ** 2)

    def test_rejects_negative_steps(self):
        with pytest.raises(ValueError):
            ChainSpec(1.1, 1.2, -1)

    @given(
        st.floats(1.0001, 2.0), st.floats(1.0001, 2.0), st.integers(0, 40), st.data()
    )
    def test_composition(self, r, v, steps, data):
        j = data.draw(st.integers(0, steps))
        a = chain_media(ChainSpec(r, v, j))
        b = chain_media(ChainSpec(r, v, steps - j))
        whole = chain_media(ChainSpec(r, v, steps))
        assert a[0] * b[0] == pytest.approx(whole[0], rel=1e-13)
        assert a[1] * b[1] == pytest.approx(whole[1], rel=1e-13)

    @given(st.floats(1.0001, 1.9999), st.floats(1.0001, 1.9999), st.integers(1, 40))
    def test_log_ratio_invariance(self, r, v, steps):
        big_r, big_v = chain_media(ChainSpec(r, v, steps))
        lhs = math.log(big_r) * math.log(v)
        assert abs(lhs - math.log(big_v) * math.log(r)) <= 1e-13 * abs(lhs)


class TestLineRatio:
    def test_law_derived(self, water, linear_law):
        assert line_ratio(water, SpectralLine.RED, linear_law) == F(73, 55)

    def test_mean_ignores_law(self, water, power_law):
        assert line_ratio(water, SpectralLine.MEAN, power_law) == F(4, 3)
        assert line_ratio(water, SpectralLine.MEAN, None) == F(4, 3)

    def test_explicit_wins(self, glass, water):
        other = DispersionLaw("power", RefractionPair(F(3, 2), F(149, 100)))
        assert line_ratio(glass, SpectralLine.RED, other) == F(77, 50)

    def test_violet_needs_reference(self, water, power_law):
        with pytest.raises(MissingLineData):
            line_ratio(water, SpectralLine.VIOLET, power_law)

    def test_violet_through_same_law(self, water):
        glass = OpticalMedium("glass", F(31, 20), {SpectralLine.RED: F(77, 50), SpectralLine.VIOLET: F(39, 25)})
        law = DispersionLaw.anchored_to("linear", glass)
        violet = line_ratio(water, SpectralLine.VIOLET, law)
        assert violet == derive_line_ratio_linear(F(4, 3), RefractionPair(F(31, 20), F(39, 25), SpectralLine.VIOLET))
        assert violet > F(4, 3)

    def test_air_needs_no_law(self):
        assert line_ratio(OpticalMedium("air", 1), SpectralLine.RED, None) == 1


def test_medium_validation():
    with pytest.raises(ValueError):
        OpticalMedium("bad", 1.5, {SpectralLine.RED: 1.6})
    with pytest.raises(OutOfDomain):
        OpticalMedium("bad", -1)


@given(st.floats(1e-4, 0.05), st.floats(0.3, 0.95), st.floats(0.2, 3.0))
def test_laws_agree_to_first_order(omega, alpha, c):
    def gap(w):
        ref = RefractionPair(1 + w, (1 + w) ** alpha)
        target = 1 + c * w
        return abs(derive_line_ratio_linear(target, ref) - derive_line_ratio_power(target, ref).ratio)

    g1, g2 = gap(omega), gap(omega / 2)
    if g1 > 1e-13:
        assert g1 / g2 == pytest.approx(4, rel=0.1)


@given(st.floats(1.01, 2.0), st.floats(1e-4, 0.2), st.floats(1.0001, 2.0), st.sampled_from(["linear", "power"]))
def test_red_stays_below_mean(m, spread, n, kind):
    ref = RefractionPair(m, max(1.000001, m - spread))
    law = DispersionLaw(kind, ref)
    assert law.derive(n, SpectralLine.RED) < n
