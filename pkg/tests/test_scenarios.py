"""Tests for table builders, the recoil rules, and the exclusion family."""

import math

import numpy as np
import pytest

from pairabs.algebra import CHI, ETA, MU, PHI, PSI, VARPHI, validate_gram
from pairabs.scenarios import (
    ALL_PAIRS,
    CHOICES,
    Coefficients,
    ExclusionFamily,
    RecoilModel,
    ScenarioSpec,
    alpha_pair,
    build_choice_table,
    build_family_table,
    build_table,
    family_exclusion_coefficient,
    random_realizable_table,
)

ROOT2_INV = 1.0 / math.sqrt(2.0)


class TestRecoilModel:
    def test_default(self):
        assert RecoilModel().alpha0 == 0.9

    @pytest.mark.parametrize("bad", [0.0, -0.1, 1.5])
    def test_rejects_out_of_range(self, bad):
        with pytest.raises(ValueError, match="alpha0"):
            RecoilModel(bad)


class TestAlphaPair:
    def test_unit_overlap_gives_exactly_one(self):
        for alpha0 in (0.9, 0.5, 0.3, 1.0):
            assert alpha_pair(RecoilModel(alpha0), 1.0) == 1.0

    def test_zero_overlap_gives_exactly_alpha0(self):
        for alpha0 in (0.9, 0.5, 0.3):
            assert alpha_pair(RecoilModel(alpha0), 0.0) == alpha0

    def test_intermediate_value(self):
        assert alpha_pair(RecoilModel(0.9), 0.8) == pytest.approx(0.98, abs=1e-15)

    def test_complex_overlap_uses_real_part(self):
        assert alpha_pair(RecoilModel(0.9), 0.5 + 0.4j) == alpha_pair(RecoilModel(0.9), 0.5)


class TestCoefficients:
    def test_rejects_both_zero(self):
        with pytest.raises(ValueError, match="both vanish"):
            Coefficients(0.0, 0.0)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError, match="finite"):
            Coefficients(float("inf"), 0.0)

    def test_weight_sq(self):
        assert Coefficients(0.6, 0.8j).weight_sq == pytest.approx(1.0, abs=1e-15)


class TestChoiceTables:
    def test_choice_i_at_zero_sweep(self):
        table = build_choice_table(ScenarioSpec.for_choice("i"), 0.0)
        assert table.overlap(PSI, PHI) == 0.0
        assert table.overlap(PSI, CHI) == 0.0
        assert table.overlap(PHI, VARPHI) == 0.0
        assert table.overlap(PHI, CHI) == 0.0
        assert table.overlap(VARPHI, CHI) == 0.9

    @pytest.mark.parametrize("c", [0.0, 0.25, 0.5, 1.0])
    def test_choice_ii_phi_chi_chain(self, c):
        table = build_choice_table(ScenarioSpec.for_choice("ii"), c)
        assert table.overlap(PHI, CHI) == pytest.approx(0.72 * c, rel=1e-12)

    def test_one_recoil_diagonal_is_alpha0(self):
        for name in CHOICES:
            table = build_choice_table(ScenarioSpec.for_choice(name), 0.3)
            assert table.overlap(PSI.star(), PSI) == 0.9

    def test_one_recoil_cross_entry(self):
        c = 0.4
        table = build_choice_table(ScenarioSpec.for_choice("i"), c)
        assert table.overlap(PSI.star(), PHI) == pytest.approx(0.9 * c, abs=1e-15)
        # mirror orientation conjugates
        assert table.overlap(PHI, PSI.star()) == table.overlap(PSI.star(), PHI).conjugate()

    def test_two_recoil_entry_and_unit_starred_diagonal(self):
        c = 0.4
        model = RecoilModel()
        table = build_choice_table(ScenarioSpec.for_choice("i"), c, model)
        alpha = alpha_pair(model, c)
        assert table.overlap(PSI.star(), PHI.star()) == pytest.approx(alpha * alpha * c, abs=1e-15)
        assert table.overlap(PSI.star(), PSI.star()) == 1.0

    def test_product_reference_entries(self):
        table = build_choice_table(ScenarioSpec.for_choice("iv"), 0.2, RecoilModel(0.7))
        assert table.overlap(ETA.star(), ETA) == 0.7
        assert table.overlap(MU.star(), MU) == 0.7

    @pytest.mark.parametrize("name", CHOICES)
    def test_chain_relations_hold(self, name):
        spec = ScenarioSpec.for_choice(name)
        for c in np.linspace(0.0, 1.0, 21):
            table = build_choice_table(spec, float(c))
            assert abs(
                table.overlap(PSI, CHI)
                - table.overlap(PSI, VARPHI) * table.overlap(VARPHI, CHI)
            ) <= 1e-15
            assert abs(
                table.overlap(PHI, VARPHI)
                - table.overlap(PHI, PSI) * table.overlap(PSI, VARPHI)
            ) <= 1e-15
            assert abs(
                table.overlap(PHI, CHI)
                - table.overlap(PHI, VARPHI) * table.overlap(VARPHI, CHI)
            ) <= 1e-15

    @pytest.mark.parametrize("name", CHOICES)
    def test_gram_realizable_over_full_sweep(self, name):
        spec = ScenarioSpec.for_choice(name)
        for c in np.linspace(0.0, 1.0, 21):
            report = validate_gram(build_choice_table(spec, float(c)))
            assert report.realizable, (name, c, report.min_eigenvalue)

    def test_choice_i_midpoint_gram_example(self):
        table = build_choice_table(ScenarioSpec.for_choice("i"), 0.5)
        report = validate_gram(table, (PSI, PHI, VARPHI, CHI))
        assert report.realizable

    @pytest.mark.parametrize("c", [-0.1, 1.1])
    def test_rejects_sweep_out_of_range(self, c):
        with pytest.raises(ValueError, match=r"\[0, 1\]"):
            build_choice_table(ScenarioSpec.for_choice("i"), c)

    def test_unknown_choice(self):
        with pytest.raises(ValueError, match="unknown choice"):
            ScenarioSpec.for_choice("v")

    def test_custom_spec_sweeps_unpinned_pairs(self):
        spec = ScenarioSpec(choice="custom", fixed_overlaps={(PSI, PHI): 0.3})
        table = build_choice_table(spec, 0.6)
        assert table.overlap(PSI, PHI) == 0.3
        assert table.overlap(PSI, VARPHI) == 0.6
        assert table.overlap(VARPHI, CHI) == 0.6

    def test_build_table_requires_all_pairs(self):
        with pytest.raises(ValueError, match="missing bare overlap"):
            build_table({(PSI, PHI): 0.5})

    def test_build_table_accepts_either_orientation(self):
        overlaps = {pair: 0.1 for pair in ALL_PAIRS[1:]}
        overlaps[(PHI, PSI)] = 0.2 + 0.1j
        table = build_table(overlaps)
        assert table.overlap(PSI, PHI) == 0.2 - 0.1j


class TestExclusionFamily:
    def test_phi_equals_psi_when_c_is_one(self):
        fam = ExclusionFamily(c=1.0, d=0.0, e=1.0, f=0.0, g=0.0, h=1.0)
        table = build_family_table(fam)
        assert table.overlap(PSI, PHI) == 1.0

    def test_equal_weight_components_align(self):
        fam = ExclusionFamily(
            c=ROOT2_INV, d=ROOT2_INV, e=ROOT2_INV, f=ROOT2_INV, g=ROOT2_INV, h=ROOT2_INV
        )
        table = build_family_table(fam)
        assert table.overlap(VARPHI, CHI) == pytest.approx(1.0, abs=1e-15)

    def test_orthogonal_component_pairing(self):
        fam = ExclusionFamily(c=0.0, d=1.0, e=0.0, f=1.0, g=1.0, h=0.0)
        table = build_family_table(fam)
        assert table.overlap(PHI, VARPHI) == 1.0
        assert table.overlap(PSI, PHI) == 0.0

    def test_real_family_reproduces_exact_values(self):
        fam = ExclusionFamily.equal_weight(0.6)
        table = build_family_table(fam)
        assert table.overlap(PSI, PHI) == 0.6
        assert table.overlap(PHI, PHI) == 1.0

    def test_rejects_unnormalized_coefficients(self):
        with pytest.raises(ValueError, match="violate"):
            ExclusionFamily(c=0.9, d=0.9, e=1.0, f=0.0, g=1.0, h=0.0)

    def test_equal_weight_closure(self):
        c = 0.28
        fam = ExclusionFamily.equal_weight(c)
        d = math.sqrt(1.0 - c * c)
        assert fam.d == pytest.approx(d, abs=1e-15)
        assert fam.g == pytest.approx((c + d) * ROOT2_INV, abs=1e-15)
        assert fam.h == pytest.approx((c - d) * ROOT2_INV, abs=1e-15)

    def test_equal_weight_explicit_branch(self):
        fam = ExclusionFamily.equal_weight(0.6, d=-0.8)
        assert fam.d == -0.8


class TestFamilyExclusionCoefficient:
    def test_without_superposition_reduces_to_pauli_condition(self):
        fam = ExclusionFamily.equal_weight(0.3)
        coeffs = Coefficients(0.7, 0.0)
        value = family_exclusion_coefficient(coeffs, fam)
        assert value == pytest.approx(0.7 * fam.d, abs=1e-15)
        degenerate = ExclusionFamily.equal_weight(1.0)  # d = 0, phi = psi
        assert family_exclusion_coefficient(coeffs, degenerate) == pytest.approx(0.0, abs=1e-15)

    def test_equal_weight_family_gives_d_times_a_minus_b(self):
        fam = ExclusionFamily.equal_weight(0.5)
        for a, b in ((0.9, 0.2), (0.3 + 0.1j, 0.4 - 0.2j)):
            coeffs = Coefficients(a, b)
            expected = fam.d * (coeffs.a - coeffs.b)
            assert family_exclusion_coefficient(coeffs, fam) == pytest.approx(
                expected, abs=1e-14
            )

    def test_vanishes_identically_when_d_is_zero(self):
        fam = ExclusionFamily.equal_weight(1.0)
        for a, b in ((1.0, 0.0), (0.3, 0.8), (0.5j, 0.2)):
            assert abs(family_exclusion_coefficient(Coefficients(a, b), fam)) < 1e-15

    def test_linear_in_coefficients(self):
        fam = ExclusionFamily.equal_weight(0.4)
        f = lambda a, b: family_exclusion_coefficient(Coefficients(a, b), fam)
        a1, b1, a2, b2 = 0.3 + 0.2j, 0.5, -0.1, 0.7 - 0.4j
        assert f(a1 + a2, b1 + b2) == pytest.approx(f(a1, b1) + f(a2, b2), abs=1e-14)
        assert f(2.5 * a1, 2.5 * b1) == pytest.approx(2.5 * f(a1, b1), abs=1e-14)


class TestRandomRealizableTable:
    def test_tables_pass_gram_check(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            table = random_realizable_table(rng)
            assert validate_gram(table).realizable

    def test_entries_within_unit_disk(self):
        rng = np.random.default_rng(5)
        table = random_realizable_table(rng)
        for x, y in ALL_PAIRS:
            assert abs(table.overlap(x, y)) <= 1.0
