"""Inequality checkers: constants, tight fixtures, and random sweeps."""

import math

import numpy as np
import pytest

from latticetf import (InputError, LatticeSignal, OrthonormalityError,
                       ProductFormError, StftPlan, SupportBox, TileSet,
                       check_cardinality_bound, check_dispersion_cardinality,
                       check_donoho_stark, check_entropy, check_heisenberg,
                       check_joint_concentration, check_local_corollary,
                       check_local_uncertainty, check_orthonormal_sum,
                       check_small_set, check_support_bound,
                       check_support_bound_p, corollary_constant, dispersion,
                       heisenberg_constant, local_uncertainty_constant,
                       moment_norm_sq, phase_space_entropy, stft)
from latticetf.harness import orthonormal_family
from latticetf.uncertainty import moment_norm_parts

RNG = np.random.default_rng(23)


def delta_pair():
    f = LatticeSignal.delta(1)
    g = LatticeSignal.delta(1)
    return f, g, StftPlan.for_half_widths(1, 0, 0, 8)


def random_instance(nf=3, ng=2, dimension=1):
    f = LatticeSignal.random_complex(RNG, SupportBox(dimension, nf))
    g = LatticeSignal.random_complex(RNG, SupportBox(dimension, ng))
    return f, g, StftPlan(f.box, g.box)


def aligned_tiles(plan, triples):
    points = plan.grid.points_per_axis
    return TileSet.from_tiles(plan.dimension, [
        (m, tuple(a / points for a in lo), tuple(b / points for b in hi))
        for m, lo, hi in triples])


class TestConstants:
    def test_heisenberg_one_dimensional(self):
        c, eps0 = heisenberg_constant(1.0, 1)
        assert c == pytest.approx(1.0 / 54.0, abs=1e-8)
        assert eps0 == pytest.approx(1.0 / 3.0, abs=1e-6)

    def test_heisenberg_eps_closed_form(self):
        # maximizer of eps^{2s}(1 - V_n eps^n) is
        # (2s / ((2s + n) V_n))^{1/n}, capped at 1/2
        for s, n in [(0.5, 1), (1.0, 2), (2.0, 1), (1.5, 2)]:
            from latticetf import unit_ball_volume
            v_n = unit_ball_volume(n)
            want = (2.0 * s / ((2.0 * s + n) * v_n)) ** (1.0 / n)
            want = min(want, 0.5)
            _, eps0 = heisenberg_constant(s, n)
            assert eps0 == pytest.approx(want, abs=1e-6)

    def test_local_constant_one_dimensional(self):
        c, eps0 = local_uncertainty_constant(1.0, 1)
        assert c == pytest.approx(3.0 * math.sqrt(3.0), abs=1e-7)
        assert eps0 == pytest.approx(1.0 / 3.0, abs=1e-6)

    def test_corollary_closed_form(self):
        # n = 1, s = 1: h(r) = 27 * 2r + r^{-2} on r <= 1/2 has its
        # minimum at r = 1/3 with h = 27, so c_s = 27^{-1/2}
        c, r_star = corollary_constant(1.0, 1, 8.0)
        assert c == pytest.approx(27.0 ** -0.5, abs=1e-8)
        assert r_star == pytest.approx(1.0 / 3.0, abs=1e-5)

    def test_corollary_grid_refinement_stable(self):
        coarse = corollary_constant(1.0, 2, 10.0, coarse=200)
        fine = corollary_constant(1.0, 2, 10.0, coarse=800)
        assert coarse.value == pytest.approx(fine.value, abs=1e-6)

    def test_invalid_parameters(self):
        with pytest.raises(InputError):
            heisenberg_constant(0.0, 1)
        with pytest.raises(InputError):
            corollary_constant(1.0, 1, -2.0)


class TestFunctionals:
    def test_dispersion_delta_delta(self):
        f, g, plan = delta_pair()
        field = stft(f, g, plan)
        assert dispersion(field, 2.0) == pytest.approx(
            math.sqrt(1.0 / 12.0), abs=1e-6)
        assert dispersion(field, 1.0) == pytest.approx(0.25, abs=1e-9)

    def test_moment_parts_delta_delta(self):
        # |V| = 1 on the fiber {0} x T: lattice moment vanishes, torus
        # moment integrates |w|^{2s}
        f, g, plan = delta_pair()
        field = stft(f, g, plan)
        parts = moment_norm_parts(field, 1.0)
        assert parts.lattice_sq == pytest.approx(0.0, abs=1e-15)
        assert parts.torus_sq == pytest.approx(1.0 / 12.0, abs=1e-6)
        assert parts.joint_sq == pytest.approx(parts.torus_sq, abs=1e-12)

    def test_entropy_two_point_uniform(self):
        # f = g = (delta_0 + delta_1)/sqrt(2): spectrogram density is
        # (1 + cos 2 pi w)^2/4 on the middle fiber and 1/16 on the two
        # outer ones; the entropy integral evaluates to ln 4 - 1/2
        h = LatticeSignal.from_entries(
            1, 1, [((0,), 1 / math.sqrt(2)), ((1,), 1 / math.sqrt(2))])
        plan = StftPlan(h.box, h.box)
        field = stft(h, h, plan)
        assert phase_space_entropy(field) == pytest.approx(
            math.log(4.0) - 0.5, abs=1e-6)

    def test_entropy_scaling_identity(self):
        # E(|cV|^2) = |c|^2 E(|V|^2) - |c|^2 ln(|c|^2) ||V||^2
        f, g, plan = random_instance(2, 2)
        field = stft(f, g, plan)
        c = 0.35
        scaled = field.scaled(c)
        lhs = phase_space_entropy(scaled)
        c_sq = c * c
        rhs = (c_sq * phase_space_entropy(field)
               - c_sq * math.log(c_sq) * field.norm_sq())
        assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_moment_requires_positive_s(self):
        f, g, plan = random_instance(1, 1)
        with pytest.raises(InputError):
            moment_norm_sq(stft(f, g, plan), 0.0)


class TestTightFixtures:
    """Delta/delta data meets several bounds with equality."""

    def test_small_set_zero_slack(self):
        f, g, plan = delta_pair()
        sigma = aligned_tiles(plan, [((0,), (0,), (4,))])  # {0} x [0, 1/2)
        report = check_small_set(f, g, sigma, plan)
        assert report.slack == pytest.approx(0.0, abs=1e-9)

    def test_support_bound_zero_slack(self):
        f, g, plan = delta_pair()
        sigma = aligned_tiles(plan, [((0,), (0,), (4,))])
        report = check_support_bound(f, g, sigma, plan)
        assert report.slack == pytest.approx(0.0, abs=1e-9)

    def test_joint_concentration_zero_slack(self):
        f, g, plan = delta_pair()
        sigma = aligned_tiles(plan, [((0,), (0,), (4,))])
        report = check_joint_concentration(f, g, [(0,)], sigma, plan)
        assert report.slack == pytest.approx(0.0, abs=1e-9)

    def test_entropy_zero_slack(self):
        f, g, plan = delta_pair()
        report = check_entropy(f, g, plan)
        assert report.slack == pytest.approx(0.0, abs=1e-9)

    def test_donoho_stark_tight_product(self):
        # all mass on {0} x T; taking T itself gives measure 1 - eps
        f, g, plan = delta_pair()
        sigma = aligned_tiles(plan, [((0,), (0,), (8,))])
        report = check_donoho_stark(f, g, sigma, 0.0, plan)
        assert report.status == "checked"
        assert report.slack == pytest.approx(0.0, abs=1e-12)

    def test_support_bound_p_delta(self):
        # eps = 0 on the full fiber: measure 1 >= 1^{p/(p-2)}
        f, g, plan = delta_pair()
        sigma = aligned_tiles(plan, [((0,), (0,), (8,))])
        report = check_support_bound_p(f, g, sigma, 4.0, plan)
        assert report.slack == pytest.approx(0.0, abs=1e-9)

    def test_cardinality_delta_family(self):
        # deltas at 0, +-1 are eps-concentrated on B_{3/2} for the delta
        # window once eps covers the half-open tile loss
        family = [LatticeSignal.delta(1, (k,), 2) for k in (-1, 0, 1)]
        g = LatticeSignal.delta(1)
        plan = StftPlan.for_half_widths(1, 2, 0, 16)
        report = check_cardinality_bound(family, g, 1.5, 0.5, plan)
        assert report.witness["qualifying"] == [0, 1, 2]
        # ball measure 3.0, eps 1/2: bound 6 >= 3
        assert report.lhs == pytest.approx(6.0)
        assert report.rhs == 3.0
        assert report.passed


class TestCheckerValidation:
    def test_orthonormal_sum_rejects_skew_family(self):
        f, g, plan = random_instance(2, 2)
        family = [f.scaled(1.0 / f.norm()), f.scaled(1.0 / f.norm())]
        sigma = aligned_tiles(plan, [((0,), (0,), (8,))])
        with pytest.raises(OrthonormalityError):
            check_orthonormal_sum(family, g, sigma, plan)

    def test_orthonormal_sum_rejects_unnormalized(self):
        f, g, plan = random_instance(2, 2)
        sigma = aligned_tiles(plan, [((0,), (0,), (8,))])
        with pytest.raises(OrthonormalityError):
            check_orthonormal_sum([f.scaled(2.0 / f.norm())], g, sigma,
                                  plan)

    def test_donoho_stark_rejects_non_product(self):
        f, g, plan = random_instance(2, 2)
        sigma = aligned_tiles(plan, [((0,), (0,), (4,)),
                                     ((1,), (4,), (8,))])
        with pytest.raises(ProductFormError):
            check_donoho_stark(f, g, sigma, 0.5, plan)

    def test_donoho_stark_not_applicable_when_mass_low(self):
        f, g, plan = random_instance(2, 2)
        points = plan.grid.points_per_axis
        sigma = TileSet.product(1, [(0,)], [((0.0,), (1.0 / points,))])
        report = check_donoho_stark(f, g, sigma, 0.01, plan)
        assert report.status == "not-applicable"
        assert report.passed

    def test_small_set_rejects_large_measure(self):
        f, g, plan = random_instance(2, 2)
        sigma = TileSet.full_fibers(1, [(0,), (1,)])
        with pytest.raises(InputError):
            check_small_set(f, g, sigma, plan)

    def test_support_bound_p_rejects_small_p(self):
        f, g, plan = random_instance(2, 2)
        sigma = aligned_tiles(plan, [((0,), (0,), (4,))])
        with pytest.raises(InputError):
            check_support_bound_p(f, g, sigma, 2.0, plan)

    def test_cardinality_rejects_unnormalized_window(self):
        family = [LatticeSignal.delta(1, (0,), 1)]
        g = LatticeSignal.delta(1).scaled(2.0)
        plan = StftPlan.for_half_widths(1, 1, 0)
        with pytest.raises(InputError):
            check_cardinality_bound(family, g, 1.0, 0.5, plan)

    def test_cardinality_rejects_radius_beyond_box(self):
        family = [LatticeSignal.delta(1, (0,), 1)]
        g = LatticeSignal.delta(1)
        plan = StftPlan.for_half_widths(1, 1, 0)
        with pytest.raises(InputError):
            check_cardinality_bound(family, g, 5.0, 0.5, plan)


class TestRandomSweeps:
    def test_heisenberg_random(self):
        for s in (0.5, 1.0, 2.0):
            f, g, plan = random_instance(3, 2)
            report = check_heisenberg(f, g, s, plan)
            assert report.slack >= -report.tolerance
            assert report.witness["split_moment_slack"] >= -1e-6

    def test_local_uncertainty_random(self):
        for _ in range(5):
            f, g, plan = random_instance(2, 2)
            sigma = aligned_tiles(plan, [((0,), (2,), (11,)),
                                         ((-1,), (0,), (5,))])
            report = check_local_uncertainty(f, g, 1.0, sigma, plan)
            assert report.slack >= -report.tolerance

    def test_local_corollary_random(self):
        for s in (0.5, 1.0, 2.0):
            f, g, plan = random_instance(2, 2)
            report = check_local_corollary(f, g, s, plan)
            assert report.slack >= -report.tolerance

    def test_entropy_random(self):
        for _ in range(5):
            f, g, plan = random_instance(3, 2)
            report = check_entropy(f, g, plan)
            assert report.slack >= -report.tolerance

    def test_orthonormal_sum_full_basis(self):
        # the full delta basis saturates sum_k <=: with Sigma covering
        # the whole output box the left side equals the family size
        plan = StftPlan.for_half_widths(1, 1, 1)
        family = [LatticeSignal.delta(1, (k,), 1) for k in (-1, 0, 1)]
        g = LatticeSignal.random_complex(RNG, SupportBox(1, 1))
        sigma = TileSet.full_fibers(1, list(plan.output_box.indices()))
        report = check_orthonormal_sum(family, g, sigma, plan)
        assert report.lhs == pytest.approx(3.0, abs=1e-10)
        assert report.slack >= -report.tolerance

    def test_dispersion_cardinality_family(self):
        plan = StftPlan.for_half_widths(1, 2, 1)
        family = orthonormal_family(np.random.default_rng(3),
                                    plan.signal_box, 4)
        g = LatticeSignal.delta(1, (0,), 1)
        dispersions = [dispersion(stft(sig, g, plan), 2.0)
                       for sig in family]
        bound = float(np.median(dispersions))
        report = check_dispersion_cardinality(family, g, 2.0, bound, plan)
        assert report.slack >= -report.tolerance
        excluded = report.witness["excluded"]
        assert all(dispersions[i] > bound for i in excluded)


class TestReportShape:
    def test_witness_fields_present(self):
        f, g, plan = random_instance(2, 2)
        sigma = aligned_tiles(plan, [((0,), (0,), (4,))])
        report = check_support_bound(f, g, sigma, plan)
        for key in ("signal_norm", "window_norm", "eps_sigma",
                    "sigma_measure"):
            assert key in report.witness

    def test_to_dict_round_trips_json(self):
        import json
        f, g, plan = random_instance(1, 1)
        report = check_entropy(f, g, plan)
        blob = json.dumps(report.to_dict())
        assert json.loads(blob)["name"] == "entropy"

    def test_csv_row_layout(self):
        f, g, plan = random_instance(1, 1)
        report = check_entropy(f, g, plan)
        row = report.csv_row().split(",")
        header = report.CSV_HEADER.split(",")
        assert len(row) == len(header)
        assert row[0] == "entropy"
