"""Release gate: ten numbered checks with pinned tolerances.

Each test is one gate criterion; the -v status line of each test is the
pass/fail record for that criterion.  Trial counts, tolerances, and
runtime budgets are part of the contract and must not be loosened.
"""

import json
import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from latticetf import (ConcentrationOperator, LatticeSignal, StftPlan,
                       SupportBox, TileSet, ball_measure, dispersion,
                       heisenberg_constant, hs_norm_sq, invert,
                       kernel_field, lattice_count, op_norm, op_norm_dense,
                       phase_space_inner, reproducing_kernel, stft)
from latticetf.harness import (CampaignConfig, random_aligned_tileset,
                               random_window, run_campaign)
from latticetf.uncertainty import (check_entropy, check_joint_concentration,
                                   check_small_set, check_support_bound)

TRIG_EXACT = 1e-8
SMOOTH = 1e-6

SIGMA_CHECKERS = (
    "orthonormal_sum", "donoho_stark", "small_set", "support_bound",
    "support_bound_p", "joint_concentration", "cardinality",
    "dispersion_cardinality", "heisenberg", "local_uncertainty",
    "local_corollary", "entropy",
)
EXACT_CLASS = {
    "orthonormal_sum", "donoho_stark", "small_set", "support_bound",
    "support_bound_p", "joint_concentration", "cardinality",
}


def random_pair(rng, max_half=6):
    n = int(rng.integers(1, 3))
    f = LatticeSignal.random_complex(
        rng, SupportBox(n, int(rng.integers(1, max_half + 1))))
    g = LatticeSignal.random_complex(
        rng, SupportBox(n, int(rng.integers(1, max_half + 1))))
    return f, g, StftPlan(f.box, g.box)


def run_verify(out_path, *extra):
    proc = subprocess.run(
        [sys.executable, "-m", "latticetf.cli", "verify",
         "--trials", "3", "--seed", "12", "--max-half-width", "4",
         "--out", out_path, *extra],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stdout + proc.stderr


def test_criterion_01_plancherel_energy():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    for _ in range(500):
        f, g, plan = random_pair(rng)
        field = stft(f, g, plan)
        product = f.norm() ** 2 * g.norm() ** 2
        assert abs(field.norm_sq() - product) <= 1e-12 * product
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0, f"500 trials took {elapsed:.1f} s"


def test_criterion_02_orthogonality_relation():
    rng = np.random.default_rng(102)
    for _ in range(500):
        f1, g1, plan = random_pair(rng)
        f2 = LatticeSignal.random_complex(rng, f1.box)
        g2 = LatticeSignal.random_complex(rng, g1.box)
        left = phase_space_inner(stft(f1, g1, plan), stft(f2, g2, plan))
        right = f1.inner(f2) * g2.inner(g1)
        scale = (f1.norm() * f2.norm() * g1.norm() * g2.norm())
        assert abs(left - right) <= 1e-12 * scale


def test_criterion_03_inversion():
    rng = np.random.default_rng(103)
    for trial in range(200):
        f, g, plan = random_pair(rng)
        field = stft(f, g, plan)
        if trial % 2 == 0:
            back = invert(field, g, plan=plan)
        else:
            gamma = LatticeSignal.random_complex(rng, g.box)
            while abs(gamma.inner(g)) < 1e-6 * gamma.norm() * g.norm():
                gamma = LatticeSignal.random_complex(rng, g.box)
            back = invert(field, g, synthesis=gamma, plan=plan)
        recovered = back.crop(f.box)
        err = float(np.max(np.abs(recovered.values - f.values)))
        assert err <= 1e-10 * f.norm()


def test_criterion_04_kernel_bound_and_reproducing():
    rng = np.random.default_rng(104)
    for wi in range(100):
        n = 1 + wi % 2
        g = LatticeSignal.random_complex(
            rng, SupportBox(n, int(rng.integers(1, 4))))
        top = 2 * g.box.half_width + 1
        for _ in range(100):
            at = (tuple(int(v) for v in rng.integers(-top, top + 1, n)),
                  tuple(float(v) for v in rng.uniform(0, 1, n)))
            to = (tuple(int(v) for v in rng.integers(-top, top + 1, n)),
                  tuple(float(v) for v in rng.uniform(0, 1, n)))
            assert abs(reproducing_kernel(g, at, to)) <= 1.0 + 1e-12
        if wi % 10 == 0:
            f = LatticeSignal.random_complex(rng, SupportBox(n, 2))
            plan = StftPlan(f.box, g.box)
            field = stft(f, g, plan)
            fractions = plan.grid.node_fractions()
            for _ in range(5):
                m = tuple(int(v) for v in rng.integers(
                    -plan.output_box.half_width,
                    plan.output_box.half_width + 1, n))
                node = tuple(int(v) for v in rng.integers(
                    0, plan.grid.points_per_axis, n))
                w = tuple(float(fractions[j]) for j in node)
                kernel = kernel_field(g, (m, w), plan)
                paired = phase_space_inner(field, kernel)
                direct = field.values[field.box.offset(m)][node]
                assert abs(paired - direct) <= 1e-10 * f.norm() * g.norm()


def test_criterion_05_hilbert_schmidt_identity():
    rng = np.random.default_rng(105)
    for trial in range(50):
        n = 1 + trial % 2
        g = random_window(rng, SupportBox(n, int(rng.integers(1, 3))))
        plan = StftPlan.for_half_widths(n, int(rng.integers(2, 4 - n + 2)),
                                        g.box.half_width)
        sigma = random_aligned_tileset(rng, plan.output_box, plan.grid)
        op = ConcentrationOperator(g, sigma, plan)
        hs_sq = hs_norm_sq(op)
        assert abs(hs_sq - op.grid_measure()) <= 1e-8
        assert op_norm(op, seed=trial) <= math.sqrt(hs_sq) + 1e-6


def test_criterion_06_prolate_oracle():
    g = LatticeSignal.delta(1)
    plan = StftPlan.for_half_widths(1, 4, 0)
    sigma = TileSet.from_tiles(1, [((0,), (0.0,), (0.5,))])
    op = ConcentrationOperator(g, sigma, plan)
    assert abs(op_norm(op) - op_norm_dense(op)) <= 1e-8


@pytest.mark.parametrize("dim,cap,budget", [(1, 6, 600.0), (2, 3, 1800.0)])
def test_criterion_07_inequality_campaign(dim, cap, budget):
    config = CampaignConfig(seed=2026, trials=500, checkers=SIGMA_CHECKERS,
                            dims=(dim,), max_half_width={dim: cap})
    start = time.perf_counter()
    result = run_campaign(config, jobs=min(4, os.cpu_count() or 1))
    elapsed = time.perf_counter() - start
    assert elapsed < budget, f"campaign took {elapsed:.0f} s"
    failed = [(rec.checker, rec.trial, rec.report.slack)
              for rec in result.failures]
    assert failed == []
    for rec in result.records:
        expected = TRIG_EXACT if rec.checker in EXACT_CLASS else SMOOTH
        assert rec.report.tolerance <= expected
        if rec.report.status == "checked":
            assert rec.report.slack >= -expected


def test_criterion_08_tight_fixtures_hit_zero():
    f = LatticeSignal.delta(1)
    g = LatticeSignal.delta(1)
    plan = StftPlan.for_half_widths(1, 0, 0, 8)
    sigma = TileSet.from_tiles(1, [((0,), (0.0,), (0.5,))])
    slacks = [
        check_small_set(f, g, sigma, plan).slack,
        check_support_bound(f, g, sigma, plan).slack,
        check_joint_concentration(f, g, [(0,)], sigma, plan).slack,
        check_entropy(f, g, plan).slack,
    ]
    assert all(abs(s) <= 1e-9 for s in slacks), slacks


def test_criterion_09_closed_form_constants():
    c, eps0 = heisenberg_constant(1.0, 1)
    assert abs(c - 1.0 / 54.0) <= 1e-8
    assert abs(eps0 - 1.0 / 3.0) <= 1e-6
    f = LatticeSignal.delta(1)
    plan = StftPlan.for_half_widths(1, 0, 0, 8)
    rho = dispersion(stft(f, f, plan), 2.0)
    assert abs(rho - math.sqrt(1.0 / 12.0)) <= 1e-6
    assert lattice_count(2.0, 2) == 13
    assert ball_measure(1.5, 1) == 3.0


def test_criterion_10_reproducible_verify(tmp_path):
    out_a = str(tmp_path / "a.json")
    out_b = str(tmp_path / "b.json")
    run_verify(out_a)
    run_verify(out_b, "--jobs", "2")
    bytes_a = open(out_a, "rb").read()
    assert bytes_a == open(out_b, "rb").read()
    assert json.loads(bytes_a)["failures"] == 0
