"""The windowed transform: oracle agreement and the exact identities."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latticetf import (GridResolutionError, InputError, LatticeSignal,
                       NearOrthogonalWindowError, PhaseSpaceField, StftPlan,
                       SupportBox, TorusGrid, ZeroWindowError, invert,
                       kernel_field, modulate, phase_space_inner,
                       reproducing_kernel, stft, stft_adjoint, stft_direct,
                       translate)

RNG = np.random.default_rng(7)


def random_pair(dimension=1, nf=3, ng=2):
    f = LatticeSignal.random_complex(RNG, SupportBox(dimension, nf))
    g = LatticeSignal.random_complex(RNG, SupportBox(dimension, ng))
    return f, g, StftPlan(f.box, g.box)


class TestAgainstDirectSum:
    @pytest.mark.parametrize("dimension,nf,ng", [(1, 3, 2), (1, 1, 4),
                                                 (2, 2, 1)])
    def test_grid_samples_match_literal_sum(self, dimension, nf, ng):
        f, g, plan = random_pair(dimension, nf, ng)
        field = stft(f, g, plan)
        points = plan.grid.points_per_axis
        flat = field.values.reshape(field.box.size, plan.grid.size)
        boxes = list(field.box.indices())
        picks = RNG.choice(field.box.size, size=5, replace=False)
        for row in picks:
            node = tuple(int(v) for v in
                         RNG.integers(0, points, size=dimension))
            w = tuple(v / points for v in node)
            want = stft_direct(f, g, boxes[row], w)
            got = field.values[field.box.offset(boxes[row])][node]
            assert abs(got - want) < 1e-12 * (f.norm() * g.norm() + 1)
        assert flat.shape == (field.box.size, plan.grid.size)

    def test_rows_vanish_outside_support_sum(self):
        f, g, plan = random_pair(1, 2, 1)
        field = stft(f, g, plan)
        assert field.box.half_width == 3
        # every row inside the Minkowski box can be non-zero; the plan
        # does not pad further, so check the extreme rows directly
        edge = field.values[field.box.offset((3,))]
        want = [stft_direct(f, g, (3,), (j / plan.grid.points_per_axis,))
                for j in range(plan.grid.points_per_axis)]
        assert np.max(np.abs(edge - np.array(want))) < 1e-12


class TestElementaryOperators:
    def test_translate_shifts_values(self):
        f = LatticeSignal.from_entries(1, 1, [((0,), 2.0), ((1,), 3.0)])
        shifted = translate(f, (1,))
        assert shifted.value_at((1,)) == 2.0
        assert shifted.value_at((2,)) == 3.0

    def test_modulate_multiplies_phase(self):
        f = LatticeSignal.from_entries(1, 1, [((1,), 1.0)])
        out = modulate(f, (0.25,))
        assert out.value_at((1,)) == pytest.approx(np.exp(2j * np.pi * 0.25))

    def test_covariance_under_translation(self):
        # V_g(T_k f)(m, w) = e^{-2 pi i w k} V_g f(m - k, w)
        f, g, _ = random_pair(1, 2, 2)
        k = (1,)
        shifted = translate(f, k)
        plan_big = StftPlan(shifted.box, g.box)
        lhs = stft(shifted, g, plan_big)
        points = plan_big.grid.points_per_axis
        for m in [(-1,), (0,), (2,)]:
            for node in [0, 3, 7]:
                w = (node / points,)
                want = (np.exp(-2j * np.pi * w[0] * k[0])
                        * stft_direct(f, g, (m[0] - k[0],), w))
                got = lhs.values[lhs.box.offset(m)][node]
                assert abs(got - want) < 1e-12

    def test_covariance_under_modulation(self):
        # V_g(M_u f)(m, w) = V_g f(m, w - u)
        f, g, plan = random_pair(1, 2, 2)
        points = plan.grid.points_per_axis
        u = (3 / points,)
        mod = modulate(f, u)
        lhs = stft(mod, g, plan)
        for m in [(-2,), (0,), (1,)]:
            for node in [0, 5, 11]:
                w = (node / points,)
                want = stft_direct(f, g, m, ((w[0] - u[0]) % 1.0,))
                got = lhs.values[lhs.box.offset(m)][node]
                assert abs(got - want) < 1e-12


class TestIdentities:
    def test_plancherel(self):
        for dimension, nf, ng in [(1, 3, 3), (1, 6, 2), (2, 2, 2)]:
            f, g, plan = random_pair(dimension, nf, ng)
            field = stft(f, g, plan)
            want = f.norm() * g.norm()
            assert abs(field.norm() - want) < 1e-12 * want

    def test_orthogonality_relation(self):
        f1, g1, plan = random_pair(1, 3, 2)
        f2 = LatticeSignal.random_complex(RNG, SupportBox(1, 3))
        g2 = LatticeSignal.random_complex(RNG, SupportBox(1, 2))
        lhs = phase_space_inner(stft(f1, g1, plan), stft(f2, g2, plan))
        rhs = f1.inner(f2) * g2.inner(g1)
        assert abs(lhs - rhs) < 1e-12 * (abs(rhs) + 1)

    def test_adjoint_pairing(self):
        # <F, V_g h> = <V_g^* F, h> exactly, for any field F
        f, g, plan = random_pair(1, 2, 2)
        h = LatticeSignal.random_complex(RNG, plan.signal_box)
        field = PhaseSpaceField.random_complex(RNG, plan.output_box,
                                               plan.grid)
        lhs = phase_space_inner(field, stft(h, g, plan))
        back = stft_adjoint(field, g, plan)
        rhs = back.crop(plan.signal_box).inner(h)
        assert abs(lhs - rhs) < 1e-11 * (abs(rhs) + 1)

    def test_inversion_same_window(self):
        f, g, plan = random_pair(1, 3, 2)
        field = stft(f, g, plan)
        out = invert(field, g, plan=plan)
        assert np.max(np.abs(out.values - f.values)) < 1e-12 * f.norm()

    def test_inversion_distinct_synthesis(self):
        f, g, plan = random_pair(1, 2, 2)
        gamma = LatticeSignal.random_complex(RNG, SupportBox(1, 3))
        if abs(gamma.inner(g)) < 1e-6:
            gamma = LatticeSignal(gamma.box, gamma.values + g.embed(
                gamma.box).values)
        field = stft(f, g, plan)
        out = invert(field, g, gamma, plan)
        assert np.max(np.abs(out.values - f.values)) < 1e-10 * f.norm()

    def test_inversion_rejects_orthogonal_synthesis(self):
        f = LatticeSignal.delta(1, (0,), 1)
        g = LatticeSignal.delta(1, (0,), 1)
        gamma = LatticeSignal.delta(1, (1,), 1)  # <gamma, g> = 0
        plan = StftPlan(f.box, g.box)
        field = stft(f, g, plan)
        with pytest.raises(NearOrthogonalWindowError):
            invert(field, g, gamma, plan)

    def test_zero_window_rejected(self):
        f = LatticeSignal.delta(1, (0,), 1)
        zero = LatticeSignal.zeros(SupportBox(1, 1))
        plan = StftPlan(f.box, zero.box)
        with pytest.raises(ZeroWindowError):
            stft(f, zero, plan)

    def test_plan_rejects_coarse_grid(self):
        with pytest.raises(GridResolutionError):
            StftPlan(SupportBox(1, 3), SupportBox(1, 1), TorusGrid(1, 12))


class TestReproducingKernel:
    def test_kernel_reproduces_transform(self):
        f, g, plan = random_pair(1, 2, 2)
        field = stft(f, g, plan)
        points = plan.grid.points_per_axis
        for m, node in [((0,), 0), ((1,), 5), ((-3,), 12)]:
            w = (node / points,)
            pin_field = kernel_field(g, (m, w), plan)
            got = phase_space_inner(field, pin_field)
            want = field.values[field.box.offset(m)][node]
            assert abs(got - want) < 1e-10 * (f.norm() * g.norm() + 1)

    def test_kernel_field_matches_pointwise_formula(self):
        _, g, plan = random_pair(1, 2, 2)
        points = plan.grid.points_per_axis
        pin = ((1,), (3 / points,))
        field = kernel_field(g, pin, plan)
        for m, node in [((0,), 0), ((2,), 9), ((-1,), 4)]:
            w = (node / points,)
            want = reproducing_kernel(g, pin, (m, w))
            got = field.values[field.box.offset(m)][node]
            assert abs(got - want) < 1e-12

    def test_kernel_bounded_by_one(self):
        for _ in range(5):
            g = LatticeSignal.random_complex(RNG, SupportBox(1, 3))
            plan = StftPlan(g.box, g.box)
            points = plan.grid.points_per_axis
            pin = ((2,), (5 / points,))
            field = kernel_field(g, pin, plan)
            assert field.norm_inf() <= 1.0 + 1e-12

    def test_kernel_diagonal_is_one(self):
        g = LatticeSignal.random_complex(RNG, SupportBox(1, 2))
        pin = ((1,), (0.3,))
        assert reproducing_kernel(g, pin, pin) == pytest.approx(1.0)


class TestLpBounds:
    def test_sup_bound(self):
        f, g, plan = random_pair(1, 4, 3)
        field = stft(f, g, plan)
        assert field.norm_inf() <= f.norm() * g.norm() + 1e-12

    def test_l4_bound(self):
        f, g, plan = random_pair(1, 3, 3)
        field = stft(f, g, plan)
        assert field.norm_lp(4.0) <= f.norm() * g.norm() + 1e-12


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(-2, 2), st.integers(-5, 5),
                          st.integers(-5, 5)),
                min_size=1, max_size=4),
       st.lists(st.tuples(st.integers(-1, 1), st.integers(-3, 3),
                          st.integers(-3, 3)),
                min_size=1, max_size=3))
def test_plancherel_property(f_entries, g_entries):
    f = LatticeSignal.from_entries(
        1, 2, [((k,), complex(a, b)) for k, a, b in f_entries])
    g = LatticeSignal.from_entries(
        1, 1, [((k,), complex(a, b)) for k, a, b in g_entries])
    if g.is_zero():
        return
    plan = StftPlan(f.box, g.box)
    field = stft(f, g, plan)
    want = f.norm() * g.norm()
    assert abs(field.norm() - want) <= 1e-12 * (want + 1)
