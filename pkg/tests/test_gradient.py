import numpy as np
import pytest

from smbeam.arrays import SourceSpec, UlaConfig, generate_snapshots, steering_vector
from smbeam.bounds import BoundState
from smbeam.gradient import (FrSg, FrSmSg, JioSg, JioSmSg, SgConfig,
                             minimal_constrained_weights, orthogonal_projector,
                             project_out, transform_step_size, transform_update,
                             weight_step_size, weight_update)
from smbeam.lcmv import GainConstraint, NumericsError, initial_reduced_state


def rng_vec(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def gated_instance(rng, m=6, r=3, doa=50.0):
    """Random constrained state and snapshot with the bound at half the output."""
    a = steering_vector(UlaConfig(m), doa)
    constraint = GainConstraint(a, 1.0)
    state = initial_reduced_state(m, r, constraint)
    # random walk the transform through constraint-preserving updates
    for _ in range(3):
        x = rng_vec(rng, m)
        y = state.output(x)
        state.transform = transform_update(state.transform, state.weights, x, y, 0.1, a)
    x = rng_vec(rng, m)
    y = state.output(x)
    return state, constraint, x, y


class TestProjector:
    def test_axis_vector_gives_diagonal(self):
        a = np.zeros(4, dtype=complex)
        a[0] = 3.0 - 1j
        p = orthogonal_projector(a)
        np.testing.assert_allclose(p, np.diag([0.0, 1.0, 1.0, 1.0]), atol=1e-12)

    def test_idempotent_and_annihilating(self):
        rng = np.random.default_rng(0)
        a = rng_vec(rng, 5)
        p = orthogonal_projector(a)
        np.testing.assert_allclose(p @ p, p, atol=1e-12)
        np.testing.assert_allclose(p @ a, np.zeros(5), atol=1e-12)

    def test_eigenvalues_are_zero_and_ones(self):
        rng = np.random.default_rng(1)
        p = orthogonal_projector(rng_vec(rng, 4))
        eigs = np.sort(np.linalg.eigvalsh(p))
        np.testing.assert_allclose(eigs, [0.0, 1.0, 1.0, 1.0], atol=1e-10)

    def test_project_out_matches_matrix_form(self):
        rng = np.random.default_rng(2)
        a, x = rng_vec(rng, 6), rng_vec(rng, 6)
        np.testing.assert_allclose(project_out(a, x), orthogonal_projector(a) @ x,
                                   atol=1e-12)


class TestTransformUpdate:
    def test_zero_step_is_identity(self):
        rng = np.random.default_rng(3)
        state, constraint, x, y = gated_instance(rng)
        before = state.transform.copy()
        after = transform_update(state.transform, state.weights, x, y, 0.0,
                                 constraint.steering)
        assert np.array_equal(after, before)

    def test_steering_input_leaves_transform_unchanged(self):
        rng = np.random.default_rng(4)
        state, constraint, _, _ = gated_instance(rng)
        a = constraint.steering
        y = state.output(a)
        after = transform_update(state.transform, state.weights, a, y, 0.37, a)
        np.testing.assert_allclose(after, state.transform, atol=1e-12)

    def test_update_preserves_reduced_steering_exactly(self):
        rng = np.random.default_rng(5)
        state, constraint, x, y = gated_instance(rng)
        a = constraint.steering
        after = transform_update(state.transform, state.weights, x, y, 0.2, a)
        delta = (after - state.transform).conj().T @ a
        np.testing.assert_allclose(delta, np.zeros(state.rank), atol=1e-12)


class TestWeightUpdate:
    def test_zero_step_is_identity(self):
        rng = np.random.default_rng(6)
        w = rng_vec(rng, 4)
        out = weight_update(w, rng_vec(rng, 4), 1.0 + 0j, 0.0, rng_vec(rng, 4))
        assert np.array_equal(out, w)

    def test_input_parallel_to_reduced_steering_is_noop(self):
        rng = np.random.default_rng(7)
        a_bar = rng_vec(rng, 4)
        w = rng_vec(rng, 4)
        out = weight_update(w, 2.2 * a_bar, 0.5 + 0.1j, 0.3, a_bar)
        np.testing.assert_allclose(out, w, atol=1e-12)

    def test_update_preserves_reduced_constraint(self):
        rng = np.random.default_rng(8)
        a_bar, x_bar, w = rng_vec(rng, 4), rng_vec(rng, 4), rng_vec(rng, 4)
        out = weight_update(w, x_bar, 0.9 - 0.4j, 0.27, a_bar)
        np.testing.assert_allclose((out - w).conj() @ a_bar, 0.0, atol=1e-12)


class TestStepSizes:
    def test_closed_gate_returns_zero(self):
        rng = np.random.default_rng(9)
        state, constraint, x, y = gated_instance(rng)
        delta = 2.0 * abs(y)
        assert transform_step_size(y, delta, x, state.weights, constraint.steering) == 0.0
        x_bar = state.reduce(x)
        a_bar = state.transform.conj().T @ constraint.steering
        assert weight_step_size(y, delta, x_bar, a_bar) == 0.0

    def test_boundary_gives_zero_step(self):
        rng = np.random.default_rng(10)
        state, constraint, x, y = gated_instance(rng)
        assert transform_step_size(y, abs(y), x, state.weights, constraint.steering) == 0.0

    def test_zero_bound_nulls_the_output(self):
        rng = np.random.default_rng(11)
        state, constraint, x, y = gated_instance(rng)
        mu = transform_step_size(y, 0.0, x, state.weights, constraint.steering)
        after = transform_update(state.transform, state.weights, x, y, mu,
                                 constraint.steering)
        y_post = complex(state.weights.conj() @ (after.conj().T @ x))
        assert abs(y_post) <= 1e-8 * abs(y)

    @pytest.mark.parametrize("seed", range(5))
    def test_transform_step_lands_output_on_the_bound(self, seed):
        # a-posteriori recomputation oracle at |y| = 2 delta
        rng = np.random.default_rng(100 + seed)
        state, constraint, x, y = gated_instance(rng)
        delta = abs(y) / 2.0
        mu = transform_step_size(y, delta, x, state.weights, constraint.steering)
        after = transform_update(state.transform, state.weights, x, y, mu,
                                 constraint.steering)
        y_post = complex(state.weights.conj() @ (after.conj().T @ x))
        assert abs(y_post) == pytest.approx(delta, rel=1e-8)

    @pytest.mark.parametrize("seed", range(5))
    def test_weight_step_lands_output_on_the_bound(self, seed):
        rng = np.random.default_rng(200 + seed)
        state, constraint, x, y = gated_instance(rng, r=4)
        x_bar = state.reduce(x)
        a_bar = state.transform.conj().T @ constraint.steering
        delta = 0.6 * abs(y)
        mu = weight_step_size(y, delta, x_bar, a_bar)
        w_new = weight_update(state.weights, x_bar, y, mu, a_bar)
        assert abs(w_new.conj() @ x_bar) == pytest.approx(delta, rel=1e-8)

    def test_unreachable_bound_raises(self):
        a = steering_vector(UlaConfig(5), 77.0)
        w = np.ones(3, dtype=complex)
        # received vector entirely in the constraint direction, output past the bound
        with pytest.raises(NumericsError):
            transform_step_size(5.0 + 0j, 1.0, 2.0 * a, w, a)

    def test_unnormalized_variant_uses_printed_denominator(self):
        rng = np.random.default_rng(12)
        state, constraint, x, y = gated_instance(rng)
        a = constraint.steering
        delta = abs(y) / 2.0
        mu_n = transform_step_size(y, delta, x, state.weights, a, normalized=True)
        mu_u = transform_step_size(y, delta, x, state.weights, a, normalized=False)
        xsq = np.real(x.conj() @ x)
        ratio = np.real(x.conj() @ project_out(a, x)) / (xsq - abs(a.conj() @ x) ** 2)
        assert mu_u == pytest.approx(mu_n * ratio, rel=1e-10)


class TestJioSmSg:
    def scenario(self, seed=0, m=8, r=3):
        rng = np.random.default_rng(seed)
        cfg = UlaConfig(m)
        sources = (SourceSpec(70.0, 1.0, is_soi=True), SourceSpec(30.0, 3.0))
        a = steering_vector(cfg, 70.0)
        constraint = GainConstraint(a, 1.0)
        received, _ = generate_snapshots(cfg, sources, 0.1, rng, 400)
        return constraint, received

    def test_no_update_step_touches_only_bound_and_counters(self):
        constraint, received = self.scenario()
        alg = JioSmSg.from_scratch(8, 3, constraint, alpha=22.0, beta=0.99,
                                   noise_power=0.1)
        alg.bound.delta = 1e6  # gate closed
        t_before = alg.state.transform.copy()
        w_before = alg.state.weights.copy()
        updated, _ = alg.step(received[:, 0])
        assert not updated
        assert np.array_equal(alg.state.transform, t_before)
        assert np.array_equal(alg.state.weights, w_before)
        assert alg.bound.snapshots_seen == 1

    def test_constraint_preserved_across_gated_steps(self):
        constraint, received = self.scenario(seed=1)
        alg = JioSmSg.from_scratch(8, 3, constraint, alpha=40.0, beta=0.999,
                                   noise_power=0.1)
        a = constraint.steering
        for i in range(400):
            alg.step(received[:, i])
            residual = abs(alg.state.weights.conj()
                           @ (alg.state.transform.conj().T @ a) - 1.0)
            assert residual <= 1e-8
        assert alg.bound.updates_performed > 0

    def test_update_rate_property(self):
        constraint, received = self.scenario(seed=2)
        alg = JioSmSg.from_scratch(8, 3, constraint, alpha=40.0, beta=0.999,
                                   noise_power=0.1)
        for i in range(100):
            alg.step(received[:, i])
        assert alg.update_rate == alg.bound.update_rate()

    def test_rank_one_state_runs_without_degenerate_division(self):
        constraint, received = self.scenario(seed=3)
        alg = JioSmSg.from_scratch(8, 1, constraint, alpha=40.0, beta=0.999,
                                   noise_power=0.1)
        for i in range(100):
            alg.step(received[:, i])
        assert np.isfinite(alg.weights).all()


class TestFixedStepVariants:
    def test_jio_sg_single_step_matches_manual_updates(self):
        rng = np.random.default_rng(13)
        a = steering_vector(UlaConfig(6), 64.0)
        constraint = GainConstraint(a, 1.0)
        cfg = SgConfig(fixed_step_transform=0.05, fixed_step_weights=0.05)
        alg = JioSg.from_scratch(6, 3, constraint, cfg)
        t0, w0 = alg.state.transform.copy(), alg.state.weights.copy()
        x = rng_vec(rng, 6)
        x_bar = t0.conj().T @ x
        a_bar = t0.conj().T @ a
        y = complex(w0.conj() @ x_bar)
        alg.step(x)
        w_sq = float(np.real(w0.conj() @ w0))
        mu_t = 0.05 / (w_sq * np.real(x.conj() @ project_out(a, x)))
        mu_w = 0.05 / np.real(x_bar.conj() @ project_out(a_bar, x_bar))
        np.testing.assert_allclose(alg.state.transform,
                                   transform_update(t0, w0, x, y, mu_t, a), atol=1e-12)
        np.testing.assert_allclose(alg.state.weights,
                                   weight_update(w0, x_bar, y, mu_w, a_bar), atol=1e-12)

    def test_fr_sg_converges_to_white_noise_optimum_direction(self):
        # noise-only scenario: the minimum-variance solution is a/m; the
        # blind updates jitter around it, so the settled direction is read
        # from the time-averaged weights
        cfg = UlaConfig(8)
        sources = (SourceSpec(70.0, 1.0, is_soi=True),)
        a = steering_vector(cfg, 70.0)
        alg = FrSg.from_scratch(GainConstraint(a, 1.0),
                                SgConfig(fixed_step_weights=0.02))
        received, _ = generate_snapshots(cfg, sources, 1.0, np.random.default_rng(5), 10000)
        averaged = np.zeros(8, dtype=complex)
        for i in range(10000):
            alg.step(received[:, i])
            if i >= 4000:
                averaged += alg.weights
        averaged /= 6000
        target = a / 8
        cosine = abs(averaged.conj() @ target) / (
            np.linalg.norm(averaged) * np.linalg.norm(target))
        assert cosine >= 0.99

    def test_fr_sm_sg_frozen_when_gate_never_opens(self):
        a = steering_vector(UlaConfig(6), 45.0)
        constraint = GainConstraint(a, 1.0)
        alg = FrSmSg.from_scratch(constraint, alpha=22.0, beta=0.99, noise_power=0.1)
        alg.bound = BoundState.fixed_bound(1e9, noise_power=0.1)
        w0 = minimal_constrained_weights(constraint)
        rng = np.random.default_rng(6)
        for _ in range(50):
            alg.step(rng_vec(rng, 6))
        assert np.array_equal(alg.weights, w0)

    def test_fr_sm_sg_constraint_preserved(self):
        cfg = UlaConfig(8)
        sources = (SourceSpec(70.0, 1.0, is_soi=True), SourceSpec(130.0, 2.0))
        a = steering_vector(cfg, 70.0)
        alg = FrSmSg.from_scratch(GainConstraint(a, 1.0), alpha=40.0, beta=0.999,
                                  noise_power=0.1)
        received, _ = generate_snapshots(cfg, sources, 0.1, np.random.default_rng(7), 300)
        for i in range(300):
            alg.step(received[:, i])
            assert abs(alg.weights.conj() @ a - 1.0) <= 1e-8
