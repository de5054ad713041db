"""Discrete-event validation of the queueing formulas.

A note on tolerances: the binomial radius 3 sqrt(p(1-p)/n) treats the
within-budget indicators as independent, but sojourn times of neighboring
jobs are correlated through busy periods.  At load 0.5 the true standard
error is roughly 1.5x the binomial one, so seeds are pinned wherever a
single run is compared against that radius.
"""

import math

import numpy as np
import pytest
from scipy import stats

import thzplanner as tp
from thzplanner import (
    ISOLATED,
    SHARED_EDGE,
    EdgeProfile,
    QosTarget,
    SimConfig,
    StabilityError,
    TaskProfile,
    UserProfile,
    simulate_mm1_sojourn,
    simulate_system,
    simulate_user,
    system_reliability,
)
from thzplanner.simulator import _trace_user

TASK = TaskProfile(mean_job_bits=8.0e6, mean_job_cycles=1.0e7)


class TestSimConfig:
    def test_mode_checked(self):
        with pytest.raises(ValueError):
            SimConfig(mode="both")

    def test_warmup_bounds(self):
        with pytest.raises(ValueError):
            SimConfig(n_jobs=1000, warmup=-1)
        with pytest.raises(ValueError):
            SimConfig(n_jobs=1000, warmup=500)  # needs n_jobs >= 10x warmup
        SimConfig(n_jobs=1000, warmup=100)


class TestMm1:
    def test_half_loaded_queue_matches_theory(self):
        # lambda 50, mu 100: sojourn ~ Exp(50), P(<= 0.08) = 1 - e^-4.
        # Seed pinned: see the module docstring on busy-period correlation.
        cfg = SimConfig(n_jobs=1_000_000, warmup=10_000, seed=0)
        frac = simulate_mm1_sojourn(50.0, 100.0, 0.08, cfg)
        expect = -math.expm1(-4.0)
        ci = 3.0 * math.sqrt(expect * (1.0 - expect) / 990_000)
        assert abs(frac - expect) <= ci

    def test_no_arrivals_is_pure_service(self):
        # independent samples, so the binomial radius is exact here
        cfg = SimConfig(n_jobs=400_000, warmup=4_000, seed=7)
        frac = simulate_mm1_sojourn(0.0, 100.0, 0.02, cfg)
        expect = -math.expm1(-2.0)
        ci = 3.0 * math.sqrt(expect * (1.0 - expect) / 396_000)
        assert abs(frac - expect) <= ci

    def test_unstable_rejected(self):
        cfg = SimConfig(n_jobs=1000, warmup=10)
        with pytest.raises(StabilityError):
            simulate_mm1_sojourn(100.0, 100.0, 0.08, cfg)
        with pytest.raises(ValueError):
            simulate_mm1_sojourn(10.0, 0.0, 0.08, cfg)
        with pytest.raises(ValueError):
            simulate_mm1_sojourn(-1.0, 10.0, 0.08, cfg)

    def test_seed_reproducibility(self):
        cfg = SimConfig(n_jobs=50_000, warmup=500, seed=11)
        a = simulate_mm1_sojourn(30.0, 100.0, 0.05, cfg)
        b = simulate_mm1_sojourn(30.0, 100.0, 0.05, cfg)
        assert a == b
        other = SimConfig(n_jobs=50_000, warmup=500, seed=12)
        assert simulate_mm1_sojourn(30.0, 100.0, 0.05, other) != a


class TestTraceStreams:
    def test_offloaded_substream_is_poisson(self):
        """Thinning the Poisson arrivals with probability beta must leave
        exponential inter-arrivals at rate beta * lambda."""
        user = UserProfile(arrival_rate=20.0, local_cpu_hz=1.0e9)
        edge = EdgeProfile(cpu_hz=1.0e9)
        cfg = SimConfig(n_jobs=40_000, warmup=400, seed=3)
        trace = _trace_user(0, user, TASK, edge, 0.5, 2.0e9, cfg)
        gaps = np.diff(trace.arrivals[trace.offloaded])
        # 1% critical value; n ~ 20000 thinned jobs
        res = stats.kstest(gaps, "expon", args=(0.0, 1.0 / (0.5 * 20.0)))
        assert res.pvalue > 0.01

    def test_split_is_exhaustive(self):
        user = UserProfile(arrival_rate=20.0, local_cpu_hz=1.0e9)
        edge = EdgeProfile(cpu_hz=1.0e9)
        cfg = SimConfig(n_jobs=10_000, warmup=100, seed=3)
        trace = _trace_user(0, user, TASK, edge, 0.3, 2.0e9, cfg)
        assert trace.offloaded.sum() + (~trace.offloaded).sum() == 10_000
        assert np.all(np.isfinite(trace.totals))

    def test_unstable_queues_refused(self):
        cfg = SimConfig(n_jobs=1000, warmup=10, seed=0)
        edge = EdgeProfile(cpu_hz=1.0e9)
        weak_local = UserProfile(arrival_rate=60.0, local_cpu_hz=5.0e8)  # mu_l = 50
        with pytest.raises(StabilityError):
            _trace_user(0, weak_local, TASK, edge, 0.05, 1.0e9, cfg)
        user = UserProfile(arrival_rate=20.0, local_cpu_hz=1.0e9)
        with pytest.raises(StabilityError):
            # tx rate 10 jobs/s below the offered 0.9 * 20
            _trace_user(0, user, TASK, edge, 0.9, 8.0e7, cfg)


class TestSimulateUser:
    USER = UserProfile(arrival_rate=10.0, local_cpu_hz=5.0e8)  # mu_l = 50
    EDGE = EdgeProfile(cpu_hz=6.0e8)  # mu_m = 60
    QOS = QosTarget(delay_s=0.08, min_reliability=0.97)

    def test_analytic_column_is_the_closed_form(self):
        cfg = SimConfig(n_jobs=20_000, warmup=200, seed=1)
        rep = simulate_user(self.USER, TASK, self.EDGE, 0.5, 8.8e8, self.QOS, cfg)
        assert rep.analytic == system_reliability(
            self.USER, TASK, self.EDGE, 0.5, 8.8e8, self.QOS.delay_s
        )
        assert rep.n_effective == 19_800
        assert 0.0 <= rep.empirical <= 1.0

    def test_moderate_load_within_ci(self):
        cfg = SimConfig(n_jobs=400_000, warmup=4_000, seed=42)
        for beta in (0.0, 0.5, 1.0):
            rep = simulate_user(self.USER, TASK, self.EDGE, beta, 8.8e8, self.QOS, cfg)
            assert rep.within_ci, (beta, rep.delta, rep.ci_radius)

    def test_beta_zero_ignores_the_link(self):
        cfg = SimConfig(n_jobs=20_000, warmup=200, seed=5)
        a = simulate_user(self.USER, TASK, self.EDGE, 0.0, 1.0e9, self.QOS, cfg)
        b = simulate_user(self.USER, TASK, self.EDGE, 0.0, 5.0e9, self.QOS, cfg)
        assert a.empirical == b.empirical

    def test_edge_overload_refused(self):
        cfg = SimConfig(n_jobs=10_000, warmup=100, seed=0)
        tiny_edge = EdgeProfile(cpu_hz=9.0e7)  # mu_m = 9 < beta * lambda = 10
        with pytest.raises(StabilityError):
            simulate_user(self.USER, TASK, tiny_edge, 1.0, 2.0e9, self.QOS, cfg)


class TestSimulateSystem:
    def test_reference_plan_isolated(self):
        sc = tp.reference_scenario()
        p = tp.plan(sc)
        cfg = SimConfig(n_jobs=50_000, warmup=500, seed=9)
        rep = simulate_system(p, sc, cfg)
        assert rep.mode == ISOLATED
        assert len(rep.users) == 10
        assert [r.user_id for r in rep.users] == list(range(10))
        for row in rep.users:
            assert row.n_effective == 49_500
            assert 0.0 <= row.empirical <= 1.0

    def test_single_user_isolated_equals_shared(self):
        # one user cannot tell whether the edge is shared
        sc = tp.single_user_scenario()
        p = tp.plan(sc)
        iso = simulate_system(p, sc, SimConfig(n_jobs=100_000, warmup=1_000, seed=2))
        sh = simulate_system(
            p, sc, SimConfig(n_jobs=100_000, warmup=1_000, seed=2, mode=SHARED_EDGE)
        )
        assert iso.users[0].empirical == sh.users[0].empirical

    def test_shared_edge_contention_hurts(self):
        """With many users on one edge queue the empirical reliability must
        drop below the isolated-edge prediction for at least the heavy
        users; the analytic column keeps the per-user model either way."""
        sc = tp.reference_scenario()
        # shrink the edge so that contention is actually visible
        sc_small = tp.apply_axis(sc, "f_m_cycles_per_s", 2.5e9)
        p = tp.plan(sc_small)
        cfg = SimConfig(n_jobs=60_000, warmup=600, seed=4, mode=SHARED_EDGE)
        rep = simulate_system(p, sc_small, cfg)
        assert rep.mode == SHARED_EDGE
        mean_delta = np.mean([r.delta for r in rep.users])
        assert mean_delta < 0.0  # contention only removes capacity

    def test_shared_overload_refused(self):
        sc = tp.reference_scenario()
        p = tp.plan(sc)
        tiny = tp.apply_axis(sc, "f_m_cycles_per_s", 1.3e9)  # mu_m = 130 < 140
        cfg = SimConfig(n_jobs=10_000, warmup=100, seed=0, mode=SHARED_EDGE)
        overrides = [(1.0, row.rate_bps) for row in p.users]
        with pytest.raises(StabilityError):
            simulate_system(p, tiny, cfg, overrides=overrides)

    def test_infeasible_plan_refused(self):
        sc = tp.strict_scenario()
        p = tp.plan(sc)
        with pytest.raises(tp.InfeasibleError):
            simulate_system(p, sc, SimConfig(n_jobs=10_000, warmup=100))

    def test_override_length_checked(self):
        sc = tp.reference_scenario()
        p = tp.plan(sc)
        with pytest.raises(ValueError):
            simulate_system(
                p, sc, SimConfig(n_jobs=10_000, warmup=100), overrides=[(1.0, 1e9)]
            )


class TestAgreementProperty:
    def test_random_light_load_cases(self):
        """Analytic reliability within the binomial radius across a spread
        of lightly loaded tandem configurations (master seed pinned)."""
        rng = np.random.default_rng(61)
        cfg = SimConfig(n_jobs=200_000, warmup=2_000, seed=61)
        for _ in range(6):
            lam = float(rng.uniform(5.0, 15.0))
            mu_l = lam * float(rng.uniform(3.0, 6.0))
            mu_m = lam * float(rng.uniform(4.0, 8.0))
            tx = lam * float(rng.uniform(5.0, 9.0))
            beta = float(rng.uniform(0.2, 0.8))
            eps = float(rng.uniform(0.05, 0.2))
            user = UserProfile(arrival_rate=lam, local_cpu_hz=mu_l * 1.0e7)
            edge = EdgeProfile(cpu_hz=mu_m * 1.0e7)
            qos = QosTarget(delay_s=eps, min_reliability=0.9)
            rep = simulate_user(user, TASK, edge, beta, tx * TASK.mean_job_bits, qos, cfg)
            assert rep.within_ci, (lam, mu_l, mu_m, tx, beta, eps, rep.delta, rep.ci_radius)
