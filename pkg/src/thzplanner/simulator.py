"""Discrete-event validation of the queueing closed forms.

Each user's job stream is Poisson; a coin with probability beta sends a job
through the transmission queue and then the edge CPU queue, otherwise it is
served by the local CPU queue.  All queues are FIFO with exponential
services, so per-queue waiting times follow the Lindley recursion, which is
evaluated in vectorized form:

    W_n = C_n - min_{k<=n} C_k,   C_n = sum_{i<=n} (S_{i-1} - A_i)

with S the services and A the inter-arrival gaps.  Two edge disciplines are
supported: "isolated" gives every user a private edge queue (the analytic
model), "shared_edge" merges all users' transmission departures into one
queue in arrival order.

Streams are counter-based (Philox) and keyed by (seed, user, stage), so runs
are bit-reproducible and the two modes consume identical randomness: a
single-user shared run equals the isolated run exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .optimizer import INFEASIBLE, Plan, Scenario
from .reliability import (
    EdgeProfile,
    InfeasibleError,
    QosTarget,
    StabilityError,
    TaskProfile,
    UserProfile,
    system_reliability,
)

ISOLATED = "isolated"
SHARED_EDGE = "shared_edge"

# stage tags keying the per-user random streams
_PH_ARRIVAL = 0
_PH_OFFLOAD = 1
_PH_LOCAL = 2
_PH_TX = 3
_PH_EDGE = 4


@dataclass(frozen=True)
class SimConfig:
    """Run length, warmup discard, seed, and edge discipline."""

    n_jobs: int = 1_000_000
    warmup: int = 10_000
    seed: int = 0
    mode: str = ISOLATED

    def __post_init__(self) -> None:
        if self.mode not in (ISOLATED, SHARED_EDGE):
            raise ValueError(f"mode must be {ISOLATED!r} or {SHARED_EDGE!r}")
        if self.warmup < 0:
            raise ValueError("warmup must be nonnegative")
        if self.n_jobs < 10 * max(self.warmup, 1):
            raise ValueError("need n_jobs >= 10 * warmup")


@dataclass(frozen=True)
class SimUserReport:
    """Empirical vs analytic reliability for one user."""

    user_id: int
    beta: float
    rate_bps: float
    analytic: float
    empirical: float
    ci_radius: float  # 3 * sqrt(p(1-p)/n), binomial
    n_effective: int

    @property
    def delta(self) -> float:
        return self.empirical - self.analytic

    @property
    def within_ci(self) -> bool:
        return abs(self.delta) <= self.ci_radius


@dataclass(frozen=True)
class SimReport:
    mode: str
    seed: int
    n_jobs: int
    users: Tuple[SimUserReport, ...]

    @property
    def all_within_ci(self) -> bool:
        return all(row.within_ci for row in self.users)


def _stream(seed: int, user_id: int, stage: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence((seed, user_id, stage)))
    )


def _lindley_sojourn(arrivals: np.ndarray, services: np.ndarray) -> np.ndarray:
    """Per-job sojourn times of a FIFO single-server queue, vectorized."""
    n = arrivals.size
    if n == 0:
        return np.empty(0)
    gaps = services[:-1] - np.diff(arrivals)
    cum = np.concatenate(([0.0], np.cumsum(gaps)))
    waits = cum - np.minimum.accumulate(cum)
    return waits + services


def simulate_mm1_sojourn(
    arrival_rate: float, service_rate: float, epsilon_s: float, cfg: SimConfig
) -> float:
    """Empirical P(sojourn <= epsilon) of a plain M/M/1 queue.

    arrival_rate 0 degenerates to pure service times.  Raises StabilityError
    when arrival_rate >= service_rate.
    """
    if service_rate <= 0.0:
        raise ValueError("service rate must be positive")
    if arrival_rate < 0.0:
        raise ValueError("arrival rate must be nonnegative")
    if arrival_rate >= service_rate:
        raise StabilityError(
            f"M/M/1 unstable: lambda {arrival_rate:.6g} >= mu {service_rate:.6g}"
        )
    services = _stream(cfg.seed, 0, _PH_LOCAL).exponential(
        1.0 / service_rate, cfg.n_jobs
    )
    if arrival_rate == 0.0:
        sojourn = services
    else:
        arrivals = np.cumsum(
            _stream(cfg.seed, 0, _PH_ARRIVAL).exponential(
                1.0 / arrival_rate, cfg.n_jobs
            )
        )
        sojourn = _lindley_sojourn(arrivals, services)
    post = sojourn[cfg.warmup :]
    return float(np.mean(post <= epsilon_s))


class _UserTrace:
    """Per-user state shared by the two edge disciplines."""

    __slots__ = ("arrivals", "offloaded", "totals", "tx_departures", "edge_services")

    def __init__(
        self,
        arrivals: np.ndarray,
        offloaded: np.ndarray,
        totals: np.ndarray,
        tx_departures: np.ndarray,
        edge_services: np.ndarray,
    ) -> None:
        self.arrivals = arrivals
        self.offloaded = offloaded
        self.totals = totals
        self.tx_departures = tx_departures
        self.edge_services = edge_services


def _trace_user(
    user_id: int,
    user: UserProfile,
    task: TaskProfile,
    edge: EdgeProfile,
    beta: float,
    rate_bps: float,
    cfg: SimConfig,
) -> _UserTrace:
    """Arrivals, split, local sojourns, and transmission departures."""
    lam = user.arrival_rate
    if lam <= 0.0:
        raise ValueError("simulation needs a positive arrival rate")
    if not 0.0 <= beta <= 1.0:
        raise ValueError("beta must lie in [0, 1]")
    mu_l = user.local_service_rate(task)
    if beta < 1.0 and mu_l <= (1.0 - beta) * lam:
        raise StabilityError(
            f"user {user_id}: local queue unstable at beta={beta:.6g}"
        )
    tx_rate = rate_bps / task.mean_job_bits if beta > 0.0 else 0.0
    if beta > 0.0 and tx_rate <= beta * lam:
        raise StabilityError(
            f"user {user_id}: transmission queue unstable at beta={beta:.6g}"
        )

    n = cfg.n_jobs
    arrivals = np.cumsum(_stream(cfg.seed, user_id, _PH_ARRIVAL).exponential(1.0 / lam, n))
    offloaded = _stream(cfg.seed, user_id, _PH_OFFLOAD).random(n) < beta
    totals = np.empty(n)

    kept = ~offloaded
    n_kept = int(kept.sum())
    if n_kept:
        local_services = _stream(cfg.seed, user_id, _PH_LOCAL).exponential(
            1.0 / mu_l, n_kept
        )
        totals[kept] = _lindley_sojourn(arrivals[kept], local_services)

    n_off = int(offloaded.sum())
    if n_off:
        tx_services = _stream(cfg.seed, user_id, _PH_TX).exponential(1.0 / tx_rate, n_off)
        tx_sojourn = _lindley_sojourn(arrivals[offloaded], tx_services)
        tx_departures = arrivals[offloaded] + tx_sojourn
        edge_services = _stream(cfg.seed, user_id, _PH_EDGE).exponential(
            1.0 / edge.service_rate(task), n_off
        )
    else:
        tx_departures = np.empty(0)
        edge_services = np.empty(0)
    return _UserTrace(arrivals, offloaded, totals, tx_departures, edge_services)


def _finish_isolated(trace: _UserTrace) -> None:
    """Complete offloaded jobs through a private edge queue."""
    if trace.tx_departures.size == 0:
        return
    edge_sojourn = _lindley_sojourn(trace.tx_departures, trace.edge_services)
    done = trace.tx_departures + edge_sojourn
    trace.totals[trace.offloaded] = done - trace.arrivals[trace.offloaded]


def _finish_shared(traces: List[_UserTrace]) -> None:
    """Complete all offloaded jobs through one merged edge queue."""
    dep = np.concatenate([t.tx_departures for t in traces])
    if dep.size == 0:
        return
    serv = np.concatenate([t.edge_services for t in traces])
    order = np.argsort(dep, kind="stable")
    edge_sojourn = _lindley_sojourn(dep[order], serv[order])
    done = np.empty(dep.size)
    done[order] = dep[order] + edge_sojourn
    offsets = np.concatenate(([0], np.cumsum([t.tx_departures.size for t in traces])))
    for i, t in enumerate(traces):
        lo, hi = offsets[i], offsets[i + 1]
        t.totals[t.offloaded] = done[lo:hi] - t.arrivals[t.offloaded]


def _report_row(
    user_id: int,
    user: UserProfile,
    task: TaskProfile,
    edge: EdgeProfile,
    beta: float,
    rate_bps: float,
    qos: QosTarget,
    trace: _UserTrace,
    cfg: SimConfig,
) -> SimUserReport:
    post = trace.totals[cfg.warmup :]
    n_eff = post.size
    p_hat = float(np.mean(post <= qos.delay_s))
    ci = 3.0 * math.sqrt(max(p_hat * (1.0 - p_hat), 0.0) / n_eff)
    analytic = system_reliability(user, task, edge, beta, rate_bps, qos.delay_s)
    return SimUserReport(
        user_id=user_id,
        beta=beta,
        rate_bps=rate_bps,
        analytic=analytic,
        empirical=p_hat,
        ci_radius=ci,
        n_effective=n_eff,
    )


def simulate_user(
    user: UserProfile,
    task: TaskProfile,
    edge: EdgeProfile,
    beta: float,
    rate_bps: float,
    qos: QosTarget,
    cfg: SimConfig,
    user_id: int = 0,
) -> SimUserReport:
    """Single user against a private edge queue (the analytic model)."""
    trace = _trace_user(user_id, user, task, edge, beta, rate_bps, cfg)
    if beta > 0.0 and edge.service_rate(task) <= beta * user.arrival_rate:
        raise StabilityError(f"user {user_id}: edge queue unstable at beta={beta:.6g}")
    _finish_isolated(trace)
    return _report_row(user_id, user, task, edge, beta, rate_bps, qos, trace, cfg)


def simulate_system(
    p: Plan,
    scenario: Scenario,
    cfg: SimConfig,
    overrides: Optional[List[Tuple[float, float]]] = None,
) -> SimReport:
    """Simulate every planned user under the configured edge discipline.

    overrides, when given, replaces each user's (beta, rate) pair, e.g. to
    replay a plan's rates with offloading forced to 1.  Raises
    InfeasibleError via the plan check when any user is flagged infeasible,
    StabilityError when a queue (or the shared edge) would be overloaded.
    """
    if any(row.status == INFEASIBLE for row in p.users):
        raise InfeasibleError("plan contains infeasible users; nothing to simulate")
    task, edge, qos = scenario.task, scenario.edge, scenario.qos
    pairs = overrides or [(row.beta, row.rate_bps) for row in p.users]
    if len(pairs) != len(p.users):
        raise ValueError("one (beta, rate) pair per user required")

    mu_m = edge.service_rate(task)
    if cfg.mode == SHARED_EDGE:
        load = sum(b * scenario.users[row.user_id].arrival_rate
                   for row, (b, _) in zip(p.users, pairs))
        if load >= mu_m:
            raise StabilityError(
                f"shared edge overloaded: total offered load {load:.6g} >= {mu_m:.6g} jobs/s"
            )
    else:
        for row, (b, _) in zip(p.users, pairs):
            if b > 0.0 and mu_m <= b * scenario.users[row.user_id].arrival_rate:
                raise StabilityError(
                    f"user {row.user_id}: edge queue unstable at beta={b:.6g}"
                )

    traces = []
    for row, (b, r) in zip(p.users, pairs):
        traces.append(
            _trace_user(row.user_id, scenario.users[row.user_id], task, edge, b, r, cfg)
        )
    if cfg.mode == ISOLATED:
        for t in traces:
            _finish_isolated(t)
    else:
        _finish_shared(traces)

    rows = tuple(
        _report_row(
            row.user_id,
            scenario.users[row.user_id],
            task,
            edge,
            b,
            r,
            qos,
            trace,
            cfg,
        )
        for row, (b, r), trace in zip(p.users, pairs, traces)
    )
    return SimReport(mode=cfg.mode, seed=cfg.seed, n_jobs=cfg.n_jobs, users=rows)
