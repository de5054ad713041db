"""Canned scenarios used by tests, demos, and the shipped YAML files."""

from __future__ import annotations

from .channel import FrequencyGrid, RadioParams
from .optimizer import Scenario
from .reliability import EdgeProfile, QosTarget, TaskProfile, UserProfile


def reference_radio() -> RadioParams:
    """10 GHz channel, 100 mW, 20 dBi antennas, -40 dBm noise over the band."""
    return RadioParams(
        bandwidth_hz=1.0e10,
        power_w=0.1,
        tx_gain_dbi=20.0,
        rx_gain_dbi=20.0,
        noise_dbm=-40.0,
    )


def reference_task() -> TaskProfile:
    """8 Mbit mean job size, 1e7 mean CPU cycles per job."""
    return TaskProfile(mean_job_bits=8.0e6, mean_job_cycles=1.0e7)


def reference_scenario(n_users: int = 10) -> Scenario:
    """Ten-user planning case in the 100-190 GHz window.

    User k brings 5 + 2k jobs/s.  The first seven users run 0.5-0.92 GHz
    local CPUs (too slow to meet five nines locally, so they offload nearly
    everything); the last three run 1.45-1.55 GHz CPUs whose local queues
    almost make the target, which pulls their best offloading share into the
    interior of (0, 1].  The 20 GHz edge CPU leaves ample headroom.
    """
    if not 1 <= n_users <= 10:
        raise ValueError("reference scenario supports 1..10 users")
    local_cpus = (5.0e8, 5.7e8, 6.4e8, 7.1e8, 7.8e8, 8.5e8, 9.2e8, 1.45e9, 1.5e9, 1.55e9)
    users = tuple(
        UserProfile(arrival_rate=5.0 + 2.0 * k, local_cpu_hz=local_cpus[k])
        for k in range(n_users)
    )
    return Scenario(
        task=reference_task(),
        radio=reference_radio(),
        edge=EdgeProfile(cpu_hz=2.0e10),
        qos=QosTarget(delay_s=0.08, min_reliability=0.99999),
        grid=FrequencyGrid(freqs_ghz=tuple(100.0 + 10.0 * i for i in range(10))),
        users=users,
    )


def strict_scenario() -> Scenario:
    """Seven-nines target at 50 ms with a weak edge: infeasible for everyone.

    The edge queue's within-budget probability is capped at
    1 - exp(-(mu_m - beta*lambda) * epsilon) ~ 1 - 8e-5 no matter how fast
    the link is, so a 99.99999% target cannot be met and coverage is zero.
    """
    base = reference_scenario()
    return Scenario(
        task=base.task,
        radio=base.radio,
        edge=EdgeProfile(cpu_hz=2.0e9),
        qos=QosTarget(delay_s=0.05, min_reliability=0.9999999),
        grid=base.grid,
        users=base.users,
    )


def single_user_scenario() -> Scenario:
    """One user, one carrier, relaxed 97% target: handy for simulation demos."""
    base = reference_scenario(1)
    return Scenario(
        task=base.task,
        radio=base.radio,
        edge=EdgeProfile(cpu_hz=6.0e8),
        qos=QosTarget(delay_s=0.08, min_reliability=0.97),
        grid=FrequencyGrid(freqs_ghz=(150.0,)),
        users=(UserProfile(arrival_rate=10.0, local_cpu_hz=5.0e8),),
    )
