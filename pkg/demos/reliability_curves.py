"""Reliability and rate-threshold curves for a single user.

Shows how the delay-budget probability splits between the local queue and
the offloaded tandem, how the minimum transmission rate behaves as the
offloading share moves, and that the Lambert-W closed form agrees with the
bisection oracle.  Run with: python3 demos/reliability_curves.py
"""

import numpy as np

import thzplanner as tp


def main() -> None:
    sc = tp.reference_scenario()
    user = sc.users[8]  # 21 jobs/s, 1.5 GHz local CPU: interior optimum
    task, edge, qos = sc.task, sc.edge, sc.qos
    print(f"user: {user.arrival_rate:.0f} jobs/s, local CPU {user.local_cpu_hz:.3g} Hz")
    print(f"target: P(delay <= {qos.delay_s} s) >= {qos.min_reliability}\n")

    print("=== reliability vs offloading share at a fixed 1.3 Gbit/s link ===")
    rate = 1.3e9
    print(f"{'beta':>5}  {'local part':>11}  {'edge part':>10}  {'combined':>12}")
    for beta in np.linspace(0.2, 1.0, 9):
        phi_l = tp.local_reliability(user, task, beta, qos.delay_s)
        phi_m = tp.edge_reliability(
            tp.queue_rates(user, task, edge, beta, rate), qos.delay_s
        )
        phi = tp.system_reliability(user, task, edge, beta, rate, qos.delay_s)
        print(f"{beta:5.2f}  {phi_l:11.8f}  {phi_m:10.8f}  {phi:12.9f}")
    print("Weights (1 - beta) and beta mix the two parts; neither alone decides.\n")

    print("=== minimum rate meeting the target, over beta ===")
    print(f"{'beta':>5}  {'closed form':>13}  {'bisection':>13}  {'rel diff':>9}")
    for beta in (0.3, 0.5, 0.7, 0.85, 1.0):
        try:
            r_closed = tp.rate_threshold(user, task, edge, qos, beta)
        except tp.InfeasibleError as exc:
            print(f"{beta:5.2f}  infeasible: {exc}")
            continue
        r_oracle = tp.rate_threshold_oracle(user, task, edge, qos, beta)
        rel = abs(r_closed - r_oracle) / r_oracle
        print(f"{beta:5.2f}  {r_closed:13.6g}  {r_oracle:13.6g}  {rel:9.2e}")
    print("Small shares fail: the local queue alone cannot carry five nines,")
    print("so the edge-side target climbs above 1 as beta shrinks.\n")

    print("=== the share the planner actually picks ===")
    beta_star, rate_star = tp.minimize_rate_threshold(sc, 8)
    print(f"beta* = {beta_star:.6f}, rate* = {rate_star:.6g} bit/s")
    full = tp.rate_threshold(user, task, edge, qos, 1.0)
    print(f"forcing beta = 1 would need {full:.6g} bit/s "
          f"({full / rate_star:.2f}x the optimized link)\n")

    print("=== hard ceiling: a slow edge caps reliability ===")
    weak = tp.EdgeProfile(cpu_hz=2.0e9)
    tight = tp.QosTarget(delay_s=0.05, min_reliability=0.9999999)
    try:
        tp.rate_threshold(user, task, weak, tight, 1.0)
    except tp.InfeasibleError as exc:
        print(f"raised as expected: {exc}")
    print("No link speed helps once 1 - exp(-(mu_m - lambda) eps) < theta.")


if __name__ == "__main__":
    main()
