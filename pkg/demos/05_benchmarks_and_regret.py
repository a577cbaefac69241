"""Hindsight benchmarks, regret, and the worst-case guarantee.

The periodic-static family interpolates between one policy for the whole
horizon (a single window) and one policy per slot (singleton windows).
Refining the calendar can only lower the benchmark's cost. Regret is the
online learner's total cost minus the benchmark's, both priced with the
same penalized objective.
"""

import numpy as np

import assoclearn as al

topology = al.Topology(
    service_rate=np.array(
        [
            [3.0, 3.0, 0.0, 3.0, 3.0, 0.0],
            [0.0, 1.5, 1.5, 0.0, 1.5, 1.5],
            [1.5, 0.0, 3.0, 1.5, 0.0, 3.0],
        ]
    )
)
horizon, day = 240, 60
profile = al.SyntheticProfile(slots_per_day=day, base_min=0.25, base_max=0.5,
                              amplitude=0.7, sigma=0.1)
trace = al.generate_synthetic(topology.n_locations, horizon, seed=23, profile=profile)
params = al.CostParams(alpha=1.0, rho0=0.8)

print("benchmark cost as the calendar refines:")
for zones in (1, 4, 12, 60):
    partition = al.build_partition(horizon, zones, day // zones)
    solution = al.solve_periodic_static(topology, trace, partition, params)
    print(f"  {zones:3d} zones: total {solution.total_objective:10.4f} "
          f"(converged={solution.all_converged})")

zones = 4
partition = al.build_partition(horizon, zones, day // zones)
lipschitz = al.lipschitz_bound(topology, trace.max_intensity, params)
m_loc, m_ap = al.max_degrees(topology)
eta = al.theoretical_bound(zones, horizon, lipschitz, 1.0, m_loc, m_ap,
                           topology.n_locations).eta_star
run = al.run_online(topology, trace, partition, params, al.LearnerConfig(eta=eta))
solution = al.solve_periodic_static(topology, trace, partition, params)
report = al.regret(run.log.costs, solution, trace, partition, topology, params,
                   eta=eta, online_loads=run.log.loads)

print(f"\nonline total {report.total_online_cost:.4f} vs "
      f"benchmark total {report.total_benchmark_cost:.4f}")
print(f"regret {report.regret:.4f} at eta = eta* = {eta:.4f}")
print(f"guarantees: {report.bound_at_eta:.1f} (at this eta), "
      f"{report.bound_universal:.1f} (step-size free)")
print(f"violations online {report.violations_online}, "
      f"benchmark {report.violations_benchmark}")
quarter = horizon // 4
print(f"regret per slot: first quarter {report.prefix_regret[:quarter].mean():.4f}, "
      f"last quarter {report.prefix_regret[-quarter:].mean():.4f}")
if report.raw_cost_regret is not None:
    print(f"regret under the raw (unpenalized) cost: {report.raw_cost_regret:.4f}")
