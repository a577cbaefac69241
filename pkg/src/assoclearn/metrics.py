"""Regret against the periodic-static benchmark, violation counts, and bounds.

Both regret legs are evaluated with the same penalized objective, so the
comparison is between identical functions of identical demands; when every
load on both legs stays below one, the report additionally carries the
regret recomputed with the raw fairness cost.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .benchmark import BenchmarkSolution
from .cost import CostParams, alpha_cost, lipschitz_bound, penalized_values
from .learner import RunLog
from .topology import Topology, max_degrees
from .traffic import TimePartition, TrafficTrace


@dataclass(frozen=True)
class BoundReport:
    """Worst-case regret guarantees for a windowed multiplicative-update run.

    general: the bound at the step size actually used.
    universal: the step-size-free form lipschitz * sqrt(2 * zones * horizon).
    eta_star: the step size minimizing the general bound, None when the
        environment is degenerate (note says why).
    """

    general: float | None
    universal: float
    eta_star: float | None
    note: str | None = None


def theoretical_bound(
    zones: int,
    horizon: int,
    lipschitz: float,
    eta: float,
    max_locations_per_ap: int,
    max_aps_per_location: int,
    n_locations: int,
) -> BoundReport:
    """Evaluate the regret guarantee for given problem constants.

    general = zones * M_loc * log(M_ap) / (eta * M_ap)
              + eta * horizon * lipschitz^2 / (2 * n_locations),
    with M_loc the maximum locations per AP and M_ap the maximum APs per
    location; eta_star = sqrt(2 * zones * M_loc * n_locations * log(M_ap)
    / (horizon * lipschitz^2 * M_ap)). Natural logarithms throughout.
    """
    if min(zones, horizon, max_locations_per_ap, max_aps_per_location, n_locations) < 1:
        raise ValueError("all counts must be positive")
    if lipschitz < 0:
        raise ValueError("lipschitz must be non-negative")
    if eta <= 0:
        raise ValueError("eta must be positive")

    universal = lipschitz * math.sqrt(2.0 * zones * horizon)
    log_m = math.log(max_aps_per_location)
    first = zones * max_locations_per_ap * log_m / (eta * max_aps_per_location)
    second = eta * horizon * lipschitz**2 / (2.0 * n_locations)
    general = first + second

    if lipschitz == 0.0:
        return BoundReport(general, universal, None, note="zero_gradient")
    if max_aps_per_location == 1:
        return BoundReport(general, universal, 0.0, note="single_ap_per_location")
    eta_star = math.sqrt(
        2.0
        * zones
        * max_locations_per_ap
        * n_locations
        * log_m
        / (horizon * lipschitz**2 * max_aps_per_location)
    )
    return BoundReport(general, universal, eta_star)


def violation_counts(loads: np.ndarray, rho0: float) -> tuple[int, int]:
    """(slot-AP pairs with load > rho0, slots with at least one such AP)."""
    flags = np.asarray(loads) > rho0
    return int(flags.sum()), int(flags.any(axis=1).sum())


def count_violations(log: RunLog) -> tuple[int, int]:
    """Aggregate threshold violations of a run, strict comparison."""
    return violation_counts(log.loads, log.rho0)


def replay_benchmark(
    benchmark: BenchmarkSolution,
    trace: TrafficTrace,
    partition: TimePartition,
    topology: Topology,
    params: CostParams,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-slot penalized costs and loads of the benchmark policies in slot order."""
    if benchmark.zones != partition.zones:
        raise ValueError("benchmark zone count does not match the partition")
    if partition.horizon != trace.horizon:
        raise ValueError("partition horizon does not match the trace")
    costs = np.empty(trace.horizon)
    loads = np.empty((trace.horizon, topology.n_aps))
    for k, window in enumerate(partition.windows()):
        pi = benchmark.zone_policies[k]
        demands = trace.demand[window - 1]
        window_loads = (pi * topology.inverse_rate) @ demands.T  # (n_aps, |window|)
        costs[window - 1] = penalized_values(window_loads, params).sum(axis=0)
        loads[window - 1] = window_loads.T
    return costs, loads


def regret_from_costs(online_costs: np.ndarray, benchmark_costs: np.ndarray) -> float:
    """Total online cost minus total benchmark cost."""
    online_costs = np.asarray(online_costs, dtype=float)
    benchmark_costs = np.asarray(benchmark_costs, dtype=float)
    if online_costs.shape != benchmark_costs.shape:
        raise ValueError("cost series lengths differ")
    return float(online_costs.sum() - benchmark_costs.sum())


def prefix_regret_per_slot(
    online_costs: np.ndarray, benchmark_costs: np.ndarray
) -> np.ndarray:
    """Reg(t)/t for every prefix, with benchmark costs accumulated in slot order."""
    diff = np.cumsum(np.asarray(online_costs, dtype=float)) - np.cumsum(
        np.asarray(benchmark_costs, dtype=float)
    )
    return diff / np.arange(1, diff.size + 1)


@dataclass
class RegretReport:
    """Totals, regret, prefix curve, bound values and violation counts."""

    total_online_cost: float
    total_benchmark_cost: float
    regret: float
    prefix_regret: np.ndarray  # Reg(t)/t, length horizon
    lipschitz_used: float
    eta_used: float | None
    eta_star: float | None
    bound_at_eta: float | None
    bound_universal: float
    bound_note: str | None
    violations_online: tuple[int, int] | None
    violations_benchmark: tuple[int, int]
    raw_cost_regret: float | None

    def to_dict(self) -> dict:
        return {
            "total_online_cost": self.total_online_cost,
            "total_benchmark_cost": self.total_benchmark_cost,
            "regret": self.regret,
            "prefix_regret": [float(x) for x in self.prefix_regret],
            "lipschitz_used": self.lipschitz_used,
            "eta_used": self.eta_used,
            "eta_star": self.eta_star,
            "bound_at_eta": self.bound_at_eta,
            "bound_universal": self.bound_universal,
            "bound_note": self.bound_note,
            "violations_online": list(self.violations_online)
            if self.violations_online is not None
            else None,
            "violations_benchmark": list(self.violations_benchmark),
            "raw_cost_regret": self.raw_cost_regret,
        }


def regret(
    online_costs: np.ndarray,
    benchmark: BenchmarkSolution,
    trace: TrafficTrace,
    partition: TimePartition,
    topology: Topology,
    params: CostParams,
    *,
    eta: float | None = None,
    lipschitz: float | None = None,
    online_loads: np.ndarray | None = None,
    online_violations: tuple[int, int] | None = None,
) -> RegretReport:
    """Compare an online cost series against the replayed benchmark.

    `lipschitz` defaults to the analytic bound at the trace's peak demand;
    pass the observed gradient sup-norm for a tighter (empirical) constant.
    `online_loads` enables the raw-cost regret reading and, together with
    `online_violations`, completes the violation section of the report.
    """
    online_costs = np.asarray(online_costs, dtype=float)
    if online_costs.shape != (trace.horizon,):
        raise ValueError("online cost series length does not match the trace horizon")
    bench_costs, bench_loads = replay_benchmark(
        benchmark, trace, partition, topology, params
    )
    total_online = float(online_costs.sum())
    total_bench = float(bench_costs.sum())
    curve = prefix_regret_per_slot(online_costs, bench_costs)

    used_l = (
        lipschitz
        if lipschitz is not None
        else lipschitz_bound(topology, trace.max_intensity, params)
    )
    m_loc, m_ap = max_degrees(topology)
    probe_eta = eta if eta is not None else 1.0
    bound = theoretical_bound(
        partition.zones,
        trace.horizon,
        used_l,
        probe_eta,
        m_loc,
        m_ap,
        topology.n_locations,
    )

    if online_violations is None and online_loads is not None:
        online_violations = violation_counts(online_loads, params.rho0)

    raw_regret = None
    if (
        online_loads is not None
        and np.all(np.asarray(online_loads) < 1)
        and np.all(bench_loads < 1)
    ):
        raw_regret = float(
            alpha_cost(np.asarray(online_loads), params)
            - alpha_cost(bench_loads, params)
        )

    return RegretReport(
        total_online_cost=total_online,
        total_benchmark_cost=total_bench,
        regret=total_online - total_bench,
        prefix_regret=curve,
        lipschitz_used=float(used_l),
        eta_used=eta,
        eta_star=bound.eta_star,
        bound_at_eta=bound.general if eta is not None else None,
        bound_universal=bound.universal,
        bound_note=bound.note,
        violations_online=online_violations,
        violations_benchmark=violation_counts(bench_loads, params.rho0),
        raw_cost_regret=raw_regret,
    )


def runlog_to_csv(log: RunLog, path) -> None:
    """Per-slot series `t,zone,V,total_load,violations` for external plotting."""
    totals = log.total_loads
    counts = log.violations.sum(axis=1)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "zone", "V", "total_load", "violations"])
        for t in range(log.horizon):
            writer.writerow(
                [
                    t + 1,
                    int(log.zones[t]),
                    repr(float(log.costs[t])),
                    repr(float(totals[t])),
                    int(counts[t]),
                ]
            )


def runlog_to_dict(log: RunLog) -> dict:
    return {
        "costs": [float(x) for x in log.costs],
        "loads": [[float(x) for x in row] for row in log.loads],
        "zones": [int(z) for z in log.zones],
        "violations": [[bool(v) for v in row] for row in log.violations],
        "rho0": log.rho0,
        "support_loss_events": log.support_loss_events,
    }
