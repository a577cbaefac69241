"""Hindsight benchmarks: one optimal static policy per time window.

Each window's policy minimizes the window-aggregated penalized objective
over the product of per-location simplices. The solver reuses the
multiplicative-update kernel as a deterministic full-gradient method with
a fixed step, declaring convergence when one further update would move
the policy by less than the tolerance in entrywise 1-norm. A single
window covering the horizon gives the classic static benchmark; singleton
windows give the per-slot dynamic one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cost import CostParams, lipschitz_bound, load_slope, penalized_cost_from_loads
from .learner import egd_step, init_uniform
from .topology import Topology
from .traffic import TimePartition, TrafficTrace, build_partition


@dataclass(frozen=True)
class SolverConfig:
    """Iteration cap, fixed-point tolerance, and optional explicit step size."""

    max_iterations: int = 10_000
    tolerance: float = 1e-6
    step_size: float | None = None

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.step_size is not None and self.step_size <= 0:
            raise ValueError("step_size must be positive when given")


@dataclass(frozen=True)
class WindowDiagnostics:
    iterations: int
    final_residual: float
    converged: bool


@dataclass
class BenchmarkSolution:
    """Per-zone optimal policies with their objectives and solver diagnostics."""

    zone_policies: list
    zone_objectives: list
    diagnostics: list

    @property
    def zones(self) -> int:
        return len(self.zone_policies)

    @property
    def total_objective(self) -> float:
        return float(sum(self.zone_objectives))

    @property
    def all_converged(self) -> bool:
        return all(d.converged for d in self.diagnostics)

    def to_dict(self) -> dict:
        return {
            "zones": self.zones,
            "zone_objectives": [float(v) for v in self.zone_objectives],
            "zone_policies": [
                [[float(x) for x in row] for row in pi] for pi in self.zone_policies
            ],
            "diagnostics": [
                {
                    "iterations": d.iterations,
                    "final_residual": float(d.final_residual),
                    "converged": d.converged,
                }
                for d in self.diagnostics
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "BenchmarkSolution":
        return cls(
            zone_policies=[np.asarray(p, dtype=float) for p in doc["zone_policies"]],
            zone_objectives=[float(v) for v in doc["zone_objectives"]],
            diagnostics=[
                WindowDiagnostics(
                    iterations=d["iterations"],
                    final_residual=d["final_residual"],
                    converged=d["converged"],
                )
                for d in doc["diagnostics"]
            ],
        )


def _window_loads(pi: np.ndarray, demands: np.ndarray, topology: Topology) -> np.ndarray:
    """(n_aps, n_slots) loads of one policy against every slot of a window."""
    return (pi * topology.inverse_rate) @ demands.T


def window_objective(
    pi: np.ndarray, demands: np.ndarray, topology: Topology, params: CostParams
) -> float:
    """Penalized objective summed over a window's slots."""
    return penalized_cost_from_loads(_window_loads(pi, demands, topology), params)


def window_gradient(
    pi: np.ndarray, demands: np.ndarray, topology: Topology, params: CostParams
) -> np.ndarray:
    loads = _window_loads(pi, demands, topology)
    return (load_slope(loads, params) @ demands) * topology.inverse_rate


def solve_window(
    topology: Topology,
    trace: TrafficTrace,
    window_slots: np.ndarray,
    params: CostParams,
    solver: SolverConfig | None = None,
) -> tuple[np.ndarray, float, WindowDiagnostics]:
    """Minimize the window-aggregated objective from the uniform split.

    Non-convergence within the iteration cap is not an error: the best
    iterate is returned with converged=False in the diagnostics.
    """
    slots = np.asarray(window_slots, dtype=int)
    if slots.size == 0:
        raise ValueError("window_slots must be nonempty")
    if solver is None:
        solver = SolverConfig()
    demands = trace.demand[slots - 1]
    pi = init_uniform(topology)

    if solver.step_size is not None:
        step = solver.step_size
    else:
        window_lipschitz = lipschitz_bound(topology, float(demands.max()), params)
        if window_lipschitz == 0.0:
            # No demand anywhere in the window: every feasible policy is optimal.
            objective = window_objective(pi, demands, topology, params)
            return pi, objective, WindowDiagnostics(0, 0.0, True)
        step = 1.0 / (slots.size * window_lipschitz)

    residual = np.inf
    iterations = 0
    for iterations in range(1, solver.max_iterations + 1):
        grad = window_gradient(pi, demands, topology, params)
        updated = egd_step(pi, grad, step)
        residual = float(np.abs(updated - pi).sum())
        pi = updated
        if residual <= solver.tolerance:
            break
    converged = residual <= solver.tolerance
    objective = window_objective(pi, demands, topology, params)
    return pi, objective, WindowDiagnostics(iterations, residual, converged)


def solve_periodic_static(
    topology: Topology,
    trace: TrafficTrace,
    partition: TimePartition,
    params: CostParams,
    solver: SolverConfig | None = None,
) -> BenchmarkSolution:
    """One optimal static policy per window of the partition."""
    if partition.horizon != trace.horizon:
        raise ValueError(
            f"partition horizon {partition.horizon} != trace horizon {trace.horizon}"
        )
    policies, objectives, diagnostics = [], [], []
    for window in partition.windows():
        pi, objective, diag = solve_window(topology, trace, window, params, solver)
        policies.append(pi)
        objectives.append(objective)
        diagnostics.append(diag)
    return BenchmarkSolution(policies, objectives, diagnostics)


def solve_static(
    topology: Topology,
    trace: TrafficTrace,
    params: CostParams,
    solver: SolverConfig | None = None,
) -> BenchmarkSolution:
    """Single static policy for the whole horizon (one all-covering window)."""
    partition = build_partition(trace.horizon, 1, trace.horizon)
    return solve_periodic_static(topology, trace, partition, params, solver)


def solve_dynamic(
    topology: Topology,
    trace: TrafficTrace,
    params: CostParams,
    solver: SolverConfig | None = None,
) -> BenchmarkSolution:
    """Per-slot optimal policies (every window a single slot)."""
    partition = build_partition(trace.horizon, trace.horizon, 1)
    return solve_periodic_static(topology, trace, partition, params, solver)
