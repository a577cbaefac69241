"""The load model, the fairness cost family, and its penalized extension.

alpha = 0 prices total load, alpha = 1 is a log barrier, alpha = 2 prices
average delay. Above the threshold rho0 every per-AP cost continues as
its tangent line scaled by psi, which keeps the objective finite and
convex over the entire policy space, so the learner never needs a
feasibility projection.
"""

import numpy as np

import assoclearn as al

topology = al.Topology(service_rate=np.array([[2.0, 4.0], [1.0, 2.0]]))
demand = np.array([1.0, 0.8])
policy = al.init_uniform(topology)

loads = al.ap_load(policy, demand, topology)
print(f"uniform policy loads: {np.round(loads, 3)} (total {al.total_load(loads):.3f})")

for alpha in (0.0, 1.0, 2.0):
    params = al.CostParams(alpha=alpha, rho0=0.9)
    print(f"  alpha={alpha:.0f}: raw cost {al.alpha_cost(loads, params):+.4f}")

params = al.CostParams(alpha=2.0, rho0=0.5, psi=1.0)
for rho in (0.3, 0.5, 0.6, 0.9):
    v = al.penalized_cost_from_loads(np.array([rho]), params)
    tag = "linear extension" if rho > params.rho0 else "interior"
    print(f"  single AP at load {rho:.1f}: V = {v:.4f}  [{tag}]")

# the analytic gradient agrees with central finite differences
grad = al.grad_penalized_cost(policy, demand, topology, params)
step = 1e-6
fd = np.zeros_like(grad)
for j, i in zip(*np.nonzero(topology.support)):
    up, down = policy.copy(), policy.copy()
    up[j, i] += step
    down[j, i] -= step
    fd[j, i] = (
        al.penalized_cost(up, demand, topology, params)
        - al.penalized_cost(down, demand, topology, params)
    ) / (2 * step)
print(f"max |gradient - finite difference| = {np.abs(grad - fd).max():.2e}")

bound = al.lipschitz_bound(topology, float(demand.max()), params)
print(f"gradient sup-norm {np.abs(grad).max():.3f} <= analytic bound {bound:.3f}")
