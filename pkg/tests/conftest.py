import numpy as np
import pytest

from assoclearn import Topology


def make_random_topology(rng, n_locations, n_aps, link_prob=0.7, rate_low=0.5, rate_high=4.0):
    """Random topology where every location keeps at least one serving AP."""
    support = rng.random((n_aps, n_locations)) < link_prob
    for i in range(n_locations):
        if not support[:, i].any():
            support[rng.integers(n_aps), i] = True
    rates = np.where(support, rng.uniform(rate_low, rate_high, (n_aps, n_locations)), 0.0)
    return Topology(service_rate=rates)


def make_random_policy(rng, topology):
    """Feasible policy: Dirichlet weights on each location's neighbor set."""
    pi = np.zeros((topology.n_aps, topology.n_locations))
    for i, neighbors in enumerate(topology.neighbors_of_location):
        pi[neighbors, i] = rng.dirichlet(np.ones(neighbors.size))
    return pi


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def two_ap_topology():
    # One location served by both APs, one served only by the second.
    return Topology(service_rate=np.array([[2.0, 0.0], [1.0, 4.0]]))
