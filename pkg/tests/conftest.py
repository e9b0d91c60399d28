import os
import sys

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

import gqm

settings.register_profile("deterministic", derandomize=True, max_examples=60)
settings.load_profile("deterministic")

SEED = int(os.environ.get("GQM_SEED", "20250809"))

S_PHASE = 0.7
DELTA = 2 * np.pi / 3


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture(scope="session")
def c23():
    return gqm.cyclic_groupoid(2, 3, labels=["+", "-"])


@pytest.fixture(scope="session")
def ratchet_quiver():
    return gqm.make_quiver(
        ["+", "-"], gqm.cyclic_group(3),
        [("-", "+", 1), ("+", "-", 1)],
        names=("alpha_1", "beta_1"),
    )


def name_ids(g):
    """Map golden names to transition ids via the (y, power, x) triples."""
    from golden_c23 import TRIPLES

    out = {}
    for name, (y, p, x) in TRIPLES.items():
        out[name] = g.transition(g.outcome(y).id, p, g.outcome(x).id).id
    return out


@pytest.fixture(scope="session")
def ids(c23):
    return name_ids(c23)


@pytest.fixture(scope="session")
def ratchet_state(c23, ratchet_quiver):
    phi = gqm.factorizable_extend(
        c23, ratchet_quiver,
        {"alpha_1": np.exp(1j * S_PHASE), "beta_1": np.exp(1j * (DELTA - S_PHASE))},
    )
    assert isinstance(phi, gqm.GroupoidFunction)
    return gqm.state_from_phi(c23, phi)


@pytest.fixture(scope="session")
def ratchet_h(c23, ids):
    coeffs = np.zeros(12)
    coeffs[[ids[n] for n in ("a1", "a2", "a3", "b1", "b2", "b3")]] = 1.0
    return gqm.Hamiltonian(c23, gqm.element(c23, coeffs))


@pytest.fixture(scope="session")
def qubit_h(c23, ids):
    coeffs = np.zeros(12)
    coeffs[[ids["a2"], ids["b1"]]] = 0.5
    return gqm.Hamiltonian(c23, gqm.element(c23, coeffs))


def element_from_names(g, ids_map, by_name):
    coeffs = np.zeros(g.n_transitions, dtype=complex)
    for name, c in by_name.items():
        coeffs[ids_map[name]] = c
    return gqm.element(g, coeffs)


def names_from_element(ids_map, f, tol=0.0):
    inv = {v: k for k, v in ids_map.items()}
    return {
        inv[i]: c for i, c in enumerate(f.coeffs) if abs(c) > tol
    }
