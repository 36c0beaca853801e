import random

import pytest

from pcmmap import MmapInstance, generate_instance, random_circuit
from pcmmap.fixtures import one_var_nondet, two_var_mixture, unnormalized_gated

CORPUS_SIZE = 1000
PROPORTION_CHOICES = [(30, 30, 40), (50, 20, 30), (40, 20, 40), (60, 20, 20), (50, 50, 0)]


@pytest.fixture
def f1():
    return two_var_mixture()


@pytest.fixture
def f2():
    return one_var_nondet()


@pytest.fixture
def gated():
    return unnormalized_gated()


def make_case(seed: int):
    """One deterministic corpus entry: a random circuit and an instance."""
    n = 4 + seed % 9
    circuit = random_circuit(n, seed)
    rng = random.Random(10_000 + seed)
    props = PROPORTION_CHOICES[rng.randrange(len(PROPORTION_CHOICES))]
    instance = generate_instance(circuit, props, seed)
    return circuit, instance


@pytest.fixture(scope="session")
def corpus():
    return [make_case(seed) for seed in range(CORPUS_SIZE)]


@pytest.fixture
def small_instance(f1):
    return MmapInstance(query=frozenset({0, 1}), evidence={})
