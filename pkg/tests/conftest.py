import os

import pytest

from de_fixpoint import build_state_graph, initialize, parse_model

MODELS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "models")


def model_path(name: str) -> str:
    return os.path.join(MODELS, name)


def load_model(name: str):
    with open(model_path(name), encoding="utf-8") as handle:
        return parse_model(handle.read())


def initial_state(name: str):
    return initialize(load_model(name))


@pytest.fixture(scope="session")
def flat_state():
    return initial_state("flat_traffic_light.model")


@pytest.fixture(scope="session")
def hier_state():
    return initial_state("hierarchical_traffic_light.model")


@pytest.fixture(scope="session")
def mutant_state():
    return initial_state("hierarchical_traffic_light_mutant.model")


@pytest.fixture
def cycle_state():
    return initial_state("causality_cycle.model")


@pytest.fixture(scope="session")
def hier_graph(hier_state):
    return build_state_graph(hier_state)


@pytest.fixture(scope="session")
def mutant_graph(mutant_state):
    return build_state_graph(mutant_state)


@pytest.fixture(scope="session")
def flat_graph(flat_state):
    return build_state_graph(flat_state)
