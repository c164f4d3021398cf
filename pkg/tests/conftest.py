from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from rcjsu.instance import InstanceShape, nominal_scenario, random_instance, read_instance

DATA = Path(__file__).parent / "data"


@pytest.fixture
def toy():
    return read_instance(DATA / "toy3.rcj")


@pytest.fixture
def toy_scen(toy):
    return nominal_scenario(toy)


@st.composite
def instances(draw, n=(1, 9), machines=(1, 3)):
    shape = InstanceShape(
        n=draw(st.integers(*n)),
        machines=draw(st.integers(*machines)),
        proc=(1, draw(st.integers(1, 6))),
        prec_prob=draw(st.sampled_from([0.0, 0.2, 0.5])),
        capacity_ratio=draw(st.sampled_from([0.3, 0.6, 1.0])),
        integer_resources=draw(st.booleans()),
    )
    shape.machines = min(shape.machines, shape.n)
    return random_instance(shape, np.random.default_rng(draw(st.integers(0, 2**32 - 1))))
