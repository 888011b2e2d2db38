import hypothesis
import pytest

from flatlab.fixtures import genus2_octagon_generators

hypothesis.settings.register_profile(
    "default", max_examples=60, deadline=None
)
hypothesis.settings.load_profile("default")


@pytest.fixture(scope="session")
def octagon_gens():
    return genus2_octagon_generators()
