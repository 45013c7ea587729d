import hypothesis
import pytest

from digitop.catalog import build_catalog
from digitop.metrics import MetricSpace, MetricSpec

hypothesis.settings.register_profile("ci", deadline=None, max_examples=60)
hypothesis.settings.load_profile("ci")


@pytest.fixture(scope="session")
def catalog():
    return build_catalog()


@pytest.fixture(scope="session")
def diamond(catalog):
    return catalog["diamond"]


@pytest.fixture(scope="session")
def diamond_l2(diamond):
    return MetricSpace(diamond, MetricSpec.l2())


@pytest.fixture(scope="session")
def path3(catalog):
    return catalog["path3"]


@pytest.fixture(scope="session")
def path3_l1(path3):
    return MetricSpace(path3, MetricSpec.l1())


@pytest.fixture(scope="session")
def path4(catalog):
    return catalog["path4"]


@pytest.fixture(scope="session")
def path4_l1(path4):
    return MetricSpace(path4, MetricSpec.l1())


@pytest.fixture(scope="session")
def split(catalog):
    return catalog["split"]
