"""Shared fixtures for the k-center coresets test suite."""

import logging
from typing import List, Tuple

import pytest

from kcenter_coresets.generators import GeneratorSpec, generate
from kcenter_coresets.metric import MetricSpace

# Points 0, 0.5, 1, 1.5, 2 on a line.
COLLINEAR = [0.0, 0.5, 1.0, 1.5, 2.0]


def planar_instances(count: int, max_n: int = 14, first_seed: int = 0) -> List[Tuple[int, MetricSpace, int]]:
    """(seed, space, k) triples of small random planar instances."""
    instances = []
    for seed in range(first_seed, first_seed + count):
        n = 6 + seed % (max_n - 5)
        k = 2 + seed % 3
        points = generate(GeneratorSpec(kind="uniform-box", n=n, dim=2, seed=seed))
        instances.append((seed, MetricSpace.euclidean(points), k))
    return instances


@pytest.fixture(autouse=True)
def reset_package_logger():
    yield
    logger = logging.getLogger("kcenter_coresets")
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)
        handler.close()


@pytest.fixture
def collinear_space() -> MetricSpace:
    return MetricSpace.euclidean(COLLINEAR)


@pytest.fixture(scope="session")
def oracle_instances() -> List[Tuple[int, MetricSpace, int]]:
    return planar_instances(200)


@pytest.fixture
def blobs_space() -> MetricSpace:
    spec = GeneratorSpec(kind="gaussian-clusters", n=300, dim=2, seed=7, clusters=3, spread=0.1, separation=10.0)
    return MetricSpace.euclidean(generate(spec))


@pytest.fixture
def bad_matrix_file(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("0 5 1\n5 0 1\n1 1 0\n")
    return str(path)


@pytest.fixture
def points_file(tmp_path):
    path = tmp_path / "points.csv"
    path.write_text("x,y\n0,0\n1,0\n0,1\n10,10\n11,10\n10,11\n20,0\n21,0\n20,1\n5,5\n15,5\n5,15\n")
    return str(path)
