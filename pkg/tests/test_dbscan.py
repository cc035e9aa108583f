"""Tests for the DBSCAN reference labeling and the DBSCAN coreset pipeline."""

import numpy as np
import pytest

from kcenter_coresets.coreset import dual_clustering, minimum_dual_clustering
from kcenter_coresets.distributed.dbscan import (
    NOISE,
    canonical_labels,
    core_points,
    dbscan_coreset,
    reference_dbscan,
)
from kcenter_coresets.distributed.partition import partition
from kcenter_coresets.exceptions import KCenterUsageError
from kcenter_coresets.generators import GeneratorSpec, generate
from kcenter_coresets.metric import MetricSpace

DBSCAN_ROUNDS = ["core-id", "coreset", "components", "label-broadcast"]


def blobs(n: int, clusters: int, spread: float, separation: float, seed: int) -> MetricSpace:
    spec = GeneratorSpec(
        kind="gaussian-clusters", n=n, dim=2, seed=seed, clusters=clusters, spread=spread, separation=separation
    )
    return MetricSpace.euclidean(generate(spec))


def components_separated(space: MetricSpace, labels: np.ndarray, core: np.ndarray, gap: float) -> bool:
    """True when core points of different reference clusters are more than ``gap`` apart."""
    ids = np.flatnonzero(core)
    d = space.pairwise(ids, ids)
    different = labels[ids][:, None] != labels[ids][None, :]
    return bool(np.all(d[different] > gap))


def test_core_points_count_themselves(collinear_space):
    assert core_points(collinear_space, 0.5, 1).all()
    assert core_points(collinear_space, 0.5, 3).tolist() == [False, True, True, True, False]
    assert not core_points(collinear_space, 0.4, 2).any()
    with pytest.raises(KCenterUsageError):
        core_points(collinear_space, 0.0, 1)
    with pytest.raises(KCenterUsageError):
        core_points(collinear_space, 0.5, 0)


def test_reference_labels_border_and_noise():
    space = MetricSpace.euclidean([0.0, 0.1, 0.2, 0.4, 5.0])
    labels = reference_dbscan(space, 0.15, 3)
    # Point 1 is the only core point; 0 and 2 are its border points.
    assert labels.tolist() == [0, 0, 0, NOISE, NOISE]


def test_canonical_labels():
    assert canonical_labels(np.array([5, -1, 2, 5, 2])).tolist() == [0, -1, 1, 0, 1]
    scan = np.array([2, 0, 1, 3, 4])
    assert canonical_labels(np.array([5, -1, 2, 5, 2]), scan).tolist() == [1, -1, 0, 1, 0]


def test_two_separated_clusters():
    space = blobs(200, 2, 0.01, 1.0, seed=1)
    eps = 0.1
    result, trace = dbscan_coreset(space, partition(space, 4), eps, 1)
    assert result.n_components == 2
    assert np.array_equal(result.labels, reference_dbscan(space, eps, 1))
    assert trace.round_names == DBSCAN_ROUNDS
    assert trace.items("core-id") == 0
    assert trace.items("label-broadcast") == len(result.coreset) * 4


def test_everything_within_eps_is_one_component(collinear_space):
    result, _ = dbscan_coreset(collinear_space, partition(collinear_space, 2), 2.0, 2)
    assert result.n_components == 1
    assert result.labels.tolist() == [0] * 5


def test_no_core_points(collinear_space):
    result, trace = dbscan_coreset(collinear_space, partition(collinear_space, 2), 0.1, 3)
    assert result.n_components == 0
    assert result.coreset == ()
    assert np.all(result.labels == NOISE)
    assert trace.round_count == 4
    assert result.to_record(timing=False)["wall_time_s"] == 0.0


def test_core_labels_match_reference():
    eps, minpts = 0.3, 3
    compared = 0
    for instance in range(65):
        clusters = 2 + instance % 3
        L = (1, 2, 4)[instance % 3]
        n = 2000 if instance == 64 else 90 + 30 * (instance % 5)
        space = blobs(n, clusters, 0.1, 10.0, seed=100 + instance)
        parts = partition(space, L, "random", seed=instance)
        result, trace = dbscan_coreset(space, parts, eps, minpts)
        assert trace.round_count == 4

        reference = reference_dbscan(space, eps, minpts)
        core = result.core
        assert np.array_equal(core, core_points(space, eps, minpts))
        if not components_separated(space, reference, core, 2 * eps):
            continue
        compared += 1
        assert np.array_equal(result.labels[core], reference[core]), instance
    assert compared >= 50


def test_coreset_points_are_core_and_cover_core_points(blobs_space):
    eps = 0.3
    result, _ = dbscan_coreset(blobs_space, partition(blobs_space, 3), eps, 3)
    coreset = np.asarray(result.coreset)
    assert result.core[coreset].all()
    core_ids = np.flatnonzero(result.core)
    nearest = blobs_space.pairwise(coreset, core_ids).min(axis=0)
    assert np.all(nearest <= eps / 2.0)
    assert len(result.provenance) == len(result.coreset)


def test_far_non_core_point_stays_noise():
    space = MetricSpace.euclidean([0.0, 0.1, 1.3])
    result, _ = dbscan_coreset(space, partition(space, 1), 1.0, 2)
    assert reference_dbscan(space, 1.0, 2).tolist() == [0, 0, NOISE]
    assert result.labels.tolist() == [0, 0, NOISE]


@pytest.mark.parametrize("seed", range(8))
def test_labeled_points_are_near_a_coreset_point_of_their_cluster(seed):
    space = blobs(240, 3, 0.25, 2.0, seed=700 + seed)
    eps, minpts = 0.25, 4
    result, _ = dbscan_coreset(space, partition(space, 1 + seed % 4, "random", seed=seed), eps, minpts)
    coreset = np.asarray(result.coreset, dtype=np.int64)
    labeled = np.flatnonzero(result.labels != NOISE)
    if coreset.size == 0:
        assert labeled.size == 0
        return
    d = space.pairwise(coreset, labeled)
    same = result.labels[coreset][:, None] == result.labels[labeled][None, :]
    assert np.all(np.where(same, d, np.inf).min(axis=0) <= eps)


def test_single_machine_coreset_against_minimum_cover():
    for seed in range(10):
        space = MetricSpace.euclidean(generate(GeneratorSpec(kind="uniform-box", n=12, dim=2, seed=seed)))
        eps = 0.4
        result, _ = dbscan_coreset(space, partition(space, 1), eps, 1)
        minimum = minimum_dual_clustering(space, eps / 2.0)
        assert len(result.coreset) == dual_clustering(space, eps / 2.0).size
        assert len(result.coreset) <= 49 * len(minimum)


def test_parameter_errors(collinear_space):
    parts = partition(collinear_space, 1)
    with pytest.raises(KCenterUsageError):
        dbscan_coreset(collinear_space, parts, -1.0, 1)
    with pytest.raises(KCenterUsageError):
        dbscan_coreset(collinear_space, parts, 0.5, 1, link_factor=0.0)
