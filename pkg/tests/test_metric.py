"""Tests for metric spaces, work counting and metric validation."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kcenter_coresets.exceptions import KCenterUsageError
from kcenter_coresets.metric import MetricSpace, PointSet, WorkCounter, validate_metric


def test_euclidean_distance_is_pythagorean():
    space = MetricSpace.euclidean([[0.0, 0.0], [3.0, 4.0]])
    assert space.distance(0, 1) == 5.0
    assert space.distance(1, 1) == 0.0


def test_matrix_distance_is_lookup():
    space = MetricSpace.from_matrix([[0, 2], [2, 0]])
    assert space.distance(0, 1) == 2.0
    assert not space.is_euclidean


def test_distance_out_of_range_raises():
    space = MetricSpace.euclidean([[0.0], [1.0]])
    with pytest.raises(KCenterUsageError):
        space.distance(0, 2)
    with pytest.raises(KCenterUsageError):
        space.distances_from(-1)


def test_point_set_rejects_non_finite():
    with pytest.raises(KCenterUsageError):
        PointSet([[0.0, float("nan")]])
    with pytest.raises(KCenterUsageError):
        PointSet([[float("inf")]])


def test_flat_sequence_is_one_dimensional():
    points = PointSet([0.0, 0.5, 1.0])
    assert points.n == 3
    assert points.dim == 1
    assert not points.coordinates.flags.writeable


def test_space_requires_exactly_one_source():
    with pytest.raises(KCenterUsageError):
        MetricSpace()
    with pytest.raises(KCenterUsageError):
        MetricSpace(points=PointSet([0.0]), matrix=[[0.0]])
    with pytest.raises(KCenterUsageError):
        MetricSpace.from_matrix([[0.0, 1.0]])


def test_doubling_constant_from_hint():
    space = MetricSpace.euclidean([[0.0, 0.0]], doubling_dim_hint=3.0)
    assert space.doubling_constant == 8.0
    assert MetricSpace.euclidean([[0.0]]).doubling_constant is None
    with pytest.raises(KCenterUsageError):
        MetricSpace.euclidean([[0.0]], doubling_dim_hint=-1.0)


def test_work_counter_charges_every_evaluation():
    space = MetricSpace.euclidean(np.arange(10.0))
    counter = WorkCounter()
    space.pairwise([0, 1, 2], None, counter)
    assert counter.evaluations == 30
    space.distance(3, 4, counter)
    space.distances_from(5, [1, 2], counter)
    assert counter.evaluations == 33
    other = WorkCounter(7)
    assert counter.merge(other).evaluations == 40


def test_subspace_renumbers_points():
    space = MetricSpace.euclidean([[0.0], [1.0], [5.0], [9.0]])
    sub = space.subspace([1, 3])
    assert sub.n == 2
    assert sub.distance(0, 1) == 8.0

    matrix = MetricSpace.from_matrix([[0, 1, 2], [1, 0, 3], [2, 3, 0]]).subspace([0, 2])
    assert matrix.distance(0, 1) == 2.0


@settings(max_examples=40, deadline=None)
@given(
    st.lists(
        st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=3, max_size=3),
        min_size=1,
        max_size=25,
    )
)
def test_euclidean_distances_are_symmetric_with_zero_diagonal(rows):
    space = MetricSpace.euclidean(rows)
    d = space.pairwise_matrix()
    assert np.array_equal(d, d.T)
    assert np.all(np.diag(d) == 0.0)
    assert np.all(d >= 0.0)


def test_blocked_pairwise_matches_single_block():
    rng = np.random.default_rng(3)
    space = MetricSpace.euclidean(rng.normal(size=(50, 4)))
    full = space.pairwise_matrix()
    for i in range(0, 50, 7):
        assert np.array_equal(space.distances_from(i), full[i])


def test_validate_accepts_metric_matrix():
    report = validate_metric(MetricSpace.from_matrix([[0, 1], [1, 0]]))
    assert report.checked
    assert report.valid
    assert report.violations == []


def test_validate_reports_triangle_witness():
    report = validate_metric(MetricSpace.from_matrix([[0, 5, 1], [5, 0, 1], [1, 1, 0]]))
    assert not report.valid
    first = report.violations[0]
    assert first.axiom == "triangle"
    assert first.witness == (0, 2, 1)
    assert first.detail == "1+1 < 5"
    assert report.violation_count == 2


def test_validate_reports_identity_and_symmetry():
    report = validate_metric(MetricSpace.from_matrix([[1, 2], [3, 0]]))
    axioms = [v.axiom for v in report.violations]
    assert "identity" in axioms
    assert "symmetry" in axioms
    record = report.to_record()
    assert record["valid"] is False
    assert record["violation_count"] == report.violation_count


def test_validate_skips_euclidean_and_large_matrices():
    report = validate_metric(MetricSpace.euclidean([[0.0], [1.0]]))
    assert not report.checked
    assert report.message == "assumed valid, skipped"
    assert report.valid

    big = MetricSpace.from_matrix(np.zeros((5, 5)))
    assert not validate_metric(big, limit=4).checked
    assert validate_metric(big, limit=None).checked
