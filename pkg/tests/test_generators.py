"""Tests for synthetic instance generators."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kcenter_coresets.coreset import dual_clustering
from kcenter_coresets.exceptions import KCenterUsageError
from kcenter_coresets.generators import (
    COVER_BRANCHING,
    GeneratorSpec,
    cluster_centers,
    cover_child_offset,
    gaussian_labels,
    generate,
    parse_generator_spec,
)
from kcenter_coresets.graph import build_disk_graph, connected_components
from kcenter_coresets.metric import MetricSpace


def test_collinear_line():
    points = generate(parse_generator_spec("line:5:0.5"))
    assert points.dim == 1
    assert points.coordinates[:, 0].tolist() == [0.0, 0.5, 1.0, 1.5, 2.0]


def test_uniform_single_point():
    for seed in (0, 1, 12345):
        points = generate(GeneratorSpec(kind="uniform-box", n=1, dim=3, seed=seed))
        assert points.n == 1
        assert points.dim == 3


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 63), st.sampled_from(["uniform:40:3", "gauss:60:2:3:0.2", "line:7:0.25"]))
def test_generation_is_deterministic(seed, text):
    first = generate(parse_generator_spec(text, seed))
    second = generate(parse_generator_spec(text, seed))
    assert first == second


def test_different_seeds_differ():
    a = generate(parse_generator_spec("uniform:20:2", 1))
    b = generate(parse_generator_spec("uniform:20:2", 2))
    assert a != b


def test_gaussian_clusters_follow_labels():
    spec = parse_generator_spec("gauss:90:2:3:0.05:10", 4)
    points = generate(spec)
    centers = cluster_centers(spec)
    labels = gaussian_labels(spec)
    assert centers.shape == (3, 2)
    offsets = np.linalg.norm(points.coordinates - centers[labels], axis=1)
    assert offsets.max() < 1.0


def test_parse_defaults_and_errors():
    spec = parse_generator_spec("gaussian-clusters:10")
    assert spec.kind == "gaussian-clusters"
    assert (spec.dim, spec.clusters, spec.spread, spec.separation) == (2, 2, 0.1, 10.0)
    assert parse_generator_spec("cover:2").n == 49

    with pytest.raises(KCenterUsageError):
        parse_generator_spec("spiral:10")
    with pytest.raises(KCenterUsageError):
        parse_generator_spec("uniform:ten")
    with pytest.raises(KCenterUsageError):
        parse_generator_spec("line:1:2:3")
    with pytest.raises(KCenterUsageError):
        generate(GeneratorSpec(kind="uniform-box", n=0))
    with pytest.raises(KCenterUsageError):
        generate(GeneratorSpec(kind="collinear-line", n=3, dim=1, spacing=0.0))


@pytest.mark.parametrize("depth", [0, 1, 2, 3])
def test_recursive_cover_size_and_distinctness(depth):
    points = generate(parse_generator_spec(f"cover:{depth}:1"))
    assert points.n == COVER_BRANCHING ** depth
    assert np.unique(points.coordinates, axis=0).shape[0] == points.n


def test_recursive_cover_scale():
    radius = 1.0
    space = MetricSpace.euclidean(generate(parse_generator_spec(f"cover:1:{radius}")))
    # One center plus six hexagon balls at distance 2/3: one component at the radius ...
    assert connected_components(build_disk_graph(space, radius)).max() == 0
    # ... and isolated points far below it.
    assert connected_components(build_disk_graph(space, radius / 100)).max() == COVER_BRANCHING - 1


@pytest.mark.parametrize("depth,radius", [(1, 1.0), (2, 1.0), (3, 1.0), (3, 4.5)])
def test_recursive_cover_balls_are_disjoint(depth, radius):
    coordinates = generate(parse_generator_spec(f"cover:{depth}:{radius}")).coordinates
    d = MetricSpace.euclidean(coordinates).pairwise_matrix()
    separation = d[~np.eye(len(coordinates), dtype=bool)].min()
    # Centers of disjoint balls of radius r / 3**depth.
    assert separation == pytest.approx(2.0 * radius / 3.0 ** depth)
    assert np.linalg.norm(coordinates, axis=1).max() < radius
    assert cover_child_offset(radius, depth) == pytest.approx(separation)


def test_recursive_cover_lists_coarse_centers_first():
    coordinates = generate(parse_generator_spec("cover:3:1")).coordinates
    level_one = generate(parse_generator_spec("cover:1:1")).coordinates
    level_two = generate(parse_generator_spec("cover:2:1")).coordinates
    np.testing.assert_allclose(coordinates[:7], level_one)
    np.testing.assert_allclose(coordinates[:49], level_two)


def test_recursive_cover_needs_every_point_below_separation():
    space = MetricSpace.euclidean(generate(parse_generator_spec("cover:2:1")))
    d = space.pairwise_matrix()
    separation = d[~np.eye(space.n, dtype=bool)].min()
    assert separation > 0
    net = dual_clustering(space, separation)
    assert net.size == space.n


def test_recursive_cover_dual_clustering_at_half_radius():
    radius = 1.0
    space = MetricSpace.euclidean(generate(parse_generator_spec(f"cover:2:{radius}")))
    net = dual_clustering(space, radius / 2)
    assert net.size >= COVER_BRANCHING
    # One member per depth-1 ball.
    balls = np.arange(space.n) % COVER_BRANCHING
    assert sorted(balls[list(net.subset)].tolist()) == list(range(COVER_BRANCHING))
