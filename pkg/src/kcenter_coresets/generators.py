"""
k-center coresets synthetic generators.

This module provides deterministic synthetic point sets: uniform boxes,
gaussian blobs, the collinear adversarial line and the planar recursive cover.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from .exceptions import KCenterUsageError
from .metric import PointSet
from .utils import rng_stream

logger = logging.getLogger(__name__)

GENERATOR_KINDS = ("uniform-box", "gaussian-clusters", "collinear-line", "recursive-cover")

KIND_ALIASES: Dict[str, str] = {
    "uniform": "uniform-box",
    "gauss": "gaussian-clusters",
    "line": "collinear-line",
    "cover": "recursive-cover",
}

# One center ball plus six hexagon balls per ball.
COVER_BRANCHING = 7


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of a synthetic instance.

    ``n`` is derived as 7**depth for the recursive cover.
    """

    kind: str
    n: int = 1
    dim: int = 2
    seed: int = 0
    clusters: int = 2
    spread: float = 0.1
    separation: float = 10.0
    spacing: float = 0.5
    depth: int = 1
    radius: float = 1.0

    def to_dict(self) -> Dict[str, object]:
        return {
            "kind": self.kind,
            "n": self.n,
            "dim": self.dim,
            "seed": self.seed,
            "clusters": self.clusters,
            "spread": self.spread,
            "separation": self.separation,
            "spacing": self.spacing,
            "depth": self.depth,
            "radius": self.radius,
        }


def _canonical_kind(kind: str) -> str:
    kind = KIND_ALIASES.get(kind, kind)
    if kind not in GENERATOR_KINDS:
        raise KCenterUsageError(
            f"Unknown generator kind {kind!r}; expected one of {', '.join(GENERATOR_KINDS)}"
        )
    return kind


def parse_generator_spec(text: str, seed: int = 0) -> GeneratorSpec:
    """Parse the ``--gen`` mini-language.

    Forms: ``line:N:SPACING``, ``uniform:N:DIM``,
    ``gauss:N:DIM:CLUSTERS:SPREAD[:SEPARATION]`` and ``cover:DEPTH:RADIUS``.
    Long kind names are accepted too.

    Args:
        text: Generator description
        seed: Seed recorded in the GeneratorSpec

    Returns:
        GeneratorSpec

    Raises:
        KCenterUsageError: If the kind is unknown or a parameter is malformed
    """
    parts = [part.strip() for part in text.split(":")]
    kind = _canonical_kind(parts[0])
    params = parts[1:]

    expected = {
        "collinear-line": (1, 2),
        "uniform-box": (1, 2),
        "gaussian-clusters": (1, 5),
        "recursive-cover": (1, 2),
    }[kind]
    if not expected[0] <= len(params) <= expected[1]:
        raise KCenterUsageError(f"Wrong number of parameters in generator spec {text!r}")

    try:
        if kind == "collinear-line":
            spacing = float(params[1]) if len(params) > 1 else 0.5
            return GeneratorSpec(kind=kind, n=int(params[0]), dim=1, seed=seed, spacing=spacing)
        if kind == "uniform-box":
            dim = int(params[1]) if len(params) > 1 else 2
            return GeneratorSpec(kind=kind, n=int(params[0]), dim=dim, seed=seed)
        if kind == "gaussian-clusters":
            defaults = [None, "2", "2", "0.1", "10.0"]
            values = params + defaults[len(params):]
            return GeneratorSpec(
                kind=kind,
                n=int(values[0]),
                dim=int(values[1]),
                seed=seed,
                clusters=int(values[2]),
                spread=float(values[3]),
                separation=float(values[4]),
            )
        depth = int(params[0])
        radius = float(params[1]) if len(params) > 1 else 1.0
        return GeneratorSpec(
            kind=kind,
            n=COVER_BRANCHING ** max(depth, 0),
            dim=2,
            seed=seed,
            depth=depth,
            radius=radius,
        )
    except ValueError:
        raise KCenterUsageError(f"Malformed number in generator spec {text!r}")


def _validate(spec: GeneratorSpec) -> None:
    if spec.kind == "recursive-cover":
        if spec.depth < 0:
            raise KCenterUsageError(f"Recursive cover depth must be nonnegative, got {spec.depth}")
        if spec.radius <= 0:
            raise KCenterUsageError(f"Recursive cover radius must be positive, got {spec.radius}")
        if spec.dim != 2:
            raise KCenterUsageError("Recursive cover is planar (dim=2)")
        return
    if spec.n < 1:
        raise KCenterUsageError(f"Generator n must be positive, got {spec.n}")
    if spec.dim < 1:
        raise KCenterUsageError(f"Generator dim must be positive, got {spec.dim}")
    if spec.kind == "gaussian-clusters":
        if spec.clusters < 1:
            raise KCenterUsageError(f"Cluster count must be positive, got {spec.clusters}")
        if spec.spread < 0 or spec.separation < 0:
            raise KCenterUsageError("Cluster spread and separation must be nonnegative")
    if spec.kind == "collinear-line" and spec.spacing <= 0:
        raise KCenterUsageError(f"Line spacing must be positive, got {spec.spacing}")


def cluster_centers(spec: GeneratorSpec) -> np.ndarray:
    """Grid positions (spacing ``separation``) of the gaussian blob centers."""
    side = max(1, math.ceil(spec.clusters ** (1.0 / spec.dim) - 1e-9))
    centers = np.zeros((spec.clusters, spec.dim))
    for c in range(spec.clusters):
        rest = c
        for axis in range(spec.dim):
            centers[c, axis] = (rest % side) * spec.separation
            rest //= side
    return centers


def cover_child_offset(radius: float, level: int) -> float:
    """Distance from a level-``level`` ball center to its parent's center."""
    return 2.0 * radius / 3.0 ** level


def _recursive_cover(depth: int, radius: float) -> np.ndarray:
    # Seven disjoint balls of radius b/3 pack a ball of radius b: the center
    # ball plus six hexagon balls at distance 2b/3. Point i takes the child
    # named by its base-7 digits, level 1 least significant, so the first
    # 7**level indices are the ball centers of that level.
    angles = np.arange(6) * (math.pi / 3.0)
    units = np.vstack([np.zeros((1, 2)), np.column_stack([np.cos(angles), np.sin(angles)])])
    index = np.arange(COVER_BRANCHING ** depth)
    points = np.zeros((index.size, 2))
    for level in range(1, depth + 1):
        digit = (index // COVER_BRANCHING ** (level - 1)) % COVER_BRANCHING
        points += cover_child_offset(radius, level) * units[digit]
    return points


def generate(spec: GeneratorSpec) -> PointSet:
    """Generate the PointSet described by ``spec``.

    Generation is a pure function of the GeneratorSpec.

    Raises:
        KCenterUsageError: If the kind is unknown or a parameter is out of range
    """
    kind = _canonical_kind(spec.kind)
    if kind != spec.kind:
        spec = GeneratorSpec(**{**spec.to_dict(), "kind": kind})
    _validate(spec)

    if kind == "collinear-line":
        coordinates = np.zeros((spec.n, spec.dim))
        coordinates[:, 0] = np.arange(spec.n) * spec.spacing
    elif kind == "uniform-box":
        rng = rng_stream(spec.seed, "generator")
        coordinates = rng.uniform(0.0, 1.0, size=(spec.n, spec.dim))
    elif kind == "gaussian-clusters":
        rng = rng_stream(spec.seed, "generator")
        centers = cluster_centers(spec)
        labels = np.arange(spec.n) % spec.clusters
        coordinates = centers[labels] + rng.normal(0.0, spec.spread, size=(spec.n, spec.dim))
    else:
        coordinates = _recursive_cover(spec.depth, spec.radius)

    logger.debug(f"Generated {len(coordinates)} points of kind {kind}")
    return PointSet(coordinates)


def gaussian_labels(spec: GeneratorSpec) -> np.ndarray:
    """The blob each gaussian-clusters point was drawn from."""
    return np.arange(spec.n) % max(spec.clusters, 1)
