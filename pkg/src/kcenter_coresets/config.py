"""
k-center coresets configuration.

This module provides the environment configuration (``KCenterConfig``) and the
per-invocation run configuration (``RunConfig``) used by the CLI.
"""

import argparse
import os
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from .distributed.partition import PARTITION_STRATEGIES
from .distributed.pipelines import LOCAL_ALGORITHMS
from .exceptions import KCenterConfigError

ALGORITHMS = ("gonzalez", "parametric", "efficient", "exact")
PIPELINES = ("composable", "generalized", "fixedk", "dbscan")
OUTPUT_FORMATS = ("json", "csv")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise KCenterConfigError(f"Environment variable {name} must be an integer, got {raw!r}")


@dataclass
class KCenterConfig:
    """Toolkit defaults read from the environment."""

    seed: int = 0
    workers: int = 1
    exact_guard: int = 10_000_000
    validate_limit: int = 200
    log_file: Optional[str] = None

    @classmethod
    def from_env(cls, env_file: Optional[str] = None) -> "KCenterConfig":
        """Load configuration from environment variables.

        Args:
            env_file: Path to .env file

        Returns:
            KCenterConfig object

        Raises:
            KCenterConfigError: If the env file is missing or a value is malformed
        """
        # Load environment variables from .env file if specified
        if env_file:
            if not os.path.exists(env_file):
                raise KCenterConfigError(f"Environment file not found: {env_file}")
            load_dotenv(env_file)
        else:
            load_dotenv()  # Try to load from default .env file

        config = cls(
            seed=_env_int("KCENTER_SEED", 0),
            workers=_env_int("KCENTER_WORKERS", 1),
            exact_guard=_env_int("KCENTER_EXACT_GUARD", 10_000_000),
            validate_limit=_env_int("KCENTER_VALIDATE_LIMIT", 200),
            log_file=os.getenv("KCENTER_LOG_FILE") or None,
        )

        if config.workers < 1:
            raise KCenterConfigError(f"KCENTER_WORKERS must be at least 1, got {config.workers}")
        if config.exact_guard < 1:
            raise KCenterConfigError(f"KCENTER_EXACT_GUARD must be positive, got {config.exact_guard}")
        if config.validate_limit < 0:
            raise KCenterConfigError(
                f"KCENTER_VALIDATE_LIMIT must be nonnegative, got {config.validate_limit}"
            )
        return config

    def to_dict(self) -> Dict[str, str]:
        """Convert the configuration to a dictionary.

        Returns:
            Dictionary containing configuration values
        """
        return {
            "seed": str(self.seed),
            "workers": str(self.workers),
            "exact_guard": str(self.exact_guard),
            "validate_limit": str(self.validate_limit),
            "log_file": self.log_file or "",
        }


@dataclass
class RunConfig:
    """Parameters of one CLI invocation.

    Built from the parsed command line and optionally overlaid with a JSON
    scenario. ``validate`` runs before any work starts.
    """

    command: str = ""
    input: Optional[str] = None
    matrix: Optional[str] = None
    gen: Optional[str] = None
    algo: str = "gonzalez"
    pipeline: str = "composable"
    local_algo: str = "gonzalez"
    k: int = 2
    k_range: Optional[str] = None
    epsilon: Optional[float] = None
    eps: Optional[float] = None
    minpts: int = 1
    link_factor: float = 2.0
    seed: int = 0
    L: int = 1
    m: Optional[int] = None
    partition: str = "arbitrary"
    reps: int = 1
    max_R: int = 3
    halvings: Optional[int] = None
    radius: Optional[float] = None
    out: Optional[str] = None
    format: str = "json"
    randomize: bool = False
    mapreduce: bool = False
    oracle: bool = False
    doubling_dim: Optional[float] = None
    force: bool = False
    workers: int = 1
    no_timing: bool = False

    @classmethod
    def field_names(cls) -> List[str]:
        return [f.name for f in fields(cls)]

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> "RunConfig":
        """Collect the RunConfig fields present on a parsed namespace."""
        values = {}
        for name in cls.field_names():
            value = getattr(args, name, None)
            if value is not None:
                values[name] = value
        return cls(**values)

    def with_overrides(self, overrides: Dict[str, Any]) -> "RunConfig":
        """Return a copy with values from a JSON scenario applied.

        Raises:
            KCenterConfigError: If the scenario names an unknown field
        """
        known = set(self.field_names())
        unknown = sorted(set(overrides) - known)
        if unknown:
            raise KCenterConfigError(f"Unknown configuration keys: {', '.join(unknown)}")
        return replace(self, **overrides)

    def k_values(self) -> List[int]:
        """The k values of ``--k-range`` ("2-10" or "2,3,5"), else ``[k]``."""
        if not self.k_range:
            return [self.k]
        text = self.k_range.strip()
        try:
            if "-" in text and "," not in text:
                low, high = (int(part) for part in text.split("-", 1))
                values = list(range(low, high + 1))
            else:
                values = [int(part) for part in text.split(",") if part.strip()]
        except ValueError:
            raise KCenterConfigError(f"Invalid k range: {self.k_range!r}")
        if not values:
            raise KCenterConfigError(f"Empty k range: {self.k_range!r}")
        return values

    def validate(self) -> None:
        """Check every parameter before execution.

        Raises:
            KCenterConfigError: If a value is out of range or inputs conflict
        """
        sources = [name for name in ("input", "matrix", "gen") if getattr(self, name)]
        if len(sources) > 1:
            raise KCenterConfigError(
                f"Input sources are mutually exclusive, got {', '.join('--' + s for s in sources)}"
            )
        if self.command and not sources:
            raise KCenterConfigError("One of --input, --matrix or --gen is required")

        checks = [
            (self.algo in ALGORITHMS, f"--algo must be one of {', '.join(ALGORITHMS)}"),
            (self.pipeline in PIPELINES, f"--pipeline must be one of {', '.join(PIPELINES)}"),
            (self.local_algo in LOCAL_ALGORITHMS, f"--local-algo must be one of {', '.join(LOCAL_ALGORITHMS)}"),
            (self.partition in PARTITION_STRATEGIES, "--partition must be arbitrary or random"),
            (self.format in OUTPUT_FORMATS, "--format must be json or csv"),
            (self.k >= 1, f"--k must be at least 1, got {self.k}"),
            (self.L >= 1, f"--L must be at least 1, got {self.L}"),
            (self.m is None or self.m >= 1, f"--m must be at least 1, got {self.m}"),
            (self.reps >= 1, f"--reps must be at least 1, got {self.reps}"),
            (self.max_R >= 0, f"--max-R must be nonnegative, got {self.max_R}"),
            (self.halvings is None or self.halvings >= 0, f"--halvings must be nonnegative, got {self.halvings}"),
            (self.epsilon is None or self.epsilon > 0, f"--epsilon must be positive, got {self.epsilon}"),
            (self.eps is None or self.eps > 0, f"--eps must be positive, got {self.eps}"),
            (self.radius is None or self.radius > 0, f"--radius must be positive, got {self.radius}"),
            (
                self.doubling_dim is None or self.doubling_dim >= 0,
                f"--doubling-dim must be nonnegative, got {self.doubling_dim}",
            ),
            (self.minpts >= 1, f"--minpts must be at least 1, got {self.minpts}"),
            (self.link_factor > 0, f"--link-factor must be positive, got {self.link_factor}"),
            (self.workers >= 1, f"--workers must be at least 1, got {self.workers}"),
        ]
        for ok, message in checks:
            if not ok:
                raise KCenterConfigError(message)
        if any(k < 1 for k in self.k_values()):
            raise KCenterConfigError(f"Every k in --k-range must be at least 1, got {self.k_range}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
