"""Tests for environment and run configuration."""

import argparse
import os

import pytest

from kcenter_coresets.config import KCenterConfig, RunConfig
from kcenter_coresets.distributed.partition import PARTITION_STRATEGIES
from kcenter_coresets.distributed.pipelines import LOCAL_ALGORITHMS
from kcenter_coresets.exceptions import KCenterConfigError

ENV_NAMES = ("KCENTER_SEED", "KCENTER_WORKERS", "KCENTER_EXACT_GUARD", "KCENTER_VALIDATE_LIMIT", "KCENTER_LOG_FILE")


@pytest.fixture
def clean_env(monkeypatch):
    for name in ENV_NAMES:
        monkeypatch.delenv(name, raising=False)
    yield
    for name in ENV_NAMES:
        os.environ.pop(name, None)


def test_defaults(clean_env, tmp_path):
    env_file = tmp_path / "empty.env"
    env_file.write_text("")
    config = KCenterConfig.from_env(str(env_file))
    assert config == KCenterConfig()
    assert config.to_dict()["exact_guard"] == "10000000"


def test_values_from_env_file(clean_env, tmp_path):
    env_file = tmp_path / "run.env"
    env_file.write_text("KCENTER_SEED=17\nKCENTER_WORKERS=4\nKCENTER_EXACT_GUARD=500\nKCENTER_VALIDATE_LIMIT=0\n")
    config = KCenterConfig.from_env(str(env_file))
    assert (config.seed, config.workers, config.exact_guard, config.validate_limit) == (17, 4, 500, 0)


@pytest.mark.parametrize("line", ["KCENTER_SEED=x", "KCENTER_WORKERS=0", "KCENTER_EXACT_GUARD=-3"])
def test_bad_values(clean_env, tmp_path, line):
    env_file = tmp_path / "bad.env"
    env_file.write_text(line + "\n")
    with pytest.raises(KCenterConfigError):
        KCenterConfig.from_env(str(env_file))


def test_missing_env_file(tmp_path):
    with pytest.raises(KCenterConfigError):
        KCenterConfig.from_env(str(tmp_path / "absent.env"))


def test_from_namespace_skips_unset_values():
    args = argparse.Namespace(command="solve", gen="line:5", k=3, epsilon=None, verbose=True, func=print)
    run = RunConfig.from_namespace(args)
    assert run.command == "solve"
    assert run.k == 3
    assert run.epsilon is None
    assert run.algo == "gonzalez"


def test_with_overrides():
    run = RunConfig(command="simulate", gen="uniform:10:2").with_overrides({"L": 2, "pipeline": "fixedk"})
    assert (run.L, run.pipeline) == (2, "fixedk")
    with pytest.raises(KCenterConfigError):
        run.with_overrides({"machines": 2})


@pytest.mark.parametrize(
    "text,expected", [(None, [2]), ("2-5", [2, 3, 4, 5]), ("2,3,8", [2, 3, 8]), (" 4 ", [4])]
)
def test_k_values(text, expected):
    assert RunConfig(k=2, k_range=text).k_values() == expected


@pytest.mark.parametrize("text", ["a-b", "5-2", ","])
def test_bad_k_range(text):
    with pytest.raises(KCenterConfigError):
        RunConfig(k_range=text).k_values()


@pytest.mark.parametrize(
    "overrides",
    [
        {"k": 0},
        {"L": 0},
        {"epsilon": 0.0},
        {"eps": -1.0},
        {"minpts": 0},
        {"reps": 0},
        {"max_R": -1},
        {"algo": "simplex"},
        {"partition": "hashed"},
        {"local_algo": "simplex"},
        {"radius": 0.0},
        {"workers": 0},
        {"doubling_dim": -2.0},
        {"input": "points.csv"},
    ],
)
def test_validate_rejects(overrides):
    run = RunConfig(command="solve", gen="line:5").with_overrides(overrides)
    with pytest.raises(KCenterConfigError):
        run.validate()


def test_validate_requires_a_source():
    with pytest.raises(KCenterConfigError):
        RunConfig(command="solve").validate()
    RunConfig(command="solve", gen="line:5").validate()
    assert RunConfig(gen="line:5").to_dict()["gen"] == "line:5"


@pytest.mark.parametrize("local_algo", LOCAL_ALGORITHMS)
@pytest.mark.parametrize("strategy", PARTITION_STRATEGIES)
def test_validate_accepts_every_pipeline_choice(local_algo, strategy):
    RunConfig(command="simulate", gen="line:5", local_algo=local_algo, partition=strategy).validate()
