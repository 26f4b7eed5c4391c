from pathlib import Path

import pytest

from errors import ConfigError, DomainError
from models.config import ExperimentConfig, parse_users
from models.generators import MeansSource
from models.policies import PolicyKind
from settings import check_log_level, load_settings


@pytest.mark.parametrize(
    "text, expected",
    [
        ("3", (3,)),
        ("1-5", (1, 2, 3, 4, 5)),
        ("2,4,8", (2, 4, 8)),
        ("1-3,8", (1, 2, 3, 8)),
        ("2:20:2", (2, 4, 6, 8, 10, 12, 14, 16, 18, 20)),
        ("2:7:2", (2, 4, 6)),
        (4, (4,)),
        ([1, 2], (1, 2)),
    ],
)
def test_parse_users(text, expected):
    assert parse_users(text) == expected


@pytest.mark.parametrize("text", ["", "a", "0", "1,1", "3-1", "2:10:0", "1-2,2"])
def test_parse_users_rejects(text):
    with pytest.raises(DomainError):
        parse_users(text)


def _simulate(**overrides):
    values = {"mode": "simulate", "K": "10", "U": "3", "T": "150000", "runs": "30", "seed": "7"}
    values.update(overrides)
    return ExperimentConfig.resolve(values)


def test_simulate_example_is_valid():
    config = _simulate()
    assert (config.K, config.U, config.T, config.runs, config.seed) == (10, (3,), 150000, 30, 7)
    assert config.policy is PolicyKind.EGALUCB
    assert config.generator.source is MeansSource.UNIFORM
    assert not config.multi_user


@pytest.mark.parametrize(
    "overrides, key",
    [
        ({"T": "5", "U": "2"}, "T"),
        ({"U": "11"}, "U"),
        ({"speed": "3"}, "speed"),
        ({"policy": "thompson"}, "policy"),
        ({"seed": None}, "seed"),
        ({"K": None}, "K"),
        ({"runs": "0"}, "runs"),
        ({"seed": "-1"}, "seed"),
        ({"gen": "poisson"}, "gen"),
        ({"select": "best"}, "select"),
        ({"trace": "t.csv"}, "trace"),
        ({"delta_min": "0.1"}, "delta_min"),
        ({"fit_slope": "true"}, "fit_slope"),
        ({"gen": "bernoulli", "instance": "inst.csv"}, "instance"),
    ],
)
def test_config_errors_name_the_key(overrides, key):
    values = {k: v for k, v in overrides.items() if v is not None}
    dropped = [k for k, v in overrides.items() if v is None]
    base = {"mode": "simulate", "K": "10", "U": "3", "T": "150000", "runs": "30", "seed": "7"}
    base.update(values)
    for k in dropped:
        base.pop(k)
    with pytest.raises(ConfigError) as info:
        ExperimentConfig.resolve(base)
    assert info.value.key == key


def test_non_divisible_horizon_message():
    with pytest.raises(ConfigError, match="horizon not divisible by users: T=5, U=2"):
        _simulate(T="5", U="2")


def test_unknown_key_message():
    with pytest.raises(ConfigError, match="unknown key 'speed'"):
        _simulate(speed="3")


def test_round_horizon(caplog):
    config = _simulate(T="10", U="3", round_horizon="true")
    with caplog.at_level("WARNING"):
        assert config.horizon_for(3) == 9
    assert "Rounding horizon" in caplog.text
    assert config.horizon_for(1) == 10


def test_bounds_needs_only_k_and_t():
    config = ExperimentConfig.resolve({"mode": "bounds", "K": "4", "U": "2", "T": "10000"})
    assert config.seed is None
    with pytest.raises(ConfigError) as info:
        ExperimentConfig.resolve({"mode": "bounds", "U": "2", "T": "10000"})
    assert info.value.key == "K"


def test_bounds_rejects_gaps_with_an_instance():
    with pytest.raises(ConfigError):
        ExperimentConfig.resolve(
            {"mode": "bounds", "K": "4", "T": "100", "delta_min": "0.1", "gen": "means:0.1,0.2,0.3,0.4"}
        )


def test_ingest_run_requires_trace():
    with pytest.raises(ConfigError) as info:
        ExperimentConfig.resolve({"mode": "ingest-run", "K": "3", "T": "10", "seed": "1"})
    assert info.value.key == "trace"
    config = ExperimentConfig.resolve(
        {"mode": "ingest-run", "K": "3", "T": "10", "seed": "1", "trace": "t.csv", "select": " random:3 "}
    )
    assert config.trace == Path("t.csv")
    assert config.select == "random:3"


def test_gen_accepts_a_space_separated_string():
    config = _simulate(gen="bernoulli top-u-means:0.8,0.5")
    assert config.gen == ("bernoulli", "top-u-means:0.8,0.5")
    assert config.generator.family == "bernoulli"


def test_provenance_lines_rebuild_the_config():
    config = _simulate(U="1-3", T="12", gen=["gaussian:0.5", "uniform-means:0.1,0.9,4"], out="elsewhere")
    lines = config.provenance_lines()
    assert lines == sorted(lines)
    assert "U=1,2,3" in lines
    assert "gen=gaussian:0.5 uniform-means:0.1,0.9,4" in lines
    assert "policy=egalucb" in lines
    assert "round_horizon=false" in lines
    assert not any(line.startswith(("out=", "instance=", "delta_min=")) for line in lines)
    rebuilt = ExperimentConfig.resolve(dict(line.split("=", 1) for line in lines))
    assert rebuilt == config.model_copy(update={"out": Path("results")})


def test_config_is_frozen():
    config = _simulate()
    with pytest.raises(Exception):
        config.K = 3


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("EGALBANDIT_THREADS", "3")
    monkeypatch.setenv("EGALBANDIT_LOG_LEVEL", "info")
    settings = load_settings()
    assert settings.threads == 3
    assert settings.log_level == "INFO"


@pytest.mark.parametrize("value", ["0", "many"])
def test_settings_reject_bad_threads(monkeypatch, value):
    monkeypatch.setenv("EGALBANDIT_THREADS", value)
    with pytest.raises(ConfigError):
        load_settings()


def test_check_log_level():
    assert check_log_level(" debug ") == "DEBUG"
    with pytest.raises(ConfigError):
        check_log_level("LOUD")
