import numpy as np
import pytest
from pytest import approx

from errors import DomainError
from models.arms import BernoulliArm, GaussianArm
from models.generators import GeneratorSpec, MeansSource
from repositories.instance_repository import InstanceRepository
from services.instance_service import InstanceService, generate_means


@pytest.fixture
def instance_service() -> InstanceService:
    return InstanceService(InstanceRepository())


def test_generator_defaults():
    spec = GeneratorSpec.parse([])
    assert spec == GeneratorSpec()
    assert spec.family == "gaussian" and spec.std == 1.0
    assert spec.source is MeansSource.UNIFORM and spec.params == (0.01, 0.99)
    assert not spec.depends_on_users


@pytest.mark.parametrize(
    "items, expected",
    [
        (["gaussian:0.5"], GeneratorSpec(std=0.5)),
        (["bernoulli", "top-u-means:0.8,0.5"], GeneratorSpec("bernoulli", 1.0, MeansSource.TOP_U, (0.8, 0.5))),
        (["uniform-means:0.1,0.2,7"], GeneratorSpec(params=(0.1, 0.2), means_seed=7)),
        (["means:0.9,0.1,0.4"], GeneratorSpec(source=MeansSource.LIST, params=(0.9, 0.1, 0.4))),
        (["hard"], GeneratorSpec(source=MeansSource.HARD, params=())),
    ],
)
def test_generator_parse(items, expected):
    assert GeneratorSpec.parse(items) == expected


@pytest.mark.parametrize(
    "items",
    [
        ["poisson"],
        ["gaussian:-1"],
        ["gaussian:a"],
        ["uniform-means:0.9,0.1"],
        ["uniform-means:0.1"],
        ["uniform-means:0.1,0.2,1.5"],
        ["top-u-means:0.8"],
        ["means:"],
        ["bernoulli", "hard"],
        ["bernoulli:0.5"],
    ],
)
def test_generator_parse_rejects(items):
    with pytest.raises(DomainError):
        GeneratorSpec.parse(items)


def test_uniform_means_are_seeded():
    spec = GeneratorSpec.parse(["uniform-means:0.01,0.99"])
    first = generate_means(spec, 10, 1, seed=3)
    np.testing.assert_array_equal(first, generate_means(spec, 10, 4, seed=3))
    assert ((first >= 0.01) & (first <= 0.99)).all()
    assert not np.array_equal(first, generate_means(spec, 10, 1, seed=4))


def test_uniform_means_own_seed_wins():
    spec = GeneratorSpec.parse(["uniform-means:0.01,0.99,5"])
    np.testing.assert_array_equal(generate_means(spec, 6, 1, seed=1), generate_means(spec, 6, 1, seed=2))


def test_top_u_means():
    spec = GeneratorSpec.parse(["top-u-means:0.8,0.5"])
    np.testing.assert_array_equal(generate_means(spec, 5, 2, seed=0), [0.8, 0.8, 0.5, 0.5, 0.5])
    assert spec.depends_on_users


def test_means_list_length_must_match():
    spec = GeneratorSpec.parse(["means:0.9,0.1"])
    np.testing.assert_array_equal(generate_means(spec, 2, 1, seed=0), [0.9, 0.1])
    with pytest.raises(DomainError):
        generate_means(spec, 3, 1, seed=0)


def test_generate_families(instance_service):
    gaussian = instance_service.generate(GeneratorSpec.parse(["gaussian:2", "means:0.3,0.6"]), 2, 1, 10, 0)
    assert gaussian.arms == (GaussianArm(0.3, 2.0), GaussianArm(0.6, 2.0))
    bernoulli = instance_service.generate(GeneratorSpec.parse(["bernoulli", "means:0.3,0.6"]), 2, 1, 10, 0)
    assert bernoulli.arms == (BernoulliArm(0.3), BernoulliArm(0.6))


def test_generate_hard(instance_service):
    instance = instance_service.generate(GeneratorSpec.parse(["hard"]), 4, 2, 100, 0)
    np.testing.assert_allclose(instance.means, [0.025, 0.025, 0.0, 0.0])


def test_generate_rejects_bad_arm_count(instance_service):
    with pytest.raises(DomainError):
        instance_service.generate(GeneratorSpec(), 0, 1, 10, 0)


def test_save_and_load(tmp_path, instance_service):
    instance = instance_service.generate(GeneratorSpec.parse(["gaussian:0.5"]), 4, 1, 10, 9)
    path = instance_service.save(tmp_path / "inst.csv", instance)
    loaded = instance_service.load(path)
    assert loaded == instance
    assert list(loaded.means) == approx(list(instance.means))
