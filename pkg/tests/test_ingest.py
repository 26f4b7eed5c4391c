import pytest
from pytest import approx

from errors import IngestError
from models.arms import EmpiricalArm
from models.traces import SelectionMode, TraceSpec
from repositories.trace_repository import TraceRepository
from services.ingest_service import IngestService, instance_summary


@pytest.fixture
def ingest() -> IngestService:
    return IngestService(TraceRepository())


def _write(tmp_path, rows):
    path = tmp_path / "trace.csv"
    path.write_text("id,value\n" + "".join(f"{i},{v}\n" for i, v in rows))
    return path


def test_groups_values_by_id(tmp_path, ingest):
    path = _write(tmp_path, [("m1", 4.0), ("m1", 5.0), ("m2", 3.0)])
    instance, id_map = ingest.load_instance(TraceSpec(path, "id", "value", top_k=2))
    assert instance.arms == (EmpiricalArm((4.0, 5.0)), EmpiricalArm((3.0,)))
    assert instance.means[0] == 4.5
    assert [(e.arm_index, e.original_id, e.n_samples) for e in id_map] == [(1, "m1", 2), (2, "m2", 1)]


def test_negate(tmp_path, ingest):
    path = _write(tmp_path, [("m1", 2.0), ("m1", 4.0)])
    instance, id_map = ingest.load_instance(TraceSpec(path, "id", "value", negate=True, top_k=1))
    assert instance.arms[0] == EmpiricalArm((-2.0, -4.0))
    assert id_map[0].mean == -3.0


def test_insufficient_ids(tmp_path, ingest):
    path = _write(tmp_path, [("m1", 4.0), ("m2", 3.0)])
    with pytest.raises(IngestError, match="insufficient distinct ids"):
        ingest.load_instance(TraceSpec(path, "id", "value", top_k=3))


def test_top_count_ties_by_first_appearance(fixtures_dir, ingest):
    spec = TraceSpec(fixtures_dir / "cluster_trace.csv", "machine_id", "cycles_per_instruction", negate=True, top_k=3)
    instance, id_map = ingest.load_instance(spec)
    assert [e.original_id for e in id_map] == ["m3", "m1", "m2"]
    assert [e.n_samples for e in id_map] == [5, 4, 4]
    assert list(instance.means) == approx([-0.8, -1.5, -2.2])
    assert sum(e.n_samples for e in id_map) <= 16


def test_max_rows_truncates_before_grouping(fixtures_dir, ingest):
    spec = TraceSpec(fixtures_dir / "cluster_trace.csv", "machine_id", "cycles_per_instruction", top_k=2, max_rows=4)
    _, id_map = ingest.load_instance(spec)
    assert [(e.original_id, e.n_samples) for e in id_map] == [("m1", 2), ("m2", 1)]


def test_ratings_support_stays_in_rating_scale(fixtures_dir, ingest):
    instance, id_map = ingest.load_instance(TraceSpec(fixtures_dir / "ratings.csv", "movieId", "rating", top_k=3))
    assert [e.original_id for e in id_map] == ["10", "20", "30"]
    scale = {0.5 * k for k in range(1, 11)}
    for arm in instance.arms:
        assert set(arm.samples) <= scale


def test_random_selection_is_seeded(fixtures_dir, ingest):
    spec = TraceSpec(fixtures_dir / "ratings.csv", "movieId", "rating", top_k=3, selection=SelectionMode.parse("random:4"))
    first = ingest.load_instance(spec)
    second = ingest.load_instance(spec)
    assert first == second
    ids = [e.original_id for e in first[1]]
    order = ["10", "20", "30", "40", "50", "60"]
    assert sorted(ids, key=order.index) == ids
    assert len(set(ids)) == 3


def test_ingestion_is_deterministic(fixtures_dir, ingest):
    spec = TraceSpec(fixtures_dir / "cluster_trace.csv", "machine_id", "cycles_per_instruction", top_k=4)
    assert ingest.load_instance(spec) == ingest.load_instance(spec)


def test_selection_mode_parse():
    assert SelectionMode.parse("top-count") == SelectionMode()
    assert str(SelectionMode.parse("random:12")) == "random:12"
    with pytest.raises(ValueError):
        SelectionMode.parse("random:x")


def test_instance_summary(tmp_path, ingest):
    path = _write(tmp_path, [("m1", 4.0), ("m1", 5.0), ("m2", 3.0)])
    instance, _ = ingest.load_instance(TraceSpec(path, "id", "value", top_k=2))
    text = instance_summary(instance, 1)
    lines = text.splitlines()
    assert lines[:6] == ["# K=2", "# U=1", "# mu_star=4.5", "# delta_min=1.5", "# delta_max=1.5", "# top_set=1"]
    assert lines[6] == "arm_index,kind,n_samples,mean"
    assert lines[7:] == ["1,empirical,2,4.5", "2,empirical,1,3"]


def test_instance_summary_all_users(tmp_path, ingest):
    path = _write(tmp_path, [("m1", 4.0), ("m1", 5.0), ("m2", 3.0)])
    instance, _ = ingest.load_instance(TraceSpec(path, "id", "value", top_k=2))
    lines = instance_summary(instance, 2).splitlines()
    assert "# delta_min=undefined" in lines
    assert "# delta_max=0" in lines
    assert "# top_set=1,2" in lines


def test_summarize_reports_the_top_set(tmp_path, ingest):
    path = _write(tmp_path, [("m1", 1.0), ("m2", 7.0), ("m2", 9.0), ("m3", 5.0)])
    instance, _ = ingest.load_instance(TraceSpec(path, "id", "value", top_k=3))
    text = ingest.summarize(instance, 2)
    assert text == instance_summary(instance, 2)
    assert "# top_set=1,3" in text.splitlines()
