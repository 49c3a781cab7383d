import json
import shutil

import pytest

from peanut.cli import dispatch
from peanut.config import load_config
from peanut.errors import ParseError, ValidationError
from peanut.forest import ForestModel
from peanut.ingest import read_document, read_frame

from conftest import DATA


@pytest.fixture
def workdir(tmp_path):
    for name in ("affinity_daily.csv", "womply_weekly.csv", "fixture.yaml"):
        shutil.copy(DATA / name, tmp_path / name)
    return tmp_path


@pytest.fixture
def frame_path(workdir):
    out = workdir / "frame.json"
    assert dispatch(["ingest", "--config", str(workdir / "fixture.yaml"), "--out", str(out)]) == 0
    return out


def test_unknown_subcommand(capsys):
    assert dispatch(["frobnicate"]) == 1
    err = capsys.readouterr().err
    assert err.strip().splitlines()[-1].startswith("peanut: error: UsageError:")


def test_missing_subcommand(capsys):
    assert dispatch([]) == 1


def test_help_exits_zero(capsys):
    assert dispatch(["--help"]) == 0
    assert "bench" in capsys.readouterr().out


def test_ingest_and_describe(frame_path, capsys):
    f = read_frame(frame_path)
    assert f.columns == ["daily_spend_19_all", "q1", "merchants_all"]
    assert int(f.mask["merchants_all"].sum()) == 11
    assert dispatch(["describe", str(frame_path)]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].split() == ["daily_spend_19_all", "q1", "merchants_all"]
    assert "0.224" in out


def test_describe_json_and_scatter(frame_path, workdir, capsys):
    assert dispatch(["describe", str(frame_path), "--json", "--columns", "merchants_all"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["stats"]["merchants_all"]["count"] == 11
    out = workdir / "scatter.json"
    assert dispatch(["describe", str(frame_path), "--scatter", "merchants_all", "--out", str(out)]) == 0
    points = json.loads(out.read_text())
    assert len(points) == 11 and points[0][0] == "2020-01-16"


def test_fit_ols_table(frame_path, capsys):
    assert dispatch(["fit-ols", str(frame_path), "--y", "daily_spend_19_all",
                     "--x", "merchants_all"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert any(line.split()[0] == "merchants_all" for line in lines if line.strip())


def test_impute_requires_seed(frame_path, workdir, capsys):
    out = workdir / "h.json"
    assert dispatch(["impute", str(frame_path), "--strategy", "mc", "--out", str(out)]) == 1
    assert dispatch(["impute", str(frame_path), "--strategy", "mc", "--seed", "3",
                     "--out", str(out)]) == 0
    doc = read_document(out)
    assert doc["provenance"]["merchants_all"].count("synthetic:mc") == 73


def test_impute_model(frame_path, workdir):
    out = workdir / "h.json"
    assert dispatch(["impute", str(frame_path), "--strategy", "model", "--seed", "3",
                     "--features", "daily_spend_19_all", "--n-trees", "10", "--out", str(out)]) == 0
    assert read_frame(out).mask["merchants_all"].all()


def test_train_forest(frame_path, workdir):
    out = workdir / "forest.json"
    assert dispatch(["train-forest", str(frame_path), "--y", "daily_spend_19_all",
                     "--x", "merchants_all", "--seed", "1", "--n-trees", "5",
                     "--out", str(out)]) == 0
    model = ForestModel.from_dict(json.loads(out.read_text()))
    assert len(model.trees) == 5


def test_simulate(workdir):
    out = workdir / "sim"
    assert dispatch(["simulate", "--n-days", "70", "--seed", "2", "--out", str(out)]) == 0
    masked = read_frame(out / "masked.json")
    assert int(masked.mask["merchants"].sum()) == 10
    assert json.loads((out / "spec.json").read_text())["seed"] == 2


def test_bench_twice_identical(workdir):
    cfg = str(workdir / "fixture.yaml")
    assert dispatch(["bench", "--config", cfg, "--out", str(workdir / "a")]) == 0
    assert dispatch(["bench", "--config", cfg, "--out", str(workdir / "b")]) == 0
    names = sorted(p.name for p in (workdir / "a").iterdir())
    assert "report.txt" in names and "model_2_ols.txt" in names
    for name in names:
        assert (workdir / "a" / name).read_bytes() == (workdir / "b" / name).read_bytes()
    report = json.loads((workdir / "a" / "report.json").read_text())
    assert report["models"][0]["cv"] is None


def test_data_error_exit_code(workdir, capsys):
    bad = workdir / "bad.json"
    bad.write_text('{"dates": ["2020-01-02", "2020-01-01"], "columns": {}}')
    assert dispatch(["describe", str(bad)]) == 2
    assert "UnsortedDates" in capsys.readouterr().err


def test_unknown_column_exit_code(frame_path, capsys):
    assert dispatch(["fit-ols", str(frame_path), "--y", "nope", "--x", "merchants_all"]) == 2
    assert "UnknownColumn" in capsys.readouterr().err


def test_config_validation(workdir):
    text = (workdir / "fixture.yaml").read_text()
    (workdir / "c1.yaml").write_text(text.replace("folds: 3", "folds: 1"))
    with pytest.raises(ValidationError) as exc:
        load_config(workdir / "c1.yaml")
    assert exc.value.field == "folds"
    (workdir / "c2.yaml").write_text(text.replace("seed: 42\n", ""))
    with pytest.raises(ValidationError) as exc:
        load_config(workdir / "c2.yaml")
    assert exc.value.field == "seed"
    (workdir / "c3.yaml").write_text(text + "colour: red\n")
    with pytest.raises(ValidationError) as exc:
        load_config(workdir / "c3.yaml")
    assert exc.value.field == "colour"


def test_config_parse_error_line(workdir):
    (workdir / "bad.yaml").write_text("folds: 3\nseed: [1, 2\n")
    with pytest.raises(ParseError) as exc:
        load_config(workdir / "bad.yaml")
    assert exc.value.line is not None


def test_ols_only_config_needs_no_seed(workdir):
    text = (workdir / "fixture.yaml").read_text().replace("seed: 42\n", "")
    (workdir / "c.yaml").write_text(text + "learner: ols\nmodels: [1, 2, 3]\n")
    assert load_config(workdir / "c.yaml").seed is None


def test_config_error_exit_code(workdir, capsys):
    text = (workdir / "fixture.yaml").read_text().replace("folds: 3", "folds: 1")
    (workdir / "c.yaml").write_text(text)
    assert dispatch(["bench", "--config", str(workdir / "c.yaml")]) == 2
    assert "ValidationError: folds" in capsys.readouterr().err
