import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from qsarmap import analysis
from qsarmap.cli import RunConfig, build_parser, config_from_args, main, run, run_pipeline
from qsarmap.dataset import EndpointLabeling
from qsarmap.embedding import Embedding
from qsarmap.report import (
    REPORT_SCHEMA_VERSION,
    build_report,
    emit_scatter_svg,
    read_embedding_csv,
)

SVG = "{http://www.w3.org/2000/svg}"


def markers(path):
    root = ET.parse(path).getroot()
    groups = root.iter(f"{SVG}g")
    return [g for g in groups if g.get("class", "").startswith("marker")]


@pytest.fixture(scope="module")
def full_run(tmp_path_factory, carcinogenicity_csv):
    out = tmp_path_factory.mktemp("full")
    status = run(RunConfig(input=carcinogenicity_csv, endpoint="ActivityScore", out=str(out)))
    assert status == 0
    return out, json.loads((out / "report.json").read_text())


class TestRun:
    def test_single_artifact_set(self, tmp_path, carcinogenicity_csv):
        cfg = RunConfig(input=carcinogenicity_csv, endpoint="ActivityScore",
                        out=str(tmp_path), methods=("pca",), dims=(1,))
        assert run(cfg) == 0
        assert sorted(p.name for p in tmp_path.iterdir()) == ["pca_1d.csv", "pca_1d.svg", "report.json"]

    def test_mean_threshold_recorded(self, full_run):
        _, doc = full_run
        assert doc["labeling"]["threshold"] == 29.0
        assert doc["labeling"]["threshold_source"] == "mean"
        assert doc["labeling"]["counts"] == {"active": 27, "inactive": 28}

    def test_rerun_is_byte_identical(self, tmp_path, full_run, carcinogenicity_csv):
        first, _ = full_run
        assert run(RunConfig(input=carcinogenicity_csv, endpoint="ActivityScore", out=str(tmp_path))) == 0
        names = sorted(p.name for p in first.iterdir())
        assert names == sorted(p.name for p in tmp_path.iterdir())
        for name in names:
            assert (first / name).read_bytes() == (tmp_path / name).read_bytes(), name

    def test_every_pair_once(self, full_run):
        out, doc = full_run
        stems = {f"{m}_{k}d" for m in ("pca", "nlpca", "sammon") for k in (1, 2)}
        assert len(doc["metrics"]) == 6
        assert {f"{m['method']}_{m['k']}d" for m in doc["metrics"]} == stems
        assert set(doc["files"]) == stems == set(doc["verdicts"])
        for stem in stems:
            assert (out / f"{stem}.svg").is_file() and (out / f"{stem}.csv").is_file()

    def test_report_schema(self, full_run):
        _, doc = full_run
        assert doc["schema_version"] == REPORT_SCHEMA_VERSION
        assert doc["warnings"] == []
        assert set(doc["ranking"]) == {"1", "2"}
        assert set(doc["traces"]) == {"nlpca_1d", "nlpca_2d", "sammon_1d", "sammon_2d"}
        assert doc["config"]["seed"] == 0 and "out" not in doc["config"]
        assert doc["dataset"]["n_descriptors"] == 23

    def test_svg_marker_count(self, full_run):
        out, doc = full_run
        for stem in doc["files"]:
            assert len(markers(out / f"{stem}.svg")) == doc["dataset"]["n_compounds"]

    def test_metrics_recomputed_from_csv(self, full_run):
        out, doc = full_run
        for block in doc["metrics"]:
            _, coords, names = read_embedding_csv(out / f"{block['method']}_{block['k']}d.csv")
            y = np.array([n == "active" for n in names])
            m = analysis.evaluate(coords, y, block["method"])
            assert m.silhouette == pytest.approx(block["silhouette"], abs=1e-9)
            assert m.primary == pytest.approx(
                block["threshold_accuracy_1d" if m.k == 1 else "linear_accuracy"], abs=1e-9)
            assert m.quadratic_accuracy == pytest.approx(block["quadratic_accuracy"], abs=1e-9)
            assert m.verdict == block["verdict"]

    def test_csv_header(self, full_run):
        out, _ = full_run
        assert (out / "pca_1d.csv").read_text().splitlines()[0] == "id,c1,label"
        assert (out / "pca_2d.csv").read_text().splitlines()[0] == "id,c1,c2,label"

    def test_bad_input_names_stage(self, tmp_path, capsys):
        status = run(RunConfig(input=str(tmp_path / "missing.csv"), endpoint="y", out=str(tmp_path)))
        assert status != 0
        assert "stage load" in capsys.readouterr().err

    def test_single_class_names_label_stage(self, tmp_path, write_csv, capsys):
        path = write_csv("id,a,b,y\nm1,1,2,5\nm2,2,1,5\nm3,0,3,5\n")
        status = run(RunConfig(input=str(path), endpoint="y", out=str(tmp_path / "o"), threshold=6))
        assert status == 1
        assert "stage label" in capsys.readouterr().err

    def test_duplicate_warning_in_report(self, tmp_path, write_csv):
        path = write_csv("id,a,b,y\nm1,1,2,5\nm2,1,2,7\nm3,0,3,6\nm4,3,0,9\nm5,2,2,4\n")
        assert run(RunConfig(input=str(path), endpoint="y", out=str(tmp_path / "o"),
                             methods=("pca",), dims=(2,))) == 0
        doc = json.loads((tmp_path / "o" / "report.json").read_text())
        assert doc["dataset"]["duplicates_removed"] == 1
        assert any("duplicate" in w for w in doc["warnings"])
        assert any("differing endpoint" in w for w in doc["warnings"])


class TestRunConfig:
    def test_rejects_empty_methods(self):
        with pytest.raises(ValueError):
            RunConfig(input="x", endpoint="y", out="o", methods=())

    def test_rejects_unknown_method(self):
        with pytest.raises(ValueError, match="tsne"):
            RunConfig(input="x", endpoint="y", out="o", methods=("tsne",))

    def test_rejects_dim_three(self):
        with pytest.raises(ValueError):
            RunConfig(input="x", endpoint="y", out="o", dims=(3,))

    def test_fixed_threshold(self, carcinogenicity_csv):
        res = run_pipeline(RunConfig(input=carcinogenicity_csv, endpoint="ActivityScore",
                                     out="unused", threshold="30", methods=("pca",), dims=(1,)))
        assert res.metadata["labeling"]["threshold"] == 30.0
        assert res.metadata["labeling"]["threshold_source"] == "fixed"


class TestScatterSvg:
    def test_two_points(self, tmp_path):
        lab = EndpointLabeling(0.0, [True, False])
        emit_scatter_svg(Embedding(np.array([[0.0, 1.0], [1.0, 0.0]]), "pca"), lab, tmp_path / "a.svg")
        classes = [g.get("class") for g in markers(tmp_path / "a.svg")]
        assert sorted(classes) == ["marker asterisk", "marker cross"]

    def test_index_axis_for_1d(self, tmp_path):
        lab = EndpointLabeling(0.0, [True, False, True, False, False])
        emb = Embedding(np.array([3.0, -1.0, 0.5, 2.0, 0.0]), "sammon")
        emit_scatter_svg(emb, lab, tmp_path / "b.svg")
        xs = []
        for g in markers(tmp_path / "b.svg"):
            lines = g.findall(f"{SVG}line")
            xs.append(np.mean([float(v) for ln in lines for v in (ln.get("x1"), ln.get("x2"))]))
        gaps = np.diff(xs)
        assert len(xs) == 5
        np.testing.assert_allclose(gaps, gaps[0], atol=0.02)  # indices 1..5 equally spaced
        assert gaps[0] > 0

    def test_rejects_3d(self, tmp_path):
        with pytest.raises(ValueError):
            emit_scatter_svg(Embedding(np.zeros((2, 3)), "pca"), EndpointLabeling(0, [1, 0]),
                             tmp_path / "c.svg")


def test_build_report_empty_metadata():
    rep = analysis.compare_methods([("pca", 1, np.array([0.0, 1.0, 2.0]))], [True, False, True])
    doc = build_report(rep, {})
    assert doc["warnings"] == [] and len(doc["metrics"]) == 1
    json.dumps(doc, allow_nan=False)


class TestMain:
    def test_parser_defaults(self):
        args = build_parser().parse_args(["--input", "a.csv", "--endpoint", "y", "--out", "o"])
        cfg = config_from_args(args)
        assert cfg.methods == ("pca", "nlpca", "sammon") and cfg.dims == (1, 2)
        assert cfg.threshold == "mean" and cfg.normalize

    def test_overrides(self):
        args = build_parser().parse_args([
            "--input", "a.csv", "--endpoint", "y", "--out", "o", "--threshold", "6",
            "--methods", "sammon", "--dims", "2", "--no-normalize", "--seed", "4",
            "--sammon-iters", "50", "--sammon-step", "0.2", "--nlpca-hidden", "5",
            "--nlpca-lr", "0.05", "--nlpca-epochs", "10",
        ])
        cfg = config_from_args(args)
        assert cfg.threshold == 6.0 and not cfg.normalize and cfg.seed == 4
        assert cfg.sammon_config.max_iterations == 50 and cfg.sammon_config.step_factor == 0.2
        assert (cfg.nlpca_config.hidden_width, cfg.nlpca_config.epochs) == (5, 10)

    def test_bad_threshold_exits(self):
        with pytest.raises(SystemExit):
            main(["--input", "a.csv", "--endpoint", "y", "--out", "o", "--threshold", "high"])

    def test_end_to_end(self, tmp_path, carcinogenicity_csv):
        status = main(["--input", carcinogenicity_csv, "--endpoint", "ActivityScore",
                       "--methods", "pca", "--dims", "2", "--out", str(tmp_path)])
        assert status == 0
        assert (tmp_path / "pca_2d.svg").is_file()
