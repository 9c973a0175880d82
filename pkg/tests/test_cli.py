import json
import os

import pytest

from seqdfa.cli import main


@pytest.fixture(scope="module")
def office_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "office.jsonl"
    assert main(["gen-office", "--out", str(path)]) == 0
    return str(path)


@pytest.fixture(scope="module")
def trained_dir(tmp_path_factory, office_file):
    # the fixture is tiny, so train without a held-out split (the same
    # protocol a real run would use for very limited data)
    out_dir = tmp_path_factory.mktemp("cli") / "run"
    code = main([
        "train", "--data", office_file, "--out-dir", str(out_dir),
        "--qmax", "4", "--lambda-edge", "0", "--lambda-edge", "0.0001",
        "--seed", "7", "--time-limit", "60", "--val-fraction", "0",
    ])
    assert code == 0
    return str(out_dir)


def read_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def test_gen_office_output(office_file):
    with open(office_file) as fh:
        records = [json.loads(line) for line in fh]
    assert len(records) == 19
    assert {"trace": ["B", "H2", "H1", "coffee"], "label": "coffee"} in records


def test_train_writes_model_and_manifest(trained_dir):
    model = read_json(os.path.join(trained_dir, "model.json"))
    manifest = read_json(os.path.join(trained_dir, "manifest.json"))
    assert model["model_type"] == "ensemble"
    assert set(model["classes"]) == {"A", "B", "E", "coffee", "female", "male"}
    assert manifest["seed"] == 7
    assert all(info["status"] == "optimal" for info in manifest["per_class"].values())


def test_train_deterministic_model_bytes(tmp_path, office_file):
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    args = ["train", "--data", office_file, "--qmax", "4",
            "--lambda-edge", "0", "--lambda-edge", "0.0001",
            "--seed", "7", "--time-limit", "60"]
    assert main(args + ["--out-dir", str(out1)]) == 0
    assert main(args + ["--out-dir", str(out2)]) == 0
    bytes1 = (out1 / "model.json").read_bytes()
    bytes2 = (out2 / "model.json").read_bytes()
    assert bytes1 == bytes2


def test_predict_single_trace(trained_dir, capsys):
    model_path = os.path.join(trained_dir, "model.json")
    code = main(["predict", "--model", model_path, "--trace", "B H1 coffee"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    result = payload["results"][0]
    assert result["prediction"] == "coffee"
    assert len(result["prefix_predictions"]) == 3
    assert len(result["prefixes"]) == 3
    total = sum(result["prefixes"][0]["posterior"].values())
    assert total == pytest.approx(1.0, abs=1e-9)


def test_predict_requires_one_input(trained_dir, capsys):
    model_path = os.path.join(trained_dir, "model.json")
    assert main(["predict", "--model", model_path]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "usage"


def test_predict_unknown_symbol_is_data_error(trained_dir, capsys):
    model_path = os.path.join(trained_dir, "model.json")
    code = main(["predict", "--model", model_path, "--trace", "B H1 tea"])
    assert code == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "data"
    assert "tea" in err["message"]


def test_evaluate_report(trained_dir, office_file, capsys):
    model_path = os.path.join(trained_dir, "model.json")
    code = main(["evaluate", "--model", model_path, "--data", office_file])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert set(report) >= {"cca", "pca", "early_utility", "per_class"}
    # classes A and B have two traces each; their all-reject decisions
    # leave the posterior tied, so one trace of the 19 lands on the tie
    assert report["pca"]["100"] == pytest.approx(100.0 * 18 / 19)
    assert report["per_class"]["coffee"]["full_trace_accuracy"] == pytest.approx(100.0)


def test_evaluate_per_trace_csv(trained_dir, office_file, tmp_path, capsys):
    model_path = os.path.join(trained_dir, "model.json")
    csv_path = tmp_path / "per_trace.csv"
    code = main(["evaluate", "--model", model_path, "--data", office_file,
                 "--per-trace-csv", str(csv_path)])
    assert code == 0
    capsys.readouterr()
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "trace_id,t,predicted,confidence,label"
    assert len(lines) == 1 + sum(len(json.loads(l)["trace"])
                                 for l in open(office_file))


def test_explain_sentence(trained_dir, capsys):
    model_path = os.path.join(trained_dir, "model.json")
    code = main(["explain", "--model", model_path, "--class", "coffee",
                 "--trace", "A H2 H1 male"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["distance"] == 1
    assert payload["ops"] == [
        {"kind": "replace", "position": 3, "old": "male", "new": "coffee"}]
    assert payload["sentence"] == (
        "The binary classifier would have accepted the trace "
        "had coffee been observed instead of male")
    assert payload["target"] == ["A", "H2", "H1", "coffee"]


def test_explain_vocabulary_flagging(trained_dir, capsys):
    model_path = os.path.join(trained_dir, "model.json")
    code = main(["explain", "--model", model_path, "--class", "coffee",
                 "--trace", "A H2 H1 male", "--vocabulary", "H1,H2"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["out_of_vocabulary_ops"] == [0]


def test_verify_holds_and_violations(trained_dir, capsys):
    model_path = os.path.join(trained_dir, "model.json")
    code = main(["verify", "--model", model_path, "--class", "coffee",
                 "--template", "eventually", "--symbols", "coffee"])
    assert code == 0
    assert json.loads(capsys.readouterr().out) == {"holds": True}

    code = main(["verify", "--model", model_path, "--class", "coffee",
                 "--template", "eventually", "--symbols", "male"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["holds"] is False
    assert payload["witness"]


def test_modify_and_consistency(trained_dir, office_file, tmp_path, capsys):
    model_path = os.path.join(trained_dir, "model.json")
    out = tmp_path / "modified.json"
    code = main(["modify", "--model", model_path, "--class", "coffee",
                 "--template", "never", "--symbols", "coffee",
                 "--data", office_file, "--out", str(out)])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["consistency"]["total_positive"] == 5
    assert payload["consistency"]["rejected_count"] == 5
    assert out.exists()


def test_export_dot_regex_json_lp(trained_dir, office_file, capsys):
    model_path = os.path.join(trained_dir, "model.json")

    assert main(["export", "--format", "dot", "--model", model_path,
                 "--class", "coffee"]) == 0
    assert capsys.readouterr().out.startswith("digraph")

    assert main(["export", "--format", "regex", "--model", model_path,
                 "--class", "coffee"]) == 0
    assert "coffee" in capsys.readouterr().out

    assert main(["export", "--format", "json", "--model", model_path,
                 "--class", "coffee"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["n_states"] == 4

    assert main(["export", "--format", "lp", "--data", office_file,
                 "--class", "coffee", "--qmax", "4"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("Minimize")
    assert text.rstrip().endswith("End")


def test_export_lp_requires_data(capsys):
    assert main(["export", "--format", "lp"]) == 1
    assert json.loads(capsys.readouterr().err)["error"] == "usage"


def test_missing_file_is_usage_error(capsys):
    assert main(["train", "--data", "/nonexistent.jsonl", "--out-dir", "/tmp/x"]) == 1
    capsys.readouterr()


def test_config_file_defaults(tmp_path, office_file):
    config = tmp_path / "train.toml"
    config.write_text('qmax = 4\n"lambda-edge" = [0.0]\ntime-limit = 60.0\nseed = 3\n')
    out_dir = tmp_path / "run"
    code = main(["train", "--data", office_file, "--out-dir", str(out_dir),
                 "--config", str(config)])
    assert code == 0
    manifest = read_json(out_dir / "manifest.json")
    assert manifest["flags"]["qmax"] == 4
    assert manifest["flags"]["lambda_edge_grid"] == [0.0]
    assert manifest["seed"] == 3


def test_flags_override_config(tmp_path, office_file):
    config = tmp_path / "train.toml"
    config.write_text("qmax = 3\nseed = 3\n")
    out_dir = tmp_path / "run2"
    code = main(["train", "--data", office_file, "--out-dir", str(out_dir),
                 "--config", str(config), "--qmax", "4",
                 "--lambda-edge", "0", "--time-limit", "60"])
    assert code == 0
    manifest = read_json(out_dir / "manifest.json")
    assert manifest["flags"]["qmax"] == 4
    assert manifest["seed"] == 3


def test_parallel_training_matches_sequential(tmp_path, office_file):
    args = ["train", "--data", office_file, "--qmax", "4", "--lambda-edge", "0",
            "--seed", "7", "--time-limit", "60", "--val-fraction", "0"]
    seq_dir, par_dir = tmp_path / "seq", tmp_path / "par"
    assert main(args + ["--out-dir", str(seq_dir), "--threads", "1"]) == 0
    assert main(args + ["--out-dir", str(par_dir), "--threads", "3"]) == 0
    assert (seq_dir / "model.json").read_bytes() == (par_dir / "model.json").read_bytes()


def test_train_baseline_models(tmp_path, office_file, capsys):
    for model_type in ("dfa-ft", "ngram1", "ngram2"):
        out_dir = tmp_path / model_type
        assert main(["train", "--data", office_file, "--out-dir", str(out_dir),
                     "--model-type", model_type]) == 0
        capsys.readouterr()
        model_path = str(out_dir / "model.json")
        assert read_json(model_path)["model_type"] == model_type

        assert main(["predict", "--model", model_path,
                     "--trace", "B H1 coffee"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["results"][0]["prediction"] == "coffee"

        assert main(["evaluate", "--model", model_path, "--data", office_file]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["pca"]["100"] >= 50.0


def test_multilabel_evaluation(tmp_path, trained_dir, capsys):
    data = tmp_path / "multi.jsonl"
    with open(data, "w") as fh:
        fh.write(json.dumps({"trace": ["B", "H1", "coffee"], "labels": ["coffee"]}) + "\n")
        fh.write(json.dumps({"trace": ["B", "H1", "male"], "labels": ["male"]}) + "\n")
    model_path = os.path.join(trained_dir, "model.json")
    code = main(["evaluate", "--model", model_path, "--data", str(data), "--multi-label"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert "mean_accuracy" in report
    assert report["per_label_accuracy"]["coffee"] == 1.0


def test_version_flag(capsys):
    assert main(["--version"]) == 0
    capsys.readouterr()
