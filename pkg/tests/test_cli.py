import csv
import io
import json

import pytest

from conftest import GOLDEN_CSV, MINI_CORPUS
from medqual.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, main
from medqual.features import CSV_HEADER

MINI = str(MINI_CORPUS)
FAST = ["--trees", "5", "--seed", "7"]


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture(scope="module")
def features(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "features.csv"
    assert run("extract", "--corpus", MINI, "--out", path) == EXIT_OK
    return path


def test_extract_matches_golden(features):
    assert features.read_bytes() == GOLDEN_CSV.read_bytes()


def test_extract_to_stdout(capsys):
    assert run("extract", "--corpus", MINI) == EXIT_OK
    assert capsys.readouterr().out.encode("utf-8") == GOLDEN_CSV.read_bytes()


def test_empty_corpus_gives_header_only(tmp_path):
    corpus = tmp_path / "empty.jsonl"
    corpus.write_text("", encoding="utf-8")
    out = tmp_path / "f.csv"
    assert run("extract", "--corpus", corpus, "--out", out) == EXIT_OK
    assert out.read_text(encoding="utf-8") == ",".join(CSV_HEADER) + "\n"


def test_missing_dictionary_writes_nothing(tmp_path):
    out = tmp_path / "f.csv"
    assert run("extract", "--corpus", MINI, "--dictionary", tmp_path / "nope.tsv", "--out", out) == EXIT_DATA
    assert not out.exists()


def test_missing_corpus(tmp_path, capsys):
    assert run("extract", "--corpus", tmp_path / "nope.jsonl") == EXIT_DATA
    assert "nope.jsonl" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [[], ["bogus"], ["extract", "--nope"], ["evaluate", "--trees", "0"], ["train", "--seed", "-3"],
     ["evaluate", "--variant", "Everything"], ["sample", "--smote", "GA"], ["sample", "--smote", "XX=5"]],
)
def test_usage_errors(argv, features, capsys):
    if argv[:1] == ["sample"]:
        argv = argv + ["--features", str(features)]
    assert main(argv) == EXIT_USAGE


def test_both_inputs_is_a_usage_error(features):
    assert run("rank", "--corpus", MINI, "--features", features) == EXIT_USAGE


def test_rank(features, capsys):
    assert run("rank", "--features", features) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "feature\tinfo_gain"
    gains = [float(line.split("\t")[1]) for line in lines[1:]]
    assert len(gains) == 8 and gains == sorted(gains, reverse=True)


def test_sample_marks_synthetic_rows(features, tmp_path):
    out = tmp_path / "s.csv"
    assert run("sample", "--features", features, "--undersample", "Stub=4", "--smote", "FA=100", "--smote-k", "3",
               "--seed", "1", "--out", out) == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out.read_text(encoding="utf-8"))))
    labels = [r["label"] for r in rows]
    assert labels.count("Stub") == 4
    assert labels.count("FA") == 20
    assert sum(r["synthetic"] == "1" for r in rows) == 10


def test_oversized_undersample_is_a_data_error(features):
    assert run("sample", "--features", features, "--benchmark-sampling") == EXIT_DATA


def test_fold_precondition_names_class(features, capsys):
    assert run("evaluate", "--features", features, "--folds", "11", *FAST) == EXIT_DATA
    assert "Stub" in capsys.readouterr().err


def test_evaluate_report(features, tmp_path):
    out = tmp_path / "r.json"
    assert run("evaluate", "--features", features, "--folds", "5", *FAST, "--report-out", out) == EXIT_OK
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["variants"] == ["Baseline", "MedicalDomain", "FullMedicalDomain"]
    for v in doc["variants"]:
        assert sum(map(sum, doc["reports"][v]["confusion"])) == 60


def test_evaluate_is_deterministic(features, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run("evaluate", "--features", features, "--variant", "FullMedicalDomain", *FAST, "--report-out", path) == 0
    assert a.read_bytes() == b.read_bytes()


def test_train_then_classify(features, tmp_path):
    model = tmp_path / "m.json"
    preds = tmp_path / "p.csv"
    assert run("train", "--features", features, *FAST, "--model-out", model) == EXIT_OK
    meta = json.loads(model.read_text(encoding="utf-8"))["metadata"]
    assert meta["variant"] == "FullMedicalDomain"
    assert run("classify", "--model", model, "--corpus", MINI, "--out", preds) == EXIT_OK
    rows = list(csv.reader(io.StringIO(preds.read_text(encoding="utf-8"))))
    assert rows[0] == ["title", "predicted_class", "p_Stub", "p_Start", "p_C", "p_B", "p_GA", "p_FA"]
    assert len(rows) == 61
    for row in rows[1:]:
        probs = [float(x) for x in row[2:]]
        assert abs(sum(probs) - 1.0) <= 1e-9
        assert row[1] == ["Stub", "Start", "C", "B", "GA", "FA"][probs.index(max(probs))]


def test_classify_unlabelled_corpus(features, tmp_path):
    model = tmp_path / "m.json"
    assert run("train", "--features", features, *FAST, "--variant", "Baseline", "--model-out", model) == EXIT_OK
    corpus = tmp_path / "c.jsonl"
    corpus.write_text(json.dumps({"title": "New page", "wikitext": "[[Fever]] and cough."}) + "\n", encoding="utf-8")
    out = tmp_path / "p.csv"
    assert run("classify", "--model", model, "--corpus", corpus, "--out", out) == EXIT_OK
    assert out.read_text(encoding="utf-8").splitlines()[1].startswith("New page,")


def test_corrupt_model_leaves_no_output(tmp_path):
    model = tmp_path / "m.json"
    model.write_text('{"format_version": 1, "trees": [', encoding="utf-8")
    out = tmp_path / "p.csv"
    assert run("classify", "--model", model, "--corpus", MINI, "--out", out) == EXIT_DATA
    assert not out.exists()
    assert list(tmp_path.iterdir()) == [model]


def test_config_file_and_flag_precedence(features, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"trees": 3, "seed": 7, "folds": 10}), encoding="utf-8")
    from_file = tmp_path / "a.json"
    from_flags = tmp_path / "b.json"
    overridden = tmp_path / "c.json"
    common = ["evaluate", "--features", features, "--variant", "Baseline"]
    assert run(*common, "--config", cfg, "--folds", "5", "--report-out", from_file) == EXIT_OK
    assert run(*common, "--trees", "3", "--seed", "7", "--folds", "5", "--report-out", from_flags) == EXIT_OK
    assert from_file.read_bytes() == from_flags.read_bytes()
    explicit = tmp_path / "d.json"
    assert run(*common, "--config", cfg, "--folds", "5", "--seed", "8", "--report-out", overridden) == EXIT_OK
    assert run(*common, "--trees", "3", "--seed", "8", "--folds", "5", "--report-out", explicit) == EXIT_OK
    assert overridden.read_bytes() == explicit.read_bytes()
    assert json.loads(from_file.read_text())["reports"]["Baseline"]["folds"] == 5


@pytest.mark.parametrize("content", ['{"nonsense": 1}', '{"trees": "many"}', "[1, 2]", "{bad json"])
def test_bad_config_file(features, tmp_path, content):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(content, encoding="utf-8")
    assert run("rank", "--features", features, "--config", cfg) in (EXIT_USAGE, EXIT_DATA)


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == EXIT_OK
    assert "extract" in capsys.readouterr().out


def test_module_entry_point_exit_codes(tmp_path):
    import subprocess
    import sys

    ok = subprocess.run([sys.executable, "-m", "medqual.cli", "extract", "--corpus", MINI], capture_output=True)
    assert ok.returncode == 0 and ok.stdout == GOLDEN_CSV.read_bytes()
    bad = subprocess.run([sys.executable, "-m", "medqual.cli", "rank", "--features", str(tmp_path / "x.csv")], capture_output=True)
    assert bad.returncode == EXIT_DATA and bad.stdout == b""
