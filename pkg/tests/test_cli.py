"""End-to-end checks of the command line through main()."""

import numpy as np
import pytest

from lcckit.cli import main, parse_gen_spec
from lcckit.data import demo_gaussian_pair


def write_labeled_csv(path, data, header=True, label_map=None):
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(",".join(f"x{i}" for i in range(data.n)) + ",label\n")
        for row, lab in zip(data.features, data.labels):
            cells = [repr(float(v)) for v in row]
            lab = int(lab) if label_map is None else label_map[int(lab)]
            fh.write(",".join(cells + [str(lab)]) + "\n")


def write_feature_csv(path, features):
    with open(path, "w", encoding="utf-8") as fh:
        for row in features:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def train_dir(tmp_path, *extra):
    out = tmp_path / "model"
    rc = main(["train", "--gen", "gaussian:m_per_class=40",
               "--method", "lcc", "--out", str(out), *extra])
    assert rc == 0
    return out


def test_train_writes_model_and_summary(tmp_path, capsys):
    out = train_dir(tmp_path)
    text = capsys.readouterr().out
    assert (out / "model.txt").exists()
    assert "objective" in text
    assert "epsilons min/mean/max" in text
    assert "center gap" in text
    assert "train accuracy" in text


def test_train_then_predict_reproduces_accuracy(tmp_path, capsys):
    data = demo_gaussian_pair(m_per_class=50, seed=3)
    csv_path = tmp_path / "train.csv"
    write_labeled_csv(csv_path, data)
    out = tmp_path / "run"
    assert main(["train", "--data", str(csv_path), "--method", "lcc",
                 "--out", str(out)]) == 0
    train_line = [ln for ln in capsys.readouterr().out.splitlines()
                  if ln.startswith("train accuracy")][0]
    assert main(["predict", "--model", str(out / "model.txt"),
                 "--data", str(csv_path), "--out", str(out)]) == 0
    predict_line = [ln for ln in capsys.readouterr().out.splitlines()
                    if ln.startswith("accuracy")][0]
    assert train_line.split()[-1] == predict_line.split()[-1]
    rows = (out / "predictions.csv").read_text().splitlines()
    assert rows[0] == "label,score"
    assert len(rows) == data.m + 1


def test_predict_deterministic_output(tmp_path, capsys):
    out = train_dir(tmp_path)
    capsys.readouterr()
    feats = demo_gaussian_pair(m_per_class=20, seed=9).features
    csv_path = tmp_path / "query.csv"
    write_feature_csv(csv_path, feats)
    outputs = []
    for _ in range(2):
        assert main(["predict", "--model", str(out / "model.txt"),
                     "--data", str(csv_path)]) == 0
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]


def test_predict_empty_input_emits_header_only(tmp_path, capsys):
    out = train_dir(tmp_path)
    capsys.readouterr()
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert main(["predict", "--model", str(out / "model.txt"),
                 "--data", str(empty)]) == 0
    assert capsys.readouterr().out == "label,score\n"
    only_header = tmp_path / "header.csv"
    only_header.write_text("a,b\n")
    assert main(["predict", "--model", str(out / "model.txt"),
                 "--data", str(only_header)]) == 0
    assert capsys.readouterr().out == "label,score\n"


def test_predict_shuffled_rows_shuffle_outputs(tmp_path):
    out = train_dir(tmp_path)
    feats = demo_gaussian_pair(m_per_class=25, seed=11).features
    perm = np.random.default_rng(4).permutation(feats.shape[0])
    write_feature_csv(tmp_path / "orig.csv", feats)
    write_feature_csv(tmp_path / "shuf.csv", feats[perm])
    for name in ("orig", "shuf"):
        assert main(["predict", "--model", str(out / "model.txt"),
                     "--data", str(tmp_path / f"{name}.csv"),
                     "--out", str(tmp_path / name)]) == 0
    orig = (tmp_path / "orig" / "predictions.csv").read_text().splitlines()
    shuf = (tmp_path / "shuf" / "predictions.csv").read_text().splitlines()
    assert [orig[1 + i] for i in perm] == shuf[1:]


def test_predict_dimension_mismatch_names_expected_n(tmp_path, capsys):
    out = train_dir(tmp_path)
    write_feature_csv(tmp_path / "wide.csv", np.zeros((3, 5)))
    rc = main(["predict", "--model", str(out / "model.txt"),
               "--data", str(tmp_path / "wide.csv")])
    assert rc == 1
    assert "expects 2" in capsys.readouterr().err


def test_predict_01_labels_scored_for_accuracy(tmp_path, capsys):
    data = demo_gaussian_pair(m_per_class=30, seed=5)
    csv_path = tmp_path / "train.csv"
    write_labeled_csv(csv_path, data, header=False,
                      label_map={-1: 0, 1: 1})
    out = tmp_path / "run"
    assert main(["train", "--data", str(csv_path), "--method", "lda",
                 "--out", str(out)]) == 0
    capsys.readouterr()
    assert main(["predict", "--model", str(out / "model.txt"),
                 "--data", str(csv_path), "--out", str(out)]) == 0
    assert "accuracy" in capsys.readouterr().out


def test_train_infeasible_sigma_exits_2_citing_bound(tmp_path, capsys):
    rc = main(["train", "--gen", "gaussian", "--method", "lcc",
               "--sigma=-1e6", "--out", str(tmp_path)])
    assert rc == 2
    err = capsys.readouterr().err
    assert "numeric failure" in err
    assert "L1 gap" in err


def test_train_usage_errors_exit_1(tmp_path, capsys):
    assert main(["train", "--gen", "gaussian", "--method", "forest",
                 "--out", str(tmp_path)]) == 1
    assert main(["train", "--gen", "gaussian", "--method", "lda",
                 "--discriminator", "dist", "--out", str(tmp_path)]) == 1
    assert main(["train", "--gen", "shrub", "--method", "lcc",
                 "--out", str(tmp_path)]) == 1
    assert main(["train", "--data", str(tmp_path / "missing.csv"),
                 "--method", "lcc", "--out", str(tmp_path)]) == 1
    capsys.readouterr()


def test_missing_required_flags_exit_1(capsys):
    assert main(["train"]) == 1
    assert main([]) == 1
    assert main(["--help"]) == 0
    capsys.readouterr()


def test_gen_spec_parsing_and_errors():
    data = parse_gen_spec("circles:m=80,noise=0.1", seed=1)
    assert data.m == 80
    from lcckit.cli import UsageError
    for bad in ("circles:m=80.5", "circles:m", "gaussian:m=3",
                "spiral:noise=abc"):
        with pytest.raises(UsageError):
            parse_gen_spec(bad, seed=1)


def test_train_klcc_rbf_circles_reports_high_accuracy(tmp_path, capsys):
    rc = main(["train", "--gen", "circles:m=300,noise=0.03",
               "--method", "klcc", "--kernel", "rbf",
               "--out", str(tmp_path)])
    assert rc == 0
    line = [ln for ln in capsys.readouterr().out.splitlines()
            if ln.startswith("train accuracy")][0]
    assert float(line.split()[-1]) >= 0.98


def test_train_discriminator_roundtrip(tmp_path, capsys):
    out = train_dir(tmp_path, "--discriminator", "1nn")
    assert "discriminator one_nn" in capsys.readouterr().out
    feats = demo_gaussian_pair(m_per_class=10, seed=2).features
    write_feature_csv(tmp_path / "q.csv", feats)
    assert main(["predict", "--model", str(out / "model.txt"),
                 "--data", str(tmp_path / "q.csv")]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == feats.shape[0] + 1


def test_benchmark_three_methods_emits_3xR_records(tmp_path, capsys):
    out = tmp_path / "bench"
    rc = main(["benchmark", "--gen", "gaussian:m_per_class=30",
               "--method", "lcc,lda,svm", "--runs", "4",
               "--out", str(out)])
    assert rc == 0
    rows = (out / "report.csv").read_text().splitlines()
    assert rows[0] == "method,run,train_auc,test_auc,train_ms,error"
    assert len(rows) == 1 + 3 * 4
    assert "report written" in capsys.readouterr().out


def test_benchmark_reproducible_ignoring_wall_time(tmp_path):
    reports = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert main(["benchmark", "--gen", "gaussian:m_per_class=30",
                     "--method", "lcc,lda", "--runs", "3",
                     "--seed", "7", "--out", str(out)]) == 0
        rows = (out / "report.csv").read_text().splitlines()
        stripped = [",".join(c for i, c in enumerate(r.split(","))
                             if i != 4) for r in rows]
        reports.append(stripped)
    assert reports[0] == reports[1]


def test_benchmark_procedure_2_grid_report(tmp_path, capsys):
    out = tmp_path / "bench2"
    rc = main(["benchmark", "--gen", "gaussian:m_per_class=30",
               "--method", "lcc,lda", "--procedure", "2",
               "--folds", "5", "--out", str(out)])
    assert rc == 0
    rows = (out / "report.csv").read_text().splitlines()
    assert rows[0] == "method,param_name,best_param,best_auc,rank"
    assert len(rows) == 3
    assert "rank" in capsys.readouterr().out


def test_benchmark_rejects_bad_method_list(tmp_path, capsys):
    base = ["benchmark", "--gen", "gaussian:m_per_class=20",
            "--out", str(tmp_path)]
    assert main(base + ["--method", "lcc,lcc"]) == 1
    assert main(base + ["--method", "lcc,forest"]) == 1
    assert main(base + ["--method", ","]) == 1
    capsys.readouterr()


def after_stage_bins(path):
    rows = [ln.split(",") for ln in path.read_text().splitlines()
            if ln.startswith("after,")]
    neg = [i for i, r in enumerate(rows) if int(r[3]) > 0]
    pos = [i for i, r in enumerate(rows) if int(r[4]) > 0]
    return neg, pos


def test_demo_histograms_separate_classes(tmp_path, capsys):
    out = tmp_path / "demo"
    assert main(["demo", "--out", str(out)]) == 0
    text = (out / "demo_histograms.csv").read_text()
    assert "beta0" in text and "max-norm" in text
    neg, pos = after_stage_bins(out / "demo_histograms.csv")
    assert not set(neg) & set(pos)
    assert max(neg) < min(pos)
    printed = capsys.readouterr().out
    assert "overlap after training: no" in printed
    roc = (out / "demo_roc.csv").read_text().splitlines()
    assert roc[0] == "fpr,tpr"
    assert roc[1] == "0.0,0.0" and roc[-1] == "1.0,1.0"


def test_demo_deterministic(tmp_path):
    texts = []
    for name in ("d1", "d2"):
        out = tmp_path / name
        assert main(["demo", "--seed", "6", "--out", str(out)]) == 0
        texts.append((out / "demo_histograms.csv").read_text()
                     + (out / "demo_roc.csv").read_text())
    assert texts[0] == texts[1]
