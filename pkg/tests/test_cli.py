import json

import numpy as np
import pandas as pd
import pytest

from tulca.cli import main


def test_synth_then_fit_pipeline(tmp_path, capsys):
    assert main(["synth", "--seed", "7", "--out", str(tmp_path)]) == 0
    tdt = tmp_path / "synthetic.tdt"
    assert tdt.exists()

    out = tmp_path / "fitout"
    assert main(["fit", "--input", str(tdt), "--preset", "tda",
                 "--core", "2,3", "--out", str(out)]) == 0
    model = json.loads((out / "model.json").read_text())
    assert model["core"]["shape"] == [600, 2, 3]
    assert len(model["projections"]) == 2
    assert np.asarray(model["cp"]["scatter"]).shape == (600, 2)


def test_fit_requires_an_input(capsys):
    assert main(["fit", "--preset", "tda"]) == 2
    assert "error:" in capsys.readouterr().err


def test_fit_missing_label_column_exits_2(tmp_path, capsys):
    df = pd.DataFrame({
        "time": [0, 0, 1, 1], "instance": [0, 1, 0, 1],
        "variable": ["a", "a", "a", "a"], "value": [1.0, 2.0, 3.0, 4.0],
    })
    path = tmp_path / "nolabel.csv"
    df.to_csv(path, index=False)
    assert main(["fit", "--csv", str(path), "--labels", "activity",
                 "--comparing-mode", "2", "--out", str(tmp_path)]) == 2
    assert "label" in capsys.readouterr().err


def test_missing_tensor_file_exits_2(tmp_path, capsys):
    assert main(["fit", "--input", str(tmp_path / "nope.tdt")]) == 2


def test_custom_preset_requires_weights(tmp_path, capsys):
    main(["synth", "--seed", "0", "--out", str(tmp_path)])
    code = main(["fit", "--input", str(tmp_path / "synthetic.tdt"),
                 "--preset", "custom", "--out", str(tmp_path)])
    assert code == 2


def test_fit_with_explicit_weights_json(tmp_path):
    main(["synth", "--seed", "0", "--out", str(tmp_path)])
    weights = json.dumps({"w_tg": [1.0, 0.0], "w_bg": [0.0, 1.0],
                          "w_bw": [1.0, 1.0], "core_shape": [2, 3]})
    out = tmp_path / "custom"
    assert main(["fit", "--input", str(tmp_path / "synthetic.tdt"),
                 "--weights", weights, "--out", str(out)]) == 0
    model = json.loads((out / "model.json").read_text())
    assert model["weights"]["w_tg"] == [1.0, 0.0]


def test_export_writes_figures_and_tables(tmp_path):
    main(["synth", "--seed", "0", "--out", str(tmp_path)])
    out = tmp_path / "exp"
    assert main(["export", "--input", str(tmp_path / "synthetic.tdt"),
                 "--preset", "tda", "--core", "2,3",
                 "--out", str(out)]) == 0
    for name in ("scatter.png", "mode_bars.png", "projections.png",
                 "scatter.csv", "projection_mode2.csv",
                 "projection_mode3.csv", "objectives.csv", "model.json"):
        assert (out / name).exists(), name
    table = np.loadtxt(out / "scatter.csv", delimiter=",", skiprows=1)
    assert table.shape == (600, 3)


def test_update_demo_reports_matching_refits(tmp_path, capsys):
    main(["synth", "--seed", "1", "--out", str(tmp_path)])
    assert main(["update-demo", "--input", str(tmp_path / "synthetic.tdt"),
                 "--preset", "tda", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "cold fit" in out
    steps = [line for line in out.splitlines() if line.startswith("update ")]
    assert len(steps) == 3
    assert all("0.00e+00" in line or "e-" in line for line in steps)


def test_bench_prints_timings(capsys):
    assert main(["bench", "--shape", "60,10,4", "--groups", "2",
                 "--runs", "2"]) == 0
    out = capsys.readouterr().out
    assert "cold fit" in out
    assert "fit/update ratio" in out


def test_bad_shape_flag_exits_2(capsys):
    assert main(["bench", "--shape", "60,banana", "--groups", "2"]) == 2
