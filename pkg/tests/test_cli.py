import json
import os

import pytest

from uavrelay.cli import main
from uavrelay.scenario import build_config, config_to_text, load_instance


def test_gen_instance_round_trip(tmp_path, capsys):
    out = tmp_path / "inst.json"
    assert main(["gen-instance", "--k", "12", "--seed", "3",
                 "--out", str(out)]) == 0
    cfg = build_config({"K": 12})
    inst = load_instance(str(out), cfg)
    assert inst.k == 12
    assert "wrote" in capsys.readouterr().out


def test_gen_instance_deterministic(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    main(["gen-instance", "--k", "9", "--seed", "5", "--out", str(a)])
    main(["gen-instance", "--k", "9", "--seed", "5", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_solve_byte_identical_repeats(tmp_path):
    inst_path = tmp_path / "inst.json"
    main(["gen-instance", "--k", "10", "--seed", "2", "--out", str(inst_path)])
    outs = []
    for name in ("r1.json", "r2.json"):
        out = tmp_path / name
        code = main(["solve", "--algo", "sadevps", "--instance", str(inst_path),
                     "--seed", "7", "--max-fe", "800", "--out", str(out)])
        assert code == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    doc = json.loads(outs[0])
    assert doc["algorithm_tag"] == "sadevps"
    assert doc["seed"] == 7
    assert doc["error"] is None


def test_solve_fixed_m_needs_m(tmp_path, capsys):
    inst_path = tmp_path / "inst.json"
    main(["gen-instance", "--k", "10", "--seed", "2", "--out", str(inst_path)])
    code = main(["solve", "--algo", "fixed-m-de", "--instance", str(inst_path),
                 "--seed", "1", "--max-fe", "400", "--out", str(tmp_path / "x.json")])
    assert code == 1
    assert "M setting" in capsys.readouterr().err


def test_solve_fixed_m_symbolic(tmp_path):
    inst_path = tmp_path / "inst.json"
    main(["gen-instance", "--k", "10", "--seed", "2", "--out", str(inst_path)])
    out = tmp_path / "fixed.json"
    code = main(["solve", "--algo", "fixed-m-de", "--m", "mid",
                 "--instance", str(inst_path), "--seed", "1",
                 "--max-fe", "400", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    cfg = build_config({"K": 10})
    assert len(doc["final_deployment"]) == (cfg.m_min + cfg.m_max) // 2


def test_solve_with_custom_config(tmp_path):
    cfg = build_config({"K": 10, "N": 5, "phi": 500.0})
    cfg_path = tmp_path / "cfg.txt"
    cfg_path.write_text(config_to_text(cfg))
    inst_path = tmp_path / "inst.json"
    assert main(["gen-instance", "--k", "10", "--seed", "4",
                 "--config", str(cfg_path), "--out", str(inst_path)]) == 0
    out = tmp_path / "run.json"
    assert main(["solve", "--algo", "devips", "--instance", str(inst_path),
                 "--seed", "3", "--max-fe", "400", "--config", str(cfg_path),
                 "--out", str(out)]) == 0


def test_solve_detects_config_mismatch(tmp_path, capsys):
    cfg = build_config({"K": 10, "N": 5})
    cfg_path = tmp_path / "cfg.txt"
    cfg_path.write_text(config_to_text(cfg))
    inst_path = tmp_path / "inst.json"
    main(["gen-instance", "--k", "10", "--seed", "4",
          "--config", str(cfg_path), "--out", str(inst_path)])
    # solving without the config falls back to defaults -> hash mismatch
    code = main(["solve", "--algo", "sadevps", "--instance", str(inst_path),
                 "--seed", "3", "--max-fe", "400",
                 "--out", str(tmp_path / "x.json")])
    assert code == 1
    assert "config_hash" in capsys.readouterr().err


def test_experiment_and_summarize(tmp_path, capsys):
    plan = tmp_path / "plan.txt"
    plan.write_text("algorithms=sadevps,fixed_m_de:max\nk_values=8\nruns=2\n"
                    "base_seed=3\nmax_fe=1000\nconfig.N=4\n")
    out_dir = tmp_path / "exp"
    assert main(["experiment", "--plan", str(plan),
                 "--out-dir", str(out_dir), "--jobs", "1"]) == 0
    shown = capsys.readouterr().out
    assert "sadevps_k8" in shown
    assert "fixed_m_de_m8_k8" in shown
    assert main(["summarize", "--in-dir", str(out_dir)]) == 0
    again = capsys.readouterr().out
    assert "sadevps_k8" in again
    runs = os.listdir(out_dir / "runs")
    assert sorted(runs) == ["fixed_m_de_m8_k8", "sadevps_k8"]


def test_missing_instance_file_is_clean_error(tmp_path, capsys):
    code = main(["solve", "--algo", "sadevps", "--instance",
                 str(tmp_path / "nope.json"), "--seed", "1", "--max-fe", "100",
                 "--out", str(tmp_path / "x.json")])
    assert code == 1
    assert "error" in capsys.readouterr().err
