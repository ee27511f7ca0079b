import csv
import io
import json

import pytest

from chainbench.elim import CSV_COLUMNS
from chainbench.harness import (APRIME_COLUMNS, ConfigError, build_config, experiment_aprime,
                                experiment_b, instance_seeds, parse_config_text)
from chainbench.oracles import qbf_brute_force


def test_config_parsing_and_overrides():
    values = parse_config_text("# c\nexperiment = b-growth\nseed = 3\nvars = 4,5\nclause-ratio = 1.5\n")
    cfg = build_config(values, {"count": 2, "seed": None})
    assert (cfg.seed, cfg.vars, cfg.clause_ratio, cfg.count) == (3, (4, 5), 1.5, 2)
    with pytest.raises(ConfigError):
        build_config({"experiment": "b-growth"})            # generated corpus needs a seed
    with pytest.raises(ConfigError):
        build_config({"seed": "1", "format": "xml"})
    with pytest.raises(ConfigError):
        parse_config_text("no equals sign\n")


def test_instance_seeds_are_a_prefix_stable_stream():
    assert instance_seeds(5, 3) == instance_seeds(5, 10)[:3]


def test_experiment_b_outputs(tmp_path):
    cfg = build_config({"seed": "1", "vars": "3,4", "count": "3", "out": str(tmp_path), "verify": "true"})
    rep = experiment_b(cfg)
    assert rep["aggregate"]["verify_mismatches"] == []
    assert {i["instance_id"] for i in rep["instances"]} == {f"b-{n:03d}-{i:04d}" for n in (3, 4) for i in range(3)}
    rows = list(csv.reader(io.StringIO((tmp_path / "b_report.csv").read_text())))
    assert tuple(rows[0]) == CSV_COLUMNS and len(rows) == 1 + 3 * 3 + 3 * 4
    assert json.loads((tmp_path / "b_report.json").read_text())["aggregate"]["instances"] == 6


def test_experiment_b_corpus_files(tmp_path):
    (tmp_path / "a.qdimacs").write_text("p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n-1 -2 0\n")
    cfg = build_config({"corpus": str(tmp_path / "*.qdimacs"), "out": str(tmp_path / "out"),
                        "format": "json"})
    rep = experiment_b(cfg)
    assert rep["instances"][0]["instance_id"] == "a" and rep["instances"][0]["verdict"] == "T"
    assert not (tmp_path / "out" / "b_report.csv").exists()
    with pytest.raises(ConfigError):
        experiment_b(build_config({"corpus": str(tmp_path / "none*.q")}))


def test_experiment_aprime_records(tmp_path):
    cfg = build_config({"experiment": "aprime-minrep", "machines": "fixture:m1", "n_min": "1",
                        "n_max": "1", "out": str(tmp_path), "verify": "true", "find_device": "true"})
    rep = experiment_aprime(cfg)
    recs = {r["input"]: r for r in rep["records"]}
    assert recs["0"]["verdict"] == "accept" and recs["1"]["verdict"] == "reject"
    assert recs["0"]["exact_terms"] == 2 and recs["0"]["search"] == "found"
    assert rep["aggregate"]["verify_failures"] == []
    header = (tmp_path / "aprime_report.csv").read_text().splitlines()[0]
    assert header == ",".join(APRIME_COLUMNS)


@pytest.mark.parametrize("variant", ["counter", "loopback"])
def test_experiment_aprime_variants(tmp_path, variant):
    cfg = build_config({"experiment": "aprime-minrep", "machines": "fixture:m1", "inputs": "0",
                        "variant": variant, "out": str(tmp_path), "max_configs": "512"})
    rec = experiment_aprime(cfg)["records"][0]
    assert rec["variant"] == variant and rec["verdict"] == "accept"


def test_jobs_do_not_change_results(tmp_path):
    base = {"seed": "9", "vars": "4,5", "count": "4", "level": "L2"}
    one = experiment_b(build_config({**base, "out": str(tmp_path / "a")}))
    two = experiment_b(build_config({**base, "out": str(tmp_path / "b"), "jobs": "2"}))
    assert one == two
    assert (tmp_path / "a" / "b_report.json").read_bytes() == (tmp_path / "b" / "b_report.json").read_bytes()
