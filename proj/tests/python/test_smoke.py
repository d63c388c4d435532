# Copyright 2026 The Seedstab Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import os
import pathlib

import pytest

import seedstab

TESTS = pathlib.Path(__file__).resolve().parent.parent
DATA = pathlib.Path(os.environ.get("SEEDSTAB_DATA_DIR",
                                   TESTS.parent / "data" / "glue_superglue"))


def test_metric_kernels():
    assert seedstab.accuracy([1, 0, 1], [1, 1, 1]) == pytest.approx(2 / 3)
    assert seedstab.precision_recall_f1([1, 1, 0], [1, 0, 1], positive="1") == (0.5, 0.5, 0.5)
    assert seedstab.mcc([1, 1, 0, 0], [1, 0, 1, 0]) == 0.0
    assert seedstab.mae([2, 4], [3, 3]) == 1.0
    assert seedstab.pearson([1, 2, 3], [1, 3, 2]) == pytest.approx(0.5)
    assert seedstab.spearman([1, 2, 3], [2, 1, 3]) == pytest.approx(0.5)
    assert seedstab.token_f1("a b", "b c") == 0.5
    assert seedstab.normalize_text("  The\tCAT ") == ["the", "cat"]
    assert seedstab.var([0.5, 0.7], percent=True) == pytest.approx(10.0)


def test_errors_carry_code_and_subject():
    with pytest.raises(seedstab.SeedstabError) as info:
        seedstab.pearson([1, 1, 1], [1, 1, 1])
    assert info.value.code == "ZeroVariance"
    with pytest.raises(ValueError):
        seedstab.aggregate("t", {"a": "x"}, {1: {"a": "x"}, 2: {"b": "x"}})


def test_two_run_construction():
    gold = {f"d{k:02d}": 1 for k in range(1, 11)}
    a = {i: (1 if int(i[1:]) <= 6 else f"a{i}") for i in gold}
    b = {i: (1 if int(i[1:]) <= 2 or int(i[1:]) >= 7 else f"b{i}") for i in gold}
    report = seedstab.aggregate("two_runs", gold, {42: a, 52: b})
    assert [z["zeta"] for z in report["zeta_per_seed"]] == [0.6, 0.6]
    assert report["con_mean"] == pytest.approx(0.2)
    assert report["ccon_mean"] == pytest.approx(0.2)
    assert seedstab.validate_report(report) == []
    assert "| two_runs | 60.00 (±0.00) | 20.00 (±0.00) | 20.00 (±0.00) |" in seedstab.render_report(report, "md")


def test_manifest_and_cli(tmp_path):
    manifest = TESTS / "data" / "two_runs" / "manifest.json"
    report = seedstab.evaluate_manifest(manifest)
    assert report["task"] == "two_runs"
    out = tmp_path / "r.json"
    code, stdout, _ = seedstab.run_cli(["eval", "--manifest", str(manifest), "--out", str(out)])
    assert code == 0
    assert stdout == "two_runs 60.00 0.00 20.00 20.00\n"
    assert json.loads(out.read_text()) == report


def test_bundled_tables():
    cells = json.loads((DATA / "accuracy_cells.json").read_text())
    assert all(seedstab.validate_report(r) == [] for r in cells)
    roberta = json.loads((DATA / "roberta_summary.json").read_text())
    sizes = json.loads((DATA / "train_sizes.json").read_text())
    s = seedstab.size_correlations(roberta, sizes, "raw")
    assert s["r_var"] == pytest.approx(-0.3557921108607204, abs=1e-9)
    assert s["tasks_included"][0] == "CB"
    assert seedstab.normalize_heatmap([[60, 70, 80]]) == [[0.0, 0.5, 1.0]]
