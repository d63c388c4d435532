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
"""Seed-stability metrics: per-seed variance and pairwise prediction consistency.

Reports are plain dicts with the same fields as the JSON the CLI writes.
"""

import json

from seedstab._core import (
    SeedstabError,
    accuracy,
    evaluate_metric,
    exact_match,
    mae,
    mcc,
    mse,
    normalize_heatmap,
    normalize_text,
    pearson,
    precision_recall_f1,
    run_cli,
    spearman,
    token_f1,
    var,
)
from seedstab import _core

__all__ = [
    "SeedstabError",
    "accuracy",
    "aggregate",
    "evaluate_manifest",
    "evaluate_metric",
    "exact_match",
    "mae",
    "mcc",
    "mse",
    "normalize_heatmap",
    "normalize_text",
    "pearson",
    "precision_recall_f1",
    "render_report",
    "run_cli",
    "size_correlations",
    "spearman",
    "token_f1",
    "validate_report",
    "var",
]

__version__ = "0.1.0"


def aggregate(task, gold, runs, metric="accuracy", scorer="indicator",
              task_kind="classification", train_size=None):
    """Stability report for `runs` ({seed: {id: output}}) against `gold` ({id: output})."""
    return json.loads(_core.aggregate(task, gold, runs, metric, scorer,
                                      task_kind, train_size))


def evaluate_manifest(path):
    return json.loads(_core.evaluate_manifest(str(path)))


def render_report(report, fmt="md"):
    return _core.render_report(json.dumps(report), fmt)


def validate_report(report):
    """List of violated relations; empty when the report is consistent."""
    return _core.validate_report(json.dumps(report))


def size_correlations(reports, sizes, transform="log10"):
    return _core.size_correlations([json.dumps(r) for r in reports], dict(sizes),
                                   transform)
