# Copyright 2026 The belldrift Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Temporal ensemble drift diagnostics for CHSH experiments."""

import csv
import io
import json

from belldrift._core import (
    NumericalError,
    ValidationError,
    certify,
    condition_number,
    correlator,
    hall_bound,
    hall_threshold,
    lhv_analytic_S,
    lhv_delta_ens,
    mc_null,
    min_delta_required,
    mitigate,
    p_value,
    relaxed_bound,
    schedule_aware_bound,
    singlet_probabilities,
    symmetric_flips,
    tv_distance,
    two_proportion_z,
)
from belldrift import _core

__all__ = [
    "NumericalError",
    "ValidationError",
    "analyze",
    "bin_scan",
    "certify",
    "condition_number",
    "correlator",
    "hall_bound",
    "hall_threshold",
    "lhv_analytic_S",
    "lhv_delta_ens",
    "mc_null",
    "min_delta_required",
    "mitigate",
    "p_value",
    "relaxed_bound",
    "run_experiment",
    "schedule_aware_bound",
    "singlet_probabilities",
    "symmetric_flips",
    "tv_distance",
    "two_proportion_z",
]


def run_experiment(config):
    """Runs an experiment from a config dict; returns the run record as a dict."""
    return json.loads(_core.run_experiment(json.dumps(config)))


def analyze(counts, seed, null_trials=1000, bootstrap_replicates=200, calibration=None,
            schedule=None, delta_sched=None, max_condition=100.0):
    """Analyzes a counts dict (the JSON counts schema); returns the run record as a dict."""
    text = _core.analyze(json.dumps(counts), seed, null_trials, bootstrap_replicates,
                         calibration, schedule, delta_sched, max_condition)
    return json.loads(text)


def bin_scan(config, bins=(3, 6, 9, 12), thetas=(0.0, 0.01, 0.1),
             schedules=("round-robin", "blocked")):
    """Observed vs null drift rows as a list of dicts."""
    text = _core.bin_scan(json.dumps(config), list(bins), list(thetas), list(schedules))
    return list(csv.DictReader(io.StringIO(text)))
