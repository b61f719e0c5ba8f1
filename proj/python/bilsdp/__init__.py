# Copyright 2026 The bilsdp Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Optimal transfer in dissipative bilinear systems through semidefinite programming."""

import json

from ._core import (
    InvalidInput,
    IoError,
    NumericFailure,
    Problem,
    analytic_2x2,
    analytic_3chain,
    reach_set,
    reach_slice,
    reproduce,
    simulate,
    transfer_bound,
)
from ._core import _analyze, _probe, _validate

__all__ = [
    "InvalidInput",
    "IoError",
    "NumericFailure",
    "Problem",
    "analyze",
    "analytic_2x2",
    "analytic_3chain",
    "probe_rank",
    "reach_set",
    "reach_slice",
    "reproduce",
    "simulate",
    "transfer_bound",
    "validate",
]


def validate(problem):
    return json.loads(_validate(problem))


def analyze(problem, gap_tol=1e-8):
    """Solve, certify, reduce and synthesize. Returns the full report as a dict."""
    return json.loads(_analyze(problem, gap_tol))


def probe_rank(count, n_min, n_max, seed=1, workers=1, tridiagonal=False):
    return json.loads(_probe(count, n_min, n_max, seed, workers, tridiagonal))
