# Copyright 2026 The Unravel Authors
#
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

"""Quantum-trajectory unravellings of Lindblad dynamics."""

from ._unravel import (
    BlowUpError,
    ScenarioError,
    born_statistics,
    choi_matrix,
    diffusion_matrix,
    drift_diffusion,
    gell_mann_basis,
    gks_choi_matrix,
    gks_to_lindblad,
    lindblad_rhs,
    propagate_exact,
    scenario_hash,
    simulate,
    trace_distance,
    variance,
    verify_scenario,
)

__all__ = [
    "BlowUpError",
    "ScenarioError",
    "born_statistics",
    "choi_matrix",
    "diffusion_matrix",
    "drift_diffusion",
    "gell_mann_basis",
    "gks_choi_matrix",
    "gks_to_lindblad",
    "lindblad_rhs",
    "propagate_exact",
    "scenario_hash",
    "simulate",
    "trace_distance",
    "variance",
    "verify_scenario",
]
