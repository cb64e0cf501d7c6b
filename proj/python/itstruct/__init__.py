# Copyright 2026 The itstruct Authors
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

"""Structure-sensitive entropy: ultrametric, partition-structure and real-line notions."""

from ._core import (
    Error,
    bound_trials,
    code_lengths,
    conservation,
    d_hat,
    h_r,
    h_r_sample,
    h_s,
    hu,
    hu_newick,
    optimize,
    state_distances,
    stddev_correlation,
    typical_set,
)

__all__ = [
    "Error",
    "bound_trials",
    "code_lengths",
    "conservation",
    "d_hat",
    "h_r",
    "h_r_sample",
    "h_s",
    "hu",
    "hu_newick",
    "optimize",
    "state_distances",
    "stddev_correlation",
    "typical_set",
]
