# Copyright 2026 The cpjobshop Authors
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


"""Job-shop scheduling with a constraint-propagation engine."""

from cpjobshop._cpjobshop import (
    Instance,
    Operation,
    Solution,
    SearchConfig,
    SearchResult,
    RunResult,
    brute_force_optimum,
    generate,
    lower_bound,
    parse_instance,
    read_instance,
    score_complete,
    solve,
    validate_solution,
    write_instance,
)

__all__ = [
    "Instance",
    "Operation",
    "Solution",
    "SearchConfig",
    "SearchResult",
    "RunResult",
    "brute_force_optimum",
    "generate",
    "lower_bound",
    "parse_instance",
    "read_instance",
    "score_complete",
    "solve",
    "validate_solution",
    "write_instance",
]
