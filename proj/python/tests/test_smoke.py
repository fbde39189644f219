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


import pathlib

import pytest

import cpjobshop as js

DATA = pathlib.Path(__file__).resolve().parents[2] / "data" / "classic"

TINY = "2 2\n0 3 1 2\n1 4 0 1\n"


def test_parse_and_write_round_trip():
    inst = js.parse_instance(TINY, "tiny")
    assert inst.num_jobs == 2
    assert inst.num_ops == 4
    assert inst.jobs == [[(0, 3), (1, 2)], [(1, 4), (0, 1)]]
    assert js.parse_instance(js.write_instance(inst)) == inst
    assert js.lower_bound(inst) == 6  # machine 1 carries 2 + 4


def test_parse_error_is_value_error():
    with pytest.raises(ValueError):
        js.parse_instance("1 2\n0 0\n")


def test_solve_matches_oracle():
    inst = js.Instance("tiny", 2, [[(0, 3), (1, 2)], [(1, 4), (0, 1)]])
    cfg = js.SearchConfig.classic()
    cfg.mode = "exact"
    cfg.time_limit = 5
    res = js.solve(inst, cfg)
    opt, witness = js.brute_force_optimum(inst)
    assert res.proven
    assert res.makespan == opt == 6
    assert js.validate_solution(inst, res.best) is None
    assert js.validate_solution(inst, witness) is None


def test_ft06():
    inst = js.read_instance(DATA / "ft06.jss")
    cfg = js.SearchConfig.classic()
    cfg.time_limit = 30
    res = js.solve(inst, cfg)
    assert res.makespan == 55 and res.proven
    times = [m for _, m, _ in res.trace]
    assert times == sorted(set(times), reverse=True)
    back = js.Solution.from_json(res.best.to_json())
    assert back == res.best


def test_invalid_solution_is_reported():
    inst = js.parse_instance(TINY)
    bad = js.Solution(inst, [[0, 3], [2, 6]])
    assert "overlap" in js.validate_solution(inst, bad).lower()


def test_generated_instance_certificate():
    inst, cert = js.generate("short", machines=5, ops=60, seed=4)
    assert inst.num_ops == 60
    assert js.lower_bound(inst) == 600000
    assert cert.makespan == 600000
    assert js.validate_solution(inst, cert) is None


def test_score_complete():
    rows = [
        js.RunResult("tie", "A", 55, 10.0),
        js.RunResult("tie", "B", 55, 30.0),
        js.RunResult("none", "A", None),
        js.RunResult("none", "B", None),
    ]
    points, per = js.score_complete(rows)
    assert points == {"A": 0.75, "B": 0.25}
    assert per["none"] == {"A": 0.0, "B": 0.0}


def test_config_validation():
    cfg = js.SearchConfig()
    cfg.workers = 0
    with pytest.raises(ValueError):
        cfg.validate()
    with pytest.raises(ValueError):
        cfg.mode = "greedy"
