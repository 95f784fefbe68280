import json
import math
import os
import subprocess
from pathlib import Path

import pytest

import pastmon

DATA = Path(os.environ.get("PASTMON_TEST_DATA", Path(__file__).parent.parent / "data"))
WARN_OK = "{warn} -> not(pre({open} since {warn}))"


def test_discrete_boolean():
    m = pastmon.discrete_timed_monitor("once {p}", condense=False)
    assert m.now() == -1
    assert m.update({"p": False}) == {"time": 0, "value": False}
    assert m.update({"p": True}) == {"time": 1, "value": True}
    assert m.update({}) == {"time": 2, "value": True}
    assert m.now() == 2


def test_condensing_returns_none_for_repeats():
    m = pastmon.discrete_timed_monitor("{p}")
    assert m.update({"p": True}) == {"time": 0, "value": True}
    assert m.update({"p": True}) is None
    assert m.update({"p": False}) == {"time": 2, "value": False}


def test_robust_values():
    m = pastmon.discrete_timed_monitor("{x > 1}", semantics="robust", condense=False)
    assert m.update({"x": 3}) == {"time": 0, "value": 2.0}
    assert m.update({"x": 0.5})["value"] == pytest.approx(-0.5)
    b = pastmon.discrete_timed_monitor("{p}", semantics="robust")
    assert b.update({"p": True})["value"] == "inf"


def test_dense_spans():
    m = pastmon.dense_timed_monitor("once[0:1] {p}", condense=False)
    assert m.update({"time": 0, "p": True}) == []
    assert m.update({"time": 1, "p": False}) == [{"time": 0, "value": True}]
    # p held on [0, 1), so the window covers it until time 2.
    assert m.update({"time": 2.5}) == [{"time": 1, "value": True}, {"time": 2, "value": False}]
    assert m.now() == 2.5
    with pytest.raises(pastmon.MonotonicityError):
        m.update({"time": 1, "p": True})


def test_custom_predicate():
    seen = []

    def even(fields):
        seen.append(dict(fields))
        return fields.get("n", 1) % 2 == 0

    m = pastmon.discrete_timed_monitor("once ${even}", predicates={"even": even}, condense=False)
    assert m.update({"n": 3})["value"] is False
    assert m.update({"n": 4})["value"] is True
    assert seen[-1]["n"] == 4


def test_first_order():
    m = pastmon.discrete_timed_monitor("exists[u]. (once {a: *u}) and {b: *u}", condense=False)
    assert m.update({"a": "hello", "b": "world"})["value"] is False
    assert m.update({"a": "world", "b": "hello"})["value"] is True


def test_errors():
    with pytest.raises(pastmon.ParseError) as info:
        pastmon.discrete_timed_monitor("{p} and and {q}")
    assert isinstance(info.value.position, int)
    assert isinstance(info.value, pastmon.Error)
    with pytest.raises(ValueError):
        pastmon.discrete_timed_monitor("{p}", semantics="fuzzy")
    m = pastmon.discrete_timed_monitor("{x > 1}", condense=False)
    with pytest.raises(pastmon.TypeError):
        m.update({"x": "text"})
    # A rejected message leaves the monitor untouched.
    assert m.update({"x": 2}) == {"time": 0, "value": True}


@pytest.mark.skipif("PASTMON_CLI" not in os.environ, reason="command line tool not built")
@pytest.mark.parametrize("semantics", ["boolean", "robust"])
def test_matches_command_line(semantics):
    trace = DATA / "dow_trace.ndjson"
    cli = subprocess.run(
        [os.environ["PASTMON_CLI"], "run", "-s", WARN_OK, "--semantics", semantics, str(trace)],
        capture_output=True, text=True)
    assert cli.returncode in (0, 1), cli.stderr
    expected = [json.loads(line) for line in cli.stdout.splitlines()]

    m = pastmon.discrete_timed_monitor(WARN_OK, semantics=semantics)
    got = []
    for line in trace.read_text().splitlines():
        v = m.update(json.loads(line))
        if v is not None:
            got.append(v)
    assert got == expected
