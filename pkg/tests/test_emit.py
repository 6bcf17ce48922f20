import json

import pytest
from hypothesis import given, strategies as st

from statemine.emit import machine_from_json, machine_to_dict, render_dot, render_json, render_text
from statemine.extractor import Extraction, State, StateMachine, Transition, extract
from statemine.java import collect_sources, load_sources

from conftest import CORPUS
from helpers.dotcheck import check_dot

TWO_STATE_DOT = """\
digraph statemachine {
  "Idle" [label="Idle"];
  "Running" [label="Running"];
  "Idle" -> "Running" [label="start / --"];
  "Running" -> "Idle" [label="STOP / ACK"];
}
"""

TWO_STATE_TEXT = """\
state machine: 2 states, 2 transitions
state Idle
state Running
Idle --start/----> Running
Running --STOP/ACK--> Idle
"""


@pytest.fixture(scope="module")
def two_state():
    m, _ = load_sources(collect_sources([CORPUS / "two_state"]))
    return extract(m)


def test_dot_golden(two_state):
    assert render_dot(two_state.machine) == TWO_STATE_DOT
    assert check_dot(TWO_STATE_DOT) == []


def test_text_golden(two_state):
    text = render_text(two_state.machine)
    assert text == TWO_STATE_TEXT
    assert len(text.splitlines()) == 1 + 4


def test_text_empty_and_missing():
    assert render_text(StateMachine()) == "state machine: 0 states, 0 transitions\n"
    assert render_text(None) == "no state machine\n"


def test_json_matches_expected_file(two_state):
    assert render_json(two_state) == (CORPUS / "two_state" / "expected.json").read_text()


def test_json_key_order(two_state):
    doc = json.loads(render_json(two_state))
    assert list(doc) == ["stateMachine", "traces", "warnings"]
    assert list(doc["stateMachine"]["transitions"][0]) == ["source", "target", "trigger", "action"]


def test_json_round_trip(two_state):
    back = machine_from_json(render_json(two_state))
    assert back == two_state.machine
    assert machine_from_json(render_json(Extraction(None))) is None


def test_non_ascii_kept_verbatim():
    a = State("Zuständig")
    x = Extraction(StateMachine([a], [Transition(a, a, "grüß", "--")]))
    assert "Zuständig" in render_json(x)
    assert machine_to_dict(x.machine)["transitions"][0]["trigger"] == "grüß"


_names = st.text(min_size=1, max_size=12)


@given(st.lists(_names, min_size=1, max_size=5, unique=True), st.data())
def test_dot_escaping_survives_arbitrary_names(names, data):
    states = [State(n) for n in names]
    trans = [
        Transition(data.draw(st.sampled_from(states)), data.draw(st.sampled_from(states)),
                   data.draw(_names), data.draw(_names))
        for _ in range(data.draw(st.integers(0, 4)))
    ]
    sm = StateMachine(states, trans)
    assert check_dot(render_dot(sm)) == []
    back = machine_from_json(render_json(Extraction(sm)))
    assert back == sm


@pytest.mark.parametrize("name", sorted(p.name for p in CORPUS.iterdir() if p.is_dir()))
def test_every_corpus_dot_is_well_formed(name):
    m, _ = load_sources(collect_sources([CORPUS / name]))
    x = extract(m)
    if x.machine is not None:
        assert check_dot(render_dot(x.machine)) == []


def test_dotcheck_catches_breakage():
    assert check_dot("graph { }")
    assert check_dot('digraph g { "a -> b; }')
    assert check_dot("digraph g { a [label=x; }")
    assert check_dot("digraph g { } extra")
    assert check_dot('digraph g { "bad \\q escape"; }')
