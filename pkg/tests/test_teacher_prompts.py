"""Prompt protocol golden tests and completion-parser fixtures."""

import json
from pathlib import Path

import pytest

from gridcurl.errors import SubgoalParseError
from gridcurl.grid import generate_level, render_ascii
from gridcurl.teacher import build_prompts, parse_subgoals
from gridcurl.teacher.parse import format_subgoals

GOLDEN = Path(__file__).parent / "golden"
COMPLETIONS = Path(__file__).parent / "fixtures" / "completions"


def golden(name: str) -> str:
    text = (GOLDEN / name).read_text()
    assert text.endswith("\n"), f"golden file {name} must end with newline"
    return text[:-1]


def test_three_user_turns():
    transcript = build_prompts(generate_level("KeyCorridorS3R3", 0))
    assert [role for role, _ in transcript.messages] == ["user", "user", "user"]


def test_prompt_one_matches_golden():
    turns = build_prompts(generate_level("KeyCorridorS3R3", 0)).user_turns()
    assert turns[0] == golden("prompt_1.txt")


def test_prompt_two_matches_golden_base():
    turns = build_prompts(generate_level("KeyCorridorS3R3", 0)).user_turns()
    assert turns[1] == golden("prompt_2_base.txt")
    assert "8: Locked door" in turns[1]


def test_prompt_two_extends_for_goal_tiles():
    turns = build_prompts(generate_level("MultiRoomN2S4", 0)).user_turns()
    assert turns[1] == golden("prompt_2_goal.txt")


def test_prompt_two_extends_for_boxes():
    turns = build_prompts(generate_level("ObstructedMaze1Dlh", 0)).user_turns()
    assert turns[1] == golden("prompt_2_box.txt")


def test_prompt_three_matches_golden():
    turns = build_prompts(generate_level("KeyCorridorS3R3", 0)).user_turns()
    assert turns[2] == golden("prompt_3_keycorridor_seed0.txt")
    assert "</subgoals>" in turns[2]


def test_templates_level_independent_except_state():
    a = build_prompts(generate_level("KeyCorridorS3R3", 0)).user_turns()
    b = build_prompts(generate_level("KeyCorridorS3R3", 99)).user_turns()
    assert a[0] == b[0] and a[1] == b[1]
    state_a = render_ascii(generate_level("KeyCorridorS3R3", 0))
    state_b = render_ascii(generate_level("KeyCorridorS3R3", 99))
    assert a[2].replace(state_a, "{state}") == b[2].replace(state_b, "{state}")


def load_manifest():
    return json.loads((COMPLETIONS / "manifest.json").read_text())


def test_manifest_covers_twenty_fixtures_with_five_malformed():
    manifest = load_manifest()
    assert len(manifest) == 20
    assert sum(1 for spec in manifest.values() if not spec["ok"]) == 5
    on_disk = {p.name for p in COMPLETIONS.glob("*.txt")}
    assert on_disk == set(manifest)


@pytest.mark.parametrize("name", sorted(load_manifest()))
def test_completion_fixture(name):
    spec = load_manifest()[name]
    text = (COMPLETIONS / name).read_text()
    if spec["ok"]:
        proposals = parse_subgoals(text)
        assert len(proposals) == spec["count"]
        for check in spec.get("checks", []):
            p = proposals[check["index"]]
            assert p.instruction == check["instruction"]
            assert (p.x, p.y) == (check["x"], check["y"])
            expected = check["object"]
            if expected is None:
                assert p.parsed_object is None
            else:
                assert p.parsed_object == tuple(expected)
    else:
        with pytest.raises(SubgoalParseError) as exc_info:
            parse_subgoals(text)
        err = exc_info.value
        assert spec["error_contains"] in str(err)
        if "line_no" in spec:
            assert err.line_no == spec["line_no"], (
                f"{name}: reported line {err.line_no}, expected {spec['line_no']}"
            )


def test_parse_format_roundtrip():
    manifest = load_manifest()
    for name, spec in manifest.items():
        if not spec["ok"]:
            continue
        proposals = parse_subgoals((COMPLETIONS / name).read_text())
        assert parse_subgoals(format_subgoals(proposals)) == proposals
