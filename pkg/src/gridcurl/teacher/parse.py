"""Parsing `<subgoals>` blocks out of teacher completions.

Completions are free text; the contract is a block of numbered lines

    <subgoals>
    1. instruction (x, y)
    ...
    </subgoals>

Instructions are mapped to object triples through a small synonym table
(object words, color words, door-state words).  Parsing is strict about
structure — missing tags, unnumbered lines, or an empty block raise
:class:`SubgoalParseError` with the offending line number — but lenient
about instruction wording: an instruction that names no known object
still parses, with ``parsed_object`` left empty.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Tuple

from ..errors import SubgoalParseError
from ..grid.objects import DoorState, Kind, NAME_TO_COLOR

# (kind, state) implied by an object word; None state means "unknown".
_OBJECT_WORDS = {
    "key": (int(Kind.KEY), None),
    "keys": (int(Kind.KEY), None),
    "door": (int(Kind.DOOR), None),
    "doors": (int(Kind.DOOR), None),
    "ball": (int(Kind.BALL), None),
    "balls": (int(Kind.BALL), None),
    "box": (int(Kind.BOX), None),
    "boxes": (int(Kind.BOX), None),
    "goal": (int(Kind.GOAL), None),
}

# Bare "open" is read as the verb ("open the locked door"), never a state.
_STATE_WORDS = {
    "opened": int(DoorState.OPEN),
    "closed": int(DoorState.CLOSED),
    "locked": int(DoorState.LOCKED),
}

_COLOR_WORDS = dict(NAME_TO_COLOR)
_COLOR_WORDS["gray"] = _COLOR_WORDS["grey"]

_TAG_OPEN = "<subgoals>"
_TAG_CLOSE = "</subgoals>"

_LINE_RE = re.compile(
    r"^\s*(\d+)\s*[.)]\s*(.*?)\s*[([]\s*(-?\d+)\s*,\s*(-?\d+)\s*[)\]]\s*$"
)


@dataclass(frozen=True)
class SubgoalProposal:
    """One parsed line: the instruction, its coordinates, and what it names."""

    instruction: str
    x: int
    y: int
    # (kind, color, state) with None for unspecified slots.
    parsed_object: Optional[Tuple[Optional[int], Optional[int], Optional[int]]] = None

    def to_dict(self) -> dict:
        return {
            "instruction": self.instruction,
            "x": self.x,
            "y": self.y,
            "parsed_object": list(self.parsed_object) if self.parsed_object else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SubgoalProposal":
        po = d.get("parsed_object")
        return cls(
            instruction=d["instruction"],
            x=int(d["x"]),
            y=int(d["y"]),
            parsed_object=tuple(po) if po else None,
        )


def classify_instruction(
    instruction: str,
) -> Optional[Tuple[Optional[int], Optional[int], Optional[int]]]:
    """Map instruction words to a (kind, color, state) triple, None slots allowed."""
    words = re.findall(r"[a-z]+", instruction.lower())
    kind = color = state = None
    for w in words:
        if kind is None and w in _OBJECT_WORDS:
            kind = _OBJECT_WORDS[w][0]
        if color is None and w in _COLOR_WORDS:
            color = int(_COLOR_WORDS[w])
        if state is None and w in _STATE_WORDS:
            state = _STATE_WORDS[w]
    if kind is None and color is None and state is None:
        return None
    return (kind, color, state)


def parse_subgoals(text: str) -> List[SubgoalProposal]:
    """Extract and parse the `<subgoals>` block from a completion."""
    open_at = text.find(_TAG_OPEN)
    if open_at < 0:
        raise SubgoalParseError(f"no {_TAG_OPEN} block in completion")
    close_at = text.find(_TAG_CLOSE, open_at)
    if close_at < 0:
        raise SubgoalParseError(f"{_TAG_OPEN} block never closed")
    block = text[open_at + len(_TAG_OPEN):close_at]
    # Line numbers reported relative to the whole completion.
    first_line_no = text[: open_at + len(_TAG_OPEN)].count("\n") + 1

    proposals: List[SubgoalProposal] = []
    for offset, line in enumerate(block.split("\n")):
        if not line.strip():
            continue
        m = _LINE_RE.match(line)
        if not m:
            raise SubgoalParseError(
                f"cannot parse subgoal line: {line.strip()!r}",
                line_no=first_line_no + offset,
            )
        _n, instruction, x, y = m.groups()
        instruction = instruction.strip()
        if not instruction:
            raise SubgoalParseError(
                "subgoal line has no instruction text",
                line_no=first_line_no + offset,
            )
        proposals.append(
            SubgoalProposal(
                instruction=instruction,
                x=int(x),
                y=int(y),
                parsed_object=classify_instruction(instruction),
            )
        )
    if not proposals:
        raise SubgoalParseError("subgoals block contains no subgoals")
    return proposals


def format_subgoals(proposals: List[SubgoalProposal]) -> str:
    """Render proposals back into a canonical block (parse's inverse)."""
    lines = [_TAG_OPEN]
    for i, p in enumerate(proposals, start=1):
        lines.append(f"{i}. {p.instruction} ({p.x}, {p.y})")
    lines.append(_TAG_CLOSE)
    return "\n".join(lines)
