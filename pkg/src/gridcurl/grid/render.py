"""ASCII rendering of levels in the prompt alphabet.

One character per cell, rows top to bottom, no separators.  The base
alphabet covers walls, floor, keys, balls, and the three door states;
goal tiles and boxes render as ``G`` and ``B``, an extension needed by
room-chain and box-hiding layouts (callers that build prompts document
the extra symbols only when they occur).
"""

from __future__ import annotations

from ..errors import RenderError
from .level import Level
from .objects import Direction, DoorState, Kind

AGENT_CHARS = {
    Direction.RIGHT: ">",
    Direction.DOWN: "V",
    Direction.LEFT: "<",
    Direction.UP: "^",
}

DOOR_CHARS = {
    DoorState.OPEN: "9",
    DoorState.CLOSED: "7",
    DoorState.LOCKED: "8",
}

KIND_CHARS = {
    Kind.WALL: "0",
    Kind.EMPTY: "x",
    Kind.FLOOR: "x",
    Kind.KEY: "2",
    Kind.BALL: "3",
    Kind.GOAL: "G",
    Kind.BOX: "B",
}

# Extension symbols beyond the key/door/ball alphabet, with the legend
# line to append to prompts when they appear in a rendered level.
EXTENSION_LEGEND = {
    "G": "G: Goal, the goal tile the agent must reach.",
    "B": "B: Box, boxes can be opened and may contain other objects.",
}


def render_cell(kind: int, state: int) -> str:
    """The prompt-alphabet character for one cell."""
    if kind == Kind.DOOR:
        try:
            return DOOR_CHARS[DoorState(state)]
        except ValueError:
            raise RenderError(f"door has no renderable state {state}")
    try:
        return KIND_CHARS[Kind(kind)]
    except (KeyError, ValueError):
        raise RenderError(f"no prompt symbol for object kind {kind}")


def render_ascii(level: Level) -> str:
    """Render ``level`` as newline-joined rows of prompt-alphabet characters."""
    rows = []
    for y in range(level.height):
        chars = []
        for x in range(level.width):
            if (x, y) == (level.agent.x, level.agent.y):
                chars.append(AGENT_CHARS[Direction(level.agent.dir)])
                continue
            kind, _color, state = (int(v) for v in level.cells[y, x])
            chars.append(render_cell(kind, state))
        rows.append("".join(chars))
    return "\n".join(rows)


def extension_symbols(text: str) -> list:
    """Extension characters actually present in a rendered grid, in legend order."""
    return [sym for sym in EXTENSION_LEGEND if sym in text]
