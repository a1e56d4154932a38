"""Grid object vocabulary: kinds, colors, door states, directions, actions.

Integer codes follow the MiniGrid encoding convention so that observation
tensors and subgoal triples use one shared vocabulary.
"""

from enum import IntEnum


class Kind(IntEnum):
    UNSEEN = 0
    EMPTY = 1
    WALL = 2
    FLOOR = 3
    DOOR = 4
    KEY = 5
    BALL = 6
    BOX = 7
    GOAL = 8
    LAVA = 9
    AGENT = 10


class Color(IntEnum):
    RED = 0
    GREEN = 1
    BLUE = 2
    PURPLE = 3
    YELLOW = 4
    GREY = 5


class DoorState(IntEnum):
    OPEN = 0
    CLOSED = 1
    LOCKED = 2


class Direction(IntEnum):
    RIGHT = 0
    DOWN = 1
    LEFT = 2
    UP = 3


class Action(IntEnum):
    TURN_LEFT = 0
    TURN_RIGHT = 1
    FORWARD = 2
    PICKUP = 3
    DROP = 4
    TOGGLE = 5
    DONE = 6


# Unit vectors per facing direction, in (dx, dy) with y growing downward.
DIR_VEC = {
    Direction.RIGHT: (1, 0),
    Direction.DOWN: (0, 1),
    Direction.LEFT: (-1, 0),
    Direction.UP: (0, -1),
}

KIND_NAMES = {k: k.name.lower() for k in Kind}
COLOR_NAMES = {c: c.name.lower() for c in Color}
NAME_TO_KIND = {v: k for k, v in KIND_NAMES.items()}
NAME_TO_COLOR = {v: c for c, v in ((c, n) for c, n in COLOR_NAMES.items())}

# Kinds an agent can pick up / that a subgoal may name.
PICKABLE_KINDS = (Kind.KEY, Kind.BALL, Kind.BOX)
INTERACTABLE_KINDS = (Kind.DOOR, Kind.KEY, Kind.BALL, Kind.BOX, Kind.GOAL)

# Maxima used to scale observation channels and representation triples.
CHANNEL_SCALE = (10.0, 5.0, 2.0)


def is_walkable(kind: int, state: int) -> bool:
    """Whether the agent may move onto a cell with this (kind, state)."""
    if kind in (Kind.EMPTY, Kind.FLOOR, Kind.GOAL, Kind.LAVA):
        return True
    if kind == Kind.DOOR:
        return state == DoorState.OPEN
    return False


def sees_through(kind: int, state: int) -> bool:
    """Whether vision propagates past a cell (walls and shut doors occlude)."""
    if kind == Kind.WALL:
        return False
    if kind == Kind.DOOR:
        return state == DoorState.OPEN
    return True
