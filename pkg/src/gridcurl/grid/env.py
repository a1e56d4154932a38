"""Deterministic step mechanics and egocentric observations.

The environment is purely functional over :class:`~gridcurl.grid.level.Level`
state: :func:`step` mutates the level in place and reports what happened,
:func:`observe` derives the agent's 7x7x3 egocentric view.  There is no
hidden state anywhere else, which keeps replay and serialization honest.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from ..errors import EpisodeOverError
from .level import Level
from .objects import (
    DIR_VEC,
    Action,
    Color,
    DoorState,
    Kind,
    PICKABLE_KINDS,
    is_walkable,
    sees_through,
)

VIEW_SIZE = 7
# Agent sits at the bottom-centre of its own view, facing "up" the view grid.
AGENT_VIEW_POS = (VIEW_SIZE // 2, VIEW_SIZE - 1)


class Event(NamedTuple):
    """One object interaction, recorded in the order it happened."""

    name: str  # "pickup" | "drop" | "door_open" | "door_closed" | "box_open" | "goal_reached"
    kind: int
    color: int
    x: int
    y: int


@dataclass
class StepResult:
    """Outcome of a single environment transition."""

    reward: float
    terminated: bool
    truncated: bool
    success: bool
    events: List[Event] = field(default_factory=list)

    @property
    def done(self) -> bool:
        return self.terminated or self.truncated


def target_of(env_id: str) -> Tuple[int, Optional[int]]:
    """The (kind, color) the agent must reach or pick up to finish.

    Color ``None`` means any color counts.  Reaching a goal tile finishes
    room-chain levels; picking up the target ball finishes the others.
    """
    if env_id.startswith("MultiRoom"):
        return (int(Kind.GOAL), None)
    if env_id.startswith("KeyCorridor"):
        return (int(Kind.BALL), None)
    if env_id.startswith("ObstructedMaze"):
        return (int(Kind.BALL), int(Color.BLUE))
    # Fall back to goal-seeking for unknown layouts.
    return (int(Kind.GOAL), None)


def _success_reward(level: Level) -> float:
    return 1.0 - 0.9 * (level.step_count / level.t_max)


def step(level: Level, action: int) -> StepResult:
    """Advance ``level`` by one action.  Raises once the episode is over."""
    if level.done:
        raise EpisodeOverError(
            f"episode already finished at step {level.step_count}"
        )

    action = Action(action)
    level.step_count += 1
    events: List[Event] = []
    reward = 0.0
    success = False

    target_kind, target_color = target_of(level.env_id)
    ax, ay = level.agent.x, level.agent.y
    fdx, fdy = DIR_VEC[level.agent.dir]
    fx, fy = ax + fdx, ay + fdy
    fkind, fcolor, fstate = (int(v) for v in level.get(fx, fy))

    if action == Action.TURN_LEFT:
        level.agent.dir = (level.agent.dir - 1) % 4
    elif action == Action.TURN_RIGHT:
        level.agent.dir = (level.agent.dir + 1) % 4
    elif action == Action.FORWARD:
        if is_walkable(fkind, fstate):
            level.agent.x, level.agent.y = fx, fy
            if fkind == Kind.GOAL:
                events.append(Event("goal_reached", fkind, fcolor, fx, fy))
                if target_kind == Kind.GOAL:
                    success = True
                    reward = _success_reward(level)
                    level.terminated = True
            elif fkind == Kind.LAVA:
                level.terminated = True
    elif action == Action.PICKUP:
        if level.carrying is None and fkind in PICKABLE_KINDS:
            level.carrying = (fkind, fcolor)
            if fkind == Kind.BOX:
                level.carried_box_contents = level.box_contents.pop(
                    (fx, fy), None
                )
            level.set(fx, fy, Kind.EMPTY, 0, 0)
            events.append(Event("pickup", fkind, fcolor, fx, fy))
            if fkind == target_kind and (
                target_color is None or fcolor == target_color
            ):
                success = True
                reward = _success_reward(level)
                level.terminated = True
    elif action == Action.DROP:
        if level.carrying is not None and fkind in (Kind.EMPTY, Kind.FLOOR):
            ckind, ccolor = level.carrying
            level.set(fx, fy, ckind, ccolor, 0)
            if ckind == Kind.BOX and level.carried_box_contents is not None:
                level.box_contents[(fx, fy)] = level.carried_box_contents
                level.carried_box_contents = None
            level.carrying = None
            events.append(Event("drop", ckind, ccolor, fx, fy))
    elif action == Action.TOGGLE:
        if fkind == Kind.DOOR:
            if fstate == DoorState.LOCKED:
                if level.carrying == (int(Kind.KEY), fcolor):
                    level.set(fx, fy, Kind.DOOR, fcolor, DoorState.OPEN)
                    events.append(Event("door_open", fkind, fcolor, fx, fy))
            elif fstate == DoorState.CLOSED:
                level.set(fx, fy, Kind.DOOR, fcolor, DoorState.OPEN)
                events.append(Event("door_open", fkind, fcolor, fx, fy))
            else:  # open -> closed
                level.set(fx, fy, Kind.DOOR, fcolor, DoorState.CLOSED)
                events.append(Event("door_closed", fkind, fcolor, fx, fy))
        elif fkind == Kind.BOX:
            inner = level.box_contents.pop((fx, fy), None)
            if inner is None:
                level.set(fx, fy, Kind.EMPTY, 0, 0)
            else:
                level.set(fx, fy, inner[0], inner[1], 0)
            events.append(Event("box_open", fkind, fcolor, fx, fy))
    elif action == Action.DONE:
        pass  # explicit no-op

    if not level.terminated and level.step_count >= level.t_max:
        level.truncated = True

    level.events.extend(events)
    return StepResult(
        reward=reward,
        terminated=level.terminated,
        truncated=level.truncated,
        success=success,
        events=events,
    )


def _view_to_world(level: Level, vx: int, vy: int) -> Tuple[int, int]:
    """Map view coordinates (agent at bottom-centre, facing up) to the grid."""
    fdx, fdy = DIR_VEC[level.agent.dir]
    rdx, rdy = DIR_VEC[(level.agent.dir + 1) % 4]
    ahead = AGENT_VIEW_POS[1] - vy
    side = vx - AGENT_VIEW_POS[0]
    return (
        level.agent.x + fdx * ahead + rdx * side,
        level.agent.y + fdy * ahead + rdy * side,
    )


def observe(level: Level) -> np.ndarray:
    """The agent's egocentric 7x7x3 view.

    Out-of-grid cells read as walls; cells hidden behind walls or closed
    doors read as unseen.  The agent's own cell shows whatever it carries.
    """
    view = np.zeros((VIEW_SIZE, VIEW_SIZE, 3), dtype=np.int8)
    for vy in range(VIEW_SIZE):
        for vx in range(VIEW_SIZE):
            wx, wy = _view_to_world(level, vx, vy)
            view[vy, vx] = level.get(wx, wy)

    avx, avy = AGENT_VIEW_POS
    if level.carrying is not None:
        view[avy, avx] = (level.carrying[0], level.carrying[1], 0)
    else:
        view[avy, avx] = (Kind.EMPTY, 0, 0)

    mask = _visibility_mask(view)
    view[~mask] = (Kind.UNSEEN, 0, 0)
    return view


def _visibility_mask(view: np.ndarray) -> np.ndarray:
    """Wall-shadow visibility: light spreads from the agent row upwards."""
    mask = np.zeros((VIEW_SIZE, VIEW_SIZE), dtype=bool)
    avx, avy = AGENT_VIEW_POS
    mask[avy, avx] = True
    for vy in range(VIEW_SIZE - 1, -1, -1):
        for vx in range(VIEW_SIZE - 1):
            if not mask[vy, vx]:
                continue
            if not sees_through(int(view[vy, vx, 0]), int(view[vy, vx, 2])):
                continue
            mask[vy, vx + 1] = True
            if vy > 0:
                mask[vy - 1, vx + 1] = True
                mask[vy - 1, vx] = True
        for vx in range(VIEW_SIZE - 1, 0, -1):
            if not mask[vy, vx]:
                continue
            if not sees_through(int(view[vy, vx, 0]), int(view[vy, vx, 2])):
                continue
            mask[vy, vx - 1] = True
            if vy > 0:
                mask[vy - 1, vx - 1] = True
                mask[vy - 1, vx] = True
    return mask
