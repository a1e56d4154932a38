"""Level state: the full environment configuration a teacher gets to see.

A Level is a mutable value holding the grid, the agent pose, the carried
object and the episode counters. Episodes mutate their own Level; levels are
never shared between episodes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator, Optional, Tuple

import numpy as np

from .objects import Direction, DoorState, Kind, is_walkable

Triple = Tuple[int, int, int]


@dataclass
class AgentPose:
    x: int
    y: int
    dir: Direction

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.x, self.y, int(self.dir))


@dataclass
class Level:
    env_id: str
    width: int
    height: int
    # cells[y, x] = (kind, color, state), dtype int8
    cells: np.ndarray
    agent: AgentPose
    t_max: int
    seed: int
    carrying: Optional[Tuple[int, int]] = None  # (kind, color)
    step_count: int = 0
    terminated: bool = False
    truncated: bool = False
    # Hidden box contents: (x, y) of a box cell -> (kind, color) inside it.
    # Kept out of the cell array so observations never leak what a box hides.
    box_contents: dict = field(default_factory=dict)
    carried_box_contents: Optional[Tuple[int, int]] = None
    # Object-interaction events appended by step(), in episode order.
    events: list = field(default_factory=list)

    # -- cell access ---------------------------------------------------------

    def get(self, x: int, y: int) -> Triple:
        """Cell triple at (x, y); out-of-grid reads as wall."""
        if 0 <= x < self.width and 0 <= y < self.height:
            k, c, s = self.cells[y, x]
            return (int(k), int(c), int(s))
        return (int(Kind.WALL), 0, 0)

    def set(self, x: int, y: int, kind: int, color: int = 0, state: int = 0) -> None:
        self.cells[y, x] = (kind, color, state)

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def is_walkable(self, x: int, y: int) -> bool:
        k, _, s = self.get(x, y)
        return is_walkable(k, s)

    def iter_objects(self) -> Iterator[Tuple[int, int, Triple]]:
        """Yield (x, y, triple) for every non-empty, non-wall cell."""
        ys, xs = np.nonzero(
            (self.cells[:, :, 0] != Kind.EMPTY) & (self.cells[:, :, 0] != Kind.WALL)
        )
        for y, x in zip(ys.tolist(), xs.tolist()):
            yield x, y, self.get(x, y)

    def find(self, kind: int, color: Optional[int] = None) -> list:
        """All (x, y) holding the kind (and color, when given)."""
        match = self.cells[:, :, 0] == kind
        if color is not None:
            match &= self.cells[:, :, 1] == color
        ys, xs = np.nonzero(match)
        return list(zip(xs.tolist(), ys.tolist()))

    @property
    def done(self) -> bool:
        return self.terminated or self.truncated

    def copy(self) -> "Level":
        return Level(
            env_id=self.env_id,
            width=self.width,
            height=self.height,
            cells=self.cells.copy(),
            agent=AgentPose(self.agent.x, self.agent.y, self.agent.dir),
            t_max=self.t_max,
            seed=self.seed,
            carrying=self.carrying,
            step_count=self.step_count,
            terminated=self.terminated,
            truncated=self.truncated,
            box_contents=dict(self.box_contents),
            carried_box_contents=self.carried_box_contents,
            events=list(self.events),
        )

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "env_id": self.env_id,
            "seed": self.seed,
            "width": self.width,
            "height": self.height,
            "t_max": self.t_max,
            "agent": {"x": self.agent.x, "y": self.agent.y, "dir": int(self.agent.dir)},
            "carrying": list(self.carrying) if self.carrying else None,
            "step_count": self.step_count,
            "terminated": self.terminated,
            "truncated": self.truncated,
            "box_contents": [
                [list(cell), list(contents)] for cell, contents in sorted(self.box_contents.items())
            ],
            "carried_box_contents": (
                list(self.carried_box_contents) if self.carried_box_contents else None
            ),
            "cells": self.cells.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "Level":
        cells = np.asarray(d["cells"], dtype=np.int8)
        agent = AgentPose(d["agent"]["x"], d["agent"]["y"], Direction(d["agent"]["dir"]))
        carrying = tuple(d["carrying"]) if d.get("carrying") else None
        box_contents = {
            tuple(cell): tuple(contents) for cell, contents in d.get("box_contents", [])
        }
        carried_box = d.get("carried_box_contents")
        return cls(
            env_id=d["env_id"],
            width=d["width"],
            height=d["height"],
            cells=cells,
            agent=agent,
            t_max=d["t_max"],
            seed=d["seed"],
            carrying=carrying,
            step_count=d.get("step_count", 0),
            terminated=d.get("terminated", False),
            truncated=d.get("truncated", False),
            box_contents=box_contents,
            carried_box_contents=tuple(carried_box) if carried_box else None,
        )

    @classmethod
    def from_json(cls, text: str) -> "Level":
        return cls.from_dict(json.loads(text))


def blank_grid(width: int, height: int) -> np.ndarray:
    """Empty interior surrounded by grey walls."""
    cells = np.zeros((height, width, 3), dtype=np.int8)
    cells[:, :, 0] = Kind.EMPTY
    cells[0, :, 0] = Kind.WALL
    cells[-1, :, 0] = Kind.WALL
    cells[:, 0, 0] = Kind.WALL
    cells[:, -1, 0] = Kind.WALL
    return cells


def locked_door_state(level: Level, color: int) -> Optional[int]:
    """Current state of the door with this color, or None if absent."""
    doors = level.find(Kind.DOOR, color)
    if not doors:
        return None
    x, y = doors[0]
    return level.get(x, y)[2]


DOOR_STATE_FOR_NAME = {"open": DoorState.OPEN, "closed": DoorState.CLOSED, "locked": DoorState.LOCKED}
