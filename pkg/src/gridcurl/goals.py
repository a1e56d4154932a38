"""Subgoal variants, their policy-side encodings, and sequence progression.

A subgoal names one object-level step of a task ("pick up the key").  The
same step can be handed to the policy in three shapes:

* ``position`` — the target cell, encoded each step as the offset from the
  agent's *current* position, scaled into [-1, 1] by the grid size;
* ``representation`` — the (kind, color, door-state) triple, scaled by the
  enum ranges (10, 5, 2);
* ``language`` — a sentence embedding of the instruction text, passed
  through unchanged (384 dimensions).

Every subgoal carries all three payloads; ``variant`` picks which one the
encoder and the achievement rule consult.  Language achievement delegates
to the representation rule of the object the text names.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigError
from .grid.level import Level
from .grid.objects import DIR_VEC, INTERACTABLE_KINDS, Kind, is_walkable

VARIANTS = ("position", "representation", "language")
EMBEDDING_DIM = 384
GOAL_DIMS = {"position": 2, "representation": 3, "language": EMBEDDING_DIM}
REPRESENTATION_SCALE = (10.0, 5.0, 2.0)


@dataclass(frozen=True)
class Subgoal:
    """One step of a task, with payloads for all three goal variants."""

    variant: str
    target_cell: Tuple[int, int]
    triple: Tuple[int, int, int]
    text: str = ""
    embedding: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError([f"unknown subgoal variant {self.variant!r}"])
        if self.triple[0] not in INTERACTABLE_KINDS:
            raise ConfigError(
                [f"subgoal object kind {self.triple[0]} is not interactable"]
            )
        if self.embedding is not None and len(self.embedding) != EMBEDDING_DIM:
            raise ConfigError(
                [f"language embedding must have {EMBEDDING_DIM} entries, "
                 f"got {len(self.embedding)}"]
            )

    def with_variant(self, variant: str) -> "Subgoal":
        return replace(self, variant=variant)

    def with_embedding(self, vector) -> "Subgoal":
        return replace(self, embedding=tuple(float(v) for v in vector))

    def to_dict(self) -> dict:
        d = {
            "variant": self.variant,
            "target_cell": list(self.target_cell),
            "triple": list(self.triple),
            "text": self.text,
        }
        if self.embedding is not None:
            d["embedding"] = list(self.embedding)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Subgoal":
        emb = d.get("embedding")
        return cls(
            variant=d["variant"],
            target_cell=tuple(d["target_cell"]),
            triple=tuple(d["triple"]),
            text=d.get("text", ""),
            embedding=tuple(emb) if emb is not None else None,
        )


@dataclass(frozen=True)
class SubgoalSequence:
    """An ordered subgoal list with a cursor for the active one."""

    goals: Tuple[Subgoal, ...]
    cursor: int = 0

    def __post_init__(self):
        object.__setattr__(self, "goals", tuple(self.goals))
        for a, b in zip(self.goals, self.goals[1:]):
            if a == b:
                raise ConfigError(
                    ["consecutive subgoals must be distinct: "
                     f"{a.text or a.triple} repeats"]
                )
        if not 0 <= self.cursor <= len(self.goals):
            raise ConfigError([f"cursor {self.cursor} outside [0, {len(self.goals)}]"])

    def __len__(self) -> int:
        return len(self.goals)

    @property
    def exhausted(self) -> bool:
        return self.cursor >= len(self.goals)

    @property
    def active(self) -> Optional[Subgoal]:
        return None if self.exhausted else self.goals[self.cursor]

    def to_json(self) -> str:
        return json.dumps(
            {"cursor": self.cursor, "goals": [g.to_dict() for g in self.goals]}
        )

    @classmethod
    def from_json(cls, text: str) -> "SubgoalSequence":
        d = json.loads(text)
        return cls(
            goals=tuple(Subgoal.from_dict(g) for g in d["goals"]),
            cursor=d["cursor"],
        )


def advance(seq: SubgoalSequence, achieved: bool) -> SubgoalSequence:
    """Move the cursor forward when the active subgoal was achieved.

    The returned sequence is what the *next* time step sees; exhausted
    sequences stay exhausted.
    """
    if achieved and not seq.exhausted:
        return replace(seq, cursor=seq.cursor + 1)
    return seq


@dataclass(frozen=True)
class GoalSpace:
    """Run-level encoding parameters: variant plus grid dimensions."""

    variant: str
    width: int
    height: int

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError([f"unknown subgoal variant {self.variant!r}"])

    @property
    def k(self) -> int:
        return GOAL_DIMS[self.variant]


def encode_goal(subgoal: Subgoal, agent, space: GoalSpace) -> np.ndarray:
    """The policy-side vector for one subgoal, normalized into [-1, 1]."""
    if subgoal.variant != space.variant:
        raise ConfigError(
            [f"subgoal variant {subgoal.variant!r} does not match "
             f"the run's goal space {space.variant!r}"]
        )
    if space.variant == "position":
        dx = subgoal.target_cell[0] - agent.x
        dy = subgoal.target_cell[1] - agent.y
        return np.array(
            [dx / max(space.width - 1, 1), dy / max(space.height - 1, 1)],
            dtype=np.float32,
        )
    if space.variant == "representation":
        return np.array(
            [subgoal.triple[i] / REPRESENTATION_SCALE[i] for i in range(3)],
            dtype=np.float32,
        )
    if subgoal.embedding is None:
        raise ConfigError(
            [f"language subgoal {subgoal.text!r} has no embedding attached"]
        )
    return np.asarray(subgoal.embedding, dtype=np.float32)


def encode_active(seq: SubgoalSequence, agent, space: GoalSpace) -> np.ndarray:
    """Encoding of the active subgoal; the zero vector once exhausted."""
    if seq.exhausted:
        return np.zeros(space.k, dtype=np.float32)
    return encode_goal(seq.active, agent, space)


def _matches_events(triple: Tuple[int, int, int], events) -> bool:
    kind, color, _state = triple
    for ev in events:
        if kind == Kind.DOOR:
            # The proposal records the door's state when proposed; opening
            # the door achieves it regardless of that recorded state.
            if ev.name == "door_open" and ev.kind == kind and ev.color == color:
                return True
        elif kind == Kind.GOAL:
            if ev.name == "goal_reached" and ev.kind == kind and ev.color == color:
                return True
        else:
            if ev.name == "pickup" and ev.kind == kind and ev.color == color:
                return True
    return False


def is_achieved(level: Level, subgoal: Subgoal, events=None) -> bool:
    """Whether this step achieved the subgoal.

    ``events`` should be the events of the step just taken; by default the
    level's full event log is consulted, which treats "already did it this
    episode" as achieved.  Position subgoals are judged from the agent's
    pose: on the target cell, or facing it from an adjacent cell when the
    target cannot be stood upon (objects, walls, closed doors).
    """
    if events is None:
        events = level.events
    if subgoal.variant == "position":
        tx, ty = subgoal.target_cell
        if (level.agent.x, level.agent.y) == (tx, ty):
            return True
        kind, _color, state = level.get(tx, ty)
        if is_walkable(kind, state):
            return False
        fdx, fdy = DIR_VEC[level.agent.dir]
        return (level.agent.x + fdx, level.agent.y + fdy) == (tx, ty)
    return _matches_events(subgoal.triple, events)
