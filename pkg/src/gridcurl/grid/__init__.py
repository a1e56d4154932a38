"""Procedural gridworld: levels, generation, dynamics, observation, rendering."""

from .env import AGENT_VIEW_POS, VIEW_SIZE, Event, StepResult, observe, step, target_of
from .generate import (
    DEFAULT_T_MAX,
    ENV_IDS,
    SUBGOALS_PER_EPISODE,
    generate_level,
)
from .level import AgentPose, Level
from .objects import (
    Action,
    CHANNEL_SCALE,
    Color,
    Direction,
    DoorState,
    INTERACTABLE_KINDS,
    Kind,
    PICKABLE_KINDS,
    is_walkable,
    sees_through,
)
from .render import extension_symbols, render_ascii, render_cell

__all__ = [
    "AGENT_VIEW_POS",
    "Action",
    "AgentPose",
    "CHANNEL_SCALE",
    "Color",
    "DEFAULT_T_MAX",
    "Direction",
    "DoorState",
    "ENV_IDS",
    "Event",
    "INTERACTABLE_KINDS",
    "Kind",
    "Level",
    "PICKABLE_KINDS",
    "StepResult",
    "SUBGOALS_PER_EPISODE",
    "VIEW_SIZE",
    "extension_symbols",
    "generate_level",
    "is_walkable",
    "observe",
    "render_ascii",
    "render_cell",
    "sees_through",
    "step",
    "target_of",
]
