"""The three-turn prompt protocol for subgoal generation.

The templates are frozen verbatim — including their original typos
("explicity", "can walk of these") — because downstream transcript caches
and golden tests key on the exact bytes.  Only two things vary per level:
the rendered grid spliced into turn 3, and extra legend lines in turn 2
when the grid uses symbols beyond the base alphabet (goal tiles, boxes).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from ..grid.level import Level
from ..grid.render import EXTENSION_LEGEND, extension_symbols, render_ascii

PROMPT_1 = (
    "Tell me about your knowledge of MiniGrid, Farama-Foundation's grid "
    "world environments for reinforcement learning."
)

# Turn 2 splits around the door legend so extension symbol lines can be
# spliced in after it when a level actually renders them.
_PROMPT_2_HEAD = """\
Each environment in MiniGrid is defined by a grid. I will provide you a matrix representing this grid.

Each tile in the grid is encoded with a number, and each number represent the following:

0: Wall, walls are not movable objects, that cannot be overpassed.
2: Key, the key is used to unlock locked doors.
x: Floor, the agent can walk of these.
3: Ball, the ball is the final goal of the environment.
7: Closed door, these doors can be opened without a key.
8: Locked door, these doors need a key to be opened.
9: Opened door, these doors can be overpassed."""

_PROMPT_2_TAIL = """\

Also the agent is represented by:
>: Looking right
V: Looking down
<: Looking left
^: Looking up

With all of this in mind, describe the semantics of the state, using only information from the state and your knowledge of MiniGrid."""

PROMPT_2_BASE = _PROMPT_2_HEAD + "\n" + _PROMPT_2_TAIL

PROMPT_3 = """\
Now, respond by explicity declaring which subgoals would be optimal to progress towards the goal. Remember that keys are needed to open locked doors.

Do not provide subgoals related to movement patterns. Instead, focus on subgoals involving specific objects of interest. Also, provide the final goal as subgoal.

For the subgoals, follow the following format:
<subgoals>
1. instruction (str) (x (int), y (int))
2. instruction (str) (x (int), y (int))
3. instruction (str) (x (int), y (int))
</subgoals>
The instruction must be text without any number. The x and y are the coordinates of the subgoal. Do not add any more information.

The state the agent is seeing is the following: {state}"""


@dataclass
class PromptTranscript:
    """The conversation with the teacher: requests, then filled-in replies."""

    messages: List[Tuple[str, str]] = field(default_factory=list)
    model_id: str = ""
    latency: float = 0.0
    raw_response: str = ""

    def user_turns(self) -> List[str]:
        return [text for role, text in self.messages if role == "user"]

    def to_dict(self) -> dict:
        return {
            "messages": [list(m) for m in self.messages],
            "model_id": self.model_id,
            "latency": self.latency,
            "raw_response": self.raw_response,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PromptTranscript":
        return cls(
            messages=[tuple(m) for m in d["messages"]],
            model_id=d.get("model_id", ""),
            latency=d.get("latency", 0.0),
            raw_response=d.get("raw_response", ""),
        )


def prompt_2_for(state_text: str) -> str:
    """Turn 2, with legend lines for any extension symbols the grid uses."""
    extras = extension_symbols(state_text)
    if not extras:
        return PROMPT_2_BASE
    extra_lines = "\n".join(EXTENSION_LEGEND[sym] for sym in extras)
    return _PROMPT_2_HEAD + "\n" + extra_lines + "\n" + _PROMPT_2_TAIL


def build_prompts(level: Level) -> PromptTranscript:
    """The three user turns for one level, state spliced into turn 3."""
    state = render_ascii(level)
    return PromptTranscript(
        messages=[
            ("user", PROMPT_1),
            ("user", prompt_2_for(state)),
            ("user", PROMPT_3.replace("{state}", state)),
        ]
    )
