"""Teacher backends: prompting, parsing, live client, and the error model."""

from .prompts import PROMPT_1, PROMPT_2_BASE, PROMPT_3, PromptTranscript, build_prompts
from .parse import SubgoalProposal, parse_subgoals

__all__ = [
    "PROMPT_1",
    "PROMPT_2_BASE",
    "PROMPT_3",
    "PromptTranscript",
    "SubgoalProposal",
    "build_prompts",
    "parse_subgoals",
]
