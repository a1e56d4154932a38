"""gridcurl: teacher-guided curriculum RL on procedural gridworlds.

A modeled language-model teacher decomposes each level into a sequence of
subgoals; a goal-conditioned PPO student is reward-shaped toward them.  The
package bundles the gridworld, the teacher pipeline (prompting, parsing,
offline error modeling), the shaping rule, the PPO trainer, and the
evaluation/reporting tools around them.
"""

__version__ = "0.1.0"
