"""Programmatic task decomposition and feasibility certification.

This is the stand-in for a human expert: :func:`decompose` reads a level
and produces its canonical subgoal sequence, and :func:`verify_feasible`
certifies by breadth-first search over the full interaction state (pose,
inventory, door and box states) that the sequence can actually be carried
out in order within the step budget.

Canonical sequences per family:

* room chains — each connecting door in traversal order, then the goal;
* key corridors — key, locked door, ball;
* box-hidden key ("1Dlh") — key (hidden in the box), locked door, ball;
* with blocker ("1Dlhb") — blocking ball first, then as above.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import UnsolvableLevelError
from .goals import Subgoal, SubgoalSequence, is_achieved
from .grid.env import step
from .grid.level import AgentPose, Level
from .grid.objects import (
    DIR_VEC,
    Action,
    Color,
    COLOR_NAMES,
    DoorState,
    Kind,
    PICKABLE_KINDS,
    is_walkable,
)

# One template per (family, step role); colors are the only free slot, so
# the space of instruction sentences stays finite.
LANGUAGE_TEMPLATES = {
    ("MultiRoom", "door"): "Open the {color} door.",
    ("MultiRoom", "goal"): "Go to the goal.",
    ("KeyCorridor", "key"): "Go to the key.",
    ("KeyCorridor", "door"): "Open the locked door.",
    ("KeyCorridor", "ball"): "Pick up the ball.",
    ("ObstructedMaze", "blocker"): "Move the ball blocking the door.",
    ("ObstructedMaze", "key"): "Pick up the key.",
    ("ObstructedMaze", "door"): "Open the locked door.",
    ("ObstructedMaze", "ball"): "Pick up the blue ball.",
}

FAMILIES = ("MultiRoom", "KeyCorridor", "ObstructedMaze")


@dataclass(frozen=True)
class OracleDecomposition:
    """A certified subgoal sequence and the step cost of the certifying plan."""

    sequence: SubgoalSequence
    plan_cost: Optional[int]


def family_of(env_id: str) -> str:
    for fam in FAMILIES:
        if env_id.startswith(fam):
            return fam
    raise UnsolvableLevelError(f"no decomposition rule for {env_id!r}")


def instruction_for(family: str, role: str, color: int) -> str:
    return LANGUAGE_TEMPLATES[(family, role)].format(color=COLOR_NAMES[color])


def _walk_distances(level: Level, start: Tuple[int, int]) -> Dict[Tuple[int, int], int]:
    """Foot distance from ``start``; closed doors passable, locked doors not."""
    dist = {start: 0}
    frontier = deque([start])
    while frontier:
        x, y = frontier.popleft()
        for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            nx, ny = x + dx, y + dy
            if (nx, ny) in dist or not level.in_bounds(nx, ny):
                continue
            kind, _c, state = level.get(nx, ny)
            passable = is_walkable(kind, state) or (
                kind == Kind.DOOR and state == DoorState.CLOSED
            )
            if passable:
                dist[(nx, ny)] = dist[(x, y)] + 1
                frontier.append((nx, ny))
    return dist


def _steps_for(level: Level) -> List[Tuple[str, Tuple[int, int], Tuple[int, int, int], int]]:
    """(role, cell, triple, template_color) in canonical order."""
    family = family_of(level.env_id)
    steps = []
    if family == "MultiRoom":
        dist = _walk_distances(level, (level.agent.x, level.agent.y))
        doors = level.find(Kind.DOOR)
        missing = [d for d in doors if d not in dist]
        if missing:
            raise UnsolvableLevelError(f"doors unreachable on foot: {missing}")
        for x, y in sorted(doors, key=lambda cell: dist[cell]):
            color = level.get(x, y)[1]
            steps.append(("door", (x, y), (int(Kind.DOOR), color, int(DoorState.CLOSED)), color))
        goals = level.find(Kind.GOAL)
        if len(goals) != 1:
            raise UnsolvableLevelError(f"expected one goal tile, found {len(goals)}")
        gx, gy = goals[0]
        gcolor = level.get(gx, gy)[1]
        steps.append(("goal", (gx, gy), (int(Kind.GOAL), gcolor, 0), gcolor))
        return steps

    doors = [d for d in level.find(Kind.DOOR)
             if level.get(*d)[2] == DoorState.LOCKED]
    if len(doors) != 1:
        raise UnsolvableLevelError(f"expected one locked door, found {len(doors)}")
    dx, dy = doors[0]
    dcolor = level.get(dx, dy)[1]

    if family == "KeyCorridor":
        keys = level.find(Kind.KEY, dcolor)
        balls = level.find(Kind.BALL)
        if len(keys) != 1 or len(balls) != 1:
            raise UnsolvableLevelError("key corridor needs one matching key and one ball")
        kx, ky = keys[0]
        bx, by = balls[0]
        bcolor = level.get(bx, by)[1]
        steps.append(("key", (kx, ky), (int(Kind.KEY), int(dcolor), 0), dcolor))
        steps.append(("door", (dx, dy), (int(Kind.DOOR), int(dcolor), int(DoorState.LOCKED)), dcolor))
        steps.append(("ball", (bx, by), (int(Kind.BALL), int(bcolor), 0), bcolor))
        return steps

    # Obstructed mazes: the key is hidden in a box; "get the key" is a
    # single combined step whose position payload is the box cell.
    blockers = [b for b in level.find(Kind.BALL)
                if level.get(*b)[1] != Color.BLUE]
    targets = level.find(Kind.BALL, Color.BLUE)
    boxes = level.find(Kind.BOX)
    if len(targets) != 1 or len(boxes) != 1:
        raise UnsolvableLevelError("obstructed maze needs one blue ball and one box")
    if blockers:
        blx, bly = blockers[0]
        blcolor = level.get(blx, bly)[1]
        steps.append(("blocker", (blx, bly), (int(Kind.BALL), int(blcolor), 0), blcolor))
    steps.append(("key", boxes[0], (int(Kind.KEY), int(dcolor), 0), dcolor))
    steps.append(("door", (dx, dy), (int(Kind.DOOR), int(dcolor), int(DoorState.LOCKED)), dcolor))
    tx, ty = targets[0]
    steps.append(("ball", (tx, ty), (int(Kind.BALL), int(Color.BLUE), 0), int(Color.BLUE)))
    return steps


def decompose(level: Level, variant: str = "position",
              certify: bool = True) -> OracleDecomposition:
    """The canonical subgoal sequence for a level, optionally certified.

    With ``certify`` the sequence is proved feasible by search and the
    plan cost reported; training loops skip certification for speed.
    """
    family = family_of(level.env_id)
    goals = tuple(
        Subgoal(
            variant=variant,
            target_cell=cell,
            triple=triple,
            text=instruction_for(family, role, color),
        )
        for role, cell, triple, color in _steps_for(level)
    )
    seq = SubgoalSequence(goals=goals)
    cost = None
    if certify:
        ok, cost = verify_feasible(level, seq)
        if not ok:
            raise UnsolvableLevelError(
                f"{level.env_id} seed {level.seed}: canonical sequence infeasible"
            )
    return OracleDecomposition(sequence=seq, plan_cost=cost)


def _candidate_actions(level: Level, x: int, y: int, d: int, carrying) -> Iterable[int]:
    """Actions worth exploring; closing doors and the no-op never help here."""
    acts = [Action.TURN_LEFT, Action.TURN_RIGHT]
    fdx, fdy = DIR_VEC[d]
    fkind, fcolor, fstate = level.get(x + fdx, y + fdy)
    if is_walkable(fkind, fstate):
        acts.append(Action.FORWARD)
    if carrying is None and fkind in PICKABLE_KINDS:
        acts.append(Action.PICKUP)
    if carrying is not None and fkind in (Kind.EMPTY, Kind.FLOOR):
        acts.append(Action.DROP)
    if fkind == Kind.DOOR:
        if fstate == DoorState.CLOSED or (
            fstate == DoorState.LOCKED and carrying == (int(Kind.KEY), fcolor)
        ):
            acts.append(Action.TOGGLE)
    elif fkind == Kind.BOX:
        acts.append(Action.TOGGLE)
    return acts


def verify_feasible(level: Level, seq: SubgoalSequence,
                    max_steps: Optional[int] = None) -> Tuple[bool, Optional[int]]:
    """Search proof that the sequence can be achieved in order within t_max.

    Breadth-first over (pose, inventory, door/box states, cursor); grids
    reached by object interactions are interned so navigation steps stay
    cheap.  Returns (feasible, steps of the shortest certifying plan).
    """
    if seq.cursor >= len(seq):
        return True, 0
    budget = level.t_max if max_steps is None else max_steps

    base = level.copy()
    base.step_count = 0
    base.terminated = False
    base.truncated = False
    base.events = []
    base.t_max = budget + 2  # depth is tracked by the search itself

    grids: Dict[tuple, Level] = {}

    def intern(lv: Level) -> tuple:
        key = (lv.cells.tobytes(), tuple(sorted(lv.box_contents.items())))
        if key not in grids:
            pristine = lv.copy()
            pristine.events = []
            grids[key] = pristine
        return key

    gkey0 = intern(base)
    start = (
        base.agent.x, base.agent.y, int(base.agent.dir),
        base.carrying, base.carried_box_contents, gkey0, seq.cursor,
    )
    seen = {start}
    frontier = deque([start])
    depth = 0
    while frontier and depth < budget:
        depth += 1
        for _ in range(len(frontier)):
            x, y, d, carrying, cbc, gkey, cursor = frontier.popleft()
            grid = grids[gkey]
            for action in _candidate_actions(grid, x, y, d, carrying):
                scratch = grid.copy()
                scratch.agent = AgentPose(x, y, d)
                scratch.carrying = carrying
                scratch.carried_box_contents = cbc
                result = step(scratch, action)
                cur = cursor
                if is_achieved(scratch, seq.goals[cur], events=result.events):
                    cur += 1
                    if cur == len(seq):
                        return True, depth
                if scratch.done:
                    continue  # episode ended before the sequence finished
                if action in (Action.PICKUP, Action.DROP, Action.TOGGLE):
                    nkey = intern(scratch)
                else:
                    nkey = gkey
                nstate = (
                    scratch.agent.x, scratch.agent.y, int(scratch.agent.dir),
                    scratch.carrying, scratch.carried_box_contents, nkey, cur,
                )
                if nstate not in seen:
                    seen.add(nstate)
                    frontier.append(nstate)
    return False, None
