"""Synthetic proposal sets that reproduce the benchmark evaluation table.

Each benchmark row (environment x language model x subgoal type) reports:
accuracy, correct/total subgoal counts, correct/total episode counts, and
for position subgoals the Manhattan error mean +- std over *all* proposals
(correct ones count as distance 0).  The builders here construct, fully
deterministically, a set of per-level proposal lists whose scored
statistics hit those numbers: counts exactly, distance moments to well
inside +-0.01.

Construction, per row:

1. a shared pool of benchmark levels for the environment (fixed seeds)
   with their canonical decompositions;
2. per-episode correct counts — the right number of all-correct episodes,
   the remaining correct subgoals spread at most (N-1) per episode;
3. for position rows, an integer distance multiset with the exact target
   sum and near-exact sum of squares, honoring each slot's geometric cap
   (the farthest in-bounds cell from its oracle target), found by
   front-loading mass to the caps and then bulk-rebalancing pairs;
4. incorrect proposals placed uniformly on the in-bounds ring at their
   assigned distance (walls permitted), or, for representation rows, on a
   uniformly chosen different object present in the grid.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np

from .goals import SubgoalSequence
from .grid.generate import ENV_IDS, SUBGOALS_PER_EPISODE, generate_level
from .grid.level import Level
from .grid.objects import COLOR_NAMES, KIND_NAMES, Kind
from .planner import decompose
from .teacher.parse import SubgoalProposal

LLM_IDS = ("Llama", "DeepSeek", "Qwen")
SUBGOAL_TYPES = ("position", "representation")

BENCHMARK_EPISODES = 1000
_BENCHMARK_SEED_BASE = 10_000

# Benchmark rows: (env, llm, type) -> (accuracy, correct_sg, total_sg,
# correct_ep, total_ep, manhattan_mean, manhattan_std).
BENCHMARK_ROWS: Dict[Tuple[str, str, str], dict] = {}


def _row(env, llm, typ, acc, csg, tsg, cep, tep, mean=None, std=None):
    BENCHMARK_ROWS[(env, llm, typ)] = {
        "env_id": env,
        "llm_id": llm,
        "subgoal_type": typ,
        "accuracy": acc,
        "correct_sg": csg,
        "total_sg": tsg,
        "correct_ep": cep,
        "total_ep": tep,
        "manhattan_mean": mean,
        "manhattan_std": std,
    }


_row("MultiRoomN2S4", "Llama", "position", 0.9210, 1842, 2000, 859, 1000, 0.26, 1.01)
_row("MultiRoomN2S4", "DeepSeek", "position", 0.3310, 662, 2000, 125, 1000, 2.91, 2.54)
_row("MultiRoomN2S4", "Qwen", "position", 0.7135, 1427, 2000, 581, 1000, 1.12, 2.05)
_row("MultiRoomN2S4", "Llama", "representation", 0.9295, 1859, 2000, 871, 1000)
_row("MultiRoomN2S4", "DeepSeek", "representation", 0.2570, 514, 2000, 21, 1000)
_row("MultiRoomN2S4", "Qwen", "representation", 0.5585, 1117, 2000, 286, 1000)

_row("MultiRoomN4S5", "Llama", "position", 0.5397, 2159, 4000, 179, 1000, 3.69, 4.65)
_row("MultiRoomN4S5", "DeepSeek", "position", 0.1200, 480, 4000, 3, 1000, 7.92, 4.64)
_row("MultiRoomN4S5", "Qwen", "position", 0.3600, 1440, 4000, 56, 1000, 5.23, 4.94)
_row("MultiRoomN4S5", "Llama", "representation", 0.5480, 2192, 4000, 166, 1000)
_row("MultiRoomN4S5", "DeepSeek", "representation", 0.1625, 650, 4000, 7, 1000)
_row("MultiRoomN4S5", "Qwen", "representation", 0.3517, 1407, 4000, 38, 1000)

_row("KeyCorridorS3R3", "Llama", "position", 0.9743, 2923, 3000, 962, 1000, 0.18, 1.20)
_row("KeyCorridorS3R3", "DeepSeek", "position", 0.3337, 1001, 3000, 18, 1000, 2.57, 2.54)
_row("KeyCorridorS3R3", "Qwen", "position", 0.9810, 2943, 3000, 958, 1000, 0.07, 0.63)
_row("KeyCorridorS3R3", "Llama", "representation", 0.9847, 2954, 3000, 963, 1000)
_row("KeyCorridorS3R3", "DeepSeek", "representation", 0.9063, 2719, 3000, 770, 1000)
_row("KeyCorridorS3R3", "Qwen", "representation", 0.9957, 2987, 3000, 993, 1000)

_row("KeyCorridorS6R3", "Llama", "position", 0.9137, 2741, 3000, 802, 1000, 1.47, 5.02)
_row("KeyCorridorS6R3", "DeepSeek", "position", 0.3650, 1095, 3000, 44, 1000, 7.24, 7.47)
_row("KeyCorridorS6R3", "Qwen", "position", 0.8810, 2643, 3000, 732, 1000, 1.34, 4.25)
_row("KeyCorridorS6R3", "Llama", "representation", 0.9323, 2797, 3000, 806, 1000)
_row("KeyCorridorS6R3", "DeepSeek", "representation", 0.7617, 2285, 3000, 536, 1000)
_row("KeyCorridorS6R3", "Qwen", "representation", 0.9587, 2876, 3000, 895, 1000)

_row("ObstructedMaze1Dlh", "Llama", "position", 0.9870, 2961, 3000, 984, 1000, 0.08, 0.82)
_row("ObstructedMaze1Dlh", "DeepSeek", "position", 0.4300, 1290, 3000, 155, 1000, 2.98, 3.41)
_row("ObstructedMaze1Dlh", "Qwen", "position", 0.6687, 2006, 3000, 486, 1000, 2.18, 3.53)
_row("ObstructedMaze1Dlh", "Llama", "representation", 0.9877, 2963, 3000, 986, 1000)
_row("ObstructedMaze1Dlh", "DeepSeek", "representation", 0.7390, 2217, 3000, 452, 1000)
_row("ObstructedMaze1Dlh", "Qwen", "representation", 0.7417, 2225, 3000, 561, 1000)

_row("ObstructedMaze1Dlhb", "Llama", "position", 0.4485, 1794, 4000, 0, 1000, 4.33, 4.21)
_row("ObstructedMaze1Dlhb", "DeepSeek", "position", 0.2288, 915, 4000, 2, 1000, 4.49, 3.39)
_row("ObstructedMaze1Dlhb", "Qwen", "position", 0.4050, 1620, 4000, 1, 1000, 3.85, 3.71)
_row("ObstructedMaze1Dlhb", "Llama", "representation", 0.4858, 1943, 4000, 0, 1000)
_row("ObstructedMaze1Dlhb", "DeepSeek", "representation", 0.5182, 2073, 4000, 14, 1000)
_row("ObstructedMaze1Dlhb", "Qwen", "representation", 0.4820, 1928, 4000, 1, 1000)


@dataclass
class ProposalSet:
    """Per-level proposal lists for one (env, llm, type) benchmark row."""

    env_id: str
    llm_id: str
    subgoal_type: str
    seeds: List[int]
    proposals: List[List[SubgoalProposal]]

    def to_jsonl(self) -> str:
        header = {
            "env_id": self.env_id,
            "llm_id": self.llm_id,
            "subgoal_type": self.subgoal_type,
        }
        lines = [json.dumps(header)]
        for seed, plist in zip(self.seeds, self.proposals):
            lines.append(json.dumps(
                {"seed": seed, "proposals": [p.to_dict() for p in plist]}
            ))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "ProposalSet":
        lines = [ln for ln in text.split("\n") if ln.strip()]
        header = json.loads(lines[0])
        seeds, proposals = [], []
        for ln in lines[1:]:
            d = json.loads(ln)
            seeds.append(d["seed"])
            proposals.append([SubgoalProposal.from_dict(p) for p in d["proposals"]])
        return cls(seeds=seeds, proposals=proposals, **header)


def benchmark_seeds(n_episodes: int = BENCHMARK_EPISODES) -> List[int]:
    return [_BENCHMARK_SEED_BASE + i for i in range(n_episodes)]


@lru_cache(maxsize=None)
def benchmark_levels(env_id: str, n_episodes: int = BENCHMARK_EPISODES):
    """The shared evaluation levels and their canonical decompositions."""
    levels, oracles = [], []
    for seed in benchmark_seeds(n_episodes):
        lvl = generate_level(env_id, seed)
        levels.append(lvl)
        oracles.append(decompose(lvl, certify=False).sequence)
    return tuple(levels), tuple(oracles)


def per_episode_correct_counts(n_goals: int, correct_sg: int, correct_ep: int,
                               n_ep: int) -> List[int]:
    """Correct-subgoal count per episode matching both row totals."""
    remaining = correct_sg - n_goals * correct_ep
    spread_room = (n_goals - 1) * (n_ep - correct_ep)
    if remaining < 0 or remaining > spread_room:
        raise ValueError(
            f"row infeasible: {correct_sg} correct subgoals, "
            f"{correct_ep} full episodes of {n_goals}"
        )
    counts = [n_goals] * correct_ep
    for _ in range(n_ep - correct_ep):
        take = min(n_goals - 1, remaining)
        counts.append(take)
        remaining -= take
    assert remaining == 0
    return counts


def manhattan_cap(level: Level, target: Tuple[int, int]) -> int:
    """Farthest in-bounds cell from the target, by Manhattan distance."""
    tx, ty = target
    return max(
        tx + ty,
        tx + (level.height - 1 - ty),
        (level.width - 1 - tx) + ty,
        (level.width - 1 - tx) + (level.height - 1 - ty),
    )


def ring_cells(level: Level, target: Tuple[int, int], d: int) -> List[Tuple[int, int]]:
    """All in-bounds cells at exactly Manhattan distance d (walls permitted)."""
    tx, ty = target
    cells = []
    for dx in range(-d, d + 1):
        rem = d - abs(dx)
        for dy in ({-rem, rem} if rem else {0}):
            x, y = tx + dx, ty + dy
            if level.in_bounds(x, y):
                cells.append((x, y))
    return cells


def build_distance_multiset(caps: List[int], s1: int, s2: int) -> List[int]:
    """Integer distances d_i in [1, caps_i] with sum s1 and sum-of-squares ~ s2.

    Returned in the same order as ``caps``.  Mass is first front-loaded
    onto the largest caps (maximizing the square sum), then rebalanced in
    bulk moves (take 1 from a high value, give 1 to a low value) until the
    square sum lands within 1 of the target.
    """
    n = len(caps)
    if not n:
        if s1 or s2:
            raise ValueError("no incorrect slots but nonzero distance targets")
        return []
    if not (n <= s1 <= sum(caps)):
        raise ValueError(f"distance sum {s1} infeasible for {n} slots")
    order = sorted(range(n), key=lambda i: -caps[i])
    d = [1] * n
    rem = s1 - n
    for i in order:
        add = min(caps[i] - 1, rem)
        d[i] += add
        rem -= add
        if not rem:
            break
    assert rem == 0

    # Bin by (value, cap class); moves preserve each slot's cap class.
    bins: Dict[Tuple[int, int], int] = {}
    for i in range(n):
        key = (d[i], caps[i])
        bins[key] = bins.get(key, 0) + 1
    cur = sum(v * v * cnt for (v, _c), cnt in bins.items())
    if cur < s2 - 1:
        raise ValueError(
            f"square sum {s2} unreachable: geometric caps allow at most {cur}"
        )

    def move(src: Tuple[int, int], dst: Tuple[int, int], k: int) -> None:
        nonlocal cur
        (av, ac), (bv, bc) = src, dst
        bins[src] -= k
        if not bins[src]:
            del bins[src]
        bins[(av - 1, ac)] = bins.get((av - 1, ac), 0) + k
        bins[dst] -= k
        if not bins[dst]:
            del bins[dst]
        bins[(bv + 1, bc)] = bins.get((bv + 1, bc), 0) + k
        cur -= 2 * (av - bv - 1) * k

    while cur > s2 + 1:
        diff = cur - s2
        # Largest reduction move that does not overshoot; failing that,
        # the smallest available reduction (accepted if it improves).
        best = None          # (reduction, src, dst, max_k)
        smallest = None
        for (av, ac), acnt in sorted(bins.items(), key=lambda kv: -kv[0][0]):
            if av <= 1:
                continue
            for (bv, bc), bcnt in sorted(bins.items(), key=lambda kv: kv[0][0]):
                if bv > av - 2:
                    break
                if bv >= bc:
                    continue  # cannot raise past its cap
                if (av, ac) == (bv, bc):
                    continue
                red = 2 * (av - bv - 1)
                if red <= 0:
                    continue
                k_cap = min(acnt, bcnt)
                if red <= diff:
                    k = min(k_cap, diff // red)
                    if k and (best is None or red * k > best[0] * best[3]):
                        best = (red, (av, ac), (bv, bc), k)
                if smallest is None or red < smallest[0]:
                    smallest = (red, (av, ac), (bv, bc), 1)
        if best is not None:
            move(best[1], best[2], best[3])
        elif smallest is not None and smallest[0] < 2 * diff:
            move(smallest[1], smallest[2], smallest[3])
        else:
            break

    # Hand the values back out, largest first into the largest caps of
    # each class so every slot stays within its own cap.
    by_class: Dict[int, List[int]] = {}
    for (v, c), cnt in bins.items():
        by_class.setdefault(c, []).extend([v] * cnt)
    result = [0] * n
    class_order: Dict[int, List[int]] = {c: sorted(vals, reverse=True)
                                         for c, vals in by_class.items()}
    for i in order:
        result[i] = class_order[caps[i]].pop()
    assert all(1 <= result[i] <= caps[i] for i in range(n))
    assert sum(result) == s1
    return result


def present_object_triples(level: Level) -> List[Tuple[int, int, int]]:
    """Distinct interactable (kind, color, state) triples visible in the grid."""
    triples = set()
    for _x, _y, (kind, color, state) in level.iter_objects():
        if kind in (Kind.DOOR, Kind.KEY, Kind.BALL, Kind.BOX, Kind.GOAL):
            triples.add((int(kind), int(color), int(state)))
    return sorted(triples)


def alternative_triples(level: Level, oracle_triple: Tuple[int, int, int],
                        ambiguous_kinds) -> List[Tuple[int, int, int]]:
    """Present objects that would score as incorrect for this oracle subgoal."""
    ok, ocolor, _os = oracle_triple
    out = []
    for kind, color, state in present_object_triples(level):
        if kind != ok:
            out.append((kind, color, state))
        elif color != ocolor and kind in ambiguous_kinds:
            out.append((kind, color, state))
    return out


def ambiguous_kinds_of(level: Level) -> set:
    """Kinds appearing with at least two colors — color matters for these."""
    colors_by_kind: Dict[int, set] = {}
    for _x, _y, (kind, color, _state) in level.iter_objects():
        if kind in (Kind.DOOR, Kind.KEY, Kind.BALL, Kind.BOX, Kind.GOAL):
            colors_by_kind.setdefault(int(kind), set()).add(int(color))
    return {k for k, cs in colors_by_kind.items() if len(cs) > 1}


def _instruction_for_triple(triple: Tuple[int, int, int]) -> str:
    kind, color, _state = triple
    kind_name = KIND_NAMES[kind]
    if kind == Kind.GOAL:
        return "Go to the goal"
    if kind == Kind.DOOR:
        return f"Open the {COLOR_NAMES[color]} door"
    return f"Pick up the {COLOR_NAMES[color]} {kind_name}"


def _cell_of_triple(level: Level, triple: Tuple[int, int, int]) -> Tuple[int, int]:
    kind, color, _state = triple
    cells = level.find(kind, color)
    return cells[0] if cells else (0, 0)


def build_proposal_set(env_id: str, llm_id: str, subgoal_type: str,
                       n_episodes: int = BENCHMARK_EPISODES) -> ProposalSet:
    """Deterministic proposal lists whose score reproduces the benchmark row."""
    row = BENCHMARK_ROWS[(env_id, llm_id, subgoal_type)]
    scale = n_episodes / row["total_ep"]
    if scale != 1.0:
        raise ValueError("benchmark rows are defined for 1000 episodes")
    n_goals = SUBGOALS_PER_EPISODE[env_id]
    levels, oracles = benchmark_levels(env_id, n_episodes)
    counts = per_episode_correct_counts(
        n_goals, row["correct_sg"], row["correct_ep"], n_episodes
    )
    rng = np.random.default_rng(
        np.random.SeedSequence(
            [ENV_IDS.index(env_id), LLM_IDS.index(llm_id),
             SUBGOAL_TYPES.index(subgoal_type)]
        )
    )

    # Which slots are incorrect: per episode, the ones with the largest
    # geometric caps, which maximizes headroom for the distance targets.
    incorrect: List[List[int]] = []
    for ep, c in enumerate(counts):
        n_inc = n_goals - c
        caps_here = [
            (manhattan_cap(levels[ep], g.target_cell), slot)
            for slot, g in enumerate(oracles[ep].goals)
        ]
        caps_here.sort(key=lambda t: (-t[0], t[1]))
        incorrect.append(sorted(slot for _cap, slot in caps_here[:n_inc]))

    distance_of: Dict[Tuple[int, int], int] = {}
    if subgoal_type == "position":
        slot_list = [(ep, slot) for ep in range(n_episodes) for slot in incorrect[ep]]
        caps = [
            manhattan_cap(levels[ep], oracles[ep].goals[slot].target_cell)
            for ep, slot in slot_list
        ]
        total = row["total_sg"]
        s1 = round(row["manhattan_mean"] * total)
        mean_exact = s1 / total
        s2 = round(total * (row["manhattan_std"] ** 2 + mean_exact**2))
        distances = build_distance_multiset(caps, s1, s2)
        distance_of = dict(zip(slot_list, distances))

    episodes: List[List[SubgoalProposal]] = []
    for ep in range(n_episodes):
        level, oracle = levels[ep], oracles[ep]
        ambiguous = ambiguous_kinds_of(level)
        plist: List[SubgoalProposal] = []
        for slot, goal in enumerate(oracle.goals):
            if slot not in incorrect[ep]:
                x, y = goal.target_cell
                plist.append(SubgoalProposal(
                    instruction=goal.text.rstrip("."), x=x, y=y,
                    parsed_object=goal.triple,
                ))
            elif subgoal_type == "position":
                d = distance_of[(ep, slot)]
                cells = ring_cells(level, goal.target_cell, d)
                x, y = cells[rng.integers(len(cells))]
                plist.append(SubgoalProposal(
                    instruction=goal.text.rstrip("."), x=x, y=y,
                    parsed_object=goal.triple,
                ))
            else:
                options = alternative_triples(level, goal.triple, ambiguous)
                if not options:
                    # Degenerate grid with nothing else to point at; the
                    # row constructions never rely on this fallback.
                    triple = goal.triple
                else:
                    triple = options[rng.integers(len(options))]
                x, y = _cell_of_triple(level, triple)
                plist.append(SubgoalProposal(
                    instruction=_instruction_for_triple(triple), x=x, y=y,
                    parsed_object=triple,
                ))
        episodes.append(plist)
    return ProposalSet(
        env_id=env_id,
        llm_id=llm_id,
        subgoal_type=subgoal_type,
        seeds=benchmark_seeds(n_episodes),
        proposals=episodes,
    )


def oracle_sequences(env_id: str,
                     n_episodes: int = BENCHMARK_EPISODES) -> Tuple[SubgoalSequence, ...]:
    return benchmark_levels(env_id, n_episodes)[1]
