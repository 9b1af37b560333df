"""Improvement steps, paths, and the quality improvement graph.

The improvement graph has an edge between two states exactly when one
player's quality differs and switching strictly raises her utility.
Two state spaces are supported: full profiles, and (for games with
equal skills, identical cost rows, and a player-invariant payment) the
quotient by player permutations, whose nodes are load vectors.  The
quotient shrinks the node count from Q^n to C(n+Q-1, Q-1), which is
what makes the proportional-allocation acyclicity checks feasible for
larger n.
"""

from __future__ import annotations

import random as _random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from .errors import CapExceededError, PreconditionError
from .game import ContestGame, Deviation, Participation, Profile, utility, validate_profile
from .payments import PaymentKind, compositions, payment_on_loads

Loads = tuple[int, ...]
Node = tuple[int, ...]  # profile or load vector depending on mode

DEFAULT_NODE_CAP = 10**5


def improvement_steps(game: ContestGame, profile: Profile) -> list[Deviation]:
    """All strictly improving unilateral deviations, exact gains."""
    validate_profile(game, profile)
    steps = []
    for i in game.players():
        here = utility(game, profile, i)
        for q in game.qualities():
            if q == profile[i - 1]:
                continue
            moved = profile[: i - 1] + (q,) + profile[i:]
            gain = utility(game, moved, i) - here
            if gain > 0:
                steps.append(Deviation(i, q, gain))
    return steps


class Policy(Enum):
    FIRST_IMPROVING = "first-improving"
    BEST_RESPONSE = "best-response"
    RANDOM = "random"


_POLICY_ALIASES = {
    "first": Policy.FIRST_IMPROVING,
    "first-improving": Policy.FIRST_IMPROVING,
    "best": Policy.BEST_RESPONSE,
    "best-response": Policy.BEST_RESPONSE,
    "random": Policy.RANDOM,
}


def parse_policy(name: Union[str, Policy]) -> Policy:
    if isinstance(name, Policy):
        return name
    try:
        return _POLICY_ALIASES[name]
    except KeyError:
        raise PreconditionError(f"unknown policy {name!r}") from None


class PathStatus(Enum):
    CONVERGED = "converged"
    CYCLE = "cycle"
    TRUNCATED = "truncated"


@dataclass(frozen=True)
class PathResult:
    status: PathStatus
    profile: Optional[Profile] = None      # converged: the equilibrium reached
    steps: int = 0
    cycle: Optional[list[Profile]] = None  # cycle: repeated state sequence


def run_improvement_path(game: ContestGame, start: Profile,
                         policy: Union[str, Policy] = Policy.FIRST_IMPROVING,
                         max_steps: Optional[int] = None,
                         seed: int = 0) -> PathResult:
    """Walk improvement steps from `start` under a deviation policy.

    first-improving: lowest player index, then lowest target quality.
    best-response: the lowest-index player with any improvement moves to
    her maximum-gain quality (ties to the lower quality).
    random: uniform over all improving (player, quality) pairs, seeded.

    Any revisited state closes an improvement cycle, so the walk always
    terminates without a step bound; `max_steps` only truncates earlier.
    """
    policy = parse_policy(policy)
    validate_profile(game, start)
    rng = _random.Random(seed)
    profile = tuple(start)
    seen: dict[Profile, int] = {profile: 0}
    path = [profile]
    steps = 0
    while True:
        if max_steps is not None and steps >= max_steps:
            return PathResult(PathStatus.TRUNCATED, steps=steps)
        move = _pick_move(game, profile, policy, rng)
        if move is None:
            return PathResult(PathStatus.CONVERGED, profile=profile, steps=steps)
        i, q = move
        profile = profile[: i - 1] + (q,) + profile[i:]
        steps += 1
        if profile in seen:
            return PathResult(PathStatus.CYCLE, steps=steps,
                              cycle=path[seen[profile]:])
        seen[profile] = len(path)
        path.append(profile)


def _pick_move(game: ContestGame, profile: Profile, policy: Policy,
               rng: _random.Random) -> Optional[tuple[int, int]]:
    if policy is Policy.FIRST_IMPROVING:
        for i in game.players():
            here = utility(game, profile, i)
            for q in game.qualities():
                if q != profile[i - 1]:
                    moved = profile[: i - 1] + (q,) + profile[i:]
                    if utility(game, moved, i) > here:
                        return i, q
        return None
    if policy is Policy.BEST_RESPONSE:
        for i in game.players():
            here = utility(game, profile, i)
            best: Optional[tuple[Fraction, int]] = None
            for q in game.qualities():
                if q != profile[i - 1]:
                    moved = profile[: i - 1] + (q,) + profile[i:]
                    gain = utility(game, moved, i) - here
                    if gain > 0 and (best is None or gain > best[0]):
                        best = (gain, q)
            if best is not None:
                return i, best[1]
        return None
    options = improvement_steps(game, profile)
    if not options:
        return None
    pick = options[rng.randrange(len(options))]
    return pick.player, pick.quality


@dataclass(frozen=True)
class Edge:
    source: Node
    target: Node
    player: Optional[int]  # None in anonymous (load-vector) mode
    from_quality: int
    to_quality: int
    gain: Fraction


@dataclass
class ImprovementGraph:
    mode: str  # "profile" | "anonymous"
    nodes: list[Node]
    edges: dict[Node, list[Edge]] = field(default_factory=dict)

    def out_edges(self, node: Node) -> list[Edge]:
        return self.edges[node]

    def sinks(self) -> list[Node]:
        return [u for u in self.nodes if not self.edges[u]]


def anonymous_mode_applicable(game: ContestGame) -> bool:
    """Load-vector quotienting is sound when players are interchangeable."""
    if not game.anonymous:
        return False
    if not game.payment.declared_player_invariant:
        return False
    if game.cost.kind == "table":
        assert game.cost.table is not None
        first = game.cost.table[0]
        return all(row == first for row in game.cost.table)
    return True


def build_improvement_graph(game: ContestGame, mode: str = "auto",
                            max_nodes: int = DEFAULT_NODE_CAP) -> ImprovementGraph:
    if mode == "auto":
        mode = "anonymous" if anonymous_mode_applicable(game) else "profile"
    if mode == "anonymous":
        if not anonymous_mode_applicable(game):
            raise PreconditionError(
                "anonymous mode needs equal skills, identical cost rows, "
                "and a player-invariant payment"
            )
        return _build_anonymous(game, max_nodes)
    if mode != "profile":
        raise PreconditionError(f"unknown graph mode {mode!r}")
    return _build_profile(game, max_nodes)


def _build_profile(game: ContestGame, max_nodes: int) -> ImprovementGraph:
    count = game.Q**game.n
    if count > max_nodes:
        raise CapExceededError(
            f"profile graph has {count} nodes, above the cap {max_nodes}"
        )
    from itertools import product as _product

    nodes = [tuple(p) for p in _product(game.qualities(), repeat=game.n)]
    graph = ImprovementGraph(mode="profile", nodes=nodes)
    for node in nodes:
        outs = []
        for step in improvement_steps(game, node):
            target = node[: step.player - 1] + (step.quality,) + node[step.player:]
            outs.append(Edge(node, target, step.player,
                             node[step.player - 1], step.quality, step.gain))
        graph.edges[node] = outs
    return graph


def _build_anonymous(game: ContestGame, max_nodes: int) -> ImprovementGraph:
    from math import comb

    count = comb(game.n + game.Q - 1, game.Q - 1)
    if count > max_nodes:
        raise CapExceededError(
            f"load graph has {count} nodes, above the cap {max_nodes}"
        )
    nodes = list(compositions(game.n, game.Q))
    graph = ImprovementGraph(mode="anonymous", nodes=nodes)
    for loads in nodes:
        outs = []
        for a in game.qualities():
            if loads[a - 1] == 0:
                continue
            here = payment_on_loads(game, a, loads) - game.cost_of(1, a)
            for b in game.qualities():
                if b == a:
                    continue
                moved = list(loads)
                moved[a - 1] -= 1
                moved[b - 1] += 1
                moved_t = tuple(moved)
                there = payment_on_loads(game, b, moved_t) - game.cost_of(1, b)
                if there > here:
                    outs.append(Edge(loads, moved_t, None, a, b, there - here))
        graph.edges[loads] = outs
    return graph


@dataclass(frozen=True)
class GraphAnalysis:
    mode: str
    acyclic: bool
    sinks: list[Node]
    cycle_witness: Optional[list[Node]]
    node_count: int
    edge_count: int


def analyze_graph(game: ContestGame, mode: str = "auto",
                  max_nodes: int = DEFAULT_NODE_CAP) -> GraphAnalysis:
    """Exact DAG test plus sink enumeration.

    Sinks of the improvement graph are exactly the pure Nash equilibria
    (equilibrium loads in anonymous mode).  The cycle witness, if any,
    comes from the first back edge of a three-color depth-first search.
    """
    graph = build_improvement_graph(game, mode, max_nodes)
    witness = find_cycle(graph)
    return GraphAnalysis(
        mode=graph.mode,
        acyclic=witness is None,
        sinks=sorted(graph.sinks()),
        cycle_witness=witness,
        node_count=len(graph.nodes),
        edge_count=sum(len(v) for v in graph.edges.values()),
    )


def find_cycle(graph: ImprovementGraph) -> Optional[list[Node]]:
    """First cycle found by iterative three-color DFS, or None."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {u: WHITE for u in graph.nodes}
    for root in graph.nodes:
        if color[root] != WHITE:
            continue
        stack: list[tuple[Node, int]] = [(root, 0)]
        order = [root]
        color[root] = GRAY
        while stack:
            node, idx = stack[-1]
            outs = graph.edges[node]
            if idx < len(outs):
                stack[-1] = (node, idx + 1)
                nxt = outs[idx].target
                if color[nxt] == GRAY:
                    at = order.index(nxt)
                    return order[at:] + [nxt]
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, 0))
                    order.append(nxt)
            else:
                color[node] = BLACK
                stack.pop()
                order.pop()
    return None


@dataclass(frozen=True)
class NoSwitchReport:
    holds: bool
    violations: list[Edge]
    boundary_state_clean: Optional[bool]  # voluntary only: (n-1, 1, 0, ...) has no 1<->2 step


def check_no_switch_lemma(game: ContestGame, mode: str = "auto",
                          max_nodes: int = DEFAULT_NODE_CAP) -> NoSwitchReport:
    """Check that improvement steps only move the deviator strictly down.

    For proportional allocation this is the key structural fact behind
    acyclicity; the report also confirms that under voluntary
    participation the boundary state with n-1 players at quality 1 and
    one at quality 2 admits no improvement in either direction between
    those two qualities.
    """
    if game.payment.kind is not PaymentKind.PROPORTIONAL:
        raise PreconditionError("the no-switch check targets proportional allocation")
    graph = build_improvement_graph(game, mode, max_nodes)
    violations = [e for u in graph.nodes for e in graph.edges[u]
                  if e.to_quality > e.from_quality]
    boundary: Optional[bool] = None
    if game.participation is Participation.VOLUNTARY and graph.mode == "anonymous":
        state = (game.n - 1, 1) + (0,) * (game.Q - 2)
        moves = {(e.from_quality, e.to_quality) for e in graph.edges[state]}
        boundary = (1, 2) not in moves and (2, 1) not in moves
    return NoSwitchReport(holds=not violations, violations=violations,
                          boundary_state_clean=boundary)


def node_label(graph_mode: str, node: Node) -> str:
    text = ",".join(str(x) for x in node)
    return f"L:{text}" if graph_mode == "anonymous" else text


def to_dot(graph: ImprovementGraph) -> str:
    """GraphViz rendering, sinks double-circled."""
    lines = ["digraph improvement {"]
    sinks = set(graph.sinks())
    for node in graph.nodes:
        shape = "doublecircle" if node in sinks else "circle"
        lines.append(f'  "{node_label(graph.mode, node)}" [shape={shape}];')
    for node in graph.nodes:
        for e in graph.edges[node]:
            lines.append(
                f'  "{node_label(graph.mode, e.source)}" -> '
                f'"{node_label(graph.mode, e.target)}" '
                f'[label="{e.from_quality}->{e.to_quality}"];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
