"""Equilibrium computation: brute force, concavity checks, contiguous search.

Exhaustive profile enumeration costs Q^n.  For payments that satisfy
the three-discrete-concavity inequalities, an equilibrium can be sought
among contiguous assignments only: sort players by non-increasing
skill, hand the first block to quality 1, the next to quality 2, and so
on.  There are exactly C(n+Q-1, Q-1) contiguous load vectors, turning
the search polynomial for constant Q.

The concavity checkers quantify the exchange inequality over every load
vector and every triple of pairwise-distinct qualities, plus a swap
inequality for every quality pair (the form the inversion-swap argument
uses when the deviation target is the partner's quality; at Q = 2 it is
the only non-vacuous instance).  Perturbations that would drive a load
negative are skipped.  The checkers are the ground truth gating the
contiguous solvers and the contigufication procedure; the solvers'
agreement with brute force on checker-certified instances is the
module's master property.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb
from typing import Callable, Mapping, Optional, Sequence

from .errors import CapExceededError, ContigufyError, PreconditionError
from .game import (
    ContestGame,
    CostFunction,
    Loads,
    Participation,
    Profile,
    is_pne,
    load_of,
)
from .payments import (
    PaymentKind,
    compositions,
    payment_on_loads,
    player_specific_table,
    specific_payment_on_loads,
)

DEFAULT_PROFILE_CAP = 10**6


@dataclass(frozen=True)
class BruteForceResult:
    found: Optional[Profile]
    all: Optional[tuple[Profile, ...]]
    scanned: int


def brute_force_pne(game: ContestGame, find_all: bool = False,
                    cap: int = DEFAULT_PROFILE_CAP) -> BruteForceResult:
    """Scan all Q^n profiles for pure Nash equilibria.

    Returns the first equilibrium in lexicographic profile order, and
    with `find_all` the complete equilibrium set.
    """
    count = game.Q**game.n
    if count > cap:
        raise CapExceededError(f"{count} profiles exceed the cap {cap}")
    hits: list[Profile] = []
    for profile in product(game.qualities(), repeat=game.n):
        if is_pne(game, profile):
            if not find_all:
                return BruteForceResult(profile, None, count)
            hits.append(profile)
    if find_all:
        return BruteForceResult(hits[0] if hits else None, tuple(hits), count)
    return BruteForceResult(None, None, count)


# ---------------------------------------------------------------------------
# Three-discrete-concavity


@dataclass(frozen=True)
class ConcavityViolation:
    player: Optional[int]  # None for player-invariant payments
    loads: Loads
    q_i: int
    q_k: int
    q: int


@dataclass(frozen=True)
class ConcavityReport:
    holds: bool
    violation: Optional[ConcavityViolation] = None

    def __bool__(self) -> bool:
        return self.holds


def _shift(loads: Loads, down: int, up: int) -> Loads:
    moved = list(loads)
    moved[down - 1] -= 1
    moved[up - 1] += 1
    return tuple(moved)


def _concavity_scan(n: int, Q: int, players: Sequence[Optional[int]],
                    pay: Callable[[Optional[int], int, Loads], Fraction],
                    ) -> ConcavityReport:
    """Shared quantification for both concavity definitions.

    `pay(player, quality, loads)` is the payment for holding `quality`
    under `loads`; `player` is None in the player-invariant case.
    """
    two = Fraction(2)
    for loads in compositions(n, Q):
        occupied = [q for q in range(1, Q + 1) if loads[q - 1] >= 1]
        for i in players:
            for q_i in occupied:
                base = pay(i, q_i, loads)
                for q_k in occupied:
                    if q_k == q_i:
                        continue
                    # swap inequality: deviations into the partner's quality
                    lhs = pay(i, q_k, _shift(loads, q_i, q_k)) \
                        + pay(i, q_i, _shift(loads, q_k, q_i))
                    if lhs > base + pay(i, q_k, loads):
                        return ConcavityReport(False, ConcavityViolation(
                            i, loads, q_i, q_k, q_k))
                    for q in range(1, Q + 1):
                        if q == q_i or q == q_k:
                            continue
                        lhs = pay(i, q, _shift(loads, q_k, q)) \
                            + pay(i, q, _shift(loads, q_i, q))
                        if lhs > two * base:
                            return ConcavityReport(False, ConcavityViolation(
                                i, loads, q_i, q_k, q))
    return ConcavityReport(True)


def is_three_discrete_concave_specific(game: ContestGame) -> ConcavityReport:
    """Concavity check for player-specific payments on load vectors."""
    pf = game.payment
    if pf.kind is not PaymentKind.PLAYER_SPECIFIC_TABLE or pf.loads_table is None:
        raise PreconditionError(
            "the player-specific checker needs payments keyed by "
            "(own quality, load vector)"
        )

    def pay(player: Optional[int], quality: int, loads: Loads) -> Fraction:
        assert player is not None
        return specific_payment_on_loads(game, player, quality, loads)

    return _concavity_scan(game.n, game.Q, list(game.players()), pay)


def is_three_discrete_concave_invariant(game: ContestGame) -> ConcavityReport:
    """Concavity check for player-invariant payments."""
    if not game.payment.declared_player_invariant:
        raise PreconditionError(
            "the player-invariant checker needs a player-invariant payment"
        )

    def pay(player: Optional[int], quality: int, loads: Loads) -> Fraction:
        return payment_on_loads(game, quality, loads)

    return _concavity_scan(game.n, game.Q, [None], pay)


def concavity_report(game: ContestGame) -> ConcavityReport:
    """Dispatch to the checker matching the game's payment kind."""
    if game.payment.kind is PaymentKind.PLAYER_SPECIFIC_TABLE:
        return is_three_discrete_concave_specific(game)
    return is_three_discrete_concave_invariant(game)


# ---------------------------------------------------------------------------
# Contiguity


def skill_order(game: ContestGame) -> tuple[int, ...]:
    """Players sorted by non-increasing skill, ties by index (stable)."""
    return tuple(sorted(game.players(), key=lambda i: (-game.skills[i - 1], i)))


@dataclass(frozen=True)
class ContiguousAssignment:
    """A load vector plus the block assignment it induces.

    Players are taken in non-increasing skill order and handed out
    left-to-right: the first loads[0] of them choose quality 1, the
    next loads[1] choose quality 2, and so on.  `profile` is indexed by
    the original player numbering.
    """

    loads: Loads
    order: tuple[int, ...]
    profile: Profile

    def first_index(self, quality: int) -> int:
        """1-based rank (in skill order) of the block's first player."""
        return sum(self.loads[: quality - 1]) + 1

    def last_index(self, quality: int) -> int:
        return sum(self.loads[:quality])

    def block(self, quality: int) -> tuple[int, ...]:
        """The players (original numbering) assigned to `quality`."""
        lo = self.first_index(quality) - 1
        return self.order[lo:self.last_index(quality)]


def contiguous_assignment(game: ContestGame, loads: Loads) -> ContiguousAssignment:
    order = skill_order(game)
    choice = [0] * game.n
    pos = 0
    for q in game.qualities():
        for _ in range(loads[q - 1]):
            choice[order[pos] - 1] = q
            pos += 1
    return ContiguousAssignment(loads=tuple(loads), order=order,
                                profile=tuple(choice))


def inversions(game: ContestGame, profile: Profile) -> list[tuple[int, int]]:
    """Inverted pairs of skill-order ranks: earlier rank at a higher quality."""
    order = skill_order(game)
    pairs = []
    for a in range(game.n):
        for b in range(a + 1, game.n):
            if profile[order[a] - 1] > profile[order[b] - 1]:
                pairs.append((a + 1, b + 1))
    return pairs


def contigufy(game: ContestGame, pne: Profile, check_concavity: bool = True) -> Profile:
    """Swap inversion pairs until the equilibrium is contiguous.

    Each round swaps the earliest inversion witness with its earliest
    partner; the load vector never changes and, for three-discrete-
    concave payments, neither does equilibrium status.  The result is
    re-verified and a failure raises instead of returning silently.
    """
    verdict = is_pne(game, pne)
    if not verdict:
        raise PreconditionError(f"contigufy needs an equilibrium; got {verdict.witness}")
    if check_concavity:
        report = concavity_report(game)
        if not report:
            raise PreconditionError(
                f"payments are not three-discrete-concave: {report.violation}"
            )
    order = skill_order(game)
    profile = list(pne)
    for _ in range(game.n * game.n + 1):
        swap = _earliest_inversion(game, order, profile)
        if swap is None:
            break
        i, k = swap
        profile[order[i] - 1], profile[order[k] - 1] = (
            profile[order[k] - 1], profile[order[i] - 1])
    else:
        raise ContigufyError("inversion swaps did not terminate within n^2 rounds")
    result = tuple(profile)
    if load_of(result, game.Q) != load_of(pne, game.Q):
        raise ContigufyError("swap changed the load vector")
    if not is_pne(game, result):
        raise ContigufyError(
            "swap broke the equilibrium; payments are not concave enough"
        )
    return result


def _earliest_inversion(game: ContestGame, order: tuple[int, ...],
                        profile: list[int]) -> Optional[tuple[int, int]]:
    for a in range(game.n):
        qa = profile[order[a] - 1]
        for b in range(a + 1, game.n):
            if qa > profile[order[b] - 1]:
                return a, b
    return None


# ---------------------------------------------------------------------------
# Contiguous-enumeration solvers


@dataclass(frozen=True)
class SolveOutcome:
    assignment: Optional[ContiguousAssignment]
    candidates: int


def solve_contiguous_specific(game: ContestGame, check_concavity: bool = True,
                              workers: int = 1) -> SolveOutcome:
    """Search contiguous load vectors under player-specific payments.

    Every candidate is vetted by the full no-switch condition: for each
    occupied quality, every player in its block, and every target
    quality, the cost saving must not exceed the payment drop.  The
    first satisfying candidate in colexicographic order wins.
    """
    pf = game.payment
    if pf.kind is not PaymentKind.PLAYER_SPECIFIC_TABLE or pf.loads_table is None:
        raise PreconditionError(
            "the player-specific solver needs payments keyed by "
            "(own quality, load vector)"
        )
    if check_concavity:
        report = is_three_discrete_concave_specific(game)
        if not report:
            raise PreconditionError(
                f"payments are not three-discrete-concave: {report.violation}"
            )

    def candidate_ok(loads: Loads) -> bool:
        assignment = contiguous_assignment(game, loads)
        for q in game.qualities():
            if loads[q - 1] == 0:
                continue
            for i in assignment.block(q):
                here = specific_payment_on_loads(game, i, q, loads) \
                    - game.cost_of(i, q)
                for q2 in game.qualities():
                    if q2 == q:
                        continue
                    moved = _shift(loads, q, q2)
                    there = specific_payment_on_loads(game, i, q2, moved) \
                        - game.cost_of(i, q2)
                    if there > here:
                        return False
        return True

    return _scan_candidates(game, candidate_ok, workers)


def solve_contiguous_invariant(game: ContestGame, check_concavity: bool = True,
                               workers: int = 1) -> SolveOutcome:
    """Search contiguous load vectors under player-invariant payments.

    The payment side of the no-switch condition is shared by a whole
    block, so it is evaluated once per (quality, target) pair; only the
    cost side varies by player.  For product costs the binding player
    is a block endpoint (largest skill for downward targets, smallest
    for upward), so each check touches at most two players.
    """
    if not game.payment.declared_player_invariant:
        raise PreconditionError(
            "the player-invariant solver needs a player-invariant payment"
        )
    if check_concavity:
        report = is_three_discrete_concave_invariant(game)
        if not report:
            raise PreconditionError(
                f"payments are not three-discrete-concave: {report.violation}"
            )
    product_cost = game.cost.kind == "product"

    def candidate_ok(loads: Loads) -> bool:
        assignment = contiguous_assignment(game, loads)
        for q in game.qualities():
            if loads[q - 1] == 0:
                continue
            pay_here = payment_on_loads(game, q, loads)
            if product_cost:
                block = (assignment.order[assignment.first_index(q) - 1],
                         assignment.order[assignment.last_index(q) - 1])
            else:
                block = assignment.block(q)
            for q2 in game.qualities():
                if q2 == q:
                    continue
                moved = _shift(loads, q, q2)
                pay_there = payment_on_loads(game, q2, moved)
                drop = pay_here - pay_there
                # need: cost(i, q2) - cost(i, q) >= -drop for the whole block
                for i in block:
                    if game.cost_of(i, q2) - game.cost_of(i, q) < -drop:
                        return False
        return True

    return _scan_candidates(game, candidate_ok, workers)


def _scan_candidates(game: ContestGame, candidate_ok: Callable[[Loads], bool],
                     workers: int) -> SolveOutcome:
    # The outcome reports the full enumeration size C(n+Q-1, Q-1); the
    # winning candidate is the one of minimum index either way.
    candidates = list(compositions(game.n, game.Q))
    hit: Optional[int] = None
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            for idx, ok in enumerate(pool.map(candidate_ok, candidates)):
                if ok and hit is None:
                    hit = idx
    else:
        for idx, loads in enumerate(candidates):
            if candidate_ok(loads):
                hit = idx
                break
    if hit is None:
        return SolveOutcome(None, len(candidates))
    assignment = contiguous_assignment(game, candidates[hit])
    verdict = is_pne(game, assignment.profile)
    if not verdict:
        raise ContigufyError(
            f"candidate {candidates[hit]} passed the block conditions but "
            f"fails the profile check: {verdict.witness}"
        )
    return SolveOutcome(assignment, len(candidates))


def contiguous_candidate_count(n: int, Q: int) -> int:
    return comb(n + Q - 1, Q - 1)


# ---------------------------------------------------------------------------
# Constant-time solver for lower-bounded skills


def solve_all_at_lowest(game: ContestGame) -> Optional[Profile]:
    """All-players-at-quality-1, valid when skills dominate f2/(f2-f1).

    Requires proportional allocation, mandatory participation, and
    product costs.  When the skill bound fails the guarantee is silent
    and None is returned.
    """
    if game.payment.kind is not PaymentKind.PROPORTIONAL:
        raise PreconditionError("requires proportional allocation")
    if game.participation is not Participation.MANDATORY:
        raise PreconditionError("requires mandatory participation")
    if game.cost.kind != "product":
        raise PreconditionError("requires product skill-effort costs")
    f1, f2 = game.efforts[0], game.efforts[1]
    bound = f2 / (f2 - f1)
    if min(game.skills) < bound:
        return None
    profile = (1,) * game.n
    verdict = is_pne(game, profile)
    if not verdict:  # pragma: no cover - contradicts the skill bound
        raise AssertionError(f"skill bound held but deviation exists: {verdict.witness}")
    return profile


# ---------------------------------------------------------------------------
# Normal-form reduction


def reduce_from_normal_form(
    payoffs: Sequence[Mapping[Profile, Fraction]],
    skills: Optional[Sequence[Fraction]] = None,
    efforts: Optional[Sequence[Fraction]] = None,
) -> ContestGame:
    """Embed a finite normal-form game as a contest game.

    Strategy s of player i becomes quality s; the player-specific
    payment at a profile is the normal-form payoff plus the player's
    cost there, so utilities coincide with the payoffs and the two
    games have identical equilibrium sets.
    """
    n = len(payoffs)
    if n < 2:
        raise PreconditionError("need at least two players")
    some_profile = next(iter(payoffs[0]))
    m = max(max(p) for table in payoffs for p in table)
    if m < 2:
        raise PreconditionError("need at least two strategies")
    if len(some_profile) != n:
        raise PreconditionError("payoff keys must be full profiles")
    skills_t = tuple(skills) if skills is not None else (Fraction(1),) * n
    efforts_t = tuple(efforts) if efforts is not None else tuple(
        Fraction(s) for s in range(1, m + 1))
    cost = CostFunction(kind="product")
    table: dict[tuple[int, Profile], Fraction] = {}
    for profile in product(range(1, m + 1), repeat=n):
        for i in range(1, n + 1):
            try:
                payoff = payoffs[i - 1][profile]
            except KeyError:
                raise PreconditionError(
                    f"payoff table for player {i} misses profile {profile}"
                ) from None
            cost_here = skills_t[i - 1] * efforts_t[profile[i - 1] - 1]
            table[(i, profile)] = payoff + cost_here
    participation = (Participation.VOLUNTARY if efforts_t[0] == 0
                     else Participation.MANDATORY)
    return ContestGame(
        n=n, Q=m, skills=skills_t, efforts=efforts_t,
        participation=participation, cost=cost,
        payment=player_specific_table(profile_table=table),
    )
