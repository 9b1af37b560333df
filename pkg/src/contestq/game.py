"""Core domain types: games, cost functions, profiles, loads, utilities.

A contest game has ``n >= 2`` players with positive skills, ``Q >= 2``
quality levels with strictly increasing efforts, a participation mode
(voluntary iff the lowest effort is zero), a cost function ``cost(s_i,
f_q)`` and a payment function.  A player's utility is her payment minus
her cost, both exact rationals.

Players and qualities are 1-indexed in every public interface.  A
profile ("quality vector") is a tuple of n qualities; a load vector is a
tuple of Q per-quality occupancy counts summing to n.  All types are
immutable after construction and every operation here is a pure
function of its inputs.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple, Optional

from .errors import GameValidationError
from .payments import PaymentFunction, evaluate_payment

Profile = tuple[int, ...]
Loads = tuple[int, ...]

ZERO = Fraction(0)


class Participation(Enum):
    VOLUNTARY = "voluntary"
    MANDATORY = "mandatory"


class CostMonotonicityWarning(UserWarning):
    """A cost table is not non-decreasing along some player's row."""


@dataclass(frozen=True)
class CostFunction:
    """Skill-effort cost: either the product ``s_i * f_q`` or an explicit table.

    A table is an n-by-Q matrix of non-negative rationals, row i giving
    player i's cost at each quality.  Non-monotone rows are legal (some
    counterexample games need exact value patterns) but are reported
    with a warning at validation time.
    """

    kind: str  # "product" | "table"
    table: Optional[tuple[tuple[Fraction, ...], ...]] = None

    def __post_init__(self) -> None:
        if self.kind not in ("product", "table"):
            raise GameValidationError(f"unknown cost kind {self.kind!r}")
        if self.kind == "table":
            if not self.table:
                raise GameValidationError("table cost requires values")
            for row in self.table:
                for entry in row:
                    if entry < 0:
                        raise GameValidationError("cost table entries must be >= 0")
        elif self.table is not None:
            raise GameValidationError("product cost takes no table")

    def value(self, skill: Fraction, effort: Fraction, player: int, quality: int) -> Fraction:
        """Cost of `player` (1-indexed) writing a review of `quality`."""
        if self.kind == "product":
            return skill * effort
        assert self.table is not None
        return self.table[player - 1][quality - 1]


def product_cost() -> CostFunction:
    return CostFunction(kind="product")


def table_cost(values: tuple[tuple[Fraction, ...], ...]) -> CostFunction:
    return CostFunction(kind="table", table=values)


@dataclass(frozen=True)
class ContestGame:
    """An immutable contest-game instance.

    Invariants enforced at construction: ``n >= 2``, ``Q >= 2``, skills
    positive, efforts strictly increasing, participation consistent with
    the lowest effort (voluntary iff ``f_1 = 0``), cost table shaped
    n-by-Q with a zero quality-1 column under voluntary participation.
    """

    n: int
    Q: int
    skills: tuple[Fraction, ...]
    efforts: tuple[Fraction, ...]
    participation: Participation
    cost: CostFunction
    payment: PaymentFunction

    def __post_init__(self) -> None:
        if self.n < 2:
            raise GameValidationError("need n >= 2 players")
        if self.Q < 2:
            raise GameValidationError("need Q >= 2 qualities")
        if len(self.skills) != self.n:
            raise GameValidationError("skills must have one entry per player")
        if len(self.efforts) != self.Q:
            raise GameValidationError("efforts must have one entry per quality")
        if any(s <= 0 for s in self.skills):
            raise GameValidationError("skills must be positive")
        if any(f < 0 for f in self.efforts):
            raise GameValidationError("efforts must be non-negative")
        for lo, hi in zip(self.efforts, self.efforts[1:]):
            if lo >= hi:
                raise GameValidationError("efforts must be strictly increasing")
        voluntary = self.efforts[0] == 0
        if voluntary != (self.participation is Participation.VOLUNTARY):
            raise GameValidationError(
                "participation mode must match the lowest effort: "
                "voluntary iff f_1 = 0, mandatory iff f_1 > 0"
            )
        if self.cost.kind == "table":
            assert self.cost.table is not None
            if len(self.cost.table) != self.n or any(
                len(row) != self.Q for row in self.cost.table
            ):
                raise GameValidationError("cost table must be n x Q")
            if voluntary and any(row[0] != 0 for row in self.cost.table):
                raise GameValidationError(
                    "voluntary participation requires zero cost at quality 1"
                )
            for i, row in enumerate(self.cost.table, start=1):
                if any(lo > hi for lo, hi in zip(row, row[1:])):
                    warnings.warn(
                        f"cost table row for player {i} is not non-decreasing",
                        CostMonotonicityWarning,
                        stacklevel=2,
                    )
        self.payment.validate_shape(self.n, self.Q)

    @property
    def anonymous(self) -> bool:
        """All players share one skill (conventionally normalized to 1)."""
        return len(set(self.skills)) == 1

    def cost_of(self, player: int, quality: int) -> Fraction:
        return self.cost.value(
            self.skills[player - 1], self.efforts[quality - 1], player, quality
        )

    def qualities(self) -> range:
        return range(1, self.Q + 1)

    def players(self) -> range:
        return range(1, self.n + 1)


def load_of(profile: Profile, Q: int) -> Loads:
    """Per-quality occupancy counts of a profile; sums to len(profile)."""
    loads = [0] * Q
    for q in profile:
        loads[q - 1] += 1
    return tuple(loads)


def validate_profile(game: ContestGame, profile: Profile) -> None:
    if len(profile) != game.n:
        raise GameValidationError(
            f"profile has {len(profile)} entries for an {game.n}-player game"
        )
    for q in profile:
        if not isinstance(q, int) or not 1 <= q <= game.Q:
            raise GameValidationError(f"quality {q!r} outside 1..{game.Q}")


def validate_loads(game: ContestGame, loads: Loads) -> None:
    if len(loads) != game.Q:
        raise GameValidationError("load vector must have one entry per quality")
    if any(m < 0 for m in loads) or sum(loads) != game.n:
        raise GameValidationError("loads must be non-negative and sum to n")


def utility(game: ContestGame, profile: Profile, player: int) -> Fraction:
    """Quasi-linear utility: payment minus skill-effort cost, exact."""
    validate_profile(game, profile)
    if not 1 <= player <= game.n:
        raise GameValidationError(f"player {player} outside 1..{game.n}")
    pay = evaluate_payment(game, profile, player)
    return pay - game.cost_of(player, profile[player - 1])


class Deviation(NamedTuple):
    """A strictly improving unilateral move: who, where to, and by how much."""

    player: int
    quality: int
    gain: Fraction


@dataclass(frozen=True)
class PneResult:
    holds: bool
    witness: Optional[Deviation] = None

    def __bool__(self) -> bool:
        return self.holds


def is_pne(game: ContestGame, profile: Profile) -> PneResult:
    """Decide whether no player can strictly gain by a unilateral switch.

    On failure the witness is the best-response deviation: the maximum
    utility gain over all (player, quality) pairs, ties broken towards
    the lower player index, then the lower quality.
    """
    validate_profile(game, profile)
    best: Optional[Deviation] = None
    for i in game.players():
        here = utility(game, profile, i)
        for q in game.qualities():
            if q == profile[i - 1]:
                continue
            moved = profile[: i - 1] + (q,) + profile[i:]
            gain = utility(game, moved, i) - here
            if gain > 0 and (best is None or gain > best.gain):
                best = Deviation(i, q, gain)
    return PneResult(best is None, best)
