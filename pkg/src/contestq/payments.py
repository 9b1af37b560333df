"""Payment families and their exact evaluation.

Six kinds are supported: the three closed-form player-invariant
families (proportional allocation, equal sharing per quality, K-Top)
and three table-backed kinds (oblivious per-load tables, player-
invariant tables keyed by own quality and load vector, player-specific
tables keyed either by full profile or by own quality and load vector).

Closed-form normalization constants for equal sharing and K-Top are the
inverse of the largest achievable per-profile payout sum; a brute-force
version over all load vectors is provided so tests can cross-check the
closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import TYPE_CHECKING, Mapping, NamedTuple, Optional

from .errors import (
    CapExceededError,
    GameValidationError,
    MissingTableEntryError,
    PreconditionError,
)

if TYPE_CHECKING:  # pragma: no cover - import cycle guard
    from .game import ContestGame

Loads = tuple[int, ...]
Profile = tuple[int, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class PaymentKind(Enum):
    PROPORTIONAL = "proportional"
    EQUAL_SHARING = "equal_sharing"
    KTOP = "ktop"
    OBLIVIOUS_TABLE = "oblivious"
    PLAYER_INVARIANT_TABLE = "player_invariant"
    PLAYER_SPECIFIC_TABLE = "player_specific"


Matrix = tuple[tuple[Fraction, ...], ...]  # Q rows (quality) x n cols (load)


@dataclass(frozen=True)
class PaymentFunction:
    """Tagged payment family plus whatever tables its kind requires.

    Oblivious tables map (own quality, load on it) to a payment; a
    shared matrix is player-invariant, per-player matrices are not.
    Player-invariant tables map (own quality, full load vector).
    Player-specific tables map either (player, full profile) or
    (player, own quality, load vector); the contiguous solvers require
    the load-vector form.
    """

    kind: PaymentKind
    K: Optional[int] = None
    matrix: Optional[Matrix] = None
    matrices: Optional[tuple[Matrix, ...]] = None
    invariant_table: Optional[Mapping[tuple[int, Loads], Fraction]] = None
    profile_table: Optional[Mapping[tuple[int, Profile], Fraction]] = None
    loads_table: Optional[Mapping[tuple[int, int, Loads], Fraction]] = None

    def validate_shape(self, n: int, Q: int) -> None:
        kind = self.kind
        if kind is PaymentKind.KTOP:
            if self.K is None or not 1 <= self.K <= Q:
                raise GameValidationError("K-Top requires K in 1..Q")
        elif self.K is not None:
            raise GameValidationError("K only applies to the K-Top family")
        if kind is PaymentKind.OBLIVIOUS_TABLE:
            if (self.matrix is None) == (self.matrices is None):
                raise GameValidationError(
                    "oblivious payments need exactly one of a shared matrix "
                    "or per-player matrices"
                )
            mats = (self.matrix,) if self.matrix is not None else self.matrices
            assert mats is not None
            if self.matrices is not None and len(self.matrices) != n:
                raise GameValidationError("need one oblivious matrix per player")
            for mat in mats:
                if len(mat) != Q or any(len(row) != n for row in mat):
                    raise GameValidationError("oblivious matrices must be Q x n")
                if any(entry < 0 for row in mat for entry in row):
                    raise GameValidationError("oblivious payments must be >= 0")
        elif kind is PaymentKind.PLAYER_INVARIANT_TABLE:
            if self.invariant_table is None:
                raise GameValidationError("player-invariant kind requires a table")
            for (q, loads), pay in self.invariant_table.items():
                if not 1 <= q <= Q or len(loads) != Q or sum(loads) != n:
                    raise GameValidationError(f"bad invariant-table key {(q, loads)}")
                if loads[q - 1] < 1:
                    raise GameValidationError(
                        f"invariant-table key {(q, loads)}: quality unoccupied"
                    )
                if pay < 0:
                    raise GameValidationError("invariant payments must be >= 0")
        elif kind is PaymentKind.PLAYER_SPECIFIC_TABLE:
            if (self.profile_table is None) == (self.loads_table is None):
                raise GameValidationError(
                    "player-specific kind requires exactly one key form: "
                    "full profiles or (own quality, load vector)"
                )
            if self.profile_table is not None:
                for (i, prof) in self.profile_table:
                    if not 1 <= i <= n or len(prof) != n:
                        raise GameValidationError(f"bad profile-table key {(i, prof)}")
            else:
                assert self.loads_table is not None
                for (i, q, loads) in self.loads_table:
                    if not 1 <= i <= n or not 1 <= q <= Q or len(loads) != Q:
                        raise GameValidationError(f"bad loads-table key {(i, q, loads)}")
        else:
            extras = (self.matrix, self.matrices, self.invariant_table,
                      self.profile_table, self.loads_table)
            if any(t is not None for t in extras):
                raise GameValidationError(f"{kind.value} payments take no tables")

    @property
    def declared_player_invariant(self) -> bool:
        if self.kind in (PaymentKind.PROPORTIONAL, PaymentKind.EQUAL_SHARING,
                         PaymentKind.KTOP, PaymentKind.PLAYER_INVARIANT_TABLE):
            return True
        return self.kind is PaymentKind.OBLIVIOUS_TABLE and self.matrix is not None

    @property
    def declared_oblivious(self) -> bool:
        return self.kind in (PaymentKind.EQUAL_SHARING, PaymentKind.KTOP,
                             PaymentKind.OBLIVIOUS_TABLE)


def proportional() -> PaymentFunction:
    return PaymentFunction(kind=PaymentKind.PROPORTIONAL)


def equal_sharing() -> PaymentFunction:
    return PaymentFunction(kind=PaymentKind.EQUAL_SHARING)


def ktop(K: int) -> PaymentFunction:
    return PaymentFunction(kind=PaymentKind.KTOP, K=K)


def oblivious_table(matrix: Optional[Matrix] = None,
                    matrices: Optional[tuple[Matrix, ...]] = None) -> PaymentFunction:
    return PaymentFunction(kind=PaymentKind.OBLIVIOUS_TABLE,
                           matrix=matrix, matrices=matrices)


def player_invariant_table(table: Mapping[tuple[int, Loads], Fraction]) -> PaymentFunction:
    return PaymentFunction(kind=PaymentKind.PLAYER_INVARIANT_TABLE,
                           invariant_table=dict(table))


def player_specific_table(
    profile_table: Optional[Mapping[tuple[int, Profile], Fraction]] = None,
    loads_table: Optional[Mapping[tuple[int, int, Loads], Fraction]] = None,
) -> PaymentFunction:
    return PaymentFunction(
        kind=PaymentKind.PLAYER_SPECIFIC_TABLE,
        profile_table=dict(profile_table) if profile_table is not None else None,
        loads_table=dict(loads_table) if loads_table is not None else None,
    )


def _loads(profile: Profile, Q: int) -> Loads:
    counts = [0] * Q
    for q in profile:
        counts[q - 1] += 1
    return tuple(counts)


@lru_cache(maxsize=None)
def _top_effort_sum(efforts: tuple[Fraction, ...], eligible_from: int, n: int) -> Fraction:
    """Sum of the min(n, #eligible) largest efforts among qualities > eligible_from."""
    eligible = efforts[eligible_from:]
    take = min(n, len(eligible))
    return sum(eligible[len(eligible) - take:], ZERO)


def normalization_constant(game: "ContestGame", family: str,
                           K: Optional[int] = None) -> Fraction:
    """Exact inverse of the maximum payout sum for equal sharing or K-Top.

    For any profile the payout sum is the total effort of the occupied
    eligible qualities, so the maximum is the sum of the min(n,
    #eligible) largest eligible efforts.
    """
    if family == "equal_sharing":
        eligible_from = 0
    elif family == "ktop":
        if K is None:
            if game.payment.kind is not PaymentKind.KTOP:
                raise PreconditionError("K required for the K-Top constant")
            K = game.payment.K
        assert K is not None
        eligible_from = game.Q - K
    else:
        raise PreconditionError(
            f"no normalization constant for family {family!r}"
        )
    return ONE / _top_effort_sum(game.efforts, eligible_from, game.n)


def normalization_constant_bruteforce(game: "ContestGame", family: str,
                                      K: Optional[int] = None) -> Fraction:
    """Same constant by enumerating all load vectors; the test oracle."""
    if family == "equal_sharing":
        eligible_from = 0
    elif family == "ktop":
        if K is None:
            K = game.payment.K
        assert K is not None
        eligible_from = game.Q - K
    else:
        raise PreconditionError(f"no normalization constant for family {family!r}")
    best = ZERO
    for loads in compositions(game.n, game.Q):
        payout = sum(
            (game.efforts[q] for q in range(eligible_from, game.Q) if loads[q] > 0),
            ZERO,
        )
        best = max(best, payout)
    return ONE / best


def compositions(n: int, Q: int):
    """All load vectors (compositions of n into Q parts), colexicographic."""
    if Q == 1:
        yield (n,)
        return
    for tail in range(n + 1):
        for head in compositions(n - tail, Q - 1):
            yield head + (tail,)


def evaluate_payment(game: "ContestGame", profile: Profile, player: int) -> Fraction:
    """Payment awarded to `player` (1-indexed) under `profile`."""
    pf = game.payment
    kind = pf.kind
    own = profile[player - 1]
    if kind is PaymentKind.PROPORTIONAL:
        total = sum((game.efforts[q - 1] for q in profile), ZERO)
        if total == 0:
            return ZERO  # voluntary, everyone at quality 1: defined as 0
        return game.efforts[own - 1] / total
    if kind is PaymentKind.PLAYER_SPECIFIC_TABLE:
        if pf.profile_table is not None:
            try:
                return pf.profile_table[(player, tuple(profile))]
            except KeyError:
                raise MissingTableEntryError(
                    f"no payment for player {player} at profile {profile}"
                ) from None
        assert pf.loads_table is not None
        return specific_payment_on_loads(game, player, own, _loads(profile, game.Q))
    loads = _loads(profile, game.Q)
    if kind is PaymentKind.OBLIVIOUS_TABLE and pf.matrices is not None:
        return pf.matrices[player - 1][own - 1][loads[own - 1] - 1]
    return payment_on_loads(game, own, loads)


def payment_on_loads(game: "ContestGame", quality: int, loads: Loads) -> Fraction:
    """Player-invariant payment for choosing `quality` under `loads`.

    Defined for every kind except the player-specific tables and
    per-player oblivious matrices, whose payments are not a function of
    (own quality, loads) alone.
    """
    pf = game.payment
    kind = pf.kind
    if kind is PaymentKind.PROPORTIONAL:
        total = sum((m * f for m, f in zip(loads, game.efforts)), ZERO)
        if total == 0:
            return ZERO
        return game.efforts[quality - 1] / total
    if kind is PaymentKind.EQUAL_SHARING:
        c = normalization_constant(game, "equal_sharing")
        return c * game.efforts[quality - 1] / loads[quality - 1]
    if kind is PaymentKind.KTOP:
        assert pf.K is not None
        if quality <= game.Q - pf.K:
            return ZERO
        c = normalization_constant(game, "ktop")
        return c * game.efforts[quality - 1] / loads[quality - 1]
    if kind is PaymentKind.OBLIVIOUS_TABLE:
        if pf.matrix is None:
            raise PreconditionError(
                "per-player oblivious payments are not player-invariant"
            )
        return pf.matrix[quality - 1][loads[quality - 1] - 1]
    if kind is PaymentKind.PLAYER_INVARIANT_TABLE:
        assert pf.invariant_table is not None
        try:
            return pf.invariant_table[(quality, tuple(loads))]
        except KeyError:
            raise MissingTableEntryError(
                f"no payment for quality {quality} at loads {loads}"
            ) from None
    raise PreconditionError(
        f"{kind.value} payments are not a function of (quality, loads)"
    )


def specific_payment_on_loads(game: "ContestGame", player: int, quality: int,
                              loads: Loads) -> Fraction:
    """Player-specific payment in the (own quality, load vector) key form."""
    pf = game.payment
    if pf.kind is not PaymentKind.PLAYER_SPECIFIC_TABLE or pf.loads_table is None:
        raise PreconditionError(
            "requires a player-specific table keyed by (own quality, load vector)"
        )
    try:
        return pf.loads_table[(player, quality, tuple(loads))]
    except KeyError:
        raise MissingTableEntryError(
            f"no payment for player {player}, quality {quality}, loads {loads}"
        ) from None


class Classification(NamedTuple):
    oblivious: bool
    player_invariant: bool


def classify(game: "ContestGame", cap: int = 10**6) -> Classification:
    """Decide obliviousness and player-invariance by exhaustive check.

    Obliviousness is extensional: payments must agree on every pair of
    profiles giving a player the same own quality and load on it.
    Refuses when the profile space exceeds `cap`.
    """
    n, Q = game.n, game.Q
    if Q**n > cap:
        raise CapExceededError(
            f"classify needs Q^n = {Q**n} profile checks, above the cap {cap}"
        )
    oblivious = True
    invariant = True
    seen: dict[tuple[int, int, Fraction], Fraction] = {}
    for profile in product(range(1, Q + 1), repeat=n):
        loads = _loads(profile, Q)
        pays = [evaluate_payment(game, profile, i) for i in range(1, n + 1)]
        for i in range(1, n + 1):
            own = profile[i - 1]
            key = (i, loads[own - 1], game.efforts[own - 1])
            if seen.setdefault(key, pays[i - 1]) != pays[i - 1]:
                oblivious = False
            for k in range(i + 1, n + 1):
                if profile[k - 1] == own and pays[k - 1] != pays[i - 1]:
                    invariant = False
        if not oblivious and not invariant:
            break
    return Classification(oblivious=oblivious, player_invariant=invariant)


def payout_sum_bound_holds(game: "ContestGame", cap: int = 10**6) -> bool:
    """Exhaustively check the normalization condition: payouts sum to <= 1."""
    n, Q = game.n, game.Q
    if Q**n > cap:
        raise CapExceededError("profile space above cap")
    for profile in product(range(1, Q + 1), repeat=n):
        total = sum(
            (evaluate_payment(game, profile, i) for i in range(1, n + 1)), ZERO
        )
        if total > 1:
            return False
    return True
