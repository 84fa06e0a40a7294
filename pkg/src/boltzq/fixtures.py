"""Built-in benchmark games used by the CLI and the test suite.

Payoff convention throughout: row = own action, column = opponent action,
for BOTH players (a symmetric game has identical matrices, no transpose).
"""

from __future__ import annotations

from .errors import GameFormatError
from .games import Game

#: Defection dominant; scaled ratios b/a = d/c = -2, so one globally
#: attracting rest point exists at every exploration-rate pair.
PRISONERS_DILEMMA = Game.from_matrices(
    "prisoners_dilemma", [[3.0, 0.0], [4.0, 2.0]], [[3.0, 0.0], [4.0, 2.0]])

#: Zero-sum; a*c < 0, unique mixed equilibrium at (1/2, 1/2) which stays the
#: rest point at every temperature.
MATCHING_PENNIES = Game.from_matrices(
    "matching_pennies", [[1.0, -1.0], [-1.0, 1.0]], [[-1.0, 1.0], [1.0, -1.0]])

#: Coordination with pure equilibria (1,1), (2,2) and mixed (2/5, 2/5);
#: its temperature sweep shows the disconnected branch collapse.
STAG_HUNT = Game.from_matrices(
    "stag_hunt", [[3.0, 0.0], [0.0, 2.0]], [[3.0, 0.0], [0.0, 2.0]])

#: Anti-coordination (a, c < 0) with mixed equilibrium (1/3, 1/3).
HAWK_DOVE = Game.from_matrices(
    "hawk_dove", [[-2.0, 2.0], [0.0, 1.0]], [[-2.0, 2.0], [0.0, 1.0]])

#: Coordination tuned to the symmetric-collapse conditions (equal raw
#: slopes, ratio sum -1): mixed equilibrium (1/3, 2/3), continuous branch
#: merge at the critical temperature.
BATTLE_COORDINATION = Game.from_matrices(
    "battle_coordination", [[1.0, 0.0], [0.0, 2.0]], [[2.0, 0.0], [0.0, 1.0]])

#: X faces a dominant-action game, Y a coordination game (b/a = 0.1,
#: d/c = -0.8, raw slopes 10).  Single pure equilibrium at (1,1), yet for
#: small ty a window of tx values carries three rest points.
DOMINANT_COORDINATION = Game.from_matrices(
    "dominant_coordination", [[11.0, 1.0], [0.0, 0.0]], [[2.0, 0.0], [0.0, 8.0]])

FIXTURES: dict[str, Game] = {
    g.name: g for g in (
        PRISONERS_DILEMMA, MATCHING_PENNIES, STAG_HUNT, HAWK_DOVE,
        BATTLE_COORDINATION, DOMINANT_COORDINATION)
}


def fixture(name: str) -> Game:
    try:
        return FIXTURES[name]
    except KeyError:
        raise GameFormatError(
            f"unknown fixture {name!r}; available: {', '.join(sorted(FIXTURES))}"
        ) from None
