"""Temperature sweeps, critical curves, and saddle-node/pitchfork analysis.

Everything here leans on one geometric fact from :mod:`boltzq.restpoints`:
rest points are intersections of the line ``(u - b)/a`` with the response
curve ``g(u)``, so rest points appear or vanish exactly where the line is
*tangent* to g.  The tangent line touching g at u has intercept::

    delta(u) = g(u) - g'(u) * u

and delta is stationary only at u = 0 and at g's single inflection point.
Tangency therefore reduces to the scalar crossing problem
``delta(u) = -b/a`` on at most three monotone pieces, which this module
solves with plain bisection; the touching point's slope then converts to a
critical temperature via ``tx = raw_a * g'(u)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import NotApplicableError, NumericFailureError
from .games import (Game, GameRegionLabel, ReducedCoefficients,
                    _raw_coefficients, classify_region, reduce_payoffs)
from .games import Temperatures
from .numerics import bisect, sigmoid
from .restpoints import (GFunction, RestPoint, count_rest_points,
                         find_rest_points, symmetric_critical_offsets)

#: rest points closer than this in (x, y) are stitched onto the same branch
BRANCH_STITCH_TOL = 0.05

CONTINUOUS = "continuous"
DISCONTINUOUS = "discontinuous"
NO_PITCHFORK = "none"


def tangent_intercept(gf: GFunction, u: float) -> float:
    """Intercept of the line tangent to the response curve at u."""
    g, g1, _ = gf.eval(u)
    return g - g1 * u


def _delta_crossings(gf: GFunction, target: float) -> list[float]:
    """All u with tangent_intercept(gf, u) == target.

    delta is monotone between its stationary points {0, inflection} and
    approaches the curve's saturation values at +-infinity, so each of the
    at-most-three pieces is bisected after expanding to a sign change.
    """
    def h(u: float) -> float:
        return tangent_intercept(gf, u) - target

    knots = sorted({0.0, gf.inflection()})
    left_tail = sigmoid(gf.d) - target
    right_tail = sigmoid(gf.d + gf.c) - target
    crossings: list[float] = []

    def open_piece(knot: float, direction: float, tail_sign: float) -> None:
        v_knot = h(knot)
        if v_knot == 0.0:
            crossings.append(knot)
            return
        if tail_sign == 0.0 or (tail_sign > 0.0) == (v_knot > 0.0):
            return
        step = 1.0
        probe = knot + direction * step
        for _ in range(200):
            v_probe = h(probe)
            if (v_probe > 0.0) != (v_knot > 0.0):
                lo, hi = sorted((knot, probe))
                crossings.append(bisect(h, lo, hi, h(lo), h(hi)))
                return
            step *= 2.0
            probe = knot + direction * step
        # The sign flip lives beyond any float bracket: no usable crossing.

    open_piece(knots[0], -1.0, left_tail)
    if len(knots) == 2:
        va, vb = h(knots[0]), h(knots[1])
        if va == 0.0:
            pass  # already appended by open_piece
        elif vb == 0.0:
            crossings.append(knots[1])
        elif (va > 0.0) != (vb > 0.0):
            crossings.append(bisect(h, knots[0], knots[1], va, vb))
    open_piece(knots[-1], +1.0, right_tail)
    return sorted(set(crossings))


@dataclass(frozen=True)
class InterceptProfile:
    """Extreme tangent intercepts of the response curve over u and ty.

    ``delta_min``/``delta_max`` are ``None`` with the matching unbounded
    flag set when the corresponding extreme diverges (it does so in the
    opponent's zero-exploration limit for some ratio ranges); documented
    saturation limits (0, 1/2, 1) are reported exactly.
    """

    ratio: float
    samples: list[tuple[float, float, float, float]]  # (ty, u0, delta(u0), delta(0))
    delta_min: Optional[float]
    delta_max: Optional[float]
    min_unbounded: bool = False
    max_unbounded: bool = False


def intercept_extrema(raw_c: float, raw_d: float, ty_min: float = 1e-4,
                      ty_max: float = 1e3, ty_steps: int = 121) -> InterceptProfile:
    """Scan the tangent-intercept range of g over a log grid of ty.

    The per-ty extrema sit at u = 0, at the inflection point, or at the
    saturation tails, so only those candidates are evaluated.  The sign of
    ``raw_c`` is normalized away by relabeling actions (ratio -> -1-ratio),
    which leaves the intercept geometry unchanged.
    """
    if raw_c == 0.0:
        raise NotApplicableError("intercept profile needs c != 0")
    if raw_c < 0.0:
        raw_c, raw_d = -raw_c, raw_c + raw_d
    ratio = raw_d / raw_c

    samples = []
    num_min, num_max = math.inf, -math.inf
    for ty in np.geomspace(ty_min, ty_max, ty_steps):
        gf = GFunction(raw_c / ty, raw_d / ty)
        u0 = gf.inflection()
        d_u0 = tangent_intercept(gf, u0)
        d_zero = tangent_intercept(gf, 0.0)
        tails = (sigmoid(gf.d), sigmoid(gf.d + gf.c))
        num_min = min(num_min, d_u0, d_zero, *tails)
        num_max = max(num_max, d_u0, d_zero, *tails)
        samples.append((float(ty), u0, d_u0, d_zero))

    min_unbounded = -1.0 <= ratio < -0.5
    max_unbounded = -0.5 < ratio <= 0.0
    if ratio == -0.5:
        delta_min, delta_max = 0.0, 1.0
    elif min_unbounded:
        delta_min, delta_max = None, 1.0
    elif max_unbounded:
        delta_min, delta_max = 0.0, None
    elif ratio < -1.0:
        delta_min, delta_max = num_min, 0.5
    else:  # ratio > 0
        delta_min, delta_max = 0.5, num_max
    return InterceptProfile(ratio=ratio, samples=samples,
                            delta_min=delta_min, delta_max=delta_max,
                            min_unbounded=min_unbounded,
                            max_unbounded=max_unbounded)


@lru_cache(maxsize=256)
def corner_boundary(ratio: float) -> float:
    """Lowest reachable tangent intercept for a ratio d/c <= -1.

    This is the numeric boundary of the triple-rest-point region in the
    corner quadrants of the ratio plane: triples exist there only while
    ``-b/a`` exceeds this value.  Cached per ratio; the extremum always
    lies at an interior ty, so a fixed log grid suffices.
    """
    profile = intercept_extrema(1.0, ratio)
    if profile.delta_min is None:
        return -math.inf
    return profile.delta_min


@dataclass(frozen=True)
class CriticalCurve:
    """Per fixed opposite-player temperature, the window of the swept
    temperature carrying three rest points; empty entries mean no window."""

    orientation: str  # "tx_window_vs_ty" or "ty_window_vs_tx"
    samples: list[tuple[float, Optional[float], Optional[float]]]
    closing_temperature: Optional[float]
    diagnostics: list[str] = field(default_factory=list)


def _normalized_raws(game: Game) -> tuple[float, float, float, float]:
    raw_a, raw_b, raw_c, raw_d = _raw_coefficients(game)
    if raw_a * raw_c <= 0.0:
        raise NotApplicableError(
            "critical windows require a*c > 0 (otherwise the rest point is "
            "always unique)")
    if raw_a < 0.0:
        # Relabel both players' view of X's actions: x -> 1-x flips the
        # slopes' signs and leaves every temperature window unchanged.
        raw_a, raw_b = -raw_a, -raw_b
        raw_c, raw_d = -raw_c, raw_c + raw_d
    return raw_a, raw_b, raw_c, raw_d


def _window_for_ty(raws: tuple[float, float, float, float],
                   ty: float) -> Optional[tuple[float, float]]:
    """The tx interval with three rest points at fixed ty, if any."""
    raw_a, raw_b, raw_c, raw_d = raws
    gf = GFunction(raw_c / ty, raw_d / ty)
    target = -raw_b / raw_a
    candidates = sorted(raw_a * gf.eval(u)[1]
                        for u in _delta_crossings(gf, target))
    candidates = [t for t in candidates if t > 0.0]
    if len(candidates) < 2:
        return None

    base = ReducedCoefficients.from_values(raw_a, raw_b, raw_c, raw_d)

    def count_at(tx: float) -> int:
        return count_rest_points(base.at_temperatures(tx, ty))

    windows = []
    for t_lo, t_hi in zip(candidates, candidates[1:]):
        if count_at(math.sqrt(t_lo * t_hi)) == 3:
            windows.append((t_lo, t_hi))
    if not windows:
        return None
    return (min(w[0] for w in windows), max(w[1] for w in windows))


def critical_curve(game: Game, fixed_values,
                   orientation: str = "tx_window_vs_ty") -> CriticalCurve:
    """Trace the three-rest-point temperature window across a grid.

    For ``tx_window_vs_ty`` each grid value fixes ty and the window in tx
    is found by solving the tangency system {rest-point equation,
    a*g'(u) = 1}: its solutions are the crossings ``delta(u) = -b/a``, and
    each converts to a temperature ``tx = raw_a * g'(u)``.  Candidate
    windows are verified by integer root counts at their midpoints.  The
    closing temperature (where the window width reaches zero) is bisected
    to 1e-6 when the grid brackets it.
    """
    if orientation == "ty_window_vs_tx":
        swapped = Game(game.name + "_swapped", game.payoff_y, game.payoff_x)
        inner = critical_curve(swapped, fixed_values, "tx_window_vs_ty")
        return CriticalCurve("ty_window_vs_tx", inner.samples,
                             inner.closing_temperature, inner.diagnostics)
    if orientation != "tx_window_vs_ty":
        raise ValueError(f"unknown orientation {orientation!r}")

    raws = _normalized_raws(game)
    samples: list[tuple[float, Optional[float], Optional[float]]] = []
    diagnostics: list[str] = []
    for ty in fixed_values:
        try:
            window = _window_for_ty(raws, float(ty))
        except (NumericFailureError, OverflowError) as exc:
            diagnostics.append(f"ty={ty}: {exc}")
            samples.append((float(ty), None, None))
            continue
        if window is None:
            samples.append((float(ty), None, None))
        else:
            samples.append((float(ty), window[0], window[1]))

    closing = None
    have = [s[0] for s in samples if s[1] is not None]
    lack = [s[0] for s in samples if s[1] is None]
    if have and lack and max(have) < max(lack):
        lo = max(have)
        hi = min(t for t in lack if t > lo)

        def exists(ty: float) -> float:
            try:
                return 1.0 if _window_for_ty(raws, ty) is not None else -1.0
            except (NumericFailureError, OverflowError):
                return -1.0

        while hi - lo > 1e-6:
            mid = 0.5 * (lo + hi)
            if exists(mid) > 0.0:
                lo = mid
            else:
                hi = mid
        closing = 0.5 * (lo + hi)
    return CriticalCurve("tx_window_vs_ty", samples, closing, diagnostics)


def zero_exploration_window(b_over_a: float, d_over_c: float,
                            raw_a: float) -> tuple[float, float, float]:
    """Closed-form window endpoints in the opponent's zero-noise limit.

    As ty -> 0 the response curve becomes a unit step at
    ``u_step = ln(-d/(c+d))`` (from the ratio alone), and the tangency
    lines pass through the step's corners, giving::

        tx_lo = (raw_a / u_step) * (b/a)
        tx_hi = (raw_a / u_step) * (b/a + 1)

    Applicable for b/a > 0 with -1 < d/c < -1/2, or the mirrored region
    b/a < -1 with -1/2 < d/c < 0 (handled by relabeling both players'
    actions, which maps ratios r -> -1 - r and keeps raw_a).
    """
    if raw_a <= 0.0:
        raise NotApplicableError("raw slope must be positive; relabel first")
    beta, ratio = b_over_a, d_over_c
    if beta < -1.0 and -0.5 < ratio < 0.0:
        beta, ratio = -1.0 - beta, -1.0 - ratio
    if not (beta > 0.0 and -1.0 < ratio < -0.5):
        raise NotApplicableError(
            f"zero-noise window formulas need b/a > 0 and d/c in (-1, -1/2) "
            f"(or the mirror); got b/a={b_over_a}, d/c={d_over_c}")
    u_step = math.log(-ratio / (1.0 + ratio))
    return u_step, (raw_a / u_step) * beta, (raw_a / u_step) * (beta + 1.0)


def locate_cusp() -> tuple[float, float]:
    """Where the two symmetric saddle-node offset branches meet.

    Bisects the branch separation ``b_plus(a) - b_minus(a)`` down to the
    slope where the branches cease to exist; at the meeting point the
    symmetric equation has a triple root.
    """
    def separation(a: float) -> Optional[float]:
        try:
            b_lo, b_hi = symmetric_critical_offsets(a)
        except NotApplicableError:
            return None
        return b_hi - b_lo

    lo, hi = 2.0, 8.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        sep = separation(mid)
        if sep is not None and sep >= 0.0:
            hi = mid
        else:
            lo = mid
    a_star = hi
    b_lo, b_hi = symmetric_critical_offsets(a_star)
    return a_star, 0.5 * (b_lo + b_hi)


@dataclass(frozen=True)
class BifurcationDiagram:
    """Rest-point branches against a swept temperature."""

    axis: str
    fixed_value: Optional[float]
    branches: list[list[tuple[float, RestPoint]]]
    critical_temperatures: list[float]
    pitchfork_kind: Optional[str]


def _stitch_branches(solved: list[tuple[float, list[RestPoint]]]
                     ) -> list[list[tuple[float, RestPoint]]]:
    branches: list[list[tuple[float, RestPoint]]] = []
    for temp, points in solved:
        taken = set()
        for pt in points:
            best, best_dist = None, BRANCH_STITCH_TOL
            for idx, branch in enumerate(branches):
                if idx in taken:
                    continue
                last = branch[-1][1]
                dist = math.hypot(last.x - pt.x, last.y - pt.y)
                if dist < best_dist:
                    best, best_dist = idx, dist
            if best is None:
                branches.append([(temp, pt)])
                taken.add(len(branches) - 1)
            else:
                branches[best].append((temp, pt))
                taken.add(best)
    return branches


def _refine_transition(base: ReducedCoefficients, t_lo: float, t_hi: float,
                       rel_tol: float = 1e-8) -> float:
    """Bisect the temperature where the rest-point count flips."""
    n_lo = count_rest_points(base.at_temperatures(t_lo, t_lo))
    while (t_hi - t_lo) > rel_tol * t_hi:
        mid = math.sqrt(t_lo * t_hi)
        if count_rest_points(base.at_temperatures(mid, mid)) == n_lo:
            t_lo = mid
        else:
            t_hi = mid
    return 0.5 * (t_lo + t_hi)


def _separation_kind(base: ReducedCoefficients, t_c: float) -> Optional[str]:
    """Continuous vs disconnected branch collapse, judged 1e-4 below t_c."""
    eps = min(1e-4, 0.5 * t_c)
    below = find_rest_points(base.at_temperatures(t_c - eps, t_c - eps),
                             fd_check=False)
    above = find_rest_points(base.at_temperatures(t_c + eps, t_c + eps),
                             fd_check=False)
    if len(below) != 3 or len(above) != 1:
        return None
    survivor = above[0]
    dists = [math.hypot(p.x - survivor.x, p.y - survivor.y) for p in below]
    max_sep = max(math.hypot(p.x - q.x, p.y - q.y)
                  for p in below for q in below)
    if max_sep < 0.05:
        return CONTINUOUS
    vanishing = sorted(dists)[1:]  # all but the continuing branch
    if min(vanishing) > 0.1:
        return DISCONTINUOUS
    return None


def sweep_equal_temperature(game: Game, t_min: float, t_max: float,
                            steps: int = 80) -> BifurcationDiagram:
    """Rest-point branches along tx = ty = T on a log-spaced grid.

    Grid cells where the root count flips are refined twice at 10x local
    resolution, then the saddle-node temperatures are bisected to 1e-8
    relative.  Branches are stitched by nearest-neighbor continuation, and
    the collapse at the largest critical temperature is labeled continuous
    or discontinuous from the branch separations just below it.
    """
    if not 0.0 < t_min < t_max:
        raise ValueError("need 0 < t_min < t_max")
    base = reduce_payoffs(game, Temperatures.equal(1.0))
    temps = list(np.geomspace(t_min, t_max, steps))

    def solve(temp: float) -> list[RestPoint]:
        return find_rest_points(base.at_temperatures(temp, temp))

    def fastest_move(pts_a, pts_b) -> float:
        if len(pts_a) != len(pts_b):
            return math.inf
        return max(min(math.hypot(p.x - q.x, p.y - q.y) for q in pts_b)
                   for p in pts_a)

    solved = {t: solve(t) for t in temps}
    for _ in range(2):  # two levels of local 10x refinement
        grid = sorted(solved)
        extra: list[float] = []
        for t0, t1 in zip(grid, grid[1:]):
            # refine where the count flips, and where branches move faster
            # than the stitching threshold (steep run-up to a collapse)
            if fastest_move(solved[t0], solved[t1]) > 0.8 * BRANCH_STITCH_TOL:
                extra.extend(np.geomspace(t0, t1, 12)[1:-1])
        for t in extra:
            solved[t] = solve(t)

    grid = sorted(solved)
    criticals = [
        _refine_transition(base, t0, t1)
        for t0, t1 in zip(grid, grid[1:])
        if len(solved[t0]) != len(solved[t1])
    ]

    kind = _separation_kind(base, max(criticals)) if criticals else None

    return BifurcationDiagram(
        axis="equal_temperature", fixed_value=None,
        branches=_stitch_branches([(t, solved[t]) for t in grid]),
        critical_temperatures=criticals,
        pitchfork_kind=kind)


def classify_pitchfork(game: Game) -> str:
    """Closed-form pitchfork taxonomy for the equal-temperature sweep.

    The branch collapse is continuous exactly when the two raw slopes are
    equal and the ratios satisfy the symmetric-collapse relation
    (b/a + d/c = -1 for coordination games, b/a = d/c for
    anti-coordination); other three-equilibrium games collapse
    discontinuously, and games outside the unit ratio box never bifurcate
    under a shared temperature.
    """
    coeffs = reduce_payoffs(game, Temperatures.equal(1.0))
    if classify_region(coeffs).label != GameRegionLabel.MULTI_NE_TRIPLE_POSSIBLE:
        return NO_PITCHFORK
    scale = max(1.0, abs(coeffs.raw_a), abs(coeffs.raw_c))
    if abs(coeffs.raw_a - coeffs.raw_c) > 1e-9 * scale:
        return DISCONTINUOUS
    beta, delta = coeffs.b_over_a, coeffs.d_over_c
    if coeffs.raw_a > 0.0:
        symmetric = abs(beta + delta + 1.0) <= 1e-9
    else:
        symmetric = abs(beta - delta) <= 1e-9
    return CONTINUOUS if symmetric else DISCONTINUOUS
