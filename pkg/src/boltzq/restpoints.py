"""Interior rest points of the two-action learning flow, with stability.

Interior rest points in logit coordinates u = ln(x/(1-x)), v = ln(y/(1-y))
satisfy the pair ``u = b + a*sigma(v)``, ``v = d + c*sigma(u)``.  Eliminating
v leaves a scalar equation: the line ``(u - b)/a`` must meet the response
curve::

    g(u) = sigma(d + c * sigma(u))

g is a sigmoid-of-sigmoid: strictly monotone (rising iff c > 0), bounded in
(0, 1), with exactly one inflection point.  Consequently the defect
``phi(u) = u - b - a*g(u)`` has at most two stationary points, so the flow
has one, two (only at a tangency) or three interior rest points, and every
root can be bracketed on a monotone segment.  That structure drives the
solver below; no dense scanning is ever needed.

Stability falls out of the same picture: at a rest point the Jacobian of
the (x, y) flow is ``[[-1, a x(1-x)], [c y(1-y), -1]]`` with eigenvalues
``-1 +- sqrt(a c x(1-x) y(1-y))``, and the radicand equals a*c times the
slope product, so a middle root (where the line crosses g from above) is
exactly the saddle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import DomainError, NotApplicableError, NumericFailureError
from .games import Game, ReducedCoefficients, _raw_coefficients
from .numerics import bisect, logit, sigmoid, sigmoid_slope

#: two roots closer than this in u are flagged as a tangency pair
TANGENCY_PAIR_TOL = 1e-7
#: |phi| at a stationary point below this (scaled by max(1,|a|)) is a tangency
TANGENCY_DETECT_TOL = 1e-9
#: eigenvalue formula must agree with the finite-difference Jacobian to this
FD_EIGEN_TOL = 1e-6

STABLE_NODE = "stable_node"
STABLE_SPIRAL = "stable_spiral"
SADDLE_UNSTABLE = "saddle_unstable"


@dataclass(frozen=True)
class GFunction:
    """The response curve g(u) = sigma(d + c*sigma(u)) and its derivatives."""

    c: float
    d: float

    def value(self, u: float) -> float:
        return sigmoid(self.d + self.c * sigmoid(u))

    def eval(self, u: float) -> tuple[float, float, float]:
        """(g, g', g'') at u, overflow-safe for any |u| the floats carry.

        Derivatives are assembled from bounded products g(1-g) and s(1-s)
        rather than the cosh/sinh closed forms, so nothing overflows:

            g'  = c * g(1-g) * s(1-s)
            g'' = g' * [c*(1-2g)*s*(1-s) + (1-2s)]      with s = sigma(u)
        """
        s = sigmoid(u)
        sq = s * sigmoid(-u)
        h = self.d + self.c * s
        g = sigmoid(h)
        gq = g * sigmoid(-h)
        g1 = self.c * gq * sq
        g2 = g1 * (self.c * (1.0 - 2.0 * g) * sq + (1.0 - 2.0 * s))
        return g, g1, g2

    def slope_shape(self, u: float) -> float:
        """g(1-g)*s(1-s) = g'(u)/c; the quantity whose peak bounds tangency."""
        s = sigmoid(u)
        h = self.d + self.c * s
        return sigmoid(h) * sigmoid(-h) * s * sigmoid(-u)

    def inflection(self) -> float:
        """The unique zero of g''.

        g'' vanishes with ``F(u) = c*tanh(d/2 + (c/2)*sigma(u)) + 2*sinh(u)``,
        which is strictly increasing, so plain bisection is safe.  The zero
        lies within |u| <= asinh(|c|/2) + 1 where the sinh term dominates.
        """
        c, d = self.c, self.d

        def f(u: float) -> float:
            return c * math.tanh(0.5 * d + 0.5 * c * sigmoid(u)) + 2.0 * math.sinh(u)

        span = math.asinh(0.5 * abs(c)) + 1.0
        return bisect(f, -span, span, f(-span), f(span))


@dataclass(frozen=True)
class RestPoint:
    """An interior fixed point of the learning flow."""

    x: float
    y: float
    u: float
    v: float
    eigenvalues: tuple[complex, complex]
    stability: str
    residual: float
    degenerate_pair: bool = False


def _classify(radicand: float) -> str:
    if radicand < 0.0:
        return STABLE_SPIRAL
    if radicand > 1.0:
        return SADDLE_UNSTABLE
    return STABLE_NODE


def _eigenvalues_from_logit(u: float, v: float,
                            coeffs: ReducedCoefficients) -> tuple[complex, complex, float]:
    xq = sigmoid_slope(u)
    yq = sigmoid_slope(v)
    rad = coeffs.a * coeffs.c * xq * yq
    root = cmath.sqrt(rad)
    return (-1.0 + root, -1.0 - root, rad)


def _fd_jacobian(u: float, v: float, coeffs: ReducedCoefficients):
    """Central finite-difference Jacobian of the flow at a rest point.

    Differencing happens in logit coordinates, where the field
    ``(a*sigma(v) + b - u, c*sigma(u) + d - v)`` is globally smooth; at a
    rest point that Jacobian is diagonally similar to the strategy-space
    one (similarity diag(x(1-x), y(1-y))), so both have identical
    eigenvalues.  Steps balance rounding against curvature per column,
    ``h ~ (eps/sigma'(w))**(1/3)``, which keeps the relative error of the
    tiny cross entries under control even when a rest point sits
    exponentially close to a simplex corner.  Returns None if a slope
    underflows outright (no representable step).
    """
    a, b, c, d = coeffs.a, coeffs.b, coeffs.c, coeffs.d

    def field(uu: float, vv: float) -> tuple[float, float]:
        return (a * sigmoid(vv) + b - uu, c * sigmoid(uu) + d - vv)

    su = sigmoid_slope(u)
    sv = sigmoid_slope(v)
    if su == 0.0 or sv == 0.0:
        return None
    hu = min(0.05, max(1e-6, (6.6e-16 / su) ** (1.0 / 3.0)))
    hv = min(0.05, max(1e-6, (6.6e-16 / sv) ** (1.0 / 3.0)))
    f1p, f2p = field(u + hu, v)
    f1m, f2m = field(u - hu, v)
    j11 = (f1p - f1m) / (2.0 * hu)
    j21 = (f2p - f2m) / (2.0 * hu)
    f1p, f2p = field(u, v + hv)
    f1m, f2m = field(u, v - hv)
    j12 = (f1p - f1m) / (2.0 * hv)
    j22 = (f2p - f2m) / (2.0 * hv)
    return j11, j12, j21, j22


def _eig2(j11, j12, j21, j22) -> tuple[complex, complex]:
    half_tr = 0.5 * (j11 + j22)
    det = j11 * j22 - j12 * j21
    root = cmath.sqrt(half_tr * half_tr - det)
    return (half_tr + root, half_tr - root)


def _sorted_pair(pair):
    return tuple(sorted(pair, key=lambda z: (z.real, z.imag)))


def _check_fd_agreement(u, v, coeffs, eig_pair) -> None:
    entries = _fd_jacobian(u, v, coeffs)
    if entries is None:
        return
    fd_pair = _sorted_pair(_eig2(*entries))
    an_pair = _sorted_pair(eig_pair)
    err = max(abs(f - a) for f, a in zip(fd_pair, an_pair))
    if err > FD_EIGEN_TOL:
        raise NumericFailureError(
            f"eigenvalue formula disagrees with finite-difference Jacobian "
            f"by {err:.3e} at u={u}, v={v}", residuals=err)


def stability_eigenvalues(point, coeffs: ReducedCoefficients,
                          residual_tol: float = 1e-8) -> tuple[complex, complex]:
    """Jacobian eigenvalues ``-1 +- sqrt(a c x(1-x) y(1-y))`` at a rest point.

    ``point`` is an (x, y) pair that must already be a rest point (both
    bracket terms below ``residual_tol``); otherwise :class:`DomainError`.
    The closed form is cross-checked against a finite-difference Jacobian
    to 1e-6 on every call.
    """
    x, y = point
    if not (0.0 < x < 1.0 and 0.0 < y < 1.0):
        raise DomainError(f"rest point must be interior, got {point}")
    u, v = logit(x), logit(y)
    bracket_x = coeffs.a * y + coeffs.b - u
    bracket_y = coeffs.c * x + coeffs.d - v
    if max(abs(bracket_x), abs(bracket_y)) > residual_tol:
        raise DomainError(
            f"point {point} is not a rest point: residual "
            f"{max(abs(bracket_x), abs(bracket_y)):.3e} > {residual_tol}")
    lam1, lam2, _ = _eigenvalues_from_logit(u, v, coeffs)
    _check_fd_agreement(u, v, coeffs, (lam1, lam2))
    return (lam1, lam2)


def _refine_root(f: Callable[[float], float], df: Callable[[float], float],
                 lo: float, hi: float, flo: float, fhi: float,
                 target: float) -> float:
    """Bracketed Newton with bisection fallback; converges to |f| <= target
    or to the bracket's float resolution."""
    u = 0.5 * (lo + hi)
    fu = f(u)
    for _ in range(120):
        if abs(fu) <= target:
            return u
        if (fu > 0.0) == (fhi > 0.0):
            hi, fhi = u, fu
        else:
            lo, flo = u, fu
        width = hi - lo
        if width <= 8.0 * math.ulp(max(abs(lo), abs(hi), 1.0)):
            return u
        d = df(u)
        step_ok = False
        if d != 0.0:
            un = u - fu / d
            if lo < un < hi:
                u, step_ok = un, True
        if not step_ok:
            u = 0.5 * (lo + hi)
        fu = f(u)
    return u


def _expand_until(pred: Callable[[float], bool], start: float,
                  direction: float) -> float:
    """First point in `direction` from `start` where pred holds."""
    step = 1.0
    for _ in range(200):
        probe = start + direction * step
        if pred(probe):
            return probe
        step *= 2.0
    raise NumericFailureError("bracket expansion failed")  # pragma: no cover


def _solve_u_roots(a: float, b: float, gf: GFunction,
                   c: float) -> tuple[list[float], list[bool]]:
    """All u-roots of phi(u) = u - b - a*g(u), with tangency flags."""
    if a == 0.0:
        return [b], [False]

    def phi(u: float) -> float:
        return u - b - a * gf.value(u)

    def dphi(u: float) -> float:
        _, g1, _ = gf.eval(u)
        return 1.0 - a * g1

    lo, hi = (b, b + a) if a > 0.0 else (b + a, b)
    flo, fhi = phi(lo), phi(hi)
    # Analytically phi(lo) < 0 < phi(hi) always (g stays inside (0,1));
    # restore the sign when saturation rounding has destroyed it, which
    # parks the root at the endpoint to float resolution.
    if flo >= 0.0:
        flo = -5e-324
    if fhi <= 0.0:
        fhi = 5e-324
    target = max(1e-15, min(5e-13, 5e-13 * abs(a)))

    ac = a * c
    stationary: list[float] = []
    if ac > 0.0:
        u_peak = gf.inflection()
        shape = gf.slope_shape  # g'(u)/c; phi' = 1 - ac*shape(u)
        if ac * shape(u_peak) > 1.0:
            def excess(u: float) -> float:
                return ac * shape(u) - 1.0

            left = _expand_until(lambda u: excess(u) < 0.0, u_peak, -1.0)
            right = _expand_until(lambda u: excess(u) < 0.0, u_peak, +1.0)
            u_lo = bisect(excess, left, u_peak, excess(left), excess(u_peak))
            u_hi = bisect(excess, u_peak, right, excess(u_peak), excess(right))
            stationary = [u for u in (u_lo, u_hi) if lo < u < hi]

    knots = [lo] + stationary + [hi]
    values = [flo] + [phi(u) for u in stationary] + [fhi]
    roots: list[float] = []
    flags: list[bool] = []
    tang_tol = TANGENCY_DETECT_TOL * max(1.0, abs(a))
    for k in range(len(knots) - 1):
        va, vb = values[k], values[k + 1]
        if va == 0.0 and k > 0:  # tangency exactly at a stationary knot
            continue
        if (va > 0.0) != (vb > 0.0):
            roots.append(_refine_root(phi, dphi, knots[k], knots[k + 1],
                                      va, vb, target))
            flags.append(False)
    # A stationary value within tolerance of zero and not next to a found
    # simple root is a tangency: report the double root once, flagged.
    for u_s, v_s in zip(stationary, values[1:-1]):
        if abs(v_s) <= tang_tol:
            if not any(abs(u_s - r) <= 1e-6 * max(1.0, abs(u_s)) for r in roots):
                roots.append(u_s)
                flags.append(True)
    order = sorted(range(len(roots)), key=lambda i: roots[i])
    roots = [roots[i] for i in order]
    flags = [flags[i] for i in order]
    # Near-tangency pairs: keep both roots but flag them.
    for i in range(len(roots) - 1):
        if roots[i + 1] - roots[i] < TANGENCY_PAIR_TOL:
            flags[i] = flags[i + 1] = True
    return roots, flags


def find_rest_points(coeffs: ReducedCoefficients,
                     fd_check: bool = True) -> list[RestPoint]:
    """All interior rest points at the given coefficients, sorted by u.

    Roots are bracketed on the monotone segments of the defect function
    (delimited by the at-most-two solutions of ``a*g'(u) = 1``), refined by
    safeguarded Newton to ``|u - b - a*g(u)| < ~1e-12*|a|``, and back-
    substituted through ``v = d + c*sigma(u)``.  Stability comes from the
    eigenvalue closed form; with ``fd_check`` each point is also validated
    against a finite-difference Jacobian (turn off only in bulk counting).
    """
    a, b, c, d = coeffs.a, coeffs.b, coeffs.c, coeffs.d
    gf = GFunction(c, d)
    roots, flags = _solve_u_roots(a, b, gf, c)
    points = []
    for u, degenerate in zip(roots, flags):
        v = d + c * sigmoid(u)
        x, y = sigmoid(u), sigmoid(v)
        lam1, lam2, rad = _eigenvalues_from_logit(u, v, coeffs)
        if fd_check:
            _check_fd_agreement(u, v, coeffs, (lam1, lam2))
        residual = abs(a * sigmoid(v) + b - u)
        points.append(RestPoint(x=x, y=y, u=u, v=v,
                                eigenvalues=(lam1, lam2),
                                stability=_classify(rad),
                                residual=residual,
                                degenerate_pair=degenerate))
    return points


def count_rest_points(coeffs: ReducedCoefficients) -> int:
    """Number of interior rest points (no stability work; for sweeps)."""
    roots, _ = _solve_u_roots(coeffs.a, coeffs.b,
                              GFunction(coeffs.c, coeffs.d), coeffs.c)
    return len(roots)


def solve_symmetric(a: float, b: float) -> list[float]:
    """Roots x in (0,1) of ``a*x + b = ln(x/(1-x))``, sorted ascending.

    This is the diagonal restriction (x = y, equal temperatures, symmetric
    game) of the general rest-point equation; the same monotone-segment
    bracketing applies with the response curve replaced by sigma itself.
    At an exact tangency the double root is reported once (count 2).
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("coefficients must be finite")

    def phi(u: float) -> float:
        return u - b - a * sigmoid(u)

    def dphi(u: float) -> float:
        return 1.0 - a * sigmoid_slope(u)

    if a == 0.0:
        return [sigmoid(b)]
    lo, hi = (b, b + a) if a > 0.0 else (b + a, b)
    flo, fhi = phi(lo), phi(hi)
    if flo >= 0.0:  # analytic endpoint signs, as in the general solver
        flo = -5e-324
    if fhi <= 0.0:
        fhi = 5e-324
    target = max(1e-15, min(5e-13, 5e-13 * abs(a)))

    stationary: list[float] = []
    if a > 4.0:
        u_c = 2.0 * math.acosh(0.5 * math.sqrt(a))  # sigma'(u) = 1/a
        stationary = [u for u in (-u_c, u_c) if lo < u < hi]
    knots = [lo] + stationary + [hi]
    values = [flo] + [phi(u) for u in stationary] + [fhi]
    roots: list[float] = []
    tang_tol = TANGENCY_DETECT_TOL * max(1.0, abs(a))
    for k in range(len(knots) - 1):
        va, vb = values[k], values[k + 1]
        if va == 0.0 and k > 0:
            continue
        if (va > 0.0) != (vb > 0.0):
            roots.append(_refine_root(phi, dphi, knots[k], knots[k + 1],
                                      va, vb, target))
    for u_s, v_s in zip(stationary, values[1:-1]):
        if abs(v_s) <= tang_tol:
            if not any(abs(u_s - r) <= 1e-6 * max(1.0, abs(u_s)) for r in roots):
                roots.append(u_s)
    return sorted(sigmoid(u) for u in roots)


def symmetric_critical_offsets(a: float) -> tuple[float, float]:
    """The offsets (b_minus, b_plus) bounding the three-root band at slope a.

    On the symmetric diagonal the equation ``a*x + b = ln(x/(1-x))`` has
    three solutions exactly for ``b_minus < b < b_plus``; the tangency
    points are x = (1 +- sqrt(1 - 4/a))/2, which exist only for a >= 4.
    Both offsets equal -2 at a = 4 (the cusp).
    """
    if a < 4.0:
        raise NotApplicableError(
            f"three symmetric rest points require a >= 4, got a = {a}")
    alpha = math.sqrt(a * (a - 4.0))
    a_plus = a + alpha
    a_minus = 4.0 * a / a_plus  # = a - alpha without cancellation
    ratio = math.log(a_minus / a_plus)
    b_plus = ratio - 0.5 * a_minus
    b_minus = -ratio - 0.5 * a_plus
    return b_minus, b_plus


@dataclass(frozen=True)
class TangencyDiagnostics:
    """Criticality indicators for the line-tangent-to-response-curve test."""

    ac: float
    bound_met: bool  # interior tangency requires ac >= 16
    logit_residual: Callable[[float], float] = field(repr=False)
    strategy_residual: Callable[[float, float], float] = field(repr=False)


def tangency_conditions(coeffs: ReducedCoefficients) -> TangencyDiagnostics:
    """Diagnostics for saddle-node criticality at equal sensitivity.

    ``logit_residual(u)`` evaluates ``ac - 4cosh^2(u/2)/(g(1-g))`` (zero at
    a critical point); ``strategy_residual(x, y)`` is the same test in the
    original variables, ``ac - 1/(x(1-x)y(1-y))``.  Since the slope product
    never exceeds 1/16, criticality needs ``ac >= 16``.
    """
    ac = coeffs.a * coeffs.c
    gf = GFunction(coeffs.c, coeffs.d)

    def logit_residual(u: float) -> float:
        shape = gf.slope_shape(u)
        if shape == 0.0:
            return -math.inf
        return ac - 1.0 / shape

    def strategy_residual(x: float, y: float) -> float:
        prod = x * (1.0 - x) * y * (1.0 - y)
        if prod == 0.0:
            return -math.inf
        return ac - 1.0 / prod

    return TangencyDiagnostics(ac=ac, bound_met=bool(ac >= 16.0),
                               logit_residual=logit_residual,
                               strategy_residual=strategy_residual)


def _newton_2d(residual, seed, max_iter=60, tol=1e-11):
    """Damped Newton on a 2-vector residual with FD Jacobian; returns the
    solution or None."""
    u, t = seed
    r1, r2 = residual(u, t)
    norm = max(abs(r1), abs(r2))
    for _ in range(max_iter):
        if norm < tol:
            return u, t
        hu = 1e-7 * max(1.0, abs(u))
        ht = 1e-7 * max(1e-3, abs(t))
        r1u, r2u = residual(u + hu, t)
        r1t, r2t = residual(u, t + ht)
        j11 = (r1u - r1) / hu
        j21 = (r2u - r2) / hu
        j12 = (r1t - r1) / ht
        j22 = (r2t - r2) / ht
        det = j11 * j22 - j12 * j21
        if det == 0.0 or not math.isfinite(det):
            return None
        du = -(r1 * j22 - r2 * j12) / det
        dt = -(j11 * r2 - j21 * r1) / det
        lam = 1.0
        for _ in range(12):
            un, tn = u + lam * du, t + lam * dt
            if tn > 0.0:
                n1, n2 = residual(un, tn)
                new_norm = max(abs(n1), abs(n2))
                if math.isfinite(new_norm) and new_norm < norm:
                    u, t, r1, r2, norm = un, tn, n1, n2, new_norm
                    break
            lam *= 0.5
        else:
            return None
    return (u, t) if norm < tol else None


def equal_temperature_criticals(game: Game) -> Optional[list[tuple[float, float]]]:
    """Critical shared temperatures of a game run at tx = ty = T.

    Solves the simultaneous pair {rest-point equation, line tangency} in
    (u, T) by damped Newton from a coarse seed grid.  Each solution is a
    saddle-node location on the T axis and is kept only if the rest-point
    count actually flips across it.  Returns the sorted list of (T, u)
    pairs, or ``None`` when the game's ratios fall outside the open unit
    box (equal-temperature multiplicity is impossible there).
    """
    raw_a, raw_b, raw_c, raw_d = _raw_coefficients(game)
    if raw_a == 0.0 or raw_c == 0.0 or raw_a * raw_c < 0.0:
        return None
    beta = raw_b / raw_a
    delta = raw_d / raw_c
    if not (-1.0 < beta < 0.0 and -1.0 < delta < 0.0):
        return None

    def residual(u: float, t: float):
        gf = GFunction(raw_c / t, raw_d / t)
        g, g1, _ = gf.eval(u)
        return ((t * u - raw_b) / raw_a - g, (raw_a / t) * g1 - 1.0)

    t_max = math.sqrt(raw_a * raw_c) / 4.0  # tangency impossible above this
    seeds = []
    for k in range(24):
        t = t_max * math.exp(-0.35 * k)
        a_t, b_t = raw_a / t, raw_b / t
        u_lo, u_hi = sorted((b_t, b_t + a_t))
        for m in range(1, 16):
            seeds.append((u_lo + (u_hi - u_lo) * m / 16.0, t))

    found: list[tuple[float, float]] = []
    best_norm = math.inf
    for seed in seeds:
        sol = _newton_2d(residual, seed)
        if sol is None:
            r = residual(*seed)
            best_norm = min(best_norm, max(abs(r[0]), abs(r[1])))
            continue
        u, t = sol
        if not (0.0 < t <= t_max * (1.0 + 1e-9)):
            continue
        if any(abs(t - t0) <= 1e-6 * max(t, t0) for t0, _ in found):
            continue
        eps = max(1e-9, 1e-6 * t)
        coeffs = ReducedCoefficients.from_values(
            raw_a, raw_b, raw_c, raw_d).at_temperatures(t - eps, t - eps)
        below = count_rest_points(coeffs)
        above = count_rest_points(coeffs.at_temperatures(t + eps, t + eps))
        if below != above:
            found.append((t, u))
    if not found:
        raise NumericFailureError(
            "tangency system did not converge from any seed",
            residuals=best_norm)
    return sorted(found)
