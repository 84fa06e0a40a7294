"""Discrete stochastic two-agent Q-learning with softmax action selection.

This simulator is the independent cross-check for the continuous flow: two
agents repeatedly play a matrix game, estimate per-action values from
sampled rewards, and follow softmax policies over those values.  Updates
are windowed and off-policy: within one round both policies are frozen,
``batch`` joint actions are sampled, each agent averages the rewards it
actually received per own-action, and then both apply one value update

    Q_i <- Q_i + alpha * (r_bar_i - Q_i)

to the actions they visited (unvisited actions are left untouched).  With
small alpha and large batches the recorded policy trace follows the ODE of
:mod:`boltzq.dynamics` on the rescaled clock t = alpha * round (at unit
temperatures).

All randomness flows through one seeded PCG64 generator; a run is a pure
function of its configuration, and equal seeds give bitwise-equal traces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError
from .games import Game, Temperatures

GENERATOR_ID = "numpy.random.PCG64"


@dataclass(frozen=True)
class AgentState:
    """Per-action value estimates plus the agent's fixed hyperparameters."""

    qvals: tuple[float, ...]
    temp: float
    alpha: float

    def __post_init__(self):
        if not all(math.isfinite(q) for q in self.qvals):
            raise DomainError("q-values must be finite")
        if not 0.0 < self.alpha <= 1.0:
            raise DomainError(f"alpha must be in (0, 1], got {self.alpha}")
        if self.temp <= 0.0:
            raise DomainError("temperature must be positive")
        object.__setattr__(self, "qvals", tuple(float(q) for q in self.qvals))


def boltzmann_policy(state: AgentState) -> tuple[float, ...]:
    """Softmax of Q/T with a max shift so large values never overflow."""
    q = np.asarray(state.qvals, dtype=float) / state.temp
    q -= q.max()
    e = np.exp(q)
    return tuple(e / e.sum())


def q_update(state: AgentState, action: int, mean_reward: float) -> AgentState:
    """One value update for a single action; all other entries unchanged."""
    if not 0 <= action < len(state.qvals):
        raise DomainError(f"action index {action} out of range")
    q = list(state.qvals)
    q[action] += state.alpha * (mean_reward - q[action])
    return AgentState(tuple(q), state.temp, state.alpha)


@dataclass(frozen=True)
class SimConfig:
    batch: int = 100
    rounds: int = 10_000
    seed: int = 0
    record_every: int = 100

    def __post_init__(self):
        if self.batch < 1 or self.rounds < 1 or self.record_every < 1:
            raise ValueError("batch, rounds and record_every must be >= 1")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass
class EmpiricalTrace:
    """Recorded policy of one agent: (round, action probabilities) pairs."""

    samples: list[tuple[int, tuple[float, ...]]] = field(default_factory=list)
    q_samples: list[tuple[float, ...]] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def final_probs(self) -> tuple[float, ...]:
        return self.samples[-1][1]


def run_two_agents(game: Game, temps: Temperatures, cfg: SimConfig,
                   init: Optional[tuple[AgentState, AgentState]] = None,
                   alpha: float = 0.01, record_q: bool = False
                   ) -> tuple[EmpiricalTrace, EmpiricalTrace]:
    """Simulate both learners against each other; returns their traces.

    ``init`` overrides the default zero-initialized value vectors; its
    temperatures must agree with ``temps``.  Policies are recorded (from
    the current values) every ``record_every`` rounds and once more after
    the final update.
    """
    n = game.n
    if init is None:
        state_x = AgentState((0.0,) * n, temps.tx, alpha)
        state_y = AgentState((0.0,) * n, temps.ty, alpha)
    else:
        state_x, state_y = init
        if state_x.temp != temps.tx or state_y.temp != temps.ty:
            raise DomainError("init states disagree with temps")
        if len(state_x.qvals) != n or len(state_y.qvals) != n:
            raise DomainError("init q-vectors do not match the game size")

    A = np.asarray(game.payoff_x.entries, dtype=float)
    B = np.asarray(game.payoff_y.entries, dtype=float)
    qx = np.asarray(state_x.qvals, dtype=float)
    qy = np.asarray(state_y.qvals, dtype=float)
    ax, ay_ = state_x.alpha, state_y.alpha
    rng = np.random.default_rng(int(cfg.seed))

    meta = {"seed": int(cfg.seed), "alpha": (ax, ay_), "batch": cfg.batch,
            "rounds": cfg.rounds, "temps": (temps.tx, temps.ty),
            "generator": GENERATOR_ID}
    trace_x = EmpiricalTrace(metadata=dict(meta))
    trace_y = EmpiricalTrace(metadata=dict(meta))

    def softmax(q, t):
        z = q / t
        z = z - z.max()
        e = np.exp(z)
        return e / e.sum()

    def record(rnd, px, py):
        trace_x.samples.append((rnd, tuple(px)))
        trace_y.samples.append((rnd, tuple(py)))
        if record_q:
            trace_x.q_samples.append(tuple(qx))
            trace_y.q_samples.append(tuple(qy))

    for rnd in range(cfg.rounds):
        px = softmax(qx, temps.tx)
        py = softmax(qy, temps.ty)
        if rnd % cfg.record_every == 0:
            record(rnd, px, py)
        # One multinomial draw over joint actions == `batch` paired samples.
        joint = rng.multinomial(cfg.batch, np.outer(px, py).ravel()
                                ).reshape(n, n)
        count_x = joint.sum(axis=1)          # X's own-action visit counts
        count_y = joint.sum(axis=0)          # Y's own-action visit counts
        visited_x = count_x > 0
        visited_y = count_y > 0
        with np.errstate(invalid="ignore"):
            mean_rx = np.where(visited_x, (A * joint).sum(axis=1)
                               / np.maximum(count_x, 1), 0.0)
            mean_ry = np.where(visited_y, (B * joint.T).sum(axis=1)
                               / np.maximum(count_y, 1), 0.0)
        qx = np.where(visited_x, qx + ax * (mean_rx - qx), qx)
        qy = np.where(visited_y, qy + ay_ * (mean_ry - qy), qy)

    record(cfg.rounds, softmax(qx, temps.tx), softmax(qy, temps.ty))
    return trace_x, trace_y
