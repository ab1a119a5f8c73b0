"""Minimal-chain Monte Carlo: explosion detection by direct simulation.

The minimal continuous-time Markov chain on a weighted graph holds at x
for an exponential time with rate Deg(x) = (1/mu(x)) sum_y omega(x,y),
then jumps to a neighbor with probability proportional to omega(x, .).
Explosion (infinitely many jumps in finite time) shows up numerically
as trajectories that exhaust a large jump budget long before the time
horizon.

Randomness is drawn from counter-based Philox streams keyed on
(seed, 2*i) for holding times and (seed, 2*i + 1) for jump choices of
trajectory i, so a single simulated chain is bitwise identical to the
same-index member of a vectorized ensemble and results are reproducible
under any parallel schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from numpy.random import Generator, Philox

from .graph import WeightedGraph, ball_window

__all__ = [
    "Trajectory",
    "ChainEnsemble",
    "simulate_chain",
    "simulate_ensemble",
]

STATUS_HORIZON = "horizon_reached"
STATUS_JUMP_CAP = "jump_cap"
STATUS_ESCAPE = "radius_escape"

_DEFAULT_BLOCK = 2048


def _streams(seed: int, i: int) -> Tuple[Generator, Generator]:
    hold = Generator(Philox(key=np.array([seed, 2 * i], dtype=np.uint64)))
    jump = Generator(Philox(key=np.array([seed, 2 * i + 1], dtype=np.uint64)))
    return hold, jump


def _allowed_ball(g, d, x0, radius_cap):
    if radius_cap is None:
        return None
    if radius_cap <= 0:
        raise ValueError(f"radius cap must be positive, got {radius_cap}")
    return set(ball_window(g, d, x0, radius_cap).mu)


def _vertex_tables(g: WeightedGraph, v: int):
    """Holding rate, cumulative jump law, and neighbor ids at v.

    Shared by the scalar and the vectorized simulator so both perform
    the identical float operations (summation order matters for
    bitwise reproducibility).
    """
    nbrs = g.neighbors(v)
    deg = len(nbrs)
    ids = [y for y, _ in nbrs]
    ws = np.fromiter((w for _, w in nbrs), float, deg)
    total = float(ws.sum())
    rate = total / g.mu(v)
    if deg:
        cum = np.cumsum(ws) / total
        cum[-1] = 1.0    # guard: uniform draws in [0,1) must always select
    else:
        cum = ws
    return rate, cum, ids


@dataclass(frozen=True)
class Trajectory:
    """One chain path: visited vertices, jump times, terminal status."""

    vertices: Tuple[int, ...]
    times: Tuple[float, ...]       # strictly increasing, times[0] = 0
    status: str
    jumps: int
    final_time: float
    final_vertex: int


@dataclass(frozen=True)
class ChainEnsemble:
    """Summary of n independent trajectories, merged by index."""

    statuses: Tuple[str, ...]
    jumps: np.ndarray
    final_times: np.ndarray
    final_vertices: np.ndarray
    seed: int

    @property
    def status_counts(self) -> Dict[str, int]:
        out: Dict[str, int] = {}
        for s in self.statuses:
            out[s] = out.get(s, 0) + 1
        return out

    def fraction(self, status: str) -> float:
        return self.statuses.count(status) / len(self.statuses)


def simulate_chain(g: WeightedGraph, x0: int, horizon: float,
                   jump_cap: int, radius_cap: Optional[float] = None,
                   d=None, seed: int = 0, stream: int = 0) -> Trajectory:
    """Simulate one minimal-chain trajectory with full path recording.

    The trajectory ends at the first triggered cap: the time horizon,
    the jump-count cap, or (when ``radius_cap`` and a metric ``d`` are
    given) the first landing outside the ball B_d(x0, radius_cap).
    ``stream`` selects the per-trajectory random stream, so
    ``simulate_chain(..., stream=i)`` reproduces member i of
    :func:`simulate_ensemble` exactly.
    """
    if horizon <= 0 or jump_cap <= 0:
        raise ValueError("horizon and jump_cap must be positive")
    allowed = _allowed_ball(g, d, x0, radius_cap)
    hold_gen, jump_gen = _streams(seed, stream)
    tables: Dict[int, tuple] = {}
    verts = [x0]
    times = [0.0]
    x, t, jumps = x0, 0.0, 0
    while True:
        tab = tables.get(x)
        if tab is None:
            tab = tables[x] = _vertex_tables(g, x)
        rate, cum, ids = tab
        if rate == 0.0:
            # isolated vertex: the chain stays forever
            status, t = STATUS_HORIZON, horizon
            break
        nt = t + hold_gen.standard_exponential() / rate
        if nt > horizon:
            status, t = STATUS_HORIZON, horizon
            break
        t = nt
        u = jump_gen.random()
        x = ids[int((cum <= u).sum())]
        jumps += 1
        verts.append(x)
        times.append(t)
        if allowed is not None and x not in allowed:
            status = STATUS_ESCAPE
            break
        if jumps >= jump_cap:
            status = STATUS_JUMP_CAP
            break
    return Trajectory(tuple(verts), tuple(times), status, jumps, t, x)


class _RowTable:
    """Lazily grown per-vertex tables for the vectorized ensemble.

    Rows are created the first time a vertex is visited; vertices of
    equal degree profile (e.g. one anti-tree sphere) still share the
    underlying neighbor lists through the graph source, so only the row
    arrays are materialized here.
    """

    def __init__(self, g: WeightedGraph, allowed):
        self.g = g
        self.allowed = allowed
        self.cap = 256
        self.width = 4
        self.rate = np.zeros(self.cap)
        self.nbr = np.zeros((self.cap, self.width), np.int64)
        self.cum = np.full((self.cap, self.width), 2.0)
        self.in_ball = np.ones(self.cap, bool)
        self.filled = np.zeros(self.cap, bool)
        self.id2row: Dict[int, int] = {}
        self.row2id: List[int] = []

    def row_for(self, v: int) -> int:
        r = self.id2row.get(v)
        if r is None:
            r = len(self.row2id)
            if r == self.cap:
                self.cap *= 2
                grow = self.cap - len(self.rate)
                self.rate = np.concatenate([self.rate, np.zeros(grow)])
                self.nbr = np.vstack([self.nbr, np.zeros((grow, self.width), np.int64)])
                self.cum = np.vstack([self.cum, np.full((grow, self.width), 2.0)])
                self.in_ball = np.concatenate([self.in_ball, np.ones(grow, bool)])
                self.filled = np.concatenate([self.filled, np.zeros(grow, bool)])
            self.id2row[v] = r
            self.row2id.append(v)
            if self.allowed is not None:
                self.in_ball[r] = v in self.allowed
        return r

    def _widen(self, width: int) -> None:
        extra = width - self.width
        self.nbr = np.hstack([self.nbr, np.zeros((self.cap, extra), np.int64)])
        self.cum = np.hstack([self.cum, np.full((self.cap, extra), 2.0)])
        self.width = width

    def fill(self, r: int) -> None:
        v = self.row2id[r]
        rate, cum, ids = _vertex_tables(self.g, v)
        deg = len(ids)
        if deg > self.width:
            self._widen(max(deg, 2 * self.width))
        self.rate[r] = rate
        if deg:
            self.cum[r, :deg] = cum
            self.nbr[r, :deg] = np.fromiter(
                (self.row_for(y) for y in ids), np.int64, deg)
        self.filled[r] = True


def simulate_ensemble(g: WeightedGraph, x0: int, n: int, horizon: float,
                      jump_cap: int, radius_cap: Optional[float] = None,
                      d=None, seed: int = 0,
                      block: int = _DEFAULT_BLOCK) -> ChainEnsemble:
    """Simulate n independent trajectories in vectorized lockstep.

    All trajectories advance one jump per sweep; finished ones drop
    out.  Each trajectory draws from its own Philox streams, so the
    result is independent of the lockstep schedule and member i equals
    ``simulate_chain(..., stream=i)`` bitwise.  Paths are not recorded,
    only terminal summaries.
    """
    if horizon <= 0 or jump_cap <= 0:
        raise ValueError("horizon and jump_cap must be positive")
    if n <= 0:
        raise ValueError(f"trajectory count must be positive, got {n}")
    allowed = _allowed_ball(g, d, x0, radius_cap)
    table = _RowTable(g, allowed)

    hold_gens = []
    jump_gens = []
    for i in range(n):
        hg, jg = _streams(seed, i)
        hold_gens.append(hg)
        jump_gens.append(jg)
    hold_blk = np.empty((n, block))
    jump_blk = np.empty((n, block))

    r0 = table.row_for(x0)
    pos = np.full(n, r0, np.int64)
    t = np.zeros(n)
    jumps = np.zeros(n, np.int64)
    status = np.full(n, -1, np.int8)    # 0 horizon, 1 cap, 2 escape
    active = np.arange(n)
    cur = block
    while active.size:
        if cur == block:
            for i in active:
                hold_blk[i] = hold_gens[i].standard_exponential(block)
                jump_blk[i] = jump_gens[i].random(block)
            cur = 0
        rows = pos[active]
        for r in np.unique(rows[~table.filled[rows]]):
            table.fill(int(r))
        with np.errstate(divide="ignore"):
            nt = t[active] + hold_blk[active, cur] / table.rate[rows]
        done_h = nt > horizon
        t[active[done_h]] = horizon
        status[active[done_h]] = 0
        live = active[~done_h]
        if live.size:
            t[live] = nt[~done_h]
            rows = pos[live]
            u = jump_blk[live, cur]
            k = (table.cum[rows] <= u[:, None]).sum(1)
            pos[live] = table.nbr[rows, k]
            jumps[live] += 1
            escaped = ~table.in_ball[pos[live]]
            status[live[escaped]] = 2
            live = live[~escaped]
            capped = jumps[live] >= jump_cap
            status[live[capped]] = 1
            active = live[~capped]
        else:
            active = live
        cur += 1

    names = (STATUS_HORIZON, STATUS_JUMP_CAP, STATUS_ESCAPE)
    final_ids = np.fromiter((table.row2id[r] for r in pos), np.int64, n)
    return ChainEnsemble(
        statuses=tuple(names[s] for s in status),
        jumps=jumps,
        final_times=t,
        final_vertices=final_ids,
        seed=seed,
    )
