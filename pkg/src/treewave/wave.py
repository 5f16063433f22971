"""Closed-form propagators and leapfrog recurrence for the shifted wave
equation on the tree, plus the mean-value verification apparatus.

The Cauchy problem

    gamma * L_time u(x, n) = (L_tree - 1 + gamma) u(x, n),
    u(x, 0) = f(x),   {u(x, 1) - u(x, -1)} / 2 = g(x),

is equivalent to the three-term recurrence

    u(x, n+1) + u(x, n-1) = (1/sqrt(q)) * sum_{y in S(x,1)} u(y, n),

and is solved in closed form by u(., n) = C_n f + S_n g, where

    C_n = (M_|n| - M_{|n|-2}) / 2,       S_n = sign(n) * M_{|n|-1},
    M_n f(x) = q^(-n/2) * sum_{d(y,x) <= n, n - d(y,x) even} f(y),

with M_{-1} = 0 and, at n = 0, C_0 = id and S_0 = 0 (forced by the initial
condition).  Both solution routes are implemented independently so that
their exact agreement can serve as an oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParameterError, TruncationError
from .functions import TreeFunction
from .scalars import (
    Scalar,
    ScalarMode,
    scalar_from_fraction,
    scalar_sum,
    scalar_zero,
    sqrt_q_power,
)
from .topology import Ball, VertexAddress, sphere


def _distance_levels(center: VertexAddress, depth: int) -> list[list[VertexAddress]]:
    """Vertices grouped by distance 0..depth from ``center`` (tree walk)."""
    levels = [[center]]
    frontier: list[tuple[VertexAddress, VertexAddress | None]] = [(center, None)]
    for _ in range(depth):
        next_frontier = []
        for vertex, previous in frontier:
            for nb in vertex.neighbors():
                if previous is None or nb != previous:
                    next_frontier.append((nb, vertex))
        levels.append([vertex for vertex, _ in next_frontier])
        frontier = next_frontier
    return levels


def adjacency_sum(f: TreeFunction) -> TreeFunction:
    """x -> sum_{y in S(x,1)} f(y), by scattering support values."""
    zero = scalar_zero(f.q, f.mode)
    out: dict = {}
    for vertex, value in f.items():
        for nb in vertex.neighbors():
            out[nb] = out.get(nb, zero) + value
    return TreeFunction(f.q, f.mode, out)


def m_operator(n: int, f: TreeFunction) -> TreeFunction:
    """M_n f(x) = q^(-n/2) * sum over d(y,x) <= n with n - d(y,x) even;
    M_{-1} = 0 and M_0 is the identity."""
    if n < -1:
        raise ParameterError(f"M_n is defined for n >= -1, got {n}")
    if n == -1:
        return TreeFunction.zero(f.q, f.mode)
    if n == 0:
        return f
    weight = sqrt_q_power(f.q, -n, f.mode)
    zero = scalar_zero(f.q, f.mode)
    out: dict = {}
    for vertex, value in f.items():
        spread = value * weight
        levels = _distance_levels(vertex, n)
        for d in range(n % 2, n + 1, 2):
            for target in levels[d]:
                out[target] = out.get(target, zero) + spread
    return TreeFunction(f.q, f.mode, out)


def propagators(n: int, f: TreeFunction, g: TreeFunction) -> TreeFunction:
    """Snapshot C_n f + S_n g of the closed-form solution."""
    if f.q != g.q or f.mode != g.mode:
        raise ParameterError("initial data must share q and scalar mode")
    if n == 0:
        return f
    half = scalar_from_fraction(Fraction(1, 2), f.q, f.mode)
    cosine_part = (m_operator(abs(n), f) - m_operator(abs(n) - 2, f)).scale(half)
    sine_part = m_operator(abs(n) - 1, g)
    if n < 0:
        sine_part = -sine_part
    return cosine_part + sine_part


def step_recurrence(u_prev: TreeFunction, u_curr: TreeFunction) -> TreeFunction:
    """u_next = (1/sqrt(q)) * neighbour sum of u_curr - u_prev.

    The same map also steps backwards (it is an involution in the pair),
    which is what makes the trajectory reversible.
    """
    if u_prev.q != u_curr.q or u_prev.mode != u_curr.mode:
        raise ParameterError("snapshots must share q and scalar mode")
    weight = sqrt_q_power(u_curr.q, -1, u_curr.mode)
    return adjacency_sum(u_curr).scale(weight) - u_prev


@dataclass(frozen=True)
class WaveTrajectory:
    """Solved snapshots u(., n) together with their defining data.

    Invariants (exact mode): snapshot(0) == f, and when both are present
    (snapshot(1) - snapshot(-1))/2 == g; the support of snapshot(n) stays
    inside the ball of radius |n| + N around the data (N = data radius).
    """

    q: int
    mode: ScalarMode
    f: TreeFunction
    g: TreeFunction
    snapshots: dict[int, TreeFunction] = field(repr=False)
    solver: str = "closed"
    ball: Ball | None = None

    def __post_init__(self):
        if self.mode is ScalarMode.EXACT:
            if 0 in self.snapshots and self.snapshots[0] != self.f:
                raise ParameterError("snapshot(0) must equal the initial position")
            if 1 in self.snapshots and -1 in self.snapshots:
                half = scalar_from_fraction(Fraction(1, 2), self.q, self.mode)
                centered = (self.snapshots[1] - self.snapshots[-1]).scale(half)
                if centered != self.g:
                    raise ParameterError(
                        "snapshots violate the centered initial velocity condition"
                    )

    def n_values(self) -> list[int]:
        return sorted(self.snapshots)

    def snapshot(self, n: int) -> TreeFunction:
        try:
            return self.snapshots[n]
        except KeyError:
            raise ParameterError(f"time {n} was not solved for") from None

    def data_radius(self) -> int:
        return max(self.f.support_radius(), self.g.support_radius(), 0)


def _normalize_range(n_range) -> tuple[int, int]:
    if isinstance(n_range, int):
        if n_range < 0:
            raise ParameterError("a bare integer range must be >= 0")
        return (-n_range, n_range)
    lo, hi = n_range
    if lo > hi:
        raise ParameterError(f"empty time range {n_range}")
    if lo > 0 or hi < 0:
        raise ParameterError("the time range must contain 0 (initial data lives there)")
    return (int(lo), int(hi))


def required_ball(q: int, n_range, f: TreeFunction, g: TreeFunction) -> Ball:
    lo, hi = _normalize_range(n_range)
    data_radius = max(f.support_radius(), g.support_radius(), 0)
    return Ball(q, max(abs(lo), abs(hi)) + data_radius + 2)


def solve(
    f: TreeFunction,
    g: TreeFunction,
    n_range,
    solver: str = "closed",
    ball: Ball | None = None,
) -> WaveTrajectory:
    """Solve the Cauchy problem on [lo, hi] (``n_range`` may be a pair or a
    bare radius r for [-r, r]).

    ``solver='closed'`` fills snapshots through the propagators;
    ``solver='recurrence'`` bootstraps u(., +/-1) from the neighbour sum of f
    (the n = 0 recurrence combined with the centered velocity) and leapfrogs
    outwards.  In exact mode the two routes agree identically.
    """
    if f.q != g.q or f.mode != g.mode:
        raise ParameterError("initial data must share q and scalar mode")
    if solver not in ("closed", "recurrence"):
        raise ParameterError(f"solver must be 'closed' or 'recurrence', got {solver!r}")
    lo, hi = _normalize_range(n_range)
    data_radius = max(f.support_radius(), g.support_radius(), 0)
    needed = max(abs(lo), abs(hi)) + data_radius + 2
    if ball is None:
        ball = Ball(f.q, needed)
    elif ball.radius < needed:
        worst = max(abs(lo), abs(hi))
        offending = min(n for n in range(worst + 1) if n + data_radius + 2 > ball.radius)
        raise TruncationError(
            f"truncation ball of radius {ball.radius} cannot hold the snapshot "
            f"at n={offending} (radius {needed} required for |n| <= {worst})"
        )

    snapshots: dict[int, TreeFunction] = {}
    if solver == "closed":
        for n in range(lo, hi + 1):
            snapshots[n] = propagators(n, f, g)
    else:
        half_step = sqrt_q_power(f.q, -1, f.mode) * scalar_from_fraction(
            Fraction(1, 2), f.q, f.mode
        )
        pushed = adjacency_sum(f).scale(half_step)
        u_plus = pushed + g
        u_minus = pushed - g
        snapshots[0] = f
        if hi >= 1:
            snapshots[1] = u_plus
        if lo <= -1:
            snapshots[-1] = u_minus
        for n in range(1, hi):
            snapshots[n + 1] = step_recurrence(snapshots[n - 1], snapshots[n])
        for n in range(-1, lo, -1):
            snapshots[n - 1] = step_recurrence(snapshots[n + 1], snapshots[n])
        snapshots = {n: u for n, u in snapshots.items() if lo <= n <= hi}
    return WaveTrajectory(
        q=f.q, mode=f.mode, f=f, g=g, snapshots=snapshots, solver=solver, ball=ball
    )


@dataclass(frozen=True)
class AsgeirssonField:
    """U(x, y) = q^(h(y)/2) * u(x, h(y)) built from a solved trajectory.

    The second argument enters only through its height, so U satisfies the
    two-variable mean-value hypothesis L_x U = L_y U exactly whenever u
    solves the wave equation.
    """

    trajectory: WaveTrajectory
    ball: Ball

    def __post_init__(self):
        solved = self.trajectory.n_values()
        if not solved or min(solved) > -self.ball.radius or max(solved) < self.ball.radius:
            span = f"{min(solved)}..{max(solved)}" if solved else "nothing"
            raise TruncationError(
                f"ball heights span [-{self.ball.radius}, {self.ball.radius}] but the "
                f"trajectory covers {span}"
            )

    def value(self, x: VertexAddress, y: VertexAddress) -> Scalar:
        h = y.height()
        weight = sqrt_q_power(self.trajectory.q, h, self.trajectory.mode)
        return weight * self.trajectory.snapshot(h)[x]

    def laplacian_in_x(self, x: VertexAddress, y: VertexAddress) -> Scalar:
        q = self.trajectory.q
        ratio = scalar_from_fraction(Fraction(1, q + 1), q, self.trajectory.mode)
        neighbour_total = scalar_sum(
            (self.value(nb, y) for nb in x.neighbors()), q, self.trajectory.mode
        )
        return self.value(x, y) - ratio * neighbour_total

    def laplacian_in_y(self, x: VertexAddress, y: VertexAddress) -> Scalar:
        q = self.trajectory.q
        ratio = scalar_from_fraction(Fraction(1, q + 1), q, self.trajectory.mode)
        neighbour_total = scalar_sum(
            (self.value(x, nb) for nb in y.neighbors()), q, self.trajectory.mode
        )
        return self.value(x, y) - ratio * neighbour_total


def asgeirsson_field(u: WaveTrajectory, ball: Ball) -> AsgeirssonField:
    return AsgeirssonField(trajectory=u, ball=ball)


def asgeirsson_verify(
    field: AsgeirssonField,
    x: VertexAddress,
    y: VertexAddress,
    m: int,
    n: int,
) -> tuple[Scalar, Scalar]:
    """Both double sphere sums of the mean-value identity:

        sum_{x' in S(x,m)} sum_{y' in S(y,n)} U(x', y')   (lhs)
        sum_{x' in S(x,n)} sum_{y' in S(y,m)} U(x', y')   (rhs)

    The identity asserts lhs == rhs for every m, n.
    """

    def double_sum(radius_x: int, radius_y: int) -> Scalar:
        traj = field.trajectory
        xs = sphere(x, radius_x, field.ball)
        ys = sphere(y, radius_y, field.ball)
        height_counts: dict[int, int] = {}
        for y_prime in ys:
            h = y_prime.height()
            height_counts[h] = height_counts.get(h, 0) + 1
        total = scalar_zero(traj.q, traj.mode)
        for h, count in sorted(height_counts.items()):
            snapshot = traj.snapshot(h)
            inner = scalar_sum((snapshot[x_prime] for x_prime in xs), traj.q, traj.mode)
            total = total + sqrt_q_power(traj.q, h, traj.mode) * inner * count
        return total

    return double_sum(m, n), double_sum(n, m)
