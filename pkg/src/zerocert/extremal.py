"""Budget-constrained maximization over zero configurations.

Variables are distances d_j = Lambda - lambda_j, ordered d_1 >= d_2 >= ... >= 0.
Putting a zero at distance d costs F(d0 - d) - F(d0), with F = F_x strictly
decreasing, and earns exp(B d) - exp(C d).  The greedy rule saturates caps in
order, spends the remainder on one slot and leaves the rest at zero; the
chain solver generalizes it to concave cumulative budgets.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import mpmath
import numpy as np

from .kernel import DomainError, eval_G, invert_G_real

BUDGET_TOL = 1e-12
ORACLE_LIMIT = 10**8


class InfeasibleProblem(ValueError):
    pass


@dataclass(frozen=True)
class ExtremalProblem:
    d0: float
    caps: tuple[float, ...]
    budget: float
    expB: float
    expC: float
    scale: float

    def __post_init__(self):
        object.__setattr__(self, "caps", tuple(float(c) for c in self.caps))
        if not self.d0 > 0 or self.budget < 0 or not self.scale > 0:
            raise InfeasibleProblem("need d0 > 0, budget >= 0, scale > 0")
        if not self.expB > self.expC >= 0:
            raise InfeasibleProblem("need expB > expC >= 0")
        if not self.expB > 2.0 / self.scale:
            raise InfeasibleProblem(f"expB={self.expB} must exceed the support end 2/x={2 / self.scale}")
        if any(c < 0 for c in self.caps) or any(a < b for a, b in zip(self.caps, self.caps[1:])):
            raise InfeasibleProblem("caps must be nonnegative and nonincreasing")
        if any(c > self.d0 + 1e-12 for c in self.caps):
            raise InfeasibleProblem("caps cannot exceed d0")

    def F(self, d):
        return eval_G(d / self.scale)

    def cost(self, d: float) -> float:
        """F(d0 - d) - F(d0)."""
        return float(self.F(self.d0 - d)) - float(self.F(self.d0))

    def gain(self, d):
        return np.exp(self.expB * np.asarray(d)) - np.exp(self.expC * np.asarray(d))

    def solve_distance(self, extra: float) -> float:
        """The d with cost(d) = extra."""
        target = float(self.F(self.d0)) + extra
        return self.d0 - self.scale * invert_G_real(target)

    @classmethod
    def from_dict(cls, rec: dict) -> "ExtremalProblem":
        keys = {"d0", "caps", "budget", "expB", "expC", "scale"}
        unknown = set(rec) - keys
        if unknown:
            raise InfeasibleProblem(f"unknown keys {sorted(unknown)}")
        return cls(rec["d0"], tuple(rec["caps"]), rec["budget"], rec["expB"], rec.get("expC", 0.0), rec["scale"])

    def to_dict(self) -> dict:
        return {"d0": self.d0, "caps": list(self.caps), "budget": self.budget,
                "expB": self.expB, "expC": self.expC, "scale": self.scale}


@dataclass
class Configuration:
    values: list[float]
    objective: float
    budget_used: float
    saturated: int = 0
    solved_index: int | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"values": self.values, "objective": self.objective, "budget_used": self.budget_used,
                "saturated": self.saturated, "solved_index": self.solved_index}


def _configuration(problem: ExtremalProblem, values: Sequence[float], **kw) -> Configuration:
    values = [float(v) for v in values]
    objective = math.fsum(float(problem.gain(v)) for v in values)
    used = math.fsum(problem.cost(v) for v in values)
    return Configuration(values, objective, used, **kw)


def greedy_optimize(problem: ExtremalProblem) -> Configuration:
    caps = problem.caps
    costs = [problem.cost(e) for e in caps]
    spent = 0.0
    for r, c in enumerate(costs):
        if spent + c > problem.budget:
            d_r = problem.solve_distance(problem.budget - spent)
            d_r = min(max(d_r, 0.0), caps[r])
            values = list(caps[:r]) + [d_r] + [0.0] * (len(caps) - r - 1)
            return _configuration(problem, values, saturated=r, solved_index=r)
        spent += c
    return _configuration(problem, caps, saturated=len(caps), notes=["all caps within budget"])


def objective_S_prime(config: Configuration, Lambda: float, A: float) -> float:
    """exp(-A Lambda) times the d-space objective: sum_j exp(-A lambda_j) - exp(-A Lambda)."""
    return math.exp(-A * Lambda) * config.objective


@dataclass(frozen=True)
class ChainConstraints:
    c: tuple[float, ...]
    d0: float
    scale: float

    def __post_init__(self):
        c = [float(v) for v in self.c]
        for m, v in enumerate(c):
            if v < 0:
                c = c[:m]
                break
        object.__setattr__(self, "c", tuple(c))
        inc = np.diff([0.0] + c)
        if np.any(inc < -1e-13):
            raise ValueError("c must be nondecreasing")
        if np.any(np.diff(inc) > 1e-12):
            raise ValueError("c must have nonincreasing increments")


def chain_equalize(constraints: ChainConstraints, expB: float = 25 / 7, expC: float = 0.0) -> Configuration:
    """Solve for the configuration making every cumulative constraint tight."""
    F = lambda d: float(eval_G(d / constraints.scale))
    d0 = constraints.d0
    F_d0 = F(d0)
    problem = ExtremalProblem(d0, (), 0.0, expB, expC, constraints.scale)
    values: list[float] = []
    running = 0.0
    prev_c = 0.0
    for m, cm in enumerate(constraints.c):
        target = cm + (m + 1) * F_d0 - running
        if not F_d0 - 1e-13 <= target <= F(0.0) + 1e-13:
            raise DomainError(f"step {m + 1}: target {target} outside [F(d0), F(0)]")
        if cm - prev_c <= 1e-15:
            d = 0.0
        else:
            d = d0 - constraints.scale * invert_G_real(target)
            d = min(max(d, 0.0), d0)
        if values and d > values[-1] + 1e-9:
            raise ValueError(f"ordering violated at slot {m + 1}")
        values.append(d)
        running += F(d0 - d)
        prev_c = cm
    config = _configuration(problem, values)
    config.budget_used = prev_c
    return config


def chain_from_caps(problem: ExtremalProblem) -> ChainConstraints:
    """Cumulative cap costs, clipped at the budget."""
    cum = np.cumsum([problem.cost(e) for e in problem.caps])
    return ChainConstraints(tuple(np.minimum(cum, problem.budget)), problem.d0, problem.scale)


def brute_force_oracle(problem: ExtremalProblem, step: float = 0.01) -> Configuration:
    """Exhaustive search over the step lattice; ties resolved lexicographically."""
    J = len(problem.caps)
    if J > 4:
        raise ValueError("oracle supports at most 4 slots")
    axes = [step * np.arange(int(math.floor(e / step + 1e-9)) + 1) for e in problem.caps]
    size = math.prod(len(a) for a in axes)
    if size > ORACLE_LIMIT:
        raise ValueError(f"lattice of {size} points exceeds {ORACLE_LIMIT}")
    if J == 0:
        return _configuration(problem, [])
    grids = np.meshgrid(*axes, indexing="ij")
    flat = [g.ravel() for g in grids]
    F_d0 = float(problem.F(problem.d0))
    cost = sum(problem.F(problem.d0 - f) - F_d0 for f in flat)
    gain = sum(problem.gain(f) for f in flat)
    ok = cost <= problem.budget + BUDGET_TOL
    for lo, hi in zip(flat[1:], flat[:-1]):
        ok &= lo <= hi
    gain = np.where(ok, gain, -np.inf)
    k = int(np.argmax(gain))
    return _configuration(problem, [float(f[k]) for f in flat])


def exchange_property_check(y: float, z: float, eta: float, v: float, b: float, c: float) -> tuple[int, int]:
    """Signs of the spread differences for h1(y) = y^v (concave) and h2(y) = y^b - y^c (convex).

    H(y, z, eta) = h(y + eta) + h(z - eta) - h(y) - h(z), evaluated in 60-digit
    arithmetic so the sign is not decided by rounding.
    """
    if not (y >= z > 1 and eta > 0 and z - eta > 1 and 0 < v < 1 and b >= 1 and 0 <= c < b):
        raise ValueError("need y >= z > 1, eta > 0, z - eta > 1, 0 < v < 1, b >= 1, 0 <= c < b")
    with mpmath.workdps(60):
        Y, Z, E = mpmath.mpf(y), mpmath.mpf(z), mpmath.mpf(eta)
        h1 = lambda s: s ** mpmath.mpf(v)
        h2 = lambda s: s ** mpmath.mpf(b) - s ** mpmath.mpf(c)
        H1 = h1(Y + E) + h1(Z - E) - h1(Y) - h1(Z)
        H2 = h2(Y + E) + h2(Z - E) - h2(Y) - h2(Z)
        return int(mpmath.sign(H1)), int(mpmath.sign(H2))


def lattice_error_bound(problem: ExtremalProblem, step: float) -> float:
    """Lipschitz bound on the objective loss from rounding every slot down to the lattice."""
    return len(problem.caps) * problem.expB * math.exp(problem.expB * problem.d0) * step
