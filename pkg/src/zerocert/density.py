"""Closed-form log-free zero-density bounds in the normalized coordinate.

Zeros are described by lambda = delta * log q.  Every bound below is the
nominal one: epsilon corrections that vanish for large q are set to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .cond2 import A0, B0
from .facts import FACTS, THRESHOLDS, fact
from .kernel import KernelScale, eval_B_weight, eval_G

ALL_CHARACTERS = "all"
ONE_CLASS = "class"
LAMBDA_TOL = 1e-9


class InadmissibleContext(ValueError):
    """The requested bound is vacuous or its hypotheses fail."""


@dataclass(frozen=True)
class WeightParams:
    phi: Fraction | float
    c1: Fraction | float
    c2: Fraction | float
    kappa: Fraction | float
    mode: str = ALL_CHARACTERS

    def __post_init__(self):
        if self.phi < 0 or min(self.c1, self.c2, self.kappa) <= 0:
            raise ValueError("need phi >= 0 and c1, c2, kappa > 0")
        if self.mode not in (ALL_CHARACTERS, ONE_CLASS):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def r(self):
        return self.phi + self.c1 + self.c2

    @property
    def x0(self):
        lead = 2 * self.phi if self.mode == ALL_CHARACTERS else self.phi
        return lead + 3 * self.c1 + self.c2

    @property
    def C1(self):
        return (2 * self.phi + 2 * self.c1 + self.c2) / (2 * self.c1 * self.c2)

    @property
    def growth_exponent(self):
        """2(x0 + kappa): the exponent in the count envelope."""
        return 2 * (self.x0 + self.kappa)

    @property
    def gap_exponent(self):
        return (self.r + self.kappa) / 2

    def in_mode(self, mode: str) -> "WeightParams":
        return WeightParams(self.phi, self.c1, self.c2, self.kappa, mode)


STANDARD_PARAMS = WeightParams(Fraction(1, 3), Fraction(1, 12), Fraction(1, 4), Fraction(1, 6))
PHI = float(STANDARD_PARAMS.phi)


def weighted_sum_bound(params: WeightParams, Lambda: float) -> float:
    """C1 sqrt(B_{phi,kappa}(L) B_{phi,r}(L)) / kappa.

    Bounds sum_zeros exp(-2(x0+kappa) lambda - (r+kappa)/2 max(0, L - lambda)).
    """
    if not Lambda > 0:
        raise ValueError("Lambda must be positive")
    phi, kappa, r = float(params.phi), float(params.kappa), float(params.r)
    b1 = eval_B_weight(phi, kappa, Lambda)
    b2 = eval_B_weight(phi, r, Lambda)
    return float(params.C1) * math.sqrt(b1 * b2) / kappa


class ThresholdBound(NamedTuple):
    threshold: float
    computed: float
    published: float
    value: float  # the larger of the two; both are valid when computed <= published


def certified_E(Lambda: float, params: WeightParams = STANDARD_PARAMS) -> ThresholdBound:
    """Weighted-sum bound valid for every L >= the largest tabulated threshold <= Lambda.

    The bound is monotone decreasing in L, so the tabulated value carries
    forward.  A published value smaller than the recomputed one is not used.
    """
    chosen = None
    for lam_key, e_key in THRESHOLDS:
        if fact(lam_key) <= Lambda + 1e-12:
            chosen = (lam_key, e_key)
    if chosen is None:
        raise ValueError(f"Lambda={Lambda} is below the first threshold {fact('Lambda0')}")
    lam = fact(chosen[0])
    computed = weighted_sum_bound(params, lam)
    published = fact(chosen[1])
    return ThresholdBound(lam, computed, published, max(computed, published))


def count_envelope(params: WeightParams, Lambda: float) -> float:
    """Upper bound E * exp(2(x0+kappa) Lambda) on the number of zeros with lambda <= Lambda."""
    return certified_E(Lambda, params).value * math.exp(float(params.growth_exponent) * Lambda)


@dataclass(frozen=True)
class DensityContext:
    lambda0: float
    x: float
    Lambda: float
    phi: float = PHI
    F_neg: float = field(init=False, repr=False)
    psi: float = field(init=False)
    xi: float = field(init=False)
    delta: float = field(init=False)

    def __post_init__(self):
        if self.lambda0 < 0 or self.x <= 0 or self.phi < 0:
            raise InadmissibleContext("need lambda0 >= 0, x > 0, phi >= 0")
        if self.Lambda < self.lambda0:
            raise InadmissibleContext("Lambda below lambda0")
        if self.lambda0 / self.x > B0 + 1e-12:
            raise InadmissibleContext(f"lambda0/x = {self.lambda0 / self.x:.6g} exceeds {B0}")
        if (self.Lambda - self.lambda0) / self.x > A0 + 1e-12:
            raise InadmissibleContext(f"(Lambda - lambda0)/x exceeds {A0}")
        F_neg = float(eval_G(-self.lambda0 / self.x))
        psi = float(eval_G((self.Lambda - self.lambda0) / self.x)) / F_neg
        xi = KernelScale(self.x).f0 * self.phi / (2.0 * F_neg)
        object.__setattr__(self, "F_neg", F_neg)
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "delta", psi - xi)

    @property
    def count_admissible(self) -> bool:
        return self.delta**2 > self.xi

    @property
    def class_admissible(self) -> bool:
        return self.delta > 0


def zero_count_bound(ctx: DensityContext) -> float:
    """(1 - xi) / (Delta^2 - xi): zeros of all L-functions with lambda <= Lambda."""
    if not ctx.count_admissible:
        raise InadmissibleContext(f"bound vacuous: Delta^2={ctx.delta**2:.6g} <= xi={ctx.xi:.6g}")
    return (1.0 - ctx.xi) / (ctx.delta**2 - ctx.xi)


def class_zero_count_bound(ctx: DensityContext) -> float:
    """1 / Delta^2: zeros within one class of characters with lambda <= Lambda."""
    if not ctx.class_admissible:
        raise InadmissibleContext(f"Delta={ctx.delta:.6g} <= 0")
    return 1.0 / ctx.delta**2


class Budget(NamedTuple):
    normalized: float  # bound on sum (psi_j - psi)
    unnormalized: float  # the same times F(-lambda0)


def deficiency_budget(ctx: DensityContext) -> Budget:
    if not ctx.count_admissible:
        raise InadmissibleContext(f"bound vacuous: Delta^2={ctx.delta**2:.6g} <= xi={ctx.xi:.6g}")
    d = (1.0 - ctx.xi) / (2.0 * ctx.delta)
    return Budget(d, d * ctx.F_neg)


def _class_count_or_inf(lambda0, x, Lambda, phi):
    try:
        return class_zero_count_bound(DensityContext(lambda0, x, Lambda, phi))
    except InadmissibleContext:
        return math.inf


def min_lambda_for_count(N: int, lambda0: float, x: float, phi: float = PHI, tol: float = LAMBDA_TOL) -> float:
    """Largest Lambda with class count bound < N; a class has no N-th zero below it.

    Delta decreases in Lambda, so the count bound increases and bisection on
    the predicate ``count < N`` is valid.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    count = lambda L: _class_count_or_inf(lambda0, x, L, phi)
    lo, hi = lambda0, lambda0 + A0 * x
    if lambda0 / x > B0 + 1e-12:
        raise InadmissibleContext(f"lambda0/x = {lambda0 / x:.6g} exceeds {B0}")
    if not count(lo) < N:
        raise InadmissibleContext(f"no sign change: bound already >= {N} at lambda0")
    if count(hi) < N:
        raise InadmissibleContext(f"no sign change: bound < {N} on the whole admissible range")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if count(mid) < N:
            lo = mid
        else:
            hi = mid
    return lo


def default_x_grid(lo: float = 0.6, hi: float = 1.7, step: float = 0.01) -> list[float]:
    n = int(round((hi - lo) / step))
    return [round(lo + k * step, 10) for k in range(n + 1)]


def band_count_bound(Lambda: float, lambda0: float, phi: float, x_grid: Sequence[float]) -> tuple[float, float]:
    """Smallest class count bound over the scale grid, with the scale achieving it.

    Ties go to the smaller scale.
    """
    best, best_x = math.inf, None
    for x in sorted(x_grid):
        c = _class_count_or_inf(lambda0, x, Lambda, phi)
        if c < best:
            best, best_x = c, x
    if best_x is None:
        raise InadmissibleContext(f"no admissible scale at Lambda={Lambda}")
    return best, best_x


@dataclass
class ZeroSchedule:
    """Lower bounds for the N-th zero of a class, N = 2, 3, ..., until ``upto``."""

    lambda0: float
    bounds: dict[int, float]
    scales: dict[int, float | None]

    def count_below(self, lam: float) -> int | None:
        """Largest N allowed with lambda_N <= lam, None if lam is past the schedule."""
        for N in sorted(self.bounds):
            if self.bounds[N] > lam:
                return N - 1
        return None


def build_zero_schedule(lambda0: float, x_grid: Sequence[float], upto: float = 3.0, phi: float = PHI,
                        max_n: int = 500) -> ZeroSchedule:
    bounds, scales = {1: lambda0}, {1: None}
    xs = [x for x in x_grid if lambda0 / x <= B0 + 1e-12]
    for N in range(2, max_n):
        best, best_x = lambda0, None
        for x in xs:
            try:
                v = min_lambda_for_count(N, lambda0, x, phi)
            except InadmissibleContext:
                continue
            if v > best:
                best, best_x = v, x
        bounds[N], scales[N] = best, best_x
        if best >= upto:
            return ZeroSchedule(lambda0, bounds, scales)
    raise RuntimeError("schedule did not reach the requested height")


def rational_exponents(params: WeightParams = STANDARD_PARAMS) -> dict[str, Fraction]:
    return {
        "all": params.in_mode(ALL_CHARACTERS).growth_exponent,
        "class": params.in_mode(ONE_CLASS).growth_exponent,
        "gap": params.gap_exponent,
    }


def weighted_sum_table(params: WeightParams = STANDARD_PARAMS) -> list[dict]:
    rows = []
    for lam_key, e_key in THRESHOLDS:
        lam = fact(lam_key)
        rows.append({
            "id": e_key,
            "Lambda": lam,
            "value": weighted_sum_bound(params, lam),
            "paper_value": fact(e_key),
            "citation": FACTS[e_key].citation,
        })
    return rows
