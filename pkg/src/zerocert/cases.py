"""Case analysis bounding S = sum_i S_i^2 below 1.

Each class sum S_i = A int_0^H N_i(lambda) e^{-A lambda} d lambda (A = 25/7) is
split at a threshold into a low part a_i and a tail b_i, and

    S <= sum a_i^2 + max b_i (2 sum a_i + sum b_i).

Tail bounds integrate step-function majorants of N_i against A e^{-A lambda};
low sums come from the deficiency budget plus the greedy maximizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .density import (
    ONE_CLASS,
    STANDARD_PARAMS,
    DensityContext,
    InadmissibleContext,
    band_count_bound,
    build_zero_schedule,
    certified_E,
    default_x_grid,
    deficiency_budget,
)
from .extremal import ExtremalProblem, greedy_optimize, objective_S_prime
from .facts import FACTS, THETA, WEIGHT, fact

A = float(WEIGHT)
LAMBDA0 = fact("Lambda0")
LAMBDA1 = fact("Lambda1")
LAMBDA2 = fact("Lambda2")


@dataclass(frozen=True)
class CaseSpec:
    """One branch of the case split.

    Tail cases (``kind == "tail"``) bound max_i b_i for a class whose zeros
    lie above ``lambda0``; low cases bound sum_i a_i given the leading zero.
    """

    id: int
    kind: str
    lambda0: float
    lambda1_range: tuple[float, float] = (0.0, math.inf)
    x_main: float | None = None
    zero_facts: tuple[str, ...] = ()
    Lambda_split: float = LAMBDA0
    Lambda_tail_cut: float | None = None
    leading: int = 0  # zeros that may sit at lambda0
    isolated: int = 0  # zeros allowed below ``others_floor`` in a tail case
    others_floor: float | None = None

    def __post_init__(self):
        if self.kind not in ("tail", "low"):
            raise ValueError(f"unknown case kind {self.kind!r}")
        if self.kind == "tail" and self.Lambda_tail_cut is None:
            raise ValueError("tail cases need a cut")
        if self.kind == "low" and self.x_main is None:
            raise ValueError("low cases need a kernel scale")


TAIL_CASES = {
    1: CaseSpec(1, "tail", fact("sparse_class_floor") - 1e-8, zero_facts=("sparse_class_floor",),
                Lambda_tail_cut=6.6),
    2: CaseSpec(2, "tail", fact("two_zero_region"), zero_facts=("two_zero_region",), Lambda_tail_cut=6.4),
    3: CaseSpec(3, "tail", 0.35, Lambda_tail_cut=6.0),
    4: CaseSpec(4, "tail", 0.0, zero_facts=("real_small_others_floor",), Lambda_tail_cut=5.8,
                isolated=1, others_floor=fact("real_small_others_floor")),
}

LOW_CASES = {
    1: CaseSpec(1, "low", 0.68, (0.68, math.inf), 0.7, ("two_zero_region",),
                leading=2, others_floor=fact("two_zero_region")),
    2: CaseSpec(2, "low", 0.6, (0.6, 0.68), 0.68, ("case2_others_floor",),
                leading=2, others_floor=fact("case2_others_floor")),
    3: CaseSpec(3, "low", 0.5, (0.5, 0.6), 0.68, ("case3_others_floor",),
                leading=2, others_floor=fact("case3_others_floor")),
    4: CaseSpec(4, "low", fact("one_zero_region"), (fact("one_zero_region"), 0.5), 0.68,
                ("one_zero_region", "case4_others_floor"), leading=1, others_floor=fact("case4_others_floor")),
    5: CaseSpec(5, "low", 0.35, (0.35, fact("one_zero_region")), 0.68, ("case5_others_floor",),
                leading=1, others_floor=fact("case5_others_floor")),
}


@dataclass
class TailBound:
    total: float
    below_schedule: float
    bands: float
    tail: float
    pieces: list[tuple[float, float, int]] = field(default_factory=list)


def _weight_mass(lo: float, hi: float) -> float:
    """A int_lo^hi e^{-A lambda} d lambda."""
    return math.exp(-A * lo) - math.exp(-A * hi)


def b_max_breakdown(case_j: int, Lambda_split: float = LAMBDA0, band_step: float = 0.1,
                    x_grid=None, schedule_top: float = 3.0) -> TailBound:
    """Tail bound for one class with a step majorant of its zero count.

    Below ``schedule_top`` the count comes from the N-th zero lower bounds,
    between ``schedule_top`` and the case's cut from the best class count on
    each band's right endpoint, and beyond the cut from the count envelope.
    """
    spec = TAIL_CASES[case_j]
    xs = default_x_grid() if x_grid is None else x_grid
    floor = spec.others_floor if spec.others_floor is not None else -math.inf
    split = max(Lambda_split, 0.0)
    top = max(schedule_top, split)
    schedule = build_zero_schedule(spec.lambda0, xs, upto=top)

    breaks = {split, top}
    breaks.update(v for v in schedule.bounds.values() if split < v < top)
    if split < floor < top:
        breaks.add(floor)
    pts = sorted(breaks)
    pieces, below = [], 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        n = spec.isolated if lo < floor else schedule.count_below(lo)
        pieces.append((lo, hi, n))
        below += n * _weight_mass(lo, hi)

    bands = 0.0
    k, cut = 0, spec.Lambda_tail_cut
    start = top
    while True:
        lo = round(start + k * band_step, 10)
        hi = round(start + (k + 1) * band_step, 10)
        if hi > cut + 1e-9:
            break
        if hi <= floor:
            n = spec.isolated
        else:
            bound, _ = band_count_bound(hi, spec.lambda0, STANDARD_PARAMS.phi, xs)
            n = math.floor(bound)
        pieces.append((lo, hi, n))
        bands += n * _weight_mass(lo, hi)
        k += 1
    tail_start = max(cut, start)

    E = certified_E(tail_start, STANDARD_PARAMS.in_mode(ONE_CLASS)).value
    growth = float(STANDARD_PARAMS.in_mode(ONE_CLASS).growth_exponent)
    tail = A * E / (A - growth) * math.exp(-(A - growth) * tail_start)
    return TailBound(below + bands + tail, below, bands, tail, pieces)


def b_max_bound(case_j: int, Lambda_split: float = LAMBDA0, **kw) -> float:
    if case_j not in TAIL_CASES:
        raise ValueError(f"tail case must be one of {sorted(TAIL_CASES)}")
    return b_max_breakdown(case_j, Lambda_split, **kw).total


def b_total_bound(Lambda_split: float = LAMBDA0) -> float:
    """exp(-(A - 8/3) L) times the weighted-sum bound valid at L."""
    if Lambda_split < LAMBDA0:
        raise ValueError("split below the first threshold")
    gap = float(WEIGHT - STANDARD_PARAMS.growth_exponent)
    return math.exp(-gap * Lambda_split) * certified_E(Lambda_split).value


def zeros_below(case_j: int, Lambda: float = LAMBDA0, x_grid=None) -> int:
    """Most zeros one class can have at or below ``Lambda`` in a tail case."""
    spec = TAIL_CASES[case_j]
    xs = default_x_grid() if x_grid is None else x_grid
    if spec.others_floor is not None and Lambda < spec.others_floor:
        return spec.isolated
    n = build_zero_schedule(spec.lambda0, xs, upto=Lambda + 1e-6).count_below(Lambda)
    if n is None:
        raise ValueError("schedule too short")
    return n


def case_partition() -> list[tuple[str, float, float]]:
    """Ranges of the leading zero handled by each low-sum case, in increasing order."""
    parts = [
        ("8", 0.0, fact("case7_leading_zero_min")),
        ("7", fact("case7_leading_zero_min"), fact("case6_leading_zero_min")),
        ("6", fact("case6_leading_zero_min"), LOW_CASES[5].lambda0),
    ]
    parts += [(str(nu), *LOW_CASES[nu].lambda1_range) for nu in (5, 4, 3, 2, 1)]
    return parts


def partition_gaps(parts: list[tuple[str, float, float]] | None = None) -> list[tuple[float, float]]:
    """Uncovered subintervals of (0, inf); empty when the cases cover everything."""
    parts = case_partition() if parts is None else parts
    gaps, reach = [], 0.0
    for _, lo, hi in sorted(parts, key=lambda p: p[1]):
        if lo > reach:
            gaps.append((reach, lo))
        reach = max(reach, hi)
    if reach < math.inf:
        gaps.append((reach, math.inf))
    return gaps


@dataclass
class LowSum:
    case: int
    value: float
    method: str
    configuration: list[float] = field(default_factory=list)
    solved_lambda: float | None = None
    solved_target: float | None = None
    budget: float | None = None


def low_sum_greedy(case: CaseSpec, Lambda: float = LAMBDA0, slots: int = 64) -> LowSum:
    ctx = DensityContext(case.lambda0, case.x_main, Lambda)
    budget = deficiency_budget(ctx).unnormalized
    d0 = Lambda - case.lambda0
    caps = (d0,) * case.leading + (max(Lambda - case.others_floor, 0.0),) * slots
    problem = ExtremalProblem(d0, caps, budget, A, 0.0, case.x_main)
    config = greedy_optimize(problem)
    if config.solved_index is None:
        raise RuntimeError("budget not exhausted; increase slots")
    r = config.solved_index
    target = float(problem.F(d0 - config.values[r]))
    return LowSum(case.id, objective_S_prime(config, Lambda, A), "greedy",
                  [Lambda - d for d in config.values[: r + 1]], Lambda - config.values[r], target, budget)


def _single_zero(lam: float, split: float = LAMBDA0) -> float:
    return math.exp(-A * lam) - math.exp(-A * split)


def a_sum_bound(case_nu: int, lambda1: float | None = None) -> LowSum:
    """Bound on sum_i a_i in the given leading-zero case.

    Cases 7 and 8 depend on the leading zero itself; ``lambda1`` defaults to
    the lower end of the case's range, where the bound is largest.
    """
    if case_nu in (1, 2, 3, 5):
        return low_sum_greedy(LOW_CASES[case_nu])
    if case_nu == 4:
        # complex leading zero with its conjugate, or a real one handled like cases 1-3
        real_branch = low_sum_greedy(LOW_CASES[4])
        val = max(complex_pair_bound(), real_branch.value)
        return LowSum(4, val, "max(complex pair, greedy)", real_branch.configuration)
    if case_nu == 6:
        return LowSum(6, _single_zero(fact("case6_leading_zero_min")), "single real zero")
    if case_nu == 7:
        lam = fact("case7_leading_zero_min") if lambda1 is None else lambda1
        return LowSum(7, _single_zero(lam, LAMBDA1), "single real zero")
    if case_nu == 8:
        if lambda1 is None:
            raise ValueError("case 8 needs the leading zero")
        return LowSum(8, _single_zero(lambda1, case8_split(lambda1)), "single real zero")
    raise ValueError("case must be 1..8")


def complex_pair_bound() -> float:
    return 2 * _single_zero(fact("one_zero_region"))


@dataclass
class Combination:
    a_max: float
    c1: float
    c2: float
    c3: float
    b_total: float
    S_minus: float = field(init=False)
    surplus_factor: float = field(init=False)
    delta1: float = field(init=False)
    delta2: float = field(init=False)
    total: float = field(init=False)

    def __post_init__(self):
        self.S_minus = self.a_max**2 + self.c1 * (2 * self.a_max + self.b_total)
        # up to two exceptional classes carry the larger surplus, weighted by 2 sum a_i + their own tails
        self.surplus_factor = 2 * self.a_max + 2 * self.c3
        self.delta1 = (self.c3 - self.c1) * self.surplus_factor
        self.delta2 = (self.c2 - self.c1) * (2 * self.c2)
        self.total = self.S_minus + self.delta1 + self.delta2


def combine_cases_1_to_6(a_max: float, c1: float, c2: float, c3: float, b_total: float) -> Combination:
    return Combination(a_max, c1, c2, c3, b_total)


@dataclass
class CaseReport:
    id: str
    a_sum_bound: float
    b_max_bound: float
    b_sum_bound: float
    S_bound: float
    certified: bool = field(init=False)
    uniform: bool = True
    provenance: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.certified = bool(self.S_bound < 1)

    def recombined(self) -> float:
        a = self.a_sum_bound
        return a * a + self.b_max_bound * (2 * a + self.b_sum_bound)


def case7_bound(b_max: float | None = None, b_total: float | None = None, a_sum: float | None = None) -> CaseReport:
    a = a_sum_bound(7).value if a_sum is None else a_sum
    bt = b_total_bound(LAMBDA1) if b_total is None else b_total
    bm = fact("c_star_4") if b_max is None else b_max
    S = a * a + bm * (2 * a + bt)
    return CaseReport("7", a, bm, bt, S, provenance=[
        "low sum: single real zero at the lower end of its range",
        "tail sum: weighted-sum bound at Lambda1",
        "tail max: " + ("published single-real-zero class bound" if b_max is None else "recomputed"),
    ])


def case8_split(lambda1: float) -> float:
    return max(fact("repulsion_factor") * math.log(1 / lambda1), LAMBDA2)


@dataclass
class Case8Result:
    report: CaseReport
    b_sum_at_max: float
    b_sum_majorant: float
    slack_ratio: float
    cross_factor: float
    sweep_max_explicit: float
    sweep_max_chain: float
    sweep_points: int
    chain_ok: bool


def case8_certify(lambda1_max: float = 0.04, sweep: int = 1000) -> Case8Result:
    """Certify S(lambda1) < 1 for every lambda1 in (0, lambda1_max].

    Three layers: the explicit case bound, its majorant
    exp(-2A l) + k E2 l^{11/7}, and the linear majorant exp(-7 l) + 5 l, which is
    < 1 on the range because (1 - e^{-7 l})/l decreases and exceeds 5 at the end.
    """
    if not 0 < lambda1_max <= 0.04:
        raise ValueError("lambda1_max must lie in (0, 0.04]")
    E2 = certified_E(LAMBDA2).value
    gap_all = float(WEIGHT - STANDARD_PARAMS.growth_exponent)
    gap_cls = float(WEIGHT - STANDARD_PARAMS.in_mode(ONE_CLASS).growth_exponent)
    e_sum = float(gap_all * Fraction(12, 11))  # 76/77
    e_max = 11 / 7
    lin = fact("case8_linear_coeff")
    k_pub = fact("case8_cross_factor")

    b_sum_major = E2 * lambda1_max**e_sum
    cross = 2.0 + b_sum_major  # 2 sum a_i + sum b_i with sum a_i < 1
    ratio = -math.expm1(-7 * lambda1_max) / lambda1_max

    lams = lambda1_max * np.arange(1, sweep + 1) / sweep
    explicit, chain = [], []
    chain_ok = True
    for lam in lams:
        split = case8_split(lam)
        a = _single_zero(lam, split)
        bs = E2 * math.exp(-gap_all * split)
        bm = E2 * math.exp(-gap_cls * split)
        chain_ok &= bs <= E2 * lam**e_sum * (1 + 1e-12) and bm <= E2 * lam**e_max * (1 + 1e-12)
        explicit.append(a * a + bm * (2 * a + bs))
        mid = math.exp(-2 * A * lam) + k_pub * E2 * lam**e_max
        chain_ok &= mid <= math.exp(-7 * lam) + lin * lam
        chain.append(mid)
    chain_ok &= cross <= k_pub and ratio > lin
    worst = max(explicit)
    split = case8_split(lambda1_max)
    report = CaseReport("8", math.exp(-A * lams[0]), E2 * lambda1_max**e_max, b_sum_major, worst, uniform=False,
                        provenance=["pointwise: the bound tends to 1 as the leading zero tends to 0",
                                    f"sweep of {sweep} points on (0, {lambda1_max}]"])
    report.certified = bool(worst < 1 and max(chain) < 1 and chain_ok)
    return Case8Result(report, E2 * math.exp(-gap_all * split), b_sum_major, ratio, cross,
                       worst, max(chain), sweep, bool(chain_ok))


@dataclass
class ChainInputs:
    """Constants feeding the combination step, with their origin."""

    a_max: float
    c1: float
    c2: float
    c3: float
    c4_case7: float
    a_case7: float
    b_total_L0: float
    b_total_L1: float
    label: str


def published_inputs() -> ChainInputs:
    return ChainInputs(fact("c_tilde_2"), fact("c_star_1"), fact("c_star_2"), fact("c_star_3"),
                       fact("c_star_4"), fact("case7_a_sum"), fact("b_total_L0"), fact("b_total_L1"), "published")


@dataclass
class Recomputed:
    low: dict[int, LowSum | None]
    low_errors: dict[int, str]
    tails: dict[int, float]
    tail_case7: float
    b_total_L0: float
    b_total_L1: float

    def inputs(self) -> ChainInputs:
        lows = [ls.value for ls in self.low.values() if ls is not None]
        lows += [fact(f"c_tilde_{k}") for k in self.low_errors]  # published stand-ins
        return ChainInputs(max(lows), self.tails[1], self.tails[2], self.tails[3], self.tail_case7,
                           a_sum_bound(7).value, self.b_total_L0, self.b_total_L1, "recomputed")


def recompute_all(band_step: float = 0.1, x_grid=None) -> Recomputed:
    """Every low and tail constant from scratch.

    Low cases whose density context is vacuous are listed in ``low_errors``;
    the chain then substitutes the published constant for them.
    """
    low, errors = {}, {}
    for nu in range(1, 7):
        try:
            low[nu] = a_sum_bound(nu)
        except InadmissibleContext as exc:
            low[nu] = None
            errors[nu] = str(exc)
    tails = {j: b_max_bound(j, band_step=band_step, x_grid=x_grid) for j in TAIL_CASES}
    tail7 = b_max_bound(4, LAMBDA1, band_step=band_step, x_grid=x_grid)
    return Recomputed(low, errors, tails, tail7, b_total_bound(LAMBDA0), b_total_bound(LAMBDA1))


@dataclass
class Verdict:
    chains: dict[str, dict[str, CaseReport]]
    combinations: dict[str, Combination]
    case8: Case8Result
    c0: float
    certified: bool
    theta: Fraction = THETA
    weight: Fraction = WEIGHT
    exponent: Fraction = 1 - THETA
    caveat: str = ("nominal epsilon-free bounds; zero-free regions and density theorems are "
                   "taken as inputs, not re-proved")


def evaluate_chain(inp: ChainInputs) -> tuple[dict[str, CaseReport], Combination]:
    comb = combine_cases_1_to_6(inp.a_max, inp.c1, inp.c2, inp.c3, inp.b_total_L0)
    r16 = CaseReport("1-6", inp.a_max, inp.c3, inp.b_total_L0, comb.total,
                     provenance=[f"{inp.label} constants", "two exceptional classes carry surplus"])
    r7 = case7_bound(inp.c4_case7, inp.b_total_L1, inp.a_case7)
    r7.provenance.append(f"{inp.label} constants")
    return {"1-6": r16, "7": r7}, comb


def final_verdict(recomputed: Recomputed | None = None, overrides: dict[str, float] | None = None) -> Verdict:
    """Certify every case under both the published and the recomputed constants.

    ``overrides`` replaces named chain inputs (sensitivity mode) in both chains.
    """
    chains, combos = {}, {}
    sources = [published_inputs()]
    if recomputed is not None:
        sources.append(recomputed.inputs())
    for inp in sources:
        for k, v in (overrides or {}).items():
            if not hasattr(inp, k):
                raise KeyError(k)
            setattr(inp, k, v)
        chains[inp.label], combos[inp.label] = evaluate_chain(inp)
    c8 = case8_certify()
    uniform = [r.S_bound for ch in chains.values() for r in ch.values()]
    c0 = 1.0 - max(uniform)
    certified = all(r.certified for ch in chains.values() for r in ch.values()) and c8.report.certified
    return Verdict(chains, combos, c8, c0, certified)
