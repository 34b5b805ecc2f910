"""Published constants consumed by the bound evaluators.

Each entry carries the source it is quoted from.  Values are the published
ones; where a value can be recomputed the evaluators do so and compare.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType


@dataclass(frozen=True)
class Fact:
    value: float
    citation: str


WEIGHT = Fraction(25, 7)
THETA = Fraction(7, 25)

_SOURCE_DENSITY = "weighted density table"
_HB = "Heath-Brown zero-free region tables"
_XY = "Xylouris zero-free region tables"

_TABLE = {
    # zero-free facts (external inputs, trusted)
    "one_zero_region": Fact(0.44, "at most one zero, real and simple (" + _XY + ")"),
    "two_zero_region": Fact(0.702, "at most two zeros with multiplicity (" + _XY + ")"),
    "sparse_class_floor": Fact(6 / 7, "all but two classes and conjugates (" + _HB + ")"),
    "repulsion_factor": Fact(12 / 11, "exceptional-zero repulsion radius (" + _HB + ")"),
    "case2_others_floor": Fact(0.74, _XY),
    "case3_others_floor": Fact(0.97, _XY),
    "case4_others_floor": Fact(1.08, _HB),
    "case5_others_floor": Fact(1.18, _HB),
    "complex_case_others_floor": Fact(1.36, _XY),
    "real_small_others_floor": Fact(1.42, _HB),
    # thresholds and published weighted-sum bounds
    "Lambda0": Fact(1.311, _SOURCE_DENSITY),
    "Lambda1": Fact(2.421, _SOURCE_DENSITY),
    "Lambda2": Fact(3.96, _SOURCE_DENSITY),
    "Lambda3": Fact(5.8, _SOURCE_DENSITY),
    "E0": Fact(22.281, _SOURCE_DENSITY),
    "E1": Fact(15.6, _SOURCE_DENSITY),
    "E2": Fact(10.4, _SOURCE_DENSITY),
    "E3": Fact(7.01, _SOURCE_DENSITY),
    # published results of the case analysis, used as comparison targets
    "c_star_1": Fact(0.0722, "per-class tail bound, typical class"),
    "c_star_2": Fact(0.0751, "per-class tail bound, floor 0.702"),
    "c_star_3": Fact(0.0826, "per-class tail bound, floor 0.35"),
    "c_star_4": Fact(0.0715, "per-class tail bound, single real zero"),
    "c_tilde_1": Fact(0.612, "low-zero sum, leading zero >= 0.68"),
    "c_tilde_2": Fact(0.622, "low-zero sum, leading zero in [0.6, 0.68)"),
    "c_tilde_3": Fact(0.564, "low-zero sum, leading zero in [0.5, 0.6)"),
    "c_tilde_4": Fact(0.453, "low-zero sum, leading zero in [0.44, 0.5)"),
    "c_tilde_5": Fact(0.483, "low-zero sum, leading zero in [0.35, 0.44)"),
    "case7_leading_zero_min": Fact(0.04, "single real zero range"),
    "case6_leading_zero_min": Fact(0.14, "single real zero range"),
    "case8_cross_factor": Fact(2.87, "smallest-zero combination factor"),
    "case8_linear_coeff": Fact(5.0, "smallest-zero linear majorant"),
    "b_total_L0": Fact(6.805, "tail sum bound at Lambda0"),
    "b_total_L1": Fact(1.74516, "tail sum bound at Lambda1"),
    "case7_a_sum": Fact(0.86671, "low-zero sum, single real zero in [0.04, 0.14)"),
    "case7_S": Fact(0.99991, "single real zero in [0.04, 0.14)"),
    "cases1to6_S": Fact(0.9903, "combined bound, stated"),
    "cases1to6_S_proof": Fact(0.9832, "combined bound, derived in the argument"),
}

FACTS = MappingProxyType(_TABLE)

THRESHOLDS = (("Lambda0", "E0"), ("Lambda1", "E1"), ("Lambda2", "E2"), ("Lambda3", "E3"))


def fact(name: str) -> float:
    return FACTS[name].value


def citation(name: str) -> str:
    return FACTS[name].citation
