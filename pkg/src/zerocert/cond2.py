"""Grid certification of the half-plane comparison inequality for G.

For 0 <= a <= 13, 0 <= b <= 1.25 and real t we need

    Re G(a + it) / G(a)  >=  Re G(-b + it) / G(-b).

Analytic estimates settle |t| <= pi/2 and the large-|t| ranges; what is
left is three bounded boxes, checked here on a lattice in binary64.  This
is a floating-point check, not an interval-arithmetic proof.

The slack separates: slack(a, b, t) = psi_t(a) - psi_t(-b), so its lattice
minimum at fixed t is min_a psi_t(a) - max_b psi_t(-b).  Rounding is
monotone, so this equals the minimum of the pointwise differences exactly.
The point a = b = 0 compares an expression with itself and is reported as
trivial rather than folded into the minimum.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .kernel import eval_G, eval_G_deriv

A0 = 13.0
B0 = 1.25
DEFAULT_STEPS = (0.01, 0.01, 0.005)
T_CAP = 1e3


def _lattice(lo: float, hi: float, step: float, *, open_lo=False, open_hi=False) -> np.ndarray:
    if hi < lo:
        raise ValueError("empty range")
    n = int(math.floor((hi - lo) / step + 1e-9))
    pts = lo + step * np.arange(n + 1)
    if open_lo:
        pts = pts[pts > lo]
    if open_hi:
        pts = pts[pts < hi - 1e-12]
    return pts


@dataclass(frozen=True)
class GridRegion:
    name: str
    a_range: tuple[float, float]
    b_range: tuple[float, float]
    t_range: tuple[float, float]
    steps: tuple[float, float, float] = DEFAULT_STEPS
    t_open: tuple[bool, bool] = (False, True)

    def __post_init__(self):
        (alo, ahi), (blo, bhi), (tlo, thi) = self.a_range, self.b_range, self.t_range
        if not (0 <= alo <= ahi <= A0):
            raise ValueError(f"a_range {self.a_range} outside [0, {A0}]")
        if not (0 <= blo <= bhi <= B0):
            raise ValueError(f"b_range {self.b_range} outside [0, {B0}]")
        if not (0 <= tlo <= thi):
            raise ValueError(f"bad t_range {self.t_range}")
        if any(s <= 0 for s in self.steps):
            raise ValueError("steps must be positive")

    def with_steps(self, steps) -> "GridRegion":
        return GridRegion(self.name, self.a_range, self.b_range, self.t_range, tuple(steps), self.t_open)

    def axes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        sa, sb, st = self.steps
        a = _lattice(*self.a_range, sa)
        b = _lattice(*self.b_range, sb)
        t = _lattice(*self.t_range, st, open_lo=self.t_open[0], open_hi=self.t_open[1])
        return a, b, t


def default_regions(steps=DEFAULT_STEPS) -> dict[str, GridRegion]:
    """The three residual boxes, plus the wider hand-off box for 14 <= |t| < 50."""
    return {
        "1": GridRegion("1", (0.0, 0.0), (0.0, 0.14), (14.0, 50.0), steps, (False, True)),
        "2": GridRegion("2", (0.0, 13.0), (0.0, 0.14), (8.0, 14.0), steps, (False, True)),
        "3": GridRegion("3", (0.0, 13.0), (0.0, 1.25), (math.pi / 2, 8.0), steps, (True, True)),
        "handoff": GridRegion("handoff", (0.0, 13.0), (0.0, 0.14), (14.0, 50.0), steps, (False, True)),
    }


@dataclass
class SlackCertificate:
    region: GridRegion
    min_slack: float
    argmin: tuple[float, float, float]
    points_checked: int
    margin: float = 0.0
    trivial_points: int = 0
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = bool(self.min_slack >= self.margin)


def psi(a, t):
    """Re G(a + it) / G(a)."""
    a = np.asarray(a, dtype=float)
    return np.real(eval_G(a + 1j * np.asarray(t, dtype=float))) / eval_G(a)


def cond2_slack(a, b, t):
    """Re G(a+it)/G(a) - Re G(-b+it)/G(-b); nonnegative means the inequality holds."""
    return psi(a, t) - psi(0.0 - np.asarray(b, dtype=float), t)


def _chunk_extrema(a, b, t):
    ga = eval_G(a)[:, None]
    gb = eval_G(0.0 - b)[:, None]
    pa = np.real(eval_G(a[:, None] + 1j * t[None, :])) / ga
    pb = np.real(eval_G((0.0 - b)[:, None] + 1j * t[None, :])) / gb
    return pa, pb


def _scan_chunk(a, b, t):
    """Per-chunk nontrivial minimum and its (ia, ib, it) lattice index."""
    pa, pb = _chunk_extrema(a, b, t)
    a0 = a[0] == 0.0
    b0 = b[0] == 0.0
    best = (math.inf, None)

    def consider(pa_rows, a_off, pb_rows, b_off):
        nonlocal best
        if pa_rows.shape[0] == 0 or pb_rows.shape[0] == 0:
            return
        ia = np.argmin(pa_rows, axis=0)
        ib = np.argmax(pb_rows, axis=0)
        cols = np.arange(t.size)
        s = pa_rows[ia, cols] - pb_rows[ib, cols]
        k = int(np.argmin(s))
        cand = (float(s[k]), (int(ia[k]) + a_off, int(ib[k]) + b_off, k))
        if cand[0] < best[0] or (cand[0] == best[0] and best[1] is not None and cand[1] < best[1]):
            best = cand

    if a0 and b0:
        consider(pa[1:], 1, pb, 0)
        consider(pa[:1], 0, pb[1:], 1)
        trivial = t.size
    else:
        consider(pa, 0, pb, 0)
        trivial = 0
    return best, trivial


def verify_region(region: GridRegion, margin: float = 0.0, workers: int = 1, chunk: int = 256) -> SlackCertificate:
    """Evaluate the slack over the full lattice of ``region``.

    Only t >= 0 is scanned; the slack is even in t.  The certificate passes
    when the nontrivial minimum is at least ``margin``.
    """
    a, b, t = region.axes()
    chunks = [(i, t[i:i + chunk]) for i in range(0, t.size, chunk)]
    job = lambda c: (c[0], _scan_chunk(a, b, c[1]))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, chunks))
    else:
        results = [job(c) for c in chunks]

    best_val, best_idx, trivial = math.inf, None, 0
    for offset, ((val, idx), triv) in results:
        trivial += triv
        if idx is None:
            continue
        idx = (idx[0], idx[1], idx[2] + offset)
        if val < best_val or (val == best_val and idx < best_idx):
            best_val, best_idx = val, idx
    if best_idx is None:
        best_val, argmin = 0.0, (float(a[0]), float(b[0]), float(t[0]) if t.size else 0.0)
    else:
        argmin = (float(a[best_idx[0]]), float(b[best_idx[1]]), float(t[best_idx[2]]))
    return SlackCertificate(
        region=region,
        min_slack=float(best_val),
        argmin=argmin,
        points_checked=int(a.size * b.size * t.size),
        margin=margin,
        trivial_points=trivial,
    )


@dataclass
class Check:
    name: str
    value: float
    passed: bool
    detail: str = ""


def range_reduction_checks(samples: int = 2001) -> list[Check]:
    """Numerical side conditions behind the analytic range reductions."""
    checks: list[Check] = []
    bs = np.linspace(0.0, 1.25, samples)

    h = lambda b: 8.0 / 9.0 * eval_G(-b) + b * eval_G_deriv(-b)
    hv = h(bs)
    checks.append(Check("h(1.25) > 1/90", float(h(1.25)), bool(h(1.25) > 1 / 90 and np.all(np.diff(hv) < 0)),
                        "h decreasing on [0, 1.25] so its minimum is at 1.25"))

    d125 = abs(float(eval_G_deriv(-1.25)))
    dv = np.abs(eval_G_deriv(-bs))
    gv = eval_G(-bs)
    checks.append(Check("|G'(-1.25)| < 1.36", d125, bool(d125 < 1.36 and np.all(dv <= d125 + 1e-15))))
    checks.append(Check("G(-b) >= 8/9 on [0, 1.25]", float(gv.min()), bool(np.all(gv >= 8 / 9 - 1e-15))))
    ratio = gv - np.maximum(9 / 8 * bs * dv, 0.65 * dv)
    checks.append(Check("G(-b) >= max(9/8 b|G'|, 0.65|G'|)", float(ratio.min()), bool(ratio.min() >= 0)))

    htilde = lambda b: 16.0 * b - 975.0 / 1024.0 * (np.exp(2.0 * b) + 1.0)
    b_turn = 0.5 * math.log(8192 / 975)
    inner = np.linspace(0.14, 1.25, samples)
    m_end = float(min(htilde(0.14), htilde(1.25)))
    m_grid = float(htilde(inner).min())
    checks.append(Check("turning point inside [0.14, 1.25]", b_turn, 0.14 < b_turn < 1.25))
    checks.append(Check("min of htilde at an endpoint", m_grid - m_end, bool(abs(m_grid - m_end) < 1e-12)))
    checks.append(Check("min htilde = 0.028 > 0", m_end, bool(m_end > 0 and abs(m_end - 0.028) < 1e-3)))

    large_t = 16 * (27 / 15 - 1 - 3 / 14 - 3 / 14**2 - 3 / 14**3)
    checks.append(Check("large-t derivative constant > 9", large_t, large_t > 9))
    left = 16 / 15 * (0.957 - 8 / 9 - 1.55 * 0.015)
    checks.append(Check("left-edge constant > 1/25", left, left > 1 / 25))
    checks.append(Check("60/64 * 65/64 = 975/1024", 60 / 64 * 65 / 64, 60 * 65 * 1024 == 975 * 64 * 64))
    return checks


def _phi(a, t):
    """Re G'(z) G(a) - Re G(z) G'(a): G(a)^2 times d psi_t / da."""
    z = a + 1j * t
    return np.real(eval_G_deriv(z)) * eval_G(a) - np.real(eval_G(z)) * eval_G_deriv(a)


@dataclass
class SpotCheck:
    name: str
    samples: int
    min_scaled_slack: float
    first_violation: tuple[float, float] | None

    @property
    def passed(self) -> bool:
        return self.first_violation is None


def analytic_region_spotcheck(samples: int = 10_000, seed: int = 0, t_cap: float = T_CAP) -> list[SpotCheck]:
    """Random corroboration of the inequalities proved for the unbounded ranges.

    Slacks are multiplied by |z|^4 (resp. |z|^2) so they stay O(1).
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    sign = lambda n: rng.choice([-1.0, 1.0], n)
    out = []

    def report(name, re, t, slack):
        bad = np.nonzero(slack <= 0)[0]
        first = (float(re[bad[0]]), float(t[bad[0]])) if bad.size else None
        out.append(SpotCheck(name, samples, float(slack.min()), first))

    a = rng.uniform(0, A0, samples)
    t = sign(samples) * rng.uniform(14, t_cap, samples)
    z2 = a * a + t * t
    report("Re G'(z) > 9/|z|^4", a, t, (np.real(eval_G_deriv(a + 1j * t)) - 9 / z2**2) * z2**2)

    b = rng.uniform(0, B0, samples)
    t = sign(samples) * rng.uniform(50, t_cap, samples)
    z2 = b * b + t * t
    report("Phi_t(-b) > G(-b)/(25|z|^2)", -b, t, (_phi(-b, t) - eval_G(-b) / (25 * z2)) * z2)

    b = rng.uniform(0.14, B0, samples)
    t = sign(samples) * rng.uniform(8, t_cap, samples)
    z2 = b * b + t * t
    report("Re G(z) < -1/(140|z|^2)", -b, t, (-1 / (140 * z2) - np.real(eval_G(-b + 1j * t))) * z2)
    return out


def psi_monotone_defect(n_a: int = 801, n_t: int = 101) -> float:
    """Most negative forward difference of psi_t(a) over a in [-3, 13], |t| <= pi/2."""
    a = np.linspace(-3.0, 13.0, n_a)
    t = np.linspace(0.0, math.pi / 2, n_t)
    vals = psi(a[:, None], t[None, :])
    return float(np.diff(vals, axis=0).min())
