"""Polynomial weight g, its Laplace transform G and the scaled family F_x.

    g(u) = (2 - u)^3 (4 + 6u + u^2) / 30          on [0, 2]
    G(z) = int_0^2 exp(-z u) g(u) du
    F_x(z) = G(z / x),  f_x(u) = x g(u x)

G is evaluated from its closed form away from the origin and from the
Taylor series built on the exact moments of g near it; the closed form
cancels catastrophically as |z| -> 0.  All evaluators accept scalars or
numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

SERIES_RADIUS = 0.5
SERIES_TERMS = 30
INVERT_XTOL = 1e-12


class DomainError(ValueError):
    """Raised when a monotone inversion cannot bracket its target."""


def _poly_mul(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _g_coefficients() -> list[Fraction]:
    two_minus_u = [Fraction(2), Fraction(-1)]
    cube = _poly_mul(_poly_mul(two_minus_u, two_minus_u), two_minus_u)
    quad = [Fraction(4), Fraction(6), Fraction(1)]
    return [c / 30 for c in _poly_mul(cube, quad)]


G_COEFFS: tuple[Fraction, ...] = tuple(_g_coefficients())


def moment(n: int) -> Fraction:
    """Exact n-th moment int_0^2 u^n g(u) du."""
    return sum(
        (c * Fraction(2) ** (n + k + 1) / (n + k + 1) for k, c in enumerate(G_COEFFS)),
        Fraction(0),
    )


MOMENTS: tuple[Fraction, ...] = tuple(moment(n) for n in range(SERIES_TERMS + 1))
# Taylor coefficients of G and G' about 0: G(z) = sum_n a_n z^n
_G_SERIES = np.array(
    [float((-1) ** n * MOMENTS[n] / math.factorial(n)) for n in range(SERIES_TERMS)]
)
_DG_SERIES = np.array(
    [float((-1) ** (n + 1) * MOMENTS[n + 1] / math.factorial(n)) for n in range(SERIES_TERMS)]
)


def eval_g(u):
    """g(u), zero outside [0, 2]."""
    u = np.asarray(u, dtype=float)
    val = (2.0 - u) ** 3 * (4.0 + 6.0 * u + u * u) / 30.0
    out = np.where((u >= 0.0) & (u <= 2.0), val, 0.0)
    return out if out.ndim else float(out)


def _two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _compensated_sum(terms):
    """Sum a sequence of real arrays with a running error term (Neumaier)."""
    total = terms[0]
    comp = np.zeros_like(total)
    for t in terms[1:]:
        total, err = _two_sum(total, t)
        comp = comp + err
    return total + comp


def _csum(terms):
    re = _compensated_sum([np.real(t) for t in terms])
    im = _compensated_sum([np.imag(t) for t in terms])
    return re + 1j * im


def _horner(coeffs: np.ndarray, z):
    acc = np.zeros_like(z)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def _closed_G(z):
    w = 1.0 / z
    w2 = w * w
    w3 = w2 * w
    w4 = w2 * w2
    tail = 4.0 * np.exp(-2.0 * z) * w4 * (1.0 + w) ** 2
    return _csum([16.0 / 15.0 * w, -8.0 / 3.0 * w3, 4.0 * w4, -4.0 * w4 * w2, tail])


def _closed_dG(z):
    w = 1.0 / z
    w2 = w * w
    w4 = w2 * w2
    tail = -8.0 * np.exp(-2.0 * z) * w4 * (1.0 + 4.0 * w + 6.0 * w2 + 3.0 * w2 * w)
    return _csum([-16.0 / 15.0 * w2, 8.0 * w4, -16.0 * w4 * w, 24.0 * w4 * w2 * w, tail])


_G_SERIES_L = _G_SERIES.tolist()
_DG_SERIES_L = _DG_SERIES.tolist()


def _scalar_closed_G(x: float) -> float:
    w = 1.0 / x
    w2 = w * w
    w4 = w2 * w2
    tail = 4.0 * math.exp(-2.0 * x) * w4 * (1.0 + w) ** 2
    return math.fsum((16.0 / 15.0 * w, -8.0 / 3.0 * w2 * w, 4.0 * w4, -4.0 * w4 * w2, tail))


def _scalar_closed_dG(x: float) -> float:
    w = 1.0 / x
    w2 = w * w
    w4 = w2 * w2
    tail = -8.0 * math.exp(-2.0 * x) * w4 * (1.0 + 4.0 * w + 6.0 * w2 + 3.0 * w2 * w)
    return math.fsum((-16.0 / 15.0 * w2, 8.0 * w4, -16.0 * w4 * w, 24.0 * w4 * w2 * w, tail))


def _scalar_series(coeffs: list[float], x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _dispatch(z, closed, coeffs):
    if type(z) is float or type(z) is int:
        # hot path for the scalar bisections
        x = float(z)
        if abs(x) < SERIES_RADIUS:
            return _scalar_series(_G_SERIES_L if coeffs is _G_SERIES else _DG_SERIES_L, x)
        try:
            return _scalar_closed_G(x) if closed is _closed_G else _scalar_closed_dG(x)
        except OverflowError:
            return math.inf if closed is _closed_G else -math.inf
    arr = np.asarray(z)
    real_input = not np.iscomplexobj(arr)
    zc = arr.astype(complex)
    small = np.abs(zc) < SERIES_RADIUS
    safe = np.where(small, 1.0, zc)
    with np.errstate(over="ignore", invalid="ignore"):
        val = np.where(small, _horner(coeffs, zc), closed(safe))
    if real_input:
        val = val.real
    return val if val.ndim else val[()]


def eval_G(z):
    """G(z); real input gives real output."""
    return _dispatch(z, _closed_G, _G_SERIES)


def eval_G_deriv(z):
    """G'(z), same closed-form/series switch as :func:`eval_G`."""
    return _dispatch(z, _closed_dG, _DG_SERIES)


def eval_G_closed(z):
    """Closed form only; loses accuracy for small |z|."""
    return _closed_G(np.asarray(z, dtype=complex))


def eval_G_series(z):
    """Truncated Taylor series only; accurate for small |z|."""
    return _horner(_G_SERIES, np.asarray(z, dtype=complex))


@dataclass(frozen=True)
class KernelScale:
    """Scale x of the family f_x(u) = x g(ux), F_x(z) = G(z/x)."""

    x: float

    def __post_init__(self):
        if not (self.x > 0 and math.isfinite(self.x)):
            raise ValueError(f"kernel scale must be positive, got {self.x}")

    @property
    def support_end(self) -> float:
        return 2.0 / self.x

    @property
    def f0(self) -> float:
        return 16.0 * self.x / 15.0

    def f(self, u):
        return self.x * eval_g(np.asarray(u, dtype=float) * self.x)

    def F(self, z):
        return eval_F(self, z)


def eval_F(scale: KernelScale, z):
    return eval_G(np.asarray(z) / scale.x)


def invert_G_real(target: float, lo: float = -8.0, hi: float = 8.0, max_doublings: int = 60) -> float:
    """The unique real u with G(u) = target.

    G is strictly decreasing on the real line, so the bracket is widened by
    doubling until it straddles the target and then refined.
    """
    if not target > 0:
        raise DomainError(f"G takes only positive values on the reals, target={target}")
    f = lambda u: float(eval_G(u)) - target
    for _ in range(max_doublings):
        if f(lo) >= 0:
            break
        lo *= 2.0
    else:
        raise DomainError(f"target {target} above reachable range")
    for _ in range(max_doublings):
        if f(hi) <= 0:
            break
        hi *= 2.0
    else:
        raise DomainError(f"target {target} below reachable range")
    if f(lo) == 0:
        return lo
    if f(hi) == 0:
        return hi
    return brentq(f, lo, hi, xtol=INVERT_XTOL, rtol=4 * np.finfo(float).eps, maxiter=500)


def eval_B_weight(phi: float, omega: float, y: float) -> float:
    """B_{phi,omega}(y) = (phi/2)(1 - e^{-2 omega y})/y + ((1 - e^{-omega y})/y)^2."""
    return phi / 2.0 * (-math.expm1(-2.0 * omega * y)) / y + (-math.expm1(-omega * y) / y) ** 2
