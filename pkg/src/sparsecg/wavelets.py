"""Wavelet and scaling-function prototypes for dictionary construction.

Eight families are supported.  Four are spline families whose prototypes are
piecewise polynomials evaluated in closed form (``cw4``, ``cw2``, ``cdf53``,
``short3``); four are defined by refinement filters and are evaluated by the
cascade iteration on a dyadic grid (``db4``, ``coif``, ``sym``, ``cdf97``).

Every prototype exposes point evaluation and the cumulative integral
``P(y) = integral of the prototype over (-inf, y]``.  The cumulative form is
what the dictionary builder consumes: atoms are cell averages, so a wavelet's
vanishing zeroth moment survives discretisation exactly (the cell integrals
telescope to the total integral, which is zero by construction).

Conventions: refinement masks sum to 2, i.e. ``phi(x) = sum_n a[n] phi(2x-n)``.
For the two biorthogonal families the primal (synthesis) side is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError

__all__ = [
    "WaveletFamily",
    "FAMILIES",
    "get_family",
    "bspline_eval",
    "bspline_cumulative",
    "scaling_prototype",
    "wavelet_prototype",
    "prototype_samples",
]


@dataclass(frozen=True)
class WaveletFamily:
    """Identity and generation method of one wavelet family.

    ``spline_order`` is set for families whose prototypes are piecewise
    polynomials (generated in closed form); it is ``None`` for families
    generated by the cascade iteration from their refinement filter.
    """

    name: str
    spline_order: int | None
    vanishing_moments: int

    @property
    def is_spline(self) -> bool:
        return self.spline_order is not None


FAMILIES: dict[str, WaveletFamily] = {
    "cw4": WaveletFamily("cw4", 4, 4),
    "cw2": WaveletFamily("cw2", 2, 2),
    "cdf97": WaveletFamily("cdf97", None, 4),
    "cdf53": WaveletFamily("cdf53", 2, 2),
    "db4": WaveletFamily("db4", None, 4),
    "coif": WaveletFamily("coif", None, 2),
    "sym": WaveletFamily("sym", None, 4),
    "short3": WaveletFamily("short3", 3, 3),
}


def get_family(family: "WaveletFamily | str") -> WaveletFamily:
    if isinstance(family, WaveletFamily):
        return family
    try:
        return FAMILIES[family]
    except KeyError:
        raise ConfigurationError(
            f"unknown wavelet family {family!r}; choose one of {sorted(FAMILIES)}"
        ) from None


# ---------------------------------------------------------------------------
# Cardinal B-splines
# ---------------------------------------------------------------------------

def bspline_eval(order: int, x) -> np.ndarray | float:
    """Cardinal B-spline of the given order on the knots 0, 1, ..., order.

    Normalised so the splines integrate to one and form a partition of
    unity; the linear spline (order 2) peaks at 1.  Order 1 is the
    indicator of ``[0, 1)``.  Accepts scalars or arrays.
    """
    if order < 1:
        raise ConfigurationError("B-spline order must be >= 1")
    xa = np.asarray(x, dtype=float)
    if order == 1:
        out = np.where((xa >= 0.0) & (xa < 1.0), 1.0, 0.0)
    else:
        out = np.zeros_like(xa)
        for i in range(order + 1):
            t = xa - i
            out += (-1) ** i * math.comb(order, i) * np.where(t > 0.0, t, 0.0) ** (order - 1)
        out /= math.factorial(order - 1)
        # the alternating sum can leave tiny negatives; the spline is
        # nonnegative and supported on [0, order]
        out = np.where((xa <= 0.0) | (xa >= order), 0.0, np.maximum(out, 0.0))
    return out if out.ndim else float(out)


def bspline_cumulative(order: int, x) -> np.ndarray | float:
    """Integral of the cardinal B-spline over ``(-inf, x]``.

    Uses the identity that the antiderivative of an order-m spline is the
    sum of order-(m+1) splines at integer shifts; exact everywhere.
    """
    xa = np.asarray(x, dtype=float)
    out = np.zeros_like(xa)
    for k in range(order + 1):
        out += bspline_eval(order + 1, xa - k)
    out = np.where(xa >= order, 1.0, out)
    out = np.where(xa <= 0.0, 0.0, out)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Prototype representations
# ---------------------------------------------------------------------------

class SplineCombination:
    """Piecewise polynomial of the form ``sum_i c_i N_m(d*y - s_i)``.

    Scaling prototypes use dilation ``d = 1`` with a single term; wavelet
    prototypes are two-scale combinations with ``d = 2``.
    """

    def __init__(self, order: int, terms, dilation: int = 1):
        self.order = order
        self.terms = [(float(c), float(s)) for c, s in terms]
        self.dilation = dilation
        shifts = [s for _, s in self.terms]
        self.support = (min(shifts) / dilation, (max(shifts) + order) / dilation)

    def point(self, y) -> np.ndarray:
        ya = np.asarray(y, dtype=float)
        out = np.zeros_like(ya)
        for c, s in self.terms:
            out += c * bspline_eval(self.order, self.dilation * ya - s)
        return out

    def cumulative(self, y) -> np.ndarray:
        ya = np.asarray(y, dtype=float)
        out = np.zeros_like(ya)
        for c, s in self.terms:
            out += (c / self.dilation) * bspline_cumulative(self.order, self.dilation * ya - s)
        return out


class DyadicGrid:
    """Function known exactly on the dyadic grid ``lo + i * 2**-levels``.

    Point queries interpolate linearly; outside the grid the function takes
    the supplied boundary values (0 on the left, ``right`` on the right).
    """

    def __init__(self, lo: float, levels: int, values: np.ndarray, right: float = 0.0):
        self.lo = float(lo)
        self.levels = levels
        self.step = 2.0 ** (-levels)
        self.values = np.asarray(values, dtype=float)
        self.hi = self.lo + (len(self.values) - 1) * self.step
        self.right = float(right)

    def __call__(self, y) -> np.ndarray:
        ya = np.asarray(y, dtype=float)
        pos = (ya - self.lo) / self.step
        idx = np.clip(np.floor(pos).astype(int), 0, len(self.values) - 2)
        frac = pos - idx
        out = self.values[idx] * (1.0 - frac) + self.values[idx + 1] * frac
        out = np.where(ya <= self.lo, 0.0, out)
        out = np.where(ya >= self.hi, self.right, out)
        return out


class CascadePrototype:
    """Prototype held as exact dyadic point values plus exact dyadic integrals."""

    def __init__(self, support, point_grid: DyadicGrid, cum_grid: DyadicGrid):
        self.support = (float(support[0]), float(support[1]))
        self._point = point_grid
        self._cum = cum_grid

    def point(self, y) -> np.ndarray:
        return self._point(y)

    def cumulative(self, y) -> np.ndarray:
        return self._cum(y)


# ---------------------------------------------------------------------------
# Refinement filters (masks sum to 2)
# ---------------------------------------------------------------------------

_SQRT2 = math.sqrt(2.0)
_SQRT7 = math.sqrt(7.0)

# Daubechies, 4 vanishing moments (classic 8-tap listing, sums to sqrt(2)).
_DB4_H = np.array([
    0.23037781330885523, 0.7148465705525415, 0.6308807679295904,
    -0.02798376941698385, -0.18703481171888114, 0.030841381835986965,
    0.032883011666982945, -0.010597401784997278,
])

# Symlet, 4 vanishing moments (synthesis orientation, sums to sqrt(2)).
_SYM4_H = np.array([
    0.0322231006040427, -0.012603967262037833, -0.09921954357684722,
    0.29785779560527736, 0.8037387518059161, 0.49761866763201545,
    -0.02963552764599851, -0.07576571478927333,
])

# Coiflet with two vanishing moments; coefficients are exact in sqrt(7).
_COIF1_H = (_SQRT2 / 32.0) * np.array([
    1.0 - _SQRT7, 5.0 + _SQRT7, 14.0 + 2.0 * _SQRT7,
    14.0 - 2.0 * _SQRT7, 1.0 - _SQRT7, -3.0 + _SQRT7,
])

# CDF 9/7 pair (JPEG2000 irreversible filters, normalised to sum 1 here).
_CDF97_SYNTH = np.array([
    -0.045635881557125, -0.028771763114250, 0.295635881557125,
    0.557543526228500,
    0.295635881557125, -0.028771763114250, -0.045635881557125,
])
_CDF97_ANALYSIS = np.array([
    0.026748757410810, -0.016864118442875, -0.078223266528990,
    0.266864118442875, 0.602949018236360, 0.266864118442875,
    -0.078223266528990, -0.016864118442875, 0.026748757410810,
])

# CDF 5/3 (LeGall) analysis low-pass, exact rationals, sum 1.
_CDF53_ANALYSIS = np.array([-1.0, 2.0, 6.0, 2.0, -1.0]) / 8.0


def _filter_masks(name: str):
    """Return (synthesis mask, lo offset, analysis mask, analysis lo), sums 2."""
    if name == "db4":
        a = _SQRT2 * _DB4_H
        return a, 0, a, 0
    if name == "sym":
        a = _SQRT2 * _SYM4_H
        return a, 0, a, 0
    if name == "coif":
        a = _SQRT2 * _COIF1_H
        return a, 0, a, 0
    if name == "cdf97":
        return 2.0 * _CDF97_SYNTH, -3, 2.0 * _CDF97_ANALYSIS, -4
    raise ConfigurationError(f"family {name!r} has no refinement filter")


def _wavelet_mask(analysis: np.ndarray, alo: int):
    """High-pass mask ``b[n] = (-1)**n * analysis[1 - n]`` (sums to 0)."""
    ahi = alo + len(analysis) - 1
    blo = 1 - ahi
    n = np.arange(blo, 1 - alo + 1)
    b = ((-1.0) ** n) * analysis[::-1]
    return b, blo


# ---------------------------------------------------------------------------
# Cascade iteration (exact on dyadic points)
# ---------------------------------------------------------------------------

def _integer_values(mask: np.ndarray, lo: int) -> np.ndarray:
    """Exact values of the refinable function at the integers of its support.

    Solves the eigenproblem ``phi(k) = sum_n mask[n] phi(2k - n)`` at the
    interior integers, normalised to a partition of unity.
    """
    hi = lo + len(mask) - 1
    pts = np.arange(lo + 1, hi)
    p = len(pts)
    T = np.zeros((p, p))
    for r, k in enumerate(pts):
        for c, m in enumerate(pts):
            idx = 2 * k - m - lo
            if 0 <= idx < len(mask):
                T[r, c] = mask[idx]
    w, v = np.linalg.eig(T)
    i = int(np.argmin(np.abs(w - 1.0)))
    vec = np.real(v[:, i])
    vec = vec / vec.sum()
    out = np.zeros(hi - lo + 1)
    out[1:-1] = vec
    return out


def _refine(values: np.ndarray, mask: np.ndarray, mlo: int, lo: int, step: float) -> np.ndarray:
    """One dyadic refinement: values on grid ``step`` -> grid ``step/2``."""
    n_old = len(values)
    out = np.zeros(2 * n_old - 1)
    out[0::2] = values
    half = step / 2.0
    for t, a in enumerate(mask):
        n = mlo + t
        # phi(lo + (2i+1)*half) needs phi at 2*(lo + (2i+1)*half) - n,
        # i.e. old grid index (lo - n)/step + (2i+1).
        base = (lo - n) / step
        src = base + 1.0 + 2.0 * np.arange(n_old - 1)
        si = np.rint(src).astype(int)
        ok = (si >= 0) & (si < n_old)
        out[1::2][ok] += a * values[si[ok]]
    return out


@lru_cache(maxsize=None)
def _point_grid(name: str, levels: int) -> DyadicGrid:
    mask, lo, _, _ = _filter_masks(name)
    vals = _integer_values(mask, lo)
    step = 1.0
    for _ in range(levels):
        vals = _refine(vals, mask, lo, lo, step)
        step /= 2.0
    return DyadicGrid(lo, levels, vals)


@lru_cache(maxsize=None)
def _cumulative_grid(name: str, levels: int) -> DyadicGrid:
    """Exact dyadic values of ``integral of phi over (-inf, y]``.

    The unit-window average ``g = N_1 * phi`` is itself refinable (mask
    convolved with [1, 1], halved), so its dyadic point values are exact;
    the cumulative integral is the finite sum ``sum_k g(y - k)``.
    """
    mask, lo, _, _ = _filter_masks(name)
    gmask = np.convolve(mask, [1.0, 1.0]) / 2.0
    vals = _integer_values(gmask, lo)
    step = 1.0
    for _ in range(levels):
        vals = _refine(vals, gmask, lo, lo, step)
        step /= 2.0
    per = 1 << levels
    width = len(mask) - 1  # support width of phi
    cum = np.zeros(width * per + 1)
    gl = len(vals)
    for k in range(width + 1):
        s = k * per
        n = min(gl, len(cum) - s)
        if n > 0:
            cum[s:s + n] += vals[:n]
    return DyadicGrid(lo, levels, cum, right=float(cum[-1]))


def _cascade_wavelet_grids(name: str, levels: int):
    mask, mlo, analysis, alo = _filter_masks(name)
    b, blo = _wavelet_mask(analysis, alo)
    phi_pt = _point_grid(name, levels)
    phi_cum = _cumulative_grid(name, levels)
    philo, phihi = phi_pt.lo, phi_pt.hi
    lo = (blo + philo) / 2.0
    hi = (blo + len(b) - 1 + phihi) / 2.0
    y = lo + np.arange(round((hi - lo) * (1 << levels)) + 1) * 2.0 ** (-levels)
    pt = np.zeros_like(y)
    cum = np.zeros_like(y)
    for t, coef in enumerate(b):
        n = blo + t
        pt += coef * phi_pt(2.0 * y - n)
        cum += (coef / 2.0) * phi_cum(2.0 * y - n)
    return (
        DyadicGrid(lo, levels, pt),
        DyadicGrid(lo, levels, cum, right=float(cum[-1])),
        (lo, hi),
    )


# ---------------------------------------------------------------------------
# Family prototypes
# ---------------------------------------------------------------------------

def _chui_wang_terms(m: int):
    """Semi-orthogonal spline wavelet mask: support ``[0, 2m-1]``."""
    terms = []
    for n in range(3 * m - 1):
        q = sum(
            math.comb(m, l) * float(bspline_eval(2 * m, n + 1 - l))
            for l in range(m + 1)
        )
        q *= (-1) ** n / 2.0 ** (m - 1)
        terms.append((q, n))
    return terms


def _short_support_terms(m: int):
    """Short-support spline wavelet: alternating binomial mask on ``[0, m]``."""
    return [(((-1) ** n) * math.comb(m, n) / 2.0 ** (m - 1), n) for n in range(m + 1)]


CASCADE_LEVELS = 8  # dyadic resolution 2**-8 for filter-defined prototypes


@lru_cache(maxsize=None)
def scaling_prototype(name: str, levels: int = CASCADE_LEVELS):
    fam = get_family(name)
    if fam.is_spline:
        return SplineCombination(fam.spline_order, [(1.0, 0.0)], dilation=1)
    mask, lo, _, _ = _filter_masks(fam.name)
    support = (float(lo), float(lo + len(mask) - 1))
    return CascadePrototype(support, _point_grid(fam.name, levels), _cumulative_grid(fam.name, levels))


@lru_cache(maxsize=None)
def wavelet_prototype(name: str, levels: int = CASCADE_LEVELS):
    fam = get_family(name)
    if fam.name in ("cw4", "cw2"):
        return SplineCombination(fam.spline_order, _chui_wang_terms(fam.spline_order), dilation=2)
    if fam.name == "short3":
        return SplineCombination(3, _short_support_terms(3), dilation=2)
    if fam.name == "cdf53":
        b, blo = _wavelet_mask(2.0 * _CDF53_ANALYSIS, -2)
        return SplineCombination(2, [(c, blo + i) for i, c in enumerate(b)], dilation=2)
    pt, cum, support = _cascade_wavelet_grids(fam.name, levels)
    return CascadePrototype(support, pt, cum)


def prototype_samples(family: "WaveletFamily | str", which: str, resolution: int) -> np.ndarray:
    """Point samples of a family's prototype on a grid of spacing ``2**-resolution``.

    ``which`` selects ``"scaling"`` or ``"wavelet"``.  Spline-family
    prototypes are evaluated from their closed form; filter-defined ones
    come from the cascade iteration (exact at dyadic points).
    """
    fam = get_family(family)
    if which not in ("scaling", "wavelet"):
        raise ConfigurationError(f"which must be 'scaling' or 'wavelet', got {which!r}")
    if resolution < 4:
        raise ConfigurationError("resolution must be at least 4 refinement levels")
    levels = max(resolution, CASCADE_LEVELS) if not fam.is_spline else resolution
    proto = scaling_prototype(fam.name, levels) if which == "scaling" else wavelet_prototype(fam.name, levels)
    lo, hi = proto.support
    step = 2.0 ** (-resolution)
    y = lo + np.arange(round((hi - lo) / step) + 1) * step
    return proto.point(y)
