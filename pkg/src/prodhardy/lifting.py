"""Two-parameter wavelet lifts and the square functions built on them.

The lift of a function ``lam`` at scale pair ``y = (y1, y2)`` is the
convolution with the product kernel

    Psi_y(x) = (1/(y1*y2)) * psi(x1/y1) * psi(x2/y2),

computed by trapezoid-quadrature convolution on the sample grid.  The
kernel is separable, so the engine runs one padded FFT of the input and a
pair of cached one-dimensional kernel transforms per scale; values within
one kernel support of the window edge see the input as zero outside (the
caller keeps a margin around the region of interest).

Scale integrals ``dy/(y1*y2)`` are trapezoid sums on logarithmically
spaced nodes, where the measure is the flat ``du1 du2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .dyadic import DyadicRectangle
from .grid import GridSpec, SampledFunction2D
from .wavelet import WaveletProfile

__all__ = [
    "psi_y_kernel",
    "UpperHalfLift",
    "LiftEngine",
    "convolve_psi_y",
    "band_nodes",
    "LiftFamily",
    "lift_family",
    "s_function",
    "rect_slices",
    "s_r_squared",
]


def _axis_kernel(w: WaveletProfile, x: np.ndarray, h: float, y: float) -> np.ndarray:
    """Cell-averaged samples of ``psi(x/y)/y`` on one axis.

    Each sample is the exact mean of the dilated profile over its grid cell
    ``[x - h/2, x + h/2]``, computed from the antiderivative, so the grid
    sum times ``h`` telescopes to zero: sampled kernels stay mean zero and
    annihilate constants to roundoff on every grid.
    """
    return (w.antiderivative((x + h / 2) / y)
            - w.antiderivative((x - h / 2) / y)) / h


def psi_y_kernel(w: WaveletProfile, y: Tuple[float, float],
                 grid: GridSpec, discretization: str = "cells") -> SampledFunction2D:
    """The product kernel on a grid; support is ``[-y1, y1] x [-y2, y2]``.

    ``discretization="cells"`` (default) stores exact cell averages of the
    kernel, which keeps the axis cancellation (zero integral along every
    grid row and column) at roundoff level; ``"pointwise"`` stores plain
    point samples.  The grid must resolve the smaller scale: at least 4
    cells across each half-support.
    """
    y1, y2 = y
    if y1 <= 0 or y2 <= 0:
        raise ValueError(f"scales must be positive, got {y}")
    for axis, s in enumerate((y1, y2)):
        if grid.cell[axis] > s / 4:
            raise ValueError(
                f"grid spacing {grid.cell[axis]} does not resolve scale {s} "
                f"on axis {axis} (need at least 4 cells per half-support)"
            )
    if discretization == "cells":
        v1 = _axis_kernel(w, grid.x1, grid.cell[0], y1)
        v2 = _axis_kernel(w, grid.x2, grid.cell[1], y2)
    elif discretization == "pointwise":
        v1 = w.evaluate(grid.x1 / y1) / y1
        v2 = w.evaluate(grid.x2 / y2) / y2
    else:
        raise ValueError(f"unknown discretization {discretization!r}")
    return SampledFunction2D(np.outer(v1, v2), grid.origin, grid.cell, grid.period)


@dataclass(frozen=True)
class UpperHalfLift:
    """The lift ``lam * Psi_y`` at one scale pair, on the input's grid."""

    y: Tuple[float, float]
    values: np.ndarray
    origin: Tuple[float, float]
    cell: Tuple[float, float]


class LiftEngine:
    """Shared convolution state for many scale pairs of one input.

    Pads the input to double size (zero outside its window), caches its
    2-d FFT, and caches the 1-d kernel transforms per scale value, so a
    lift costs one inverse FFT.
    """

    def __init__(self, lam: SampledFunction2D, w: WaveletProfile):
        self.lam = lam
        self.wavelet = w
        n1, n2 = lam.shape
        self._p1, self._p2 = 2 * n1, 2 * n2
        padded = np.zeros((self._p1, self._p2), dtype=complex)
        padded[:n1, :n2] = lam.values
        self._spectrum = np.fft.fft2(padded)
        self._kcache: Dict[Tuple[int, float], np.ndarray] = {}

    def _kernel_hat(self, axis: int, y: float) -> np.ndarray:
        key = (axis, float(y))
        hit = self._kcache.get(key)
        if hit is not None:
            return hit
        h = self.lam.cell[axis]
        p = self._p1 if axis == 0 else self._p2
        n = self.lam.shape[axis]
        m = int(math.floor(y / h)) + 1
        if y < 2 * h:
            raise ValueError(
                f"scale {y} is below the grid resolution {h} on axis {axis}"
            )
        if m > n:
            raise ValueError(
                f"scale {y} exceeds the window extent {n * h} on axis {axis}"
            )
        j = np.arange(-m, m + 1)
        # quadrature weights: exact cell integrals of the dilated profile,
        # so the weight sum telescopes to zero (constants are annihilated)
        samples = h * _axis_kernel(self.wavelet, j * h, h, y)
        kern = np.zeros(p, dtype=float)
        kern[j % p] = samples
        out = np.fft.fft(kern)
        self._kcache[key] = out
        return out

    def lift_values(self, y1: float, y2: float) -> np.ndarray:
        k1 = self._kernel_hat(0, y1)
        k2 = self._kernel_hat(1, y2)
        n1, n2 = self.lam.shape
        out = np.fft.ifft2(self._spectrum * np.outer(k1, k2))
        return out[:n1, :n2]

    def lift(self, y1: float, y2: float) -> UpperHalfLift:
        return UpperHalfLift((y1, y2), self.lift_values(y1, y2),
                             self.lam.origin, self.lam.cell)

    def clear_kernels(self) -> None:
        self._kcache.clear()


def convolve_psi_y(lam: SampledFunction2D, w: WaveletProfile,
                   y: Tuple[float, float]) -> UpperHalfLift:
    """One-shot lift; prefer a shared ``LiftEngine`` inside scale loops."""
    return LiftEngine(lam, w).lift(*y)


def band_nodes(length: float, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for ``integral_{length/2}^{length} g(y) dy/y``.

    Trapezoid in ``u = log y``; shared by both reduction routes so the
    scale quadrature cancels in identity comparisons.
    """
    if length <= 0:
        raise ValueError("band length must be positive")
    if n < 2:
        raise ValueError("need at least 2 nodes per band")
    u = np.linspace(math.log(length / 2), math.log(length), n)
    wts = np.full(n, u[1] - u[0])
    wts[0] *= 0.5
    wts[-1] *= 0.5
    return np.exp(u), wts


@dataclass
class LiftFamily:
    """Lifts over a tensor grid of scale pairs, with its log weights.

    ``values[i][j]`` is the lift at ``(y1[i], y2[j])``.  The grid is the
    truncation of the upper half-space used by the square functions.
    """

    lam: SampledFunction2D
    y1: np.ndarray
    y2: np.ndarray
    w1: np.ndarray
    w2: np.ndarray
    values: List[List[np.ndarray]]

    @property
    def y_range(self) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        return ((float(self.y1[0]), float(self.y1[-1])),
                (float(self.y2[0]), float(self.y2[-1])))


def lift_family(lam: SampledFunction2D, w: WaveletProfile,
                y_min: float, y_max: float, n_per_axis: int = 6,
                engine: Optional[LiftEngine] = None) -> LiftFamily:
    """Lifts on a log-spaced tensor grid of scales covering [y_min, y_max]."""
    if not (0 < y_min < y_max):
        raise ValueError("need 0 < y_min < y_max")
    eng = engine if engine is not None else LiftEngine(lam, w)
    u = np.linspace(math.log(y_min), math.log(y_max), n_per_axis)
    wts = np.full(n_per_axis, u[1] - u[0] if n_per_axis > 1 else 0.0)
    wts[0] *= 0.5
    wts[-1] *= 0.5
    y = np.exp(u)
    values = [[eng.lift_values(a, b) for b in y] for a in y]
    return LiftFamily(lam, y, y.copy(), wts, wts.copy(), values)


def _cone_slice(x: float, y: float, origin: float, h: float, n: int) -> slice:
    lo = int(math.floor((x - y - origin) / h)) + 1
    hi = int(math.ceil((x + y - origin) / h)) - 1
    return slice(max(lo, 0), min(hi + 1, n))


def s_function(family: LiftFamily, x: Tuple[float, float]) -> float:
    """Double cone square function at a point, over the family's scale grid.

    The cone at ``x`` is the product of the apertures ``|x_i - t_i| < y_i``
    (no aperture parameter); the scale truncation is the family's grid and
    should be reported with the value.
    """
    lam = family.lam
    h1, h2 = lam.cell
    n1, n2 = lam.shape
    total = 0.0
    for i, y1 in enumerate(family.y1):
        s1 = _cone_slice(x[0], y1, lam.origin[0], h1, n1)
        if s1.stop <= s1.start:
            continue
        for j, y2 in enumerate(family.y2):
            s2 = _cone_slice(x[1], y2, lam.origin[1], h2, n2)
            if s2.stop <= s2.start:
                continue
            box = family.values[i][j][s1, s2]
            t_integral = h1 * h2 * float(np.sum(np.abs(box) ** 2))
            total += family.w1[i] * family.w2[j] / (y1 * y2) * t_integral
    if total == 0.0 and (family.y1.size == 0 or family.y2.size == 0):
        raise ValueError("empty scale grid: the truncated cone is empty")
    return math.sqrt(total)


def rect_slices(lam: SampledFunction2D, r: DyadicRectangle) -> Tuple[slice, slice]:
    """Grid index ranges of a grid-aligned dyadic rectangle inside the window."""
    out = []
    for axis, (lo, length) in enumerate(
        ((r.ix.lo, r.ix.length), (r.iy.lo, r.iy.length))
    ):
        h = lam.cell[axis]
        start = (lo - lam.origin[axis]) / h
        count = length / h
        if abs(start - round(start)) > 1e-9 or abs(count - round(count)) > 1e-9:
            raise ValueError(
                f"rectangle {r} is not aligned with the sample grid on axis "
                f"{axis} (offset {start}, cells {count})"
            )
        i0, c = int(round(start)), int(round(count))
        if c < 1 or i0 < 0 or i0 + c > lam.shape[axis]:
            raise ValueError(f"rectangle {r} leaves the sample window on axis {axis}")
        out.append(slice(i0, i0 + c))
    return tuple(out)


def s_r_squared(lam: SampledFunction2D, w: WaveletProfile, r: DyadicRectangle,
                n_y: int = 6, engine: Optional[LiftEngine] = None) -> float:
    """Squared local square function: lift energy over the box of ``r``.

    Integrates ``|lam * Psi_y(t)|^2`` for ``t`` in the rectangle and ``y``
    over the dyadic band ``(|I|/2, |I|] x (|J|/2, |J|]``, with measure
    ``dt dy/(y1*y2)``.
    """
    eng = engine if engine is not None else LiftEngine(lam, w)
    sl = rect_slices(lam, r)
    y1, w1 = band_nodes(r.ix.length, n_y)
    y2, w2 = band_nodes(r.iy.length, n_y)
    h_area = lam.cell[0] * lam.cell[1]
    total = 0.0
    for i in range(n_y):
        for j in range(n_y):
            tile = eng.lift_values(y1[i], y2[j])[sl]
            total += w1[i] * w2[j] * h_area * float(np.sum(np.abs(tile) ** 2))
    return total
