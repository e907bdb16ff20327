"""The admissible analyzing profile and its scale-band weights.

The shipped profile is ``psi(x) = c * d^2/dx^2 [(1 - x^2)^4]`` on
``[-1, 1]`` and zero outside: even, compactly supported, mean zero (its
integral telescopes to the vanishing boundary derivative), and C1 across
the support edge because the first derivative also vanishes there.  The
constant ``c`` normalizes

    integral_0^inf |psi_hat(s)|^2 ds/s = 1,

with the 1-d transform convention ``psi_hat(s) = (2*pi)^{-1} *
integral psi(x) exp(-i x s) dx`` (real and even here).  ``c`` is always
computed numerically from the quadrature, never hard-coded.

Scale integrals ``ds/s`` use trapezoid quadrature on logarithmically
spaced nodes; the tail beyond the cached grid is estimated from the
``s^{-3}`` decay of the transform and reported.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import ProdHardyError

__all__ = ["WaveletProfile", "build_psi", "log_nodes"]


def _base_poly(x: np.ndarray) -> np.ndarray:
    """Unnormalized profile: second derivative of (1-x^2)^4, zero off [-1,1]."""
    u = x * x
    inside = np.abs(x) <= 1.0
    vals = (1.0 - u) ** 2 * (56.0 * u - 8.0)
    return np.where(inside, vals, 0.0)


def _base_antiderivative(x: np.ndarray) -> np.ndarray:
    """First derivative of (1-x^2)^4: the exact antiderivative of the raw
    profile, vanishing at both support ends (so cell sums telescope to 0)."""
    clamped = np.clip(x, -1.0, 1.0)
    return -8.0 * clamped * (1.0 - clamped * clamped) ** 3


def log_nodes(lo: float, hi: float, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and trapezoid weights for ``integral_lo^hi g(s) ds/s``.

    Uniform in ``u = log s``, where the measure ``ds/s`` becomes ``du``.
    """
    if not (0 < lo < hi):
        raise ValueError(f"need 0 < lo < hi, got ({lo}, {hi})")
    u = np.linspace(math.log(lo), math.log(hi), n)
    w = np.full(n, u[1] - u[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    return np.exp(u), w


class WaveletProfile:
    """Normalized analyzing profile with a cached transform table.

    Attributes
    ----------
    x : ndarray
        Uniform grid on [-1, 1], odd length, symmetric about 0.
    psi : ndarray
        Normalized samples; exactly even on the grid.
    norm_const : float
        The constant applied to the raw profile.
    s_grid, psi_hat_cache : ndarray
        Log-spaced transform table used by the normalization integral.
    tail_bound : float
        Estimated mass of ``|psi_hat|^2 ds/s`` beyond ``s_grid``.
    """

    def __init__(self, x: np.ndarray, psi: np.ndarray, norm_const: float,
                 s_grid: np.ndarray, psi_hat_cache: np.ndarray,
                 tail_bound: float, analytic: bool = True):
        self.x = np.asarray(x, dtype=float)
        self.psi = np.asarray(psi, dtype=float)
        self.norm_const = float(norm_const)
        self.s_grid = np.asarray(s_grid, dtype=float)
        self.psi_hat_cache = np.asarray(psi_hat_cache, dtype=float)
        self.tail_bound = float(tail_bound)
        self._analytic = bool(analytic)
        self._band_cache: Dict[int, float] = {}
        self._dilated_cache: Dict[Tuple[int, float, int], float] = {}
        if self.x.ndim != 1 or self.x.size % 2 == 0:
            raise ValueError("profile grid must be 1-d with odd length")

    # -- pointwise evaluation ------------------------------------------------

    @property
    def step(self) -> float:
        return float(self.x[1] - self.x[0])

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Profile values at arbitrary points (zero outside [-1, 1]).

        Uses the closed-form polynomial when the profile was built by
        ``build_psi``; falls back to linear interpolation of the samples
        for profiles loaded from data.
        """
        pts = np.asarray(points, dtype=float)
        if self._analytic:
            return self.norm_const * _base_poly(pts)
        inside = np.abs(pts) <= 1.0
        vals = np.interp(pts, self.x, self.psi, left=0.0, right=0.0)
        return np.where(inside, vals, 0.0)

    def antiderivative(self, points: np.ndarray) -> np.ndarray:
        """Running integral of the profile from the left support edge.

        Vanishes at both edges (the profile is an exact derivative), which
        makes cell-averaged kernel discretizations mean zero to roundoff.
        Analytic profiles use the closed form; loaded profiles fall back to
        the cumulative trapezoid of their samples.
        """
        pts = np.asarray(points, dtype=float)
        if self._analytic:
            return self.norm_const * _base_antiderivative(pts)
        cum = np.concatenate([
            [0.0], np.cumsum((self.psi[1:] + self.psi[:-1]) * 0.5 * self.step)])
        return np.interp(pts, self.x, cum, left=0.0, right=float(cum[-1]))

    def cell_average(self, centers: np.ndarray, width: float) -> np.ndarray:
        """Exact averages of the profile over cells ``[c - w/2, c + w/2]``."""
        c = np.asarray(centers, dtype=float)
        return (self.antiderivative(c + width / 2)
                - self.antiderivative(c - width / 2)) / width

    def transform(self, s: np.ndarray, chunk: int = 2048) -> np.ndarray:
        """``psi_hat(s)`` by trapezoid quadrature over the profile grid.

        Real and even; evaluated in chunks to bound the cosine table size.
        """
        s = np.atleast_1d(np.asarray(s, dtype=float))
        w = np.full(self.x.size, self.step)
        w[0] *= 0.5
        w[-1] *= 0.5
        fw = self.psi * w
        out = np.empty(s.size, dtype=float)
        for i in range(0, s.size, chunk):
            block = s[i:i + chunk]
            out[i:i + chunk] = np.cos(np.outer(block, self.x)) @ fw
        return out / (2 * np.pi)

    # -- invariant diagnostics -------------------------------------------------

    def mean(self) -> float:
        """Trapezoid value of ``integral psi``; tiny for the shipped profile."""
        w = np.full(self.x.size, self.step)
        w[0] *= 0.5
        w[-1] *= 0.5
        return float(np.sum(self.psi * w))

    def evenness_defect(self) -> float:
        return float(np.max(np.abs(self.psi - self.psi[::-1])))

    def second_difference_bound(self) -> float:
        """Max centered second difference over the step squared (interior)."""
        d2 = self.psi[2:] - 2 * self.psi[1:-1] + self.psi[:-2]
        return float(np.max(np.abs(d2)) / self.step ** 2)

    def edge_derivative(self) -> float:
        """One-sided derivative magnitude at the support edge (C1 check)."""
        return float(abs(self.psi[-1] - self.psi[-2]) / self.step)

    def normalization_check(self, refine: int = 2) -> float:
        """Recompute the normalization integral on an independently refined
        log grid; returns the integral (should be 1 within tolerance)."""
        lo, hi = float(self.s_grid[0]), float(self.s_grid[-1])
        s, w = log_nodes(lo, hi, refine * self.s_grid.size + 1)
        vals = self.transform(s)
        return float(np.sum(vals ** 2 * w)) + self.tail_bound

    # -- scale-band weights ------------------------------------------------------

    def band_integral_1d(self, k: int, n_nodes: Optional[int] = None) -> float:
        """``integral_{pi k}^{2 pi k} |psi_hat(s)|^2 ds/s`` for ``k >= 1``.

        Cached per ``k``.  Negative ``k`` use ``|k|`` (the transform is
        even); ``k = 0`` gives an empty band, value 0.
        """
        k = abs(int(k))
        if k == 0:
            return 0.0
        if k in self._band_cache:
            return self._band_cache[k]
        if n_nodes is None:
            n_nodes = max(1024, 64 * k)
        s, w = log_nodes(math.pi * k, 2 * math.pi * k, n_nodes)
        vals = self.transform(s)
        out = float(np.sum(vals ** 2 * w))
        self._band_cache[k] = out
        return out

    def band_weight(self, k: int, l: int) -> float:
        """Product-band weight ``W(k, l)``; zero when either index is zero."""
        if k == 0 or l == 0:
            return 0.0
        return self.band_integral_1d(k) * self.band_integral_1d(l)

    def dilated_band_integral(self, k: int, length: float, n_nodes: int) -> float:
        """``integral_{L/2}^{L} |psi_hat(2*pi*k*y/L)|^2 dy/y`` (cached).

        The dilated-kernel side of the scale-band identity; equals
        ``band_integral_1d(k)`` analytically for every ``L``.
        """
        k = abs(int(k))
        if k == 0:
            return 0.0
        key = (k, float(length), int(n_nodes))
        hit = self._dilated_cache.get(key)
        if hit is not None:
            return hit
        a = 2 * math.pi / length
        y, wts = log_nodes(length / 2, length, n_nodes)
        vals = self.transform(a * k * y)
        out = float(np.sum(vals ** 2 * wts))
        self._dilated_cache[key] = out
        return out

    def ensure_band_weights(self, kmax: int) -> None:
        for k in range(1, kmax + 1):
            self.band_integral_1d(k)

    # -- serialization ------------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "schema_version": 1,
            "x": self.x.tolist(),
            "psi": self.psi.tolist(),
            "norm_const": self.norm_const,
            "s_grid": self.s_grid.tolist(),
            "psi_hat": self.psi_hat_cache.tolist(),
            "tail_bound": self.tail_bound,
            "analytic": self._analytic,
            "band_integrals": {str(k): v for k, v in sorted(self._band_cache.items())},
        }

    def save_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, sort_keys=True)
            fh.write("\n")

    @classmethod
    def from_json_dict(cls, d: dict) -> "WaveletProfile":
        prof = cls(
            np.asarray(d["x"], float),
            np.asarray(d["psi"], float),
            d["norm_const"],
            np.asarray(d["s_grid"], float),
            np.asarray(d["psi_hat"], float),
            d["tail_bound"],
            analytic=d.get("analytic", False),
        )
        prof._band_cache = {int(k): float(v)
                            for k, v in d.get("band_integrals", {}).items()}
        return prof

    @classmethod
    def load_json(cls, path) -> "WaveletProfile":
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))


def build_psi(n_points: int = 4097, s_min: float = 1e-4,
              n_per_decade: int = 1200, tail_tol: float = 1e-9,
              max_s: float = 1e6) -> WaveletProfile:
    """Build the shipped profile and compute its normalization constant.

    ``n_points`` must supply at least ``2**10`` samples on [-1, 1] and be
    odd so the grid is symmetric.  The transform table extends until the
    estimated tail of ``|psi_hat|^2 ds/s`` (from the cubic decay of the
    transform) drops below ``tail_tol`` times the integral; failure to get
    there raises with the truncation report.
    """
    if n_points < 2 ** 10 + 1:
        raise ValueError(f"need at least {2 ** 10 + 1} profile points, got {n_points}")
    if n_points % 2 == 0:
        raise ValueError("n_points must be odd (symmetric grid)")
    x = np.linspace(-1.0, 1.0, n_points)
    raw = WaveletProfile(x, _base_poly(x), 1.0, np.array([1.0, 2.0]),
                         np.zeros(2), 0.0, analytic=True)

    s_max = 64.0
    while True:
        n_nodes = int(n_per_decade * math.log10(s_max / s_min)) + 1
        s, w = log_nodes(s_min, s_max, n_nodes)
        vals = raw.transform(s)
        integral = float(np.sum(vals ** 2 * w))
        # |psi_hat| ~ C s^-3 for this profile; bound the dropped tail with a
        # constant fitted on the last decade of the table
        last = s >= s_max / 10
        C = float(np.max(np.abs(vals[last]) * s[last] ** 3))
        tail = C * C / (6 * s_max ** 6)
        # mass below s_min: psi_hat(s) = O(s^2) there, |psi_hat|^2/s = O(s^3)
        head = float(vals[0] ** 2) * s_min / 4
        if tail + head < tail_tol * integral:
            break
        s_max *= 2
        if s_max > max_s:
            raise ProdHardyError(
                f"normalization integral did not settle: tail {tail:.3e} at "
                f"s_max {s_max:.3e} (integral {integral:.6e})"
            )

    c = 1.0 / math.sqrt(integral + tail + head)
    return WaveletProfile(
        x=x,
        psi=c * _base_poly(x),
        norm_const=c,
        s_grid=s,
        psi_hat_cache=c * vals,
        tail_bound=c * c * (tail + head),
        analytic=True,
    )
