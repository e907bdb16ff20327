"""Seeded fixture corpora for the empirical studies.

Every generator takes an integer seed and is deterministic for a fixed
seed; the experiment commands rely on that for byte-identical reports.
"""
from __future__ import annotations

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .grid import GridSpec, SampledFunction2D, torus_grid, window_grid
from .spectral import Convention, SpectralArray, inverse_fourier
from .torus import LacunarySupport, MultiplierGrid, paley_ratio, torus_l1

__all__ = [
    "h1_witness_corpus",
    "diagonal_lacunary_support",
    "paley_corpus_study",
    "multiplier_witness_pairs",
    "covered_block_witness",
    "torus_trig_fixture",
    "plane_trig_fixture",
]


def _quadrant_coeffs(rng: np.random.Generator, kmax: int,
                     lowest: int = 0) -> np.ndarray:
    """Random complex coefficients supported on ``[lowest, kmax]^2``."""
    size = kmax + 1
    c = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
    if lowest > 0:
        c[:lowest, :] = 0.0
        c[:, :lowest] = 0.0
    return c


def _synthesize_quadrant(c: np.ndarray, n_grid: int) -> SampledFunction2D:
    """Function on the standard torus with coefficients ``c[m, n]`` at
    frequencies ``(m, n) >= 0``; embedded in a symmetric window."""
    kmax = c.shape[0] - 1
    window = np.zeros((2 * kmax + 1, 2 * kmax + 1), dtype=complex)
    window[kmax:, kmax:] = c
    spec = SpectralArray(window, (1.0, 1.0), Convention.PERIODIC_EPS)
    return inverse_fourier(spec, torus_grid(n_grid))


def h1_witness_corpus(size: int, seed: int, kmax: int = 12,
                      n_grid: int = 64) -> List[SampledFunction2D]:
    """Random quadrant-spectrum members of the bidisc Hardy space,
    rescaled to unit L1 norm (normalized Haar measure)."""
    if n_grid < 2 * kmax + 2:
        raise ValueError(f"grid {n_grid} does not resolve kmax={kmax}")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(size):
        f = _synthesize_quadrant(_quadrant_coeffs(rng, kmax), n_grid)
        out.append(f.with_values(f.values / torus_l1(f)))
    return out


def diagonal_lacunary_support(levels: int) -> LacunarySupport:
    """The diagonal lacunary points ``(2^j, 2^j)`` for ``j = 0..levels-1``."""
    return LacunarySupport([(2 ** j, 2 ** j) for j in range(levels)])


def paley_corpus_study(size: int, seed: int, kmax: int = 12,
                       n_grid: int = 64) -> Tuple[List[float], LacunarySupport]:
    """Ratios of the diagonal-lacunary coefficient mass to the L1 norm over
    a seeded witness corpus; the max is the empirical inequality constant."""
    levels = max(1, int(math.log2(kmax)) + 1)
    support = diagonal_lacunary_support(levels)
    ratios = [paley_ratio(f, support)
              for f in h1_witness_corpus(size, seed, kmax, n_grid)]
    return ratios, support


def multiplier_witness_pairs(size: int, seed: int, window_pow: int = 5,
                             n_grid: int = 128) -> List[Tuple[MultiplierGrid,
                                                              SampledFunction2D]]:
    """Seeded (symbol, witness) pairs for the block-majorant study.

    Symbols are random complex on the ``2^p x 2^p`` window; witnesses have
    spectrum inside ``[1, 2^p)^2`` (the union of complete dyadic blocks), so
    the block majorant bounds their full multiplied norm.
    """
    m = 2 ** window_pow
    if n_grid < 2 * m:
        raise ValueError(f"grid {n_grid} does not resolve the window {m}")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(size):
        lam = MultiplierGrid(rng.standard_normal((m, m))
                             + 1j * rng.standard_normal((m, m)))
        c = _quadrant_coeffs(rng, m - 1, lowest=1)
        f = _synthesize_quadrant(c, n_grid)
        f = f.with_values(f.values / torus_l1(f))
        out.append((lam, f))
    return out


def covered_block_witness(rng: np.random.Generator,
                          window_shape: Tuple[int, int],
                          n_grid: Optional[int] = None) -> SampledFunction2D:
    """Unit-L1 witness with spectrum inside the complete dyadic blocks of a
    symbol window (indices in ``[1, 2^p)^2``), so the block majorant bounds
    its full multiplied norm."""
    p = min(window_shape).bit_length() - 1
    kmax = max(2 ** p - 1, 1)
    if n_grid is None:
        n_grid = 4
        while n_grid < 2 * kmax + 2:
            n_grid *= 2
    c = _quadrant_coeffs(rng, kmax, lowest=1)
    f = _synthesize_quadrant(c, n_grid)
    return f.with_values(f.values / torus_l1(f))


def torus_trig_fixture(rng: np.random.Generator, n_grid: int = 128,
                       freq_step: int = 8, kmax: int = 2) -> SampledFunction2D:
    """Random trigonometric polynomial on the centered standard torus with
    frequencies on ``freq_step * Z^2`` (so every cube of side
    ``2*pi/freq_step`` and coarser sees it as band-limited)."""
    grid = torus_grid(n_grid, centered=True)
    c = rng.standard_normal((2 * kmax + 1,) * 2) + 1j * rng.standard_normal(
        (2 * kmax + 1,) * 2)
    X1, X2 = np.meshgrid(grid.x1, grid.x2, indexing="ij")
    values = np.zeros_like(X1, dtype=complex)
    for a in range(-kmax, kmax + 1):
        for b in range(-kmax, kmax + 1):
            values += c[kmax + a, kmax + b] * np.exp(
                1j * freq_step * (a * X1 + b * X2))
    return SampledFunction2D(values, grid.origin, grid.cell, grid.period)


def plane_trig_fixture(rng: np.random.Generator, grid: GridSpec,
                       base_freq: float = math.pi / 2,
                       kmax: int = 3) -> SampledFunction2D:
    """Random trigonometric polynomial on a plane window (non-periodic
    carrier) with frequencies on ``base_freq * Z^2``; smooth and bounded,
    used as the windowed input of the open-set functionals."""
    c = rng.standard_normal((2 * kmax + 1,) * 2) + 1j * rng.standard_normal(
        (2 * kmax + 1,) * 2)
    X1, X2 = np.meshgrid(grid.x1, grid.x2, indexing="ij")
    values = np.zeros_like(X1, dtype=complex)
    for a in range(-kmax, kmax + 1):
        for b in range(-kmax, kmax + 1):
            values += c[kmax + a, kmax + b] * np.exp(
                1j * base_freq * (a * X1 + b * X2))
    return SampledFunction2D(values / (2 * kmax + 1), grid.origin, grid.cell, None)
