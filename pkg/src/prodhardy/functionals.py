"""Open-set functionals over dyadic rectangles and the scale-band identities.

Three routes to the same rectangle energies live here:

* the direct route: lift energies ``S_R^2`` summed over rectangles
  (``carleson_box_energy``) and the squared norm of the summed rectangle
  projections (``projection_sum_energy``);
* the spectral route: per rectangle, the coefficient energy of the lift
  periodized over the rectangle, integrated over the dyadic scale band
  (``spectral_box_functional``).  Per rectangle and per scale node the two
  reductions are Parseval-equal; that identity is asserted;
* the factored route: the input's own rectangle coefficients weighted by
  precomputed scale-band weights of the analyzing profile
  (``factored_functional``).  Whether this is equivalent to the spectral
  route in general is open; the package reports the realized ratio and
  never asserts it.

``wavelet_scale_identity`` verifies the scale invariance that makes the
factored weights well defined: the band integral of the dilated kernel
transform at one lattice frequency is a scale-free function of the
frequency index alone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .dyadic import DyadicRectangle, OpenSetMask, enumerate_dyadic_rectangles
from .errors import IdentityError
from .grid import SampledFunction2D
from .lifting import LiftEngine, band_nodes, rect_slices
from .wavelet import WaveletProfile

__all__ = [
    "RectangleTerm",
    "BoxEnergyReport",
    "carleson_box_energy",
    "SpectralBoxReport",
    "spectral_box_functional",
    "rectangle_projection",
    "ProjectionReport",
    "projection_sum_energy",
    "SymbolSupReport",
    "symbol_sup_functional",
    "ScaleIdentityReport",
    "wavelet_scale_identity",
    "FactoredReport",
    "factored_functional",
    "ComparisonReport",
    "factored_vs_spectral",
]


def _scale_groups(rects: Sequence[DyadicRectangle]):
    groups: Dict[Tuple[int, int], List[DyadicRectangle]] = {}
    for r in rects:
        groups.setdefault((r.ix.scale, r.iy.scale), []).append(r)
    return sorted(groups.items())


def _direct_energy(tile: np.ndarray, cell_area: float) -> float:
    """Space-side energy ``int_R |g|^2 dt`` of one lift tile."""
    return cell_area * float(np.sum(np.abs(tile) ** 2))


def _spectral_energy(tile: np.ndarray, area: float,
                     window: Optional[int]) -> Tuple[float, float]:
    """Coefficient-side energy ``|R| * sum |g^(Ak, Bl)|^2`` of one tile.

    Returns ``(windowed energy, dropped energy)``; with ``window=None`` the
    full coefficient lattice of the tile is used and nothing is dropped.
    """
    n1, n2 = tile.shape
    chat = np.fft.fft2(tile) / (n1 * n2)
    e = np.abs(chat) ** 2
    total = area * float(np.sum(e))
    if window is None:
        return total, 0.0
    k1 = np.rint(np.fft.fftfreq(n1) * n1).astype(int)
    k2 = np.rint(np.fft.fftfreq(n2) * n2).astype(int)
    keep = (np.abs(k1)[:, None] <= window) & (np.abs(k2)[None, :] <= window)
    kept = area * float(np.sum(e[keep]))
    return kept, total - kept


@dataclass(frozen=True)
class RectangleTerm:
    rectangle: DyadicRectangle
    value: float


@dataclass(frozen=True)
class BoxEnergyReport:
    value: float
    per_rectangle: Tuple[RectangleTerm, ...]
    omega_area: float
    depth: int
    n_y: int
    warning: Optional[str] = None


def carleson_box_energy(lam: SampledFunction2D, w: WaveletProfile,
                        omega: OpenSetMask, depth: int,
                        n_y: int = 6,
                        engine: Optional[LiftEngine] = None) -> BoxEnergyReport:
    """``(1/|Omega|) * sum_{R in Omega} S_R^2`` over the enumerated rectangles.

    Rectangles are grouped by scale pair so each band's lifts are computed
    once and shared; an empty enumeration returns 0 with a warning.
    """
    rects = enumerate_dyadic_rectangles(omega, depth)
    if not rects:
        return BoxEnergyReport(0.0, (), omega.area, depth, n_y,
                               warning="no dyadic rectangle fits the mask")
    eng = engine if engine is not None else LiftEngine(lam, w)
    cell_area = lam.cell[0] * lam.cell[1]
    terms = []
    for (a, b), group in _scale_groups(rects):
        y1, wt1 = band_nodes(2.0 ** a, n_y)
        y2, wt2 = band_nodes(2.0 ** b, n_y)
        lifts = [[eng.lift_values(y1[i], y2[j]) for j in range(n_y)]
                 for i in range(n_y)]
        for r in group:
            sl = rect_slices(lam, r)
            s = 0.0
            for i in range(n_y):
                for j in range(n_y):
                    s += wt1[i] * wt2[j] * _direct_energy(lifts[i][j][sl], cell_area)
            terms.append(RectangleTerm(r, s))
    terms.sort(key=lambda t: t.rectangle)
    value = sum(t.value for t in terms) / omega.area
    return BoxEnergyReport(value, tuple(terms), omega.area, depth, n_y)


@dataclass(frozen=True)
class SpectralTerm:
    rectangle: DyadicRectangle
    bracket: float
    direct: float
    residual: float
    dropped: float


@dataclass(frozen=True)
class SpectralBoxReport:
    value: float
    per_rectangle: Tuple[SpectralTerm, ...]
    max_residual: float
    dropped_bound: float
    omega_area: float
    depth: int
    n_y: int
    window: Optional[int]
    warning: Optional[str] = None


def spectral_box_functional(lam: SampledFunction2D, w: WaveletProfile,
                            omega: OpenSetMask, depth: int,
                            n_y: int = 6, window: Optional[int] = None,
                            tol: float = 1e-6,
                            engine: Optional[LiftEngine] = None) -> SpectralBoxReport:
    """Square root of the open-set mean of the per-rectangle spectral brackets.

    Per rectangle the bracket is ``|R| * sum_{k,l} int_band
    |(lam*Psi_y)^(Ak, Bl)|^2 dy/(y1 y2)`` with ``A = 2*pi/|I|``,
    ``B = 2*pi/|J|``: the lift is periodized over the rectangle and its
    coefficient energy is integrated over the dyadic band on the shared
    band nodes.  With the full coefficient lattice (``window=None``) the
    bracket must equal the direct ``S_R^2`` reduction of the same lift
    tiles; the relative residual is asserted below ``tol``.  A finite
    ``window`` instead reports the dropped coefficient energy and skips
    the assertion.
    """
    rects = enumerate_dyadic_rectangles(omega, depth)
    if not rects:
        return SpectralBoxReport(0.0, (), 0.0, 0.0, omega.area, depth, n_y,
                                 window, warning="no dyadic rectangle fits the mask")
    eng = engine if engine is not None else LiftEngine(lam, w)
    cell_area = lam.cell[0] * lam.cell[1]
    terms = []
    for (a, b), group in _scale_groups(rects):
        y1, wt1 = band_nodes(2.0 ** a, n_y)
        y2, wt2 = band_nodes(2.0 ** b, n_y)
        lifts = [[eng.lift_values(y1[i], y2[j]) for j in range(n_y)]
                 for i in range(n_y)]
        for r in group:
            sl = rect_slices(lam, r)
            bracket = direct = dropped = 0.0
            for i in range(n_y):
                for j in range(n_y):
                    tile = lifts[i][j][sl]
                    wij = wt1[i] * wt2[j]
                    kept, drop = _spectral_energy(tile, r.area, window)
                    bracket += wij * kept
                    dropped += wij * drop
                    direct += wij * _direct_energy(tile, cell_area)
            residual = abs(bracket + dropped - direct) / max(direct, 1e-15)
            if window is None and residual >= tol:
                raise IdentityError(
                    f"spectral bracket mismatch on {r}: bracket={bracket!r} "
                    f"direct={direct!r} residual {residual:.3e} >= {tol}"
                )
            terms.append(SpectralTerm(r, bracket, direct, residual, dropped))
    terms.sort(key=lambda t: t.rectangle)
    total = sum(t.bracket for t in terms)
    return SpectralBoxReport(
        value=math.sqrt(total / omega.area),
        per_rectangle=tuple(terms),
        max_residual=max(t.residual for t in terms),
        dropped_bound=sum(t.dropped for t in terms),
        omega_area=omega.area,
        depth=depth,
        n_y=n_y,
        window=window,
    )


# ---------------------------------------------------------------------------
# rectangle projections (the summed-projection functional)


def _convolve_field(values: np.ndarray, cell: Tuple[float, float],
                    w: WaveletProfile, y1: float, y2: float) -> np.ndarray:
    """One-shot padded kernel convolution of an arbitrary field."""
    n1, n2 = values.shape
    p1, p2 = 2 * n1, 2 * n2
    padded = np.zeros((p1, p2), dtype=complex)
    padded[:n1, :n2] = values
    spec = np.fft.fft2(padded)

    def khat(p, h, y):
        m = int(math.floor(y / h)) + 1
        j = np.arange(-m, m + 1)
        kern = np.zeros(p)
        kern[j % p] = (w.antiderivative((j * h + h / 2) / y)
                       - w.antiderivative((j * h - h / 2) / y))
        return np.fft.fft(kern)

    out = np.fft.ifft2(spec * np.outer(khat(p1, cell[0], y1),
                                       khat(p2, cell[1], y2)))
    return out[:n1, :n2]


def rectangle_projection(lam: SampledFunction2D, w: WaveletProfile,
                         r: DyadicRectangle, n_y: int = 6,
                         engine: Optional[LiftEngine] = None) -> np.ndarray:
    """The rectangle component: lift restricted to the box, convolved back.

    ``phi_R(x) = int_band int_R lift(t, y) Psi_y(x - t) dt dy/(y1 y2)``,
    returned on the input's grid.
    """
    eng = engine if engine is not None else LiftEngine(lam, w)
    sl = rect_slices(lam, r)
    y1, wt1 = band_nodes(r.ix.length, n_y)
    y2, wt2 = band_nodes(r.iy.length, n_y)
    out = np.zeros(lam.shape, dtype=complex)
    for i in range(n_y):
        for j in range(n_y):
            masked = np.zeros(lam.shape, dtype=complex)
            masked[sl] = eng.lift_values(y1[i], y2[j])[sl]
            out += wt1[i] * wt2[j] * _convolve_field(masked, lam.cell, w,
                                                     y1[i], y2[j])
    return out


@dataclass(frozen=True)
class ProjectionReport:
    projection_value: float
    box_value: float
    ratio: float
    omega_area: float
    depth: int
    n_y: int
    warning: Optional[str] = None


def projection_sum_energy(lam: SampledFunction2D, w: WaveletProfile,
                          omega: OpenSetMask, depth: int,
                          n_y: int = 6) -> ProjectionReport:
    """``(1/|Omega|) * ||sum_{R in Omega} phi_R||_2^2`` plus the box value.

    Rectangles at one scale pair are disjoint, so their restricted lifts
    are accumulated through a single mask per scale before the outgoing
    convolution.  The report carries the ratio against the box energy on
    the same mask (the two functionals are equivalent norms; the ratio is
    recorded, not asserted).
    """
    rects = enumerate_dyadic_rectangles(omega, depth)
    if not rects:
        return ProjectionReport(0.0, 0.0, float("nan"), omega.area, depth, n_y,
                                warning="no dyadic rectangle fits the mask")
    eng = LiftEngine(lam, w)
    cell_area = lam.cell[0] * lam.cell[1]
    total_field = np.zeros(lam.shape, dtype=complex)
    box_total = 0.0
    for (a, b), group in _scale_groups(rects):
        y1, wt1 = band_nodes(2.0 ** a, n_y)
        y2, wt2 = band_nodes(2.0 ** b, n_y)
        mask = np.zeros(lam.shape, dtype=bool)
        for r in group:
            mask[rect_slices(lam, r)] = True
        for i in range(n_y):
            for j in range(n_y):
                lift = eng.lift_values(y1[i], y2[j])
                masked = np.where(mask, lift, 0.0)
                wij = wt1[i] * wt2[j]
                total_field += wij * _convolve_field(masked, lam.cell, w,
                                                     y1[i], y2[j])
                box_total += wij * cell_area * float(np.sum(np.abs(masked) ** 2))
    b_value = cell_area * float(np.sum(np.abs(total_field) ** 2)) / omega.area
    c_value = box_total / omega.area
    ratio = b_value / c_value if c_value > 0 else float("nan")
    return ProjectionReport(b_value, c_value, ratio, omega.area, depth, n_y)


# ---------------------------------------------------------------------------
# bounded-symbol supremum variant


SymbolLike = Union[np.ndarray, Callable[[np.ndarray, np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class SymbolSupReport:
    values: Tuple[Tuple[str, float], ...]
    max_value: float
    argmax: str
    base_value: float


def _symbol_array(lam: SampledFunction2D, g: SymbolLike) -> np.ndarray:
    """Symbol samples on the grid's DFT lattice, in FFT index order."""
    n1, n2 = lam.shape
    if callable(g):
        xi1 = 2 * np.pi * np.fft.fftfreq(n1, d=lam.cell[0])
        xi2 = 2 * np.pi * np.fft.fftfreq(n2, d=lam.cell[1])
        arr = np.asarray(g(xi1[:, None], xi2[None, :]), dtype=complex)
    else:
        arr = np.asarray(g, dtype=complex)
    if arr.shape != (n1, n2):
        raise ValueError(f"symbol shape {arr.shape} does not match grid {lam.shape}")
    top = float(np.max(np.abs(arr)))
    if top > 1 + 1e-12:
        raise ValueError(f"symbol exceeds the unit ball: sup |g| = {top}")
    return arr


def symbol_sup_functional(lam: SampledFunction2D, w: WaveletProfile,
                          omega: OpenSetMask, depth: int,
                          g_family: Sequence[Tuple[str, SymbolLike]],
                          n_y: int = 6, window: Optional[int] = None,
                          tol: float = 1e-6) -> SymbolSupReport:
    """Max of the spectral box functional over a finite family of bounded
    symbols applied to the input's spectrum.

    Each symbol (``|g| <= 1`` enforced) multiplies the DFT of the input;
    the identity symbol is detected and leaves the input untouched, so the
    family ``{1}`` reproduces the plain functional bit for bit.
    """
    if not g_family:
        raise ValueError("symbol family is empty")
    results = []
    base = None
    for name, g in g_family:
        arr = _symbol_array(lam, g)
        if np.all(arr == 1):
            modified = lam
        else:
            modified = lam.with_values(np.fft.ifft2(np.fft.fft2(lam.values) * arr))
        rep = spectral_box_functional(modified, w, omega, depth,
                                      n_y=n_y, window=window, tol=tol)
        results.append((str(name), rep.value))
        if np.all(arr == 1):
            base = rep.value
    best = max(results, key=lambda r: r[1])
    return SymbolSupReport(tuple(results), best[1], best[0],
                           base if base is not None else float("nan"))


# ---------------------------------------------------------------------------
# scale-band identity of the analyzing kernel


def _band_lhs_1d(w: WaveletProfile, k: int, length: float, n_nodes: int) -> float:
    """``integral_{L/2}^{L} |psi_hat(A k y)|^2 dy/y`` with ``A = 2*pi/L``."""
    return w.dilated_band_integral(k, length, n_nodes)


@dataclass(frozen=True)
class ScaleIdentityRow:
    i_len: float
    j_len: float
    lhs: float
    residual: float


@dataclass(frozen=True)
class ScaleIdentityReport:
    k: int
    l: int
    rhs: float
    rows: Tuple[ScaleIdentityRow, ...]
    lhs_spread: float


def wavelet_scale_identity(w: WaveletProfile, k: int, l: int,
                           scale_pairs: Sequence[Tuple[float, float]] = ((1.0, 1.0),),
                           n_nodes: int = 4096,
                           tol: float = 1e-5) -> ScaleIdentityReport:
    """Band integral of the dilated kernel transform vs its scale-free form.

    For each interval-length pair the left side integrates
    ``|F(Psi_y)(A k, B l)|^2 dy/(y1 y2)`` over the dyadic band; by
    separability it factors into two one-dimensional band integrals, which
    are compared against the frequency-side bands
    ``integral_{pi k}^{2 pi k} |psi_hat|^2 ds/s`` computed on independent
    node sets.  Asserts both the identity (relative residual below ``tol``)
    and the scale invariance of the left side across the supplied pairs.
    Negative indices use their absolute value (the transform is even);
    index 0 gives an empty band and value 0 on both sides.
    """
    rhs = w.band_weight(k, l)
    rows = []
    lhs_values = []
    for i_len, j_len in scale_pairs:
        n = n_nodes
        lhs = _band_lhs_1d(w, k, i_len, n) * _band_lhs_1d(w, l, j_len, n)
        # convergence guard: refine once; retry, then reject
        for _ in range(2):
            finer = (_band_lhs_1d(w, k, i_len, 2 * n)
                     * _band_lhs_1d(w, l, j_len, 2 * n))
            if abs(finer - lhs) <= 0.25 * tol * max(rhs, 1e-15):
                lhs = finer
                break
            lhs, n = finer, 2 * n
        else:
            raise IdentityError(
                f"band quadrature did not converge for (k, l)=({k}, {l}), "
                f"scales ({i_len}, {j_len})"
            )
        residual = abs(lhs - rhs) / max(rhs, 1e-15)
        if residual >= tol:
            raise IdentityError(
                f"scale-band identity failed for (k, l)=({k}, {l}), scales "
                f"({i_len}, {j_len}): lhs={lhs!r} rhs={rhs!r} "
                f"residual {residual:.3e} >= {tol}"
            )
        rows.append(ScaleIdentityRow(float(i_len), float(j_len), lhs, residual))
        lhs_values.append(lhs)
    spread = (max(lhs_values) - min(lhs_values)) / max(rhs, 1e-15)
    if spread >= tol:
        raise IdentityError(
            f"left side varied across scales for (k, l)=({k}, {l}): "
            f"spread {spread:.3e} >= {tol}"
        )
    return ScaleIdentityReport(int(k), int(l), rhs, tuple(rows), spread)


# ---------------------------------------------------------------------------
# factored functional (precomputed band weights)


@dataclass(frozen=True)
class FactoredReport:
    value: float
    per_rectangle: Tuple[RectangleTerm, ...]
    omega_area: float
    depth: int
    warning: Optional[str] = None


def factored_functional(lam: SampledFunction2D, w: WaveletProfile,
                        omega: OpenSetMask, depth: int) -> FactoredReport:
    """Open-set functional with the scale integral factored out.

    Per rectangle: the input is periodized over the rectangle, its
    coefficient energies ``|lam^(A k, B l)|^2`` are weighted by the
    precomputed band weights ``W(k, l)`` (zero whenever ``k`` or ``l`` is
    zero, so constants drop out), weighted by ``|R|``, averaged over the
    mask, square-rooted.  Whether this matches the convolution-side
    functional in general is an open question; compare via the reported
    ratio, never an assertion.
    """
    rects = enumerate_dyadic_rectangles(omega, depth)
    if not rects:
        return FactoredReport(0.0, (), omega.area, depth,
                              warning="no dyadic rectangle fits the mask")
    terms = []
    weight_vecs: Dict[int, np.ndarray] = {}
    for (a, b), group in _scale_groups(rects):
        for r in group:
            sl = rect_slices(lam, r)
            tile = lam.values[sl]
            n1, n2 = tile.shape
            if n1 not in weight_vecs:
                weight_vecs[n1] = _axis_band_weights(w, n1)
            if n2 not in weight_vecs:
                weight_vecs[n2] = _axis_band_weights(w, n2)
            chat = np.fft.fft2(tile) / (n1 * n2)
            e = np.abs(chat) ** 2
            val = r.area * float(weight_vecs[n1] @ e @ weight_vecs[n2])
            terms.append(RectangleTerm(r, val))
    terms.sort(key=lambda t: t.rectangle)
    total = sum(t.value for t in terms)
    return FactoredReport(math.sqrt(total / omega.area), tuple(terms),
                          omega.area, depth)


def _axis_band_weights(w: WaveletProfile, n: int) -> np.ndarray:
    """Band integrals at the FFT index frequencies of an ``n``-point axis."""
    k = np.rint(np.fft.fftfreq(n) * n).astype(int)
    return np.array([w.band_integral_1d(abs(int(kk))) for kk in k])


@dataclass(frozen=True)
class ComparisonReport:
    factored: float
    spectral: float
    ratio: float
    convention_scaled_ratio: float
    max_identity_residual: float


def factored_vs_spectral(lam: SampledFunction2D, w: WaveletProfile,
                         omega: OpenSetMask, depth: int,
                         n_y: int = 6) -> ComparisonReport:
    """Both open-set functionals on one input, with their ratio.

    The factored display pairs rectangle coefficients (cell-averaged
    transform) with plane-transform band weights; the exact factorization
    of a periodic convolution therefore carries the constant ``(2*pi)^2``
    per function, so the convention-scaled ratio multiplies the raw ratio
    by ``(2*pi)^2``.  Values near 1 of the scaled ratio are the meaningful
    equivalence evidence; nothing here is asserted.
    """
    fac = factored_functional(lam, w, omega, depth)
    spec = spectral_box_functional(lam, w, omega, depth, n_y=n_y)
    ratio = fac.value / spec.value if spec.value > 0 else float("nan")
    return ComparisonReport(
        factored=fac.value,
        spectral=spec.value,
        ratio=ratio,
        convention_scaled_ratio=ratio * (2 * math.pi) ** 2,
        max_identity_residual=spec.max_residual,
    )
