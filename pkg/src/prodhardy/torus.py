"""Multiplier machinery on the two-torus.

Covers the Fejer product kernels, membership in the Hardy space of the
bidisc (integrable functions whose coefficients vanish off the closed
first quadrant), energies of multiplier symbols over dyadic frequency
blocks, the modulated-Fejer witnesses that force the block condition, and
the block-wise majorant that gives boundedness back.

Torus integrals use the normalized Haar measure ``dx/(2*pi)^2``, so the
Fejer products have unit mass and membership ratios are scale-free.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import IdentityError
from .grid import GridSpec, SampledFunction2D, torus_grid
from .spectral import SpectralArray, fourier_coeffs, full_spectrum

__all__ = [
    "MultiplierGrid",
    "DyadicBlock",
    "LacunarySupport",
    "torus_l1",
    "fejer_coeffs_1d",
    "fejer_kernel_1d",
    "fejer_closed_form_1d",
    "fejer_product",
    "MembershipReport",
    "h1_membership",
    "block_energy",
    "complete_blocks",
    "ConditionReport",
    "condition_constant",
    "paley_ratio",
    "WitnessReport",
    "necessity_witness",
    "ApplicationReport",
    "apply_multiplier",
]


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class MultiplierGrid:
    """Multiplier symbol ``lam[m, n]`` on the window ``[0, M) x [0, N)``."""

    lam: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.lam, dtype=complex)
        object.__setattr__(self, "lam", a)
        if a.ndim != 2:
            raise ValueError("multiplier symbol must be a 2-d array")
        if not np.all(np.isfinite(a.view(float))):
            raise ValueError("multiplier symbol has non-finite entries")

    @property
    def shape(self) -> Tuple[int, int]:
        return self.lam.shape

    # -- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "schema_version": 1,
            "shape": list(self.shape),
            "re": np.real(self.lam).tolist(),
            "im": np.imag(self.lam).tolist(),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "MultiplierGrid":
        return cls(np.asarray(d["re"], float) + 1j * np.asarray(d["im"], float))

    def save_csv(self, path) -> None:
        """Rows are first index m, columns second index n; cells are "re,im"."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            for row in self.lam:
                w.writerow([f"{float(z.real)!r},{float(z.imag)!r}" for z in row])

    @classmethod
    def load_csv(cls, path) -> "MultiplierGrid":
        rows = []
        with open(path, newline="") as fh:
            for line_no, rec in enumerate(csv.reader(fh)):
                try:
                    rows.append([complex(*map(float, cell.split(","))) for cell in rec])
                except (ValueError, TypeError) as exc:
                    raise ValueError(
                        f"{path}: row {line_no}: expected 're,im' cells ({exc})"
                    ) from exc
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError(f"{path}: empty or ragged multiplier table")
        return cls(np.asarray(rows, dtype=complex))

    @classmethod
    def load(cls, path) -> "MultiplierGrid":
        p = str(path)
        if p.endswith(".json"):
            with open(p) as fh:
                return cls.from_json_dict(json.load(fh))
        return cls.load_csv(p)


@dataclass(frozen=True)
class DyadicBlock:
    """The index block ``D_m x D_n`` with ``D_k = {2^k, ..., 2^(k+1)-1}``."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("block indices must be non-negative")

    @property
    def rows(self) -> range:
        return range(2 ** self.m, 2 ** (self.m + 1))

    @property
    def cols(self) -> range:
        return range(2 ** self.n, 2 ** (self.n + 1))

    @property
    def size(self) -> int:
        return 2 ** (self.m + self.n)

    def fits(self, shape: Tuple[int, int]) -> bool:
        return 2 ** (self.m + 1) <= shape[0] and 2 ** (self.n + 1) <= shape[1]


def _block_of(m: int, n: int) -> Optional[Tuple[int, int]]:
    if m < 1 or n < 1:
        return None
    return (m.bit_length() - 1, n.bit_length() - 1)


@dataclass(frozen=True)
class LacunarySupport:
    """0/1 support with at most one point per dyadic block.

    Points with a zero coordinate lie in no dyadic block and are therefore
    unconstrained by the definition.
    """

    points: frozenset

    def __init__(self, points: Iterable[Tuple[int, int]]):
        pts = frozenset((int(m), int(n)) for m, n in points)
        if any(m < 0 or n < 0 for m, n in pts):
            raise ValueError("support points must be non-negative")
        seen = {}
        for m, n in sorted(pts):
            b = _block_of(m, n)
            if b is None:
                continue
            if b in seen:
                raise ValueError(
                    f"points {seen[b]} and {(m, n)} share the dyadic block {b}"
                )
            seen[b] = (m, n)
        object.__setattr__(self, "points", pts)

    def indicator(self, shape: Tuple[int, int]) -> MultiplierGrid:
        lam = np.zeros(shape, dtype=complex)
        for m, n in self.points:
            if m < shape[0] and n < shape[1]:
                lam[m, n] = 1.0
        return MultiplierGrid(lam)

    def to_json_list(self) -> list:
        return [list(p) for p in sorted(self.points)]

    @classmethod
    def from_json_list(cls, data: list) -> "LacunarySupport":
        return cls((int(p[0]), int(p[1])) for p in data)


# ---------------------------------------------------------------------------
# Fejer kernels


def torus_l1(f: SampledFunction2D) -> float:
    """L1 norm with respect to normalized Haar measure (grid mean of |f|)."""
    if not f.is_periodic:
        raise ValueError("torus_l1 requires a periodic input")
    return float(np.mean(np.abs(f.values)))


def fejer_coeffs_1d(n: int) -> np.ndarray:
    """Triangular coefficients ``1 - |j|/(n+1)`` for ``j = -n..n``."""
    j = np.arange(-n, n + 1)
    return 1.0 - np.abs(j) / (n + 1)


def fejer_kernel_1d(n: int, x: np.ndarray) -> np.ndarray:
    """Kernel values synthesized from the coefficients (no singular quotient).

    Real cosine form: ``1 + 2*sum_{j=1..n} (1 - j/(n+1)) cos(j x)``.
    """
    x = np.asarray(x, dtype=float)
    out = np.ones_like(x)
    for j in range(1, n + 1):
        out = out + 2.0 * (1.0 - j / (n + 1)) * np.cos(j * x)
    return out


def fejer_closed_form_1d(n: int, x: np.ndarray) -> np.ndarray:
    """Quotient-of-sines form, valid away from multiples of 2*pi (test oracle)."""
    x = np.asarray(x, dtype=float)
    num = np.sin((n + 1) * x / 2.0) ** 2
    den = np.sin(x / 2.0) ** 2
    return num / ((n + 1) * den)


def fejer_product(k: int, l: int, grid: Optional[GridSpec] = None) -> SampledFunction2D:
    """Product Fejer kernel sampled on a torus grid with frequency spacing 1.

    The grid must resolve the top frequency of each factor (``2k+1 <= N1``
    and ``2l+1 <= N2``); defaults to the smallest power of two that does.
    """
    if k < 0 or l < 0:
        raise ValueError("Fejer orders must be non-negative")
    if grid is None:
        n = 1
        while n < 2 * max(k, l) + 2:
            n *= 2
        grid = torus_grid(max(n, 4))
    if grid.period is None or any(
        abs(p - 2 * np.pi) > 1e-9 for p in grid.period
    ):
        raise ValueError("fejer_product expects a 2*pi-periodic grid")
    if 2 * k + 1 > grid.shape[0] or 2 * l + 1 > grid.shape[1]:
        raise ValueError(
            f"grid {grid.shape} does not resolve Fejer orders ({k}, {l}); "
            f"need at least ({2 * k + 1}, {2 * l + 1}) samples"
        )
    vx = fejer_kernel_1d(k, grid.x1)
    vy = fejer_kernel_1d(l, grid.x2)
    return SampledFunction2D(np.outer(vx, vy), grid.origin, grid.cell, grid.period)


# ---------------------------------------------------------------------------
# Hardy space membership


@dataclass(frozen=True)
class MembershipReport:
    passed: bool
    max_forbidden: float
    l1_norm: float
    mode: str
    tol: float


def h1_membership(f: SampledFunction2D, mode: str = "or",
                  tol: float = 1e-9) -> MembershipReport:
    """Check that the resolvable spectrum vanishes on the forbidden indices.

    ``mode="or"`` forbids coefficients with ``m < 0`` or ``n < 0`` (the
    bidisc convention, default); ``mode="and"`` forbids only ``m < 0`` and
    ``n < 0`` simultaneously.  Only frequencies below the grid Nyquist limit
    are inspected, so the verdict assumes the input is resolved.
    """
    if mode not in ("or", "and"):
        raise ValueError(f"mode must be 'or' or 'and', got {mode!r}")
    spec = full_spectrum(f)
    K1, K2 = spec.window
    a1 = spec.alphas(0)[:, None]
    a2 = spec.alphas(1)[None, :]
    forbidden = (a1 < 0) | (a2 < 0) if mode == "or" else (a1 < 0) & (a2 < 0)
    max_forbidden = float(np.max(np.abs(spec.coeffs[forbidden]))) if forbidden.any() else 0.0
    return MembershipReport(
        passed=bool(max_forbidden < tol),
        max_forbidden=max_forbidden,
        l1_norm=torus_l1(f),
        mode=mode,
        tol=tol,
    )


# ---------------------------------------------------------------------------
# block energies and the block condition


def block_energy(lam: MultiplierGrid, b: DyadicBlock) -> float:
    """Exact finite sum of ``|lam|^2`` over the block; block must fit the window."""
    if not b.fits(lam.shape):
        raise ValueError(
            f"block ({b.m}, {b.n}) spans rows up to {2 ** (b.m + 1) - 1} and "
            f"cols up to {2 ** (b.n + 1) - 1}, outside window {lam.shape}"
        )
    sub = lam.lam[b.rows.start:b.rows.stop, b.cols.start:b.cols.stop]
    return float(np.sum(np.abs(sub) ** 2))


def complete_blocks(shape: Tuple[int, int]) -> List[DyadicBlock]:
    """All dyadic blocks wholly inside the window, scan order (m, n)."""
    out = []
    m = 0
    while 2 ** (m + 1) <= shape[0]:
        n = 0
        while 2 ** (n + 1) <= shape[1]:
            out.append(DyadicBlock(m, n))
            n += 1
        m += 1
    return out


@dataclass(frozen=True)
class ConditionReport:
    value: float
    block: Optional[DyadicBlock]
    blocks_scanned: int
    partial_blocks_excluded: List[Tuple[int, int]]


def condition_constant(lam: MultiplierGrid) -> ConditionReport:
    """Largest block energy over all complete blocks in the window.

    Partial blocks cut by the window edge are excluded and listed in the
    report; power-of-two windows have none.
    """
    blocks = complete_blocks(lam.shape)
    best, best_block = 0.0, None
    for b in blocks:
        e = block_energy(lam, b)
        if e > best:
            best, best_block = e, b
    partial = []
    M, N = lam.shape
    m_edge = (M - 1).bit_length() - 1 if M > 1 else -1
    n_edge = (N - 1).bit_length() - 1 if N > 1 else -1
    for m in range(m_edge + 1):
        for n in range(n_edge + 1):
            b = DyadicBlock(m, n)
            if not b.fits(lam.shape) and 2 ** m < M and 2 ** n < N:
                partial.append((m, n))
    return ConditionReport(best, best_block, len(blocks), partial)


def paley_ratio(f: SampledFunction2D, s: LacunarySupport) -> float:
    """Ratio of the lacunary coefficient l2 mass to the L1 norm.

    The empirical constant of the lacunary coefficient inequality; requires
    a Hardy-space member with positive L1 norm.
    """
    report = h1_membership(f)
    if not report.passed:
        raise ValueError(
            f"input failed the membership check (max forbidden coefficient "
            f"{report.max_forbidden:.3e})"
        )
    if report.l1_norm == 0:
        raise ValueError("input has zero L1 norm")
    spec = full_spectrum(f)
    K1, K2 = spec.window
    total = 0.0
    for m, n in s.points:
        if m <= K1 and n <= K2:
            total += abs(spec.index(m, n)) ** 2
    return float(np.sqrt(total) / report.l1_norm)


# ---------------------------------------------------------------------------
# necessity witnesses


def _witness_coeff_1d(alpha: np.ndarray, k1: int) -> np.ndarray:
    """Coefficients of ``exp(i k1 x) F_{k1}(x)``: triangle centered at k1."""
    return np.maximum(0.0, 1.0 - np.abs(alpha - k1) / (k1 + 1))


@dataclass(frozen=True)
class WitnessReport:
    witness: SampledFunction2D
    value: float
    guaranteed_bound: float
    reference_bound: float
    block_energy: float
    block: DyadicBlock


def necessity_witness(lam: MultiplierGrid, b: DyadicBlock,
                      grid: Optional[GridSpec] = None) -> WitnessReport:
    """Modulated Fejer witness for the block condition.

    Returns the function ``g = exp(i 2^(m+1) x) exp(i 2^(n+1) y)
    F_{2^(m+1), 2^(n+1)}`` together with the squared l2 norm of the
    multiplied coefficient sequence over the symbol window.

    On the block each witness coefficient is a product of two axis
    triangles, each strictly above 1/2, so its squared modulus exceeds
    1/16: the value is asserted to be at least ``block_energy/16``
    (``guaranteed_bound``), which is what the unboundedness argument
    needs.  The stronger one-dimensional level ``block_energy/4`` is
    reported as ``reference_bound``; it holds for spread-out symbols
    (e.g. constant 1) but fails for symbols concentrated at the lower
    corner of a block with ``m`` or ``n`` equal to 0, where the corner
    coefficient is only ``(2/3)^2``.
    """
    energy = block_energy(lam, b)
    k1, l1 = 2 ** (b.m + 1), 2 ** (b.n + 1)

    if grid is None:
        n = 4
        while n < 2 * (2 * k1) + 2 or n < 2 * (2 * l1) + 2:
            n *= 2
        grid = torus_grid(n)
    if 2 * (2 * k1) + 1 > grid.shape[0] or 2 * (2 * l1) + 1 > grid.shape[1]:
        raise ValueError(
            f"grid {grid.shape} does not resolve the witness spectrum; need "
            f"at least ({4 * k1 + 1}, {4 * l1 + 1}) samples"
        )

    vx = np.exp(1j * k1 * grid.x1) * fejer_kernel_1d(k1, grid.x1)
    vy = np.exp(1j * l1 * grid.x2) * fejer_kernel_1d(l1, grid.x2)
    witness = SampledFunction2D(np.outer(vx, vy), grid.origin, grid.cell, grid.period)

    M, N = lam.shape
    ghat = np.outer(
        _witness_coeff_1d(np.arange(M), k1),
        _witness_coeff_1d(np.arange(N), l1),
    )
    value = float(np.sum(np.abs(lam.lam * ghat) ** 2))
    guaranteed = energy / 16.0
    if value < guaranteed:
        raise IdentityError(
            f"witness value {value} fell below block_energy/16 = {guaranteed}; "
            f"block ({b.m}, {b.n})"
        )
    return WitnessReport(witness, value, guaranteed, energy / 4.0, energy, b)


# ---------------------------------------------------------------------------
# applying a multiplier and the block-wise majorant


@dataclass(frozen=True)
class ApplicationReport:
    sequence: np.ndarray
    l2_norm: float
    covered_l2_norm: float
    majorant: float
    condition_value: float
    block_sup_sum: float


def apply_multiplier(lam: MultiplierGrid, f: SampledFunction2D) -> ApplicationReport:
    """Multiply the coefficient sequence of ``f`` by the symbol.

    Returns the sequence on the symbol window with its l2 norm, plus the
    block-wise majorant: the square root of the condition constant times the
    square root of the sum over complete blocks of the squared per-block sup
    of ``|f^|``.  The majorant bounds the part of the norm carried by the
    union of complete blocks (frequency index 0 rows/columns and edge
    leftovers lie outside every block); that inequality is asserted.
    """
    report = h1_membership(f)
    if not report.passed:
        raise ValueError(
            f"input failed the membership check (max forbidden coefficient "
            f"{report.max_forbidden:.3e})"
        )
    spec = full_spectrum(f)
    K1, K2 = spec.window
    M, N = lam.shape
    if M - 1 > K1 or N - 1 > K2:
        raise ValueError(
            f"symbol window {lam.shape} exceeds the grid Nyquist window "
            f"({K1 + 1}, {K2 + 1})"
        )
    fhat = spec.coeffs[K1:K1 + M, K2:K2 + N]
    seq = lam.lam * fhat
    l2 = float(np.sqrt(np.sum(np.abs(seq) ** 2)))

    cond = condition_constant(lam)
    covered_sq = 0.0
    sup_sum = 0.0
    for b in complete_blocks(lam.shape):
        sl = (slice(b.rows.start, b.rows.stop), slice(b.cols.start, b.cols.stop))
        covered_sq += float(np.sum(np.abs(seq[sl]) ** 2))
        sup_sum += float(np.max(np.abs(fhat[sl])) ** 2)
    covered = float(np.sqrt(covered_sq))
    majorant = float(np.sqrt(cond.value) * np.sqrt(sup_sum))
    if covered > majorant * (1 + 1e-12) + 1e-300:
        raise IdentityError(
            f"block-covered norm {covered} exceeded its majorant {majorant}"
        )
    return ApplicationReport(seq, l2, covered, majorant, cond.value, sup_sum)
