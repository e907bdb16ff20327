"""Dyadic intervals, rectangles, and open-set masks with exact containment.

All geometry here is dyadic-rational and containment is decided in integer
arithmetic: an ``OpenSetMask`` is a finite union of half-open grid cells of
side ``2**cell_exp``, a ``DyadicInterval`` is ``[pos * 2**scale,
(pos+1) * 2**scale)``, and a rectangle is contained in the mask iff every
cell it meets is present.  No floating-point comparisons are involved.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Sequence, Tuple

import numpy as np

__all__ = [
    "DyadicInterval",
    "DyadicRectangle",
    "OpenSetMask",
    "enumerate_dyadic_rectangles",
]


@dataclass(frozen=True, order=True)
class DyadicInterval:
    """Half-open dyadic interval ``[pos * 2**scale, (pos+1) * 2**scale)``."""

    scale: int
    pos: int

    @property
    def length(self) -> float:
        return 2.0 ** self.scale

    @property
    def lo(self) -> float:
        return self.pos * 2.0 ** self.scale

    @property
    def hi(self) -> float:
        return (self.pos + 1) * 2.0 ** self.scale


@dataclass(frozen=True, order=True)
class DyadicRectangle:
    """Product of dyadic intervals; axis 1 first, axis 2 second."""

    ix: DyadicInterval
    iy: DyadicInterval

    @property
    def area(self) -> float:
        return self.ix.length * self.iy.length

    @property
    def side_lengths(self) -> Tuple[float, float]:
        return (self.ix.length, self.iy.length)

    @property
    def bounds(self) -> Tuple[float, float, float, float]:
        return (self.ix.lo, self.ix.hi, self.iy.lo, self.iy.hi)


def _axis_cells(scale: int, pos: int, cell_exp: int) -> Tuple[int, int]:
    """Range (inclusive start, exclusive stop) of cell indices met on one axis."""
    if scale >= cell_exp:
        m = 1 << (scale - cell_exp)
        return (pos * m, (pos + 1) * m)
    m = 1 << (cell_exp - scale)
    # interval strictly inside one cell; Python floor division handles pos < 0
    return (pos // m, pos // m + 1)


class OpenSetMask:
    """Finite union of half-open grid cells standing in for a bounded open set.

    ``cells`` holds integer pairs ``(i, j)``; cell ``(i, j)`` is
    ``[i*2**cell_exp, (i+1)*2**cell_exp) x [j*2**cell_exp, (j+1)*2**cell_exp)``.
    """

    def __init__(self, cell_exp: int, cells: Iterable[Tuple[int, int]]):
        self.cell_exp = int(cell_exp)
        self.cells: FrozenSet[Tuple[int, int]] = frozenset(
            (int(i), int(j)) for i, j in cells
        )
        if not self.cells:
            raise ValueError("mask must contain at least one cell (area > 0)")

    @property
    def area(self) -> float:
        return len(self.cells) * 4.0 ** self.cell_exp

    @property
    def cell_side(self) -> float:
        return 2.0 ** self.cell_exp

    def bounds_cells(self) -> Tuple[int, int, int, int]:
        i_lo = min(i for i, _ in self.cells)
        i_hi = max(i for i, _ in self.cells) + 1
        j_lo = min(j for _, j in self.cells)
        j_hi = max(j for _, j in self.cells) + 1
        return i_lo, i_hi, j_lo, j_hi

    @property
    def bounds(self) -> Tuple[float, float, float, float]:
        i_lo, i_hi, j_lo, j_hi = self.bounds_cells()
        c = self.cell_side
        return (i_lo * c, i_hi * c, j_lo * c, j_hi * c)

    def contains_rectangle(self, r: DyadicRectangle) -> bool:
        x0, x1 = _axis_cells(r.ix.scale, r.ix.pos, self.cell_exp)
        y0, y1 = _axis_cells(r.iy.scale, r.iy.pos, self.cell_exp)
        return all(
            (i, j) in self.cells for i in range(x0, x1) for j in range(y0, y1)
        )

    # -- constructors / serialization --------------------------------------

    @classmethod
    def square(cls, cell_exp: int, cells_per_side: int,
               corner: Tuple[int, int] = (0, 0)) -> "OpenSetMask":
        i0, j0 = corner
        return cls(cell_exp, [(i0 + i, j0 + j)
                              for i in range(cells_per_side)
                              for j in range(cells_per_side)])

    def to_json_dict(self) -> dict:
        return {
            "schema_version": 1,
            "cell_exp": self.cell_exp,
            "cells": [list(c) for c in sorted(self.cells)],
        }

    def save_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, sort_keys=True)
            fh.write("\n")

    @classmethod
    def from_json_dict(cls, d: dict) -> "OpenSetMask":
        return cls(d["cell_exp"], [tuple(c) for c in d["cells"]])

    @classmethod
    def load_json(cls, path) -> "OpenSetMask":
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def enumerate_dyadic_rectangles(omega: OpenSetMask, depth: int) -> List[DyadicRectangle]:
    """All dyadic rectangles with side scales in ``[2**-depth, 2**depth]``
    wholly contained in the mask.

    Deterministic order: scale-major ascending (x scale, then y scale),
    position ascending within a scale pair.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    i_lo, i_hi, j_lo, j_hi = omega.bounds_cells()
    e = omega.cell_exp
    out: List[DyadicRectangle] = []
    for a in range(-depth, depth + 1):
        xs = _axis_positions(a, i_lo, i_hi, e)
        if not xs:
            continue
        for b in range(-depth, depth + 1):
            ys = _axis_positions(b, j_lo, j_hi, e)
            for p in xs:
                for q in ys:
                    r = DyadicRectangle(DyadicInterval(a, p), DyadicInterval(b, q))
                    if omega.contains_rectangle(r):
                        out.append(r)
    return out


def _axis_positions(scale: int, c_lo: int, c_hi: int, cell_exp: int) -> range:
    """Candidate positions at one scale whose interval meets the cell range."""
    if scale >= cell_exp:
        m = 1 << (scale - cell_exp)
        p_lo = _ceil_div(c_lo, m)
        p_hi = c_hi // m  # exclusive
        return range(p_lo, p_hi)
    m = 1 << (cell_exp - scale)
    return range(c_lo * m, c_hi * m)
