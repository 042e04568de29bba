"""Geometric view: channel matrices as height fields and their function systems.

A channel matrix embeds into the unit square as a field of half-open square
cells carrying heights z in {0} u {2**-m}: input sequences run top to bottom
(row 1 of the matrix at the top), output sequences left to right, so the
shape looks exactly like the matrix as printed.  In (x, y) coordinates that
means x grows with the output index and y decreases with the input index.
Cell boundaries carry no value; only cell interiors are modeled.

Three affine contractions reproduce the block recursion of the matrices: one
iteration of the system on the resolution-n grid yields the resolution-(n+1)
grid, and iterating from the constant-1 unit cell reproduces the embedded
channel matrix of the same depth cell-for-cell.  A 180-degree rotation of
the square swaps the two initial states.  The classic three-map
Sierpinski system is included; its iterates keep z = 1 and have exactly 3**k
occupied cells at depth k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .channel import ChannelMatrix
from .dyadic import Dyadic

Frac3 = tuple[Fraction, Fraction, Fraction]

EMPTY = -1  # z-code for an empty cell; code m >= 0 means z = 2**-m


class GridSemanticsError(ValueError):
    """The map cannot act exactly on dyadic grids (cells, overlap, or z form)."""


@dataclass(frozen=True)
class AffineMap3:
    """Affine map of R^3: (x, y, z) -> linear @ (x, y, z) + translation.

    Coefficients are exact rationals.  The restriction to the (x, y) plane
    must be a contraction; this is asserted numerically on construction of an
    Ifs.
    """

    linear: tuple[Frac3, Frac3, Frac3]
    translation: Frac3

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], translation: Sequence) -> "AffineMap3":
        lin = tuple(tuple(Fraction(v) for v in row) for row in rows)
        tr = tuple(Fraction(v) for v in translation)
        if len(lin) != 3 or any(len(r) != 3 for r in lin) or len(tr) != 3:
            raise ValueError("need a 3x3 linear part and a length-3 translation")
        return cls(lin, tr)  # type: ignore[arg-type]

    def apply(self, x, y, z) -> tuple[Fraction, Fraction, Fraction]:
        x, y, z = Fraction(x), Fraction(y), Fraction(z)
        lin, tr = self.linear, self.translation
        return (
            lin[0][0] * x + lin[0][1] * y + lin[0][2] * z + tr[0],
            lin[1][0] * x + lin[1][1] * y + lin[1][2] * z + tr[1],
            lin[2][0] * x + lin[2][1] * y + lin[2][2] * z + tr[2],
        )

    def xy_contraction_factor(self) -> float:
        """Spectral norm of the 2x2 xy block."""
        a, b = float(self.linear[0][0]), float(self.linear[0][1])
        c, d = float(self.linear[1][0]), float(self.linear[1][1])
        t = a * a + b * b + c * c + d * d
        det = a * d - b * c
        disc = max(t * t - 4.0 * det * det, 0.0)
        return math.sqrt((t + math.sqrt(disc)) / 2.0)


@dataclass(frozen=True)
class Ifs:
    """A finite family of affine contractions of the unit cube."""

    maps: tuple[AffineMap3, ...]

    def __post_init__(self) -> None:
        if not self.maps:
            raise ValueError("an iterated function system needs at least one map")
        if self.contractivity >= 1.0:
            raise ValueError("xy restrictions must be contractions")

    @property
    def contractivity(self) -> float:
        return max(m.xy_contraction_factor() for m in self.maps)


class ShapeGrid:
    """2**k x 2**k field of dyadic heights over the unit square.

    cells are indexed [row][col], row 0 at the top (y near 1), col 0 at the
    left (x near 0); cell (r, c) covers the open box
    (c*2**-k, (c+1)*2**-k) x (1-(r+1)*2**-k, 1-r*2**-k).  Heights are stored
    as codes: -1 for z = 0, m >= 0 for z = 2**-m with m <= k.
    """

    __slots__ = ("resolution", "codes")

    def __init__(self, resolution: int, codes: list[list[int]]) -> None:
        side = 1 << resolution
        if len(codes) != side or any(len(r) != side for r in codes):
            raise ValueError(f"expected a {side}x{side} grid")
        for row in codes:
            for m in row:
                if m != EMPTY and not 0 <= m <= resolution:
                    raise ValueError(
                        f"height code {m} outside {{0}} u {{2**-m: m <= {resolution}}}"
                    )
        self.resolution = resolution
        self.codes = codes

    @property
    def side(self) -> int:
        return 1 << self.resolution

    def z(self, row: int, col: int) -> Dyadic:
        m = self.codes[row][col]
        return Dyadic(0) if m == EMPTY else Dyadic(1, m)

    def dyadic_rows(self) -> list[list[Dyadic]]:
        return [[self.z(r, c) for c in range(self.side)] for r in range(self.side)]

    def nonzero_count(self) -> int:
        return sum(1 for row in self.codes for m in row if m != EMPTY)

    def quadrant_codes(self, vertical: int, horizontal: int) -> list[list[int]]:
        """Height codes of one quadrant: (0,0) top-left .. (1,1) bottom-right.

        Returned as raw codes, not a ShapeGrid: a quadrant may carry heights
        finer than its own side length allows (e.g. the scaled-down blocks of
        a deeper embedding).
        """
        if self.resolution == 0:
            raise ValueError("a 1x1 grid has no quadrants")
        half = self.side // 2
        r0, c0 = vertical * half, horizontal * half
        return [row[c0 : c0 + half] for row in self.codes[r0 : r0 + half]]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ShapeGrid):
            return NotImplemented
        return self.resolution == other.resolution and self.codes == other.codes

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"ShapeGrid(resolution={self.resolution}, nonzero={self.nonzero_count()})"


def unit_grid() -> ShapeGrid:
    """The initial shape: the unit square at height z = 1."""
    return ShapeGrid(0, [[0]])


def rho_representation(P: ChannelMatrix) -> ShapeGrid:
    """Embed a channel matrix as a height grid at resolution n (matrix as printed)."""
    e = P.data.exp
    codes = []
    for row in P.data.int_rows:
        out = []
        for v in row:
            if v == 0:
                out.append(EMPTY)
            else:
                if v & (v - 1):
                    raise ValueError("channel entry is not a power of two")
                out.append(e - (v.bit_length() - 1))
        codes.append(out)
    return ShapeGrid(P.n, codes)


def tau_transform(g: ShapeGrid) -> ShapeGrid:
    """180-degree rotation (x, y) -> (1-x, 1-y) with z preserved; involutive.

    Maps the embedding of one initial state onto the other.
    """
    return ShapeGrid(g.resolution, [row[::-1] for row in g.codes[::-1]])


def trapdoor_ifs(s0: int) -> Ifs:
    """The three-map system whose iterates reproduce the channel embeddings.

    State 0:  (x, y, z) -> ((x+1)/2, y/2, z/2), (x/2, (y+1)/2, z),
              (-(x-1)/2, -(y-1)/2, z/2).
    State 1 is the 180-degree conjugate of state 0.
    """
    h = Fraction(1, 2)
    if s0 == 0:
        return Ifs(
            (
                AffineMap3.from_rows([[h, 0, 0], [0, h, 0], [0, 0, h]], [h, 0, 0]),
                AffineMap3.from_rows([[h, 0, 0], [0, h, 0], [0, 0, 1]], [0, h, 0]),
                AffineMap3.from_rows([[-h, 0, 0], [0, -h, 0], [0, 0, h]], [h, h, 0]),
            )
        )
    if s0 == 1:
        return Ifs(
            (
                AffineMap3.from_rows([[h, 0, 0], [0, h, 0], [0, 0, 1]], [h, 0, 0]),
                AffineMap3.from_rows([[h, 0, 0], [0, h, 0], [0, 0, h]], [0, h, 0]),
                AffineMap3.from_rows([[-h, 0, 0], [0, -h, 0], [0, 0, h]], [1, 1, 0]),
            )
        )
    raise ValueError("initial state must be 0 or 1")


def sierpinski_ifs() -> Ifs:
    """The classic three half-scale maps (z unchanged); attractor: Sierpinski triangle."""
    h = Fraction(1, 2)
    z_keep = [0, 0, 1]
    return Ifs(
        (
            AffineMap3.from_rows([[h, 0, 0], [0, h, 0], z_keep], [h, 0, 0]),
            AffineMap3.from_rows([[h, 0, 0], [0, h, 0], z_keep], [0, h, 0]),
            AffineMap3.from_rows([[h, 0, 0], [0, h, 0], z_keep], [0, 0, 0]),
        )
    )


def _cell_transform(m: AffineMap3, res: int) -> tuple[int, int, int, int, int, int, int]:
    """Integer action of a map on cell indices: res -> res + 1.

    Returns (r0, c0, dr_dr, dr_dc, dc_dr, dc_dc, zshift) such that cell
    (r, c) maps to (r0 + dr_dr*r + dr_dc*c, c0 + dc_dr*r + dc_dc*c) and the
    height code moves by +zshift.  Raises GridSemanticsError when the map
    does not send dyadic cells of this resolution onto cells of the next.
    """
    lin, tr = m.linear, m.translation
    if lin[0][2] or lin[1][2] or lin[2][0] or lin[2][1] or tr[2]:
        raise GridSemanticsError("grid maps must not mix z with x/y or translate z")
    za = lin[2][2]
    if za.numerator != 1 or (za.denominator & (za.denominator - 1)):
        raise GridSemanticsError(f"z scale {za} is not 2**-j for j >= 0")
    zshift = za.denominator.bit_length() - 1

    def target(r: int, c: int) -> tuple[Fraction, Fraction]:
        x = Fraction(2 * c + 1, 1 << (res + 1))
        y = 1 - Fraction(2 * r + 1, 1 << (res + 1))
        xp = lin[0][0] * x + lin[0][1] * y + tr[0]
        yp = lin[1][0] * x + lin[1][1] * y + tr[1]
        cp = (xp * (1 << (res + 2)) - 1) / 2
        rp = ((1 - yp) * (1 << (res + 2)) - 1) / 2
        return rp, cp

    r00, c00 = target(0, 0)
    r01, c01 = target(0, 1)
    r10, c10 = target(1, 0)
    coeffs = (r00, c00, r10 - r00, r01 - r00, c10 - c00, c01 - c00)
    if any(v.denominator != 1 for v in coeffs):
        raise GridSemanticsError(
            "map does not send dyadic cell centers onto cell centers"
        )
    r0, c0, drdr, drdc, dcdr, dcdc = (int(v) for v in coeffs)
    side_out = 1 << (res + 1)
    last = (1 << res) - 1
    for r, c in ((0, 0), (0, last), (last, 0), (last, last)):
        tr_, tc_ = r0 + drdr * r + drdc * c, c0 + dcdr * r + dcdc * c
        if not (0 <= tr_ < side_out and 0 <= tc_ < side_out):
            raise GridSemanticsError("map sends cells outside the unit square")
    return r0, c0, drdr, drdc, dcdr, dcdc, zshift


def ifs_iterate(ifs: Ifs, initial: ShapeGrid, k: int) -> ShapeGrid:
    """Apply the union-of-maps operator k times; resolution grows by k.

    Every map image must land on its own cells (the systems here tile three
    disjoint quadrants); writing one output cell twice raises
    GridSemanticsError rather than merging.  Uncovered cells end at z = 0.
    """
    if k < 0:
        raise ValueError("iteration count must be non-negative")
    grid = initial
    for _ in range(k):
        res = grid.resolution
        side_out = 1 << (res + 1)
        target: list[list[int | None]] = [[None] * side_out for _ in range(side_out)]
        for m in ifs.maps:
            r0, c0, drdr, drdc, dcdr, dcdc, zshift = _cell_transform(m, res)
            for r, row in enumerate(grid.codes):
                base_r = r0 + drdr * r
                base_c = c0 + dcdr * r
                for c, code in enumerate(row):
                    tr_ = base_r + drdc * c
                    tc_ = base_c + dcdc * c
                    if target[tr_][tc_] is not None:
                        raise GridSemanticsError(
                            f"maps overlap at output cell ({tr_}, {tc_}); "
                            "the system does not tile under grid semantics"
                        )
                    target[tr_][tc_] = code if code == EMPTY else code + zshift
        grid = ShapeGrid(
            res + 1,
            [[EMPTY if v is None else v for v in row] for row in target],
        )
    return grid


def render_pgm(grid: ShapeGrid, mode: str = "linear", gamma: float = 1.0) -> bytes:
    """Render to a binary 8-bit PGM (P5), one pixel per cell, top row first.

    linear: pixel = round(255 * z**gamma); log: z = 2**-m maps to
    round(255 * (1 - m/k)) so deep levels stay visible; binary: occupancy
    mask.  Pure function of (grid, mode, gamma): identical bytes across runs.
    """
    if mode not in ("linear", "log", "binary"):
        raise ValueError(f"unknown render mode {mode!r}")
    if mode == "linear" and gamma <= 0:
        raise ValueError("gamma must be positive")
    side = grid.side
    k = grid.resolution
    pixels = bytearray()
    for row in grid.codes:
        for m in row:
            if m == EMPTY:
                pixels.append(0)
            elif mode == "binary":
                pixels.append(255)
            elif mode == "log":
                pixels.append(255 if k == 0 else round(255 * (1 - m / k)))
            else:
                pixels.append(round(255 * (0.5**m) ** gamma))
    return b"P5\n%d %d\n255\n" % (side, side) + bytes(pixels)
