"""Exact, deterministic serialization shared by all modules.

Dyadic values travel as the canonical text form "a/2^e" (numerator odd
unless e = 0; plain "0" for zero), so exports stay exact and diffable.
Matrix CSV files carry a header row with the block length, initial state
(or "general"), and dimension.  Image writers emit binary PGM (P5) and a
minimal 8-bit grayscale PNG; both are byte-deterministic functions of their
inputs.
"""

from __future__ import annotations

import json
import re
import struct
import zlib
from pathlib import Path
from typing import Any, Union

from .channel import ChannelMatrix
from .dyadic import Dyadic
from .matrices import DyadicMatrix

_DYADIC_RE = re.compile(r"^(-?\d+)/2\^(\d+)$")


def format_dyadic(d: Dyadic) -> str:
    """Canonical exact form: "0" or "a/2^e" (e.g. 1/2 -> "1/2^1", 1 -> "1/2^0")."""
    if d.num == 0:
        return "0"
    return f"{d.num}/2^{d.exp}"


def parse_dyadic(s: str) -> Dyadic:
    """Inverse of format_dyadic; also accepts plain integers."""
    s = s.strip()
    if not s:
        raise ValueError("empty dyadic string")
    m = _DYADIC_RE.match(s)
    if m:
        return Dyadic(int(m.group(1)), int(m.group(2)))
    try:
        return Dyadic(int(s), 0)
    except ValueError:
        raise ValueError(f"malformed dyadic string {s!r}") from None


Matrix = Union[ChannelMatrix, DyadicMatrix]


def matrix_csv_text(matrix: Matrix) -> str:
    """CSV serialization of a matrix: header row, then canonical dyadic cells."""
    if isinstance(matrix, ChannelMatrix):
        n, s0, data = matrix.n, str(matrix.s0), matrix.data
    else:
        data = matrix
        n = data.dim.bit_length() - 1
        s0 = "general"
    lines = [f"n={n},s0={s0},dim={data.dim}"]
    for i in range(data.dim):
        lines.append(",".join(format_dyadic(d) for d in data.row_dyadics(i)))
    return "\n".join(lines) + "\n"


def write_matrix_csv(matrix: Matrix, path: Union[str, Path]) -> None:
    """Serialize a matrix losslessly; round-trips through read_matrix_csv."""
    Path(path).write_text(matrix_csv_text(matrix), encoding="utf-8")


def read_matrix_csv(path: Union[str, Path]) -> Matrix:
    """Parse a matrix written by write_matrix_csv.

    Returns a ChannelMatrix when the header names an initial state, else a
    DyadicMatrix.  Raises ValueError (with the path) on malformed content.
    """
    p = Path(path)
    text = p.read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"{p}: empty matrix file")
    header = dict(
        item.split("=", 1) for item in lines[0].split(",") if "=" in item
    )
    try:
        n = int(header["n"])
        dim = int(header["dim"])
        s0_raw = header["s0"]
    except (KeyError, ValueError) as exc:
        raise ValueError(f"{p}: malformed header {lines[0]!r}") from exc
    if len(lines) - 1 != dim:
        raise ValueError(f"{p}: expected {dim} rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        cells = ln.split(",")
        if len(cells) != dim:
            raise ValueError(f"{p}: expected {dim} columns, found {len(cells)}")
        try:
            rows.append([parse_dyadic(c) for c in cells])
        except ValueError as exc:
            raise ValueError(f"{p}: {exc}") from None
    data = DyadicMatrix.from_dyadic_rows(rows)
    if s0_raw in ("0", "1"):
        matrix = ChannelMatrix(n, int(s0_raw), data)
        try:
            matrix.validate()
        except ValueError as exc:
            raise ValueError(f"{p}: not a valid channel matrix: {exc}") from None
        return matrix
    return data


def json_default(obj: Any) -> Any:
    """json.dumps hook: dyadics as canonical strings."""
    if isinstance(obj, Dyadic):
        return format_dyadic(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def dumps_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, default=json_default) + "\n"


def write_json(obj: Any, path: Union[str, Path]) -> None:
    """Write a JSON report with stable keys and exact dyadic strings."""
    try:
        Path(path).write_text(dumps_json(obj), encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write JSON to {path}: {exc}") from exc


def write_pgm(data: bytes, path: Union[str, Path]) -> None:
    """Persist rendered PGM bytes exactly."""
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise OSError(f"cannot write PGM to {path}: {exc}") from exc


def png_bytes(pixels: bytes, width: int, height: int) -> bytes:
    """Minimal 8-bit grayscale PNG for a row-major pixel buffer."""
    if len(pixels) != width * height:
        raise ValueError("pixel buffer does not match dimensions")

    def chunk(tag: bytes, payload: bytes) -> bytes:
        return (
            struct.pack(">I", len(payload))
            + tag
            + payload
            + struct.pack(">I", zlib.crc32(tag + payload))
        )

    ihdr = struct.pack(">IIBBBBB", width, height, 8, 0, 0, 0, 0)
    raw = b"".join(
        b"\x00" + pixels[y * width : (y + 1) * width] for y in range(height)
    )
    return (
        b"\x89PNG\r\n\x1a\n"
        + chunk(b"IHDR", ihdr)
        + chunk(b"IDAT", zlib.compress(raw, 9))
        + chunk(b"IEND", b"")
    )


def pgm_to_png(pgm: bytes) -> bytes:
    """Convert P5 bytes produced by render_pgm into PNG bytes."""
    m = re.match(rb"^P5\n(\d+) (\d+)\n255\n", pgm)
    if not m:
        raise ValueError("not a P5 graymap produced by render_pgm")
    w, h = int(m.group(1)), int(m.group(2))
    return png_bytes(pgm[m.end() :], w, h)


def write_png(pgm_or_pixels: bytes, path: Union[str, Path], width: int | None = None, height: int | None = None) -> None:
    """Write a PNG either from P5 bytes or from a raw buffer plus dimensions."""
    if width is None:
        data = pgm_to_png(pgm_or_pixels)
    else:
        if height is None:
            height = width
        data = png_bytes(pgm_or_pixels, width, height)
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise OSError(f"cannot write PNG to {path}: {exc}") from exc


def bound_report(result) -> dict:
    """JSON-ready dict for a BoundResult (exact S string, 1-based negative indices)."""
    return {
        "n": result.n,
        "s0": result.s0,
        "S": format_dyadic(result.S),
        "c_upper_bits_per_use": result.c_up,
        "d_negative_indices": result.negative_d_indices(),
    }


def ba_report(report, bound: float) -> dict:
    """JSON-ready dict for an OptimizationReport plus its gap to the bound."""
    return {
        "n": report.n,
        "s0": report.s0,
        "capacity_bits_per_use": report.capacity_per_letter,
        "bound_bits_per_use": bound,
        "gap_to_bound": bound - report.capacity_per_letter,
        "iterations": report.iterations,
        "bracket_width": report.final_gap,
        "converged": report.converged,
        "distribution": [float(x) for x in report.distribution],
    }
