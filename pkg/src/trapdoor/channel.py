"""Construction and exact inversion of the trapdoor channel matrices.

P(n, s0) is the 2**n x 2**n matrix of conditional probabilities of length-n
output sequences given length-n input sequences when the box initially holds
ball s0.  Row i (1-based in all documentation, 0-based in code) corresponds
to the input bit string spelling the integer i-1, most-significant bit first;
columns index output strings the same way.  The matrices obey the block
recursions

    P(n+1, 0) = [[ P(n, 0),      0        ],        P(n+1, 1) = [[ P(n,1)/2,  P(n,0)/2 ],
                 [ P(n, 1)/2,    P(n, 0)/2 ]]                    [ 0,         P(n,1)   ]]

with P(0, 0) = P(0, 1) = [1], so every entry is 0 or a power of 1/2 and rows
sum to exactly 1.  Inverses are computed by the block-triangular inversion
formula applied recursively, entirely in integer arithmetic.
"""

from __future__ import annotations

from typing import Union

from . import config
from .dyadic import Dyadic
from .matrices import DyadicMatrix, IntRows, reverse_vector


class ChannelMatrix:
    """P(n, s0) with its block length and initial state attached."""

    __slots__ = ("n", "s0", "data")

    def __init__(self, n: int, s0: int, data: DyadicMatrix) -> None:
        if s0 not in (0, 1):
            raise ValueError("initial state must be 0 or 1")
        if data.dim != 1 << n:
            raise ValueError(f"expected dimension {1 << n}, got {data.dim}")
        self.n = n
        self.s0 = s0
        self.data = data

    @property
    def dim(self) -> int:
        return self.data.dim

    def entry(self, i: int, j: int) -> Dyadic:
        return self.data.entry(i, j)

    def row_dyadics(self, i: int) -> list[Dyadic]:
        return self.data.row_dyadics(i)

    def row_index(self, bits: str) -> int:
        """0-based row index of an input bit string."""
        if len(bits) != self.n or (bits and set(bits) - {"0", "1"}):
            raise ValueError(f"expected a length-{self.n} bit string, got {bits!r}")
        return int(bits, 2) if bits else 0

    def float_rows(self) -> list[list[float]]:
        scale = float(1 << self.data.exp)
        return [[v / scale for v in row] for row in self.data.int_rows]

    def validate(self) -> None:
        """Check stochasticity and the power-of-two entry property; raises on failure."""
        one = 1 << self.data.exp
        for row in self.data.int_rows:
            if sum(row) != one:
                raise ValueError("row does not sum to exactly 1")
            for v in row:
                if v < 0 or (v and (v & (v - 1))):
                    raise ValueError("entry is neither 0 nor a power of 1/2")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChannelMatrix):
            return NotImplemented
        return self.n == other.n and self.s0 == other.s0 and self.data == other.data

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"ChannelMatrix(n={self.n}, s0={self.s0})"


def _int_ladder(n: int) -> list[tuple[IntRows, IntRows]]:
    """Scaled integer rows of (P(k,0), P(k,1)) for k = 0..n; level k is scaled by 2**k."""
    rows0: IntRows = [[1]]
    rows1: IntRows = [[1]]
    ladder = [(rows0, rows1)]
    for k in range(1, n + 1):
        half = 1 << (k - 1)
        zeros = [0] * half
        new0 = [[v << 1 for v in r] + zeros for r in rows0]
        new0 += [r1 + r0 for r1, r0 in zip(rows1, rows0)]
        new1 = [r1 + r0 for r1, r0 in zip(rows1, rows0)]
        new1 += [zeros + [v << 1 for v in r] for r in rows1]
        rows0, rows1 = new0, new1
        ladder.append((rows0, rows1))
    return ladder


def build_channel_matrix(n: int, s0: int, cap: int | None = None) -> ChannelMatrix:
    """Build P(n, s0) by n applications of the block recursion."""
    if n < 0:
        raise ValueError("block length must be non-negative")
    if s0 not in (0, 1):
        raise ValueError("initial state must be 0 or 1")
    limit = config.matrix_cap() if cap is None else cap
    if n > limit:
        raise ValueError(
            f"block length {n} exceeds the cap {limit} (storage is 4**n entries; "
            f"override with {config.MATRIX_CAP_ENV})"
        )
    rows = _int_ladder(n)[n][s0]
    return ChannelMatrix(n, s0, DyadicMatrix(rows, n))


def channel_pair(n: int, cap: int | None = None) -> tuple[ChannelMatrix, ChannelMatrix]:
    """Both P(n, 0) and P(n, 1) from one pass of the recursion."""
    limit = config.matrix_cap() if cap is None else cap
    if n < 0:
        raise ValueError("block length must be non-negative")
    if n > limit:
        raise ValueError(
            f"block length {n} exceeds the cap {limit} (storage is 4**n entries; "
            f"override with {config.MATRIX_CAP_ENV})"
        )
    rows0, rows1 = _int_ladder(n)[n]
    return (
        ChannelMatrix(n, 0, DyadicMatrix(rows0, n)),
        ChannelMatrix(n, 1, DyadicMatrix(rows1, n)),
    )


def _invert_ladder(n: int, s0: int) -> DyadicMatrix:
    """Inverse of P(n, s0) via the one-step block formula, bottom-up.

    For state 0 the matrix is lower block triangular:
        [[A, 0], [C, D]]^-1 = [[A^-1, 0], [-D^-1 C A^-1, D^-1]]
    with A = P(k-1,0), C = P(k-1,1)/2, D = P(k-1,0)/2, which collapses to
    -D^-1 C A^-1 = -A^-1 P(k-1,1) A^-1 and D^-1 = 2 A^-1.  State 1 is the
    mirrored upper-triangular case.
    """
    ladder = _int_ladder(max(n - 1, 0))
    inv: IntRows = [[1]]
    for k in range(1, n + 1):
        half = 1 << (k - 1)
        prev0, prev1 = ladder[k - 1]
        inv_m = DyadicMatrix(inv, 0)
        if s0 == 0:
            mid = DyadicMatrix(prev1, k - 1)  # P(k-1, 1)
        else:
            mid = DyadicMatrix(prev0, k - 1)  # P(k-1, 0)
        corner = inv_m.matmul(mid).matmul(inv_m).with_exp(0).int_rows
        zeros = [0] * half
        if s0 == 0:
            new = [r + zeros for r in inv]
            new += [[-v for v in cr] + [v << 1 for v in ir] for cr, ir in zip(corner, inv)]
        else:
            new = [[v << 1 for v in ir] + [-v for v in cr] for ir, cr in zip(inv, corner)]
            new += [zeros + r for r in inv]
        inv = new
    return DyadicMatrix(inv, 0)


def invert_channel_matrix(P: ChannelMatrix) -> DyadicMatrix:
    """Exact inverse of a channel matrix; satisfies P @ inverse == I entrywise."""
    return _invert_ladder(P.n, P.s0)


def invert_two_step(n: int, s0: int, cap: int | None = None) -> DyadicMatrix:
    """Inverse of P(n, s0) for even n via the four-block recursion.

    Builds the inverse two levels at a time from the corner products
    M0 = P(2k,0)^-1 P(2k,1) P(2k,0)^-1 (state 0) or the mirrored M1.  This is
    an independent route kept as a cross-check against the one-step formula.
    """
    if n < 0 or n % 2:
        raise ValueError("two-step inversion needs an even non-negative block length")
    if s0 not in (0, 1):
        raise ValueError("initial state must be 0 or 1")
    limit = config.matrix_cap() if cap is None else cap
    if n > limit:
        raise ValueError(
            f"block length {n} exceeds the cap {limit} "
            f"(override with {config.MATRIX_CAP_ENV})"
        )
    ladder = _int_ladder(max(n - 2, 0))
    inv = DyadicMatrix([[1]], 0)
    for k in range(2, n + 1, 2):
        quarter = 1 << (k - 2)
        prev0, prev1 = ladder[k - 2]
        P0 = DyadicMatrix(prev0, k - 2)
        P1 = DyadicMatrix(prev1, k - 2)
        zeros = [0] * quarter
        if s0 == 0:
            M0 = inv.matmul(P1).matmul(inv).with_exp(0)
            F = M0.matmul(P1).matmul(inv).with_exp(0)  # then doubled below
            iv, m = inv.int_rows, M0.int_rows
            f = F.int_rows
            new: IntRows = []
            for r in range(quarter):
                new.append(iv[r] + zeros + zeros + zeros)
            for r in range(quarter):
                new.append([-v for v in m[r]] + [v << 1 for v in iv[r]] + zeros + zeros)
            for r in range(quarter):
                new.append(zeros + [-v for v in iv[r]] + [v << 1 for v in iv[r]] + zeros)
            for r in range(quarter):
                new.append(
                    [v << 1 for v in f[r]]
                    + [-3 * v for v in m[r]]
                    + [-(v << 1) for v in m[r]]
                    + [v << 2 for v in iv[r]]
                )
        else:
            M1 = inv.matmul(P0).matmul(inv).with_exp(0)
            G = M1.matmul(P0).matmul(inv).with_exp(0)
            iv, m = inv.int_rows, M1.int_rows
            g = G.int_rows
            new = []
            for r in range(quarter):
                new.append(
                    [v << 2 for v in iv[r]]
                    + [-(v << 1) for v in m[r]]
                    + [-3 * v for v in m[r]]
                    + [v << 1 for v in g[r]]
                )
            for r in range(quarter):
                new.append(zeros + [v << 1 for v in iv[r]] + [-v for v in iv[r]] + zeros)
            for r in range(quarter):
                new.append(zeros + zeros + [v << 1 for v in iv[r]] + [-v for v in m[r]])
            for r in range(quarter):
                new.append(zeros + zeros + zeros + iv[r])
        inv = DyadicMatrix(new, 0)
    return inv


def exchange_conjugate(
    M: Union[ChannelMatrix, DyadicMatrix]
) -> Union[ChannelMatrix, DyadicMatrix]:
    """Conjugate by the exchange (anti-diagonal) matrix: entry (i, j) -> (dim-1-i, dim-1-j).

    Involutive.  Applied to a channel matrix it yields the matrix for the
    opposite initial state, so the result keeps channel metadata.
    """
    if isinstance(M, ChannelMatrix):
        return ChannelMatrix(M.n, 1 - M.s0, M.data.reversed_conjugate())
    return M.reversed_conjugate()


def disjoint_support_check(
    P: ChannelMatrix, row_a: Union[int, str], row_b: Union[int, str]
) -> bool:
    """True iff no output column is reachable from both input rows.

    Rows may be given as 1-based indices (the documentation convention) or as
    input bit strings.
    """

    def resolve(r: Union[int, str]) -> int:
        if isinstance(r, str):
            return P.row_index(r)
        if not 1 <= r <= P.dim:
            raise ValueError(f"row index {r} out of range 1..{P.dim}")
        return r - 1

    ra = P.data.int_rows[resolve(row_a)]
    rb = P.data.int_rows[resolve(row_b)]
    return all(not (a and b) for a, b in zip(ra, rb))


__all__ = [
    "ChannelMatrix",
    "build_channel_matrix",
    "channel_pair",
    "invert_channel_matrix",
    "invert_two_step",
    "exchange_conjugate",
    "disjoint_support_check",
    "reverse_vector",
]
