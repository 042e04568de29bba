"""Conditional entropy vectors, weight vectors, and the capacity upper bound.

For a channel matrix P(n, s0) define

    h = -(P o log2 P) 1        (entry i: H(Y^n | X^n = i-th input), in bits)
    w = -P^-1 h                (integer-valued weight vector)
    S = sum_i 2**w_i           (exact dyadic)
    c_up = log2(S) / n         (bits per use)

c_up is the absolute maximum of the per-letter mutual information over the
relaxed feasible set (sum-to-one distributions with non-negative output
masses), hence an upper bound on the n-letter capacity.  Both h and w obey
cheap block recursions that avoid building any matrix, which this module
implements alongside the direct definitions; the two routes are checked
against each other in the test suite.  All quantities except the final
base-2 logarithms are exact.

The even-length bound is log2(5/2)/2 = 0.660964... for every even n; the
odd-length bounds increase strictly toward that value.  The pre-normalized
optimizer d = (P^-1)^T 2**w sums to S exactly; a negative entry of d
certifies that the relaxed optimum lies outside the probability simplex.
For every n >= 2 the entry d[2**n - 1] (1-based) is negative: it equals
-3 * 2**(n-3) at even lengths and -3 * 2**(n-5) at odd lengths (the weight
vector ends in (-2, 0) or (-4, -2) respectively).  For n = 1 the vector
d = [3/4, 1/2] is non-negative and the bound is attained on the simplex at
[3/5, 2/5].
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import config
from .channel import ChannelMatrix, build_channel_matrix, invert_channel_matrix
from .dyadic import Dyadic
from .matrices import DyadicMatrix, reverse_vector


@dataclass(frozen=True)
class EntropyVector:
    """Per-input conditional output entropies of P(n, s0), exact in bits."""

    n: int
    s0: int
    entries: list[Dyadic]

    def __post_init__(self) -> None:
        if len(self.entries) != 1 << self.n:
            raise ValueError("length must be 2**n")
        anchor = 0 if self.s0 == 0 else len(self.entries) - 1
        if self.entries[anchor] != 0:
            raise ValueError("the all-s0 input must have zero conditional entropy")
        if any(e < 0 or e > self.n for e in self.entries):
            raise ValueError("entries must lie in [0, n]")


@dataclass(frozen=True)
class OmegaVector:
    """Weight vector -P^-1 h; entries are even non-positive integers."""

    n: int
    s0: int
    entries: list[int]

    def __post_init__(self) -> None:
        if len(self.entries) != 1 << self.n:
            raise ValueError("length must be 2**n")
        if any(e > 0 or e % 2 for e in self.entries):
            raise ValueError("entries must be even and non-positive")
        anchor = 0 if self.s0 == 0 else len(self.entries) - 1
        if self.entries[anchor] != 0:
            raise ValueError("the all-s0 input must carry weight 0")
        if self.n % 2 == 0 and self.entries != self.entries[::-1]:
            raise ValueError("even-length weight vectors must be palindromic")


@dataclass(frozen=True)
class BoundResult:
    """Exact bound data for one block length.

    d holds the pre-normalized optimizer of the relaxed problem (the optimum
    itself is d / S); it is only available while the inverse matrix fits the
    resource cap, and is None beyond it.
    """

    n: int
    s0: int
    S: Dyadic
    c_up: float
    d: list[Dyadic] | None = field(default=None)
    has_negative_d: bool | None = field(default=None)

    def negative_d_indices(self) -> list[int]:
        """1-based indices i with d_i < 0 (empty when d is unavailable)."""
        if self.d is None:
            return []
        return [i + 1 for i, v in enumerate(self.d) if v < 0]


# -- conditional entropy vectors ---------------------------------------------


def entropy_vector_direct(P: ChannelMatrix) -> EntropyVector:
    """h from the definition: row-wise -sum p*log2(p) with 0*log(0) = 0.

    Every non-zero entry of a channel matrix is 2**-m and contributes
    m * 2**-m, so the sum is exact.
    """
    e = P.data.exp
    out = []
    for row in P.data.int_rows:
        acc = 0
        for v in row:
            if v:
                if v & (v - 1):
                    raise ValueError("channel entry is not a power of two")
                acc += (e - v.bit_length() + 1) * v
        out.append(Dyadic(acc, e))
    return EntropyVector(P.n, P.s0, out)


def _h_step(h: list[Dyadic]) -> list[Dyadic]:
    rev = h[::-1]
    half = Dyadic(1, 1)
    return list(h) + [half * a + half * b + 1 for a, b in zip(h, rev)]


def entropy_vector_recursive_step(n: int) -> EntropyVector:
    """h(n, 0) by the one-step block recursion h -> [h, h/2 + rev(h)/2 + 1]."""
    if n < 0:
        raise ValueError("block length must be non-negative")
    h: list[Dyadic] = [Dyadic(0)]
    for _ in range(n):
        h = _h_step(h)
    return EntropyVector(n, 0, h)


def entropy_vector_recursive_even(n: int) -> EntropyVector:
    """h(n, 0) for even n by the four-block recursion.

    One double step maps h to
        [h, h/2 + r/2 + 1, 3h/4 + r/4 + 3/2, h/4 + 3r/4 + 3/2]
    with r the reversal of h.  The 3/2 constants are pinned by the direct
    definition at n = 2 (fourth entry 3/2).
    """
    if n < 0 or n % 2:
        raise ValueError("the four-block recursion covers even lengths only")
    h: list[Dyadic] = [Dyadic(0)]
    half = Dyadic(1, 1)
    quarter = Dyadic(1, 2)
    three_q = Dyadic(3, 2)
    three_half = Dyadic(3, 1)
    for _ in range(n // 2):
        rev = h[::-1]
        h = (
            list(h)
            + [half * a + half * b + 1 for a, b in zip(h, rev)]
            + [three_q * a + quarter * b + three_half for a, b in zip(h, rev)]
            + [quarter * a + three_q * b + three_half for a, b in zip(h, rev)]
        )
    return EntropyVector(n, 0, h)


def entropy_state1(n: int) -> EntropyVector:
    """h(n, 1), the reversal of h(n, 0)."""
    return EntropyVector(n, 1, reverse_vector(entropy_vector_recursive_step(n).entries))


# -- weight vectors -----------------------------------------------------------


def omega_direct(
    P: ChannelMatrix,
    h: EntropyVector,
    inverse: DyadicMatrix | None = None,
) -> OmegaVector:
    """w = -P^-1 h evaluated exactly; asserts integrality of every entry.

    A precomputed inverse may be passed to avoid repeating the inversion.
    """
    if (P.n, P.s0) != (h.n, h.s0):
        raise ValueError("channel matrix and entropy vector disagree on (n, s0)")
    inv = invert_channel_matrix(P) if inverse is None else inverse
    vals = inv.matvec(h.entries)
    out = []
    for d in vals:
        if d.exp != 0:
            raise AssertionError(f"weight entry {d} is not an integer")
        out.append(-d.num)
    return OmegaVector(P.n, P.s0, out)


def omega_recursive(n: int) -> OmegaVector:
    """w(n, 0) by the block recursions, no matrices involved.

    Even lengths double as [w, w - 2, w - 2, w] from w(0) = [0]; odd lengths
    double as [w, rev(w), w - 2, rev(w) - 2] from w(1) = [0, -2].
    """
    if n < 0:
        raise ValueError("block length must be non-negative")
    if n % 2 == 0:
        w = [0]
        for _ in range(n // 2):
            shifted = [x - 2 for x in w]
            w = w + shifted + shifted + w
    else:
        w = [0, -2]
        for _ in range((n - 1) // 2):
            rev = w[::-1]
            w = w + rev + [x - 2 for x in w] + [x - 2 for x in rev]
    return OmegaVector(n, 0, w)


def omega_state1(n: int) -> OmegaVector:
    """w(n, 1) = reversal of w(n, 0)."""
    return OmegaVector(n, 1, reverse_vector(omega_recursive(n).entries))


# -- bound evaluation ---------------------------------------------------------


def exp2_sum(w: Sequence[int]) -> Dyadic:
    """Exact sum of 2**w_i for integer weights (grouped for speed)."""
    counts = Counter(w)
    emax = -min(counts)
    acc = 0
    for value, count in counts.items():
        acc += count << (emax + value)
    return Dyadic(acc, emax)


def _log2_dyadic(S: Dyadic) -> float:
    if S.num <= 0:
        raise ValueError("log2 of a non-positive value")
    return math.log2(S.num) - S.exp


# d needs the exact inverse matrix; beyond this length it is skipped unless
# explicitly requested (inversion cost grows roughly 8x per extra bit)
D_AUTO_LIMIT = 10


def upper_bound(
    n: int, s0: int = 0, cap: int | None = None, include_d: bool | None = None
) -> BoundResult:
    """Bound for block length n: exact S = sum 2**w_i and c_up = log2(S)/n.

    The weight vector comes from the block recursions, so this works up to
    the bound cap.  The pre-normalized optimizer d is attached automatically
    for n <= D_AUTO_LIMIT; pass include_d=True to force it (matrix cap
    permitting) or False to skip it.
    """
    if n < 1:
        raise ValueError("block length must be at least 1")
    limit = config.bound_cap() if cap is None else cap
    if n > limit:
        raise ValueError(
            f"block length {n} exceeds the cap {limit} (the weight vector has 2**n "
            f"entries; override with {config.BOUND_CAP_ENV}); use closed_form(n) instead"
        )
    w = omega_recursive(n) if s0 == 0 else omega_state1(n)
    S = exp2_sum(w.entries)
    c_up = _log2_dyadic(S) / n
    if include_d is None:
        include_d = n <= min(D_AUTO_LIMIT, config.matrix_cap())
    d = None
    neg = None
    if include_d:
        d = d_vector(n, s0)
        neg = any(v < 0 for v in d)
    return BoundResult(n=n, s0=s0, S=S, c_up=c_up, d=d, has_negative_d=neg)


def closed_form_S(n: int) -> Dyadic:
    """Exact S for any block length: (5/2)**(n/2) for even n, (5/4)(5/2)**((n-1)/2) odd."""
    if n < 1:
        raise ValueError("block length must be at least 1")
    if n % 2 == 0:
        m = n // 2
        return Dyadic(5**m, m)
    m = (n + 1) // 2
    return Dyadic(5**m, m + 1)


def closed_form(n: int) -> float:
    """The bound as a float for any n: log2(5/2)/2 at even lengths, and
    (log2(5/4) + (m-1) log2(5/2)) / (2m-1) at odd lengths."""
    if n < 1:
        raise ValueError("block length must be at least 1")
    if n % 2 == 0:
        return math.log2(2.5) / 2
    m = (n + 1) // 2
    return (math.log2(1.25) + (m - 1) * math.log2(2.5)) / n


def d_vector(n: int, s0: int = 0, inverse: DyadicMatrix | None = None) -> list[Dyadic]:
    """Pre-normalized relaxed optimizer d = (P^-1)^T 2**w, exact.

    Sums to S, so d / S sums to one.  Negative entries flag that the relaxed
    optimum is not a probability distribution.
    """
    if n < 0:
        raise ValueError("block length must be non-negative")
    if inverse is None:
        inverse = invert_channel_matrix(build_channel_matrix(n, s0))
    w = omega_recursive(n) if s0 == 0 else omega_state1(n)
    x = [Dyadic.pow2(v) for v in w.entries]
    return inverse.transpose().matvec(x)


def constraint_check(
    n: int, s0: int, p: Sequence, P: ChannelMatrix | None = None
) -> bool:
    """True iff every output mass (P^T p)_j is non-negative.

    Entries of p may be ints, Fractions, Dyadics, or floats; the test is
    exact (floats convert losslessly to rationals).
    """
    if P is None:
        P = build_channel_matrix(n, s0)
    if len(p) != P.dim:
        raise ValueError("distribution length must be 2**n")
    pf = [v.as_fraction() if isinstance(v, Dyadic) else Fraction(v) for v in p]
    scale = 1 << P.data.exp
    for j in range(P.dim):
        col = sum(pf[i] * P.data.int_rows[i][j] for i in range(P.dim))
        if col / scale < 0:
            return False
    return True


def golden_ratio_reference() -> float:
    """log2 of the golden ratio, the feedback-capacity constant, for display."""
    return math.log2((1 + math.sqrt(5)) / 2)


ZERO_ERROR_RATE = 0.5
