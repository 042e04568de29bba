"""Simplex-constrained mutual-information maximization (Blahut-Arimoto).

The relaxed upper bound from the bounds module is attained outside the
probability simplex for block lengths >= 2, so the true n-letter maximum
over actual distributions is strictly smaller there.  This module certifies
that numerically: Blahut-Arimoto produces, at every iteration, a certified
bracket [sum_i p_i D_i, max_i D_i] around the capacity (D_i is the KL
divergence in bits between channel row i and the current output
distribution), so "BA result <= bound" checks are rigorous up to float
error.  Everything here is double precision on purpose; exactness lives in
the other modules.

The comparisons are per block: repeated use of the channel over many blocks
couples consecutive blocks through the final state, which is out of scope
here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bounds import closed_form
from .channel import ChannelMatrix, build_channel_matrix
from .dyadic import Dyadic


class ConvergenceError(RuntimeError):
    """Blahut-Arimoto did not reach the requested bracket width."""


@dataclass(frozen=True, eq=False)
class OptimizationReport:
    """Result of one Blahut-Arimoto run; capacities are bits per letter."""

    n: int
    s0: int
    capacity_per_letter: float
    iterations: int
    final_gap: float
    distribution: np.ndarray = field(repr=False)
    tol: float = field(default=1e-10)
    history: list[tuple[float, float]] | None = field(default=None, repr=False)

    @property
    def converged(self) -> bool:
        return self.final_gap <= self.tol


def _as_prob_vector(p: Sequence[float], dim: int) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.shape != (dim,):
        raise ValueError(f"distribution must have length {dim}")
    if arr.min() < -1e-12:
        raise ValueError("distribution has a negative entry")
    if abs(arr.sum() - 1.0) > 1e-9:
        raise ValueError(f"distribution sums to {arr.sum()}, expected 1")
    return np.clip(arr, 0.0, None)


def mutual_information(P: ChannelMatrix, p: Sequence[float]) -> float:
    """(1/n) I(X^n; Y^n) in bits per letter for input distribution p.

    Zero-probability inputs and zero channel entries contribute nothing.
    """
    if P.n < 1:
        raise ValueError("mutual information per letter needs n >= 1")
    W = np.array(P.float_rows())
    arr = _as_prob_vector(p, P.dim)
    q = arr @ W
    total = 0.0
    for i in range(P.dim):
        if arr[i] <= 0.0:
            continue
        row = W[i]
        nz = row > 0.0
        total += arr[i] * float(np.dot(row[nz], np.log2(row[nz] / q[nz])))
    return total / P.n


def mutual_information_exact(P: ChannelMatrix, p: Sequence) -> Fraction:
    """Exact per-letter mutual information for rational p.

    Only defined when every likelihood ratio P_ij / q_j is a power of two
    (then each log2 is an integer and the sum is rational); raises ValueError
    otherwise.  The disjoint-support zero-error input [1/2, 0, 0, 1/2] on the
    n=2 channel is the motivating case, where the result is exactly 1/2.
    """
    if P.n < 1:
        raise ValueError("mutual information per letter needs n >= 1")
    if len(p) != P.dim:
        raise ValueError(f"distribution must have length {P.dim}")
    pf = [v.as_fraction() if isinstance(v, Dyadic) else Fraction(v) for v in p]
    if sum(pf) != 1:
        raise ValueError("distribution must sum to exactly 1")
    if any(v < 0 for v in pf):
        raise ValueError("distribution has a negative entry")
    scale = 1 << P.data.exp
    rows = P.data.int_rows
    q = [
        sum(pf[i] * rows[i][j] for i in range(P.dim)) / scale for j in range(P.dim)
    ]
    total = Fraction(0)
    for i in range(P.dim):
        if pf[i] == 0:
            continue
        for j in range(P.dim):
            v = rows[i][j]
            if not v:
                continue
            ratio = Fraction(v, scale) / q[j]
            num, den = ratio.numerator, ratio.denominator
            if num & (num - 1) or den & (den - 1):
                raise ValueError(
                    f"likelihood ratio {ratio} is not a power of two; "
                    "use mutual_information for float evaluation"
                )
            log2_ratio = num.bit_length() - den.bit_length()
            total += pf[i] * Fraction(v, scale) * log2_ratio
    return total / P.n


def blahut_arimoto(
    P: ChannelMatrix,
    tol: float = 1e-10,
    max_iter: int = 100_000,
    init: Sequence[float] | None = None,
    track_history: bool = False,
) -> OptimizationReport:
    """Maximize per-letter mutual information over the simplex.

    tol is the per-letter width of the capacity bracket.  Non-convergence is
    not an exception: the report carries the achieved bracket and
    report.converged is False.  Inputs that start at exactly zero stay at
    zero; the bracket then certifies the capacity of the restricted input
    alphabet (interior uniform init, the default, covers the full alphabet).
    """
    if P.n < 1:
        raise ValueError("optimization per letter needs n >= 1")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if max_iter < 1:
        raise ValueError("need at least one iteration")
    W = np.array(P.float_rows())
    dim = P.dim
    p = np.full(dim, 1.0 / dim) if init is None else _as_prob_vector(init, dim)
    mask = W > 0.0
    wlogw = np.where(mask, W * np.log2(np.where(mask, W, 1.0)), 0.0).sum(axis=1)
    history: list[tuple[float, float]] | None = [] if track_history else None
    lower = upper = float("nan")
    it = 0
    gap = float("inf")
    for it in range(1, max_iter + 1):
        support = p > 0.0
        q = p @ W
        live = q > 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            logq = np.where(live, np.log2(np.where(live, q, 1.0)), -np.inf)
            contrib = np.where(mask, W * logq[None, :], 0.0)
        # rows on the support never see a dead output column, so D is finite there
        D = wlogw - contrib.sum(axis=1)
        Ds = D[support]
        lower = float(p[support] @ Ds)
        upper = float(Ds.max())
        if history is not None:
            history.append((lower / P.n, upper / P.n))
        gap = (upper - lower) / P.n
        if gap <= tol:
            break
        factor = np.zeros(dim)
        factor[support] = np.exp2(Ds - upper)
        p = p * factor
        p = p / p.sum()
    return OptimizationReport(
        n=P.n,
        s0=P.s0,
        capacity_per_letter=lower / P.n,
        iterations=it,
        final_gap=gap,
        distribution=p,
        tol=tol,
        history=history,
    )


def verify_bound(
    n: int, s0: int = 0, tol: float = 1e-8, max_iter: int = 200_000
) -> tuple[bool, OptimizationReport]:
    """Check that the simplex capacity at block length n stays below the bound.

    Returns (ok, report) where ok means BA capacity <= closed_form(n) + tol.
    Raises ConvergenceError if the bracket does not reach tol.
    """
    P = build_channel_matrix(n, s0)
    report = blahut_arimoto(P, tol=tol, max_iter=max_iter)
    if not report.converged:
        raise ConvergenceError(
            f"bracket {report.final_gap:.3e} > tol {tol:.3e} "
            f"after {report.iterations} iterations (n={n}, s0={s0})"
        )
    ok = report.capacity_per_letter <= closed_form(n) + tol
    return ok, report
