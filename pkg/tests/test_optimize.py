import math
from fractions import Fraction

import numpy as np
import pytest

from oracles import mutual_information_reference
from trapdoor.bounds import closed_form, constraint_check
from trapdoor.dyadic import Dyadic
from trapdoor.optimize import (
    ConvergenceError,
    blahut_arimoto,
    mutual_information,
    mutual_information_exact,
    verify_bound,
)


def test_point_mass_gives_zero(pairs):
    assert mutual_information(pairs(1)[0], [1.0, 0.0]) == 0.0
    assert mutual_information(pairs(2)[0], [0.0, 0.0, 1.0, 0.0]) == 0.0


def test_relaxed_optimum_value_at_n1(pairs):
    got = mutual_information(pairs(1)[0], [0.6, 0.4])
    assert abs(got - math.log2(1.25)) < 1e-12


def test_zero_error_input_exact_half(pairs):
    P = pairs(2)[0]
    assert mutual_information(P, [0.5, 0.0, 0.0, 0.5]) == 0.5
    exact = mutual_information_exact(
        P, [Dyadic(1, 1), Dyadic(0), Dyadic(0), Dyadic(1, 1)]
    )
    assert exact == Fraction(1, 2)


def test_exact_mi_rejects_non_power_ratios(pairs):
    with pytest.raises(ValueError, match="power of two"):
        mutual_information_exact(
            pairs(1)[0], [Fraction(3, 5), Fraction(2, 5)]
        )


def test_mi_matches_reference(pairs):
    P = pairs(3)[0]
    rng = np.random.default_rng(7)
    for _ in range(10):
        p = rng.dirichlet(np.ones(8))
        ref = mutual_information_reference(P.float_rows(), list(p), 3)
        assert abs(mutual_information(P, p) - ref) < 1e-12


def test_mi_validates_distribution(pairs):
    with pytest.raises(ValueError):
        mutual_information(pairs(1)[0], [0.7, 0.7])
    with pytest.raises(ValueError):
        mutual_information(pairs(1)[0], [1.5, -0.5])
    with pytest.raises(ValueError):
        mutual_information(pairs(1)[0], [1.0])


def test_mi_nonnegative_on_random_simplex(pairs):
    P = pairs(2)[0]
    rng = np.random.default_rng(11)
    for _ in range(20):
        p = rng.dirichlet(np.ones(4))
        assert mutual_information(P, p) >= -1e-15


def test_ba_n1_matches_exact_optimum(pairs):
    r = blahut_arimoto(pairs(1)[0], tol=1e-10, max_iter=10_000)
    assert r.converged
    assert abs(r.capacity_per_letter - math.log2(1.25)) < 1e-9
    assert np.allclose(r.distribution, [0.6, 0.4], atol=1e-5)


def test_ba_n2_stays_below_even_bound(pairs):
    r = blahut_arimoto(pairs(2)[0], tol=1e-10, max_iter=10_000)
    assert r.converged
    assert r.capacity_per_letter < closed_form(2) - 0.1


def test_ba_init_independence(pairs):
    P = pairs(2)[0]
    base = blahut_arimoto(P, tol=1e-10, max_iter=10_000)
    for init in ([0.4, 0.1, 0.2, 0.3], [0.25, 0.25, 0.25, 0.25], [0.7, 0.1, 0.1, 0.1]):
        r = blahut_arimoto(P, tol=1e-10, max_iter=10_000, init=init)
        assert abs(r.capacity_per_letter - base.capacity_per_letter) < 1e-8


def test_ba_lower_bound_monotone(pairs):
    r = blahut_arimoto(pairs(3)[0], tol=1e-10, max_iter=10_000, track_history=True)
    lows = [lo for lo, _ in r.history]
    for a, b in zip(lows, lows[1:]):
        assert b >= a - 1e-12


def test_ba_bracket_validity(pairs):
    # lower <= capacity <= upper at every iteration (capacity from a long run)
    P = pairs(2)[0]
    best = blahut_arimoto(P, tol=1e-13, max_iter=100_000).capacity_per_letter
    r = blahut_arimoto(P, tol=1e-10, max_iter=10_000, track_history=True)
    for lo, up in r.history:
        assert lo - 1e-12 <= best <= up + 1e-12


def test_ba_iterates_stay_feasible(pairs):
    P = pairs(2)[0]
    r = blahut_arimoto(P, tol=1e-10, max_iter=10_000)
    assert constraint_check(2, 0, [float(x) for x in r.distribution])


def test_ba_non_convergence_reported(pairs):
    r = blahut_arimoto(pairs(4)[0], tol=1e-14, max_iter=3)
    assert not r.converged
    assert r.iterations == 3
    assert r.final_gap > 1e-14


def test_ba_rejects_bad_tol(pairs):
    with pytest.raises(ValueError):
        blahut_arimoto(pairs(1)[0], tol=0.0)


def test_ba_zero_inputs_stay_zero(pairs):
    P = pairs(2)[0]
    r = blahut_arimoto(P, tol=1e-9, max_iter=10_000, init=[0.5, 0.0, 0.0, 0.5])
    assert r.distribution[1] == 0.0 and r.distribution[2] == 0.0
    # restricted to the disjoint pair the capacity is the zero-error rate
    assert r.converged and abs(r.capacity_per_letter - 0.5) < 1e-9


def test_ba_degenerate_support(pairs):
    r = blahut_arimoto(pairs(1)[0], tol=1e-9, max_iter=50, init=[1.0, 0.0])
    assert r.converged and r.capacity_per_letter == 0.0
    assert list(r.distribution) == [1.0, 0.0]
    with pytest.raises(ValueError):
        blahut_arimoto(pairs(1)[0], tol=1e-9, init=[0.0, 0.0])


def test_verify_bound_small():
    for n in (1, 2, 4):
        ok, report = verify_bound(n, 0, tol=1e-8)
        assert ok and report.converged
    ok, report = verify_bound(1, 0, tol=1e-8)
    assert abs(report.capacity_per_letter - closed_form(1)) < 1e-6


def test_capacity_below_bound_up_to_eight():
    caps = {}
    for n in (1, 2, 4, 6, 8):
        ok, report = verify_bound(n, 0, tol=1e-8, max_iter=500_000)
        assert ok
        caps[n] = report.capacity_per_letter
    # larger blocks recover some of the memory: capacities increase past n=2
    assert caps[2] < caps[4] < caps[6] < caps[8] < closed_form(8)


def test_verify_bound_propagates_non_convergence():
    with pytest.raises(ConvergenceError):
        verify_bound(4, 0, tol=1e-13, max_iter=5)
