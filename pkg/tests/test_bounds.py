import math
from fractions import Fraction

import pytest

from oracles import channel_fractions, entropy_fractions, gauss_jordan_inverse
from trapdoor.bounds import (
    EntropyVector,
    OmegaVector,
    closed_form,
    closed_form_S,
    constraint_check,
    d_vector,
    entropy_state1,
    entropy_vector_direct,
    entropy_vector_recursive_even,
    entropy_vector_recursive_step,
    exp2_sum,
    golden_ratio_reference,
    omega_direct,
    omega_recursive,
    omega_state1,
    upper_bound,
)
from trapdoor.channel import reverse_vector
from trapdoor.dyadic import Dyadic

Z = Dyadic(0)
ONE = Dyadic(1)
TH = Dyadic(3, 1)


# -- entropy vectors ----------------------------------------------------------


def test_entropy_direct_examples(pairs):
    assert entropy_vector_direct(pairs(0)[0]).entries == [Z]
    assert entropy_vector_direct(pairs(1)[0]).entries == [Z, ONE]
    assert entropy_vector_direct(pairs(2)[0]).entries == [Z, ONE, TH, TH]


@pytest.mark.parametrize("n", range(0, 9))
@pytest.mark.parametrize("s0", (0, 1))
def test_entropy_direct_matches_fraction_oracle(n, s0, pairs):
    oracle = entropy_fractions(channel_fractions(n)[s0])
    got = entropy_vector_direct(pairs(n)[s0]).entries
    assert [d.as_fraction() for d in got] == oracle


def test_entropy_recursive_even_examples():
    assert entropy_vector_recursive_even(0).entries == [Z]
    assert entropy_vector_recursive_even(2).entries == [Z, ONE, TH, TH]
    assert entropy_vector_recursive_even(4).entries[:4] == [Z, ONE, TH, TH]
    with pytest.raises(ValueError):
        entropy_vector_recursive_even(3)


def test_entropy_recursive_step_examples():
    assert entropy_vector_recursive_step(1).entries == [Z, ONE]
    assert entropy_vector_recursive_step(3).entries[:4] == [Z, ONE, TH, TH]
    assert (
        entropy_vector_recursive_step(2).entries
        == entropy_vector_recursive_even(2).entries
    )


@pytest.mark.parametrize("n", range(0, 11))
def test_entropy_recursions_match_direct(n, pairs):
    direct = entropy_vector_direct(pairs(n)[0]).entries
    assert entropy_vector_recursive_step(n).entries == direct
    if n % 2 == 0:
        assert entropy_vector_recursive_even(n).entries == direct


@pytest.mark.parametrize("n", range(0, 11))
def test_entropy_state1_is_reversal(n, pairs):
    assert entropy_state1(n).entries == entropy_vector_direct(pairs(n)[1]).entries
    assert entropy_state1(n).entries == reverse_vector(
        entropy_vector_direct(pairs(n)[0]).entries
    )


def test_entropy_vector_validation():
    with pytest.raises(ValueError):
        EntropyVector(1, 0, [ONE, ONE])  # all-zeros input must carry 0
    with pytest.raises(ValueError):
        EntropyVector(1, 0, [Z, Dyadic(3, 0)])  # above n


# -- weight vectors -----------------------------------------------------------


def test_omega_recursive_examples():
    assert omega_recursive(0).entries == [0]
    assert omega_recursive(1).entries == [0, -2]
    assert omega_recursive(2).entries == [0, -2, -2, 0]
    assert omega_recursive(3).entries == [0, -2, -2, 0, -2, -4, -4, -2]
    assert omega_recursive(4).entries == [
        0, -2, -2, 0, -2, -4, -4, -2, -2, -4, -4, -2, 0, -2, -2, 0,
    ]


def test_omega_state1_examples():
    assert omega_state1(1).entries == [-2, 0]
    assert omega_state1(2).entries == [0, -2, -2, 0]
    assert omega_state1(3).entries == reverse_vector(omega_recursive(3).entries)


@pytest.mark.parametrize("n", range(0, 11))
@pytest.mark.parametrize("s0", (0, 1))
def test_omega_direct_matches_recursive(n, s0, pairs, inverses):
    P = pairs(n)[s0]
    h = entropy_vector_direct(P)
    direct = omega_direct(P, h, inverse=inverses(n, s0))
    rec = omega_recursive(n) if s0 == 0 else omega_state1(n)
    assert direct.entries == rec.entries


def test_omega_direct_with_fraction_oracle():
    P, _ = channel_fractions(3)
    inv = gauss_jordan_inverse(P)
    h = entropy_fractions(P)
    oracle = [-sum(inv[i][j] * h[j] for j in range(8)) for i in range(8)]
    assert [Fraction(w) for w in omega_recursive(3).entries] == oracle


def test_omega_vector_validation():
    with pytest.raises(ValueError):
        OmegaVector(1, 0, [0, -1])  # odd entry
    with pytest.raises(ValueError):
        OmegaVector(1, 0, [-2, 0])  # zero must sit at the all-zeros input
    with pytest.raises(ValueError):
        OmegaVector(2, 0, [0, -2, 0, -2])  # even length must be palindromic
    OmegaVector(1, 1, [-2, 0])


def test_omega_mismatch_rejected(pairs):
    P = pairs(2)[0]
    h1 = entropy_vector_direct(pairs(2)[1])
    with pytest.raises(ValueError):
        omega_direct(P, h1)


# -- bound values -------------------------------------------------------------


def test_exp2_sum_small():
    assert exp2_sum([0, -2]) == Dyadic(5, 2)
    assert exp2_sum([0, -2, -2, 0]) == Dyadic(5, 1)
    assert exp2_sum([0]) == ONE


@pytest.mark.parametrize(
    "n,S,c6",
    [
        (1, Dyadic(5, 2), 0.321928),
        (2, Dyadic(5, 1), 0.660964),
        (3, Dyadic(25, 3), 0.547952),
        (4, Dyadic(25, 2), 0.660964),
    ],
)
def test_upper_bound_examples(n, S, c6):
    b = upper_bound(n)
    assert b.S == S
    assert round(b.c_up, 6) == c6
    assert round(closed_form(n), 6) == c6


@pytest.mark.parametrize("m", range(1, 11))
def test_exact_sum_identities(m):
    assert exp2_sum(omega_recursive(2 * m).entries) == Dyadic(5**m, m)
    assert exp2_sum(omega_recursive(2 * m - 1).entries) == Dyadic(5**m, m + 1)


def test_closed_form_matches_upper_bound_to_cap():
    for n in range(1, 21):
        assert math.isclose(
            upper_bound(n, include_d=False).c_up, closed_form(n), abs_tol=1e-12
        )


def test_closed_form_large_n():
    # the analytic form keeps working far beyond the recursion cap
    assert abs(closed_form(99) - (math.log2(1.25) + 49 * math.log2(2.5)) / 99) < 1e-12
    assert closed_form(10**6) == closed_form(2)
    assert closed_form(10**6 + 1) < closed_form(2)


def test_odd_bounds_increase_to_even_value():
    prev = 0.0
    for m in range(1, 40):
        c = closed_form(2 * m - 1)
        assert prev < c < closed_form(2)
        prev = c


def test_upper_bound_cap(monkeypatch):
    with pytest.raises(ValueError, match="cap"):
        upper_bound(21)
    monkeypatch.setenv("TRAPDOOR_BOUND_CAP", "5")
    with pytest.raises(ValueError, match="cap"):
        upper_bound(6)


def test_upper_bound_beyond_matrix_cap_has_no_d(monkeypatch):
    monkeypatch.setenv("TRAPDOOR_MATRIX_CAP", "3")
    b = upper_bound(4)
    assert b.d is None and b.has_negative_d is None
    assert b.negative_d_indices() == []


def test_upper_bound_state1_matches_state0():
    b0, b1 = upper_bound(3, 0), upper_bound(3, 1)
    assert b0.S == b1.S
    assert b0.c_up == b1.c_up
    assert b1.d == reverse_vector(b0.d)


# -- pre-normalized optimizer -------------------------------------------------


def test_d_vector_n1():
    d = d_vector(1, 0)
    assert d == [Dyadic(3, 2), Dyadic(1, 1)]
    S = closed_form_S(1).as_fraction()
    assert [v.as_fraction() / S for v in d] == [Fraction(3, 5), Fraction(2, 5)]


def test_d_vector_n2():
    d = d_vector(2, 0)
    assert d[2] == Dyadic(-3, 1)
    total = Z
    for v in d:
        total = total + v
    assert total == closed_form_S(2)


def test_d_vector_second_last_closed_forms(inverses):
    # even lengths follow -3*2^(n-3); odd lengths >= 3 follow -3*2^(n-5)
    for n in range(2, 11):
        d = d_vector(n, 0, inverse=inverses(n, 0))
        expected = Dyadic(-3, 0).shift(n - 3 if n % 2 == 0 else n - 5)
        assert d[-2] == expected
        assert d[-2] < 0


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("s0", (0, 1))
def test_d_sums_to_S(n, s0, inverses):
    d = d_vector(n, s0, inverse=inverses(n, s0))
    total = Z
    for v in d:
        total = total + v
    assert total == closed_form_S(n)


def test_d_vector_fraction_oracle():
    P, _ = channel_fractions(4)
    inv = gauss_jordan_inverse(P)
    w = omega_recursive(4).entries
    x = [Fraction(1, 2 ** (-v)) for v in w]
    oracle = [sum(inv[j][i] * x[j] for j in range(16)) for i in range(16)]
    assert [v.as_fraction() for v in d_vector(4, 0)] == oracle


# -- feasibility of distributions ---------------------------------------------


def test_constraint_check_examples(pairs):
    assert constraint_check(2, 0, [Fraction(11, 10), Fraction(-11, 10), Fraction(-3, 5), Fraction(8, 5)])
    assert constraint_check(2, 0, [0.25, 0.25, 0.25, 0.25])
    assert not constraint_check(2, 0, [2, -1, 0, 0])
    with pytest.raises(ValueError):
        constraint_check(2, 0, [1, 0, 0])


def test_relaxed_optimum_feasible_for_small_n(inverses):
    # d/S satisfies the output-mass constraints even when it leaves the simplex
    for n in (1, 2, 3, 4):
        d = d_vector(n, 0, inverse=inverses(n, 0))
        S = closed_form_S(n).as_fraction()
        p = [v.as_fraction() / S for v in d]
        assert sum(p) == 1
        assert constraint_check(n, 0, p)


def test_golden_ratio_reference():
    g = golden_ratio_reference()
    assert round(g, 6) == 0.694242
    assert closed_form(2) < g
    assert g > 0.5


@pytest.mark.parametrize("n", range(0, 9, 2))
def test_state_coupling_identity_even_lengths(n, pairs, inverses):
    # P(2n,1) P(2n,0)^-1 h(2n,0) equals the reversal of h(2n,0)
    P1 = pairs(n)[1]
    h0 = entropy_vector_direct(pairs(n)[0]).entries
    assert P1.data.matvec(inverses(n, 0).matvec(h0)) == reverse_vector(h0)
