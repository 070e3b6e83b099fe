import math
from fractions import Fraction

import pytest

from entstats import analytics
from entstats.analytics import (
    ALPHA,
    GAMMA,
    Q_INF,
    asymptotics_table,
    c_q,
    f2_bruteforce,
    f2_by_distance,
    f2_sum,
    f2star_bruteforce,
    f2star_sum,
    h2_asymptote,
    h2_bruteforce,
    h2_by_distance,
    h2_sum,
    k_distance,
    mu_a_haar,
    mu_a_hadamard,
    mu_me_haar,
    mu_me_hadamard,
    sigma2_a_haar,
    sigma2_a_hadamard,
    sigma2_me_haar,
    sigma2_me_hadamard,
)


def test_haar_fixed_bipartition_moments():
    assert mu_a_haar(2, 1).exact == Fraction(4, 5)
    assert mu_a_haar(4, 2).exact == Fraction(8, 17)
    assert sigma2_a_haar(2, 1).exact == Fraction(3, 175)
    with pytest.raises(ValueError):
        mu_a_haar(4, 3)  # n_a must not exceed n - n_a
    with pytest.raises(ValueError):
        sigma2_a_haar(4, 0)


def test_haar_average_moments():
    assert mu_me_haar(2).exact == mu_a_haar(2, 1).exact
    assert mu_me_haar(6).exact == Fraction(16, 65)
    assert mu_me_haar(7).exact == Fraction(24, 129)
    assert mu_me_haar(7).value == pytest.approx(0.18605, abs=5e-6)
    # single distinct bipartition at n=2 degenerates to the fixed form
    assert sigma2_me_haar(2).exact == sigma2_a_haar(2, 1).exact == Fraction(3, 175)


def test_haar_fixed_variance_scaling():
    # balanced split, large n: the variance approaches 2 / 2^(2n)
    n = 20
    ratio = sigma2_a_haar(n, n // 2).value / (2.0 / 2 ** (2 * n))
    assert ratio == pytest.approx(1.0, abs=0.01)


def test_haar_variance_asymptote():
    for n, closer in ((24, False), (26, True)):
        ratio = sigma2_me_haar(n).value / (3 * math.sqrt(2) * (3 / 16) ** n)
        assert ratio == pytest.approx(1.0, abs=0.01)
        if closer:
            prev = sigma2_me_haar(24).value / (3 * math.sqrt(2) * (3 / 16) ** 24)
            assert abs(ratio - 1) < abs(prev - 1)


def test_f2_values():
    assert f2_sum(2).exact == 10
    assert f2_sum(3).exact == 14
    assert f2star_sum(2).exact == 2
    assert f2star_sum(3).exact == Fraction(10, 3)
    assert f2star_sum(4).exact == Fraction(26, 3)
    assert h2_sum(2).exact == 6
    assert h2_sum(3).exact == Fraction(22, 3)


def test_coupling_sum_identity_exact():
    for n in range(2, 31):
        assert f2star_sum(n).exact == f2_sum(n).exact - 2 * h2_sum(n).exact + 4


@pytest.mark.parametrize("n", range(2, 9))
def test_coupling_sums_match_bruteforce(n):
    assert f2_sum(n).value == pytest.approx(f2_bruteforce(n), abs=1e-9)
    assert f2star_sum(n).value == pytest.approx(f2star_bruteforce(n), abs=1e-9)
    assert h2_sum(n).value == pytest.approx(h2_bruteforce(n), abs=1e-9)


def test_distance_forms_match():
    for n in range(2, 21):
        assert abs(f2_by_distance(n).value / f2_sum(n).value - 1) < 1e-12
        assert abs(h2_by_distance(n).value / h2_sum(n).value - 1) < 1e-12


def test_distance_terms_peak_in_the_interior():
    # at large n the per-distance terms are maximal at an interior d
    from entstats.bitcomb import binom

    n = 100
    lo, hi = 50, 50
    f_terms = [
        binom(lo, d) * binom(hi, d) * 2.0 ** (n / 2 + 1) * (2.0 ** (n / 2 - 2 * d) + 2.0 ** -(n / 2 - 2 * d))
        for d in range(lo + 1)
    ]
    h_terms = [
        binom(lo, d) * binom(hi, d) * ((2**lo + 2**hi) * 2.0**-d + 2.0 ** (d + 1))
        for d in range(lo + 1)
    ]
    assert 0 < f_terms.index(max(f_terms)) < lo
    assert 0 < h_terms.index(max(h_terms)) < lo
    assert f_terms.index(max(f_terms)) != h_terms.index(max(h_terms))


def test_hadamard_fixed_bipartition_moments():
    assert mu_a_hadamard(2, 1).exact == Fraction(3, 4)
    assert mu_a_hadamard(6, 3).exact == Fraction(15, 64)
    assert sigma2_a_hadamard(2, 1, 4).exact == Fraction(1, 32)
    assert sigma2_a_hadamard(2, 1, 2).exact == Fraction(1, 16)
    assert sigma2_a_hadamard(2, 1, Q_INF).exact == Fraction(1, 32)


def test_hadamard_mean_below_haar_everywhere():
    for n in range(2, 21):
        for n_a in range(1, n // 2 + 1):
            assert mu_a_hadamard(n, n_a).exact < mu_a_haar(n, n_a).exact


def test_hadamard_average_moments():
    assert mu_me_hadamard(3).exact == Fraction(5, 8)
    assert mu_me_hadamard(7).exact == Fraction(23, 128)
    assert sigma2_me_hadamard(3, 2).exact == Fraction(5, 384)
    assert sigma2_me_hadamard(2, 3).exact == sigma2_a_hadamard(2, 1, 3).exact == Fraction(1, 32)


def test_c_q():
    assert c_q(2) == 2
    assert c_q(3) == c_q(4) == c_q(Q_INF) == 1
    with pytest.raises(ValueError):
        c_q(1)
    with pytest.raises(ValueError):
        c_q(2.5)


def test_orderings():
    for n in range(2, 31):
        assert mu_me_hadamard(n).exact < mu_me_haar(n).exact
        assert sigma2_me_hadamard(n, 2).exact == 2 * sigma2_me_hadamard(n, 3).exact
        if n >= 4:
            assert sigma2_me_hadamard(n, 3).exact < sigma2_me_haar(n).exact
            assert sigma2_me_hadamard(n, 2).exact > sigma2_me_haar(n).exact


def test_k_distance_paper_row():
    ks = [k_distance(n, 2).value for n in range(4, 9)]
    assert [round(k, 1) for k in ks[:4]] == [2.9, 3.2, 7.5, 8.4]
    assert round(ks[4]) == 19
    # definition check: (mu - bound) / sigma
    for n in range(4, 9):
        mu = mu_me_hadamard(n).value
        sigma = math.sqrt(sigma2_me_hadamard(n, 2).value)
        assert k_distance(n, 2).value == pytest.approx((mu - 2.0 ** -(n // 2)) / sigma, rel=1e-12)


def test_asymptotic_constants():
    assert ALPHA == pytest.approx(math.log2(1.5), abs=0)
    assert ALPHA == pytest.approx(0.5849625007211562, abs=1e-15)
    assert GAMMA == pytest.approx(math.log2((1 + math.sqrt(2)) / 2), abs=0)
    assert GAMMA == pytest.approx(0.2716, abs=5e-5)


def test_f2star_asymptotic_window():
    r40 = f2star_sum(40).value / (3 * math.sqrt(2) * 1.5**40)
    r60 = f2star_sum(60).value / (3 * math.sqrt(2) * 1.5**60)
    assert 0.9 < r40 < 1.1
    assert abs(r60 - 1) < abs(r40 - 1)


def test_h2_negligible_vs_f2():
    assert h2_sum(40).exact / f2_sum(40).exact < Fraction(1, 1000)


def test_f2star_over_f2_monotone_to_one():
    ratios = [f2star_sum(n).exact / f2_sum(n).exact for n in range(4, 61)]
    assert all(r < 1 for r in ratios)
    assert all(b > a for a, b in zip(ratios, ratios[1:]))


def test_h2_saddle_point_trend():
    r40 = h2_sum(40).value / h2_asymptote(40)
    r60 = h2_sum(60).value / h2_asymptote(60)
    assert r40 == pytest.approx(1.0, abs=0.05)
    assert abs(r60 - 1) < abs(r40 - 1)
    # odd n picks up the (4 + 3 sqrt(2)) / 8 factor
    for n in (41, 61):
        assert h2_sum(n).value / h2_asymptote(n) == pytest.approx(1.0, abs=0.05)


def test_asymptotics_table():
    rows = asymptotics_table(30)
    by_name = {}
    for tv in rows:
        by_name.setdefault(tv.name, []).append(tv)
    assert by_name["alpha"][0].value == pytest.approx(math.log2(1.5), abs=0)
    assert by_name["gamma"][0].value == pytest.approx(math.log2((1 + math.sqrt(2)) / 2), abs=0)
    # mean gap scales like 2^-n: the scaled sequence stays order one
    for tv in by_name["delta_mu_ME"]:
        scaled = tv.exact * 2**tv.n
        assert 0 < scaled <= 1
    scaled = [tv.exact * 2**tv.n for tv in by_name["delta_mu_ME"] if tv.n >= 4]
    assert all(b > a for a, b in zip(scaled, scaled[1:]))
    # the ensembles stay statistically separated: sigma/gap shrinks
    for name in ("sigma_over_delta_mu_haar", "sigma_over_delta_mu_hypergraph"):
        seq = [tv.value for tv in by_name[name] if tv.n >= 6]
        assert all(b < a for a, b in zip(seq, seq[1:]))


def test_theory_value_exact_fields():
    tv = mu_a_haar(2, 1)
    assert (tv.exact_num, tv.exact_den) == (4, 5)
    assert tv.value == 0.8
    kd = k_distance(4, 2)
    assert kd.exact is None and kd.exact_num is None
