import io
import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metacyclic.bounds import (
    COS_FLOOR_400,
    BoundConfig,
    b_expansion,
    block_lower_bound,
    bound_table,
    ck_terms,
    compositions,
    mii_power_entries,
    moment_oracle,
    moment_sequence,
    moments_closed_form,
    omega_sum,
    r2k_direct,
    rik_bounds,
    s_n,
    series_coefficients,
    surjection_count,
    wm_lower_bound_exact,
    write_bound_table,
)
from metacyclic.errors import DomainError, ParameterError
from metacyclic.group import validate_params
from metacyclic.spectral import fourier_block, fourier_blocks

from helpers import params_up_to_order, valid_params

REFERENCE_CONFIG = BoundConfig(a=127.5, series_t=1000.0, epsilon=2)
PANEL = [validate_params(*t) for t in [(3, 7, 2), (6, 7, 3), (4, 5, 2), (8, 17, 2), (6, 9, 2), (4, 10, 3),
                                        (5, 11, 3), (6, 13, 4), (9, 19, 7), (12, 13, 2), (8, 16, 3), (4, 13, 5)]]


def cos2(x, m):
    return 2 * math.cos(2 * math.pi * x / m)


# -- oracles written independently of the package ----------------------------

def functions_with_big_fibres(size, j):
    """Brute force: maps {1..size} -> {1..j}, onto, each fibre of size >= 2."""
    total = 0
    for f in itertools.product(range(j), repeat=size):
        counts = np.bincount(f, minlength=j)
        total += bool((counts >= 2).all())
    return total


def big_fibres_inclusion_exclusion(size, j):
    # every fibre is neither empty nor a singleton
    total = 0
    for empty in range(j + 1):
        for single in range(j - empty + 1):
            if single > size:
                continue
            free = j - empty - single
            ways = math.comb(j, empty) * math.comb(j - empty, single) * math.perm(size, single)
            total += (-1) ** (empty + single) * ways * free ** (size - single)
    return total


def log_series_power(x, a, k):
    """k-th Taylor coefficient of (1/a) ln h(z) via power-series arithmetic in numpy."""
    h = np.array([a**j * x[j] / math.factorial(j) for j in range(k + 1)])
    u = h.copy()
    u[0] = 0.0
    power = np.zeros(k + 1)
    power[0] = 1.0
    acc = np.zeros(k + 1)
    for n in range(1, k + 1):
        power = np.convolve(power, u)[: k + 1]
        acc += (-1) ** (n - 1) / n * power
    return acc[k] / a


# -- configuration ------------------------------------------------------------

def test_config_convergence_condition():
    with pytest.raises(ParameterError):
        BoundConfig(a=127.5, series_t=700.0)
    with pytest.raises(ParameterError):
        BoundConfig(epsilon=4)
    with pytest.raises(ParameterError):
        BoundConfig(truncation_k=2)
    assert BoundConfig(a=127.5, series_t=736.0).series_t == 736.0


# -- Omega sums -----------------------------------------------------------------

def test_omega_at_zero_is_two():
    for p in PANEL:
        for a in range(p.m):
            assert abs(omega_sum(0, a, a, p) - 2) < 1e-12


def test_omega_vanishes_off_pattern():
    for p in PANEL:
        step = p.delta * p.t_period
        for a in range(p.m):
            for b in range(p.m):
                if (a - b) % step:
                    assert omega_sum(3, a, b, p) == 0


@pytest.mark.parametrize("p", PANEL, ids=str)
def test_omega_identities(p):
    m, n = p.m, p.n
    kinv = pow(p.k, -1, n)
    w = np.exp(2j * np.pi / m)
    pairs = [(a, b) for a in range(m) for b in range(m) if a != b and (a - b) % (p.delta * p.t_period) == 0]
    for i in range(n):
        om = lambda j, a, b: omega_sum(j, a, b, p)  # noqa: E731
        blk = fourier_block(i, p).entries
        assert abs(np.trace(blk) - m * om(i, 0, 0)) < 1e-10
        # quadratic form with the row cosines; the ik term survives for irregular k as well
        quad = sum(cos2(a, m) * cos2(b, m) * om(i, a, b) for a in range(m) for b in range(m)) / m
        assert abs(quad - cos2(i * p.k, n) - cos2(i * pow(p.k, p.alpha - 1, n), n)) < 1e-10
        for phase in (lambda a, b: w**a, lambda a, b: w**-a, lambda a, b: w**b, lambda a, b: w**-b):
            assert abs(sum(om(i, a, b) * phase(a, b) for a, b in pairs)) < 1e-10
        tail = sum(w**b * (om(i * (1 + kinv), a, b) + om(i * (1 - kinv), a, b))
                   + w**-b * (om(i * (1 + p.k), a, b) + om(i * (1 - p.k), a, b))
                   for a in range(m) for b in range(m)) / m
        assert abs(tail) < 1e-10
        cross = sum(om(i, a, b) * (cos2(a, m) + cos2(b, m)) for a, b in pairs) / m
        assert abs(cross) < 1e-10


def test_printed_irregular_quadratic_form_disagrees():
    # dropping the ik term for irregular k gives a wrong value
    p = validate_params(4, 5, 2)
    m = p.m
    quad = sum(cos2(a, m) * cos2(b, m) * omega_sum(1, a, b, p) for a in range(m) for b in range(m)) / m
    assert abs(quad - cos2(p.k ** (p.alpha - 1), p.n)) > 0.1


# -- moments --------------------------------------------------------------------

def test_moment_oracle_basics():
    p = validate_params(5, 11, 3)
    b0 = fourier_block(0, p)
    assert moment_oracle(b0, 0) == 5
    assert abs(moment_oracle(b0, 1) - 10) < 1e-12
    for i in range(p.n):
        blk = fourier_block(i, p)
        assert abs(moment_oracle(blk, 2) - np.linalg.norm(blk.entries @ np.ones(5)) ** 2) < 1e-10
    with pytest.raises(ParameterError):
        moment_oracle(b0, -1)


def test_moments_at_block_zero():
    ms = moments_closed_form(0, validate_params(5, 11, 3))
    assert (ms.N1_over_m, ms.N2_over_m, ms.N3_over_m) == pytest.approx((2, 6, 20))


@pytest.mark.parametrize("p", params_up_to_order(200, include_torus=True)[::2], ids=str)
def test_moments_closed_form_vs_oracle(p):
    blocks = fourier_blocks(p)
    for i in range(p.n):
        ms = moments_closed_form(i, p)
        seq = moment_sequence(blocks[i], 3)
        assert abs(seq[1] - p.m * ms.N1_over_m) < 1e-9 * p.m
        assert abs(seq[2] - p.m * ms.N2_over_m) < 1e-9 * p.m
        assert abs(seq[3] - p.m * ms.N3_over_m) < 1e-9 * p.m
        assert ms.N3_over_m <= 64 + 1e-9


def test_printed_third_moment_fails_on_irregular_blocks():
    p = validate_params(6, 9, 2)
    assert not p.regular
    worst = max(abs(moment_sequence(fourier_block(i, p), 3)[3] / p.m
                    - moments_closed_form(i, p, as_printed=True).N3_over_m) for i in range(p.n))
    assert worst > 0.1


@pytest.mark.parametrize("triple", [(3, 7, 2), (4, 5, 2), (6, 9, 2), (8, 17, 2), (12, 13, 2)])
def test_mii_powers(triple):
    p = validate_params(*triple)
    for i in range(p.n):
        blk = fourier_block(i, p).entries
        sq, cube = blk @ blk, blk @ blk @ blk
        for a in range(p.m):
            for b in range(p.m):
                assert abs(mii_power_entries(i, a, b, 2, p) - sq[a, b]) < 1e-9
                assert abs(mii_power_entries(i, a, b, 3, p) - cube[a, b]) < 1e-9


def test_mii_power_zero_off_pattern():
    p = validate_params(6, 9, 2)
    assert mii_power_entries(1, 0, 1, 2, p) == 0
    with pytest.raises(ParameterError):
        mii_power_entries(1, 0, 0, 4, p)


# -- the bound ------------------------------------------------------------------

def test_bound_for_scaled_identity():
    m = 5
    cfg = BoundConfig(truncation_k=40)
    moments = [m * 4.0**k for k in range(41)]
    assert abs(wm_lower_bound_exact(moments, m, cfg) - 4.0) < 1e-9


def test_bound_on_block_zero():
    p = validate_params(6, 7, 3)
    val = block_lower_bound(fourier_block(0, p), REFERENCE_CONFIG)
    assert 2.0 <= val <= 4.0


def test_bound_domain_error():
    with pytest.raises(DomainError):
        wm_lower_bound_exact([1.0] + [-1e6] * 12, 1, REFERENCE_CONFIG)
    with pytest.raises(ParameterError):
        wm_lower_bound_exact([1.0, 2.0], 1, REFERENCE_CONFIG)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_bound_is_sound_for_random_hermitian(m, seed):
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m)))
    eigs = rng.uniform(-4, 4, size=m)
    mat = (q * eigs) @ q.conj().T
    assert block_lower_bound(mat, REFERENCE_CONFIG) <= eigs.max() + 1e-6


def test_b_expansion_values():
    assert b_expansion(400, REFERENCE_CONFIG) >= 3.476
    assert b_expansion(400, BoundConfig(a=111.5, series_t=1000.0, epsilon=3)) >= 3.472
    assert b_expansion(400, REFERENCE_CONFIG) >= 2 * math.sqrt(3) + 0.011
    tiny = BoundConfig(a=1e-9, series_t=1.0)
    assert abs(b_expansion(17, tiny) - 2 * math.cos(2 * math.pi / 17)) < 1e-8
    with pytest.raises(ParameterError):
        b_expansion(2, REFERENCE_CONFIG)


def test_cos_floor_constant():
    # the constant is 2cos(2 pi/400) rounded to 8 digits, which rounds up by 3.5e-8
    assert COS_FLOOR_400 - 2 * math.cos(2 * math.pi / 400) == pytest.approx(3.5037e-8, rel=1e-3)
    for n in range(401, 2000):
        assert 2 * math.cos(2 * math.pi / n) >= COS_FLOOR_400


# -- combinatorics --------------------------------------------------------------

@pytest.mark.parametrize("args,expected", [((4, 2), 6), ((5, 2), 20), ((3, 2), 0), ((6, 3), 90), ((7, 1), 1)])
def test_surjection_examples(args, expected):
    assert surjection_count(*args) == expected


def test_surjection_count_against_brute_force():
    for size in range(0, 13):
        for j in range(1, 7):
            expected = big_fibres_inclusion_exclusion(size, j) if size >= 2 * j else 0
            assert surjection_count(size, j) == expected, (size, j)
            if j**size <= 600_000:
                assert surjection_count(size, j) == functions_with_big_fibres(size, j), (size, j)


def test_s_n_identity():
    assert s_n(2) == Fraction(3, 2)
    assert s_n(3) == Fraction(-5, 6)
    for n in range(2, 11):
        assert s_n(n) == (-1) ** n + Fraction(1, math.factorial(n))


def test_compositions():
    assert sorted(compositions(4, 2)) == [(1, 3), (2, 2), (3, 1)]
    assert list(compositions(3, 4)) == []
    assert sum(1 for _ in compositions(10, 4)) == math.comb(9, 3)


# -- series coefficients --------------------------------------------------------

def test_ck_terms_small_k():
    moments = [3.0, 6.0, 14.0, 40.0]
    r1, r2, r3 = ck_terms(2, moments, 3, REFERENCE_CONFIG)
    assert r2 == 0 and r3 == 0
    flat = [1.0] + [2.0**k for k in range(1, 6)]
    assert ck_terms(5, flat, 1, REFERENCE_CONFIG)[0] == 0
    with pytest.raises(ParameterError):
        ck_terms(6, moments, 3, REFERENCE_CONFIG)


@pytest.mark.parametrize("p", PANEL[:6], ids=str)
def test_ck_terms_sum_to_series_coefficient(p):
    a = REFERENCE_CONFIG.a
    blocks = fourier_blocks(p)
    for i in range(p.n):
        seq = moment_sequence(blocks[i], 10)
        coeffs = series_coefficients(seq, p.m, a, 10)
        x = [v / p.m for v in seq]
        for k in range(2, 11):
            total = sum(ck_terms(k, seq, p.m, REFERENCE_CONFIG))
            independent = log_series_power(x, a, k)
            scale = max(1.0, abs(independent), a ** (k - 1) * 4**k)
            assert abs(coeffs[k - 1] - independent) <= 1e-10 * scale
            assert abs(total - independent) <= 1e-10 * scale


def test_r2_closed_form_matches_direct_sum():
    p = validate_params(5, 11, 3)
    for i in (0, 1, 4):
        seq = moment_sequence(fourier_block(i, p), 10)
        for k in range(2, 11):
            closed = ck_terms(k, seq, p.m, REFERENCE_CONFIG)[1]
            direct = r2k_direct(k, seq, p.m, REFERENCE_CONFIG)
            assert abs(closed - direct) <= 1e-12 * max(1.0, abs(closed))


def test_printed_r3_is_not_the_series_term():
    p = validate_params(5, 11, 3)
    seq = moment_sequence(fourier_block(1, p), 6)
    coeff = series_coefficients(seq, p.m, REFERENCE_CONFIG.a, 6)[5]
    r1, r2, r3 = ck_terms(6, seq, p.m, REFERENCE_CONFIG, printed_r3=True)
    assert abs(r1 + r2 + r3 - coeff) > 1e-3 * abs(coeff)


# -- a priori estimates ---------------------------------------------------------

TABLE = {
    4: (2.072740039e-5, 1.325855621e-4, 3.591789931e-3),
    5: (2.184639608e-6, 4.225643495e-5, 3.663173821e-3),
    6: (1.886879001e-7, 1.292887412e-5, 3.735976408e-3),
    7: (1.385629798e-8, 3.845865605e-6, 3.810225887e-3),
    8: (8.868141122e-10, 1.120656869e-6, 3.885951013e-3),
    9: (5.035124916e-11, 3.214487837e-7, 3.963181115e-3),
    10: (2.570423859e-12, 9.106592102e-8, 4.041946102e-3),
}


@pytest.mark.parametrize("k", sorted(TABLE))
def test_rik_bounds_table(k):
    got = rik_bounds(k, REFERENCE_CONFIG)
    for value, ref in zip(got, TABLE[k]):
        assert abs(value - ref) <= 5e-10 * ref


def test_corollary_s2_form():
    s2 = rik_bounds(5, REFERENCE_CONFIG, s2_form="corollary")[1]
    r = (127.5 / 1000) ** 5
    assert s2 == pytest.approx(2 / (127.5 * 5) * r * COS_FLOOR_400**5)
    assert s2 < rik_bounds(5, REFERENCE_CONFIG)[1]
    with pytest.raises(ParameterError):
        rik_bounds(5, REFERENCE_CONFIG, s2_form="other")
    with pytest.raises(ParameterError):
        rik_bounds(5, BoundConfig(n_min=100))


def test_s1_decreasing():
    s1 = [rik_bounds(k, REFERENCE_CONFIG)[0] for k in range(2, 11)]
    assert all(x > y for x, y in zip(s1, s1[1:]))


def test_actual_terms_within_estimates():
    # |R_ik| / t^k for block 1 of graphs with n > 400
    t = REFERENCE_CONFIG.series_t
    for triple in [(3, 402, 37), (4, 401, 20), (5, 401, 39), (7, 406, 141), (8, 401, 45)]:
        p = validate_params(*triple)
        seq = moment_sequence(fourier_block(1, p), 10)
        assert seq[1] / p.m >= COS_FLOOR_400
        for k in range(4, 11):
            terms = ck_terms(k, seq, p.m, REFERENCE_CONFIG)
            for value, bound in zip(terms, rik_bounds(k, REFERENCE_CONFIG)):
                assert abs(value) / t**k <= bound, (triple, k)


def test_bound_table_csv():
    buf = io.StringIO()
    write_bound_table(bound_table(REFERENCE_CONFIG), buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "k,S1k,S2k,S3k"
    assert lines[1].startswith("4,2.072740039e-05,")
    assert len(lines) == 8
