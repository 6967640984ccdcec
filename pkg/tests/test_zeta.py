import cmath
import io
import math
from fractions import Fraction as F

import numpy as np
import pytest

from sl4zeta import km_ring as kr
from sl4zeta.cartan import ad_eigenvalues_nbar, adjoint_block_matrix, group_element
from sl4zeta.euler_char import AnglePair, Chi1Table, Irrational, Rational
from sl4zeta.spectrum import PrimitiveClass, Spectrum, generate_pnt_like
from sl4zeta.zeta import (
    TruncationConfig, build_terms, dirichlet_logderiv, evaluate_grid, factorization_residual, log_ruelle,
    log_selberg, parse_grid, write_zeta_csv,
)

EMPTY = Spectrum(())
SIGMAS = [kr.Triv, kr.sigma_tilde(), kr.wedge_m(2), kr.Det + 3 * kr.VirtualRep.delta(1, 2)]


def one_class(l0=1.5, th=Irrational(0.7), ph=Irrational(-1.9), chi=None):
    ap = AnglePair(th, ph)
    if chi is None:
        from sl4zeta.euler_char import r_gamma
        n = len(r_gamma(ap))
        chi = Chi1Table(F(1), F(1) if n else None, F(1) if n == 2 else None, F(1) if n == 2 else None)
    return Spectrum((PrimitiveClass(l0, ap, chi),))


def brute_det_n(l, th, ph, k):
    g = np.linalg.matrix_power(group_element(l, th, ph), k)
    return np.linalg.det(np.eye(4) - adjoint_block_matrix(g, "n"))


def test_empty_spectrum():
    for f in (log_selberg, log_ruelle, factorization_residual, dirichlet_logderiv):
        assert f(EMPTY, kr.Triv, 2.5) == 0


def test_single_term_selberg():
    sp = one_class()
    cfg = TruncationConfig(L_max=2.0)
    s = 2.3 + 0.4j
    want = -cmath.exp(-s * 1.5) / brute_det_n(1.5, 0.7, -1.9, 1)
    assert abs(log_selberg(sp, kr.Triv, s, cfg) - want) < 1e-14


def test_single_class_ruelle_m1():
    sp = one_class(2.0, Rational(1, 2), Rational(1, 3), Chi1Table(F(1), F(2), F(3), F(5)))
    cfg = TruncationConfig(L_max=100.0, m_max=1)
    s = 2.0
    t = sp.classes[0].chi.by_power([2, 3])
    chis = {1: t[1], 2: -(t[1] - t[2]) / 2, 3: -(t[1] - t[3]) / 3, 6: (t[1] - t[2] - t[3] + t[6]) / 6}
    want = -sum(float(c) * math.exp(-s * n * 2.0) for n, c in chis.items())
    assert log_ruelle(sp, kr.Triv, s, cfg) == pytest.approx(want, abs=1e-15)


def test_linearity_in_chi(small_weyl):
    doubled = Spectrum(tuple(PrimitiveClass(c.l0, c.angles, c.chi.scaled(2)) for c in small_weyl.classes))
    for s in (2.0, 3.1 + 1j):
        assert log_selberg(doubled, kr.sigma_tilde(), s) == pytest.approx(2 * log_selberg(small_weyl, kr.sigma_tilde(), s), rel=1e-13)


def test_non_regular_spectrum_kills_sigma_tilde():
    sp = generate_pnt_like(2000.0, 0, 2.0, "fixed:1,1/3")
    assert abs(log_ruelle(sp, kr.sigma_tilde(), 2.5)) < 1e-12
    assert abs(dirichlet_logderiv(sp, kr.sigma_tilde(), 2.5)) < 1e-12


def test_factorization_single_class_random_s(rng):
    for ap in ((Irrational(0.7), Irrational(-1.9)), (Rational(1, 2), Rational(1, 3)), (Rational(2, 5), Irrational(1.1))):
        sp = one_class(1.1, *ap)
        for _ in range(100):
            s = complex(rng.uniform(2, 4), rng.uniform(-20, 20))
            sigma = SIGMAS[int(rng.integers(0, len(SIGMAS)))]
            assert abs(factorization_residual(sp, sigma, s)) < 1e-10


def test_per_class_identity_matrix_oracle(rng):
    """Σ_q (-1)^q e^{-qkl/4} tr(b^k|∧^q nbar) = det(1 - Ad((ab)^{-k})|nbar)."""
    for _ in range(50):
        l, th, ph, k = rng.uniform(0.3, 4), rng.uniform(-3, 3), rng.uniform(-3, 3), int(rng.integers(1, 5))
        lhs = sum((-1) ** q * math.exp(-q * k * l / 4) * kr.trace_at(kr.wedge_nbar(q), k * th, k * ph) for q in range(5))
        g = np.linalg.matrix_power(np.linalg.inv(group_element(l, th, ph)), k)
        rhs = np.linalg.det(np.eye(4) - adjoint_block_matrix(g, "nbar"))
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_factorization_ten_k(ten_k):
    assert len(ten_k) == 10_000
    assert abs(factorization_residual(ten_k, kr.sigma_tilde(), 3.0)) < 1e-8


def test_logderiv_single_term():
    sp = one_class(1.5)
    cfg = TruncationConfig(L_max=2.0)
    s = 2.2
    tr = kr.trace_at(kr.sigma_tilde(), 0.7, -1.9)
    assert dirichlet_logderiv(sp, kr.sigma_tilde(), s, cfg) == pytest.approx(tr * 1.5 * math.exp(-s * 1.5))


@pytest.mark.parametrize("law", ["weyl", "fixed:1/2,1/3", "fixed:1/4,2/5"])
def test_logderiv_finite_difference(law):
    sp = generate_pnt_like(5000.0, 2, 2.0, law)
    h = 1e-4
    for s in (2.0, 2.5, 3.0):
        for sigma in (kr.Triv, kr.sigma_tilde()):
            d = dirichlet_logderiv(sp, sigma, s)
            fd = (log_ruelle(sp, sigma, s + h) - log_ruelle(sp, sigma, s - h)) / (2 * h)
            if abs(d) > 1e-12:
                assert abs(d - fd) / abs(d) < 1e-6


def test_logderiv_equals_power_sum_with_chi1():
    """Grouping by powers gives weights χ1(Γ_{γ^k}) (the telescoping identity)."""
    sp = generate_pnt_like(800.0, 2, 2.0, "fixed:1/2,1/3")
    cfg = TruncationConfig(L_max=25.0)
    s = 2.4
    a = sp.arrays
    total = 0.0
    for i, c in enumerate(sp.classes):
        k = 1
        while k * c.l0 <= cfg.L_max:
            tr = kr.trace_at(kr.Triv, k * a.theta[i], k * a.phi[i])
            total += float(a.chi1_power(k)[i]) * tr * c.l0 * math.exp(-s * k * c.l0)
            k += 1
    assert dirichlet_logderiv(sp, kr.Triv, s, cfg).real == pytest.approx(total, rel=1e-12)


def _h_series(eigs, order):
    """Coefficients of Π_i 1/(1 - z_i t) up to t^order: complete homogeneous symmetric polynomials."""
    c = np.zeros(order + 1, dtype=complex)
    c[0] = 1
    for z in eigs:
        geo = z ** np.arange(order + 1)
        c = np.convolve(c, geo)[: order + 1]
    return c


def test_weakly_neat_collapse_symmetric_powers():
    rng = np.random.default_rng(3)
    classes = tuple(
        PrimitiveClass(float(l), AnglePair(Irrational(float(t)), Irrational(float(p))), Chi1Table(F(1)))
        for l, t, p in sorted(zip(rng.uniform(3, 6, 30), rng.uniform(-3, 3, 30), rng.uniform(-3, 3, 30)))
    )
    sp = Spectrum(classes)
    cfg = TruncationConfig(L_max=15.0)
    s = 2.0 + 0.5j
    sig = kr.sigma_tilde()
    want = 0j
    for c in classes:
        th, ph = c.angles.values
        m = 1
        while m * c.l0 <= cfg.L_max:
            # eigenvalues of Ad((ab)^m) on n coincide with those of Ad((ab)^{-m}) on nbar
            sym = _h_series(ad_eigenvalues_nbar(c.l0, th, ph, m), 150).sum()
            tr = 4 * (1 - math.cos(2 * m * th)) * (1 - math.cos(2 * m * ph))
            want -= cmath.exp(-s * m * c.l0) * tr * sym / m
            m += 1
    assert abs(log_selberg(sp, sig, s, cfg) - want) < 1e-10


def test_truncation_tail_bound(small_weyl):
    sigma0 = 2.0
    ref = log_selberg(small_weyl, kr.Triv, sigma0, TruncationConfig(60.0))
    Ls = [3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 10.0, 12.0]
    tails = [abs(ref - log_selberg(small_weyl, kr.Triv, sigma0, TruncationConfig(L))) for L in Ls]
    assert all(b <= a for a, b in zip(tails, tails[1:]))
    # |term| <= e^{-σ0 l}/(1 - 2^{-1/4})^4 and the power-counting density is <= 2e^l(1 + ...)
    C = 4 * sigma0 / (sigma0 - 1) / (1 - 2 ** -0.25) ** 4
    for L, t in zip(Ls, tails):
        assert t <= C * math.exp(-(sigma0 - 1) * L)


def test_thread_count_does_not_change_bits(small_weyl, monkeypatch):
    grid = parse_grid("2:4:0.25,1.5")
    monkeypatch.setenv("ZETA_THREADS", "1")
    one = evaluate_grid(log_selberg, small_weyl, kr.sigma_tilde(), grid)
    monkeypatch.setenv("ZETA_THREADS", "4")
    four = evaluate_grid(log_selberg, small_weyl, kr.sigma_tilde(), grid)
    assert one == four


def test_warns_below_one(small_weyl):
    with pytest.warns(RuntimeWarning):
        log_selberg(small_weyl, kr.Triv, 0.9)


def test_config_validation():
    with pytest.raises(ValueError):
        TruncationConfig(L_max=0)
    with pytest.raises(ValueError):
        TruncationConfig(m_max=0)


def test_term_count_finite_and_m_cap(small_weyl):
    t_all = build_terms(small_weyl, TruncationConfig(20.0))
    t_one = build_terms(small_weyl, TruncationConfig(20.0, 1))
    assert len(t_one) == len(small_weyl)
    assert len(t_all) > len(t_one)
    assert np.all(t_all.length <= 20.0)


def test_grid_parsing_and_csv():
    assert parse_grid("2:3:0.5") == [2, 2.5, 3]
    assert parse_grid("2:2:1,3") == [complex(2, 3)]
    with pytest.raises(ValueError):
        parse_grid("2:1:0.5")
    buf = io.StringIO()
    write_zeta_csv(buf, [2 + 0j], [-1 + 0.5j], [1e-16], kind="R")
    head, row = buf.getvalue().splitlines()
    assert head == "s_re,s_im,logR_re,logR_im,residual_abs"
    assert row.startswith("2.0,0.0,-1.0,0.5,")
