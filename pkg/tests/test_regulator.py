import cmath
import math

import mpmath
import pytest

from hcg import constructions as C
from hcg import regulator as R
from hcg.symcycle import CycleSum


def root(m: int, N: int) -> complex:
    return cmath.exp(2j * math.pi * m / N)


def test_zeta_values():
    assert abs(R.zeta(2) - math.pi ** 2 / 6) < 1e-15
    assert abs(R.zeta(4) - math.pi ** 4 / 90) < 1e-15
    assert abs(R.zeta(3) - 1.2020569031595942) < 1e-15


@pytest.mark.parametrize("s,q", [(2, 0.25), (3, 0.2), (5, 1 / 7), (2, 1.0), (4, 0.9)])
def test_hurwitz_against_mpmath(s, q):
    assert abs(R.hurwitz_zeta(s, q) - float(mpmath.zeta(s, q))) < 1e-13 * max(1, float(mpmath.zeta(s, q)))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("m,N", [(1, 5), (2, 5), (1, 7), (3, 8), (1, 12), (1, 2), (1, 4)])
def test_polylog_root_against_series_and_mpmath(n, m, N):
    z = root(m, N)
    ref = complex(mpmath.polylog(n, z))
    assert abs(R.polylog_root(n, m, N) - ref) < 1e-13
    if n >= 3:  # the n = 2 series needs ~1e7 terms per call; checked once below
        assert abs(R.polylog(n, z) - ref) < 1e-13


def test_polylog_series_n2_once():
    z = root(1, 5)
    assert abs(R.polylog(2, z, tol=1e-10) - complex(mpmath.polylog(2, z))) < 1e-10


def test_polylog_special_points():
    assert R.polylog(3, -1) == complex(-0.75 * R.zeta(3))
    assert R.polylog(4, 1) == complex(R.zeta(4))
    assert R.polylog(3, 0) == 0
    assert abs(R.polylog(3, 0.5) - complex(mpmath.polylog(3, 0.5))) < 1e-14
    # Li_2(i) = -pi^2/48 + i G
    assert abs(R.polylog_root(2, 1, 4) - complex(-math.pi ** 2 / 48, float(mpmath.catalan))) < 1e-14


def test_polylog_domain_errors():
    with pytest.raises(R.DomainError):
        R.polylog(2, 1.5)
    with pytest.raises(R.DomainError):
        R.polylog(1, 1)
    with pytest.raises(R.DomainError):
        R.polylog(2, 0.3, tol=1e-16)
    with pytest.raises(R.DomainError):
        R.polylog_root(1, 1, 5)


@pytest.mark.parametrize("n", [2, 3, 4, 6])
@pytest.mark.parametrize("m,N", [(1, 5), (1, 7), (3, 10), (1, 9)])
def test_duplication_and_conjugation(n, m, N):
    # Li(z) + Li(-z) = 2^(1-n) Li(z^2), and Li(conj z) = conj Li(z)
    a = R.polylog_root(n, m, N)
    b = R.polylog_root(n, 2 * m + N, 2 * N)  # -z = exp(2 pi i (2m + N) / 2N)
    c = R.polylog_root(n, 2 * m, N)
    assert abs(a + b - 2.0 ** (1 - n) * c) < 1e-10
    assert R.polylog_root(n, -m, N) == a.conjugate()
    if n > 2:
        z = root(m, N)
        assert R.polylog(n, z.conjugate()) == R.polylog(n, z).conjugate()


def test_distribution_relation():
    # sum over k of Li_n(zeta_N^k) = N^(1-n) zeta(n)
    for n in (2, 3):
        for N in (4, 5, 6):
            total = sum(R.polylog_root(n, k, N) for k in range(N))
            assert abs(total - N ** (1 - n) * R.zeta(n)) < 1e-12


def test_index_set_and_pi_n():
    assert R.index_set_A(12) == [1, 5]
    assert R.index_set_A(2) == [1]
    assert R.pi_n(1 + 2j, 2) == 2 and R.pi_n(1 + 2j, 3) == 1


def test_closed_form_normalization():
    v = R.regulator_closed_form(3, 5, 2, 1)
    assert abs(v.raw + 25 * R.polylog_root(3, 2, 5)) < 1e-13
    assert abs(v.normalized - R.polylog_root(3, 2, 5)) < 1e-15
    assert abs(v.doubled() - 2 * v.raw) < 1e-15
    with pytest.raises(Exception):
        R.regulator_closed_form(3, 6, 2)


@pytest.mark.parametrize("n,N,b,a", [(2, 5, 1, 1), (2, 5, 2, 1), (3, 2, 1, 1), (3, 7, 3, 2)])
def test_tensor_matches_closed_form(n, N, b, a):
    r = R.regulator_integral(R.IntegralJob(n, N, b, a))
    assert abs(r.value - R.regulator_closed_form(n, N, b, a).raw) < 1e-9
    assert r.evaluations == 64 ** (n - 1)


def test_tensor_convergence_is_monotone():
    cf = R.regulator_closed_form(4, 5, 1).raw
    errs = [abs(R.regulator_integral(R.IntegralJob(4, 5, 1, 1, order=k)).value - cf) for k in (2, 4, 8, 16)]
    assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
    # past order 16 the error sits at the rounding floor
    for k in (24, 32, 48, 64):
        assert abs(R.regulator_integral(R.IntegralJob(4, 5, 1, 1, order=k)).value - cf) < 1e-12


def test_tensor_dimension_limit():
    with pytest.raises(R.UnsupportedDimension):
        R.IntegralJob(7, 2, 1)


def test_mc_reproducible_and_calibrated():
    job = R.IntegralJob(3, 5, 1, 1, "monte_carlo", samples=200_000, seed=7)
    r1, r2 = R.regulator_integral(job), R.regulator_integral(job)
    assert r1.value == r2.value and r1.error == r2.error
    cf = R.regulator_closed_form(3, 5, 1).raw
    zs = []
    for seed in range(20):
        r = R.regulator_integral(R.IntegralJob(3, 5, 1, 1, "monte_carlo", samples=100_000, seed=seed))
        zs.append(abs(r.value - cf) / r.error)
    # 20 independent streams: nearly all inside 3 sigma, and the spread looks like a unit normal
    assert sum(z < 3 for z in zs) >= 18
    assert 0.4 < math.sqrt(sum(z * z for z in zs) / 20) < 1.6


def test_maltese_check_and_mutation():
    s = C.assemble_tildeZ(C.CycleSpec(4, 5, 1))
    rep = R.maltese_check(s)
    assert rep.passed and rep.b == 1
    wrong = C.assemble_tildeZ(C.CycleSpec(4, 5, 2))
    mutated = CycleSum([t for t in s if t.label == "Z"] + [t for t in wrong if t.label != "Z"])
    assert not R.maltese_check(mutated).passed


def test_period_vector():
    v = R.corollary1_vector(3, 4, 1)
    assert len(v) == 1 and abs(v[0] + 3 / 32 * R.zeta(3)) < 1e-14
    with pytest.raises(ValueError):
        R.corollary1_vector(3, 2, 1)


def test_extended_precision(monkeypatch):
    monkeypatch.setenv("HCG_PRECISION", "extended")
    assert abs(R.polylog_root(3, 1, 5) - complex(mpmath.polylog(3, root(1, 5)))) < 1e-15
