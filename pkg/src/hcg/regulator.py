"""Numerical side: polylogarithms, the reduced regulator integral, and the good-position checks."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .cyclo import CycloElem, NotCoprime, precision_mode, EXTENDED_DPS, root_of_unity
from .symcycle import CycleSum, ParamCycle

__all__ = [
    "DomainError",
    "UnsupportedDimension",
    "polylog",
    "polylog_root",
    "zeta",
    "hurwitz_zeta",
    "index_set_A",
    "pi_n",
    "RegulatorValue",
    "regulator_closed_form",
    "IntegralJob",
    "IntegralResult",
    "regulator_integral",
    "MalteseReport",
    "maltese_check",
    "corollary1_vector",
]


class DomainError(ValueError):
    pass


class UnsupportedDimension(ValueError):
    pass


_CHUNK = 1 << 20
_UNIT_SLACK = 1e-12


def _tail_terms(n: int, z: complex, tol: float) -> int:
    """Smallest K whose proven tail bound for sum_{k>K} z^k/k^n is below tol."""
    r = abs(z)
    best = math.inf
    d = abs(1 - z)
    if d > 0:
        # summation by parts, valid on the closed disk
        best = math.ceil((4.0 / (d * tol)) ** (1.0 / n))
    if r < 1 - _UNIT_SLACK:
        # sum_{k>K} r^k/k^n <= r^(K+1)/(1-r)
        geo = math.ceil(math.log(tol * (1 - r)) / math.log(r)) if r > 0 else 1
        best = min(best, max(geo, 1))
    if not math.isfinite(best):
        raise DomainError("no convergent tail bound")
    return max(int(best), 1)


def _series(n: int, z: complex, K: int) -> complex:
    r, theta = abs(z), cmath.phase(z)
    on_circle = abs(r - 1) <= _UNIT_SLACK
    total = 0j
    for start in range(1, K + 1, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, K + 1), dtype=np.float64)
        if on_circle:
            # angles reduced exactly in integer arithmetic would be nicer; fmod keeps
            # the phase bounded so cos/sin stay accurate for large k
            ang = np.fmod(k * theta, 2 * math.pi)
            terms = (np.cos(ang) + 1j * np.sin(ang)) / k ** n
        else:
            terms = np.exp(k * (math.log(r) + 1j * theta)) / k ** n
        total += complex(terms.sum())
    return total


def polylog(n: int, z: complex, tol: float = 1e-14) -> complex:
    """Li_n(z) on the closed unit disk by a partial sum with a proven tail bound."""
    if n < 1:
        raise DomainError("n must be >= 1")
    z = complex(z)
    if abs(z) > 1 + _UNIT_SLACK:
        raise DomainError("|z| > 1")
    if precision_mode() == "f64" and tol < 1e-14:
        raise DomainError("tol below 1e-14 is not meaningful in binary64")
    if z == 1:
        if n < 2:
            raise DomainError("Li_1 diverges at 1")
        return complex(zeta(n))
    if z == 0:
        return 0j
    if precision_mode() == "extended":
        import mpmath

        with mpmath.workdps(EXTENDED_DPS):
            return complex(mpmath.polylog(n, mpmath.mpc(z.real, z.imag)))
    if z.imag == 0 and z.real < 0 and n >= 2 and abs(z) == 1:
        # Li_n(-1) = -(1 - 2^(1-n)) zeta(n); keeps the axis value exactly real
        return complex(-(1 - 2.0 ** (1 - n)) * zeta(n))
    K = _tail_terms(n, z, tol / 2)
    val = _series(n, z, K)
    if z.imag == 0:
        val = complex(val.real, 0.0)
    return val


def _conj_safe(n: int, z: complex, tol: float) -> complex:
    # evaluate on the upper half so Li(conj z) == conj Li(z) bit-for-bit
    if z.imag < 0:
        return polylog(n, z.conjugate(), tol).conjugate()
    return polylog(n, z, tol)


@lru_cache(maxsize=4096)
def _polylog_root_cached(n: int, m: int, N: int, mode: str) -> complex:
    if m == 0:
        return complex(zeta(n))
    # residues mod N regroup the absolutely convergent series into Hurwitz values
    re, im = [], []
    for r in range(1, N + 1):
        w = complex(root_of_unity(m * r, N))
        h = hurwitz_zeta(n, r / N)
        re.append(w.real * h)
        im.append(w.imag * h)
    scale = float(N) ** -n
    val = complex(math.fsum(re) * scale, math.fsum(im) * scale)
    if (2 * m) % N == 0:
        val = complex(val.real, 0.0)
    return val


def polylog_root(n: int, m: int, N: int) -> complex:
    """Li_n(exp(2 pi i m/N)) for n >= 2 by regrouping the series by residue mod N.

    Agrees with :func:`polylog` to its tolerance; much faster at small N because no
    long partial sum is formed. Conjugate arguments give conjugate values exactly.
    """
    if n < 2:
        raise DomainError("n must be >= 2")
    if N < 1:
        raise DomainError("N must be positive")
    m %= N
    g = math.gcd(m, N)
    m, N = m // g, N // g
    if 2 * m > N:
        return _polylog_root_cached(n, N - m, N, precision_mode()).conjugate()
    return _polylog_root_cached(n, m, N, precision_mode())


def hurwitz_zeta(s: int, q: float, terms: int = 12, order: int = 10) -> float:
    """Hurwitz zeta(s, q) for integer s >= 2 and q > 0 by Euler-Maclaurin."""
    from .numtheory import bernoulli_numbers

    if s < 2:
        raise DomainError("s must be >= 2")
    if q <= 0:
        raise DomainError("q must be positive")
    if precision_mode() == "extended":
        import mpmath

        with mpmath.workdps(EXTENDED_DPS):
            return float(mpmath.zeta(s, q))
    B = bernoulli_numbers(2 * order)
    M = terms
    head = math.fsum((k + q) ** -s for k in range(M))
    x = M + q
    tail = x ** (1 - s) / (s - 1) + x ** -s / 2
    rising = float(s)  # s (s+1) ... (s+2j-2)
    corr = []
    for j in range(1, order + 1):
        corr.append(float(B[2 * j]) / math.factorial(2 * j) * rising * x ** (-s - 2 * j + 1))
        rising *= (s + 2 * j - 1) * (s + 2 * j)
    return math.fsum([head, tail] + corr)


def zeta(n: int) -> float:
    """Riemann zeta at an integer n >= 2 (Euler-Maclaurin, error far below 1e-13)."""
    if n < 2:
        raise DomainError("n must be >= 2")
    if precision_mode() == "extended":
        import mpmath

        with mpmath.workdps(EXTENDED_DPS):
            return float(mpmath.zeta(n))
    return hurwitz_zeta(n, 1.0)


def index_set_A(N: int) -> list[int]:
    return [a for a in range(1, N // 2 + 1) if math.gcd(a, N) == 1]


def pi_n(z: complex, n: int) -> float:
    """Projection C -> R(n-1) as a real number: Im for n even, Re for n odd."""
    return z.imag if n % 2 == 0 else z.real


def _check_coprime(N: int, *vals: int) -> None:
    for v in vals:
        if math.gcd(v, N) != 1:
            raise NotCoprime(f"gcd({v}, {N}) != 1")


@dataclass(frozen=True)
class RegulatorValue:
    n: int
    N: int
    b: int
    a: int
    raw: complex  # value on the constructed cycle
    normalized: complex  # Li_n(zeta^(ab)) on the normalized class

    def doubled(self) -> complex:
        return 2 * self.raw


def regulator_closed_form(n: int, N: int, b: int, a: int = 1) -> RegulatorValue:
    _check_coprime(N, a, b)
    li = polylog_root(n, a * b, N)
    return RegulatorValue(n, N, b % N, a % N, (-1) ** n * N ** (n - 1) * li, li)


# -- the integral ------------------------------------------------------------------------

@dataclass(frozen=True)
class IntegralJob:
    n: int
    N: int
    b: int
    a: int = 1
    method: str = "tensor_gauss"
    order: int = 64
    samples: int = 1_000_000
    seed: int = 42

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        _check_coprime(self.N, self.a, self.b)
        if self.method not in ("tensor_gauss", "monte_carlo"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.method == "tensor_gauss" and self.n > 6:
            raise UnsupportedDimension("tensor_gauss supports n <= 6")
        if self.order < 1 or self.samples < 2:
            raise ValueError("order and samples must be positive")


@dataclass(frozen=True)
class IntegralResult:
    value: complex
    error: float  # a-posteriori estimate (tensor) or standard error (MC)
    method: str
    evaluations: int


def _integrand(w: complex, prod: np.ndarray) -> np.ndarray:
    """log(1 - w p)/p, continued by -w at p = 0."""
    out = np.empty(prod.shape, dtype=np.complex128)
    small = prod < 1e-300
    p = prod[~small]
    out[~small] = np.log1p(-w * p) / p
    out[small] = -w
    return out


def _tensor(w: complex, dim: int, order: int) -> complex:
    x, wt = np.polynomial.legendre.leggauss(order)
    x = (x + 1) / 2
    wt = wt / 2
    # accumulate over the leading axis so memory stays at order^(dim-1)
    if dim == 1:
        return complex(np.dot(wt, _integrand(w, x)))
    grids = np.meshgrid(*([x] * (dim - 1)), indexing="ij")
    wgrids = np.meshgrid(*([wt] * (dim - 1)), indexing="ij")
    rest_p = np.ones_like(grids[0])
    rest_w = np.ones_like(grids[0])
    for g, gw in zip(grids, wgrids):
        rest_p = rest_p * g
        rest_w = rest_w * gw
    rest_p, rest_w = rest_p.ravel(), rest_w.ravel()
    partial = np.empty(order, dtype=np.complex128)
    for i in range(order):
        partial[i] = np.dot(rest_w, _integrand(w, x[i] * rest_p))
    return complex(np.dot(wt, partial))


def _monte_carlo(w: complex, dim: int, samples: int, seed: int) -> tuple[complex, float]:
    rng = np.random.default_rng(seed)
    sum_re = sum_im = 0.0
    sq_re = sq_im = 0.0
    done = 0
    while done < samples:
        m = min(_CHUNK, samples - done)
        prod = rng.random((m, dim)).prod(axis=1)
        vals = _integrand(w, prod)
        sum_re += float(vals.real.sum())
        sum_im += float(vals.imag.sum())
        sq_re += float((vals.real ** 2).sum())
        sq_im += float((vals.imag ** 2).sum())
        done += m
    mean = complex(sum_re, sum_im) / samples
    var = (sq_re / samples - mean.real ** 2) + (sq_im / samples - mean.imag ** 2)
    return mean, math.sqrt(max(var, 0.0) / (samples - 1))


def regulator_integral(job: IntegralJob) -> IntegralResult:
    """(-N)^(n-1) times the integral of log(1 - zeta^(ab) t_1...t_(n-1)) dt/t over the unit cube."""
    w = complex(root_of_unity(job.a * job.b, job.N))
    dim = job.n - 1
    scale = (-job.N) ** dim
    if job.method == "tensor_gauss":
        val = _tensor(w, dim, job.order)
        coarse = _tensor(w, dim, max(job.order // 2, 1))
        return IntegralResult(scale * val, abs(scale) * abs(val - coarse), job.method, job.order ** dim)
    mean, se = _monte_carlo(w, dim, job.samples, job.seed)
    return IntegralResult(scale * mean, abs(scale) * se, job.method, job.samples)


# -- good position -------------------------------------------------------------------------

@dataclass
class MalteseReport:
    a: int
    b: int
    N: int
    terms: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(all(v for k, v in t.items() if isinstance(v, bool)) for t in self.terms)

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "N": self.N, "passed": self.passed, "terms": self.terms}


def _z_segment_avoids_negative_axis(ab: int, N: int) -> bool:
    """Exact check that 1 - zeta^(ab) s, s in [0,1], misses the negative real axis."""
    r = ab % N
    if r == 0:
        return False  # zeta^(ab) = 1: segment reaches 0
    if (2 * r) % N != 0:
        return True  # non-real root: the segment is real only at s = 0, where it equals 1
    return True  # zeta^(ab) = -1: segment is [1, 2]


def _find_b(term: ParamCycle) -> int:
    from .constructions import infer_xi

    xi = infer_xi(term)
    N = term.N
    for k in range(N):
        if CycloElem.root(N, k) == xi:
            return k
    raise ValueError("xi is not a power of w")


def maltese_check(s: CycleSum, a: int = 1) -> MalteseReport:
    from .constructions import support_check

    terms = list(s)
    N = terms[0].N
    b = _find_b(terms[0])
    _check_coprime(N, a, b)
    rep = MalteseReport(a % N, b, N)
    ab_ok = (a * b) % N != 0
    xi = CycloElem.root(N, b)  # from Z, so a W-term built with another xi fails
    for t in terms:
        if t.label.startswith("W"):
            i = 1 if t.label.startswith("W1") else 2
            rep.terms.append({"term": t.label, "support_identity": support_check(t, i, xi),
                              "constant_ray": ab_ok})
        else:
            rep.terms.append({"term": t.label or "Z", "segment_check": _z_segment_avoids_negative_axis(a * b, N),
                              "case": _segment_case(a * b, N)})
    return rep


def _segment_case(ab: int, N: int) -> str:
    r = ab % N
    if r == 0:
        return "zeta^(ab) = 1"
    return "zeta^(ab) = -1" if (2 * r) % N == 0 else "zeta^(ab) non-real"


def corollary1_vector(n: int, N: int, b: int) -> list[float]:
    """(pi_n Li_n(zeta^(ab)))_(a in A)."""
    if N < 3:
        raise ValueError("N >= 3 required; N = 2 is the scalar zeta(n) case")
    _check_coprime(N, b)
    return [pi_n(polylog_root(n, a * b, N), n) for a in index_set_A(N)]
