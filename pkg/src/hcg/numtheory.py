"""Bernoulli/torsion arithmetic and the Dirichlet-character apparatus."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .cyclo import CycloElem, NotCoprime, euler_phi, root_of_unity

__all__ = [
    "ParityViolation",
    "InvalidSubgroup",
    "bernoulli_numbers",
    "bernoulli_poly",
    "TorsionWeight",
    "TorsionResult",
    "torsion_tau",
    "torsion_tau_N2",
    "PRINTED_TORSION_VALUES",
    "factorize",
    "mobius",
    "unit_group",
    "DirichletChar",
    "characters",
    "conductor",
    "gauss_sum",
    "dirichlet_L",
    "zagier_v1",
    "character_combo",
    "RankReport",
    "rank_check",
    "subfield_rank",
    "numerical_rank",
]


class ParityViolation(ValueError):
    pass


class InvalidSubgroup(ValueError):
    pass


# -- Bernoulli ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _bernoulli_tuple(upto: int) -> tuple[Fraction, ...]:
    B = [Fraction(1)]
    for m in range(1, upto + 1):
        # sum_{j=0}^{m} C(m+1, j) B_j = 0
        s = sum(math.comb(m + 1, j) * B[j] for j in range(m))
        B.append(-s / (m + 1))
    return tuple(B)


def bernoulli_numbers(upto: int) -> list[Fraction]:
    """B_0..B_upto with B_1 = -1/2."""
    if upto < 0:
        raise ValueError("upto must be >= 0")
    return list(_bernoulli_tuple(upto))


def bernoulli_poly(n: int, x) -> Fraction:
    x = Fraction(x)
    B = _bernoulli_tuple(n)
    return sum((math.comb(n, j) * B[j] * x ** (n - j) for j in range(n + 1)), Fraction(0))


# -- torsion -------------------------------------------------------------------------------

def _epsilon(n: int) -> int:
    return 1 if n == 2 else 2 if n == 3 else n - 3


@dataclass(frozen=True)
class TorsionWeight:
    N: int
    values: dict

    def __post_init__(self):
        vals = {}
        for r, v in self.values.items():
            r = int(r) % self.N
            if v == 0:
                continue
            if math.gcd(r, self.N) != 1:
                raise NotCoprime(f"f must vanish off the units; f({r}) = {v}")
            vals[r] = vals.get(r, 0) + int(v)
        object.__setattr__(self, "values", {r: v for r, v in sorted(vals.items()) if v})

    def __call__(self, r: int) -> int:
        return self.values.get(r % self.N, 0)

    def parity_ok(self, n: int) -> bool:
        return all(self(-r) == (-1) ** n * v for r, v in self.values.items()) and \
            all(self(r) == (-1) ** n * self(-r) for r in range(self.N))

    @classmethod
    def parse(cls, N: int, text: str) -> "TorsionWeight":
        """From ``"b:val,b:val"``; unlisted residues are 0."""
        vals: dict = {}
        for item in filter(None, (x.strip() for x in text.split(","))):
            r, _, v = item.partition(":")
            if not _:
                raise ValueError(f"bad weight entry {item!r}")
            vals[int(r) % N] = vals.get(int(r) % N, 0) + int(v)
        return cls(N, vals)


@dataclass(frozen=True)
class TorsionResult:
    signed: Fraction
    C: int  # lowest-terms denominator

    @property
    def absolute(self) -> Fraction:
        return abs(self.signed)


def torsion_sum(n: int, N: int, f: TorsionWeight) -> Fraction:
    return sum((v * bernoulli_poly(n, Fraction(r, N)) for r, v in f.values.items()), Fraction(0))


def torsion_tau(n: int, N: int, f: TorsionWeight, check_parity: bool = True) -> TorsionResult:
    """eps_n N^(n-1)/(2 n!) * sum_b f(b) B_n(b/N), exactly."""
    if N < 2:
        raise ValueError("N must be >= 2")
    if f.N != N:
        raise ValueError("weight modulus differs from N")
    if check_parity and not f.parity_ok(n):
        raise ParityViolation(f"f(-b) != (-1)^{n} f(b)")
    val = Fraction(_epsilon(n) * N ** (n - 1), 2 * math.factorial(n)) * torsion_sum(n, N, f)
    return TorsionResult(val, val.denominator)


def torsion_tau_N2(m: int) -> Fraction:
    """Closed form at N = 2, n = 2m, f = delta_1, with eps read from the general rule.

    Signed the same way as torsion_tau, which needs the leading minus:
    B_(2m)(1/2) = (2^(1-2m) - 1) B_(2m).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    n = 2 * m
    B = _bernoulli_tuple(n)[n]
    return -Fraction(_epsilon(n) * (2 ** (n - 1) - 1), 2 * math.factorial(n)) * B


# values as printed, for reports; the m = 4 entry and the N = 5 example differ from the formula
PRINTED_TORSION_VALUES = {
    ("N2", 1): Fraction(1, 24),
    ("N2", 2): Fraction(7, 1440),
    ("N2", 3): Fraction(31, 20160),
    ("N2", 4): Fraction(635, 483840),
    ("N5", 2): Fraction(1, 120),
}


# -- elementary arithmetic --------------------------------------------------------------------

def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mobius(d: int) -> int:
    if d < 1:
        raise ValueError("d must be positive")
    f = factorize(d)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _primitive_root(pk: int, p: int) -> int:
    phi = euler_phi(pk)
    primes = factorize(phi)
    for g in range(2, pk):
        if math.gcd(g, pk) == 1 and all(pow(g, phi // q, pk) != 1 for q in primes):
            return g
    raise ArithmeticError(f"no primitive root mod {pk}")


def _crt_lift(residue: int, mod: int, N: int) -> int:
    """The unit x mod N with x = residue mod `mod` and x = 1 mod N/mod."""
    other = N // mod
    if other == 1:
        return residue % N
    # x = residue + mod*k = 1 (mod other)
    k = ((1 - residue) * pow(mod, -1, other)) % other
    return (residue + mod * k) % N


@lru_cache(maxsize=None)
def unit_group(N: int) -> tuple[tuple[int, int], ...]:
    """Generators of (Z/N)^* with their orders, one cyclic factor per generator.

    2-part: -1 and 5 for 2^k with k >= 3, -1 for 4; odd p^k: a primitive root.
    """
    if N < 1:
        raise ValueError("N must be positive")
    gens = []
    for p, k in sorted(factorize(N).items()):
        pk = p ** k
        if p == 2:
            if k == 2:
                gens.append((_crt_lift(pk - 1, pk, N), 2))
            elif k >= 3:
                gens.append((_crt_lift(pk - 1, pk, N), 2))
                gens.append((_crt_lift(5, pk, N), 2 ** (k - 2)))
        else:
            gens.append((_crt_lift(_primitive_root(pk, p), pk, N), euler_phi(pk)))
    return tuple(gens)


@lru_cache(maxsize=None)
def _discrete_logs(N: int) -> dict[int, tuple[int, ...]]:
    gens = unit_group(N)
    table = {}
    for exps in product(*[range(o) for _, o in gens]):
        x = 1
        for (g, _), e in zip(gens, exps):
            x = x * pow(g, e, N) % N
        table[x % N] = exps
    if N == 1:
        table = {0: ()}
    return table


# -- characters -----------------------------------------------------------------------------

@dataclass(frozen=True)
class DirichletChar:
    """chi(g_k) = exp(2 pi i e_k / ord_k) on the fixed generators of (Z/N)^*."""

    N: int
    exps: tuple[int, ...]

    def __post_init__(self):
        gens = unit_group(self.N)
        if len(self.exps) != len(gens):
            raise ValueError("exponent count differs from generator count")
        object.__setattr__(self, "exps", tuple(e % o for e, (_, o) in zip(self.exps, gens)))

    @property
    def order(self) -> int:
        o = 1
        for e, (_, go) in zip(self.exps, unit_group(self.N)):
            o = o * (go // math.gcd(e, go)) // math.gcd(o, go // math.gcd(e, go))
        return o

    def phase(self, x: int) -> Fraction | None:
        """chi(x) = exp(2 pi i * phase), or None when gcd(x, N) != 1."""
        x %= self.N
        if self.N == 1:
            return Fraction(0)
        logs = _discrete_logs(self.N).get(x)
        if logs is None:
            return None
        ph = sum((Fraction(e * l, o) for e, l, (_, o) in zip(self.exps, logs, unit_group(self.N))),
                 Fraction(0))
        return ph - math.floor(ph)

    def __call__(self, x: int) -> complex:
        ph = self.phase(x)
        if ph is None:
            return 0j
        return complex(root_of_unity(ph.numerator, ph.denominator))

    def exact(self, x: int, level: int | None = None) -> CycloElem:
        """chi(x) as an element of Q(zeta_level); level defaults to the order."""
        L = level or max(self.order, 2)
        ph = self.phase(x)
        if ph is None:
            return CycloElem.zero(L)
        if (ph * L).denominator != 1:
            raise ValueError("level does not contain the character values")
        return CycloElem.root(L, int(ph * L))

    def conj(self) -> "DirichletChar":
        return DirichletChar(self.N, tuple(-e for e in self.exps))

    def parity(self) -> int:
        return 1 if self.phase(-1) == 0 else -1

    def is_principal(self) -> bool:
        return all(e == 0 for e in self.exps)

    def label(self) -> str:
        return f"chi_{self.N}[{','.join(map(str, self.exps))}]"


def characters(N: int, parity: int | None = None) -> list[DirichletChar]:
    gens = unit_group(N)
    out = [DirichletChar(N, e) for e in product(*[range(o) for _, o in gens])]
    if parity is not None:
        out = [c for c in out if c.parity() == parity]
    return out


def _factors_through(chi: DirichletChar, d: int) -> bool:
    """chi is trivial on units x = 1 mod d."""
    N = chi.N
    return all(chi.phase(x) == 0 for x in range(1, N) if math.gcd(x, N) == 1 and (x - 1) % d == 0)


def conductor(chi: DirichletChar) -> tuple[int, DirichletChar]:
    """(N0, chi0): the least modulus chi factors through and the primitive inducer."""
    N = chi.N
    for d in _divisors(N):
        if _factors_through(chi, d):
            return d, _restrict(chi, d)
    raise AssertionError("unreachable: chi factors through N")


def _restrict(chi: DirichletChar, d: int) -> DirichletChar:
    if d == chi.N:
        return chi
    gens = unit_group(d)
    if d == 1:
        return DirichletChar(1, ())
    exps = []
    for g, o in gens:
        # lift g to a unit mod N; chi is constant on the fibre
        lift = next(x for x in range(g, chi.N, d) if math.gcd(x, chi.N) == 1)
        ph = chi.phase(lift)
        exps.append(int(ph * o) % o)
    res = DirichletChar(d, tuple(exps))
    if any(res.phase(x) != chi.phase(x) for x in range(chi.N) if math.gcd(x, chi.N) == 1):
        raise AssertionError("restriction does not agree with chi")
    return res


def gauss_sum(chi: DirichletChar) -> complex:
    N0 = chi.N
    if N0 == 1:
        return 1 + 0j
    return complex(math.fsum((chi(x) * root_of_unity(x, N0)).real for x in range(N0)),
                   math.fsum((chi(x) * root_of_unity(x, N0)).imag for x in range(N0)))


def dirichlet_L(chi: DirichletChar, n: int) -> complex:
    """L(chi, n) = N^-n sum_r chi(r) zeta(n, r/N)."""
    from .regulator import hurwitz_zeta

    N = chi.N
    re, im = [], []
    for r in range(1, N + 1):
        c = chi(r)
        if c == 0:
            continue
        h = hurwitz_zeta(n, r / N)
        re.append(c.real * h)
        im.append(c.imag * h)
    s = N ** -float(n)
    return complex(math.fsum(re) * s, math.fsum(im) * s)


def _require_parity(chi: DirichletChar, n: int) -> None:
    if chi.parity() != (-1) ** (n - 1):
        raise ParityViolation(f"chi(-1) must be (-1)^{n - 1}")


@dataclass(frozen=True)
class ZagierValue:
    mobius_form: complex
    euler_form: complex
    bracket_mobius: complex
    bracket_euler: complex
    N0: int
    M: int


def zagier_v1(chi: DirichletChar, n: int) -> ZagierValue:
    """v_1^chi = (1/(2 M^(n-1))) * bracket * tau(chi0) L(conj chi0, n), two ways."""
    _require_parity(chi, n)
    N = chi.N
    N0, chi0 = conductor(chi)
    M = N // N0
    base = gauss_sum(chi0) * dirichlet_L(chi0.conj(), n) / (2 * M ** (n - 1))
    br_m = sum((mobius(d) * chi0(d) * d ** (n - 1) for d in _divisors(M)), 0j)
    br_e = 1 + 0j
    for p in factorize(M):
        br_e *= 1 - chi0(p) * p ** (n - 1)
    return ZagierValue(br_m * base, br_e * base, br_m, br_e, N0, M)


@dataclass(frozen=True)
class CharacterCombo:
    A: list
    a_sum: list  # sum_{b in A} chi(b) v^(b)
    half_sum: list  # (1/2) sum_{b=1}^{N} chi(b) pi_n Li_n(...)


def character_combo(chi: DirichletChar, n: int) -> CharacterCombo:
    """v^chi indexed by a in A.

    pi_n keeps the imaginary part as i*Im for n even, so that v^chi(a) is a genuine
    complex combination of the projected polylog values.
    """
    from .regulator import index_set_A, polylog_root

    _require_parity(chi, n)
    N = chi.N
    A = index_set_A(N)

    def proj(z: complex) -> complex:
        return 1j * z.imag if n % 2 == 0 else complex(z.real)

    vals = {}
    for a in A:
        for b in range(1, N + 1):
            if math.gcd(b, N) == 1:
                vals[a, b] = proj(polylog_root(n, a * b, N))
    a_sum = [sum((chi(b) * vals[a, b] for b in A), 0j) for a in A]
    half = [0.5 * sum((chi(b) * vals[a, b] for b in range(1, N + 1) if math.gcd(b, N) == 1), 0j) for a in A]
    return CharacterCombo(A, a_sum, half)


# -- ranks ---------------------------------------------------------------------------------

def numerical_rank(rows: list[list[float]], threshold: float = 1e-8) -> tuple[int, list[float]]:
    """Rank by Gaussian elimination with partial pivoting and a relative pivot threshold.

    Returns the rank and the pivot magnitudes in elimination order.
    """
    import numpy as np

    A = np.array(rows, dtype=np.float64)
    if A.size == 0:
        return 0, []
    scale = float(np.max(np.abs(A)))
    if scale == 0.0:
        return 0, []
    m, ncols = A.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= m:
            break
        i = r + int(np.argmax(np.abs(A[r:, c])))
        piv = abs(A[i, c])
        if piv <= threshold * scale:
            continue
        A[[r, i]] = A[[i, r]]
        A[r + 1:] -= np.outer(A[r + 1:, c] / A[r, c], A[r])
        pivots.append(piv / scale)
        r += 1
    return r, pivots


@dataclass
class RankReport:
    n: int
    N: int
    rank: int
    expected: int
    pivots: list[float]
    threshold: float
    eigen_residuals: dict = field(default_factory=dict)

    @property
    def smallest_pivot(self) -> float:
        return min(self.pivots) if self.pivots else 0.0

    @property
    def max_residual(self) -> float:
        return max(self.eigen_residuals.values(), default=0.0)

    def to_json(self) -> dict:
        return {"n": self.n, "N": self.N, "rank": self.rank, "expected": self.expected,
                "threshold": self.threshold, "pivots": [f"{p:.15g}" for p in self.pivots],
                "smallest_pivot": f"{self.smallest_pivot:.15g}",
                "max_eigen_residual": f"{self.max_residual:.15g}",
                "passed": self.rank == self.expected}


def _fold(x: int, N: int) -> tuple[int, int]:
    """(a', s) with x = s*a' or x = N - a' folded into A; s = 1 for the direct case."""
    x %= N
    return (x, 1) if x <= N // 2 else (N - x, -1)


def rank_check(n: int, N: int, threshold: float = 1e-8) -> RankReport:
    from .regulator import corollary1_vector, index_set_A

    if N < 3:
        raise ValueError("N >= 3 required")
    A = index_set_A(N)
    v = {b: corollary1_vector(n, N, b) for b in A}
    rank, pivots = numerical_rank([v[b] for b in A], threshold)
    rep = RankReport(n, N, rank, euler_phi(N) // 2, pivots, threshold)
    # rho_alpha eigenvectors: v^chi_a with a -> alpha*a folded, sign (-1)^(n-1) on reflection
    refl = (-1) ** (n - 1)
    pos = {a: k for k, a in enumerate(A)}
    for chi in characters(N, (-1) ** (n - 1)):
        vchi = [sum(chi(b) * v[b][k] for b in A) for k in range(len(A))]
        for alpha in range(1, N):
            if math.gcd(alpha, N) != 1:
                continue
            res = 0.0
            for a in A:
                a2, s = _fold(alpha * a, N)
                moved = vchi[pos[a2]] * (1 if s == 1 else refl)
                res = max(res, abs(moved - chi.conj()(alpha) * vchi[pos[a]]))
            rep.eigen_residuals[(chi.label(), alpha)] = res
    return rep


def _subgroup(N: int, gens) -> set[int]:
    H = {1 % N}
    frontier = [1 % N]
    gens = [g % N for g in gens]
    for g in gens:
        if math.gcd(g, N) != 1:
            raise InvalidSubgroup(f"{g} is not a unit mod {N}")
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x * g % N
            if y not in H:
                H.add(y)
                frontier.append(y)
    return H


@dataclass(frozen=True)
class SubfieldRank:
    degree: int
    r1: int
    r2: int
    expected: int
    computed: int
    pivots: tuple


def subfield_rank(n: int, N: int, gens, threshold: float = 1e-8) -> SubfieldRank:
    """Rank of the H-averaged vectors against d_n of the fixed field of H."""
    from .regulator import corollary1_vector, index_set_A

    H = _subgroup(N, gens)
    d = euler_phi(N) // len(H)
    if (N - 1) % N in H:
        r1, r2 = d, 0
    else:
        r1, r2 = 0, d // 2
    expected = r1 + r2 if n % 2 == 1 else r2
    A = index_set_A(N)
    cache: dict = {}

    def vec(b: int) -> list[float]:
        b %= N
        a2, s = _fold(b, N)
        if a2 not in cache:
            cache[a2] = corollary1_vector(n, N, a2)
        # v^(N-b) = conj-type reflection: pi_n picks +/- the same value
        sign = 1 if s == 1 else (-1) ** (n - 1)
        return [sign * x for x in cache[a2]]

    rows = []
    for b in A:
        acc = [0.0] * len(A)
        for c in sorted(H):
            acc = [x + y for x, y in zip(acc, vec(c * b))]
        rows.append(acc)
    computed, piv = numerical_rank(rows, threshold)
    return SubfieldRank(d, r1, r2, expected, computed, tuple(piv))
