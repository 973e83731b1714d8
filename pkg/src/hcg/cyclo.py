"""Exact arithmetic in the cyclotomic field Q(w) = Q[w]/(Phi_N(w)).

Elements are stored in the power basis 1, w, ..., w^(phi(N)-1) with
``fractions.Fraction`` coordinates.  Complex embeddings send w to
exp(2*pi*i*a/N).
"""
from __future__ import annotations

import cmath
import math
import os
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

__all__ = [
    "CycloElem",
    "CycloError",
    "DivisionByZero",
    "LevelMismatch",
    "NotCoprime",
    "ParseError",
    "cyclotomic_poly",
    "euler_phi",
    "field_arith",
    "embed",
    "galois",
    "precision_mode",
]


class CycloError(ValueError):
    pass


class DivisionByZero(CycloError, ZeroDivisionError):
    pass


class LevelMismatch(CycloError):
    pass


class NotCoprime(CycloError):
    pass


class ParseError(CycloError):
    pass


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


# -- dense polynomial helpers (ascending coefficient lists) -----------------

def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    """Division with remainder over Q; ``b`` must be nonzero."""
    a = _trim([Fraction(x) for x in a])
    b = _trim([Fraction(x) for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    r = list(a)
    lead = b[-1]
    for k in range(len(q) - 1, -1, -1):
        c = r[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for j, y in enumerate(b):
                r[k + j] -= c * y
    return _trim(q), _trim(r[: len(b) - 1])


@lru_cache(maxsize=None)
def cyclotomic_poly(N: int) -> tuple[int, ...]:
    """Phi_N as ascending integer coefficients.

    Computed as (x^N - 1) divided exactly by Phi_d for every proper divisor d.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    num: list = [-1] + [0] * (N - 1) + [1]
    for d in range(1, N):
        if N % d == 0:
            num, rem = _poly_divmod(num, cyclotomic_poly(d))
            assert not rem
    coeffs = tuple(int(c) for c in num)
    assert all(Fraction(c) == c for c in num)
    return coeffs


class _Level:
    """Per-level tables: modulus and reductions of w^k for phi <= k < 2*phi."""

    def __init__(self, N: int):
        self.N = N
        self.phi = euler_phi(N)
        self.modulus = cyclotomic_poly(N)
        d = self.phi
        # w^k as a basis vector, for k in [0, 2d - 1)
        table = []
        for k in range(2 * d - 1):
            if k < d:
                v = [Fraction(0)] * d
                v[k] = Fraction(1)
            else:
                prev = table[k - 1]
                # multiply prev by w; w^d = -sum_{j<d} modulus[j] w^j
                top = prev[d - 1]
                v = [Fraction(0)] + prev[: d - 1]
                if top:
                    for j in range(d):
                        v[j] -= top * self.modulus[j]
            table.append(v)
        self.table = table
        # reductions of w^k for k in [0, N)
        self.powers = [self._reduce_dense(([0] * k) + [1]) for k in range(N)]

    def _reduce_dense(self, p: Sequence) -> tuple[Fraction, ...]:
        _, r = _poly_divmod(p, self.modulus)
        r = list(r) + [Fraction(0)] * (self.phi - len(r))
        return tuple(r)

    def reduce_product(self, prod: Sequence) -> tuple[Fraction, ...]:
        d = self.phi
        out = list(prod[:d]) + [Fraction(0)] * max(0, d - len(prod))
        for k in range(d, len(prod)):
            c = prod[k]
            if c:
                row = self.table[k]
                for j in range(d):
                    if row[j]:
                        out[j] += c * row[j]
        return tuple(Fraction(x) for x in out)


@lru_cache(maxsize=None)
def _level(N: int) -> _Level:
    if N < 1:
        raise ValueError("level must be >= 1")
    return _Level(N)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to a rational")


class CycloElem:
    """An element of Q(w), w a primitive N-th root of unity.  Immutable."""

    __slots__ = ("N", "coeffs", "_hash")

    def __init__(self, N: int, coeffs: Iterable):
        lev = _level(N)
        cs = [_as_fraction(c) for c in coeffs]
        if len(cs) > len(lev.table):
            cs = list(lev._reduce_dense(cs))
        elif len(cs) > lev.phi:
            cs = list(lev.reduce_product(cs))
        else:
            cs = cs + [Fraction(0)] * (lev.phi - len(cs))
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("CycloElem is immutable")

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, N: int) -> "CycloElem":
        return cls(N, [])

    @classmethod
    def one(cls, N: int) -> "CycloElem":
        return cls(N, [1])

    @classmethod
    def rational(cls, N: int, q) -> "CycloElem":
        return cls(N, [q])

    @classmethod
    def root(cls, N: int, k: int = 1) -> "CycloElem":
        """w^k, reduced; k may be negative."""
        return cls(N, _level(N).powers[k % N])

    # -- predicates ------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other) -> "CycloElem":
        if isinstance(other, CycloElem):
            if other.N != self.N and not (self.N <= 2 and other.N <= 2):
                raise LevelMismatch(f"levels {self.N} and {other.N}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloElem(self.N, [other])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycloElem(self.N, [x + y for x, y in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloElem(self.N, [-x for x in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycloElem(self.N, [x - y for x, y in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if len(self.coeffs) == 1:
            return CycloElem(self.N, [self.coeffs[0] * o.coeffs[0]])
        if o.is_rational():
            c = o.coeffs[0]
            return CycloElem(self.N, [c * x for x in self.coeffs])
        if self.is_rational():
            c = self.coeffs[0]
            return CycloElem(self.N, [c * x for x in o.coeffs])
        lev = _level(self.N)
        return CycloElem(self.N, lev.reduce_product(_poly_mul(self.coeffs, o.coeffs)))

    __rmul__ = __mul__

    def inverse(self) -> "CycloElem":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        if self.is_rational():
            return CycloElem(self.N, [1 / self.coeffs[0]])
        lev = _level(self.N)
        # extended Euclid: find s with s*x = 1 mod Phi_N
        r0, r1 = [Fraction(c) for c in lev.modulus], _trim(list(self.coeffs))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            qs = _poly_mul(q, s1)
            n = max(len(s0), len(qs))
            s_next = _trim([(s0[i] if i < len(s0) else 0) - (qs[i] if i < len(qs) else 0)
                            for i in range(n)])
            r0, r1, s0, s1 = r1, r, s1, s_next
        if not r1:
            raise DivisionByZero("element is not invertible")  # unreachable in a field
        c = r1[0]
        return CycloElem(self.N, [x / c for x in s1])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = CycloElem.one(self.N)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, CycloElem):
            return self.N == other.N and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            if self.is_rational():
                h = hash(self.coeffs[0])
            else:
                h = hash((self.N, self.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"CycloElem({self.N}, {format_elem(self)!r})"

    def __str__(self):
        return format_elem(self)

    # -- maps ------------------------------------------------------------
    def galois(self, c: int) -> "CycloElem":
        return galois(self, c)

    def embed(self, a: int = 1):
        return embed(self, a)


def field_arith(a: CycloElem, b: CycloElem, op: str) -> CycloElem:
    if a.N != b.N:
        raise LevelMismatch(f"levels {a.N} and {b.N}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b.is_zero():
            raise DivisionByZero("division by zero in Q(w)")
        return a / b
    raise ValueError(f"unknown op {op!r}")


# -- precision switch ---------------------------------------------------------

def precision_mode() -> str:
    """``f64`` (default) or ``extended``, from ``HCG_PRECISION``."""
    mode = os.environ.get("HCG_PRECISION", "f64").strip().lower()
    if mode not in ("f64", "extended"):
        raise ValueError(f"HCG_PRECISION must be f64 or extended, got {mode!r}")
    return mode


EXTENDED_DPS = 40


def root_of_unity(num: int, den: int):
    """exp(2*pi*i*num/den) at the configured precision."""
    num %= den
    if precision_mode() == "extended":
        import mpmath

        with mpmath.workdps(EXTENDED_DPS):
            return mpmath.expjpi(mpmath.mpf(2 * num) / den)
    # exact values on the axes keep symmetry identities exact
    if 4 * num % den == 0:
        return (1, 1j, -1, -1j)[4 * num // den]
    return cmath.exp(2j * math.pi * num / den)


def embed(x: CycloElem, a: int = 1):
    """Evaluate x at w = exp(2*pi*i*a/N)."""
    N = x.N
    if math.gcd(a, N) != 1:
        raise NotCoprime(f"gcd({a}, {N}) != 1")
    total = 0
    for k, c in enumerate(x.coeffs):
        if c:
            z = root_of_unity(a * k, N)
            if precision_mode() == "extended":
                import mpmath

                with mpmath.workdps(EXTENDED_DPS):
                    total = total + mpmath.mpf(c.numerator) / c.denominator * z
            else:
                total += float(c) * z if k else float(c)
    return complex(total) if precision_mode() == "f64" else total


def galois(x: CycloElem, c: int) -> CycloElem:
    """Apply the automorphism w -> w^c."""
    N = x.N
    if math.gcd(c, N) != 1:
        raise NotCoprime(f"gcd({c}, {N}) != 1")
    lev = _level(N)
    out = [Fraction(0)] * lev.phi
    for k, coef in enumerate(x.coeffs):
        if coef:
            for j, v in enumerate(lev.powers[(c * k) % N]):
                if v:
                    out[j] += coef * v
    return CycloElem(N, out)


# -- textual form -------------------------------------------------------------

def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_elem(x: CycloElem) -> str:
    """Canonical text: ascending powers of ``w``, e.g. ``1 - 2/3*w^2``."""
    parts: list[str] = []
    for k, c in enumerate(x.coeffs):
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = _fmt_rational(mag)
        else:
            wpart = "w" if k == 1 else f"w^{k}"
            body = wpart if mag == 1 else f"{_fmt_rational(mag)}*{wpart}"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<num>\d+)(?:/(?P<den>\d+))?)?
        \s*(?P<star>\*)?\s*
        (?P<w>w(?:\^(?P<exp>-?\d+))?)?\s*""",
    re.VERBOSE,
)


def parse_elem(text: str, N: int) -> CycloElem:
    """Parse the textual form produced by :func:`format_elem`."""
    s = text.strip()
    if not s:
        raise ParseError("empty element")
    total = CycloElem.zero(N)
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse {text!r} at offset {pos}")
        sign, num, den, star, w, exp = m.group("sign", "num", "den", "star", "w", "exp")
        if sign is None and not first:
            raise ParseError(f"missing operator in {text!r}")
        if num is None and w is None:
            raise ParseError(f"empty term in {text!r}")
        if star and (num is None or w is None):
            raise ParseError(f"dangling '*' in {text!r}")
        if num is not None and w is not None and not star:
            raise ParseError(f"missing '*' in {text!r}")
        coef = Fraction(int(num), int(den) if den else 1) if num is not None else Fraction(1)
        if sign == "-":
            coef = -coef
        k = 0 if w is None else (1 if exp is None else int(exp))
        total = total + CycloElem.root(N, k) * coef
        pos = m.end()
        first = False
    return total
