"""Builders for the explicit closed cycles Z~ = Z + W1 + W2 for every n, N, b."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

from .cyclo import CycloElem, NotCoprime, galois
from .symcycle import (EQUAL, CoordFn, CycleSum, Monomial, ParamCycle, cycles_equal, expand_ratio, face,
                       normalize, sum_is_zero)

__all__ = [
    "CycleSpec",
    "VariantMismatch",
    "VARIANTS",
    "epsilon_n",
    "xi_norm",
    "build_Z",
    "build_W1",
    "build_W2",
    "build_W2_terms",
    "assemble_tildeZ",
    "support_check",
    "galois_conjugate",
    "integrality_scale",
    "general_pieces",
    "face_cancellation",
    "compare_constructions",
    "support_report",
    "literal_product_check",
    "infer_xi",
]

VARIANTS = ("auto", "k3", "k5", "k7_first", "k7_second", "k9_appendix", "general")


class VariantMismatch(ValueError):
    pass


def epsilon_n(n: int) -> int:
    if n == 2:
        return 1
    if n == 3:
        return 2
    return n - 3


def xi_norm(n: int, N: int) -> Fraction:
    """Scale taking the constructed cycle to the normalized class."""
    return Fraction((-1) ** n, N ** (n - 1))


@dataclass(frozen=True)
class CycleSpec:
    n: int
    N: int
    b: int = 1
    variant: str = "auto"

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.N < 2:
            raise ValueError("N must be >= 2")
        if math.gcd(self.b, self.N) != 1:
            raise NotCoprime(f"b={self.b} is not coprime to N={self.N}")
        object.__setattr__(self, "b", self.b % self.N)
        if self.variant not in VARIANTS:
            raise VariantMismatch(f"unknown variant {self.variant!r}")
        v = self.resolved_variant
        need = {"k3": 2, "k5": 3, "k7_first": 4, "k7_second": 4, "k9_appendix": 5}
        if v in need and self.n != need[v]:
            raise VariantMismatch(f"variant {v} requires n={need[v]}")
        if v == "general" and self.n < 4:
            raise VariantMismatch("general variant requires n >= 4")

    @property
    def resolved_variant(self) -> str:
        if self.variant != "auto":
            return self.variant
        return {2: "k3", 3: "k5"}.get(self.n, "general")


class _Kit:
    """Coordinate-function vocabulary at level N with xi = w^b."""

    def __init__(self, N: int, b: int, xi: CycloElem | None = None):
        self.N = N
        self.one = CycloElem.one(N)
        self.xi = xi if xi is not None else CycloElem.root(N, b)

    def m(self, **exps) -> Monomial:
        return Monomial(exps)

    def mono(self, **exps) -> CoordFn:
        return CoordFn(self.one, Monomial(exps))

    def const(self, c) -> CoordFn:
        return CoordFn(c if isinstance(c, CycloElem) else CycloElem.rational(self.N, c))

    def binom(self, m1: Monomial, m2: Monomial, c: CycloElem | None = None) -> CoordFn:
        """m1 - c*m2."""
        return CoordFn.binomial(self.one, m1, c if c is not None else self.one, m2)

    def frac(self, t: str) -> CoordFn:
        """t/(t-1)."""
        return self.mono(**{t: 1}) / self.binom(Monomial.var(t), Monomial())

    def f(self, ts: Sequence[str]) -> CoordFn:
        """1 - xi * prod(ts)."""
        return self.binom(Monomial(), Monomial({t: 1 for t in ts}), self.xi)

    def tN(self, ts: Sequence[str], k: int = 1) -> Monomial:
        return Monomial({t: k * self.N for t in ts})


def _ts(k: int) -> list[str]:
    return [f"t{i}" for i in range(1, k + 1)]


def _cycle(params, coords, coeff=1, label="") -> ParamCycle:
    return ParamCycle(tuple(params), tuple(coords), Fraction(coeff), label)


def _kit(spec: CycleSpec, xi=None) -> _Kit:
    return _Kit(spec.N, spec.b, xi)


# -- Z ----------------------------------------------------------------------------------

def build_Z(spec: CycleSpec, xi=None) -> ParamCycle:
    K = _kit(spec, xi)
    ts = _ts(spec.n - 1)
    coords = [K.frac(t) for t in ts] + [K.f(ts)] + [K.mono(**{t: spec.N}) for t in ts]
    return _cycle(ts, coords, 1, "Z")


# -- W1 -----------------------------------------------------------------------------------

def _w1_k5(K: _Kit) -> CycleSum:
    a = K.tN(["t1"])
    u = K.m(u=1)
    third = K.binom(u, a) * K.binom(u, K.tN(["t1"], -1)) / K.binom(u, Monomial()) ** 2
    coords = [K.frac("t1"), K.f(["t1"]).inverse(), third,
              CoordFn(K.one, a * u), CoordFn(K.one, u / a)]
    return CycleSum([_cycle(["t1", "u"], coords, Fraction(1, 2), "W1")])


def _w1_tilde(K: _Kit, n: int, tail: str = "second") -> ParamCycle:
    """The general-n W1 tuple (without its scalar); ``tail`` selects the n=4 first-variant tails."""
    ts = _ts(n - 2)
    u = K.m(u=1)
    big = CoordFn(K.one)
    for t in ts:
        big = big * K.binom(u, K.tN([t]))
    big = big / (K.binom(u, K.tN(ts)) * K.binom(u, Monomial()) ** (n - 3))
    head = [K.frac(t) for t in ts] + [K.f(ts).inverse(), big]
    if tail == "second":
        rest = [CoordFn(K.one, K.tN([t]) / u) for t in ts] + [CoordFn(K.one, u / K.tN(ts))]
    else:  # first K7 variant, W1^(1); tails ordered u/t_(n-2)^N, ..., u/t_1^N so the u=t^N face matches Z
        rest = [CoordFn(K.one, u / K.tN([t])) for t in reversed(ts)] + [CoordFn(K.one, Monomial({"u": -1}))]
    return _cycle(ts + ["u"], head + rest)


# W1 = (1/(n-3)) * tuple for every n: the pole of order n-3 at u = 1 already gives
# (n-3) * Y0, which cancels dZ = (-1)^(n-1) Y0 with no extra (-1)^(n-1) prefactor.
GENERAL_W1_SIGN = 1


def build_W1(spec: CycleSpec, xi=None) -> CycleSum:
    v = spec.resolved_variant
    K = _kit(spec, xi)
    n = spec.n
    if v == "k3":
        raise VariantMismatch("n=2 has no W1 term")
    if v == "k5":
        return _w1_k5(K)
    if v == "k7_first":
        w11 = _w1_tilde(K, 4, tail="first").with_coeff(Fraction(1, 2)).with_label("W1^(1)")
        w12 = _w1_tilde(K, 4, tail="second").with_coeff(Fraction(1, 2)).with_label("W1^(2)")
        return CycleSum([w11, w12])
    if v == "k7_second":
        return CycleSum([_w1_tilde(K, 4).with_coeff(1).with_label("W1")])
    if v == "k9_appendix":
        return CycleSum([_w1_k9(K)])
    coeff = Fraction(GENERAL_W1_SIGN, n - 3)
    return CycleSum([_w1_tilde(K, n).with_coeff(coeff).with_label("W1")])


def _w1_k9(K: _Kit) -> ParamCycle:
    t1, t2, t3 = "t1", "t2", "t3"
    u = K.m(u=1)
    big = (K.binom(u, K.tN([t1])) * K.binom(u, K.tN([t2])) * K.binom(u, K.tN([t3]))
           / (K.binom(u, Monomial()) ** 2 * K.binom(u, K.tN([t1, t2, t3]))))
    coords = [K.frac(t1), K.frac(t2), K.frac(t3), K.f([t1, t2, t3]).inverse(), big,
              CoordFn(K.one, K.tN([t1]) / u), CoordFn(K.one, K.tN([t2]) / u),
              CoordFn(K.one, K.tN([t3]) / u), CoordFn(K.one, u / K.tN([t1, t2, t3]))]
    return _cycle([t1, t2, t3, "u"], coords, Fraction(1, 2), "W1")


# -- W2 ------------------------------------------------------------------------------------

def _w2_general_term(K: _Kit, n: int, i: int) -> ParamCycle:
    """W2^(i) for 1 <= i <= n-1 (no scalar)."""
    ts = _ts(n - 3)
    u, v = K.m(u=1), K.m(v=1)
    big = CoordFn(K.one)
    for t in ts:
        big = big * K.binom(u, K.tN([t]) * v)
    head = [K.frac(t) for t in ts] + [K.f(ts).inverse()]
    if i <= n - 2:
        big = big / (K.binom(u, K.tN(ts) * v) * K.binom(u, v) ** (n - 4))
        block = [CoordFn(K.one, v * K.tN([t]) / u) for t in ts]
        block.insert(i - 1, CoordFn(K.one, v / u))
        tail = [CoordFn(K.one, u / (v * K.tN(ts))), K.binom(v, Monomial())]
    else:
        big = big * K.binom(u, K.tN(ts, -1) * v) / K.binom(u, v) ** (n - 2)
        block = [CoordFn(K.one, v * K.tN([t]) / u) for t in ts]
        block.append(CoordFn(K.one, v / (u * K.tN(ts))))
        tail = [CoordFn(K.one, u / v), K.binom(v, Monomial())]
    return _cycle(ts + ["u", "v"], head + [big] + block + tail, 1, f"W2^({i})")


def build_W2_terms(spec: CycleSpec, xi=None) -> list[ParamCycle]:
    """The unscaled W2^(i), i = 1..n-1, of the general construction."""
    if spec.n < 4:
        raise VariantMismatch("W2^(i) requires n >= 4")
    K = _kit(spec, xi)
    return [_w2_general_term(K, spec.n, i) for i in range(1, spec.n)]


def _w2_k9_terms(K: _Kit) -> list[ParamCycle]:
    t1, t2 = "t1", "t2"
    u, v = K.m(u=1), K.m(v=1)
    a, b = K.tN([t1]), K.tN([t2])
    head = [K.frac(t1), K.frac(t2), K.f([t1, t2]).inverse()]
    big3 = K.binom(u, a * v) * K.binom(u, b * v) / (K.binom(u, a * b * v) * K.binom(u, v))
    vu = CoordFn(K.one, v / u)
    av, bv = CoordFn(K.one, a * v / u), CoordFn(K.one, b * v / u)
    last = [CoordFn(K.one, u / (v * a * b)), K.binom(v, Monomial())]
    w1 = head + [big3, vu, av, bv] + last
    w2 = head + [big3, av, vu, bv] + last
    w3 = head + [big3, av, bv, vu] + last
    big4 = K.binom(u, a * v) * K.binom(u, b * v) * K.binom(u, v / (a * b)) / K.binom(u, v) ** 3
    w4 = head + [big4, av, bv, CoordFn(K.one, v / (u * a * b)), CoordFn(K.one, u / v), K.binom(v, Monomial())]
    params = [t1, t2, "u", "v"]
    return [_cycle(params, w, 1, f"W2^({i})") for i, w in enumerate((w1, w2, w3, w4), 1)]


def build_W2(spec: CycleSpec, xi=None) -> CycleSum:
    v = spec.resolved_variant
    K = _kit(spec, xi)
    if v in ("k3", "k5"):
        raise VariantMismatch(f"variant {v} has no W2 term")
    if v == "k7_first":
        t1 = "t1"
        u, vv = K.m(u=1), K.m(v=1)
        a = K.tN([t1])
        c3 = (K.binom(vv, a * u) * K.binom(vv, u / a)) / (K.binom(vv, u ** 2) * K.binom(vv, Monomial()))
        # (u - v t^N) in the first factor; with (u - t^N) the u = 0 locus lies in a
        # codimension-3 face and the cycle is not admissible.
        c4 = (K.binom(u, vv * a) * K.binom(u, vv / a)) / K.binom(u, vv) ** 2
        coords = [K.frac(t1), K.f([t1]).inverse(), c3, c4,
                  CoordFn(K.one, vv * a / u), CoordFn(K.one, vv / (a * u)), CoordFn(K.one, u / vv)]
        return CycleSum([_cycle([t1, "u", "v"], coords, Fraction(-1, 2), "W2")])
    if v == "k7_second":
        t1 = "t1"
        u, vv = K.m(u=1), K.m(v=1)
        a = K.tN([t1])
        c3 = K.binom(u, vv * a) * K.binom(u, vv / a) / K.binom(u, vv) ** 2
        coords = [K.frac(t1), K.f([t1]).inverse(), c3, CoordFn(K.one, vv * a / u),
                  CoordFn(K.one, vv / (a * u)), CoordFn(K.one, u / vv), K.binom(vv, Monomial())]
        return CycleSum([_cycle([t1, "u", "v"], coords, 1, "W2")])
    if v == "k9_appendix":
        terms = _w2_k9_terms(K)
        signs = (1, -1, 1, -1)
        return CycleSum(t.with_coeff(Fraction(s, 2)) for t, s in zip(terms, signs))
    n = spec.n
    terms = build_W2_terms(spec, xi)
    return CycleSum(t.with_coeff(Fraction((-1) ** (i - 1), n - 3)) for i, t in enumerate(terms, 1))


def assemble_tildeZ(spec: CycleSpec, xi=None) -> CycleSum:
    Z = CycleSum([build_Z(spec, xi)])
    if spec.n == 2:
        return Z
    out = Z + build_W1(spec, xi)
    if spec.n >= 4:
        out = out + build_W2(spec, xi)
    return out


def general_pieces(spec: CycleSpec):
    """Z, unscaled W1~, and unscaled W2^(i) of the general construction."""
    if spec.n < 4:
        raise VariantMismatch("general construction requires n >= 4")
    K = _kit(spec)
    return build_Z(spec), _w1_tilde(K, spec.n).with_label("W1~"), build_W2_terms(spec)


# -- checks --------------------------------------------------------------------------------

def _support_index(label: str) -> int | None:
    if label.startswith("W1"):
        return 1
    if label.startswith("W2"):
        return 2
    return None


def infer_xi(term: ParamCycle) -> CycloElem:
    """Recover xi from the coordinate 1 - xi*t_1...t_k (or its inverse) of a built term."""
    for z in term.coords:
        if not isinstance(z, CoordFn) or len(z.factors) != 1 or not z.mono.is_one():
            continue
        atom, _ = z.factors[0]
        lead = dict(atom.lead.items)
        if atom.trail.is_one() and lead and all(p.startswith("t") and e == 1 for p, e in lead.items()):
            # atom = t_1...t_k - c, and 1 - xi*t... = -xi*(t... - 1/xi)
            return atom.c.inverse()
    raise ValueError("no coordinate of the form 1 - xi*t_1...t_k")


def _t_product(term: ParamCycle, k: int):
    """(num, den) of prod_{j<k} t(z_j) with t(z) = z/(z-1), or None if some z is constant 1."""
    N = term.N
    num_total, den_total = expand_ratio([], N)
    for z in term.coords[:k]:
        if not isinstance(z, CoordFn):
            return None
        num, den = expand_ratio([(z, 1)], N)
        diff = num.sub(den)
        if diff.is_zero():
            return None
        num_total = num_total.mul(num)
        den_total = den_total.mul(diff)
    return num_total, den_total


def support_check(term: ParamCycle, i: int | None = None, xi: CycloElem | None = None) -> bool:
    """Check prod_{k <= n-i} z_k/(z_k - 1) == xi^(-1) identically on the term.

    The product is formed as an exact ratio of expanded polynomials.
    """
    if i is None:
        i = _support_index(term.label)
        if i is None:
            raise ValueError("cannot infer support index from label")
    if xi is None:
        xi = infer_xi(term)
    n = (len(term.coords) + 1) // 2
    ratio = _t_product(term, n - i)
    if ratio is None:
        return False
    num, den = ratio
    return num.sub(den.scale(xi.inverse())).is_zero()


def literal_product_check(term: ParamCycle, i: int, xi: CycloElem | None = None) -> bool:
    """The bare reading z_1...z_(n-i) == xi^(-1); kept only to report that it fails."""
    if xi is None:
        xi = infer_xi(term)
    n = (len(term.coords) + 1) // 2
    num, den = expand_ratio([(z, 1) for z in term.coords[: n - i]], term.N)
    return num.sub(den.scale(xi.inverse())).is_zero()


def support_report(s: CycleSum, xi: CycloElem | None = None) -> list[dict]:
    out = []
    for t in s:
        i = _support_index(t.label)
        if i is None:
            continue
        out.append({"term": t.label, "index": i, "t_product": support_check(t, i, xi),
                    "literal_product": literal_product_check(t, i, xi)})
    return out


def face_cancellation(spec: CycleSpec, trials: int = 5, seed: int = 0) -> list[dict]:
    """Compare X_(i,j) = face(W2^(i), j, inf) with X_(j,i-1) for all i > j.

    Faces are compared as sums, so a pair where both sides are empty counts as equal.
    """
    terms = build_W2_terms(spec)
    n = spec.n
    X = {(i, j): face(w.with_coeff(1), j, "inf") for i, w in enumerate(terms, 1) for j in range(1, n - 1)}
    rows = []
    for i in range(2, n):
        for j in range(1, min(i, n - 1)):
            lhs, rhs = X[i, j], X[j, i - 1]
            if len(lhs) == 1 and len(rhs) == 1:
                l0, r0 = next(iter(lhs)), next(iter(rhs))
                verdict = cycles_equal(l0.with_coeff(1), r0.with_coeff(1), trials, seed)
                same_mult = l0.coeff == r0.coeff
                ok = verdict == EQUAL and same_mult
            else:
                verdict = sum_is_zero(lhs - rhs, trials, seed).verdict
                ok = verdict == "Zero"
            rows.append({"i": i, "j": j, "lhs_terms": len(lhs), "rhs_terms": len(rhs),
                         "verdict": verdict, "ok": ok})
    return rows


def compare_constructions(a: CycleSum, b: CycleSum, trials: int = 5, seed: int = 0):
    """Zero report of a - b after discarding empty and degenerate terms."""
    def clean(s):
        return CycleSum(t for t in s if isinstance(normalize(t), ParamCycle))
    return sum_is_zero(clean(a) - clean(b), trials, seed)


def galois_conjugate(s: CycleSum, c: int) -> CycleSum:
    N = next(iter(s)).N
    if math.gcd(c, N) != 1:
        raise NotCoprime(f"gcd({c}, {N}) != 1")
    return s.map_constants(lambda x: galois(x, c))


def integrality_scale(s: CycleSum) -> int:
    return reduce(lambda acc, t: acc * t.coeff.denominator // math.gcd(acc, t.coeff.denominator), s, 1)
