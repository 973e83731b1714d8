"""Cubical cycle calculus on parametrized precycles.

A precycle is the closure of the image of a parameter torus under a tuple of
coordinate functions.  Every coordinate is a product

    unit * monomial * prod(atom ** e)

where an atom is a two-term polynomial ``lead - c * trail`` in the
parameters.  Faces, boundaries, and an exact sampling-based equality test
are computed entirely inside this fragment.
"""
from __future__ import annotations

import itertools
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .cyclo import CycloElem, format_elem, parse_elem

__all__ = [
    "Monomial",
    "Atom",
    "CoordFn",
    "Const",
    "ZERO",
    "INF",
    "ParamCycle",
    "CycleSum",
    "Replacement",
    "FragmentError",
    "IndeterminateLimit",
    "UnsolvableAtom",
    "AdmissibilityViolation",
    "substitute",
    "face",
    "normalize",
    "boundary",
    "cycles_equal",
    "sum_is_zero",
    "verify_closed",
    "EMPTY",
    "DEGENERATE",
    "COLLAPSED",
]


class FragmentError(Exception):
    """A computation left the two-monomial atom fragment."""


class IndeterminateLimit(FragmentError):
    pass


class UnsolvableAtom(FragmentError):
    pass


class AdmissibilityViolation(FragmentError):
    pass


def param_key(name: str) -> tuple:
    """Fixed parameter order: t1 < t2 < ... < u < v."""
    if name.startswith("t") and name[1:].isdigit():
        return (0, int(name[1:]), "")
    if name == "u":
        return (1, 0, "")
    if name == "v":
        return (2, 0, "")
    return (3, 0, name)


def solve_preference(name: str) -> tuple:
    """Sort key for choosing which parameter an atom is solved for."""
    k = param_key(name)
    return (-k[0], -k[1], k[2])


# -- monomials ------------------------------------------------------------------

class Monomial:
    """A Laurent monomial in named parameters."""

    __slots__ = ("items", "_hash")

    def __init__(self, exps: Union[Mapping[str, int], Iterable[tuple[str, int]], None] = None):
        if exps is None:
            pairs = ()
        elif isinstance(exps, Mapping):
            pairs = exps.items()
        else:
            pairs = exps
        d: dict[str, int] = {}
        for p, e in pairs:
            d[p] = d.get(p, 0) + e
        self.items = tuple(sorted(((p, e) for p, e in d.items() if e), key=lambda pe: param_key(pe[0])))
        self._hash = hash(self.items)

    @classmethod
    def var(cls, name: str, exp: int = 1) -> "Monomial":
        return cls({name: exp})

    def __getitem__(self, p: str) -> int:
        for q, e in self.items:
            if q == p:
                return e
        return 0

    def __contains__(self, p: str) -> bool:
        return any(q == p for q, _ in self.items)

    def params(self) -> set[str]:
        return {p for p, _ in self.items}

    def is_one(self) -> bool:
        return not self.items

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not other.items:
            return self
        if not self.items:
            return other
        return Monomial(self.items + other.items)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        if not other.items:
            return self
        return Monomial(self.items + tuple((p, -e) for p, e in other.items))

    def __pow__(self, k: int) -> "Monomial":
        if k == 1:
            return self
        return Monomial(tuple((p, e * k) for p, e in self.items))

    def without(self, p: str) -> "Monomial":
        return Monomial(tuple((q, e) for q, e in self.items if q != p))

    def gcd(self, other: "Monomial") -> "Monomial":
        names = self.params() | other.params()
        return Monomial({p: min(self[p], other[p]) for p in names})

    def order_key(self) -> tuple:
        """Lexicographic key, highest parameter first."""
        names = sorted(self.params(), key=param_key, reverse=True)
        return tuple((param_key(p), self[p]) for p in names)

    def lex_greater(self, other: "Monomial") -> bool:
        names = sorted(self.params() | other.params(), key=param_key, reverse=True)
        for p in names:
            a, b = self[p], other[p]
            if a != b:
                return a > b
        return False

    def evaluate(self, values: Mapping[str, CycloElem], one: CycloElem) -> CycloElem:
        out = one
        for p, e in self.items:
            out = out * (values[p] ** e)
        return out

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.items == other.items

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Monomial({dict(self.items)!r})"

    def __str__(self):
        if not self.items:
            return "1"
        return "*".join(p if e == 1 else f"{p}^{e}" for p, e in self.items)

    def to_json(self) -> dict:
        return dict(self.items)


ONE_MONO = Monomial()


# -- atoms ------------------------------------------------------------------------

class Atom:
    """The polynomial ``lead - c * trail``; canonical orientation enforced."""

    __slots__ = ("lead", "c", "trail", "_hash")

    def __init__(self, lead: Monomial, c: CycloElem, trail: Monomial):
        g = lead.gcd(trail)
        if not g.is_one():
            raise ValueError("atom monomials must be coprime polynomials")
        if any(e < 0 for _, e in lead.items + trail.items):
            raise ValueError("atom monomials must be polynomial")
        if c.is_zero():
            raise ValueError("atom constant must be nonzero")
        if lead == trail or not lead.lex_greater(trail):
            raise ValueError("atom must be canonically oriented")
        self.lead, self.c, self.trail = lead, c, trail
        self._hash = hash((lead, c, trail))

    def params(self) -> set[str]:
        return self.lead.params() | self.trail.params()

    def __contains__(self, p: str) -> bool:
        return p in self.lead or p in self.trail

    def evaluate(self, values: Mapping[str, CycloElem], one: CycloElem) -> CycloElem:
        return self.lead.evaluate(values, one) - self.c * self.trail.evaluate(values, one)

    def sort_key(self) -> tuple:
        return (self.lead.order_key(), self.trail.order_key(), self.c.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, Atom)
            and self.lead == other.lead
            and self.trail == other.trail
            and self.c == other.c
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Atom({self})"

    def __str__(self):
        c = format_elem(self.c)
        c = c if c == "1" else f"({c})"
        t = str(self.trail)
        rhs = c if t == "1" else (t if c == "1" else f"{c}*{t}")
        return f"({self.lead} - {rhs})"

    def map_constants(self, fn) -> "Atom":
        return Atom(self.lead, fn(self.c), self.trail)


def make_binomial(alpha: CycloElem, m1: Monomial, beta: CycloElem, m2: Monomial):
    """Factor ``alpha*m1 - beta*m2`` as ``unit * mono * atom``.

    Returns ``(unit, mono, atom_or_None)``; ``unit`` is zero exactly when the
    binomial vanishes identically.
    """
    if alpha.is_zero() and beta.is_zero():
        return alpha, ONE_MONO, None
    if beta.is_zero():
        return alpha, m1, None
    if alpha.is_zero():
        return -beta, m2, None
    g = m1.gcd(m2)
    a, b = m1 / g, m2 / g
    if a == b:
        return alpha - beta, g, None
    if a.lex_greater(b):
        return alpha, g, Atom(a, beta / alpha, b)
    return -beta, g, Atom(b, alpha / beta, a)


# -- coordinate functions ------------------------------------------------------------

class Const:
    """The constant coordinates 0 and infinity (outside the multiplicative fragment)."""

    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __repr__(self):
        return self.name

    def params(self) -> set[str]:
        return set()


ZERO = Const("0")
INF = Const("inf")


class CoordFn:
    """``unit * mono * prod(atom ** exp)`` with distinct atoms."""

    __slots__ = ("unit", "mono", "factors", "_hash", "_params")

    def __init__(self, unit: CycloElem, mono: Monomial = ONE_MONO,
                 factors: Union[Mapping[Atom, int], Iterable[tuple[Atom, int]]] = ()):
        if unit.is_zero():
            raise ValueError("coordinate unit must be nonzero")
        cnt: Counter = Counter()
        for a, e in (factors.items() if isinstance(factors, Mapping) else factors):
            cnt[a] += e
        self.unit = unit
        self.mono = mono
        self.factors = tuple(sorted(((a, e) for a, e in cnt.items() if e), key=lambda ae: ae[0].sort_key()))
        self._hash = hash((unit, mono, self.factors))
        ps = set(mono.params())
        for a, _ in self.factors:
            ps |= a.params()
        self._params = frozenset(ps)

    # -- builders ------------------------------------------------------------
    @classmethod
    def constant(cls, c: CycloElem) -> "CoordFn":
        return cls(c)

    @classmethod
    def monomial(cls, N: int, mono: Monomial, unit: CycloElem | None = None) -> "CoordFn":
        return cls(unit if unit is not None else CycloElem.one(N), mono)

    @classmethod
    def binomial(cls, alpha: CycloElem, m1: Monomial, beta: CycloElem, m2: Monomial) -> "CoordFn":
        """``alpha*m1 - beta*m2`` (must not vanish identically)."""
        unit, mono, atom = make_binomial(alpha, m1, beta, m2)
        if unit.is_zero():
            raise ValueError("binomial vanishes identically")
        return cls(unit, mono, [(atom, 1)] if atom else [])

    @property
    def N(self) -> int:
        return self.unit.N

    def params(self) -> frozenset:
        return self._params

    def is_one(self) -> bool:
        return not self.factors and self.mono.is_one() and self.unit.is_one()

    def is_constant(self) -> bool:
        return not self._params

    def __mul__(self, other: "CoordFn") -> "CoordFn":
        return CoordFn(self.unit * other.unit, self.mono * other.mono,
                       list(self.factors) + list(other.factors))

    def __truediv__(self, other: "CoordFn") -> "CoordFn":
        return CoordFn(self.unit / other.unit, self.mono / other.mono,
                       list(self.factors) + [(a, -e) for a, e in other.factors])

    def __pow__(self, k: int) -> "CoordFn":
        return CoordFn(self.unit ** k, self.mono ** k, [(a, e * k) for a, e in self.factors])

    def inverse(self) -> "CoordFn":
        return self ** -1

    def map_constants(self, fn) -> "CoordFn":
        return CoordFn(fn(self.unit), self.mono, [(a.map_constants(fn), e) for a, e in self.factors])

    def evaluate(self, values: Mapping[str, CycloElem]):
        """Exact value; ``None`` stands for infinity."""
        one = CycloElem.one(self.N)
        out = self.unit * self.mono.evaluate(values, one)
        zero_order = 0
        for a, e in self.factors:
            x = a.evaluate(values, one)
            if x.is_zero():
                zero_order += e
                continue
            out = out * x ** e
        if zero_order > 0:
            return CycloElem.zero(self.N)
        if zero_order < 0:
            return None
        return out

    def log_derivative(self, p: str, values: Mapping[str, CycloElem]) -> CycloElem:
        """d log f / d log p at a point where no atom vanishes."""
        one = CycloElem.one(self.N)
        out = CycloElem.rational(self.N, self.mono[p])
        for a, e in self.factors:
            lp, tp = a.lead[p], a.trail[p]
            if not lp and not tp:
                continue
            L = a.lead.evaluate(values, one)
            T = a.c * a.trail.evaluate(values, one)
            out = out + (L * lp - T * tp) / (L - T) * e
        return out

    def __eq__(self, other):
        return (
            isinstance(other, CoordFn)
            and self._hash == other._hash
            and self.unit == other.unit
            and self.mono == other.mono
            and self.factors == other.factors
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"CoordFn({self})"

    def __str__(self):
        parts = []
        u = format_elem(self.unit)
        if u != "1":
            parts.append(f"({u})")
        if not self.mono.is_one():
            parts.append(str(self.mono))
        for a, e in self.factors:
            parts.append(str(a) if e == 1 else f"{a}^{e}")
        return "*".join(parts) if parts else "1"


Coord = Union[CoordFn, Const]


# -- precycles and sums ----------------------------------------------------------------

@dataclass(frozen=True)
class ParamCycle:
    params: tuple[str, ...]
    coords: tuple[Coord, ...]
    coeff: Fraction = Fraction(1)
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        object.__setattr__(self, "coords", tuple(self.coords))
        object.__setattr__(self, "coeff", Fraction(self.coeff))

    @property
    def key(self) -> tuple:
        return (self.params, self.coords)

    @property
    def N(self) -> int:
        for c in self.coords:
            if isinstance(c, CoordFn):
                return c.N
        raise ValueError("cycle has no coordinate functions")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def with_coeff(self, coeff) -> "ParamCycle":
        return ParamCycle(self.params, self.coords, Fraction(coeff), self.label)

    def with_label(self, label: str) -> "ParamCycle":
        return ParamCycle(self.params, self.coords, self.coeff, label)

    def scaled(self, k) -> "ParamCycle":
        return self.with_coeff(self.coeff * Fraction(k))

    def atoms(self) -> set[Atom]:
        out = set()
        for c in self.coords:
            if isinstance(c, CoordFn):
                out.update(a for a, _ in c.factors)
        return out

    def map_constants(self, fn) -> "ParamCycle":
        return ParamCycle(self.params,
                          tuple(c.map_constants(fn) if isinstance(c, CoordFn) else c for c in self.coords),
                          self.coeff, self.label)

    def __str__(self):
        body = ", ".join(str(c) for c in self.coords)
        return f"{self.coeff} * [{','.join(self.params)}]({body})"


class CycleSum:
    """A formal rational combination of precycles (zero coefficients dropped)."""

    def __init__(self, terms: Iterable[ParamCycle] = (), combine: bool = False):
        ts = [t for t in terms if t.coeff != 0]
        if combine:
            acc: dict = {}
            first: dict = {}
            for t in ts:
                acc[t.key] = acc.get(t.key, Fraction(0)) + t.coeff
                first.setdefault(t.key, t)
            ts = [first[k].with_coeff(c) for k, c in acc.items() if c != 0]
        self.terms: list[ParamCycle] = ts

    def __iter__(self) -> Iterator[ParamCycle]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "CycleSum") -> "CycleSum":
        return CycleSum(self.terms + list(other))

    def __sub__(self, other: "CycleSum") -> "CycleSum":
        return CycleSum(self.terms + [t.scaled(-1) for t in other])

    def __neg__(self) -> "CycleSum":
        return self.scaled(-1)

    def scaled(self, k) -> "CycleSum":
        return CycleSum(t.scaled(k) for t in self.terms)

    def combined(self) -> "CycleSum":
        return CycleSum(self.terms, combine=True)

    def map_constants(self, fn) -> "CycleSum":
        return CycleSum(t.map_constants(fn) for t in self.terms)

    def is_empty(self) -> bool:
        return not self.terms

    def __repr__(self):
        return f"CycleSum({len(self.terms)} terms)"

    def __str__(self):
        return "\n".join(str(t) for t in self.terms) or "0"


# -- substitution ------------------------------------------------------------------

@dataclass(frozen=True)
class Replacement:
    """p -> unit * mono."""

    unit: CycloElem
    mono: Monomial


def _subst_coord(f: Coord, p: str, repl) -> Coord:
    if isinstance(f, Const) or p not in f.params():
        return f
    N = f.N
    k = f.mono[p]
    rest = f.mono.without(p)
    if isinstance(repl, Replacement):
        alpha, M = repl.unit, repl.mono
        unit = f.unit * alpha ** k
        mono = rest * M ** k
        factors: Counter = Counter()
        zero_order = 0
        vanished = False
        for a, e in f.factors:
            if p not in a:
                factors[a] += e
                continue
            lp, tp = a.lead[p], a.trail[p]
            L = a.lead.without(p) * M ** lp
            T = a.trail.without(p) * M ** tp
            u2, m2, a2 = make_binomial(alpha ** lp, L, a.c * alpha ** tp, T)
            if u2.is_zero():
                vanished = True
                zero_order += e
                continue
            unit = unit * u2 ** e
            mono = mono * m2 ** e
            if a2 is not None:
                factors[a2] += e
        if zero_order > 0:
            return ZERO
        if zero_order < 0:
            return INF
        if vanished:
            raise IndeterminateLimit(f"0/0 after substituting {p} in {f}")
        return CoordFn(unit, mono, factors)

    if repl == "zero":
        if k > 0:
            return ZERO
        if k < 0:
            return INF
        unit, mono = f.unit, rest
        factors = []
        for a, e in f.factors:
            lp, tp = a.lead[p], a.trail[p]
            if lp:
                unit = unit * (-a.c) ** e
                mono = mono * a.trail ** e
            elif tp:
                mono = mono * a.lead ** e
            else:
                factors.append((a, e))
        return CoordFn(unit, mono, factors)

    if repl == "inf":
        deg = k + sum(e * max(a.lead[p], a.trail[p]) for a, e in f.factors)
        if deg > 0:
            return INF
        if deg < 0:
            return ZERO
        unit, mono = f.unit, rest
        factors = []
        for a, e in f.factors:
            lp, tp = a.lead[p], a.trail[p]
            if lp:
                mono = mono * a.lead.without(p) ** e
            elif tp:
                unit = unit * (-a.c) ** e
                mono = mono * a.trail.without(p) ** e
            else:
                factors.append((a, e))
        return CoordFn(unit, mono, factors)
    raise ValueError(f"bad replacement {repl!r}")


def substitute(c: ParamCycle, p: str, repl) -> ParamCycle:
    """Restrict ``c`` to the locus p = repl (a Replacement, "zero" or "inf")."""
    if p not in c.params:
        raise ValueError(f"{p} is not a parameter of the cycle")
    if isinstance(repl, Replacement) and p in repl.mono and repl.mono != Monomial.var(p):
        raise ValueError("replacement monomial may not contain the substituted parameter")
    if isinstance(repl, Replacement) and repl.mono == Monomial.var(p) and repl.unit.is_one():
        return c
    coords = tuple(_subst_coord(f, p, repl) for f in c.coords)
    params = tuple(q for q in c.params if q != p)
    return ParamCycle(params, coords, c.coeff, c.label)


# -- normalization ---------------------------------------------------------------------

class _Verdict:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name

    def __bool__(self):
        return False


EMPTY = _Verdict("Empty")
DEGENERATE = _Verdict("Degenerate")
COLLAPSED = _Verdict("Collapsed")

SAMPLE_RANGE = (2, 97)


def _sample_point(c: ParamCycle, rng: random.Random, max_tries: int = 200):
    """Random rational point avoiding atom zeros and coordinates 0, 1, inf."""
    N = c.N
    atoms = c.atoms()
    lo, hi = SAMPLE_RANGE
    one = CycloElem.one(N)
    for _ in range(max_tries):
        vals = {p: CycloElem.rational(N, Fraction(rng.randint(lo, hi), rng.randint(lo, hi)))
                for p in c.params}
        if any(a.evaluate(vals, one).is_zero() for a in atoms):
            continue
        point = []
        ok = True
        for f in c.coords:
            if isinstance(f, Const):
                point.append(f)
                continue
            z = f.evaluate(vals)
            if z is None or z.is_zero() or z.is_one():
                ok = False
                break
            point.append(z)
        if ok:
            return vals, point
    raise FragmentError("could not find a generic sample point")


def _rank(rows: list[list[CycloElem]]) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if not rows[i][col].is_zero()), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col].inverse()
        for i in range(rank + 1, len(rows)):
            if not rows[i][col].is_zero():
                f = rows[i][col] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def image_dimension(c: ParamCycle, rng: random.Random | None = None) -> int:
    """Generic rank of the parametrization (exact Jacobian of log coordinates)."""
    if not c.params:
        return 0
    if _triangular_solvable(c):
        return len(c.params)
    rng = rng or random.Random(7)
    vals, _ = _sample_point_lenient(c, rng)
    rows = [[f.log_derivative(p, vals) for p in c.params] for f in c.coords if isinstance(f, CoordFn)]
    return _rank(rows)


def _sample_point_lenient(c: ParamCycle, rng: random.Random):
    N = c.N
    atoms = c.atoms()
    lo, hi = SAMPLE_RANGE
    one = CycloElem.one(N)
    for _ in range(200):
        vals = {p: CycloElem.rational(N, Fraction(rng.randint(lo, hi), rng.randint(lo, hi)))
                for p in c.params}
        if not any(a.evaluate(vals, one).is_zero() for a in atoms):
            return vals, None
    raise FragmentError("could not find a generic sample point")


def _triangular_solvable(c: ParamCycle) -> bool:
    """Structural check: parameters can be peeled off one coordinate at a time."""
    solved: set[str] = set()
    coords = [f for f in c.coords if isinstance(f, CoordFn)]
    used = [False] * len(coords)
    progress = True
    while progress and len(solved) < len(c.params):
        progress = False
        for idx, f in enumerate(coords):
            if used[idx]:
                continue
            free = f.params() - solved
            if len(free) == 1:
                (p,) = free
                if _linear_in(f, p):
                    solved.add(p)
                    used[idx] = True
                    progress = True
    return len(solved) == len(c.params)


def _linear_in(f: CoordFn, p: str) -> bool:
    num = max(f.mono[p], 0)
    den = max(-f.mono[p], 0)
    for a, e in f.factors:
        d = max(a.lead[p], a.trail[p])
        if d:
            if e > 0:
                num += d * e
            else:
                den += d * (-e)
    return num <= 1 and den <= 1 and (num or den)


def normalize(c: ParamCycle):
    """Return the cycle, or EMPTY / DEGENERATE / COLLAPSED.

    Raises AdmissibilityViolation if a surviving coordinate is identically
    0 or infinity.
    """
    for f in c.coords:
        if isinstance(f, CoordFn) and f.is_one():
            return EMPTY
    funcs = [f for f in c.coords if isinstance(f, CoordFn)]
    if not funcs:
        raise AdmissibilityViolation(f"all coordinates constant 0/inf: {c}")
    if image_dimension(c) < len(c.params):
        return COLLAPSED
    for i, f in enumerate(c.coords):
        if isinstance(f, CoordFn) and len(f.params()) == 1:
            (p,) = f.params()
            if not any(p in g.params() for j, g in enumerate(c.coords) if j != i):
                return DEGENERATE
    for f in c.coords:
        if isinstance(f, Const):
            raise AdmissibilityViolation(f"coordinate identically {f.name}: {c}")
    return c


# -- faces and boundary ------------------------------------------------------------------

@dataclass
class FaceEvent:
    """Bookkeeping for one component of a face (used in reports)."""

    coord: int
    eps: str
    component: str
    multiplicity: int
    outcome: str


def _solve_atom(a: Atom) -> tuple[str, Replacement]:
    cands = [p for p, e in a.lead.items if e == 1] + [p for p, e in a.trail.items if e == 1]
    if not cands:
        raise UnsolvableAtom(f"no unit-exponent parameter in {a}")
    p = min(cands, key=solve_preference)
    if p in a.lead:
        # p * L' = c * T
        return p, Replacement(a.c, a.trail / a.lead.without(p))
    # L = c * p * T'
    return p, Replacement(a.c.inverse(), a.lead / a.trail.without(p))


def face_components(c: ParamCycle, j: int, eps: str):
    """Components of {coord_j = eps}: (parameter, replacement, multiplicity, description)."""
    f = c.coords[j - 1]
    if isinstance(f, Const):
        raise AdmissibilityViolation(f"coordinate {j} is constant {f.name}")
    sign = 1 if eps == "0" else -1
    out = []
    for a, e in f.factors:
        if e * sign > 0:
            p, repl = _solve_atom(a)
            out.append((p, repl, abs(e), f"{a}=0"))
    for p in c.params:
        k = f.mono[p]
        if k * sign > 0:
            out.append((p, "zero", abs(k), f"{p}=0"))
        deg = k + sum(e * max(a.lead[p], a.trail[p]) for a, e in f.factors)
        if -deg * sign > 0:
            out.append((p, "inf", abs(deg), f"{p}=inf"))
    return out


def face(c: ParamCycle, j: int, eps: str, events: list | None = None) -> CycleSum:
    """Pullback of ``c`` to the face z_j = eps (eps in {"0", "inf"}); coordinate j removed."""
    if eps not in ("0", "inf"):
        raise ValueError("eps must be '0' or 'inf'")
    if not 1 <= j <= len(c.coords):
        raise ValueError(f"coordinate index {j} out of range")
    terms = []
    for p, repl, mult, desc in face_components(c, j, eps):
        sub = substitute(c, p, repl)
        coords = sub.coords[: j - 1] + sub.coords[j:]
        cand = ParamCycle(sub.params, coords, c.coeff * mult, c.label)
        res = normalize(cand)
        if events is not None:
            events.append(FaceEvent(j, eps, desc, mult, repr(res) if isinstance(res, _Verdict) else "term"))
        if isinstance(res, ParamCycle):
            terms.append(res)
    return CycleSum(terms)


def boundary(c: Union[ParamCycle, CycleSum], events: list | None = None) -> CycleSum:
    """Sum over i of (-1)^(i-1) (face(i, 0) - face(i, inf)), identical terms combined."""
    items = [c] if isinstance(c, ParamCycle) else list(c)
    out: list[ParamCycle] = []
    for t in items:
        t0 = normalize(t)
        if not isinstance(t0, ParamCycle):
            continue
        for i in range(1, len(t0.coords) + 1):
            s = 1 if i % 2 == 1 else -1
            out.extend(x.scaled(s) for x in face(t0, i, "0", events))
            out.extend(x.scaled(-s) for x in face(t0, i, "inf", events))
    return CycleSum(out, combine=True)


# -- equality testing ----------------------------------------------------------------------

EQUAL, UNEQUAL, UNDECIDABLE = "Equal", "Unequal", "Undecidable"


def _univariate(f: CoordFn, p: str, vals: Mapping[str, CycloElem]):
    """f as (A p + B) / (C p + D) given the other parameters; None if not of that form."""
    N = f.N
    one = CycloElem.one(N)
    zero = CycloElem.zero(N)
    scalar = f.unit * f.mono.without(p).evaluate(vals, one)
    num = [scalar]
    den = [one]
    k = f.mono[p]

    def mul(poly, other):
        out = [zero] * (len(poly) + len(other) - 1)
        for i, x in enumerate(poly):
            for jj, y in enumerate(other):
                out[i + jj] = out[i + jj] + x * y
        return out

    if k > 0:
        num = [zero] * k + num
    elif k < 0:
        den = [zero] * (-k) + den
    for a, e in f.factors:
        lp, tp = a.lead[p], a.trail[p]
        L = a.lead.without(p).evaluate(vals, one)
        T = a.c * a.trail.without(p).evaluate(vals, one)
        poly = [zero] * (max(lp, tp) + 1)
        poly[lp] = poly[lp] + L
        poly[tp] = poly[tp] - T
        if len(poly) == 1:
            if poly[0].is_zero():
                return None
            num = [x * poly[0] ** e for x in num]
            continue
        target = num if e > 0 else den
        for _ in range(abs(e)):
            target = mul(target, poly)
        if e > 0:
            num = target
        else:
            den = target
        if len(num) > 2 or len(den) > 2:
            return None
    while len(num) < 2:
        num.append(zero)
    while len(den) < 2:
        den.append(zero)
    if len(num) > 2 or len(den) > 2:
        return None
    B, A = num
    D, C = den
    if (A * D - B * C).is_zero():
        return None
    return A, B, C, D


class _Stall(Exception):
    pass


def _solve_point(b: ParamCycle, point: Sequence) -> dict | None:
    """Triangularly solve b's parameters so that b(params) = point; None if inconsistent."""
    vals: dict[str, CycloElem] = {}
    remaining = set(b.params)
    used = set()
    while remaining:
        progress = False
        for idx, f in enumerate(b.coords):
            if idx in used or isinstance(f, Const):
                continue
            free = f.params() & remaining
            if len(free) != 1 or (f.params() - free) - set(vals):
                continue
            (p,) = free
            abcd = _univariate(f, p, vals)
            if abcd is None:
                continue
            A, B, C, D = abcd
            z = point[idx]
            if isinstance(z, Const):
                return None
            den = z * C - A
            if den.is_zero():
                return None
            x = (B - z * D) / den
            if x.is_zero():
                return None
            vals[p] = x
            remaining.discard(p)
            used.add(idx)
            progress = True
        if not progress:
            raise _Stall()
    return vals


def _point_matches(b: ParamCycle, vals: Mapping, point: Sequence) -> bool:
    for f, z in zip(b.coords, point):
        if isinstance(f, Const) or isinstance(z, Const):
            if f is not z:
                return False
            continue
        try:
            w = f.evaluate(vals)
        except ZeroDivisionError:
            return False
        if w is None or w != z:
            return False
    return True


class _PointCache:
    """Deterministic per-cycle sample points, keyed by the cycle representation."""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self._cache: dict = {}

    def points(self, c: ParamCycle, trials: int):
        key = c.key
        pts = self._cache.get(key)
        if pts is None or len(pts) < trials:
            rng = random.Random(f"{self.seed}:{hash(key)}")
            pts = [_sample_point(c, rng) for _ in range(trials)]
            self._cache[key] = pts
        return pts[:trials]


def cycles_equal(a: ParamCycle, b: ParamCycle, trials: int = 5, seed: int = 0,
                 _cache: _PointCache | None = None) -> str:
    """Equal / Unequal / Undecidable by exact sampling and triangular inversion."""
    if len(a.coords) != len(b.coords):
        raise ValueError("coordinate counts differ")
    if len(a.params) != len(b.params):
        return UNEQUAL
    if a.key == b.key:
        return EQUAL
    cache = _cache or _PointCache(seed)
    if not a.params:
        return EQUAL if _point_matches(b, {}, [f.evaluate({}) if isinstance(f, CoordFn) else f
                                               for f in a.coords]) else UNEQUAL
    for _, point in cache.points(a, trials):
        try:
            vals = _solve_point(b, point)
        except _Stall:
            return UNDECIDABLE
        if vals is None or not _point_matches(b, vals, point):
            return UNEQUAL
    return EQUAL


def _fingerprint(c: ParamCycle) -> tuple:
    consts = []
    for i, f in enumerate(c.coords):
        if isinstance(f, Const):
            consts.append((i, f.name))
        elif f.is_constant():
            consts.append((i, f.unit.coeffs))
    return (len(c.params), len(c.coords), tuple(consts))


@dataclass
class ClassInfo:
    members: list[int]
    total: Fraction
    representative: str


@dataclass
class ZeroReport:
    verdict: str
    classes: list[ClassInfo]
    undecided_pairs: list[tuple[int, int]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "classes": [
                {"members": cl.members, "total": _fmt_q(cl.total), "representative": cl.representative}
                for cl in self.classes
            ],
            "undecided_pairs": [list(p) for p in self.undecided_pairs],
        }


def sum_is_zero(s: CycleSum, trials: int = 5, seed: int = 0) -> ZeroReport:
    """Group terms into equal-support classes and check every class total vanishes."""
    terms = list(s)
    cache = _PointCache(seed)
    classes: list[list[int]] = []
    buckets: dict = {}
    undecided = []
    for idx, t in enumerate(terms):
        fp = _fingerprint(t)
        placed = False
        for cl in buckets.get(fp, []):
            rep = terms[classes[cl][0]]
            verdict = cycles_equal(rep, t, trials, seed, cache)
            if verdict == EQUAL:
                classes[cl].append(idx)
                placed = True
                break
            if verdict == UNDECIDABLE:
                undecided.append((classes[cl][0], idx))
        if not placed:
            classes.append([idx])
            buckets.setdefault(fp, []).append(len(classes) - 1)
    infos = []
    for members in classes:
        total = sum((terms[i].coeff for i in members), Fraction(0))
        infos.append(ClassInfo(members, total, str(terms[members[0]].with_coeff(1))))
    if all(ci.total == 0 for ci in infos):
        verdict = "Zero"
    elif undecided:
        verdict = UNDECIDABLE
    else:
        verdict = "Nonzero"
    return ZeroReport(verdict, infos, undecided)


@dataclass
class VerificationReport:
    passed: bool
    input_terms: int
    boundary_terms: int
    zero: ZeroReport
    multiplicities: list[dict] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return self.zero.verdict

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "verdict": self.verdict,
            "input_terms": self.input_terms,
            "boundary_terms": self.boundary_terms,
            "classes": self.zero.to_json()["classes"],
            "undecided_pairs": self.zero.to_json()["undecided_pairs"],
            "nonreduced_faces": self.multiplicities,
        }


def verify_closed(s: Union[CycleSum, ParamCycle], trials: int = 5, seed: int = 0) -> VerificationReport:
    if isinstance(s, ParamCycle):
        s = CycleSum([s])
    events: list[FaceEvent] = []
    bd = boundary(s, events)
    zr = sum_is_zero(bd, trials, seed)
    mult = [
        {"coord": e.coord, "eps": e.eps, "component": e.component, "multiplicity": e.multiplicity,
         "outcome": e.outcome}
        for e in events if e.multiplicity > 1
    ]
    return VerificationReport(zr.verdict == "Zero", len(s), len(bd), zr, mult)


# -- JSON ------------------------------------------------------------------------------------

def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def coord_to_json(f: Coord):
    if isinstance(f, Const):
        return {"const": f.name}
    return {
        "unit": format_elem(f.unit),
        "mono": f.mono.to_json(),
        "atoms": [
            {"lead": a.lead.to_json(), "c": format_elem(a.c), "trail": a.trail.to_json(), "exp": e}
            for a, e in f.factors
        ],
    }


def coord_from_json(d: Mapping, N: int) -> Coord:
    if "const" in d:
        return ZERO if d["const"] == "0" else INF
    factors = [
        (Atom(Monomial(x["lead"]), parse_elem(x["c"], N), Monomial(x["trail"])), int(x["exp"]))
        for x in d.get("atoms", [])
    ]
    return CoordFn(parse_elem(d["unit"], N), Monomial(d.get("mono", {})), factors)


def cycle_to_json(c: ParamCycle) -> dict:
    out = {"params": list(c.params), "coeff": _fmt_q(c.coeff), "coords": [coord_to_json(f) for f in c.coords]}
    if c.label:
        out["label"] = c.label
    return out


def cycle_from_json(d: Mapping, N: int) -> ParamCycle:
    return ParamCycle(tuple(d["params"]), tuple(coord_from_json(x, N) for x in d["coords"]),
                      Fraction(d["coeff"]), d.get("label", ""))


SCHEMA_CYCLE = "hcg.cyclesum/1"


def sum_to_json(s: CycleSum, N: int, meta: Mapping | None = None) -> dict:
    out = {"schema": SCHEMA_CYCLE, "N": N}
    if meta:
        out.update(meta)
    out["terms"] = [cycle_to_json(t) for t in s]
    return out


def sum_from_json(d: Mapping) -> CycleSum:
    N = int(d["N"])
    return CycleSum(cycle_from_json(t, N) for t in d["terms"])


def dumps(s: CycleSum, N: int, meta: Mapping | None = None) -> str:
    return json.dumps(sum_to_json(s, N, meta), indent=2, sort_keys=False)


def loads(text: str) -> CycleSum:
    return sum_from_json(json.loads(text))


# -- expanded polynomials (exact identity checks) ---------------------------------------------

class SparsePoly:
    """Multivariate polynomial over Q(w) as {Monomial: coefficient}."""

    __slots__ = ("N", "terms")

    def __init__(self, N: int, terms: Mapping[Monomial, CycloElem] | None = None):
        self.N = N
        self.terms = {m: c for m, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def const(cls, c: CycloElem) -> "SparsePoly":
        return cls(c.N, {ONE_MONO: c})

    @classmethod
    def monomial(cls, N: int, m: Monomial, c: CycloElem | None = None) -> "SparsePoly":
        return cls(N, {m: c if c is not None else CycloElem.one(N)})

    def add(self, other: "SparsePoly") -> "SparsePoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return SparsePoly(self.N, out)

    def scale(self, k: CycloElem) -> "SparsePoly":
        return SparsePoly(self.N, {m: c * k for m, c in self.terms.items()})

    def sub(self, other: "SparsePoly") -> "SparsePoly":
        return self.add(other.scale(-CycloElem.one(self.N)))

    def mul(self, other: "SparsePoly") -> "SparsePoly":
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                c = c1 * c2
                out[m] = out[m] + c if m in out else c
        return SparsePoly(self.N, out)

    def pow(self, k: int) -> "SparsePoly":
        out = SparsePoly.const(CycloElem.one(self.N))
        for _ in range(k):
            out = out.mul(self)
        return out

    def is_zero(self) -> bool:
        return not self.terms


def expand_ratio(factors: Sequence[tuple[CoordFn, int]], N: int) -> tuple[SparsePoly, SparsePoly]:
    """prod(f ** e) as numerator and denominator polynomials."""
    num = SparsePoly.const(CycloElem.one(N))
    den = SparsePoly.const(CycloElem.one(N))
    for f, e in factors:
        g = f ** e
        pos = Monomial({p: k for p, k in g.mono.items if k > 0})
        neg = Monomial({p: -k for p, k in g.mono.items if k < 0})
        num = num.mul(SparsePoly.monomial(N, pos, g.unit))
        den = den.mul(SparsePoly.monomial(N, neg))
        for a, k in g.factors:
            ap = SparsePoly(N, {a.lead: CycloElem.one(N)}).sub(SparsePoly(N, {a.trail: a.c}))
            if k > 0:
                num = num.mul(ap.pow(k))
            else:
                den = den.mul(ap.pow(-k))
    return num, den
