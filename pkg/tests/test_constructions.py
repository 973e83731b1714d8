from fractions import Fraction

import pytest

from hcg import constructions as C
from hcg.cyclo import CycloElem, NotCoprime
from hcg.symcycle import CoordFn, CycleSum, Monomial, ParamCycle, boundary, sum_is_zero, verify_closed

I = Monomial()


def closed(s: CycleSum) -> bool:
    return verify_closed(s).passed


# -- CycleSpec validation-----------------------------------------------------------------------------

def test_spec_validation():
    with pytest.raises(NotCoprime):
        C.CycleSpec(3, 6, 2)
    with pytest.raises(C.VariantMismatch):
        C.CycleSpec(5, 3, 1, "k7_first")
    with pytest.raises(C.VariantMismatch):
        C.CycleSpec(3, 3, 1, "general")
    with pytest.raises(C.VariantMismatch):
        C.CycleSpec(4, 3, 1, "nonsense")
    with pytest.raises(ValueError):
        C.CycleSpec(1, 3)
    assert C.CycleSpec(4, 5, 7).b == 2
    assert C.CycleSpec(6, 5).resolved_variant == "general"


def test_epsilon_and_xi_norm():
    assert [C.epsilon_n(n) for n in (2, 3, 4, 5, 6, 7)] == [1, 2, 1, 2, 3, 4]
    assert C.xi_norm(3, 2) == Fraction(-1, 4)


def test_shapes():
    s = C.assemble_tildeZ(C.CycleSpec(6, 3, 1))
    labels = [t.label for t in s]
    assert labels == ["Z", "W1"] + [f"W2^({i})" for i in range(1, 6)]
    for t in s:
        assert len(t.coords) == 2 * 6 - 1
    assert len(C.build_Z(C.CycleSpec(6, 3, 1)).params) == 5


# -- boundary bookkeeping of the n = 5 presentation ----------------------------------

@pytest.fixture(scope="module")
def k9_pieces():
    spec = C.CycleSpec(5, 5, 2, "k9_appendix")
    K = C._kit(spec)
    u, v = Monomial({"u": 1}), Monomial({"v": 1})
    a, b, c = K.tN(["t1"]), K.tN(["t2"]), K.tN(["t3"])

    def mono(m):
        return CoordFn(K.one, m)

    def cyc(params, coords):
        return ParamCycle(tuple(params), tuple(coords), Fraction(1))

    U1 = cyc(["t1", "t2", "t3"], [K.frac("t1"), K.frac("t2"), K.frac("t3"), K.f(["t1", "t2", "t3"]).inverse(),
                                  mono(a), mono(b), mono(c), mono(I / (a * b * c))])
    h2 = [K.frac("t1"), K.frac("t2"), K.f(["t1", "t2"]).inverse()]
    big = K.binom(u, a) * K.binom(u, b) / (K.binom(u, a * b) * K.binom(u, I))
    P = ["t1", "t2", "u"]
    U2 = cyc(P, h2 + [big, mono(I / u), mono(a / u), mono(b / u), mono(u / (a * b))])
    # the printed U3 carries t3^N in its seventh slot; only t2^N makes it a face of W1
    U3 = cyc(P, h2 + [big, mono(a / u), mono(I / u), mono(b / u), mono(u / (a * b))])
    U4 = cyc(P, h2 + [big, mono(a / u), mono(b / u), mono(I / u), mono(u / (a * b))])
    big5 = K.binom(u, a) * K.binom(u, b) * K.binom(u, I / (a * b)) / K.binom(u, I) ** 3
    U5 = cyc(P, h2 + [big5, mono(a / u), mono(b / u), mono(I / (u * a * b)), mono(u)])
    h1 = [K.frac("t1"), K.f(["t1"]).inverse(), K.binom(u, a * v) * K.binom(u, v / a) / K.binom(u, v) ** 2]
    Q = ["t1", "u", "v"]
    last = [mono(u / v), K.binom(v, I)]
    V1 = cyc(Q, h1 + [mono(v / u), mono(a * v / u), mono(v / (u * a))] + last)
    V2 = cyc(Q, h1 + [mono(a * v / u), mono(v / u), mono(v / (a * u))] + last)
    V3 = cyc(Q, h1 + [mono(a * v / u), mono(v / (u * a)), mono(v / u)] + last)
    return spec, K, dict(U1=U1, U2=U2, U3=U3, U4=U4, U5=U5, V1=V1, V2=V2, V3=V3)


def _bd_equals(term, combo) -> bool:
    rhs = CycleSum([c.scaled(k) for c, k in combo])
    return sum_is_zero(boundary(CycleSum([term])) - rhs).verdict == "Zero"


def test_k9_boundaries(k9_pieces):
    spec, K, X = k9_pieces
    Z = C.build_Z(spec)
    (W1,) = list(C.build_W1(spec))
    W2 = C._w2_k9_terms(K)
    h = Fraction(1, 2)
    assert _bd_equals(Z, [(X["U1"], 1)])
    assert W1.coeff == h
    assert _bd_equals(W1, [(X["U1"], -1), (X["U2"], -h), (X["U3"], h), (X["U4"], -h), (X["U5"], h)])
    assert _bd_equals(W2[0], [(X["V1"], -1), (X["U2"], 1)])
    assert _bd_equals(W2[1], [(X["V2"], -1), (X["U3"], 1)])
    assert _bd_equals(W2[2], [(X["V3"], -1), (X["U4"], 1)])
    assert _bd_equals(W2[3], [(X["U5"], 1), (X["V1"], -1), (X["V2"], 1), (X["V3"], -1)])


def test_k9_boundaries_wrong_sign_detected(k9_pieces):
    spec, K, X = k9_pieces
    W2 = C._w2_k9_terms(K)
    assert not _bd_equals(W2[0], [(X["V1"], 1), (X["U2"], 1)])


# -- mutations ----------------------------------------------------------------------------------

def _mutate(s: CycleSum, fn) -> CycleSum:
    return CycleSum([y for y in (fn(t) for t in s) if y is not None])


@pytest.mark.parametrize("n,N", [(4, 3), (5, 2), (6, 2)])
def test_dropping_a_w2_term_breaks_closedness(n, N):
    s = C.assemble_tildeZ(C.CycleSpec(n, N, 1, "general"))
    assert closed(s)
    for i in range(1, n):
        lab = f"W2^({i})"
        m = _mutate(s, lambda t: None if t.label == lab else t)
        if n == 4 and i <= 2:
            # these two normalize to Empty at n = 4, so dropping them changes nothing
            assert closed(m)
        else:
            assert not closed(m), lab


@pytest.mark.parametrize("n,N,v", [(3, 5, "auto"), (4, 3, "general"), (5, 2, "k9_appendix"), (6, 2, "general")])
def test_doubling_w1_breaks_closedness(n, N, v):
    s = C.assemble_tildeZ(C.CycleSpec(n, N, 1, v))
    assert not closed(_mutate(s, lambda t: t.scaled(2) if t.label.startswith("W1") else t))


def test_printed_w1_sign_fails_at_n4():
    # the printed prefactor (-1)^(n-1) / (n-3) flips W1 at n = 4
    s = C.assemble_tildeZ(C.CycleSpec(4, 3, 1, "general"))
    flipped = _mutate(s, lambda t: t.scaled(-1) if t.label == "W1" else t)
    assert not closed(flipped)
    assert closed(s)


# -- supports, integrality, Galois ---------------------------------------------------------------

def test_support_report_all_variants():
    for n, v in [(3, "auto"), (4, "k7_first"), (4, "k7_second"), (4, "general"), (5, "k9_appendix"), (6, "general")]:
        rows = C.support_report(C.assemble_tildeZ(C.CycleSpec(n, 5, 2, v)))
        assert rows and all(r["t_product"] for r in rows)
        assert not any(r["literal_product"] for r in rows)


def test_support_negative_controls():
    s = C.assemble_tildeZ(C.CycleSpec(5, 5, 1))
    W1 = next(t for t in s if t.label == "W1")
    assert C.support_check(W1)
    assert not C.support_check(W1, xi=CycloElem.one(5))
    Z = next(t for t in s if t.label == "Z")
    assert not C.support_check(Z, i=1)


def test_infer_xi():
    s = C.assemble_tildeZ(C.CycleSpec(4, 7, 3))
    for t in s:
        assert C.infer_xi(t) == CycloElem.root(7, 3)


@pytest.mark.parametrize("n,v,scale", [(3, "auto", 2), (4, "k7_first", 2), (4, "k7_second", 1), (4, "general", 1),
                                       (5, "k9_appendix", 2), (5, "general", 2), (6, "general", 3),
                                       (7, "general", 4)])
def test_integrality_scale(n, v, scale):
    s = C.assemble_tildeZ(C.CycleSpec(n, 3, 1, v))
    assert C.integrality_scale(s) == scale


def test_k7_first_not_cleared_by_epsilon4():
    s = C.assemble_tildeZ(C.CycleSpec(4, 3, 1, "k7_first"))
    assert C.epsilon_n(4) % C.integrality_scale(s) != 0


@pytest.mark.parametrize("n,N,b,c", [(3, 5, 1, 2), (4, 7, 1, 3), (5, 5, 2, 3)])
def test_galois_conjugate_matches_rebuilt_cycle(n, N, b, c):
    base = C.assemble_tildeZ(C.CycleSpec(n, N, b))
    conj = C.galois_conjugate(base, c)
    target = C.assemble_tildeZ(C.CycleSpec(n, N, b * c % N))
    assert C.compare_constructions(conj, target).verdict == "Zero"
    assert closed(conj)


# -- general construction internals -------------------------------------------------------------

def test_general_pieces_and_cancellation_rows():
    Z, W1t, W2 = C.general_pieces(C.CycleSpec(6, 2, 1))
    assert Z.label == "Z" and W1t.coeff == 1 and len(W2) == 5
    rows = C.face_cancellation(C.CycleSpec(6, 2, 1))
    assert len(rows) == sum(range(1, 5)) and all(r["ok"] for r in rows)


def test_k7_variants_termwise_undecidable():
    a = C.assemble_tildeZ(C.CycleSpec(4, 3, 1, "k7_first"))
    b = C.assemble_tildeZ(C.CycleSpec(4, 3, 1, "k7_second"))
    assert C.compare_constructions(a, b).verdict != "Zero"
