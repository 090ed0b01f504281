import itertools

import pytest
from hypothesis import given, strategies as st

from isotwist.algebra import (
    Fe,
    Poly,
    RatFunc,
    _fp_is_irreducible,
    divisors,
    factorize,
    fe_residue,
    field_embedding,
    field_from_json,
    field_make,
    field_of_order,
    is_squarefree,
    poly_roots,
    poly_sqrt,
    prime_power,
)
from isotwist.errors import DomainError, PreconditionError

FIELDS = [2, 3, 4, 5, 7, 9]


def polys(q, max_deg=5, nonzero=False):
    F = field_of_order(q)
    codes = st.lists(st.integers(0, q - 1), min_size=1 if nonzero else 0, max_size=max_deg + 1)
    s = codes.map(lambda cs: Poly._raw(F, tuple(cs)) if not cs or cs[-1] else Poly(F, [Fe(F, c) for c in cs]))
    return s.filter(lambda P: not P.is_zero()) if nonzero else s


def schoolbook(a: Poly, b: Poly) -> Poly:
    F = a.field
    if a.is_zero() or b.is_zero():
        return Poly(F, [])
    out = [0] * (len(a.c) + len(b.c) - 1)
    for i, x in enumerate(a.c):
        for j, y in enumerate(b.c):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return Poly(F, [Fe(F, c) for c in out])


# integers ---------------------------------------------------------------------

def test_integer_helpers():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert prime_power(49) == (7, 2)
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    with pytest.raises(ValueError):
        prime_power(12)


# fields -----------------------------------------------------------------------

def _brute_irreducible(m, p):
    """No monic factor of degree 1..deg/2, by trial division over all candidates."""
    F = field_make(p)
    P = Poly(F, m)
    for d in range(1, P.deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            if (P % Poly(F, list(tail) + [1])).is_zero():
                return False
    return True


@pytest.mark.parametrize("p,deg", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_irreducibility_matches_trial_division(p, deg):
    for tail in itertools.product(range(p), repeat=deg):
        m = list(tail) + [1]
        assert _fp_is_irreducible(m, p) == _brute_irreducible(m, p), m


def test_smallest_moduli():
    assert field_make(3, 2).modulus == (1, 0, 1)
    assert field_make(2, 3).modulus == (1, 1, 0, 1)
    assert field_make(2, 2).modulus == (1, 1, 1)


@pytest.mark.parametrize("q", [4, 8, 9, 25, 27])
def test_field_axioms_exhaustive(q):
    F = field_of_order(q)
    els = range(q)
    for a in els:
        assert F.pow(a, q) == a
        if a:
            assert F.mul(a, F.inv(a)) == 1
        assert F.add(a, F.neg(a)) == 0
    sample = list(els)[: min(q, 9)]
    for a, b, c in itertools.product(sample, repeat=3):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    g = F.primitive_element()
    assert len({F.pow(g, k) for k in range(q - 1)}) == q - 1


@pytest.mark.parametrize("q", [4, 9, 16, 25])
def test_tables_agree_with_scalar_arithmetic(q):
    F = field_of_order(q)
    exp, log, zech = F.tables()
    for a in range(1, q):
        assert int(exp[log[a]]) == a
    for a in range(1, q):
        for b in range(1, q):
            assert int(exp[(log[a] + log[b]) % (q - 1)]) == F.mul(a, b)


def test_fe_operators_and_json():
    F = field_of_order(9)
    a, b = F.gen(), F(2)
    assert (a * b) / b == a
    assert a ** (9 - 1) == F.one
    assert -a + a == F.zero
    assert field_from_json(F.to_json()) == F
    with pytest.raises(DomainError):
        a + field_of_order(3)(1)


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9, 13, 16, 25, 27, 49, 81])
@pytest.mark.parametrize("m", [2, 3])
def test_residue_matches_euler_criterion(q, m):
    F = field_of_order(q)
    powers = {F.pow(x, m) for x in range(q)}
    for a in range(q):
        ok, root = fe_residue(Fe(F, a), m)
        assert ok == (a in powers)
        if ok:
            assert root ** m == Fe(F, a)


def test_residue_example():
    F = field_of_order(7)
    ok, r = fe_residue(F(2), 2)
    assert ok and r == F(4)


def test_embedding_is_a_ring_map():
    small, big = field_of_order(4), field_of_order(16)
    e = field_embedding(small, big)
    for a in range(4):
        for b in range(4):
            assert e(small.mul(a, b)) == big.mul(e(a), e(b))
            assert e(small.add(a, b)) == big.add(e(a), e(b))


# polynomials --------------------------------------------------------------------

@pytest.mark.parametrize("q", FIELDS)
@given(data=st.data())
def test_multiplication_matches_schoolbook(q, data):
    a = data.draw(polys(q, 12))
    b = data.draw(polys(q, 12))
    assert a * b == schoolbook(a, b)


@pytest.mark.parametrize("q", FIELDS)
@given(data=st.data())
def test_divrem_reconstructs(q, data):
    a = data.draw(polys(q, 8))
    b = data.draw(polys(q, 4, nonzero=True))
    quo, rem = a.divrem(b)
    assert quo * b + rem == a
    assert rem.is_zero() or rem.deg < b.deg


@pytest.mark.parametrize("q", FIELDS)
@given(data=st.data())
def test_xgcd_bezout(q, data):
    a = data.draw(polys(q, 6, nonzero=True))
    b = data.draw(polys(q, 6, nonzero=True))
    g, s, t = a.xgcd(b)
    assert s * a + t * b == g
    assert g.divides(a) and g.divides(b)
    assert g.lc() == a.field.one


@pytest.mark.parametrize("q", FIELDS)
@given(data=st.data())
def test_leibniz_rule(q, data):
    a = data.draw(polys(q, 6))
    b = data.draw(polys(q, 6))
    assert (a * b).derivative() == a.derivative() * b + a * b.derivative()


@pytest.mark.parametrize("q", FIELDS)
@given(data=st.data())
def test_composition_matches_evaluation(q, data):
    a = data.draw(polys(q, 4))
    b = data.draw(polys(q, 3))
    F = a.field
    c = a.compose(b)
    for x in F.elements():
        assert c(x) == a(b(x))


@pytest.mark.parametrize("q", FIELDS)
@given(data=st.data())
def test_sqrt_of_square(q, data):
    a = data.draw(polys(q, 5))
    s = poly_sqrt(a * a)
    assert s is not None and s * s == a * a


@pytest.mark.parametrize("q", [2, 3, 4, 9])
@given(data=st.data())
def test_frobenius_root_inverts_power(q, data):
    a = data.draw(polys(q, 4))
    for Q in (q, q * q):
        assert (a ** Q).frobenius_root(Q) == a


def test_frobenius_root_rejects_non_powers():
    F = field_of_order(3)
    t = Poly.t(F)
    assert (t**3 + t).frobenius_root(3) is None
    assert (t**3 + 1).frobenius_root(3) == t + 1


def test_power_shortcut_keeps_extension_coefficients():
    F = field_of_order(4)
    w = F.gen()
    assert (Poly.t(F).scale(w)) ** 2 == Poly.monomial(F, 2, w * w)


@pytest.mark.parametrize("q", [3, 4, 7, 9])
@given(data=st.data())
def test_roots_match_evaluation(q, data):
    a = data.draw(polys(q, 5, nonzero=True))
    F = a.field
    if a.is_constant():
        return
    roots = poly_roots(a)
    brute = sorted(x.code for x in F.elements() if a(x) == F.zero)
    assert sorted({r.code for r in roots}) == brute


def test_squarefree():
    F = field_of_order(3)
    t = Poly.t(F)
    assert is_squarefree(t**3 - t)
    assert not is_squarefree((t - 1) ** 2 * t)


def test_poly_json_round_trip():
    F = field_of_order(9)
    P = Poly(F, [F.gen(), 0, 1, F(2)])
    assert Poly.from_json(F, P.to_json()) == P


# rational functions ---------------------------------------------------------------

@pytest.mark.parametrize("q", [3, 4, 5])
@given(data=st.data())
def test_ratfunc_field_operations(q, data):
    a, c = data.draw(polys(q, 3)), data.draw(polys(q, 3))
    b, d = data.draw(polys(q, 3, nonzero=True)), data.draw(polys(q, 3, nonzero=True))
    r, s = RatFunc(a, b), RatFunc(c, d)
    assert (r + s) * RatFunc(b * d) == RatFunc(a * d + c * b)
    assert r - r == RatFunc(Poly(a.field, []))
    if not a.is_zero():
        assert r * r.inverse() == RatFunc(Poly.const(a.field, 1))
        assert r ** -2 == (r * r).inverse()
    # quotient rule
    assert r.derivative() == RatFunc(a.derivative() * b - a * b.derivative(), b * b)


def test_ratfunc_normalized_and_json():
    F = field_of_order(5)
    t = Poly.t(F)
    r = RatFunc(t * t - 1, (t - 1).scale(2))
    assert r.is_poly() and r.as_poly() == (t + 1).scale(F(2).inverse())
    assert RatFunc.from_json(F, r.to_json()) == r
    with pytest.raises((ZeroDivisionError, DomainError, PreconditionError, ValueError)):
        RatFunc(t, Poly(F, []))


def test_ratfunc_composition_over_extension():
    F = field_of_order(4)
    w = F.gen()
    t = Poly.t(F)
    P = Poly(F, [1, w, w * w])
    g = RatFunc(t + w, t + 1)
    c = P.compose(g)
    for x in F.elements():
        if (x + 1) != F.zero:
            gx = (x + w) / (x + 1)
            assert c.num(x) / c.den(x) == P(gx)
