import itertools

import pytest

from isotwist.algebra import Poly, field_of_order
from isotwist.constructions import (
    NO_MATRIX_STATUS,
    OrthMatrix,
    general_point_quadratic,
    hermitian_identity_check,
    main_point_cubic,
    main_point_quadratic,
    main_points,
    odd_divisors,
    orthogonal_group,
    tau_odd,
    tau_points,
    translated_scaled_points,
)
from isotwist.curves import same_orbit
from isotwist.errors import PreconditionError


def test_divisor_counts():
    assert tau_odd(1) == 1 and tau_odd(2) == 1 and tau_odd(9) == 3 and tau_odd(12) == 2
    assert odd_divisors(15) == [1, 3, 5, 15]


def test_cli_example_point():
    con = main_point_quadratic(3, 3, 1)
    t = Poly.t(field_of_order(3))
    assert con.point.x.as_poly() == t**9 + t**3 + t
    assert con.point.y.as_poly() == Poly.const(t.field, 1)
    assert con.verify() and con.separable


@pytest.mark.parametrize("q,n", [(3, 1), (3, 3), (7, 1), (7, 3), (11, 1)])
def test_quadratic_family(q, n):
    cons = main_points(q, n)
    assert len(cons) == tau_odd(n)
    for c in cons:
        assert c.verify() and c.separable
        assert c.degrees["x"] == (q**n - q ** (n - c.k)) // 2
    for a, b in itertools.combinations(cons, 2):
        assert not same_orbit(a.curve, a.point, b.point)


@pytest.mark.parametrize("q,n", [(2, 1), (2, 3), (5, 1), (5, 3)])
def test_cubic_family(q, n):
    cons = main_points(q, n, "cubic")
    for c in cons:
        assert c.verify() and c.separable
        assert c.degrees["y"] == q**n - q ** (n - c.k)


def test_precondition_errors():
    with pytest.raises(PreconditionError):
        main_point_quadratic(5, 1, 1)
    with pytest.raises(PreconditionError):
        main_point_quadratic(3, 3, 2)
    with pytest.raises(PreconditionError):
        main_point_cubic(2, 2, 2)
    with pytest.raises(PreconditionError):
        main_point_cubic(3, 1, 1)


@pytest.mark.parametrize("k", [1, 3])
def test_general_point(k):
    F = field_of_order(3)
    t = Poly.t(F)
    A0 = (t**k - 1) * (t**2 + 2 * t + 2)
    con = general_point_quadratic(A0, k)
    assert con.verify() and con.separable


def test_translates_and_scaled_points():
    base = main_point_quadratic(3, 2, 1)
    tr, sc = translated_scaled_points(base)
    assert len(tr) == 3 and len(sc) == 2
    assert all(c.verify() and c.separable for c in tr + sc)
    assert all(c.curve == base.curve for c in tr)
    for a, b in itertools.combinations(tr, 2):
        assert not same_orbit(base.curve, a.point, b.point)
    F = base.curve.field
    for a, c in zip((1, 2), sc):
        assert c.curve.A == base.curve.A.scale(F(a))


def _orthogonal_brute(q):
    F = field_of_order(q)
    out = []
    for a, b, c, d in itertools.product(range(q), repeat=4):
        if (
            F.add(F.mul(a, a), F.mul(c, c)) == 1
            and F.add(F.mul(b, b), F.mul(d, d)) == 1
            and F.add(F.mul(a, b), F.mul(c, d)) == 0
        ):
            out.append((a, b, c, d))
    return out


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11])
def test_orthogonal_group_matches_brute_force(q):
    G = orthogonal_group(q)
    got = sorted((M.a.code, M.b.code, M.c.code, M.d.code) for M in G)
    assert got == sorted(_orthogonal_brute(q))
    # |O(2, q)| = 2 (q - eps), eps = +1 iff -1 is a square
    eps = 1 if q % 4 == 1 else -1
    assert len(G) == 2 * (q - eps)


def test_orthogonal_matrix_validation():
    F = field_of_order(5)
    with pytest.raises(PreconditionError):
        OrthMatrix(F(1), F(1), F(0), F(1))


@pytest.mark.parametrize("q", [3, 5, 7])
def test_hermitian_identity(q):
    for M in orthogonal_group(q):
        for k in (1, 2):
            assert hermitian_identity_check(M, k)


def test_hermitian_identity_fails_for_non_orthogonal_maps():
    F = field_of_order(7)
    M = object.__new__(OrthMatrix)
    for name, v in zip("abcd", (F(1), F(1), F(0), F(1))):
        object.__setattr__(M, name, v)
    assert not hermitian_identity_check(M, 1)


@pytest.mark.parametrize("kind,q,n", [("quartic", 7, 1), ("quartic", 7, 3), ("sextic", 11, 1), ("sextic", 17, 1)])
def test_tau_points(kind, q, n):
    cons, status = tau_points(q, n, kind)
    assert status == "ok"
    assert len(cons) == len([k for k in range(1, n + 1) if n % k == 0])
    assert all(c.verify() for c in cons)


def test_tau_points_empty_case():
    cons, status = tau_points(3, 1, "quartic")
    assert cons == [] and status == NO_MATRIX_STATUS
    assert tau_points(5, 1, "sextic") == ([], NO_MATRIX_STATUS)
    with pytest.raises(PreconditionError):
        tau_points(5, 1, "quartic")
    with pytest.raises(PreconditionError):
        tau_points(7, 2, "quartic")


def test_construction_json_shape():
    con = main_point_quadratic(7, 1, 1)
    js = con.to_json()
    assert js["certificate"]["holds"] and js["label"] == "Q_1"
    assert js["degrees"] == {"x": "3", "y": "1"}
