"""Twist families over F_q(t), their points, group law and Frobenius maps.

Families (``s`` is a sign in {1, -1}):

* ``quadratic``:  A(t) y^2 = f(x), f a squarefree cubic over F_q, odd characteristic
* ``cubic``:      y^2 - y = A(t) x^3, characteristic != 3
* ``quartic``:    y^2 = s (x^3 - D(t) x), characteristic != 2
* ``sextic``:     y^2 = s x^3 + D(t), characteristic not 2 or 3

For quartic and sextic curves the twisting polynomial is kept in ``A`` as well.
"""
from __future__ import annotations

from dataclasses import dataclass

from isotwist.additive import poly_frobenius
from isotwist.algebra import FieldDesc, Fe, Poly, RatFunc, field_from_json, is_squarefree, max_q
from isotwist.errors import DomainError, PreconditionError

FAMILIES = ("quadratic", "cubic", "quartic", "sextic")
# the twist order m attached to each family
TWIST_ORDER = {"quadratic": 2, "cubic": 3, "quartic": 4, "sextic": 6}


class FPoint:
    """A point with coordinates in F_q(t), or the point at infinity."""

    __slots__ = ("x", "y")

    def __init__(self, x=None, y=None):
        if (x is None) != (y is None):
            raise ValueError("both coordinates or neither")
        self.x = None if x is None else RatFunc(x) if isinstance(x, Poly) else x
        self.y = None if y is None else RatFunc(y) if isinstance(y, Poly) else y

    @classmethod
    def infinity(cls) -> "FPoint":
        return cls()

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def is_integral(self) -> bool:
        """Both coordinates are polynomials in t (the point at infinity is not)."""
        return not self.is_infinity and self.x.is_poly() and self.y.is_poly()

    def is_constant(self) -> bool:
        return self.is_infinity or (self.x.is_constant() and self.y.is_constant())

    def __eq__(self, other):
        if not isinstance(other, FPoint):
            return NotImplemented
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash(None) if self.is_infinity else hash((self.x, self.y))

    def __repr__(self):
        return "O" if self.is_infinity else f"({self.x!r}, {self.y!r})"

    def map(self, fn) -> "FPoint":
        return self if self.is_infinity else FPoint(fn(self.x), fn(self.y))

    def to_json(self):
        if self.is_infinity:
            return "infinity"
        return {"x": self.x.to_json(), "y": self.y.to_json()}

    @classmethod
    def from_json(cls, field: FieldDesc, data) -> "FPoint":
        if data == "infinity":
            return cls()
        return cls(RatFunc.from_json(field, data["x"]), RatFunc.from_json(field, data["y"]))


def rf_frobenius(r: RatFunc, Q: int) -> RatFunc:
    """r^Q for Q a power of the characteristic."""
    return RatFunc._make(poly_frobenius(r.num, Q), poly_frobenius(r.den, Q))


class TwistCurve:
    """One member of a twist family over F_q(t)."""

    def __init__(self, field: FieldDesc, family: str, A: Poly, f: Poly | None = None, sign: int = 1):
        if family not in FAMILIES:
            raise DomainError(f"unknown family {family!r}")
        if A.field != field:
            raise DomainError("twisting polynomial over the wrong field")
        if A.is_zero():
            raise PreconditionError("twisting polynomial must be nonzero")
        p = field.p
        if family == "quadratic":
            if p == 2:
                raise PreconditionError("quadratic twists need odd characteristic")
            if f is None or f.deg != 3:
                raise PreconditionError("quadratic twist needs a cubic f")
            if f.field != field:
                raise DomainError("cubic over the wrong field")
            if not is_squarefree(f):
                raise PreconditionError("f must be squarefree")
            if not is_squarefree(A):
                raise PreconditionError("A must be squarefree")
        elif family == "cubic" and p == 3:
            raise PreconditionError("y^2 - y = A x^3 is singular in characteristic 3")
        elif family == "quartic" and p == 2:
            raise PreconditionError("quartic twists need characteristic != 2")
        elif family == "sextic" and p in (2, 3):
            raise PreconditionError("sextic twists need characteristic not 2 or 3")
        if sign not in (1, -1):
            raise DomainError("sign must be 1 or -1")
        self.field = field
        self.family = family
        self.A = A
        self.f = f
        self.sign = sign

    @property
    def D(self) -> Poly:
        return self.A

    @property
    def q(self) -> int:
        return self.field.q

    def __eq__(self, other):
        if not isinstance(other, TwistCurve):
            return NotImplemented
        return (self.field, self.family, self.A, self.f, self.sign) == (
            other.field,
            other.family,
            other.A,
            other.f,
            other.sign,
        )

    def __repr__(self):
        s = "" if self.sign == 1 else "-"
        return {
            "quadratic": f"({self.A!r}) y^2 = {self.f!r} [x]",
            "cubic": f"y^2 - y = ({self.A!r}) x^3",
            "quartic": f"y^2 = {s}(x^3 - ({self.A!r}) x)",
            "sextic": f"y^2 = {s}x^3 + {self.A!r}",
        }[self.family] + f" over {self.field}"

    # equation ---------------------------------------------------------------
    def residual(self, P: FPoint) -> RatFunc:
        """lhs - rhs of the defining equation at P."""
        x, y = P.x, P.y
        A = RatFunc(self.A)
        s = self.sign
        if self.family == "quadratic":
            return A * y * y - self.f.compose(x)
        if self.family == "cubic":
            return y * y - y - A * x * x * x
        if self.family == "quartic":
            return y * y - (x * x * x - A * x) * s
        return y * y - x * x * x * s - A

    def contains(self, P: FPoint) -> bool:
        return P.is_infinity or self.residual(P).is_zero()

    def certificate(self, P: FPoint) -> dict:
        """Cleared-denominator identity lhs == rhs, restated as machine-checkable data."""
        if P.is_infinity:
            return {"identity": "infinity", "holds": True}
        r = self.residual(P)
        return {
            "identity": "lhs - rhs",
            "residual_num": r.num.to_json(),
            "holds": r.is_zero(),
        }

    # serialization ------------------------------------------------------------
    def to_json(self) -> dict:
        out = {"family": self.family, "field": self.field.to_json(), "A": self.A.to_json()}
        if self.f is not None:
            out["f"] = self.f.to_json()
        if self.family in ("quartic", "sextic"):
            out["sign"] = self.sign
        return out

    @classmethod
    def from_json(cls, data: dict) -> "TwistCurve":
        F = field_from_json(data["field"])
        f = Poly.from_json(F, data["f"]) if data.get("f") is not None else None
        return cls(F, data["family"], Poly.from_json(F, data["A"]), f, int(data.get("sign", 1)))

    # group law via a generalized Weierstrass model ---------------------------
    def weierstrass(self) -> "GWModel":
        return to_weierstrass(self)

    def neg(self, P: FPoint) -> FPoint:
        M = to_weierstrass(self)
        return M.from_model(M.neg(M.to_model(P)))

    def add(self, P: FPoint, Q: FPoint) -> FPoint:
        M = to_weierstrass(self)
        return M.from_model(point_add(M, M.to_model(P), M.to_model(Q)))

    def mul(self, n: int, P: FPoint) -> FPoint:
        M = to_weierstrass(self)
        return M.from_model(M.mul(n, M.to_model(P)))


@dataclass(frozen=True)
class GWModel:
    """Y^2 + a1 XY + a3 Y = X^3 + a2 X^2 + a4 X + a6, with X = sx x, Y = sy y."""

    a1: RatFunc
    a2: RatFunc
    a3: RatFunc
    a4: RatFunc
    a6: RatFunc
    sx: RatFunc
    sy: RatFunc

    @property
    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        b2 = a1 * a1 + a2 * 4
        b4 = a4 * 2 + a1 * a3
        b6 = a3 * a3 + a6 * 4
        b8 = a1 * a1 * a6 + a2 * a6 * 4 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def discriminant(self) -> RatFunc:
        b2, b4, b6, b8 = self.b_invariants
        return -(b2 * b2 * b8) - b4 * b4 * b4 * 8 - b6 * b6 * 27 + b2 * b4 * b6 * 9

    def residual(self, P: FPoint) -> RatFunc:
        X, Y = P.x, P.y
        return Y * Y + self.a1 * X * Y + self.a3 * Y - (X * X * X + self.a2 * X * X + self.a4 * X + self.a6)

    def contains(self, P: FPoint) -> bool:
        return P.is_infinity or self.residual(P).is_zero()

    def to_model(self, P: FPoint) -> FPoint:
        return P if P.is_infinity else FPoint(P.x * self.sx, P.y * self.sy)

    def from_model(self, P: FPoint) -> FPoint:
        return P if P.is_infinity else FPoint(P.x / self.sx, P.y / self.sy)

    def neg(self, P: FPoint) -> FPoint:
        if P.is_infinity:
            return P
        return FPoint(P.x, -P.y - self.a1 * P.x - self.a3)

    def mul(self, n: int, P: FPoint) -> FPoint:
        if n < 0:
            return self.mul(-n, self.neg(P))
        R = FPoint.infinity()
        while n:
            if n & 1:
                R = point_add(self, R, P)
            n >>= 1
            if n:
                P = point_add(self, P, P)
        return R


def to_weierstrass(C: TwistCurve) -> GWModel:
    F = C.field
    one = RatFunc(Poly.const(F, 1))
    zero = RatFunc(Poly(F, []))
    A = RatFunc(C.A)
    if C.family == "quadratic":
        c0, c1, c2, c3 = (RatFunc(Poly.const(F, C.f.coeff(i))) for i in range(4))
        return GWModel(
            a1=zero,
            a2=c2 * A,
            a3=zero,
            a4=c1 * c3 * A * A,
            a6=c0 * c3 * c3 * A * A * A,
            sx=c3 * A,
            sy=c3 * A * A,
        )
    if C.family == "cubic":
        return GWModel(zero, zero, -A, zero, zero, A, A)
    s = RatFunc(Poly.const(F, C.sign))
    if C.family == "quartic":
        # y^2 = s(x^3 - Dx); for s = -1 substitute X = -x
        return GWModel(zero, zero, zero, -A, zero, s, one)
    return GWModel(zero, zero, zero, zero, A, s, one)


def point_add(M: GWModel, P: FPoint, Q: FPoint) -> FPoint:
    """Chord-tangent addition on a generalized Weierstrass model (any characteristic)."""
    for R in (P, Q):
        if not M.contains(R):
            raise DomainError(f"point {R!r} is not on the model")
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    a1, a2, a3, a4, a6 = M.a1, M.a2, M.a3, M.a4, M.a6
    if x1 == x2:
        if (y1 + y2 + a1 * x2 + a3).is_zero():
            return FPoint.infinity()
        den = y1 * 2 + a1 * x1 + a3
        lam = (x1 * x1 * 3 + a2 * x1 * 2 + a4 - a1 * y1) / den
        nu = (-(x1 * x1 * x1) + a4 * x1 + a6 * 2 - a3 * y1) / den
    else:
        dx = x2 - x1
        lam = (y2 - y1) / dx
        nu = (y1 * x2 - y2 * x1) / dx
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -((lam + a1) * x3) - nu - a3
    return FPoint(x3, y3)


# Frobenius ---------------------------------------------------------------------

def descent_exponent(C: TwistCurve) -> int:
    """Least e with m | q^e - 1, m the twist order of the family."""
    m = TWIST_ORDER[C.family]
    q = C.q
    if q % 2 == 0 and m % 2 == 0 or q % 3 == 0 and m % 3 == 0:
        raise PreconditionError(f"{C.family} family has no Frobenius descent for q={q}")
    e = 1
    while (q**e - 1) % m:
        e += 1
    return e


def _twist_factors(C: TwistCurve, Q: int) -> tuple[RatFunc, RatFunc]:
    """(u, v) such that the Frobenius step is (u x^Q, v y^Q)."""
    F = C.field
    one = RatFunc(Poly.const(F, 1))
    A = RatFunc(C.A)
    if C.family == "quadratic":
        return one, A ** ((Q - 1) // 2)
    if C.family == "cubic":
        return A ** ((Q - 1) // 3), one
    if C.family == "quartic":
        return A ** (-((Q - 1) // 2)), A ** (-(3 * (Q - 1) // 4))
    return A ** (-((Q - 1) // 3)), A ** (-((Q - 1) // 2))


def frobenius_step(C: TwistCurve, P: FPoint) -> FPoint:
    """Image of P under the descended Frobenius F^e of the constant model."""
    if P.is_infinity:
        return P
    Q = C.q ** descent_exponent(C)
    u, v = _twist_factors(C, Q)
    return FPoint(u * rf_frobenius(P.x, Q), v * rf_frobenius(P.y, Q))


def frobenius_preimage(C: TwistCurve, P: FPoint) -> FPoint | None:
    """The point R with frobenius_step(R) = P, if one exists over F_q(t)."""
    if P.is_infinity:
        return P
    Q = C.q ** descent_exponent(C)
    u, v = _twist_factors(C, Q)
    x = (P.x / u).frobenius_root(Q)
    y = (P.y / v).frobenius_root(Q)
    if x is None or y is None:
        return None
    return FPoint(x, y)


def is_separable(C: TwistCurve, P: FPoint, method: str = "auto") -> bool:
    """Is P outside the Frobenius image of every point?

    ``auto`` uses x' != 0 for quadratic twists and, for the other families, a
    derivative shortcut backed by the preimage test.  ``preimage`` and
    ``derivative`` force one route (the latter only for quadratic twists).
    """
    if P.is_constant():
        raise PreconditionError("separability is defined only for non-constant points")
    if method not in ("auto", "preimage", "derivative"):
        raise ValueError(f"unknown method {method!r}")
    if method == "derivative" or (method == "auto" and C.family == "quadratic"):
        if C.family != "quadratic":
            raise PreconditionError("the derivative criterion is an equivalence only for quadratic twists")
        return not P.x.derivative().is_zero()
    if method == "auto" and C.family == "cubic" and not P.y.derivative().is_zero():
        return True
    return frobenius_preimage(C, P) is None


def orbit_root(C: TwistCurve, P: FPoint, max_steps: int = 64) -> tuple[FPoint, int]:
    """(R, i) with R separable and frobenius_step^i(R) = P."""
    if P.is_constant():
        raise PreconditionError("orbit roots are defined only for non-constant points")
    i = 0
    while i < max_steps:
        R = frobenius_preimage(C, P)
        if R is None or R.is_constant():
            return P, i
        P, i = R, i + 1
    raise PreconditionError("Frobenius preimage chain did not terminate")


def same_orbit(C: TwistCurve, P1: FPoint, P2: FPoint) -> bool:
    return orbit_root(C, P1)[0] == orbit_root(C, P2)[0]


def is_supersingular(f: Poly, model: str = "weierstrass") -> bool:
    """Supersingularity of y^2 = f(x) (``weierstrass``) or y^2 - y = f(x) (``artin-schreier``) over F_q.

    Counts points by enumeration and tests q + 1 - N == 0 mod p.
    """
    F = f.field
    if f.deg != 3:
        raise PreconditionError("f must be a cubic")
    if model not in ("weierstrass", "artin-schreier"):
        raise ValueError(f"unknown model {model!r}")
    if F.q > max_q():
        raise PreconditionError(f"point count over a field of order {F.q} exceeds ISOTWIST_MAX_Q")
    c = [RatFunc(Poly.const(F, f.coeff(i))) for i in range(4)]
    zero = RatFunc(Poly(F, []))
    a3 = -c[3] if model == "artin-schreier" else zero
    M = GWModel(zero, c[2], a3, c[1] * c[3], c[0] * c[3] * c[3], c[3], c[3])
    if M.discriminant().is_zero():
        raise PreconditionError("singular cubic model")
    # hist[v] = #{y : lhs(y) = v}
    hist = [0] * F.q
    for y in range(F.q):
        v = F.mul(y, y)
        if model == "artin-schreier":
            v = F.sub(v, y)
        hist[v] += 1
    N = 1 + sum(hist[f(Fe(F, x)).code] for x in range(F.q))
    return (F.q + 1 - N) % F.p == 0


def count_points(f: Poly, model: str = "weierstrass") -> int:
    """#E(F_q) including infinity, by enumeration."""
    F = f.field
    hist = [0] * F.q
    for y in range(F.q):
        v = F.mul(y, y)
        if model == "artin-schreier":
            v = F.sub(v, y)
        hist[v] += 1
    return 1 + sum(hist[f(Fe(F, x)).code] for x in range(F.q))
