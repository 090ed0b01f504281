"""Explicit families of polynomial points on twists over F_q(t).

Every factory returns ``Construction`` records carrying the curve, the point and
a certificate computed from the curve equation, so callers can re-check the
claim without trusting the factory.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from isotwist.additive import ap_divisor_witness, ap_from_poly, trace_poly
from isotwist.algebra import Fe, FieldDesc, Poly, divisors, field_of_order, max_q
from isotwist.curves import FPoint, TwistCurve, is_separable
from isotwist.errors import PreconditionError


def tau_odd(n: int) -> int:
    return sum(1 for k in divisors(n) if k % 2)


def odd_divisors(n: int) -> list[int]:
    return [k for k in divisors(n) if k % 2]


@dataclass
class Construction:
    curve: TwistCurve
    point: FPoint
    k: int | None = None
    degrees: dict = dc_field(default_factory=dict)
    separable: bool | None = None
    label: str = ""

    @property
    def certificate(self) -> dict:
        return self.curve.certificate(self.point)

    def verify(self) -> bool:
        return self.curve.contains(self.point) and self.point.is_integral()

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "k": self.k,
            "curve": self.curve.to_json(),
            "point": self.point.to_json(),
            "certificate": self.certificate,
            "degrees": {key: str(v) for key, v in self.degrees.items()},
            "separable": self.separable,
        }


def cubic_x3_minus_x(F: FieldDesc) -> Poly:
    return Poly(F, [0, -1, 0, 1])


def artin_schreier_twist(F: FieldDesc, n: int) -> Poly:
    """t^{q^n} - t."""
    return Poly.monomial(F, F.q**n) - Poly.t(F)


def _points_degree(P: FPoint) -> dict:
    return {"x": int(P.x.num.deg), "y": int(P.y.num.deg)}


def main_point_quadratic(q: int, n: int, k: int) -> Construction:
    """Q_k = (B^{(Q-1)/2}, B^{(Q-3)/4}), B = T^n_k, Q = q^k, on (t^{q^n} - t) y^2 = x^3 - x."""
    if q % 4 != 3:
        raise PreconditionError(f"q={q} must be 3 mod 4")
    if k % 2 == 0 or n % k:
        raise PreconditionError(f"k={k} must be an odd divisor of n={n}")
    F = field_of_order(q)
    B = trace_poly(q, n, k).expand()
    Q = q**k
    P = FPoint(B ** ((Q - 1) // 2), B ** ((Q - 3) // 4))
    C = TwistCurve(F, "quadratic", artin_schreier_twist(F, n), cubic_x3_minus_x(F))
    return Construction(C, P, k, _points_degree(P), is_separable(C, P), f"Q_{k}")


def main_point_cubic(q: int, n: int, k: int) -> Construction:
    """S_k = (B^{(Q-2)/3}, B^{Q-1}), B = T^n_k, Q = q^k, on y^2 - y = (t^{q^n} - t) x^3."""
    if q % 3 != 2:
        raise PreconditionError(f"q={q} must be 2 mod 3")
    if n % k:
        raise PreconditionError(f"k={k} must divide n={n}")
    Q = q**k
    if Q % 3 != 2:
        raise PreconditionError(f"q^k={Q} must be 2 mod 3, so k must be odd")
    F = field_of_order(q)
    B = trace_poly(q, n, k).expand()
    P = FPoint(B ** ((Q - 2) // 3), B ** (Q - 1))
    C = TwistCurve(F, "cubic", artin_schreier_twist(F, n))
    return Construction(C, P, k, _points_degree(P), is_separable(C, P), f"S_{k}")


def main_points(q: int, n: int, family: str = "quadratic") -> list[Construction]:
    """All points of the family for the odd divisors k of n."""
    make = main_point_quadratic if family == "quadratic" else main_point_cubic
    return [make(q, n, k) for k in odd_divisors(n)]


def general_point_quadratic(A0: Poly, k: int) -> Construction:
    """Point on A0(F)(t) y^2 = x^3 - x built from the witness B = (A0/(t^k - 1))(F)."""
    F = A0.field
    q = F.q
    if q % 4 != 3:
        raise PreconditionError(f"q={q} must be 3 mod 4")
    if k % 2 == 0:
        raise PreconditionError(f"k={k} must be odd")
    B = ap_divisor_witness(A0, k).expand()
    Q = q**k
    P = FPoint(B ** ((Q - 1) // 2), B ** ((Q - 3) // 4))
    C = TwistCurve(F, "quadratic", ap_from_poly(A0).expand(), cubic_x3_minus_x(F))
    return Construction(C, P, k, _points_degree(P), is_separable(C, P), f"general_{k}")


def translated_scaled_points(con: Construction) -> tuple[list[Construction], list[Construction]]:
    """({P(t + a) : a in F_q}, {P(a t) : a in F_q^*}).

    Translates stay on the same curve when A(t + a) = A(t) (A additive with
    A(1) = 0 on F_q); the scaled point P(at) lies on the curve with A replaced
    by A(at), which is a*A for A = t^{q^n} - t.
    """
    C, P = con.curve, con.point
    F = C.field
    t = Poly.t(F)
    translates, scaled = [], []
    for a in range(F.q):
        sub = t + Poly.const(F, Fe(F, a))
        R = P.map(lambda r: r.compose(sub))
        Ca = TwistCurve(F, C.family, C.A.compose(sub), C.f, C.sign)
        translates.append(Construction(Ca, R, con.k, _points_degree(R), is_separable(Ca, R), f"{con.label}(t+{a})"))
    for a in range(1, F.q):
        sub = t.scale(Fe(F, a))
        R = P.map(lambda r: r.compose(sub))
        Ca = TwistCurve(F, C.family, C.A.compose(sub), C.f, C.sign)
        scaled.append(Construction(Ca, R, con.k, _points_degree(R), is_separable(Ca, R), f"{con.label}({a}t)"))
    return translates, scaled


@dataclass(frozen=True)
class OrthMatrix:
    """[[a, b], [c, d]] with transpose(M) M = I."""

    a: Fe
    b: Fe
    c: Fe
    d: Fe

    def __post_init__(self):
        a, b, c, d = self.a, self.b, self.c, self.d
        if not (a * a + c * c == 1 and b * b + d * d == 1 and a * b + c * d == 0):
            raise PreconditionError(f"{self.as_lists()} is not orthogonal")

    def as_lists(self):
        return [[self.a, self.b], [self.c, self.d]]

    def key(self):
        return tuple(tuple(v.rep) for v in (self.a, self.b, self.c, self.d))

    def to_json(self):
        return [[self.a.rep, self.b.rep], [self.c.rep, self.d.rep]]


def orthogonal_group(q: int) -> list[OrthMatrix]:
    """All 2x2 matrices over F_q with transpose(M) M = I, in lexicographic digit order."""
    F = field_of_order(q)
    if q > max_q():
        raise PreconditionError(f"q={q} exceeds ISOTWIST_MAX_Q")
    sq = [F.mul(v, v) for v in range(q)]
    circle = [(a, c) for a in range(q) for c in range(q) if F.add(sq[a], sq[c]) == 1]
    out = []
    for a, c in circle:
        for b, d in circle:
            if F.add(F.mul(a, b), F.mul(c, d)) == 0:
                out.append(OrthMatrix(Fe(F, a), Fe(F, b), Fe(F, c), Fe(F, d)))
    out.sort(key=OrthMatrix.key)
    return out


def hermitian_identity_check(M: OrthMatrix, k: int) -> bool:
    """(aX + bY)^{Q+1} + (cX + dY)^{Q+1} == X^{Q+1} + Y^{Q+1} for Q = q^k.

    Both sides are binary forms of degree Q + 1, so they agree iff their
    dehomogenizations at Y = 1 agree as polynomials in X.
    """
    F = M.a.field
    Q = F.q**k
    X = Poly.t(F)
    lhs = (X.scale(M.a) + M.b) ** (Q + 1) + (X.scale(M.c) + M.d) ** (Q + 1)
    rhs = Poly.monomial(F, Q + 1) + Poly.const(F, 1)
    return lhs == rhs


NO_MATRIX_STATUS = "no orthogonal matrix with cd ≠ 0"


def tau_points(q: int, n: int, kind: str, M: OrthMatrix | None = None) -> tuple[list[Construction], str]:
    """One point per divisor k of n on the quartic or sextic twist by t^{q^n+1} + 1.

    Returns (constructions, status); status is "ok" or explains an empty result.
    """
    if kind not in ("quartic", "sextic"):
        raise ValueError(f"unknown kind {kind!r}")
    if n % 2 == 0:
        raise PreconditionError("n must be odd")
    if kind == "quartic" and q % 4 != 3:
        raise PreconditionError(f"quartic construction needs q = 3 mod 4, got q={q}")
    if kind == "sextic" and q % 3 != 2:
        raise PreconditionError(f"sextic construction needs q = 2 mod 3, got q={q}")
    F = field_of_order(q)
    if M is None:
        M = next((m for m in orthogonal_group(q) if m.c * m.d != 0), None)
        if M is None:
            return [], NO_MATRIX_STATUS
    elif M.c * M.d == 0:
        raise PreconditionError("the matrix must have cd != 0")
    D = Poly.monomial(F, q**n + 1) + Poly.const(F, 1)
    C = TwistCurve(F, kind, D)
    out = []
    for k in divisors(n):
        Q = q**k
        r = (q**n + 1) // (Q + 1)
        tr = Poly.monomial(F, r)
        P1 = tr.scale(M.a) + M.b
        P2 = tr.scale(M.c) + M.d
        if kind == "quartic":
            P = FPoint(-(P2 ** ((Q + 1) // 2)), P1 ** ((Q + 1) // 2) * P2 ** ((Q + 1) // 4))
        else:
            P = FPoint(-(P2 ** ((Q + 1) // 3)), P1 ** ((Q + 1) // 2))
        out.append(Construction(C, P, k, _points_degree(P), None, f"tau_{kind}_{k}"))
    return out, "ok"
