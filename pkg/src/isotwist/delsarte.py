"""Delsarte surfaces, Fermat covers and monomial maps applied to rational curves.

A Delsarte surface is the zero set of sum_i c_i prod_j X_j^{A_ij} for an integer
4x4 exponent matrix A.  A monomial map with exponent matrix B sends
(u_0, ..., u_3) to (prod_j u_j^{B_0j}, ..., prod_j u_j^{B_3j}).  Rational curves
are carried as four Laurent polynomials in one parameter t.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from math import lcm

from isotwist.algebra import Fe, FieldDesc, Poly, field_make
from isotwist.curves import FPoint, TwistCurve
from isotwist.errors import DomainError, PreconditionError


class LaurentPoly:
    """t^shift * poly with poly(0) != 0 (or the zero element)."""

    __slots__ = ("poly", "shift")

    def __init__(self, poly: Poly, shift: int = 0):
        if poly.is_zero():
            self.poly, self.shift = poly, 0
            return
        v = poly.valuation()
        if v:
            poly = Poly._raw(poly.field, poly.c[v:])
        self.poly, self.shift = poly, shift + v

    @classmethod
    def monomial(cls, field: FieldDesc, exp: int, coeff=1) -> "LaurentPoly":
        return cls(Poly.const(field, coeff), exp)

    @property
    def field(self) -> FieldDesc:
        return self.poly.field

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def is_monomial(self) -> bool:
        return len(self.poly.c) == 1

    def min_exp(self) -> int:
        if self.is_zero():
            raise ValueError("zero has no exponents")
        return self.shift

    def max_exp(self) -> int:
        return self.shift + self.poly.deg

    def terms(self) -> list[tuple[int, Fe]]:
        """(exponent, coefficient) pairs in increasing exponent order."""
        return [(self.shift + i, Fe(self.field, c)) for i, c in self.poly.terms()]

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        return LaurentPoly(self.poly * other.poly, self.shift + other.shift)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        m = min(self.shift, other.shift)
        a = self.poly * Poly.monomial(self.field, self.shift - m)
        b = other.poly * Poly.monomial(self.field, other.shift - m)
        return LaurentPoly(a + b, m)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(-self.poly, self.shift)

    def scale(self, c) -> "LaurentPoly":
        return LaurentPoly(self.poly.scale(c), self.shift)

    def __pow__(self, e: int) -> "LaurentPoly":
        if e >= 0:
            return LaurentPoly(self.poly**e, self.shift * e)
        if self.is_zero():
            raise ZeroDivisionError("negative power of zero")
        if not self.is_monomial():
            raise PreconditionError("negative powers are only defined for monomials")
        c = self.field.pow(self.field.inv(self.poly.c[0]), -e)
        return LaurentPoly.monomial(self.field, self.shift * e, Fe(self.field, c))

    def shifted(self, k: int) -> "LaurentPoly":
        return LaurentPoly(self.poly, self.shift + k) if not self.is_zero() else self

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.poly == other.poly and self.shift == other.shift

    def __hash__(self):
        return hash((self.poly, self.shift))

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for e, c in reversed(self.terms()):
            mon = "1" if e == 0 else ("t" if e == 1 else f"t^{e}")
            parts.append(mon if c == 1 and e != 0 else (repr(c) if e == 0 else f"{c!r}*{mon}"))
        return " + ".join(parts)

    def substitute_power(self, e: int) -> "Poly | None":
        """The polynomial h(u) with h(t^e) = self, if every exponent is a non-negative multiple of e."""
        if self.is_zero():
            return self.poly
        out = {}
        for k, c in self.terms():
            if k % e:
                return None
            if k // e < 0:
                return None
            out[k // e] = c
        return Poly.sparse(self.field, out)


@dataclass(frozen=True)
class ParamCurve:
    """Four Laurent polynomials in t."""

    coords: tuple

    def __post_init__(self):
        if len(self.coords) != 4:
            raise DomainError("a parametrized curve needs four coordinates")
        if all(c.is_zero() for c in self.coords):
            raise DomainError("all coordinates vanish")

    @property
    def field(self) -> FieldDesc:
        return self.coords[0].field

    @classmethod
    def from_monomials(cls, field: FieldDesc, spec, zeta: Fe | None = None) -> "ParamCurve":
        """Build from [[zeta_exp, t_exp], ...]; zeta defaults to 1."""
        z = zeta if zeta is not None else field.one
        return cls(tuple(LaurentPoly.monomial(field, te, z**ze) for ze, te in spec))

    def scaled(self, k: int) -> "ParamCurve":
        """Multiply every coordinate by t^k (same projective curve)."""
        return ParamCurve(tuple(c.shifted(k) for c in self.coords))

    def __repr__(self):
        return "(" + ", ".join(repr(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class MonomialMap:
    B: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.B)
        if len(rows) != 4 or any(len(r) != 4 for r in rows):
            raise DomainError("monomial maps are 4x4")
        object.__setattr__(self, "B", rows)


class DelsarteSurface:
    """sum_i c_i prod_j X_j^{A_ij} = 0 over ``field``."""

    def __init__(self, A, c, field: FieldDesc):
        A = tuple(tuple(int(v) for v in r) for r in A)
        if len(A) != 4 or any(len(r) != 4 for r in A):
            raise DomainError("exponent matrix must be 4x4")
        det = _det(A)
        if det % field.p == 0:
            raise PreconditionError(f"det A = {det} vanishes in {field}")
        self.A = A
        self.c = tuple(field(x) for x in c)
        self.field = field

    def __repr__(self):
        return f"DelsarteSurface(A={self.A}, c={self.c})"


def _det(M) -> int:
    n = len(M)
    m = [[Fraction(v) for v in r] for r in M]
    det = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if m[r][i] != 0), None)
        if piv is None:
            return 0
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            det = -det
        det *= m[i][i]
        for r in range(i + 1, n):
            f = m[r][i] / m[i][i]
            for k in range(i, n):
                m[r][k] -= f * m[i][k]
    return int(det)


def rational_inverse(M) -> list[list[Fraction]]:
    """Exact inverse over Q by Gauss-Jordan elimination."""
    n = len(M)
    aug = [[Fraction(v) for v in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M)]
    for i in range(n):
        piv = next((r for r in range(i, n) if aug[r][i] != 0), None)
        if piv is None:
            raise PreconditionError("matrix is singular")
        aug[i], aug[piv] = aug[piv], aug[i]
        p = aug[i][i]
        aug[i] = [v / p for v in aug[i]]
        for r in range(n):
            if r != i and aug[r][i] != 0:
                f = aug[r][i]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[i])]
    return [row[n:] for row in aug]


def fermat_cover(A, C=None) -> tuple[int, MonomialMap]:
    """Least d > 0 with d A^{-1} C integral, and B = d A^{-1} C."""
    n = len(A)
    if C is None:
        C = [[int(i == j) for j in range(n)] for i in range(n)]
    inv = rational_inverse(A)
    prod = [[sum(inv[i][k] * C[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    d = 1
    for row in prod:
        for v in row:
            d = lcm(d, v.denominator)
    return d, MonomialMap(tuple(tuple(int(v * d) for v in row) for row in prod))


def map_is_compatible(A, B: MonomialMap, k: int, C=None) -> bool:
    """Does B pull the Delsarte form of A back to a monomial multiple of the Fermat-type form with exponents kC?

    This holds iff every row of A*B - k*C is the same vector.
    """
    n = 4
    if C is None:
        C = [[int(i == j) for j in range(n)] for i in range(n)]
    AB = [[sum(A[i][m] * B.B[m][j] for m in range(n)) for j in range(n)] for i in range(n)]
    rows = [tuple(AB[i][j] - k * C[i][j] for j in range(n)) for i in range(n)]
    return len(set(rows)) == 1


def apply_map(B: MonomialMap, gamma: ParamCurve, projective: int = 4) -> ParamCurve:
    """Evaluate the monomial map on gamma.

    The first ``projective`` output coordinates are treated as homogeneous and
    divided by t^m, m their least exponent; the rest are left as they are.
    """
    F = gamma.field
    out = []
    for row in B.B:
        acc = LaurentPoly.monomial(F, 0)
        for e, u in zip(row, gamma.coords):
            if e == 0:
                continue
            if u.is_zero():
                if e < 0:
                    raise PreconditionError("negative exponent on an identically zero coordinate")
                acc = LaurentPoly(Poly(F, []))
                break
            acc = acc * (u**e)
        out.append(acc)
    live = [c.min_exp() for c in out[:projective] if not c.is_zero()]
    if live:
        m = min(live)
        out = [c.shifted(-m) for c in out[:projective]] + out[projective:]
    return ParamCurve(tuple(out))


def projectively_equal(a: ParamCurve, b: ParamCurve, projective: int = 4) -> bool:
    """Equal up to a common Laurent monomial factor on the first ``projective`` coordinates."""
    for i in range(projective, 4):
        if a.coords[i] != b.coords[i]:
            return False
    pa = [c for c in a.coords[:projective]]
    pb = [c for c in b.coords[:projective]]
    idx = next((i for i, c in enumerate(pa) if not c.is_zero()), None)
    if idx is None or pb[idx].is_zero() or not pa[idx].is_monomial() or not pb[idx].is_monomial():
        return all(x == y for x, y in zip(pa, pb))
    (ea, ca), (eb, cb) = pa[idx].terms()[0], pb[idx].terms()[0]
    ratio = cb / ca
    return all(y == x.scale(ratio).shifted(eb - ea) for x, y in zip(pa, pb))


def on_surface(S: DelsarteSurface, gamma: ParamCurve) -> bool:
    """Does the Delsarte form vanish identically along gamma?"""
    total = LaurentPoly(Poly(S.field, []))
    for ci, row in zip(S.c, S.A):
        term = LaurentPoly.monomial(S.field, 0, ci)
        for e, u in zip(row, gamma.coords):
            if e:
                term = term * (u**e)
        total = total + term
    return total.is_zero()


@dataclass(frozen=True)
class Multisection:
    """([X/Z : Y/Z : 1], base) with base a Laurent polynomial in t."""

    x: LaurentPoly
    y: LaurentPoly
    base: LaurentPoly


def multisection(gamma: ParamCurve) -> Multisection:
    """Dehomogenize an (x, y, z, t) image by its z coordinate."""
    x, y, z, base = gamma.coords
    if z.is_zero() or not z.is_monomial():
        raise PreconditionError("z coordinate must be a nonzero monomial to dehomogenize")
    zi = z ** (-1)
    return Multisection(x * zi, y * zi, base)


def substitute_section(m: Multisection, e: int, curve: TwistCurve | None = None) -> FPoint | None:
    """Rewrite the multisection over u = t^e.

    Returns the point (x(u), y(u)) when base == t^e and every exponent of x, y
    is divisible by e with non-negative quotient; None otherwise.  When
    ``curve`` is given, the result must lie on it.
    """
    F = m.base.field
    if e == 0:
        raise PreconditionError("e must be nonzero")
    if m.base != LaurentPoly.monomial(F, e):
        raise PreconditionError(f"base coordinate {m.base!r} is not t^{e}")
    xs, ys = m.x.substitute_power(e), m.y.substitute_power(e)
    if xs is None or ys is None:
        return None
    P = FPoint(xs, ys)
    if curve is not None and not curve.contains(P):
        raise PreconditionError(f"section {P!r} does not lie on {curve!r}")
    return P


# registry of worked examples ---------------------------------------------------

def _registry_data() -> list[dict]:
    with resources.files("isotwist").joinpath("delsarte_registry.json").open() as fh:
        return json.load(fh)


def registry() -> list["RegistryExample"]:
    return [RegistryExample(entry) for entry in _registry_data()]


def registry_example(name: str) -> "RegistryExample":
    for ex in registry():
        if ex.name == name:
            return ex
    raise KeyError(name)


class RegistryExample:
    """One stored example: surface, monomial map, input lines and expected images."""

    def __init__(self, entry: dict):
        self.entry = entry
        self.name = entry["name"]
        fd = entry["field"]
        self.field = field_make(fd["p"], fd["l"])
        self.A = entry["A"]
        self.surface = DelsarteSurface(entry["A"], entry["coeffs"], self.field)
        self.map = MonomialMap(tuple(tuple(r) for r in entry["map_B"]))
        self.k = entry["k"]
        self.C = entry.get("C")
        self.zeta = self._zeta(entry.get("zeta"))

    def _zeta(self, spec):
        """Smallest element z with z^power = -1, or None."""
        if not spec:
            return None
        F = self.field
        target = F.neg(1)
        for c in range(1, F.q):
            if F.pow(c, spec["power"]) == target:
                return Fe(F, c)
        raise PreconditionError(f"no zeta with zeta^{spec['power']} = -1 in {F}")

    def fermat_form(self) -> DelsarteSurface:
        """The Fermat-type source surface sum c_i X_i^{k C_ii}."""
        C = self.C or [[int(i == j) for j in range(4)] for i in range(4)]
        return DelsarteSurface([[self.k * C[i][j] for j in range(4)] for i in range(4)], self.entry["coeffs"], self.field)

    def lines(self) -> list[ParamCurve]:
        return [ParamCurve.from_monomials(self.field, ln["coords"], self.zeta) for ln in self.entry["lines"]]

    def image(self, gamma: ParamCurve) -> ParamCurve:
        return apply_map(self.map, gamma, projective=3)

    def expected_multisection(self, line: dict) -> Multisection:
        ms = line["multisection"]
        F = self.field
        z = self.zeta if self.zeta is not None else F.one
        mono = lambda sp: LaurentPoly.monomial(F, sp[1], z ** sp[0])
        return Multisection(mono(ms["x"]), mono(ms["y"]), LaurentPoly.monomial(F, ms["base"]))

    def section_curve(self) -> TwistCurve:
        cd = self.entry["section_curve"]
        F = self.field
        A = Poly.sparse(F, {int(e): c for e, c in cd["A"]})
        f = Poly(F, cd["f"]) if cd.get("f") else None
        return TwistCurve(F, cd["family"], A, f, cd.get("sign", 1))

    def expected_section(self, line: dict) -> FPoint | None:
        sec = line.get("section")
        if sec is None:
            return None
        F = self.field
        return FPoint(Poly.monomial(F, sec["x"]), Poly.monomial(F, sec["y"]))
