"""Additive polynomials sum a_i t^{q^i} and their ring structure under composition.

An ``AdditivePoly`` stores only the coefficient vector (a_0, ..., a_n) with
respect to powers of the q-Frobenius F: t -> t^q.  Expansion to an ordinary
``Poly`` has degree q^n and is done only on request.
"""
from __future__ import annotations

from isotwist.algebra import Fe, FieldDesc, Poly, _trim, field_embedding, field_of_order
from isotwist.errors import DomainError, PreconditionError


def poly_frobenius(P: Poly, Q: int) -> Poly:
    """P(t)^Q for Q a power of the characteristic, via the Frobenius on coefficients."""
    F = P.field
    if Q == 1 or P.is_zero():
        return P
    out = [0] * (P.deg * Q + 1)
    for i, c in P.terms():
        out[i * Q] = F.pow(c, Q)
    return Poly._raw(F, tuple(out))


class AdditivePoly:
    """A(t) = sum_i a_i t^{q^i} over F_q, with q the order of ``field``."""

    __slots__ = ("field", "fc")

    def __init__(self, field: FieldDesc, fcoeffs=()):
        self.field = field
        self.fc = _trim([field.code(x) for x in fcoeffs])

    @classmethod
    def _raw(cls, field: FieldDesc, codes) -> "AdditivePoly":
        obj = cls.__new__(cls)
        obj.field = field
        obj.fc = _trim(list(codes))
        return obj

    @classmethod
    def frobenius(cls, field: FieldDesc, power: int = 1) -> "AdditivePoly":
        """F^power, i.e. t^{q^power}."""
        return cls._raw(field, [0] * power + [1])

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def fcoeffs(self) -> list[Fe]:
        return [Fe(self.field, c) for c in self.fc]

    @property
    def order(self):
        """Degree in F (so the expansion has degree q^order)."""
        return Poly._raw(self.field, self.fc).deg

    def is_zero(self) -> bool:
        return not self.fc

    def _check(self, other: "AdditivePoly") -> None:
        if not isinstance(other, AdditivePoly):
            raise TypeError("expected an AdditivePoly")
        if other.field != self.field:
            raise DomainError(f"mixed fields {self.field} and {other.field}")

    def __eq__(self, other):
        if not isinstance(other, AdditivePoly):
            return NotImplemented
        return self.field == other.field and self.fc == other.fc

    def __hash__(self):
        return hash((self.field, self.fc))

    def __add__(self, other: "AdditivePoly") -> "AdditivePoly":
        self._check(other)
        F = self.field
        a, b = list(self.fc), list(other.fc)
        n = max(len(a), len(b))
        a += [0] * (n - len(a))
        b += [0] * (n - len(b))
        return AdditivePoly._raw(F, [F.add(x, y) for x, y in zip(a, b)])

    def __neg__(self) -> "AdditivePoly":
        return AdditivePoly._raw(self.field, [self.field.neg(x) for x in self.fc])

    def __sub__(self, other: "AdditivePoly") -> "AdditivePoly":
        return self + (-other)

    def compose(self, other: "AdditivePoly") -> "AdditivePoly":
        """self o other, computed in the twisted ring: (sum a_i F^i)(sum b_j F^j) = sum a_i b_j^{q^i} F^{i+j}."""
        self._check(other)
        F = self.field
        if self.is_zero() or other.is_zero():
            return AdditivePoly._raw(F, [])
        out = [0] * (len(self.fc) + len(other.fc) - 1)
        q = F.q
        for i, a in enumerate(self.fc):
            if not a:
                continue
            for j, b in enumerate(other.fc):
                if b:
                    out[i + j] = F.add(out[i + j], F.mul(a, F.pow(b, q**i)))
        return AdditivePoly._raw(F, out)

    def expand(self) -> Poly:
        """The ordinary polynomial sum a_i t^{q^i}."""
        F = self.field
        if self.is_zero():
            return Poly._raw(F, ())
        q = F.q
        out = [0] * (q ** (len(self.fc) - 1) + 1)
        for i, a in enumerate(self.fc):
            out[q**i] = a
        return Poly._raw(F, tuple(out))

    def __call__(self, x: Fe, embed=None) -> Fe:
        """Evaluate at an element of F_q or of an extension field containing F_q."""
        F = self.field
        K = x.field
        if embed is None:
            embed = (lambda c: c) if K == F else field_embedding(F, K)
        q = F.q
        acc, xp = 0, x.code
        for a in self.fc:
            if a:
                acc = K.add(acc, K.mul(embed(a), xp))
            xp = K.pow(xp, q)
        return Fe(K, acc)

    def __repr__(self):
        if not self.fc:
            return "0"
        parts = []
        for i, a in enumerate(self.fc):
            if a:
                c = repr(Fe(self.field, a))
                mon = "F^0" if i == 0 else ("F" if i == 1 else f"F^{i}")
                parts.append(mon if a == 1 else f"{c}*{mon}")
        return " + ".join(reversed(parts))

    def to_json(self) -> dict:
        return {
            "q": {"p": self.field.p, "l": self.field.l},
            "fcoeffs": [self.field.digits(c) for c in self.fc],
        }

    @classmethod
    def from_json(cls, data: dict) -> "AdditivePoly":
        from isotwist.algebra import field_make

        F = field_make(int(data["q"]["p"]), int(data["q"]["l"]))
        return cls(F, [list(d) for d in data["fcoeffs"]])


def ap_from_poly(P: Poly) -> AdditivePoly:
    """sum a_i t^i  ->  sum a_i F^i."""
    return AdditivePoly(P.field, P.coeffs)


def ap_to_poly(A: AdditivePoly) -> Poly:
    """Inverse of ap_from_poly."""
    return Poly._raw(A.field, A.fc)


def ap_compose(A: AdditivePoly, B: AdditivePoly) -> AdditivePoly:
    return A.compose(B)


def trace_poly(q: int, n: int, k: int) -> AdditivePoly:
    """T^n_k = sum_{i < n/k} t^{q^{ki}}, the trace from F_{q^n} down to F_{q^k}."""
    if k <= 0 or n <= 0 or n % k:
        raise PreconditionError(f"k={k} must be a positive divisor of n={n}")
    F = field_of_order(q)
    fc = [0] * (n - k + 1)
    for i in range(n // k):
        fc[k * i] = 1
    return AdditivePoly(F, fc)


def ap_divisor_witness(A0: Poly, k: int) -> AdditivePoly:
    """B = (A0 / (t^k - 1))(F), so that A0(F)(t) = B(t)^{q^k} - B(t)."""
    F = A0.field
    if k <= 0:
        raise PreconditionError("k must be positive")
    div = Poly.monomial(F, k) - Poly.const(F, 1)
    quot, rem = A0.divrem(div)
    if not rem.is_zero():
        raise PreconditionError(f"t^{k} - 1 does not divide {A0!r}")
    return ap_from_poly(quot)


def witness_identity(A0: Poly, k: int, B: AdditivePoly) -> bool:
    """Check A0(F)(t) == B(t)^{q^k} - B(t) coefficient by coefficient."""
    lhs = ap_from_poly(A0).expand()
    b = B.expand()
    return lhs == poly_frobenius(b, A0.field.q**k) - b
