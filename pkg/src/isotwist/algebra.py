"""Exact arithmetic in F_{p^l}, F_q[t] and F_q(t).

Field elements are stored internally as integer *codes*: the residue class
``d_0 + d_1 w + ... + d_{l-1} w^{l-1}`` (``w`` a root of the field modulus)
is encoded as ``d_0 + d_1 p + ... + d_{l-1} p^{l-1}``.  Elements of the prime
subfield therefore have code equal to their value.  ``Fe`` wraps a code for
public use; ``Poly`` keeps a tuple of codes.
"""
from __future__ import annotations

import math
import os
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from isotwist.errors import DomainError, PreconditionError

# deg(0); a sentinel that poisons arithmetic instead of silently acting as -1
DEG_ZERO = -math.inf

DEFAULT_MAX_Q = 1 << 14
TABLE_LIMIT = 1 << 16


def max_q() -> int:
    """Upper bound on field sizes that may be scanned exhaustively."""
    return int(os.environ.get("ISOTWIST_MAX_Q", DEFAULT_MAX_Q))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization; fine for the orders met here (< 10^12)."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, l) with q = p^l, or raise."""
    f = factorize(q) if q > 1 else {}
    if len(f) != 1:
        raise DomainError(f"{q} is not a prime power")
    ((p, l),) = f.items()
    return p, l


def divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


# --- dense polynomials over F_p as int lists (ascending); used for moduli ---

def _fp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    inv = pow(m[-1], p - 2, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] * inv % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _fp_trim(a[:dm] if len(a) > dm else a)


def _fp_mulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    r = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                r[i + j] += x * y
    return _fp_mod([v % p for v in r], m, p)


def _fp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        a, b = b, _fp_mod(a, b, p)
    return a


def _fp_is_irreducible(m: list[int], p: int) -> bool:
    """Ben-Or test: m of degree l is irreducible iff gcd(t^{p^i} - t, m) = 1 for i <= l/2."""
    l = len(m) - 1
    if l == 1:
        return True
    if m[0] == 0:
        return False
    h = [0, 1]
    for _ in range(l // 2):
        # h <- h^p mod m
        r, base, e = [1], h, p
        while e:
            if e & 1:
                r = _fp_mulmod(r, base, m, p)
            base = _fp_mulmod(base, base, m, p)
            e >>= 1
        h = r
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        if len(_fp_gcd(m, _fp_trim(diff), p)) != 1:
            return False
    return True


class FieldDesc:
    """The finite field F_{p^l} = F_p[w]/(modulus)."""

    def __init__(self, p: int, l: int, modulus: Sequence[int]):
        if not is_prime(p):
            raise DomainError(f"p={p} is not prime")
        if l < 1:
            raise DomainError("extension degree must be >= 1")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != l + 1 or modulus[-1] != 1:
            raise DomainError("modulus must be monic of degree l")
        self.p = p
        self.l = l
        self.q = p**l
        self.modulus = modulus
        self.prime = l == 1
        self._pw = [p**i for i in range(l)]
        self._np_tables = None
        self._exp = self._log = self._zech = None
        self._prim = None

    # identity -------------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, FieldDesc) and (self.p, self.l, self.modulus) == (
            other.p,
            other.l,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.l, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.l})" if self.l > 1 else f"GF({self.p})"

    # digits <-> codes -------------------------------------------------------
    def digits(self, code: int) -> list[int]:
        out = []
        for _ in range(self.l):
            code, r = divmod(code, self.p)
            out.append(r)
        return out

    def from_digits(self, ds: Sequence[int]) -> int:
        if len(ds) > self.l:
            ds = _fp_mod(list(ds), list(self.modulus), self.p)
        return sum((d % self.p) * w for d, w in zip(ds, self._pw))

    def code(self, x) -> int:
        """Coerce an int (prime subfield), digit list, or Fe into a code."""
        if isinstance(x, Fe):
            if x.field != self:
                raise DomainError(f"element of {x.field} used in {self}")
            return x.code
        if isinstance(x, (int, np.integer)):
            return int(x) % self.p
        if isinstance(x, (list, tuple)):
            return self.from_digits([int(d) for d in x])
        raise TypeError(f"cannot coerce {x!r} into {self}")

    def __call__(self, x) -> "Fe":
        return Fe(self, self.code(x))

    @property
    def zero(self) -> "Fe":
        return Fe(self, 0)

    @property
    def one(self) -> "Fe":
        return Fe(self, 1)

    def gen(self) -> "Fe":
        """The class of w (the variable of the modulus)."""
        return Fe(self, self.p % self.q if self.l > 1 else (-self.modulus[0]) % self.p)

    def elements(self) -> list["Fe"]:
        return [Fe(self, c) for c in range(self.q)]

    def to_json(self) -> dict:
        return {"p": self.p, "l": self.l, "modulus": list(self.modulus)}

    # scalar arithmetic on codes ---------------------------------------------
    def _dmul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        p = self.p
        da, db = self.digits(a), self.digits(b)
        r = [0] * (2 * self.l - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    r[i + j] += x * y
        return self.from_digits(_fp_mod([v % p for v in r], list(self.modulus), p))

    def _ensure_scalar_tables(self) -> bool:
        if self._exp is not None:
            return True
        if self.q > TABLE_LIMIT:
            return False
        exp, log, zech = self.tables()
        self._exp, self._log, self._zech = exp.tolist(), log.tolist(), zech.tolist()
        return True

    def add(self, a: int, b: int) -> int:
        if self.prime:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if a == 0:
            return b
        if b == 0:
            return a
        if self._ensure_scalar_tables():
            n = self.q - 1
            la = self._log[a]
            z = self._zech[(self._log[b] - la) % n]
            return 0 if z < 0 else self._exp[(la + z) % n]
        p = self.p
        return self.from_digits([(x + y) % p for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a: int) -> int:
        if self.prime:
            return (-a) % self.p
        if self.p == 2 or a == 0:
            return a
        p = self.p
        return self.from_digits([(-x) % p for x in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        if self.prime:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.prime:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self._ensure_scalar_tables():
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._dmul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inverse of 0 in {self}")
        if self.prime:
            return pow(a, self.p - 2, self.p)
        if self._ensure_scalar_tables():
            return self._exp[(-self._log[a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.prime:
            return pow(a, e, self.p)
        if a == 0:
            return 1 if e == 0 else 0
        if self._ensure_scalar_tables():
            return self._exp[(self._log[a] * e) % (self.q - 1)]
        e %= self.q - 1
        r, b = 1, a
        while e:
            if e & 1:
                r = self._dmul(r, b)
            b = self._dmul(b, b)
            e >>= 1
        return r

    # structure ---------------------------------------------------------------
    def primitive_element(self) -> int:
        """Smallest code generating the multiplicative group."""
        if self._prim is None:
            n = self.q - 1
            rs = list(factorize(n)) if n > 1 else []
            for g in range(1, self.q):
                pw = (lambda a, e: pow(a, e, self.p)) if self.prime else self._slowpow
                if all(pw(g, n // r) != 1 for r in rs):
                    self._prim = g
                    break
        return self._prim

    def _slowpow(self, a: int, e: int) -> int:
        r, b = 1, a
        while e:
            if e & 1:
                r = self._dmul(r, b)
            b = self._dmul(b, b)
            e >>= 1
        return r

    def tables(self):
        """(exp, log, zech) numpy tables relative to the primitive element.

        ``exp[i]`` is the code of g^i, ``log[code]`` its discrete log (-1 for 0),
        ``zech[n]`` the log of 1 + g^n (-1 when that sum is 0).
        """
        if self._np_tables is not None:
            return self._np_tables
        p, l, n = self.p, self.l, self.q - 1
        g = self.primitive_element()
        mul = (lambda a, b: a * b % p) if self.prime else self._dmul
        block = min(n, 1024)
        first = [1]
        for _ in range(block - 1):
            first.append(mul(first[-1], g))
        exp = np.empty(n, dtype=np.int64)
        exp[:block] = first
        if n > block:
            big = mul(first[-1], g)
            pw = np.array(self._pw, dtype=np.int64)
            # column j of M holds the digits of big * w^j
            M = np.array(
                [self.digits(mul(big, p**j if l > 1 else 1)) for j in range(l)], dtype=np.int64
            ).T
            D = codes_to_digits(np.array(first, dtype=np.int64), p, l)
            pos = block
            while pos < n:
                D = (D @ M.T) % p
                take = min(block, n - pos)
                exp[pos : pos + take] = (D @ pw)[:take]
                pos += take
        log = np.full(self.q, -1, dtype=np.int64)
        log[exp] = np.arange(n, dtype=np.int64)
        one_plus = np.where(exp % p == p - 1, exp - (p - 1), exp + 1)
        zech = log[one_plus]
        self._np_tables = (exp, log, zech)
        return self._np_tables


def codes_to_digits(codes: np.ndarray, p: int, l: int) -> np.ndarray:
    out = np.empty(codes.shape + (l,), dtype=np.int64)
    c = codes.copy()
    for i in range(l):
        c, out[..., i] = np.divmod(c, p)
    return out


@lru_cache(maxsize=None)
def field_make(p: int, l: int = 1) -> FieldDesc:
    """F_{p^l} with the smallest monic irreducible modulus.

    Candidates t^l + c_{l-1} t^{l-1} + ... + c_0 are scanned in increasing order
    of the integer c_0 + c_1 p + ... + c_{l-1} p^{l-1}.
    """
    if not is_prime(p):
        raise DomainError(f"p={p} is not prime")
    if l < 1:
        raise DomainError("extension degree must be >= 1")
    if l == 1:
        return FieldDesc(p, 1, (0, 1))
    for n in range(p**l):
        cs = []
        for _ in range(l):
            n, r = divmod(n, p)
            cs.append(r)
        m = cs + [1]
        if _fp_is_irreducible(m, p):
            return FieldDesc(p, l, m)
    raise AssertionError("no irreducible polynomial found")  # unreachable


def field_of_order(q: int) -> FieldDesc:
    p, l = prime_power(q)
    return field_make(p, l)


class Fe:
    """An element of a FieldDesc."""

    __slots__ = ("field", "code")

    def __init__(self, field: FieldDesc, code: int):
        self.field = field
        self.code = int(code)

    @property
    def rep(self) -> list[int]:
        return self.field.digits(self.code)

    def _other(self, b) -> int:
        if isinstance(b, Fe):
            if b.field != self.field:
                raise DomainError(f"mixed fields {self.field} and {b.field}")
            return b.code
        return self.field.code(b)

    def __add__(self, b):
        return Fe(self.field, self.field.add(self.code, self._other(b)))

    __radd__ = __add__

    def __sub__(self, b):
        return Fe(self.field, self.field.sub(self.code, self._other(b)))

    def __rsub__(self, b):
        return Fe(self.field, self.field.sub(self._other(b), self.code))

    def __mul__(self, b):
        if isinstance(b, (Poly, RatFunc)):
            return NotImplemented
        return Fe(self.field, self.field.mul(self.code, self._other(b)))

    __rmul__ = __mul__

    def __neg__(self):
        return Fe(self.field, self.field.neg(self.code))

    def inverse(self) -> "Fe":
        return Fe(self.field, self.field.inv(self.code))

    def __truediv__(self, b):
        return Fe(self.field, self.field.mul(self.code, self.field.inv(self._other(b))))

    def __rtruediv__(self, b):
        return Fe(self.field, self.field.mul(self._other(b), self.field.inv(self.code)))

    def __pow__(self, e: int):
        return Fe(self.field, self.field.pow(self.code, e))

    def __eq__(self, b):
        if isinstance(b, Fe):
            return self.field == b.field and self.code == b.code
        if isinstance(b, int):
            return self.code == self.field.code(b)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.code))

    def __bool__(self):
        return self.code != 0

    def __int__(self):
        if self.code >= self.field.p:
            raise ValueError(f"{self} is not in the prime subfield")
        return self.code

    def __repr__(self):
        if self.code < self.field.p:
            return str(self.code)
        terms = [
            (f"{d}" if i == 0 else ("" if d == 1 else f"{d}*") + ("w" if i == 1 else f"w^{i}"))
            for i, d in enumerate(self.rep)
            if d
        ]
        return "(" + " + ".join(reversed(terms)) + ")"

    def to_json(self) -> list[int]:
        return self.rep


def fe_residue(a: Fe, m: int) -> tuple[bool, Fe | None]:
    """Is ``a`` an m-th power in its field?  Returns (flag, one m-th root or None)."""
    F = a.field
    q = F.q
    if a.code == 0:
        return True, F.zero
    g = math.gcd(m, q - 1)
    if F.pow(a.code, (q - 1) // g) != 1:
        return False, None
    if m == 2 and q % 4 == 3:
        return True, Fe(F, F.pow(a.code, (q + 1) // 4))
    if m % 2 == 1 and math.gcd(m, q - 1) == 1:
        # x -> x^m is a bijection; invert the exponent
        return True, Fe(F, F.pow(a.code, pow(m, -1, q - 1)))
    if q > max_q():
        raise PreconditionError(f"field of order {q} exceeds ISOTWIST_MAX_Q for root scans")
    for c in range(1, q):
        if F.pow(c, m) == a.code:
            return True, Fe(F, c)
    raise AssertionError("residue without root")  # unreachable


# --- polynomials -------------------------------------------------------------

def _trim(c: list[int]) -> tuple[int, ...]:
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


def _kron_mul_prime(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    bound = min(len(a), len(b)) * (p - 1) ** 2
    nb = max(1, (bound.bit_length() + 7) // 8)
    A = int.from_bytes(b"".join(x.to_bytes(nb, "little") for x in a), "little")
    B = int.from_bytes(b"".join(x.to_bytes(nb, "little") for x in b), "little")
    n = len(a) + len(b) - 1
    raw = (A * B).to_bytes(n * nb, "little")
    return [int.from_bytes(raw[i * nb : (i + 1) * nb], "little") % p for i in range(n)]


def _poly_mul(F: FieldDesc, a: tuple, b: tuple) -> tuple:
    if not a or not b:
        return ()
    if F.prime:
        p = F.p
        if min(len(a), len(b)) > 12:
            return _trim(_kron_mul_prime(a, b, p))
        r = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    r[i + j] += x * y
        return _trim([v % p for v in r])
    if F.p == 2 or min(len(a), len(b)) > 4 or not F._ensure_scalar_tables():
        return _trim(_kron_mul_ext(F, a, b))
    r = [0] * (len(a) + len(b) - 1)
    mul, add = F.mul, F.add
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    r[i + j] = add(r[i + j], mul(x, y))
    return _trim(r)


def _kron_mul_ext(F: FieldDesc, a: tuple, b: tuple) -> list[int]:
    """Multiply via integer packing of the bivariate (t, w) digit polynomials."""
    p, l = F.p, F.l
    stride = 2 * l - 1
    bound = min(len(a), len(b)) * l * (p - 1) ** 2
    nb = max(1, (bound.bit_length() + 7) // 8)
    zero_slot = bytes(nb)

    def pack(cs):
        parts = []
        for c in cs:
            ds = F.digits(c)
            parts.extend(d.to_bytes(nb, "little") for d in ds)
            parts.extend([zero_slot] * (stride - l))
        return int.from_bytes(b"".join(parts), "little")

    n = len(a) + len(b) - 1
    raw = (pack(a) * pack(b)).to_bytes(n * stride * nb, "little")
    mod = list(F.modulus)
    out = []
    for k in range(n):
        base = k * stride * nb
        ds = [int.from_bytes(raw[base + j * nb : base + (j + 1) * nb], "little") % p for j in range(stride)]
        out.append(F.from_digits(_fp_mod(ds, mod, p)) if any(ds) else 0)
    return out


class Poly:
    """Dense univariate polynomial over a FieldDesc (ascending coefficient codes)."""

    __slots__ = ("field", "c")

    def __init__(self, field: FieldDesc, coeffs: Iterable = ()):
        self.field = field
        self.c = _trim([field.code(x) for x in coeffs])

    @classmethod
    def _raw(cls, field: FieldDesc, codes) -> "Poly":
        obj = cls.__new__(cls)
        obj.field = field
        obj.c = codes if isinstance(codes, tuple) else _trim(list(codes))
        return obj

    @classmethod
    def t(cls, field: FieldDesc) -> "Poly":
        return cls._raw(field, (0, 1))

    @classmethod
    def monomial(cls, field: FieldDesc, n: int, coeff=1) -> "Poly":
        c = field.code(coeff)
        return cls._raw(field, (0,) * n + (c,) if c else ())

    @classmethod
    def const(cls, field: FieldDesc, c) -> "Poly":
        return cls.monomial(field, 0, c)

    @classmethod
    def sparse(cls, field: FieldDesc, terms: dict) -> "Poly":
        """Build from {exponent: coefficient}."""
        if not terms:
            return cls._raw(field, ())
        r = [0] * (max(terms) + 1)
        for e, v in terms.items():
            r[e] = field.add(r[e], field.code(v))
        return cls._raw(field, _trim(r))

    # basic properties ---------------------------------------------------------
    @property
    def deg(self):
        return len(self.c) - 1 if self.c else DEG_ZERO

    def is_zero(self) -> bool:
        return not self.c

    def is_constant(self) -> bool:
        return len(self.c) <= 1

    def lc(self) -> Fe:
        return Fe(self.field, self.c[-1] if self.c else 0)

    def coeff(self, i: int) -> Fe:
        return Fe(self.field, self.c[i] if 0 <= i < len(self.c) else 0)

    @property
    def coeffs(self) -> list[Fe]:
        return [Fe(self.field, x) for x in self.c]

    def terms(self) -> list[tuple[int, int]]:
        """Nonzero (exponent, code) pairs."""
        return [(i, x) for i, x in enumerate(self.c) if x]

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.c == other.c
        if isinstance(other, (int, Fe)):
            return self.c == Poly.const(self.field, other).c
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.c))

    def __bool__(self):
        return bool(self.c)

    def _coerce(self, b) -> "Poly":
        if isinstance(b, Poly):
            if b.field != self.field:
                raise DomainError(f"mixed fields {self.field} and {b.field}")
            return b
        return Poly.const(self.field, b)

    # ring operations -----------------------------------------------------------
    def __add__(self, b):
        if isinstance(b, RatFunc):
            return NotImplemented
        b = self._coerce(b)
        F = self.field
        a, bb = self.c, b.c
        if len(a) < len(bb):
            a, bb = bb, a
        r = list(a)
        if F.prime:
            p = F.p
            for i, x in enumerate(bb):
                r[i] = (r[i] + x) % p
        else:
            for i, x in enumerate(bb):
                r[i] = F.add(r[i], x)
        return Poly._raw(F, _trim(r))

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return Poly._raw(F, tuple(F.neg(x) for x in self.c))

    def __sub__(self, b):
        if isinstance(b, RatFunc):
            return NotImplemented
        return self + (-self._coerce(b))

    def __rsub__(self, b):
        return self._coerce(b) - self

    def __mul__(self, b):
        if isinstance(b, RatFunc):
            return NotImplemented
        if isinstance(b, Poly):
            if b.field != self.field:
                raise DomainError(f"mixed fields {self.field} and {b.field}")
            return Poly._raw(self.field, _poly_mul(self.field, self.c, b.c))
        return self.scale(b)

    __rmul__ = __mul__

    def scale(self, s) -> "Poly":
        F = self.field
        s = F.code(s)
        if s == 0:
            return Poly._raw(F, ())
        return Poly._raw(F, tuple(F.mul(x, s) for x in self.c))

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial; use RatFunc")
        r = Poly.const(self.field, 1)
        b = self
        if len(self.c) == 2 and self.c[0] == 0:
            # monomial shortcut
            return Poly.monomial(self.field, e, Fe(self.field, self.field.pow(self.c[1], e)))
        while e:
            if e & 1:
                r = r * b
            e >>= 1
            if e:
                b = b * b
        return r

    def divrem(self, b) -> tuple["Poly", "Poly"]:
        b = self._coerce(b)
        if b.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        if len(self.c) < len(b.c):
            return Poly._raw(F, ()), self
        r = list(self.c)
        db = len(b.c) - 1
        inv = F.inv(b.c[-1])
        qt = [0] * (len(r) - db)
        bterms = [(j, x) for j, x in enumerate(b.c[:-1]) if x]
        if F.prime:
            p = F.p
            for i in range(len(r) - 1, db - 1, -1):
                c = r[i] * inv % p
                if c:
                    qt[i - db] = c
                    off = i - db
                    for j, x in bterms:
                        r[off + j] = (r[off + j] - c * x) % p
                r[i] = 0
        else:
            for i in range(len(r) - 1, db - 1, -1):
                c = F.mul(r[i], inv)
                if c:
                    qt[i - db] = c
                    off = i - db
                    for j, x in bterms:
                        r[off + j] = F.sub(r[off + j], F.mul(c, x))
                r[i] = 0
        return Poly._raw(F, _trim(qt)), Poly._raw(F, _trim(r[:db]))

    def __floordiv__(self, b):
        return self.divrem(b)[0]

    def __mod__(self, b):
        return self.divrem(b)[1]

    def __divmod__(self, b):
        return self.divrem(b)

    def divides(self, b: "Poly") -> bool:
        return b.divrem(self)[1].is_zero()

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(Fe(self.field, self.field.inv(self.c[-1])))

    def gcd(self, b) -> "Poly":
        a, b = self, self._coerce(b)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def xgcd(self, b) -> tuple["Poly", "Poly", "Poly"]:
        """(g, u, v) with u*self + v*b = g monic."""
        F = self.field
        r0, r1 = self, self._coerce(b)
        s0, s1 = Poly.const(F, 1), Poly._raw(F, ())
        t0, t1 = Poly._raw(F, ()), Poly.const(F, 1)
        while not r1.is_zero():
            qt, r = r0.divrem(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - qt * s1
            t0, t1 = t1, t0 - qt * t1
        if r0.is_zero():
            return r0, s0, t0
        inv = r0.lc().inverse()
        return r0.scale(inv), s0.scale(inv), t0.scale(inv)

    def derivative(self) -> "Poly":
        F = self.field
        p = F.p
        return Poly._raw(F, _trim([F.mul(x, i % p) for i, x in enumerate(self.c)][1:]))

    def __call__(self, x):
        """Evaluate at a field element (Fe/int), or compose with a Poly/RatFunc."""
        if isinstance(x, (Poly, RatFunc)):
            return self.compose(x)
        F = self.field
        xc = F.code(x)
        acc = 0
        if F.prime:
            p = F.p
            for cf in reversed(self.c):
                acc = (acc * xc + cf) % p
        else:
            for cf in reversed(self.c):
                acc = F.add(F.mul(acc, xc), cf)
        return Fe(F, acc)

    def compose(self, g):
        """self(g(t)); g may be a Poly or a RatFunc."""
        if isinstance(g, RatFunc):
            if self.is_zero():
                return RatFunc(self)
            n = self.deg
            num = Poly._raw(self.field, ())
            dpow = [Poly.const(self.field, 1)]
            for _ in range(n):
                dpow.append(dpow[-1] * g.den)
            npow = Poly.const(self.field, 1)
            for i, cf in enumerate(self.c):
                if cf:
                    num = num + (npow * dpow[n - i]).scale(Fe(self.field, cf))
                npow = npow * g.num
            return RatFunc(num, dpow[n])
        g = self._coerce(g)
        # sparse Horner: skip runs of zero coefficients with powers of g
        acc = Poly._raw(self.field, ())
        cache: dict[int, Poly] = {}
        terms = self.terms()
        prev = None
        for e, cf in reversed(terms):
            if prev is not None:
                gap = prev - e
                if gap not in cache:
                    cache[gap] = g**gap
                acc = acc * cache[gap]
            acc = acc + Poly.const(self.field, Fe(self.field, cf))
            prev = e
        if prev:
            acc = acc * (g**prev)
        return acc

    def frobenius_root(self, Q: int) -> "Poly | None":
        """The unique h with h^Q = self, if self is a Q-th power (Q a power of p)."""
        F = self.field
        j = round(math.log(Q, F.p))
        if F.p**j != Q:
            raise DomainError(f"{Q} is not a power of the characteristic")
        if any(i % Q for i, _ in self.terms()):
            return None
        e = F.p ** ((-j) % F.l)
        return Poly._raw(F, tuple(F.pow(x, e) if x else 0 for x in self.c[::Q]))

    def valuation(self) -> int:
        """ord_t(self); the zero polynomial is rejected."""
        for i, x in enumerate(self.c):
            if x:
                return i
        raise ValueError("valuation of zero")

    def change_field(self, target: FieldDesc, embed=None) -> "Poly":
        """Map coefficients into ``target`` (prime-subfield coefficients need no embedding)."""
        if target == self.field:
            return self
        if embed is None:
            embed = field_embedding(self.field, target)
        return Poly._raw(target, _trim([embed(x) for x in self.c]))

    def __repr__(self):
        if not self.c:
            return "0"
        parts = []
        for i in range(len(self.c) - 1, -1, -1):
            x = self.c[i]
            if not x:
                continue
            cf = repr(Fe(self.field, x))
            if i == 0:
                parts.append(cf)
            else:
                mon = "t" if i == 1 else f"t^{i}"
                parts.append(mon if x == 1 else f"{cf}*{mon}")
        return " + ".join(parts)

    def to_json(self) -> list[list[int]]:
        return [self.field.digits(x) for x in self.c]

    @classmethod
    def from_json(cls, field: FieldDesc, data) -> "Poly":
        return cls(field, [list(d) if isinstance(d, list) else d for d in data])


def field_embedding(small: FieldDesc, big: FieldDesc):
    """Code-level embedding F_{p^a} -> F_{p^b}, sending w to the smallest root of the small modulus."""
    if small.p != big.p or big.l % small.l:
        raise DomainError(f"{small} does not embed in {big}")
    if small.prime:
        return lambda c: c
    m = Poly._raw(big, tuple(small.modulus))
    if big.q > TABLE_LIMIT and big.q > max_q():
        raise PreconditionError("embedding root scan exceeds ISOTWIST_MAX_Q")
    root = next(c for c in range(big.q) if m(Fe(big, c)).code == 0)
    powers = [1]
    for _ in range(small.l - 1):
        powers.append(big.mul(powers[-1], root))

    def embed(c: int) -> int:
        acc = 0
        for d, w in zip(small.digits(c), powers):
            if d:
                acc = big.add(acc, big.mul(d, w))
        return acc

    return embed


def poly_sqrt(a: Poly) -> Poly | None:
    """A square root of ``a`` in F_q[t] (unit times monic), or None."""
    F = a.field
    if a.is_zero():
        return a
    if a.deg % 2:
        return None
    ok, r = fe_residue(a.lc(), 2)
    if not ok:
        return None
    m = a.monic()
    n = a.deg // 2
    if F.p == 2:
        if any(i % 2 for i, _ in m.terms()):
            return None
        s = m.frobenius_root(2)
        return s.scale(r) if s is not None else None
    # top-down coefficient solve for monic s of degree n (needs 2 invertible)
    s = [0] * (n + 1)
    s[n] = 1
    inv2 = F.inv(2 % F.p)
    for j in range(1, n + 1):
        acc = m.c[2 * n - j]
        for i in range(1, j):
            acc = F.sub(acc, F.mul(s[n - i], s[n - j + i]))
        s[n - j] = F.mul(acc, inv2)
    sp = Poly._raw(F, _trim(s))
    if sp * sp != m:
        return None
    return sp.scale(r)


def poly_roots(a: Poly) -> list[Fe]:
    """Roots of ``a`` in its coefficient field, repeated by multiplicity."""
    if a.is_zero():
        raise ValueError("roots of the zero polynomial")
    F = a.field
    if F.q > max_q():
        raise PreconditionError(f"root scan over a field of order {F.q} exceeds ISOTWIST_MAX_Q")
    out = []
    for c in range(F.q):
        x = Fe(F, c)
        if a(x).code:
            continue
        lin = Poly._raw(F, (F.neg(c), 1))
        b = a
        while True:
            qt, r = b.divrem(lin)
            if not r.is_zero():
                break
            out.append(x)
            b = qt
    return out


def is_squarefree(a: Poly) -> bool:
    if a.is_zero():
        return False
    d = a.derivative()
    if d.is_zero():
        return a.is_constant()
    return a.gcd(d).deg == 0


class RatFunc:
    """num/den in F_q(t), kept reduced with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, RatFunc) and den is None:
            self.num, self.den = num.num, num.den
            return
        if not isinstance(num, Poly):
            raise TypeError("RatFunc numerator must be a Poly")
        F = num.field
        den = Poly.const(F, 1) if den is None else num._coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = num, Poly.const(F, 1)
            return
        if den.deg > 0:
            g = num.gcd(den)
            if g.deg > 0:
                num, den = num // g, den // g
        inv = Fe(F, F.inv(den.c[-1]))
        if inv != 1:
            num, den = num.scale(inv), den.scale(inv)
        self.num, self.den = num, den

    @property
    def field(self) -> FieldDesc:
        return self.num.field

    def is_poly(self) -> bool:
        return self.den.deg == 0

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.is_poly() and self.num.is_constant()

    def _coerce(self, b) -> "RatFunc":
        if isinstance(b, RatFunc):
            if b.field != self.field:
                raise DomainError(f"mixed fields {self.field} and {b.field}")
            return b
        if isinstance(b, Poly):
            return RatFunc(self.num._coerce(b))
        return RatFunc(Poly.const(self.field, b))

    def __add__(self, b):
        b = self._coerce(b)
        if self.den == b.den:
            return RatFunc(self.num + b.num, self.den)
        return RatFunc(self.num * b.den + b.num * self.den, self.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._make(-self.num, self.den)

    def __sub__(self, b):
        return self + (-self._coerce(b))

    def __rsub__(self, b):
        return self._coerce(b) - self

    def __mul__(self, b):
        b = self._coerce(b)
        return RatFunc(self.num * b.num, self.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, b):
        return self * self._coerce(b).inverse()

    def __rtruediv__(self, b):
        return self._coerce(b) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc._make(self.num**e, self.den**e)

    @classmethod
    def _make(cls, num: Poly, den: Poly) -> "RatFunc":
        """Trusted constructor for an already reduced pair with monic den."""
        obj = cls.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    def __eq__(self, b):
        if isinstance(b, (RatFunc, Poly, int, Fe)):
            b = self._coerce(b)
            return self.num == b.num and self.den == b.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def derivative(self) -> "RatFunc":
        n, d = self.num, self.den
        return RatFunc(n.derivative() * d - n * d.derivative(), d * d)

    def compose(self, g) -> "RatFunc":
        a = RatFunc(self.num.compose(g)) if isinstance(g, Poly) else self.num.compose(g)
        b = RatFunc(self.den.compose(g)) if isinstance(g, Poly) else self.den.compose(g)
        return RatFunc(a) / RatFunc(b)

    def frobenius_root(self, Q: int) -> "RatFunc | None":
        n = self.num.frobenius_root(Q)
        d = self.den.frobenius_root(Q)
        if n is None or d is None:
            return None
        return RatFunc(n, d)

    def valuation(self) -> int:
        return self.num.valuation() - self.den.valuation()

    def as_poly(self) -> Poly:
        if not self.is_poly():
            raise ValueError("not a polynomial")
        return self.num.scale(Fe(self.field, self.field.inv(self.den.c[0])))

    def __repr__(self):
        if self.is_poly():
            return repr(self.as_poly())
        return f"({self.num!r})/({self.den!r})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, field: FieldDesc, data) -> "RatFunc":
        if isinstance(data, dict):
            return cls(Poly.from_json(field, data["num"]), Poly.from_json(field, data["den"]))
        return cls(Poly.from_json(field, data))


def field_from_json(data: dict) -> FieldDesc:
    F = FieldDesc(int(data["p"]), int(data["l"]), data["modulus"])
    canonical = field_make(F.p, F.l)
    return canonical if canonical == F else F
