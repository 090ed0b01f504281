"""Independent checks on polynomial points of quadratic twists A(t) y^2 = f(x).

* ``search_integral_points``: exhaustive search over F of bounded degree, solving
  A G^2 = f(F) for G by square-root extraction.
* ``check_gdf``: G | F' and d/3 <= deg F < d - 1.
* ``eqiv_conditions``: the three equivalent degree/derivative conditions, the
  factorization F - alpha_i = N_i S_i^2 and the isomorphism class of f.
* ``gamma_map`` / ``independence_certificate``: the morphism (s, t) -> (F, sG)
  and an F_q-rank certificate for the pulled-back differentials.
"""
from __future__ import annotations

import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from isotwist.algebra import (
    Fe,
    FieldDesc,
    Poly,
    codes_to_digits,
    field_from_json,
    is_squarefree,
    poly_roots,
    poly_sqrt,
)
from isotwist.curves import FPoint, TwistCurve, is_supersingular
from isotwist.errors import PreconditionError, VerificationError

BATCH = 1 << 16


# search ------------------------------------------------------------------------

@dataclass(frozen=True)
class SearchHit:
    curve: TwistCurve
    point: FPoint

    @property
    def F(self) -> Poly:
        return self.point.x.as_poly()

    @property
    def G(self) -> Poly:
        return self.point.y.as_poly()

    @property
    def certificate(self) -> dict:
        return self.curve.certificate(self.point)


def degree_window(d: int, deg_range=None) -> list[int]:
    """Degrees of F allowed by d/3 <= deg F < d - 1, deg F = d mod 2, intersected with deg_range."""
    lo = -(-d // 3)
    degs = [D for D in range(lo, d - 1) if (D - d) % 2 == 0]
    if deg_range is not None:
        a, b = deg_range
        degs = [D for D in degs if a <= D <= b]
    return degs


def _eval_batch(F: FieldDesc, coeffs: np.ndarray, points: list[int]) -> np.ndarray:
    """Evaluate each row of ``coeffs`` (ascending codes) at each code in ``points``."""
    n, m = coeffs.shape
    if F.prime:
        p = F.p
        V = np.array([[pow(b, j, p) for b in points] for j in range(m)], dtype=np.int64)
        return (coeffs @ V) % p
    exp, log, _ = F.tables()
    order = F.q - 1
    out = np.empty((n, len(points)), dtype=np.int64)
    pw = np.array([F.p**i for i in range(F.l)], dtype=np.int64)
    lc = log[coeffs]
    for col, b in enumerate(points):
        acc = np.zeros((n, F.l), dtype=np.int64)
        for j in range(m):
            bj = F.pow(b, j)
            if bj == 0:
                continue
            lj = int(log[bj])
            term = np.where(lc[:, j] < 0, 0, exp[(lc[:, j] + lj) % order])
            acc += codes_to_digits(term, F.p, F.l)
        out[:, col] = (acc % F.p) @ pw
    return out


def _decode(q: int, D: int, start: int, stop: int) -> np.ndarray:
    """Coefficient rows (ascending) of the degree-D candidates with indices start..stop-1."""
    idx = np.arange(start, stop, dtype=np.int64)
    base = q**D
    rows = np.empty((len(idx), D + 1), dtype=np.int64)
    rows[:, D] = 1 + idx // base
    rest = idx % base
    for j in range(D):
        rest, rows[:, j] = np.divmod(rest, q)
    return rows


def _search_range(args) -> list[tuple[tuple, tuple]]:
    fjson, A_c, f_c, D, start, stop = args
    F = field_from_json(fjson)
    A = Poly._raw(F, tuple(A_c))
    f = Poly._raw(F, tuple(f_c))
    rootsA = sorted({r.code for r in poly_roots(A)})
    rootsf = np.array(sorted({r.code for r in poly_roots(f)}), dtype=np.int64)
    deriv_idx = [j for j in range(1, D + 1) if j % F.p]
    out = []
    for s in range(start, stop, BATCH):
        rows = _decode(F.q, D, s, min(stop, s + BATCH))
        keep = np.zeros(len(rows), dtype=bool)
        if deriv_idx:
            keep = (rows[:, deriv_idx] != 0).any(axis=1)
        if rootsA:
            if len(rootsf) == 0:
                return []
            vals = _eval_batch(F, rows, rootsA)
            keep &= np.isin(vals, rootsf).all(axis=1)
        for row in rows[keep]:
            Fp = Poly._raw(F, tuple(int(v) for v in row))
            quot, rem = f.compose(Fp).divrem(A)
            if not rem.is_zero():
                continue
            G = poly_sqrt(quot)
            if G is None:
                continue
            out.append((Fp.c, G.c))
            negG = -G
            if negG != G:
                out.append((Fp.c, negG.c))
    return out


def search_integral_points(A: Poly, f: Poly, deg_range=None, jobs: int = 1) -> list[SearchHit]:
    """All (F, G) over F_q with A G^2 = f(F), F' != 0 and deg F in the admissible window.

    Results are sorted by (deg F, coefficients of F, deg G, coefficients of G),
    independent of ``jobs``.
    """
    F = A.field
    if A.deg < 1 or A.deg % 2 == 0:
        raise PreconditionError("A must have odd degree")
    if not is_squarefree(A):
        raise PreconditionError("A must be squarefree")
    curve = TwistCurve(F, "quadratic", A, f)
    tasks = []
    for D in degree_window(A.deg, deg_range):
        total = (F.q - 1) * F.q**D
        parts = max(1, jobs)
        step = -(-total // parts)
        for s in range(0, total, step):
            tasks.append((F.to_json(), A.c, f.c, D, s, min(total, s + step)))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs, mp_context=mp.get_context("fork")) as ex:
            chunks = list(ex.map(_search_range, tasks))
    else:
        chunks = [_search_range(t) for t in tasks]
    found = sorted({h for c in chunks for h in c}, key=lambda h: (len(h[0]), h[0], len(h[1]), h[1]))
    hits = []
    for Fc, Gc in found:
        P = FPoint(Poly._raw(F, Fc), Poly._raw(F, Gc))
        if not curve.contains(P):
            raise VerificationError(f"search produced an off-curve point {P!r}")
        hits.append(SearchHit(curve, P))
    return hits


# structure checks for integral points ----------------------------------------

def _fg(P: FPoint) -> tuple[Poly, Poly]:
    if not P.is_integral():
        raise PreconditionError("point must have polynomial coordinates")
    return P.x.as_poly(), P.y.as_poly()


def check_gdf(A: Poly, f: Poly, P: FPoint) -> dict:
    """Report on G | F' and d/3 <= deg F < d - 1."""
    Fp, G = _fg(P)
    dF = Fp.derivative()
    if dF.is_zero():
        raise PreconditionError("F' = 0")
    curve = TwistCurve(A.field, "quadratic", A, f)
    d = A.deg
    checks = {
        "on_curve": curve.contains(P),
        "G_divides_Fprime": G.divides(dF),
        "lower_bound": 3 * Fp.deg >= d,
        "upper_bound": Fp.deg < d - 1,
    }
    return {"checks": checks, "ok": all(checks.values()), "d": d, "degF": int(Fp.deg), "degG": int(G.deg)}


@dataclass
class FactorStructure:
    alphas: list  # roots of f, ordered so that s_0 >= s_1 >= s_2
    N: list
    S: list
    betas: list
    gamma: Fe


def _arithmetic_progression(roots: list[Fe], lead: Fe):
    """(center, a) if one root is the average of the other two, with f ~ a^{-1}-twist of x^3 - x."""
    for i in range(3):
        c = roots[i]
        o1, o2 = roots[(i + 1) % 3], roots[(i + 2) % 3]
        if (o1 + o2) == c * 2:
            delta = o1 - c
            return c, (lead * delta * delta * delta).inverse()
    return None


def isomorphism_class(f: Poly) -> dict:
    """Is y^2 = f(x) isomorphic over F_q to a y^2 = x^3 - x?  Needs all roots in F_q."""
    roots = poly_roots(f)
    if len(roots) != 3:
        return {"x3_minus_x_class": False, "reason": "f does not split over F_q"}
    ap = _arithmetic_progression(roots, f.lc())
    if ap is None:
        return {"x3_minus_x_class": False, "reason": "roots not in arithmetic progression"}
    center, a = ap
    return {"x3_minus_x_class": True, "center": center.rep, "a": a.rep}


def factor_structure(A: Poly, f: Poly, P: FPoint) -> FactorStructure:
    Fp, G = _fg(P)
    F = A.field
    gamma_poly = A.derivative()
    if gamma_poly.deg != 0:
        raise PreconditionError("A' must be a nonzero constant")
    gamma = gamma_poly.lc()
    roots = poly_roots(f)
    if len(roots) != 3 or len({r.code for r in roots}) != 3:
        raise PreconditionError("f must have three distinct roots in F_q")
    entries = []
    for a in roots:
        Fi = Fp - Poly.const(F, a)
        Ni = A.gcd(Fi)
        rest, rem = Fi.divrem(Ni)
        if not rem.is_zero():
            raise VerificationError("gcd does not divide")
        u = rest.lc()
        Si = poly_sqrt(rest.monic())
        if Si is None:
            raise VerificationError(f"(F - {a!r}) / N is not a unit times a square")
        entries.append((a, Ni.scale(u), Si.monic()))
    # order by s_i decreasing, ties by root code
    entries.sort(key=lambda e: (-e[2].deg, e[0].code))
    lead = f.lc()
    alphas = [e[0] for e in entries]
    betas = []
    for k in range(3):
        ai, aj = alphas[(k + 1) % 3], alphas[(k + 2) % 3]
        betas.append(lead * (alphas[k] - ai) * (alphas[k] - aj) / gamma)
    return FactorStructure(alphas, [e[1] for e in entries], [e[2] for e in entries], betas, gamma)


def eqiv_conditions(A: Poly, f: Poly, P: FPoint) -> dict:
    """Evaluate (A) 2 deg F <= d - 1, (B) 2 deg G <= deg F - 1, (C) G^2 = beta F'."""
    F = A.field
    if A.deg % 2 == 0 or not is_squarefree(A):
        raise PreconditionError("A must be squarefree of odd degree")
    if len(poly_roots(A)) != A.deg:
        raise PreconditionError("A must split completely over F_q")
    gamma_poly = A.derivative()
    if gamma_poly.deg != 0:
        raise PreconditionError("A' must be a nonzero constant")
    Fp, G = _fg(P)
    dF = Fp.derivative()
    if dF.is_zero():
        raise PreconditionError("F' = 0")
    curve = TwistCurve(F, "quadratic", A, f)
    if not curve.contains(P):
        raise VerificationError("point is not on the curve")
    d = A.deg
    condA = 2 * Fp.deg <= d - 1
    condB = 2 * G.deg <= Fp.deg - 1
    G2 = G * G
    beta = None
    quot, rem = G2.divrem(dF)
    if rem.is_zero() and quot.deg == 0:
        beta = quot.lc()
    condC = beta is not None
    report = {
        "condA": condA,
        "condB": condB,
        "condC": condC,
        "equivalent": condA == condB == condC,
        "beta": beta.rep if beta is not None else None,
        "iso_classification": None,
    }
    if condC:
        fs = factor_structure(A, f, P)
        report["factor_structure"] = {
            "alphas": [a.rep for a in fs.alphas],
            "N": [n.to_json() for n in fs.N],
            "S": [s.to_json() for s in fs.S],
            "betas": [b.rep for b in fs.betas],
            "gamma": fs.gamma.rep,
        }
        report["beta1_eq_beta2"] = fs.betas[1] == fs.betas[2]
        report["beta_matches"] = fs.betas[1] == beta
        report["A_is_product_of_N"] = (fs.N[0] * fs.N[1] * fs.N[2]).monic() == A.monic()
        report["G_is_product_of_S"] = (fs.S[0] * fs.S[1] * fs.S[2]).monic() == G.monic()
        report["iso_classification"] = isomorphism_class(f)
    return report


# morphisms and independence -------------------------------------------------------

@dataclass(frozen=True)
class GammaMap:
    """(s, t) -> (F(t), s G(t)) from s^2 = A(t) to y^2 = f(x)."""

    A: Poly
    F: Poly
    G: Poly

    def to_json(self) -> dict:
        return {"A": self.A.to_json(), "x": self.F.to_json(), "y_over_s": self.G.to_json()}


def gamma_map(A: Poly, f: Poly, P: FPoint) -> GammaMap:
    Fp, G = _fg(P)
    # (sG)^2 = s^2 G^2 = A G^2 must equal f(F)
    if A * G * G != f.compose(Fp):
        raise VerificationError("A G^2 != f(F): point is not on the twist")
    return GammaMap(A, Fp, G)


def fq_rank(rows: list[list[int]], F: FieldDesc) -> int:
    """Rank of a matrix of codes over F by Gaussian elimination."""
    M = [list(r) for r in rows]
    rank, ncols = 0, max((len(r) for r in M), default=0)
    for r in M:
        r.extend([0] * (ncols - len(r)))
    for col in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][col]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = F.inv(M[rank][col])
        M[rank] = [F.mul(v, inv) for v in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][col]:
                c = M[i][col]
                M[i] = [F.sub(a, F.mul(c, b)) for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def independence_certificate(A: Poly, f: Poly, points: list[FPoint]) -> dict:
    """F_q-rank of Phi_k = beta_k G_k where F_k' = beta_k G_k^2.

    Requires y^2 = f(x) supersingular over F_q.  Rank equal to the number of
    points certifies Z-linear independence of the points in E_A(F_q(t)).
    """
    F = A.field
    if not is_supersingular(f):
        raise PreconditionError("y^2 = f(x) is not supersingular over F_q")
    phis, betas = [], []
    for P in points:
        Fp, G = _fg(P)
        quot, rem = Fp.derivative().divrem(G * G)
        if not rem.is_zero() or quot.deg != 0:
            raise PreconditionError(f"F' is not a unit multiple of G^2 for {P!r}")
        beta = quot.lc()
        betas.append(beta)
        phis.append(G.scale(beta))
    rank = fq_rank([list(p.c) for p in phis], F)
    return {
        "rank": rank,
        "independent": rank == len(points),
        "betas": [b.rep for b in betas],
        "phis": [p.to_json() for p in phis],
    }


def half_degree_window(q_n: int) -> tuple[int, int]:
    """deg F range with 2 deg F <= q^n - 1."""
    return 1, (q_n - 1) // 2
