"""The ten acceptance criteria, one test each, with their runtime budgets.

Each test records a PASS/FAIL line that is printed at the end of the session.
"""
import itertools
import json
import random
import time

from isotwist.additive import ap_compose, ap_from_poly
from isotwist.algebra import Fe, Poly, field_of_order, poly_sqrt
from isotwist.analysis import (
    check_gdf,
    eqiv_conditions,
    independence_certificate,
    isomorphism_class,
    search_integral_points,
)
from isotwist.classgroup import check_zeta, class_rank_witness, l_polynomial
from isotwist.cli import run
from isotwist.constructions import (
    NO_MATRIX_STATUS,
    hermitian_identity_check,
    main_points,
    main_point_quadratic,
    odd_divisors,
    orthogonal_group,
    tau_odd,
    tau_points,
    translated_scaled_points,
)
from isotwist.curves import FPoint, count_points, is_separable, same_orbit
from isotwist.delsarte import multisection, on_surface, registry, substitute_section


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def _finish(report, number, checks, elapsed, budget, extra=""):
    failed = [name for name, ok in checks.items() if not ok]
    in_time = elapsed < budget
    ok = not failed and in_time
    detail = f"{elapsed:.2f}s (budget {budget}s)"
    if extra:
        detail += f"; {extra}"
    if failed:
        detail += f"; failed: {', '.join(failed)}"
    report(number, ok, detail)
    assert not failed, failed
    assert in_time, f"{elapsed:.2f}s exceeds {budget}s"


def test_criterion_01_main_point_instances(report):
    checks = {}
    with Timer() as tm:
        for family, cases in (("quadratic", [(3, 3), (7, 1), (3, 5)]), ("cubic", [(2, 3), (5, 1), (2, 5)])):
            for q, n in cases:
                cons = main_points(q, n, family)
                tag = f"{family}({q},{n})"
                checks[f"{tag} count"] = len(cons) == (tau_odd(n) if family == "quadratic" else len(odd_divisors(n)))
                for c in cons:
                    C, P, k = c.curve, c.point, c.k
                    checks[f"{tag} k={k} on-curve"] = C.contains(P)
                    checks[f"{tag} k={k} integral"] = P.is_integral()
                    checks[f"{tag} k={k} separable"] = is_separable(C, P)
                    if family == "quadratic":
                        checks[f"{tag} k={k} degree"] = P.x.num.deg == (q**n - q ** (n - k)) // 2
                    else:
                        checks[f"{tag} k={k} degree"] = P.y.num.deg == q**n - q ** (n - k)
                for a, b in itertools.combinations(cons, 2):
                    checks[f"{tag} orbits {a.k},{b.k}"] = not same_orbit(a.curve, a.point, b.point)
    _finish(report, 1, checks, tm.elapsed, 10, f"{sum(1 for k in checks if 'on-curve' in k)} points")


def test_criterion_02_translate_counts(report):
    checks = {}
    with Timer() as tm:
        q, n = 3, 2
        base = main_point_quadratic(q, n, 1)
        translates, scaled = translated_scaled_points(base)
        roots = []
        for c in translates:
            checks[f"{c.label} on-curve"] = c.curve == base.curve and c.curve.contains(c.point)
            checks[f"{c.label} separable"] = is_separable(c.curve, c.point)
            roots.append(c.point)
        distinct = sum(
            1 for i, P in enumerate(roots) if all(not same_orbit(base.curve, P, R) for R in roots[:i])
        )
        checks["distinct orbits = q * tau_odd(n)"] = distinct == q * tau_odd(n) == 3
        F = base.curve.field
        A = base.curve.A
        for a, c in zip(range(1, q), scaled):
            checks[f"scaled a={a} curve"] = c.curve.A == A.scale(F(a))
            checks[f"scaled a={a} on-curve"] = c.curve.contains(c.point)
    _finish(report, 2, checks, tm.elapsed, 1, f"{distinct} orbits")


def test_criterion_03_delsarte_registry(report):
    checks = {}
    section_degrees = set()
    none_cases = 0
    with Timer() as tm:
        examples = registry()
        checks["six examples"] = len(examples) == 6
        for ex in examples:
            curve = ex.section_curve()
            fermat = ex.fermat_form()
            for i, (line, gamma) in enumerate(zip(ex.entry["lines"], ex.lines())):
                tag = f"{ex.name}[{i}]"
                checks[f"{tag} on source"] = on_surface(fermat, gamma)
                img = ex.image(gamma)
                checks[f"{tag} image on surface"] = on_surface(ex.surface, img)
                if line["multisection"] is None:
                    continue
                m = multisection(img)
                checks[f"{tag} multisection"] = m == ex.expected_multisection(line)
                sec = substitute_section(m, line["e"], curve)
                expected = ex.expected_section(line)
                if expected is None:
                    checks[f"{tag} no section"] = sec is None
                    if i == 0:
                        none_cases += 1
                else:
                    checks[f"{tag} section"] = sec == expected and curve.contains(sec)
                    section_degrees.add(ex.entry["d"])
        checks["two no-section examples"] = none_cases == 2
        checks["section degrees"] = {7, 5, 6, 8} <= section_degrees
    _finish(report, 3, checks, tm.elapsed, 5, f"sections for d in {sorted(section_degrees)}")


def test_criterion_04_search_oracle_agreement(report):
    checks = {}
    with Timer() as tm:
        F = field_of_order(7)
        t = Poly.t(F)
        A, f = t**7 - t, Poly(F, [0, -1, 0, 1])
        hits = search_integral_points(A, f, (3, 5))
        found = {h.point for h in hits}
        checks["nonempty"] = bool(hits)
        for a in range(7):
            s = t + Poly.const(F, a)
            checks[f"(t+{a})^3, +"] = FPoint(s**3, s) in found
            checks[f"(t+{a})^3, -"] = FPoint(s**3, -s) in found
        for h in hits:
            checks[f"gdf {h.F}"] = check_gdf(A, f, h.point)["ok"]
            rep = eqiv_conditions(A, f, h.point)
            checks[f"eqiv {h.F}"] = rep["equivalent"] and rep["beta1_eq_beta2"] and rep["beta_matches"]
    _finish(report, 4, checks, tm.elapsed, 60, f"{len(hits)} hits")


def test_criterion_05_negative_control(report):
    checks = {}
    classes = {}
    with Timer() as tm:
        F = field_of_order(5)
        t = Poly.t(F)
        A = t**5 - t
        for name, fc in (("x^3-x", [0, -1, 0, 1]), ("x^3+1", [1, 0, 0, 1]), ("x^3+x", [0, 1, 0, 1])):
            f = Poly(F, fc)
            cls = isomorphism_class(f)
            classes[name] = cls["x3_minus_x_class"]
            hits = search_integral_points(A, f)
            low = [h for h in hits if 2 * h.F.deg <= 4 and is_separable(h.curve, h.point)]
            if not cls["x3_minus_x_class"]:
                checks[f"{name}: no low-degree separable hit"] = not low
                # exhaustive symbolic sweep over every F with 2 deg F <= 4, outside the search window too
                sweep = []
                for D in (1, 2):
                    for cs in itertools.product(range(5), repeat=D + 1):
                        if cs[-1] == 0:
                            continue
                        P = Poly(F, list(cs))
                        if P.derivative().is_zero():
                            continue
                        quo, rem = f.compose(P).divrem(A)
                        if rem.is_zero():
                            G = poly_sqrt(quo)
                            if G is not None and G * G == quo:
                                sweep.append(P)
                checks[f"{name}: sweep over deg F <= 2 empty"] = not sweep
        checks["x^3+1 is outside the x^3-x classes"] = classes["x^3+1"] is False
    _finish(report, 5, checks, tm.elapsed, 60, f"classes {classes}")


def test_criterion_06_hermitian_suite(report):
    checks = {}
    with Timer() as tm:
        for q in (3, 5, 7, 11):
            G = orthogonal_group(q)
            for k in (1, 2):
                checks[f"q={q} k={k}"] = all(hermitian_identity_check(M, k) for M in G)
        for kind, q in (("quartic", 7), ("sextic", 11)):
            cons, status = tau_points(q, 1, kind)
            checks[f"{kind} q={q} nonempty"] = status == "ok" and bool(cons)
            checks[f"{kind} q={q} on-curve"] = all(c.curve.contains(c.point) for c in cons)
        cons, status = tau_points(3, 1, "quartic")
        checks["q=3 quartic empty with status"] = cons == [] and status == NO_MATRIX_STATUS
    _finish(report, 6, checks, tm.elapsed, 10)


def test_criterion_07_independence(report):
    checks = {}
    with Timer() as tm:
        q1, q3 = main_points(3, 3)
        A, f = q1.curve.A, q1.curve.f
        cert = independence_certificate(A, f, [q1.point, q3.point])
        F = A.field
        checks["rank 2"] = cert["rank"] == 2 and cert["independent"]
        b1, b3 = (Fe(F, F.from_digits(b)) for b in cert["betas"])
        checks["phi_1 = beta * 1"] = cert["phis"][0] == Poly.const(F, b1).to_json()
        checks["phi_3 = beta' * t^6"] = cert["phis"][1] == Poly.monomial(F, 6, b3).to_json()
        N = count_points(f)
        checks["N = q + 1"] = N == 4
        checks["trace = 0 mod p"] = (3 + 1 - N) % 3 == 0
    _finish(report, 7, checks, tm.elapsed, 1)


def test_criterion_08_ring_isomorphism(report):
    checks = {}
    rng = random.Random(20261016)
    with Timer() as tm:
        for q in (2, 3, 4, 5, 7, 9):
            F = field_of_order(q)
            ok = True
            for _ in range(200):
                P = Poly(F, [Fe(F, rng.randrange(q)) for _ in range(rng.randint(0, 6))])
                Q = Poly(F, [Fe(F, rng.randrange(q)) for _ in range(rng.randint(0, 6))])
                ok &= ap_from_poly(P * Q) == ap_compose(ap_from_poly(P), ap_from_poly(Q))
            checks[f"F_{q}"] = ok
    _finish(report, 8, checks, tm.elapsed, 5, "200 pairs per field")


def test_criterion_09_zeta_and_class_rank(report):
    checks = {}
    with Timer() as tm:
        r1 = class_rank_witness(3, 1, 4, "s2")
        checks["(3,1) L = 3T^2 + 1"] = r1.zeta.L == [1, 0, 3]
        checks["(3,1) |J| = 4"] = r1.jacobian_order == 4
        checks["(3,1) verdict"] = r1.verdict
        r2 = class_rank_witness(2, 3, 3, "s3")
        checks["(2,3,s3) 9 | L(1)"] = r2.jacobian_order % 9 == 0 and r2.verdict
        with Timer() as big:
            r3 = class_rank_witness(3, 3, 4, "s2", jobs=1)
        checks["(3,3,s2) g = 13"] = r3.zeta.g == 13
        checks["(3,3,s2) 16 | L(1)"] = r3.jacobian_order % 16 == 0 and r3.verdict
        for r in (r1, r2, r3):
            check_zeta(r.zeta)  # functional equation and Weil interval; raises on failure
        checks["zeta checks"] = True
        F3 = field_of_order(3)
        z = l_polynomial(2, Poly.monomial(F3, 9) - Poly.t(F3))
        checks["t^9 - t: a_1 = 0 mod 3"] = (z.counts[0] - 4) % 3 == 0
        with Timer() as par:
            r4 = class_rank_witness(3, 3, 4, "s2", jobs=4)
        checks["jobs=4 agrees"] = r4.jacobian_order == r3.jacobian_order
    extra = f"g=13 run {big.elapsed:.2f}s with 1 job, {par.elapsed:.2f}s with 4; |J| = {r3.jacobian_order}"
    _finish(report, 9, checks, tm.elapsed, 120, extra)


ACCEPTANCE_COMMANDS = [
    ["construct", "quad", "--q", "3", "--n", "3", "--k", "1"],
    ["construct", "cubic", "--q", "2", "--n", "5", "--k", "5"],
    ["construct", "translates", "--q", "3", "--n", "2", "--k", "1"],
    ["construct", "tau", "--q", "11", "--n", "1", "--tau-kind", "sextic"],
    ["delsarte"],
    ["search", "--q", "7", "--A", "t^7 - t", "--f", "x^3 - x"],
    ["search", "--q", "5", "--A", "t^5 - t", "--f", "x^3 + 1"],
    ["independence", "--q", "3", "--n", "3"],
    ["zeta", "--m", "2", "--A", "t^9 - t", "--q", "3"],
    ["classrank", "--q", "3", "--n", "3", "--m", "4", "--family", "s2"],
]


def test_criterion_10_determinism(report, tmp_path):
    checks = {}
    with Timer() as tm:
        for i, argv in enumerate(ACCEPTANCE_COMMANDS):
            outs = []
            for rep, jobs in enumerate((1, 1, 4)):
                p = tmp_path / f"{i}_{rep}.json"
                code = run(["--out", str(p), "--jobs", str(jobs)] + argv)
                outs.append((code, p.read_bytes()))
            for line in outs[0][1].splitlines():
                json.loads(line)
            checks[" ".join(argv[:1] + argv[1:2])] = outs[0][0] == 0 and outs[0] == outs[1] == outs[2]
    _finish(report, 10, checks, tm.elapsed, 300, f"{len(ACCEPTANCE_COMMANDS)} commands x 3 runs")
