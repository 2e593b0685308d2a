"""Acceptance gate: one test per criterion, each with its runtime limit.

Every test prints a single ``PASS``/``FAIL`` line to the terminal, naming
the criterion, the measured time and the number of checked instances.
"""

import random
import time

import pytest

from helpers import (
    apply_to_points,
    extra_fixtures,
    inverse_unimodular,
    main_fixtures,
    random_fan_problem,
    random_unimodular,
)
from toric_components import intlin
from toric_components.counting import count_components
from toric_components.fan import faces
from toric_components.khovanskii import Case, defect, k_torus
from toric_components.oracle import (
    count_with_retries,
    exhaustive_defect_check,
    random_bernstein_pair,
    random_family,
    random_mixed_volume_case,
)
from toric_components.polytope import mixed_volume, mixed_volume_oracle, translate

SEED = 20240601


@pytest.fixture
def report(capsys):
    def emit(label, ok, seconds, limit, detail):
        status = "PASS" if ok and seconds < limit else "FAIL"
        with capsys.disabled():
            print(f"\n[{status}] {label}: {detail}; {seconds:.2f}s (limit {limit}s)")
        return status == "PASS"
    return emit


def test_criterion_1_hand_derived_fixtures(report):
    t = time.perf_counter()
    results = [(name, count_components(f, d).total, want) for name, f, d, want in main_fixtures()]
    dt = time.perf_counter() - t
    ok = all(got == want for _, got, want in results)
    detail = ", ".join(f"{n}={g} (want {w})" for n, g, w in results)
    assert report("1 toric fixtures with hand-derived totals", ok, dt, 1, detail)


def test_criterion_2_mixed_volume_oracle(report):
    rng = random.Random(SEED)
    t = time.perf_counter()
    bad = []
    for i in range(200):
        sets = random_mixed_volume_case(rng)
        a, b = mixed_volume(*sets), mixed_volume_oracle(*sets)
        if a != b:
            bad.append((i, sets, a, b))
    dt = time.perf_counter() - t
    assert report("2 polarization = interpolation mixed volume", not bad, dt, 30,
                  f"{200 - len(bad)}/200 agree"), bad[:3]


def test_criterion_3_bernstein_resultant(report):
    rng = random.Random(SEED)
    t = time.perf_counter()
    bad, retries = [], 0
    for i in range(50):
        pair = random_bernstein_pair(rng)
        mv = mixed_volume(*pair)
        try:
            count, attempts = count_with_retries(pair, seed=SEED + i, retries=10)
        except Exception as e:  # exhausted retries count as a failure
            bad.append((pair, repr(e)))
            continue
        retries += attempts - 1
        if count != mv:
            bad.append((pair, count, mv))
    dt = time.perf_counter() - t
    assert report("3 resultant count = mixed volume (n = 2)", not bad, dt, 60,
                  f"{50 - len(bad)}/50 agree, {retries} redraws"), bad[:3]


def test_criterion_4_khovanskii_properties(report):
    rng = random.Random(SEED)
    t = time.perf_counter()
    bad, case3 = [], 0
    for i in range(100):
        fam = random_family(rng, max_systems=4, max_rank=3)
        n = len(fam[0][0])
        k = k_torus(fam)
        checks = {}
        checks["translation"] = k_torus(
            [translate(s, [rng.randint(-5, 5) for _ in range(n)]) for s in fam]).value == k.value
        perm = fam[:]
        rng.shuffle(perm)
        checks["permutation"] = k_torus(perm).value == k.value
        g = random_unimodular(rng, n)
        checks["gl"] = k_torus([apply_to_points(g, s) for s in fam]).value == k.value
        checks["defects"] = exhaustive_defect_check(fam).ok
        if k.case == Case.ZERO_DEFECT:
            case3 += 1
            zero = [j for j, v in k.defects.items() if v == 0]
            checks["j0"] = (
                defect(fam, k.j0) == 0
                and all(set(j) <= set(k.j0) for j in zero)
                and len(k.lattice_l) == len(k.j0)
            )
        failed = [name for name, ok in checks.items() if not ok]
        if failed:
            bad.append((i, fam, failed))
    dt = time.perf_counter() - t
    assert report("4 k_torus invariances and defect oracle", not bad, dt, 30,
                  f"{100 - len(bad)}/100 families pass, {case3} zero-defect cases"), bad[:3]


def structural_violations(fan, data):
    rep = count_components(fan, data)
    out = []
    recs = rep.records
    for r in recs:
        for tau in faces(fan, r.cone):
            if not set(recs[tau].degenerate) <= set(r.degenerate):
                out.append(f"monotonicity at {r.rays}")
        if r.contribution > 0 and (fan.rank - r.dim) - (len(data) - len(r.degenerate)) < 0:
            out.append(f"negative expected dimension at {r.rays}")
        if not r.in_s and r.contribution:
            out.append(f"contribution outside S at {r.rays}")
    if recs[0].d_value != 0:
        out.append("d(zero) != 0")
    if not recs[0].in_s:
        out.append("zero cone not in S")
    if rep.total != sum(r.contribution for r in recs):
        out.append("total != sum of contributions")
    return out


def test_criterion_5_structural_invariants(report):
    rng = random.Random(SEED)
    t = time.perf_counter()
    inputs = [(f, d) for _, f, d, _ in main_fixtures() + extra_fixtures()]
    inputs += [random_fan_problem(rng) for _ in range(50)]
    bad = []
    for i, (f, d) in enumerate(inputs):
        v = structural_violations(f, d)
        if v:
            bad.append((i, v))
    dt = time.perf_counter() - t
    assert report("5 counting structural invariants", not bad, dt, 30,
                  f"{len(inputs) - len(bad)}/{len(inputs)} inputs clean"), bad[:3]


def test_criterion_6_exact_arithmetic(report):
    rng = random.Random(SEED)
    t = time.perf_counter()
    bad = 0
    for _ in range(500):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        m = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
        h, u = intlin.hermite_normal_form(m)
        d, u2, v = intlin.smith_normal_form(m)
        diag = [d[i][i] for i in range(min(r, c)) if d[i][i]]
        ok = (
            intlin.matmul(u, m) == h
            and abs(intlin.determinant(u)) == 1
            and intlin.matmul(intlin.matmul(u2, m), v) == d
            and abs(intlin.determinant(u2)) == 1
            and abs(intlin.determinant(v)) == 1
            and all(x > 0 for x in diag)
            and all(b % a == 0 for a, b in zip(diag, diag[1:]))
            and len(diag) == intlin.rank(m)
        )
        sat = intlin.saturate(m)
        ok = ok and intlin.saturate(sat) == sat and len(sat) == intlin.rank(m)
        ok = ok and all(intlin.coordinates_in_sublattice(row, sat) is not None for row in m)
        bad += not ok
    dt = time.perf_counter() - t
    assert report("6 HNF/SNF/saturation round trips", bad == 0, dt, 10, f"{500 - bad}/500 matrices pass")


def test_gl_transform_helper_is_consistent():
    rng = random.Random(1)
    for n in (1, 2, 3):
        g = random_unimodular(rng, n)
        assert intlin.matmul(g, inverse_unimodular(g)) == intlin.identity(n)
