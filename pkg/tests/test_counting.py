import os
import random

import pytest

from helpers import (
    A2,
    P1,
    P1P1,
    P2,
    datum,
    extra_fixtures,
    fan_of,
    inverse_unimodular,
    main_fixtures,
    random_fan_problem,
    random_unimodular,
    transform_problem,
)
from toric_components.counting import (
    THREADS_ENV,
    count_components,
    d_values,
    degeneracy_profile,
    selected_cones,
)
from toric_components.eqls import normalize_datum, system_datum
from toric_components.errors import InvariantViolation
from toric_components.fan import faces, zero_support


def full_plane_system(fan, d):
    pts = [(i, j) for i in range(d + 1) for j in range(d + 1) if i + j <= d]
    return datum(fan, pts, [0, 0, d])


def bidegree_system(fan, a, b):
    pts = [(-i, -j) for i in range(a + 1) for j in range(b + 1)]
    return datum(fan, pts, [a, 0, b, 0])


@pytest.mark.parametrize("name,fan,data,expected", main_fixtures() + extra_fixtures(),
                         ids=lambda x: x if isinstance(x, str) else "")
def test_fixture_totals(name, fan, data, expected):
    assert count_components(fan, data).total == expected


def test_profile_and_selection_examples():
    p1 = fan_of(P1)
    d = [datum(p1, [(0,)], [1, 1])]
    prof = degeneracy_profile(p1, d)
    assert prof == {0: (), 1: (0,), 2: (0,)}
    dv = d_values(p1, prof)
    assert dv == {0: 0, 1: 0, 2: 0}
    assert selected_cones(p1, dv) == {0, 1, 2}
    a2 = fan_of(A2)
    d = [system_datum([(1, 0), (0, 1)], zero_support(a2))] * 2
    prof = degeneracy_profile(a2, d)
    top = a2.id_of([0, 1])
    assert prof[a2.id_of([0])] == () and prof[top] == (0, 1)
    dv = d_values(a2, prof)
    assert dv[a2.id_of([0])] == -1 and dv[top] == 0
    assert selected_cones(a2, dv) == {0, top}
    assert selected_cones(a2, {c: 0 for c in range(len(a2.cones))}) == set(range(len(a2.cones)))


def test_p1_breakdown():
    p1 = fan_of(P1)
    r = count_components(p1, [datum(p1, [(0,)], [1, 1])])
    assert [x.contribution for x in r.records] == [0, 1, 1]
    assert r.records[0].k.case.value == "NegativeDefect"


def test_bezout_in_the_plane():
    p2 = fan_of(P2)
    for a in range(1, 4):
        for b in range(1, 4):
            r = count_components(p2, [full_plane_system(p2, a), full_plane_system(p2, b)])
            assert r.total == a * b
    for d in range(1, 4):
        assert count_components(p2, [full_plane_system(p2, d)]).total == 1


def test_bidegrees_on_product_of_lines():
    f = fan_of(P1P1)
    for a1, b1, a2, b2 in [(1, 0, 0, 1), (1, 1, 1, 1), (2, 1, 1, 2), (1, 0, 1, 0), (2, 0, 1, 1), (3, 1, 0, 2)]:
        r = count_components(f, [bidegree_system(f, a1, b1), bidegree_system(f, a2, b2)])
        assert r.total == a1 * b2 + a2 * b1


def test_pencil_of_lines_meets_at_base_point():
    p2 = fan_of(P2)
    pencil = datum(p2, [(0, 0), (1, 0)], [0, 0, 1])
    assert count_components(p2, [pencil, pencil]).total == 1


def test_invalid_datum_rejected():
    a2 = fan_of(A2)
    with pytest.raises(InvariantViolation):
        count_components(a2, [system_datum([(-1, 0)], zero_support(a2))])


def check_structure(fan, data, report):
    prof = {r.cone: r.degenerate for r in report.records}
    for r in report.records:
        assert r.d_value == len(r.degenerate) - r.dim
        for tau in faces(fan, r.cone):
            assert set(prof[tau]) <= set(r.degenerate)
        assert r.in_s == all(r.d_value >= report.records[t].d_value for t in faces(fan, r.cone))
        if not r.in_s:
            assert r.contribution == 0
        if r.contribution > 0:
            assert (fan.rank - r.dim) - (len(data) - len(r.degenerate)) >= 0
    assert report.records[0].d_value == 0 and report.records[0].in_s
    assert report.total == sum(r.contribution for r in report.records)


def test_random_structure_and_symmetries():
    rng = random.Random(17)
    for _ in range(40):
        fan, data = random_fan_problem(rng)
        rep = count_components(fan, data)
        check_structure(fan, data, rep)
        perm = data[:]
        rng.shuffle(perm)
        assert count_components(fan, perm).total == rep.total
        assert count_components(fan, [normalize_datum(d) for d in data]).total == rep.total
        g = random_unimodular(rng, fan.rank)
        fan2, data2 = transform_problem(fan, data, g, inverse_unimodular(g))
        rep2 = count_components(fan2, data2)
        assert rep2.total == rep.total
        assert [r.d_value for r in rep2.records] == [r.d_value for r in rep.records]


def test_thread_count_does_not_change_reports(monkeypatch):
    rng = random.Random(3)
    problems = [random_fan_problem(rng) for _ in range(10)]
    monkeypatch.setenv(THREADS_ENV, "1")
    serial = [count_components(f, d) for f, d in problems]
    monkeypatch.setenv(THREADS_ENV, "4")
    threaded = [count_components(f, d) for f, d in problems]
    assert serial == threaded
    monkeypatch.setenv(THREADS_ENV, "0")
    with pytest.raises(ValueError):
        count_components(*problems[0])
    assert os.environ[THREADS_ENV] == "0"
