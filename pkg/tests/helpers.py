"""Shared random generators for the test suite."""

import random

from toric_components import intlin
from toric_components.polytope import point_set


def random_unimodular(rng: random.Random, n: int, steps: int = 6):
    """A random element of GL_n(Z) built from elementary operations."""
    g = [list(r) for r in intlin.identity(n)]
    for _ in range(steps):
        if n == 1:
            break
        i, j = rng.sample(range(n), 2)
        q = rng.choice([-2, -1, 1, 2])
        for k in range(n):
            g[i][k] += q * g[j][k]
    if rng.random() < 0.5:
        g[0] = [-x for x in g[0]]
    return intlin.as_matrix(g)


def inverse_unimodular(g):
    """Exact inverse of a unimodular matrix via Smith-free adjugate solve."""
    n = len(g)
    cols = [intlin.solve_integer(g, e) for e in intlin.identity(n)]
    return intlin.transpose(cols)


def apply_to_points(g, pts):
    """Apply g to covectors written as rows: p -> p @ g."""
    n = len(g)
    return point_set(intlin.vecmat(p, g, n) for p in pts)


def random_point_set(rng, n, max_points=6, lo=-4, hi=4):
    k = rng.randint(1, max_points)
    return point_set(tuple(rng.randint(lo, hi) for _ in range(n)) for _ in range(k))


# --- fans and linear systems ---------------------------------------------------

from toric_components.errors import NotCartier  # noqa: E402
from toric_components.eqls import system_datum  # noqa: E402
from toric_components.fan import (  # noqa: E402
    build_fan,
    global_section_characters,
    support_from_ray_values,
    zero_support,
)

P1 = (1, [(1,), (-1,)], [[0], [1]])
P2 = (2, [(1, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]])
A2 = (2, [(1, 0), (0, 1)], [[0, 1]])
P1P1 = (2, [(1, 0), (-1, 0), (0, 1), (0, -1)], [[0, 2], [0, 3], [1, 2], [1, 3]])


def hirzebruch(a):
    return (2, [(1, 0), (0, 1), (-1, a), (0, -1)], [[0, 1], [1, 2], [2, 3], [3, 0]])


def fan_of(spec):
    return build_fan(*spec)


def datum(fan, support, ray_values):
    return system_datum(support, support_from_ray_values(fan, ray_values))


def main_fixtures():
    """``(name, fan, data, expected total)`` with totals known by hand."""
    out = []
    f = fan_of(P1)
    out.append(("p1_fixed_divisor", f, [datum(f, [(0,)], [1, 1])], 2))
    f = fan_of(P2)
    out.append(("p2_lines", f, [datum(f, [(0, 0), (1, 0), (0, 1)], [0, 0, 1])], 1))
    f = fan_of(A2)
    out.append(("a2_two_lines", f, [datum(f, [(1, 0), (0, 1)], [0, 0])] * 2, 1))
    f = fan_of(P1P1)
    out.append(("p1xp1_same_ruling", f, [datum(f, [(0, 0), (-1, 0)], [1, 0, 0, 0])] * 2, 0))
    return out


def extra_fixtures():
    out = []
    f = fan_of(hirzebruch(2))
    sec = [(0, 0), (0, 1), (1, 1), (2, 1)]
    out.append(("f2_two_sections", f, [datum(f, sec, [0, 0, 0, 1])] * 2, 2))
    f = fan_of(hirzebruch(1))
    out.append(("f1_fiber_and_section", f, [
        datum(f, [(0, 0), (-1, 0)], [1, 0, 0, 0]),
        datum(f, [(0, 0), (0, 1), (1, 1)], [0, 0, 0, 1]),
    ], 1))
    f = fan_of(P2)
    conics = [(i, j) for i in range(3) for j in range(3) if i + j <= 2]
    out.append(("p2_two_conics", f, [datum(f, conics, [0, 0, 2])] * 2, 4))
    f = build_fan(2, [], [])
    out.append(("torus_two_lines", f, [
        system_datum([(0, 0), (1, 0)], zero_support(f)),
        system_datum([(0, 0), (0, 1)], zero_support(f)),
    ], 1))
    return out


def _random_planar_fan(rng):
    from math import atan2

    vecs = set()
    for _ in range(rng.randint(3, 6)):
        v = (rng.randint(-3, 3), rng.randint(-3, 3))
        if any(v):
            vecs.add(intlin.primitive(v))
    rays = sorted(vecs, key=lambda v: atan2(v[1], v[0]))
    cones = []
    for i in range(len(rays)):
        a, b = rays[i], rays[(i + 1) % len(rays)]
        if len(rays) > 1 and a != b and a[0] * b[1] - a[1] * b[0] > 0:
            cones.append([i, (i + 1) % len(rays)])
    if not cones:
        cones = [[0]]
    keep = [c for c in cones if rng.random() < 0.8] or cones[:1]
    return _compact(2, rays, keep)


def _random_spatial_fan(rng):
    if rng.random() < 0.5:
        rays = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)]
        cones = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
    else:
        rays = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
        cones = [[a, b, c] for a in (0, 1) for b in (2, 3) for c in (4, 5)]
    keep = [c for c in cones if rng.random() < 0.7] or cones[:1]
    g = random_unimodular(rng, 3, steps=3)
    return _compact(3, [intlin.matvec(g, r) for r in rays], keep)


def _compact(n, rays, cones):
    used = sorted({i for c in cones for i in c})
    pos = {r: k for k, r in enumerate(used)}
    return build_fan(n, [rays[i] for i in used], [[pos[i] for i in c] for c in cones])


def random_fan(rng):
    n = rng.choice([1, 2, 2, 3])
    if n == 1:
        return _compact(1, [(1,), (-1,)], rng.choice([[[0], [1]], [[0]], [[1]]]))
    return _random_planar_fan(rng) if n == 2 else _random_spatial_fan(rng)


def random_system(rng, fan, max_value=2):
    """A valid datum: random nonnegative ray values, random subset of sections."""
    psi = zero_support(fan)
    for _ in range(10):
        values = [rng.randint(0, max_value) for _ in fan.rays]
        try:
            psi = support_from_ray_values(fan, values)
            break
        except NotCartier:
            continue
    pts = list(global_section_characters(psi, fan, bound=2).points)
    rng.shuffle(pts)
    chosen = pts[: rng.randint(1, min(len(pts), 5))]
    return system_datum(chosen, psi)


def random_fan_problem(rng, max_systems=3):
    fan = random_fan(rng)
    return fan, [random_system(rng, fan) for _ in range(rng.randint(1, max_systems))]


def transform_problem(fan, data, g, ginv):
    """Image of a fan and its data under ``v -> g v`` on N and ``chi -> chi g^-1`` on M."""
    n = fan.rank
    rays = [intlin.matvec(g, r) for r in fan.rays]
    cones = [list(fan.cones[c].rays) for c in fan.maximal_ids]
    f2 = build_fan(n, rays, cones)
    out = []
    for d in data:
        values = [d.psi.ray_value(fan, r) for r in range(len(fan.rays))]
        out.append(datum(f2, [intlin.vecmat(p, ginv, n) for p in d.support], values))
    return f2, out
