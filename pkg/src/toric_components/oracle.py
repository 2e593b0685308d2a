"""Brute-force verifiers used to cross-check the main algorithms.

* a resultant count of torus solutions of two random integer bivariate
  Laurent polynomials, compared with the mixed volume;
* an exhaustive recomputation of every defect from explicit Minkowski sums;
* random instance generators for the interpolation mixed-volume oracle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import Callable, Optional, Sequence

from . import intlin
from .errors import Degenerate, EmptySupport, ZeroResultant
from .khovanskii import defect_table, k_torus
from .polytope import Point, PointSet, mixed_volume, mixed_volume_oracle, point_set

Poly = tuple[int, ...]  # coefficients in Z[x], constant term first, no trailing zeros

MAX_RETRIES = 10


# --- univariate integer polynomials -------------------------------------------

def _trim(c: Sequence[int]) -> Poly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _deg(p: Poly) -> int:
    return len(p) - 1


def _add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return _trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def _neg(p: Poly) -> Poly:
    return tuple(-x for x in p)


def _mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def _exact_div(p: Poly, q: Poly) -> Poly:
    """Quotient ``p / q`` in Z[x]; the division must be exact."""
    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(p)
    out = [0] * max(len(p) - len(q) + 1, 0)
    lead = q[-1]
    for k in range(len(out) - 1, -1, -1):
        c, rem = divmod(r[k + len(q) - 1], lead)
        if rem:
            raise ArithmeticError("inexact polynomial division")
        out[k] = c
        if c:
            for j, b in enumerate(q):
                r[k + j] -= c * b
    if any(r):
        raise ArithmeticError("inexact polynomial division")
    return _trim(out)


def _content(p: Poly) -> int:
    g = 0
    for x in p:
        g = gcd(g, x)
    return g


def _primitive_part(p: Poly) -> Poly:
    if not p:
        return p
    c = _content(p)
    if p[-1] < 0:
        c = -c
    return tuple(x // c for x in p)


def _derivative(p: Poly) -> Poly:
    return _trim([i * p[i] for i in range(1, len(p))])


def _pseudo_rem(p: Poly, q: Poly) -> Poly:
    r = list(p)
    lead = q[-1]
    while len(r) >= len(q) and any(r):
        c = r[-1]
        shift = len(r) - len(q)
        r = [lead * x for x in r]
        for j, b in enumerate(q):
            r[shift + j] -= c * b
        r = list(_trim(r))
    return _trim(r)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Primitive gcd in Z[x] by the primitive polynomial remainder sequence."""
    a, b = _primitive_part(_trim(p)), _primitive_part(_trim(q))
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    while b:
        a, b = b, _primitive_part(_pseudo_rem(a, b))
    return _primitive_part(a)


def _strip_x(p: Poly) -> Poly:
    k = 0
    while k < len(p) and p[k] == 0:
        k += 1
    return p[k:]


# --- resultant ------------------------------------------------------------------

def _poly_determinant(m: list[list[Poly]]) -> Poly:
    """Determinant over Z[x] by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return (1,)
    a = [row[:] for row in m]
    sign = 1
    prev: Poly = (1,)
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return ()
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = _add(_mul(a[k][k], a[i][j]), _neg(_mul(a[i][k], a[k][j])))
                a[i][j] = _exact_div(num, prev)
            a[i][k] = ()
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign > 0 else _neg(det)


def _y_coefficients(f: dict[Point, int]) -> list[Poly]:
    """``f`` as a polynomial in y over Z[x]: entry ``j`` is the coefficient of ``y^j``."""
    top = max(j for _, j in f)
    out = []
    for j in range(top + 1):
        width = max((i for i, jj in f if jj == j), default=-1) + 1
        c = [0] * width
        for (i, jj), v in f.items():
            if jj == j:
                c[i] = v
        out.append(_trim(c))
    return out


def sylvester_resultant(f: Sequence[Poly], g: Sequence[Poly]) -> Poly:
    """``Res_y(f, g)`` for polynomials in y given by their Z[x] coefficients."""
    p, q = len(f) - 1, len(g) - 1
    size = p + q
    rows = []
    for k in range(q):
        row: list[Poly] = [()] * size
        for j, c in enumerate(reversed(f)):
            row[k + j] = c
        rows.append(row)
    for k in range(p):
        row = [()] * size
        for j, c in enumerate(reversed(g)):
            row[k + j] = c
        rows.append(row)
    return _poly_determinant(rows)


@dataclass(frozen=True)
class RandomSystemSpec:
    supports: tuple[PointSet, PointSet]
    coefficient_bound: int = 1000
    seed: int = 0


def random_coefficients(spec: RandomSystemSpec, retry: int = 0) -> list[dict[Point, int]]:
    """Nonzero integer coefficients in ``[-bound, bound]``, fixed by ``(seed, retry)``."""
    rng = random.Random(f"bernstein:{spec.seed}:{retry}")
    b = spec.coefficient_bound
    out = []
    for s in spec.supports:
        out.append({p: rng.choice([-1, 1]) * rng.randint(1, b) for p in s})
    return out


def _shifted(f: dict[Point, int]) -> dict[Point, int]:
    lo = [min(p[k] for p in f) for k in range(2)]
    return {(p[0] - lo[0], p[1] - lo[1]): c for p, c in f.items()}


def _torus_count(f: dict[Point, int], g: dict[Point, int]) -> int:
    """Torus solution count by eliminating the second variable."""
    f, g = _shifted(f), _shifted(g)
    fy, gy = _y_coefficients(f), _y_coefficients(g)
    if len(fy) == 1 and len(gy) == 1:
        # neither involves y: generic univariate polynomials share no root
        if _deg(poly_gcd(_strip_x(fy[0]), _strip_x(gy[0]))) > 0:
            raise ZeroResultant("univariate polynomials share a root")
        return 0
    res = sylvester_resultant(fy, gy)
    if not res:
        raise ZeroResultant("resultant vanishes identically")
    r = _primitive_part(_strip_x(res))
    if _deg(r) == 0:
        return 0
    if _deg(poly_gcd(r, _derivative(r))) > 0:
        raise Degenerate("resultant is not squarefree")
    # a y-free polynomial has no roots at y = 0 or y = infinity to lose
    for h in [c for c in (fy, gy) if len(c) > 1]:
        if _deg(poly_gcd(r, h[-1])) > 0 or _deg(poly_gcd(r, h[0])) > 0:
            raise Degenerate("a solution escapes to y = 0 or y = infinity")
    return _deg(r)


# monomial changes of variables: automorphisms of the torus, so counts are unchanged
_CHARTS: tuple[tuple[tuple[int, int], tuple[int, int]], ...] = (
    ((1, 0), (0, 1)),
    ((0, 1), (1, 0)),
    ((1, 0), (1, 1)),
    ((1, 1), (0, 1)),
)


def _in_chart(f: dict[Point, int], g: tuple[tuple[int, int], tuple[int, int]]) -> dict[Point, int]:
    (a, b), (c, d) = g
    return {(i * a + j * c, i * b + j * d): v for (i, j), v in f.items()}


def bernstein_resultant_count(spec: RandomSystemSpec, retry: int = 0) -> int:
    """Number of solutions in the torus of a random system with the given supports.

    Both Laurent polynomials are shifted into the positive quadrant and one
    variable is eliminated by a resultant over Z[other variable]. The count
    is the degree of the resultant's part coprime to that variable, accepted
    only if it is squarefree and no root escapes to 0 or infinity in the
    eliminated variable. Elimination of y is tried first, then of x, then
    of y after two monomial shears.

    Raises:
        Degenerate: the coefficient draw is not generic enough; retry.
        ZeroResultant: the two polynomials share a factor; retry.
    """
    for s in spec.supports:
        if not s:
            raise EmptySupport("bernstein oracle needs nonempty supports")
        if len(s[0]) != 2:
            raise ValueError("bernstein oracle works in rank 2 only")
    f, g = random_coefficients(spec, retry)
    for chart in _CHARTS[:-1]:
        try:
            return _torus_count(_in_chart(f, chart), _in_chart(g, chart))
        except Degenerate:
            pass
    return _torus_count(_in_chart(f, _CHARTS[-1]), _in_chart(g, _CHARTS[-1]))


def count_with_retries(
    supports: Sequence[Sequence[Point]], seed: int, bound: int = 1000, retries: int = MAX_RETRIES
) -> tuple[int, int]:
    """``(count, attempts)``, redrawing coefficients on degenerate draws.

    Raises:
        Degenerate: every attempt was degenerate.
    """
    spec = RandomSystemSpec((point_set(supports[0]), point_set(supports[1])), bound, seed)
    last: Exception = Degenerate("no attempts made")
    for r in range(retries):
        try:
            return bernstein_resultant_count(spec, r), r + 1
        except (Degenerate, ZeroResultant) as e:
            last = e
    raise Degenerate(f"{retries} coefficient draws were all degenerate: {last}")


# --- exhaustive defects ----------------------------------------------------------

def _rank_by_smith(vectors: Sequence[Point]) -> int:
    if not vectors:
        return 0
    d, _, _ = intlin.smith_normal_form(vectors)
    return sum(1 for i in range(min(len(d), len(d[0]))) if d[i][i])


def _explicit_sum(sets: Sequence[PointSet]) -> set[Point]:
    total = {tuple(0 for _ in sets[0][0])}
    for s in sets:
        total = {tuple(a + b for a, b in zip(p, q)) for p in total for q in s}
    return total


def naive_defect(supports: Sequence[Sequence[Point]], j: Sequence[int]) -> int:
    """Defect from the explicit Minkowski sum and a Smith-form rank."""
    pts = sorted(_explicit_sum([point_set(supports[i]) for i in j]))
    base = pts[0]
    return _rank_by_smith([tuple(a - b for a, b in zip(p, base)) for p in pts[1:]]) - len(j)


@dataclass(frozen=True)
class DefectCheck:
    mismatches: tuple[tuple[tuple[int, ...], int, int], ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def exhaustive_defect_check(supports: Sequence[Sequence[Point]]) -> DefectCheck:
    """Compare every tabulated defect with :func:`naive_defect`.

    Mismatches are ``(subset, tabulated, naive)`` triples.
    """
    sets = [point_set(s) for s in supports]
    table = defect_table(sets)
    bad = []
    for size in range(1, len(sets) + 1):
        for j in combinations(range(len(sets)), size):
            expected = naive_defect(sets, j)
            if table[j] != expected:
                bad.append((j, table[j], expected))
    return DefectCheck(tuple(bad))


# --- random instances -------------------------------------------------------------

def random_point_set(rng: random.Random, n: int, max_points: int, lo: int, hi: int) -> PointSet:
    k = rng.randint(1, max_points)
    return point_set(tuple(rng.randint(lo, hi) for _ in range(n)) for _ in range(k))


def random_mixed_volume_case(rng: random.Random) -> list[PointSet]:
    n = rng.randint(1, 3)
    return [random_point_set(rng, n, 6, -4, 4) for _ in range(n)]


def random_family(rng: random.Random, max_systems: int = 4, max_rank: int = 3,
                  lo: int = -3, hi: int = 3) -> list[PointSet]:
    n = rng.randint(1, max_rank)
    m = rng.randint(1, max_systems)
    return [random_point_set(rng, n, 4, lo, hi) for _ in range(m)]


def generated_lattice(supports: Sequence[Sequence[Point]]) -> tuple[Point, ...]:
    """Hermite basis of the lattice generated by within-set differences (not saturated)."""
    diffs = [tuple(a - b for a, b in zip(p, s[0])) for s in supports for p in s[1:]]
    return intlin.canonical_basis(diffs) if diffs else ()


def random_bernstein_pair(rng: random.Random) -> tuple[PointSet, PointSet]:
    """Two supports of at least two points each, in the zero-defect regime, whose
    differences generate the whole lattice."""
    while True:
        pair = tuple(
            point_set(tuple(rng.randint(0, 3) for _ in range(2)) for _ in range(rng.randint(2, 5)))
            for _ in range(2)
        )
        if min(len(s) for s in pair) < 2:
            continue
        if generated_lattice(pair) != ((1, 0), (0, 1)):
            continue
        if k_torus(pair).j0 == (0, 1):
            return pair


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: int
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def _run(name: str, seed: int, cases: int, one: Callable[[random.Random, int], Optional[str]]) -> SuiteResult:
    rng = random.Random(seed)
    failures = []
    for i in range(cases):
        msg = one(rng, i)
        if msg is not None:
            failures.append(f"case {i}: {msg}")
    return SuiteResult(name, cases - len(failures), tuple(failures))


def mixed_volume_suite(seed: int, cases: int) -> SuiteResult:
    def one(rng, _):
        sets = random_mixed_volume_case(rng)
        a, b = mixed_volume(*sets), mixed_volume_oracle(*sets)
        return None if a == b else f"supports={sets} polarization={a} interpolation={b}"
    return _run("mixedvol", seed, cases, one)


def bernstein_suite(seed: int, cases: int) -> SuiteResult:
    def one(rng, i):
        pair = random_bernstein_pair(rng)
        mv = mixed_volume(*pair)
        try:
            count, _ = count_with_retries(pair, seed=seed * 100003 + i)
        except Degenerate as e:
            return f"supports={pair} {e}"
        return None if count == mv else f"supports={pair} resultant={count} mixed_volume={mv}"
    return _run("bernstein", seed, cases, one)


def defect_suite(seed: int, cases: int) -> SuiteResult:
    def one(rng, _):
        fam = random_family(rng)
        check = exhaustive_defect_check(fam)
        return None if check.ok else f"supports={fam} mismatches={check.mismatches}"
    return _run("defect", seed, cases, one)


SUITES: dict[str, Callable[[int, int], SuiteResult]] = {
    "mixedvol": mixed_volume_suite,
    "bernstein": bernstein_suite,
    "defect": defect_suite,
}
