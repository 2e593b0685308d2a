"""Lattice polytopes given by finite point sets in ``M``.

Volumes are lattice-normalized: the unimodular simplex has volume 1, so
every volume of a lattice polytope is an integer. Hulls are built with an
exact placing (beneath-beyond) triangulation.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product
from math import factorial
from operator import mul
from typing import Iterable, Sequence

from . import intlin
from .errors import ArityMismatch, EmptySet, InternalError

Point = tuple[int, ...]
PointSet = tuple[Point, ...]


def point_set(points: Iterable[Sequence[int]]) -> PointSet:
    """Deduplicate and sort ``points`` into the canonical ``PointSet`` form."""
    pts = sorted({tuple(int(x) for x in p) for p in points})
    if pts and any(len(p) != len(pts[0]) for p in pts):
        raise ValueError("points must share one ambient rank")
    return tuple(pts)


def _require(s: Sequence[Point]) -> None:
    if not s:
        raise EmptySet("point set is empty")


def translate(s: Sequence[Point], shift: Sequence[int]) -> PointSet:
    return point_set(tuple(a + b for a, b in zip(p, shift)) for p in s)


def scale(s: Sequence[Point], k: int) -> PointSet:
    return point_set(tuple(k * x for x in p) for p in s)


def difference_vectors(s: Sequence[Point]) -> list[Point]:
    p0 = s[0]
    return [tuple(a - b for a, b in zip(p, p0)) for p in s[1:]]


def affine_dim(s: Sequence[Point]) -> int:
    """Dimension of the affine span of ``s``."""
    _require(s)
    return intlin.rank(difference_vectors(list(s)))


def minkowski_sum(a: Sequence[Point], b: Sequence[Point]) -> PointSet:
    _require(a)
    _require(b)
    if len(a[0]) != len(b[0]):
        raise ValueError("ambient ranks differ")
    return point_set(tuple(x + y for x, y in zip(p, q)) for p in a for q in b)


def _normal(vertices: Sequence[Point]) -> Point:
    """Generalized cross product: a covector vanishing on all edge vectors.

    With ``n`` vertices in rank ``n`` the value ``<h, p - v0>`` equals, up to
    sign, the determinant of the simplex spanned by the vertices and ``p``.
    """
    v0 = vertices[0]
    n = len(v0)
    if n == 1:
        return (1,)
    if n == 2:
        (a0, a1), (b0, b1) = v0, vertices[1]
        return (b1 - a1, a0 - b0)
    if n == 3:
        a0, a1, a2 = v0
        b0, b1, b2 = vertices[1]
        c0, c1, c2 = vertices[2]
        u0, u1, u2 = b0 - a0, b1 - a1, b2 - a2
        w0, w1, w2 = c0 - a0, c1 - a1, c2 - a2
        return (u1 * w2 - u2 * w1, u2 * w0 - u0 * w2, u0 * w1 - u1 * w0)
    rows = [tuple(a - b for a, b in zip(v, v0)) for v in vertices[1:]]
    return tuple(
        (-1) ** j * intlin.determinant([r[:j] + r[j + 1:] for r in rows])
        for j in range(n)
    )


class _Placing:
    """Placing triangulation of a full-dimensional point configuration.

    Facets of the current boundary are stored as ``(vertex ids, h, b)`` with
    ``<h, x> <= b`` on the hull; ``volume`` accumulates the lattice volume of
    the simplices created so far.
    """

    def __init__(self, points: Sequence[Point], n: int):
        self.points = list(points)
        self.n = n
        k = len(self.points)
        c = [sum(p[j] for p in self.points) for j in range(n)]
        # far points first: fewer facets are created and then destroyed
        order = sorted(
            range(k),
            key=lambda i: (-sum((k * x - cj) ** 2 for x, cj in zip(self.points[i], c)), i),
        )
        simplex = self._initial_simplex(order)
        self.interior = tuple(sum(self.points[i][j] for i in simplex) for j in range(n))
        self.facets: list[tuple[tuple[int, ...], Point, int]] = []
        for drop in simplex:
            self._add_facet(tuple(sorted(i for i in simplex if i != drop)))
        v0 = self.points[simplex[0]]
        self.volume = abs(intlin.determinant(
            [tuple(a - b for a, b in zip(self.points[i], v0)) for i in simplex[1:]]
        ))
        used = set(simplex)
        for i in order:
            if i not in used:
                self._place(i)

    def _initial_simplex(self, order: list[int]) -> list[int]:
        chosen = [order[0]]
        p0 = self.points[order[0]]
        diffs: list[Point] = []
        for i in order[1:]:
            d = tuple(a - b for a, b in zip(self.points[i], p0))
            if intlin.rank(diffs + [d]) > len(diffs):
                diffs.append(d)
                chosen.append(i)
                if len(diffs) == self.n:
                    return chosen
        raise InternalError("placing triangulation needs a full-dimensional point set")

    def _add_facet(self, ids: tuple[int, ...]) -> None:
        verts = [self.points[i] for i in ids]
        h = _normal(verts)
        b = sum(map(mul, h, verts[0]))
        if sum(map(mul, h, self.interior)) > (self.n + 1) * b:
            h = tuple(-x for x in h)
            b = -b
        self.facets.append((ids, h, b))

    def _place(self, i: int) -> None:
        p = self.points[i]
        visible, kept = [], []
        for f in self.facets:
            if sum(map(mul, f[1], p)) > f[2]:
                visible.append(f)
            else:
                kept.append(f)
        if not visible:
            return
        ridges: dict[tuple[int, ...], int] = {}
        for ids, h, b in visible:
            self.volume += sum(map(mul, h, p)) - b
            for k in range(len(ids)):
                r = ids[:k] + ids[k + 1:]
                ridges[r] = ridges.get(r, 0) + 1
        self.facets = kept
        for r, count in ridges.items():
            if count == 1:
                self._add_facet(tuple(sorted(r + (i,))))

    def support_ids(self) -> set[int]:
        return {i for ids, _, _ in self.facets for i in ids}


def _affine_chart(s: Sequence[Point]) -> tuple[list[Point], int]:
    """Coordinates of ``s`` (relative to ``s[0]``) in a basis of its affine lattice."""
    diffs = [tuple(a - b for a, b in zip(p, s[0])) for p in s]
    d = intlin.rank(diffs)
    if d == len(s[0]):
        return diffs, d
    basis = intlin.saturate(diffs)
    return [intlin.coordinates_in_sublattice(x, basis) for x in diffs], d


def hull_points(s: Sequence[Point]) -> PointSet:
    """A subset of ``s`` with the same convex hull (contains every vertex)."""
    _require(s)
    s = point_set(s)
    if len(s) <= 2:
        return s
    coords, d = _affine_chart(s)
    if d == 0:
        return s[:1]
    if len(s) == d + 1:
        return s
    keep = _Placing(coords, d).support_ids()
    return tuple(s[i] for i in sorted(keep))


def lattice_volume(s: Sequence[Point]) -> int:
    """Lattice volume of ``Conv s`` in the ambient lattice (0 if not full-dimensional)."""
    _require(s)
    s = point_set(s)
    n = len(s[0])
    if n == 0:
        return 1
    if affine_dim(s) < n:
        return 0
    return _Placing(s, n).volume


def _sum_volume(sets: Sequence[Sequence[Point]]) -> int:
    total = hull_points(sets[0])
    for k, s in enumerate(sets[1:], start=2):
        total = minkowski_sum(total, hull_points(s))
        if k < len(sets):
            total = hull_points(total)
    return lattice_volume(total)


def _check_arity(sets: Sequence[Sequence[Point]]) -> int:
    for s in sets:
        _require(s)
    if not sets:
        return 0
    n = len(sets[0][0])
    if any(len(s[0]) != n for s in sets):
        raise ValueError("ambient ranks differ")
    if len(sets) != n:
        raise ArityMismatch(f"{len(sets)} polytopes given in rank {n}")
    return n


def mixed_volume(*sets: Sequence[Point]) -> int:
    """Lattice mixed volume by inclusion-exclusion over partial Minkowski sums.

    Normalized so that ``mixed_volume(P, ..., P) == lattice_volume(P)``.
    Requires exactly ``n`` nonempty point sets in rank ``n``.
    """
    n = _check_arity(sets)
    if n == 0:
        return 1
    total = 0
    for size in range(1, n + 1):
        sign = (-1) ** (n - size)
        for idx in combinations(range(n), size):
            total += sign * _sum_volume([sets[i] for i in idx])
    q, r = divmod(total, factorial(n))
    if r:
        raise InternalError(f"polarization sum {total} not divisible by {n}!")
    return q


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve a consistent, full-column-rank overdetermined system exactly."""
    cols = len(rows[0])
    a = [r[:] + [b] for r, b in zip(rows, rhs)]
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            raise InternalError("interpolation system is rank deficient")
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    if any(row[-1] != 0 for row in a[r:]):
        raise InternalError("volume values are not a homogeneous polynomial of degree n")
    return [a[i][-1] for i in range(cols)]


def volume_polynomial(*sets: Sequence[Point]) -> dict[tuple[int, ...], Fraction]:
    """Coefficients of ``lam -> Vol(lam_1 P_1 + ... + lam_n P_n)``.

    Interpolated from exact volumes on the grid ``{1..n+1}^n``; keys are
    exponent tuples of total degree ``n``.
    """
    n = _check_arity(sets)
    monomials = []
    for combo in combinations_with_replacement(range(n), n):
        e = [0] * n
        for i in combo:
            e[i] += 1
        monomials.append(tuple(e))
    hulls = [hull_points(s) for s in sets]
    rows, rhs = [], []
    for lam in product(range(1, n + 2), repeat=n):
        scaled = [scale(h, k) for h, k in zip(hulls, lam)]
        rhs.append(Fraction(_sum_volume(scaled)))
        row = []
        for e in monomials:
            v = 1
            for k, ei in zip(lam, e):
                v *= k ** ei
            row.append(Fraction(v))
        rows.append(row)
    return dict(zip(monomials, _solve_exact(rows, rhs)))


def mixed_volume_oracle(*sets: Sequence[Point]) -> int:
    """Mixed volume read off the interpolated volume polynomial.

    The coefficient of ``lam_1 * ... * lam_n`` is ``n!`` times the mixed
    volume in the diagonal-normalized convention.
    """
    n = _check_arity(sets)
    if n == 0:
        return 1
    coeff = volume_polynomial(*sets)[(1,) * n]
    value = coeff / factorial(n)
    if value.denominator != 1:
        raise InternalError(f"interpolated mixed coefficient {coeff} not divisible by {n}!")
    return int(value)
