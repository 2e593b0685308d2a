"""Exact integer linear algebra.

Matrices are row-major tuples of tuples of Python ints, so every routine is
exact regardless of entry size. Vectors of ``N`` and covectors of ``M`` are
plain integer tuples; the pairing between them is :func:`dot`.
"""

from __future__ import annotations

from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import InternalError, NotInSublattice

Vector = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int) -> Matrix:
    return tuple((0,) * cols for _ in range(rows))


def as_matrix(rows: Iterable[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def transpose(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> Matrix:
    if not m:
        return tuple(() for _ in range(cols or 0))
    return tuple(zip(*m))


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = transpose(b)
    if not bt:
        return tuple(() for _ in a)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    return tuple(dot(row, v) for row in a)


def vecmat(v: Sequence[int], a: Sequence[Sequence[int]], cols: int) -> Vector:
    out = [0] * cols
    for c, row in zip(v, a):
        if c:
            for j, x in enumerate(row):
                out[j] += c * x
    return tuple(out)


def primitive(v: Sequence[int]) -> Vector:
    """Divide ``v`` by the gcd of its entries (zero vector unchanged)."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def rank(vectors: Sequence[Sequence[int]]) -> int:
    """Rank over Q via fraction-free elimination."""
    a = [list(v) for v in vectors if any(v)]
    if not a:
        return 0
    cols = len(a[0])
    r = 0
    prev = 1
    for c in range(cols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, len(a)):
            f = a[i][c]
            row_i, row_r = a[i], a[r]
            for j in range(c, cols):
                row_i[j] = (row_i[j] * p - f * row_r[j]) // prev
        prev = p
        r += 1
        if r == len(a):
            break
    return r


def hermite_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``u @ m == h``. Nonzero rows
    of ``h`` come first, each pivot is positive, and entries above a pivot
    lie in ``[0, pivot)``.
    """
    a = [list(r) for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = [list(r) for r in identity(rows)]

    def sub(i: int, k: int, q: int) -> None:
        if q:
            ai, ak, ui, uk = a[i], a[k], u[i], u[k]
            for j in range(cols):
                ai[j] -= q * ak[j]
            for j in range(rows):
                ui[j] -= q * uk[j]

    r = 0
    for c in range(cols):
        if r == rows:
            break
        while True:
            nz = [i for i in range(r, rows) if a[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: (abs(a[i][c]), i))
            a[r], a[piv] = a[piv], a[r]
            u[r], u[piv] = u[piv], u[r]
            clean = True
            for i in range(r + 1, rows):
                if a[i][c]:
                    sub(i, r, a[i][c] // a[r][c])
                    if a[i][c]:
                        clean = False
            if clean:
                break
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            sub(i, r, a[i][c] // a[r][c])
        r += 1
    return as_matrix(a), as_matrix(u)


def _smith(m: Sequence[Sequence[int]]):
    """Smith form with transforms: returns (d, u, v, v_inv), u @ m @ v == d."""
    a = [list(r) for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = [list(r) for r in identity(rows)]
    v = [list(r) for r in identity(cols)]
    vi = [list(r) for r in identity(cols)]

    def row_sub(i: int, k: int, q: int) -> None:
        # row_i -= q * row_k
        for j in range(cols):
            a[i][j] -= q * a[k][j]
        for j in range(rows):
            u[i][j] -= q * u[k][j]

    def col_sub(j: int, k: int, q: int) -> None:
        # col_j -= q * col_k ; v_inv picks up row_k += q * row_j
        for i in range(rows):
            a[i][j] -= q * a[i][k]
        for i in range(cols):
            v[i][j] -= q * v[i][k]
        for i in range(cols):
            vi[k][i] += q * vi[j][i]

    def row_swap(i: int, k: int) -> None:
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def col_swap(j: int, k: int) -> None:
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]
        vi[j], vi[k] = vi[k], vi[j]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    x = a[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                return a, u, v, vi
            _, i, j = best
            row_swap(t, i)
            col_swap(t, j)
            p = a[t][t]
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    row_sub(i, t, a[i][t] // p)
                    done = done and a[i][t] == 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    col_sub(j, t, a[t][j] // p)
                    done = done and a[t][j] == 0
            if not done:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            # pull the offending row into row t so the next pass lowers the pivot
            row_sub(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return a, u, v, vi


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``(d, u, v)`` with ``u @ m @ v == d``.

    ``u`` and ``v`` are unimodular, ``d`` is diagonal with nonnegative entries
    and each nonzero diagonal entry divides the next.
    """
    d, u, v, _ = _smith(m)
    return as_matrix(d), as_matrix(u), as_matrix(v)


def invariant_factors(m: Sequence[Sequence[int]]) -> tuple[int, ...]:
    d, _, _, _ = _smith(m)
    return tuple(d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i])


def canonical_basis(vectors: Sequence[Sequence[int]]) -> tuple[Vector, ...]:
    """HNF-normalized basis of the lattice spanned by ``vectors``."""
    if not vectors:
        return ()
    h, _ = hermite_normal_form(vectors)
    return tuple(r for r in h if any(r))


def saturate(generators: Sequence[Sequence[int]]) -> tuple[Vector, ...]:
    """Canonical basis of the saturation of the lattice spanned by ``generators``.

    The saturation is the set of lattice points having a positive multiple in
    the span; the result has as many elements as the rank of the generators.
    """
    gens = [tuple(g) for g in generators]
    if not gens:
        return ()
    n = len(gens[0])
    if any(len(g) != n for g in gens):
        raise ValueError("generators must share one ambient rank")
    d, _, _, vi = _smith(gens)
    r = sum(1 for i in range(min(len(gens), n)) if d[i][i])
    return canonical_basis(vi[:r])


def orthogonal_complement_basis(
    vectors: Sequence[Sequence[int]], rank: Optional[int] = None
) -> tuple[Vector, ...]:
    """Canonical basis of ``{m : <m, v> = 0 for all v in vectors}``.

    ``rank`` is the ambient rank; it may be omitted when ``vectors`` is
    nonempty.
    """
    vecs = [tuple(v) for v in vectors]
    if rank is None:
        if not vecs:
            raise ValueError("ambient rank required for an empty vector list")
        rank = len(vecs[0])
    if any(len(v) != rank for v in vecs):
        raise ValueError("vectors must share one ambient rank")
    if rank == 0:
        return ()
    if not vecs:
        return identity(rank)
    h, u = hermite_normal_form(transpose(vecs))
    kernel = [u[i] for i in range(rank) if not any(h[i])]
    return canonical_basis(kernel)


def solve_integer(a: Sequence[Sequence[int]], b: Sequence[int]) -> Optional[Vector]:
    """An integer solution ``x`` of ``a @ x == b`` or ``None`` if there is none.

    ``a`` has shape ``k x n``; ``n`` is taken from the first row, so ``a``
    must be nonempty.
    """
    rows = len(a)
    cols = len(a[0])
    d, u, v, _ = _smith(a)
    ub = matvec(u, b)
    y = [0] * cols
    for i in range(rows):
        di = d[i][i] if i < cols else 0
        if di == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % di:
                return None
            y[i] = ub[i] // di
    x = matvec(v, y)
    if matvec(a, x) != tuple(b):
        raise InternalError("Smith-based integer solve failed re-multiplication")
    return x


def coordinates_in_sublattice(v: Sequence[int], basis: Sequence[Sequence[int]]) -> Vector:
    """Integer coefficients ``c`` with ``sum(c_i * basis_i) == v``.

    Raises:
        NotInSublattice: ``v`` is not an integer combination of ``basis``.
    """
    v = tuple(v)
    if not basis:
        if any(v):
            raise NotInSublattice(f"{v} is not in the zero lattice")
        return ()
    c = solve_integer(transpose(basis), v)
    if c is None:
        raise NotInSublattice(f"{v} is not in the span of {tuple(map(tuple, basis))}")
    return c


def is_unimodular(m: Sequence[Sequence[int]]) -> bool:
    return len(m) == 0 or (len(m) == len(m[0]) and abs(determinant(m)) == 1)
