import random

import pytest

from toric_components.errors import Degenerate, EmptySupport, ZeroResultant
from toric_components.khovanskii import defect_table, k_torus
from toric_components.oracle import (
    RandomSystemSpec,
    bernstein_resultant_count,
    count_with_retries,
    exhaustive_defect_check,
    generated_lattice,
    naive_defect,
    poly_gcd,
    random_bernstein_pair,
    random_coefficients,
    sylvester_resultant,
)
from toric_components.oracle import _y_coefficients
from toric_components.polytope import mixed_volume, point_set

TRI2 = [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (0, 2)]


def sympy_resultants(f, g):
    """Sylvester determinant and PRS resultant from sympy, as coefficient tuples in x."""
    import sympy
    from sympy.polys.subresultants_qq_zz import sylvester

    x, y = sympy.symbols("x y")
    fp = sum(sympy.Integer(c) * x ** i * y ** j for (i, j), c in f.items())
    gp = sum(sympy.Integer(c) * x ** i * y ** j for (i, j), c in g.items())

    def coeffs(e):
        e = sympy.expand(e)
        return () if e == 0 else tuple(int(c) for c in reversed(sympy.Poly(e, x).all_coeffs()))

    return coeffs(sylvester(fp, gp, y).det()), coeffs(sympy.resultant(fp, gp, y))


def test_examples():
    assert count_with_retries([[(0, 0), (1, 0)], [(0, 0), (0, 1)]], seed=1)[0] == 1
    assert count_with_retries([TRI2, TRI2], seed=1)[0] == 4
    spec = RandomSystemSpec((point_set([(0, 0), (1, 0)]),) * 2, 1000, 5)
    try:
        assert bernstein_resultant_count(spec) == 0
    except (Degenerate, ZeroResultant):
        pass
    with pytest.raises(EmptySupport):
        bernstein_resultant_count(RandomSystemSpec(((), point_set([(0, 0)]))))


def test_coefficients_are_deterministic_and_nonzero():
    spec = RandomSystemSpec((point_set(TRI2), point_set(TRI2)), 7, 99)
    a = random_coefficients(spec, 3)
    assert a == random_coefficients(spec, 3)
    assert a != random_coefficients(spec, 4)
    assert all(0 < abs(c) <= 7 for f in a for c in f.values())


def test_sylvester_matches_sympy():
    rng = random.Random(2)
    for _ in range(30):
        f, g = ({(rng.randint(0, 3), rng.randint(0, 3)): rng.randint(-9, 9) or 1 for _ in range(4)}
                for _ in range(2))
        mine = sylvester_resultant(_y_coefficients(f), _y_coefficients(g))
        det, prs = sympy_resultants(f, g)
        assert mine == det
        # the PRS resultant may differ by a sign convention
        assert mine in (prs, tuple(-c for c in prs))


def test_poly_gcd():
    # (x - 1)(x + 2) and (x - 1)(3x + 1)
    assert poly_gcd((-2, 1, 1), (-1, -2, 3)) == (-1, 1)
    assert poly_gcd((1, 1), (2,)) == (1,)


def test_bernstein_against_mixed_volume():
    rng = random.Random(1)
    for i in range(60):
        pair = random_bernstein_pair(rng)
        assert generated_lattice(pair) == ((1, 0), (0, 1))
        assert k_torus(pair).j0 == (0, 1)
        count, attempts = count_with_retries(pair, seed=1000 + i)
        assert count == mixed_volume(*pair) == k_torus(pair).value
        assert count_with_retries(pair, seed=1000 + i) == (count, attempts)


def test_exhaustive_defects():
    assert exhaustive_defect_check([[(0, 0)]]).ok
    assert exhaustive_defect_check([[(0, 0), (1, 0)], [(0, 0), (1, 0)]]).ok
    assert exhaustive_defect_check([[(0, 0), (1, 0)], [(0, 0), (0, 1)]]).ok
    assert naive_defect([[(0, 0), (1, 0)], [(0, 0), (0, 1)]], (0, 1)) == 0
    rng = random.Random(9)
    for _ in range(50):
        fam = [point_set((rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(rng.randint(1, 3)))
               for _ in range(rng.randint(1, 4))]
        check = exhaustive_defect_check(fam)
        assert check.ok, check.mismatches
        assert len(defect_table(fam)) == 2 ** len(fam) - 1
