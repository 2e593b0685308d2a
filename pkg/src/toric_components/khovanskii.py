"""Number of irreducible components of a general complete intersection in a torus.

For supports ``A_1..A_m`` in a lattice ``M`` of rank ``n`` the defect of a
nonempty index set ``J`` is ``dim(sum_{j in J} A_j) - |J|``. A negative
defect anywhere empties the intersection, all-positive defects make it
irreducible, and otherwise the count is a mixed volume over the greatest
zero-defect subset, taken in the saturated lattice spanned by its supports.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from . import intlin
from .errors import EmptyIndexSet, EmptySupport, InternalError, TooManySystems
from .polytope import Point, mixed_volume, point_set

MAX_SYSTEMS = 20


class Case(enum.Enum):
    ALL_POSITIVE = "AllPositive"
    NEGATIVE_DEFECT = "NegativeDefect"
    ZERO_DEFECT = "ZeroDefect"


@dataclass(frozen=True)
class DefectReport:
    subset: tuple[int, ...]
    defect: int


@dataclass(frozen=True)
class KResult:
    value: int
    case: Case
    j0: Optional[tuple[int, ...]] = None
    lattice_l: Optional[tuple[Point, ...]] = None
    defects: Optional[dict[tuple[int, ...], int]] = None


def _directions(support: Sequence[Point]) -> list[Point]:
    base = support[0]
    return [tuple(a - b for a, b in zip(p, base)) for p in support[1:]]


def _check(supports: Sequence[Sequence[Point]]) -> None:
    for i, s in enumerate(supports):
        if not s:
            raise EmptySupport(f"support {i} is empty")


def defect(supports: Sequence[Sequence[Point]], j: Sequence[int]) -> int:
    """``dim(sum of A_j for j in J) - |J|`` for a nonempty index set ``J`` (0-based)."""
    _check(supports)
    idx = sorted(set(j))
    if not idx:
        raise EmptyIndexSet("the defect of the empty index set is undefined")
    dirs = [d for i in idx for d in _directions(supports[i])]
    return intlin.rank(dirs) - len(idx)


def defect_table(supports: Sequence[Sequence[Point]]) -> dict[tuple[int, ...], int]:
    """Defects of all nonempty index subsets, keyed by sorted 0-based tuples."""
    _check(supports)
    dirs = [intlin.canonical_basis(_directions(s)) if len(s) > 1 else () for s in supports]
    table = {}
    m = len(supports)
    for size in range(1, m + 1):
        for j in combinations(range(m), size):
            table[j] = intlin.rank([d for i in j for d in dirs[i]]) - size
    return table


def defect_reports(supports: Sequence[Sequence[Point]]) -> list[DefectReport]:
    return [DefectReport(j, v) for j, v in defect_table(supports).items()]


def greatest_zero_defect_subset(
    supports: Sequence[Sequence[Point]],
    table: Optional[dict[tuple[int, ...], int]] = None,
) -> Optional[tuple[int, ...]]:
    """Union of all zero-defect subsets, checked to have defect zero itself.

    Assumes every defect is nonnegative. Returns ``None`` when no subset has
    defect zero.

    Raises:
        InternalError: the union of zero-defect subsets has nonzero defect.
    """
    if table is None:
        table = defect_table(supports)
    zero = [j for j, v in table.items() if v == 0]
    if not zero:
        return None
    union = tuple(sorted({i for j in zero for i in j}))
    if defect(supports, union) != 0:
        raise InternalError(f"union {union} of zero-defect subsets has nonzero defect")
    return union


def k_torus(supports: Sequence[Sequence[Point]], max_systems: int = MAX_SYSTEMS) -> KResult:
    """Component count of ``f_1 = ... = f_m = 0`` for general ``f_i`` supported on ``A_i``.

    The empty family cuts out the whole torus, which is one component.

    Raises:
        TooManySystems: more than ``max_systems`` supports.
    """
    sets = [point_set(s) for s in supports]
    _check(sets)
    if len(sets) > max_systems:
        raise TooManySystems(f"{len(sets)} systems exceed the enumeration cap {max_systems}")
    if not sets:
        return KResult(1, Case.ALL_POSITIVE, defects={})
    table = defect_table(sets)
    if any(v < 0 for v in table.values()):
        return KResult(0, Case.NEGATIVE_DEFECT, defects=table)
    j0 = greatest_zero_defect_subset(sets, table)
    if j0 is None:
        return KResult(1, Case.ALL_POSITIVE, defects=table)
    # translate each support to contain the origin; L is then spanned by all points
    shifted = [[tuple(a - b for a, b in zip(p, sets[j][0])) for p in sets[j]] for j in j0]
    lattice = intlin.saturate([p for s in shifted for p in s])
    if len(lattice) != len(j0):
        raise InternalError(f"lattice rank {len(lattice)} differs from |J0| = {len(j0)}")
    coords = [[intlin.coordinates_in_sublattice(p, lattice) for p in s] for s in shifted]
    value = mixed_volume(*coords)
    return KResult(value, Case.ZERO_DEFECT, j0, lattice, table)
