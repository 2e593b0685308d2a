"""Equivariant linear systems given by combinatorial data ``(A, psi)``.

``A`` is a finite set of characters and ``psi`` a support function with
``<chi, v> + psi(v) >= 0`` on the support of the fan for every ``chi`` in
``A``. All checks reduce to ray generators because both terms are linear
on each cone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import intlin
from .errors import Degenerate, EmptySupport, InternalError, InvariantViolation
from .fan import Fan, SupportFunction
from .intlin import Vector, dot
from .polytope import PointSet, point_set


@dataclass(frozen=True)
class SystemDatum:
    support: PointSet
    psi: SupportFunction


def system_datum(support, psi: SupportFunction) -> SystemDatum:
    pts = point_set(support)
    if not pts:
        raise EmptySupport("a linear system needs a nonempty character set")
    return SystemDatum(pts, psi)


@dataclass(frozen=True)
class Violation:
    cone: int
    ray: int
    vector: Vector
    character: Vector
    value: int


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(d: SystemDatum, fan: Fan) -> ValidationReport:
    """Check ``<chi, v> + psi(v) >= 0`` for every ray ``v`` and ``chi`` in ``A``.

    Violations are reported against the first maximal cone containing the ray.
    """
    if not d.support:
        raise EmptySupport("a linear system needs a nonempty character set")
    out = []
    for cid in fan.maximal_ids:
        c = fan.cones[cid]
        m = d.psi.cartier[cid]
        for r, v in zip(c.rays, c.generators):
            if fan.carrier(fan.ray_cone(r)) != cid:
                continue
            pv = dot(m, v)
            for chi in d.support:
                val = dot(chi, v) + pv
                if val < 0:
                    out.append(Violation(cid, r, v, chi, val))
    return ValidationReport(tuple(out))


def require_valid(d: SystemDatum, fan: Fan) -> None:
    report = validate(d, fan)
    if not report.ok:
        v = report.violations[0]
        raise InvariantViolation(
            f"<{v.character}, {v.vector}> + psi = {v.value} < 0 on cone {v.cone} (ray {v.ray})"
        )


def _cone_values(d: SystemDatum, fan: Fan, sigma: int) -> list[tuple[Vector, tuple[int, ...]]]:
    c = fan.cone(sigma)
    m = d.psi.on_cone(fan, sigma)
    return [
        (chi, tuple(dot(chi, v) + dot(m, v) for v in c.generators)) for chi in d.support
    ]


def witnesses(d: SystemDatum, fan: Fan, sigma: int) -> list[Vector]:
    """Characters ``chi`` in ``A`` with ``<chi, -> + psi`` identically zero on ``sigma``."""
    return [chi for chi, vals in _cone_values(d, fan, sigma) if not any(vals)]


def degenerates_on(d: SystemDatum, fan: Fan, sigma: int) -> bool:
    """Whether the orbit of ``sigma`` lies in the base locus of the system."""
    return not witnesses(d, fan, sigma)


@dataclass(frozen=True)
class RestrictedSupport:
    """Character set of the restriction to an orbit, in ``sigma``-perp coordinates.

    Translated so that the lexicographically smallest point is the origin.
    """

    points: PointSet
    witness: Vector
    basis: tuple[Vector, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)


def canonical_translate(points) -> PointSet:
    pts = point_set(points)
    base = pts[0]
    return point_set(tuple(a - b for a, b in zip(p, base)) for p in pts)


def restrict_to_orbit(
    d: SystemDatum, fan: Fan, sigma: int, witness: Optional[Sequence[int]] = None
) -> RestrictedSupport:
    """Restricted support ``(A - chi) ∩ sigma-perp`` for a witness ``chi``.

    The lexicographically first witness is used unless one is given.

    Raises:
        Degenerate: the system degenerates on the orbit of ``sigma``.
    """
    ws = witnesses(d, fan, sigma)
    if not ws:
        raise Degenerate(f"system degenerates on the orbit of cone {fan.cone(sigma).rays}")
    if witness is None:
        chi = ws[0]
    else:
        chi = tuple(witness)
        if chi not in ws:
            raise ValueError(f"{chi} is not a witness on cone {sigma}")
    c = fan.cone(sigma)
    basis = intlin.orthogonal_complement_basis(c.generators, fan.rank)
    diffs = [tuple(a - b for a, b in zip(p, chi)) for p in d.support]
    kept = [x for x in diffs if all(dot(x, g) == 0 for g in c.generators)]
    if not kept:
        raise InternalError("witness character missing from its own restriction")
    coords = [intlin.coordinates_in_sublattice(x, basis) for x in kept]
    return RestrictedSupport(canonical_translate(coords), chi, basis)


def normalize_datum(d: SystemDatum) -> SystemDatum:
    """Shift by the smallest character so that it becomes the origin.

    ``(A, psi)`` and ``(A - chi, psi + <chi, ->)`` define isomorphic systems.
    """
    chi = d.support[0]
    shifted = point_set(tuple(a - b for a, b in zip(p, chi)) for p in d.support)
    cartier = {
        cid: tuple(a + b for a, b in zip(m, chi)) for cid, m in d.psi.cartier.items()
    }
    return SystemDatum(shifted, SupportFunction(cartier))
