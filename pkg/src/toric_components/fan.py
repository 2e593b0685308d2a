"""Rational polyhedral cones, fans and support functions.

Vectors live in ``N``, covectors (characters, Cartier data, halfspace
normals) in the dual lattice ``M``. Support functions follow the sign
convention in which ``psi`` of a principal divisor ``div chi`` is
``<chi, ->`` and effective divisors have ``psi >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Mapping, Optional, Sequence

from . import intlin
from .errors import (
    InternalError,
    NotAFan,
    NotCartier,
    NotStronglyConvex,
    OutsideSupport,
    QuotientUndefined,
    UnknownCone,
)
from .intlin import Matrix, Vector, dot, primitive


def double_description(constraints: Sequence[Sequence[int]], n: int) -> tuple[list[Vector], list[Vector]]:
    """Generators of the cone ``{x : <a, x> >= 0 for every a in constraints}``.

    Returns ``(lineality, rays)``: a basis of the lineality space and one
    primitive vector per extreme ray modulo that space. Constraints are
    processed one at a time (Motzkin's double description) with an
    algebraic adjacency test.
    """
    lin = [tuple(e) for e in intlin.identity(n)]
    rays: list[Vector] = []
    processed: list[Vector] = []
    for a in constraints:
        a = tuple(a)
        if not any(a):
            continue
        vals = [dot(a, l) for l in lin]
        k = next((i for i, v in enumerate(vals) if v), None)
        if k is not None:
            l0, v0 = lin.pop(k), vals.pop(k)
            if v0 < 0:
                l0, v0 = tuple(-x for x in l0), -v0
            lin = [primitive(tuple(v0 * x - v * y for x, y in zip(l, l0))) for l, v in zip(lin, vals)]
            rays = [
                primitive(tuple(v0 * x - dot(a, r) * y for x, y in zip(r, l0))) for r in rays
            ]
            rays.append(l0)
            processed.append(a)
            continue
        signs = [dot(a, r) for r in rays]
        pos = [r for r, s in zip(rays, signs) if s > 0]
        neg = [(r, s) for r, s in zip(rays, signs) if s < 0]
        zero = [r for r, s in zip(rays, signs) if s == 0]
        target = n - len(lin) - 2
        new: list[Vector] = []
        for p, sp in ((r, s) for r, s in zip(rays, signs) if s > 0):
            tp = {i for i, c in enumerate(processed) if dot(c, p) == 0}
            for q, sq in neg:
                common = [processed[i] for i in tp if dot(processed[i], q) == 0]
                if len(common) >= target and intlin.rank(common) == target:
                    new.append(primitive(tuple(sp * y - sq * x for x, y in zip(p, q))))
        processed.append(a)
        seen: set[Vector] = set()
        rays = []
        for r in pos + zero + new:
            if r not in seen:
                seen.add(r)
                rays.append(r)
    return lin, rays


@dataclass(frozen=True)
class Cone:
    """A strongly convex rational polyhedral cone.

    ``rays`` are labels of the generators: positions in the input for a
    standalone cone, global ray indices for a cone inside a :class:`Fan`.
    """

    rays: tuple[int, ...]
    generators: tuple[Vector, ...]
    inequalities: tuple[Vector, ...]
    equations: tuple[Vector, ...]
    dim: int
    ambient_rank: int

    def contains(self, v: Sequence[int]) -> bool:
        return all(dot(e, v) == 0 for e in self.equations) and all(
            dot(h, v) >= 0 for h in self.inequalities
        )

    def face_ray_sets(self) -> set[tuple[int, ...]]:
        """Ray labels of every face, from the zero face up to the cone itself."""
        facet_sets = [
            frozenset(r for r, g in zip(self.rays, self.generators) if dot(h, g) == 0)
            for h in self.inequalities
        ]
        faces = {frozenset(self.rays)}
        frontier = list(faces)
        while frontier:
            f = frontier.pop()
            for t in facet_sets:
                g = f & t
                if g not in faces:
                    faces.add(g)
                    frontier.append(g)
        return {tuple(sorted(f)) for f in faces}


def build_cone(
    generators: Sequence[Sequence[int]],
    rank: Optional[int] = None,
    labels: Optional[Sequence[int]] = None,
    require_extreme: bool = False,
) -> Cone:
    """Cone generated by ``generators`` with its exact H-representation.

    Generators are made primitive and deduplicated; redundant (non-extreme)
    generators are dropped unless ``require_extreme`` is set, in which case
    they are reported as :class:`NotAFan`.

    Raises:
        NotStronglyConvex: the cone contains a line.
    """
    gens = [tuple(int(x) for x in g) for g in generators]
    if rank is None:
        if not gens:
            raise ValueError("ambient rank required for an empty generator list")
        rank = len(gens[0])
    if labels is None:
        labels = list(range(len(gens)))
    pairs: dict[Vector, int] = {}
    for lab, g in zip(labels, gens):
        if len(g) != rank:
            raise ValueError(f"generator {g} has wrong length for rank {rank}")
        if not any(g):
            continue
        pairs.setdefault(primitive(g), lab)
    prim = list(pairs)
    equations = intlin.orthogonal_complement_basis(prim, rank)
    _, facets = double_description(prim, rank)
    if intlin.rank(list(facets) + list(equations)) < rank:
        raise NotStronglyConvex(f"cone generated by {prim} contains a line")
    dim = rank - len(equations)
    keep = []
    for g in prim:
        tight = [h for h in facets if dot(h, g) == 0]
        if intlin.rank(tight + list(equations)) == rank - 1:
            keep.append(g)
        elif require_extreme:
            raise NotAFan(f"generator {g} (ray {pairs[g]}) is not an extreme ray of its cone")
    keep.sort(key=lambda g: pairs[g])
    return Cone(
        rays=tuple(pairs[g] for g in keep),
        generators=tuple(keep),
        inequalities=tuple(sorted(facets)),
        equations=tuple(equations),
        dim=dim,
        ambient_rank=rank,
    )


@dataclass(frozen=True)
class Fan:
    """A fan: face-closed list of cones, ids are positions in ``cones``.

    Cones are ordered by dimension, then by their sorted ray indices, so the
    zero cone always has id 0.
    """

    rank: int
    rays: tuple[Vector, ...]
    cones: tuple[Cone, ...]
    maximal_ids: tuple[int, ...]
    _index: Mapping[tuple[int, ...], int] = field(compare=False, repr=False)
    _carrier: tuple[int, ...] = field(compare=False, repr=False)

    def cone(self, cid: int) -> Cone:
        if not isinstance(cid, int) or not 0 <= cid < len(self.cones):
            raise UnknownCone(f"no cone with id {cid!r}")
        return self.cones[cid]

    def id_of(self, rays: Sequence[int]) -> int:
        key = tuple(sorted(rays))
        if key not in self._index:
            raise UnknownCone(f"no cone with rays {key}")
        return self._index[key]

    def carrier(self, cid: int) -> int:
        """Id of the first maximal cone containing cone ``cid``."""
        self.cone(cid)
        return self._carrier[cid]

    def ray_cone(self, ray: int) -> int:
        return self.id_of((ray,))


def _intersection_rays(a: Cone, b: Cone) -> set[Vector]:
    cons = list(a.inequalities) + list(b.inequalities)
    for e in a.equations + b.equations:
        cons.append(e)
        cons.append(tuple(-x for x in e))
    lin, rays = double_description(cons, a.ambient_rank)
    if lin:
        raise InternalError("intersection of pointed cones has a lineality space")
    return set(rays)


def build_fan(
    rank: int,
    rays: Sequence[Sequence[int]],
    maximal_cones: Sequence[Sequence[int]],
    validate: bool = True,
) -> Fan:
    """Complete the listed cones to a fan and check the fan axioms.

    Args:
        rank: rank ``n`` of ``N``.
        rays: primitive, pairwise distinct ray generators.
        maximal_cones: each entry lists ray indices spanning one cone;
            non-maximal or repeated entries are absorbed by face closure.
        validate: check that each pair of maximal cones meets in a common
            face. Quadratic in the number of cones; skip only for trusted input.

    Raises:
        NotAFan: bad or unused rays, a listed ray that is not extreme in its
            cone, or two cones meeting outside a common face.
        NotStronglyConvex: a listed cone contains a line.
    """
    rays = tuple(tuple(int(x) for x in r) for r in rays)
    for i, r in enumerate(rays):
        if len(r) != rank:
            raise NotAFan(f"ray {i} = {r} has wrong length for rank {rank}")
        if not any(r):
            raise NotAFan(f"ray {i} is zero")
        if primitive(r) != r:
            raise NotAFan(f"ray {i} = {r} is not primitive")
    if len(set(rays)) != len(rays):
        raise NotAFan("rays are not pairwise distinct")
    listed = {tuple(sorted(set(c))) for c in maximal_cones} or {()}
    cones: dict[tuple[int, ...], Cone] = {}
    top: list[tuple[int, ...]] = []
    for key in sorted(listed):
        for i in key:
            if not 0 <= i < len(rays):
                raise NotAFan(f"cone {key} refers to unknown ray {i}")
        c = build_cone([rays[i] for i in key], rank, key, require_extreme=True)
        cones[key] = c
        top.append(key)
        for face in c.face_ray_sets():
            if face not in cones:
                cones[face] = build_cone([rays[i] for i in face], rank, face)
    unused = sorted(set(range(len(rays))) - {i for k in top for i in k})
    if unused:
        raise NotAFan(f"rays {unused} lie in no cone")
    maximal = [k for k in top if not any(set(k) < set(o) for o in top)]
    if validate:
        face_sets = {k: cones[k].face_ray_sets() for k in maximal}
        for ka, kb in combinations(maximal, 2):
            shared = tuple(sorted(set(ka) & set(kb)))
            if shared not in face_sets[ka] or shared not in face_sets[kb]:
                raise NotAFan(f"cones {ka} and {kb} share rays {shared} that are not a common face")
            if _intersection_rays(cones[ka], cones[kb]) != set(cones[shared].generators):
                raise NotAFan(f"cones {ka} and {kb} intersect outside their common face {shared}")
    order = sorted(cones, key=lambda k: (cones[k].dim, k))
    index = {k: i for i, k in enumerate(order)}
    max_ids = tuple(sorted(index[k] for k in maximal))
    carrier = tuple(
        next(index[m] for m in sorted(maximal, key=lambda m: index[m]) if set(k) <= set(m))
        for k in order
    )
    return Fan(
        rank=rank,
        rays=rays,
        cones=tuple(cones[k] for k in order),
        maximal_ids=max_ids,
        _index=index,
        _carrier=carrier,
    )


def faces(fan: Fan, sigma: int) -> list[int]:
    """Ids of all faces of ``sigma``, itself and the zero cone included."""
    rays = set(fan.cone(sigma).rays)
    return [i for i, c in enumerate(fan.cones) if set(c.rays) <= rays]


def cones_containing(fan: Fan, tau: int) -> list[int]:
    rays = set(fan.cone(tau).rays)
    return [i for i, c in enumerate(fan.cones) if rays <= set(c.rays)]


@dataclass(frozen=True)
class SupportFunction:
    """Cartier data: one covector per maximal cone id of a fan."""

    cartier: Mapping[int, Vector]

    def on_cone(self, fan: Fan, cid: int) -> Vector:
        """A covector ``m`` with ``psi = <m, ->`` on cone ``cid``."""
        return self.cartier[fan.carrier(cid)]

    def ray_value(self, fan: Fan, ray: int) -> int:
        return dot(self.on_cone(fan, fan.ray_cone(ray)), fan.rays[ray])


def support_function(fan: Fan, cartier: Mapping[int, Sequence[int]]) -> SupportFunction:
    """Validate Cartier data keyed by maximal cone id.

    Raises:
        NotCartier: data missing for a maximal cone, or two cones disagree on
            a shared ray.
    """
    data = {}
    for cid in fan.maximal_ids:
        if cid not in cartier:
            raise NotCartier(f"no Cartier data for maximal cone {cid} {fan.cones[cid].rays}")
        m = tuple(int(x) for x in cartier[cid])
        if len(m) != fan.rank:
            raise NotCartier(f"Cartier covector {m} has wrong length")
        data[cid] = m
    for a, b in combinations(fan.maximal_ids, 2):
        shared = set(fan.cones[a].rays) & set(fan.cones[b].rays)
        for r in sorted(shared):
            v = fan.rays[r]
            if dot(data[a], v) != dot(data[b], v):
                raise NotCartier(
                    f"Cartier data of cones {a} and {b} disagree on ray {r} = {v}"
                )
    return SupportFunction(data)


def zero_support(fan: Fan) -> SupportFunction:
    return SupportFunction({cid: (0,) * fan.rank for cid in fan.maximal_ids})


def support_from_ray_values(fan: Fan, values: Sequence[int]) -> SupportFunction:
    """Support function taking ``values[i]`` at ray ``i``.

    Raises:
        NotCartier: no integral linear function matches the values on some
            maximal cone.
    """
    if len(values) != len(fan.rays):
        raise NotCartier(f"{len(values)} ray values given for {len(fan.rays)} rays")
    data = {}
    for cid in fan.maximal_ids:
        c = fan.cones[cid]
        if not c.rays:
            data[cid] = (0,) * fan.rank
            continue
        m = intlin.solve_integer([fan.rays[r] for r in c.rays], [values[r] for r in c.rays])
        if m is None:
            raise NotCartier(f"ray values {[values[r] for r in c.rays]} on cone {c.rays} "
                             "are not given by an integral covector")
        data[cid] = m
    return support_function(fan, data)


def evaluate_support(psi: SupportFunction, fan: Fan, v: Sequence[int]) -> int:
    """``psi(v)`` for ``v`` in the support of the fan.

    Raises:
        OutsideSupport: no cone of the fan contains ``v``.
    """
    for cid in fan.maximal_ids:
        if fan.cones[cid].contains(v):
            return dot(psi.cartier[cid], v)
    raise OutsideSupport(f"{tuple(v)} is not in the support of the fan")


def is_effective(psi: SupportFunction, fan: Fan) -> bool:
    return all(psi.ray_value(fan, r) >= 0 for r in range(len(fan.rays)))


@dataclass(frozen=True)
class SectionCharacters:
    """Characters ``chi`` with ``<chi, v> + psi(v) >= 0`` on every ray ``v``.

    ``inequalities`` holds pairs ``(v, psi(v))``. ``points`` is the complete
    list when ``bounded``; otherwise only the points inside the search box.
    """

    inequalities: tuple[tuple[Vector, int], ...]
    bounded: bool
    points: tuple[Vector, ...]


def _solve_rational(a: Sequence[Sequence[int]], b: Sequence[int]) -> Optional[tuple[Fraction, ...]]:
    det = intlin.determinant(a)
    if det == 0:
        return None
    n = len(a)
    out = []
    for j in range(n):
        aj = [list(r) for r in a]
        for i in range(n):
            aj[i][j] = b[i]
        out.append(Fraction(intlin.determinant(aj), det))
    return tuple(out)


def global_section_characters(psi: SupportFunction, fan: Fan, bound: int = 5) -> SectionCharacters:
    n = fan.rank
    ineqs = tuple((fan.rays[r], psi.ray_value(fan, r)) for r in range(len(fan.rays)))

    def ok(chi):
        return all(dot(chi, v) + c >= 0 for v, c in ineqs)

    lin, rec = double_description([v for v, _ in ineqs], n)
    bounded = not lin and not rec
    if bounded:
        verts = []
        for sub in combinations(ineqs, n):
            x = _solve_rational([v for v, _ in sub], [-c for _, c in sub])
            if x is not None and all(dot(x, v) + c >= 0 for v, c in ineqs):
                verts.append(x)
        if not verts:
            return SectionCharacters(ineqs, True, ())
        lo = [min(x[j] for x in verts) for j in range(n)]
        hi = [max(x[j] for x in verts) for j in range(n)]
        ranges = [range(-((-l.numerator) // l.denominator), h.numerator // h.denominator + 1)
                  for l, h in zip(lo, hi)]
    else:
        ranges = [range(-bound, bound + 1)] * n
    pts = tuple(chi for chi in product(*ranges) if ok(chi))
    return SectionCharacters(ineqs, bounded, pts)


@dataclass(frozen=True)
class StarFan:
    """The star fan of ``tau`` in the quotient lattice ``N / span(tau)``.

    ``projection`` rows form the canonical basis of ``tau``-perp in ``M``;
    ``v -> projection @ v`` is the quotient map ``N -> Z^(n - dim tau)``, and
    a quotient covector ``c`` corresponds to ``sum(c_i * projection_i)``.
    ``cone_map`` sends each cone containing ``tau`` to its image id.
    """

    fan: Fan
    tau: int
    projection: Matrix
    cone_map: Mapping[int, int]

    def project(self, v: Sequence[int]) -> Vector:
        return intlin.matvec(self.projection, v)


def quotient_star_fan(fan: Fan, tau: int, validate: bool = False) -> StarFan:
    t = fan.cone(tau)
    proj = intlin.orthogonal_complement_basis(t.generators, fan.rank)
    above = cones_containing(fan, tau)
    ray_ids: dict[Vector, int] = {}
    star_rays: list[Vector] = []
    for r in sorted({r for cid in above for r in fan.cones[cid].rays} - set(t.rays)):
        image = primitive(intlin.matvec(proj, fan.rays[r]))
        if image not in ray_ids:
            ray_ids[image] = len(star_rays)
            star_rays.append(image)

    def image_rays(cid):
        return sorted({ray_ids[primitive(intlin.matvec(proj, fan.rays[r]))]
                       for r in fan.cones[cid].rays if r not in t.rays})

    tops = [image_rays(cid) for cid in fan.maximal_ids if cid in above]
    star = build_fan(len(proj), star_rays, tops, validate=validate)
    cone_map = {cid: star.id_of(image_rays(cid)) for cid in above}
    return StarFan(star, tau, intlin.as_matrix(proj), cone_map)


def quotient_support(psi: SupportFunction, fan: Fan, star: StarFan) -> SupportFunction:
    """Transport ``psi`` with ``psi(tau) = 0`` to the star fan of ``tau``.

    Raises:
        QuotientUndefined: ``psi`` does not vanish on ``tau``.
    """
    t = fan.cone(star.tau)
    m_tau = psi.on_cone(fan, star.tau)
    if any(dot(m_tau, g) for g in t.generators):
        raise QuotientUndefined(f"support function does not vanish on cone {t.rays}")
    data = {}
    for cid, sid in star.cone_map.items():
        if sid not in star.fan.maximal_ids or sid in data:
            continue
        c = fan.cones[cid]
        m = psi.on_cone(fan, cid)
        gens = [g for g in c.generators]
        if not gens:
            data[sid] = (0,) * star.fan.rank
            continue
        rows = [star.project(g) for g in gens]
        if star.fan.rank == 0:
            data[sid] = ()
            continue
        sol = intlin.solve_integer(rows, [dot(m, g) for g in gens])
        if sol is None:
            raise InternalError(f"no integral quotient covector on cone {c.rays}")
        data[sid] = sol
    return support_function(star.fan, data)
