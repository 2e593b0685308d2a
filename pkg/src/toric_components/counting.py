"""Irreducible components of a general complete intersection in a toric variety.

For each cone ``sigma`` let ``D(sigma)`` be the systems that degenerate along
its orbit and ``d(sigma) = |D(sigma)| - dim sigma``. The selected cones are
those with ``d(sigma) >= d(tau)`` for every face ``tau``; each contributes the
torus count of the non-degenerate systems restricted to its orbit.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence, TypeVar

from .eqls import RestrictedSupport, SystemDatum, degenerates_on, require_valid, restrict_to_orbit
from .errors import InternalError
from .fan import Fan, faces
from .khovanskii import KResult, k_torus

THREADS_ENV = "TORIC_THREADS"

T = TypeVar("T")


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    n = int(raw)
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def _map(fn: Callable[[int], T], items: Sequence[int]) -> list[T]:
    # results come back in input order whatever the completion order
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class OrbitRecord:
    cone: int
    rays: tuple[int, ...]
    dim: int
    degenerate: tuple[int, ...]
    d_value: int
    in_s: bool
    restricted: tuple[tuple[int, RestrictedSupport], ...]
    k: Optional[KResult]
    contribution: int


@dataclass(frozen=True)
class ComponentReport:
    rank: int
    systems: int
    total: int
    records: tuple[OrbitRecord, ...]


def degeneracy_profile(fan: Fan, data: Sequence[SystemDatum]) -> dict[int, tuple[int, ...]]:
    """``D(sigma)`` as sorted 0-based system indices, for every cone id."""
    def one(cid: int) -> tuple[int, ...]:
        return tuple(i for i, d in enumerate(data) if degenerates_on(d, fan, cid))

    ids = list(range(len(fan.cones)))
    profile = dict(zip(ids, _map(one, ids)))
    for cid in ids:
        for tau in faces(fan, cid):
            if not set(profile[tau]) <= set(profile[cid]):
                raise InternalError(
                    f"degeneracy not monotone: D({fan.cones[tau].rays}) = {profile[tau]} "
                    f"is not inside D({fan.cones[cid].rays}) = {profile[cid]}"
                )
    if profile[0]:
        raise InternalError(f"systems {profile[0]} degenerate on the open torus")
    return profile


def d_values(fan: Fan, profile: Mapping[int, Sequence[int]]) -> dict[int, int]:
    """Signed ``|D(sigma)| - dim sigma``."""
    return {cid: len(profile[cid]) - fan.cones[cid].dim for cid in range(len(fan.cones))}


def selected_cones(fan: Fan, d: Mapping[int, int]) -> set[int]:
    """Cones whose ``d`` value is at least that of each of their faces."""
    return {
        cid for cid in range(len(fan.cones))
        if all(d[cid] >= d[tau] for tau in faces(fan, cid))
    }


def count_components(fan: Fan, data: Sequence[SystemDatum], check: bool = True) -> ComponentReport:
    """Per-orbit breakdown and total component count.

    Degenerate systems are dropped on an orbit; if all are dropped the orbit
    contributes the empty family, which counts as one component.

    Raises:
        InvariantViolation: a datum is invalid on the fan (when ``check``).
        InternalError: a structural assertion fails.
    """
    if check:
        for d in data:
            require_valid(d, fan)
    profile = degeneracy_profile(fan, data)
    dv = d_values(fan, profile)
    if dv[0] != 0:
        raise InternalError(f"d(zero cone) = {dv[0]}")
    selected = selected_cones(fan, dv)
    if 0 not in selected:
        raise InternalError("zero cone not selected")
    m = len(data)
    n = fan.rank

    def record(cid: int) -> OrbitRecord:
        c = fan.cones[cid]
        bad = set(profile[cid])
        restricted = tuple(
            (i, restrict_to_orbit(d, fan, cid)) for i, d in enumerate(data) if i not in bad
        )
        k = None
        contribution = 0
        if cid in selected:
            k = k_torus([r.points for _, r in restricted])
            contribution = k.value
            expected = (n - c.dim) - (m - len(bad))
            if contribution > 0 and expected < 0:
                raise InternalError(
                    f"positive count {contribution} on cone {c.rays} of negative expected dimension"
                )
        return OrbitRecord(
            cone=cid,
            rays=c.rays,
            dim=c.dim,
            degenerate=profile[cid],
            d_value=dv[cid],
            in_s=cid in selected,
            restricted=restricted,
            k=k,
            contribution=contribution,
        )

    records = tuple(_map(record, list(range(len(fan.cones)))))
    total = sum(r.contribution for r in records)
    return ComponentReport(n, m, total, records)
