"""Command-line front end.

Problem files are JSON. Integers may be given as JSON numbers or as decimal
strings; outputs write integers beyond 2**53 - 1 in magnitude as strings.
Systems are numbered from 1 in every report; rays and maximal cones are
0-based positions in the file's lists.

Exit codes: 0 success, 1 domain error or failed check, 2 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from importlib import resources
from typing import Any, Optional, Sequence

from . import __version__
from .counting import THREADS_ENV, ComponentReport, count_components, thread_count
from .eqls import SystemDatum, system_datum, validate
from .errors import InvariantViolation, NotCartier, ToricError
from .fan import Fan, build_fan, support_from_ray_values, support_function
from .khovanskii import KResult, k_torus
from .oracle import SUITES

PROBLEM_SCHEMA = "toric-components/problem"
SUPPORTS_SCHEMA = "toric-components/supports"
REPORT_SCHEMA = "toric-components/count-report"
K_SCHEMA = "toric-components/k-result"
SCHEMA_VERSION = 1

SAFE_INT = 2 ** 53 - 1
DEFAULT_CASES = {"mixedvol": 200, "bernstein": 50, "defect": 100}

Point = tuple[int, ...]


class ParseError(Exception):
    pass


# --- JSON integers ----------------------------------------------------------------

def _int(x: Any, where: str) -> int:
    if isinstance(x, bool):
        raise ParseError(f"{where}: expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x.strip(), 10)
        except ValueError:
            pass
    raise ParseError(f"{where}: expected an integer, got {x!r}")


def _vec(x: Any, n: int, where: str) -> Point:
    if not isinstance(x, list):
        raise ParseError(f"{where}: expected a list of {n} integers")
    if len(x) != n:
        raise ParseError(f"{where}: expected length {n}, got {len(x)}")
    return tuple(_int(v, where) for v in x)


def _list(x: Any, where: str) -> list:
    if not isinstance(x, list):
        raise ParseError(f"{where}: expected a list")
    return x


def to_json_int(x: int) -> int | str:
    return x if abs(x) <= SAFE_INT else str(x)


def _jvec(v: Sequence[int]) -> list:
    return [to_json_int(x) for x in v]


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


# --- problem files ----------------------------------------------------------------

@dataclass(frozen=True)
class SystemEntry:
    support: tuple[Point, ...]
    cartier: Optional[tuple[tuple[int, Point], ...]] = None
    ray_values: Optional[tuple[int, ...]] = None


@dataclass(frozen=True)
class Problem:
    rank: int
    rays: tuple[Point, ...]
    maximal_cones: tuple[tuple[int, ...], ...]
    systems: tuple[SystemEntry, ...]


def _check_schema(doc: Any, schema: str) -> None:
    if not isinstance(doc, dict):
        raise ParseError("top level must be a JSON object")
    if "schema" in doc and doc["schema"] != schema:
        raise ParseError(f"schema {doc['schema']!r} is not {schema!r}")
    if "version" in doc and _int(doc["version"], "version") != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema version {doc['version']!r}")


def parse_problem(doc: Any) -> Problem:
    _check_schema(doc, PROBLEM_SCHEMA)
    try:
        n = _int(doc["rank"], "rank")
        if n < 0:
            raise ParseError("rank must be nonnegative")
        rays = tuple(_vec(r, n, f"rays[{i}]") for i, r in enumerate(_list(doc.get("rays", []), "rays")))
        cones = tuple(
            tuple(_int(k, f"maximal_cones[{i}]") for k in _list(c, f"maximal_cones[{i}]"))
            for i, c in enumerate(_list(doc.get("maximal_cones", []), "maximal_cones"))
        )
        systems = []
        for i, s in enumerate(_list(doc["systems"], "systems")):
            where = f"systems[{i}]"
            if not isinstance(s, dict):
                raise ParseError(f"{where}: expected an object")
            support = tuple(_vec(p, n, f"{where}.support") for p in _list(s["support"], f"{where}.support"))
            has_c, has_r = "cartier" in s, "ray_values" in s
            if has_c == has_r:
                raise ParseError(f"{where}: give exactly one of 'cartier' and 'ray_values'")
            if has_c:
                cartier = tuple(
                    (_int(e["cone"], f"{where}.cartier"), _vec(e["m"], n, f"{where}.cartier"))
                    for e in _list(s["cartier"], f"{where}.cartier")
                )
                systems.append(SystemEntry(support, cartier=cartier))
            else:
                values = tuple(_int(v, f"{where}.ray_values") for v in _list(s["ray_values"], f"{where}.ray_values"))
                systems.append(SystemEntry(support, ray_values=values))
    except KeyError as e:
        raise ParseError(f"missing field {e.args[0]!r}") from None
    except TypeError as e:
        raise ParseError(f"malformed problem: {e}") from None
    return Problem(n, rays, cones, tuple(systems))


def problem_to_json(p: Problem) -> dict:
    systems = []
    for s in p.systems:
        entry: dict[str, Any] = {"support": [_jvec(x) for x in s.support]}
        if s.cartier is not None:
            entry["cartier"] = [{"cone": c, "m": _jvec(m)} for c, m in s.cartier]
        else:
            entry["ray_values"] = _jvec(s.ray_values or ())
        systems.append(entry)
    return {
        "schema": PROBLEM_SCHEMA,
        "version": SCHEMA_VERSION,
        "rank": p.rank,
        "rays": [_jvec(r) for r in p.rays],
        "maximal_cones": [list(c) for c in p.maximal_cones],
        "systems": systems,
    }


def build_problem(p: Problem, validate_fan: bool = True) -> tuple[Fan, list[SystemDatum]]:
    """Fan and data of a parsed problem; raises domain errors on bad input."""
    fan = build_fan(p.rank, p.rays, p.maximal_cones, validate=validate_fan)
    data = []
    for i, s in enumerate(p.systems):
        if s.cartier is not None:
            by_id = {}
            for c, m in s.cartier:
                if not 0 <= c < len(p.maximal_cones):
                    raise NotCartier(f"system {i + 1}: unknown maximal cone index {c}")
                cid = fan.id_of(p.maximal_cones[c])
                if cid not in fan.maximal_ids:
                    raise NotCartier(f"system {i + 1}: cone index {c} is not maximal")
                if cid in by_id and by_id[cid] != m:
                    raise NotCartier(f"system {i + 1}: conflicting data for cone index {c}")
                by_id[cid] = m
            psi = support_function(fan, by_id)
        else:
            psi = support_from_ray_values(fan, s.ray_values or ())
        data.append(system_datum(s.support, psi))
    return fan, data


def parse_supports(doc: Any, rank: Optional[int]) -> list[tuple[Point, ...]]:
    """Support list from ``{"rank": n, "supports": [...]}`` or a bare list."""
    if isinstance(doc, list):
        doc = {"supports": doc}
    _check_schema(doc, SUPPORTS_SCHEMA)
    if rank is None:
        if "rank" not in doc:
            raise ParseError("rank is missing; pass --rank")
        rank = _int(doc["rank"], "rank")
    if "supports" not in doc:
        raise ParseError("missing field 'supports'")
    return [
        tuple(_vec(p, rank, f"supports[{i}]") for p in _list(s, f"supports[{i}]"))
        for i, s in enumerate(_list(doc["supports"], "supports"))
    ]


FIXTURE_PREFIX = "fixture:"


def fixture_names() -> list[str]:
    root = resources.files(__package__).joinpath("fixtures")
    return sorted(f.name[:-5] for f in root.iterdir() if f.name.endswith(".json"))


def load_json(path: str) -> Any:
    try:
        if path.startswith(FIXTURE_PREFIX):
            name = path[len(FIXTURE_PREFIX):]
            res = resources.files(__package__).joinpath("fixtures", f"{name}.json")
            text = res.read_text(encoding="utf-8")
        elif path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except (OSError, UnicodeDecodeError) as e:
        raise ParseError(f"cannot read {path}: {e}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON: {e}") from None


# --- reports ------------------------------------------------------------------------

def _sysnums(idx: Sequence[int]) -> list[int]:
    return [i + 1 for i in idx]


def k_result_json(k: KResult) -> dict:
    return {
        "case": k.case.value,
        "value": to_json_int(k.value),
        "j0": _sysnums(k.j0) if k.j0 is not None else None,
        "lattice_basis": [_jvec(v) for v in k.lattice_l] if k.lattice_l is not None else None,
    }


def report_json(fan: Fan, report: ComponentReport) -> dict:
    cones = []
    for r in report.records:
        cones.append({
            "id": r.cone,
            "rays": list(r.rays),
            "dim": r.dim,
            "degenerate": _sysnums(r.degenerate),
            "d": r.d_value,
            "selected": r.in_s,
            "restricted": [
                {
                    "system": i + 1,
                    "witness": _jvec(rs.witness),
                    "basis": [_jvec(b) for b in rs.basis],
                    "points": [_jvec(p) for p in rs.points],
                }
                for i, rs in r.restricted
            ],
            "k": k_result_json(r.k) if r.k is not None else None,
            "contribution": to_json_int(r.contribution),
        })
    return {
        "schema": REPORT_SCHEMA,
        "version": SCHEMA_VERSION,
        "rank": report.rank,
        "systems": report.systems,
        "total": to_json_int(report.total),
        "cones": cones,
    }


def _set(xs: Sequence[int]) -> str:
    return "{" + ", ".join(str(x) for x in xs) + "}"


def _pts(ps: Sequence[Sequence[int]]) -> str:
    return "{" + " ".join("(" + ",".join(str(x) for x in p) + ")" for p in ps) + "}"


def report_table(report: ComponentReport, explain: bool) -> str:
    lines = [f"total: {report.total}"]
    if not explain:
        return "\n".join(lines) + "\n"
    header = ["cone", "rays", "dim", "D", "d", "in S", "restricted supports", "K"]
    rows = []
    for r in report.records:
        restricted = "; ".join(f"{i + 1}:{_pts(rs.points)}" for i, rs in r.restricted) or "-"
        k = f"{r.contribution} ({r.k.case.value})" if r.k is not None else "-"
        rows.append([
            str(r.cone), _set(r.rays), str(r.dim), _set(_sysnums(r.degenerate)),
            str(r.d_value), "yes" if r.in_s else "no", restricted, k,
        ])
    widths = [max(len(x) for x in col) for col in zip(header, *rows)]
    for row in [header] + rows:
        lines.append("  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


# --- commands ---------------------------------------------------------------------

def _fail(err: ToricError) -> int:
    print(f"error: {err.code}: {err}", file=sys.stderr)
    return 1


def cmd_validate(args: argparse.Namespace) -> int:
    problem = parse_problem(load_json(args.path))
    fan, data = build_problem(problem, not args.skip_fan_validation)
    for i, d in enumerate(data):
        report = validate(d, fan)
        if not report.ok:
            v = report.violations[0]
            raise InvariantViolation(
                f"system {i + 1}: <{_pts([v.character])[1:-1]}, {_pts([v.vector])[1:-1]}> + psi = {v.value} < 0 "
                f"on cone {_set(fan.cones[v.cone].rays)} at ray {v.ray}"
            )
    print(f"ok: {len(fan.cones)} cones, {len(data)} systems")
    return 0


def cmd_count(args: argparse.Namespace) -> int:
    problem = parse_problem(load_json(args.path))
    fan, data = build_problem(problem, not args.skip_fan_validation)
    report = count_components(fan, data)
    if args.format == "json":
        sys.stdout.write(dumps(report_json(fan, report)))
    else:
        sys.stdout.write(report_table(report, args.explain))
    return 0


def cmd_khovanskii(args: argparse.Namespace) -> int:
    supports = parse_supports(load_json(args.path), args.rank)
    k = k_torus(supports)
    if args.format == "json":
        sys.stdout.write(dumps({"schema": K_SCHEMA, "version": SCHEMA_VERSION, **k_result_json(k)}))
        return 0
    print(f"case: {k.case.value}")
    print(f"J0: {_set(_sysnums(k.j0)) if k.j0 is not None else '-'}")
    print(f"L basis: {_pts(k.lattice_l) if k.lattice_l is not None else '-'}")
    print(f"K: {k.value}")
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    cases = args.cases if args.cases is not None else DEFAULT_CASES[args.suite]
    result = SUITES[args.suite](args.seed, cases)
    for f in result.failures:
        print(f"FAIL {f}")
    status = "pass" if result.ok else "fail"
    print(f"{result.name}: {result.passed}/{cases} passed (seed {args.seed}) {status}")
    return 0 if result.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toric-components",
        description="Count irreducible components of general complete intersections in toric varieties.",
        epilog=f"Environment: {THREADS_ENV} sets the worker thread count (default: CPU count). "
        "Paths may name a bundled example as fixture:NAME.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    problem_opts = argparse.ArgumentParser(add_help=False)
    problem_opts.add_argument("--skip-fan-validation", action="store_true",
                              help="trust that maximal cones meet in common faces")

    p = sub.add_parser("validate", parents=[problem_opts], help="check fan axioms, Cartier data and system validity")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("count", parents=[problem_opts], help="count components with a per-orbit breakdown")
    p.add_argument("path")
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.add_argument("--explain", action="store_true", help="print the per-cone table")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("khovanskii", help="component count in the torus for a list of supports")
    p.add_argument("path")
    p.add_argument("--rank", type=int)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_khovanskii)

    p = sub.add_parser("oracle", help="run a randomized cross-check suite")
    p.add_argument("--suite", choices=sorted(SUITES), required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--cases", type=int)
    p.set_defaults(func=cmd_oracle)

    sub.add_parser("fixtures", help="list bundled example problems").set_defaults(
        func=lambda _: print("\n".join(fixture_names())) or 0
    )
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        thread_count()
        return args.func(args)
    except ParseError as e:
        print(f"error: ParseError: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: ParseError: {e}", file=sys.stderr)
        return 2
    except ToricError as e:
        return _fail(e)


if __name__ == "__main__":
    sys.exit(main())
