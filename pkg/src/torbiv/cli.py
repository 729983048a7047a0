"""torbiv command line interface.

Subcommands: validate, strata, certify, poisson, gallery, transition.
Documents are UTF-8 JSON with canonical serialization (sorted keys, two
space indent, rationals as lowest-term "p/q" strings), so emitting,
parsing and re-emitting a document is byte-identical.

Conventions: ray and cone indices in documents and reports are 0-based;
local chart coordinates in human-readable reports are written z1..zn.
Exit codes: 0 success, 1 domain failure (invalid fan, irregular field,
failed certificate), 2 usage or parse error. The environment variable
TORBIV_SEED (default 0) seeds the sampling oracle used by `strata --orbit`.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .bivector import (
    EquivariantBivector,
    NoBaseChartError,
    NotRegularError,
    chart_presentations,
    first_regularity_violation,
    poisson_witness,
)
from .degeneracy import (
    ConeNotInFanError,
    OrbitRank,
    ZeroBivectorError,
    certify_main_theorem,
    components,
    numeric_rank_oracle,
    rank_on_orbit,
    stratify,
)
from .exact_linalg import IntMatrix
from .orbits import OrbitRef, containing_charts, enumerate_cones
from .toric_fans import (
    BadParamsError,
    Fan,
    InvalidFanError,
    UnknownNameError,
    builtin_fan,
    chart_frame,
    is_complete,
    validate_fan,
)

__all__ = [
    "ParseError",
    "main",
    "cmd_validate",
    "cmd_strata",
    "cmd_certify",
    "cmd_poisson",
    "cmd_gallery",
    "cmd_transition",
    "fan_to_document",
    "fan_from_document",
    "bivector_from_document",
    "canonical_json",
]

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


class ParseError(ValueError):
    """The document file is missing, not JSON, or violates the schema."""


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def fan_to_document(f: Fan, name: Optional[str] = None) -> dict:
    doc = {
        "dim": f.ambient_dim,
        "rays": [list(r) for r in f.rays],
        "max_cones": [list(c) for c in f.max_cones],
    }
    if name is not None:
        doc["name"] = name
    return doc


def fan_from_document(doc) -> tuple[Fan, Optional[str]]:
    if not isinstance(doc, dict):
        raise ParseError("fan document must be a JSON object")
    for key in ("dim", "rays", "max_cones"):
        if key not in doc:
            raise ParseError(f"fan document misses required key {key!r}")
    dim = doc["dim"]
    rays = doc["rays"]
    cones = doc["max_cones"]
    name = doc.get("name")
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise ParseError("'dim' must be an integer")
    if not isinstance(rays, list) or not all(
        isinstance(r, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in r)
        for r in rays
    ):
        raise ParseError("'rays' must be a list of integer vectors")
    if not isinstance(cones, list) or not all(
        isinstance(c, list) and all(isinstance(i, int) and not isinstance(i, bool) for i in c)
        for c in cones
    ):
        raise ParseError("'max_cones' must be a list of ray-index lists")
    if name is not None and not isinstance(name, str):
        raise ParseError("'name' must be a string")
    fan = Fan(dim, tuple(tuple(r) for r in rays), tuple(tuple(c) for c in cones))
    return fan, name


def _parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise ParseError("entry values must be integers or 'p/q' strings")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational literal {value!r}") from exc
    raise ParseError("entry values must be integers or 'p/q' strings")


def bivector_from_document(
    doc, fan: Optional[Fan] = None
) -> tuple[EquivariantBivector, Optional[IntMatrix]]:
    """Parse a bivector document; resolves base_chart against the fan.

    Returns the field and the base frame (None means the standard basis).
    """
    if not isinstance(doc, dict):
        raise ParseError("bivector document must be a JSON object")
    if "alpha" not in doc or "entries" not in doc:
        raise ParseError("bivector document needs 'alpha' and 'entries'")
    alpha = doc["alpha"]
    if not isinstance(alpha, list) or not all(
        isinstance(x, int) and not isinstance(x, bool) for x in alpha
    ):
        raise ParseError("'alpha' must be a list of integers")
    n = len(alpha)
    raw_entries = doc["entries"]
    if not isinstance(raw_entries, list):
        raise ParseError("'entries' must be a list of {i, j, value} objects")
    entries = []
    for item in raw_entries:
        if not isinstance(item, dict) or not {"i", "j", "value"} <= set(item):
            raise ParseError("each entry needs keys 'i', 'j' and 'value'")
        i, j = item["i"], item["j"]
        if not (isinstance(i, int) and isinstance(j, int)) or isinstance(i, bool) or isinstance(j, bool):
            raise ParseError("entry indices must be integers")
        entries.append((i, j, _parse_rational(item["value"])))
    try:
        bv = EquivariantBivector.from_entries(n, alpha, entries)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    base_frame = None
    if doc.get("base_chart") is not None:
        k = doc["base_chart"]
        if not isinstance(k, int) or isinstance(k, bool):
            raise ParseError("'base_chart' must be a maximal cone index")
        if fan is None:
            raise ParseError("'base_chart' needs the fan the index refers to")
        if not 0 <= k < len(fan.max_cones):
            raise ParseError(f"'base_chart' {k} out of range for {len(fan.max_cones)} maximal cones")
        base_frame = chart_frame(fan, k)
    return bv, base_frame


def _fmt_cone(t: OrbitRef) -> str:
    return "{" + ",".join(str(i) for i in sorted(t.rays)) + "}"


def _fmt_frac(x: Fraction) -> str:
    return str(x)


def _oracle_seed() -> int:
    raw = os.environ.get("TORBIV_SEED", "0")
    try:
        return int(raw)
    except ValueError as exc:
        raise ParseError(f"TORBIV_SEED must be an integer, got {raw!r}") from exc


def _load_pair(fan_file: str, bivector_file: str):
    fan, name = fan_from_document(_load_json(fan_file))
    report = validate_fan(fan)
    if not report.valid:
        raise InvalidFanError("; ".join(v.detail for v in report.errors))
    bv, base_frame = bivector_from_document(_load_json(bivector_file), fan)
    return fan, name, bv, base_frame


def _print_regularity_failure(bv, fan, base_frame) -> None:
    violation = first_regularity_violation(bv, fan, base_frame)
    i, j = violation.entry
    print(
        f"not regular: chart {violation.chart}, entry (z{i + 1}, z{j + 1}) "
        f"has exponent vector {violation.exponents}"
    )


def cmd_validate(fan_file: str) -> int:
    fan, name = fan_from_document(_load_json(fan_file))
    report = validate_fan(fan)
    label = name or fan_file
    print(f"fan: {label} (dim {fan.ambient_dim}, {len(fan.rays)} rays, "
          f"{len(fan.max_cones)} maximal cones)")
    for line in report.lines():
        print(line)
    if not report.valid:
        print("valid: false")
        return EXIT_DOMAIN
    print("valid: true")
    print(f"complete: {'true' if is_complete(fan) else 'false'}")
    return EXIT_OK


def _strata_json(fan, name, bv, strata) -> dict:
    bounds = []
    for bound in strata.bounds:
        mins = strata.minimal[bound]
        bounds.append(
            {
                "bound": bound,
                "cones": [sorted(t.rays) for t in sorted(strata.by_bound[bound], key=lambda t: (len(t.rays), sorted(t.rays)))],
                "minimal": [sorted(t.rays) for t in mins],
                "component_dims": [t.dim for t in mins],
            }
        )
    return {
        "name": name,
        "dim": fan.ambient_dim,
        "complete": is_complete(fan),
        "alpha": list(bv.alpha),
        "orbit_ranks": [
            {"cone": sorted(t.rays), "orbit_dim": t.dim, "rank": rank}
            for t, rank in strata.ranks
        ],
        "bounds": bounds,
    }


def cmd_strata(
    fan_file: str,
    bivector_file: str,
    as_json: bool = False,
    orbit: Optional[str] = None,
) -> int:
    fan, name, bv, base_frame = _load_pair(fan_file, bivector_file)
    if first_regularity_violation(bv, fan, base_frame) is not None:
        _print_regularity_failure(bv, fan, base_frame)
        return EXIT_DOMAIN

    if orbit is not None:
        rays = frozenset(int(x) for x in orbit.split(",") if x.strip() != "")
        t = next((c for c in enumerate_cones(fan) if c.rays == rays), None)
        if t is None:
            raise ConeNotInFanError(f"rays {sorted(rays)} span no cone of the fan")
        rank = rank_on_orbit(bv, fan, t, base_frame=base_frame)
        seed = _oracle_seed()
        oracle = numeric_rank_oracle(bv, fan, t, [seed, seed + 1, seed + 2], base_frame)
        doc = {
            "cone": sorted(t.rays),
            "orbit_dim": t.dim,
            "rank": rank,
            "oracle_rank": oracle,
            "charts": list(containing_charts(t, fan)),
        }
        if as_json:
            sys.stdout.write(canonical_json(doc))
        else:
            print(f"orbit {_fmt_cone(t)} (dim {t.dim}): rank {rank}")
            print(f"numeric oracle (seeds {seed}..{seed + 2}): rank {oracle}")
        return EXIT_OK

    strata = stratify(bv, fan, base_frame)
    if as_json:
        sys.stdout.write(canonical_json(_strata_json(fan, name, bv, strata)))
        return EXIT_OK
    label = name or fan_file
    print(f"fan: {label} (dim {fan.ambient_dim}), complete: "
          f"{'true' if is_complete(fan) else 'false'}")
    print(f"alpha = {bv.alpha}")
    print("orbit ranks:")
    for t, rank in strata.ranks:
        print(f"  cone {_fmt_cone(t)} orbit dim {t.dim}: rank {rank}")
    for bound in strata.bounds:
        cones = strata.by_bound[bound]
        mins = strata.minimal[bound]
        if not cones:
            print(f"bound {bound}: empty")
            continue
        min_txt = " ".join(_fmt_cone(t) for t in mins)
        dims = ", ".join(str(t.dim) for t in mins)
        print(f"bound {bound}: {len(cones)} cones; minimal {min_txt}; component dims {dims}")
    return EXIT_OK


def cmd_certify(fan_file: str, bivector_file: str, as_json: bool = False) -> int:
    fan, name, bv, base_frame = _load_pair(fan_file, bivector_file)
    if first_regularity_violation(bv, fan, base_frame) is not None:
        _print_regularity_failure(bv, fan, base_frame)
        return EXIT_DOMAIN
    cert = certify_main_theorem(bv, fan, base_frame)
    if as_json:
        doc = {
            "name": name,
            "complete": cert.fan_complete,
            "all_passed": cert.all_passed,
            "clauses": [
                {
                    "k": c.k,
                    "bound": 2 * c.k,
                    "nonempty": c.nonempty,
                    "witness": None if c.witness is None else sorted(c.witness.rays),
                    "component_dim": c.component_dim,
                    "satisfied": c.satisfied,
                    "note": c.note,
                }
                for c in cert.clauses
            ],
        }
        sys.stdout.write(canonical_json(doc))
        return EXIT_OK if cert.all_passed else EXIT_DOMAIN
    label = name or fan_file
    print(f"fan: {label}, complete: {'true' if cert.fan_complete else 'false'}")
    for c in cert.clauses:
        status = "PASS" if c.satisfied else "FAIL"
        if c.witness is not None:
            detail = f"witness {_fmt_cone(c.witness)} component dim {c.component_dim}"
        else:
            detail = "no witness"
        note = f" ({c.note})" if c.note else ""
        print(f"k={c.k} (bound {2 * c.k}): nonempty={str(c.nonempty).lower()}, "
              f"{detail}: {status}{note}")
    print(f"certificate: {'PASS' if cert.all_passed else 'FAIL'}")
    return EXIT_OK if cert.all_passed else EXIT_DOMAIN


def cmd_poisson(bivector_file: str) -> int:
    bv, _ = bivector_from_document(_load_json(bivector_file))
    witness = poisson_witness(bv)
    if witness is None:
        print("poisson: true")
    else:
        (j, h, k), value = witness
        print(f"poisson: false, triple ({j + 1},{h + 1},{k + 1}), value {_fmt_frac(value)}")
    return EXIT_OK


def cmd_gallery(name: str, params: Sequence[int]) -> int:
    fan = builtin_fan(name, params)
    label = name if not params else f"{name}({','.join(str(p) for p in params)})"
    sys.stdout.write(canonical_json(fan_to_document(fan, label)))
    return EXIT_OK


def cmd_transition(fan_file: str, bivector_file: str, chart: int) -> int:
    fan, name, bv, base_frame = _load_pair(fan_file, bivector_file)
    if not 0 <= chart < len(fan.max_cones):
        raise ParseError(f"chart {chart} out of range for {len(fan.max_cones)} maximal cones")
    cp = chart_presentations(bv, fan, base_frame)[chart]
    rays = fan.max_cones[chart]
    gens = ", ".join(str(fan.rays[i]) for i in rays)
    print(f"chart {chart}: rays {list(rays)} with generators {gens}")
    print(f"beta = {cp.beta}")
    print("B =")
    for row in cp.b.entries:
        print("  " + " ".join(_fmt_frac(x) for x in row))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torbiv",
        description="Exact computations with equivariant bivector fields on smooth toric varieties.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the fan axioms and completeness")
    p.add_argument("fan_file")

    p = sub.add_parser("strata", help="orbit ranks and degeneracy locus strata")
    p.add_argument("fan_file")
    p.add_argument("bivector_file")
    p.add_argument("--json", action="store_true", dest="as_json")
    p.add_argument("--orbit", help="comma-separated ray indices of one cone", default=None)

    p = sub.add_parser("certify", help="certify the degeneracy-locus lower bounds")
    p.add_argument("fan_file")
    p.add_argument("bivector_file")
    p.add_argument("--json", action="store_true", dest="as_json")

    p = sub.add_parser("poisson", help="test the Poisson criterion")
    p.add_argument("bivector_file")

    p = sub.add_parser("gallery", help="emit a gallery fan document")
    p.add_argument("name")
    p.add_argument("params", nargs="*", type=int)

    p = sub.add_parser("transition", help="print B, beta on one chart")
    p.add_argument("fan_file")
    p.add_argument("bivector_file")
    p.add_argument("--chart", type=int, required=True)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        if args.command == "validate":
            return cmd_validate(args.fan_file)
        if args.command == "strata":
            return cmd_strata(args.fan_file, args.bivector_file, args.as_json, args.orbit)
        if args.command == "certify":
            return cmd_certify(args.fan_file, args.bivector_file, args.as_json)
        if args.command == "poisson":
            return cmd_poisson(args.bivector_file)
        if args.command == "gallery":
            return cmd_gallery(args.name, args.params)
        if args.command == "transition":
            return cmd_transition(args.fan_file, args.bivector_file, args.chart)
        parser.error(f"unknown command {args.command!r}")
    except (ParseError, UnknownNameError, BadParamsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (
        InvalidFanError,
        NotRegularError,
        NoBaseChartError,
        ZeroBivectorError,
        ConeNotInFanError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
