"""Command-line front end: ``k3ade enumerate | classify | verify-fixtures``.

Exit codes: 0 success, 1 a fixture failed, 2 usage error, 3 a search ran
out of budget. Exports are sorted by canonical name and contain no floats,
so two runs over the same input give byte-identical files whatever the
number of worker processes.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from pathlib import Path

from . import __version__
from .classify import (
    DEFAULT_REFERENCE,
    INCOMPLETE,
    ClassificationRecord,
    ReferenceData,
    XiaoTableError,
    classify,
    classify_all,
    partition,
    tag_smooth_cover_configs,
)
from .fixtures import run_fixtures
from .glue import DEFAULT_BUDGET
from .lattice import MAX_RANK, AdeConfiguration, enumerate_configurations

EXIT_OK = 0
EXIT_FIXTURE = 1
EXIT_USAGE = 2
EXIT_INCOMPLETE = 3

SCHEMA_VERSION = 1
CSV_FIELDS = (
    "config",
    "rank",
    "status",
    "simple",
    "families",
    "b2_surface",
    "b2_hilb2",
    "moduli_dim",
    "tags",
)


class UsageError(Exception):
    pass


def _max_rank(text: str) -> int:
    value = int(text)
    if not 1 <= value <= MAX_RANK:
        raise argparse.ArgumentTypeError(f"max rank must lie in 1..{MAX_RANK}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="k3ade", description="ADE configurations of (-2)-curves on K3 surfaces"
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enumerate", help="list candidate ADE configurations")
    e.add_argument("--max-rank", type=_max_rank, default=MAX_RANK)
    e.add_argument("--count-only", action="store_true", help="print only the number")

    c = sub.add_parser("classify", help="run the classification and export records")
    c.add_argument("--max-rank", type=_max_rank, default=MAX_RANK)
    c.add_argument("--jobs", type=_positive, default=1)
    c.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    c.add_argument("--format", choices=("json", "csv", "both"), default="json")
    c.add_argument("--xiao-table", type=Path, help="complete table of cover configurations")
    c.add_argument("--config", help="classify a single configuration and print it")
    c.add_argument("--count-only", action="store_true", help="print the summary line only")
    c.add_argument(
        "--output",
        type=Path,
        default=Path("classification"),
        help="output path prefix; .json/.csv/.manifest.json are appended",
    )
    c.add_argument("--quiet", action="store_true", help="no progress on stderr")

    v = sub.add_parser("verify-fixtures", help="run the built-in reference fixtures")
    v.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    return p


# ---------------------------------------------------------------- exports


def _families_cell(rec: ClassificationRecord) -> str:
    return ";".join(f"{f.index}:{f.subgroup}:{f.length}:{f.verdict}" for f in rec.families)


def record_dict(rec: ClassificationRecord) -> dict:
    d = rec.as_dict()
    d.pop("notes", None)
    return d


def export_json(records, meta: dict) -> str:
    payload = {"schema": SCHEMA_VERSION, **meta, "records": [record_dict(r) for r in records]}
    return json.dumps(payload, indent=1, sort_keys=False) + "\n"


def export_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in records:
        w.writerow(
            [
                r.name,
                r.rank,
                r.status,
                str(r.simple).lower(),
                _families_cell(r),
                r.b2_surface,
                r.b2_hilb2,
                r.moduli_dim,
                ";".join(r.tags),
            ]
        )
    return buf.getvalue()


def read_csv_records(text: str) -> list[dict]:
    """Parse an export back into dicts shaped like the JSON records."""
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        fams = []
        for cell in filter(None, row["families"].split(";")):
            index, subgroup, length, verdict = cell.split(":")
            fams.append(
                {"index": int(index), "subgroup": subgroup, "length": int(length), "verdict": verdict}
            )
        rec = {
            "config": row["config"],
            "rank": int(row["rank"]),
            "status": row["status"],
            "simple": row["simple"] == "true",
            "families": fams,
            "b2_surface": int(row["b2_surface"]),
            "b2_hilb2": int(row["b2_hilb2"]),
            "moduli_dim": int(row["moduli_dim"]),
            "tags": [t for t in row["tags"].split(";") if t],
        }
        out.append(rec)
    return out


def counts_from_records(records: list[dict]) -> dict[str, int]:
    """Recount from exported dicts (used to cross-check the manifest)."""
    real = [r for r in records if r["status"] in ("PrimitiveOnly", "Irreducible")]
    return {
        "real": len(real),
        "kum": sum(r["status"] == "PrimitiveOnly" for r in real),
        "irr": sum(r["status"] == "Irreducible" for r in real),
        "simple": sum(r["simple"] for r in real),
    }


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


# ---------------------------------------------------------------- commands


def cmd_enumerate(args, out) -> int:
    configs = enumerate_configurations(args.max_rank)
    if args.count_only:
        print(len(configs), file=out)
    else:
        for c in configs:
            print(c.canonical_name, file=out)
    return EXIT_OK


def _refs(args) -> ReferenceData:
    if args.xiao_table is None:
        return DEFAULT_REFERENCE
    try:
        return ReferenceData.with_xiao_table(args.xiao_table)
    except OSError as exc:
        raise UsageError(f"cannot read xiao table: {exc}") from None
    except XiaoTableError as exc:
        raise UsageError(str(exc)) from None


def _single(args, refs, out) -> int:
    try:
        config = AdeConfiguration.parse(args.config)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad configuration {args.config!r}: {exc}") from None
    if config.rank > MAX_RANK:
        raise UsageError(f"{config.canonical_name} has rank {config.rank} > {MAX_RANK}")
    rec = classify(config, refs, args.budget)
    (rec,), partial = tag_smooth_cover_configs([rec], refs)
    d = rec.as_dict()
    d["smooth_cover_partial"] = partial
    print(json.dumps(d, indent=1), file=out)
    return EXIT_INCOMPLETE if rec.status == INCOMPLETE else EXIT_OK


def cmd_classify(args, out, err) -> int:
    refs = _refs(args)
    if args.config:
        return _single(args, refs, out)

    def progress(done, total):
        if not args.quiet and (done % 500 == 0 or done == total):
            print(f"classified {done}/{total}", file=err, flush=True)

    start = time.monotonic()
    records = classify_all(args.max_rank, refs, args.budget, args.jobs, progress)
    records, partial_tags = tag_smooth_cover_configs(records, refs)
    wall = time.monotonic() - start

    parts = partition(records, refs, allow_incomplete=True)
    incomplete = list(parts.incomplete)
    summary = parts.summary()
    if args.count_only:
        print(summary, file=out)
        for name in incomplete:
            print(f"incomplete: {name}", file=err)
        return EXIT_INCOMPLETE if incomplete else EXIT_OK

    meta = {
        "max_rank": args.max_rank,
        "budget": args.budget,
        "partial": bool(incomplete),
        "incomplete": incomplete,
        "smooth_cover_partial": partial_tags,
    }
    written = []
    if args.format in ("json", "both"):
        path = args.output.with_name(args.output.name + ".json")
        _write(path, export_json(records, meta))
        written.append(path)
    if args.format in ("csv", "both"):
        path = args.output.with_name(args.output.name + ".csv")
        _write(path, export_csv(records))
        written.append(path)

    manifest = {
        "schema": SCHEMA_VERSION,
        "tool": "k3ade",
        "version": __version__,
        "max_rank": args.max_rank,
        "budget": args.budget,
        "parallelism": args.jobs,
        "inputs": {"xiao_table_sha256": refs.xiao_digest},
        "wall_time_seconds": round(wall, 3),
        "records": len(records),
        "counts": parts.counts,
        "incomplete": incomplete,
        "smooth_cover_partial": partial_tags,
        "exports": {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in written},
    }
    _write(
        args.output.with_name(args.output.name + ".manifest.json"),
        json.dumps(manifest, indent=1) + "\n",
    )
    print(summary, file=out)
    for name in incomplete:
        print(f"incomplete: {name}", file=err)
    return EXIT_INCOMPLETE if incomplete else EXIT_OK


def cmd_verify_fixtures(args, out) -> int:
    outcomes = run_fixtures(args.budget)
    width = max(len(o.name) for o in outcomes)
    for o in outcomes:
        print(f"{o.status.upper():10} {o.name:{width}}  {o.message}", file=out)
    failed = [o for o in outcomes if o.status != "pass"]
    print(f"{len(outcomes) - len(failed)}/{len(outcomes)} fixtures pass", file=out)
    if any(o.status == "fail" for o in outcomes):
        return EXIT_FIXTURE
    return EXIT_INCOMPLETE if failed else EXIT_OK


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        if args.command == "enumerate":
            return cmd_enumerate(args, out)
        if args.command == "classify":
            return cmd_classify(args, out, err)
        return cmd_verify_fixtures(args, out)
    except UsageError as exc:
        print(f"k3ade: error: {exc}", file=err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())


def main_entry() -> None:
    sys.exit(main())
