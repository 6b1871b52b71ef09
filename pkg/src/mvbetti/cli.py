"""Command line front end.

    mvbetti INPUT [--pipeline P] [--ell N] [--cover MODE] [--verify]
                  [--show-complex] [--out PATH] [--machine] [--timing]

``INPUT`` is a space file, or the name of a bundled example when no file of
that name exists.  The result is written as ``key: value`` lines, or as one
JSON object with ``--machine``.  Exit status is 0 on success, 1 on any
error and 2 when ``--verify`` finds a disagreement.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from pathlib import Path
from typing import Sequence

from .exceptions import MVBettiError
from .mvrecursion import MComplexStore, verify_store
from .pipelines import PipelineResult, oracle_betti, run_pipeline
from .spacefile import SpaceFile, bundled_examples, load_example, read_space
from .validation import COVER_MODES, PIPELINES

EXIT_OK, EXIT_ERROR, EXIT_MISMATCH = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mvbetti",
        description="Betti numbers of a finite simplicial complex over Q.",
    )
    p.add_argument("input", help="space file, or a bundled example name: " + ", ".join(bundled_examples()))
    p.add_argument("--pipeline", choices=PIPELINES, default="recursive")
    p.add_argument("--ell", type=int, default=None,
                   help="highest Betti index (default 2, or 1 for betti01)")
    p.add_argument("--cover", choices=COVER_MODES, default="star",
                   help="star: greedy vertex stars; full-star: every vertex star; explicit: covers from the file")
    p.add_argument("--verify", action="store_true",
                   help="compare with the simplicial cohomology oracle and recheck every built object")
    p.add_argument("--show-complex", action="store_true",
                   help="dump every double complex built by the recursive pipeline")
    p.add_argument("--out", metavar="PATH", help="write the record here instead of standard output")
    p.add_argument("--machine", action="store_true", help="single-line JSON output")
    p.add_argument("--timing", action="store_true", help="include wall time (output is then not reproducible)")
    return p


def _load(name: str) -> SpaceFile:
    path = Path(name)
    if not path.exists() and name in bundled_examples():
        return load_example(name)
    return read_space(path)


def _rows(m) -> list[list[str]]:
    return [[str(v) for v in row] for row in m.to_lists()]


def complex_dump(store: MComplexStore) -> list[dict]:
    """Per built index (level order): level, factors, term sizes and every nonzero differential."""
    dag = store.dag
    out = []
    for a in sorted(store.complexes, key=lambda i: (dag[i].level, i)):
        mc = store.complexes[a]
        ix = dag[a]
        entry = {
            "index": dag.describe(a),
            "level": ix.level,
            "factors": [dag[f].label for f in ix.factors] if a else [],
            "dims": {f"{p},{q}": n for (p, q), n in sorted(mc.dc.dims.items())},
            "delta": {f"{p},{q}": _rows(m) for (p, q), m in sorted(mc.dc.horiz.items())},
            "d": {f"{p},{q}": _rows(m) for (p, q), m in sorted(mc.dc.vert.items())},
        }
        out.append(entry)
    return out


def _format_value(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_format_value(x) for x in v) + "]"
    return str(v)


def _text_dump(dump: list[dict]) -> list[str]:
    lines = []
    for e in dump:
        lines.append(f"complex {e['index']}")
        lines.append(f"  level: {e['level']}")
        lines.append(f"  factors: {_format_value(e['factors'])}")
        lines.append("  dims: " + ", ".join(f"({k}) {n}" for k, n in e["dims"].items()))
        for kind, arrow in (("delta", "horizontal"), ("d", "vertical")):
            for k, rows in e[kind].items():
                lines.append(f"  {kind} ({k}) {arrow}:")
                lines.extend("    " + _format_value(r) for r in rows)
    return lines


def run(args: argparse.Namespace) -> tuple[dict, list[dict] | None, int]:
    space = _load(args.input)
    ell = args.ell if args.ell is not None else (1 if args.pipeline == "betti01" else 2)
    start = time.perf_counter()
    result: PipelineResult = run_pipeline(space, args.pipeline, ell, args.cover, check=False)
    elapsed = time.perf_counter() - start

    record: dict = {"pipeline": result.pipeline, "ell": result.ell}
    if args.pipeline != "oracle":
        record["cover"] = args.cover
    record["betti"] = result.betti
    stats = result.stats
    if stats is not None:
        record["dag_levels"] = list(stats.counts_per_level)
        record["dag_total"] = stats.total_indices
        record["dag_max_cover"] = stats.max_cover_size
        record["dag_leaf_elements"] = stats.leaf_elements
    dump = None
    if args.show_complex and result.store is not None:
        result.store.build(result.store.all_indices())
        dump = complex_dump(result.store)
    code = EXIT_OK
    if args.verify:
        expected = oracle_betti(space, result.ell)[: len(result.betti)]
        record["oracle"] = expected
        agree = expected == result.betti
        if result.store is not None:
            report = verify_store(result.store, full=True, compare_cohomology=True)
            record["checked_complexes"] = report.complexes
            record["checked_maps"] = report.maps
            record["violations"] = len(report.violations)
            agree = agree and report.ok
        record["verify"] = "agree" if agree else "mismatch"
        if not agree:
            code = EXIT_MISMATCH
    if args.timing:
        record["wall_time_s"] = round(elapsed, 6)
    return record, dump, code


def render(record: dict, dump: list[dict] | None, machine: bool) -> str:
    if machine:
        obj = dict(record)
        if dump is not None:
            obj["complexes"] = dump
        return json.dumps(obj, separators=(", ", ": ")) + "\n"
    lines = []
    if dump is not None:
        lines.extend(_text_dump(dump))
    lines.extend(f"{k}: {_format_value(v)}" for k, v in record.items())
    return "\n".join(lines) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            record, dump, code = run(args)
        except (MVBettiError, ValueError, KeyError, OSError) as exc:
            msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
            record = None
    for w in caught:
        print(f"mvbetti: warning: {w.message}", file=sys.stderr)
    if record is None:
        print(f"mvbetti: error: {msg}", file=sys.stderr)
        return EXIT_ERROR
    text = render(record, dump, args.machine)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
