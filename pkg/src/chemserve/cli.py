"""chemserve command line.

Local chemistry subcommands stream stdin to stdout; `serve` runs the REST
service over a snapshot; `query` drives the lazy client against a running
service. Exit codes: 0 success, 1 domain error (structured JSON on
stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from chemserve.errors import ChemserveError
from chemserve.formats import parse_sdf, parse_smiles, write_sdf, write_smiles
from chemserve.formats.sdf import SdfEntry
from chemserve.molgraph import compute_descriptors
from chemserve.search import (
    build_index,
    fingerprint,
    max_common_substructure,
    match_substructure,
    similarity_search,
    substructure_search,
)
from chemserve.store import RecordStore
from chemserve.store.snapshot import load_snapshot, save_snapshot

DEFAULT_PORT = 8000


def _smiles_lines(stream) -> list[str]:
    return [line.strip() for line in stream if line.strip()]


def _parse_all(lines: list[str]):
    return [parse_smiles(line) for line in lines]


def cmd_convert(args) -> int:
    text = sys.stdin.read()
    if args.src == "smiles":
        mols = _parse_all(_smiles_lines(text.splitlines()))
        entries = [SdfEntry(m) for m in mols]
    else:
        entries = parse_sdf(text)
        mols = [e.molecule for e in entries]
    if args.dst == "smiles":
        for mol in mols:
            print(write_smiles(mol))
    else:
        sys.stdout.write(write_sdf(entries))
    return 0


def cmd_descriptors(args) -> int:
    for mol in _parse_all(_smiles_lines(sys.stdin)):
        print(json.dumps(compute_descriptors(mol).as_dict()))
    return 0


def cmd_fp(args) -> int:
    for mol in _parse_all(_smiles_lines(sys.stdin)):
        print(fingerprint(mol, args.radius, args.nbits).to_hex())
    return 0


def _load_sdf_index(path: str):
    with open(path, encoding="utf-8") as fh:
        entries = parse_sdf(fh.read())
    compounds = []
    for i, entry in enumerate(entries):
        cid = entry.properties.get("chembl_id") or entry.molecule.name or f"entry-{i}"
        compounds.append((cid, entry.molecule))
    return build_index(compounds)


def cmd_sim(args) -> int:
    index = _load_sdf_index(args.sdf)
    query = parse_smiles(args.query)
    for cid, score in similarity_search(index, query, args.threshold):
        print(json.dumps({"id": cid, "score": round(score, 6)}))
    return 0


def cmd_sub(args) -> int:
    index = _load_sdf_index(args.sdf)
    query = parse_smiles(args.query)
    for cid in substructure_search(index, query):
        print(cid)
    return 0


def cmd_mcs(args) -> int:
    entries = parse_sdf(sys.stdin.read())
    if len(entries) < 2:
        raise ChemserveError("mcs needs an SDF with at least 2 records")
    result = max_common_substructure([e.molecule for e in entries])
    print(result.smiles)
    if not result.completed:
        print("warning: node budget exhausted; result may be suboptimal", file=sys.stderr)
    return 0


def cmd_ingest(args) -> int:
    store = RecordStore()
    reports = {}
    if args.sdf:
        with open(args.sdf, encoding="utf-8") as fh:
            reports["molecule"] = store.ingest_sdf(fh.read())
    for resource, path in (
        ("target", args.targets),
        ("activity", args.activities),
        ("mechanism", args.mechanisms),
    ):
        if path:
            with open(path, encoding="utf-8") as fh:
                reports[resource] = store.ingest_tsv(resource, fh.read())
    index = build_index(store.compounds())
    save_snapshot(store, index, args.snapshot)
    for resource, report in reports.items():
        line = f"{resource}: {report.ingested} ingested"
        if report.replaced:
            line += f", {report.replaced} replaced"
        if report.dangling:
            line += f", {report.dangling} dangling references"
        if report.errors:
            line += f", {len(report.errors)} errors"
        print(line, file=sys.stderr)
        for err in report.errors:
            print(f"  {err}", file=sys.stderr)
    print(f"snapshot written to {args.snapshot}", file=sys.stderr)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from chemserve.service import create_app

    store, index = load_snapshot(args.snapshot)
    app = create_app(store, index)
    port = args.port or int(os.environ.get("CHEMSERVE_PORT", DEFAULT_PORT))
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return 0


def cmd_train(args) -> int:
    from chemserve.predict import build_training_set, save_model, train

    store, _ = load_snapshot(args.snapshot)
    examples = build_training_set(store, args.min_pairs, args.radius, args.nbits)
    model = train(examples, alpha=args.alpha, radius=args.radius)
    save_model(model, args.out)
    print(
        f"trained on {model.total_docs} pairs across {len(model.classes)} targets -> {args.out}",
        file=sys.stderr,
    )
    return 0


def cmd_predict(args) -> int:
    from chemserve.predict import load_model, predict

    model = load_model(args.model)
    for line in _smiles_lines(sys.stdin):
        mol = parse_smiles(line)
        ranked = predict(model, mol, args.top_k)
        print(
            json.dumps(
                {
                    "smiles": line,
                    "predictions": [
                        {
                            "target_chembl_id": p.target_chembl_id,
                            "log_score": p.log_score,
                            "probability": p.probability,
                        }
                        for p in ranked
                    ],
                }
            )
        )
    return 0


def cmd_query(args) -> int:
    from chemserve.client import resource as client_resource

    q = client_resource(args.base_url, args.resource, cache_directory=args.cache_dir)
    if args.no_cache:
        q = q.cache_control(False)
    for spec in args.filter or []:
        parts = spec.split(":", 2)
        if len(parts) != 3:
            raise ChemserveError(f"--filter needs field:op:value, got {spec!r}")
        field, op, value = parts
        if op == "in":
            q = q.filter(field, op, value.split(","))
        else:
            q = q.filter(field, op, value)
    if args.order_by:
        q = q.order_by(*args.order_by)
    if args.page_size:
        q = q.page_sized(args.page_size)
    for record in q:
        print(json.dumps(record))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chemserve", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="convert between smiles and sdf on stdin/stdout")
    p.add_argument("--from", dest="src", choices=("smiles", "sdf"), required=True)
    p.add_argument("--to", dest="dst", choices=("smiles", "sdf"), required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("descriptors", help="SMILES lines in, JSON lines out")
    p.set_defaults(func=cmd_descriptors)

    p = sub.add_parser("fp", help="SMILES lines in, hex fingerprint lines out")
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--nbits", type=int, default=2048)
    p.set_defaults(func=cmd_fp)

    p = sub.add_parser("sim", help="similarity search a query against an SDF file")
    p.add_argument("query", help="query SMILES")
    p.add_argument("--sdf", required=True, help="SDF file to search")
    p.add_argument("--threshold", type=float, default=0.7)
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("sub", help="substructure search a query against an SDF file")
    p.add_argument("query", help="query SMILES")
    p.add_argument("--sdf", required=True)
    p.set_defaults(func=cmd_sub)

    p = sub.add_parser("mcs", help="SDF on stdin, MCS SMILES on stdout")
    p.set_defaults(func=cmd_mcs)

    p = sub.add_parser("ingest", help="load fixture files and write a snapshot")
    p.add_argument("--sdf", help="compound SD file")
    p.add_argument("--targets", help="target TSV")
    p.add_argument("--activities", help="activity TSV")
    p.add_argument("--mechanisms", help="mechanism TSV")
    p.add_argument("--snapshot", required=True, help="output snapshot path")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("serve", help="run the REST service from a snapshot")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--port", type=int, default=None, help="default: $CHEMSERVE_PORT or 8000")
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("train", help="train a target-prediction model from a snapshot")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--out", required=True, help="model file path")
    p.add_argument("--min-pairs", dest="min_pairs", type=int, default=1)
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--nbits", type=int, default=2048)
    p.add_argument("--alpha", type=float, default=1.0)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="rank targets for SMILES lines on stdin")
    p.add_argument("--model", required=True)
    p.add_argument("--top-k", dest="top_k", type=int, default=10)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("query", help="query a running service with the lazy client")
    p.add_argument("--base-url", dest="base_url", required=True)
    p.add_argument("--resource", required=True)
    p.add_argument("--filter", action="append", help="field:op:value (repeatable)")
    p.add_argument("--order-by", dest="order_by", nargs="*")
    p.add_argument("--page-size", dest="page_size", type=int, default=None)
    p.add_argument("--no-cache", dest="no_cache", action="store_true")
    p.add_argument("--cache-dir", dest="cache_dir", default=None)
    p.set_defaults(func=cmd_query)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ChemserveError as exc:
        print(json.dumps({"error": type(exc).__name__, "reason": str(exc)}), file=sys.stderr)
        return 1
    except OSError as exc:
        print(json.dumps({"error": "IoError", "reason": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
