"""Command-line front end.

Subcommands: sct, verify, product, restrict, lattice, export.  All numeric
output is exact: integers as integers, rationals as "p/q" strings.  Exit codes:
0 success, 1 input/precondition error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from . import oracle
from .errors import ArgumentError, InputError, LatsuperError
from .groups import GroupSpec, GroupTable, Subgroup, make_group, mask_of
from .lattice import (
    NormalLattice,
    _bits,
    closed_sublattice,
    distributive_analysis,
    lattice_to_dot,
    lattice_to_json,
    normal_lattice,
)
from .products import product_report_to_json, tensor_product
from .restriction import (
    GroupEmbedding,
    build_restriction_context,
    restrict_decompose,
    restriction_report_to_json,
)
from .sct import (
    build_theory,
    chi_bullet_moebius,
    chi_bullet_multiplicative,
    degree_sum,
    verify_sct,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERIFY = 2


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"file not found: {path}")
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {path}: {exc}")


def _load_group(path: str, seed: int) -> GroupTable:
    return make_group(GroupSpec.from_json(_load_json(path)), seed=seed)


def _load_lattice(G: GroupTable, sublattice_path: Optional[str]) -> NormalLattice:
    if sublattice_path is None:
        return normal_lattice(G)
    data = _load_json(sublattice_path)
    if isinstance(data, list):
        data = {"generators": data}
    if "nodes" in data:
        # strict mode: the listed nodes must already be a closed sublattice
        nodes = [Subgroup(mask_of(e)) for e in data["nodes"]]
        return NormalLattice(G, nodes, check_normal=True)
    gens = [Subgroup(mask_of(e)) for e in data.get("generators", [])]
    return closed_sublattice(G, gens)


def _node_from_elements(L: NormalLattice, elements: Sequence[int]) -> int:
    try:
        return L.index_of(mask_of(elements))
    except ArgumentError:
        raise InputError(
            f"subgroup {sorted(elements)} is not a lattice node",
            witness=sorted(elements),
        )


def _write_output(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_json(payload: dict, out: Optional[str]) -> None:
    _write_output(json.dumps(payload, indent=2, sort_keys=True), out)


# ---------------------------------------------------------------------------
# Table serialization.


def table_payload(L: NormalLattice) -> dict:
    theory = build_theory(L)
    part = theory.partition
    block_nodes = part.block_nodes()
    return {
        "group": L.group.spec.to_json(),
        "order": L.group.order,
        "nodes": [
            {
                "index": i,
                "label": L.node_label(i),
                "order": L.size(i),
                "elements": L.nodes[i].to_json(),
            }
            for i in range(len(L.nodes))
        ],
        "blocks": [
            {
                "node": n,
                "label": L.node_label(n),
                "size": part.block_size(n),
                "representative": part.representative(n),
                "elements": sorted(_bits(part.blocks[n])),
            }
            for n in block_nodes
        ],
        "characters": [
            {
                "node": chi.label,
                "label": L.node_label(chi.label),
                "degree": int(chi.degree),
                "values": [int(chi.values[n]) for n in block_nodes],
            }
            for chi in theory.chars
        ],
    }


def table_csv(L: NormalLattice) -> str:
    payload = table_payload(L)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        ["supercharacter"] + [f"g{b['representative']}" for b in payload["blocks"]]
    )
    for chi in payload["characters"]:
        writer.writerow([chi["label"]] + chi["values"])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Verification suite.


def _verification_checks(L: NormalLattice, seed: int) -> list[tuple[str, object]]:
    """Named, independent check callables; each returns a detail dict or raises."""
    rng = random.Random(seed)

    def axioms():
        theory = verify_sct(L)
        return theory.verification_report

    def dual_path():
        used = 0
        for n in range(len(L.nodes)):
            try:
                chi_bullet_multiplicative(L, n)  # asserts equality internally
                used += 1
            except InputError:
                continue
        return {"nodes_with_closed_form": used}

    def cover_meet():
        for m in range(len(L.nodes)):
            for n in range(len(L.nodes)):
                lhs = L.meet(L.cover_join(m), L.cover_join(n))
                if lhs != L.cover_join(L.meet(m, n)):
                    raise LatsuperError(
                        "cover-join meet identity fails",
                        check="cover_meet", witness={"M": m, "N": n},
                    )
        return {"pairs": len(L.nodes) ** 2}

    def tensor_spots():
        m = len(L.nodes)
        pairs = [(rng.randrange(m), rng.randrange(m)) for _ in range(min(10, m * m))]
        hits = 0
        for a, b in pairs:
            report = tensor_product(L, a, b)
            hits += report.identity_holds
        return {"pairs": len(pairs), "identity_held": hits}

    def degree_spots():
        m = len(L.nodes)
        triples = [
            (rng.randrange(m), rng.randrange(m), rng.randrange(m))
            for _ in range(min(15, m**3))
        ]
        applicable = 0
        for k, l, mm in triples:
            result = degree_sum(L, k, l, mm)
            applicable += result.closed_form_applicable
        return {"triples": len(triples), "closed_form_applicable": applicable}

    def oracle_normals():
        if L.group.order > 256:
            return {"status": "skipped (order > 256)"}
        full = normal_lattice(L.group)
        report = oracle.cross_check_normal_lattice(full)
        for node in L.nodes:
            if node.mask not in {s.mask for s in full.nodes}:
                raise LatsuperError(
                    "sublattice node not among the normal subgroups",
                    check="normal_subgroups", witness=node.to_json(),
                )
        return report

    return [
        ("axioms", axioms),
        ("dual_path_equivalence", dual_path),
        ("cover_meet_lemma", cover_meet),
        ("tensor_product_spots", tensor_spots),
        ("degree_sum_spots", degree_spots),
        ("normal_subgroup_oracle", oracle_normals),
    ]


def cmd_verify(args) -> int:
    report: dict = {"seed": args.seed, "checks": []}

    def fail(name: str, exc: LatsuperError) -> int:
        report["checks"].append({"name": name, "passed": False, "error": exc.payload()})
        report["passed"] = False
        _emit_json(report, args.out)
        return EXIT_VERIFY

    try:
        G = _load_group(args.group, args.seed)
    except LatsuperError as exc:
        return fail("group_invariants", exc)
    report["checks"].append({"name": "group_invariants", "passed": True,
                             "detail": {"order": G.order, "name": G.name}})
    try:
        L = _load_lattice(G, args.sublattice)
    except LatsuperError as exc:
        return fail("lattice_closure", exc)
    report["checks"].append({"name": "lattice_closure", "passed": True,
                             "detail": {"nodes": len(L.nodes)}})

    def run_one(item) -> dict:
        name, fn = item
        try:
            return {"name": name, "passed": True, "detail": fn()}
        except LatsuperError as exc:
            return {"name": name, "passed": False, "error": exc.payload()}

    checks = _verification_checks(L, args.seed)
    if args.jobs > 1:
        # every check is pure over immutable inputs; assembly is the join point
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(run_one, checks))
    else:
        results = [run_one(c) for c in checks]
    report["checks"].extend(results)
    report["passed"] = all(c["passed"] for c in report["checks"])
    _emit_json(report, args.out)
    return EXIT_OK if report["passed"] else EXIT_VERIFY


# ---------------------------------------------------------------------------
# Other commands.


def cmd_sct(args) -> int:
    G = _load_group(args.group, args.seed)
    L = _load_lattice(G, args.sublattice)
    if args.format == "csv":
        _write_output(table_csv(L), args.out)
    elif args.format == "json":
        _emit_json(table_payload(L), args.out)
    else:
        raise InputError(f"sct does not support format {args.format!r}")
    return EXIT_OK


def cmd_lattice(args) -> int:
    G = _load_group(args.group, args.seed)
    L = _load_lattice(G, args.sublattice)
    payload = lattice_to_json(L)
    analysis = distributive_analysis(L)
    payload["distributive"] = analysis.is_distributive
    _emit_json(payload, args.out)
    return EXIT_OK


def cmd_export(args) -> int:
    G = _load_group(args.group, args.seed)
    L = _load_lattice(G, args.sublattice)
    if args.format in (None, "dot"):
        _write_output(lattice_to_dot(L), args.out)
    elif args.format == "json":
        _emit_json(lattice_to_json(L), args.out)
    elif args.format == "csv":
        _write_output(table_csv(L), args.out)
    else:
        raise InputError(f"export does not support format {args.format!r}")
    return EXIT_OK


def cmd_product(args) -> int:
    if len(args.subgroup or []) != 2:
        raise InputError("product needs exactly two --subgroup files")
    G = _load_group(args.group, args.seed)
    L = _load_lattice(G, args.sublattice)
    nodes = []
    for path in args.subgroup:
        data = _load_json(path)
        elements = data["elements"] if isinstance(data, dict) else data
        nodes.append(_node_from_elements(L, elements))
    report = tensor_product(L, nodes[0], nodes[1])
    _emit_json(product_report_to_json(L, report), args.out)
    return EXIT_OK


def cmd_restrict(args) -> int:
    if not args.embedding or not args.anchor:
        raise InputError("restrict needs --embedding and --anchor")
    G = _load_group(args.group, args.seed)
    L = _load_lattice(G, args.sublattice)
    emb_data = _load_json(args.embedding)
    H = make_group(GroupSpec.from_json(emb_data["source"]), seed=args.seed)
    sub_h = emb_data.get("source_sublattice")
    if sub_h is None:
        LH = normal_lattice(H)
    elif "nodes" in sub_h:
        LH = NormalLattice(H, [Subgroup(mask_of(e)) for e in sub_h["nodes"]])
    else:
        LH = closed_sublattice(H, [Subgroup(mask_of(e)) for e in sub_h.get("generators", [])])
    embedding = GroupEmbedding(H, G, tuple(emb_data["map"]))
    ctx = build_restriction_context(embedding, L, LH)
    if not ctx.favorable:
        _emit_json({"favorable": False, "witnesses": ctx.witnesses_json()}, args.out)
        return EXIT_INPUT
    anchor_data = _load_json(args.anchor)
    if "antichain" in anchor_data:
        anchor: object = [ _node_from_elements(L, e) for e in anchor_data["antichain"] ]
    elif "node" in anchor_data:
        anchor = _node_from_elements(L, anchor_data["node"])
    elif isinstance(anchor_data, list):
        anchor = _node_from_elements(L, anchor_data)
    else:
        raise InputError("anchor file needs a 'node' or 'antichain' field")
    report = restrict_decompose(ctx, anchor)
    _emit_json(restriction_report_to_json(ctx, report), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latsuper",
        description="Supercharacter theories of normal subgroup lattices (exact).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--group", required=True, help="group spec JSON file")
        p.add_argument("--sublattice", help="sublattice JSON (generators or nodes)")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--format", help="output format where applicable")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized spot checks")
        p.add_argument("--jobs", type=int, default=1, help="worker threads for verify")

    p_sct = sub.add_parser("sct", help="emit the supercharacter table")
    common(p_sct)
    p_sct.set_defaults(fn=cmd_sct, format="csv")

    p_verify = sub.add_parser("verify", help="run the full verification suite")
    common(p_verify)
    p_verify.set_defaults(fn=cmd_verify)

    p_product = sub.add_parser("product", help="tensor-product report for two nodes")
    common(p_product)
    p_product.add_argument("--subgroup", action="append", help="subgroup JSON (twice)")
    p_product.set_defaults(fn=cmd_product)

    p_restrict = sub.add_parser("restrict", help="restriction decomposition report")
    common(p_restrict)
    p_restrict.add_argument("--embedding", help="embedding JSON: {source, map}")
    p_restrict.add_argument("--anchor", help="anchor JSON: {node|antichain}")
    p_restrict.set_defaults(fn=cmd_restrict)

    p_lattice = sub.add_parser("lattice", help="emit the lattice as JSON")
    common(p_lattice)
    p_lattice.set_defaults(fn=cmd_lattice)

    p_export = sub.add_parser("export", help="export the Hasse diagram (DOT)")
    common(p_export)
    p_export.set_defaults(fn=cmd_export)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        _emit_json({"error": exc.payload()}, getattr(args, "out", None))
        return EXIT_INPUT
    except LatsuperError as exc:
        _emit_json({"error": exc.payload()}, getattr(args, "out", None))
        return EXIT_VERIFY


if __name__ == "__main__":
    raise SystemExit(main())
