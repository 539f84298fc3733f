"""Command line front end.

Subcommands read a graph file and emit deterministic reports, as text or as
JSON (``--json``).  Exit codes: 0 success, 1 invariant violation, 2 input
error, 3 qubit bound exceeded, 4 extension search failure (a conjecture
counterexample candidate, reported loudly).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .extension import (
    ExtensionError,
    ParentExtension,
    extend_e1,
    extend_for_subgroup,
    indicator,
    j_members,
    verify_full_commutation,
)
from .f2 import BinMatrix, bits_of, rank, span
from .graphs import (
    GraphParseError,
    MixedGraph,
    complete_multipartite_parts,
    dual_stabilizer,
    f4_matrix,
    f4_row_strings,
    maximal_independent_sets,
    mixed_rank,
    parse_graph,
    serialize_graph,
    stabilizer_matrix,
)
from .pauli import BoundExceeded, PauliWord, dense_bound, ordered_product
from .signfree import (
    canonical_family,
    commuting_subsets_oracle,
    e_direct,
    e_recursive,
    family_to_lists,
)
from .states import (
    PhaseFunction,
    child_from_partial_trace,
    child_from_pauli_sum,
    children_family_e1,
    stabilized_by,
)
from .subgroups import chi, enumerate_max_isotropic, reduce_gamma

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_INPUT = 2
EXIT_BOUND = 3
EXIT_SEARCH = 4

FIXTURE_SCHEMA = "mgstate-fixture-v1"


class InvariantViolation(RuntimeError):
    """A named invariant failed, with a minimal reproducer string."""

    def __init__(self, name: str, reproducer: str):
        super().__init__(f"invariant failed: {name} ({reproducer})")
        self.name = name
        self.reproducer = reproducer


class SearchFailure(RuntimeError):
    pass


def _bitstring(v: int, n: int) -> str:
    return "".join("1" if (v >> j) & 1 else "0" for j in range(n))


def _coeff_str(exp: int) -> str:
    return {0: "+1", 1: "+i", 2: "-1", 3: "-i"}[exp % 4]


def _read_graph(path: str) -> tuple[MixedGraph, str, Optional[Dict]]:
    """Returns (graph, digest, fixture-expectations or None)."""
    try:
        raw = Path(path).read_bytes()
    except OSError as err:
        raise GraphParseError(0, f"cannot read {path}: {err}") from err
    digest = hashlib.sha256(raw).hexdigest()
    text = raw.decode("utf-8")
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as err:
            raise GraphParseError(0, f"bad fixture JSON: {err}") from err
        if doc.get("schema") != FIXTURE_SCHEMA:
            raise GraphParseError(0, "fixture is missing the expected schema tag")
        return parse_graph(doc["graph"]), digest, doc.get("expect", {})
    return parse_graph(text), digest, None


def _emit(report: Dict, text_lines: List[str], as_json: bool) -> None:
    if as_json:
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")


# ---------------------------------------------------------------- analyze


def _analysis(g: MixedGraph) -> Dict:
    a = g.adjacency()
    gamma = g.gamma()
    e, t = mixed_rank(g)
    red = reduce_gamma(gamma)
    return {
        "n": g.n,
        "red_nodes": sorted(g.red),
        "edges": [[j, k, kind] for j, k, kind in g.canonical_edges()],
        "adjacency": a.row_strings(),
        "gamma": gamma.row_strings(),
        "gamma_rank": rank(gamma),
        "e": e,
        "t": t,
        "kernel_basis": [_bitstring(v, g.n) for v in red.kernel_basis],
        "stabilizer": [str(r) for r in stabilizer_matrix(g)],
        "dual_stabilizer": [str(r) for r in dual_stabilizer(g)],
        "f4_matrix": f4_row_strings(f4_matrix(g)),
    }


def cmd_analyze(args) -> int:
    g, digest, _ = _read_graph(args.path)
    data = _analysis(g)
    report = {"command": "analyze", "input_sha256": digest, "result": data}
    lines = [
        f"nodes: {data['n']}",
        f"red nodes: {data['red_nodes']}",
        "edges: " + "; ".join(f"{j} {kind} {k}" for j, k, kind in data["edges"]),
        "A:      " + " / ".join(data["adjacency"]),
        "Gamma:  " + " / ".join(data["gamma"]),
        f"rank(Gamma) = {data['gamma_rank']}",
        f"e = {data['e']}, t = {data['t']}"
        + (" (pure graph state)" if data["e"] == 0 else ""),
        "kernel basis: " + (", ".join(data["kernel_basis"]) or "(empty)"),
        "stabilizer rows:      " + "  ".join(data["stabilizer"]),
        "dual stabilizer rows: " + "  ".join(data["dual_stabilizer"]),
        "F4 matrix: " + " / ".join(data["f4_matrix"]),
    ]
    _emit(report, lines, args.json)
    return EXIT_OK


# --------------------------------------------------------------- subgroups


def _subgroup_listing(g: MixedGraph, bound: int) -> Dict:
    e, t = mixed_rank(g)
    red = reduce_gamma(g.gamma())
    subs = enumerate_max_isotropic(red, bound=bound)
    if len(subs) != chi(e):
        raise InvariantViolation(
            "subgroup-count", f"found {len(subs)}, chi({e}) = {chi(e)}"
        )
    duals = dual_stabilizer(g)
    listing = []
    for idx, s in enumerate(subs):
        members = s.span_lifted()
        elements = None
        if len(members) <= 64:
            elements = []
            for v in members:
                word = ordered_product(duals, bits_of(v))
                elements.append({"index_set": _bitstring(v, g.n), "word": str(word)})
        listing.append(
            {
                "index": idx,
                "b_reduced": [_bitstring(b, red.n - red.t) for b in s.basis],
                "lifted_generators": [_bitstring(b, g.n) for b in s.lifted_basis],
                "size": len(members),
                "elements": elements,
            }
        )
    return {
        "e": e,
        "t": t,
        "chi": chi(e),
        "count": len(subs),
        "subgroups": listing,
    }


def cmd_subgroups(args) -> int:
    g, digest, _ = _read_graph(args.path)
    data = _subgroup_listing(g, args.bound)
    report = {"command": "subgroups", "input_sha256": digest, "result": data}
    lines = [
        f"e = {data['e']}, t = {data['t']}",
        f"maximal commutative subgroups: {data['count']} (chi = {data['chi']})",
    ]
    for s in data["subgroups"]:
        lines.append(
            f"[{s['index']}] B = {', '.join(s['b_reduced']) or '(empty)'}"
            f" ; lifted = {', '.join(s['lifted_generators']) or '(empty)'}"
            f" ; size = {s['size']}"
        )
        if s["elements"] is not None:
            lines.append(
                "     elements: "
                + "  ".join(el["word"] for el in s["elements"])
            )
    _emit(report, lines, args.json)
    return EXIT_OK


# ---------------------------------------------------------------- children


def _parent_payload(
    g: MixedGraph, p: ParentExtension, duals: Sequence[PauliWord]
) -> Dict:
    l_sets, gmat, h = indicator(p)
    child = child_from_pauli_sum(p, duals)
    verified = child.rho == child_from_partial_trace(p)
    if not verified:
        raise InvariantViolation(
            "pauli-sum-vs-partial-trace",
            f"parent {p.ae.row_strings()} offsets {sorted(p.lab_offsets)}",
        )
    if not stabilized_by(child.rho, stabilizer_matrix(g)):
        raise InvariantViolation("child-stabilized", "child not fixed by the stabilizer rows")
    phase = PhaseFunction.from_parent(p)
    return {
        "parent_rows": [r.letters() for r in p.rows()],
        "ext_columns": [list(c) for c in p.ext_assign] if p.ext_assign else None,
        "lab_offsets": sorted(p.lab_offsets),
        "env_offsets": sorted(p.env_offsets),
        "phase_function": phase.describe(),
        "l_sets": [list(L) for L in l_sets],
        "parity_h": h.row_strings(),
        "generators_g": gmat.row_strings(),
        "coefficients": {
            _bitstring(j, p.n): _coeff_str(k) for j, k in sorted(child.terms.items())
        },
        "rho": child.rho.to_json_dict(),
        "rho_text": child.rho.to_text_grid(),
        "oracle_verified": verified,
    }


def cmd_children(args) -> int:
    g, digest, _ = _read_graph(args.path)
    e, t = mixed_rank(g)
    if g.n + e > dense_bound():
        raise BoundExceeded(f"n + e = {g.n + e} exceeds the dense bound {dense_bound()}")
    duals = dual_stabilizer(g)
    result: Dict = {"e": e, "t": t}
    reports: List[Dict] = []
    if args.subgroup is None and not args.all and e == 1:
        parents = extend_e1(g)
        children, classes = children_family_e1(duals, parents)
        for p, c in zip(parents, children):
            reports.append(_parent_payload(g, p, duals))
        result["mode"] = "family"
        result["classes"] = classes
    else:
        red = reduce_gamma(g.gamma())
        subs = enumerate_max_isotropic(red, bound=args.bound)
        if args.subgroup is not None:
            if not 0 <= args.subgroup < len(subs):
                raise GraphParseError(
                    0, f"subgroup index {args.subgroup} out of range (0..{len(subs) - 1})"
                )
            chosen = [(args.subgroup, subs[args.subgroup])]
        else:
            chosen = list(enumerate(subs))
        result["mode"] = "subgroups"
        for idx, sub in chosen:
            p = extend_for_subgroup(g, sub)
            if p is None:
                raise SearchFailure(
                    f"extension search failed for subgroup {idx}: "
                    "CONJECTURE COUNTEREXAMPLE CANDIDATE - please report this graph"
                )
            payload = _parent_payload(g, p, duals)
            payload["subgroup_index"] = idx
            reports.append(payload)
    result["children"] = reports
    report = {"command": "children", "input_sha256": digest, "result": result}
    lines = [f"e = {result['e']}, t = {result['t']}", f"mode: {result['mode']}"]
    for i, c in enumerate(reports):
        lines.append(f"--- child {i} ---")
        if c.get("subgroup_index") is not None:
            lines.append(f"subgroup index: {c['subgroup_index']}")
        if c["ext_columns"]:
            lines.append(
                "extension columns: " + " | ".join("".join(col) for col in c["ext_columns"])
            )
        lines.append("parent rows: " + " / ".join(c["parent_rows"]))
        lines.append(f"phase function: {c['phase_function']}")
        lines.append(f"L sets: {c['l_sets']}  H: {c['parity_h']}  G: {c['generators_g']}")
        lines.append(
            "coefficients: "
            + "  ".join(f"{k}:{v}" for k, v in sorted(c["coefficients"].items()))
        )
        lines.append("rho = " + c["rho_text"].replace("\n", "\n      "))
        lines.append(f"oracle verified: {c['oracle_verified']}")
    if "classes" in result:
        lines.append(f"equivalence classes under lab Z-conjugation: {result['classes']}")
    _emit(report, lines, args.json)
    return EXIT_OK


# ---------------------------------------------------------------- signfree


def _signfree_data(g: MixedGraph) -> Dict:
    v = canonical_family(maximal_independent_sets(g.gamma()))
    direct = e_direct(v)
    recursive = e_recursive(v)
    oracle = commuting_subsets_oracle(dual_stabilizer(g))
    agree = direct == recursive == oracle
    if not agree:
        raise InvariantViolation("signfree-three-way", "families disagree")
    return {
        "v": family_to_lists(v),
        "ev_count": len(direct),
        "ambiguous": (1 << g.n) - len(direct),
        "family": family_to_lists(direct),
        "three_way_agreement": agree,
    }


def cmd_signfree(args) -> int:
    g, digest, _ = _read_graph(args.path)
    data = _signfree_data(g)
    report = {"command": "signfree", "input_sha256": digest, "result": data}
    lines = [
        "maximal independent sets: " + "; ".join(str(m) for m in data["v"]),
        f"|E(V)| = {data['ev_count']}, ambiguous = {data['ambiguous']}",
        f"three-way agreement (direct / recursive / oracle): {data['three_way_agreement']}",
    ]
    _emit(report, lines, args.json)
    return EXIT_OK


# ------------------------------------------------------------------ verify


def _verify_graph(g: MixedGraph, expect: Optional[Dict], bound: int) -> List[str]:
    """Full invariant battery; raises InvariantViolation on the first failure."""
    checked: List[str] = []

    def check(name: str, ok: bool, reproducer: str) -> None:
        if not ok:
            raise InvariantViolation(name, reproducer)
        checked.append(name)

    gamma = g.gamma()
    e, t = mixed_rank(g)
    check("gamma-rank-even", rank(gamma) % 2 == 0, f"rank = {rank(gamma)}")

    rows = stabilizer_matrix(g)
    duals = dual_stabilizer(g)
    check(
        "dual-commutes-with-stabilizer",
        all(a.commutes(b) for a in rows for b in duals),
        "a dual row fails to commute with a stabilizer row",
    )
    check(
        "rows-hermitian",
        all(r.is_hermitian() for r in rows + duals),
        "a stabilizer row is not Hermitian",
    )

    parts = complete_multipartite_parts(gamma)
    check(
        "tripartite-iff-e1",
        (parts is not None) == (e == 1),
        f"e = {e}, parts present = {parts is not None}",
    )

    red = reduce_gamma(gamma)
    subs = enumerate_max_isotropic(red, bound=bound)
    check("subgroup-count-chi", len(subs) == chi(e), f"{len(subs)} != chi({e})")
    for s in subs:
        members = s.span_lifted()
        check(
            "subgroup-size",
            len(members) == 1 << (g.n - e),
            f"size {len(members)} != 2^(n-e)",
        )

    v = canonical_family(maximal_independent_sets(gamma))
    fam = e_direct(v)
    check(
        "signfree-three-way",
        fam == e_recursive(v) == commuting_subsets_oracle(duals),
        "set families disagree",
    )

    parents: List[ParentExtension] = []
    if g.n + e <= dense_bound():
        for idx, sub in enumerate(subs):
            p = extend_for_subgroup(g, sub)
            check("extension-found", p is not None, f"subgroup {idx}")
            check(
                "extension-commutes",
                verify_full_commutation(p.rows()),
                f"subgroup {idx}",
            )
            check(
                "indicator-matches-subgroup",
                set(j_members(p)) == set(sub.span_lifted()),
                f"subgroup {idx}",
            )
            parents.append(p)
        if e == 1:
            family = extend_e1(g)
            children, classes = children_family_e1(duals, family)
            check("family-size", len(children) <= 6, f"{len(children)} children")
            check("family-classes", len(classes) <= 3, f"{len(classes)} classes")
            parents.extend(family)
        for p in parents:
            child = child_from_pauli_sum(p, duals)
            check(
                "pauli-sum-vs-partial-trace",
                child.rho == child_from_partial_trace(p),
                f"parent {p.ae.row_strings()}",
            )
            check(
                "child-stabilized",
                stabilized_by(child.rho, rows),
                f"parent {p.ae.row_strings()}",
            )
            check("child-trace-one", child.rho.trace_is_one(), "trace != 1")
            check("child-hermitian", child.rho.is_hermitian(), "rho not Hermitian")
            if e >= 1:
                check("child-mixed", not child.rho.is_pure(), "rho unexpectedly pure")

    if expect:
        analysis = _analysis(g)
        for key in ("n", "e", "t", "gamma_rank"):
            if key in expect:
                check(
                    f"expect-{key}",
                    analysis[key] == expect[key],
                    f"{analysis[key]} != {expect[key]}",
                )
        if "chi" in expect:
            check("expect-chi", chi(e) == expect["chi"], f"chi({e}) != {expect['chi']}")
        if "subgroup_count" in expect:
            check(
                "expect-subgroup-count",
                len(subs) == expect["subgroup_count"],
                f"{len(subs)} != {expect['subgroup_count']}",
            )
        if "subgroups" in expect:
            got = [
                [_bitstring(b, g.n) for b in s.lifted_basis] for s in subs
            ]
            check("expect-subgroups", got == expect["subgroups"], "lifted generators differ")
        if "signfree" in expect:
            check(
                "expect-signfree",
                len(fam) == expect["signfree"]["ev_count"]
                and (1 << g.n) - len(fam) == expect["signfree"]["ambiguous"],
                f"|E(V)| = {len(fam)}",
            )
        if "children_e1" in expect:
            family = extend_e1(g)
            children, classes = children_family_e1(duals, family)
            check(
                "expect-children-count",
                len(children) == expect["children_e1"]["count"],
                f"{len(children)} children",
            )
            check(
                "expect-children-classes",
                len(classes) == expect["children_e1"]["classes"],
                f"{len(classes)} classes",
            )
            if "rho_json" in expect["children_e1"]:
                got_rhos = [c.rho.to_json_dict() for c in children]
                check(
                    "expect-children-rho",
                    got_rhos == expect["children_e1"]["rho_json"],
                    "a child density matrix differs from the stored fixture",
                )
        if "stabilizer" in expect:
            check(
                "expect-stabilizer",
                [str(r) for r in rows] == expect["stabilizer"],
                "stabilizer rows differ",
            )
    return checked


def cmd_verify(args) -> int:
    g, digest, expect = _read_graph(args.path)
    try:
        checked = _verify_graph(g, expect, args.bound)
    except InvariantViolation as err:
        sys.stdout.write(f"FAIL {err.name}: {err.reproducer}\n")
        return EXIT_INVARIANT
    report = {
        "command": "verify",
        "input_sha256": digest,
        "result": {"ok": True, "checked": sorted(set(checked))},
    }
    lines = [f"ok ({len(checked)} checks)"] + [
        f"  {name}" for name in sorted(set(checked))
    ]
    _emit(report, lines, args.json)
    return EXIT_OK


# -------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mgstate",
        description="Exact mixed graph state analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("path", help="graph file (or fixture JSON for verify)")
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        p.add_argument(
            "--bound",
            type=int,
            default=16,
            help="reduced-dimension bound for subgroup enumeration",
        )

    p = sub.add_parser("analyze", help="matrices, rank, mixed rank, stabilizers")
    add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("subgroups", help="maximal commutative subgroups of the dual")
    add_common(p)
    p.set_defaults(func=cmd_subgroups)

    p = sub.add_parser("children", help="parent extensions and child density matrices")
    add_common(p)
    p.add_argument("--subgroup", type=int, default=None, help="subgroup index")
    p.add_argument("--all", action="store_true", help="one child per subgroup")
    p.set_defaults(func=cmd_children)

    p = sub.add_parser("signfree", help="order-independent row subsets of the dual")
    add_common(p)
    p.set_defaults(func=cmd_signfree)

    p = sub.add_parser("verify", help="run the invariant suite on a graph or fixture")
    add_common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GraphParseError as err:
        sys.stderr.write(f"input error: {err}\n")
        return EXIT_INPUT
    except BoundExceeded as err:
        sys.stderr.write(f"bound exceeded: {err}\n")
        return EXIT_BOUND
    except SearchFailure as err:
        sys.stderr.write(f"search failure: {err}\n")
        return EXIT_SEARCH
    except InvariantViolation as err:
        sys.stdout.write(f"FAIL {err.name}: {err.reproducer}\n")
        return EXIT_INVARIANT
    except ValueError as err:
        sys.stderr.write(f"input error: {err}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
