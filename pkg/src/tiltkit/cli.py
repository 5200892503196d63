"""Command-line interface.

Usage: ``tiltkit <workspace> <command> [args] [flags]``.  Every command
parses the workspace file, runs one computation, prints a human-readable
summary to standard output, and writes a machine-readable JSON report to a
sidecar file (``--report`` overrides the path, default
``<command>-report.json``).  ``verify`` re-checks a previously written
report against the workspace without redoing any searches.

Exit status: 0 when the run produced no failures and no unknown-at-bound
verdicts (``--allow-unknown`` tolerates unknowns); 1 otherwise; 2 for usage,
parse, or workspace errors.
"""

import argparse
import sys
import time
from typing import List, Optional, Sequence, Tuple

from . import report as rpt
from .complexes import BoundedComplex, shift
from .filtration import (
    FiltrationError,
    filter_general,
    filter_jms,
    filter_three_step,
    membership,
    named_class,
    perp_class,
)
from .hearts import (
    LEMMA_IDS,
    STATUS_REFUTED,
    TorsionPairSpec,
    check_lemma_suite,
    check_tilt_diagram,
    heart_membership,
    verify_torsion_pair,
)
from .modules import Module, enumerate_modules, regular_module
from .tilting import TiltingError
from .workspace import Workspace, WorkspaceError, parse_workspace

COMMANDS = (
    "validate-tilting", "phi", "psi", "classify", "filter-jms", "filter-three",
    "filter-general", "check-pairs", "check-hearts", "check-lemma", "sweep",
    "verify",
)

_FILTER_FLAVORS = {
    "filter-jms": "refined-two-class",
    "filter-three": "three-step",
    "filter-general": "torsion-pair",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tiltkit",
        description="Derived-functor filtrations for quiver algebras with tilting modules.",
    )
    parser.add_argument("workspace", help="workspace file (field/quiver/relations/modules/tilting)")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--enum-cap", type=int, default=None,
                        help="total-dimension cap for witness/subobject scans (workspace default 8)")
    common.add_argument("--perp-bound", type=int, default=None,
                        help="total-dimension bound for vanishing-hom scans (workspace default 6)")
    common.add_argument("--res-cap", type=int, default=None,
                        help="length cap for resolutions and coresolutions (workspace default 10)")
    common.add_argument("--allow-unknown", action="store_true",
                        help="exit 0 even when bounded scans return unknown verdicts")
    common.add_argument("--report", default=None, metavar="PATH",
                        help="sidecar report path (default <command>-report.json)")

    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    sub.add_parser("validate-tilting", parents=[common],
                   help="check the declared tilting module and report its coresolution")
    p = sub.add_parser("phi", parents=[common], help="derived hom dimensions of a module")
    p.add_argument("module", help="workspace module name")
    p = sub.add_parser("psi", parents=[common],
                       help="derived tensor dimensions of an end-side module")
    p.add_argument("object", help="'regular' or 'phi:<module>:<degree>'")
    p = sub.add_parser("classify", parents=[common],
                       help="membership verdicts for the concentration/vanishing classes")
    p.add_argument("module", help="workspace module name")
    p.add_argument("classes", nargs="*",
                   help="explicit classes like 'X(1)' 'B(2)' 'K0' (default: a summary set)")
    for cmd in _FILTER_FLAVORS:
        p = sub.add_parser(cmd, parents=[common], help=f"{_FILTER_FLAVORS[cmd]} filtration of a module")
        p.add_argument("module", help="workspace module name")
    p = sub.add_parser("check-pairs", parents=[common],
                       help="verify the torsion pairs on bounded samples")
    p.add_argument("--dim-cap", type=int, default=3, help="sample total-dimension cap (default 3)")
    p = sub.add_parser("check-hearts", parents=[common],
                       help="verify heart placements on bounded samples")
    p.add_argument("--dim-cap", type=int, default=3, help="sample total-dimension cap (default 3)")
    p = sub.add_parser("check-lemma", parents=[common],
                       help="run one structural check from the lemma suite")
    p.add_argument("id", choices=list(LEMMA_IDS), help="check identifier")
    p.add_argument("--dim-cap", type=int, default=3, help="sample total-dimension cap (default 3)")
    p = sub.add_parser("sweep", parents=[common],
                       help="per-module survey: dimensions, classes, filtration, roundtrip")
    p.add_argument("dim_cap", type=int, help="total-dimension cap for the module sweep")
    p = sub.add_parser("verify", parents=[common],
                       help="re-check every certificate in a report against the workspace")
    p.add_argument("report_file", help="path of a previously written JSON report")
    return parser


def _dims_str(dims: Sequence[int]) -> str:
    return "(" + ", ".join(str(d) for d in dims) + ")"


def _parse_class_token(token: str, n: int):
    """Accept 'X(1)', 'X1', 'B(0)', 'K2' and build the matching descriptor."""
    t = token.strip().upper().replace("(", "").replace(")", "")
    if t in ("K0", "K1", "K2"):
        if n != 2:
            raise WorkspaceError(f"class {token!r} needs a length-2 coresolution")
        return named_class(t)
    if len(t) >= 2 and t[0] in "XB" and t[1:].lstrip("-").isdigit():
        i = int(t[1:])
        if not 0 <= i <= n:
            raise WorkspaceError(f"class {token!r} is out of range for n = {n}")
        return named_class(t[0], i)
    raise WorkspaceError(f"unknown class {token!r} (expected X(i), B(i), or K0/K1/K2)")


# ---------------------------------------------------------------------------
# commands (each returns printable lines + report entries)
# ---------------------------------------------------------------------------

def _cmd_validate_tilting(ws: Workspace, args) -> Tuple[List[str], List[dict]]:
    try:
        tilt = ws.tilting(res_cap=args.res_cap or ws.options.res_cap)
    except TiltingError as err:
        return ([f"tilting validation FAILED: {err}"],
                [{"kind": "tilting-failure", "error": str(err), "failures": 1, "unknowns": 0}])
    cores = tilt.coresolution
    lines = [
        f"tilting module: {' + '.join(tilt.labels)} (dim {sum(m.dim for m in tilt.summands)})",
        f"projective dimension n = {tilt.n}",
        f"endomorphism algebra dimension: {tilt.end.algebra.dim}",
        "coresolution term dims: " + " ".join(str(t.dim) for t in cores.terms),
        "validation: pass",
    ]
    return lines, [rpt.tilting_entry(tilt)]


def _cmd_phi(ws: Workspace, tilt, args) -> Tuple[List[str], List[dict]]:
    m = ws.module(args.module)
    dims = tilt.phi_dims(m)
    cohs = [tilt.phi_cohomology(m, i) for i in range(tilt.n + 1)]
    lines = [f"Phi dims of {args.module}: {_dims_str(dims)}"]
    lines += [f"  Phi^{i}: dim {c.dim}, vertex dims {_dims_str(c.vertex_dims())}"
              for i, c in enumerate(cohs)]
    entry = rpt.cohomology_entry(args.module, "derived-hom", dims,
                                 list(range(tilt.n + 1)), [c.vertex_dims() for c in cohs])
    return lines, [entry]


def _resolve_end_object(ws: Workspace, tilt, token: str) -> Tuple[str, Module]:
    if token == "regular":
        return "regular", regular_module(tilt.end.algebra)
    if token.startswith("phi:"):
        parts = token.split(":")
        if len(parts) == 3 and parts[2].lstrip("-").isdigit():
            i = int(parts[2])
            if not 0 <= i <= tilt.n:
                raise WorkspaceError(f"degree {i} is out of range for n = {tilt.n}")
            return token, tilt.phi_cohomology(ws.module(parts[1]), i)
    raise WorkspaceError(f"unknown end-side object {token!r} "
                         "(expected 'regular' or 'phi:<module>:<degree>')")


def _cmd_psi(ws: Workspace, tilt, args) -> Tuple[List[str], List[dict]]:
    label, m = _resolve_end_object(ws, tilt, args.object)
    dims = tilt.psi_dims(m)
    degrees = [j - tilt.n for j in range(tilt.n + 1)]
    cohs = [tilt.psi_cohomology(m, d) for d in degrees]
    lines = [f"Psi dims of {label} (degrees {degrees[0]}..0): {_dims_str(dims)}"]
    lines += [f"  Psi^{d}: dim {c.dim}, vertex dims {_dims_str(c.vertex_dims())}"
              for d, c in zip(degrees, cohs)]
    entry = rpt.cohomology_entry(label, "derived-tensor", dims, degrees,
                                 [c.vertex_dims() for c in cohs])
    return lines, [entry]


def _cmd_classify(ws: Workspace, tilt, args, enum_cap: int) -> Tuple[List[str], List[dict]]:
    m = ws.module(args.module)
    n = tilt.n
    if args.classes:
        descriptors = [_parse_class_token(t, n) for t in args.classes]
        shown = descriptors
        mems = {d.name: membership(tilt, m, d, dim_bound=enum_cap) for d in descriptors}
    else:
        descriptors = [named_class("X", i) for i in range(n + 1)]
        descriptors += [named_class("B", i) for i in range(n + 1)]
        mems = {d.name: membership(tilt, m, d, dim_bound=enum_cap) for d in descriptors}
        # summary: the concentration degree if there is one, plus the two
        # endpoint vanishing classes that steer the filtrations
        x_yes = [d for d in descriptors[:n + 1] if mems[d.name].verdict == "yes"]
        shown = (x_yes if x_yes else descriptors[:n + 1])
        shown = shown + [named_class("B", 0), named_class("B", n)]
    line = "; ".join(f"{d.name}: {mems[d.name].verdict}" for d in shown)
    ordered = [mems[d.name] for d in descriptors]
    return [line], [rpt.memberships_entry(args.module, m, ordered)]


def _cmd_filter(ws: Workspace, tilt, args, command: str, enum_cap: int) -> Tuple[List[str], List[dict]]:
    m = ws.module(args.module)
    flavor = _FILTER_FLAVORS[command]
    try:
        if command == "filter-jms":
            filt = filter_jms(tilt, m)
        elif command == "filter-three":
            filt = filter_three_step(tilt, m)
        else:
            filt = filter_general(tilt, m, dim_bound=enum_cap)
    except FiltrationError as err:
        return ([f"filtration FAILED: {err}"],
                [{"kind": "filtration-failure", "error": str(err), "failures": 1, "unknowns": 0}])
    entry = rpt.filtration_entry(args.module, filt, flavor)
    lines = [f"{flavor} filtration of {args.module} (dim {m.dim}):",
             "  step dims: " + " ".join(str(d) for d in entry["step_dims"])]
    total = [0] * len(m.vertex_dims())
    for fac in entry["factors"]:
        lines.append(f"  factor {fac['label']}: dim {fac['dim']}, "
                     f"vertex dims {_dims_str(fac['vertex_dims'])}"
                     + (f" [{fac['membership']['note']}]" if fac["membership"]["verdict"] != "yes" else ""))
        total = [a + b for a, b in zip(total, fac["vertex_dims"])]
    lines.append(f"  factor vertex dims sum to {_dims_str(total)}")
    return lines, [entry]


def _torsion_pair_specs(tilt) -> List[TorsionPairSpec]:
    pairs = [TorsionPairSpec("base", named_class("B", tilt.n), perp_class(named_class("B", tilt.n)))]
    if tilt.n == 2:
        pairs.append(TorsionPairSpec("end", named_class("C", 0), perp_class(named_class("C", 0))))
    return pairs


def _cmd_check_pairs(ws: Workspace, tilt, args, perp_bound: int) -> Tuple[List[str], List[dict]]:
    lines: List[str] = []
    entries: List[dict] = []
    samples = {
        "base": enumerate_modules(tilt.algebra, args.dim_cap),
        "end": enumerate_modules(tilt.end.algebra, args.dim_cap),
    }
    for pair in _torsion_pair_specs(tilt):
        rep = verify_torsion_pair(tilt, pair, samples[pair.side], dim_bound=perp_bound)
        entries.append(rpt.pair_entry(rep))
        verdict = "pass" if rep.ok else f"{len(rep.findings)} finding(s)"
        lines.append(f"pair {pair.name} on the {pair.side} side: {verdict} "
                     f"({rep.sample_size} modules, {rep.hom_pairs_checked} hom pairs, "
                     f"{rep.unknowns} unknown)")
        lines += [f"  {f.kind}: {f.detail}" for f in rep.findings[:5]]
    return lines, entries


def _heart_sweep_rows(ws: Workspace, tilt, args, enum_cap: int, perp_bound: int):
    rows = []
    unknowns = 0
    for m in enumerate_modules(tilt.algebra, args.dim_cap):
        if m.dim == 0:
            continue
        here = heart_membership(tilt, BoundedComplex.from_module(m, 0), "U11",
                                dim_bound=enum_cap, perp_bound=perp_bound)
        shifted = heart_membership(tilt, shift(BoundedComplex.from_module(m, 0), 1), "U11",
                                   dim_bound=enum_cap, perp_bound=perp_bound)
        unknowns += sum(1 for v in (here, shifted) if v.verdict == "unknown")
        rows.append({"vertex_dims": list(m.vertex_dims()),
                     "degree0": here.verdict, "shifted": shifted.verdict})
    return rows, unknowns


def _cmd_check_hearts(ws: Workspace, tilt, args, enum_cap: int, perp_bound: int) -> Tuple[List[str], List[dict]]:
    if tilt.n == 2:
        rep = check_tilt_diagram(tilt, dim_cap=args.dim_cap,
                                 perp_bound=perp_bound, dim_bound=enum_cap)
        lines = [f"tilt diagram on {rep.sample_sizes[0]} base / {rep.sample_sizes[1]} end modules: {rep.status}"]
        for group, rows in (("torsion placement", rep.placement_rows),
                            ("free placement", rep.free_placement_rows),
                            ("perp description", rep.perp_rows),
                            ("two-tilt factorization", rep.factorization_rows)):
            bad = [r for r in rows if r.status == STATUS_REFUTED]
            lines.append(f"  {group}: {len(rows)} rows, {len(bad)} refuted")
            lines += [f"    {r.label} {_dims_str(r.dims)}: {r.note}" for r in bad[:5]]
        lines.append("  mirror observation table (group, pattern, count):")
        lines += [f"    {g} {pat}: {cnt}" for g, pat, cnt in rep.mirror]
        return lines, [rpt.diagram_entry(rep)]
    rows, unknowns = _heart_sweep_rows(ws, tilt, args, enum_cap, perp_bound)
    in_heart = sum(1 for r in rows if r["degree0"] == "yes")
    in_shift = sum(1 for r in rows if r["shifted"] == "yes")
    lines = [f"tilted heart sweep over {len(rows)} modules:",
             f"  degree-0 members: {in_heart}; shifted members: {in_shift}; unknown: {unknowns}"]
    entry = rpt.rows_entry("heart-sweep", rows, failures=0, unknowns=unknowns,
                           heart="U11", dim_cap=args.dim_cap)
    return lines, [entry]


def _cmd_check_lemma(ws: Workspace, tilt, args, enum_cap: int, perp_bound: int) -> Tuple[List[str], List[dict]]:
    rep = check_lemma_suite(tilt, args.id, dim_cap=args.dim_cap,
                            perp_bound=perp_bound, dim_bound=enum_cap)
    entry = rpt.check_entry(rep)
    lines = [f"check {args.id} over {rep.sample_size} objects: {rep.status}"]
    lines += [f"  note: {note}" for note in rep.notes]
    for r in rep.refuted_rows[:10]:
        lines.append(f"  refuted: {r.label} {_dims_str(r.dims)} — {r.note}")
    return lines, [entry]


def _cmd_sweep(ws: Workspace, tilt, args, enum_cap: int) -> Tuple[List[str], List[dict]]:
    lines: List[str] = []
    rows: List[dict] = []
    failures = 0
    unknowns = 0
    names = {m.key(): name for name, m in ws.modules.items()}
    sample = enumerate_modules(tilt.algebra, args.dim_cap)
    for m in sample:
        label = names.get(m.key(), _dims_str(m.vertex_dims()))
        row = {"module": label, "vertex_dims": list(m.vertex_dims()),
               "phi_dims": list(tilt.phi_dims(m))}
        verdicts = {}
        for kind in ("X", "B"):
            for i in range(tilt.n + 1):
                mem = membership(tilt, m, named_class(kind, i), dim_bound=enum_cap)
                verdicts[mem.descriptor.name] = mem.verdict
        row["classes"] = verdicts
        try:
            filt = filter_jms(tilt, m) if tilt.n == 2 else filter_general(tilt, m, dim_bound=enum_cap)
            row["filtration"] = {
                "step_dims": list(filt.step_dims),
                "factors": [[lab.name, filt.factor(i).dim] for i, lab in enumerate(filt.labels)],
            }
            unknowns += sum(1 for c in filt.certificates if c.verdict == "unknown")
        except FiltrationError as err:
            row["filtration"] = {"error": str(err)}
            failures += 1
        unit = tilt.roundtrip_unit(m)
        row["roundtrip"] = "pass" if unit.passed else "fail"
        if not unit.passed:
            failures += 1
        rows.append(row)
        yes = [name for name, v in verdicts.items() if v == "yes"]
        lines.append(f"{label}: phi {_dims_str(row['phi_dims'])}; "
                     f"classes {', '.join(yes) if yes else '-'}; roundtrip {row['roundtrip']}")
    lines.append(f"swept {len(rows)} modules: {failures} failure(s), {unknowns} unknown(s)")
    entry = rpt.rows_entry("sweep", rows, failures=failures, unknowns=unknowns,
                           dim_cap=args.dim_cap)
    return lines, [entry]


def _cmd_verify(ws: Workspace, args) -> int:
    try:
        rep = rpt.load_report(args.report_file)
    except (OSError, ValueError) as err:
        print(f"cannot read report: {err}", file=sys.stderr)
        return 2
    fails = rpt.verify_report(rep, ws)
    for f in fails:
        print(f"FAIL {f}")
    if fails:
        print(f"report does NOT verify: {len(fails)} failure(s)")
        return 1
    counts = rep.get("counts", {})
    print(f"report verifies: {counts.get('results', 0)} result(s), "
          f"{counts.get('failures', 0)} failure(s), {counts.get('unknowns', 0)} unknown(s)")
    if counts.get("failures", 0) or (counts.get("unknowns", 0) and not args.allow_unknown):
        return 1
    return 0


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ws = parse_workspace(args.workspace)
    except WorkspaceError as err:
        print(f"workspace error: {err}", file=sys.stderr)
        return 2

    if args.command == "verify":
        return _cmd_verify(ws, args)

    enum_cap = args.enum_cap or ws.options.enum_cap
    perp_bound = args.perp_bound or ws.options.perp_bound
    res_cap = args.res_cap or ws.options.res_cap
    started = time.monotonic()
    rep = rpt.base_report([args.command] + _command_args(args), ws,
                          {"enum_cap": enum_cap, "perp_bound": perp_bound, "res_cap": res_cap})

    try:
        if args.command == "validate-tilting":
            lines, entries = _cmd_validate_tilting(ws, args)
        else:
            tilt = ws.tilting(res_cap=res_cap)
            if args.command == "phi":
                lines, entries = _cmd_phi(ws, tilt, args)
            elif args.command == "psi":
                lines, entries = _cmd_psi(ws, tilt, args)
            elif args.command == "classify":
                lines, entries = _cmd_classify(ws, tilt, args, enum_cap)
            elif args.command in _FILTER_FLAVORS:
                lines, entries = _cmd_filter(ws, tilt, args, args.command, enum_cap)
            elif args.command == "check-pairs":
                lines, entries = _cmd_check_pairs(ws, tilt, args, perp_bound)
            elif args.command == "check-hearts":
                lines, entries = _cmd_check_hearts(ws, tilt, args, enum_cap, perp_bound)
            elif args.command == "check-lemma":
                lines, entries = _cmd_check_lemma(ws, tilt, args, enum_cap, perp_bound)
            else:
                lines, entries = _cmd_sweep(ws, tilt, args, enum_cap)
    except (WorkspaceError, TiltingError, FiltrationError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2

    rep["results"] = entries
    rpt.finalize_report(rep, started)
    for line in lines:
        print(line)
    failures = rep["counts"]["failures"]
    unknowns = rep["counts"]["unknowns"]
    path = args.report or f"{args.command}-report.json"
    rpt.write_report(rep, path)
    print(f"report written to {path}")
    print(f"status: {failures} failure(s), {unknowns} unknown(s)")
    if failures or (unknowns and not args.allow_unknown):
        return 1
    return 0


def _command_args(args) -> List[str]:
    echo = []
    for key in ("module", "object", "id", "dim_cap", "report_file"):
        if getattr(args, key, None) is not None:
            echo.append(str(getattr(args, key)))
    echo += list(getattr(args, "classes", ()) or ())
    return echo
