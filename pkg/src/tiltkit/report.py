"""Versioned machine-readable reports with re-checkable certificates.

A report is a JSON document (schema ``tiltkit-report/1``) binding a command
echo, the options in force, and a list of result entries to the workspace it
was computed from (by content digest).  Entries embed their certificates —
filtration step bases, exact-sequence witnesses, embedding witnesses,
extension chains, membership patterns — in a form that
:func:`verify_report` can re-check by linear algebra alone: nesting and
invariance of steps, dimension additivity, exactness (composition, ranks,
equivariance) of witness sequences, and pattern/label consistency.  The
verify pass never re-runs witness *searches*; bounded ``unknown`` verdicts
are disclosed, not re-derived, and dimension claims about derived-functor
values are checked for consistency with the class named on the same row, not
recomputed.

All field entries are serialized as strings via ``Field.serialize`` and read
back with ``Field.parse``, so GF(p) and rational workspaces share one format.
"""

import hashlib
import json
import os
import time
from datetime import datetime, timezone
from typing import Dict, List, Optional, Sequence

from .filtration import Filtration, Membership, subquotient
from .hearts import (
    LemmaReport,
    PairReport,
    TiltDiagramReport,
    STATUS_BOUNDED,
    STATUS_CONFIRMED,
    STATUS_REFUTED,
)
from .linalg import Matrix, Subspace
from .modules import Module, ModuleMap, regular_module
from .tilting import TiltingData
from .workspace import Workspace, serialize_workspace

SCHEMA = "tiltkit-report/1"

_STATUSES = (STATUS_CONFIRMED, STATUS_BOUNDED, STATUS_REFUTED)


def workspace_digest(ws: Workspace) -> str:
    """Content digest of the canonical serialization (cosmetic edits do not
    change it; structural edits do)."""
    return hashlib.sha256(serialize_workspace(ws).encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# encoding
# ---------------------------------------------------------------------------

def _matrix_json(m: Matrix) -> dict:
    f = m.field
    return {
        "type": "matrix",
        "nrows": m.nrows,
        "ncols": m.ncols,
        "rows": [[f.serialize(x) for x in row] for row in m.rows],
    }


def _subspace_json(s: Subspace) -> dict:
    f = s.field
    return {
        "type": "subspace",
        "ambient_dim": s.ambient_dim,
        "dim": s.dim,
        "rows": [[f.serialize(x) for x in s.basis.row(r)] for r in range(s.dim)],
    }


def module_json(m: Module) -> dict:
    alg = m.algebra
    return {
        "type": "module",
        "dim": m.dim,
        "vertex_dims": list(m.vertex_dims()),
        "generators": {
            alg.basis_labels[g]: _matrix_json(m.action[g]) for g in alg.generator_indices
        },
    }


def _encode_value(x):
    if isinstance(x, Membership):
        return membership_json(x)
    if isinstance(x, ModuleMap):
        return {
            "type": "module_map",
            "source": module_json(x.source),
            "target": module_json(x.target),
            "matrix": _matrix_json(x.matrix),
        }
    if isinstance(x, Module):
        return module_json(x)
    if isinstance(x, Subspace):
        return _subspace_json(x)
    if isinstance(x, Matrix):
        return _matrix_json(x)
    if isinstance(x, (tuple, list)):
        return {"type": "list", "items": [_encode_value(v) for v in x]}
    if isinstance(x, (int, str, bool)) or x is None:
        return x
    if hasattr(x, "name"):  # class descriptors
        return {"type": "class", "name": x.name}
    return {"type": "opaque", "text": str(x)}


def membership_json(mem: Membership) -> dict:
    return {
        "type": "membership",
        "class": mem.descriptor.name,
        "class_kind": mem.descriptor.kind,
        "exact": mem.descriptor.exact,
        "verdict": mem.verdict,
        "note": mem.note,
        "certificate": [[key, _encode_value(val)] for key, val in mem.certificate],
    }


# ---------------------------------------------------------------------------
# result entries
# ---------------------------------------------------------------------------

def filtration_entry(name: str, filt: Filtration, flavor: str) -> dict:
    e = filt.module
    factors = []
    unknowns = 0
    for i, lab in enumerate(filt.labels):
        fac = filt.factor(i)
        mem = filt.certificates[i]
        if mem.verdict == "unknown":
            unknowns += 1
        factors.append({
            "label": lab.name,
            "dim": fac.dim,
            "vertex_dims": list(fac.vertex_dims()),
            "membership": membership_json(mem),
        })
    return {
        "kind": "filtration",
        "flavor": flavor,
        "module": name,
        "module_dim": e.dim,
        "module_vertex_dims": list(e.vertex_dims()),
        "step_dims": list(filt.step_dims),
        "step_rows": [_subspace_json(s) for s in filt.steps],
        "factors": factors,
        "failures": 0,
        "unknowns": unknowns,
    }


def memberships_entry(name: str, module: Module, items: Sequence[Membership]) -> dict:
    return {
        "kind": "memberships",
        "module": name,
        "module_dim": module.dim,
        "module_vertex_dims": list(module.vertex_dims()),
        "entries": [membership_json(m) for m in items],
        "failures": 0,
        "unknowns": sum(1 for m in items if m.verdict == "unknown"),
    }


def cohomology_entry(label: str, functor: str, dims: Sequence[int], degrees: Sequence[int],
                     vertex_dims: Sequence[Sequence[int]]) -> dict:
    return {
        "kind": "cohomology",
        "object": label,
        "functor": functor,
        "degrees": list(degrees),
        "dims": list(dims),
        "vertex_dims": [list(v) for v in vertex_dims],
        "failures": 0,
        "unknowns": 0,
    }


def tilting_entry(tilt: TiltingData) -> dict:
    cores = tilt.coresolution
    return {
        "kind": "tilting",
        "labels": list(tilt.labels),
        "summand_dims": [m.dim for m in tilt.summands],
        "n": tilt.n,
        "end_dim": tilt.end.algebra.dim,
        "coresolution": {
            "term_dims": [t.dim for t in cores.terms],
            "terms": [module_json(t) for t in cores.terms],
            "maps": [_matrix_json(h.matrix) for h in cores.maps],
            "multiplicities": [list(m) for m in cores.multiplicities],
        },
        "failures": 0,
        "unknowns": 0,
    }


def check_entry(rep: LemmaReport) -> dict:
    rows = [{
        "label": r.label,
        "dims": list(r.dims),
        "verdicts": [[n, v] for n, v in r.verdicts],
        "status": r.status,
        "note": r.note,
    } for r in rep.rows]
    return {
        "kind": "check",
        "id": rep.which,
        "sample_size": rep.sample_size,
        "rows": rows,
        "status": rep.status,
        "notes": rep.notes,
        "failures": sum(1 for r in rep.rows if r.status == STATUS_REFUTED),
        "unknowns": sum(1 for r in rep.rows if r.status == STATUS_BOUNDED),
    }


def _diagram_rows_json(rows) -> list:
    return [{
        "label": r.label,
        "dims": list(r.dims),
        "left": r.left,
        "right": r.right,
        "status": r.status,
        "note": r.note,
    } for r in rows]


def diagram_entry(rep: TiltDiagramReport) -> dict:
    all_rows = (rep.placement_rows + rep.free_placement_rows
                + rep.perp_rows + rep.factorization_rows)
    return {
        "kind": "tilt-diagram",
        "sample_sizes": list(rep.sample_sizes),
        "placement_rows": _diagram_rows_json(rep.placement_rows),
        "free_placement_rows": _diagram_rows_json(rep.free_placement_rows),
        "perp_rows": _diagram_rows_json(rep.perp_rows),
        "factorization_rows": _diagram_rows_json(rep.factorization_rows),
        "mirror": [[group, list(pattern), count] for group, pattern, count in rep.mirror],
        "status": rep.status,
        "notes": rep.notes,
        "failures": sum(1 for r in all_rows if r.status == STATUS_REFUTED),
        "unknowns": sum(1 for r in all_rows if r.status == STATUS_BOUNDED),
    }


def pair_entry(rep: PairReport) -> dict:
    return {
        "kind": "pair",
        "pair": rep.pair.name,
        "side": rep.pair.side,
        "sample_size": rep.sample_size,
        "hom_pairs_checked": rep.hom_pairs_checked,
        "findings": [{
            "kind": f.kind,
            "detail": f.detail,
            "objects": [str(o) for o in f.objects],
        } for f in rep.findings],
        "failures": len(rep.findings),
        "unknowns": rep.unknowns,
    }


def rows_entry(kind: str, rows: Sequence[dict], *, failures: int, unknowns: int, **extra) -> dict:
    entry = {"kind": kind, "rows": list(rows), "failures": failures, "unknowns": unknowns}
    entry.update(extra)
    return entry


# ---------------------------------------------------------------------------
# report assembly
# ---------------------------------------------------------------------------

def base_report(command: Sequence[str], ws: Workspace, options: Dict) -> dict:
    return {
        "schema": SCHEMA,
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "workspace": {"source": ws.source, "digest": workspace_digest(ws)},
        "command": list(command),
        "options": dict(options),
        "results": [],
        "counts": {"results": 0, "failures": 0, "unknowns": 0},
        "timing_s": 0.0,
        "notes": [],
    }


def finalize_report(rep: dict, started: float) -> dict:
    rep["counts"] = {
        "results": len(rep["results"]),
        "failures": sum(int(e.get("failures", 0)) for e in rep["results"]),
        "unknowns": sum(int(e.get("unknowns", 0)) for e in rep["results"]),
    }
    rep["timing_s"] = round(time.monotonic() - started, 3)
    return rep


def write_report(rep: dict, path) -> None:
    """Write the report once, atomically (via a sibling temp file)."""
    text = json.dumps(rep, indent=2) + "\n"
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def load_report(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

def verify_report(rep: dict, ws: Workspace) -> List[str]:
    """Re-check every certificate in the report against the workspace.

    Returns a list of human-readable failure strings (empty when the report
    verifies).  Checks are pure linear algebra and consistency logic: no
    witness search is repeated.
    """
    failures: List[str] = []
    if rep.get("schema") != SCHEMA:
        failures.append(f"schema mismatch: expected {SCHEMA}, got {rep.get('schema')!r}")
        return failures
    digest = rep.get("workspace", {}).get("digest")
    if digest != workspace_digest(ws):
        failures.append("workspace digest mismatch: the report was computed from a different workspace")
        return failures

    results = rep.get("results", [])
    for idx, entry in enumerate(results):
        where = f"results[{idx}] ({entry.get('kind', '?')})"
        try:
            failures.extend(_verify_entry(entry, ws, where))
        except (KeyError, TypeError, ValueError, IndexError) as err:
            failures.append(f"{where}: malformed entry: {err}")

    counts = rep.get("counts", {})
    want = {
        "results": len(results),
        "failures": sum(int(e.get("failures", 0)) for e in results),
        "unknowns": sum(int(e.get("unknowns", 0)) for e in results),
    }
    if counts != want:
        failures.append(f"count summary {counts} does not match the entries {want}")
    return failures


def _verify_entry(entry: dict, ws: Workspace, where: str) -> List[str]:
    kind = entry.get("kind")
    if kind == "filtration":
        return _verify_filtration(entry, ws, where)
    if kind == "memberships":
        return _verify_memberships(entry, ws, where)
    if kind == "tilting":
        return _verify_tilting(entry, ws, where)
    if kind == "check":
        return _verify_check(entry, where)
    if kind == "tilt-diagram":
        return _verify_diagram(entry, where)
    if kind == "pair":
        return _verify_pair(entry, where)
    if kind in ("cohomology", "sweep", "heart-sweep", "tilting-failure", "filtration-failure"):
        return _verify_generic_rows(entry, where)
    return [f"{where}: unknown result kind {kind!r}"]


def _decode_matrix(field, mj) -> Matrix:
    rows = [[field.parse(t) for t in row] for row in mj["rows"]]
    m = Matrix(field, rows, mj["ncols"])
    if m.nrows != mj["nrows"]:
        raise ValueError("matrix row count does not match its declaration")
    return m


def _decode_subspace(field, sj) -> Subspace:
    rows = [[field.parse(t) for t in row] for row in sj["rows"]]
    sub = Subspace.from_rows(field, sj["ambient_dim"], rows)
    if sub.dim != sj["dim"]:
        raise ValueError("subspace rows are not independent or do not match the declared dimension")
    return sub


def _generator_matrices(field, module_js) -> Dict[str, Matrix]:
    return {lab: _decode_matrix(field, mj) for lab, mj in module_js["generators"].items()}


def _module_generators(m: Module) -> Dict[str, Matrix]:
    alg = m.algebra
    return {alg.basis_labels[g]: m.action[g] for g in alg.generator_indices}


def _equivariance_failures(fmat: Matrix, src: Dict[str, Matrix], tgt: Dict[str, Matrix], what: str) -> List[str]:
    out = []
    for lab, smat in src.items():
        tmat = tgt.get(lab)
        if tmat is None:
            out.append(f"{what}: generator {lab!r} missing on the target side")
            continue
        if (smat @ fmat).rows != (fmat @ tmat).rows:
            out.append(f"{what}: not equivariant for generator {lab!r}")
    return out


def _cert_dict(mem_js: dict) -> dict:
    return {k: v for k, v in mem_js.get("certificate", [])}


def _class_pattern_failures(mem_js: dict, what: str) -> List[str]:
    """Consistency of a named-class verdict with the dimension pattern its own
    certificate discloses (catches relabelled rows without recomputation)."""
    name = mem_js.get("class", "")
    verdict = mem_js.get("verdict")
    cert = _cert_dict(mem_js)
    dims = cert.get("dims")
    if not isinstance(dims, dict) or dims.get("type") != "list":
        return []
    values = dims["items"]
    if not all(isinstance(v, int) for v in values):
        return []
    n = len(values) - 1
    if len(name) < 4 or name[1] != "(" or not name.endswith(")") or name[0] not in "XBYC":
        return []
    try:
        i = int(name[2:-1])
    except ValueError:
        return []
    idx = i if name[0] in "XB" else i + n
    if idx < 0 or idx > n:
        return [f"{what}: class {name} indexes outside the disclosed pattern"]
    if name[0] in "XY":
        holds = all(v == 0 for j, v in enumerate(values) if j != idx)
    else:
        holds = values[idx] == 0
    if verdict == "yes" and not holds:
        return [f"{what}: verdict 'yes' for {name} contradicts its disclosed pattern {values}"]
    if verdict == "no" and holds:
        return [f"{what}: verdict 'no' for {name} contradicts its disclosed pattern {values}"]
    return []


def _membership_failures(mem_js: dict, context: Optional[Module], ws: Workspace, what: str) -> List[str]:
    """Structural re-check of one membership certificate.

    ``context`` is the module the membership talks about, re-derived by the
    caller (a filtration factor, a chain subquotient, or a named module).
    """
    out: List[str] = []
    field = ws.field
    verdict = mem_js.get("verdict")
    if verdict not in ("yes", "no", "unknown"):
        return [f"{what}: invalid verdict {verdict!r}"]
    out.extend(_class_pattern_failures(mem_js, what))
    cert = _cert_dict(mem_js)

    if "edge" in cert and verdict == "yes":
        out.extend(_exact_presentation_failures(cert, context, ws, what))
    if "embedding" in cert and verdict == "yes":
        out.extend(_embedding_failures(cert, context, ws, what))
    if "surjection" in cert and verdict == "yes":
        out.extend(_surjection_failures(cert, context, ws, what))
    if "chain" in cert and verdict == "yes":
        out.extend(_chain_failures(cert, context, ws, what))
    if "phi_dims" in cert:
        pd = cert["phi_dims"]
        if isinstance(pd, dict) and pd.get("type") == "list":
            values = pd["items"]
            name = mem_js.get("class", "")
            note = mem_js.get("note", "")
            if name == "K1" or (name == "K2" and "concentrated" in note):
                idx = 1 if name == "K1" else 2
                bad = [j for j, v in enumerate(values) if v and j != idx]
                if verdict == "yes" and bad:
                    out.append(f"{what}: {name} pattern {values} is not concentrated in degree {idx}")
    return out


def _exact_presentation_failures(cert: dict, context: Optional[Module], ws: Workspace, what: str) -> List[str]:
    """The quotient-class certificate: a disclosed surjection from a
    degree-0-concentrated module whose kernel is concentrated in the top
    degree.  Re-checks shape, surjectivity, kernel dimension, equivariance,
    and the disclosed concentration patterns."""
    out: List[str] = []
    edge = cert["edge"]
    mat = _decode_matrix(ws.field, edge["matrix"])
    middle = edge["source"]
    if cert.get("middle_dim") is not None and cert["middle_dim"] != middle["dim"]:
        out.append(f"{what}: declared middle dimension does not match the witness")
    if context is not None:
        if mat.ncols != context.dim or mat.nrows != middle["dim"]:
            return out + [f"{what}: presentation matrix shape {mat.nrows}x{mat.ncols} "
                          f"does not map the witness onto the factor (dim {context.dim})"]
        if mat.rank() != context.dim:
            out.append(f"{what}: the disclosed presentation is not surjective")
        out.extend(_equivariance_failures(
            mat, _generator_matrices(ws.field, middle), _module_generators(context), what
        ))
        kdim = cert.get("kernel_dim")
        if isinstance(kdim, int) and middle["dim"] - mat.rank() != kdim:
            out.append(f"{what}: kernel dimension {kdim} does not match the presentation")
    for key, zero_at in (("middle_phi_dims", (1, 2)), ("kernel_phi_dims", (0, 1))):
        val = cert.get(key)
        if isinstance(val, dict) and val.get("type") == "list":
            vals = val["items"]
            if any(vals[j] for j in zero_at if j < len(vals)):
                out.append(f"{what}: disclosed {key} {vals} breaks the required concentration")
    return out


def _embedding_failures(cert: dict, context: Optional[Module], ws: Workspace, what: str) -> List[str]:
    out: List[str] = []
    emb = cert["embedding"]
    mat = _decode_matrix(ws.field, emb["matrix"])
    target = emb["target"]
    if context is not None:
        if mat.nrows != context.dim or mat.ncols != target["dim"]:
            return out + [f"{what}: embedding matrix shape does not match factor and witness"]
        if mat.rank() != context.dim:
            out.append(f"{what}: the disclosed embedding is not injective")
        out.extend(_equivariance_failures(
            mat, _module_generators(context), _generator_matrices(ws.field, target), what
        ))
    cok = cert.get("cokernel_phi_dims")
    if isinstance(cok, dict) and cok.get("type") == "list":
        vals = cok["items"]
        if any(vals[j] for j in (1, 2) if j < len(vals)):
            out.append(f"{what}: disclosed cokernel pattern {vals} is not concentrated in degree 0")
    return out


def _surjection_failures(cert: dict, context: Optional[Module], ws: Workspace, what: str) -> List[str]:
    out: List[str] = []
    sur = cert["surjection"]
    mat = _decode_matrix(ws.field, sur["matrix"])
    source = sur["source"]
    if context is not None:
        if mat.ncols != context.dim or mat.rank() != context.dim:
            out.append(f"{what}: the disclosed surjection does not cover the factor")
        else:
            out.extend(_equivariance_failures(
                mat, _generator_matrices(ws.field, source), _module_generators(context), what
            ))
    return out


def _chain_failures(cert: dict, context: Optional[Module], ws: Workspace, what: str) -> List[str]:
    """An extension-chain certificate: nested invariant subspaces of the
    factor whose subquotients carry their own certificates."""
    out: List[str] = []
    chain = cert["chain"]
    if not (isinstance(chain, dict) and chain.get("type") == "list"):
        return [f"{what}: malformed chain certificate"]
    if context is None:
        return out
    prev_dim = 0
    for step_idx, item in enumerate(chain["items"]):
        if not (isinstance(item, dict) and item.get("type") == "list" and len(item["items"]) == 3):
            out.append(f"{what}: malformed chain step {step_idx}")
            continue
        below_js, here_js, mem_js = item["items"]
        below = _decode_subspace(ws.field, below_js)
        here = _decode_subspace(ws.field, here_js)
        if below.dim != prev_dim:
            out.append(f"{what}: chain step {step_idx} does not continue the previous step")
        if not all(here.contains_vector(below.basis.row(r)) for r in range(below.dim)):
            out.append(f"{what}: chain step {step_idx} is not nested")
        for sub in (below, here):
            if sub.ambient_dim != context.dim or not context.is_invariant(sub):
                out.append(f"{what}: chain step {step_idx} is not an invariant subspace of the factor")
                break
        else:
            layer = subquotient(context, here, below)
            out.extend(_membership_failures(mem_js, layer, ws, f"{what}: chain step {step_idx}"))
        prev_dim = here.dim
    if prev_dim != context.dim:
        out.append(f"{what}: the chain does not reach the whole factor")
    return out


def _verify_filtration(entry: dict, ws: Workspace, where: str) -> List[str]:
    out: List[str] = []
    name = entry["module"]
    if name not in ws.modules:
        return [f"{where}: unknown module {name!r}"]
    e = ws.modules[name]
    if entry["module_dim"] != e.dim or list(e.vertex_dims()) != entry["module_vertex_dims"]:
        out.append(f"{where}: module dimensions do not match the workspace")
    steps = [_decode_subspace(ws.field, sj) for sj in entry["step_rows"]]
    if [s.dim for s in steps] != entry["step_dims"]:
        out.append(f"{where}: declared step dimensions do not match the step bases")
    if not steps or steps[0].dim != 0 or steps[-1].dim != e.dim:
        out.append(f"{where}: the filtration does not run from zero to the module")
    for i, (below, above) in enumerate(zip(steps, steps[1:])):
        if not all(above.contains_vector(below.basis.row(r)) for r in range(below.dim)):
            out.append(f"{where}: step {i + 1} does not contain step {i}")
    for i, s in enumerate(steps):
        if s.ambient_dim != e.dim or not e.is_invariant(s):
            out.append(f"{where}: step {i} is not an invariant subspace")
    factors = entry["factors"]
    if len(factors) != len(steps) - 1:
        out.append(f"{where}: factor count does not match the steps")
        return out
    total_vertex = [0] * len(e.vertex_dims())
    for i, fac in enumerate(factors):
        label = fac["label"]
        what = f"{where}: factor {i} [{label}]"
        derived = subquotient(e, steps[i + 1], steps[i])
        if fac["dim"] != derived.dim:
            out.append(f"{what}: declared dimension {fac['dim']} does not match the steps "
                       f"(expected {derived.dim})")
        if list(derived.vertex_dims()) != fac["vertex_dims"]:
            out.append(f"{what}: declared vertex dimensions do not match the steps")
        for v, d in enumerate(fac["vertex_dims"]):
            total_vertex[v] += d
        mem = fac["membership"]
        if mem.get("class") != label:
            out.append(f"{what}: label does not match the certificate class {mem.get('class')!r}")
        if mem.get("verdict") == "no":
            out.append(f"{what}: a filtration factor carries a failing membership")
        out.extend(_membership_failures(mem, derived, ws, what))
    if total_vertex != list(e.vertex_dims()):
        out.append(f"{where}: factor vertex dimensions sum to {total_vertex}, "
                   f"module has {list(e.vertex_dims())}")
    return out


def _verify_memberships(entry: dict, ws: Workspace, where: str) -> List[str]:
    out: List[str] = []
    name = entry["module"]
    if name not in ws.modules:
        return [f"{where}: unknown module {name!r}"]
    m = ws.modules[name]
    if entry["module_dim"] != m.dim:
        out.append(f"{where}: module dimension does not match the workspace")
    for j, mem in enumerate(entry["entries"]):
        out.extend(_membership_failures(mem, m, ws, f"{where}: entry {j} [{mem.get('class')}]"))
    return out


def _verify_tilting(entry: dict, ws: Workspace, where: str) -> List[str]:
    out: List[str] = []
    for lab in entry["labels"]:
        if lab not in ws.modules:
            out.append(f"{where}: summand {lab!r} is not a workspace module")
    dims = [ws.modules[lab].dim for lab in entry["labels"] if lab in ws.modules]
    if dims != entry["summand_dims"]:
        out.append(f"{where}: summand dimensions do not match the workspace")
    cores = entry["coresolution"]
    terms = cores["terms"]
    maps = [_decode_matrix(ws.field, mj) for mj in cores["maps"]]
    if [t["dim"] for t in terms] != cores["term_dims"]:
        out.append(f"{where}: coresolution term dimensions do not match")
    reg = regular_module(ws.algebra)
    chain_dims = [reg.dim] + [t["dim"] for t in terms]
    gens = [_module_generators(reg)] + [_generator_matrices(ws.field, t) for t in terms]
    if len(maps) != len(terms):
        return out + [f"{where}: coresolution map count does not match its terms"]
    for s, mat in enumerate(maps):
        what = f"{where}: coresolution map {s}"
        if (mat.nrows, mat.ncols) != (chain_dims[s], chain_dims[s + 1]):
            out.append(f"{what}: shape {mat.nrows}x{mat.ncols} does not match the terms")
            return out
        out.extend(_equivariance_failures(mat, gens[s], gens[s + 1], what))
    if maps and maps[0].rank() != reg.dim:
        out.append(f"{where}: the augmentation from the regular module is not injective")
    if maps and maps[-1].rank() != chain_dims[-1]:
        out.append(f"{where}: the last coresolution map is not surjective")
    for s in range(len(maps) - 1):
        if not (maps[s] @ maps[s + 1]).is_zero():
            out.append(f"{where}: coresolution maps {s} and {s + 1} do not compose to zero")
        if maps[s].rank() + maps[s + 1].rank() != chain_dims[s + 1]:
            out.append(f"{where}: the coresolution is not exact at term {s}")
    return out


def _status_for(verdicts: Sequence[str], statuses=_STATUSES) -> Optional[str]:
    if any(v == "unknown" for v in verdicts):
        return STATUS_BOUNDED
    return None  # both confirmed and refuted are possible; checked one-sidedly


def _verify_check(entry: dict, where: str) -> List[str]:
    out: List[str] = []
    if entry["status"] not in _STATUSES:
        out.append(f"{where}: invalid status {entry['status']!r}")
    worst = STATUS_CONFIRMED
    for j, row in enumerate(entry["rows"]):
        status = row.get("status")
        if status not in _STATUSES:
            out.append(f"{where}: row {j} has invalid status {status!r}")
            continue
        verdicts = [v for _n, v in row.get("verdicts", [])]
        if status == STATUS_CONFIRMED and any(v == "unknown" for v in verdicts):
            out.append(f"{where}: row {j} is marked confirmed but has an unresolved verdict")
        rank = {STATUS_CONFIRMED: 0, STATUS_BOUNDED: 1, STATUS_REFUTED: 2}
        if rank[status] > rank[worst]:
            worst = status
    if entry.get("sample_size") is not None and entry["sample_size"] != len(entry["rows"]):
        out.append(f"{where}: sample size does not match the row count")
    if entry["rows"] and entry["status"] != worst:
        out.append(f"{where}: status {entry['status']!r} does not match the worst row {worst!r}")
    if entry["failures"] != sum(1 for r in entry["rows"] if r.get("status") == STATUS_REFUTED):
        out.append(f"{where}: failure count does not match the refuted rows")
    return out


def _verify_diagram(entry: dict, where: str) -> List[str]:
    out: List[str] = []
    groups = ("placement_rows", "free_placement_rows", "perp_rows", "factorization_rows")
    worst = STATUS_CONFIRMED
    rank = {STATUS_CONFIRMED: 0, STATUS_BOUNDED: 1, STATUS_REFUTED: 2}
    refuted = 0
    for g in groups:
        for j, row in enumerate(entry[g]):
            status = row.get("status")
            if status not in _STATUSES:
                out.append(f"{where}: {g}[{j}] has invalid status {status!r}")
                continue
            if status == STATUS_REFUTED:
                refuted += 1
            if g in ("placement_rows", "free_placement_rows", "perp_rows"):
                left, right = row.get("left"), row.get("right")
                expect = (STATUS_BOUNDED if "unknown" in (left, right)
                          else STATUS_CONFIRMED if left == right else STATUS_REFUTED)
                if status != expect:
                    out.append(f"{where}: {g}[{j}] status {status!r} does not match "
                               f"its verdicts ({left!r}, {right!r})")
            if rank[status] > rank[worst]:
                worst = status
    if entry["status"] != worst:
        out.append(f"{where}: status does not match the worst row")
    if entry["failures"] != refuted:
        out.append(f"{where}: failure count does not match the refuted rows")
    for item in entry.get("mirror", ()):
        if not (isinstance(item, list) and len(item) == 3 and isinstance(item[2], int)):
            out.append(f"{where}: malformed mirror table entry {item!r}")
    return out


def _verify_pair(entry: dict, where: str) -> List[str]:
    out: List[str] = []
    if entry["failures"] != len(entry["findings"]):
        out.append(f"{where}: failure count does not match the findings")
    for j, f in enumerate(entry["findings"]):
        if not f.get("kind") or not f.get("detail"):
            out.append(f"{where}: finding {j} lacks a kind or detail")
    return out


def _verify_generic_rows(entry: dict, where: str) -> List[str]:
    out: List[str] = []
    for key in ("failures", "unknowns"):
        if not isinstance(entry.get(key, 0), int) or entry.get(key, 0) < 0:
            out.append(f"{where}: invalid {key} count")
    return out
