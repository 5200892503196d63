"""Plain-text workspace files: algebra, named modules, tilting declaration.

A workspace is a line-oriented text with named sections::

    [field]      GF(p) or QQ, one line
    [quiver]     "vertices: ..." then "arrow <label>: <src> -> <tgt>" lines
    [relations]  one path expression per line ("a.b", "2*a.b - c.d")
    [modules]    "module <name>: <dims>" headers; per-arrow matrix blocks
                 ("<label>:" then one row per line, entries space-separated)
    [tilting]    "summands: <names>"
    [options]    command defaults: enum-cap, perp-bound, res-cap

Omitted arrow matrices act by zero.  Parsing is deterministic and validating:
matrix shapes are checked against the dimension vectors, relation paths
against the quiver, summand names against the module table; every failure is
a :class:`WorkspaceError` carrying the source name and line.  The serializer
emits a canonical form (fixed section order, zero matrices dropped, one blank
line between blocks) on which ``parse -> serialize`` is the identity.
"""

import re
from dataclasses import dataclass, field as dataclass_field
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import FinDimAlgebra, Quiver, parse_path_expression, path_algebra
from .linalg import Field
from .modules import Module, from_representation
from .tilting import TiltingData, validate_tilting


class WorkspaceError(ValueError):
    """A workspace parse or lookup failure, positioned when line-level."""

    def __init__(self, message: str, *, source: str = "<workspace>", line: Optional[int] = None):
        self.source = source
        self.line = line
        where = source if line is None else f"{source}:{line}"
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class WorkspaceOptions:
    """Command defaults carried by the workspace file."""

    enum_cap: int = 8
    perp_bound: int = 6
    res_cap: int = 10


_SECTIONS = ("field", "quiver", "relations", "modules", "tilting", "options")
_ARROW_RE = re.compile(r"^arrow\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)$")
_MODULE_RE = re.compile(r"^module\s+(\S+)\s*:\s*(.*)$")
_BLOCK_RE = re.compile(r"^(\S+):$")
_FIELD_RE = re.compile(r"^GF\((\d+)\)$|^QQ$")
_OPTION_KEYS = {"enum-cap": "enum_cap", "perp-bound": "perp_bound", "res-cap": "res_cap"}


@dataclass
class Workspace:
    """A parsed workspace: the algebra, its named modules, and defaults."""

    source: str
    header: tuple
    field: Field
    quiver: Quiver
    relations: tuple
    algebra: FinDimAlgebra
    module_names: tuple
    module_reps: dict  # name -> (vertex dims tuple, {arrow label: row tuples})
    modules: dict  # name -> Module
    tilting_names: tuple
    options: WorkspaceOptions = dataclass_field(default_factory=WorkspaceOptions)

    def module(self, name: str) -> Module:
        try:
            return self.modules[name]
        except KeyError:
            known = ", ".join(self.module_names) or "none declared"
            raise WorkspaceError(
                f"unknown module {name!r} (known modules: {known})", source=self.source
            )

    def tilting(self, expected_n: Optional[int] = None, res_cap: Optional[int] = None) -> TiltingData:
        """Validate and return the declared tilting module."""
        if not self.tilting_names:
            raise WorkspaceError("no [tilting] section declared", source=self.source)
        return validate_tilting(
            self.algebra,
            [self.modules[n] for n in self.tilting_names],
            labels=self.tilting_names,
            expected_n=expected_n,
            res_cap=res_cap if res_cap is not None else self.options.res_cap,
        )

    def serialize(self) -> str:
        return serialize_workspace(self)


def parse_workspace(path) -> Workspace:
    source = str(path)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise WorkspaceError(f"cannot read workspace file: {err}", source=source)
    return parse_workspace_text(text, source=source)


def parse_workspace_text(text: str, source: str = "<workspace>") -> Workspace:
    header, sections = _split_sections(text, source)

    if "field" not in sections:
        raise WorkspaceError("missing [field] section (field spec)", source=source)
    fld = _parse_field(sections["field"], source)
    if "quiver" not in sections:
        raise WorkspaceError("missing [quiver] section", source=source)
    quiver = _parse_quiver(sections["quiver"], source)
    relations = _parse_relations(sections.get("relations", (0, [])), quiver, source)

    quiver_line = sections["quiver"][0]
    try:
        algebra = path_algebra(quiver, list(relations), fld)
    except ValueError as err:
        raise WorkspaceError(str(err), source=source, line=quiver_line)

    module_names, module_reps, modules = _parse_modules(
        sections.get("modules", (0, [])), quiver, algebra, source
    )
    tilting_names = _parse_tilting(sections.get("tilting"), module_names, source)
    options = _parse_options(sections.get("options"), source)

    return Workspace(
        source, header, fld, quiver, relations, algebra,
        module_names, module_reps, modules, tilting_names, options,
    )


def serialize_workspace(ws: Workspace) -> str:
    chunks: List[str] = []
    if ws.header:
        chunks.append("\n".join(ws.header))
    chunks.append(f"[field]\n{ws.field!r}")

    quiver_lines = ["[quiver]", "vertices: " + " ".join(ws.quiver.vertices)]
    for label, src, tgt in ws.quiver.arrows:
        quiver_lines.append(f"arrow {label}: {src} -> {tgt}")
    chunks.append("\n".join(quiver_lines))

    chunks.append("\n".join(["[relations]"] + list(ws.relations)))

    module_entries = []
    for name in ws.module_names:
        dims, mats = ws.module_reps[name]
        lines = [f"module {name}: " + " ".join(str(d) for d in dims)]
        for label, _, _ in ws.quiver.arrows:
            rows = mats.get(label)
            if rows is None:
                continue
            lines.append(f"{label}:")
            for row in rows:
                lines.append(" ".join(ws.field.serialize(x) for x in row))
        module_entries.append("\n".join(lines))
    if module_entries:
        chunks.append("[modules]\n" + "\n\n".join(module_entries))
    else:
        chunks.append("[modules]")

    if ws.tilting_names:
        chunks.append("[tilting]\nsummands: " + " ".join(ws.tilting_names))

    chunks.append(
        "[options]\n"
        f"enum-cap: {ws.options.enum_cap}\n"
        f"perp-bound: {ws.options.perp_bound}\n"
        f"res-cap: {ws.options.res_cap}"
    )
    return "\n\n".join(chunks) + "\n"


# ---------------------------------------------------------------------------
# section parsing
# ---------------------------------------------------------------------------

def _split_sections(text: str, source: str):
    """(header comment lines, {section: (header lineno, [(lineno, line), ...])})."""
    header: List[str] = []
    sections: Dict[str, Tuple[int, list]] = {}
    current: Optional[str] = None
    seen_any = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if not seen_any:
                header.append(line)
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in _SECTIONS:
                raise WorkspaceError(f"unknown section [{name}]", source=source, line=lineno)
            if name in sections:
                raise WorkspaceError(f"duplicate section [{name}]", source=source, line=lineno)
            sections[name] = (lineno, [])
            current = name
            seen_any = True
            continue
        if current is None:
            raise WorkspaceError(
                "content before the first section header", source=source, line=lineno
            )
        sections[current][1].append((lineno, line))
    return tuple(header), {k: v for k, v in sections.items()}


def _parse_field(section, source) -> Field:
    header_line, lines = section
    if len(lines) != 1:
        raise WorkspaceError(
            "the [field] section needs exactly one line (GF(p) or QQ)",
            source=source, line=header_line,
        )
    lineno, text = lines[0]
    m = _FIELD_RE.match(text)
    if not m:
        raise WorkspaceError(
            f"unrecognized field spec {text!r}: expected GF(p) or QQ", source=source, line=lineno
        )
    if text == "QQ":
        return Field.QQ()
    try:
        return Field.GF(int(m.group(1)))
    except ValueError as err:
        raise WorkspaceError(str(err), source=source, line=lineno)


def _parse_quiver(section, source) -> Quiver:
    header_line, lines = section
    vertices: Optional[tuple] = None
    arrows: List[tuple] = []
    seen_labels: set = set()
    for lineno, text in lines:
        if text.startswith("vertices:"):
            if vertices is not None:
                raise WorkspaceError("duplicate vertices line", source=source, line=lineno)
            vertices = tuple(text[len("vertices:"):].split())
            if not vertices:
                raise WorkspaceError("empty vertex list", source=source, line=lineno)
            if len(set(vertices)) != len(vertices):
                raise WorkspaceError("duplicate vertex label", source=source, line=lineno)
            seen_labels.update(vertices)
            continue
        m = _ARROW_RE.match(text)
        if not m:
            raise WorkspaceError(
                f"unrecognized [quiver] line {text!r}: expected 'vertices: ...' or "
                "'arrow <label>: <src> -> <tgt>'",
                source=source, line=lineno,
            )
        label, src, tgt = m.groups()
        if vertices is None:
            raise WorkspaceError(
                "the vertices line must precede arrow declarations", source=source, line=lineno
            )
        if label in seen_labels:
            raise WorkspaceError(f"duplicate label {label!r}", source=source, line=lineno)
        if src not in vertices or tgt not in vertices:
            raise WorkspaceError(
                f"arrow {label!r} references an unknown vertex", source=source, line=lineno
            )
        seen_labels.add(label)
        arrows.append((label, src, tgt))
    if vertices is None:
        raise WorkspaceError(
            "the [quiver] section needs a vertices line", source=source, line=header_line
        )
    try:
        return Quiver(vertices, tuple(arrows))
    except ValueError as err:
        raise WorkspaceError(str(err), source=source, line=header_line)


def _parse_relations(section, quiver: Quiver, source) -> tuple:
    _header, lines = section
    arrows = {a[0]: a for a in quiver.arrows}
    out: List[str] = []
    for lineno, text in lines:
        try:
            terms = parse_path_expression(quiver, text)
        except ValueError as err:
            raise WorkspaceError(str(err), source=source, line=lineno)
        lengths = {len(t[1]) for t in terms}
        if len(lengths) != 1:
            raise WorkspaceError(
                f"relation {text!r} mixes path lengths {sorted(lengths)}",
                source=source, line=lineno,
            )
        if lengths.pop() < 2:
            raise WorkspaceError(
                f"relation {text!r} has a path of length < 2: not admissible",
                source=source, line=lineno,
            )
        endpoints = {(arrows[t[1][0]][1], arrows[t[1][-1]][2]) for t in terms}
        if len(endpoints) != 1:
            raise WorkspaceError(
                f"relation {text!r} combines non-parallel paths", source=source, line=lineno
            )
        out.append(text)
    return tuple(out)


def _parse_modules(section, quiver: Quiver, algebra: FinDimAlgebra, source):
    _header, lines = section
    fld = algebra.field
    arrow_info = {a[0]: a for a in quiver.arrows}
    names: List[str] = []
    reps: Dict[str, tuple] = {}
    modules: Dict[str, Module] = {}

    state = {"name": None, "line": 0, "dims": None, "mats": None, "arrow": None,
             "arrow_line": 0, "rows": None}

    def finish_matrix():
        if state["arrow"] is None:
            return
        label = state["arrow"]
        _lab, src, tgt = arrow_info[label]
        want_rows = state["dims"][quiver.vertex_index(src)]
        if len(state["rows"]) != want_rows:
            raise WorkspaceError(
                f"arrow {label!r} of module {state['name']} needs {want_rows} "
                f"matrix rows, got {len(state['rows'])}",
                source=source, line=state["arrow_line"],
            )
        if any(any(x != fld.zero for x in row) for row in state["rows"]):
            state["mats"][label] = tuple(tuple(row) for row in state["rows"])
        state["arrow"] = None
        state["rows"] = None

    def finish_module():
        finish_matrix()
        if state["name"] is None:
            return
        name, dims, mats = state["name"], state["dims"], state["mats"]
        try:
            modules[name] = from_representation(
                algebra, dims, {lab: [list(r) for r in rows] for lab, rows in mats.items()}
            )
        except ValueError as err:
            raise WorkspaceError(
                f"module {name}: {err}", source=source, line=state["line"]
            )
        names.append(name)
        reps[name] = (dims, mats)
        state["name"] = None

    for lineno, text in lines:
        m = _MODULE_RE.match(text)
        if m:
            finish_module()
            name, dim_text = m.groups()
            if name in modules:
                raise WorkspaceError(f"duplicate module name {name!r}", source=source, line=lineno)
            tokens = dim_text.split()
            if len(tokens) != len(quiver.vertices) or not all(t.isdigit() for t in tokens):
                raise WorkspaceError(
                    f"module {name}: dimension vector needs {len(quiver.vertices)} "
                    "nonnegative integers",
                    source=source, line=lineno,
                )
            state.update(name=name, line=lineno, dims=tuple(int(t) for t in tokens),
                         mats={}, arrow=None, rows=None)
            continue
        b = _BLOCK_RE.match(text)
        if b:
            label = b.group(1)
            if state["name"] is None:
                raise WorkspaceError(
                    "matrix block outside a module entry", source=source, line=lineno
                )
            if label not in arrow_info:
                raise WorkspaceError(
                    f"module {state['name']}: unknown arrow {label!r}", source=source, line=lineno
                )
            finish_matrix()
            if label in state["mats"]:
                raise WorkspaceError(
                    f"module {state['name']}: duplicate matrix for arrow {label!r}",
                    source=source, line=lineno,
                )
            state.update(arrow=label, arrow_line=lineno, rows=[])
            continue
        if state["name"] is None or state["arrow"] is None:
            raise WorkspaceError(
                f"matrix row outside an arrow block: {text!r}", source=source, line=lineno
            )
        _lab, src, tgt = arrow_info[state["arrow"]]
        want_cols = state["dims"][quiver.vertex_index(tgt)]
        tokens = text.split()
        if len(tokens) != want_cols:
            raise WorkspaceError(
                f"arrow {state['arrow']!r} of module {state['name']}: matrix row "
                f"has {len(tokens)} entries, expected {want_cols}",
                source=source, line=lineno,
            )
        try:
            row = [fld.parse(t) for t in tokens]
        except (ValueError, ZeroDivisionError) as err:
            raise WorkspaceError(f"bad matrix entry: {err}", source=source, line=lineno)
        state["rows"].append(row)
    finish_module()
    return tuple(names), reps, modules


def _parse_tilting(section, module_names: Sequence[str], source) -> tuple:
    if section is None:
        return ()
    header_line, lines = section
    if len(lines) != 1 or not lines[0][1].startswith("summands:"):
        raise WorkspaceError(
            "the [tilting] section needs exactly one 'summands: ...' line",
            source=source, line=header_line,
        )
    lineno, text = lines[0]
    names = tuple(text[len("summands:"):].split())
    if not names:
        raise WorkspaceError("empty summand list", source=source, line=lineno)
    seen = set()
    for n in names:
        if n not in module_names:
            raise WorkspaceError(
                f"tilting summand {n!r} is not a declared module", source=source, line=lineno
            )
        if n in seen:
            raise WorkspaceError(f"duplicate tilting summand {n!r}", source=source, line=lineno)
        seen.add(n)
    return names


def _parse_options(section, source) -> WorkspaceOptions:
    if section is None:
        return WorkspaceOptions()
    _header, lines = section
    values = {}
    for lineno, text in lines:
        key, sep, val = text.partition(":")
        key = key.strip()
        if not sep or key not in _OPTION_KEYS:
            raise WorkspaceError(
                f"unknown option {key!r}: expected one of {', '.join(_OPTION_KEYS)}",
                source=source, line=lineno,
            )
        val = val.strip()
        if not val.isdigit() or int(val) < 1:
            raise WorkspaceError(
                f"option {key!r} needs a positive integer, got {val!r}",
                source=source, line=lineno,
            )
        values[_OPTION_KEYS[key]] = int(val)
    return WorkspaceOptions(**values)
