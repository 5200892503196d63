"""Bundled example workspaces, embedded as canonical workspace text.

The same texts ship as ``fixtures/*.qws`` files at the repository root for
command-line use; a test keeps file and embedded copies in sync.  Access goes
through :func:`fixture_text` / :func:`fixture_workspace` so tests and scripts
need no file paths.
"""

from .workspace import Workspace, parse_workspace_text

FIX_A2_TEXT = """\
# FIX-A2: two vertices and one arrow; hereditary.
# T = P1 + S1 is 1-tilting over GF(2).

[field]
GF(2)

[quiver]
vertices: 1 2
arrow a: 1 -> 2

[relations]

[modules]
module S1: 1 0

module S2: 0 1

module P1: 1 1
a:
1

[tilting]
summands: P1 S1

[options]
enum-cap: 8
perp-bound: 6
res-cap: 10
"""

FIX_A3R_TEXT = """\
# FIX-A3R: three vertices in a line with the length-two path killed.
# T = P1 + P2 + S1 is 2-tilting over GF(2).

[field]
GF(2)

[quiver]
vertices: 1 2 3
arrow a: 1 -> 2
arrow b: 2 -> 3

[relations]
a.b

[modules]
module S1: 1 0 0

module S2: 0 1 0

module S3: 0 0 1

module P1: 1 1 0
a:
1

module P2: 0 1 1
b:
1

[tilting]
summands: P1 P2 S1

[options]
enum-cap: 8
perp-bound: 6
res-cap: 10
"""

_FIXTURES = {
    "fix-a2": FIX_A2_TEXT,
    "fix-a3r": FIX_A3R_TEXT,
}


def fixture_names() -> tuple:
    return tuple(sorted(_FIXTURES))


def fixture_text(name: str) -> str:
    try:
        return _FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}: expected one of {', '.join(sorted(_FIXTURES))}")


def fixture_workspace(name: str) -> Workspace:
    return parse_workspace_text(fixture_text(name), source=name)
