"""Reading fan and polytope files, writing canonical machine output.

Files are either a JSON object or a line-oriented form::

    # P(1,1,2)
    rank 2
    rays [[1, 0], [0, 1],
          [-1, -2]]
    cones [[0, 1], [1, 2], [0, 2]]

Each key line holds ``key value`` where the value is JSON; a value may
continue over following lines until it parses.
"""

from __future__ import annotations

import json
from pathlib import Path

from .fans import Fan, LatticePolytope


class InputError(ValueError):
    """Malformed input, with a 1-based line (and column when known)."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 source: str | None = None):
        self.line, self.column, self.source = line, column, source
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            if source:
                where = f"{source}: {where}"
            where += ": "
        super().__init__(where + message)


def parse_text(text: str, source: str | None = None) -> tuple[dict, dict[str, int]]:
    """Parse a document; returns the mapping and the line where each key started."""
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(exc.msg, exc.lineno, exc.colno, source) from None
        if not isinstance(doc, dict):
            raise InputError("top level must be an object", 1, 1, source)
        return doc, {k: 1 for k in doc}
    doc: dict = {}
    lines_of: dict[str, int] = {}
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        raw = lines[i]
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            i += 1
            continue
        start = i + 1
        parts = stripped.split(None, 1)
        key = parts[0]
        if len(parts) < 2:
            raise InputError(f"key {key!r} has no value", start, 1, source)
        if key in doc:
            raise InputError(f"duplicate key {key!r}", start, 1, source)
        buf = parts[1]
        while True:
            try:
                value = json.loads(buf)
                break
            except json.JSONDecodeError as exc:
                incomplete = exc.pos >= len(buf.rstrip())
                if not incomplete or i + 1 >= len(lines):
                    col = raw.find(parts[1]) + exc.colno if exc.lineno == 1 else exc.colno
                    raise InputError(f"bad value for {key!r}: {exc.msg}", start + exc.lineno - 1,
                                     col, source) from None
                i += 1
                buf += "\n" + lines[i]
        doc[key] = value
        lines_of[key] = start
        i += 1
    return doc, lines_of


def _int_matrix(value, key: str, line: int | None, source, width: int | None = None) -> list[tuple[int, ...]]:
    if not isinstance(value, list):
        raise InputError(f"{key!r} must be a list of integer vectors", line, source=source)
    out = []
    for row in value:
        if not isinstance(row, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in row):
            raise InputError(f"{key!r} entries must be lists of integers, got {row!r}", line, source=source)
        if width is not None and len(row) != width:
            raise InputError(f"{key!r} entry {row!r} does not have length {width}", line, source=source)
        out.append(tuple(row))
    return out


def _rank(doc, lines, source) -> int:
    if "rank" not in doc:
        raise InputError("missing key 'rank'", 1, source=source)
    d = doc["rank"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 0:
        raise InputError("'rank' must be a non-negative integer", lines.get("rank"), source=source)
    return d


def fan_from_document(doc: dict, lines: dict | None = None, source: str | None = None) -> Fan:
    lines = lines or {}
    d = _rank(doc, lines, source)
    for key in ("rays", "cones"):
        if key not in doc:
            raise InputError(f"missing key {key!r}", 1, source=source)
    rays = _int_matrix(doc["rays"], "rays", lines.get("rays"), source, d)
    cones = [list(c) for c in _int_matrix(doc["cones"], "cones", lines.get("cones"), source)]
    for c in cones:
        for i in c:
            if not 0 <= i < len(rays):
                raise InputError(f"cone {c} refers to ray {i}, which does not exist", lines.get("cones"),
                                 source=source)
    for r in rays:
        if not any(r):
            raise InputError("zero ray", lines.get("rays"), source=source)
    if len({_prim(r) for r in rays}) != len(rays):
        raise InputError("rays must be pairwise non-proportional", lines.get("rays"), source=source)
    return Fan.from_cones(rays, cones, d)


def _prim(r):
    from .lattice import primitive_vector

    return primitive_vector(r)


def polytope_from_document(doc: dict, lines: dict | None = None, source: str | None = None) -> LatticePolytope:
    lines = lines or {}
    d = _rank(doc, lines, source)
    if "vertices" not in doc:
        raise InputError("missing key 'vertices'", 1, source=source)
    verts = _int_matrix(doc["vertices"], "vertices", lines.get("vertices"), source, d)
    if not verts:
        raise InputError("no vertices", lines.get("vertices"), source=source)
    return LatticePolytope.from_points(verts)


def read_input(path: str | Path) -> Fan | LatticePolytope:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    doc, lines = parse_text(text, str(path))
    if "vertices" in doc:
        return polytope_from_document(doc, lines, str(path))
    if "rays" in doc or "cones" in doc:
        return fan_from_document(doc, lines, str(path))
    raise InputError("document has neither 'rays'/'cones' nor 'vertices'", 1, source=str(path))


def write_fan_text(f: Fan) -> str:
    c = f.canonical()
    return (f"rank {c.ambient_rank}\n"
            f"rays {json.dumps([list(r) for r in c.rays])}\n"
            f"cones {json.dumps([list(k) for k in c.maximal])}\n")


def write_polytope_text(p: LatticePolytope) -> str:
    return f"rank {p.ambient_rank}\nvertices {json.dumps([list(v) for v in sorted(p.vertices)])}\n"


def dumps_machine(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))
