"""Plain-text documents for lattice maps, fans, polytopes, sections and
CLI jobs.  One line-oriented format, versioned per kind; serialization
is canonical so round-trips are stable byte-for-byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .fans import Fan
from .intlinalg import LatticeMap, is_primitive, is_zero
from .polytopes import Polytope

MAGIC = "toricfiber"
KINDS = ("lattice_map", "fan", "polytope", "section", "job")
VERSION = "v1"


class DocumentError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{where}")


@dataclass(frozen=True)
class Document:
    kind: str
    version: str
    payload: dict


def _ints(tokens, line):
    try:
        return tuple(int(t) for t in tokens)
    except ValueError:
        raise DocumentError(f"expected integers, got {tokens!r}", line)


def parse(text: str) -> Document:
    lines = text.splitlines()
    rows = [(i + 1, ln.strip()) for i, ln in enumerate(lines) if ln.strip()]
    if not rows:
        raise DocumentError("empty document")
    first_no, first = rows[0]
    head = first.split()
    if len(head) != 3 or head[0] != MAGIC:
        raise DocumentError(f"bad header {first!r}", first_no)
    kind, version = head[1], head[2]
    if kind not in KINDS:
        raise DocumentError(f"unknown document kind {kind!r}", first_no)
    if version != VERSION:
        raise DocumentError(f"unsupported version {version!r}", first_no)
    body = rows[1:]
    parser = {
        "lattice_map": _parse_lattice_map,
        "fan": _parse_fan,
        "polytope": _parse_polytope,
        "section": _parse_section,
        "job": _parse_job,
    }[kind]
    return Document(kind, version, parser(body))


def _expect_key(body, pos, key):
    if pos >= len(body):
        raise DocumentError(f"missing '{key}' line")
    no, ln = body[pos]
    parts = ln.split()
    if parts[0] != key:
        raise DocumentError(f"expected '{key}', got {parts[0]!r}", no)
    return no, parts[1:]


def _parse_lattice_map(body):
    no, val = _expect_key(body, 0, "rows")
    rows = int(val[0])
    no, val = _expect_key(body, 1, "cols")
    cols = int(val[0])
    matrix = []
    for pos in range(rows):
        no, val = _expect_key(body, 2 + pos, "row")
        row = _ints(val, no)
        if len(row) != cols:
            raise DocumentError(f"row has {len(row)} entries, expected {cols}", no)
        matrix.append(row)
    if len(body) != 2 + rows:
        raise DocumentError("trailing content after matrix rows",
                            body[2 + rows][0])
    return {"matrix": tuple(matrix), "rows": rows, "cols": cols}


def _parse_fan(body):
    no, val = _expect_key(body, 0, "rank")
    rank = int(val[0])
    rays = {}
    order = []
    cones = []
    for no, ln in body[1:]:
        parts = ln.split()
        if parts[0] == "ray":
            if len(parts) < 2 + rank:
                raise DocumentError("ray line too short", no)
            name = parts[1]
            if name in rays:
                raise DocumentError(f"duplicate ray name {name!r}", no)
            vec = _ints(parts[2:], no)
            if len(vec) != rank:
                raise DocumentError(f"ray has {len(vec)} coordinates, "
                                    f"expected {rank}", no)
            if is_zero(vec):
                raise DocumentError(f"ray {name!r} is zero", no)
            if not is_primitive(vec):
                raise DocumentError(f"ray {name!r} is not primitive: {vec}", no)
            rays[name] = vec
            order.append(name)
        elif parts[0] == "cone":
            idx = []
            for n in parts[1:]:
                if n not in rays:
                    raise DocumentError(f"cone refers to unknown ray {n!r}", no)
                idx.append(order.index(n))
            cones.append(tuple(idx))
        else:
            raise DocumentError(f"unexpected line {parts[0]!r} in fan", no)
    return {"rank": rank, "ray_names": tuple(order),
            "rays": tuple(rays[n] for n in order), "cones": tuple(cones)}


def _parse_polytope(body):
    no, val = _expect_key(body, 0, "rank")
    rank = int(val[0])
    verts = []
    for no, ln in body[1:]:
        parts = ln.split()
        if parts[0] != "vertex":
            raise DocumentError(f"unexpected line {parts[0]!r} in polytope", no)
        vec = _ints(parts[1:], no)
        if len(vec) != rank:
            raise DocumentError(f"vertex has {len(vec)} coordinates, "
                                f"expected {rank}", no)
        verts.append(vec)
    if not verts:
        raise DocumentError("polytope document has no vertices")
    return {"rank": rank, "vertices": tuple(verts)}


def _parse_coefficient(token: str, line: int):
    try:
        return Fraction(token)
    except ValueError:
        return token  # opaque symbolic label


def _parse_section(body):
    no, val = _expect_key(body, 0, "rank")
    rank = int(val[0])
    terms = {}
    for no, ln in body[1:]:
        parts = ln.split()
        if parts[0] != "term":
            raise DocumentError(f"unexpected line {parts[0]!r} in section", no)
        if "=" not in parts:
            raise DocumentError("term line is missing '='", no)
        eq = parts.index("=")
        exp = _ints(parts[1:eq], no)
        if len(exp) != rank:
            raise DocumentError(f"exponent has {len(exp)} coordinates, "
                                f"expected {rank}", no)
        if len(parts) != eq + 2:
            raise DocumentError("term line needs exactly one coefficient", no)
        if exp in terms:
            raise DocumentError(f"duplicate exponent {exp}", no)
        terms[exp] = _parse_coefficient(parts[eq + 1], no)
    return {"rank": rank, "terms": terms}


def _parse_job(body):
    payload = {"task": None, "options": {}}
    for no, ln in body:
        parts = ln.split()
        if parts[0] == "task":
            if len(parts) != 2:
                raise DocumentError("task line needs one name", no)
            payload["task"] = parts[1]
        elif parts[0] == "option":
            if len(parts) < 4 or parts[2] != "=":
                raise DocumentError("option line must read 'option KEY = VALUE'",
                                    no)
            payload["options"][parts[1]] = " ".join(parts[3:])
        else:
            raise DocumentError(f"unexpected line {parts[0]!r} in job", no)
    if payload["task"] is None:
        raise DocumentError("job document has no task")
    return payload


def serialize(doc: Document) -> str:
    out = [f"{MAGIC} {doc.kind} {doc.version}"]
    p = doc.payload
    if doc.kind == "lattice_map":
        out.append(f"rows {p['rows']}")
        out.append(f"cols {p['cols']}")
        out.extend("row " + " ".join(str(x) for x in row)
                   for row in p["matrix"])
    elif doc.kind == "fan":
        out.append(f"rank {p['rank']}")
        for name, vec in zip(p["ray_names"], p["rays"]):
            out.append(f"ray {name} " + " ".join(str(x) for x in vec))
        for cone in p["cones"]:
            out.append("cone " + " ".join(p["ray_names"][i] for i in cone))
    elif doc.kind == "polytope":
        out.append(f"rank {p['rank']}")
        out.extend("vertex " + " ".join(str(x) for x in v)
                   for v in sorted(p["vertices"]))
    elif doc.kind == "section":
        out.append(f"rank {p['rank']}")
        for exp in sorted(p["terms"]):
            out.append("term " + " ".join(str(x) for x in exp)
                       + f" = {p['terms'][exp]}")
    elif doc.kind == "job":
        out.append(f"task {p['task']}")
        for key in sorted(p["options"]):
            out.append(f"option {key} = {p['options'][key]}")
    else:  # pragma: no cover
        raise DocumentError(f"unknown kind {doc.kind}")
    return "\n".join(out) + "\n"


# -- conversions -------------------------------------------------------------


def fan_document(fan: Fan, ray_names=None) -> Document:
    names = list(ray_names) if ray_names else \
        [f"r{i}" for i in range(len(fan.rays))]
    return Document("fan", VERSION, {
        "rank": fan.rank, "ray_names": tuple(names), "rays": tuple(fan.rays),
        "cones": tuple(fan.maximal_cones)})


def fan_from_document(doc: Document) -> tuple[Fan, tuple[str, ...]]:
    if doc.kind != "fan":
        raise DocumentError(f"expected a fan document, got {doc.kind}")
    p = doc.payload
    try:
        fan = Fan(p["rank"], p["rays"], p["cones"])
    except ValueError as exc:
        raise DocumentError(f"invalid fan: {exc}")
    return fan, p["ray_names"]


def polytope_document(p: Polytope) -> Document:
    return Document("polytope", VERSION,
                    {"rank": p.ambient_rank, "vertices": tuple(p.vertices)})


def polytope_from_document(doc: Document) -> Polytope:
    if doc.kind != "polytope":
        raise DocumentError(f"expected a polytope document, got {doc.kind}")
    return Polytope(doc.payload["vertices"])


def lattice_map_document(m: LatticeMap) -> Document:
    return Document("lattice_map", VERSION, {
        "matrix": m.matrix, "rows": m.target_rank, "cols": m.source_rank})


def lattice_map_from_document(doc: Document) -> LatticeMap:
    if doc.kind != "lattice_map":
        raise DocumentError(f"expected a lattice_map document, got {doc.kind}")
    return LatticeMap(doc.payload["matrix"])
