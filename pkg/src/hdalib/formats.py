"""Text formats: .ipo blocks, shorthand expressions, .lang and .hda files,
JSON emission, DOT emission, and interval-log ingestion.

Shorthand grammar: rows separated by ``|`` (row order = event order), each
row a juxtaposed chain of single-letter labels, ``•`` (or ``.``) before or
after a letter marking source/target interface membership.  Anything with
cross-row precedence or multi-letter labels needs the block format.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .errors import MalformedInterval, ParseError
from .hda import LOWER, UPPER, Cell, Hda, build_hda, composite_face
from .ipomset import (
    EMPTY,
    IntervalRep,
    IntervalRow,
    Ipomset,
    canonicalize,
    from_intervals,
    sorted_ipomsets,
)
from .language import LanguageSet, language

BULLETS = "•."
EPSILONS = ("ε", "eps")


# ---------------------------------------------------------------------------
# shorthand expressions


def parse_expr(text: str) -> Ipomset:
    """Parse a shorthand ipomset expression."""
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    if body.strip() in EPSILONS or not body.strip():
        return EMPTY
    rows = body.split("|")
    labels: list[str] = []
    source: list[int] = []
    target: list[int] = []
    prec: list[tuple[int, int]] = []
    evord: list[tuple[int, int]] = []
    row_events: list[list[int]] = []
    for row in rows:
        events = _parse_row(row.strip(), text)
        ids = []
        for lab, insrc, intgt in events:
            i = len(labels)
            labels.append(lab)
            if insrc:
                source.append(i)
            if intgt:
                target.append(i)
            ids.append(i)
        prec.extend(zip(ids, ids[1:]))
        row_events.append(ids)
    for k, row in enumerate(row_events):
        for later in row_events[k + 1 :]:
            evord.extend((a, b) for a in row for b in later)
    return canonicalize(labels, source, target, prec, evord)


def _parse_row(row: str, whole: str) -> list[tuple[str, bool, bool]]:
    out = []
    i = 0
    row = re.sub(r"\s+", "", row)
    while i < len(row):
        insrc = row[i] in BULLETS
        if insrc:
            i += 1
        if i >= len(row) or not row[i].isalnum():
            raise ParseError(f"bad expression {whole!r}: expected a label in {row!r}")
        lab = row[i]
        i += 1
        intgt = i < len(row) and row[i] in BULLETS
        if intgt:
            i += 1
        out.append((lab, insrc, intgt))
    if not out:
        raise ParseError(f"bad expression {whole!r}: empty row")
    return out


def ipomset_to_text(p: Ipomset) -> str:
    """Shorthand when the expression grammar can carry the ipomset,
    otherwise a one-line block."""
    short = _try_shorthand(p)
    if short is not None:
        return short
    return ipomset_to_block(p, "P")


def _try_shorthand(p: Ipomset) -> Optional[str]:
    if p.n == 0:
        return "ε"
    if any(len(l) != 1 for l in p.labels):
        return None
    comps = _prec_components(p)
    rows = []
    for comp in comps:
        chain = sorted(comp, key=lambda i: sum(p.prec[j][i] for j in comp))
        for a, b in zip(chain, chain[1:]):
            if not p.prec[a][b]:
                return None  # component is not a chain
        rows.append(chain)
    # order rows by event order; all cross pairs must agree with it
    firsts = [row[0] for row in rows]
    rows.sort(key=lambda row: sum(1 for f in firsts if p.evord[f][row[0]]))
    for i, row in enumerate(rows):
        for later in rows[i + 1 :]:
            for a in row:
                for b in later:
                    if p.prec[a][b] or p.prec[b][a] or not p.evord[a][b]:
                        return None
    text = "|".join(
        "".join(
            ("•" if e in p.source else "") + p.labels[e] + ("•" if e in p.target else "")
            for e in row
        )
        for row in rows
    )
    return f"[{text}]" if len(rows) > 1 else text


def _prec_components(p: Ipomset) -> list[list[int]]:
    parent = list(range(p.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(p.n):
        for j in range(p.n):
            if p.prec[i][j]:
                parent[find(i)] = find(j)
    comps: dict[int, list[int]] = {}
    for i in range(p.n):
        comps.setdefault(find(i), []).append(i)
    return list(comps.values())


# ---------------------------------------------------------------------------
# .ipo blocks


_BLOCK_RE = re.compile(r"ipomset\s+(\w+)\s*\{(.*)\}\s*$", re.S)


def parse_ipomset_block(text: str) -> tuple[str, Ipomset]:
    m = _BLOCK_RE.match(text.strip())
    if not m:
        raise ParseError("expected: ipomset NAME { ... }")
    name, body = m.group(1), m.group(2)
    sections = _sections(body, {"events", "source", "target", "prec", "evord"})
    ids: list[str] = []
    labels: list[str] = []
    for item in _split_list(sections.get("events", "")):
        if ":" not in item:
            raise ParseError(f"bad event {item!r}: expected id:label")
        eid, lab = (s.strip() for s in item.split(":", 1))
        if eid in ids:
            raise ParseError(f"duplicate event id {eid!r}")
        ids.append(eid)
        labels.append(lab)
    index = {eid: i for i, eid in enumerate(ids)}

    def lookup(eid):
        if eid not in index:
            raise ParseError(f"unknown event id {eid!r}")
        return index[eid]

    def pairs(section):
        out = []
        for item in _split_list(sections.get(section, "")):
            if "<" not in item:
                raise ParseError(f"bad {section} item {item!r}: expected id<id")
            a, b = (s.strip() for s in item.split("<", 1))
            out.append((lookup(a), lookup(b)))
        return out

    return name, canonicalize(
        labels,
        [lookup(e) for e in _split_list(sections.get("source", ""))],
        [lookup(e) for e in _split_list(sections.get("target", ""))],
        pairs("prec"),
        pairs("evord"),
    )


def _sections(body: str, allowed: set[str]) -> dict[str, str]:
    out: dict[str, str] = {}
    for part in body.split(";"):
        part = part.strip()
        if not part:
            continue
        if ":" not in part:
            raise ParseError(f"bad section {part!r}")
        key, val = part.split(":", 1)
        key = key.strip()
        if key not in allowed:
            raise ParseError(f"unknown section {key!r}")
        out[key] = val.strip()
    return out


def _split_list(text: str) -> list[str]:
    items = [t for chunk in text.split(",") for t in chunk.split()]
    return [i for i in items if i]


def parse_ipomset_text(text: str) -> Ipomset:
    """Accept either a block or a shorthand expression."""
    text = "\n".join(_strip_comment(l) for l in text.splitlines()).strip()
    if text.startswith("ipomset"):
        return parse_ipomset_block(text)[1]
    return parse_expr(text)


def ipomset_to_block(p: Ipomset, name: str = "P") -> str:
    events = ", ".join(f"e{i}:{l}" for i, l in enumerate(p.labels))
    parts = [f"events: {events}"]
    if p.source:
        parts.append("source: " + " ".join(f"e{i}" for i in sorted(p.source)))
    if p.target:
        parts.append("target: " + " ".join(f"e{i}" for i in sorted(p.target)))
    prec = _reduction(p.n, p.prec)
    if prec:
        parts.append("prec: " + " ".join(f"e{a}<e{b}" for a, b in prec))
    ev = _reduction(p.n, _essential(p))
    if ev:
        parts.append("evord: " + " ".join(f"e{a}<e{b}" for a, b in ev))
    return f"ipomset {name} {{ " + "; ".join(parts) + " }"


def _essential(p: Ipomset):
    return tuple(
        tuple(p.evord[i][j] and p.is_concurrent(i, j) for j in range(p.n))
        for i in range(p.n)
    )


def _reduction(n: int, mat) -> list[tuple[int, int]]:
    # covering pairs of a DAG: drop edges implied by a two-step path
    out = []
    for i in range(n):
        for j in range(n):
            if mat[i][j] and not any(mat[i][k] and mat[k][j] for k in range(n)):
                out.append((i, j))
    return out


# ---------------------------------------------------------------------------
# JSON


def ipomset_to_json(p: Ipomset) -> dict:
    return {
        "labels": list(p.labels),
        "source": sorted(p.source),
        "target": sorted(p.target),
        "prec": [[i, j] for i in range(p.n) for j in range(p.n) if p.prec[i][j]],
        "evord": [[i, j] for i in range(p.n) for j in range(p.n) if p.evord[i][j]],
    }


def ipomset_from_json(obj: dict) -> Ipomset:
    return canonicalize(
        obj["labels"],
        obj.get("source", ()),
        obj.get("target", ()),
        [tuple(x) for x in obj.get("prec", ())],
        [tuple(x) for x in obj.get("evord", ())],
    )


# ---------------------------------------------------------------------------
# .lang files


def parse_lang(text: str) -> LanguageSet:
    lines = [_strip_comment(l) for l in text.splitlines()]
    alphabet: Optional[list[str]] = None
    closed = False
    members: list[Ipomset] = []
    in_members = False
    for line in lines:
        line = line.strip()
        if not line:
            continue
        if in_members:
            members.append(parse_ipomset_text(line))
            continue
        if line.startswith("alphabet:"):
            alphabet = line[len("alphabet:") :].split()
        elif line.startswith("closed:"):
            val = line[len("closed:") :].strip().lower()
            if val not in ("true", "false"):
                raise ParseError(f"closed: expected true or false, got {val!r}")
            closed = val == "true"
        elif line.startswith("members:"):
            in_members = True
            rest = line[len("members:") :].strip()
            if rest:
                members.append(parse_ipomset_text(rest))
        else:
            raise ParseError(f"unexpected line {line!r}")
    if not in_members:
        raise ParseError("missing members: section")
    return language(members, closed=closed, alphabet=alphabet)


def lang_to_text(lang: LanguageSet, closed: bool = True) -> str:
    lines = ["alphabet: " + " ".join(sorted(lang.alphabet))]
    lines.append(f"closed: {'true' if closed else 'false'}")
    lines.append("members:")
    pool = lang.members if closed else lang.generators
    for m in sorted_ipomsets(pool):
        lines.append(ipomset_to_text(m))
    return "\n".join(lines) + "\n"


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0]


# ---------------------------------------------------------------------------
# .hda files


_HDA_RE = re.compile(r"hda\s+(\w+)\s*\{(.*)\}\s*$", re.S)
_CELL_RE = re.compile(r"cell\s+(\S+)\s*:\s*\[([^\]]*)\]\s*(.*)$", re.S)
_FACE_RE = re.compile(r"d([01])\((\d+)\)\s*=\s*(\S+)")


def parse_hda(text: str) -> Hda:
    text = "\n".join(_strip_comment(l) for l in text.splitlines())
    m = _HDA_RE.match(text.strip())
    if not m:
        raise ParseError("expected: hda NAME { ... }")
    name, body = m.group(1), m.group(2)
    cells: list[Cell] = []
    start: list[str] = []
    accept: list[str] = []
    for stmt in body.split(";"):
        stmt = stmt.strip()
        if not stmt:
            continue
        if stmt.startswith("cell"):
            cells.append(_parse_cell(stmt))
        elif stmt.startswith("start:"):
            start = stmt[len("start:") :].split()
        elif stmt.startswith("accept:"):
            accept = stmt[len("accept:") :].split()
        else:
            raise ParseError(f"unexpected statement {stmt!r}")
    known = {c.name for c in cells}
    for cid in start + accept:
        if cid not in known:
            raise ParseError(f"start/accept references unknown cell {cid!r}")
    return build_hda(cells, start, accept, name=name)


def _parse_cell(stmt: str) -> Cell:
    m = _CELL_RE.match(stmt)
    if not m:
        raise ParseError(f"bad cell statement {stmt!r}")
    name, losettxt, facetxt = m.groups()
    loset = tuple(losettxt.split())
    dim = len(loset)
    lower: list[Optional[str]] = [None] * dim
    upper: list[Optional[str]] = [None] * dim
    consumed = _FACE_RE.sub("", facetxt).strip()
    if consumed:
        raise ParseError(f"cell {name}: unparsed face text {consumed!r}")
    for kind, pos, tgt in _FACE_RE.findall(facetxt):
        i = int(pos) - 1
        if not (0 <= i < dim):
            raise ParseError(f"cell {name}: face position {pos} out of range")
        (lower if kind == "0" else upper)[i] = tgt
    for i in range(dim):
        if lower[i] is None or upper[i] is None:
            raise ParseError(f"cell {name}: missing face at position {i + 1}")
    return Cell(name=name, ev=loset, lower=tuple(lower), upper=tuple(upper))


def hda_to_text(x: Hda) -> str:
    lines = [f"hda {x.name} {{"]
    for c in x.cells.values():
        faces = " ".join(
            f"d0({i + 1})={c.lower[i]} d1({i + 1})={c.upper[i]}" for i in range(c.dim)
        )
        stmt = f"  cell {c.name}: [{' '.join(c.ev)}]"
        if faces:
            stmt += " " + faces
        lines.append(stmt + " ;")
    lines.append("  start: " + " ".join(sorted(x.start)) + " ;")
    lines.append("  accept: " + " ".join(sorted(x.accept)) + " ;")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# DOT


def hda_to_dot(x: Hda) -> str:
    """Vertices and labelled edges; higher cells become shaded clusters with
    a comment block naming their boundary."""
    out = [f"digraph {x.name} {{", "  rankdir=LR;", '  node [shape=circle];']
    for c in sorted(x.cells.values(), key=lambda c: c.name):
        if c.dim != 0:
            continue
        marks = _marks(x, c.name)
        shape = "doublecircle" if c.name in x.accept else "circle"
        out.append(f'  "{c.name}" [shape={shape}, label="{c.name}{marks}"];')
    for c in sorted(x.cells.values(), key=lambda c: c.name):
        if c.dim != 1:
            continue
        label = f"{c.ev[0]} ({c.name}){_marks(x, c.name)}"
        out.append(f'  "{c.lower[0]}" -> "{c.upper[0]}" [label="{label}"];')
    for c in sorted(x.cells.values(), key=lambda c: c.name):
        if c.dim < 2:
            continue
        faces = ", ".join(
            f"d0({i + 1})={c.lower[i]} d1({i + 1})={c.upper[i]}" for i in range(c.dim)
        )
        out.append(f"  // cell {c.name} [{' '.join(c.ev)}]: {faces}")
        if c.dim == 2:
            corners = sorted(
                {
                    composite_face(x, composite_face(x, c.name, k1, [0]), k2, [0])
                    for k1 in (LOWER, UPPER)
                    for k2 in (LOWER, UPPER)
                }
            )
            inner = " ".join(f'"{v}";' for v in corners)
            out.append(
                f"  subgraph cluster_{_dot_id(c.name)} {{ label=\"{c.name}"
                f"{_marks(x, c.name)}\"; style=filled; color=lightgrey; {inner} }}"
            )
    out.append("}")
    return "\n".join(out) + "\n"


def _marks(x: Hda, name: str) -> str:
    return ("" if name not in x.start else " (start)") + (
        "" if name not in x.accept else " (accept)"
    )


def _dot_id(name: str) -> str:
    return re.sub(r"\W", "_", name)


# ---------------------------------------------------------------------------
# interval logs


@dataclass(frozen=True)
class LogRecord:
    event_id: str
    label: str
    begin: Fraction
    end: Fraction
    open_left: bool   # active before the observation started: source event
    open_right: bool  # still active at the end: target event


LOG_HEADER = ["event_id", "label", "begin", "end", "open_left", "open_right"]


def parse_log(text: str) -> list[LogRecord]:
    lines = [l.strip() for l in text.splitlines() if l.strip()]
    if not lines or [c.strip() for c in lines[0].split(",")] != LOG_HEADER:
        raise ParseError(f"log must start with header {','.join(LOG_HEADER)}")
    records = []
    for line in lines[1:]:
        parts = [c.strip() for c in line.split(",")]
        if len(parts) != 6:
            raise ParseError(f"bad log line {line!r}")
        eid, lab, b, e, ol, orr = parts
        records.append(
            LogRecord(
                event_id=eid,
                label=lab,
                begin=_fraction(b),
                end=_fraction(e),
                open_left=_flag(ol),
                open_right=_flag(orr),
            )
        )
    return records


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInterval(f"bad timestamp {text!r}") from exc


def _flag(text: str) -> bool:
    val = text.lower()
    if val in ("true", "1", "yes"):
        return True
    if val in ("false", "0", "no"):
        return False
    raise ParseError(f"bad boolean {text!r}")


def default_tie_break(records: Sequence[LogRecord]) -> list[int]:
    """Event-order rank: ascending begin, then input order."""
    return sorted(range(len(records)), key=lambda i: (records[i].begin, i))


def input_order_tie_break(records: Sequence[LogRecord]) -> list[int]:
    """Event-order rank: the order the records were supplied in."""
    return list(range(len(records)))


TIE_BREAKS = {"begin": default_tie_break, "input": input_order_tie_break}


def ingest_log(
    records: Sequence[LogRecord],
    tie_break: Optional[Callable[[Sequence[LogRecord]], list[int]]] = None,
) -> Ipomset:
    """Turn timestamped activity spans into a canonical ipomset."""
    order = (tie_break or default_tie_break)(records)
    rows = tuple(
        IntervalRow(
            event=records[i].event_id,
            label=records[i].label,
            begin=records[i].begin,
            end=records[i].end,
            left_closed=records[i].open_left,
            right_closed=records[i].open_right,
        )
        for i in order
    )
    return from_intervals(IntervalRep(rows=rows))
