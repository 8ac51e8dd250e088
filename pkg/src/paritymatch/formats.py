"""Text formats.  Everything on disk is 1-based; everything in memory is 0-based.

Graph files::

    # comment
    p cbg <n_left> <n_right> <m>
    e <u> <v> <R|B>

Labelings are bitstrings ``u1..un v1..vn``.
"""

from __future__ import annotations

from pathlib import Path

from .core import Color, ColoredBipartiteGraph, Edge, Labeling, Matching, Parity


class FormatError(ValueError):
    pass


def parse_graph(text: str) -> ColoredBipartiteGraph:
    header = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if header is not None:
                raise FormatError(f"line {lineno}: second header")
            if len(parts) != 5 or parts[1] != "cbg":
                raise FormatError(f"line {lineno}: expected 'p cbg <nl> <nr> <m>'")
            try:
                header = tuple(int(x) for x in parts[2:])
            except ValueError:
                raise FormatError(f"line {lineno}: non-integer header field") from None
        elif parts[0] == "e":
            if header is None:
                raise FormatError(f"line {lineno}: edge before header")
            if len(parts) != 4:
                raise FormatError(f"line {lineno}: expected 'e <u> <v> <R|B>'")
            try:
                u, v = int(parts[1]), int(parts[2])
                color = Color.from_letter(parts[3])
            except ValueError as exc:
                raise FormatError(f"line {lineno}: {exc}") from None
            edges.append(Edge(u - 1, v - 1, color))
        else:
            raise FormatError(f"line {lineno}: unknown record {parts[0]!r}")
    if header is None:
        raise FormatError("missing 'p cbg' header")
    n_left, n_right, m = header
    if m != len(edges):
        raise FormatError(f"header announces {m} edges, found {len(edges)}")
    try:
        return ColoredBipartiteGraph(n_left, n_right, tuple(edges))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_graph(g: ColoredBipartiteGraph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"p cbg {g.n_left} {g.n_right} {len(g.edges)}")
    lines.extend(f"e {e.u + 1} {e.v + 1} {e.color.letter}" for e in g.edges)
    return "\n".join(lines) + "\n"


def read_graph(path: str | Path) -> ColoredBipartiteGraph:
    return parse_graph(Path(path).read_text())


def write_graph(g: ColoredBipartiteGraph, path: str | Path, comment: str | None = None) -> None:
    Path(path).write_text(format_graph(g, comment))


def parse_labeling(s: str, n_left: int | None = None,
                   target: Parity | None = None) -> Labeling:
    s = s.strip()
    if not s or any(ch not in "01" for ch in s):
        raise FormatError(f"labeling must be a nonempty 0/1 string, got {s!r}")
    try:
        return Labeling.from_bitstring(s, n_left, target)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def edge_to_json(e: Edge) -> list:
    return [e.u + 1, e.v + 1, e.color.letter]


def edge_from_json(item) -> Edge:
    u, v, c = item
    return Edge(int(u) - 1, int(v) - 1, Color.from_letter(str(c)))


def matching_to_json(m: Matching) -> list[list]:
    return [edge_to_json(e) for e in m.sorted_edges()]


def matching_from_json(items) -> Matching:
    return Matching.of(edge_from_json(x) for x in items)
