"""Edge-list text formats.

Graph files: first non-comment line ``n m``, then ``m`` lines ``u v``.
Shortcut/spanner files: ``u v`` lines only. ``#`` starts a comment line.
Writers always end with a newline.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .errors import GraphInputError
from .graph import DiGraph, Edge


def _data_lines(text: str) -> list[str]:
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def _parse_pair(line: str) -> Edge:
    parts = line.split()
    if len(parts) != 2:
        raise GraphInputError(f"expected 'u v', got {line!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise GraphInputError(f"non-integer vertex in {line!r}") from exc


def parse_graph(text: str) -> DiGraph:
    lines = _data_lines(text)
    if not lines:
        raise GraphInputError("missing 'n m' header")
    n, m = _parse_pair(lines[0])
    body = lines[1:]
    if len(body) != m:
        raise GraphInputError(f"header announces {m} edges, found {len(body)}")
    return DiGraph(n, [_parse_pair(ln) for ln in body])


def format_graph(g: DiGraph) -> str:
    out = [f"{g.n} {g.m}"]
    out.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(out) + "\n"


def parse_edges(text: str) -> list[Edge]:
    return [_parse_pair(ln) for ln in _data_lines(text)]


def format_edges(edges: Iterable[Edge]) -> str:
    return "".join(f"{u} {v}\n" for u, v in sorted(edges))


def read_graph(path: str | Path) -> DiGraph:
    return parse_graph(Path(path).read_text(encoding="ascii"))


def write_graph(path: str | Path, g: DiGraph) -> None:
    Path(path).write_text(format_graph(g), encoding="ascii", newline="\n")


def read_edges(path: str | Path) -> list[Edge]:
    return parse_edges(Path(path).read_text(encoding="ascii"))


def write_edges(path: str | Path, edges: Iterable[Edge]) -> None:
    Path(path).write_text(format_edges(edges), encoding="ascii", newline="\n")


def write_names(path: str | Path, names: dict[int, str]) -> None:
    text = "".join(f"{i} {names[i]}\n" for i in sorted(names))
    Path(path).write_text(text, encoding="ascii", newline="\n")


def read_names(path: str | Path) -> dict[int, str]:
    names = {}
    for ln in _data_lines(Path(path).read_text(encoding="ascii")):
        idx, name = ln.split(maxsplit=1)
        names[int(idx)] = name
    return names
