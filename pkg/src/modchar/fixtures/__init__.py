"""Shipped data fixtures: published decomposition and condensation data for
the Harada-Norton group HN and its automorphism group HN.2 at p = 2 and 3.

Files live next to this module in fixtures/*.txt, in a small line-oriented
format (see parse_fixture).  Entries "." mean 0.  Every matrix fixture is
validated by the test suite against its stated degrees.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field

from ..errors import FormatError


@dataclass(frozen=True)
class Fixture:
    name: str
    kind: str
    meta: dict[str, str]
    row_labels: tuple[str, ...] = ()
    row_degrees: tuple[int, ...] = ()
    row_extra: tuple[tuple[str, ...], ...] = ()
    matrix: tuple[tuple[int, ...], ...] = ()
    col_labels: tuple[str, ...] = ()
    col_degrees: tuple[int, ...] = ()
    basic_rows: tuple[str, ...] = ()
    col_pairs: tuple[tuple[int, int], ...] = ()
    indecomposable: tuple[bool, ...] = ()
    sections: dict[str, tuple] = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.matrix)

    @property
    def l(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def basic_row_indices(self) -> tuple[int, ...]:
        out = []
        for lbl in self.basic_rows:
            out.append(self.row_labels.index(lbl))
        return tuple(out)

    def meta_int(self, key: str) -> int:
        return int(self.meta[key])


def _parse_entries(tokens):
    out = []
    for t in tokens:
        if t == ".":
            out.append(0)
        else:
            out.append(int(t))
    return tuple(out)


def parse_fixture(text: str) -> Fixture:
    name = ""
    kind = ""
    meta: dict[str, str] = {}
    row_labels: list[str] = []
    row_degrees: list[int] = []
    row_extra: list[tuple[str, ...]] = []
    matrix: list[tuple[int, ...]] = []
    col_labels: tuple[str, ...] = ()
    col_degrees: tuple[int, ...] = ()
    basic_rows: tuple[str, ...] = ()
    col_pairs: list[tuple[int, int]] = []
    indec: tuple[bool, ...] = ()
    sections: dict[str, list] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]
        if head == "FIXTURE":
            name = tokens[1]
        elif head == "kind":
            kind = tokens[1]
        elif head == "meta":
            meta[tokens[1]] = " ".join(tokens[2:])
        elif head == "collabels":
            col_labels = tuple(tokens[1:])
        elif head == "coldegrees":
            col_degrees = _parse_entries(tokens[1:])
        elif head == "basicrows":
            basic_rows = tuple(tokens[1:])
        elif head == "colpairs":
            for pair in tokens[1:]:
                a, b = pair.split(":")
                col_pairs.append((int(a) - 1, int(b) - 1))
        elif head == "indecomposable":
            indec = tuple(t == "x" for t in tokens[1:])
        elif head == "row":
            if ":" not in tokens:
                raise FormatError(f"row without entry separator: {line}")
            sep = tokens.index(":")
            labels = tokens[1:sep]
            entries = _parse_entries(tokens[sep + 1 :])
            row_labels.append(labels[0])
            deg = 0
            extra = []
            if len(labels) > 1:
                try:
                    deg = int(labels[1])
                    extra = labels[2:]
                except ValueError:
                    extra = labels[1:]
            row_degrees.append(deg)
            row_extra.append(tuple(extra))
            matrix.append(entries)
        elif head == "sline":
            # sline <section> <payload...>
            sections.setdefault(tokens[1], []).append(tuple(tokens[2:]))
        else:
            raise FormatError(f"unknown directive {head!r}")
    widths = {len(r) for r in matrix}
    if len(widths) > 1:
        raise FormatError(f"ragged matrix in fixture {name}: widths {sorted(widths)}")
    return Fixture(
        name=name,
        kind=kind,
        meta=meta,
        row_labels=tuple(row_labels),
        row_degrees=tuple(row_degrees),
        row_extra=tuple(row_extra),
        matrix=tuple(matrix),
        col_labels=col_labels,
        col_degrees=col_degrees,
        basic_rows=basic_rows,
        col_pairs=tuple(col_pairs),
        indecomposable=indec,
        sections={k: tuple(v) for k, v in sections.items()},
    )


def _fixture_dir():
    return importlib.resources.files("modchar.fixtures")


def list_fixtures() -> list[str]:
    out = []
    for entry in _fixture_dir().iterdir():
        if entry.name.endswith(".txt"):
            out.append(entry.name[:-4])
    return sorted(out)


def load(name: str) -> Fixture:
    path = _fixture_dir() / f"{name}.txt"
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise FormatError(f"no fixture named {name!r}") from None
    fx = parse_fixture(text)
    return fx


def fixture_text(name: str) -> str:
    path = _fixture_dir() / f"{name}.txt"
    try:
        return path.read_text()
    except FileNotFoundError:
        raise FormatError(f"no fixture named {name!r}") from None
