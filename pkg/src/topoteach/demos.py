"""Demonstrations: sequences (and sequences of sequences) of labelled points.

A learner reading a demonstration joins consecutive points of a sequence by
curves, joins consecutive sequences of a sequence-of-sequences by strips of
quads, and never draws two curves between the same pair of points. The
result is a purely combinatorial 2-complex; coordinates are never read.

Text format, one statement per line (``#`` starts a comment)::

    point a1 0.0 1.0
    seq a b c a
    sos { seq a1 a2 a3 a1; seq b1 b2 b3 b1; }
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from .complex import SimplicialComplex


class DemoFormatError(ValueError):
    """Malformed demonstration text; ``lineno`` is 1-based."""

    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


@dataclass(frozen=True)
class PointSequence:
    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        if not self.labels:
            raise ValueError("a sequence needs at least one point")

    def __len__(self):
        return len(self.labels)


@dataclass(frozen=True)
class SequenceOfSequences:
    sequences: tuple[PointSequence, ...]

    def __post_init__(self):
        seqs = tuple(s if isinstance(s, PointSequence) else PointSequence(tuple(s)) for s in self.sequences)
        object.__setattr__(self, "sequences", seqs)
        if not seqs:
            raise ValueError("a sequence of sequences needs at least one sequence")
        lengths = {len(s) for s in seqs}
        if len(lengths) != 1:
            raise ValueError(f"member sequences must share one length, got {sorted(lengths)}")


DemoItem = Union[PointSequence, SequenceOfSequences]


@dataclass
class DemonstrationSet:
    items: list[DemoItem] = field(default_factory=list)
    points: dict[str, tuple[float, ...] | None] = field(default_factory=dict)

    def __post_init__(self):
        for label in self.labels():
            self.points.setdefault(label, None)

    def labels(self) -> list[str]:
        seen: dict[str, None] = {}
        for item in self.items:
            seqs = item.sequences if isinstance(item, SequenceOfSequences) else (item,)
            for s in seqs:
                seen.update(dict.fromkeys(s.labels))
        return list(seen)

    @classmethod
    def of(cls, *items) -> "DemonstrationSet":
        """Build from nested lists: a flat list is a sequence, a list of lists a sequence of sequences."""
        out = []
        for it in items:
            if it and isinstance(it[0], (list, tuple)):
                out.append(SequenceOfSequences(tuple(PointSequence(tuple(s)) for s in it)))
            else:
                out.append(PointSequence(tuple(it)))
        return cls(out)


@dataclass(frozen=True)
class DemoComplex:
    vertices: frozenset
    edges: frozenset
    triangles: frozenset

    @property
    def V(self) -> int:
        return len(self.vertices)

    @property
    def E(self) -> int:
        return len(self.edges)

    @property
    def F(self) -> int:
        return len(self.triangles)

    def euler_characteristic(self) -> int:
        return self.V - self.E + self.F

    def as_complex(self) -> SimplicialComplex:
        return SimplicialComplex({
            0: sorted((v,) for v in self.vertices),
            1: sorted(self.edges),
            2: sorted(self.triangles),
        })


def _key(*labels):
    return tuple(sorted(labels))


def build_demo_complex(demo: DemonstrationSet) -> DemoComplex:
    vertices: set = set()
    edges: set = set()
    triangles: set = set()

    def trace(seq: PointSequence):
        vertices.update(seq.labels)
        for a, b in zip(seq.labels, seq.labels[1:]):
            if a != b:
                edges.add(_key(a, b))

    for item in demo.items:
        if isinstance(item, PointSequence):
            trace(item)
            continue
        for seq in item.sequences:
            trace(seq)
        for s, t in zip(item.sequences, item.sequences[1:]):
            s, t = s.labels, t.labels
            for a, b in zip(s, t):
                if a != b:
                    edges.add(_key(a, b))
            # quad (s[i], s[i+1], t[i+1], t[i]) split along s[i]--t[i+1]
            for i in range(len(s) - 1):
                if s[i] != t[i + 1]:
                    edges.add(_key(s[i], t[i + 1]))
                for tri in ((s[i], s[i + 1], t[i + 1]), (s[i], t[i + 1], t[i])):
                    if len(set(tri)) == 3:
                        triangles.add(_key(*tri))
    return DemoComplex(frozenset(vertices), frozenset(edges), frozenset(triangles))


# --------------------------------------------------------------------------
# text format

_TOKEN = re.compile(r"[{};]|[^\s{};]+")


def parse_demo(text: str) -> DemonstrationSet:
    points: dict[str, tuple[float, ...] | None] = {}
    items: list[DemoItem] = []
    in_sos: list[PointSequence] | None = None
    sos_line = 0

    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = _TOKEN.findall(raw.split("#", 1)[0])
        i = 0
        while i < len(toks):
            tok = toks[i]
            if tok == ";":
                i += 1
            elif tok == "point":
                if in_sos is not None:
                    raise DemoFormatError(lineno, "'point' inside 'sos' block")
                rest = toks[i + 1:]
                if not rest or any(t in "{};" for t in rest):
                    raise DemoFormatError(lineno, "expected 'point <label> [x y [z]]'")
                label, coords = rest[0], rest[1:]
                if len(coords) not in (0, 2, 3):
                    raise DemoFormatError(lineno, f"point {label!r} needs 0, 2 or 3 coordinates")
                try:
                    points[label] = tuple(float(c) for c in coords) or None
                except ValueError:
                    raise DemoFormatError(lineno, f"bad coordinate in point {label!r}") from None
                i = len(toks)
            elif tok == "seq":
                j = i + 1
                while j < len(toks) and toks[j] not in ("{", "}", ";"):
                    j += 1
                if j == i + 1:
                    raise DemoFormatError(lineno, "empty 'seq'")
                seq = PointSequence(tuple(toks[i + 1:j]))
                if in_sos is None:
                    items.append(seq)
                else:
                    in_sos.append(seq)
                i = j
            elif tok == "sos":
                if in_sos is not None:
                    raise DemoFormatError(lineno, "nested 'sos'")
                if i + 1 >= len(toks) or toks[i + 1] != "{":
                    raise DemoFormatError(lineno, "expected '{' after 'sos'")
                in_sos, sos_line = [], lineno
                i += 2
            elif tok == "}":
                if in_sos is None:
                    raise DemoFormatError(lineno, "unmatched '}'")
                try:
                    items.append(SequenceOfSequences(tuple(in_sos)))
                except ValueError as exc:
                    raise DemoFormatError(lineno, str(exc)) from None
                in_sos = None
                i += 1
            else:
                raise DemoFormatError(lineno, f"unexpected token {tok!r}")
    if in_sos is not None:
        raise DemoFormatError(sos_line, "unterminated 'sos' block")
    return DemonstrationSet(items, points)


def format_demo(demo: DemonstrationSet) -> str:
    lines = []
    for label, xy in demo.points.items():
        coords = "" if xy is None else " " + " ".join(f"{c:.17g}" for c in xy)
        lines.append(f"point {label}{coords}")
    for item in demo.items:
        if isinstance(item, PointSequence):
            lines.append("seq " + " ".join(item.labels))
        else:
            body = " ".join("seq " + " ".join(s.labels) + ";" for s in item.sequences)
            lines.append("sos { " + body + " }")
    return "\n".join(lines) + "\n"
