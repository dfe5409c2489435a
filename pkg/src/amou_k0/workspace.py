"""Text workspaces: named algebras, elements and morphisms.

::

    # comment
    algebra A blocks = [1, 2]
    element p in A level (1,1) block 2 = [[1+0i, 0+0i],
                                          [0+0i, 0+0i]]
    morphism phi : A -> B mult = [[1, 0], [0, 2]] conj 1 = [[1+0i]]

Lines that start with whitespace continue the previous record.  Element
blocks that are never given are zero; missing conjugators are identities.
Numbers are written with 17 significant digits so a written workspace parses
back bit for bit.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .amou import AElement, Algebra
from .errors import AmouError, ParseError, UnknownName
from .morphisms import MorphismSpec

_NAME = r"([A-Za-z_][\w']*)"
_ALGEBRA = re.compile(rf"algebra\s+{_NAME}\s+blocks\s*=\s*(\[.*\])\s*$", re.S)
_ELEMENT = re.compile(
    rf"element\s+{_NAME}\s+in\s+{_NAME}\s+level\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s+block\s+(\d+)\s*=\s*(\[.*\])\s*$", re.S
)
_MORPHISM = re.compile(
    rf"morphism\s+{_NAME}\s*:\s*{_NAME}\s*->\s*{_NAME}\s+mult\s*=\s*(\[\s*\[.*?\]\s*\])((?:\s+conj\s+\d+\s*=\s*\[\s*\[.*?\]\s*\])*)\s*$",
    re.S,
)
_CONJ = re.compile(r"conj\s+(\d+)\s*=\s*(\[\s*\[.*?\]\s*\])", re.S)
_TOKEN = re.compile(r"\s*(\[|\]|,|[^\[\],]+)")


def _nested(text: str) -> list:
    """Nested bracket lists of raw entry strings."""
    tokens = [t.strip() for t in _TOKEN.findall(text)]
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of list")
        tok = tokens[pos]
        pos += 1
        if tok != "[":
            return tok
        out = []
        if pos < len(tokens) and tokens[pos] == "]":
            pos += 1
            return out
        while True:
            out.append(parse())
            if pos >= len(tokens):
                raise ParseError("unclosed '['")
            sep = tokens[pos]
            pos += 1
            if sep == "]":
                return out
            if sep != ",":
                raise ParseError(f"expected ',' or ']', got {sep!r}")

    value = parse()
    if pos != len(tokens):
        raise ParseError(f"trailing text after list: {''.join(tokens[pos:])!r}")
    return value


def parse_complex(token: str) -> complex:
    """``a+bi``, ``a-bi``, ``a`` or ``bi`` with decimal floats."""
    compact = "".join(token.split())
    if "j" in compact.lower():
        raise ParseError(f"bad complex literal {token!r}: the imaginary unit is written i")
    if compact.endswith("i"):
        compact = compact[:-1] + "j"
    try:
        return complex(compact)
    except ValueError:
        raise ParseError(f"bad complex literal {token!r}") from None


def parse_matrix(text: str) -> np.ndarray:
    rows = _nested(text)
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ParseError(f"expected a nonempty list of rows, got {text.strip()!r}")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ParseError("rows have different lengths")
    if any(isinstance(x, list) for r in rows for x in r):
        raise ParseError("matrix entries must be scalars")
    return np.array([[parse_complex(x) for x in r] for r in rows], dtype=np.complex128).reshape(len(rows), width)


def _parse_ints(text: str) -> list:
    def conv(x):
        if isinstance(x, list):
            return [conv(y) for y in x]
        try:
            return int(x)
        except ValueError:
            raise ParseError(f"expected an integer, got {x!r}") from None

    return conv(_nested(text))


def _real(x: float) -> str:
    return format(x, ".17g")


def format_complex(z: complex) -> str:
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{_real(z.real)}{sign}{_real(abs(z.imag))}i"


def format_matrix(m: np.ndarray, indent: str = "") -> str:
    rows = ["[" + ", ".join(format_complex(complex(z)) for z in row) + "]" for row in np.asarray(m)]
    return "[" + (",\n" + indent + " ").join(rows) + "]"


@dataclass
class Workspace:
    algebras: dict[str, Algebra] = field(default_factory=dict)
    elements: dict[str, tuple[str, AElement]] = field(default_factory=dict)
    morphisms: dict[str, tuple[str, str, MorphismSpec]] = field(default_factory=dict)

    def algebra(self, name: str) -> Algebra:
        if name not in self.algebras:
            raise UnknownName(f"no algebra named {name!r}")
        return self.algebras[name]

    def element(self, name: str) -> AElement:
        if name not in self.elements:
            raise UnknownName(f"no element named {name!r}")
        return self.elements[name][1]

    def morphism(self, name: str) -> MorphismSpec:
        if name not in self.morphisms:
            raise UnknownName(f"no morphism named {name!r}")
        return self.morphisms[name][2]

    def algebra_name(self, alg: Algebra) -> str:
        for name, a in self.algebras.items():
            if a == alg:
                return name
        raise UnknownName(f"{alg} is not a named algebra")

    def add_algebra(self, name: str, alg: Algebra) -> None:
        self.algebras[name] = alg

    def add_element(self, name: str, algebra: str, v: AElement) -> None:
        if self.algebra(algebra) != v.algebra:
            raise ParseError(f"element {name} is not over {algebra}")
        self.elements[name] = (algebra, v)

    def add_morphism(self, name: str, source: str, target: str, phi: MorphismSpec) -> None:
        if self.algebra(source) != phi.source or self.algebra(target) != phi.target:
            raise ParseError(f"morphism {name} does not map {source} to {target}")
        self.morphisms[name] = (source, target, phi)

    # -- text form ---------------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> Workspace:
        ws = cls()
        pending: dict[str, dict] = {}
        for lineno, record in _records(text):
            try:
                ws._apply(record, pending)
            except UnknownName:
                raise
            except ParseError as exc:
                raise ParseError(f"line {lineno}: {exc}") from None
            except (AmouError, ValueError) as exc:
                raise ParseError(f"line {lineno}: {exc}") from None
        for name, item in pending.items():
            alg = ws.algebra(item["algebra"])
            m, n = item["level"]
            blocks = [
                item["blocks"].get(i, np.zeros((m * s, n * s), dtype=np.complex128))
                for i, s in enumerate(alg.block_sizes)
            ]
            try:
                ws.elements[name] = (item["algebra"], AElement(alg, (m, n), tuple(blocks)))
            except AmouError as exc:
                raise ParseError(f"element {name}: {exc}") from None
        return ws

    def _apply(self, record: str, pending: dict) -> None:
        head = record.split(None, 1)[0] if record.split() else ""
        if head == "algebra":
            match = _ALGEBRA.match(record)
            if not match:
                raise ParseError(f"malformed algebra record: {record!r}")
            sizes = _parse_ints(match.group(2))
            if not isinstance(sizes, list) or any(isinstance(s, list) for s in sizes):
                raise ParseError("blocks must be a flat list of integers")
            self.add_algebra(match.group(1), Algebra(tuple(sizes)))
        elif head == "element":
            match = _ELEMENT.match(record)
            if not match:
                raise ParseError(f"malformed element record: {record!r}")
            name, algebra, m, n, block, body = match.groups()
            alg = self.algebra(algebra)
            level, block = (int(m), int(n)), int(block)
            if not 1 <= block <= alg.k:
                raise ParseError(f"block {block} out of range for {algebra} with {alg.k} blocks")
            item = pending.setdefault(name, {"algebra": algebra, "level": level, "blocks": {}})
            if item["algebra"] != algebra or item["level"] != level:
                raise ParseError(f"element {name} redefined with a different algebra or level")
            if block - 1 in item["blocks"]:
                raise ParseError(f"element {name} block {block} given twice")
            item["blocks"][block - 1] = parse_matrix(body)
        elif head == "morphism":
            match = _MORPHISM.match(record)
            if not match:
                raise ParseError(f"malformed morphism record: {record!r}")
            name, src, dst, mult, rest = match.groups()
            source, target = self.algebra(src), self.algebra(dst)
            conj = [np.eye(m, dtype=np.complex128) for m in target.block_sizes]
            for j, body in _CONJ.findall(rest):
                j = int(j)
                if not 1 <= j <= target.k:
                    raise ParseError(f"conj {j} out of range for {dst} with {target.k} blocks")
                conj[j - 1] = parse_matrix(body)
            mult = np.array(_parse_ints(mult), dtype=np.int64)
            self.add_morphism(name, src, dst, MorphismSpec(source, target, mult, tuple(conj)))
        else:
            raise ParseError(f"unknown record type {head!r}")

    @classmethod
    def load(cls, path: str | Path) -> Workspace:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ParseError(f"cannot read workspace {path}: {exc.strerror}") from None
        return cls.parse(text)

    def dumps(self) -> str:
        lines = []
        for name, alg in self.algebras.items():
            lines.append(f"algebra {name} blocks = [{', '.join(str(n) for n in alg.block_sizes)}]")
        for name, (algebra, v) in self.elements.items():
            m, n = v.level
            for i, b in enumerate(v.blocks, start=1):
                head = f"element {name} in {algebra} level ({m},{n}) block {i} = "
                lines.append(head + format_matrix(b, " " * len(head)))
        for name, (src, dst, phi) in self.morphisms.items():
            rows = ", ".join("[" + ", ".join(str(int(x)) for x in row) + "]" for row in phi.multiplicity)
            parts = [f"morphism {name} : {src} -> {dst} mult = [{rows}]"]
            for j, u in enumerate(phi.conjugators, start=1):
                parts.append(f"  conj {j} = {format_matrix(u, '             ')}")
            lines.append("\n".join(parts))
        return "\n".join(lines) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps())


def _records(text: str):
    """(first line number, joined text) per record; comments and blanks dropped."""
    current, start = None, 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line[0].isspace():
            if current is None:
                raise ParseError(f"line {lineno}: continuation line without a record")
            current += " " + line.strip()
            continue
        if current is not None:
            yield start, current
        current, start = line.strip(), lineno
    if current is not None:
        yield start, current
