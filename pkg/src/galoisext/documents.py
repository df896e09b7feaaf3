"""Text documents for algebras, morphisms, squares, towers and congruences.

A document file is JSON holding one document object or a list of them.
Every document has ``type`` and a ``name`` unique within the workspace::

    {"type": "algebra", "name": "Z4", "size": 4, "kind": "group",
     "signature": [["mul", 2], ["inv", 1], ["e", 0]],
     "tables": [[[0, 1, 2, 3], ...], [0, 3, 2, 1], 0]}
    {"type": "morphism", "name": "mod2", "source": "Z4", "target": "Z2", "map": [0, 1, 0, 1]}
    {"type": "square", "name": "sq", "f_prime": "...", "a": "...", "b": "...", "f": "..."}
    {"type": "tower", "name": "t", "depth": 2, "root": "sq"}
    {"type": "congruence", "name": "theta", "algebra": "Z4", "blocks": [0, 1, 0, 1]}

Tables are row-major nested arrays; nullary tables are plain integers.
Square edges are names of morphisms or squares, or nested documents.
Emitted constructions carry a ``provenance`` string naming the stage that
produced them.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .algebra import (
    AlgebraError,
    Congruence,
    FiniteAlgebra,
    Homomorphism,
    compatibility_violation,
    homomorphism_violation,
    validate_algebra,
)
from .category import ExtSquare, category_of, tower_depth
from .varieties import group_axiom_violations, ring_axiom_violations

KINDS = ("group", "ring", "generic")
TYPES = ("algebra", "morphism", "square", "tower", "congruence")


class DocumentError(AlgebraError):
    """A document that cannot be parsed or does not validate."""


@dataclass
class Workspace:
    algebras: dict[str, FiniteAlgebra] = field(default_factory=dict)
    morphisms: dict[str, Homomorphism] = field(default_factory=dict)
    squares: dict[str, ExtSquare] = field(default_factory=dict)
    towers: dict[str, object] = field(default_factory=dict)
    congruences: dict[str, Congruence] = field(default_factory=dict)
    provenance: dict[str, str] = field(default_factory=dict)
    # morphism name -> (source name, target name) as written in its document
    endpoints: dict[str, tuple[str, str]] = field(default_factory=dict)

    def names(self) -> set[str]:
        return (set(self.algebras) | set(self.morphisms) | set(self.squares) | set(self.towers)
                | set(self.congruences))

    def get(self, name: str):
        for table in (self.algebras, self.morphisms, self.squares, self.towers, self.congruences):
            if name in table:
                return table[name]
        raise DocumentError(f"unknown name {name!r}")

    def arrow(self, name: str):
        if name in self.morphisms:
            return self.morphisms[name]
        if name in self.squares:
            return self.squares[name]
        if name in self.towers:
            return self.towers[name]
        raise DocumentError(f"{name!r} is not a morphism, square or tower")


# ---------------------------------------------------------------------------
# parsing


def _line_of(text: str, name: str) -> int | None:
    m = re.search(r'"name"\s*:\s*' + re.escape(json.dumps(name)), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _where(origin: str, text: str, name) -> str:
    line = _line_of(text, name) if isinstance(name, str) else None
    return f"{origin}:{line}" if line else origin


def _load_text(text: str, origin: str) -> list[dict]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{origin}:{exc.lineno}:{exc.colno}: parse error: {exc.msg}") from None
    docs = data if isinstance(data, list) else [data]
    for d in docs:
        if not isinstance(d, dict):
            raise DocumentError(f"{origin}: every document must be an object, got {type(d).__name__}")
    return docs


def _table_array(raw, arity: int, label: str) -> np.ndarray:
    if arity == 0:
        if isinstance(raw, list):
            if len(raw) != 1:
                raise DocumentError(f"{label}: nullary table must hold one entry")
            raw = raw[0]
        if not isinstance(raw, int):
            raise DocumentError(f"{label}: nullary table must be an integer")
        return np.array([raw], dtype=np.int64)
    try:
        return np.array(raw, dtype=np.int64).ravel()
    except (ValueError, TypeError):
        raise DocumentError(f"{label}: table is not a rectangular integer array") from None


def algebra_from_document(doc: dict, where: str = "<document>") -> FiniteAlgebra:
    name = doc.get("name")
    for key in ("name", "size", "signature", "tables"):
        if key not in doc:
            raise DocumentError(f"{where}: algebra {name!r} is missing field {key!r}")
    kind = doc.get("kind", "generic")
    if kind not in KINDS:
        raise DocumentError(f"{where}: algebra {name!r} has unknown kind {kind!r}")
    try:
        signature = tuple((str(s), int(k)) for s, k in doc["signature"])
    except (TypeError, ValueError):
        raise DocumentError(f"{where}: algebra {name!r} has a malformed signature") from None
    if len(doc["tables"]) != len(signature):
        raise DocumentError(f"{where}: algebra {name!r} declares {len(signature)} operations "
                            f"but gives {len(doc['tables'])} tables")
    tables = tuple(_table_array(raw, k, f"{where}: {name}.{s}") for (s, k), raw in zip(signature, doc["tables"]))
    A = FiniteAlgebra(name, int(doc["size"]), signature, tables, kind)
    problems = validate_algebra(A)
    if not problems and kind == "group":
        problems = group_axiom_violations(A)
    if not problems and kind == "ring":
        problems = ring_axiom_violations(A)
    if problems:
        raise DocumentError(f"{where}: algebra {name!r} is invalid: " + "; ".join(problems))
    return A


class _Resolver:
    def __init__(self, ws: Workspace, pending: dict[str, tuple[dict, str]]):
        self.ws = ws
        self.pending = pending
        self.active: set[str] = set()

    def algebra(self, ref, where: str) -> FiniteAlgebra:
        if isinstance(ref, dict):
            return algebra_from_document(ref, where)
        if ref not in self.ws.algebras:
            raise DocumentError(f"{where}: dangling reference to algebra {ref!r}")
        return self.ws.algebras[ref]

    def arrow(self, ref, where: str):
        if isinstance(ref, dict):
            return self.build(ref, where)
        if not isinstance(ref, str):
            raise DocumentError(f"{where}: expected a name or a nested document, got {ref!r}")
        for table in (self.ws.morphisms, self.ws.squares, self.ws.towers):
            if ref in table:
                return table[ref]
        if ref in self.pending:
            if ref in self.active:
                raise DocumentError(f"{where}: circular reference through {ref!r}")
            doc, origin = self.pending[ref]
            self.active.add(ref)
            obj = self.build(doc, origin)
            self.active.discard(ref)
            return obj
        raise DocumentError(f"{where}: dangling reference to {ref!r}")

    def build(self, doc: dict, where: str):
        kind = doc.get("type")
        name = doc.get("name")
        if kind == "morphism":
            for key in ("source", "target", "map"):
                if key not in doc:
                    raise DocumentError(f"{where}: morphism {name!r} is missing field {key!r}")
            src = self.algebra(doc["source"], where)
            tgt = self.algebra(doc["target"], where)
            m = np.asarray(doc["map"], dtype=np.int64).ravel()
            if len(m) != src.size or (len(m) and (m.min() < 0 or m.max() >= tgt.size)):
                raise DocumentError(f"{where}: morphism {name!r} map must have {src.size} entries in "
                                    f"[0, {tgt.size})")
            if src.signature != tgt.signature:
                raise DocumentError(f"{where}: morphism {name!r} joins algebras of different signatures")
            f = Homomorphism(src, tgt, m)
            bad = homomorphism_violation(f)
            if bad is not None:
                raise DocumentError(f"{where}: morphism {name!r} does not preserve {bad[0]!r} at {bad[1]}")
            self._store(self.ws.morphisms, name, f, doc, where)
            if isinstance(name, str) and isinstance(doc["source"], str) and isinstance(doc["target"], str):
                self.ws.endpoints.setdefault(name, (doc["source"], doc["target"]))
            return f
        if kind == "square":
            parts = {}
            for key in ("f_prime", "a", "b", "f"):
                if key not in doc:
                    raise DocumentError(f"{where}: square {name!r} is missing field {key!r}")
                parts[key] = self.arrow(doc[key], where)
            sq = ExtSquare(parts["f_prime"], parts["f"], parts["a"], parts["b"])
            try:
                C = category_of(sq)
                ok = C.commutes(sq)
            except AlgebraError as exc:
                raise DocumentError(f"{where}: square {name!r} is malformed: {exc}") from None
            if not ok:
                raise DocumentError(f"{where}: square {name!r} does not commute")
            self._store(self.ws.squares, name, sq, doc, where)
            return sq
        if kind == "tower":
            if "root" not in doc:
                raise DocumentError(f"{where}: tower {name!r} is missing field 'root'")
            t = self.arrow(doc["root"], where)
            depth = doc.get("depth")
            if depth is not None and tower_depth(t) != int(depth):
                raise DocumentError(f"{where}: tower {name!r} declares depth {depth}, found {tower_depth(t)}")
            self._store(self.ws.towers, name, t, doc, where)
            return t
        raise DocumentError(f"{where}: cannot build a {kind!r} here")

    def _store(self, table: dict, name, obj, doc: dict, where: str) -> None:
        if name is None:
            return
        if name in table and table[name] is not obj:
            return
        table[name] = obj
        if "provenance" in doc:
            self.ws.provenance[name] = str(doc["provenance"])


def parse_texts(sources: Iterable[tuple[str, str]]) -> Workspace:
    """Resolve documents from ``(origin, text)`` pairs into a validated workspace."""
    ws = Workspace()
    entries: list[tuple[dict, str]] = []
    seen: dict[str, str] = {}
    for origin, text in sources:
        for doc in _load_text(text, origin):
            kind = doc.get("type")
            name = doc.get("name")
            where = _where(origin, text, name)
            if kind not in TYPES:
                raise DocumentError(f"{where}: unknown document type {kind!r}")
            if not isinstance(name, str) or not name:
                raise DocumentError(f"{where}: every {kind} document needs a non-empty name")
            if name in seen:
                raise DocumentError(f"{where}: duplicate name {name!r} (first defined at {seen[name]})")
            seen[name] = where
            entries.append((doc, where))
    for doc, where in entries:
        if doc["type"] == "algebra":
            ws.algebras[doc["name"]] = algebra_from_document(doc, where)
            if "provenance" in doc:
                ws.provenance[doc["name"]] = str(doc["provenance"])
    pending = {doc["name"]: (doc, where) for doc, where in entries if doc["type"] in ("morphism", "square", "tower")}
    resolver = _Resolver(ws, pending)
    for doc, where in entries:
        if doc["type"] in ("morphism", "square", "tower"):
            resolver.arrow(doc["name"], where)
    for doc, where in entries:
        if doc["type"] == "congruence":
            A = resolver.algebra(doc.get("algebra"), where)
            blocks = np.asarray(doc.get("blocks", []), dtype=np.int64)
            if len(blocks) != A.size:
                raise DocumentError(f"{where}: congruence {doc['name']!r} needs {A.size} block ids")
            theta = Congruence(A, blocks)
            bad = compatibility_violation(theta)
            if bad is not None:
                raise DocumentError(f"{where}: partition {doc['name']!r} is not compatible with "
                                    f"{bad[0]!r} at {bad[1]}")
            ws.congruences[doc["name"]] = theta
    return ws


def parse_documents(paths: Iterable[str | Path]) -> Workspace:
    sources = []
    for p in paths:
        p = Path(p)
        try:
            sources.append((str(p), p.read_text()))
        except OSError as exc:
            raise DocumentError(f"{p}: cannot read: {exc.strerror}") from None
    return parse_texts(sources)


# ---------------------------------------------------------------------------
# emitting


def algebra_document(A: FiniteAlgebra, name: str | None = None, provenance: str | None = None) -> dict:
    tables = []
    for i, (_, k) in enumerate(A.signature):
        tables.append(int(A.tables[i][0]) if k == 0 else A.table(i).tolist())
    doc = {"type": "algebra", "name": name or A.name, "size": A.size, "kind": A.kind,
           "signature": [[s, k] for s, k in A.signature], "tables": tables}
    if provenance:
        doc["provenance"] = provenance
    return doc


def morphism_document(f: Homomorphism, name: str, source: str, target: str, provenance: str | None = None) -> dict:
    doc = {"type": "morphism", "name": name, "source": source, "target": target, "map": f.map.tolist()}
    if provenance:
        doc["provenance"] = provenance
    return doc


def congruence_document(theta: Congruence, name: str, algebra: str) -> dict:
    return {"type": "congruence", "name": name, "algebra": algebra, "blocks": theta.blocks.tolist()}


def _is_flat(value) -> bool:
    return isinstance(value, list) and all(not isinstance(v, (list, dict)) for v in value)


def _render(value, indent: int) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f'{pad}  {json.dumps(k)}: {_render(value[k], indent + 1)}' for k in sorted(value)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, list):
        if _is_flat(value):
            return "[" + ", ".join(json.dumps(v) for v in value) + "]"
        items = [pad + "  " + _render(v, indent + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(value)


def emit_documents(docs: list[dict]) -> str:
    """Canonical text: sorted keys, one innermost table row per line, trailing newline."""
    return _render(docs if len(docs) != 1 else docs[0], 0) + "\n"


def canonicalize(text: str) -> str:
    docs = _load_text(text, "<text>")
    return emit_documents(docs)


def workspace_documents(ws: Workspace) -> list[dict]:
    """Documents for everything in a workspace; edges are referenced by name."""
    docs = []
    names = {A.key: n for n, A in ws.algebras.items()}
    arrows = {}
    for table in (ws.morphisms, ws.squares):
        for n in sorted(table):
            arrows.setdefault(table[n].key, n)

    def extra(n: str) -> dict:
        return {"provenance": ws.provenance[n]} if n in ws.provenance else {}

    for n in sorted(ws.algebras):
        docs.append(algebra_document(ws.algebras[n], n, ws.provenance.get(n)))
    for n in sorted(ws.morphisms):
        f = ws.morphisms[n]
        src, tgt = ws.endpoints.get(n, (names[f.source.key], names[f.target.key]))
        docs.append(morphism_document(f, n, src, tgt, ws.provenance.get(n)))
    for n in sorted(ws.squares):
        sq = ws.squares[n]
        doc = {"type": "square", "name": n}
        for key, edge in (("f_prime", sq.source), ("a", sq.top), ("b", sq.bottom), ("f", sq.target)):
            doc[key] = arrows[edge.key]
        docs.append(doc | extra(n))
    for n in sorted(ws.towers):
        t = ws.towers[n]
        docs.append({"type": "tower", "name": n, "depth": tower_depth(t), "root": arrows[t.key]} | extra(n))
    for n in sorted(ws.congruences):
        docs.append(congruence_document(ws.congruences[n], n, names[ws.congruences[n].algebra.key]))
    return docs
