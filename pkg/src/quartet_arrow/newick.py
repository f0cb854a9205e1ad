"""Newick reading and writing with unrooted semantics.

Only topology is supported: no branch lengths, no internal labels.  The
outermost parentheses are read as an internal vertex; if that vertex ends up
with degree 2 it is suppressed.
"""

from __future__ import annotations

import re

from .errors import DegreeTwoVertex, ParseError, UnknownTaxon
from .trees import LeafSet, Phylogeny, validate

_TOKEN_RE = re.compile(r"\s*(?:([(),;])|([A-Za-z0-9]+))")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} at offset {pos}")
        tokens.append(m.group(1) or m.group(2))
        pos = m.end()
    return tokens


def parse_newick(text: str, leaves: LeafSet | None = None) -> Phylogeny:
    """Parse a Newick string.  Without ``leaves``, the taxa are the sorted leaf names."""
    tokens = _tokenize(text)
    if not tokens or tokens[-1] != ";":
        raise ParseError("Newick string must end with ';'")
    if tokens.count(";") != 1:
        raise ParseError("more than one ';' in Newick string")
    pos = 0
    edges: list[tuple[object, object]] = []
    names: list[str] = []
    counter = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def subtree():
        nonlocal pos, counter
        tok = peek()
        if tok == "(":
            pos += 1
            node = ("node", counter)
            counter += 1
            while True:
                child = subtree()
                edges.append((node, child))
                tok = peek()
                pos += 1
                if tok == ",":
                    continue
                if tok == ")":
                    break
                raise ParseError(f"expected ',' or ')' but found {tok!r}")
            if peek() not in (",", ")", ";"):
                raise ParseError(f"internal labels are not supported (found {peek()!r})")
            return node
        if tok is None or tok in "(),;":
            raise ParseError(f"expected a taxon name or '(' but found {tok!r}")
        pos += 1
        names.append(tok)
        return ("leaf", tok)

    root = subtree()
    if peek() != ";":
        raise ParseError(f"trailing tokens after tree: {tokens[pos:]}")
    if len(set(names)) != len(names):
        raise ParseError("duplicate taxon names in Newick string")

    if leaves is None:
        leaves = LeafSet(tuple(sorted(names)))
    else:
        for name in names:
            if name not in leaves:
                raise UnknownTaxon(f"taxon {name!r} is not in the leaf set")

    root_edges = [e for e in edges if e[0] == root]
    if root[0] == "node" and len(root_edges) == 2:
        (_, a), (_, b) = root_edges
        edges = [e for e in edges if e[0] != root] + [(a, b)]
    try:
        return validate(edges, leaves, {name: ("leaf", name) for name in names})
    except DegreeTwoVertex as exc:
        raise DegreeTwoVertex(f"{exc} (after suppressing the root)") from None


def write_newick(tree: Phylogeny) -> str:
    """Newick string of ``tree``, written from its canonical rooting."""
    adj = tree.adjacency
    n = tree.n
    names = tree.leaves.names

    def encode(v, parent):
        # returns (sort key, text); the key is the canonical code fragment
        if v < n and parent is not None:
            return str(v), names[v]
        parts = sorted(encode(w, v) for w in adj[v] if w != parent)
        return "(" + ",".join(k for k, _ in parts) + ")", "(" + ",".join(t for _, t in parts) + ")"

    roots = list(tree.internal_vertices) or [0]
    _, text = min(encode(r, None) for r in roots)
    return text + ";"
