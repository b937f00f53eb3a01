"""Minimal DOT syntax checker for the subset the CLI emits.

Accepts: a named digraph containing attribute assignments, default-attr
statements (`node [..];`), subgraphs, node statements with attribute
lists, and directed edges.  Raises ValueError on anything malformed.
Returns summary counts so tests can assert on structure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<edge>->)
  | (?P<punct>[{}\[\]=;,])
    """,
    re.VERBOSE,
)


@dataclass
class DotStats:
    nodes: int
    edges: int
    clusters: int
    labels: list


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ValueError(f"bad character at offset {pos}: {text[pos]!r}")
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group()))
        pos = m.end()
    return tokens


class _Checker:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0
        self.declared: set[str] = set()
        self.edge_refs: list[tuple[str, str]] = []
        self.stats = DotStats(0, 0, 0, [])

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else ("eof", "")

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, kind, text=None):
        tok = self.next()
        if tok[0] != kind or (text is not None and tok[1] != text):
            raise ValueError(f"expected {text or kind}, found {tok[1]!r}")
        return tok

    def value(self):
        tok = self.next()
        if tok[0] not in ("id", "string"):
            raise ValueError(f"expected value, found {tok[1]!r}")
        if tok[0] == "string":
            body = tok[1][1:-1]
            if re.search(r'(?<!\\)(?:\\\\)*"', body):
                raise ValueError("unescaped quote in string")
        return tok[1]

    def attr_list(self):
        self.expect("punct", "[")
        while True:
            key = self.expect("id")[1]
            self.expect("punct", "=")
            val = self.value()
            if key == "label":
                self.stats.labels.append(val.strip('"'))
            tok = self.next()
            if tok == ("punct", "]"):
                return
            if tok != ("punct", ","):
                raise ValueError(f"expected ',' or ']', found {tok[1]!r}")

    def statements(self):
        while True:
            tok = self.peek()
            if tok == ("punct", "}") or tok[0] == "eof":
                return
            if tok == ("id", "subgraph"):
                self.next()
                name = self.expect("id")[1]
                if name.startswith("cluster"):
                    self.stats.clusters += 1
                self.expect("punct", "{")
                self.statements()
                self.expect("punct", "}")
                continue
            name = self.expect("id")[1]
            nxt = self.peek()
            if nxt == ("punct", "="):
                self.next()
                val = self.value()
                if name == "label":
                    self.stats.labels.append(val.strip('"'))
            elif nxt[0] == "edge":
                self.next()
                target = self.expect("id")[1]
                if self.peek() == ("punct", "["):
                    self.attr_list()
                self.edge_refs.append((name, target))
                self.stats.edges += 1
            else:
                if self.peek() == ("punct", "["):
                    self.attr_list()
                if name not in ("node", "edge", "graph"):
                    self.declared.add(name)
                    self.stats.nodes += 1
            if self.peek() == ("punct", ";"):
                self.next()

    def run(self) -> DotStats:
        self.expect("id", "digraph")
        if self.peek()[0] in ("id", "string"):
            self.value()
        self.expect("punct", "{")
        self.statements()
        self.expect("punct", "}")
        if self.peek()[0] != "eof":
            raise ValueError("trailing content after closing brace")
        for a, b in self.edge_refs:
            for end in (a, b):
                if end not in self.declared:
                    raise ValueError(f"edge references undeclared node {end!r}")
        return self.stats


def check_dot(text: str) -> DotStats:
    return _Checker(_tokenize(text)).run()
