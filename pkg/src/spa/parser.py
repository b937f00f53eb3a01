"""Protocol source parsing and projection onto knowledge strands.

Source files declare roles, atoms, per-role knowledge, and an ordered list
of messages.  Projection turns each role into one knowledge strand: a sent
message is a positive event on the sender's strand and a negative event on
the recipient's, in message order.  Nonce/key atoms a role emits without
holding them are marked fresh; participant/user-data atoms in that position
are rejected, since nothing can create them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import (
    DuplicateDeclaration,
    KindMismatch,
    ParseError,
    SelfMessage,
    UndeclaredIdentifier,
    Ungeneratable,
)
from .strands import KStrand, StrandSpace
from .terms import (
    Atom,
    AtomKind,
    Empty,
    Enc,
    FuncName,
    Pair,
    SignedTerm,
    Term,
    atoms_of,
    pair_of,
)

RESERVED = {
    "protocol", "roles", "nonce", "key", "data", "knows", "sk", "pk", "pvk", "h",
}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<arrow>->)
  | (?P<punct>[{}(),;:])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # "ident", "arrow", "punct", "eof"
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        group = m.lastgroup
        raw = m.group()
        if group not in ("ws", "comment"):
            tokens.append(Token(group, raw, line, col))
        newlines = raw.count("\n")
        if newlines:
            line += newlines
            col = len(raw) - raw.rfind("\n")
        else:
            col += len(raw)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


@dataclass(frozen=True, slots=True)
class Message:
    sender: Atom
    recipient: Atom
    payload: Term


@dataclass(frozen=True, slots=True)
class ProtocolSpec:
    name: str
    roles: tuple[Atom, ...]
    decls: dict  # label -> AtomKind, declaration order, roles included
    knowledge: dict  # role label -> tuple of Term
    messages: tuple[Message, ...]

    def role(self, label: str) -> Atom | None:
        for r in self.roles:
            if r.label == label:
                return r
        return None


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.atoms: dict[str, Atom] = {}
        self.decl_order: list[str] = []

    # -- token plumbing -----------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text or tok.kind == "eof":
            shown = tok.text if tok.kind != "eof" else "end of input"
            raise ParseError(f"expected {text!r}, found {shown!r}", tok.line, tok.column)
        return tok

    def ident(self, what: str = "identifier") -> Token:
        tok = self.next()
        if tok.kind != "ident":
            shown = tok.text if tok.kind != "eof" else "end of input"
            raise ParseError(f"expected {what}, found {shown!r}", tok.line, tok.column)
        if tok.text in RESERVED:
            raise ParseError(f"{tok.text!r} is reserved", tok.line, tok.column)
        return tok

    # -- declarations -------------------------------------------------------

    def declare(self, tok: Token, kind: AtomKind) -> Atom:
        if tok.text in self.atoms:
            raise DuplicateDeclaration(
                f"{tok.text!r} already declared", tok.line, tok.column
            )
        atom = Atom(kind, tok.text)
        self.atoms[tok.text] = atom
        self.decl_order.append(tok.text)
        return atom

    def lookup(self, tok: Token) -> Atom:
        atom = self.atoms.get(tok.text)
        if atom is None:
            raise UndeclaredIdentifier(
                f"{tok.text!r} is not declared", tok.line, tok.column
            )
        return atom

    def role_ref(self, tok: Token) -> Atom:
        atom = self.lookup(tok)
        if atom.kind is not AtomKind.PARTICIPANT:
            raise KindMismatch(
                f"{tok.text!r} is not a role", tok.line, tok.column
            )
        return atom

    # -- grammar ------------------------------------------------------------

    def protocol(self) -> ProtocolSpec:
        self.expect("protocol")
        name = self.ident("protocol name").text
        self.expect("{")

        self.expect("roles")
        roles = [self.declare(self.ident("role name"), AtomKind.PARTICIPANT)]
        while self.peek().text == ",":
            self.next()
            roles.append(self.declare(self.ident("role name"), AtomKind.PARTICIPANT))
        self.expect(";")

        kind_words = {"nonce": AtomKind.NONCE, "key": AtomKind.KEY, "data": AtomKind.USERDATA}
        while self.peek().text in kind_words:
            kind = kind_words[self.next().text]
            self.declare(self.ident(), kind)
            while self.peek().text == ",":
                self.next()
                self.declare(self.ident(), kind)
            self.expect(";")

        knowledge: dict[str, list[Term]] = {r.label: [] for r in roles}
        while self.peek().text == "knows":
            self.next()
            role = self.role_ref(self.ident("role name"))
            self.expect(":")
            entries = [self.term()]
            while self.peek().text == ",":
                self.next()
                entries.append(self.term())
            self.expect(";")
            for entry in entries:
                if entry not in knowledge[role.label]:
                    knowledge[role.label].append(entry)

        messages = [self.message()]
        while self.peek().text != "}":
            messages.append(self.message())
        self.expect("}")
        tail = self.next()
        if tail.kind != "eof":
            raise ParseError(
                f"unexpected {tail.text!r} after protocol", tail.line, tail.column
            )

        spec = ProtocolSpec(
            name=name,
            roles=tuple(roles),
            decls={label: self.atoms[label].kind for label in self.decl_order},
            knowledge={label: tuple(entries) for label, entries in knowledge.items()},
            messages=tuple(messages),
        )
        _validate(spec)
        return spec

    def message(self) -> Message:
        frm_tok = self.ident("role name")
        frm = self.role_ref(frm_tok)
        self.expect("->")
        to_tok = self.ident("role name")
        to = self.role_ref(to_tok)
        if frm == to:
            raise SelfMessage(
                f"{frm.label!r} sends to itself", frm_tok.line, frm_tok.column
            )
        self.expect(":")
        parts = [self.term()]
        while self.peek().text == ",":
            self.next()
            parts.append(self.term())
        self.expect(";")
        return Message(frm, to, pair_of(parts))

    def term(self) -> Term:
        tok = self.peek()
        if tok.text == "(":
            self.next()
            parts = [self.term()]
            while self.peek().text == ",":
                self.next()
                parts.append(self.term())
            self.expect(")")
            if len(parts) < 2:
                raise ParseError(
                    "parenthesized terms need at least two components",
                    tok.line, tok.column,
                )
            return pair_of(parts)
        if tok.text == "{":
            self.next()
            parts = [self.term()]
            while self.peek().text == ",":
                self.next()
                parts.append(self.term())
            self.expect("}")
            func_tok = self.next()
            funcs = {"sk": FuncName.SK, "pk": FuncName.PK, "pvk": FuncName.PVK}
            if func_tok.text not in funcs:
                raise ParseError(
                    f"expected sk, pk or pvk, found {func_tok.text!r}",
                    func_tok.line, func_tok.column,
                )
            self.expect("(")
            key_tok = self.ident("key name")
            key = self.lookup(key_tok)
            if key.kind is not AtomKind.KEY:
                raise KindMismatch(
                    f"{key_tok.text!r} is not a key", key_tok.line, key_tok.column
                )
            self.expect(")")
            return Enc(pair_of(parts), funcs[func_tok.text], key)
        if tok.text == "h":
            self.next()
            self.expect("(")
            parts = [self.term()]
            while self.peek().text == ",":
                self.next()
                parts.append(self.term())
            self.expect(")")
            return Enc(pair_of(parts), FuncName.H, Empty())
        if tok.kind == "ident":
            return self.lookup(self.ident())
        shown = tok.text if tok.kind != "eof" else "end of input"
        raise ParseError(f"expected a term, found {shown!r}", tok.line, tok.column)


def parse(text: str) -> ProtocolSpec:
    """Parse protocol source into a validated spec."""
    return _Parser(text).protocol()


def role_events(spec: ProtocolSpec, role: Atom) -> list[SignedTerm]:
    events = []
    for msg in spec.messages:
        if msg.sender == role:
            events.append(SignedTerm(1, msg.payload))
        elif msg.recipient == role:
            events.append(SignedTerm(-1, msg.payload))
    return events


def _known_atoms(spec: ProtocolSpec, role: Atom) -> set[Atom]:
    known = {role}
    for entry in spec.knowledge[role.label]:
        known.update(atoms_of(entry))
    return known


def fresh_atoms(spec: ProtocolSpec, role: Atom) -> frozenset[Atom]:
    """Atoms the role must create: unheld nonces/keys first seen in a send."""
    known = _known_atoms(spec, role)
    seen: set[Atom] = set()
    fresh: set[Atom] = set()
    for event in role_events(spec, role):
        for atom in atoms_of(event.payload):
            if atom in known or atom in seen:
                continue
            seen.add(atom)
            if event.sign > 0 and atom.kind in (AtomKind.NONCE, AtomKind.KEY):
                fresh.add(atom)
    return frozenset(fresh)


def _validate(spec: ProtocolSpec) -> None:
    for role in spec.roles:
        known = _known_atoms(spec, role)
        seen: set[Atom] = set()
        for event in role_events(spec, role):
            for atom in atoms_of(event.payload):
                if atom in known or atom in seen:
                    continue
                seen.add(atom)
                if event.sign > 0 and atom.kind in (
                    AtomKind.PARTICIPANT, AtomKind.USERDATA,
                ):
                    raise Ungeneratable(
                        f"role {role.label} sends {atom.label} without holding "
                        f"it, and {atom.kind.value} atoms cannot be generated"
                    )


def project(spec: ProtocolSpec) -> StrandSpace:
    """One knowledge strand per role with at least one event.

    Knowledge order: own name, other role names held (declaration order),
    held or fresh basic atoms (declaration order), compound entries last.
    """
    strands = []
    for role in spec.roles:
        events = role_events(spec, role)
        if not events:
            continue
        entries = spec.knowledge[role.label]
        fresh = fresh_atoms(spec, role)
        atoms_held = {e for e in entries if isinstance(e, Atom)} | fresh
        knowledge: list[Term] = [role]
        for other in spec.roles:
            if other != role and other in atoms_held:
                knowledge.append(other)
        for label in spec.decls:
            atom = Atom(spec.decls[label], label)
            if atom.kind is not AtomKind.PARTICIPANT and atom in atoms_held:
                knowledge.append(atom)
        for entry in entries:
            if not isinstance(entry, Atom):
                knowledge.append(entry)
        strands.append(
            KStrand(
                knowledge=tuple(knowledge),
                participant=role,
                seq=tuple(events),
                fresh=fresh,
            )
        )
    return StrandSpace(tuple(strands))


def _render_dsl_term(t: Term, top: bool = False) -> str:
    from .terms import _spine

    if isinstance(t, Atom):
        return t.label
    if isinstance(t, Pair):
        inner = ", ".join(_render_dsl_term(p) for p in _spine(t))
        return inner if top else f"({inner})"
    if isinstance(t, Enc):
        inner = ", ".join(_render_dsl_term(p) for p in _spine(t.body))
        if t.func is FuncName.H:
            return f"h({inner})"
        return f"{{{inner}}}{t.func.value}({t.key.label})"
    raise TypeError(f"cannot render {t!r}")


def render_spec(spec: ProtocolSpec) -> str:
    """Pretty-print a protocol back to parseable source."""
    lines = [f"protocol {spec.name} {{"]
    lines.append("  roles " + ", ".join(r.label for r in spec.roles) + ";")
    for word, kind in (
        ("nonce", AtomKind.NONCE), ("key", AtomKind.KEY), ("data", AtomKind.USERDATA),
    ):
        labels = [lb for lb, k in spec.decls.items() if k is kind]
        if labels:
            lines.append(f"  {word} " + ", ".join(labels) + ";")
    for role in spec.roles:
        entries = spec.knowledge[role.label]
        if entries:
            rendered = ", ".join(_render_dsl_term(e) for e in entries)
            lines.append(f"  knows {role.label}: {rendered};")
    for msg in spec.messages:
        payload = _render_dsl_term(msg.payload, top=True)
        lines.append(f"  {msg.sender.label} -> {msg.recipient.label}: {payload};")
    lines.append("}")
    return "\n".join(lines) + "\n"
