"""Term algebra: instance terms, typed terms, signed terms, type erasure.

Instance terms carry atom labels and encryption keys; typed terms keep only
the type structure (r, n, k, m).  Pairing is left-associative throughout:
(a, b, c) is Pair(Pair(a, b), c).  Hashing is Enc with func `h` and an empty
key slot so the encryption constructor stays uniform.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass


class AtomKind(enum.Enum):
    PARTICIPANT = "participant"
    NONCE = "nonce"
    KEY = "key"
    USERDATA = "data"


class FuncName(enum.Enum):
    SK = "sk"
    PK = "pk"
    PVK = "pvk"
    H = "h"


_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class Term:
    """Base class for instance terms."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Empty(Term):
    pass


@dataclass(frozen=True, slots=True)
class Atom(Term):
    kind: AtomKind
    label: str

    def __post_init__(self):
        if not _IDENT_RE.match(self.label):
            raise ValueError(f"bad atom label: {self.label!r}")


@dataclass(frozen=True, slots=True)
class Pair(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Enc(Term):
    body: Term
    func: FuncName
    key: Term

    def __post_init__(self):
        if self.func is FuncName.H:
            if not isinstance(self.key, Empty):
                raise ValueError("hash terms take an empty key")
        else:
            if not (isinstance(self.key, Atom) and self.key.kind is AtomKind.KEY):
                raise ValueError(f"{self.func.value} key must be a key atom")


class BasicTT(enum.Enum):
    R = "r"
    N = "n"
    K = "k"
    M = "m"


_KIND_TO_BASIC = {
    AtomKind.PARTICIPANT: BasicTT.R,
    AtomKind.NONCE: BasicTT.N,
    AtomKind.KEY: BasicTT.K,
    AtomKind.USERDATA: BasicTT.M,
}


class TTerm:
    """Base class for typed terms."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class TEmpty(TTerm):
    pass


@dataclass(frozen=True, slots=True)
class Basic(TTerm):
    tt: BasicTT


@dataclass(frozen=True, slots=True)
class TPair(TTerm):
    left: TTerm
    right: TTerm


@dataclass(frozen=True, slots=True)
class TEnc(TTerm):
    body: TTerm
    func: FuncName


@dataclass(frozen=True, slots=True)
class SignedTerm:
    sign: int
    payload: Term

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if isinstance(self.payload, Empty):
            raise ValueError("signed terms carry nonempty payloads")


@dataclass(frozen=True, slots=True)
class SignedTTerm:
    sign: int
    payload: TTerm

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if isinstance(self.payload, TEmpty):
            raise ValueError("signed terms carry nonempty payloads")


def pair_of(parts) -> Term:
    """Fold a nonempty sequence of terms into a left-associative pair chain."""
    parts = list(parts)
    if not parts:
        raise ValueError("pair_of needs at least one term")
    out = parts[0]
    for p in parts[1:]:
        out = Pair(out, p)
    return out


def type_erase(t: Term) -> TTerm:
    """Map an instance term to its typed term: labels and keys are dropped."""
    if isinstance(t, Empty):
        return TEmpty()
    if isinstance(t, Atom):
        return Basic(_KIND_TO_BASIC[t.kind])
    if isinstance(t, Pair):
        return TPair(type_erase(t.left), type_erase(t.right))
    if isinstance(t, Enc):
        return TEnc(type_erase(t.body), t.func)
    raise TypeError(f"not a term: {t!r}")


def atoms_of(t: Term):
    """Yield every atom occurring in t, key positions included, left to right."""
    if isinstance(t, Atom):
        yield t
    elif isinstance(t, Pair):
        yield from atoms_of(t.left)
        yield from atoms_of(t.right)
    elif isinstance(t, Enc):
        yield from atoms_of(t.body)
        yield from atoms_of(t.key)


def contains(t: Term, sub: Term) -> bool:
    """True when sub occurs in t (t itself included)."""
    if t == sub:
        return True
    if isinstance(t, Pair):
        return contains(t.left, sub) or contains(t.right, sub)
    if isinstance(t, Enc):
        return contains(t.body, sub) or contains(t.key, sub)
    return False


def _spine(t) -> list:
    # flatten the left-associative pair spine for display
    out = []
    while isinstance(t, (Pair, TPair)):
        out.append(t.right)
        t = t.left
    out.append(t)
    out.reverse()
    return out


def render_term(t: Term) -> str:
    """Display form: (A, N_a), {N_a, K, B}_sk(K_AB), h(T_a, N_a)."""
    if isinstance(t, Empty):
        return "."
    if isinstance(t, Atom):
        return t.label
    if isinstance(t, Pair):
        return "(" + ", ".join(render_term(p) for p in _spine(t)) + ")"
    if isinstance(t, Enc):
        inner = ", ".join(render_term(p) for p in _spine(t.body))
        if t.func is FuncName.H:
            return f"h({inner})"
        return f"{{{inner}}}_{t.func.value}({t.key.label})"
    raise TypeError(f"not a term: {t!r}")


def render_tterm(t: TTerm) -> str:
    """Display form: (r, n), {n, k, r}_sk, {m}_h."""
    if isinstance(t, TEmpty):
        return "."
    if isinstance(t, Basic):
        return t.tt.value
    if isinstance(t, TPair):
        return "(" + ", ".join(render_tterm(p) for p in _spine(t)) + ")"
    if isinstance(t, TEnc):
        inner = ", ".join(render_tterm(p) for p in _spine(t.body))
        return f"{{{inner}}}_{t.func.value}"
    raise TypeError(f"not a typed term: {t!r}")


def render_signed(st) -> str:
    body = render_term(st.payload) if isinstance(st, SignedTerm) else render_tterm(st.payload)
    return ("+" if st.sign > 0 else "-") + body
