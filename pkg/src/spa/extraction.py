"""Compilation of a knowledge strand into typed operation strands.

Walking the event sequence in order: a receive stores the term whole and
costs nothing; a send triggers construction of its term.  Construction
resolves each subterm by the first applicable rule: already known, recover
from known material (splitting pairs, decrypting under held symmetric
keys), generate (nonces and keys only), otherwise fail.  Every operation
emits one classifier strand over type-erased terms, and every term built,
received, or recovered joins the knowledge set, so nothing is ever built
twice.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import Ungeneratable, Unrecoverable
from .strands import Classifier, KStrand, StrandSpace, TStrand
from .terms import (
    Atom,
    AtomKind,
    Enc,
    FuncName,
    Pair,
    SignedTTerm,
    Term,
    contains,
    type_erase,
)

_ENC_CLASSIFIER = {
    FuncName.SK: Classifier.C_E,
    FuncName.PK: Classifier.C_PK,
    FuncName.PVK: Classifier.C_PVK,
    FuncName.H: Classifier.C_H,
}

_GEN_CLASSIFIER = {
    AtomKind.NONCE: Classifier.C_N,
    AtomKind.KEY: Classifier.C_K,
}


@dataclass(frozen=True, slots=True)
class Extraction:
    process: TStrand
    ops: tuple[TStrand, ...]

    def space(self) -> StrandSpace:
        return StrandSpace((self.process,) + self.ops)

    def op_counts(self) -> Counter:
        return Counter(op.classifier for op in self.ops)


class _State:
    """Private per-extraction state: ordered knowledge and emitted strands."""

    def __init__(self, strand: KStrand):
        self.participant = strand.participant
        # dict as ordered set: recovery scans in insertion order
        self.knowledge: dict[Term, None] = dict.fromkeys(strand.working_knowledge())
        self.ops: list[TStrand] = []

    def learn(self, t: Term) -> None:
        self.knowledge.setdefault(t)

    def emit(self, classifier: Classifier, *events: SignedTTerm) -> None:
        self.ops.append(TStrand(classifier, self.participant, events))


def extract(s: KStrand) -> Extraction:
    """Process strand plus operation strands for one participant."""
    state = _State(s)
    process_seq = []
    for event in s.seq:
        if event.sign < 0:
            state.learn(event.payload)
        else:
            _construct(event.payload, state)
        process_seq.append(SignedTTerm(event.sign, type_erase(event.payload)))
    process = TStrand(Classifier.C_P, s.participant, tuple(process_seq))
    return Extraction(process, tuple(state.ops))


def _construct(t: Term, state: _State) -> None:
    if t in state.knowledge:
        return
    if _recover(t, state):
        return
    if isinstance(t, Atom):
        if t.kind in _GEN_CLASSIFIER:
            if any(contains(k, t) for k in state.knowledge):
                raise Unrecoverable(
                    f"{state.participant.label} holds {t.label} only sealed "
                    "inside terms it cannot open"
                )
            state.emit(_GEN_CLASSIFIER[t.kind], SignedTTerm(1, type_erase(t)))
            state.learn(t)
            return
        raise Ungeneratable(
            f"{state.participant.label} does not hold {t.label} and "
            f"{t.kind.value} atoms cannot be generated"
        )
    if isinstance(t, Pair):
        _construct(t.left, state)
        _construct(t.right, state)
        state.emit(
            Classifier.C_C,
            SignedTTerm(-1, type_erase(t.left)),
            SignedTTerm(-1, type_erase(t.right)),
            SignedTTerm(1, type_erase(t)),
        )
        state.learn(t)
        return
    assert isinstance(t, Enc)
    if t.func is not FuncName.H:
        _construct(t.key, state)
    _construct(t.body, state)
    state.emit(
        _ENC_CLASSIFIER[t.func],
        SignedTTerm(-1, type_erase(t.body)),
        SignedTTerm(1, type_erase(t)),
    )
    state.learn(t)


def _recover(target: Term, state: _State) -> bool:
    """Split/decrypt a path from known material down to the target.

    The path is chosen against the knowledge as it stands at scan time
    (first exposing entry, leftmost descent); steps whose outputs are
    already known emit nothing.
    """
    for entry in state.knowledge:
        path = _path_to(entry, target, state.knowledge)
        if path is None:
            continue
        for step, child in zip(path, path[1:]):
            if isinstance(step, Pair):
                if child not in state.knowledge:
                    state.emit(
                        Classifier.C_I,
                        SignedTTerm(-1, type_erase(step)),
                        SignedTTerm(1, type_erase(step.left)),
                        SignedTTerm(1, type_erase(step.right)),
                    )
                    state.learn(step.left)
                    state.learn(step.right)
            else:
                if child not in state.knowledge:
                    state.emit(
                        Classifier.C_D,
                        SignedTTerm(-1, type_erase(step)),
                        SignedTTerm(1, type_erase(step.body)),
                    )
                    state.learn(step.body)
        return True
    return False


def _path_to(container: Term, target: Term, knowledge) -> list[Term] | None:
    """Containers from `container` down to `target` inclusive, descending
    only through pairs and symmetric ciphers whose key is held; None when
    the target is not reachable this way."""
    if container == target:
        return [container]
    if isinstance(container, Pair):
        for side in (container.left, container.right):
            path = _path_to(side, target, knowledge)
            if path is not None:
                return [container] + path
    if (
        isinstance(container, Enc)
        and container.func is FuncName.SK
        and container.key in knowledge
    ):
        path = _path_to(container.body, target, knowledge)
        if path is not None:
            return [container] + path
    return None
