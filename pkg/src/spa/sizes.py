"""Symbolic sizes of typed terms and their numeric evaluation.

A size expression is a type-size symbol (|r|, |n|, |k|, |m|), the hash output
constant S_hash, an asymmetric-ciphertext application S_asym(x), or a flat
coefficient-weighted sum of those units.  Normal form: sums are flat, units
merged, ordered by descending coefficient with first-occurrence ties; a
single unit with coefficient 1 collapses to the bare unit; the empty sum is
size zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .terms import Basic, BasicTT, FuncName, TEmpty, TEnc, TPair, TTerm


class SizeExpr:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class TypeSize(SizeExpr):
    tt: BasicTT


@dataclass(frozen=True, slots=True)
class HashSize(SizeExpr):
    pass


@dataclass(frozen=True, slots=True)
class AsymSize(SizeExpr):
    arg: SizeExpr


@dataclass(frozen=True, slots=True)
class Sum(SizeExpr):
    items: tuple[tuple[int, SizeExpr], ...]  # (coefficient, non-Sum unit)


ZERO = Sum(())


def ssum(parts) -> SizeExpr:
    """Normalized sum of size expressions (units keep first-occurrence order,
    sorted by descending coefficient; stable)."""
    merged: dict[SizeExpr, int] = {}
    for part in parts:
        if isinstance(part, Sum):
            for coeff, unit in part.items:
                merged[unit] = merged.get(unit, 0) + coeff
        else:
            merged[part] = merged.get(part, 0) + 1
    items = sorted(merged.items(), key=lambda kv: -kv[1])
    if not items:
        return ZERO
    if len(items) == 1 and items[0][1] == 1:
        return items[0][0]
    return Sum(tuple((coeff, unit) for unit, coeff in items))


def normalize(e: SizeExpr) -> SizeExpr:
    return ssum([e])


def add(a: SizeExpr, b: SizeExpr) -> SizeExpr:
    return ssum([a, b])


def as_multiset(e: SizeExpr) -> dict[SizeExpr, int]:
    """Units with coefficients; zero maps to the empty dict."""
    if isinstance(e, Sum):
        return {unit: coeff for coeff, unit in e.items}
    return {e: 1}


def addend_count(e: SizeExpr) -> int:
    """Number of unit addends counting coefficients (2|n| + |r| has three)."""
    return sum(as_multiset(e).values())


def delta(t: TTerm) -> SizeExpr:
    """Symbolic size of a typed term."""
    if isinstance(t, TEmpty):
        return ZERO
    if isinstance(t, Basic):
        return TypeSize(t.tt)
    if isinstance(t, TPair):
        return add(delta(t.left), delta(t.right))
    if isinstance(t, TEnc):
        if t.func is FuncName.SK:
            return lambda_s(t.body)
        if t.func is FuncName.H:
            return lambda_h(t.body)
        return lambda_a(t.body)
    raise TypeError(f"not a typed term: {t!r}")


def lambda_s(t: TTerm) -> SizeExpr:
    """Symmetric ciphertext size: same as the cleartext."""
    return delta(t)


def lambda_a(t: TTerm) -> SizeExpr:
    """Asymmetric ciphertext size: opaque function of the cleartext size."""
    return AsymSize(delta(t))


def lambda_h(t: TTerm) -> SizeExpr:
    """Hash ciphertext size: constant, whatever the cleartext."""
    return HashSize()


def contains_hash(e: SizeExpr) -> bool:
    if isinstance(e, HashSize):
        return True
    if isinstance(e, AsymSize):
        return contains_hash(e.arg)
    if isinstance(e, Sum):
        return any(contains_hash(unit) for _, unit in e.items)
    return False


def render_size(e: SizeExpr) -> str:
    if isinstance(e, TypeSize):
        return f"|{e.tt.value}|"
    if isinstance(e, HashSize):
        return "S_hash"
    if isinstance(e, AsymSize):
        return f"S_asym({render_size(e.arg)})"
    if isinstance(e, Sum):
        if not e.items:
            return "0"
        parts = []
        for coeff, unit in e.items:
            text = render_size(unit)
            parts.append(text if coeff == 1 else f"{coeff}{text}")
        return " + ".join(parts)
    raise TypeError(f"not a size expression: {e!r}")


@dataclass(frozen=True, slots=True)
class SizeModel:
    sizes: dict  # BasicTT -> bytes
    s_hash: float
    blk_in: float
    blk_out: float
    pad: float

    def __post_init__(self):
        if set(self.sizes) != set(BasicTT):
            raise ValueError("sizes must cover r, n, k, m")
        values = list(self.sizes.values()) + [self.s_hash, self.blk_in, self.blk_out, self.pad]
        if any(v <= 0 for v in values):
            raise ValueError("size-model values must be positive")
        if self.blk_in <= self.pad:
            raise ValueError("blk_in must exceed pad")


def eval_size(e: SizeExpr, model: SizeModel) -> float:
    if isinstance(e, TypeSize):
        return float(model.sizes[e.tt])
    if isinstance(e, HashSize):
        return float(model.s_hash)
    if isinstance(e, AsymSize):
        x = eval_size(e.arg, model)
        return math.ceil((x + model.pad) / model.blk_in) * model.blk_out
    if isinstance(e, Sum):
        return float(sum(coeff * eval_size(unit, model) for coeff, unit in e.items))
    raise TypeError(f"not a size expression: {e!r}")
