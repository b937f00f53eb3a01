"""Cost-model and assumption configuration.

One JSON document supplies numeric type sizes, hash and asymmetric
ciphertext parameters, affine coefficients for the six size-dependent cost
functions, the three constants, and optional comparison assumptions.  The
schema is closed: unknown keys are rejected so typos cannot silently fall
back to defaults.
"""

from __future__ import annotations

import json

from .costs import (
    DEFAULT_ASSUMPTIONS,
    Affine,
    AssumptionSet,
    CostFunc,
    CostModel,
    EXPANDABLE,
)
from .errors import ConfigError
from .sizes import SizeModel
from .terms import BasicTT

_SIZE_KEYS = {"r": BasicTT.R, "n": BasicTT.N, "k": BasicTT.K, "m": BasicTT.M}
_FUNC_NAMES = {f.value: f for f in CostFunc}


def _mapping(value, where: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{where} must be an object")
    return value


def _check_keys(data: dict, allowed, required, where: str) -> None:
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key {unknown[0]!r} in {where}")
    missing = sorted(set(required) - set(data))
    if missing:
        raise ConfigError(f"missing key {missing[0]!r} in {where}")


def _number(data: dict, key: str, where: str) -> float:
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number")
    return float(value)


def _flag(data: dict, key: str, where: str) -> bool:
    value = data[key]
    if not isinstance(value, bool):
        raise ConfigError(f"{where}.{key} must be true or false")
    return value


def parse_config(data) -> tuple[CostModel, AssumptionSet]:
    top = _mapping(data, "config")
    required = ("sizes", "s_hash", "s_asym", "funcs", "lambda_c", "lambda_p", "ov_h")
    _check_keys(top, required + ("assumptions",), required, "config")

    sizes_raw = _mapping(top["sizes"], "sizes")
    _check_keys(sizes_raw, _SIZE_KEYS, _SIZE_KEYS, "sizes")
    sizes = {tt: _number(sizes_raw, key, "sizes") for key, tt in _SIZE_KEYS.items()}

    asym = _mapping(top["s_asym"], "s_asym")
    _check_keys(asym, ("blk_in", "blk_out", "pad"), ("blk_in", "blk_out", "pad"), "s_asym")

    funcs_raw = _mapping(top["funcs"], "funcs")
    wanted = {f.value: f for f in EXPANDABLE}
    _check_keys(funcs_raw, wanted, wanted, "funcs")
    funcs = {}
    for name, func in wanted.items():
        entry = _mapping(funcs_raw[name], f"funcs.{name}")
        _check_keys(entry, ("alpha", "beta"), ("alpha", "beta"), f"funcs.{name}")
        try:
            funcs[func] = Affine(
                _number(entry, "alpha", f"funcs.{name}"),
                _number(entry, "beta", f"funcs.{name}"),
            )
        except ValueError as exc:
            raise ConfigError(f"funcs.{name}: {exc}") from exc

    try:
        size_model = SizeModel(
            sizes=sizes,
            s_hash=_number(top, "s_hash", "config"),
            blk_in=_number(asym, "blk_in", "s_asym"),
            blk_out=_number(asym, "blk_out", "s_asym"),
            pad=_number(asym, "pad", "s_asym"),
        )
        model = CostModel(
            funcs=funcs,
            lambda_c=_number(top, "lambda_c", "config"),
            lambda_p=_number(top, "lambda_p", "config"),
            ov_h=_number(top, "ov_h", "config"),
            size_model=size_model,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    return model, _parse_assumptions(top.get("assumptions"))


def _parse_assumptions(raw) -> AssumptionSet:
    if raw is None:
        return DEFAULT_ASSUMPTIONS
    data = _mapping(raw, "assumptions")
    allowed = ("ignore_overhead", "dominance", "monotone", "max_bytes")
    _check_keys(data, allowed, (), "assumptions")
    kwargs = {}
    if "ignore_overhead" in data:
        kwargs["ignore_overhead"] = _flag(data, "ignore_overhead", "assumptions")
    if "monotone" in data:
        kwargs["monotone"] = _flag(data, "monotone", "assumptions")
    if "max_bytes" in data:
        kwargs["max_bytes"] = _number(data, "max_bytes", "assumptions")
    if "dominance" in data:
        entries = data["dominance"]
        if not isinstance(entries, list):
            raise ConfigError("assumptions.dominance must be a list of pairs")
        pairs = []
        for entry in entries:
            if not isinstance(entry, list) or len(entry) != 2:
                raise ConfigError("assumptions.dominance entries must be [greater, lesser]")
            named = []
            for name in entry:
                func = _FUNC_NAMES.get(name)
                if func is None:
                    raise ConfigError(f"unknown cost function {name!r} in dominance")
                named.append(func)
            pairs.append(tuple(named))
        kwargs["dominance"] = tuple(pairs)
    try:
        return AssumptionSet(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path) -> tuple[CostModel, AssumptionSet]:
    """Read and validate a JSON config file."""
    with open(path, encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    return parse_config(data)
