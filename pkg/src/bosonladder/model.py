"""Ladder models: the beta sequence of one invariant subspace.

A model is fully described by non-negative numbers ``beta_0 ... beta_N`` with
``beta_N == 0``; the ladder operator acts as ``A^dag |n> = sqrt(beta_n) |n+1>``.
Built-in families produce exact integers. Custom sequences may be rational.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from numbers import Rational
from typing import Any, Iterable, Mapping, Sequence

FAMILIES = ("two_mode", "multi_mode", "k_photon", "three_mode", "custom")


class ModelError(ValueError):
    """Invalid model parameters or beta sequence."""


def _exact(value) -> int | Fraction:
    """Coerce to int when integral, otherwise Fraction. Floats are taken exactly."""
    if isinstance(value, bool):
        raise ModelError(f"not a number: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, (Fraction, Rational)):
        value = Fraction(value)
    elif isinstance(value, float):
        value = Fraction(value)
    elif isinstance(value, str):
        try:
            value = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ModelError(f"cannot parse beta {value!r}") from exc
    else:
        raise ModelError(f"unsupported beta type {type(value).__name__}")
    return value.numerator if value.denominator == 1 else value


@dataclass(frozen=True)
class LadderModel:
    """Immutable beta sequence plus provenance.

    ``params`` holds the constructor arguments as a sorted tuple of pairs so the
    model stays hashable (it is used as a cache key downstream).
    """

    betas: tuple
    family: str = "custom"
    params: tuple = ()
    label: str = ""
    inexact: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not self.betas:
            raise ModelError("beta sequence must be non-empty")
        if self.family not in FAMILIES:
            raise ModelError(f"unknown family {self.family!r}")
        if any(b < 0 for b in self.betas):
            raise ModelError("negative beta")
        if self.betas[-1] != 0:
            raise ModelError("last beta must be exactly zero")

    @property
    def N(self) -> int:
        return len(self.betas) - 1

    @property
    def dim(self) -> int:
        return len(self.betas)

    @property
    def reducible(self) -> bool:
        """True when an interior beta vanishes (the subspace splits into blocks)."""
        return any(b == 0 for b in self.betas[:-1])

    @property
    def max_beta(self):
        return max(self.betas)

    def beta(self, p: int):
        """beta_p with beta_p = 0 outside 0..N."""
        if 0 <= p <= self.N:
            return self.betas[p]
        return 0

    def float_betas(self) -> list[float]:
        return [float(b) for b in self.betas]

    def param_dict(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.params}

    def to_spec(self) -> dict:
        """JSON-ready spec that ``from_spec`` maps back to an equal model."""
        if self.family == "custom":
            spec: dict[str, Any] = {"family": "custom", "betas": [str(b) for b in self.betas]}
        else:
            spec = {"family": self.family, "params": self.param_dict()}
        if self.label:
            spec["label"] = self.label
        return spec


def _check_nonneg_int(name, value, minimum=0):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ModelError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ModelError(f"{name} must be >= {minimum}, got {value}")


def _pump_factor(M: int, m: int, n: int) -> int:
    return prod(M - m * n - i for i in range(m))


def _signal_factor(k: int, ell: int, n: int) -> int:
    return prod(k * n + ell + j for j in range(1, k + 1))


def make_multi_mode(m: int, ks: Sequence[int], ells: Sequence[int], M: int,
                    *, family: str = "multi_mode", label: str | None = None) -> LadderModel:
    """Model with ladder operator (a^dag)^m prod_s b_s^{k_s}.

    beta_n = prod_{i<m}(M - m n - i) * prod_s prod_{j=1}^{k_s}(k_s n + ell_s + j)
    for 0 <= n <= N = M // m.
    """
    _check_nonneg_int("m", m, 1)
    _check_nonneg_int("M", M, 0)
    ks, ells = list(ks), list(ells)
    if not ks:
        raise ModelError("need at least one signal mode")
    if len(ks) != len(ells):
        raise ModelError(f"ks and ells differ in length ({len(ks)} vs {len(ells)})")
    for k, ell in zip(ks, ells):
        _check_nonneg_int("k", k, 1)
        _check_nonneg_int("ell", ell, 0)
        if ell > k - 1:
            raise ModelError(f"ell={ell} out of range [0, {k - 1}]")
    N = M // m
    betas = tuple(
        _pump_factor(M, m, n) * prod(_signal_factor(k, ell, n) for k, ell in zip(ks, ells))
        for n in range(N + 1)
    )
    if label is None:
        label = f"({N},{','.join(map(str, ells))})"
    params = {"m": m, "ks": tuple(ks), "ells": tuple(ells), "M": M}
    return LadderModel(betas, family, tuple(sorted(params.items())), label)


def make_two_mode(m: int, k: int, M: int, ell: int = 0) -> LadderModel:
    """Two-mode model A = (a^dag)^m b^k in the subspace labelled (N, ell)."""
    base = make_multi_mode(m, [k], [ell], M)
    params = (("M", M), ("ell", ell), ("k", k), ("m", m))
    return LadderModel(base.betas, "two_mode", params, f"({base.N},{ell})")


def make_k_photon(k: int, N: int) -> LadderModel:
    """k-photon down-conversion, beta_n = (N - n) prod_{j=1}^k (k n + j)."""
    _check_nonneg_int("k", k, 1)
    _check_nonneg_int("N", N, 0)
    betas = tuple((N - n) * _signal_factor(k, 0, n) for n in range(N + 1))
    return LadderModel(betas, "k_photon", (("N", N), ("k", k)), f"({N})")


def make_three_mode(N: int) -> LadderModel:
    """Three-mode model a^dag b1 b2 + h.c.: beta_n = (N - n)(n + 1)^2."""
    base = make_multi_mode(1, [1, 1], [0, 0], N)
    return LadderModel(base.betas, "three_mode", (("N", N),), f"({N},0,0)")


def make_custom(betas: Iterable, label: str = "") -> LadderModel:
    """Model from an explicit beta sequence (ints, Fractions, decimal strings or floats).

    Floats are accepted exactly as stored and flag the model ``inexact``.
    """
    raw = list(betas)
    inexact = any(isinstance(b, float) for b in raw)
    return LadderModel(tuple(_exact(b) for b in raw), "custom", (), label, inexact)


_BUILDERS = {
    "k_photon": lambda p: make_k_photon(p["k"], p["N"]),
    "two_mode": lambda p: make_two_mode(p["m"], p["k"], p["M"], p.get("ell", 0)),
    "multi_mode": lambda p: make_multi_mode(p["m"], p["ks"], p["ells"], p["M"]),
    "three_mode": lambda p: make_three_mode(p["N"]),
}


def from_spec(spec: str | Mapping) -> LadderModel:
    """Build a model from a JSON spec (string or already-parsed mapping).

    ``{"family": "k_photon", "params": {"k": 2, "N": 100}}`` or
    ``{"family": "custom", "betas": ["2", "2", "0"]}``.
    """
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise ModelError(f"malformed model spec: {exc}") from exc
    if not isinstance(spec, Mapping):
        raise ModelError("model spec must be a JSON object")
    family = spec.get("family")
    label = spec.get("label")
    if family == "custom":
        if "betas" not in spec:
            raise ModelError("custom model needs 'betas'")
        return make_custom(spec["betas"], label or "")
    if family not in _BUILDERS:
        raise ModelError(f"unknown family {family!r}")
    params = spec.get("params")
    if not isinstance(params, Mapping):
        raise ModelError("built-in family needs a 'params' object")
    try:
        model = _BUILDERS[family](params)
    except KeyError as exc:
        raise ModelError(f"missing parameter {exc.args[0]!r} for {family}") from exc
    except TypeError as exc:
        raise ModelError(str(exc)) from exc
    if label:
        model = LadderModel(model.betas, model.family, model.params, label)
    return model


def describe(model: LadderModel) -> dict:
    """Summary used by ``model show``; re-parsable by ``from_spec``."""
    out = model.to_spec()
    out.update(
        N=model.N,
        label=model.label,
        betas=[str(b) for b in model.betas],
        reducible=model.reducible,
    )
    return out
