"""Subgroup series of a finite group and the sweep-defined subgroups D_n, F_n."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .group import (
    GroupError,
    GroupTable,
    SubgroupRef,
    center,
    commutator_subgroup,
    power_subgroup,
    preimage,
    product_of_subgroups,
    quotient_group,
)

MAX_TERMS = 20

KINDS = ("lower_central", "upper_central", "derived", "lower_p", "frattini")


class SeriesError(GroupError):
    pass


@dataclass(frozen=True)
class SeriesResult:
    kind: str
    terms: tuple[SubgroupRef, ...]
    stabilized_at: int

    def term(self, i: int) -> SubgroupRef:
        """1-based term for descending series, 0-based (Z_i) for upper central.

        Indices past the stored terms return the stable value.
        """
        idx = i if self.kind == "upper_central" else i - 1
        if idx < 0:
            raise IndexError(i)
        return self.terms[min(idx, len(self.terms) - 1)]

    @property
    def orders(self) -> list[int]:
        return [t.order for t in self.terms]

    def to_json(self) -> dict:
        return {"kind": self.kind, "orders": self.orders,
                "terms": [t.tolist() for t in self.terms]}


def _whole(g: GroupTable) -> SubgroupRef:
    w = g.whole()
    w._normal = True
    return w


def _iterate(kind: str, first: SubgroupRef, step, max_terms: int) -> SeriesResult:
    terms = [first]
    while len(terms) < max_terms:
        nxt = step(terms[-1])
        nxt._normal = True
        if nxt == terms[-1]:
            return SeriesResult(kind, tuple(terms), len(terms) - 1)
        terms.append(nxt)
    return SeriesResult(kind, tuple(terms), len(terms) - 1)


def _check_prime(g: GroupTable, p: int) -> None:
    if g.prime is not None and g.prime != p:
        raise SeriesError(f"prime {p} does not match group prime {g.prime}")
    if g.prime is None and g.order > 1:
        raise SeriesError(f"{g.name} is not tagged as a p-group")


def lower_central_series(g: GroupTable, max_terms: int = MAX_TERMS) -> SeriesResult:
    whole = _whole(g)
    return _iterate("lower_central", whole, lambda t: commutator_subgroup(t, whole), max_terms)


def upper_central_series(g: GroupTable, max_terms: int = MAX_TERMS) -> SeriesResult:
    def step(z: SubgroupRef) -> SubgroupRef:
        q, proj = quotient_group(g, z)
        return preimage(proj, center(q))

    triv = g.trivial()
    triv._normal = True
    return _iterate("upper_central", triv, step, max_terms)


def derived_series(g: GroupTable, max_terms: int = MAX_TERMS) -> SeriesResult:
    return _iterate("derived", _whole(g), lambda t: commutator_subgroup(t, t), max_terms)


def lower_p_series_recursive(g: GroupTable, p: int, max_terms: int = MAX_TERMS) -> SeriesResult:
    whole = _whole(g)
    return _iterate("lower_p", whole,
                    lambda t: product_of_subgroups(power_subgroup(t, p), commutator_subgroup(t, whole)),
                    max_terms)


def lower_p_closed_form(g: GroupTable, p: int, n: int, gammas: SeriesResult | None = None) -> SubgroupRef:
    """gamma_1^(p^(n-1)) gamma_2^(p^(n-2)) ... gamma_n."""
    gammas = gammas or lower_central_series(g)
    acc = g.trivial()
    acc._normal = True
    for i in range(1, n + 1):
        acc = product_of_subgroups(acc, power_subgroup(gammas.term(i), p ** (n - i)))
    return acc


def lower_p_series(g: GroupTable, p: int, max_terms: int = MAX_TERMS) -> SeriesResult:
    """Lower p-series by the recursion, cross-checked against the closed form."""
    _check_prime(g, p)
    rec = lower_p_series_recursive(g, p, max_terms)
    gammas = lower_central_series(g)
    for n in range(1, len(rec.terms) + 2):
        closed = lower_p_closed_form(g, p, n, gammas)
        if closed != rec.term(n):
            raise SeriesError(f"lower p-series disagreement at term {n} for {g.name}")
    return rec


def frattini_series(g: GroupTable, p: int, max_terms: int = MAX_TERMS) -> SeriesResult:
    _check_prime(g, p)
    return _iterate("frattini", _whole(g),
                    lambda t: product_of_subgroups(power_subgroup(t, p), commutator_subgroup(t, t)),
                    max_terms)


def _sweep(g: GroupTable, layers: list[SubgroupRef]) -> SubgroupRef:
    """{h : [..[[h, x1], x2], .., xn] = 1 for all x_i in layers[i-1]}.

    Computed inside out: K_{n+1} = 1 and K_i = {y : [y, x] in K_{i+1} for x in layers[i-1]}.
    """
    m, inv = g.mult, g.inv
    allg = np.arange(g.order)
    keep = np.zeros(g.order, dtype=bool)
    keep[0] = True
    for layer in reversed(layers):
        x = layer.elements
        comms = m[m[inv[allg][:, None], inv[x][None, :]], m[allg[:, None], x[None, :]]]
        keep = keep[comms].all(axis=1)
    res = SubgroupRef(g, np.nonzero(keep)[0])
    res._normal = True
    return res


def script_D_n(g: GroupTable, n: int) -> SubgroupRef:
    if n < 1:
        raise SeriesError("n must be at least 1")
    derived = derived_series(g)
    return _sweep(g, [derived.term(i) for i in range(1, n + 1)])


def script_F_n(g: GroupTable, p: int, n: int) -> SubgroupRef:
    if n < 1:
        raise SeriesError("n must be at least 1")
    frat = frattini_series(g, p)
    return _sweep(g, [frat.term(i) for i in range(1, n + 1)])


def compute_series(g: GroupTable, kind: str, p: int | None = None) -> SeriesResult:
    if kind == "lower_central":
        return lower_central_series(g)
    if kind == "upper_central":
        return upper_central_series(g)
    if kind == "derived":
        return derived_series(g)
    if kind in ("lower_p", "frattini"):
        if p is None:
            if g.prime is None:
                raise SeriesError(f"{kind} needs a prime")
            p = g.prime
        return lower_p_series(g, p) if kind == "lower_p" else frattini_series(g, p)
    raise SeriesError(f"unknown series kind {kind!r}")
