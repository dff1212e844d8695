"""Finite groups as exact Cayley tables.

Every group lives as a dense ``order x order`` multiplication table with the
identity at index 0.  Subgroups are sorted index sets of an ambient table;
homomorphisms and actions are plain index arrays.  All objects are treated as
immutable once built.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from pathlib import Path
from typing import Iterable

import numpy as np

DEFAULT_ORDER_CAP = 4096
EXHAUSTIVE_ASSOC_CAP = 512


class GroupError(ValueError):
    """Invalid group data or an operation applied outside its domain."""


class ResourceError(RuntimeError):
    """A configured size cap would be exceeded."""


class NotNormalError(GroupError):
    def __init__(self, message: str, witness: tuple[int, int]):
        super().__init__(message)
        self.witness = witness


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power_base(n: int) -> int | None:
    """Return p if n = p^k with k >= 1, else None."""
    if n < 2:
        return None
    p = 2
    while n % p:
        p += 1
    while n % p == 0:
        n //= p
    return p if n == 1 else None


@dataclass(frozen=True, eq=False)
class GroupTable:
    mult: np.ndarray
    name: str = "G"
    prime: int | None = None
    inv: np.ndarray = field(default=None, repr=False)  # type: ignore[assignment]

    def __post_init__(self):
        mult = np.ascontiguousarray(self.mult, dtype=np.int32)
        object.__setattr__(self, "mult", mult)
        if mult.ndim != 2 or mult.shape[0] != mult.shape[1] or mult.shape[0] == 0:
            raise GroupError("multiplication table must be a non-empty square array")
        if self.inv is None:
            n = mult.shape[0]
            rows, cols = np.nonzero(mult == 0)
            inv = np.full(n, -1, dtype=np.int32)
            inv[rows] = cols
            object.__setattr__(self, "inv", inv)
        else:
            object.__setattr__(self, "inv", np.asarray(self.inv, dtype=np.int32))
        self.mult.setflags(write=False)
        self.inv.setflags(write=False)

    @property
    def order(self) -> int:
        return self.mult.shape[0]

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"GroupTable({self.name!r}, order={self.order})"

    @property
    def identity(self) -> int:
        return 0

    def mul(self, *xs: int) -> int:
        r = 0
        for x in xs:
            r = int(self.mult[r, x])
        return r

    def power(self, x: int, e: int) -> int:
        if e < 0:
            x, e = int(self.inv[x]), -e
        r, b = 0, x
        while e:
            if e & 1:
                r = int(self.mult[r, b])
            b = int(self.mult[b, b])
            e >>= 1
        return r

    def power_map(self, e: int) -> np.ndarray:
        """x -> x^e for every element at once."""
        base = np.arange(self.order, dtype=np.int32)
        if e < 0:
            base, e = self.inv.copy(), -e
        res = np.zeros(self.order, dtype=np.int32)
        while e:
            if e & 1:
                res = self.mult[res, base]
            base = self.mult[base, base]
            e >>= 1
        return res

    def commutator(self, x: int, y: int) -> int:
        """[x, y] = x^-1 y^-1 x y."""
        return self.mul(int(self.inv[x]), int(self.inv[y]), x, y)

    def conj(self, g: int, x: int) -> int:
        """Left conjugation g x g^-1."""
        return self.mul(g, x, int(self.inv[g]))

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.ones(n, dtype=np.int64)
        cur = np.arange(n, dtype=np.int32)
        alive = cur != 0
        k = 1
        while alive.any():
            cur = self.mult[cur, np.arange(n)]
            k += 1
            done = alive & (cur == 0)
            orders[done] = k
            alive &= ~done
        return orders

    @cached_property
    def exponent(self) -> int:
        e = 1
        for o in np.unique(self.element_orders):
            e = e * int(o) // gcd(e, int(o))
        return e

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mult, self.mult.T))

    def whole(self) -> "SubgroupRef":
        return SubgroupRef(self, np.arange(self.order))

    def trivial(self) -> "SubgroupRef":
        return SubgroupRef(self, np.zeros(1, dtype=np.int32))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "order": self.order,
            "prime": self.prime,
            "mult": self.mult.tolist(),
        }


def validate_table(t: GroupTable, assoc_cap: int = EXHAUSTIVE_ASSOC_CAP) -> dict | None:
    """Check every group axiom; return ``None`` or the first violation found.

    Associativity is exhaustive up to ``assoc_cap`` elements. Above it, Light's
    test is used: the elements a with (x a) y = x (a y) for all x, y are closed
    under products, so checking a generating set is exact.
    """
    m = t.mult
    n = t.order
    ar = np.arange(n)
    if m.min() < 0 or m.max() >= n:
        bad = np.argwhere((m < 0) | (m >= n))[0]
        return {"axiom": "closure", "witness": [int(bad[0]), int(bad[1])]}
    bad = np.nonzero((m[0] != ar) | (m[:, 0] != ar))[0]
    if len(bad):
        return {"axiom": "identity", "witness": [int(bad[0])]}
    bad = np.nonzero((t.inv < 0) | (m[ar, np.maximum(t.inv, 0)] != 0))[0]
    if len(bad):
        return {"axiom": "inverse", "witness": [int(bad[0])]}
    rows = np.sort(m, axis=1) != ar[None, :]
    if rows.any():
        return {"axiom": "latin-row", "witness": [int(np.argwhere(rows)[0][0])]}
    cols = np.sort(m, axis=0) != ar[:, None]
    if cols.any():
        return {"axiom": "latin-column", "witness": [int(np.argwhere(cols)[0][1])]}
    if n <= assoc_cap:
        for x in range(n):
            left = m[m[x][:, None], ar[None, :]]  # (x*y)*z over y,z
            right = m[x][m]  # x*(y*z)
            if not np.array_equal(left, right):
                y, z = np.argwhere(left != right)[0]
                return {"axiom": "associativity", "witness": [x, int(y), int(z)]}
    else:
        for a in generating_subset(t, range(1, n)):
            left = m[m[:, a]]  # [x, y] -> (x a) y
            right = m[:, m[a]]  # [x, y] -> x (a y)
            if not np.array_equal(left, right):
                x, y = np.argwhere(left != right)[0]
                return {"axiom": "associativity", "witness": [int(x), a, int(y)]}
    if t.prime is not None and prime_power_base(n) != t.prime and n != 1:
        return {"axiom": "prime-tag", "witness": [n, t.prime]}
    return None


def make_group(mult, name: str = "G", prime: int | None = None, validate: bool = True,
               order_cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    mult = np.asarray(mult)
    if mult.shape[0] > order_cap:
        raise ResourceError(f"group order {mult.shape[0]} exceeds cap {order_cap}")
    t = GroupTable(mult, name=name, prime=prime)
    if validate:
        bad = validate_table(t)
        if bad is not None:
            raise GroupError(f"{name}: {bad['axiom']} violated at {bad['witness']}")
    return t


def tag_prime(mult, name: str, validate: bool = True, order_cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    n = np.asarray(mult).shape[0]
    return make_group(mult, name=name, prime=prime_power_base(n), validate=validate, order_cap=order_cap)


def load_group(path: str | Path, order_cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return group_from_json(data, order_cap=order_cap)


def group_from_json(data: dict, order_cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    try:
        mult = np.asarray(data["mult"], dtype=np.int64)
        order = int(data["order"])
    except (KeyError, TypeError, ValueError) as exc:
        raise GroupError(f"malformed group file: {exc}") from exc
    if mult.shape != (order, order):
        raise GroupError(f"table shape {mult.shape} does not match order {order}")
    return make_group(mult, name=data.get("name", "G"), prime=data.get("prime"), order_cap=order_cap)


# ---------------------------------------------------------------- subgroups


class SubgroupRef:
    """A subgroup of ``ambient`` stored as a sorted array of element indices."""

    __slots__ = ("ambient", "elements", "_mask", "_normal")

    def __init__(self, ambient: GroupTable, elements: Iterable[int] | np.ndarray):
        self.ambient = ambient
        els = np.unique(np.asarray(list(elements) if not isinstance(elements, np.ndarray) else elements,
                                   dtype=np.int32))
        els.setflags(write=False)
        self.elements = els
        self._mask = None
        self._normal = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def mask(self) -> np.ndarray:
        if self._mask is None:
            m = np.zeros(self.ambient.order, dtype=bool)
            m[self.elements] = True
            self._mask = m
        return self._mask

    def __contains__(self, x: int) -> bool:
        return bool(self.mask[x])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubgroupRef):
            return NotImplemented
        return self.ambient is other.ambient and np.array_equal(self.elements, other.elements)

    def __hash__(self) -> int:
        return hash((id(self.ambient), self.elements.tobytes()))

    def __le__(self, other: "SubgroupRef") -> bool:
        _same_ambient(self, other)
        return bool(other.mask[self.elements].all())

    def issubset(self, other: "SubgroupRef") -> bool:
        return self <= other

    def __repr__(self) -> str:
        return f"SubgroupRef({self.ambient.name}, order={self.order})"

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @property
    def is_normal(self) -> bool:
        if self._normal is None:
            self._normal = normality_witness(self) is None
        return self._normal

    def exponent(self) -> int:
        e = 1
        for o in np.unique(self.ambient.element_orders[self.elements]):
            e = e * int(o) // gcd(e, int(o))
        return e

    def tolist(self) -> list[int]:
        return [int(x) for x in self.elements]


def _same_ambient(a: SubgroupRef, b: SubgroupRef) -> None:
    if a.ambient is not b.ambient:
        raise GroupError("subgroups live in different ambient groups")


def normality_witness(s: SubgroupRef) -> tuple[int, int] | None:
    g = s.ambient
    allg = np.arange(g.order)
    conj = g.mult[g.mult[allg[:, None], s.elements[None, :]], g.inv[allg][:, None]]
    bad = ~s.mask[conj]
    if bad.any():
        i, j = np.argwhere(bad)[0]
        return int(allg[i]), int(s.elements[j])
    return None


def _close(g: GroupTable, start: np.ndarray, gens: np.ndarray) -> np.ndarray:
    mask = np.zeros(g.order, dtype=bool)
    mask[0] = True
    mask[start] = True
    frontier = np.nonzero(mask)[0]
    if len(gens) == 0:
        return frontier
    while len(frontier):
        prods = np.unique(g.mult[frontier[:, None], gens[None, :]])
        new = prods[~mask[prods]]
        mask[new] = True
        frontier = new
    return np.nonzero(mask)[0]


def subgroup_closure(g: GroupTable, seeds: Iterable[int]) -> SubgroupRef:
    seeds = np.unique(np.asarray(list(seeds), dtype=np.int32))
    if len(seeds) and (seeds.min() < 0 or seeds.max() >= g.order):
        raise GroupError("seed index out of range")
    # in a finite group, closure under right multiplication by the seeds suffices
    return SubgroupRef(g, _close(g, seeds, seeds))


def commutator_subgroup(a: SubgroupRef, b: SubgroupRef) -> SubgroupRef:
    """Subgroup generated by all [x, y] with x in a, y in b."""
    _same_ambient(a, b)
    g = a.ambient
    x, y = a.elements, b.elements
    xy = g.mult[x[:, None], y[None, :]]
    xiyi = g.mult[g.inv[x][:, None], g.inv[y][None, :]]
    comms = np.unique(g.mult[xiyi, xy])
    res = subgroup_closure(g, comms)
    if a._normal and b._normal:
        res._normal = True
    return res


def iterated_commutator(n: SubgroupRef, g: SubgroupRef, k: int) -> SubgroupRef:
    """[n, g, ..., g] with k copies of g (left-normed)."""
    if k < 0:
        raise GroupError("k must be non-negative")
    cur = n
    for _ in range(k):
        nxt = commutator_subgroup(cur, g)
        if nxt == cur:
            break
        cur = nxt
    return cur


def power_subgroup(n: SubgroupRef, e: int) -> SubgroupRef:
    """Subgroup generated by {x^e : x in n}."""
    if e <= 0:
        raise GroupError("exponent must be positive")
    g = n.ambient
    powers = np.unique(g.power_map(e)[n.elements])
    res = subgroup_closure(g, powers)
    if n._normal:
        res._normal = True
    return res


def power_set(n: SubgroupRef, e: int) -> np.ndarray:
    """The plain set {x^e : x in n} (not closed)."""
    return np.unique(n.ambient.power_map(e)[n.elements])


def product_of_subgroups(a: SubgroupRef, b: SubgroupRef) -> SubgroupRef:
    _same_ambient(a, b)
    g = a.ambient
    prod = np.unique(g.mult[a.elements[:, None], b.elements[None, :]])
    res = SubgroupRef(g, prod)
    closed = _close(g, prod, prod)
    if len(closed) != len(prod):
        raise GroupError("product set is not a subgroup")
    if a._normal and b._normal:
        res._normal = True
    return res


def join(*subs: SubgroupRef) -> SubgroupRef:
    g = subs[0].ambient
    for s in subs:
        _same_ambient(subs[0], s)
    return subgroup_closure(g, np.concatenate([s.elements for s in subs]))


def intersection(a: SubgroupRef, b: SubgroupRef) -> SubgroupRef:
    _same_ambient(a, b)
    res = SubgroupRef(a.ambient, np.intersect1d(a.elements, b.elements))
    if a._normal and b._normal:
        res._normal = True
    return res


def normal_closure(g: GroupTable, seeds: Iterable[int]) -> SubgroupRef:
    seeds = np.unique(np.asarray(list(seeds), dtype=np.int32))
    allg = np.arange(g.order)
    if len(seeds) == 0:
        return g.trivial()
    conj = np.unique(g.mult[g.mult[allg[:, None], seeds[None, :]], g.inv[allg][:, None]])
    res = subgroup_closure(g, conj)
    res._normal = True
    return res


def center(g: GroupTable) -> SubgroupRef:
    m = g.mult
    els = np.nonzero((m == m.T).all(axis=0))[0]
    res = SubgroupRef(g, els)
    res._normal = True
    return res


def centralizer_of(g: GroupTable, s: SubgroupRef) -> SubgroupRef:
    m = g.mult
    ok = (m[:, s.elements] == m[s.elements, :].T).all(axis=1)
    return SubgroupRef(g, np.nonzero(ok)[0])


# --------------------------------------------------------------- quotients


@dataclass(frozen=True, eq=False)
class Homomorphism:
    source: GroupTable
    target: GroupTable
    image: np.ndarray

    def __post_init__(self):
        img = np.asarray(self.image, dtype=np.int32)
        img.setflags(write=False)
        object.__setattr__(self, "image", img)
        if img.shape != (self.source.order,):
            raise GroupError("image array must have one entry per source element")

    def __call__(self, x: int) -> int:
        return int(self.image[x])

    def violation(self) -> tuple[int, int] | None:
        if self.image[0] != 0:
            return (0, 0)
        s, t, im = self.source.mult, self.target.mult, self.image
        lhs = im[s]
        rhs = t[im[:, None], im[None, :]]
        if not np.array_equal(lhs, rhs):
            x, y = np.argwhere(lhs != rhs)[0]
            return int(x), int(y)
        return None

    def is_homomorphism(self) -> bool:
        return self.violation() is None

    def kernel(self) -> SubgroupRef:
        res = SubgroupRef(self.source, np.nonzero(self.image == 0)[0])
        res._normal = True
        return res

    def image_subgroup(self) -> SubgroupRef:
        return SubgroupRef(self.target, np.unique(self.image))

    def image_of(self, s: SubgroupRef) -> SubgroupRef:
        return SubgroupRef(self.target, np.unique(self.image[s.elements]))

    def compose(self, other: "Homomorphism") -> "Homomorphism":
        """self after other."""
        if other.target is not self.source:
            raise GroupError("cannot compose: target/source mismatch")
        return Homomorphism(other.source, self.target, self.image[other.image])

    def is_injective(self) -> bool:
        return len(np.unique(self.image)) == self.source.order

    def is_surjective(self) -> bool:
        return len(np.unique(self.image)) == self.target.order


def identity_hom(g: GroupTable) -> Homomorphism:
    return Homomorphism(g, g, np.arange(g.order))


def trivial_hom(src: GroupTable, tgt: GroupTable) -> Homomorphism:
    return Homomorphism(src, tgt, np.zeros(src.order, dtype=np.int32))


def quotient_group(g: GroupTable, n: SubgroupRef, name: str | None = None) -> tuple[GroupTable, Homomorphism]:
    """Coset table of g/n.  Cosets are numbered by their smallest element."""
    if n.ambient is not g:
        raise GroupError("subgroup is not in this group")
    w = normality_witness(n)
    if w is not None:
        raise NotNormalError(f"subgroup is not normal: conjugating {w[1]} by {w[0]} leaves it", w)
    n._normal = True
    # left cosets x n; for normal n these are the cosets
    cosets = g.mult[:, n.elements]
    reps = cosets.min(axis=1)
    uniq = np.unique(reps)  # sorted, 0 first
    label = np.searchsorted(uniq, reps).astype(np.int32)
    qmult = label[g.mult[uniq[:, None], uniq[None, :]]]
    q = GroupTable(qmult, name=name or f"{g.name}/N{n.order}",
                   prime=g.prime if len(uniq) > 1 else None)
    return q, Homomorphism(g, q, label)


def preimage(hom: Homomorphism, s: SubgroupRef) -> SubgroupRef:
    res = SubgroupRef(hom.source, np.nonzero(s.mask[hom.image])[0])
    if s._normal and hom.is_surjective():
        res._normal = True
    return res


def subgroup_as_group(s: SubgroupRef, name: str | None = None) -> tuple[GroupTable, Homomorphism]:
    """Materialise s as its own table; returns (table, inclusion into ambient)."""
    g = s.ambient
    els = s.elements
    pos = np.full(g.order, -1, dtype=np.int32)
    pos[els] = np.arange(len(els))
    sub = pos[g.mult[els[:, None], els[None, :]]]
    if (sub < 0).any():
        raise GroupError("element set is not closed")
    t = GroupTable(sub, name=name or f"{g.name}[{len(els)}]",
                   prime=g.prime if len(els) > 1 else None)
    return t, Homomorphism(t, g, els)


# ------------------------------------------------------------------ actions


@dataclass(frozen=True, eq=False)
class ActionByAutomorphisms:
    """Left action: ``perm[g][x]`` is ^g x."""

    actor: GroupTable
    space: GroupTable
    perm: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.perm, dtype=np.int32)
        p.setflags(write=False)
        object.__setattr__(self, "perm", p)
        if p.shape != (self.actor.order, self.space.order):
            raise GroupError("action array must be |actor| x |space|")

    def act(self, g: int, x: int) -> int:
        return int(self.perm[g, x])

    def violation(self) -> dict | None:
        p = self.perm
        s = self.space.mult
        n = self.space.order
        if not np.array_equal(p[0], np.arange(n)):
            return {"law": "identity acts trivially", "witness": [0]}
        for g in range(self.actor.order):
            if len(np.unique(p[g])) != n:
                return {"law": "bijective", "witness": [g]}
            if not np.array_equal(p[g][s], s[p[g][:, None], p[g][None, :]]):
                x, y = np.argwhere(p[g][s] != s[p[g][:, None], p[g][None, :]])[0]
                return {"law": "automorphism", "witness": [g, int(x), int(y)]}
        a = self.actor.mult
        composed = p[np.arange(self.actor.order)[:, None, None], p[None, :, :]]  # perm[g][perm[h][x]]
        direct = p[a]
        if not np.array_equal(composed, direct):
            g, h, x = np.argwhere(composed != direct)[0]
            return {"law": "action compatibility", "witness": [int(g), int(h), int(x)]}
        return None


def conjugation_action(actor_hom: Homomorphism, space: SubgroupRef | None = None) -> ActionByAutomorphisms:
    """Action of the source of ``actor_hom`` on a normal subgroup of its target by conjugation."""
    g = actor_hom.target
    sub = space if space is not None else g.whole()
    els = sub.elements
    pos = np.full(g.order, -1, dtype=np.int32)
    pos[els] = np.arange(len(els))
    imgs = actor_hom.image
    conj = g.mult[g.mult[imgs[:, None], els[None, :]], g.inv[imgs][:, None]]
    perm = pos[conj]
    if (perm < 0).any():
        raise GroupError("conjugation does not preserve the subgroup")
    space_table = g if space is None else subgroup_as_group(sub)[0]
    return ActionByAutomorphisms(actor_hom.source, space_table, perm)


def trivial_action(actor: GroupTable, space: GroupTable) -> ActionByAutomorphisms:
    return ActionByAutomorphisms(actor, space, np.tile(np.arange(space.order, dtype=np.int32), (actor.order, 1)))


# ------------------------------------------------------------- fingerprints


def abelian_invariants(g: GroupTable, elements: np.ndarray | None = None) -> tuple[int, ...]:
    """Invariant factors d1 | d2 | ... of an abelian group (or abelian subgroup)."""
    orders = g.element_orders if elements is None else g.element_orders[elements]
    n = len(orders)
    if n == 1:
        return ()
    primes = []
    m, p = n, 2
    while m > 1:
        if m % p == 0:
            primes.append(p)
            while m % p == 0:
                m //= p
        p += 1
    elementary: dict[int, list[int]] = {}
    for p in primes:
        # count of elements killed by p^k gives p^(sum min(k, e_i))
        logs = [0]
        k = 1
        while True:
            cnt = int(np.sum((p ** k) % orders == 0))
            lg = round(np.log(cnt) / np.log(p))
            logs.append(lg)
            if lg == logs[-2] and k > 1:
                break
            k += 1
        # number of cyclic factors of exponent >= k is logs[k]-logs[k-1]
        ge = [logs[i] - logs[i - 1] for i in range(1, len(logs))]
        exps = []
        for k in range(1, len(ge) + 1):
            nxt = ge[k] if k < len(ge) else 0
            exps += [p ** k] * (ge[k - 1] - nxt)
        elementary[p] = sorted(exps, reverse=True)
    width = max(len(v) for v in elementary.values())
    factors = [1] * width
    for p, exps in elementary.items():
        for i, e in enumerate(exps):
            factors[i] *= e
    return tuple(sorted(factors))


def nilpotency_class(g: GroupTable, bound: int = 64) -> int | None:
    cur = g.whole()
    cur._normal = True
    whole = cur
    c = 0
    while not cur.is_trivial:
        nxt = commutator_subgroup(cur, whole)
        if nxt == cur or c >= bound:
            return None
        cur = nxt
        c += 1
    return c


def fingerprint(g: GroupTable) -> tuple:
    """(order, exponent, abelianization invariants, nilpotency class)."""
    whole = g.whole()
    whole._normal = True
    d = commutator_subgroup(whole, whole)
    q, _ = quotient_group(g, d)
    return (g.order, g.exponent, abelian_invariants(q), nilpotency_class(g))


def order_statistics(g: GroupTable) -> tuple:
    vals, counts = np.unique(g.element_orders, return_counts=True)
    return tuple((int(v), int(c)) for v, c in zip(vals, counts))


def isomorphic_abelian(a: GroupTable, b: GroupTable) -> bool:
    if not (a.is_abelian and b.is_abelian):
        raise GroupError("exact isomorphism test only for abelian groups")
    return abelian_invariants(a) == abelian_invariants(b)


# ------------------------------------------------- maps defined on generators


def generating_subset(g: GroupTable, candidates: Iterable[int]) -> list[int]:
    """Greedy: keep each candidate not already in the subgroup generated so far."""
    chosen: list[int] = []
    mask = np.zeros(g.order, dtype=bool)
    mask[0] = True
    for c in candidates:
        c = int(c)
        if mask[c]:
            continue
        chosen.append(c)
        mask[_close(g, np.array([0]), np.array(chosen, dtype=np.int64))] = True
        if mask.all():
            break
    return chosen


def extend_from_generators(source: GroupTable, gens, target: GroupTable, images) -> np.ndarray:
    """Candidate map sending gens[i] to images[i], built along a BFS over words.

    Callers confirm the result with :func:`hom_violation_on_generators`.
    """
    gens = np.asarray(gens, dtype=np.int64)
    images = np.asarray(images, dtype=np.int64)
    img = np.full(source.order, -1, dtype=np.int64)
    img[0] = 0
    frontier = np.array([0], dtype=np.int64)
    while len(frontier):
        new_all = []
        for s, t in zip(gens, images):
            nxt = source.mult[frontier, s]
            fresh = img[nxt] < 0
            if not fresh.any():
                continue
            nxt_f, src_f = nxt[fresh], frontier[fresh]
            # first writer wins when two frontier elements reach the same element
            uniq, first = np.unique(nxt_f, return_index=True)
            img[uniq] = target.mult[img[src_f[first]], t]
            new_all.append(uniq)
        frontier = np.unique(np.concatenate(new_all)) if new_all else np.zeros(0, dtype=np.int64)
    if (img < 0).any():
        raise GroupError("generator images do not reach every element")
    return img


def hom_violation_on_generators(source: GroupTable, target: GroupTable, image, gens) -> tuple[int, int] | None:
    """Exact homomorphism test for a map given on all elements: f(x s) = f(x) f(s)
    for every x and every s in a generating set suffices (induction on word length)."""
    image = np.asarray(image)
    if image[0] != 0:
        return (0, 0)
    for s in gens:
        lhs = image[source.mult[:, s]]
        rhs = target.mult[image, image[s]]
        if not np.array_equal(lhs, rhs):
            x = int(np.argmax(lhs != rhs))
            return x, int(s)
    return None
