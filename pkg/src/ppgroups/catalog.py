"""Constructors for the small p-groups used throughout.

Element numbering per constructor:

* ``cyclic(n)``: index i is a^i.
* ``elementary_abelian(p, k)``: index is the base-p integer of the coordinate
  vector, most significant coordinate first.
* ``direct_product(a, b)``: (x, y) has index x * |b| + y.
* ``semidirect(n, h, action)``: (x, y) with x in n, y in h has index
  x * |h| + y; multiplication (x, y)(x', y') = (x * ^y x', y y').
* ``heisenberg(p)``: upper unitriangular (a, b, c) -> [[1,a,c],[0,1,b],[0,0,1]],
  index (a * p + b) * p + c.
* ``extraspecial_exp_p2(p)``: C_{p^2} x| C_p with b a b^-1 = a^(1+p), index
  i * p + j for a^i b^j.
* ``dihedral(2m)``: C_m x| C_2 by inversion, index i * 2 + j for r^i s^j.
* ``semidihedral(2^k)``: C_{2^(k-1)} x| C_2 with s r s = r^(2^(k-2) - 1).
* ``quaternion(2^k)``: a^i b^j (i < 2^(k-1), j < 2) with b^2 = a^(2^(k-2)) and
  b a b^-1 = a^-1, index i * 2 + j.
"""

from __future__ import annotations

import re
from itertools import product

import numpy as np

from .group import (
    DEFAULT_ORDER_CAP,
    GroupError,
    GroupTable,
    ResourceError,
    is_prime,
    make_group,
    prime_power_base,
)


def _finish(mult: np.ndarray, name: str, order_cap: int) -> GroupTable:
    n = mult.shape[0]
    return make_group(mult, name=name, prime=prime_power_base(n), order_cap=order_cap)


def _check_cap(n: int, order_cap: int) -> None:
    if n > order_cap:
        raise ResourceError(f"group order {n} exceeds cap {order_cap}")


def cyclic(n: int, order_cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    if n < 1:
        raise GroupError("cyclic order must be positive")
    _check_cap(n, order_cap)
    i = np.arange(n)
    return _finish((i[:, None] + i[None, :]) % n, f"C{n}", order_cap)


def direct_product(a: GroupTable, b: GroupTable, order_cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    na, nb = a.order, b.order
    _check_cap(na * nb, order_cap)
    ia = np.repeat(np.arange(na), nb)
    ib = np.tile(np.arange(nb), na)
    mult = a.mult[ia[:, None], ia[None, :]] * nb + b.mult[ib[:, None], ib[None, :]]
    return _finish(mult, f"{a.name}x{b.name}", order_cap)


def elementary_abelian(p: int, k: int, order_cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    if not is_prime(p):
        raise GroupError(f"{p} is not prime")
    if k < 1:
        raise GroupError("rank must be positive")
    _check_cap(p ** k, order_cap)
    g = cyclic(p)
    for _ in range(k - 1):
        g = direct_product(g, cyclic(p), order_cap)
    return GroupTable(g.mult, name=f"C{p}^{k}" if k > 1 else f"C{p}", prime=p, inv=g.inv)


def semidirect(n: GroupTable, h: GroupTable, action: np.ndarray, name: str | None = None,
               order_cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    """n x| h where ``action[y]`` is the automorphism of n induced by y in h."""
    action = np.asarray(action, dtype=np.int64)
    nn, nh = n.order, h.order
    if action.shape != (nh, nn):
        raise GroupError("semidirect action must be an |h| x |n| array")
    for y in range(nh):
        a = action[y]
        if sorted(a.tolist()) != list(range(nn)) or not np.array_equal(a[n.mult], n.mult[a[:, None], a[None, :]]):
            raise GroupError(f"action of {y} is not an automorphism")
    if not np.array_equal(action[h.mult], action[np.arange(nh)[:, None, None], action[None, :, :]]):
        raise GroupError("semidirect action is not a homomorphism into Aut(n)")
    _check_cap(nn * nh, order_cap)
    x = np.repeat(np.arange(nn), nh)
    y = np.tile(np.arange(nh), nn)
    # (x, y)(x', y') = (x * ^y x', y y')
    acted = action[y[:, None], x[None, :]]
    first = n.mult[x[:, None], acted]
    second = h.mult[y[:, None], y[None, :]]
    return _finish(first * nh + second, name or f"{n.name}:{h.name}", order_cap)


def _cyclic_power_action(m: int, k: int, r: int) -> np.ndarray:
    """Action of C_k on C_m with generator acting as a -> a^r."""
    acts = np.empty((k, m), dtype=np.int64)
    e = 1
    for j in range(k):
        acts[j] = (np.arange(m) * e) % m
        e = (e * r) % m
    return acts


def heisenberg(p: int, order_cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    if not is_prime(p):
        raise GroupError(f"{p} is not prime")
    _check_cap(p ** 3, order_cap)
    coords = np.array(list(product(range(p), repeat=3)))
    a, b, c = coords[:, 0], coords[:, 1], coords[:, 2]
    na = (a[:, None] + a[None, :]) % p
    nb = (b[:, None] + b[None, :]) % p
    nc = (c[:, None] + c[None, :] + a[:, None] * b[None, :]) % p
    return _finish((na * p + nb) * p + nc, f"Heis({p})", order_cap)


def extraspecial_exp_p2(p: int, order_cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    if not is_prime(p):
        raise GroupError(f"{p} is not prime")
    g = semidirect(cyclic(p * p), cyclic(p), _cyclic_power_action(p * p, p, 1 + p),
                   name=f"M({p**3})", order_cap=order_cap)
    return g


def dihedral(n: int, order_cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    if n < 4 or n % 2:
        raise GroupError("dihedral order must be even and at least 4")
    m = n // 2
    return semidirect(cyclic(m), cyclic(2), _cyclic_power_action(m, 2, m - 1),
                      name=f"D{n}", order_cap=order_cap)


def semidihedral(n: int, order_cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    if n < 16 or prime_power_base(n) != 2:
        raise GroupError("semidihedral order must be a power of 2, at least 16")
    m = n // 2
    return semidirect(cyclic(m), cyclic(2), _cyclic_power_action(m, 2, m // 2 - 1),
                      name=f"SD{n}", order_cap=order_cap)


def quaternion(n: int = 8, order_cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    if n < 8 or prime_power_base(n) != 2:
        raise GroupError("quaternion order must be a power of 2, at least 8")
    _check_cap(n, order_cap)
    m = n // 2
    i = np.repeat(np.arange(m), 2)
    j = np.tile(np.arange(2), m)
    # a^i b^j . a^i' b^j' = a^(i + (-1)^j i') b^(j + j'), with b^2 = a^(m/2)
    sign = np.where(j == 1, -1, 1)
    ni = i[:, None] + sign[:, None] * i[None, :] + (m // 2) * (j[:, None] & j[None, :])
    nj = (j[:, None] + j[None, :]) % 2
    return _finish((ni % m) * 2 + nj, f"Q{n}", order_cap)


def trivial_group() -> GroupTable:
    return make_group(np.zeros((1, 1), dtype=np.int32), name="1")


# --------------------------------------------------------------- spec parser

_ALIASES = {
    "heisenberg": "heisenberg", "heis": "heisenberg",
    "extraspecial_exp_p2": "extraspecial_exp_p2", "m": "modular_extraspecial",
    "cyclic": "cyclic", "c": "cyclic",
    "dihedral": "dihedral", "d": "dihedral",
    "quaternion": "quaternion", "q": "quaternion",
    "semidihedral": "semidihedral", "sd": "semidihedral",
    "elementary_abelian": "elementary_abelian",
    "direct_product": "direct_product",
    "trivial": "trivial",
}


def _split_args(s: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


def from_spec(spec: str, order_cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    """Build a group from text such as ``heisenberg(3)``, ``heisenberg3``, ``D8``,
    ``C9xC3`` or ``direct_product(cyclic(9), cyclic(3))``."""
    s = spec.strip()
    if re.fullmatch(r"[A-Za-z]+\d+(?:\^\d+)?(?:x[A-Za-z]+\d+(?:\^\d+)?)+", s):
        parts = s.split("x")
        g = from_spec(parts[0], order_cap)
        for part in parts[1:]:
            g = direct_product(g, from_spec(part, order_cap), order_cap)
        return g
    m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*?)\s*\((.*)\)", s)
    if m:
        name, args = m.group(1).lower(), _split_args(m.group(2))
    else:
        m = re.fullmatch(r"([A-Za-z_]+?)(\d+)(?:\^(\d+))?", s)
        if not m:
            if s.lower() in ("trivial", "1"):
                return trivial_group()
            raise GroupError(f"unknown group spec {spec!r}")
        name, args = m.group(1).lower(), [m.group(2)]
        if m.group(3):
            name, args = "elementary_abelian", [m.group(2), m.group(3)]
            if not is_prime(int(args[0])):
                g = cyclic(int(m.group(2)), order_cap)
                for _ in range(int(m.group(3)) - 1):
                    g = direct_product(g, cyclic(int(m.group(2)), order_cap), order_cap)
                return g
    kind = _ALIASES.get(name)
    if kind is None:
        raise GroupError(f"unknown group constructor {name!r}")
    try:
        if kind == "direct_product":
            if len(args) < 2:
                raise GroupError("direct_product needs two factors")
            g = from_spec(args[0], order_cap)
            for a in args[1:]:
                g = direct_product(g, from_spec(a, order_cap), order_cap)
            return g
        nums = [int(a) for a in args]
    except ValueError as exc:
        raise GroupError(f"bad arguments in {spec!r}") from exc
    if kind == "cyclic":
        return cyclic(*nums, order_cap=order_cap)
    if kind == "elementary_abelian":
        return elementary_abelian(*nums, order_cap=order_cap)
    if kind == "heisenberg":
        return heisenberg(*nums, order_cap=order_cap)
    if kind == "extraspecial_exp_p2":
        return extraspecial_exp_p2(*nums, order_cap=order_cap)
    if kind == "modular_extraspecial":
        # M27 style: the argument is the order p^3
        p = prime_power_base(nums[0])
        if p is None or p ** 3 != nums[0]:
            raise GroupError(f"M{nums[0]}: order must be a prime cube")
        return extraspecial_exp_p2(p, order_cap=order_cap)
    if kind == "dihedral":
        return dihedral(*nums, order_cap=order_cap)
    if kind == "semidihedral":
        return semidihedral(*nums, order_cap=order_cap)
    if kind == "quaternion":
        return quaternion(*nums, order_cap=order_cap)
    if kind == "trivial":
        return trivial_group()
    raise GroupError(f"unknown group spec {spec!r}")


# ------------------------------------------------------ reference presentations

def _comm(x: str, y: str) -> str:
    return f"{x}^-1*{y}^-1*{x}*{y}"


def reference_presentation(kind: str, *args: int) -> tuple[str, list[int]]:
    """Presentation text for a catalog constructor, plus the element of the
    catalog table that each generator corresponds to (in generator order)."""
    if kind == "cyclic":
        (n,) = args
        return f"<a | a^{n}>", [1 % n]
    if kind == "elementary_abelian":
        p, k = args
        names = [f"x{i}" for i in range(1, k + 1)]
        rels = [f"{x}^{p}" for x in names]
        rels += [_comm(names[i], names[j]) for i in range(k) for j in range(i + 1, k)]
        return "<" + ",".join(names) + " | " + ", ".join(rels) + ">", [p ** (k - 1 - i) for i in range(k)]
    if kind == "dihedral":
        (n,) = args
        return f"<r,s | r^{n // 2}, s^2, (s*r)^2>", [2, 1]
    if kind == "semidihedral":
        (n,) = args
        m = n // 2
        return f"<r,s | r^{m}, s^2, s*r*s*r^{-(m // 2 - 1)}>", [2, 1]
    if kind == "quaternion":
        (n,) = args
        m = n // 2
        return f"<a,b | a^{m}, b^2*a^{-(m // 2)}, b*a*b^-1*a>", [2, 1]
    if kind == "heisenberg":
        (p,) = args
        c = f"({_comm('x', 'y')})"
        rels = [f"x^{p}", f"y^{p}", f"{c}^{p}", _comm("x", c), _comm("y", c)]
        return "<x,y | " + ", ".join(rels) + ">", [p * p, p]
    if kind == "extraspecial_exp_p2":
        (p,) = args
        return f"<a,b | a^{p * p}, b^{p}, b*a*b^-1*a^{-(1 + p)}>", [p, 1]
    raise GroupError(f"no reference presentation for {kind!r}")


CONSTRUCTORS = {
    "cyclic": cyclic,
    "elementary_abelian": elementary_abelian,
    "dihedral": dihedral,
    "semidihedral": semidihedral,
    "quaternion": quaternion,
    "heisenberg": heisenberg,
    "extraspecial_exp_p2": extraspecial_exp_p2,
}


def catalog_entries(p: int, max_order: int) -> list[tuple[str, tuple[int, ...]]]:
    """Every (constructor, arguments) pair producing a p-group of order <= max_order
    (order > 1), in a fixed order."""
    if not is_prime(p):
        raise GroupError(f"{p} is not prime")
    out: list[tuple[str, tuple[int, ...]]] = []
    e = 1
    while p ** e <= max_order:
        out.append(("cyclic", (p ** e,)))
        e += 1
    k = 2
    while p ** k <= max_order:
        out.append(("elementary_abelian", (p, k)))
        k += 1
    if p ** 3 <= max_order:
        out.append(("heisenberg", (p,)))
        out.append(("extraspecial_exp_p2", (p,)))
    if p == 2:
        n = 8
        while n <= max_order:
            out.append(("dihedral", (n,)))
            out.append(("quaternion", (n,)))
            if n >= 16:
                out.append(("semidihedral", (n,)))
            n *= 2
    return out


def entry_name(kind: str, args: tuple[int, ...]) -> str:
    return f"{kind}({', '.join(str(a) for a in args)})"
