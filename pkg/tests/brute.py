"""Slow, obviously-correct set arithmetic used as an oracle in tests."""

from itertools import product


def inverses(mult):
    n = len(mult)
    return [next(y for y in range(n) if mult[x][y] == 0) for x in range(n)]


def closure(mult, seeds):
    elems = {0}
    frontier = [0]
    seeds = list(seeds)
    while frontier:
        nxt = []
        for x in frontier:
            for s in seeds:
                z = int(mult[x][s])
                if z not in elems:
                    elems.add(z)
                    nxt.append(z)
        frontier = nxt
    return elems


def comm(mult, inv, x, y):
    return int(mult[mult[inv[x]][inv[y]]][mult[x][y]])


def commutator_subgroup(mult, a, b):
    inv = inverses(mult)
    return closure(mult, {comm(mult, inv, x, y) for x, y in product(a, b)})


def power(mult, x, e):
    r = 0
    for _ in range(e):
        r = int(mult[r][x])
    return r


def power_subgroup(mult, a, e):
    return closure(mult, {power(mult, x, e) for x in a})


def center(mult):
    n = len(mult)
    return {x for x in range(n) if all(mult[x][y] == mult[y][x] for y in range(n))}


def is_normal(mult, s):
    inv = inverses(mult)
    return all(mult[mult[inv[g]][x]][g] in s for g in range(len(mult)) for x in s)


def lower_central(mult):
    g = set(range(len(mult)))
    terms = [g]
    while True:
        nxt = commutator_subgroup(mult, terms[-1], g)
        if nxt == terms[-1]:
            return terms
        terms.append(nxt)


def element_order(mult, x):
    k, y = 1, x
    while y != 0:
        y = int(mult[y][x])
        k += 1
    return k


def order_histogram(mult):
    hist = {}
    for x in range(len(mult)):
        o = element_order(mult, x)
        hist[o] = hist.get(o, 0) + 1
    return hist
