"""Finitely generated abelian groups as integer relation matrices.

Used as an independent oracle for tensor products of abelian groups with
trivial actions: Z^k / rows(R_A) (x) Z^l / rows(R_B) is presented by the rows
of R_A (x) I_l stacked on I_k (x) R_B.
"""

from __future__ import annotations


def smith_diagonal(rows: list[list[int]]) -> list[int]:
    """Diagonal of the Smith normal form (d_1 | d_2 | ...), zeros included."""
    a = [list(map(int, r)) for r in rows if any(r)]
    if not a:
        return []
    m, n = len(a), len(a[0])
    diag: list[int] = []
    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero absolute value in the remaining block
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        a[t], a[i] = a[i], a[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        while True:
            done = True
            p = a[t][t]
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    for r in a:
                        r[j] -= q * r[t]
                if a[t][j]:
                    done = False
            if done:
                # divisibility: fold any entry not divisible by the pivot into row t
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p), None)
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            # move the smallest remaining entry of row/column t to the pivot
            best = (t, t)
            for i in range(t, m):
                if a[i][t] and abs(a[i][t]) < abs(a[best[0]][best[1]]):
                    best = (i, t)
            for j in range(t, n):
                if a[t][j] and abs(a[t][j]) < abs(a[best[0]][best[1]]):
                    best = (t, j)
            i, j = best
            a[t], a[i] = a[i], a[t]
            for r in a:
                r[t], r[j] = r[j], r[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def invariant_factors(rows: list[list[int]], ngens: int) -> tuple[int, ...]:
    """Torsion invariant factors (> 1) of Z^ngens / rows; raises for infinite groups."""
    d = smith_diagonal(rows)
    if len([x for x in d if x]) < ngens:
        raise ValueError("group is infinite")
    return tuple(x for x in d if x > 1)


def relation_matrix(cyclic_orders: list[int]) -> list[list[int]]:
    k = len(cyclic_orders)
    return [[n if i == j else 0 for j in range(k)] for i, n in enumerate(cyclic_orders)]


def tensor_relations(ra: list[list[int]], ka: int, rb: list[list[int]], kb: int) -> list[list[int]]:
    rows = []
    for r in ra:
        for j in range(kb):
            row = [0] * (ka * kb)
            for i in range(ka):
                row[i * kb + j] = r[i]
            rows.append(row)
    for r in rb:
        for i in range(ka):
            row = [0] * (ka * kb)
            for j in range(kb):
                row[i * kb + j] = r[j]
            rows.append(row)
    return rows


def abelian_tensor_invariants(a: list[int], b: list[int]) -> tuple[int, ...]:
    """Invariant factors of (+) Z/a_i  (x)_Z  (+) Z/b_j."""
    if not a or not b:
        return ()
    rows = tensor_relations(relation_matrix(a), len(a), relation_matrix(b), len(b))
    return invariant_factors(rows, len(a) * len(b))


def invariants_of_product(orders: list[int]) -> tuple[int, ...]:
    return invariant_factors(relation_matrix(orders), len(orders)) if orders else ()
