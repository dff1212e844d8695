"""Finitely presented groups: words, presentations, Todd-Coxeter enumeration,
and resolution of large presentations into multiplication tables.

Words are tuples of nonzero ints: ``k`` is generator k (1-based), ``-k`` its
inverse.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, field

import numpy as np

from . import _tc_kernel as kernel
from .group import (
    GroupError,
    GroupTable,
    ResourceError,
    make_group,
    normal_closure,
    prime_power_base,
    quotient_group,
)

DEFAULT_MAX_COSETS = 2_000_000

Word = tuple


class PresentationError(GroupError):
    pass


class EnumerationExceeded(ResourceError):
    pass


# ------------------------------------------------------------------ words

def reduce(w) -> Word:
    out: list[int] = []
    for x in w:
        if x == 0:
            raise PresentationError("letter 0 is not a generator")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w) -> Word:
    w = list(reduce(w))
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return tuple(w[i:j + 1])


def inverse(w) -> Word:
    return tuple(-x for x in reversed(w))


def canonical_relator(w) -> Word:
    """Least rotation of w or its inverse: equal for relators with the same normal closure."""
    w = cyclic_reduce(w)
    if not w:
        return w
    n = len(w)
    best = None
    for cand in (w, inverse(w)):
        # the least rotation starts at an occurrence of the least letter
        low = min(cand)
        doubled = cand + cand
        r = min(doubled[i:i + n] for i, x in enumerate(cand) if x == low)
        if best is None or r < best:
            best = r
    return best


# ------------------------------------------------------------ presentations

@dataclass
class Presentation:
    generator_count: int
    relators: list[Word]
    generator_labels: list[str] | None = None

    def __post_init__(self):
        self.relators = [tuple(int(x) for x in r) for r in self.relators]
        for r in self.relators:
            for x in r:
                if x == 0 or abs(x) > self.generator_count:
                    raise PresentationError(f"letter {x} out of range in relator {r}")
        if self.generator_labels is not None and len(self.generator_labels) != self.generator_count:
            raise PresentationError("label count does not match generator count")

    def labels(self) -> list[str]:
        if self.generator_labels:
            return list(self.generator_labels)
        return [f"x{i}" for i in range(1, self.generator_count + 1)]

    def to_json(self) -> dict:
        d = {"generators": self.generator_count, "relators": [list(r) for r in self.relators]}
        if self.generator_labels:
            d["labels"] = list(self.generator_labels)
        return d

    @classmethod
    def from_json(cls, data: dict) -> "Presentation":
        try:
            return cls(int(data["generators"]), [tuple(r) for r in data["relators"]], data.get("labels"))
        except (KeyError, TypeError, ValueError) as exc:
            raise PresentationError(f"bad presentation JSON: {exc}") from exc

    def to_text(self) -> str:
        labels = self.labels()
        simple = all(re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", s) for s in labels)
        if not simple:
            labels = [f"x{i}" for i in range(1, self.generator_count + 1)]
        return "<" + ",".join(labels) + " | " + ", ".join(word_to_text(r, labels) for r in self.relators) + ">"


def word_to_text(w, labels: list[str]) -> str:
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        name = labels[abs(w[i]) - 1]
        e = (j - i) * (1 if w[i] > 0 else -1)
        parts.append(name if e == 1 else f"{name}^{e}")
        i = j
    return "*".join(parts)


_TOKEN = re.compile(r"\s*(?:(\()|(\))|(\*)|(\^)|(-?\d+)|([A-Za-z_][A-Za-z_0-9]*))")


class _WordParser:
    def __init__(self, text: str, names: dict[str, int]):
        self.toks: list[tuple[str, str]] = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise PresentationError(f"cannot parse word near {text[pos:]!r}")
            kinds = ["(", ")", "*", "^", "int", "name"]
            for k, g in zip(kinds, m.groups()):
                if g is not None:
                    self.toks.append((k, g))
            pos = m.end()
        self.i = 0
        self.names = names

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind):
        k, v = self.peek()
        if k != kind:
            raise PresentationError(f"expected {kind}, got {v!r}")
        self.i += 1
        return v

    def word(self) -> Word:
        out: list[int] = []
        out.extend(self.factor())
        while True:
            k, _ = self.peek()
            if k == "*":
                self.i += 1
                out.extend(self.factor())
            elif k in ("(", "name"):
                out.extend(self.factor())
            else:
                return tuple(out)

    def factor(self) -> Word:
        k, v = self.peek()
        if k == "(":
            self.i += 1
            base = self.word()
            self.take(")")
        elif k == "name":
            self.i += 1
            if v not in self.names:
                raise PresentationError(f"unknown generator {v!r}")
            base = (self.names[v],)
        elif k == "int" and v == "1":
            self.i += 1
            base = ()
        else:
            raise PresentationError(f"unexpected token {v!r}")
        if self.peek()[0] == "^":
            self.i += 1
            e = int(self.take("int"))
            base = base * e if e >= 0 else inverse(base) * (-e)
        return base


def parse_presentation(text: str) -> Presentation:
    """Parse ``<a,b | a^2, b^2, (a*b)^3>``."""
    m = re.fullmatch(r"\s*<(.*?)(?:\|(.*))?>\s*", text, re.S)
    if not m:
        raise PresentationError("presentation must look like <gens | relators>")
    gens = [g.strip() for g in m.group(1).split(",") if g.strip()]
    if not gens:
        raise PresentationError("presentation needs at least one generator")
    if len(set(gens)) != len(gens):
        raise PresentationError("duplicate generator names")
    for g in gens:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", g):
            raise PresentationError(f"bad generator name {g!r}")
    names = {g: i + 1 for i, g in enumerate(gens)}
    rels: list[Word] = []
    body = (m.group(2) or "").strip()
    if body:
        depth, cur = 0, ""
        pieces = []
        for ch in body:
            if ch == "," and depth == 0:
                pieces.append(cur)
                cur = ""
                continue
            depth += ch == "("
            depth -= ch == ")"
            cur += ch
        pieces.append(cur)
        for piece in pieces:
            piece = piece.strip()
            if not piece:
                continue
            if "=" in piece:
                lhs, rhs = piece.split("=", 1)
                lw = _parse_word(lhs, names)
                rw = _parse_word(rhs, names)
                rels.append(reduce(lw + inverse(rw)))
            else:
                rels.append(reduce(_parse_word(piece, names)))
    return Presentation(len(gens), rels, gens)


def _parse_word(text: str, names: dict[str, int]) -> Word:
    p = _WordParser(text, names)
    w = p.word()
    if p.i != len(p.toks):
        raise PresentationError(f"trailing input in {text!r}")
    return w


def load_presentation(text: str) -> Presentation:
    """Accept either the text form or a JSON object."""
    import json

    s = text.strip()
    if s.startswith("{"):
        return Presentation.from_json(json.loads(s))
    return parse_presentation(s)


# --------------------------------------------------------------- enumeration

@dataclass
class CosetTable:
    coset_count: int
    generator_count: int
    action: np.ndarray | None  # shape (coset_count, 2 * generator_count); column 2g+1 is g^-1
    status: str = "complete"

    def apply(self, coset: int, word) -> int:
        for x in word:
            coset = int(self.action[coset, _col(x)])
        return coset

    def to_json(self) -> dict:
        return {"coset_count": self.coset_count, "generators": self.generator_count,
                "status": self.status,
                "action": None if self.action is None else self.action.tolist()}

    def tobytes(self) -> bytes:
        return b"" if self.action is None else self.action.astype(np.int64).tobytes()


def _col(x: int) -> int:
    return 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1


def _flatten_signed(words) -> tuple[np.ndarray, np.ndarray]:
    lens = np.fromiter((len(w) for w in words), dtype=np.int64, count=len(words))
    offs = np.zeros(len(words) + 1, dtype=np.int64)
    np.cumsum(lens, out=offs[1:])
    flat = np.fromiter((x for w in words for x in w), dtype=np.int64, count=int(offs[-1]))
    return flat, offs


def _flatten(words) -> tuple[np.ndarray, np.ndarray]:
    offs = [0]
    flat: list[int] = []
    for w in words:
        flat.extend(_col(x) for x in w)
        offs.append(len(flat))
    return np.asarray(flat, dtype=np.int64), np.asarray(offs, dtype=np.int64)


def todd_coxeter(p: Presentation, subgroup_words=(), max_cosets: int = DEFAULT_MAX_COSETS) -> CosetTable:
    """HLT enumeration of the cosets of <subgroup_words>; raises EnumerationExceeded."""
    if max_cosets < 1:
        raise PresentationError("max_cosets must be positive")
    if p.generator_count == 0:
        return CosetTable(1, 0, np.zeros((1, 0), dtype=np.int64))
    rels = [reduce(r) for r in p.relators]
    rels = [r for r in rels if r]
    subs = [reduce(w) for w in subgroup_words]
    for w in subs:
        for x in w:
            if abs(x) > p.generator_count:
                raise PresentationError(f"subgroup word letter {x} out of range")
    ncols = 2 * p.generator_count
    rflat, roffs = _flatten(rels)
    sflat, soffs = _flatten(subs)
    status, table, n = kernel.enumerate_hlt(ncols, rflat, roffs, sflat, soffs, int(max_cosets), 1024)
    if status != kernel.DONE:
        raise EnumerationExceeded(f"coset enumeration exceeded {max_cosets} cosets")
    std = kernel.standardize(table, n, ncols)
    return CosetTable(int(n), p.generator_count, std)


def table_to_group(ct: CosetTable, p: Presentation | None = None, name: str = "G",
                   validate: bool = True, order_cap: int | None = None) -> tuple[GroupTable, list[int]]:
    """Regular representation of a complete coset table of the trivial subgroup."""
    if ct.status != "complete" or ct.action is None:
        raise PresentationError("coset table is not complete")
    n = ct.coset_count
    act = ct.action
    if act.shape[1] == 0:
        g = make_group(np.zeros((1, 1), dtype=np.int32), name=name)
        return g, []
    # spanning tree from coset 0
    parent = np.full(n, -1, dtype=np.int64)
    pcol = np.full(n, -1, dtype=np.int64)
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    bfs = [0]
    for c in bfs:
        for x in range(act.shape[1]):
            d = int(act[c, x])
            if not seen[d]:
                seen[d] = True
                parent[d] = c
                pcol[d] = x
                bfs.append(d)
    if len(bfs) != n:
        raise PresentationError("coset table is not connected")
    dtype = np.int32 if n < 2**31 else np.int64
    mult = np.empty((n, n), dtype=dtype)
    mult[:, 0] = np.arange(n)
    for d in bfs[1:]:
        mult[:, d] = act[mult[:, parent[d]], pcol[d]]
    prime = prime_power_base(n)
    kwargs = {} if order_cap is None else {"order_cap": order_cap}
    g = make_group(mult, name=name, prime=prime, validate=validate, **kwargs)
    gens = [int(act[0, 2 * i]) for i in range(ct.generator_count)]
    if p is not None:
        bad = relator_violations(g, gens, p.relators)
        if bad:
            raise PresentationError(f"relator {p.relators[bad[0]]} fails in the enumerated group")
    return g, gens


# ------------------------------------------------------------ evaluation

def evaluate_words(g: GroupTable, gen_images, words) -> np.ndarray:
    """Evaluate many words at once; returns element indices."""
    words = list(words)
    if not words:
        return np.zeros(0, dtype=np.int64)
    imgs = np.asarray(gen_images, dtype=np.int64)
    invs = g.inv[imgs] if len(imgs) else imgs
    # letter table: index 0 = identity padding, k -> gen k, -k -> inverse
    k = len(imgs)
    lut = np.zeros(2 * k + 1, dtype=np.int64)
    lut[1:k + 1] = imgs
    lut[k + 1:] = invs
    out = np.zeros(len(words), dtype=np.int64)
    lengths = np.fromiter((len(w) for w in words), dtype=np.int64, count=len(words))
    order = np.argsort(lengths, kind="stable")
    # bucket by length to keep padding small
    start = 0
    while start < len(words):
        L = lengths[order[start]]
        stop = start
        limit = max(2 * L, 8)
        while stop < len(words) and lengths[order[stop]] <= limit:
            stop += 1
        idx = order[start:stop]
        width = int(lengths[idx].max())
        arr = np.zeros((len(idx), width), dtype=np.int64)
        for row, wi in enumerate(idx):
            w = words[wi]
            if w:
                a = np.asarray(w, dtype=np.int64)
                arr[row, :len(w)] = np.where(a > 0, a, k - a)
        vals = np.zeros(len(idx), dtype=np.int64)
        for pos in range(width):
            vals = g.mult[vals, lut[arr[:, pos]]]
        out[idx] = vals
        start = stop
    return out


def relator_violations(g: GroupTable, gen_images, relators) -> list[int]:
    vals = evaluate_words(g, gen_images, relators)
    return np.nonzero(vals != 0)[0].tolist()


# --------------------------------------------------------- Tietze elimination

@dataclass
class Reduction:
    """Result of eliminating generators: ``definitions[g]`` is a word in the
    base generators (new 1-based numbering in ``base``) for original generator g."""
    base: list[int]
    definitions: dict[int, Word]
    relators: list[Word]
    stats: dict = field(default_factory=dict)


def eliminate_generators(p: Presentation, trivial=(), max_def_len: int = 10**6) -> Reduction:
    """Greedy elimination: repeatedly define an unknown generator from a relator
    in which it is the only unknown and occurs once, shortest definitions first.
    When nothing is definable, promote the most-constrained unknown to a base
    generator. ``trivial`` generators are known to be the identity.
    """
    ng = p.generator_count
    rels = [reduce(r) for r in p.relators]
    rels = [r for r in rels if r]
    occ: list[list[int]] = [[] for _ in range(ng + 1)]
    unknown_count = np.zeros(len(rels), dtype=np.int64)
    for ri, r in enumerate(rels):
        gens = set(abs(x) for x in r)
        unknown_count[ri] = len(gens)
        for x in gens:
            occ[x].append(ri)
    known: dict[int, Word] = {}
    base: list[int] = []
    heap: list[tuple[int, int, int]] = []

    def expand(w) -> Word:
        out: list[int] = []
        for x in w:
            d = known[abs(x)]
            out.extend(d if x > 0 else inverse(d))
        return reduce(out)

    def mark_known(g: int, word: Word) -> None:
        known[g] = word
        for ri in occ[g]:
            unknown_count[ri] -= 1
            if unknown_count[ri] == 1:
                push(ri)

    def push(ri: int) -> None:
        r = rels[ri]
        unk = [x for x in r if abs(x) not in known]
        if len(unk) != 1:
            return
        est = sum(len(known[abs(x)]) for x in r if abs(x) in known)
        heapq.heappush(heap, (est, ri, abs(unk[0])))

    for g in trivial:
        if g not in known:
            mark_known(g, ())

    remaining = set(range(1, ng + 1)) - set(known)
    # score = number of relators with few unknowns that mention the generator
    while remaining:
        while heap:
            est, ri, g = heapq.heappop(heap)
            if g in known:
                continue
            r = rels[ri]
            pos = [i for i, x in enumerate(r) if abs(x) == g]
            if len(pos) != 1:
                continue
            i = pos[0]
            # r = u x^e v = 1  =>  x^e = u^-1 v^-1
            u, v = r[:i], r[i + 1:]
            # x = u^-1 v^-1, or x = v u when the letter is x^-1
            rhs = expand(inverse(u) + inverse(v)) if r[i] > 0 else expand(v + u)
            if len(rhs) > max_def_len:
                continue
            mark_known(g, rhs)
            remaining.discard(g)
        if not remaining:
            break
        best, best_score = None, None
        for g in sorted(remaining):
            score = 0
            for ri in occ[g]:
                if unknown_count[ri] == 2:
                    score += 1
            key = (score, len(occ[g]), -g)
            if best_score is None or key > best_score:
                best, best_score = g, key
        base.append(best)
        mark_known(best, (len(base),))
        remaining.discard(best)

    defs = [known[g] for g in range(1, ng + 1)]
    dflat, doffs = _flatten_signed(defs)
    rflat, roffs = _flatten_signed(rels)
    eflat, eoffs = kernel.expand_and_reduce(rflat, roffs, dflat, doffs)
    cflat, coffs = kernel.canonical_words(eflat, eoffs)
    cl = cflat.tolist()
    co = coffs.tolist()
    new_rels = {tuple(cl[a:b]) for a, b in zip(co[:-1], co[1:]) if b > a}
    ordered = sorted(new_rels, key=lambda w: (len(w), w))
    return Reduction(base, {g: known[g] for g in range(1, ng + 1)}, ordered,
                     {"original_generators": ng, "original_relators": len(rels),
                      "base_generators": len(base), "reduced_relators": len(ordered)})


def exponent_sum_matrix(nb: int, relators) -> np.ndarray:
    flat, offs = _flatten_signed(relators)
    rows = np.repeat(np.arange(len(relators)), np.diff(offs))
    m = np.zeros((len(relators), nb), dtype=np.int64)
    np.add.at(m, (rows, np.abs(flat) - 1), np.sign(flat))
    return m


def local_invariant_exponents(m: np.ndarray, p: int, k: int) -> list[int]:
    """Exponents e_i of Z^n / rows(m) tensored with Z/p^k, i.e. the summands Z/p^e_i.

    Smith form over the local ring Z/p^k: the pivot is always an entry of least
    p-valuation, so row elimination alone is exact.
    """
    mod = p ** k
    if mod * mod >= 1 << 63:
        raise ValueError("p^k too large for int64 elimination")
    a = np.mod(m, mod)
    n = a.shape[1]
    out: list[int] = []
    while a.shape[1]:
        a = a[a.any(axis=1)]
        if not len(a):
            break
        a = np.unique(a, axis=0)
        j = 0
        while not (a % p ** (j + 1)).any():
            j += 1
        r, c = (int(x[0]) for x in np.nonzero(a % p ** (j + 1)))
        pj = p ** j
        unit = int(a[r, c]) // pj
        row = a[r] * pow(unit, -1, mod) % mod
        others = np.delete(a, r, axis=0)
        a = (others - np.outer(others[:, c] // pj, row)) % mod
        a = np.delete(a, c, axis=1)
        out.append(j)
    out.extend([k] * (n - len(out)))
    return [e for e in out if e]


def abelian_order_bound(nb: int, relators, p: int, cap: int = 1 << 31) -> int:
    """|G_ab (x) Z/p^k| for the largest p^k <= cap, a lower bound for |G|."""
    k = 1
    while p ** (k + 1) <= cap:
        k += 1
    return p ** sum(local_invariant_exponents(exponent_sum_matrix(nb, relators), p, k))


@dataclass
class Resolved:
    group: GroupTable
    images: np.ndarray  # image of every original generator (index 0 unused)
    stats: dict


def resolve_presentation(p: Presentation, trivial=(), max_cosets: int = DEFAULT_MAX_COSETS,
                         order_cap: int = 1 << 16, name: str = "G", validate: bool = True,
                         group_order_cap: int | None = None, bound_prime: int | None = 2) -> Resolved:
    """Resolve a (possibly huge) presentation of a finite group into a table.

    Generators are eliminated, Todd-Coxeter runs on growing subsets of the
    reduced relators, and the remaining relators are imposed by a quotient of
    the enumerated group. Every original relator is then checked in the result.
    """
    red = eliminate_generators(p, trivial)
    nb = len(red.base)
    stats = dict(red.stats)
    if nb == 0:
        g = make_group(np.zeros((1, 1), dtype=np.int32), name=name)
        images = np.zeros(p.generator_count + 1, dtype=np.int64)
        return Resolved(g, images, stats)
    rels = red.relators
    bound = 1
    if bound_prime is not None and nb <= 512:
        bound = abelian_order_bound(nb, rels, bound_prime)
        stats["abelian_lower_bound"] = bound
        if bound > order_cap:
            raise EnumerationExceeded(f"group order is at least {bound}, above cap {order_cap}")
    full_cap = min(max_cosets, 4 * order_cap + 1024)
    # partial relator sets often present much larger groups; give up on those early
    trial_cap = min(full_cap, max(2048, 16 * bound))
    subset = min(len(rels), max(64, 4 * nb))
    attempts = 0
    while True:
        attempts += 1
        sub_p = Presentation(nb, rels[:subset])
        try:
            ct = todd_coxeter(sub_p, (), max_cosets=full_cap if subset == len(rels) else trial_cap)
            if ct.coset_count <= order_cap or subset == len(rels):
                break
        except EnumerationExceeded:
            if subset == len(rels):
                raise
        subset = min(len(rels), subset * 4)
    if ct.coset_count > order_cap:
        raise EnumerationExceeded(f"group order {ct.coset_count} exceeds cap {order_cap}")
    cap_kwargs = {"order_cap": max(order_cap, ct.coset_count)} if group_order_cap is None else {"order_cap": group_order_cap}
    big, gens = table_to_group(ct, None, name=name, validate=False, **cap_kwargs)
    vals = evaluate_words(big, gens, rels[subset:])
    bad = np.unique(vals[vals != 0])
    stats.update({"relators_enumerated": subset, "enumeration_attempts": attempts,
                  "enumerated_order": ct.coset_count})
    if len(bad):
        nc = normal_closure(big, bad.tolist())
        q, proj = quotient_group(big, nc, name=name)
        gens = [int(proj.image[x]) for x in gens]
        g = q
    else:
        g = big
    if validate:
        from .group import validate_table
        v = validate_table(g)
        if v is not None:
            raise PresentationError(f"resolved table violates {v['axiom']}")
    g = GroupTable(g.mult, name=name, prime=prime_power_base(g.order), inv=g.inv)
    # images of all original generators
    images = np.zeros(p.generator_count + 1, dtype=np.int64)
    defs = [red.definitions[i] for i in range(1, p.generator_count + 1)]
    images[1:] = evaluate_words(g, gens, defs)
    bad_orig = relator_violations(g, images[1:], p.relators)
    if bad_orig:
        raise PresentationError(f"original relator {p.relators[bad_orig[0]]} fails after resolution")
    stats["order"] = g.order
    return Resolved(g, images, stats)
