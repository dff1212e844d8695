"""Non-abelian tensor products M (x) N and tensor products modulo q of crossed
modules, built by instantiating the defining relations over all elements and
resolving the resulting presentation.

Conventions: actions are left actions, M and N act on each other and on
themselves through G, and [x, y] = x y x^-1 y^-1 throughout this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .crossed import (
    CrossedModule,
    CrossedSquare,
    Pullback,
    identity_crossed_module,
    inclusion_crossed_module,
    pullback,
    validate_crossed_module,
)
from .fp import DEFAULT_MAX_COSETS, Presentation, evaluate_words, resolve_presentation
from .group import (
    DEFAULT_ORDER_CAP,
    ActionByAutomorphisms,
    GroupError,
    GroupTable,
    Homomorphism,
    ResourceError,
    SubgroupRef,
    center,
    extend_from_generators,
    generating_subset,
    hom_violation_on_generators,
    power_subgroup,
    product_of_subgroups,
    subgroup_closure,
)

PLAIN_FACTOR_CAP = 32
Q_FACTOR_CAP = 16
EXHAUSTIVE_CAP = 4096
SAMPLES = 10_000


class TensorError(GroupError):
    pass


@dataclass
class TensorCaps:
    """Resource gates. ``factor_cap`` bounds |M| and |N| (default 32 for plain,
    16 for mod q); the generator cap is factor_cap^2 (plain) or 2 factor_cap^2."""
    factor_cap: int | None = None
    order_cap: int = DEFAULT_ORDER_CAP
    max_cosets: int = DEFAULT_MAX_COSETS

    def factor(self, q: int | None) -> int:
        if self.factor_cap is not None:
            return self.factor_cap
        return PLAIN_FACTOR_CAP if q is None else Q_FACTOR_CAP


@dataclass(eq=False)
class TensorResult:
    group: GroupTable
    kind: str  # "plain" or "mod_q"
    q: int | None
    mu: CrossedModule
    nu: CrossedModule
    gen_map: np.ndarray  # |M| x |N|
    brace_map: np.ndarray | None  # |K|
    alpha: Homomorphism
    beta: Homomorphism
    action: ActionByAutomorphisms  # G on the tensor
    pull: Pullback | None
    presentation: Presentation
    generators: list[int]  # generating subset of group
    generator_symbols: list[int]  # presentation generator behind each of them
    symbol_images: np.ndarray  # element for every presentation generator (index 0 unused)
    stats: dict = field(default_factory=dict)

    @property
    def g(self) -> GroupTable:
        return self.mu.g

    def kappa(self) -> Homomorphism:
        """L -> G, equal to mu after alpha and to nu after beta."""
        return Homomorphism(self.group, self.g, self.mu.mu.image[self.alpha.image])

    def as_crossed_module(self) -> CrossedModule:
        """kappa: L -> G with the G-action; a crossed module by axiom (i)."""
        return CrossedModule(self.group, self.g, self.kappa(), self.action)

    def square(self) -> CrossedSquare:
        return CrossedSquare(self.group, self.mu, self.nu, self.alpha, self.beta,
                             self.gen_map, self.action)

    def to_json(self) -> dict:
        d = {"kind": self.kind, "q": self.q, "order": self.group.order,
             "name": self.group.name,
             "mult": self.group.mult.tolist(),
             "gen_map": [[int(m), int(n), int(self.gen_map[m, n])]
                         for m in range(self.gen_map.shape[0]) for n in range(self.gen_map.shape[1])],
             "alpha": self.alpha.image.tolist(), "beta": self.beta.image.tolist(),
             "stats": self.stats}
        if self.brace_map is not None:
            d["brace_map"] = [[int(a), int(b), int(self.brace_map[k])]
                              for k, (a, b) in enumerate(self.pull.pairs)]
        return d


# ----------------------------------------------------------- presentations

class _Symbols:
    """Numbering of the generating symbols m (x) n (m, n != 1) and {k}."""

    def __init__(self, nm: int, nn: int, nk: int = 0):
        self.nm, self.nn, self.nk = nm, nn, nk
        self.tensor_count = (nm - 1) * (nn - 1)
        self.count = self.tensor_count + nk
        ids = np.zeros((nm, nn), dtype=np.int64)
        if nm > 1 and nn > 1:
            ids[1:, 1:] = np.arange(1, self.tensor_count + 1).reshape(nm - 1, nn - 1)
        self.ids = ids

    def brace(self, k):
        return self.tensor_count + 1 + np.asarray(k)

    def labels(self) -> list[str]:
        out = [f"t{m}_{n}" for m in range(1, self.nm) for n in range(1, self.nn)]
        out += [f"k{k}" for k in range(self.nk)]
        return out


def _rows_to_words(rows: np.ndarray) -> list[tuple]:
    """Signed symbol rows (0 = identity, dropped) to distinct nonempty words."""
    seen = set()
    out = []
    for r in rows.tolist():
        w = tuple(x for x in r if x != 0)
        if w and w not in seen:
            seen.add(w)
            out.append(w)
    return out


def _check_modules(mu: CrossedModule, nu: CrossedModule) -> None:
    if mu.g is not nu.g:
        raise TensorError("crossed modules must share their codomain")
    for cm in (mu, nu):
        bad = validate_crossed_module(cm)
        if bad is not None:
            raise TensorError(f"{cm.name} is not a crossed module: {bad}")


def _actions(mu: CrossedModule, nu: CrossedModule):
    aM, aN = mu.action.perm.astype(np.int64), nu.action.perm.astype(np.int64)
    mimg, nimg = mu.mu.image.astype(np.int64), nu.mu.image.astype(np.int64)
    return aM, aN, aM[nimg], aN[mimg], aM[mimg], aN[nimg]  # G-on-M, G-on-N, nM, mN, mM, nN


def build_tensor_presentation(mu: CrossedModule, nu: CrossedModule, caps: TensorCaps | None = None) -> Presentation:
    """Both expansion laws for every m, m' in M and n, n' in N."""
    caps = caps or TensorCaps()
    _check_modules(mu, nu)
    M, N = mu.m, nu.m
    cap = caps.factor(None)
    if M.order > cap or N.order > cap or M.order * N.order > cap * cap:
        raise ResourceError(f"plain tensor factors {M.order}, {N.order} exceed cap {cap}")
    return _plain_part(mu, nu, _Symbols(M.order, N.order))


def _plain_part(mu, nu, sym: _Symbols, nk: int = 0) -> Presentation:
    M, N = mu.m, nu.m
    _, _, nM, mN, mM, nN = _actions(mu, nu)
    g = sym.ids
    nm, nn = M.order, N.order
    # m (x) n n' = (m (x) n)(^n m (x) ^n n')
    m, n, n2 = np.meshgrid(np.arange(nm), np.arange(nn), np.arange(nn), indexing="ij")
    m, n, n2 = m.ravel(), n.ravel(), n2.ravel()
    r1 = np.stack([g[m, n], g[nM[n, m], nN[n, n2]], -g[m, N.mult[n, n2]]], axis=1)
    # m m' (x) n = (^m m' (x) ^m n)(m (x) n)
    m, m2, n = np.meshgrid(np.arange(nm), np.arange(nm), np.arange(nn), indexing="ij")
    m, m2, n = m.ravel(), m2.ravel(), n.ravel()
    r2 = np.stack([g[mM[m, m2], mN[m, n]], g[m, n], -g[M.mult[m, m2], n]], axis=1)
    rels = _rows_to_words(np.concatenate([r1, r2]))
    return Presentation(sym.count, rels, sym.labels())


def build_q_tensor_presentation(mu: CrossedModule, nu: CrossedModule, q: int,
                                caps: TensorCaps | None = None) -> tuple[Presentation, Pullback]:
    """The six relation families over all of M, N and K = M x_G N."""
    caps = caps or TensorCaps()
    if q < 1:
        raise TensorError("q must be positive")
    _check_modules(mu, nu)
    M, N, G = mu.m, nu.m, mu.g
    cap = caps.factor(q)
    if M.order > cap or N.order > cap:
        raise ResourceError(f"q-tensor factors {M.order}, {N.order} exceed cap {cap}")
    pb = pullback(mu, nu)
    K = pb.k
    nk = K.order
    sym = _Symbols(M.order, N.order, nk)
    if sym.count > 2 * cap * cap:
        raise ResourceError(f"{sym.count} generators exceed cap {2 * cap * cap}")
    base = _plain_part(mu, nu, sym)
    aM, aN, nM, mN, _, _ = _actions(mu, nu)
    g = sym.ids
    p1, p2 = pb.pairs[:, 0].astype(np.int64), pb.pairs[:, 1].astype(np.int64)
    gk = mu.mu.image.astype(np.int64)[p1]  # element of G through which k acts
    expo = G.exponent
    gk_q = G.power_map(q % expo if expo else 0)[gk]
    rows = []
    ks = np.arange(nk)
    # (3) {k}(m (x) n){k}^-1 = ^{k^q} m (x) ^{k^q} n
    k, m, n = np.meshgrid(ks, np.arange(1, M.order), np.arange(1, N.order), indexing="ij")
    k, m, n = k.ravel(), m.ravel(), n.ravel()
    bk = sym.brace(k)
    rows.append(np.stack([bk, g[m, n], -bk, -g[aM[gk_q[k], m], aN[gk_q[k], n]]], axis=1))
    # (4) {kk'} = {k} prod_{i=1}^{q-1} (pi1 k^-1 (x) (^{k^(1-q+i)} pi2 k')^i) {k'}
    k, k2 = np.meshgrid(ks, ks, indexing="ij")
    k, k2 = k.ravel(), k2.ravel()
    cols = [-sym.brace(K.mult[k, k2]), sym.brace(k)]
    a = M.inv[p1[k]].astype(np.int64)
    for i in range(1, q):
        e = (1 - q + i) % expo if expo else 0
        acted = aN[G.power_map(e)[gk[k]], p2[k2]]
        c = N.power_map(i)[acted].astype(np.int64)
        cols.append(g[a, c])
    cols.append(sym.brace(k2))
    rows.append(np.stack(cols, axis=1))
    # (5) [{k}, {k'}] = pi1 k^q (x) pi2 k'^q
    pm, pn = M.power_map(q).astype(np.int64), N.power_map(q).astype(np.int64)
    rows.append(np.stack([sym.brace(k), sym.brace(k2), -sym.brace(k), -sym.brace(k2),
                          -g[pm[p1[k]], pn[p2[k2]]]], axis=1))
    # (6) {(m ^n m^-1, ^m n n^-1)} = (m (x) n)^q
    m, n = np.meshgrid(np.arange(M.order), np.arange(N.order), indexing="ij")
    m, n = m.ravel(), n.ravel()
    first = M.mult[m, M.inv[nM[n, m]]]
    second = N.mult[mN[m, n], N.inv[n]]
    code = np.full((M.order, N.order), -1, dtype=np.int64)
    code[p1, p2] = ks
    kk = code[first, second]
    if (kk < 0).any():
        raise TensorError("commutator pair outside the pullback (actions inconsistent)")
    rows.append(np.concatenate([sym.brace(kk)[:, None], np.repeat(-g[m, n][:, None], q, axis=1)], axis=1))
    width = max(r.shape[1] for r in rows)
    padded = [np.pad(r, ((0, 0), (0, width - r.shape[1]))) for r in rows]
    extra = _rows_to_words(np.concatenate(padded))
    seen = set(base.relators)
    rels = list(base.relators) + [w for w in extra if w not in seen]
    return Presentation(sym.count, rels, sym.labels()), pb


# ---------------------------------------------------------------- building

def _verified_map(src: GroupTable, tgt: GroupTable, gens, gen_images, what: str) -> Homomorphism:
    img = extend_from_generators(src, gens, tgt, gen_images)
    bad = hom_violation_on_generators(src, tgt, img, gens)
    if bad is not None:
        raise TensorError(f"{what} is not a homomorphism (witness {bad})")
    return Homomorphism(src, tgt, img)


def _finish(pres: Presentation, mu, nu, q, pb, caps: TensorCaps, name: str,
            sym: _Symbols, validate: bool = True) -> TensorResult:
    M, N, G = mu.m, nu.m, mu.g
    prime = M.prime or N.prime or 2
    res = resolve_presentation(pres, max_cosets=caps.max_cosets, order_cap=caps.order_cap,
                               name=name, bound_prime=prime)
    T = res.group
    images = res.images
    gen_map = np.zeros((M.order, N.order), dtype=np.int64)
    gen_map[sym.ids > 0] = images[sym.ids[sym.ids > 0]]
    brace_map = images[sym.brace(np.arange(sym.nk))] if q is not None else None
    # generating subset drawn from symbols in numbering order
    cands = []
    cand_sym = {}
    for s in range(1, pres.generator_count + 1):
        e = int(images[s])
        if e not in cand_sym:
            cand_sym[e] = s
            cands.append(e)
    gens = generating_subset(T, cands)
    if T.order > 1 and not gens:
        raise TensorError("symbols do not generate the tensor group")
    gsyms = [cand_sym[e] for e in gens]

    aM, aN, nM, mN, _, _ = _actions(mu, nu)
    # expected alpha/beta on every symbol
    mm, nn = np.meshgrid(np.arange(M.order), np.arange(N.order), indexing="ij")
    a_exp = M.mult[mm, M.inv[nM[nn, mm]]]
    b_exp = N.mult[mN[mm, nn], N.inv[nn]]
    sym_alpha = np.zeros(pres.generator_count + 1, dtype=np.int64)
    sym_beta = np.zeros(pres.generator_count + 1, dtype=np.int64)
    mask = sym.ids > 0
    sym_alpha[sym.ids[mask]] = a_exp[mask]
    sym_beta[sym.ids[mask]] = b_exp[mask]
    if q is not None:
        p1, p2 = pb.pairs[:, 0], pb.pairs[:, 1]
        bids = sym.brace(np.arange(sym.nk))
        sym_alpha[bids] = M.power_map(q)[p1]
        sym_beta[bids] = N.power_map(q)[p2]
    alpha = _verified_map(T, M, gens, sym_alpha[gsyms], "alpha")
    beta = _verified_map(T, N, gens, sym_beta[gsyms], "beta")
    for what, hom, exp in (("alpha", alpha, sym_alpha), ("beta", beta, sym_beta)):
        got = hom.image[images[1:]]
        if not np.array_equal(got, exp[1:]):
            s = int(np.argmax(got != exp[1:])) + 1
            raise TensorError(f"{what} disagrees with its defining formula on symbol {pres.generator_labels[s - 1]}")

    # G-action on the tensor: ^g(m (x) n) = ^g m (x) ^g n and ^g{k} = {^g k}
    perm = np.zeros((G.order, T.order), dtype=np.int64)
    if q is not None:
        code = np.full((M.order, N.order), -1, dtype=np.int64)
        code[pb.pairs[:, 0], pb.pairs[:, 1]] = np.arange(len(pb.pairs))
    for gi in range(G.order):
        sym_img = np.zeros(pres.generator_count + 1, dtype=np.int64)
        sym_img[sym.ids[mask]] = gen_map[aM[gi][mm[mask]], aN[gi][nn[mask]]]
        if q is not None:
            kg = code[aM[gi][pb.pairs[:, 0]], aN[gi][pb.pairs[:, 1]]]
            sym_img[sym.brace(np.arange(sym.nk))] = brace_map[kg]
        hom = _verified_map(T, T, gens, sym_img[gsyms], f"action of {gi}")
        if not np.array_equal(hom.image[images[1:]], sym_img[1:]):
            raise TensorError(f"action of {gi} is not well defined on symbols")
        if len(np.unique(hom.image)) != T.order:
            raise TensorError(f"action of {gi} is not bijective")
        perm[gi] = hom.image
    action = ActionByAutomorphisms(G, T, perm)
    stats = dict(res.stats)
    stats.update({"generators": pres.generator_count, "relators": len(pres.relators)})
    result = TensorResult(T, "plain" if q is None else "mod_q", q, mu, nu, gen_map, brace_map,
                          alpha, beta, action, pb, pres, gens, gsyms, images, stats)
    if validate:
        bad = validate_tensor(result)
        if bad is not None:
            raise TensorError(f"structure law failed: {bad}")
    return result


def compute_tensor(mu: CrossedModule, nu: CrossedModule, caps: TensorCaps | None = None,
                   name: str | None = None, validate: bool = True) -> TensorResult:
    caps = caps or TensorCaps()
    pres = build_tensor_presentation(mu, nu, caps)
    sym = _Symbols(mu.m.order, nu.m.order)
    return _finish(pres, mu, nu, None, None, caps, name or f"{mu.m.name}(x){nu.m.name}", sym, validate)


def compute_q_tensor(mu: CrossedModule, nu: CrossedModule, q: int, caps: TensorCaps | None = None,
                     name: str | None = None, validate: bool = True) -> TensorResult:
    caps = caps or TensorCaps()
    pres, pb = build_q_tensor_presentation(mu, nu, q, caps)
    sym = _Symbols(mu.m.order, nu.m.order, pb.k.order)
    return _finish(pres, mu, nu, q, pb, caps, name or f"{mu.m.name}(x)^{q}{nu.m.name}", sym, validate)


def tensor_square(g: GroupTable, q: int | None = None, caps: TensorCaps | None = None) -> TensorResult:
    cm = identity_crossed_module(g)
    if q is None:
        return compute_tensor(cm, cm, caps)
    return compute_q_tensor(cm, cm, q, caps)


# ------------------------------------------------------------- validation

def validate_tensor(t: TensorResult, sample_cap: int = EXHAUSTIVE_CAP, samples: int = SAMPLES,
                    seed: int = 0) -> dict | None:
    """Structure laws: crossed-square axioms (i)-(v), [l, l'] = alpha l (x) beta l',
    and the generator-image laws for alpha and beta (and for {k} when mod q)."""
    L = t.group
    big = L.order > sample_cap
    bad = _square_laws(t, big, samples, seed)
    if bad is not None:
        return bad
    # Brown-Loday commutator identity, exhaustive or sampled
    rng = np.random.default_rng(seed)
    if not big:
        x = np.repeat(np.arange(L.order), L.order)
        y = np.tile(np.arange(L.order), L.order)
    else:
        x = rng.integers(0, L.order, samples)
        y = rng.integers(0, L.order, samples)
    comm = L.mult[L.mult[x, y], L.mult[L.inv[x], L.inv[y]]]  # x y x^-1 y^-1
    rhs = t.gen_map[t.alpha.image[x], t.beta.image[y]]
    if not np.array_equal(comm, rhs):
        i = int(np.argmax(comm != rhs))
        return {"axiom": "[l,l'] = alpha l (x) beta l'", "witness": [int(x[i]), int(y[i])]}
    return None


def _square_laws(t: TensorResult, big: bool, samples: int, seed: int) -> dict | None:
    from .crossed import validate_crossed_square

    sq = t.square()
    if not big:
        return validate_crossed_square(sq)
    # large L: the same checks, with exhaustive |L|^2 parts replaced by samples
    return validate_crossed_square(sq, sample_cap=0, samples=samples, seed=seed,
                                   l_generators=t.generators)


# ----------------------------------------------------------- natural maps

def _symbol_map(src: TensorResult, tgt: TensorResult, f1: np.ndarray, f2: np.ndarray) -> np.ndarray:
    """Target element for every presentation symbol of src under a (x) c -> f1 a (x) f2 c."""
    M, N = src.mu.m, src.nu.m
    out = np.zeros(src.presentation.generator_count + 1, dtype=np.int64)
    nm, nn = M.order, N.order
    mm, nn_ = np.meshgrid(np.arange(nm), np.arange(nn), indexing="ij")
    ids = _Symbols(nm, nn).ids
    mask = ids > 0
    out[ids[mask]] = tgt.gen_map[f1[mm[mask]], f2[nn_[mask]]]
    if src.q is not None:
        tcode = np.full((tgt.mu.m.order, tgt.nu.m.order), -1, dtype=np.int64)
        tcode[tgt.pull.pairs[:, 0], tgt.pull.pairs[:, 1]] = np.arange(len(tgt.pull.pairs))
        kk = tcode[f1[src.pull.pairs[:, 0]], f2[src.pull.pairs[:, 1]]]
        if (kk < 0).any():
            raise TensorError("image of a pullback element leaves the target pullback")
        sym = _Symbols(nm, nn, src.pull.k.order)
        out[sym.brace(np.arange(sym.nk))] = tgt.brace_map[kk]
    return out


def _map_from_symbols(src: TensorResult, target: GroupTable, sym_img: np.ndarray, what: str) -> Homomorphism:
    """Homomorphism out of src determined by symbol images, after checking that
    every instantiated relator of src maps to the identity."""
    vals = evaluate_words(target, sym_img[1:], src.presentation.relators)
    if (vals != 0).any():
        i = int(np.argmax(vals != 0))
        raise TensorError(f"{what} is not well defined: relator {i} does not map to 1")
    hom = _verified_map(src.group, target, src.generators, sym_img[src.generator_symbols], what)
    if not np.array_equal(hom.image[src.symbol_images[1:]], sym_img[1:]):
        raise TensorError(f"{what} disagrees with the symbol images")
    return hom


def induced_hom(f1: Homomorphism, f2: Homomorphism, phi: Homomorphism,
                src: TensorResult, tgt: TensorResult) -> Homomorphism:
    """a (x) c -> f1(a) (x) f2(c), {(a, c)} -> {(f1 a, f2 c)}; compatibility,
    commuting squares and the resulting cube are all checked exhaustively."""
    if src.kind != tgt.kind or src.q != tgt.q:
        raise TensorError("source and target must be the same kind of tensor product")
    A, C, H = src.mu.m, src.nu.m, src.g
    B, D, G = tgt.mu.m, tgt.nu.m, tgt.g
    for f, s, d, what in ((f1, A, B, "f1"), (f2, C, D, "f2"), (phi, H, G, "phi")):
        if f.source is not s or f.target is not d:
            raise TensorError(f"{what} has the wrong source or target")
        bad = f.violation()
        if bad is not None:
            raise TensorError(f"{what} is not a homomorphism (witness {bad})")
    # compatibility f(^h a) = ^{phi h} f(a)
    for f, s_cm, t_cm, what in ((f1, src.mu, tgt.mu, "f1"), (f2, src.nu, tgt.nu, "f2")):
        lhs = f.image[s_cm.action.perm]
        rhs = t_cm.action.perm[phi.image][:, f.image]
        if not np.array_equal(lhs, rhs):
            h, a = np.argwhere(lhs != rhs)[0]
            raise TensorError(f"{what} is not compatible with the actions (witness h={h}, x={a})")
        if not np.array_equal(t_cm.mu.image[f.image], phi.image[s_cm.mu.image]):
            raise TensorError(f"square for {what} does not commute")
    sym_img = _symbol_map(src, tgt, f1.image.astype(np.int64), f2.image.astype(np.int64))
    F = _map_from_symbols(src, tgt.group, sym_img, "induced map")
    # cube: f1 alpha = alpha F, f2 beta = beta F, and F(^h x) = ^{phi h} F(x)
    if not np.array_equal(f1.image[src.alpha.image], tgt.alpha.image[F.image]):
        raise TensorError("alpha face of the cube does not commute")
    if not np.array_equal(f2.image[src.beta.image], tgt.beta.image[F.image]):
        raise TensorError("beta face of the cube does not commute")
    if not np.array_equal(F.image[src.action.perm], tgt.action.perm[phi.image][:, F.image]):
        raise TensorError("induced map is not compatible with the actions")
    return F


@dataclass
class NaturalMaps:
    sigma: Homomorphism
    tau_images: dict[int, SubgroupRef]  # n -> image of M^(p^n) (x) G in M (x) G
    eta_image: SubgroupRef  # image of M^p (x) G in the q-tensor


def _tensor_image(t: TensorResult, m_elems, n_elems) -> SubgroupRef:
    """Subgroup of t generated by m (x) n over the given element sets."""
    seeds = np.unique(t.gen_map[np.ix_(np.asarray(m_elems), np.asarray(n_elems))])
    s = subgroup_closure(t.group, seeds.tolist())
    return s


def _check_invariant(t: TensorResult, s: SubgroupRef, what: str) -> None:
    moved = t.action.perm[:, s.elements]
    if not s.mask[moved].all():
        raise TensorError(f"{what} is not G-invariant")
    s._normal = True


def natural_maps(t_plain: TensorResult, t_q: TensorResult, p: int, max_n: int = 3) -> NaturalMaps:
    """sigma: M (x) N -> M (x)^p N on symbols, the tau_n images and eta(M^p (x) N)."""
    if t_plain.kind != "plain" or t_q.kind != "mod_q" or t_q.q != p:
        raise TensorError("natural_maps needs a plain tensor and its mod-p version")
    if t_plain.mu is not t_q.mu and (t_plain.mu.m is not t_q.mu.m or t_plain.nu.m is not t_q.nu.m):
        raise TensorError("tensor products come from different crossed modules")
    M, N = t_plain.mu.m, t_plain.nu.m
    ident_m = np.arange(M.order)
    ident_n = np.arange(N.order)
    sym_img = _symbol_map(t_plain, t_q, ident_m, ident_n)
    sigma = _map_from_symbols(t_plain, t_q.group, sym_img, "sigma")
    taus = {}
    for n in range(1, max_n + 1):
        mp = power_subgroup(M.whole(), p ** n).elements
        img = _tensor_image(t_plain, mp, ident_n)
        _check_invariant(t_plain, img, f"tau_{n} image")
        taus[n] = img
    eta = _tensor_image(t_q, power_subgroup(M.whole(), p).elements, ident_n)
    _check_invariant(t_q, eta, "eta image")
    return NaturalMaps(sigma, taus, eta)


# --------------------------------------------------------- n-fold products

@dataclass
class NFoldResult:
    stages: list[TensorResult]
    mus: list[Homomorphism]  # mu_1 = id, mu_k : G^(k) -> G
    image_checks: list[dict]
    error: str | None = None

    @property
    def complete(self) -> bool:
        return self.error is None


def n_fold_tensor(g: GroupTable, n: int, q: int | None = None, caps: TensorCaps | None = None) -> NFoldResult:
    """G^(k+1) = G^(k) (x) G (or (x)^q), carrying mu_k forward; checks that the
    image of mu_k is gamma_k(G) (plain) or lambda_k(G) (q = p)."""
    from .series import lower_central_series, lower_p_series

    if n < 2:
        raise TensorError("n must be at least 2")
    caps = caps or TensorCaps()
    idg = identity_crossed_module(g)
    cm = idg
    stages: list[TensorResult] = []
    mus = [idg.mu]
    checks = []
    ref = None
    if q is None:
        ref = lower_central_series(g)
    elif g.prime == q or g.order == 1:
        ref = lower_p_series(g, q) if g.order > 1 else None
    for k in range(2, n + 1):
        try:
            t = compute_tensor(cm, idg, caps) if q is None else compute_q_tensor(cm, idg, q, caps)
        except ResourceError as exc:
            return NFoldResult(stages, mus, checks, f"stage {k}: {exc}")
        stages.append(t)
        cm = t.as_crossed_module()
        mus.append(cm.mu)
        img = cm.mu.image_subgroup()
        if ref is not None:
            expected = ref.term(k)
            checks.append({"k": k, "image_order": img.order, "expected_order": expected.order,
                           "holds": img == expected})
        elif g.order == 1:
            checks.append({"k": k, "image_order": 1, "expected_order": 1, "holds": True})
    return NFoldResult(stages, mus, checks)


def iterated_tensor(g: GroupTable, n: int, q: int | None = None, caps: TensorCaps | None = None) -> list[TensorResult]:
    """G_(1) = G, G_(k+1) = G_(k) (x) G_(k) with identity crossed modules."""
    if n < 2:
        raise TensorError("n must be at least 2")
    out: list[TensorResult] = []
    cur = g
    for _ in range(2, n + 1):
        t = tensor_square(cur, q, caps)
        out.append(t)
        cur = t.group
    return out


# ------------------------------------------------------ exact sequence

@dataclass
class ExactnessReport:
    group: str
    n_order: int
    q: int
    source_order: int
    target_order: int
    product_order: int
    kernel_order: int
    surjective: bool
    kernel_equals_product: bool
    order_law: bool

    @property
    def holds(self) -> bool:
        return self.surjective and self.kernel_equals_product and self.order_law


def check_nfold_exact_sequence(h: GroupTable, n_sub: SubgroupRef, fold: int, q: int,
                               caps: TensorCaps | None = None) -> ExactnessReport:
    """1 -> N_1 N_2 -> H (x)^q H -> G (x)^q G -> 1 for G = H/N, at fold 2."""
    from .group import quotient_group

    if fold != 2:
        raise TensorError("only fold = 2 is supported")
    if n_sub.ambient is not h or not n_sub.is_normal:
        raise TensorError("N must be a normal subgroup of H")
    caps = caps or TensorCaps()
    G, proj = quotient_group(h, n_sub)
    idh, idg = identity_crossed_module(h), identity_crossed_module(G)
    src = compute_q_tensor(idh, idh, q, caps)
    tgt = compute_q_tensor(idg, idg, q, caps)
    d = induced_hom(proj, proj, proj, src, tgt)
    inc_cm = inclusion_crossed_module(n_sub)
    nh = compute_q_tensor(inc_cm, idh, q, caps)
    hn = compute_q_tensor(idh, inc_cm, q, caps)
    from .group import identity_hom
    inc = inc_cm.mu
    one = identity_hom(h)
    f_1 = induced_hom(inc, one, one, nh, src)
    f_2 = induced_hom(one, inc, one, hn, src)
    n1 = f_1.image_subgroup()
    n2 = f_2.image_subgroup()
    for s, what in ((n1, "N_1"), (n2, "N_2")):
        _check_invariant(src, s, what)
    prod = product_of_subgroups(n1, n2)
    ker = d.kernel()
    return ExactnessReport(h.name, n_sub.order, q, src.group.order, tgt.group.order, prod.order,
                           ker.order, d.is_surjective(), ker == prod,
                           src.group.order == prod.order * tgt.group.order)


# ------------------------------------------------------- power expansion

def power_expansion_violation(t: TensorResult, p: int, n: int, r: int, t_exp: int,
                              samples: int = 200, seed: int = 0) -> dict | None:
    """m^t (x) g == (m (x) g)^r (m^(t-r) (x) g) (m^(t-r) (x) [mu m, g])^r (m (x) [mu m, g])^C(r,2)
    modulo the image of M^(p^(n+2)) (x) G, for sampled m in M^(p^n) and g in G.

    ``t`` must be a plain tensor M (x) G with the identity module on G.
    """
    if t.kind != "plain" or t.nu.m is not t.g:
        raise TensorError("power expansion needs a plain tensor M (x) G")
    M, G, L = t.mu.m, t.g, t.group
    mus = t.mu.mu.image
    mp = power_subgroup(M.whole(), p ** n).elements
    modulus = _tensor_image(t, power_subgroup(M.whole(), p ** (n + 2)).elements, np.arange(G.order))
    rng = np.random.default_rng(seed)
    if len(mp) * G.order <= samples:
        pairs = [(int(m), gg) for m in mp for gg in range(G.order)]
    else:
        pairs = [(int(mp[i]), int(j)) for i, j in zip(rng.integers(0, len(mp), samples),
                                                       rng.integers(0, G.order, samples))]
    h = t.gen_map
    c2 = r * (r - 1) // 2
    for m, g in pairs:
        c = G.commutator(int(G.inv[mus[m]]), int(G.inv[g]))  # x y x^-1 y^-1 with x = mu m, y = g
        d = M.power(m, t_exp - r)
        lhs = int(h[M.power(m, t_exp), g])
        rhs = L.mul(L.power(int(h[m, g]), r), int(h[d, g]), L.power(int(h[d, c]), r),
                    L.power(int(h[m, c]), c2))
        if L.mul(lhs, int(L.inv[rhs])) not in modulus:
            return {"m": m, "g": g, "lhs": lhs, "rhs": rhs}
    return None


# ----------------------------------------------------- powerful tensors

def check_theorem_C(mu: CrossedModule, p: int, caps: TensorCaps | None = None) -> list:
    """For M powerful with mu(M) powerfully embedded in G (odd p): M (x) G and
    M (x)^p G are powerful, gamma_2(M (x) G) <= tau_1(M^p (x) G) <= (M (x) G)^p."""
    from .group import commutator_subgroup
    from .powerful import TheoremCheck, is_powerful, is_powerful_subgroup, is_powerfully_embedded

    M, G = mu.m, mu.g
    img = mu.mu.image_subgroup()
    hyp = (M.order == 1 or is_powerful(M, p)) and img.is_normal and is_powerfully_embedded(img, G, p)
    idg = identity_crossed_module(G)
    tp = compute_tensor(mu, idg, caps)
    tq = compute_q_tensor(mu, idg, p, caps)
    maps = natural_maps(tp, tq, p, max_n=1)
    L = tp.group.whole()
    tau = maps.tau_images[1]
    name = f"{M.name}->{G.name}"
    gamma2 = commutator_subgroup(L, L)
    power = power_subgroup(L, 4 if p == 2 else p)
    detail = {"tensor_order": tp.group.order, "q_tensor_order": tq.group.order,
              "tau1_order": tau.order, "gamma2_order": gamma2.order, "power_order": power.order}
    return [
        TheoremCheck("C_tensor_powerful", name, 1, hyp, is_powerful_subgroup(L, p), detail=detail),
        TheoremCheck("C_q_tensor_powerful", name, 1, hyp, is_powerful_subgroup(tq.group.whole(), p), detail=detail),
        TheoremCheck("C_gamma2_in_tau1", name, 1, hyp, gamma2 <= tau, detail=detail),
        TheoremCheck("C_tau1_in_power", name, 1, hyp, tau <= power, detail=detail),
    ]


def lambda_surjection(h: GroupTable, n_sub: SubgroupRef, p: int,
                      caps: TensorCaps | None = None) -> tuple[TensorResult, Homomorphism]:
    """theta: G (x)^p G -> H for G = H/N, N central of exponent p, sending
    g (x) g' to [s g, s g'] and {g} to (s g)^p for any section s. Its image is lambda_2(H)."""
    from .group import quotient_group
    from .series import lower_p_series

    if n_sub.ambient is not h:
        raise TensorError("N must be a subgroup of H")
    if not (n_sub <= center(h)) or n_sub.exponent() not in (1, p):
        raise TensorError("N must be central of exponent p")
    n_sub._normal = True
    G, proj = quotient_group(h, n_sub)
    t = compute_q_tensor(identity_crossed_module(G), identity_crossed_module(G), p, caps)
    _, section = np.unique(proj.image, return_index=True)  # smallest preimage
    sym = _Symbols(G.order, G.order, t.pull.k.order)
    mm, nn = np.meshgrid(np.arange(G.order), np.arange(G.order), indexing="ij")
    x, y = section[mm], section[nn]
    comm = h.mult[h.mult[x, y], h.mult[h.inv[x], h.inv[y]]]
    img = np.zeros(t.presentation.generator_count + 1, dtype=np.int64)
    mask = sym.ids > 0
    img[sym.ids[mask]] = comm[mask]
    img[sym.brace(np.arange(sym.nk))] = h.power_map(p)[section[t.pull.pairs[:, 0]]]
    theta = _map_from_symbols(t, h, img, "theta")
    if theta.image_subgroup() != lower_p_series(h, p).term(2):
        raise TensorError("theta does not map onto lambda_2(H)")
    return t, theta
