"""Crossed modules, pullbacks and crossed squares over table groups.

All actions are left actions stored as permutation arrays: ``action.perm[g][x]``
is ^g x. Commutators in this module follow [x, y] = x y x^-1 y^-1.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .group import (
    ActionByAutomorphisms,
    GroupError,
    GroupTable,
    Homomorphism,
    hom_violation_on_generators,
    SubgroupRef,
    conjugation_action,
    identity_hom,
    make_group,
    prime_power_base,
    subgroup_as_group,
    trivial_action,
    trivial_hom,
)


@dataclass(frozen=True, eq=False)
class CrossedModule:
    m: GroupTable
    g: GroupTable
    mu: Homomorphism
    action: ActionByAutomorphisms

    def __post_init__(self):
        if self.mu.source is not self.m or self.mu.target is not self.g:
            raise GroupError("mu must map m to g")
        if self.action.actor is not self.g or self.action.space is not self.m:
            raise GroupError("action must be an action of g on m")

    def act(self, g: int, x: int) -> int:
        return int(self.action.perm[g, x])

    def violation(self) -> dict | None:
        return validate_crossed_module(self)

    @property
    def name(self) -> str:
        return f"{self.m.name}->{self.g.name}"


def validate_crossed_module(cm: CrossedModule) -> dict | None:
    """Check the action, then equivariance and the Peiffer identity exhaustively."""
    bad = cm.mu.violation()
    if bad is not None:
        return {"axiom": "homomorphism", "witness": list(bad)}
    bad = cm.action.violation()
    if bad is not None:
        return {"axiom": f"action: {bad['law']}", "witness": bad["witness"]}
    g, m = cm.g, cm.m
    mu = cm.mu.image
    perm = cm.action.perm
    # mu(^g x) = g mu(x) g^-1
    lhs = mu[perm]
    rhs = g.mult[g.mult[np.arange(g.order)[:, None], mu[None, :]], g.inv[:, None]]
    if not np.array_equal(lhs, rhs):
        gi, x = np.argwhere(lhs != rhs)[0]
        return {"axiom": "equivariance", "witness": [int(gi), int(x)]}
    # ^{mu(x)} y = x y x^-1
    lhs = perm[mu]
    rhs = m.mult[m.mult[np.arange(m.order)[:, None], np.arange(m.order)[None, :]], m.inv[:, None]]
    if not np.array_equal(lhs, rhs):
        x, y = np.argwhere(lhs != rhs)[0]
        return {"axiom": "peiffer", "witness": [int(x), int(y)]}
    return None


def identity_crossed_module(g: GroupTable) -> CrossedModule:
    idh = identity_hom(g)
    return CrossedModule(g, g, idh, conjugation_action(idh))


def inclusion_crossed_module(n: SubgroupRef, name: str | None = None) -> CrossedModule:
    """N -> G for a subgroup N with the conjugation action. Non-normal input
    yields a module whose validation reports the failure instead of raising."""
    sub, inc = subgroup_as_group(n, name=name)
    g = n.ambient
    perm = np.zeros((g.order, sub.order), dtype=np.int64)
    pos = np.full(g.order, -1, dtype=np.int64)
    pos[inc.image] = np.arange(sub.order)
    conj = g.mult[g.mult[np.arange(g.order)[:, None], inc.image[None, :]], g.inv[:, None]]
    mapped = pos[conj]
    if (mapped < 0).any():
        # not normal: the trivial action stands in, and equivariance then fails
        perm[:] = np.arange(sub.order)
    else:
        perm[:] = mapped
    return CrossedModule(sub, g, inc, ActionByAutomorphisms(g, sub, perm))


def trivial_crossed_module(m: GroupTable, g: GroupTable) -> CrossedModule:
    """Trivial map with trivial action; a crossed module only when m is abelian."""
    return CrossedModule(m, g, trivial_hom(m, g), trivial_action(g, m))


def action_via(cm: CrossedModule, other: GroupTable, f: Homomorphism) -> np.ndarray:
    """Permutation array of ``other`` acting on cm.m through f: other -> cm.g."""
    return cm.action.perm[f.image]


# ------------------------------------------------------------------ pullback

@dataclass(frozen=True, eq=False)
class Pullback:
    k: GroupTable
    pairs: np.ndarray  # shape (|K|, 2): (m, n) for each element of K
    pi1: Homomorphism
    pi2: Homomorphism
    index: dict

    def element(self, m: int, n: int) -> int:
        return self.index[(int(m), int(n))]


def pullback(mu: CrossedModule, nu: CrossedModule, name: str | None = None) -> Pullback:
    """K = {(m, n) : mu(m) = nu(n)} in lexicographic order, identity first."""
    if mu.g is not nu.g:
        raise GroupError("crossed modules must share their codomain")
    m, n = mu.m, nu.m
    mm, nn = np.meshgrid(np.arange(m.order), np.arange(n.order), indexing="ij")
    ok = mu.mu.image[mm] == nu.mu.image[nn]
    pairs = np.stack([mm[ok], nn[ok]], axis=1)
    index = {(int(a), int(b)): i for i, (a, b) in enumerate(pairs)}
    code = np.full((m.order, n.order), -1, dtype=np.int64)
    code[pairs[:, 0], pairs[:, 1]] = np.arange(len(pairs))
    a, b = pairs[:, 0], pairs[:, 1]
    mult = code[m.mult[a[:, None], a[None, :]], n.mult[b[:, None], b[None, :]]]
    if (mult < 0).any():
        raise GroupError("pullback is not closed (inputs are not homomorphisms)")
    k = make_group(mult, name=name or f"{m.name}x_{mu.g.name}{n.name}",
                   prime=prime_power_base(len(pairs)), validate=len(pairs) <= 512,
                   order_cap=max(len(pairs), 1))
    pi1 = Homomorphism(k, m, a.copy())
    pi2 = Homomorphism(k, n, b.copy())
    return Pullback(k, pairs, pi1, pi2, index)


# ------------------------------------------------------------- crossed squares

@dataclass(eq=False)
class CrossedSquare:
    """L -beta-> N, L -alpha-> M, M -mu-> G, N -nu-> G with h: M x N -> L.

    ``act_l`` is the G-action on L; M and N act on everything through mu, nu.
    ``h`` is a |M| x |N| array.
    """
    l: GroupTable
    mu: CrossedModule
    nu: CrossedModule
    alpha: Homomorphism
    beta: Homomorphism
    h: np.ndarray
    act_l: ActionByAutomorphisms

    def validate(self, sample_cap: int = 4096, samples: int = 10_000, seed: int = 0,
                 l_generators=None) -> dict | None:
        return validate_crossed_square(self, sample_cap, samples, seed, l_generators)


def _action_on_generators(act: ActionByAutomorphisms, gens) -> dict | None:
    g, space = act.actor, act.space
    for gi in range(g.order):
        bad = hom_violation_on_generators(space, space, act.perm[gi], gens)
        if bad is not None:
            return {"law": "automorphism", "witness": [gi, *bad]}
        if len(np.unique(act.perm[gi])) != space.order:
            return {"law": "bijective", "witness": [gi]}
    if not np.array_equal(act.perm[0], np.arange(space.order)):
        return {"law": "identity acts trivially", "witness": [0]}
    for gi in range(g.order):
        lhs = act.perm[g.mult[gi]]  # [h, x] -> ^{gi h} x
        rhs = act.perm[gi][act.perm]
        if not np.array_equal(lhs, rhs):
            h, x = np.argwhere(lhs != rhs)[0]
            return {"law": "action compatibility", "witness": [gi, int(h), int(x)]}
    return None


def _report(axiom: str, mask: np.ndarray) -> dict:
    return {"axiom": axiom, "witness": [int(v) for v in np.argwhere(mask)[0]]}


def validate_crossed_square(sq: CrossedSquare, sample_cap: int = 4096, samples: int = 10_000,
                            seed: int = 0, l_generators=None) -> dict | None:
    """Axioms (i) to (v), exhaustively over M, N, G and over L when |L| <= sample_cap.

    Above the cap, pairs of L elements are sampled (seeded); if ``l_generators``
    is given, maps out of L and the action on L are still checked exactly on it.
    """
    L, M, N, G = sq.l, sq.mu.m, sq.nu.m, sq.mu.g
    mu, nu = sq.mu.mu.image, sq.nu.mu.image
    al, be = sq.alpha.image, sq.beta.image
    aM, aN, aL = sq.mu.action.perm, sq.nu.action.perm, sq.act_l.perm
    h = sq.h
    by_gens = L.order > sample_cap and l_generators is not None
    for name, hom in (("alpha", sq.alpha), ("beta", sq.beta)):
        if by_gens:
            bad = hom_violation_on_generators(L, hom.target, hom.image, l_generators)
        else:
            bad = hom.violation()
        if bad is not None:
            return {"axiom": f"(i) {name} homomorphism", "witness": list(bad)}
    for cm in (sq.mu, sq.nu):
        bad = validate_crossed_module(cm)
        if bad is not None:
            return {"axiom": f"(i) {cm.name}: {bad['axiom']}", "witness": bad["witness"]}
    if by_gens:
        bad = _action_on_generators(sq.act_l, l_generators)
    else:
        bad = sq.act_l.violation()
    if bad is not None:
        return {"axiom": f"(i) action on L: {bad['law']}", "witness": bad["witness"]}
    # commutativity
    kappa = mu[al]
    if not np.array_equal(kappa, nu[be]):
        return _report("square commutes", kappa != nu[be])
    # (i) equivariance of alpha, beta
    if not np.array_equal(al[aL], aM[:, al]):
        return _report("(i) alpha equivariant", al[aL] != aM[:, al])
    if not np.array_equal(be[aL], aN[:, be]):
        return _report("(i) beta equivariant", be[aL] != aN[:, be])
    # (i) kappa is a crossed module: equivariance
    ar_g = np.arange(G.order)
    lhs = kappa[aL]
    rhs = G.mult[G.mult[ar_g[:, None], kappa[None, :]], G.inv[:, None]]
    if not np.array_equal(lhs, rhs):
        return _report("(i) kappa equivariance", lhs != rhs)
    # Peiffer for kappa, exhaustive or sampled over pairs
    rng = np.random.default_rng(seed)
    if L.order <= sample_cap:
        x = np.repeat(np.arange(L.order), L.order)
        y = np.tile(np.arange(L.order), L.order)
    else:
        x = rng.integers(0, L.order, samples)
        y = rng.integers(0, L.order, samples)
    lhs = aL[kappa[x], y]
    rhs = L.mult[L.mult[x, y], L.inv[x]]
    if not np.array_equal(lhs, rhs):
        i = int(np.argmax(lhs != rhs))
        return {"axiom": "(i) kappa Peiffer", "witness": [int(x[i]), int(y[i])]}
    # (ii)
    m_ = np.arange(M.order)[:, None]
    n_ = np.arange(N.order)[None, :]
    act_n_on_m = aM[nu]  # [n, m] -> ^n m
    act_m_on_n = aN[mu]  # [m, n] -> ^m n
    exp_a = M.mult[np.broadcast_to(m_, h.shape), M.inv[act_n_on_m.T]]
    if not np.array_equal(al[h], exp_a):
        return _report("(ii) alpha h", al[h] != exp_a)
    exp_b = N.mult[act_m_on_n, np.broadcast_to(N.inv[n_], h.shape)]
    if not np.array_equal(be[h], exp_b):
        return _report("(ii) beta h", be[h] != exp_b)
    # (iii) h(alpha l, n) = l ^n l^-1 ; h(m, beta l) = ^m l l^-1
    ar_l = np.arange(L.order)
    act_n_on_l = aL[nu]  # [n, l]
    act_m_on_l = aL[mu]  # [m, l]
    lhs = h[al[:, None], np.arange(N.order)[None, :]]
    rhs = L.mult[ar_l[:, None], L.inv[act_n_on_l.T]]
    if not np.array_equal(lhs, rhs):
        return _report("(iii) h(alpha l, n)", lhs != rhs)
    lhs = h[np.arange(M.order)[:, None], be[None, :]]
    rhs = L.mult[act_m_on_l, L.inv[ar_l][None, :]]
    if not np.array_equal(lhs, rhs):
        return _report("(iii) h(m, beta l)", lhs != rhs)
    # (iv) h(m m', n) = ^m h(m', n) h(m, n) ; h(m, n n') = h(m, n) ^n h(m, n')
    for mi in range(M.order):
        lhs = h[M.mult[mi]]  # [m', n]
        rhs = L.mult[act_m_on_l[mi][h], h[mi][None, :]]
        if not np.array_equal(lhs, rhs):
            mp, n = np.argwhere(lhs != rhs)[0]
            return {"axiom": "(iv) h(mm', n)", "witness": [mi, int(mp), int(n)]}
    for ni in range(N.order):
        lhs = h[:, N.mult[ni]]  # [m, n']
        rhs = L.mult[h[:, ni][:, None], act_n_on_l[ni][h]]
        if not np.array_equal(lhs, rhs):
            m, npr = np.argwhere(lhs != rhs)[0]
            return {"axiom": "(iv) h(m, nn')", "witness": [int(m), ni, int(npr)]}
    # (v) h(^g m, ^g n) = ^g h(m, n)
    lhs = h[aM[:, :, None], aN[:, None, :]]
    rhs = aL[np.arange(G.order)[:, None, None], h[None, :, :]]
    if not np.array_equal(lhs, rhs):
        return _report("(v) h equivariant", lhs != rhs)
    return None
