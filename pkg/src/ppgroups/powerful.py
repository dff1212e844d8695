"""Powerful p-groups, powerfully embedded subgroups, and the theorem checkers.

Each checker returns a :class:`TheoremCheck` that separates "hypothesis
false" (a vacuous pass) from a genuine confirmation and from a violation.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .group import (
    GroupError,
    GroupTable,
    SubgroupRef,
    center,
    commutator_subgroup,
    intersection,
    normality_witness,
    power_set,
    power_subgroup,
    quotient_group,
)
from .series import (
    derived_series,
    frattini_series,
    lower_central_series,
    lower_p_series,
    script_D_n,
    script_F_n,
    upper_central_series,
)


def _power_exponent(p: int) -> int:
    return 4 if p == 2 else p


def _check_prime(g: GroupTable, p: int) -> None:
    if g.order > 1 and g.prime != p:
        raise GroupError(f"{g.name} is not a {p}-group")


def is_powerful(g: GroupTable, p: int) -> bool:
    _check_prime(g, p)
    return is_powerful_subgroup(g.whole(), p)


def is_powerful_subgroup(s: SubgroupRef, p: int) -> bool:
    """Whether s, viewed as a group in its own right, is powerful."""
    d = commutator_subgroup(s, s)
    if d.is_trivial:
        return True
    return d <= power_subgroup(s, _power_exponent(p))


def is_powerfully_embedded(n: SubgroupRef, g: GroupTable, p: int) -> bool:
    if n.ambient is not g:
        raise GroupError("subgroup does not live in this group")
    w = normality_witness(n)
    if w is not None:
        raise GroupError(f"subgroup is not normal (witness {w})")
    n._normal = True
    whole = g.whole()
    c = commutator_subgroup(n, whole)
    if c.is_trivial:
        return True
    return c <= power_subgroup(n, _power_exponent(p))


@dataclass
class TheoremCheck:
    theorem_id: str
    group_name: str
    parameter_n: int
    hypothesis_holds: bool
    conclusion_holds: bool
    witness: dict | None = None
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.hypothesis_holds and not self.conclusion_holds and self.witness is None:
            self.witness = {}
        if not (self.hypothesis_holds and not self.conclusion_holds):
            self.witness = None

    @property
    def status(self) -> str:
        if not self.hypothesis_holds:
            return "vacuous_pass"
        return "substantive_pass" if self.conclusion_holds else "violation"

    def to_json(self) -> dict:
        d = asdict(self)
        d["status"] = self.status
        return d


def _embedding_witness(n: SubgroupRef, p: int) -> dict:
    g = n.ambient
    target = power_subgroup(n, _power_exponent(p))
    for x in n.elements:
        for y in range(g.order):
            c = g.commutator(int(x), y)
            if c not in target:
                return {"elements": [int(x), y], "commutator": c}
    return {}


def _powerful_witness(s: SubgroupRef, p: int) -> dict:
    g = s.ambient
    target = power_subgroup(s, _power_exponent(p))
    for x in s.elements:
        for y in s.elements:
            c = g.commutator(int(x), int(y))
            if c not in target:
                return {"elements": [int(x), int(y)], "commutator": c}
    return {}


def check_theorem_A_i(h: GroupTable, p: int, n: int) -> TheoremCheck:
    """H/Z_{n-1}(H) powerful  =>  gamma_n(H) powerfully embedded (any p)."""
    if n < 1:
        raise GroupError("n must be at least 1")
    z = upper_central_series(h).term(n - 1)
    q, _ = quotient_group(h, z)
    hyp = is_powerful(q, p)
    gamma_n = lower_central_series(h).term(n)
    concl = is_powerfully_embedded(gamma_n, h, p)
    tid = "A_i" if p != 2 else "A'_i"
    chk = TheoremCheck(tid, h.name, n, hyp, concl,
                       detail={"quotient_order": q.order, "gamma_n_order": gamma_n.order})
    if chk.status == "violation":
        chk.witness = _embedding_witness(gamma_n, p)
    return chk


def check_theorem_A_ii(h: GroupTable, p: int, n: int) -> TheoremCheck:
    """H/Z_{n-1}(H) powerful  =>  lambda_n(H) powerfully embedded (odd p) / powerful (p = 2)."""
    if n < 1:
        raise GroupError("n must be at least 1")
    z = upper_central_series(h).term(n - 1)
    q, _ = quotient_group(h, z)
    hyp = is_powerful(q, p)
    lam = lower_p_series(h, p).term(n)
    if p == 2:
        concl = is_powerful_subgroup(lam, p)
        tid = "A'_ii"
    else:
        concl = is_powerfully_embedded(lam, h, p)
        tid = "A_ii"
    chk = TheoremCheck(tid, h.name, n, hyp, concl,
                       detail={"quotient_order": q.order, "lambda_n_order": lam.order})
    if chk.status == "violation":
        chk.witness = _powerful_witness(lam, p) if p == 2 else _embedding_witness(lam, p)
    return chk


def check_theorem_A_iii(h: GroupTable, p: int, n: int) -> TheoremCheck:
    """H/D_{n-1}(H) powerful  =>  Gamma_n(H) powerfully embedded (odd p, n >= 2)."""
    if p == 2:
        raise GroupError("the derived-series statement is only for odd p")
    if n < 2:
        raise GroupError("n must be at least 2")
    d = script_D_n(h, n - 1)
    q, _ = quotient_group(h, d)
    hyp = is_powerful(q, p)
    big_gamma = derived_series(h).term(n)
    concl = is_powerfully_embedded(big_gamma, h, p)
    chk = TheoremCheck("A_iii", h.name, n, hyp, concl,
                       detail={"quotient_order": q.order, "derived_n_order": big_gamma.order})
    if chk.status == "violation":
        chk.witness = _embedding_witness(big_gamma, p)
    return chk


def check_theorem_B(h: GroupTable, n_subgroup: SubgroupRef, p: int, n: int) -> tuple[TheoremCheck, TheoremCheck]:
    """Extensions 1 -> N -> H -> G -> 1 with G finite powerful (odd p).

    (i)  N <= Z_n(H)   =>  gamma_{n+1}(H) powerful.
    (ii) N <= D_n(H)   =>  Gamma_{n+1}(H) powerful.
    """
    if p == 2:
        raise GroupError("extension statement is only for odd p")
    if n < 1:
        raise GroupError("n must be at least 1")
    q, _ = quotient_group(h, n_subgroup)
    quotient_powerful = q.order == 1 or (q.prime == p and is_powerful(q, p))
    label = f"N{n_subgroup.order}"

    zn = upper_central_series(h).term(n)
    gamma = lower_central_series(h).term(n + 1)
    hyp_i = quotient_powerful and n_subgroup <= zn
    c_i = TheoremCheck("B_i", h.name, n, hyp_i, is_powerful_subgroup(gamma, p),
                       detail={"N": label, "gamma_order": gamma.order})
    if c_i.status == "violation":
        c_i.witness = _powerful_witness(gamma, p)

    dn = script_D_n(h, n)
    big_gamma = derived_series(h).term(n + 1)
    hyp_ii = quotient_powerful and n_subgroup <= dn
    c_ii = TheoremCheck("B_ii", h.name, n, hyp_ii, is_powerful_subgroup(big_gamma, p),
                        detail={"N": label, "derived_order": big_gamma.order})
    if c_ii.status == "violation":
        c_ii.witness = _powerful_witness(big_gamma, p)
    return c_i, c_ii


def check_frattini_theorem(h: GroupTable, n_subgroup: SubgroupRef, p: int, n: int) -> tuple[TheoremCheck, TheoremCheck | None]:
    """N normal of exponent p inside F_n(H):
    (i) Psi_{n+1}(H) finite (always, for finite H);
    (ii) odd p and H/N powerful  =>  Psi_{n+1}(H) powerful.

    Part (ii) is ``None`` for p = 2.
    """
    if n < 1:
        raise GroupError("n must be at least 1")
    fn = script_F_n(h, p, n)
    base_hyp = n_subgroup.is_normal and n_subgroup.exponent() in (1, p) and n_subgroup <= fn
    psi = frattini_series(h, p).term(n + 1)
    label = f"N{n_subgroup.order}"
    part_i = TheoremCheck("Frattini_i", h.name, n, base_hyp, True,
                          detail={"N": label, "psi_order": psi.order})
    if p == 2:
        return part_i, None
    q, _ = quotient_group(h, n_subgroup)
    hyp = base_hyp and (q.order == 1 or is_powerful(q, p))
    part_ii = TheoremCheck("Frattini_ii", h.name, n, hyp, is_powerful_subgroup(psi, p),
                           detail={"N": label, "psi_order": psi.order})
    if part_ii.status == "violation":
        part_ii.witness = _powerful_witness(psi, p)
    return part_i, part_ii


@dataclass
class LMReport:
    group_name: str
    checks: list[dict]

    @property
    def ok(self) -> bool:
        return all(c["holds"] for c in self.checks)


def check_lubotzky_mann_suite(g: GroupTable, p: int) -> LMReport:
    """For powerful g: gamma_i, Z_i, g^(p^i), lambda_i powerfully embedded and
    g^(p^i) equal to the set of p^i-th powers."""
    if not is_powerful(g, p):
        raise GroupError(f"{g.name} is not powerful")
    checks: list[dict] = []

    def record(kind: str, i: int, sub: SubgroupRef) -> None:
        checks.append({"kind": kind, "i": i, "order": sub.order,
                       "holds": is_powerfully_embedded(sub, g, p)})

    for i, t in enumerate(lower_central_series(g).terms, start=1):
        record("gamma", i, t)
    for i, t in enumerate(upper_central_series(g).terms):
        record("Z", i, t)
    for i, t in enumerate(lower_p_series(g, p).terms, start=1):
        record("lambda", i, t)
    whole = g.whole()
    i = 0
    while True:
        e = p ** i
        sub = power_subgroup(whole, e)
        record("power", i, sub)
        as_set = power_set(whole, e)
        checks.append({"kind": "power_set", "i": i, "order": sub.order,
                       "holds": bool(np.array_equal(as_set, sub.elements))})
        if sub.is_trivial:
            break
        i += 1
    return LMReport(g.name, checks)


def omega_one_center(h: GroupTable, p: int) -> SubgroupRef:
    """Central elements of order dividing p (a characteristic subgroup)."""
    z = center(h)
    keep = z.elements[(h.element_orders[z.elements] == 1) | (h.element_orders[z.elements] == p)]
    res = SubgroupRef(h, keep)
    res._normal = True
    return res


def b_candidates(h: GroupTable, n: int) -> list[SubgroupRef]:
    """Normal subgroups N used for the extension statement at level n."""
    cands = [upper_central_series(h).term(i) for i in range(0, n + 1)]
    cands.append(script_D_n(h, n))
    cands.append(center(h))
    out: list[SubgroupRef] = []
    for c in cands:
        if c not in out:
            out.append(c)
    return out


def frattini_candidates(h: GroupTable, p: int, n: int, limit: int = 8) -> list[SubgroupRef]:
    """Normal subgroups of exponent p inside F_n(H): Omega_1(Z(H)) cut down to F_n,
    its cyclic order-p subgroups, and the trivial group."""
    fn = script_F_n(h, p, n)
    base = intersection(omega_one_center(h, p), fn)
    out = [h.trivial(), base]
    out[0]._normal = True
    for z in base.elements[1:]:
        cyc = SubgroupRef(h, [h.power(int(z), k) for k in range(p)])
        cyc._normal = True
        if cyc not in out:
            out.append(cyc)
        if len(out) >= limit:
            break
    return out
