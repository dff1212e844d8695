"""Corpus generation, theorem-suite orchestration and reports."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import __version__
from .catalog import CONSTRUCTORS, catalog_entries, direct_product, entry_name
from .crossed import identity_crossed_module
from .group import (
    GroupError,
    GroupTable,
    ResourceError,
    center,
    fingerprint,
    nilpotency_class,
    order_statistics,
)
from .powerful import (
    TheoremCheck,
    b_candidates,
    check_frattini_theorem,
    check_lubotzky_mann_suite,
    check_theorem_A_i,
    check_theorem_A_ii,
    check_theorem_A_iii,
    check_theorem_B,
    frattini_candidates,
    is_powerful,
    omega_one_center,
)
from .series import (
    derived_series,
    frattini_series,
    lower_central_series,
    lower_p_closed_form,
    lower_p_series_recursive,
    script_D_n,
    upper_central_series,
)
from .tensor import (
    TensorCaps,
    TensorError,
    check_nfold_exact_sequence,
    check_theorem_C,
    compute_q_tensor,
    compute_tensor,
    lambda_surjection,
    n_fold_tensor,
    power_expansion_violation,
)

SCHEMA = "ppgroups.report/1"
SUITES = ("series-axioms", "powerful-theorems", "tensor-structure", "tensor-powerful",
          "exactness", "frattini")
DEFAULT_MAX_ORDER = {2: 128, 3: 243, 5: 125}
# theorem ids whose hypotheses can fail; each needs a minimum of substantive passes
THEOREM_IDS = ("A_i", "A'_i", "A_ii", "A'_ii", "A_iii", "B_i", "B_ii", "Frattini_i", "Frattini_ii",
               "C_tensor_powerful", "C_q_tensor_powerful", "C_gamma2_in_tau1", "C_tau1_in_power")

EXIT_OK, EXIT_VIOLATION, EXIT_RESOURCE, EXIT_USAGE = 0, 1, 2, 3


@dataclass(frozen=True)
class CorpusSpec:
    primes: tuple[int, ...] = (2, 3, 5)
    max_order: dict = field(default_factory=lambda: dict(DEFAULT_MAX_ORDER))
    constructors: tuple[str, ...] | None = None  # None: every catalog constructor
    products: bool = True
    seed: int = 0

    def limit(self, p: int) -> int:
        return int(self.max_order.get(p, DEFAULT_MAX_ORDER.get(p, 0)))

    def to_json(self) -> dict:
        return {"primes": list(self.primes), "max_order": {str(p): self.limit(p) for p in self.primes},
                "constructors": None if self.constructors is None else list(self.constructors),
                "products": self.products, "seed": self.seed}


@dataclass(frozen=True)
class CorpusItem:
    """A corpus group by recipe: one or two catalog entries (a direct product)."""
    p: int
    factors: tuple

    @property
    def name(self) -> str:
        return " x ".join(entry_name(k, a) for k, a in self.factors)

    def build(self) -> GroupTable:
        kind, args = self.factors[0]
        g = CONSTRUCTORS[kind](*args)
        for kind, args in self.factors[1:]:
            g = direct_product(g, CONSTRUCTORS[kind](*args))
        return GroupTable(g.mult, name=self.name, prime=g.prime, inv=g.inv)


def corpus_items(spec: CorpusSpec) -> list[CorpusItem]:
    """Catalog entries within caps, then pairwise direct products within caps,
    deduplicated by fingerprint and element-order statistics (first wins)."""
    out: list[CorpusItem] = []
    for p in spec.primes:
        if spec.limit(p) < 1:
            raise GroupError(f"no order limit for prime {p}")
        entries = [e for e in catalog_entries(p, spec.limit(p))
                   if spec.constructors is None or e[0] in spec.constructors]
        for kind, _ in entries:
            if kind not in CONSTRUCTORS:
                raise GroupError(f"unknown constructor {kind!r}")
        cands = [CorpusItem(p, (e,)) for e in entries]
        if spec.products:
            size = {e: CONSTRUCTORS[e[0]](*e[1]).order for e in entries}
            for i, a in enumerate(entries):
                for b in entries[i:]:
                    if size[a] * size[b] <= spec.limit(p):
                        cands.append(CorpusItem(p, (a, b)))
        seen = set()
        for item in cands:
            g = item.build()
            key = (fingerprint(g), order_statistics(g))
            if key not in seen:
                seen.add(key)
                out.append(item)
    return out


def build_corpus(spec: CorpusSpec) -> list[GroupTable]:
    return [item.build() for item in corpus_items(spec)]


# ---------------------------------------------------------------- records

def _record(suite: str, chk: TheoremCheck, p: int) -> dict:
    d = chk.to_json()
    d["suite"] = suite
    d["p"] = p
    return d


def _fact(suite: str, tid: str, g: GroupTable, p: int, n: int, holds: bool, detail: dict | None = None) -> dict:
    return _record(suite, TheoremCheck(tid, g.name, n, True, bool(holds), detail=detail or {}), p)


def _skipped(suite: str, tid: str, g: GroupTable, p: int, n: int, reason: str) -> dict:
    return {"suite": suite, "theorem_id": tid, "group_name": g.name, "parameter_n": n, "p": p,
            "status": "skipped_resource", "hypothesis_holds": None, "conclusion_holds": None,
            "witness": None, "detail": {"reason": reason}}


def _guard(suite: str, tid: str, g: GroupTable, p: int, n: int, fn) -> list[dict]:
    """Run fn; caps become skipped records and structure failures become violations."""
    try:
        return fn()
    except ResourceError as exc:
        return [_skipped(suite, tid, g, p, n, str(exc))]
    except TensorError as exc:
        rec = _fact(suite, tid, g, p, n, False)
        rec["witness"] = {"error": str(exc)}
        return [rec]


# ----------------------------------------------------------------- suites

def series_checks(g: GroupTable, p: int) -> list[dict]:
    s = "series-axioms"
    rec = lower_p_series_recursive(g, p)
    gammas = lower_central_series(g)
    bad = [n for n in range(1, len(rec.terms) + 2) if lower_p_closed_form(g, p, n, gammas) != rec.term(n)]
    out = [_fact(s, "lower_p_closed_form", g, p, len(rec.terms), not bad,
                 {"orders": rec.orders, "mismatch": bad})]
    upper = upper_central_series(g)
    depth = max(len(upper.terms), len(derived_series(g).terms)) + 1
    bad = [n for n in range(1, depth + 1) if not upper.term(n) <= script_D_n(g, n)]
    out.append(_fact(s, "Z_n_in_D_n", g, p, depth, not bad, {"mismatch": bad}))
    c = nilpotency_class(g)
    out.append(_fact(s, "central_series_lengths", g, p, c or 0,
                     c is not None and upper.stabilized_at == c and len(gammas.terms) - 1 == c,
                     {"class": c}))
    return out


def powerful_checks(g: GroupTable, p: int) -> list[dict]:
    s = "powerful-theorems"
    out = []
    c = nilpotency_class(g) or 0
    for n in range(1, c + 2):
        out.append(_record(s, check_theorem_A_i(g, p, n), p))
        out.append(_record(s, check_theorem_A_ii(g, p, n), p))
    if p != 2:
        dl = len(derived_series(g).terms)
        for n in range(2, dl + 2):
            out.append(_record(s, check_theorem_A_iii(g, p, n), p))
        for n in range(1, c + 1):
            for nsub in b_candidates(g, n):
                for chk in check_theorem_B(g, nsub, p, n):
                    out.append(_record(s, chk, p))
    if is_powerful(g, p):
        lm = check_lubotzky_mann_suite(g, p)
        for item in lm.checks:
            out.append(_fact(s, f"LM_{item['kind']}", g, p, item["i"], item["holds"],
                             {"order": item["order"]}))
    return out


def frattini_checks(g: GroupTable, p: int) -> list[dict]:
    s = "frattini"
    out = []
    depth = len(frattini_series(g, p).terms)
    for n in range(1, depth + 1):
        for nsub in frattini_candidates(g, p, n):
            for chk in check_frattini_theorem(g, nsub, p, n):
                if chk is not None:
                    out.append(_record(s, chk, p))
    return out


def tensor_structure_checks(g: GroupTable, p: int, caps: TensorCaps) -> list[dict]:
    s = "tensor-structure"
    cm = identity_crossed_module(g)
    out = []

    def plain():
        t = compute_tensor(cm, cm, caps)
        return [_fact(s, "tensor_structure_plain", g, p, 1, True,
                      {"order": t.group.order, "abelian": t.group.is_abelian})]

    def modq():
        t = compute_q_tensor(cm, cm, p, caps)
        return [_fact(s, "tensor_structure_mod_q", g, p, p, True, {"order": t.group.order})]

    out += _guard(s, "tensor_structure_plain", g, p, 1, plain)
    out += _guard(s, "tensor_structure_mod_q", g, p, p, modq)
    if g.is_abelian:
        out += _guard(s, "tensor_abelian_oracle", g, p, 1, lambda: [abelian_oracle_check(g, p, caps)])
    return out


def abelian_oracle_check(g: GroupTable, p: int, caps: TensorCaps) -> dict:
    """G (x) G with trivial actions against the Smith-normal-form tensor product."""
    from .abelian import abelian_tensor_invariants
    from .catalog import trivial_group
    from .crossed import trivial_crossed_module
    from .group import abelian_invariants

    one = trivial_group()
    cm = trivial_crossed_module(g, one)
    t = compute_tensor(cm, cm, caps)
    inv = list(abelian_invariants(g))
    expected = abelian_tensor_invariants(inv, inv)
    got = abelian_invariants(t.group) if t.group.is_abelian else None
    return _fact("tensor-structure", "tensor_abelian_oracle", g, p, 1, got == expected,
                 {"invariants": list(got) if got is not None else None, "expected": list(expected)})


def tensor_powerful_checks(g: GroupTable, p: int, caps: TensorCaps) -> list[dict]:
    s = "tensor-powerful"
    if p == 2 or not is_powerful(g, p):
        return []

    def run():
        res = [_record(s, chk, p) for chk in check_theorem_C(identity_crossed_module(g), p, caps)]
        cm = identity_crossed_module(g)
        t = compute_tensor(cm, cm, caps)
        bad = power_expansion_violation(t, p, 0, p, p)
        res.append(_fact(s, "power_expansion", g, p, 0, bad is None, {"witness": bad}))
        return res

    return _guard(s, "C_tensor_powerful", g, p, 1, run)


def exactness_checks(g: GroupTable, p: int, caps: TensorCaps) -> list[dict]:
    s = "exactness"
    out = []

    def exact():
        z = center(g)
        r = check_nfold_exact_sequence(g, z, 2, p, caps)
        return [_fact(s, "exact_fold_2", g, p, 2, r.holds,
                      {"kernel_order": r.kernel_order, "product_order": r.product_order,
                       "source_order": r.source_order, "target_order": r.target_order})]

    def surj():
        n = omega_one_center(g, p)
        t, theta = lambda_surjection(g, n, p, caps)
        lam = theta.image_subgroup().order
        return [_fact(s, "lambda_surjection", g, p, 1, t.group.order % lam == 0,
                      {"lambda_2_order": lam, "tensor_order": t.group.order})]

    def nfold():
        r = n_fold_tensor(g, 2, p, caps)
        if not r.complete:
            return [_skipped(s, "nfold_image", g, p, 2, r.error)]
        return [_fact(s, "nfold_image", g, p, 2, all(c["holds"] for c in r.image_checks),
                      {"checks": r.image_checks})]

    out += _guard(s, "exact_fold_2", g, p, 2, exact)
    out += _guard(s, "lambda_surjection", g, p, 1, surj)
    out += _guard(s, "nfold_image", g, p, 2, nfold)
    return out


def _run_item(args) -> list[dict]:
    suite, item, caps = args
    g = item.build()
    p = item.p
    if suite == "series-axioms":
        return series_checks(g, p)
    if suite == "powerful-theorems":
        return powerful_checks(g, p)
    if suite == "frattini":
        return frattini_checks(g, p)
    if suite == "tensor-structure":
        return tensor_structure_checks(g, p, caps)
    if suite == "tensor-powerful":
        return tensor_powerful_checks(g, p, caps)
    if suite == "exactness":
        return exactness_checks(g, p, caps)
    raise GroupError(f"unknown suite {suite!r}")


def _tensor_scope(item: CorpusItem, g_order: int, caps: TensorCaps) -> bool:
    return g_order <= caps.factor(None)


# ----------------------------------------------------------------- report

@dataclass
class SuiteReport:
    suite: str
    checks: list[dict]
    config: dict
    min_substantive: int = 3
    wall_time: float | None = None
    version: str = __version__

    @property
    def counts(self) -> dict:
        c = {"substantive_pass": 0, "vacuous_pass": 0, "violation": 0, "skipped_resource": 0}
        for r in self.checks:
            c[r["status"]] += 1
        return c

    def substantive_by_theorem(self) -> dict:
        out: dict[str, int] = {}
        for r in self.checks:
            if r["theorem_id"] in THEOREM_IDS:
                out.setdefault(r["theorem_id"], 0)
                out[r["theorem_id"]] += r["status"] == "substantive_pass"
        return dict(sorted(out.items()))

    def shortfalls(self) -> dict:
        return {k: v for k, v in self.substantive_by_theorem().items() if v < self.min_substantive}

    @property
    def exit_code(self) -> int:
        c = self.counts
        if c["violation"]:
            return EXIT_VIOLATION
        if c["skipped_resource"] or self.shortfalls():
            return EXIT_RESOURCE
        return EXIT_OK

    def to_json(self, include_timing: bool = False) -> dict:
        d = {"schema": SCHEMA, "suite": self.suite, "version": self.version, "config": self.config,
             "counts": self.counts, "substantive_by_theorem": self.substantive_by_theorem(),
             "min_substantive": self.min_substantive, "shortfalls": self.shortfalls(),
             "exit_code": self.exit_code, "checks": self.checks}
        if include_timing:
            d["wall_time"] = self.wall_time
        return d

    def to_text(self) -> str:
        c = self.counts
        lines = [f"suite {self.suite}: {c['substantive_pass']} substantive, {c['vacuous_pass']} vacuous, "
                 f"{c['violation']} violations, {c['skipped_resource']} skipped (exit {self.exit_code})"]
        for tid, k in self.substantive_by_theorem().items():
            flag = "" if k >= self.min_substantive else f"  (below minimum {self.min_substantive})"
            lines.append(f"  {tid}: {k} substantive{flag}")
        for r in self.checks:
            if r["status"] in ("violation", "skipped_resource"):
                lines.append(f"  {r['status']}: {r['theorem_id']} {r['group_name']} n={r['parameter_n']} "
                             f"{r['witness'] if r['status'] == 'violation' else r['detail'].get('reason')}")
        return "\n".join(lines)


def run_suite(suite: str, spec: CorpusSpec | None = None, caps: TensorCaps | None = None,
              jobs: int = 1, min_substantive: int = 3) -> SuiteReport:
    if suite != "all" and suite not in SUITES:
        raise GroupError(f"unknown suite {suite!r}")
    spec = spec or CorpusSpec()
    caps = caps or TensorCaps()
    start = time.perf_counter()
    items = corpus_items(spec)
    suites = SUITES if suite == "all" else (suite,)
    tasks = []
    for s in suites:
        for item in items:
            if s.startswith("tensor") or s == "exactness":
                order = 1
                for kind, args in item.factors:
                    order *= CONSTRUCTORS[kind](*args).order
                if not _tensor_scope(item, order, caps):
                    continue
            tasks.append((s, item, caps))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_run_item, tasks))
    else:
        results = [_run_item(t) for t in tasks]
    checks = [r for res in results for r in res]
    config = {"spec": spec.to_json(), "caps": {"factor_cap": caps.factor_cap, "order_cap": caps.order_cap,
                                               "max_cosets": caps.max_cosets},
              "corpus": [i.name for i in items], "tasks": len(tasks)}
    return SuiteReport(suite, checks, config, min_substantive, time.perf_counter() - start)
