"""Property tests over randomly drawn small p-groups and direct products."""

from math import gcd

from hypothesis import given
from hypothesis import strategies as st

from ppgroups.abelian import abelian_tensor_invariants
from ppgroups.catalog import CONSTRUCTORS, catalog_entries, cyclic, direct_product, trivial_group
from ppgroups.crossed import trivial_crossed_module
from ppgroups.group import (abelian_invariants, center, commutator_subgroup, nilpotency_class,
                            power_set, power_subgroup, quotient_group, subgroup_closure)
from ppgroups.powerful import is_powerful, is_powerfully_embedded
from ppgroups.series import (frattini_series, lower_central_series, lower_p_closed_form,
                             lower_p_series_recursive, script_D_n, upper_central_series)
from ppgroups.tensor import compute_tensor

CAPS = {2: 32, 3: 27, 5: 25}
ENTRIES = {p: catalog_entries(p, cap) for p, cap in CAPS.items()}


@st.composite
def p_groups(draw):
    p = draw(st.sampled_from(sorted(CAPS)))
    kind, args = draw(st.sampled_from(ENTRIES[p]))
    g = CONSTRUCTORS[kind](*args)
    small = [e for e in ENTRIES[p] if CONSTRUCTORS[e[0]](*e[1]).order * g.order <= CAPS[p]]
    if small and draw(st.booleans()):
        k2, a2 = draw(st.sampled_from(small))
        g = direct_product(g, CONSTRUCTORS[k2](*a2))
    return p, g


@given(p_groups())
def test_lower_p_closed_form_matches_recursion(pg):
    p, g = pg
    rec = lower_p_series_recursive(g, p)
    gammas = lower_central_series(g)
    for n in range(1, len(rec.terms) + 2):
        assert lower_p_closed_form(g, p, n, gammas) == rec.term(n)


@given(p_groups())
def test_central_series_meet(pg):
    # gamma_i <= Z_(c - i + 1) and both series have length c
    _, g = pg
    c = nilpotency_class(g)
    lower, upper = lower_central_series(g), upper_central_series(g)
    for i in range(1, c + 2):
        assert lower.term(i) <= upper.term(c - i + 1)
    assert len(lower.terms) - 1 == c == upper.stabilized_at


@given(p_groups())
def test_upper_central_inside_D(pg):
    _, g = pg
    for n in range(1, nilpotency_class(g) + 2):
        assert upper_central_series(g).term(n) <= script_D_n(g, n)


@given(p_groups())
def test_series_are_normal_and_descending(pg):
    p, g = pg
    for s in (lower_central_series(g), frattini_series(g, p), lower_p_series_recursive(g, p)):
        for a, b in zip(s.terms, s.terms[1:]):
            assert b <= a and b.is_normal


@given(p_groups())
def test_powerful_groups_have_power_sets(pg):
    p, g = pg
    if not is_powerful(g, p):
        return
    w = g.whole()
    e = 4 if p == 2 else p
    assert commutator_subgroup(w, w) <= power_subgroup(w, e)
    assert list(power_set(w, p)) == list(power_subgroup(w, p).elements)
    assert is_powerfully_embedded(center(g), g, p)


@given(p_groups())
def test_quotient_by_center(pg):
    _, g = pg
    z = center(g)
    q, proj = quotient_group(g, z)
    assert q.order * z.order == g.order
    assert proj.is_homomorphism() and proj.is_surjective()
    assert proj.kernel() == z
    # G/Z(G) is never a nontrivial cyclic group
    assert not (q.is_abelian and len(abelian_invariants(q)) == 1)


@given(st.lists(st.sampled_from([2, 3, 4, 8, 9, 16, 25, 27]), min_size=1, max_size=2))
def test_product_invariants(orders):
    g = cyclic(orders[0])
    for n in orders[1:]:
        g = direct_product(g, cyclic(n))
    prod = 1
    for x in abelian_invariants(g):
        prod *= x
    assert prod == g.order
    assert subgroup_closure(g, range(g.order)).order == g.order


@given(st.sampled_from([2, 3, 4, 8, 9]), st.sampled_from([2, 3, 4, 6, 9]))
def test_trivial_action_tensor_of_cyclics(m, n):
    one = trivial_group()
    t = compute_tensor(trivial_crossed_module(cyclic(m), one), trivial_crossed_module(cyclic(n), one))
    assert t.group.order == gcd(m, n)
    assert abelian_invariants(t.group) == abelian_tensor_invariants([m], [n])
