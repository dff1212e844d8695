import pytest

import brute
from ppgroups.catalog import (cyclic, dihedral, direct_product, elementary_abelian,
                              extraspecial_exp_p2, heisenberg, quaternion)
from ppgroups.group import GroupError, center, commutator_subgroup
from ppgroups.powerful import (TheoremCheck, b_candidates, check_frattini_theorem,
                               check_lubotzky_mann_suite, check_theorem_A_i, check_theorem_A_ii,
                               check_theorem_A_iii, check_theorem_B, frattini_candidates,
                               is_powerful, is_powerfully_embedded, omega_one_center)
from ppgroups.series import lower_central_series, upper_central_series


def brute_powerful(g, p):
    e = 4 if p == 2 else p
    allg = range(g.order)
    return brute.commutator_subgroup(g.mult, allg, allg) <= brute.power_subgroup(g.mult, allg, e)


def brute_embedded(g, sub, p):
    e = 4 if p == 2 else p
    return brute.commutator_subgroup(g.mult, sub, range(g.order)) <= brute.power_subgroup(g.mult, sub, e)


GROUPS = [lambda: cyclic(27), lambda: heisenberg(3), lambda: extraspecial_exp_p2(3), lambda: dihedral(8),
          lambda: quaternion(8), lambda: dihedral(16), lambda: direct_product(cyclic(9), cyclic(3)),
          lambda: heisenberg(5)]


@pytest.mark.parametrize("make", GROUPS)
def test_is_powerful_matches_brute(make):
    g = make()
    assert is_powerful(g, g.prime) == brute_powerful(g, g.prime)


def test_examples():
    assert is_powerful(elementary_abelian(3, 3), 3)
    assert not is_powerful(heisenberg(3), 3)
    assert is_powerful(extraspecial_exp_p2(3), 3)
    h = heisenberg(3)
    assert is_powerfully_embedded(h.trivial(), h, 3)
    assert is_powerfully_embedded(center(h), h, 3)


@pytest.mark.parametrize("make", GROUPS)
def test_embedded_matches_brute(make):
    g = make()
    for t in lower_central_series(g).terms:
        assert is_powerfully_embedded(t, g, g.prime) == brute_embedded(g, set(t.tolist()), g.prime)


def test_theorem_A_heisenberg():
    h = heisenberg(3)
    c = check_theorem_A_i(h, 3, 2)
    assert c.hypothesis_holds and c.conclusion_holds and c.status == "substantive_pass"
    c = check_theorem_A_ii(h, 3, 2)
    assert c.status == "substantive_pass"
    c = check_theorem_A_iii(h, 3, 2)
    assert c.hypothesis_holds and c.conclusion_holds


def test_theorem_A_abelian_trivial():
    a = direct_product(cyclic(9), cyclic(3))
    for n in (1, 2, 3):
        assert check_theorem_A_i(a, 3, n).conclusion_holds
        assert check_theorem_A_ii(a, 3, n).conclusion_holds


def test_theorem_A_even_prime_ids():
    d = dihedral(16)
    c = check_theorem_A_i(d, 2, 2)
    assert c.theorem_id == "A'_i" and c.status != "violation"
    c = check_theorem_A_ii(quaternion(8), 2, 2)
    assert c.theorem_id == "A'_ii" and c.status != "violation"


def test_theorem_A_iii_rejects_even_prime():
    with pytest.raises(GroupError):
        check_theorem_A_iii(dihedral(8), 2, 2)
    c = check_theorem_A_iii(extraspecial_exp_p2(3), 3, 2)
    assert c.status != "violation"


def test_theorem_B():
    h = heisenberg(3)
    z = center(h)
    b_i, b_ii = check_theorem_B(h, z, 3, 1)
    assert b_i.hypothesis_holds and b_i.conclusion_holds
    assert b_ii.status != "violation"
    # N = Z_n(H) with powerful quotient must confirm
    for n in (1, 2):
        zn = upper_central_series(h).term(n)
        b_i, _ = check_theorem_B(h, zn, 3, n)
        assert b_i.status != "violation"


def test_theorem_B_trivial_n():
    g = extraspecial_exp_p2(3)
    b_i, _ = check_theorem_B(g, g.trivial(), 3, 1)
    assert b_i.hypothesis_holds and b_i.conclusion_holds


def test_frattini_theorem():
    a = elementary_abelian(3, 2)
    i, ii = check_frattini_theorem(a, a.trivial(), 3, 1)
    assert i.status != "violation" and ii.status != "violation"
    h = heisenberg(3)
    i, ii = check_frattini_theorem(h, center(h), 3, 1)
    assert i.hypothesis_holds and ii.hypothesis_holds and ii.conclusion_holds
    d = dihedral(8)
    i, ii = check_frattini_theorem(d, center(d), 2, 1)
    assert ii is None and i.hypothesis_holds


def test_lubotzky_mann():
    for g in (cyclic(27), extraspecial_exp_p2(3), direct_product(cyclic(9), cyclic(3))):
        rep = check_lubotzky_mann_suite(g, 3)
        assert rep.ok and rep.checks
    with pytest.raises(GroupError):
        check_lubotzky_mann_suite(heisenberg(3), 3)


def test_candidates_are_normal():
    h = direct_product(heisenberg(3), cyclic(3))
    for n in (1, 2):
        for c in b_candidates(h, n):
            assert brute.is_normal(h.mult, set(c.tolist()))
        for c in frattini_candidates(h, 3, n):
            assert brute.is_normal(h.mult, set(c.tolist()))
            assert c.exponent() in (1, 3)
    w = omega_one_center(direct_product(cyclic(9), cyclic(3)), 3)
    assert w.order == 9


def test_check_status_and_witness():
    c = TheoremCheck("X", "G", 1, False, False, witness={"a": 1})
    assert c.status == "vacuous_pass" and c.witness is None
    c = TheoremCheck("X", "G", 1, True, False)
    assert c.status == "violation" and c.witness == {}
    assert c.to_json()["status"] == "violation"


def test_gamma2_of_heisenberg_is_center():
    h = heisenberg(3)
    assert commutator_subgroup(h.whole(), h.whole()) == center(h)
