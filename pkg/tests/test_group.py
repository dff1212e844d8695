import json

import numpy as np
import pytest

import brute
from ppgroups.catalog import (cyclic, dihedral, direct_product, elementary_abelian, heisenberg,
                              quaternion)
from ppgroups.group import (GroupError, GroupTable, NotNormalError, ResourceError, SubgroupRef,
                            abelian_invariants, center, commutator_subgroup, extend_from_generators,
                            fingerprint, generating_subset, group_from_json, hom_violation_on_generators,
                            identity_hom, intersection, iterated_commutator, load_group, make_group,
                            nilpotency_class, normal_closure, power_set, power_subgroup,
                            product_of_subgroups, quotient_group, subgroup_as_group,
                            subgroup_closure, validate_table)


def els(s):
    return set(s.tolist())


class TestValidate:
    def test_cyclic_ok(self):
        assert validate_table(cyclic(4)) is None

    def test_identity_violation_witness(self):
        m = cyclic(3).mult.copy()
        m[0, 1] = 0
        bad = validate_table(GroupTable(m))
        assert bad["axiom"] == "identity"
        assert bad["witness"] == [1]

    def test_heisenberg_exhaustive(self):
        assert validate_table(heisenberg(3), assoc_cap=10**6) is None

    def test_non_associative_latin_square(self):
        # the quasigroup x*y = (2x - y) mod 5 is not a group; shift so 0 is an identity row
        m = np.array([[0, 1, 2, 3, 4],
                      [1, 0, 3, 4, 2],
                      [2, 4, 0, 1, 3],
                      [3, 2, 4, 0, 1],
                      [4, 3, 1, 2, 0]])
        bad = validate_table(GroupTable(m))
        assert bad is not None and bad["axiom"] == "associativity"

    def test_light_test_matches_exhaustive(self):
        g = direct_product(heisenberg(3), cyclic(3))
        assert validate_table(g, assoc_cap=1) is None
        m = g.mult.copy()
        # swapping two columns of a Cayley table keeps it latin but breaks the group law
        m[:, [5, 7]] = m[:, [7, 5]]
        m[[5, 7], :] = m[[7, 5], :]
        t = GroupTable(m)
        assert validate_table(t, assoc_cap=1) is not None
        assert validate_table(t, assoc_cap=10**6) is not None

    def test_make_group_rejects(self):
        with pytest.raises(GroupError):
            make_group([[0, 1], [1, 1]])

    def test_order_cap(self):
        with pytest.raises(ResourceError):
            cyclic(100, order_cap=50)


class TestSubgroups:
    def test_closure_examples(self):
        c8 = cyclic(8)
        assert els(subgroup_closure(c8, [2])) == {0, 2, 4, 6}
        d8 = dihedral(8)
        assert subgroup_closure(d8, [1]).order == 2
        assert els(subgroup_closure(d8, [])) == {0}

    @pytest.mark.parametrize("make", [lambda: dihedral(8), lambda: heisenberg(3), lambda: quaternion(8),
                                      lambda: dihedral(16)])
    def test_commutator_matches_brute(self, make):
        g = make()
        w = g.whole()
        assert els(commutator_subgroup(w, w)) == brute.commutator_subgroup(g.mult, range(g.order), range(g.order))

    def test_commutator_examples(self):
        a = elementary_abelian(2, 3)
        assert commutator_subgroup(a.whole(), a.whole()).is_trivial
        h = heisenberg(3)
        assert commutator_subgroup(h.whole(), h.whole()).order == 3
        d = dihedral(8)
        # r^2 has index 4 in the r^i s^j numbering
        assert els(commutator_subgroup(d.whole(), d.whole())) == {0, 4}

    def test_iterated_commutator(self):
        h = heisenberg(3)
        assert iterated_commutator(center(h), h.whole(), 1).is_trivial
        assert iterated_commutator(h.whole(), h.whole(), 2).is_trivial
        z = center(h)
        assert iterated_commutator(z, h.whole(), 0) == z

    def test_power_subgroup(self):
        assert power_subgroup(cyclic(9).whole(), 3).order == 3
        d = dihedral(8)
        assert els(power_subgroup(d.whole(), 2)) == {0, 4}
        assert power_subgroup(elementary_abelian(3, 3).whole(), 3).is_trivial

    def test_power_set_may_be_smaller_than_subgroup(self):
        # in C2 x D8 ... squares always form a set inside the power subgroup
        g = direct_product(quaternion(8), cyclic(4))
        w = g.whole()
        assert set(power_set(w, 2).tolist()) <= els(power_subgroup(w, 2))

    def test_product_and_intersection(self):
        h = heisenberg(3)
        z, d = center(h), commutator_subgroup(h.whole(), h.whole())
        assert product_of_subgroups(z, d).order == 3
        assert product_of_subgroups(z, h.trivial()) == z
        assert product_of_subgroups(z, z) == z
        assert intersection(z, h.whole()) == z

    def test_center_examples(self):
        a = direct_product(cyclic(4), cyclic(2))
        assert center(a).order == 8
        assert center(heisenberg(3)).order == 3
        q = quaternion(8)
        assert els(center(q)) == brute.center(q.mult)
        assert center(q).order == 2

    def test_normal_closure(self):
        d = dihedral(8)
        n = normal_closure(d, [1])
        assert n.is_normal and brute.is_normal(d.mult, els(n))
        assert n.order == 4

    def test_different_ambients_rejected(self):
        a, b = cyclic(4), cyclic(4)
        with pytest.raises(GroupError):
            _ = a.whole() <= b.whole()


class TestQuotients:
    def test_heisenberg_mod_center(self):
        h = heisenberg(3)
        q, proj = quotient_group(h, center(h))
        assert q.order == 9 and q.is_abelian and q.exponent == 3
        assert proj.is_homomorphism() and proj.is_surjective()
        assert proj.kernel() == center(h)

    def test_trivial_and_whole(self):
        g = dihedral(8)
        q, _ = quotient_group(g, g.trivial())
        assert fingerprint(q) == fingerprint(g)
        q, _ = quotient_group(g, g.whole())
        assert q.order == 1

    def test_non_normal_rejected(self):
        d = dihedral(8)
        with pytest.raises(NotNormalError):
            quotient_group(d, subgroup_closure(d, [1]))

    def test_subgroup_as_group(self):
        h = heisenberg(3)
        z, inc = subgroup_as_group(center(h))
        assert z.order == 3 and inc.is_homomorphism() and inc.is_injective()


class TestInvariants:
    def test_heisenberg(self):
        h = heisenberg(3)
        assert h.order == 27 and h.exponent == 3 and nilpotency_class(h) == 2

    def test_abelian_invariants(self):
        g = direct_product(cyclic(4), direct_product(cyclic(2), cyclic(8)))
        assert abelian_invariants(g) == (2, 4, 8)
        assert abelian_invariants(cyclic(5)) == (5,)

    def test_cyclic_table(self):
        c = cyclic(5)
        i = np.arange(5)
        assert np.array_equal(c.mult, (i[:, None] + i[None, :]) % 5)

    def test_klein(self):
        v = direct_product(cyclic(2), cyclic(2))
        assert v.order == 4 and v.exponent == 2 and v.is_abelian

    def test_element_orders_match_brute(self):
        g = dihedral(16)
        hist = brute.order_histogram(g.mult)
        vals, counts = np.unique(g.element_orders, return_counts=True)
        assert dict(zip(vals.tolist(), counts.tolist())) == hist


class TestHomomorphisms:
    def test_extend_and_check(self):
        c8, c4 = cyclic(8), cyclic(4)
        img = extend_from_generators(c8, [1], c4, [1])
        assert img.tolist() == [x % 4 for x in range(8)]
        assert hom_violation_on_generators(c8, c4, img, [1]) is None

    def test_generator_check_detects_failure(self):
        c4, c3 = cyclic(4), cyclic(3)
        img = np.array([0, 1, 2, 0])
        assert hom_violation_on_generators(c4, c3, img, [1]) is not None

    def test_generating_subset(self):
        g = elementary_abelian(2, 3)
        gens = generating_subset(g, range(1, g.order))
        assert len(gens) == 3 and subgroup_closure(g, gens).order == 8

    def test_identity(self):
        assert identity_hom(quaternion(8)).is_homomorphism()


def test_json_round_trip(tmp_path):
    g = heisenberg(3)
    path = tmp_path / "h.json"
    path.write_text(json.dumps(g.to_json()))
    h = load_group(path)
    assert np.array_equal(h.mult, g.mult) and h.prime == 3


def test_json_shape_mismatch():
    with pytest.raises(GroupError):
        group_from_json({"order": 3, "mult": [[0, 1], [1, 0]]})


def test_subgroupref_normalises_elements():
    g = cyclic(6)
    s = SubgroupRef(g, [4, 2, 0, 2])
    assert s.tolist() == [0, 2, 4] and 2 in s and 3 not in s
