import numpy as np
import pytest

from ppgroups.catalog import cyclic, dihedral, direct_product, heisenberg, quaternion
from ppgroups.crossed import (CrossedSquare, identity_crossed_module, inclusion_crossed_module,
                              pullback, trivial_crossed_module, validate_crossed_module,
                              validate_crossed_square)
from ppgroups.group import (ActionByAutomorphisms, Homomorphism, center, commutator_subgroup,
                            conjugation_action, identity_hom, subgroup_closure)


def commutator_square(g):
    """G -> G, G -> G with h(m, n) = m n m^-1 n^-1: the classical crossed square."""
    idm = identity_crossed_module(g)
    idh = identity_hom(g)
    m, inv = g.mult, g.inv
    ar = np.arange(g.order)
    h = m[m[ar[:, None], ar[None, :]], m[inv[:, None], inv[None, :]]]
    return CrossedSquare(g, idm, idm, idh, idh, h, conjugation_action(idh))


class TestCrossedModules:
    @pytest.mark.parametrize("make", [lambda: heisenberg(3), lambda: dihedral(8), lambda: quaternion(8)])
    def test_identity_and_inclusion(self, make):
        g = make()
        assert validate_crossed_module(identity_crossed_module(g)) is None
        assert validate_crossed_module(inclusion_crossed_module(center(g))) is None
        assert validate_crossed_module(inclusion_crossed_module(commutator_subgroup(g.whole(), g.whole()))) is None

    def test_non_normal_inclusion_fails_equivariance(self):
        d = dihedral(8)
        bad = validate_crossed_module(inclusion_crossed_module(subgroup_closure(d, [1])))
        assert bad is not None and bad["axiom"] == "equivariance"
        assert len(bad["witness"]) == 2

    def test_trivial_module_needs_abelian_source(self):
        g = cyclic(3)
        assert validate_crossed_module(trivial_crossed_module(cyclic(4), g)) is None
        bad = validate_crossed_module(trivial_crossed_module(dihedral(8), g))
        assert bad is not None and bad["axiom"] == "peiffer"

    def test_bad_action_reported(self):
        g = cyclic(3)
        m = cyclic(5)
        perm = np.tile(np.arange(5), (3, 1))
        perm[1] = [0, 2, 1, 3, 4]  # not an automorphism
        from ppgroups.crossed import CrossedModule
        cm = CrossedModule(m, g, Homomorphism(m, g, np.zeros(5, dtype=int)), ActionByAutomorphisms(g, m, perm))
        bad = validate_crossed_module(cm)
        assert bad is not None and bad["axiom"].startswith("action")


class TestPullback:
    def test_identity_gives_diagonal(self):
        g = heisenberg(3)
        idm = identity_crossed_module(g)
        pb = pullback(idm, idm)
        assert pb.k.order == 27
        assert all(a == b for a, b in pb.pairs.tolist())

    def test_trivial_maps_give_product(self):
        g = cyclic(2)
        pb = pullback(trivial_crossed_module(cyclic(3), g), trivial_crossed_module(cyclic(9), g))
        assert pb.k.order == 27
        assert pb.pi1.is_homomorphism() and pb.pi2.is_homomorphism()

    def test_center_against_identity(self):
        h = heisenberg(3)
        pb = pullback(inclusion_crossed_module(center(h)), identity_crossed_module(h))
        # brute-force fiber count
        z = center(h).tolist()
        expected = sum(1 for a in range(len(z)) for b in range(h.order) if z[a] == b)
        assert pb.k.order == expected == 3

    def test_element_lookup(self):
        g = cyclic(4)
        idm = identity_crossed_module(g)
        pb = pullback(idm, idm)
        assert pb.element(2, 2) == 2


class TestCrossedSquare:
    @pytest.mark.parametrize("make", [lambda: heisenberg(3), lambda: dihedral(8),
                                      lambda: direct_product(quaternion(8), cyclic(2))])
    def test_commutator_square_valid(self, make):
        assert validate_crossed_square(commutator_square(make())) is None

    def test_sampled_mode(self):
        sq = commutator_square(dihedral(16))
        assert validate_crossed_square(sq, sample_cap=4, samples=500, seed=3) is None
        assert validate_crossed_square(sq, sample_cap=4, samples=500, seed=3,
                                       l_generators=[1, 2]) is None

    def test_broken_pairing_detected(self):
        sq = commutator_square(heisenberg(3))
        h = sq.h.copy()
        h[1, 3] = 0 if h[1, 3] else 1
        sq.h = h
        bad = validate_crossed_square(sq)
        assert bad is not None and bad["axiom"].startswith("(ii)")

    def test_broken_alpha_detected(self):
        g = cyclic(4)
        sq = commutator_square(g)
        sq.alpha = Homomorphism(g, g, np.array([0, 3, 2, 1]))  # inversion: a hom, but square fails
        bad = validate_crossed_square(sq)
        assert bad is not None
