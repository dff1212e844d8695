import json

import numpy as np
import pytest
from hypothesis import given, strategies as st
from sympy.combinatorics.fp_groups import FpGroup
from sympy.combinatorics.free_groups import free_group

from ppgroups.catalog import cyclic, elementary_abelian
from ppgroups.fp import (EnumerationExceeded, Presentation, PresentationError, abelian_order_bound,
                         canonical_relator, cyclic_reduce, eliminate_generators, evaluate_words,
                         exponent_sum_matrix, inverse, load_presentation, local_invariant_exponents,
                         parse_presentation, reduce, relator_violations, resolve_presentation,
                         table_to_group, todd_coxeter)
from ppgroups.group import abelian_invariants, fingerprint

TRIANGLE = "<a,b | a^2, b^2, (a*b)^3>"
QUATERNION = "<a,b | a^4, a^2*b^-2, b^-1*a*b*a>"


def sympy_order(p: Presentation) -> int:
    F, *gens = free_group(",".join(f"g{i}" for i in range(p.generator_count)))
    rels = []
    for r in p.relators:
        w = F.identity
        for x in r:
            w = w * (gens[abs(x) - 1] if x > 0 else gens[abs(x) - 1] ** -1)
        rels.append(w)
    return int(FpGroup(F, rels).order())


class TestWords:
    def test_reduce_examples(self):
        assert reduce([1, -1]) == ()
        assert reduce([1, 2, -2, 1]) == (1, 1)
        assert reduce([-3, 3, -3]) == (-3,)

    def test_cyclic_reduce(self):
        assert cyclic_reduce([2, 1, 3, -2]) == (1, 3)

    def test_canonical_relator_is_rotation_and_inverse_invariant(self):
        w = (1, 2, -1, 3, 3)
        c = canonical_relator(w)
        for k in range(len(w)):
            rot = w[k:] + w[:k]
            assert canonical_relator(rot) == c
            assert canonical_relator(inverse(rot)) == c

    def test_zero_letter(self):
        with pytest.raises(PresentationError):
            reduce([1, 0])


class TestParse:
    def test_text(self):
        p = parse_presentation(TRIANGLE)
        assert p.generator_count == 2 and len(p.relators) == 3
        assert p.relators[2] == (1, 2, 1, 2, 1, 2)

    def test_json_round_trip(self):
        p = parse_presentation(QUATERNION)
        q = load_presentation(json.dumps(p.to_json()))
        assert q.relators == p.relators

    def test_text_round_trip(self):
        p = parse_presentation("<x,y | x^3, y^-2, x*y*x^-1*y^-1>")
        q = parse_presentation(p.to_text())
        assert q.relators == p.relators

    @pytest.mark.parametrize("bad", ["<a | b>", "a, b", "<a | a^>", "<a,a | a>"])
    def test_rejects(self, bad):
        with pytest.raises(PresentationError):
            parse_presentation(bad)

    def test_json_letter_range(self):
        with pytest.raises(PresentationError):
            Presentation.from_json({"generators": 1, "relators": [[2]]})


class TestEnumeration:
    def test_golden_orders(self):
        assert todd_coxeter(parse_presentation("<a | a^5>"), max_cosets=100).coset_count == 5
        assert todd_coxeter(parse_presentation(TRIANGLE), max_cosets=100).coset_count == 6
        assert todd_coxeter(parse_presentation(QUATERNION), max_cosets=100).coset_count == 8

    def test_deterministic_tables(self):
        for text in ("<a | a^5>", TRIANGLE, QUATERNION):
            a = todd_coxeter(parse_presentation(text), max_cosets=100)
            b = todd_coxeter(parse_presentation(text), max_cosets=100)
            assert a.tobytes() == b.tobytes()

    def test_standardized(self):
        ct = todd_coxeter(parse_presentation(QUATERNION))
        # cosets appear in first-use order when scanning row by row
        seen = [0]
        for row in ct.action:
            for c in row:
                if int(c) not in seen:
                    seen.append(int(c))
        assert seen == list(range(ct.coset_count))

    def test_subgroup_index(self):
        p = parse_presentation(TRIANGLE)
        assert todd_coxeter(p, [(1,)]).coset_count == 3
        assert todd_coxeter(p, [(1, 2)]).coset_count == 2

    def test_exceeded(self):
        with pytest.raises(EnumerationExceeded):
            todd_coxeter(parse_presentation("<a,b | a^2>"), max_cosets=50)

    def test_bad_cap(self):
        with pytest.raises(PresentationError):
            todd_coxeter(parse_presentation("<a | a^2>"), max_cosets=0)

    @pytest.mark.parametrize("text", [
        "<a,b | a^3, b^3, (a*b)^3, (a^-1*b)^3>",
        "<a,b | a^8, b^2, b*a*b*a^-3>",
        "<a,b,c | a^2, b^2, c^2, (a*b)^2, (b*c)^3, (a*c)^2>",
        "<x,y | x^9, y^3, y^-1*x*y*x^-4>",
    ])
    def test_order_matches_sympy(self, text):
        p = parse_presentation(text)
        assert todd_coxeter(p).coset_count == sympy_order(p)


class TestTableToGroup:
    def test_cyclic(self):
        p = parse_presentation("<a | a^5>")
        g, gens = table_to_group(todd_coxeter(p), p)
        assert fingerprint(g) == fingerprint(cyclic(5))

    def test_triangle(self):
        p = parse_presentation(TRIANGLE)
        g, gens = table_to_group(todd_coxeter(p), p)
        assert g.order == 6 and not g.is_abelian

    def test_quaternion(self):
        p = parse_presentation(QUATERNION)
        g, gens = table_to_group(todd_coxeter(p), p)
        assert g.order == 8 and g.exponent == 4
        assert int((g.element_orders == 2).sum()) == 1
        assert relator_violations(g, gens, p.relators) == []

    def test_incomplete_rejected(self):
        ct = todd_coxeter(parse_presentation("<a | a^3>"))
        ct.status = "partial"
        with pytest.raises(PresentationError):
            table_to_group(ct)


class TestResolution:
    def test_elimination_keeps_group(self):
        # x2 = x1^2, x3 = x2*x1 in a cyclic group of order 7
        p = Presentation(3, [(1,) * 7, (-2, 1, 1), (-3, 2, 1)])
        red = eliminate_generators(p)
        assert len(red.base) == 1
        r = resolve_presentation(p)
        assert r.group.order == 7
        assert relator_violations(r.group, r.images[1:], p.relators) == []

    def test_abelian_bound(self):
        # Z/4 + Z/2 as relators on two generators
        rels = [(1, 1, 1, 1), (2, 2), (1, 2, -1, -2)]
        m = exponent_sum_matrix(2, rels)
        assert sorted(local_invariant_exponents(m, 2, 6)) == [1, 2]
        assert abelian_order_bound(2, rels, 2) == 8

    def test_bound_gate_raises_early(self):
        p = parse_presentation("<a,b,c,d | a^2, b^2, c^2, d^2>")
        with pytest.raises(EnumerationExceeded, match="at least 16"):
            resolve_presentation(p, order_cap=8)

    def test_evaluate_words(self):
        g = elementary_abelian(2, 2)
        vals = evaluate_words(g, [1, 2], [(1, 2), (1, 1), ()])
        assert vals.tolist() == [int(g.mult[1, 2]), 0, 0]


@given(st.lists(st.integers(1, 6), min_size=1, max_size=3))
def test_abelian_presentations_enumerate_to_product(orders):
    k = len(orders)
    rels = [(i + 1,) * n for i, n in enumerate(orders)]
    rels += [(i + 1, j + 1, -(i + 1), -(j + 1)) for i in range(k) for j in range(i + 1, k)]
    p = Presentation(k, rels)
    ct = todd_coxeter(p)
    assert ct.coset_count == int(np.prod(orders))
    g, gens = table_to_group(ct, p)
    assert relator_violations(g, gens, p.relators) == []
    assert g.is_abelian
    assert int(np.prod(abelian_invariants(g))) == g.order
