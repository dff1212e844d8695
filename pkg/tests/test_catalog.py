import numpy as np
import pytest

from ppgroups.catalog import (CONSTRUCTORS, catalog_entries, cyclic, dihedral, direct_product,
                              entry_name, extraspecial_exp_p2, from_spec, heisenberg, quaternion,
                              reference_presentation, semidihedral)
from ppgroups.fp import parse_presentation, relator_violations, todd_coxeter
from ppgroups.group import GroupError, fingerprint, nilpotency_class, subgroup_closure

ENTRIES = sorted({e for p, cap in ((2, 64), (3, 81), (5, 125)) for e in catalog_entries(p, cap)})


@pytest.mark.parametrize("kind,args", ENTRIES, ids=[entry_name(*e) for e in ENTRIES])
def test_reference_presentation(kind, args):
    g = CONSTRUCTORS[kind](*args)
    text, images = reference_presentation(kind, *args)
    p = parse_presentation(text)
    assert todd_coxeter(p).coset_count == g.order
    assert relator_violations(g, images, p.relators) == []
    assert subgroup_closure(g, images).order == g.order


def test_catalog_entries_p3():
    names = {entry_name(*e) for e in catalog_entries(3, 27)}
    assert {"cyclic(27)", "elementary_abelian(3, 3)", "heisenberg(3)", "extraspecial_exp_p2(3)"} <= names


def test_catalog_entries_p2():
    names = {entry_name(*e) for e in catalog_entries(2, 16)}
    assert {"cyclic(16)", "elementary_abelian(2, 4)", "dihedral(8)", "dihedral(16)",
            "quaternion(8)", "semidihedral(16)"} <= names


def test_catalog_rejects_composite():
    with pytest.raises(GroupError):
        catalog_entries(4, 64)


def test_heisenberg_structure():
    h = heisenberg(3)
    assert h.order == 27 and h.exponent == 3 and nilpotency_class(h) == 2


def test_extraspecial_exp_p2():
    g = extraspecial_exp_p2(3)
    assert g.order == 27 and g.exponent == 9 and not g.is_abelian


def test_heisenberg_2_is_dihedral_8():
    assert fingerprint(heisenberg(2)) == fingerprint(dihedral(8))


def test_two_groups():
    assert int((quaternion(8).element_orders == 2).sum()) == 1
    assert int((dihedral(8).element_orders == 2).sum()) == 5
    sd = semidihedral(16)
    assert sd.order == 16 and sd.exponent == 8 and not sd.is_abelian


@pytest.mark.parametrize("spec,order", [("heisenberg3", 27), ("C9xC3", 27), ("D8", 8), ("Q8", 8),
                                        ("SD16", 16), ("M27", 27), ("C2^3", 8), ("C4^2", 16),
                                        ("direct_product(cyclic(9), cyclic(3))", 27),
                                        ("heisenberg(5)", 125), ("trivial", 1)])
def test_from_spec(spec, order):
    assert from_spec(spec).order == order


def test_from_spec_rejects():
    with pytest.raises(GroupError):
        from_spec("banana7")
    with pytest.raises(GroupError):
        from_spec("M28")


def test_direct_product_numbering():
    a, b = cyclic(4), cyclic(3)
    g = direct_product(a, b)
    x, y = 1 * 3 + 2, 3 * 3 + 1  # (1, 2) and (3, 1)
    assert g.mult[x, y] == ((1 + 3) % 4) * 3 + (2 + 1) % 3
    assert np.array_equal(g.mult[:3, :3], b.mult)
