import numpy as np
import pytest

from pnu.cosets import ResourceExceeded, enumerate_cosets, regular_representation
from pnu.nu import nu_presentation
from pnu.presentations import FinitePresentation, Word, catalog_group, parse_group_spec, parse_presentation


def test_cyclic6_regular():
    P = FinitePresentation(("a",), (Word.gen(0) ** 6,))
    ct = enumerate_cosets(P, [], 100)
    assert ct.status == "complete" and ct.live == 6


def test_dihedral8_over_reflection():
    ct = enumerate_cosets(catalog_group("dihedral:8"), [Word.gen(1)], 100)
    assert ct.live == 4


def test_nu_c2_both_index_modes():
    P = catalog_group("cyclic:2")
    assert enumerate_cosets(nu_presentation(P), [], 1000).live == 8
    assert enumerate_cosets(nu_presentation(P, "elements"), [], 1000).live == 8


def test_cyclic3_is_a_three_cycle():
    (g,) = regular_representation(catalog_group("cyclic:3"))
    assert sorted(g) == [0, 1, 2]
    assert not (g == np.arange(3)).any()
    assert (g[g[g]] == np.arange(3)).all()


def test_klein_commuting_involutions():
    a, b = regular_representation(catalog_group("elemab:2,2"))
    assert a.shape == (4,)
    for x in (a, b):
        assert (x[x] == np.arange(4)).all() and not (x == np.arange(4)).all()
    assert (a[b] == b[a]).all()


def test_extraspecial_commutators_central():
    perms = regular_representation(catalog_group("extraspecial:3,p"))
    assert len(perms) == 3 and perms[0].shape == (27,)
    inv = [np.argsort(x) for x in perms]

    def comm(i, j):
        # right action: apply x^-1 y^-1 x y left to right
        pt = np.arange(27)
        for q in (inv[i], inv[j], perms[i], perms[j]):
            pt = q[pt]
        return pt

    for i in range(3):
        for j in range(3):
            c = comm(i, j)
            for q in perms:
                assert (q[c] == c[q]).all()


@pytest.mark.parametrize("spec", ["dihedral:16", "quaternion:16", "semidihedral:16",
                                  "extraspecial:3,p2", "product:cyclic:4,cyclic:2"])
def test_regular_and_relators(spec):
    P = catalog_group(spec)
    perms = regular_representation(P)
    n = perms[0].shape[0]
    assert n == parse_group_spec(spec).order
    # regular: the orbit of 0 is everything and only the identity fixes a point
    seen = {0}
    frontier = [0]
    while frontier:
        frontier = [int(q[x]) for x in frontier for q in perms if int(q[x]) not in seen and not seen.add(int(q[x]))]
    assert len(seen) == n


def test_deterministic():
    P = nu_presentation(catalog_group("dihedral:8"))
    a = enumerate_cosets(P, [], 10 ** 5)
    b = enumerate_cosets(P, [], 10 ** 5)
    assert np.array_equal(a.table, b.table)


def test_resource_bound():
    P = catalog_group("cyclic:64")
    ct = enumerate_cosets(P, [], 10)
    assert ct.status == "exceeded"
    with pytest.raises(ResourceExceeded):
        regular_representation(P, 10)


def test_complete_table_is_closed_and_inverse():
    ct = enumerate_cosets(parse_presentation("gens a b; rel a^4; rel b^2; rel b a b a"), [], 100)
    t = ct.table
    assert (t >= 0).all() and t.max() < ct.live
    for g in range(t.shape[1] // 2):
        assert (t[t[:, 2 * g], 2 * g + 1] == np.arange(ct.live)).all()
