import numpy as np
import pytest

from conftest import group
from pnu import pgroups as pg
from pnu.permgroup import (
    abelian_invariants,
    agemo,
    center,
    commutator_subgroup,
    group_exponent,
    is_abelian,
    omega,
)

MAXIMAL_2 = ["dihedral:8", "dihedral:16", "dihedral:32", "quaternion:8", "quaternion:16", "quaternion:32",
             "semidihedral:16", "semidihedral:32"]
CORPUS_SMALL = MAXIMAL_2 + ["cyclic:8", "cyclic:9", "elemab:2,3", "elemab:3,2", "extraspecial:3,p",
                            "extraspecial:3,p2", "product:cyclic:4,cyclic:2", "product:dihedral:8,cyclic:2"]


def prime(G):
    return 3 if G.order() % 3 == 0 else 2


def test_profiles(D16, E27):
    d = pg.profile(D16, 2)
    assert (d.n, d.c, d.r, d.exponent, d.series_orders) == (4, 3, 1, 8, [16, 4, 2, 1])
    e = pg.profile(group("elemab:3,2"), 3)
    assert (e.n, e.c, e.r, e.exponent) == (2, 1, 1, 3)
    x = pg.profile(E27, 3)
    assert (x.n, x.c, x.r, x.exponent, x.e) == (3, 2, 1, 3, 1)


def test_profile_rejects_wrong_prime(D8):
    with pytest.raises(pg.NotAPGroup):
        pg.profile(D8, 3)


def test_cyclic_of_prime_order_has_coclass_zero():
    # n = 1, c = 1; the generic "r >= 1" only applies from order p^2 on
    assert pg.profile(group("cyclic:3"), 3).r == 0


def test_m_of_examples():
    assert pg.m_of(3, 1).m == 2
    assert pg.m_of(2, 1).m == 8
    assert pg.m_of(5, 2).m == 20


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_m_of_formula(p, r):
    # closed form written independently: (p-1)p^(r-1) and 2^(r+2)
    expected = {2: [8, 16, 32, 64], 3: [2, 6, 18, 54], 5: [4, 20, 100, 500], 7: [6, 42, 294, 2058]}[p][r - 1]
    assert pg.m_of(p, r).m == expected


def test_m_of_rejects():
    with pytest.raises(ValueError):
        pg.m_of(4, 1)
    with pytest.raises(ValueError):
        pg.m_of(3, 0)


def test_powerful_and_potent(D16, E27):
    assert pg.is_powerful(group("cyclic:8"), 2)
    assert not pg.is_powerful(D16, 2)
    assert commutator_subgroup(D16, D16).order() == 4 and agemo(D16, 2, 2).order() == 2
    assert agemo(E27, 3, 1).order() == 1
    assert not pg.is_potent(E27, 3)
    # exponent p^2 case: gamma_2 = <a^3> = G^3
    assert pg.is_potent(group("extraspecial:3,p2"), 3)


def test_powerfully_embedded(D16, E27):
    Z = center(E27)
    assert pg.is_powerfully_embedded(Z, E27, 3)
    assert not pg.is_powerfully_embedded(D16, D16, 2)
    assert pg.is_powerfully_embedded(D16, D16, 2) == pg.is_powerful(D16, 2)
    N = commutator_subgroup(D16, D16)
    # [N, G] = N^2 has order 2; with the 2-group convention N^4 = 1 the containment fails
    assert commutator_subgroup(N, D16) == agemo(N, 2, 1)
    assert agemo(N, 2, 2).order() == 1
    assert not pg.is_powerfully_embedded(N, D16, 2)


def test_potently_embedded(E27, D16):
    # N = G: [G,_(p-2) G] <= G^p is potency
    assert pg.is_potently_embedded(E27, E27, 3) == pg.is_potent(E27, 3) is False
    E = group("extraspecial:3,p2")
    assert pg.is_potently_embedded(E, E, 3)
    assert pg.is_potently_embedded(center(D16), D16, 2)


def test_check_power_commutator(E27):
    assert pg.check_power_commutator(group("dihedral:32"), 2, 2, 1)
    assert pg.check_power_commutator(group("elemab:2,3"), 2, 1, 1)
    assert not pg.check_power_commutator(E27, 3, 1, 1)
    with pytest.raises(ValueError):
        pg.check_power_commutator(E27, 3, 1, 2)


@pytest.mark.parametrize("spec", ["dihedral:16", "quaternion:16", "semidihedral:16"])
def test_G1_is_cyclic_of_order_8(spec):
    G = group(spec)
    G1 = pg.maximal_class_G1(G, 2)
    assert G1.order() == 8 and group_exponent(G1) == 8
    # brute force the centralizer of gamma_2 / gamma_4
    s = pg.Series.of(G)
    amb = G.ambient
    brute = {int(x) for x in G.elements
             if all(s(4).contains(amb.comm(x, h)) for h in s(2).elements)}
    assert brute == set(G1.elements.tolist())


@pytest.mark.parametrize("spec", [s for s in MAXIMAL_2 if not s.endswith(":8")])
def test_G1_properties_for_maximal_class_2_groups(spec):
    G = group(spec)
    G1 = pg.maximal_class_G1(G, 2)
    assert 2 * G1.order() == G.order()
    assert group_exponent(G1) == G1.order()
    # gamma_p(G) = G_1^p once |G| >= p^(p+2)
    assert pg.Series.of(G)(2) == agemo(G1, 2, 1)


def test_G1_hypothesis(E27):
    with pytest.raises(pg.HypothesisUnmet):
        pg.maximal_class_G1(E27, 3)
    with pytest.raises(pg.HypothesisUnmet):
        pg.maximal_class_G1(group("dihedral:8"), 2)


def test_series_degenerate_indices(D16):
    s = pg.Series.of(D16)
    assert s(10).order() == 1 and s(1) == D16
    with pytest.raises(ValueError):
        s(0)
    assert agemo(D16.ambient.trivial(), 2, 3).order() == 1


def test_hall_abelian():
    G = group("product:cyclic:4,cyclic:2")
    rng = np.random.default_rng(1)
    for _ in range(20):
        x, y = G.random_element(rng), G.random_element(rng)
        assert pg.hall_congruence_check(G, 2, x, y, 2)
        assert pg.hall_modulus(G.ambient.subgroup([x, y]), 2, 2).order() == 1


def test_hall_extraspecial_and_dihedral(E27, D16):
    rng = np.random.default_rng(7)
    for _ in range(30):
        x, y = E27.random_element(rng), E27.random_element(rng)
        assert pg.hall_congruence_check(E27, 3, x, y, 1)
    a, b = D16.ambient.gen_point(0), D16.ambient.gen_point(1)
    assert pg.hall_congruence_check(D16, 2, a, b, 1)


@pytest.mark.parametrize("spec", CORPUS_SMALL)
def test_hall_sampled(spec):
    G = group(spec)
    p = prime(G)
    rng = np.random.default_rng(abs(hash(spec)) % 2 ** 32)
    for _ in range(25):
        x, y, z = (G.random_element(rng) for _ in range(3))
        k = int(rng.integers(1, 3))
        assert pg.hall_congruence_check(G, p, x, y, k)
        assert pg.hall_power_check(G, p, [x, y, z], k)


def test_hall_subgroup_congruence(E27):
    A = group("elemab:2,2")
    assert pg.hall_subgroup_congruence_check(A, 2, A, A, 1)
    D32 = group("dihedral:32")
    assert pg.hall_subgroup_congruence_check(D32, 2, pg.Series.of(D32)(2), D32, 1)
    assert pg.hall_subgroup_congruence_check(E27, 3, E27, E27, 1)


@pytest.mark.parametrize("spec", CORPUS_SMALL)
def test_potent_series_lemma(spec):
    G = group(spec)
    hyp, ok, detail = pg.potent_series_check(G, prime(G))
    assert ok, detail
    assert hyp == pg.is_potent(G, prime(G))


@pytest.mark.parametrize("spec", CORPUS_SMALL)
def test_omega_exponent_lemma(spec):
    G = group(spec)
    hyp, ok, detail = pg.omega_exponent_check(G, prime(G))
    assert ok, detail


def test_omega_exponent_abelian_bound():
    # abelian: gamma_{p-1} = ... ; Omega_i of C9 x C3 has exponent p^i
    G = group("product:cyclic:3,cyclic:9")
    assert group_exponent(omega(G, 3, 1)) == 3
    hyp, ok, detail = pg.omega_exponent_check(G, 3)
    assert ok


@pytest.mark.parametrize("spec", CORPUS_SMALL)
def test_iterated_powers_on_powerful(spec):
    G = group(spec)
    hyp, ok, detail = pg.iterated_power_check(G, prime(G))
    assert ok, detail
    if is_abelian(G):
        assert hyp


@pytest.mark.parametrize("spec", CORPUS_SMALL)
def test_normal_inclusion_lemma(spec):
    G = group(spec)
    p = prime(G)
    s = pg.Series.of(G)
    normals = [G, s(2), s(3), center(G), agemo(G, p, 1), G.ambient.trivial()]
    for N in normals:
        for M in normals:
            hyp, ok, _ = pg.normal_inclusion_check(G, p, N, M)
            assert ok


def test_frattini_rank(D16):
    assert pg.frattini_rank(D16, 2) == 2
    assert pg.frattini_rank(group("elemab:2,3"), 2) == 3
    assert abelian_invariants(group("product:cyclic:3,cyclic:9")) == [3, 9]


def test_coclass_power_check_is_gated(D16):
    hyp, ok, detail = pg.coclass_power_check(D16, 2)
    assert not hyp and detail["needed"] == 16


def test_regularity_sample(E27):
    rng = np.random.default_rng(0)
    assert pg.regularity_sample(E27, 3, 20, rng)


def test_ceil_log():
    assert [pg.ceil_log(x, 2) for x in (1, 2, 3, 4, 5)] == [0, 1, 2, 2, 3]
