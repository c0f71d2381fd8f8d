"""p-group predicates and checkers: class and coclass, powerful and potent
conditions, power-commutator conditions, the maximal-class subgroup G_1 and
P. Hall's collection congruences.

All groups here are :class:`~pnu.permgroup.Subgroup` objects of a regular group.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .permgroup import (
    Subgroup,
    agemo,
    check_normal,
    commutator_subgroup,
    derived_subgroup,
    group_exponent,
    iterated_commutator,
    lower_central_series,
    omega,
)
from .presentations import is_prime, prime_power


class NotAPGroup(ValueError):
    pass


class HypothesisUnmet(ValueError):
    """The object does not satisfy the hypothesis of the requested construction."""


def bold_p(p: int) -> int:
    """p for odd p, 4 for p = 2."""
    return 4 if p == 2 else p


def log_p(n: int, p: int) -> int:
    k = 0
    while n > 1:
        if n % p:
            raise NotAPGroup(f"{n} is not a power of {p}")
        n //= p
        k += 1
    return k


def product(*subgroups: Subgroup) -> Subgroup:
    """Product of normal subgroups, as the subgroup generated by their union."""
    H = subgroups[0].ambient.trivial()
    for S in subgroups:
        H = H.extend(S.gens)
    return H


def power(G: Subgroup, p: int, k: int = 1) -> Subgroup:
    """G^(p^k); the trivial group for k <= 0 is not a power, so k = 0 gives G."""
    return G if k <= 0 else agemo(G, p, k)


@dataclass
class Series:
    """Lower central series with gamma_i for any i >= 1 (trivial past the end)."""
    terms: list

    @classmethod
    def of(cls, G: Subgroup) -> "Series":
        return cls(lower_central_series(G))

    def __call__(self, i: int) -> Subgroup:
        if i < 1:
            raise ValueError("gamma_i needs i >= 1")
        if i <= len(self.terms):
            return self.terms[i - 1]
        last = self.terms[-1]
        return last if last.order() > 1 else last.ambient.trivial()

    @property
    def nilpotent(self) -> bool:
        return self.terms[-1].order() == 1

    @property
    def orders(self) -> list[int]:
        return [t.order() for t in self.terms]


@dataclass
class PGroupProfile:
    p: int
    n: int  # |G| = p^n
    c: int  # nilpotency class
    r: int  # coclass n - c
    exponent: int
    series_orders: list[int] = field(default_factory=list)

    @property
    def e(self) -> int:
        return log_p(self.exponent, self.p)


def profile(G: Subgroup, p: int | None = None) -> PGroupProfile:
    order = G.order()
    if order == 1:
        return PGroupProfile(p or 2, 0, 0, 0, 1, [1])
    pk = prime_power(order)
    if pk is None or (p is not None and pk[0] != p):
        raise NotAPGroup(f"|G| = {order} is not a power of {p or 'a prime'}")
    p, n = pk
    s = Series.of(G)
    c = len(s.terms) - 1
    return PGroupProfile(p, n, c, n - c, group_exponent(G), s.orders)


@dataclass(frozen=True)
class MPR:
    p: int
    r: int
    m: int


def m_of(p: int, r: int) -> MPR:
    if not is_prime(p) or r < 1:
        raise ValueError("m(p, r) needs a prime p and r >= 1")
    m = 2 ** (r + 2) if p == 2 else (p - 1) * p ** (r - 1)
    return MPR(p, r, m)


def is_powerful(G: Subgroup, p: int) -> bool:
    return derived_subgroup(G) <= power(G, p, 2 if p == 2 else 1)


def is_potent(G: Subgroup, p: int) -> bool:
    if p == 2:
        return is_powerful(G, 2)
    return Series.of(G)(p - 1) <= power(G, p, 1)


def is_powerfully_embedded(N: Subgroup, G: Subgroup, p: int) -> bool:
    check_normal(G, N)
    return commutator_subgroup(N, G) <= power(N, p, 2 if p == 2 else 1)


def is_potently_embedded(N: Subgroup, G: Subgroup, p: int) -> bool:
    check_normal(G, N)
    if p == 2:
        return commutator_subgroup(N, G) <= power(N, 2, 2)
    return iterated_commutator(N, G, p - 2) <= power(N, p, 1)


def check_power_commutator(G: Subgroup, p: int, m: int, s: int, series: Series | None = None) -> bool:
    """gamma_{i+s}(G) = gamma_i(G)^p for every i >= m."""
    if not m >= s >= 1:
        raise ValueError("need m >= s >= 1")
    g = series or Series.of(G)
    i = m
    while True:
        if not g(i + s) == power(g(i), p):
            return False
        if g(i).order() == 1:
            return True
        i += 1


def frattini_rank(H: Subgroup, p: int) -> int:
    """d(H) = log_p |H : H' H^p|."""
    Phi = product(derived_subgroup(H), power(H, p))
    return log_p(H.order() // Phi.order(), p)


def maximal_class_G1(G: Subgroup, p: int, series: Series | None = None) -> Subgroup:
    """G_1 = C_G(gamma_2(G)/gamma_4(G)) for G of maximal class with |G| >= p^4."""
    prof = profile(G, p)
    if prof.r != 1 or prof.n < 4:
        raise HypothesisUnmet("G_1 is defined for maximal class and |G| >= p^4")
    g = series or Series.of(G)
    g2, g4 = g(2), g(4)
    amb = G.ambient
    x = G.elements
    # kernel of the conjugation action on gamma_2/gamma_4: [x, gamma_2] <= gamma_4
    keep = np.ones(x.shape[0], bool)
    for h in g2.gens:
        keep &= g4.mask[amb.comm(x, h)]
    G1 = amb.trivial().extend(x[keep])
    if G1.order() * p != G.order() or int(keep.sum()) != G1.order():
        raise AssertionError("G_1 is not a maximal subgroup")
    return G1


# -- collection congruences -------------------------------------------------------

def hall_modulus(L: Subgroup, p: int, k: int) -> Subgroup:
    """gamma_2(L)^(p^k) gamma_p(L)^(p^(k-1)) ... gamma_(p^k)(L)."""
    g = Series.of(L)
    parts = [power(g(2), p, k)]
    for j in range(1, k + 1):
        parts.append(power(g(p ** j), p, k - j))
    return product(*parts)


def hall_power_check(G: Subgroup, p: int, xs, k: int) -> bool:
    """(x_1...x_r)^(p^k) = x_1^(p^k)...x_r^(p^k) modulo the collection modulus of <x_1..x_r>."""
    amb = G.ambient
    L = amb.subgroup(xs)
    e = p ** k
    prod = 0
    powers = 0
    for x in xs:
        prod = amb.mul(prod, x)
        powers = amb.mul(powers, amb.power(x, e))
    return hall_modulus(L, p, k).contains(amb.mul(amb.power(prod, e), amb.inv(powers)))


def hall_congruence_check(G: Subgroup, p: int, x: int, y: int, k: int) -> bool:
    """Both collection congruences for (x, y).

    (xy)^(p^k) = x^(p^k) y^(p^k) modulo the modulus of <x, y>, and
    [x, y]^(p^k) = [x^(p^k), y] modulo the modulus of <x, [x, y]>.
    """
    amb = G.ambient
    e = p ** k
    if not hall_power_check(G, p, [x, y], k):
        return False
    c = amb.comm(x, y)
    lhs = amb.mul(amb.power(c, e), amb.inv(amb.comm(amb.power(x, e), y)))
    return hall_modulus(amb.subgroup([x, c]), p, k).contains(lhs)


def hall_subgroup_congruence_check(G: Subgroup, p: int, N: Subgroup, M: Subgroup, k: int) -> bool:
    """[N^(p^k), M] = [N, M]^(p^k) modulo prod_{j=1..k} [M, _(p^j) N]^(p^(k-j))."""
    check_normal(G, N)
    check_normal(G, M)
    Q = product(M.ambient.trivial(), *(power(iterated_commutator(M, N, p ** j), p, k - j) for j in range(1, k + 1)))
    lhs = product(commutator_subgroup(power(N, p, k), M), Q)
    rhs = product(power(commutator_subgroup(N, M), p, k), Q)
    return lhs == rhs


# -- lemma checkers ----------------------------------------------------------------
# Each returns (hypothesis_met, conclusion_holds, detail).

def normal_inclusion_check(G: Subgroup, p: int, N: Subgroup, M: Subgroup):
    """If N <= M [N, G] N^p then N <= M."""
    hyp = N <= product(M, commutator_subgroup(N, G), power(N, p))
    return hyp, (N <= M) if hyp else True, {"N": N.order(), "M": M.order()}


def potent_series_check(G: Subgroup, p: int, series: Series | None = None):
    """For potent G: gamma_{k+1} <= gamma_k^4 (p = 2), gamma_{p-1+k} <= gamma_{k+1}^p (p odd)."""
    if not is_potent(G, p):
        return False, True, {}
    g = series or Series.of(G)
    c = len(g.terms)
    bad = []
    for k in range(1, c + 1):
        ok = g(k + 1) <= power(g(k), 2, 2) if p == 2 else g(p - 1 + k) <= power(g(k + 1), p)
        if not ok:
            bad.append(k)
    return True, not bad, {"failing_k": bad}


def omega_exponent_check(G: Subgroup, p: int, series: Series | None = None):
    """If gamma_{k(p-1)} <= gamma_r^(p^s) with k(p-1) < r + s(p-1), then exp(Omega_i) <= p^(i+k-1).

    Uses the least k (over r, s >= 1 up to class + 1 and exponent) meeting the
    hypothesis; the conclusion for larger k is weaker.
    """
    g = series or Series.of(G)
    c = len(g.terms)
    e = log_p(group_exponent(G), p)
    for k in range(1, c + 2):
        lhs = g(k * (p - 1))
        witness = next(((r, s) for r in range(1, c + 2) for s in range(1, e + 1)
                        if k * (p - 1) < r + s * (p - 1) and lhs <= power(g(r), p, s)), None)
        if witness is None:
            continue
        bad = []
        for i in range(1, e + 1):
            ex = group_exponent(omega(G, p, i))
            if ex > p ** (i + k - 1):
                bad.append((i, ex))
        return True, not bad, {"k": k, "r": witness[0], "s": witness[1], "failing_i": bad}
    return False, True, {}


def iterated_power_check(G: Subgroup, p: int):
    """For powerful G: Pi_i(G) = G^(p^i), Pi_i the i-fold iterated p-th power."""
    if not is_powerful(G, p):
        return False, True, {}
    e = log_p(group_exponent(G), p)
    cur = G
    bad = []
    for i in range(1, e + 1):
        cur = power(cur, p)
        if not cur == power(G, p, i):
            bad.append(i)
    return True, not bad, {"max_i": e, "failing_i": bad}


def maximal_class_power_check(G: Subgroup, p: int, series: Series | None = None):
    """Maximal class with |G| >= p^(p+2): gamma_p(G) = G_1^p."""
    prof = profile(G, p)
    if prof.r != 1 or prof.n < max(4, p + 2):
        return False, True, {}
    g = series or Series.of(G)
    G1 = maximal_class_G1(G, p, g)
    return True, g(p) == power(G1, p), {"gamma_p": g(p).order(), "G1^p": power(G1, p).order()}


def coclass_power_check(G: Subgroup, p: int, series: Series | None = None):
    """Large-class coclass-r groups: gamma_i^p = gamma_{i+s} for i >= m with s = d(gamma_m).

    The class bound (c >= 2^(r+3) for p = 2, c >= 2p^r for p odd) is the
    hypothesis; below it the claim is reported as unmet.
    """
    prof = profile(G, p)
    if prof.r < 1:
        return False, True, {}
    bound = 2 ** (prof.r + 3) if p == 2 else 2 * p ** prof.r
    if prof.c < bound:
        return False, True, {"class": prof.c, "needed": bound}
    g = series or Series.of(G)
    m = m_of(p, prof.r).m
    s = frattini_rank(g(m), p)
    ok_a = s <= m and check_power_commutator(G, p, m, s, g)
    if p == 2:
        ok_b = any(s == 2 ** d for d in range(prof.r + 2))
    else:
        ok_b = any(s == (p - 1) * p ** d for d in range(prof.r))
    return True, ok_a and ok_b, {"m": m, "s": s}


def regularity_sample(G: Subgroup, p: int, samples: int, rng) -> bool:
    """Sampled regularity test x^p y^p = (xy)^p mod <x, y>'^p (diagnostic only, |G| <= 3^5)."""
    if G.order() > 3 ** 5:
        raise ValueError("regularity sampling is limited to |G| <= 243")
    amb = G.ambient
    for _ in range(samples):
        x, y = (G.random_element(rng) for _ in range(2))
        H = power(derived_subgroup(amb.subgroup([x, y])), p)
        d = amb.mul(amb.mul(amb.power(x, p), amb.power(y, p)), amb.inv(amb.power(amb.mul(x, y), p)))
        if not H.contains(d):
            return False
    return True


def ceil_log(x: int, p: int) -> int:
    """Least n with p^n >= x."""
    n, v = 0, 1
    while v < x:
        v *= p
        n += 1
    return n

