"""The group nu(G), its two embeddings of G, and the canonical subgroups inside it.

nu(G) is generated by G and an isomorphic copy G^phi subject to

    [g1, g2^phi]^g3 = [g1^g3, (g2^g3)^phi] = [g1, g2^phi]^(g3^phi).

The tensor square G (x) G is identified with [G, G^phi] via g (x) h -> [g, h^phi].
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .cosets import DEFAULT_MAX_COSETS, ResourceExceeded, enumerate_cosets
from .permgroup import (
    Homomorphism,
    RegularGroup,
    Subgroup,
    check_normal,
    commutator_subgroup,
    group_exponent,
    hom_kernel,
    is_normal,
    lower_central_series,
    quotient,
    abelian_invariants,
)
from .presentations import FinitePresentation, Word, comm

log = logging.getLogger(__name__)

ORACLE_MAX_ORDER = 16
# full enumeration of the element-indexed presentation is affordable up to here
ORACLE_ENUMERATION_MAX_ORDER = 8


def nu_relators(u: Word, v: Word, w: Word, k: int) -> tuple[Word, Word]:
    """The two relators for the triple (u, v, w); the phi-copy is shifted by ``k``."""
    uf, vf, wf = u.shift(k), v.shift(k), w.shift(k)
    lhs = comm(u, vf).conj(w)
    r1 = lhs * comm(u.conj(w), v.conj(w).shift(k)).inverse()
    r2 = lhs * comm(u, vf).conj(wf).inverse()
    return r1, r2


def nu_presentation(pres: FinitePresentation, index: str = "generators",
                    max_cosets: int = DEFAULT_MAX_COSETS) -> FinitePresentation:
    """Presentation of nu(G) on X and X^phi.

    ``index="generators"`` instantiates the relations on triples of
    generators; ``index="elements"`` on triples of transversal words for all
    elements of G (oracle mode, |G| <= 16).
    """
    k = pres.ngens
    if index == "generators":
        words = pres.gens()
    elif index == "elements":
        G = RegularGroup.from_presentation(pres, max_cosets)
        if G.n > ORACLE_MAX_ORDER:
            raise ResourceExceeded(f"element-indexed presentation needs |G| <= {ORACLE_MAX_ORDER}")
        words = [G.word_of(q) for q in range(G.n)]
    else:
        raise ValueError(f"unknown index set {index!r}")
    rels = list(pres.relators) + [r.shift(k) for r in pres.relators]
    for u, v, w in itertools.product(words, repeat=3):
        rels.extend(r for r in nu_relators(u, v, w, k) if r)
    names = pres.names + tuple(f"{n}_phi" for n in pres.names)
    return FinitePresentation(names, tuple(rels))


def quotient_presentation(pres: FinitePresentation, G: RegularGroup, N: Subgroup) -> FinitePresentation:
    """Presentation of G/N on the same generators: kill a word for each generator of N."""
    return pres.with_relators([G.word_of(n) for n in N.gens])


class InvariantViolation(AssertionError):
    """A structural identity of nu(G) failed: the build is wrong, not the theory."""


@dataclass
class OracleResult:
    generator_order: int
    element_order: int
    method: str  # "enumeration" or "table-verification"

    @property
    def agrees(self) -> bool:
        return self.generator_order == self.element_order


@dataclass
class KernelK:
    N: Subgroup
    K: Subgroup
    projection: Homomorphism
    quotient_nu: "NuGroup"
    tensor_kernel: Subgroup  # [N, G^phi][G, N^phi]


@dataclass(eq=False)
class NuGroup:
    presentation: FinitePresentation
    base: RegularGroup
    nu_presentation: FinitePresentation
    ambient: RegularGroup
    max_cosets: int = DEFAULT_MAX_COSETS
    oracle: OracleResult | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    # -- the groups and maps -------------------------------------------------
    @property
    def G(self) -> Subgroup:
        return self._get("G", self.base.whole)

    @property
    def nu(self) -> Subgroup:
        return self._get("nu", self.ambient.whole)

    @property
    def k(self) -> int:
        return self.base.ngens

    @property
    def embed(self) -> Homomorphism:
        return self._get("embed", lambda: Homomorphism(
            self.G, self.nu, [self.ambient.gen_point(i) for i in range(self.k)]))

    @property
    def embed_phi(self) -> Homomorphism:
        return self._get("embed_phi", lambda: Homomorphism(
            self.G, self.nu, [self.ambient.gen_point(self.k + i) for i in range(self.k)]))

    @property
    def rho(self) -> Homomorphism:
        """nu(G) -> G sending g and g^phi to g."""
        return self._get("rho", lambda: Homomorphism(
            self.nu, self.G, [self.base.gen_point(i % self.k) for i in range(2 * self.k)]))

    @property
    def tensor(self) -> Subgroup:
        """[G, G^phi], the image of G (x) G."""
        def build():
            x = [self.ambient.gen_point(i) for i in range(self.k)]
            y = [self.ambient.gen_point(self.k + i) for i in range(self.k)]
            return commutator_subgroup(self.ambient.subgroup(x), self.ambient.subgroup(y))
        return self._get("tensor", build)

    @property
    def delta(self) -> Subgroup:
        """Delta(G) = <[g, g^phi] : g in G>, over every element of G."""
        def build():
            g = self.G.elements
            diag = self.ambient.comm(self.embed.values()[g], self.embed_phi.values()[g])
            return self.ambient.trivial().extend(np.unique(diag))
        return self._get("delta", build)

    @property
    def theta(self) -> Subgroup:
        return self._get("theta", lambda: hom_kernel(self.rho))

    @property
    def rho_prime(self) -> Homomorphism:
        """The derived map [G, G^phi] -> G' (rho restricted to the tensor square)."""
        return self._get("rho_prime", lambda: self.rho.restrict(self.tensor))

    @property
    def mu(self) -> Subgroup:
        return self._get("mu", lambda: hom_kernel(self.rho_prime))

    @property
    def schur_pair(self):
        return self._get("schur", lambda: quotient(self.mu, self.delta))

    @property
    def schur(self) -> Subgroup:
        """M(G) realized as mu(G)/Delta(G)."""
        return self.schur_pair[0]

    def schur_invariants(self) -> list[int]:
        return abelian_invariants(self.schur)

    # -- series and exponents ------------------------------------------------
    def nu_series(self) -> list[Subgroup]:
        return self._get("nu_series", lambda: lower_central_series(self.nu))

    def G_series(self) -> list[Subgroup]:
        return self._get("G_series", lambda: lower_central_series(self.G))

    def gamma_nu(self, i: int) -> Subgroup:
        s = self.nu_series()
        return s[i - 1] if i <= len(s) else self.ambient.trivial()

    def gamma_G(self, i: int) -> Subgroup:
        s = self.G_series()
        return s[i - 1] if i <= len(s) else self.base.trivial()

    def exponent(self, name: str) -> int:
        return self._get(("exp", name), lambda: group_exponent(getattr(self, name)))

    def push(self, H: Subgroup, phi: bool = False) -> Subgroup:
        """Image of a subgroup of G in nu(G) under the embedding (or its phi-copy)."""
        f = self.embed_phi if phi else self.embed
        return self.ambient.subgroup([f(h) for h in H.gens])

    def tensor_of(self, x, y):
        """[x, y^phi] for elements (or arrays of elements) of G."""
        return self.ambient.comm(self.embed.values()[x], self.embed_phi.values()[y])

    def _get(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    # -- checks -------------------------------------------------------------------
    def check_invariants(self):
        nG, nT, nN = self.G.order(), self.tensor.order(), self.nu.order()
        if nN != nG * nG * nT:
            raise InvariantViolation(f"|nu| = {nN} != |G|^2 |tensor| = {nG * nG * nT}")
        for name in ("tensor", "delta", "theta", "mu"):
            if not is_normal(self.nu, getattr(self, name)):
                raise InvariantViolation(f"{name} is not normal in nu(G)")
        if not (self.delta <= self.mu and self.mu <= self.tensor and self.mu <= self.theta):
            raise InvariantViolation("Delta <= mu <= tensor (and mu <= Theta) fails")
        g = self.G.elements
        rv = self.rho.values()
        if not (np.array_equal(rv[self.embed.values()[g]], g) and np.array_equal(rv[self.embed_phi.values()[g]], g)):
            raise InvariantViolation("rho does not split the embeddings")
        if not np.array_equal(self.mu.mask, self.theta.mask & self.tensor.mask):
            raise InvariantViolation("mu != Theta meet tensor")
        if self.theta.order() * nG != nN:
            raise InvariantViolation("|Theta| |G| != |nu|")

    def run_oracle(self) -> OracleResult:
        """Compare with the element-indexed presentation (|G| <= 16)."""
        full = nu_presentation(self.presentation, "elements", self.max_cosets)
        n = self.nu.order()
        if self.G.order() <= ORACLE_ENUMERATION_MAX_ORDER:
            ct = enumerate_cosets(full, [], self.max_cosets)
            if ct.status != "complete":
                raise ResourceExceeded("oracle enumeration exceeded the coset bound")
            res = OracleResult(n, ct.live, "enumeration")
        else:
            # Every element-indexed relator is trivial in the generator-indexed
            # group, so the two presentations define the same group.
            ok = relators_hold(self.ambient, full.relators)
            res = OracleResult(n, n if ok else -1, "table-verification")
        self.oracle = res
        return res


def relators_hold(G: RegularGroup, relators) -> bool:
    """True iff every relator word is the identity in the regular group ``G``."""
    if not relators:
        return True
    flat = [r.flat() for r in relators]
    width = max(len(f) for f in flat)
    letters = np.full((len(flat), width), G.pad, np.int64)
    for i, f in enumerate(flat):
        letters[i, : len(f)] = f
    x = np.zeros(len(flat), np.int32)
    for t in range(width):
        x = G.stack[letters[:, t], x]
    return bool((x == 0).all())


def build_nu(pres: FinitePresentation, max_cosets: int = DEFAULT_MAX_COSETS,
             oracle: bool | None = None, check: bool = True) -> NuGroup:
    """Enumerate nu(G) from a presentation of G and assemble the canonical subgroups.

    The generator-indexed relations are an optimization that has to prove
    itself: invariants are asserted on every build and, for |G| <= 16 (or
    when ``oracle`` is set), the element-indexed presentation is checked
    against it. Any mismatch raises :class:`InvariantViolation`.
    """
    base = RegularGroup.from_presentation(pres, max_cosets)
    npres = nu_presentation(pres)
    log.info("enumerating nu(G) for |G| = %d", base.n)
    ambient = RegularGroup.from_presentation(npres, max_cosets)
    nu = NuGroup(pres, base, npres, ambient, max_cosets)
    if oracle is None:
        oracle = base.n <= ORACLE_MAX_ORDER
    if oracle:
        res = nu.run_oracle()
        if not res.agrees:
            raise InvariantViolation(f"generator-indexed nu has order {res.generator_order}, "
                                     f"element-indexed {res.element_order}")
    if check:
        nu.check_invariants()
    return nu


def kernel_K(nu: NuGroup, N: Subgroup) -> KernelK:
    """K = [N, G^phi][G, N^phi] <N, N^phi>, checked against ker(nu(G) -> nu(G/N))."""
    check_normal(nu.G, N)
    amb = nu.ambient
    eN, fN = nu.push(N), nu.push(N, phi=True)
    eG, fG = nu.push(nu.G), nu.push(nu.G, phi=True)
    A = commutator_subgroup(eN, fG)
    B = commutator_subgroup(eG, fN)
    H = A.extend(B.gens)
    K = H.extend(eN.gens + fN.gens)
    qpres = quotient_presentation(nu.presentation, nu.base, N)
    qnu = build_nu(qpres, nu.max_cosets, oracle=False)
    proj = Homomorphism(nu.nu, qnu.nu, [qnu.ambient.gen_point(i) for i in range(2 * nu.k)])
    if nu.nu.order() != K.order() * qnu.nu.order():
        raise InvariantViolation("|nu(G)| != |K| |nu(G/N)|")
    if not hom_kernel(proj) == K:
        raise InvariantViolation("K differs from the kernel of nu(G) -> nu(G/N)")
    return KernelK(N, K, proj, qnu, H)


def gamma_nu_check(nu: NuGroup, k: int) -> bool:
    """gamma_{k+1}(nu G) = gamma_{k+1}(G) gamma_{k+1}(G^phi) [gamma_k(G), G^phi]."""
    lhs = nu.gamma_nu(k + 1)
    a = nu.push(nu.gamma_G(k + 1))
    b = nu.push(nu.gamma_G(k + 1), phi=True)
    c = commutator_subgroup(nu.push(nu.gamma_G(k)), nu.push(nu.G, phi=True))
    rhs = a.extend(b.gens).extend(c.gens)
    return lhs == rhs


def basic_identity_check(nu: NuGroup, samples: int = 100, seed: int = 0, tuples=None):
    """Check the commutator identities of nu(G) on random 4-tuples (g, h, x, y).

    Returns (ok, first failing tuple or None).
    """
    amb = nu.ambient
    if tuples is None:
        rng = np.random.default_rng(seed)
        idx = rng.integers(nu.G.order(), size=(4, samples))
        g, h, x, y = (nu.G.elements[i] for i in idx)
    else:
        g, h, x, y = (np.asarray(t) for t in zip(*tuples))
    e, f = nu.embed.values(), nu.embed_phi.values()
    C = amb.comm
    gE, hE, xE, yE = e[g], e[h], e[x], e[y]
    gF, hF, xF, yF = f[g], f[h], f[x], f[y]
    ghF = C(gE, hF)
    checks = [
        amb.conj(ghF, C(xE, yF)) == amb.conj(ghF, C(xE, yE)),
    ]
    triples = [C(C(gE, hF), xF), C(C(gE, hE), xF), C(C(gE, hF), xE),
               C(C(gF, hE), xF), C(C(gF, hF), xE), C(C(gF, hE), xE)]
    checks += [t == triples[0] for t in triples[1:]]
    # [x, y]^phi is the phi-image of the G-commutator [x, y]
    xy = nu.base.comm(x, y)
    checks.append(C(ghF, C(xE, yF)) == C(C(gE, hE), f[xy]))
    ok = np.logical_and.reduce(checks)
    if ok.all():
        return True, None
    i = int(np.flatnonzero(~ok)[0])
    return False, (int(g[i]), int(h[i]), int(x[i]), int(y[i]))
