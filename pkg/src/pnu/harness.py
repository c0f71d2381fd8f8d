"""Corpus-driven verification of the exponent and structure results for nu(G).

Every claim is checked with exact integers on concrete groups. A verdict is
``pass``, ``fail`` (the conclusion was violated: an implementation bug, with
witness), ``hypothesis-unmet`` (the group does not satisfy the claim's
hypothesis, so nothing was checked) or ``resource-exceeded``.
"""

from __future__ import annotations

import configparser
import json
import logging
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import pgroups as pg
from .cosets import DEFAULT_MAX_COSETS, ResourceExceeded
from .nu import ORACLE_MAX_ORDER, InvariantViolation, NuGroup, basic_identity_check, build_nu, gamma_nu_check, kernel_K
from . import permgroup
from .permgroup import (
    NotNormalError,
    RegularGroup,
    Subgroup,
    agemo,
    center,
    commutator_subgroup,
    derived_subgroup,
    group_exponent,
    is_normal,
    omega,
)
from .presentations import catalog_group, parse_group_spec, parse_presentation
from .schur import schur_multiplier_oracle

log = logging.getLogger(__name__)

PASS, FAIL, UNMET, EXCEEDED = "pass", "fail", "hypothesis-unmet", "resource-exceeded"
STATUSES = (PASS, FAIL, UNMET, EXCEEDED)
SUITES = ("structure", "theorem-A", "kernel-K", "potent", "maximal-class", "log-bound", "coclass", "hall", "lemmas")
DEFAULT_SELECTORS = ("gamma:2", "center")
HALL_SAMPLES = 50
IDENTITY_SAMPLES = 100
# ν-level lemma checks run only on groups up to this order
NU_LEMMA_MAX = 1 << 15

# claim-id -> statement; the claim-id names the check, the statement is the formula checked
CLAIMS = {
    "catalog-order": "|G| equals the order parameter of the catalog family",
    "nu-order": "|nu(G)| = |G|^2 |[G,G^phi]|",
    "nu-oracle": "generator- and element-indexed nu presentations define groups of equal order",
    "schur-oracle": "mu(G)/Delta(G) has the abelian invariants of H_2(G) from the bar complex",
    "nu-identities": "[g,h^phi]^[x,y^phi] = [g,h^phi]^[x,y]; triple-commutator equalities; [[g,h^phi],[x,y^phi]] = [[g,h],[x,y]^phi]",
    "nu-lower-central": "gamma_{k+1}(nu G) = gamma_{k+1}(G) gamma_{k+1}(G^phi) [gamma_k(G), G^phi] for all k >= 1",
    "nu-exponent-chain": "exp(nu) | exp(G) exp(mu); exp(mu) | exp(M) exp(Delta); exp(Delta) | exp(G); exp(nu) | exp(G)^2 exp(M); "
                         "if |G^ab| is odd, exp(nu) | exp(G) max(exp G, exp M); [g^j, g^phi] = [g, g^phi]^j",
    "nu-coclass": "coclass(nu G) >= r + 2n - 1, with |G^ab| <= |Delta(G)| and class(nu G) <= class(G) + 1",
    "nu-power-commutator": "gamma_{i+s}(G) = gamma_i(G)^p for i >= m implies gamma_{i+s+1}(nu) = gamma_{i+1}(nu)^p for i > m",
    "nu-power-commutator-odd-exponent": "p odd and the power-commutator condition imply exp(gamma_{m+1}(nu)) | exp(gamma_m(G))",
    "nu-power-commutator-2-exponent": "p = 2, gamma_m(G) powerful and the condition imply exp(gamma_{m+1}(nu)) | exp(gamma_m(G))",
    "nu-power-containment-upper": "gamma_{i+s+1}(nu) <= gamma_{i+1}(nu)^p for i >= m (p odd) or i > m",
    "nu-power-containment-lower": "gamma_{i+1}(nu)^p <= gamma_{i+s+1}(nu) for i >= m",
    "kernel-generators": "ker(nu(G) -> nu(G/N)) = [N,G^phi][G,N^phi] <N,N^phi>, with [N,G^phi], [G,N^phi] normal",
    "kernel-tensor-sequence": "1 -> [N,G^phi][G,N^phi] -> [G,G^phi] -> [G/N,(G/N)^phi] -> 1 is exact",
    "kernel-lower-central": "gamma_s(K) = gamma_s(N) gamma_s(N^phi) [gamma_{s-1}(N),N^phi] [N,gamma_{s-1}(N^phi)] for s >= 2",
    "kernel-gamma-odd": "p >= 3, 1 < n < p, gamma_n(N) <= N^p imply gamma_{n+1}(K) <= gamma_2(N)^p gamma_2(N^phi)^p [N,N^phi]^p",
    "kernel-gamma-2": "p = 2, N powerful imply gamma_3(K) <= gamma_2(N)^4 gamma_2(N^phi)^4 [N,N^phi]^4",
    "kernel-potently-embedded": "N potent implies gamma_s(K) potently embedded in K for s >= 2",
    "kernel-exponent": "N potent or gamma_p(N) = 1 implies exp(K) | P exp(N)",
    "nu-exponent-potent": "N potent or gamma_p(N) = 1 implies exp(nu G) | P exp(nu(G/N)) exp(N)",
    "nu-exponent-potent-strict": "gamma_{p-2}(N) <= N^p implies exp(nu G) | exp(nu(G/N)) exp(N)",
    "tensor-exponent-potent": "N potent or gamma_p(N) = 1 implies exp([G,G^phi]) | P exp([G/N,(G/N)^phi]) exp(N)",
    "tensor-exponent-potent-strict": "gamma_{p-2}(N) <= N^p implies exp([G,G^phi]) | exp([G/N,(G/N)^phi]) exp(N)",
    "maximal-class-nu-exponent": "maximal class implies exp(nu G) | P^2 exp(G)",
    "maximal-class-sections": "maximal class implies exp(mu G) and exp([G,G^phi]) divide P^2 exp(G)",
    "maximal-class-2-tensor": "2-group of maximal class implies exp([G,G^phi]) | exp(G)",
    "maximal-class-G1-power": "maximal class, |G| >= p^(p+2) implies gamma_p(G) = G_1^p",
    "tensor-log-bound": "class c implies exp([G,G^phi]) | exp(G)^ceil(log_p(c+1))",
    "coclass-tensor-odd": "p odd, coclass r implies exp([G,G^phi]) | exp(G)^r exp(gamma_m(G)), m = (p-1)p^(r-1)",
    "coclass-tensor-2": "p = 2, coclass r implies exp([G,G^phi]) | exp(G)^(r+3) exp(gamma_m(G)), m = 2^(r+2)",
    "coclass-schur-odd": "p >= 3, coclass r implies exp(M(G)) and exp(mu(G)) divide exp(G)^(r+1)",
    "coclass-schur-2": "p = 2, coclass r implies exp(M(G)) and exp(mu(G)) divide exp(G)^(r+3)",
    "coclass-power-commutator-2": "2-group of coclass r, class c >= 2^(r+3): gamma_i^2 = gamma_{i+s} for i >= m, s = d(gamma_m) = 2^d, d <= r+1",
    "coclass-power-commutator-odd": "odd p, coclass r, class c >= 2p^r: gamma_i^p = gamma_{i+s} for i >= m, s = d(gamma_m) = (p-1)p^d, d <= r-1",
    "hall-collection": "(xy)^(p^k) = x^(p^k) y^(p^k) and [x,y]^(p^k) = [x^(p^k),y] modulo gamma_2(L)^(p^k) gamma_p(L)^(p^(k-1)) ... gamma_(p^k)(L)",
    "hall-collection-product": "(x_1...x_r)^(p^k) = x_1^(p^k)...x_r^(p^k) modulo the collection modulus of <x_1..x_r>",
    "hall-subgroup-congruence": "[N^(p^k),M] = [N,M]^(p^k) modulo [M,_p N]^(p^(k-1)) ... [M,_(p^k) N]",
    "normal-inclusion": "N <= M [N,G] N^p implies N <= M",
    "potent-lower-central": "G potent implies gamma_{k+1} <= gamma_k^4 (p = 2), gamma_{p-1+k} <= gamma_{k+1}^p (p odd)",
    "omega-exponent": "gamma_{k(p-1)} <= gamma_r^(p^s), k(p-1) < r + s(p-1) imply exp(Omega_i(G)) <= p^(i+k-1)",
    "powerful-iterated-powers": "G powerful implies Pi_i(G) = G^(p^i)",
}
N_CLAIMS = ("kernel-generators", "kernel-tensor-sequence", "kernel-lower-central", "kernel-gamma-odd", "kernel-gamma-2",
            "kernel-potently-embedded", "kernel-exponent", "nu-exponent-potent", "nu-exponent-potent-strict",
            "tensor-exponent-potent", "tensor-exponent-potent-strict")


@dataclass
class Verdict:
    claim: str
    group: str
    p: int
    status: str
    subject: str = ""
    checked: dict = field(default_factory=dict)
    witness: dict | None = None
    wall_time: float | None = None

    def to_json(self, timings: bool = False) -> dict:
        return {
            "claim": self.claim,
            "statement": CLAIMS[self.claim],
            "group": self.group,
            "subject": self.subject,
            "p": self.p,
            "status": self.status,
            "checked": _jsonable(self.checked),
            "witness": _jsonable(self.witness),
            "wall_time": round(self.wall_time, 3) if timings and self.wall_time is not None else None,
        }


def _jsonable(x):
    """Integers beyond 2^53 become decimal strings; tuples become lists."""
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        x = int(x)
        return str(x) if abs(x) > 2 ** 53 else x
    return x


class Fail(Exception):
    """Raised inside a check to record a fail with a witness."""

    def __init__(self, witness):
        super().__init__(str(witness))
        self.witness = witness


class Unmet(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def divides(a: int, b: int) -> bool:
    return b % a == 0


def require(cond: bool, **witness):
    if not cond:
        raise Fail(witness)


# -- corpus -------------------------------------------------------------------------

@dataclass
class CorpusEntry:
    spec: str
    p: int | None = None
    suites: tuple[str, ...] = SUITES
    selectors: tuple[str, ...] = DEFAULT_SELECTORS
    max_cosets: int | None = None
    element_threshold: int | None = None
    seed: int | None = None


def _split(value: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in value.replace("\n", " ").split() if x.strip())


def parse_corpus(text: str) -> list[CorpusEntry]:
    """INI-style corpus: one section per group spec.

    Keys: ``p``, ``suites`` (whitespace separated or ``all``), ``selectors``,
    ``max_cosets``, ``element_threshold``, ``seed``. A ``[DEFAULT]`` section
    supplies shared values.
    """
    cp = configparser.ConfigParser(interpolation=None, delimiters=("=",))
    cp.optionxform = str
    cp.read_string(text)
    entries = []
    for spec in cp.sections():
        sec = cp[spec]
        group_presentation(spec)
        suites = _split(sec.get("suites", "all"))
        if suites == ("all",):
            suites = SUITES
        unknown = set(suites) - set(SUITES)
        if unknown:
            raise ValueError(f"[{spec}] unknown suites {sorted(unknown)}")
        sels = _split(sec.get("selectors", " ".join(DEFAULT_SELECTORS)))
        for s in sels:
            _check_selector(s)
        entries.append(CorpusEntry(
            spec=spec,
            p=sec.getint("p"),
            suites=suites,
            selectors=sels,
            max_cosets=sec.getint("max_cosets"),
            element_threshold=sec.getint("element_threshold"),
            seed=sec.getint("seed"),
        ))
    return entries


def default_corpus_text() -> str:
    return resources.files("pnu").joinpath("data/default_corpus.ini").read_text()


def load_corpus(path: str | Path | None) -> list[CorpusEntry]:
    text = default_corpus_text() if path is None else Path(path).read_text()
    return parse_corpus(text)


def _check_selector(s: str):
    name, _, arg = s.partition(":")
    if name not in ("gamma", "center", "agemo", "omega", "G1", "trivial", "whole"):
        raise ValueError(f"unknown selector {s!r}")
    if name in ("gamma", "agemo", "omega") and not arg.isdigit():
        raise ValueError(f"selector {s!r} needs an integer argument")


def group_presentation(spec: str):
    gs = parse_group_spec(spec)
    if gs.family == "file":
        return gs, parse_presentation(Path(gs.params[0]).read_text())
    return gs, catalog_group(gs)


# -- per-group context ----------------------------------------------------------------

class Context:
    """Lazily computed objects for one corpus group, shared across suites."""

    def __init__(self, entry: CorpusEntry, max_cosets: int, seed: int):
        self.entry = entry
        self.spec_obj, self.pres = group_presentation(entry.spec)
        self.max_cosets = entry.max_cosets or max_cosets
        self.G: Subgroup = RegularGroup.from_presentation(self.pres, self.max_cosets).whole()
        order = self.G.order()
        prof = pg.profile(self.G, entry.p)
        self.p = prof.p if order > 1 else (entry.p or 2)
        self.prof = prof
        self.P = pg.bold_p(self.p)
        self.series = pg.Series.of(self.G)
        self.rng_seed = seed
        self._nu: NuGroup | None = None
        self._nu_error: Exception | None = None
        self._pow: dict = {}
        self._quot: dict = {}
        self._kernels: dict = {}

    def rng(self, salt: str) -> np.random.Generator:
        return np.random.default_rng([self.rng_seed, zlib.crc32(self.entry.spec.encode()), zlib.crc32(salt.encode())])

    @property
    def nu(self) -> NuGroup:
        if self._nu is None:
            if self._nu_error is not None:
                raise self._nu_error
            try:
                self._nu = build_nu(self.pres, self.max_cosets, oracle=False)
            except ResourceExceeded as exc:
                self._nu_error = exc
                raise
        return self._nu

    def nu_if_built(self) -> NuGroup | None:
        """nu(G), or None when it exceeds the resource bounds."""
        try:
            return self.nu
        except ResourceExceeded:
            return None

    def power(self, H: Subgroup, k: int = 1) -> Subgroup:
        """H^(p^k), memoized by element set."""
        if k <= 0:
            return H
        key = (id(H.ambient), H.order(), zlib.crc32(H.mask.tobytes()), k)
        if key not in self._pow:
            self._pow[key] = agemo(H, self.p, k)
        return self._pow[key]

    def nu_series(self) -> pg.Series:
        return pg.Series(self.nu.nu_series())

    def exp(self, H: Subgroup) -> int:
        return group_exponent(H)

    def selector(self, s: str) -> Subgroup:
        name, _, arg = s.partition(":")
        G = self.G
        if name == "gamma":
            return self.series(int(arg))
        if name == "center":
            return center(G)
        if name == "agemo":
            return self.power(G, int(arg))
        if name == "omega":
            return omega(G, self.p, int(arg))
        if name == "G1":
            return pg.maximal_class_G1(G, self.p, self.series)
        if name == "trivial":
            return G.ambient.trivial()
        if name == "whole":
            return G
        raise ValueError(s)

    def canonical_normals(self) -> list[tuple[str, Subgroup]]:
        """Distinct canonical normal subgroups of G (gamma_i, Z, agemo, Omega, G_1)."""
        out: list[tuple[str, Subgroup]] = []
        cands = [f"gamma:{i}" for i in range(1, self.prof.c + 2)] + ["center"]
        cands += [f"agemo:{k}" for k in range(1, self.prof.e + 1)] + [f"omega:{i}" for i in range(1, self.prof.e + 1)]
        if self.prof.r == 1 and self.prof.n >= 4:
            cands.append("G1")
        for name in cands:
            H = self.selector(name)
            if not any(H == K for _, K in out):
                out.append((name, H))
        return out

    def kernel(self, sel: str) -> dict:
        """N from a selector with K, the projection to nu(G/N) and the pushed copies of N."""
        if sel not in self._kernels:
            N = self.selector(sel)
            nu = self.nu
            self._kernels[sel] = dict(N=N, kk=kernel_K(nu, N), eN=nu.push(N), fN=nu.push(N, phi=True))
        return self._kernels[sel]


# -- checks ----------------------------------------------------------------------------
# Each check yields Verdicts; helpers below turn exceptions into statuses.

def _run(ctx: Context, claim: str, fn, subject: str = "") -> Verdict:
    t0 = time.perf_counter()
    v = Verdict(claim, ctx.entry.spec, ctx.p, PASS, subject)
    try:
        out = fn()
        if out:
            v.checked = out
    except Unmet as u:
        v.status = UNMET
        v.witness = {"reason": u.reason}
    except Fail as f:
        v.status = FAIL
        v.witness = f.witness
    except ResourceExceeded as exc:
        v.status = EXCEEDED
        v.witness = {"reason": str(exc)}
    except (InvariantViolation, AssertionError, NotNormalError) as exc:
        v.status = FAIL
        v.witness = {"error": f"{type(exc).__name__}: {exc}"}
    v.wall_time = time.perf_counter() - t0
    return v


def suite_structure(ctx: Context):
    G, p = ctx.G, ctx.p

    def catalog():
        want = ctx.spec_obj.order
        require(want is None or G.order() == want, order=G.order(), expected=want)
        return {"order": G.order()}
    yield _run(ctx, "catalog-order", catalog)

    def nu_order():
        nu = ctx.nu
        lhs, rhs = nu.nu.order(), G.order() ** 2 * nu.tensor.order()
        require(lhs == rhs, nu=lhs, G_squared_tensor=rhs)
        return {"nu": lhs, "G": G.order(), "tensor": nu.tensor.order()}
    yield _run(ctx, "nu-order", nu_order)

    def oracle():
        if G.order() > ORACLE_MAX_ORDER:
            raise Unmet(f"oracle runs for |G| <= {ORACLE_MAX_ORDER}")
        res = ctx.nu.run_oracle()
        require(res.agrees, generator_indexed=res.generator_order, element_indexed=res.element_order)
        return {"generator_indexed": res.generator_order, "element_indexed": res.element_order, "method": res.method}
    yield _run(ctx, "nu-oracle", oracle)

    def schur():
        if G.order() > ORACLE_MAX_ORDER:
            raise Unmet(f"oracle runs for |G| <= {ORACLE_MAX_ORDER}")
        built = ctx.nu.schur_invariants()
        bar = schur_multiplier_oracle(G)
        require(built == bar, mu_mod_delta=built, bar_complex=bar)
        return {"invariants": built}
    yield _run(ctx, "schur-oracle", schur)

    def identities():
        ok, w = basic_identity_check(ctx.nu, IDENTITY_SAMPLES, seed=int(ctx.rng("identities").integers(2 ** 63)))
        require(ok, tuple=[ctx.G.ambient.word_of(x).format(ctx.pres.names) for x in w] if w else None)
        return {"samples": IDENTITY_SAMPLES}
    yield _run(ctx, "nu-identities", identities)

    def lower_central():
        c = ctx.prof.c
        bad = [k for k in range(1, c + 2) if not gamma_nu_check(ctx.nu, k)]
        require(not bad, failing_k=bad)
        return {"k_checked": c + 1, "nu_series": ctx.nu_series().orders}
    yield _run(ctx, "nu-lower-central", lower_central)

    def chain():
        nu = ctx.nu
        eG = ctx.exp(G)
        eN, eMu, eD = nu.exponent("nu"), nu.exponent("mu"), nu.exponent("delta")
        eM = group_exponent(nu.schur)
        checks = {
            "exp(nu) | exp(G) exp(mu)": divides(eN, eG * eMu),
            "exp(mu) | exp(M) exp(Delta)": divides(eMu, eM * eD),
            "exp(Delta) | exp(G)": divides(eD, eG),
            "exp(nu) | exp(G)^2 exp(M)": divides(eN, eG * eG * eM),
            "exp(nu) | exp(G) exp(tensor)": divides(eN, eG * nu.exponent("tensor")),
        }
        ab = G.order() // derived_subgroup(G).order()
        if ab % 2:
            checks["exp(nu) | exp(G) max(exp G, exp M)"] = divides(eN, eG * max(eG, eM))
        # [g^j, g^phi] = [g, g^phi]^j for every g and j up to exp(G)
        g = G.elements
        amb, base = nu.ambient, nu.base
        diag = nu.tensor_of(g, g)
        ok = True
        for j in range(2, eG + 1):
            ok &= bool(np.array_equal(nu.tensor_of(base.power(g, j), g), amb.power(diag, j)))
        checks["[g^j, g^phi] = [g, g^phi]^j"] = ok
        failed = [k for k, v in checks.items() if not v]
        require(not failed, failed=failed, exp_G=eG, exp_nu=eN, exp_mu=eMu, exp_M=eM, exp_Delta=eD)
        return {"exp_G": eG, "exp_nu": eN, "exp_mu": eMu, "exp_M": eM, "exp_Delta": eD, "relations": len(checks)}
    yield _run(ctx, "nu-exponent-chain", chain)

    def coclass():
        nu = ctx.nu
        prof = ctx.prof
        alpha = pg.log_p(nu.nu.order(), p)
        cnu = len(nu.nu_series()) - 1
        rnu = alpha - cnu
        ab = G.order() // derived_subgroup(G).order()
        out = {"coclass_nu": rnu, "bound": prof.r + 2 * prof.n - 1, "class_nu": cnu, "class_G": prof.c,
               "G_ab": ab, "Delta": nu.delta.order()}
        require(rnu >= prof.r + 2 * prof.n - 1 and ab <= nu.delta.order() and cnu <= prof.c + 1
                and G.order() <= nu.tensor.order(), **out)
        return out
    yield _run(ctx, "nu-coclass", coclass)


def suite_theorem_a(ctx: Context):
    """Power-commutator transfer from G to nu(G) over every admissible (m, s)."""
    G, p = ctx.G, ctx.p
    c = ctx.prof.c
    pairs = [(m, s) for m in range(1, c + 2) for s in range(1, m + 1)
             if pg.check_power_commutator(G, p, m, s, ctx.series)]

    def need_pairs(extra=lambda m, s: True):
        sel = [(m, s) for m, s in pairs if extra(m, s)]
        if not sel:
            raise Unmet("no (m, s) with m >= s satisfies the power-commutator condition")
        return sel

    def last(gn: pg.Series):
        return len(gn.terms) + 1

    def part_a():
        gn = ctx.nu_series()
        checked = 0
        for m, s in need_pairs():
            for i in range(m + 1, last(gn) + 1):
                lhs, rhs = gn(i + s + 1), ctx.power(gn(i + 1))
                require(lhs == rhs, m=m, s=s, i=i, lhs=lhs.order(), rhs=rhs.order())
                checked += 1
        return {"pairs": pairs, "equalities": checked}
    yield _run(ctx, "nu-power-commutator", part_a)

    def upper():
        gn = ctx.nu_series()
        checked = 0
        for m, s in need_pairs():
            for i in range(m if p % 2 else m + 1, last(gn) + 1):
                lhs, rhs = gn(i + s + 1), ctx.power(gn(i + 1))
                require(lhs <= rhs, m=m, s=s, i=i, lhs=lhs.order(), rhs=rhs.order())
                checked += 1
        return {"pairs": pairs, "containments": checked}
    yield _run(ctx, "nu-power-containment-upper", upper)

    def lower():
        gn = ctx.nu_series()
        checked = 0
        for m, s in need_pairs():
            for i in range(m, last(gn) + 1):
                lhs, rhs = ctx.power(gn(i + 1)), gn(i + s + 1)
                require(lhs <= rhs, m=m, s=s, i=i, lhs=lhs.order(), rhs=rhs.order())
                checked += 1
        return {"pairs": pairs, "containments": checked}
    yield _run(ctx, "nu-power-containment-lower", lower)

    def exponent_part(claim, want_odd):
        def run():
            if (p % 2 == 1) != want_odd:
                raise Unmet(f"p = {p}")
            cond = (lambda m, s: True) if want_odd else (lambda m, s: pg.is_powerful(ctx.series(m), 2))
            gn = ctx.nu_series()
            rows = []
            for m, s in need_pairs(cond):
                a, b = ctx.exp(gn(m + 1)), ctx.exp(ctx.series(m))
                require(divides(a, b), m=m, s=s, exp_gamma_nu=a, exp_gamma_G=b)
                rows.append([m, s, a, b])
            return {"m_s_expnu_expG": rows}
        return _run(ctx, claim, run)
    yield exponent_part("nu-power-commutator-odd-exponent", True)
    yield exponent_part("nu-power-commutator-2-exponent", False)


def suite_kernel(ctx: Context):
    for sel in ctx.entry.selectors:
        yield from _kernel_for(ctx, sel)


def suite_potent(ctx: Context):
    for sel in ctx.entry.selectors:
        yield from _potent_for(ctx, sel)


def _potent_hyp(ctx: Context, N: Subgroup) -> bool:
    return pg.is_potent(N, ctx.p) or pg.Series.of(N)(ctx.p).order() == 1


def _kernel_for(ctx: Context, sel: str):
    p, P = ctx.p, ctx.P

    def setup():
        return ctx.kernel(sel)

    def generators():
        h = setup()
        nu, kk = ctx.nu, h["kk"]
        A = commutator_subgroup(h["eN"], nu.push(ctx.G, phi=True))
        B = commutator_subgroup(nu.push(ctx.G), h["fN"])
        require(is_normal(nu.nu, A) and is_normal(nu.nu, B), normal_A=is_normal(nu.nu, A), normal_B=is_normal(nu.nu, B))
        return {"K": kk.K.order(), "nu_G": nu.nu.order(), "nu_G_mod_N": kk.quotient_nu.nu.order()}
    yield _run(ctx, "kernel-generators", generators, sel)

    def tensor_sequence():
        h = setup()
        nu, kk = ctx.nu, h["kk"]
        Hk = kk.tensor_kernel
        restricted = kk.projection.restrict(nu.tensor)
        from .permgroup import hom_kernel
        ker = hom_kernel(restricted)
        img = restricted.image().order()
        qt = kk.quotient_nu.tensor.order()
        out = {"tensor": nu.tensor.order(), "kernel": Hk.order(), "quotient_tensor": qt}
        require(ker == Hk and img == qt and nu.tensor.order() == Hk.order() * qt, **out)
        return out
    yield _run(ctx, "kernel-tensor-sequence", tensor_sequence, sel)

    def k_series():
        h = setup()
        K, N = h["kk"].K, h["N"]
        gk = pg.Series.of(K)
        gN = pg.Series.of(N)
        nu = ctx.nu
        s = 2
        while True:
            rhs = pg.product(nu.push(gN(s)), nu.push(gN(s), phi=True),
                             commutator_subgroup(nu.push(gN(s - 1)), h["fN"]),
                             commutator_subgroup(h["eN"], nu.push(gN(s - 1), phi=True)))
            require(gk(s) == rhs, s=s, gamma_K=gk(s).order(), product=rhs.order())
            if gk(s).order() == 1:
                return {"s_checked": s - 1, "K_series": gk.orders}
            s += 1
    yield _run(ctx, "kernel-lower-central", k_series, sel)

    def target(h, q):
        nu = ctx.nu
        gN = pg.Series.of(h["N"])
        return pg.product(ctx.power(nu.push(gN(2)), q), ctx.power(nu.push(gN(2), phi=True), q),
                          ctx.power(commutator_subgroup(h["eN"], h["fN"]), q))

    def gamma_odd():
        if p < 3:
            raise Unmet("p = 2")
        h = setup()
        gN = pg.Series.of(h["N"])
        ns = [n for n in range(2, p) if gN(n) <= ctx.power(h["N"])]
        if not ns:
            raise Unmet("no 1 < n < p with gamma_n(N) <= N^p")
        gk = pg.Series.of(h["kk"].K)
        T = target(h, 1)
        for n in ns:
            require(gk(n + 1) <= T, n=n, gamma=gk(n + 1).order(), bound=T.order())
        return {"n": ns, "bound": T.order()}
    yield _run(ctx, "kernel-gamma-odd", gamma_odd, sel)

    def gamma_2():
        if p != 2:
            raise Unmet(f"p = {p}")
        h = setup()
        if not pg.is_powerful(h["N"], 2):
            raise Unmet("N is not powerful")
        gk = pg.Series.of(h["kk"].K)
        T = target(h, 2)
        require(gk(3) <= T, gamma_3=gk(3).order(), bound=T.order())
        return {"gamma_3": gk(3).order(), "bound": T.order()}
    yield _run(ctx, "kernel-gamma-2", gamma_2, sel)

    def potently():
        h = setup()
        if not pg.is_potent(h["N"], p):
            raise Unmet("N is not potent")
        K = h["kk"].K
        gk = pg.Series.of(K)
        s = 2
        while gk(s).order() > 1:
            require(pg.is_potently_embedded(gk(s), K, p), s=s, gamma_s=gk(s).order())
            s += 1
        return {"s_checked": s - 2}
    yield _run(ctx, "kernel-potently-embedded", potently, sel)

    def exp_k():
        h = setup()
        if not _potent_hyp(ctx, h["N"]):
            raise Unmet("N neither potent nor of class < p")
        a, b = ctx.exp(h["kk"].K), ctx.exp(h["N"])
        require(divides(a, P * b), exp_K=a, P=P, exp_N=b)
        return {"exp_K": a, "bound": P * b}
    yield _run(ctx, "kernel-exponent", exp_k, sel)


def _potent_for(ctx: Context, sel: str):
    p, P = ctx.p, ctx.P

    def strict_hyp(N: Subgroup) -> bool:
        if p in (2, 3):
            raise Unmet(f"p = {p}: the strict bound is only established for p >= 5")
        return pg.Series.of(N)(p - 2) <= ctx.power(N)

    def exponent_claim(which: str, strict: bool):
        def run():
            h = ctx.kernel(sel)
            hyp = strict_hyp(h["N"]) if strict else _potent_hyp(ctx, h["N"])
            if not hyp:
                raise Unmet("hypothesis on N fails")
            q = h["kk"].quotient_nu
            a, b = ctx.nu.exponent(which), q.exponent(which)
            eN = ctx.exp(h["N"])
            bound = (1 if strict else P) * b * eN
            require(divides(a, bound), lhs=a, quotient=b, exp_N=eN, bound=bound)
            return {"lhs": a, "quotient": b, "exp_N": eN, "bound": bound}
        return run
    yield _run(ctx, "nu-exponent-potent", exponent_claim("nu", False), sel)
    yield _run(ctx, "nu-exponent-potent-strict", exponent_claim("nu", True), sel)
    yield _run(ctx, "tensor-exponent-potent", exponent_claim("tensor", False), sel)
    yield _run(ctx, "tensor-exponent-potent-strict", exponent_claim("tensor", True), sel)


def suite_maximal(ctx: Context):
    prof, P = ctx.prof, ctx.P

    def need_max():
        if prof.r != 1:
            raise Unmet(f"coclass {prof.r}")

    def nu_exp():
        need_max()
        a, b = ctx.nu.exponent("nu"), P * P * prof.exponent
        require(divides(a, b), exp_nu=a, bound=b)
        return {"exp_nu": a, "bound": b}
    yield _run(ctx, "maximal-class-nu-exponent", nu_exp)

    def sections():
        need_max()
        a, t, b = ctx.nu.exponent("mu"), ctx.nu.exponent("tensor"), P * P * prof.exponent
        require(divides(a, b) and divides(t, b), exp_mu=a, exp_tensor=t, bound=b)
        return {"exp_mu": a, "exp_tensor": t, "bound": b}
    yield _run(ctx, "maximal-class-sections", sections)

    def two_tensor():
        need_max()
        if ctx.p != 2:
            raise Unmet(f"p = {ctx.p}")
        t = ctx.nu.exponent("tensor")
        require(divides(t, prof.exponent), exp_tensor=t, exp_G=prof.exponent)
        return {"exp_tensor": t, "exp_G": prof.exponent}
    yield _run(ctx, "maximal-class-2-tensor", two_tensor)

    def g1():
        met, ok, detail = pg.maximal_class_power_check(ctx.G, ctx.p, ctx.series)
        if not met:
            raise Unmet("needs maximal class and |G| >= p^max(4, p+2)")
        require(ok, **detail)
        return detail
    yield _run(ctx, "maximal-class-G1-power", g1)


def suite_log(ctx: Context):
    def run():
        c = ctx.prof.c
        if c < 1:
            raise Unmet("trivial group")
        n = pg.ceil_log(c + 1, ctx.p)
        a, b = ctx.nu.exponent("tensor"), ctx.prof.exponent ** n
        require(divides(a, b), exp_tensor=a, bound=b, n=n)
        return {"exp_tensor": a, "n": n, "bound": b}
    yield _run(ctx, "tensor-log-bound", run)


def suite_coclass(ctx: Context):
    prof, p = ctx.prof, ctx.p

    def tensor(want_odd):
        def run():
            if (p % 2 == 1) != want_odd:
                raise Unmet(f"p = {p}")
            if prof.r < 1:
                raise Unmet("coclass 0")
            m = pg.m_of(p, prof.r).m
            eg = ctx.exp(ctx.series(m))
            k = prof.r if want_odd else prof.r + 3
            a, b = ctx.nu.exponent("tensor"), prof.exponent ** k * eg
            require(divides(a, b), exp_tensor=a, bound=b, m=m)
            return {"r": prof.r, "m": m, "exp_gamma_m": eg, "exp_tensor": a, "bound": b}
        return run
    yield _run(ctx, "coclass-tensor-odd", tensor(True))
    yield _run(ctx, "coclass-tensor-2", tensor(False))

    def schur(want_odd):
        def run():
            if (p % 2 == 1) != want_odd:
                raise Unmet(f"p = {p}")
            if prof.r < 1:
                raise Unmet("coclass 0")
            b = prof.exponent ** (prof.r + 1 if want_odd else prof.r + 3)
            eM, eMu = group_exponent(ctx.nu.schur), ctx.nu.exponent("mu")
            require(divides(eM, b) and divides(eMu, b), exp_M=eM, exp_mu=eMu, bound=b)
            return {"exp_M": eM, "exp_mu": eMu, "bound": b}
        return run
    yield _run(ctx, "coclass-schur-odd", schur(True))
    yield _run(ctx, "coclass-schur-2", schur(False))

    def reporter(want_odd):
        def run():
            if (p % 2 == 1) != want_odd:
                raise Unmet(f"p = {p}")
            met, ok, detail = pg.coclass_power_check(ctx.G, p, ctx.series)
            if not met:
                raise Unmet(f"class bound not reached: {detail}")
            require(ok, **detail)
            return detail
        return run
    yield _run(ctx, "coclass-power-commutator-2", reporter(False))
    yield _run(ctx, "coclass-power-commutator-odd", reporter(True))


def suite_hall(ctx: Context):
    G, p = ctx.G, ctx.p
    subjects = [("G", G)]
    nu = ctx.nu_if_built()
    if nu is not None and nu.nu.order() <= NU_LEMMA_MAX:
        subjects.append(("nu", nu.nu))

    def pairs():
        rng = ctx.rng("hall")
        for name, H in subjects:
            for _ in range(HALL_SAMPLES):
                x, y = H.random_element(rng), H.random_element(rng)
                k = int(rng.integers(1, 3))
                yield name, H, x, y, k

    def collection():
        n = 0
        for name, H, x, y, k in pairs():
            require(pg.hall_congruence_check(H, p, x, y, k), group=name, x=x, y=y, k=k)
            n += 1
        return {"samples": n, "subjects": [s for s, _ in subjects]}
    yield _run(ctx, "hall-collection", collection)

    def collection_product():
        rng = ctx.rng("hall-product")
        n = 0
        for name, H in subjects:
            for _ in range(HALL_SAMPLES):
                xs = [H.random_element(rng) for _ in range(3)]
                k = int(rng.integers(1, 3))
                require(pg.hall_power_check(H, p, xs, k), group=name, xs=xs, k=k)
                n += 1
        return {"samples": n}
    yield _run(ctx, "hall-collection-product", collection_product)

    def subgroup_congruence():
        normals = ctx.canonical_normals()
        n = 0
        for (a, N) in normals:
            for (b, M) in normals:
                for k in (1, 2):
                    require(pg.hall_subgroup_congruence_check(G, p, N, M, k), N=a, M=b, k=k)
                    n += 1
        return {"triples": n}
    yield _run(ctx, "hall-subgroup-congruence", subgroup_congruence)


def suite_lemmas(ctx: Context):
    G, p = ctx.G, ctx.p
    subjects = [("G", G, ctx.series)]
    try:
        if ctx.nu.nu.order() <= NU_LEMMA_MAX:
            subjects.append(("nu", ctx.nu.nu, ctx.nu_series()))
    except ResourceExceeded:
        pass

    def normal_inclusion():
        normals = ctx.canonical_normals()
        met = 0
        for a, N in normals:
            for b, M in normals:
                hyp, ok, _ = pg.normal_inclusion_check(G, p, N, M)
                met += hyp
                require(ok, N=a, M=b)
        if not met:
            raise Unmet("no pair satisfies N <= M[N,G]N^p")
        return {"pairs": len(normals) ** 2, "hypothesis_met": met}
    yield _run(ctx, "normal-inclusion", normal_inclusion)

    def over_subjects(check):
        def run():
            met_on = []
            details = {}
            for name, H, ser in subjects:
                hyp, ok, detail = check(H, ser)
                if hyp:
                    met_on.append(name)
                    require(ok, group=name, **detail)
                    details[name] = detail
            if not met_on:
                raise Unmet("hypothesis fails on every subject")
            return {"subjects": met_on, **details}
        return run
    yield _run(ctx, "potent-lower-central", over_subjects(lambda H, s: pg.potent_series_check(H, p, s)))
    yield _run(ctx, "omega-exponent", over_subjects(lambda H, s: pg.omega_exponent_check(H, p, s)))
    yield _run(ctx, "powerful-iterated-powers", over_subjects(lambda H, s: pg.iterated_power_check(H, p)))


SUITE_FUNCS = {
    "structure": suite_structure,
    "theorem-A": suite_theorem_a,
    "kernel-K": suite_kernel,
    "potent": suite_potent,
    "maximal-class": suite_maximal,
    "log-bound": suite_log,
    "coclass": suite_coclass,
    "hall": suite_hall,
    "lemmas": suite_lemmas,
}


def run_entry(entry: CorpusEntry, seed: int = 0, max_cosets: int = DEFAULT_MAX_COSETS,
              suites: tuple[str, ...] | None = None) -> list[Verdict]:
    """Run the selected suites on one corpus group. Never raises for resource limits."""
    wanted = [s for s in entry.suites if suites is None or s in suites]
    if entry.seed is not None:
        seed = entry.seed
    saved = permgroup.ELEMENT_THRESHOLD
    if entry.element_threshold:
        permgroup.ELEMENT_THRESHOLD = entry.element_threshold
    try:
        try:
            ctx = Context(entry, max_cosets, seed)
        except ResourceExceeded as exc:
            return [Verdict(c, entry.spec, entry.p or 0, EXCEEDED, witness={"reason": str(exc)})
                    for c in _claims_for(entry, wanted)]
        out: list[Verdict] = []
        for name in wanted:
            out.extend(SUITE_FUNCS[name](ctx))
        return out
    finally:
        permgroup.ELEMENT_THRESHOLD = saved


def _claims_for(entry: CorpusEntry, suites) -> list[str]:
    groups = {
        "structure": ["catalog-order", "nu-order", "nu-oracle", "schur-oracle", "nu-identities", "nu-lower-central",
                      "nu-exponent-chain", "nu-coclass"],
        "theorem-A": ["nu-power-commutator", "nu-power-containment-upper", "nu-power-containment-lower",
                      "nu-power-commutator-odd-exponent", "nu-power-commutator-2-exponent"],
        "kernel-K": [c for c in N_CLAIMS if "potent" not in c or c == "kernel-potently-embedded"],
        "potent": [c for c in N_CLAIMS if c.endswith(("potent", "potent-strict"))],
        "maximal-class": ["maximal-class-nu-exponent", "maximal-class-sections", "maximal-class-2-tensor",
                          "maximal-class-G1-power"],
        "log-bound": ["tensor-log-bound"],
        "coclass": ["coclass-tensor-odd", "coclass-tensor-2", "coclass-schur-odd", "coclass-schur-2",
                    "coclass-power-commutator-2", "coclass-power-commutator-odd"],
        "hall": ["hall-collection", "hall-collection-product", "hall-subgroup-congruence"],
        "lemmas": ["normal-inclusion", "potent-lower-central", "omega-exponent", "powerful-iterated-powers"],
    }
    return [c for s in suites for c in groups[s]]


def _entry_worker(args):
    entry, seed, max_cosets, suites = args
    return [v for v in run_entry(entry, seed, max_cosets, suites)]


def sort_key(v: Verdict):
    return (v.group, v.claim, v.subject)


def run_corpus(entries: list[CorpusEntry], suites: tuple[str, ...] | None = None, seed: int = 0, jobs: int = 1,
               max_cosets: int = DEFAULT_MAX_COSETS, progress=None) -> list[Verdict]:
    """All verdicts for the corpus, canonically sorted by (group, claim, subject)."""
    tasks = [(e, seed, max_cosets, suites) for e in entries]
    verdicts: list[Verdict] = []
    if jobs <= 1:
        for t in tasks:
            res = _entry_worker(t)
            if progress:
                progress(t[0], res)
            verdicts.extend(res)
    else:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for t, res in zip(tasks, ex.map(_entry_worker, tasks)):
                if progress:
                    progress(t[0], res)
                verdicts.extend(res)
    return sorted(verdicts, key=sort_key)


def report_json(verdicts: list[Verdict], timings: bool = False) -> str:
    return json.dumps([v.to_json(timings) for v in verdicts], indent=2, sort_keys=False) + "\n"


def summarize(verdicts: list[Verdict]) -> dict[str, int]:
    counts = {s: 0 for s in STATUSES}
    for v in verdicts:
        counts[v.status] += 1
    return counts
