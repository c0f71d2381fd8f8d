"""Todd-Coxeter coset enumeration (HLT with lookahead) and regular representations.

Letters are coded as ``2*g`` (generator g) and ``2*g + 1`` (its inverse), so a
letter's inverse is ``letter ^ 1`` and letter codes double as table columns.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .presentations import FinitePresentation, Word

DEFAULT_MAX_COSETS = 5_000_000

_OK, _FULL = 0, 1


class ResourceExceeded(RuntimeError):
    """A computation would pass its configured size bound."""


@dataclass(frozen=True)
class CosetTable:
    table: np.ndarray  # shape (live, 2 * ngens); row 0 is the subgroup coset
    status: str  # "complete" or "exceeded"
    defined: int  # total cosets defined during the run

    @property
    def live(self) -> int:
        return self.table.shape[0]

    def permutations(self) -> list[np.ndarray]:
        """Right action of each generator on the cosets."""
        return [np.ascontiguousarray(self.table[:, 2 * g]) for g in range(self.table.shape[1] // 2)]


@numba.njit(cache=True)
def _rep(p, c):
    r = c
    while p[r] != r:
        r = p[r]
    while p[c] != r:
        nxt = p[c]
        p[c] = r
        c = nxt
    return r


@numba.njit(cache=True)
def _merge(p, queue, qlen, a, b):
    a = _rep(p, a)
    b = _rep(p, b)
    if a == b:
        return qlen
    if a > b:
        a, b = b, a
    p[b] = a
    queue[qlen] = b
    return qlen + 1


@numba.njit(cache=True)
def _coincidence(table, p, queue, a, b):
    ncols = table.shape[1]
    qlen = _merge(p, queue, 0, a, b)
    i = 0
    dead = 0
    while i < qlen:
        g = queue[i]
        i += 1
        dead += 1
        for x in range(ncols):
            d = table[g, x]
            if d >= 0:
                xi = x ^ 1
                table[d, xi] = -1
                mu = _rep(p, g)
                nu = _rep(p, d)
                if table[mu, x] >= 0:
                    qlen = _merge(p, queue, qlen, nu, table[mu, x])
                elif table[nu, xi] >= 0:
                    qlen = _merge(p, queue, qlen, mu, table[nu, xi])
                else:
                    table[mu, x] = nu
                    table[nu, xi] = mu
    return dead


@numba.njit(cache=True)
def _scan(table, p, queue, alpha, word, lo, hi, fill, n, cap, live):
    """Scan ``word[lo:hi]`` at coset ``alpha``; returns (status, n, live).

    With ``fill`` set, undefined positions get fresh cosets; a full table
    returns _FULL before anything is defined.
    """
    f = alpha
    i = lo
    b = alpha
    j = hi - 1
    while True:
        while i <= j and table[f, word[i]] >= 0:
            f = table[f, word[i]]
            i += 1
        if i > j:
            if f != b:
                live -= _coincidence(table, p, queue, f, b)
            return _OK, n, live
        while j >= i and table[b, word[j] ^ 1] >= 0:
            b = table[b, word[j] ^ 1]
            j -= 1
        if j < i:
            live -= _coincidence(table, p, queue, f, b)
            return _OK, n, live
        if i == j:
            table[f, word[i]] = b
            table[b, word[i] ^ 1] = f
            return _OK, n, live
        if not fill:
            return _OK, n, live
        if n >= cap:
            return _FULL, n, live
        # define a new coset and carry on from it
        table[f, word[i]] = n
        table[n, word[i] ^ 1] = f
        f = n
        i += 1
        n += 1
        live += 1


@numba.njit(cache=True)
def _lookahead(table, p, queue, letters, offsets, n, live):
    for beta in range(n):
        if p[beta] != beta:
            continue
        for r in range(offsets.shape[0] - 1):
            if p[beta] != beta:
                break
            _, n, live = _scan(table, p, queue, beta, letters, offsets[r], offsets[r + 1], False, n, n, live)
    return live


@numba.njit(cache=True)
def _compress(table, p, n):
    """Renumber live cosets 0..live-1 in order; returns the new count."""
    new = np.full(n, -1, np.int32)
    k = 0
    for c in range(n):
        if p[c] == c:
            new[c] = k
            k += 1
    ncols = table.shape[1]
    for c in range(n):
        if p[c] == c:
            row = new[c]
            for x in range(ncols):
                d = table[c, x]
                table[row, x] = -1 if d < 0 else new[_rep(p, d)]
    for c in range(k):
        p[c] = c
    for c in range(k, n):
        p[c] = c
        for x in range(ncols):
            table[c, x] = -1
    return k, new


@numba.njit(cache=True)
def _enumerate(table, p, queue, letters, offsets, sletters, soffsets, n, alpha, live, cap, defined, phase):
    """Run HLT from ``alpha``. Returns (status, n, alpha, live, defined, phase).

    Phase 0 scans the subgroup generators at coset 0 (rescanning a closed
    word is a no-op, so a restart after growth is safe).
    """
    ncols = table.shape[1]
    if phase == 0:
        for s in range(soffsets.shape[0] - 1):
            st, n2, live = _scan(table, p, queue, 0, sletters, soffsets[s], soffsets[s + 1], True, n, cap, live)
            defined += n2 - n
            n = n2
            if st == _FULL:
                return _FULL, n, alpha, live, defined, phase
        phase = 1
    while alpha < n:
        if p[alpha] == alpha:
            for r in range(offsets.shape[0] - 1):
                if p[alpha] != alpha:
                    break
                st, n2, live = _scan(table, p, queue, alpha, letters, offsets[r], offsets[r + 1], True, n, cap, live)
                defined += n2 - n
                n = n2
                if st == _FULL:
                    return _FULL, n, alpha, live, defined, phase
            if p[alpha] == alpha:
                for x in range(ncols):
                    if table[alpha, x] < 0:
                        if n >= cap:
                            return _FULL, n, alpha, live, defined, phase
                        table[alpha, x] = n
                        table[n, x ^ 1] = alpha
                        n += 1
                        live += 1
                        defined += 1
        alpha += 1
    return _OK, n, alpha, live, defined, phase


def _pack(words: list[Word]) -> tuple[np.ndarray, np.ndarray]:
    flat = [w.flat() for w in words]
    offsets = np.zeros(len(flat) + 1, np.int64)
    offsets[1:] = np.cumsum([len(f) for f in flat])
    letters = np.array([x for f in flat for x in f], dtype=np.int32)
    return letters, offsets


def enumerate_cosets(pres: FinitePresentation, subgroup_gens: list[Word] = (),
                     max_cosets: int = DEFAULT_MAX_COSETS) -> CosetTable:
    """Enumerate the right cosets of ``<subgroup_gens>`` in the group of ``pres``.

    The result is deterministic. If the live cosets cannot fit within
    ``max_cosets`` the returned table has status ``"exceeded"``.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be >= 1")
    ncols = 2 * pres.ngens
    if ncols == 0:
        return CosetTable(np.zeros((1, 0), np.int32), "complete", 1)
    # short relators first: they close rows early and cut redundant definitions
    letters, offsets = _pack(sorted((r for r in pres.relators if r), key=len))
    sletters, soffsets = _pack([w for w in subgroup_gens if w])
    cap = min(max_cosets, 1 << 14)
    table = np.full((cap, ncols), -1, np.int32)
    p = np.arange(cap, dtype=np.int32)
    queue = np.zeros(cap, np.int32)
    n, alpha, live, defined, phase = 1, 0, 1, 1, 0
    while True:
        st, n, alpha, live, defined, phase = _enumerate(table, p, queue, letters, offsets, sletters, soffsets,
                                                        n, alpha, live, cap, defined, phase)
        if st == _OK:
            break
        if cap < max_cosets:
            new_cap = min(max_cosets, 2 * cap)
            grown = np.full((new_cap, table.shape[1]), -1, np.int32)
            grown[:cap] = table
            table = grown
            p = np.concatenate([p, np.arange(cap, new_cap, dtype=np.int32)])
            queue = np.zeros(new_cap, np.int32)
            cap = new_cap
            continue
        live = _lookahead(table, p, queue, letters, offsets, n, live)
        k, new = _compress(table, p, n)
        if k >= cap:
            return CosetTable(table[:k].copy(), "exceeded", defined)
        # resume at the first live coset at or after alpha
        while alpha < n and new[alpha] < 0:
            alpha += 1
        alpha = int(new[alpha]) if alpha < n else k
        n = k
    k, _ = _compress(table, p, n)
    out = table[:k, :ncols].copy()
    if (out < 0).any():
        raise AssertionError("enumeration finished with an incomplete table")
    return CosetTable(out, "complete", defined)


def regular_representation(pres: FinitePresentation, max_cosets: int = DEFAULT_MAX_COSETS) -> list[np.ndarray]:
    """Permutations (0-based image arrays) of the generators in the right regular action."""
    ct = enumerate_cosets(pres, [], max_cosets)
    if ct.status != "complete":
        raise ResourceExceeded(f"coset enumeration passed {max_cosets} cosets; raise the bound or shrink the group")
    perms = ct.permutations()
    inverses = [np.argsort(g).astype(np.int32) for g in perms]
    for r in pres.relators:
        if not _word_is_identity(perms, inverses, r):
            raise AssertionError(f"relator {r} acts non-trivially")
    return perms


def _word_is_identity(perms, inverses, word: Word) -> bool:
    """Exhaustive check that ``word`` fixes every point."""
    start = np.arange(perms[0].shape[0], dtype=np.int32) if perms else np.zeros(1, np.int32)
    x = start
    for g, e in word.letters:
        q = perms[g] if e > 0 else inverses[g]
        for _ in range(abs(e)):
            x = q[x]
    return bool((x == start).all())
