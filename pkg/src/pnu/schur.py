"""Schur multiplier from the normalized bar complex, independent of nu(G).

H_2(G, Z) is the torsion subgroup of C_2 / im(d_3), where C_n is free on the
tuples [g_1|...|g_n] of non-identity elements. For a p-group the torsion is a
p-group annihilated by |G|, so a Smith normal form over Z/p^E with
p^E > |G| recovers it exactly: an elementary divisor of valuation v with
0 < v < E is a cyclic factor of order p^v, and valuation >= E means zero.
"""

from __future__ import annotations

import numpy as np

from .cosets import ResourceExceeded
from .presentations import prime_power

ORACLE_MAX_ORDER = 16


def multiplication_table(G) -> np.ndarray:
    """Table t[i, j] = index of e_i e_j over the element list of a regular subgroup."""
    elems = G.elements
    index = np.full(G.ambient.n, -1, np.int64)
    index[elems] = np.arange(elems.shape[0])
    prod = G.ambient.mul(elems[:, None], elems[None, :])
    return index[prod]


def boundary3(table: np.ndarray) -> np.ndarray:
    """Matrix of d_3: C_3 -> C_2 in the normalized bar complex (trivial coefficients).

    d[a|b|c] = [b|c] - [ab|c] + [a|bc] - [a|b], dropping tuples with an identity
    entry. Element 0 of ``table`` must be the identity.
    """
    n = table.shape[0]
    m = n - 1
    a, b, c = (x.ravel() + 1 for x in np.meshgrid(np.arange(m), np.arange(m), np.arange(m), indexing="ij"))
    col = np.arange(m ** 3)
    D = np.zeros((m * m, m ** 3), np.int64)

    def add(x, y, sign):
        keep = (x != 0) & (y != 0)
        np.add.at(D, ((x[keep] - 1) * m + (y[keep] - 1), col[keep]), sign)

    add(b, c, 1)
    add(table[a, b], c, -1)
    add(a, table[b, c], 1)
    add(a, b, -1)
    return D


def local_elementary_divisors(A: np.ndarray, p: int, E: int) -> list[int]:
    """Valuations of the nonzero elementary divisors of ``A`` over Z/p^E (those < E)."""
    q = p ** E
    A = np.mod(A, q).astype(np.int64)
    rows, cols = A.shape
    vals: list[int] = []
    active_r = np.ones(rows, bool)
    active_c = np.ones(cols, bool)
    while True:
        sub = A[np.ix_(active_r, active_c)]
        units = np.flatnonzero(sub % p != 0)
        if units.size:
            i, j = np.unravel_index(int(units[0]), sub.shape)
            k = 0
        else:
            if not sub.any():
                break
            # p-adic valuation of each entry, zero entries count as E
            v = np.full(sub.shape, E, np.int64)
            rem = sub.copy()
            for t in range(E):
                hit = (rem != 0) & (v == E) & (rem % p != 0)
                v[hit] = t
                rem = np.where(rem % p == 0, rem // p, rem)
            i, j = np.unravel_index(int(np.argmin(v)), v.shape)
            k = int(v[i, j])
        r = int(np.flatnonzero(active_r)[i])
        c = int(np.flatnonzero(active_c)[j])
        unit = (int(A[r, c]) // p ** k) % q
        A[r] = (A[r] * pow(unit, -1, q)) % q
        # clear column c with row operations; every entry is divisible by p^k
        f = A[:, c] // p ** k
        f[r] = 0
        live = np.flatnonzero(f)
        A[live] = (A[live] - np.outer(f[live], A[r])) % q
        active_r[r] = False
        active_c[c] = False
        vals.append(k)
    return sorted(vals)


def schur_multiplier_oracle(G) -> list[int]:
    """Abelian invariants (elementary divisors, ascending) of H_2(G, Z) for |G| <= 16."""
    n = G.order()
    if n > ORACLE_MAX_ORDER:
        raise ResourceExceeded(f"bar-complex oracle is limited to |G| <= {ORACLE_MAX_ORDER}")
    if n == 1:
        return []
    pk = prime_power(n)
    if pk is None:
        raise ValueError("the oracle handles p-groups only")
    p, e = pk
    D = boundary3(multiplication_table(G))
    return [p ** v for v in local_elementary_divisors(D, p, e + 1) if v > 0]
