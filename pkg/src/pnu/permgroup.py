"""Finite permutation groups.

Two representations share one interface:

* :class:`PermGroup` -- arbitrary permutation groups on ``0..n-1`` with a
  deterministic Schreier-Sims base and strong generating set.
* :class:`Subgroup` -- subgroups of a :class:`RegularGroup`, i.e. of a group
  given by its right regular action (point ``q`` is the element mapping the
  identity point ``0`` to ``q``). Such subgroups act semiregularly, so the
  base is ``[0]``, the single fundamental orbit is the element set and
  membership of ``x`` is a lookup of ``0^x``. Elements are plain ints and all
  bulk work (orders, powers, cosets) is vectorized over points.

Permutations are numpy image arrays and act on the right: ``x^(ab) = (x^a)^b``.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from functools import cached_property, reduce

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .cosets import ResourceExceeded
from .presentations import Word

ELEMENT_THRESHOLD = 10_000_000


class NotNormalError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# -- permutations ---------------------------------------------------------------

def perm_from_cycles(cycles, degree: int, one_based: bool = True) -> np.ndarray:
    p = np.arange(degree, dtype=np.int32)
    shift = 1 if one_based else 0
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            p[a - shift] = b - shift
    return p


def compose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``a`` then ``b``."""
    return b[a]


def invert(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    out[a] = np.arange(a.shape[0], dtype=a.dtype)
    return out


def is_identity_perm(a: np.ndarray) -> bool:
    return bool((a == np.arange(a.shape[0])).all())


def cycle_string(a: np.ndarray, one_based: bool = True) -> str:
    seen = np.zeros(a.shape[0], bool)
    out = []
    for i in range(a.shape[0]):
        if seen[i] or a[i] == i:
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(str(j + one_based))
            j = a[j]
        out.append("(" + " ".join(cyc) + ")")
    return "".join(out) or "()"


# -- general permutation groups (Schreier-Sims) ------------------------------------

class PermGroup:
    """Permutation group with a lazily built base and strong generating set.

    Base points are chosen deterministically (smallest moved point, unless a
    base prefix is prescribed) and Schreier generators are processed in a
    fixed order, so orders and stabilizer chains are reproducible.
    """

    def __init__(self, gens, degree: int | None = None, base_prefix=()):
        gens = [np.asarray(g, dtype=np.int32) for g in gens]
        if degree is None:
            if not gens:
                raise ValueError("degree required for a group without generators")
            degree = gens[0].shape[0]
        for g in gens:
            if g.shape != (degree,) or not np.array_equal(np.sort(g), np.arange(degree)):
                raise ValueError("generator is not a permutation of the common domain")
        self.degree = degree
        self.gens = [g for g in gens if not is_identity_perm(g)]
        self.base_prefix = tuple(base_prefix)
        self._chain = None

    # element interface
    @property
    def identity(self):
        return np.arange(self.degree, dtype=np.int32)

    def mul(self, a, b):
        return b[a]

    def inv(self, a):
        return invert(a)

    def is_identity(self, a) -> bool:
        return is_identity_perm(a)

    def _spawn(self, gens):
        return PermGroup(gens, self.degree)

    # BSGS
    def _build(self):
        if self._chain is not None:
            return
        base: list[int] = []
        strong: list[np.ndarray] = []
        levels: list[dict] = []  # per level: {"orbit": {pt: transversal perm}}

        def stab_gens(i):
            return [s for s in strong if all(s[b] == b for b in base[:i])]

        def orbit(i):
            gens_i = stab_gens(i)
            b = base[i]
            trans = {b: self.identity}
            queue = [b]
            for pt in queue:
                for s in gens_i:
                    q = int(s[pt])
                    if q not in trans:
                        trans[q] = s[trans[pt]]
                        queue.append(q)
            return trans

        def sift(g):
            for i, b in enumerate(base):
                q = int(g[b])
                t = levels[i].get(q)
                if t is None:
                    return g, i
                g = invert(t)[g]
            return g, len(base)

        def new_base_point(g):
            for b in self.base_prefix:
                if b not in base and g[b] != b:
                    return b
            return int(np.flatnonzero(g != np.arange(self.degree))[0])

        # prescribed points moved by the group come first, so they form a base prefix
        base += [b for b in self.base_prefix if any(g[b] != b for g in self.gens)]
        for g in self.gens:
            if not any(g[b] != b for b in base):
                base.append(new_base_point(g))
        strong = list(self.gens)
        levels = [orbit(i) for i in range(len(base))]
        i = len(base) - 1
        while i >= 0:
            done = True
            gens_i = stab_gens(i)
            for pt, t in list(levels[i].items()):
                for s in gens_i:
                    u = levels[i][int(s[pt])]
                    sch = invert(u)[s[t]]  # t s u^-1
                    if is_identity_perm(sch):
                        continue
                    h, j = sift(sch)
                    if j < len(base) or not is_identity_perm(h):
                        if j == len(base):
                            base.append(new_base_point(h))
                            levels.append({})
                        strong.append(h)
                        for k in range(i + 1, j + 1):
                            levels[k] = orbit(k)
                        i = j
                        done = False
                        break
                if not done:
                    break
            if done:
                i -= 1
        self._chain = (base, strong, levels)

    @property
    def base(self) -> list[int]:
        self._build()
        return list(self._chain[0])

    @property
    def strong_gens(self) -> list[np.ndarray]:
        self._build()
        return list(self._chain[1])

    def orbit_lengths(self) -> list[int]:
        self._build()
        return [len(lv) for lv in self._chain[2]]

    def order(self) -> int:
        return math.prod(self.orbit_lengths())

    def contains(self, g) -> bool:
        g = np.asarray(g, dtype=np.int32)
        if g.shape != (self.degree,):
            return False
        self._build()
        base, _, levels = self._chain
        for i, b in enumerate(base):
            t = levels[i].get(int(g[b]))
            if t is None:
                return False
            g = invert(t)[g]
        return is_identity_perm(g)

    def stabilizer_of_prefix(self, k: int) -> list[np.ndarray]:
        """Strong generators fixing the first ``k`` base points."""
        self._build()
        base, strong, _ = self._chain
        return [s for s in strong if all(s[b] == b for b in base[:k])]

    def elements(self) -> list[np.ndarray]:
        if self.order() > ELEMENT_THRESHOLD:
            raise ResourceExceeded("group too large to enumerate")
        elems = [self.identity]
        for lv in reversed(self._chain[2]):
            elems = [t[e] for t in lv.values() for e in elems]
        return elems

    def __le__(self, other) -> bool:
        return all(other.contains(g) for g in self.gens)

    def __eq__(self, other) -> bool:
        return isinstance(other, PermGroup) and self.order() == other.order() and self <= other

    __hash__ = None

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, gens=[{', '.join(cycle_string(g) for g in self.gens)}])"

    def to_regular(self) -> tuple["Subgroup", list[np.ndarray]]:
        """Regular copy of this group and the element list translating points back."""
        elems = [self.identity]
        index = {elems[0].tobytes(): 0}
        for x in elems:
            for s in self.gens:
                y = x[s]
                key = y.tobytes()
                if key not in index:
                    if len(elems) >= ELEMENT_THRESHOLD:
                        raise ResourceExceeded("group too large to regularize")
                    index[key] = len(elems)
                    elems.append(y)
        perms = [np.array([index[x[s].tobytes()] for x in elems], dtype=np.int32) for s in self.gens]
        reg = RegularGroup(perms) if perms else RegularGroup([], degree=1)
        return reg.whole(), elems


def bsgs(gens, degree=None) -> PermGroup:
    G = PermGroup(gens, degree)
    G._build()
    return G


# -- regular groups and their subgroups ------------------------------------------------

class RegularGroup:
    """A group acting on ``0..n-1`` by its right regular action; ``0`` is the identity."""

    def __init__(self, gen_perms, degree: int | None = None, names=None, perm_cache: int = 48):
        gen_perms = [np.ascontiguousarray(g, dtype=np.int32) for g in gen_perms]
        self.n = gen_perms[0].shape[0] if gen_perms else (degree or 1)
        self.ngens = len(gen_perms)
        self.names = tuple(names) if names else tuple(f"g{i}" for i in range(self.ngens))
        k = 2 * self.ngens
        stack = np.empty((k + 1, self.n), np.int32)
        for i, g in enumerate(gen_perms):
            stack[2 * i] = g
            stack[2 * i + 1] = invert(g)
        stack[k] = np.arange(self.n, dtype=np.int32)
        self.stack = stack
        self.pad = k
        self._inverse_letter = np.array([x ^ 1 for x in range(k)] + [k], dtype=np.int64)
        self._build_words()
        self._perm_cache: OrderedDict[int, np.ndarray] = OrderedDict()
        self._perm_cache_size = perm_cache

    @classmethod
    def from_presentation(cls, pres, max_cosets=None) -> "RegularGroup":
        from .cosets import DEFAULT_MAX_COSETS, regular_representation
        perms = regular_representation(pres, max_cosets or DEFAULT_MAX_COSETS)
        G = cls(perms, names=pres.names)
        G.presentation = pres
        return G

    def _build_words(self):
        n, k = self.n, self.pad
        seen = np.zeros(n, bool)
        seen[0] = True
        depth = np.zeros(n, np.int32)
        parent_letter = np.full(n, -1, np.int32)
        parent = np.zeros(n, np.int32)
        frontier = np.array([0], np.int32)
        levels = [frontier]
        d = 0
        while frontier.size:
            d += 1
            found = []
            for letter in range(k):
                img = self.stack[letter, frontier]
                fresh = ~seen[img]
                if not fresh.any():
                    continue
                cand, src = img[fresh], frontier[fresh]
                uniq, idx = np.unique(cand, return_index=True)
                order = np.argsort(idx, kind="stable")
                uniq, idx = uniq[order], idx[order]
                seen[uniq] = True
                parent[uniq] = src[idx]
                parent_letter[uniq] = letter
                depth[uniq] = d
                found.append(uniq)
            frontier = np.concatenate(found) if found else np.zeros(0, np.int32)
            if frontier.size:
                levels.append(frontier)
        if not seen.all():
            raise ValueError("generators do not act transitively; not a regular representation")
        L = int(depth.max()) if n else 0
        words = np.full((n, max(L, 1)), k, dtype=np.uint8 if k < 255 else np.int32)
        for lev_d, pts in enumerate(levels[1:], start=1):
            words[pts, : lev_d - 1] = words[parent[pts], : lev_d - 1]
            words[pts, lev_d - 1] = parent_letter[pts]
        self.words = words
        self.word_len = depth
        inv = np.zeros(n, np.int32)
        for t in range(words.shape[1] - 1, -1, -1):
            inv = self.stack[self._inverse_letter[words[:, t]], inv]
        self.inverses = inv

    @property
    def order(self) -> int:
        return self.n

    # element arithmetic on points
    def mul(self, a, b):
        """Product ``a*b`` for points or arrays of points (broadcasting)."""
        if np.ndim(b) == 0:
            b = int(b)
            if b in self._perm_cache:
                return _as_int(self._perm_cache[b][a])
            x = a
            for letter in self.words[b, : self.word_len[b]]:
                x = self.stack[letter][x]
            return _as_int(x)
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        x = a.astype(np.int32, copy=True)
        W = self.words[b]
        for t in range(int(self.word_len[b].max(initial=0))):
            x = self.stack[W[..., t], x]
        return x

    def inv(self, a):
        return _as_int(self.inverses[a])

    def conj(self, a, b):
        """``a^b = b^-1 a b``."""
        return self.mul(self.mul(self.inv(b), a), b)

    def comm(self, a, b):
        """``[a, b] = a^-1 b^-1 a b``."""
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def power(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = np.zeros_like(np.asarray(a)) if np.ndim(a) else 0
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return _as_int(result)

    def perm(self, q: int) -> np.ndarray:
        """Right-multiplication permutation of element ``q``."""
        q = int(q)
        p = self._perm_cache.get(q)
        if p is not None:
            self._perm_cache.move_to_end(q)
            return p
        x = np.arange(self.n, dtype=np.int32)
        for letter in self.words[q, : self.word_len[q]]:
            x = self.stack[letter][x]
        self._perm_cache[q] = x
        if len(self._perm_cache) > self._perm_cache_size:
            self._perm_cache.popitem(last=False)
        return x

    def gen_point(self, i: int) -> int:
        return int(self.stack[2 * i, 0])

    def evaluate(self, word: Word, images=None):
        """Point of ``word`` in the generators (or in ``images`` substituted for them)."""
        x = 0
        for g, e in word.letters:
            if images is None:
                letter = 2 * g + (e < 0)
                for _ in range(abs(e)):
                    x = int(self.stack[letter, x])
            else:
                x = self.mul(x, self.power(images[g], e))
        return x

    def word_of(self, q: int) -> Word:
        return Word(tuple((int(l) >> 1, -1 if l & 1 else 1) for l in self.words[q, : self.word_len[q]]))

    def element_orders(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=np.int32)
        orders = np.zeros(pts.shape, np.int64)
        cur = pts.copy()
        k = 1
        live = np.ones(pts.shape, bool)
        while live.any():
            hit = live & (cur == 0)
            orders[hit] = k
            live &= ~hit
            if not live.any():
                break
            cur = self.mul(cur, pts)
            k += 1
            if k > self.n:
                raise AssertionError("element order exceeds group order")
        return orders

    def whole(self) -> "Subgroup":
        return Subgroup(self, [self.gen_point(i) for i in range(self.ngens)], mask=np.ones(self.n, bool))

    def subgroup(self, gens) -> "Subgroup":
        return Subgroup(self, gens)

    def trivial(self) -> "Subgroup":
        return Subgroup(self, [])


def _as_int(x):
    return int(x) if np.ndim(x) == 0 else x


class Subgroup:
    """Subgroup of a :class:`RegularGroup`, stored as its element mask.

    As a permutation group it is semiregular: base ``[0]``, strong generators
    ``gens``, fundamental orbit = ``elements``.
    """

    def __init__(self, ambient: RegularGroup, gens, mask: np.ndarray | None = None):
        self.ambient = ambient
        if mask is None:
            mask = np.zeros(ambient.n, bool)
            mask[0] = True
            kept = []
            for g in gens:
                g = int(g)
                if not mask[g]:
                    mask = _extend(ambient, mask, kept, g)
                    kept.append(g)
            gens = kept
        self.gens = [int(g) for g in gens]
        self.mask = mask

    # element interface
    identity = 0

    def mul(self, a, b):
        return self.ambient.mul(a, b)

    def inv(self, a):
        return self.ambient.inv(a)

    def is_identity(self, a) -> bool:
        return int(a) == 0

    def _spawn(self, gens):
        return Subgroup(self.ambient, gens)

    def contains(self, x) -> bool:
        if isinstance(x, np.ndarray) and x.ndim == 1:
            x = int(x[0])
        return bool(self.mask[int(x)])

    def extend(self, extra) -> "Subgroup":
        mask, gens = self.mask, list(self.gens)
        for g in extra:
            g = int(g)
            if not mask[g]:
                mask = _extend(self.ambient, mask, gens, g)
                gens.append(g)
        if len(gens) == len(self.gens):
            return self
        return Subgroup(self.ambient, gens, mask=mask)

    @cached_property
    def elements(self) -> np.ndarray:
        return np.flatnonzero(self.mask).astype(np.int32)

    def order(self) -> int:
        return int(self.elements.shape[0])

    @property
    def base(self):
        return [0]

    def orbit_lengths(self):
        return [self.order()] if self.order() > 1 else []

    def is_trivial(self) -> bool:
        return self.order() == 1

    def perm(self, x) -> np.ndarray:
        return self.ambient.perm(x)

    def __le__(self, other: "Subgroup") -> bool:
        return all(other.mask[g] for g in self.gens)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup) and other.ambient is self.ambient
                and self.order() == other.order() and self <= other)

    __hash__ = None

    def __repr__(self):
        return f"Subgroup(order={self.order()}, gens={self.gens})"

    def random_element(self, rng) -> int:
        return int(self.elements[rng.integers(self.order())])


def _extend(ambient: RegularGroup, mask: np.ndarray, gens: list[int], g: int) -> np.ndarray:
    """Element mask of <old subgroup, g>; ``mask`` must be closed under ``gens``."""
    mask = mask.copy()
    perms = [ambient.perm(h) for h in gens] + [ambient.perm(g)]
    frontier = np.flatnonzero(mask).astype(np.int32)
    first = True
    while frontier.size:
        found = []
        for j, P in enumerate(perms):
            if first and j < len(gens):
                continue  # old elements are closed under old generators
            img = P[frontier]
            img = img[~mask[img]]
            if img.size:
                img = np.unique(img)
                mask[img] = True
                found.append(img)
        first = False
        frontier = np.concatenate(found) if found else np.zeros(0, np.int32)
    return mask


# -- homomorphisms ---------------------------------------------------------------------

class Homomorphism:
    """Map from a group to a group given by images of the source generators.

    For regular-representation groups the construction labels every source
    element with its image along a spanning tree of the Cayley graph and
    then checks every Cayley-graph edge, which is exactly the statement that
    the map is a well-defined homomorphism.
    """

    def __init__(self, source, target, images, check: bool = True):
        if len(images) != len(source.gens):
            raise ValueError("need one image per source generator")
        self.source = source
        self.target = target
        self.images = list(images)
        self._values = None
        if check:
            self.verify()

    @property
    def regular(self) -> bool:
        return isinstance(self.source, Subgroup)

    def values(self) -> np.ndarray:
        """Image point of every source element (``-1`` off the source)."""
        if self._values is not None:
            return self._values
        if not self.regular:
            raise TypeError("values() needs a regular-representation source")
        src, tgt = self.source, self.target.ambient
        amb = src.ambient
        vals = np.full(amb.n, -1, np.int32)
        vals[0] = 0
        seen = np.zeros(amb.n, bool)
        seen[0] = True
        frontier = np.array([0], np.int32)
        perms = [amb.perm(g) for g in src.gens]
        while frontier.size:
            found = []
            for j, P in enumerate(perms):
                img = P[frontier]
                fresh = ~seen[img]
                if not fresh.any():
                    continue
                uniq, idx = np.unique(img[fresh], return_index=True)
                par = frontier[fresh][idx]
                seen[uniq] = True
                vals[uniq] = tgt.mul(vals[par], self.images[j])
                found.append(uniq)
            frontier = np.concatenate(found) if found else np.zeros(0, np.int32)
        self._values = vals
        return vals

    def verify(self):
        if self.regular:
            vals = self.values()
            elems = self.source.elements
            tgt = self.target.ambient
            for j, g in enumerate(self.source.gens):
                lhs = vals[self.source.ambient.perm(g)[elems]]
                rhs = tgt.mul(vals[elems], self.images[j])
                bad = np.flatnonzero(lhs != rhs)
                if bad.size:
                    raise ValueError(f"not a homomorphism: relation fails at element {int(elems[bad[0]])}")
            if not all(self.target.contains(x) for x in self.images):
                raise ValueError("an image lies outside the target")
        else:
            graph = self._graph_group()
            if graph.order() != self.source.order():
                raise ValueError("not a homomorphism: graph is not a function")

    def __call__(self, x):
        if self.regular:
            return _as_int(self.values()[x])
        raise TypeError("evaluate general homomorphisms through the graph group")

    def restrict(self, sub: "Subgroup") -> "Homomorphism":
        vals = self.values()
        h = Homomorphism(sub, self.target, [int(vals[g]) for g in sub.gens], check=False)
        h._values = np.where(sub.mask, vals, -1).astype(np.int32)
        return h

    def image(self):
        return self.target._spawn(self.images) if self.regular else PermGroup(self.images, self.target.degree)

    def _graph_group(self, base_prefix=()):
        n = self.source.degree
        gens = [np.concatenate([g, np.asarray(im, np.int32) + n]) for g, im in zip(self.source.gens, self.images)]
        return PermGroup(gens, n + self.target.degree, base_prefix=base_prefix)

    def kernel(self):
        return hom_kernel(self)


def hom_kernel(f: Homomorphism):
    """Kernel of ``f``; asserts ``|ker| * |im| = |source|``."""
    if f.regular:
        vals = f.values()
        pts = np.flatnonzero(vals == 0)
        K = f.source.ambient.trivial().extend(_prune_candidates(f.source.ambient, pts))
    else:
        # graph trick: stabilizer of the target points in <(g, f(g))>
        n = f.source.degree
        tpoints = range(n, n + f.target.degree)
        graph = f._graph_group(base_prefix=tpoints)
        graph._build()
        k = sum(1 for b in graph.base if b >= n)
        if any(b >= n for b in graph.base[k:]):
            raise AssertionError("base change failed to front-load target points")
        gens = [s[:n] for s in graph.stabilizer_of_prefix(k)]
        K = PermGroup(gens, n)
    im = f.image()
    if K.order() * im.order() != f.source.order():
        raise AssertionError("kernel/image orders do not multiply to the source order")
    return K


def _prune_candidates(amb: RegularGroup, pts) -> list[int]:
    """Generators for <pts>: greedily keep points not in the span so far."""
    mask = np.zeros(amb.n, bool)
    mask[0] = True
    gens: list[int] = []
    for q in pts:
        q = int(q)
        if not mask[q]:
            mask = _extend(amb, mask, gens, q)
            gens.append(q)
    return gens


# -- structural operations -----------------------------------------------------------------

def order(G) -> int:
    return G.order()


def contains(G, x) -> bool:
    return G.contains(x)


def closure(G, extra):
    if isinstance(G, Subgroup):
        return G.extend(extra)
    return PermGroup(list(G.gens) + [np.asarray(x, np.int32) for x in extra], G.degree)


def normal_closure(G, seeds, within=None):
    """Least subgroup containing ``seeds`` normalized by the generators of ``G``."""
    conj_by = list(G.gens)
    if isinstance(G, Subgroup):
        amb = G.ambient
        H = amb.trivial().extend(seeds)
        work = list(H.gens)
        inv = [amb.inv(g) for g in conj_by]
        while work:
            h = work.pop(0)
            for g, gi in zip(conj_by, inv):
                c = amb.mul(amb.mul(gi, h), g)
                if not H.mask[c]:
                    H = H.extend([c])
                    work.append(c)
        return H
    H = PermGroup([np.asarray(s, np.int32) for s in seeds], G.degree)
    work = list(H.gens)
    while work:
        h = work.pop(0)
        for g in conj_by:
            c = invert(g)[h[g]]  # g^-1 h g
            if not H.contains(c):
                H = PermGroup(H.gens + [c], G.degree)
                work.append(c)
    return H


def commutator_subgroup(A, B):
    """``[A, B]``: normal closure in ``<A, B>`` of the generator commutators."""
    if isinstance(A, Subgroup):
        amb = A.ambient
        seeds = [amb.comm(a, b) for a in A.gens for b in B.gens]
        return normal_closure(amb.trivial().extend(list(A.gens) + list(B.gens)), seeds)
    seeds = [invert(a)[invert(b)][a][b] for a in A.gens for b in B.gens]
    return normal_closure(PermGroup(A.gens + B.gens, A.degree), seeds)


def iterated_commutator(M, N, j: int):
    """Left-normed ``[M, N, ..., N]`` with ``j`` copies of ``N``."""
    for _ in range(j):
        M = commutator_subgroup(M, N)
    return M


def lower_central_series(G) -> list:
    series = [G]
    while True:
        nxt = commutator_subgroup(series[-1], G)
        if nxt.order() == series[-1].order():
            return series
        series.append(nxt)


def gamma(G, i: int, series=None):
    """``gamma_i(G)``; indices past the series end give the stable last term."""
    series = series or lower_central_series(G)
    return series[min(i, len(series)) - 1]


def _regular(G):
    if isinstance(G, Subgroup):
        return G, None
    return G.to_regular()


def _back(H: Subgroup, G, elems):
    if elems is None:
        return H
    return PermGroup([elems[g] for g in H.gens], G.degree)


def element_order(G, x) -> int:
    if isinstance(G, Subgroup):
        return int(G.ambient.element_orders(np.array([int(x)]))[0])
    x = np.asarray(x)
    k, y = 1, x.copy()
    while not is_identity_perm(y):
        y = x[y]
        k += 1
    return k


def group_exponent(G) -> int:
    R, _ = _regular(G)
    if R.order() > ELEMENT_THRESHOLD:
        raise ResourceExceeded("exponent computation above the element threshold")
    if R.order() == 1:
        return 1
    pk = _prime_of(R.order())
    amb = R.ambient
    if pk:
        # p-group: smallest p^j killing every element
        p = pk
        cur = R.elements
        e = 1
        while (cur != 0).any():
            cur = amb.power(cur, p)
            e *= p
        return e
    return int(reduce(math.lcm, np.unique(amb.element_orders(R.elements)).tolist(), 1))


def _prime_of(n: int) -> int | None:
    from .presentations import prime_power
    pk = prime_power(n)
    return pk[0] if pk else None


def coset_labels(G: Subgroup, N: Subgroup) -> tuple[np.ndarray, np.ndarray]:
    """Label each element of ``G`` by its coset ``xN``; labels ordered by first element.

    Returns (labels over ambient points, -1 off G; representative per label).
    """
    amb = G.ambient
    elems = G.elements
    m = elems.shape[0]
    pos = np.full(amb.n, -1, np.int64)
    pos[elems] = np.arange(m)
    rows, cols = [], []
    for g in N.gens:
        rows.append(np.arange(m))
        cols.append(pos[amb.perm(g)[elems]])
    if rows:
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        graph = coo_matrix((np.ones(r.shape[0], np.int8), (r, c)), shape=(m, m)).tocsr()
        _, lab = connected_components(graph, directed=True, connection="weak")
    else:
        lab = np.arange(m)
    uniq, first = np.unique(lab, return_index=True)
    order_ = np.argsort(first, kind="stable")
    relabel = np.empty(uniq.shape[0], np.int64)
    relabel[order_] = np.arange(uniq.shape[0])
    lab = relabel[lab]
    labels = np.full(amb.n, -1, np.int64)
    labels[elems] = lab
    reps = elems[np.sort(first)]
    return labels, reps


def check_normal(G, N):
    """Raise :class:`NotNormalError` with a conjugation witness unless ``N`` is normal in ``G``."""
    if isinstance(G, Subgroup):
        amb = G.ambient
        if not N <= G:
            raise NotNormalError("N is not a subgroup of G")
        for n in N.gens:
            for g in G.gens:
                c = amb.conj(n, g)
                if not N.mask[c]:
                    raise NotNormalError(f"conjugate of {n} by {g} leaves N", witness=(n, g))
        return
    for n in N.gens:
        for g in G.gens:
            c = invert(g)[n[g]]
            if not N.contains(c):
                raise NotNormalError("conjugate leaves N", witness=(n, g))


def is_normal(G, N) -> bool:
    try:
        check_normal(G, N)
    except NotNormalError:
        return False
    return True


def quotient(G, N):
    """``G/N`` as a regular permutation group together with the projection."""
    if not isinstance(G, Subgroup):
        R, elems = G.to_regular()
        index = {e.tobytes(): i for i, e in enumerate(elems)}
        NR = R.ambient.trivial().extend([index[np.asarray(n, np.int32).tobytes()] for n in N.gens])
        # the regular copy's generators correspond to G's, so the projection carries over
        return quotient(R, NR)
    check_normal(G, N)
    if G.order() > ELEMENT_THRESHOLD:
        raise ResourceExceeded("quotient above the element threshold")
    amb = G.ambient
    labels, reps = coset_labels(G, N)
    perms = [labels[amb.perm(g)[reps]].astype(np.int32) for g in G.gens]
    QG = RegularGroup(perms, degree=len(reps)) if perms else RegularGroup([], degree=1)
    Q = QG.whole()
    proj = Homomorphism(G, Q, [int(labels[g]) for g in G.gens], check=False)
    proj._values = labels.astype(np.int32)
    proj.verify()
    if Q.order() * N.order() != G.order():
        raise AssertionError("|G/N| * |N| != |G|")
    return Q, proj


def agemo(G, p: int, k: int = 1):
    """``G^(p^k) = <x^(p^k) : x in G>``.

    Starts from the normal closure of the generators' powers and repairs it
    against the cosets: any coset representative whose ``p^k``-th power is
    outside the current subgroup has that power adjoined.
    """
    R, elems = _regular(G)
    if R.order() > ELEMENT_THRESHOLD:
        raise ResourceExceeded("agemo above the element threshold")
    amb = R.ambient
    e = p ** k
    H = normal_closure(R, [amb.power(g, e) for g in R.gens])
    while True:
        _, reps = coset_labels(R, H)
        powers = amb.power(reps, e)
        bad = powers[~H.mask[powers]]
        if bad.size == 0:
            return _back(H, G, elems)
        H = normal_closure(R, list(H.gens) + [int(x) for x in np.unique(bad)])


def omega(G, p: int, i: int = 1):
    """``Omega_i(G)``: generated by the elements of order dividing ``p^i``."""
    R, elems = _regular(G)
    if R.order() > ELEMENT_THRESHOLD:
        raise ResourceExceeded("omega above the element threshold")
    amb = R.ambient
    pts = R.elements
    small = pts[amb.power(pts, p ** i) == 0]
    return _back(amb.trivial().extend(_prune_candidates(amb, small)), G, elems)


def center(G):
    R, elems = _regular(G)
    amb = R.ambient
    pts = R.elements
    keep = np.ones(pts.shape[0], bool)
    for g in R.gens:
        keep &= amb.mul(pts, g) == amb.mul(g, pts)
    return _back(amb.trivial().extend(_prune_candidates(amb, pts[keep])), G, elems)


def is_abelian(G) -> bool:
    if isinstance(G, Subgroup):
        amb = G.ambient
        return all(amb.comm(a, b) == 0 for a in G.gens for b in G.gens)
    return all(is_identity_perm(invert(a)[invert(b)][a][b]) for a in G.gens for b in G.gens)


def abelian_invariants(G) -> list[int]:
    """Invariant factors (prime-power elementary divisors, sorted) of an abelian group."""
    R, _ = _regular(G)
    if not is_abelian(R):
        raise ValueError("group is not abelian")
    n = R.order()
    amb = R.ambient
    pts = R.elements
    out: list[int] = []
    m = n
    p = 2
    while m > 1:
        if m % p == 0:
            while m % p == 0:
                m //= p
            # |Omega_j| for the p-part: counts of x with x^(p^j) = 1
            counts = []
            j = 0
            while True:
                c = int((amb.power(pts, p ** j) == 0).sum())
                counts.append(c)
                if j and counts[-1] == counts[-2]:
                    break
                j += 1
            logs = [round(math.log(c, p)) for c in counts]
            ranks = [logs[j + 1] - logs[j] for j in range(len(logs) - 1)]  # #cyclic factors of order >= p^(j+1)
            for j in range(len(ranks)):
                exact = ranks[j] - (ranks[j + 1] if j + 1 < len(ranks) else 0)
                out += [p ** (j + 1)] * exact
        p += 1
    return sorted(out)


def derived_subgroup(G):
    return commutator_subgroup(G, G)


def nilpotency_class(G, series=None) -> int:
    series = series or lower_central_series(G)
    if series[-1].order() != 1:
        raise ValueError("group is not nilpotent")
    return len(series) - 1
