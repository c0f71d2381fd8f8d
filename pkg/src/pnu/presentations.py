"""Words, finite presentations, the text format and the catalog of p-group families."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path


class PresentationSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class CatalogError(ValueError):
    pass


def free_reduce(letters) -> tuple[tuple[int, int], ...]:
    """Freely reduce a sequence of (generator, exponent) pairs.

    Adjacent letters on the same generator are merged and zero exponents
    dropped, which cascades through the stack.
    """
    out: list[tuple[int, int]] = []
    for g, e in letters:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            e += out[-1][1]
            out.pop()
            if e:
                out.append((g, e))
        else:
            out.append((g, e))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", free_reduce(self.letters))

    @classmethod
    def gen(cls, i: int, e: int = 1) -> "Word":
        return cls(((i, e),))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def __len__(self):
        return sum(abs(e) for _, e in self.letters)

    def __bool__(self):
        return bool(self.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def conj(self, by: "Word") -> "Word":
        """``self^by = by^-1 self by``."""
        return by.inverse() * self * by

    def comm(self, other: "Word") -> "Word":
        """Left-normed commutator ``[self, other] = self^-1 other^-1 self other``."""
        return self.inverse() * other.inverse() * self * other

    def max_gen(self) -> int:
        return max((g for g, _ in self.letters), default=-1)

    def shift(self, offset: int) -> "Word":
        return Word(tuple((g + offset, e) for g, e in self.letters))

    def substitute(self, images: list["Word"]) -> "Word":
        out = Word()
        for g, e in self.letters:
            out = out * images[g] ** e
        return out

    def flat(self) -> list[int]:
        """Letter codes for the enumerator: ``2*g`` for g, ``2*g + 1`` for g^-1."""
        out = []
        for g, e in self.letters:
            out.extend([2 * g + (e < 0)] * abs(e))
        return out

    def format(self, names) -> str:
        if not self.letters:
            return "1"
        return " ".join(names[g] if e == 1 else f"{names[g]}^{e}" for g, e in self.letters)


IDENTITY = Word()


def comm(*words: Word) -> Word:
    """Left-normed commutator of two or more words."""
    out = words[0]
    for w in words[1:]:
        out = out.comm(w)
    return out


@dataclass(frozen=True)
class FinitePresentation:
    names: tuple[str, ...]
    relators: tuple[Word, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "relators", tuple(Word(r.letters) for r in self.relators))
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate generator names")
        n = len(self.names)
        for r in self.relators:
            if r.max_gen() >= n:
                raise ValueError(f"relator uses generator {r.max_gen()} of {n}")

    @property
    def ngens(self) -> int:
        return len(self.names)

    def gens(self) -> list[Word]:
        return [Word.gen(i) for i in range(self.ngens)]

    def with_relators(self, extra) -> "FinitePresentation":
        return FinitePresentation(self.names, self.relators + tuple(r for r in extra if r))

    def format(self) -> str:
        lines = ["gens " + " ".join(self.names)]
        lines += ["rel " + r.format(self.names) for r in self.relators]
        return "\n".join(lines) + "\n"

    def __str__(self):
        rels = ", ".join(r.format(self.names) for r in self.relators)
        return f"<{', '.join(self.names)} | {rels}>"


# -- text format -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>-?\d+)|(?P<sym>[\^\[\],()]))")


class _WordParser:
    def __init__(self, text: str, line: int, col0: int, index: dict[str, int]):
        self.text = text
        self.line = line
        self.col0 = col0
        self.index = index
        self.pos = 0
        self.tokens = []
        while True:
            m = _TOKEN.match(text, self.pos)
            if not m or m.end() == self.pos:
                rest = text[self.pos:]
                if rest.strip():
                    col = self.pos + len(rest) - len(rest.lstrip())
                    self.fail("unexpected character", col)
                break
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            self.pos = m.end()
        self.i = 0

    def fail(self, message, col=None):
        if col is None:
            col = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        raise PresentationSyntaxError(message, self.line, self.col0 + col + 1)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            self.fail(f"expected {value!r}" if value else "unexpected end of word")
        self.i += 1
        return tok

    def parse(self) -> Word:
        w = self.product({None})
        if self.peek()[0] is not None:
            self.fail(f"unexpected {self.peek()[1]!r}")
        return w

    def product(self, stop) -> Word:
        w = Word()
        n = 0
        while self.peek()[1] not in stop and self.peek()[0] is not None:
            w = w * self.factor()
            n += 1
        if n == 0:
            self.fail("empty word")
        return w

    def factor(self) -> Word:
        kind, value, col = self.take()
        if kind == "name":
            if value not in self.index:
                self.fail(f"unknown generator {value!r}", col)
            w = Word.gen(self.index[value])
        elif value == "[":
            parts = [self.product({",", "]"})]
            while self.peek()[1] == ",":
                self.take(",")
                parts.append(self.product({",", "]"}))
            self.take("]")
            if len(parts) < 2:
                self.fail("commutator needs two entries", col)
            w = comm(*parts)
        elif value == "(":
            w = self.product({")"})
            self.take(")")
        else:
            self.fail(f"unexpected {value!r}", col)
        if self.peek()[1] == "^":
            self.take("^")
            kind, value, col = self.take()
            if kind != "int":
                self.fail("exponent must be an integer", col)
            k = int(value)
            if k == 0:
                self.fail("zero exponent", col)
            w = w ** k
        return w


def parse_word(text: str, names) -> Word:
    return _WordParser(text, 1, 0, {n: i for i, n in enumerate(names)}).parse()


def parse_presentation(text: str) -> FinitePresentation:
    """Parse the line-oriented ``gens ...`` / ``rel ...`` format."""
    names: list[str] | None = None
    relators: list[Word] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        offset = 0
        for stmt in line.split(";"):
            col = offset + len(stmt) - len(stmt.lstrip())
            offset += len(stmt) + 1
            stmt = stmt.strip()
            if not stmt:
                continue
            keyword, _, body = stmt.partition(" ")
            body_col = col + len(keyword) + 1
            if keyword == "gens":
                if names is not None:
                    raise PresentationSyntaxError("duplicate gens statement", lineno, col + 1)
                names = body.split()
                if not names:
                    raise PresentationSyntaxError("no generators", lineno, col + 1)
                for n in names:
                    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n):
                        raise PresentationSyntaxError(f"bad generator name {n!r}", lineno, col + 1)
                if len(set(names)) != len(names):
                    raise PresentationSyntaxError("duplicate generator name", lineno, col + 1)
            elif keyword == "rel":
                if names is None:
                    raise PresentationSyntaxError("rel before gens", lineno, col + 1)
                index = {n: i for i, n in enumerate(names)}
                w = _WordParser(body, lineno, body_col, index).parse()
                if w:
                    relators.append(w)
            else:
                raise PresentationSyntaxError(f"unknown statement {keyword!r}", lineno, col + 1)
    if names is None:
        raise PresentationSyntaxError("missing gens statement", 1, 1)
    return FinitePresentation(tuple(names), tuple(relators))


# -- catalog -----------------------------------------------------------------

FAMILIES = ("cyclic", "elemab", "dihedral", "semidihedral", "quaternion", "extraspecial", "product", "file")


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def prime_power(n: int) -> tuple[int, int] | None:
    """Return (p, k) with n = p^k, k >= 1, or None."""
    if n < 2:
        return None
    p = next(d for d in range(2, n + 1) if n % d == 0)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return (p, k) if n == 1 else None


@dataclass(frozen=True)
class GroupSpec:
    family: str
    params: tuple = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise CatalogError(f"unknown family {self.family!r}")

    @property
    def order(self) -> int | None:
        f, a = self.family, self.params
        if f == "cyclic" or f in ("dihedral", "semidihedral", "quaternion"):
            return a[0]
        if f == "elemab":
            return a[0] ** a[1]
        if f == "extraspecial":
            return a[0] ** 3
        if f == "product":
            out = 1
            for s in a:
                out *= s.order
            return out
        return None

    @property
    def prime(self) -> int | None:
        f, a = self.family, self.params
        if f == "elemab" or f == "extraspecial":
            return a[0]
        if f == "product":
            return a[0].prime
        if f == "file":
            return None
        pk = prime_power(a[0])
        return pk[0] if pk else None

    def __str__(self):
        if self.family == "product":
            return "product:" + ",".join(str(s) for s in self.params)
        return f"{self.family}:" + ",".join(str(x) for x in self.params)


def parse_group_spec(text: str) -> GroupSpec:
    """Parse ``family:params`` strings such as ``dihedral:16`` or ``product:dihedral:8,cyclic:2``."""
    text = text.strip()
    family, sep, rest = text.partition(":")
    if not sep:
        raise CatalogError(f"group spec {text!r} lacks ':'")
    family = {"elem-abelian": "elemab", "elementary-abelian": "elemab", "direct-product": "product"}.get(family, family)
    if family == "file":
        return GroupSpec("file", (rest,))
    if family == "product":
        chunks: list[str] = []
        for tok in rest.split(","):
            if ":" in tok or not chunks:
                chunks.append(tok)
            else:
                chunks[-1] += "," + tok
        if len(chunks) < 2:
            raise CatalogError("a product needs at least two factors")
        return GroupSpec("product", tuple(parse_group_spec(c) for c in chunks))
    if family == "extraspecial":
        parts = rest.split(",")
        if len(parts) != 2 or parts[1] not in ("p", "p2"):
            raise CatalogError("extraspecial takes 'p,p' or 'p,p2'")
        return GroupSpec("extraspecial", (_int(parts[0]), parts[1]))
    return GroupSpec(family, tuple(_int(x) for x in rest.split(",")))


def _int(s: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise CatalogError(f"bad integer parameter {s!r}") from None


def _names(k: int) -> list[str]:
    return list("abcdefghijklmnopqrstuvwxyz"[:k]) if k <= 26 else [f"x{i}" for i in range(k)]


def catalog_group(spec: GroupSpec | str) -> FinitePresentation:
    """Fixed presentation for a catalog family.

    * ``cyclic:n``          <a | a^n>
    * ``elemab:p,r``        <a,b,... | x^p, [x,y]>
    * ``dihedral:2^n``      <a,b | a^(2^(n-1)), b^2, (ab)^2>
    * ``semidihedral:2^n``  <a,b | a^(2^(n-1)), b^2, a^b a^(1-2^(n-2))>
    * ``quaternion:2^n``    <a,b | a^(2^(n-1)), b^2 a^(-2^(n-2)), a^b a>
    * ``extraspecial:p,p``  <a,b,c | a^p, b^p, c^p, [a,b]c^-1, [a,c], [b,c]>
    * ``extraspecial:p,p2`` <a,b | a^(p^2), b^p, [a,b]a^-p>
    * ``product:...``       disjoint union plus all cross commutators
    """
    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    f, a = spec.family, spec.params
    a_, b_, c_ = Word.gen(0), Word.gen(1), Word.gen(2)
    if f == "cyclic":
        (n,) = a
        if prime_power(n) is None:
            raise CatalogError(f"cyclic order {n} is not a prime power")
        return FinitePresentation(("a",), (a_ ** n,))
    if f == "elemab":
        p, r = a
        if not is_prime(p) or r < 1:
            raise CatalogError("elemab needs a prime p and rank >= 1")
        gens = [Word.gen(i) for i in range(r)]
        rels = [g ** p for g in gens]
        rels += [comm(gens[i], gens[j]) for i in range(r) for j in range(i + 1, r)]
        return FinitePresentation(tuple(_names(r)), tuple(rels))
    if f in ("dihedral", "semidihedral", "quaternion"):
        (n,) = a
        pk = prime_power(n)
        least = 16 if f == "semidihedral" else 8
        if pk is None or pk[0] != 2 or n < least:
            raise CatalogError(f"{f} order must be a power of 2, at least {least}")
        half = n // 2
        if f == "dihedral":
            rels = (a_ ** half, b_ ** 2, (a_ * b_) ** 2)
        elif f == "semidihedral":
            rels = (a_ ** half, b_ ** 2, a_.conj(b_) * a_ ** (1 - half // 2))
        else:
            rels = (a_ ** half, b_ ** 2 * a_ ** (-(half // 2)), a_.conj(b_) * a_)
        return FinitePresentation(("a", "b"), rels)
    if f == "extraspecial":
        p, kind = a
        if not is_prime(p) or p == 2:
            raise CatalogError("extraspecial family needs an odd prime")
        if kind == "p":
            rels = (a_ ** p, b_ ** p, c_ ** p, comm(a_, b_) * c_ ** -1, comm(a_, c_), comm(b_, c_))
            return FinitePresentation(("a", "b", "c"), rels)
        return FinitePresentation(("a", "b"), (a_ ** (p * p), b_ ** p, comm(a_, b_) * a_ ** -p))
    if f == "product":
        factors = [catalog_group(s) for s in a]
        primes = {s.prime for s in a}
        if len(primes) != 1 or None in primes:
            raise CatalogError("product factors must be p-groups for one prime")
        return direct_product(factors)
    if f == "file":
        return parse_presentation(Path(a[0]).read_text())
    raise CatalogError(f"unknown family {f!r}")


def direct_product(factors: list[FinitePresentation]) -> FinitePresentation:
    names: list[str] = []
    rels: list[Word] = []
    blocks: list[range] = []
    for j, pres in enumerate(factors, start=1):
        off = len(names)
        names += [f"{n}{j}" for n in pres.names]
        rels += [r.shift(off) for r in pres.relators]
        blocks.append(range(off, off + pres.ngens))
    for i, bi in enumerate(blocks):
        for bj in blocks[i + 1:]:
            rels += [comm(Word.gen(x), Word.gen(y)) for x in bi for y in bj]
    return FinitePresentation(tuple(names), tuple(rels))
