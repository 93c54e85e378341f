"""Free-group words, finite presentations and homomorphic evaluation.

Words are freely reduced sequences of signed generators; generators are
1-based integer indices internally, names exist only in presentations and
the parser.  Everything here is an immutable value, safe to share.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

MAX_WORD_LETTERS = 1_000_000


class ParseError(ValueError):
    """Malformed word or presentation text, unknown name, or oversized exponent."""


def _reduce(letters):
    stack = []
    for gen, sign in letters:
        if stack and stack[-1][0] == gen and stack[-1][1] == -sign:
            stack.pop()
        else:
            stack.append((gen, sign))
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    """A freely reduced word; ``letters`` is a tuple of (generator, sign) pairs."""

    letters: tuple = ()

    @classmethod
    def from_letters(cls, letters: Iterable) -> "Word":
        pairs = []
        for gen, sign in letters:
            if not isinstance(gen, int) or gen < 1 or sign not in (1, -1):
                raise ValueError(f"bad letter ({gen}, {sign})")
            pairs.append((gen, sign))
        return cls(_reduce(pairs))

    @classmethod
    def generator(cls, index: int) -> "Word":
        return cls(((index, 1),))

    @classmethod
    def identity(cls) -> "Word":
        return cls(())

    def __mul__(self, other: "Word") -> "Word":
        return Word(_reduce(self.letters + other.letters))

    def inverse(self) -> "Word":
        return Word(tuple((g, -s) for g, s in reversed(self.letters)))

    __invert__ = inverse

    def __pow__(self, n: int) -> "Word":
        if abs(n) * len(self.letters) > MAX_WORD_LETTERS:
            raise ValueError("word power too large")
        base = self if n >= 0 else self.inverse()
        result = Word()
        for _ in range(abs(n)):
            result = result * base
        return result

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    @property
    def max_index(self) -> int:
        return max((g for g, _ in self.letters), default=0)


def commutator(u: Word, v: Word) -> Word:
    return u * v * u.inverse() * v.inverse()


def abelianize(u: Word, n: int) -> list:
    """Exponent-sum vector of length n; a monoid morphism on words."""
    vec = [0] * n
    for g, s in u.letters:
        if g > n:
            raise ValueError(f"generator {g} exceeds rank {n}")
        vec[g - 1] += s
    return vec


def random_word(rank: int, length: int, seed: int) -> Word:
    """Uniform reduced word of exactly the requested length.

    Letters are drawn uniformly from the 2*rank signed generators and a
    draw cancelling the previous letter is rejected and redrawn, so the
    result is reduced and deterministic for a fixed seed.
    """
    if rank < 1:
        raise ValueError("rank must be >= 1")
    rng = random.Random(seed)
    letters = []
    while len(letters) < length:
        idx = rng.randrange(2 * rank)
        gen, sign = idx // 2 + 1, (1 if idx % 2 == 0 else -1)
        if letters and letters[-1] == (gen, -sign):
            continue
        letters.append((gen, sign))
    return Word(tuple(letters))


# ---------------------------------------------------------------------------
# Parsing and formatting
#
# WORD := TERM+ ; TERM := ATOM ("^" INT)? ;
# ATOM := NAME | "(" WORD ")" | "[" WORD "," WORD "]"
# Negative exponents are inverses; [u,v] = u v u^-1 v^-1.

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_]\w*)|(?P<int>-?\d+)|(?P<sym>[\^()\[\],]))")
_MAX_EXPONENT = 1_000_000


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos:].strip()[0]!r}")
            break
        if m.lastgroup == "name":
            tokens.append(("name", m.group("name")))
        elif m.lastgroup == "int":
            tokens.append(("int", int(m.group("int"))))
        else:
            tokens.append(("sym", m.group("sym")))
        pos = m.end()
    return tokens


def parse_word(text: str, names: Sequence[str]) -> Word:
    """Parse the word grammar above over the given generator names."""
    index = {name: i + 1 for i, name in enumerate(names)}
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def parse_atom() -> Word:
        nonlocal pos
        kind, value = peek()
        if kind == "name":
            pos += 1
            if value not in index:
                raise ParseError(f"unknown generator name {value!r}")
            return Word.generator(index[value])
        if (kind, value) == ("sym", "("):
            pos += 1
            inner = parse_sequence({")"})
            if peek() != ("sym", ")"):
                raise ParseError("expected ')'")
            pos += 1
            return inner
        if (kind, value) == ("sym", "["):
            pos += 1
            left = parse_sequence({","})
            if peek() != ("sym", ","):
                raise ParseError("expected ',' in commutator")
            pos += 1
            right = parse_sequence({"]"})
            if peek() != ("sym", "]"):
                raise ParseError("expected ']'")
            pos += 1
            return commutator(left, right)
        raise ParseError(f"unexpected token {value!r}")

    def parse_term() -> Word:
        nonlocal pos
        atom = parse_atom()
        kind, value = peek()
        if (kind, value) == ("sym", "^"):
            pos += 1
            kind, value = peek()
            if kind != "int":
                raise ParseError("expected integer exponent after '^'")
            pos += 1
            if abs(value) > _MAX_EXPONENT or abs(value) * len(atom) > MAX_WORD_LETTERS:
                raise ParseError(f"exponent {value} too large")
            return atom**value
        return atom

    def parse_sequence(stop_syms) -> Word:
        nonlocal pos
        result = Word()
        count = 0
        while pos < len(tokens):
            kind, value = peek()
            if kind == "sym" and value in stop_syms:
                break
            result = result * parse_term()
            count += 1
        if count == 0:
            raise ParseError("empty word")
        return result

    word = parse_sequence(set())
    if pos != len(tokens):
        raise ParseError(f"trailing input at token {tokens[pos]!r}")
    return word


def format_word(w: Word, names: Sequence[str]) -> str:
    """Inverse of parse_word on reduced words (identity prints as name^0)."""
    if not w.letters:
        return f"{names[0]}^0" if names else ""
    parts = []
    i = 0
    letters = w.letters
    while i < len(letters):
        gen, sign = letters[i]
        j = i
        while j < len(letters) and letters[j] == (gen, sign):
            j += 1
        exp = sign * (j - i)
        parts.append(names[gen - 1] if exp == 1 else f"{names[gen - 1]}^{exp}")
        i = j
    return " ".join(parts)


@dataclass(frozen=True)
class Presentation:
    """A finite presentation: generator names plus relator words."""

    generator_names: tuple
    relators: tuple = ()

    def __post_init__(self):
        names = tuple(self.generator_names)
        rels = tuple(self.relators)
        object.__setattr__(self, "generator_names", names)
        object.__setattr__(self, "relators", rels)
        if len(set(names)) != len(names):
            raise ValueError("generator names must be distinct")
        for rel in rels:
            if rel.max_index > len(names):
                raise ValueError(f"relator {rel} uses generator beyond rank {len(names)}")

    @property
    def rank(self) -> int:
        return len(self.generator_names)

    @classmethod
    def free(cls, names: Sequence[str]) -> "Presentation":
        return cls(tuple(names), ())

    @classmethod
    def from_text(cls, text: str) -> "Presentation":
        """Line format: a `gens: a b c` line then `rel: <WORD>` lines; # comments."""
        names = None
        relators = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("gens:"):
                if names is not None:
                    raise ParseError(f"line {lineno}: duplicate gens line")
                names = tuple(line[len("gens:"):].split())
            elif line.startswith("rel:"):
                if names is None:
                    raise ParseError(f"line {lineno}: rel before gens")
                relators.append(parse_word(line[len("rel:"):], names))
            else:
                raise ParseError(f"line {lineno}: expected 'gens:' or 'rel:'")
        if names is None:
            raise ParseError("missing gens line")
        return cls(names, tuple(relators))

    def to_text(self) -> str:
        lines = ["gens: " + " ".join(self.generator_names)]
        lines += [f"rel: {format_word(r, self.generator_names)}" for r in self.relators]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Permutation:
    """Bijection of {0..m-1}; images[i] = sigma(i)."""

    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(tuple(range(m)))

    @classmethod
    def from_cycles(cls, m: int, cycles: Iterable) -> "Permutation":
        """Build from disjoint cycles written with 1-based entries."""
        images = list(range(m))
        for cycle in cycles:
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                images[a - 1] = b - 1
        return cls(tuple(images))

    def __mul__(self, other: "Permutation") -> "Permutation":
        # composition: (self * other)(i) = self(other(i))
        return Permutation(tuple(self.images[other.images[i]] for i in range(len(self.images))))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list:
        """Cycle decomposition including fixed points, each cycle starting at its minimum."""
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cycle = [start]
            seen[start] = True
            nxt = self.images[start]
            while nxt != start:
                cycle.append(nxt)
                seen[nxt] = True
                nxt = self.images[nxt]
            out.append(tuple(cycle))
        return out

    def sign(self) -> int:
        return -1 if (len(self.images) - len(self.cycles())) % 2 else 1


@dataclass(frozen=True)
class GroupHom:
    """Generator images in a target group supplied by duck typing.

    Target elements must support ``*`` and ``.inverse()``; the identity
    element is provided explicitly.
    """

    images: tuple
    identity: object

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))


def evaluate_hom(u: Word, h: GroupHom):
    """Image of u under the homomorphism extending the generator images."""
    acc = h.identity
    for gen, sign in u.letters:
        if gen > len(h.images):
            raise IndexError(f"generator {gen} out of range for {len(h.images)} images")
        m = h.images[gen - 1]
        acc = acc * (m if sign == 1 else m.inverse())
    return acc


def is_surjective_to_f2(images: Sequence[Word]) -> bool:
    """Decide whether the given words generate all of the rank-2 free group.

    Builds the labeled subgroup graph (one loop per image at a basepoint),
    folds it until the labeling is an immersion, trims hanging trees away
    from the basepoint and compares with the two-petal rose.
    """
    for w in images:
        if w.max_index > 2:
            raise ValueError("images must be words in a rank-2 free group")

    parent = {}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(a, b):
        parent[find(a)] = find(b)

    def fresh():
        v = len(parent)
        parent[v] = v
        return v

    base = fresh()
    edges = set()
    for w in images:
        cur = base
        for k, (gen, sign) in enumerate(w.letters):
            nxt = base if k == len(w.letters) - 1 else fresh()
            edges.add((cur, gen, nxt) if sign == 1 else ((nxt, gen, cur)))
            cur = nxt

    # Fold: merge targets of equal-label edges leaving (or entering) one vertex.
    changed = True
    while changed:
        changed = False
        edges = {(find(u), g, find(v)) for (u, g, v) in edges}
        by_out = {}
        by_in = {}
        for u, g, v in edges:
            if (u, g) in by_out and by_out[(u, g)] != v:
                union(v, by_out[(u, g)])
                changed = True
                break
            by_out[(u, g)] = v
            if (v, g) in by_in and by_in[(v, g)] != u:
                union(u, by_in[(v, g)])
                changed = True
                break
            by_in[(v, g)] = u
    edges = {(find(u), g, find(v)) for (u, g, v) in edges}
    root = find(base)

    # Trim degree-1 vertices other than the basepoint.
    while True:
        degree = {}
        for u, g, v in edges:
            degree[u] = degree.get(u, 0) + 1
            degree[v] = degree.get(v, 0) + 1
        leaves = {v for v, d in degree.items() if d <= 1 and v != root}
        if not leaves:
            break
        edges = {(u, g, v) for (u, g, v) in edges if u not in leaves and v not in leaves}

    vertices = {root} | {u for u, _, _ in edges} | {v for _, _, v in edges}
    if vertices != {root} or len(edges) != 2:
        return False
    return {g for _, g, _ in edges} == {1, 2} and all(u == v for u, _, v in edges)
