"""Exact word algebra in finitely generated free groups.

Words are stored freely reduced, in run-length block form: a sequence of
(generator index, nonzero exponent) pairs in which adjacent blocks carry
distinct generators.  The empty sequence is the identity.  Everything here
is immutable and pure, so values can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

ALPHABET = "abcdefghijklmnopqrstuvwxyz"


def _merge_blocks(letters: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    """Stack-merge a block sequence into freely reduced form."""
    stack: list[list[int]] = []
    for gen, exp in letters:
        if exp == 0:
            continue
        if stack and stack[-1][0] == gen:
            stack[-1][1] += exp
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([gen, exp])
    return tuple((g, e) for g, e in stack)


@dataclass(frozen=True)
class Word:
    """Freely reduced word over generators 0..rank-1."""

    blocks: tuple[tuple[int, int], ...]
    rank: int

    def __post_init__(self) -> None:
        prev = -1
        for gen, exp in self.blocks:
            if not 0 <= gen < self.rank:
                raise ValueError(f"generator index {gen} out of range for rank {self.rank}")
            if exp == 0:
                raise ValueError("zero exponent block in reduced word")
            if gen == prev:
                raise ValueError("adjacent blocks share a generator; word is not reduced")
            prev = gen

    @property
    def is_identity(self) -> bool:
        return not self.blocks

    def __len__(self) -> int:
        """Letter length of the reduced word."""
        return sum(abs(e) for _, e in self.blocks)

    def __mul__(self, other: "Word") -> "Word":
        if self.rank != other.rank:
            raise ValueError(f"rank mismatch: {self.rank} != {other.rank}")
        return Word(_merge_blocks(self.blocks + other.blocks), self.rank)

    def __invert__(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.blocks)), self.rank)

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return (~self) ** (-n)
        result = identity(self.rank)
        for _ in range(n):
            result = result * self
        return result

    def __str__(self) -> str:
        return format_word(self)

    def letters(self) -> list[int]:
        """Flatten to signed letters: generator g as g+1, its inverse as -(g+1)."""
        out: list[int] = []
        for g, e in self.blocks:
            step = g + 1 if e > 0 else -(g + 1)
            out.extend([step] * abs(e))
        return out


def identity(rank: int) -> Word:
    return Word((), rank)


def generator(gen: int, rank: int, exp: int = 1) -> Word:
    if exp == 0:
        return identity(rank)
    return Word(((gen, exp),), rank)


def reduce(letters: Sequence[tuple[int, int]], rank: int) -> Word:
    """Freely reduce an arbitrary (generator, exponent) sequence."""
    for gen, _ in letters:
        if not 0 <= gen < rank:
            raise ValueError(f"generator index {gen} out of range for rank {rank}")
    return Word(_merge_blocks(letters), rank)


def multiply(u: Word, v: Word) -> Word:
    return u * v


def invert(u: Word) -> Word:
    return ~u


def conjugate(u: Word, g: Word) -> Word:
    """g u g^-1."""
    return g * u * ~g


def commutator(u: Word, v: Word) -> Word:
    """[u, v] = u v u^-1 v^-1."""
    return u * v * ~u * ~v


def exponent_sums(w: Word) -> tuple[int, ...]:
    """Abelianization image: total exponent of each generator."""
    sums = [0] * w.rank
    for g, e in w.blocks:
        sums[g] += e
    return tuple(sums)


def cyclic_reduce(w: Word) -> Word:
    """Shortest word in the conjugacy class of w (cyclic reduction)."""
    blocks = list(w.blocks)
    while len(blocks) >= 2 and blocks[0][0] == blocks[-1][0]:
        g = blocks[0][0]
        e = blocks[0][1] + blocks[-1][1]
        blocks = blocks[1:-1]
        if e != 0:
            # conjugating moves the tail block onto the head
            blocks = [(g, e)] + blocks
            break
    return Word(tuple(blocks), w.rank)


def cyclic_blocks(w: Word) -> tuple[tuple[int, int], ...]:
    """Canonical block form of w as a cyclic word.

    The first and last blocks are merged when they share a generator, so the
    result is reduced as a necklace; two words are conjugate iff their
    canonical cyclic blocks agree up to rotation.
    """
    r = cyclic_reduce(w)
    return r.blocks


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism of free groups, given by the images of the generators."""

    domain_rank: int
    codomain_rank: int
    images: tuple[Word, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.domain_rank:
            raise ValueError("one image word per domain generator required")
        for img in self.images:
            if img.rank != self.codomain_rank:
                raise ValueError("image word rank does not match codomain rank")

    def __call__(self, w: Word) -> Word:
        return apply_hom(self, w)


def hom(images: Sequence[Word], codomain_rank: int | None = None) -> GroupHom:
    if codomain_rank is None:
        if not images:
            raise ValueError("codomain rank required for a rank-0 domain")
        codomain_rank = images[0].rank
    return GroupHom(len(images), codomain_rank, tuple(images))


def identity_hom(rank: int) -> GroupHom:
    return GroupHom(rank, rank, tuple(generator(i, rank) for i in range(rank)))


def apply_hom(h: GroupHom, w: Word) -> Word:
    if w.rank != h.domain_rank:
        raise ValueError(f"rank mismatch: word rank {w.rank}, domain rank {h.domain_rank}")
    letters: list[tuple[int, int]] = []
    for g, e in w.blocks:
        img = h.images[g] if e > 0 else ~h.images[g]
        for _ in range(abs(e)):
            letters.extend(img.blocks)
    return reduce(letters, h.codomain_rank)


def compose(h1: GroupHom, h2: GroupHom) -> GroupHom:
    """h1 after h2: apply_hom(compose(h1, h2), w) == apply_hom(h1, apply_hom(h2, w))."""
    if h2.codomain_rank != h1.domain_rank:
        raise ValueError("codomain of second factor must match domain of first")
    return GroupHom(h2.domain_rank, h1.codomain_rank,
                    tuple(apply_hom(h1, img) for img in h2.images))


def hom_power(h: GroupHom, n: int) -> GroupHom:
    if n < 0:
        raise ValueError("hom_power requires n >= 0")
    if h.domain_rank != h.codomain_rank:
        raise ValueError("hom_power requires an endomorphism")
    result = identity_hom(h.domain_rank)
    for _ in range(n):
        result = compose(h, result)
    return result


def nielsen_schreier_rank(r: int, index: int) -> int:
    """Rank of a finite-index subgroup of a free group: 1 + index*(r - 1)."""
    if r < 1 or index < 1:
        raise ValueError("rank and index must be positive")
    return 1 + index * (r - 1)


# --- text syntax -----------------------------------------------------------
#
# Blocks are whitespace separated.  A lowercase letter names generator
# 0..25, an uppercase letter its inverse, an optional ^e carries an integer
# exponent: "a c^-1 a b" or "A^2 b".  The identity word is spelled "1".

def parse_word(text: str, rank: int | None = None,
               names: Sequence[str] | None = None) -> Word:
    """Parse the block syntax.  `names` remaps letters to generator indices;
    by default letter position in the alphabet is the index."""
    tokens = text.split()
    if tokens == ["1"]:
        return identity(rank if rank is not None else 0)
    letters: list[tuple[int, int]] = []
    name_to_index = None
    if names is not None:
        name_to_index = {n: i for i, n in enumerate(names)}
    for tok in tokens:
        head, sep, tail = tok.partition("^")
        if len(head) != 1 or not head.isalpha():
            raise ValueError(f"bad word token {tok!r}")
        exp = 1
        if sep:
            try:
                exp = int(tail)
            except ValueError:
                raise ValueError(f"bad exponent in token {tok!r}") from None
        letter = head.lower()
        if head.isupper():
            exp = -exp
        if name_to_index is not None:
            if letter not in name_to_index:
                raise ValueError(f"unknown generator {letter!r}")
            gen = name_to_index[letter]
        else:
            gen = ALPHABET.index(letter)
        letters.append((gen, exp))
    if rank is None:
        rank = max(g for g, _ in letters) + 1 if letters else 0
    return reduce(letters, rank)


def format_word(w: Word, names: Sequence[str] | None = None) -> str:
    if w.is_identity:
        return "1"
    parts = []
    for g, e in w.blocks:
        name = names[g] if names is not None else ALPHABET[g]
        parts.append(name if e == 1 else f"{name}^{e}")
    return " ".join(parts)
