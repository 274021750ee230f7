"""Surface group presentations, the bundled genus-2 twist system, and curves.

The twist system ships as a data file listing generator images for five
Dehn twists along a chain of curves; `standard_twists_genus2` loads it and
re-verifies the convention-independent invariants (relator preservation,
transvection homology action, exact inverse pairing) before returning.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .freegroup import (ALPHABET, GroupHom, Word, apply_hom, commutator, compose,
                        cyclic_reduce, exponent_sums, generator, hom, identity_hom,
                        parse_word)
from .homology import as_matrix, transvection


@dataclass(frozen=True)
class SurfaceGroup:
    """One-relator presentation of a closed orientable surface group."""

    genus: int
    names: tuple[str, ...]
    relator: Word


def standard_surface_group(g: int) -> SurfaceGroup:
    """<a1, b1, ..., ag, bg | [a1,b1]...[ag,bg]>, named a, b, c, d, ... ."""
    if g < 1:
        raise ValueError("genus must be >= 1")
    if 2 * g > len(ALPHABET):
        raise ValueError("genus too large for letter names")
    rank = 2 * g
    relator = Word((), rank)
    for i in range(g):
        relator = relator * commutator(generator(2 * i, rank), generator(2 * i + 1, rank))
    return SurfaceGroup(g, tuple(ALPHABET[:rank]), relator)


@dataclass(frozen=True)
class CurveSpec:
    """A labelled free-homotopy class of a curve, with its homology class."""

    name: str
    word: Word
    homology: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.homology != exponent_sums(self.word):
            raise ValueError("homology class must equal the word's exponent sums")


def curve(name: str, word: Word) -> CurveSpec:
    return CurveSpec(name, word, exponent_sums(word))


@dataclass(frozen=True)
class TwistAutomorphism:
    """Dehn twist with its curve data and an exact inverse."""

    name: str
    curve: CurveSpec
    hom: GroupHom
    inverse_hom: GroupHom
    direction: int = 1


def is_conjugate_in_free(u: Word, v: Word) -> bool:
    """Whether u and v are conjugate in the free group (cyclic rotations)."""
    if u.rank != v.rank:
        raise ValueError("rank mismatch")
    cu = cyclic_reduce(u).blocks
    cv = cyclic_reduce(v).blocks
    if len(cu) != len(cv):
        return False
    if not cu:
        return True
    return any(cv[i:] + cv[:i] == cu for i in range(len(cv)))


def preserves_relator(h: GroupHom, relator: Word) -> bool:
    img = apply_hom(h, relator)
    return is_conjugate_in_free(img, relator) or is_conjugate_in_free(img, ~relator)


def _hom_matrix(h: GroupHom):
    cols = [exponent_sums(img) for img in h.images]
    return as_matrix([[cols[j][i] for j in range(len(cols))] for i in range(h.domain_rank)])


def _validate_twist(tw: TwistAutomorphism, relator: Word) -> None:
    if not preserves_relator(tw.hom, relator):
        raise ValueError(f"twist {tw.name}: relator not preserved up to conjugacy")
    if _hom_matrix(tw.hom) != transvection(tw.curve.homology).matrix:
        raise ValueError(f"twist {tw.name}: homology action is not the transvection")
    rank = tw.hom.domain_rank
    both = compose(tw.hom, tw.inverse_hom), compose(tw.inverse_hom, tw.hom)
    for comp in both:
        if comp.images != identity_hom(rank).images:
            raise ValueError(f"twist {tw.name}: inverse does not compose to the identity")


def _parse_twist_file(text: str, rank: int = 4) -> dict[str, TwistAutomorphism]:
    twists: dict[str, TwistAutomorphism] = {}
    name = None
    cls: tuple[int, ...] | None = None
    images: dict[int, Word] = {}
    inverses: dict[int, Word] = {}

    def flush():
        if name is None:
            return
        if cls is None:
            raise ValueError(f"twist {name}: missing class line")
        imgs = tuple(images.get(i, generator(i, rank)) for i in range(rank))
        invs = tuple(inverses.get(i, generator(i, rank)) for i in range(rank))
        # the stated class is the curve's homology; a representative word is
        # not part of the configuration, so the curve spec carries the class
        # via a word with those exponent sums
        word_letters = [(i, c) for i, c in enumerate(cls) if c]
        cword = Word(tuple(word_letters), rank)
        twists[name] = TwistAutomorphism(
            name, CurveSpec(name, cword, cls), hom(list(imgs), rank), hom(list(invs), rank))

    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("twist "):
            flush()
            name = line.split(None, 1)[1].strip()
            cls = None
            images = {}
            inverses = {}
        elif line.startswith("class "):
            cls = tuple(int(x) for x in line.split()[1:])
        elif line.startswith("image ") or line.startswith("inverse "):
            kind, rest = line.split(None, 1)
            gen_name, _, word_text = (part.strip() for part in rest.partition(":"))
            idx = ALPHABET.index(gen_name)
            target = images if kind == "image" else inverses
            target[idx] = parse_word(word_text, rank=rank)
        else:
            raise ValueError(f"bad twist configuration line: {line!r}")
    flush()
    return twists


@lru_cache(maxsize=None)
def standard_twists_genus2(path: str | None = None) -> dict[str, TwistAutomorphism]:
    """The bundled five-twist chain system, validated on load."""
    if path is None:
        text = resources.files("corank.data").joinpath("twist_system_genus2.txt").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    twists = _parse_twist_file(text)
    relator = standard_surface_group(2).relator
    for tw in twists.values():
        _validate_twist(tw, relator)
    return twists


TwistWord = tuple[tuple[str, int], ...]

# the handle-curve recipe: image of the separating commutator curve under
# this composition defines the second attaching curve
C2_TWIST_FORMULA = "alpha^-1 (alpha epsilon gamma^2 beta^-1 delta^-1)^3"

_TOKEN = re.compile(r"\(|\)|[A-Za-z_]+|\^-?\d+|\S")


def parse_twist_word(text: str) -> TwistWord:
    """Parse names with integer powers and parenthesized groups into a flat
    twist word, e.g. "alpha^-1 (alpha gamma^2)^3"."""
    tokens = _TOKEN.findall(text)
    pos = 0

    def parse_group(depth: int) -> list[tuple[str, int]]:
        nonlocal pos
        out: list[tuple[str, int]] = []
        while pos < len(tokens):
            tok = tokens[pos]
            if tok == ")":
                if depth == 0:
                    raise ValueError("unbalanced ')'")
                return out
            pos += 1
            if tok == "(":
                inner = parse_group(depth + 1)
                if pos >= len(tokens) or tokens[pos] != ")":
                    raise ValueError("unbalanced '('")
                pos += 1
                exp = 1
                if pos < len(tokens) and tokens[pos].startswith("^"):
                    exp = int(tokens[pos][1:])
                    pos += 1
                piece = inner if exp >= 0 else [(n, -e) for n, e in reversed(inner)]
                out.extend(piece * abs(exp))
            elif tok.startswith("^"):
                raise ValueError("dangling exponent")
            else:
                exp = 1
                if pos < len(tokens) and tokens[pos].startswith("^"):
                    exp = int(tokens[pos][1:])
                    pos += 1
                if exp != 0:
                    out.append((tok, exp))
        return out

    result = parse_group(0)
    if pos != len(tokens):
        raise ValueError("unbalanced ')'")
    return tuple(result)


def twist_word_hom(tw: TwistWord, twists: dict[str, TwistAutomorphism] | None = None) -> GroupHom:
    """Compose the named twists right to left into one homomorphism."""
    if twists is None:
        twists = standard_twists_genus2()
    result = identity_hom(4)
    for name, exp in reversed(tw):
        if name not in twists:
            raise ValueError(f"unknown twist name {name!r}")
        t = twists[name]
        factor = t.hom if exp > 0 else t.inverse_hom
        for _ in range(abs(exp)):
            result = compose(factor, result)
    return result


def apply_twist_word(tw: TwistWord, c: CurveSpec,
                     twists: dict[str, TwistAutomorphism] | None = None) -> CurveSpec:
    """Image curve under the composed twists, homology class recomputed."""
    h = twist_word_hom(tw, twists)
    image = apply_hom(h, c.word)
    return curve(c.name + "'", image)


def standard_separating_curve() -> CurveSpec:
    """The separating curve bounding the first handle: the commutator [a, b]."""
    rank = 4
    return curve("C1", commutator(generator(0, rank), generator(1, rank)))


@lru_cache(maxsize=None)
def attaching_word(path: str | None = None) -> Word:
    """The bundled attaching word for the second handle, over a, b, c, d.

    The transcription must already be freely reduced; loading fails otherwise.
    """
    if path is None:
        text = resources.files("corank.data").joinpath("attaching_word.txt").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    tokens = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            tokens.append(line)
    joined = " ".join(tokens)
    w = parse_word(joined, rank=4)
    flat = " ".join(joined.split())
    from .freegroup import format_word
    if format_word(w) != flat:
        raise ValueError("bundled attaching word is not freely reduced as written")
    return w
