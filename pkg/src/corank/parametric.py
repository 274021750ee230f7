"""Parametric power substitution and its exact case analysis.

A word over four generators a,b,c,d is mapped into the free group on x,y by
a -> x^m, b -> x^n, c -> y^k, d -> y^j.  Block exponents then become integer
affine forms in the parameter vector (m, n, k, j).  `parametric_reduce`
decides, by a finite case split on which exponents vanish, exactly for which
integer parameters the substituted word is trivial.

Constraint sets pair affine equalities (= 0) with inequalities (!= 0).
Reasoning about them stays deliberately elementary: equalities are solved
exactly over the integers (Smith normal form), inequalities are only checked
against that solution lattice.  No general Presburger machinery.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterator, Sequence

from .freegroup import Word, reduce
from .homology import as_matrix, mat_vec, smith_with_transforms

PARAMS = ("m", "n", "k", "j")
NPARAMS = 4

# generator -> (target generator in F(x, y), parameter index)
_SUBSTITUTION = {0: (0, 0), 1: (0, 1), 2: (1, 2), 3: (1, 3)}
TARGET_NAMES = ("x", "y")


@dataclass(frozen=True)
class LinearForm:
    """Integer affine form c . (m, n, k, j) + const."""

    coeffs: tuple[int, int, int, int]
    const: int = 0

    def __add__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
                          self.const + other.const)

    def __neg__(self) -> "LinearForm":
        return LinearForm(tuple(-a for a in self.coeffs), -self.const)

    def scale(self, c: int) -> "LinearForm":
        return LinearForm(tuple(c * a for a in self.coeffs), c * self.const)

    @property
    def is_zero(self) -> bool:
        return self.const == 0 and all(a == 0 for a in self.coeffs)

    def evaluate(self, params: Sequence[int]) -> int:
        return sum(a * p for a, p in zip(self.coeffs, params)) + self.const

    def normalized(self) -> "LinearForm":
        """Divide by the content and make the leading nonzero entry positive."""
        entries = list(self.coeffs) + [self.const]
        g = 0
        for x in entries:
            g = gcd(g, x)
        if g == 0:
            return self
        lead = next(x for x in entries if x != 0)
        if lead < 0:
            g = -g
        return LinearForm(tuple(a // g for a in self.coeffs), self.const // g)

    def __str__(self) -> str:
        parts = []
        for name, c in zip(PARAMS, self.coeffs):
            if c == 0:
                continue
            sign = "-" if c < 0 else ("+" if parts else "")
            mag = abs(c)
            parts.append(f"{sign}{'' if mag == 1 else mag}{name}")
        if self.const or not parts:
            sign = "-" if self.const < 0 else ("+" if parts else "")
            parts.append(f"{sign}{abs(self.const)}")
        return "".join(parts)


def form(m: int = 0, n: int = 0, k: int = 0, j: int = 0, const: int = 0) -> LinearForm:
    return LinearForm((m, n, k, j), const)


_UNIT_FORMS = tuple(LinearForm(tuple(1 if i == p else 0 for i in range(NPARAMS)))
                    for p in range(NPARAMS))


def _merge_parametric(blocks: Sequence[tuple[int, LinearForm]]) -> tuple[tuple[int, LinearForm], ...]:
    stack: list[tuple[int, LinearForm]] = []
    for tgt, f in blocks:
        if f.is_zero:
            continue
        if stack and stack[-1][0] == tgt:
            merged = stack[-1][1] + f
            stack.pop()
            if not merged.is_zero:
                stack.append((tgt, merged))
        else:
            stack.append((tgt, f))
    return tuple(stack)


@dataclass(frozen=True)
class ParametricWord:
    """Word in F(x, y) whose block exponents are affine forms in (m, n, k, j)."""

    blocks: tuple[tuple[int, LinearForm], ...]

    def __post_init__(self) -> None:
        prev = -1
        for tgt, f in self.blocks:
            if tgt not in (0, 1):
                raise ValueError("target generator must be x (0) or y (1)")
            if f.is_zero:
                raise ValueError("identically zero exponent block")
            if tgt == prev:
                raise ValueError("adjacent blocks share a target generator")
            prev = tgt

    def __len__(self) -> int:
        return len(self.blocks)

    def __str__(self) -> str:
        if not self.blocks:
            return "1"
        return " ".join(f"{TARGET_NAMES[t]}^({f})" for t, f in self.blocks)


def parametric_word(blocks: Sequence[tuple[int, LinearForm]]) -> ParametricWord:
    return ParametricWord(_merge_parametric(blocks))


def substitute_powers(w: Word) -> ParametricWord:
    """Image of a rank-4 word under a -> x^m, b -> x^n, c -> y^k, d -> y^j."""
    if w.rank != 4:
        raise ValueError("substitute_powers expects a word over four generators")
    blocks = []
    for g, e in w.blocks:
        tgt, p = _SUBSTITUTION[g]
        blocks.append((tgt, _UNIT_FORMS[p].scale(e)))
    return parametric_word(blocks)


def numeric_substitute(pw: ParametricWord, params: Sequence[int]) -> Word:
    """Evaluate every exponent form and freely reduce in F(x, y)."""
    letters = [(tgt, f.evaluate(params)) for tgt, f in pw.blocks]
    return reduce(letters, 2)


# --- integer solution lattices ----------------------------------------------


@dataclass(frozen=True)
class Lattice:
    """Integer solutions of an affine system, as origin + span of basis."""

    origin: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def point(self, z: Sequence[int]) -> tuple[int, ...]:
        coords = list(self.origin)
        for zi, b in zip(z, self.basis):
            for i in range(len(coords)):
                coords[i] += zi * b[i]
        return tuple(coords)


@lru_cache(maxsize=None)
def _solve(eqs: tuple[LinearForm, ...]) -> Lattice | None:
    """Integer solution lattice of {f = 0 for f in eqs}, or None if empty."""
    a = as_matrix([f.coeffs for f in eqs])
    b = [-f.const for f in eqs]
    u, d, v = smith_with_transforms(a)
    ub = mat_vec(u, b)
    rank = sum(1 for i in range(min(len(d), NPARAMS)) if d[i][i] != 0)
    y = [0] * NPARAMS
    for i in range(len(eqs)):
        di = d[i][i] if i < min(len(d), NPARAMS) else 0
        if di == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % di != 0:
                return None
            y[i] = ub[i] // di
    origin = mat_vec(v, y)
    basis = tuple(tuple(v[i][j] for i in range(NPARAMS)) for j in range(rank, NPARAMS))
    return Lattice(origin, basis)


def _restrict(f: LinearForm, lat: Lattice) -> tuple[tuple[int, ...], int]:
    """Express f on lattice coordinates: (coefficients, constant)."""
    coeffs = tuple(sum(f.coeffs[i] * b[i] for i in range(NPARAMS)) for b in lat.basis)
    const = f.evaluate(lat.origin)
    return coeffs, const


def _restricted_is_zero(res: tuple[tuple[int, ...], int]) -> bool:
    coeffs, const = res
    return const == 0 and all(c == 0 for c in coeffs)


def _restricted_never_zero(res: tuple[tuple[int, ...], int]) -> bool:
    """No integer point of the lattice makes the restricted form vanish."""
    coeffs, const = res
    g = 0
    for c in coeffs:
        g = gcd(g, c)
    if g == 0:
        return const != 0
    return const % g != 0


def _parallel(r1: tuple[tuple[int, ...], int], r2: tuple[tuple[int, ...], int]) -> bool:
    """Whether two restricted forms are nonzero rational multiples of each other."""
    v1 = list(r1[0]) + [r1[1]]
    v2 = list(r2[0]) + [r2[1]]
    if all(x == 0 for x in v1) or all(x == 0 for x in v2):
        return False
    return all(v1[i] * v2[j] == v1[j] * v2[i]
               for i in range(len(v1)) for j in range(i + 1, len(v1)))


@dataclass(frozen=True)
class ConstraintSet:
    """Affine equalities (= 0) and inequalities (!= 0) on (m, n, k, j)."""

    equalities: tuple[LinearForm, ...] = ()
    inequalities: tuple[LinearForm, ...] = ()

    def lattice(self) -> Lattice | None:
        if not self.equalities:
            return _FULL_LATTICE
        return _solve(self.equalities)

    def with_equality(self, f: LinearForm) -> "ConstraintSet":
        nf = f.normalized()
        if nf in self.equalities:
            return self
        return ConstraintSet(self.equalities + (nf,), self.inequalities)

    def with_inequality(self, f: LinearForm) -> "ConstraintSet":
        nf = f.normalized()
        if nf in self.inequalities:
            return self
        return ConstraintSet(self.equalities, self.inequalities + (nf,))

    def is_empty(self) -> bool:
        """Inconsistent: no lattice point, or an inequality forced to zero."""
        lat = self.lattice()
        if lat is None:
            return True
        return any(_restricted_is_zero(_restrict(f, lat)) for f in self.inequalities)

    def forces_zero(self, f: LinearForm) -> bool:
        lat = self.lattice()
        return lat is not None and _restricted_is_zero(_restrict(f, lat))

    def forces_nonzero(self, f: LinearForm) -> bool:
        """f cannot vanish on integer points satisfying the constraint set.

        Detected when f = 0 has no integer solution on the equality lattice,
        or when f is a nonzero rational multiple of an asserted inequality
        there; no reasoning across several inequalities is attempted.
        """
        lat = self.lattice()
        if lat is None:
            return True
        res = _restrict(f, lat)
        if _restricted_never_zero(res):
            return True
        return any(_parallel(res, _restrict(i, lat)) for i in self.inequalities)

    def satisfies(self, params: Sequence[int]) -> bool:
        return (all(f.evaluate(params) == 0 for f in self.equalities)
                and all(f.evaluate(params) != 0 for f in self.inequalities))

    def points_in_box(self, bound: int) -> Iterator[tuple[int, ...]]:
        """All satisfying integer points with every coordinate in [-bound, bound]."""
        lat = self.lattice()
        if lat is None:
            return
        for p in _box_points(lat, bound):
            if all(f.evaluate(p) != 0 for f in self.inequalities):
                yield p

    def __str__(self) -> str:
        parts = [f"{f}=0" for f in self.equalities]
        parts += [f"{f}!=0" for f in self.inequalities]
        return "{" + ", ".join(parts) + "}" if parts else "{}"

    def to_json(self) -> dict:
        return {
            "equalities": [str(f) for f in self.equalities],
            "inequalities": [str(f) for f in self.inequalities],
        }


_FULL_LATTICE = Lattice((0,) * NPARAMS,
                        tuple(tuple(1 if i == p else 0 for i in range(NPARAMS))
                              for p in range(NPARAMS)))


def _box_points(lat: Lattice, bound: int) -> Iterator[tuple[int, ...]]:
    """Lattice points inside the coordinate box, in lexicographic order."""
    if lat == _FULL_LATTICE:
        yield from itertools.product(range(-bound, bound + 1), repeat=NPARAMS)
        return
    if lat.dim == 0:
        if all(abs(x) <= bound for x in lat.origin):
            yield lat.origin
        return
    # bound each lattice coordinate crudely and filter; boxes here are small
    scale = max(1, max(abs(x) for b in lat.basis for x in b))
    shift = max(abs(x) for x in lat.origin)
    z_bound = bound * lat.dim * scale + shift
    pts = []
    for z in itertools.product(range(-z_bound, z_bound + 1), repeat=lat.dim):
        p = lat.point(z)
        if all(abs(x) <= bound for x in p):
            pts.append(p)
    yield from sorted(set(pts))


# --- the case analysis -------------------------------------------------------


@dataclass(frozen=True)
class ReductionLeaf:
    """One case of the analysis: a parameter region plus the residual word."""

    status: str  # "SUCCESS" (word trivial on the region) or "FAILURE"
    constraints: ConstraintSet
    residual: ParametricWord

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "constraints": self.constraints.to_json(),
            "residual": str(self.residual),
        }


def _remove_block(blocks: tuple[tuple[int, LinearForm], ...], idx: int
                  ) -> tuple[tuple[int, LinearForm], ...]:
    return _merge_parametric(blocks[:idx] + blocks[idx + 1:])


def parametric_reduce(pw: ParametricWord,
                      ctx: ConstraintSet = ConstraintSet()) -> tuple[ReductionLeaf, ...]:
    """Complete case split of the triviality question for a parametric word.

    Scans blocks left to right.  A block whose exponent cannot vanish under
    the current constraints is skipped; a block whose exponent vanishes
    identically is deleted (merging its neighbours); otherwise the analysis
    branches on exponent = 0 versus exponent != 0.  Leaves are emitted in
    depth-first order with the = 0 branch explored first, and their
    constraint regions partition the region described by `ctx`.
    """
    if ctx.is_empty():
        raise ValueError("inconsistent constraint context")
    leaves: list[ReductionLeaf] = []
    _reduce_into(pw.blocks, ctx, 0, leaves)
    return tuple(leaves)


def _reduce_into(blocks: tuple[tuple[int, LinearForm], ...], ctx: ConstraintSet,
                 start: int, out: list[ReductionLeaf]) -> None:
    idx = start
    while idx < len(blocks):
        f = blocks[idx][1]
        if ctx.forces_zero(f):
            blocks = _remove_block(blocks, idx)
            idx = 0
            continue
        if ctx.forces_nonzero(f):
            idx += 1
            continue
        # vanishing branch first, then the generic branch
        _reduce_into(_remove_block(blocks, idx), ctx.with_equality(f), 0, out)
        ctx = ctx.with_inequality(f)
        idx += 1
    status = "SUCCESS" if not blocks else "FAILURE"
    out.append(ReductionLeaf(status, ctx, ParametricWord(blocks)))
