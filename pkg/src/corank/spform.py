"""Quadratic forms on H_1(surface; GF(2)) and twist obstruction certificates.

A form satisfies w(a+b) = w(a) + w(b) + a.b for the mod-2 intersection
pairing, so it is determined by its values on the symplectic basis
a1,b1,...,ag,bg.  Psi is the set of forms with Arf invariant zero, in
lexicographic order of their basis-value strings.  Functions Psi -> GF(2)
are stored extensionally as truth tables; the sigma invariant of a word in
separating twists is a sum of bar(a)*bar(b) tables, and the word extends
over no handlebody when sigma is the constant function 1.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Sequence

Bits = tuple[int, ...]

PSI_ORDERING = "lex-v1"
SCHEMA_VERSION = 1


def bits(text: str) -> Bits:
    if not text or any(ch not in "01" for ch in text):
        raise ValueError(f"bad bit string {text!r}")
    return tuple(int(ch) for ch in text)


def bits_str(v: Bits) -> str:
    return "".join(str(b) for b in v)


def mod2_pairing(u: Bits, v: Bits) -> int:
    if len(u) != len(v) or len(u) % 2 != 0:
        raise ValueError("classes must share an even length")
    total = 0
    for i in range(len(u) // 2):
        total += u[2 * i] * v[2 * i + 1] + u[2 * i + 1] * v[2 * i]
    return total % 2


def add_classes(u: Bits, v: Bits) -> Bits:
    return tuple((x + y) % 2 for x, y in zip(u, v))


@dataclass(frozen=True)
class SpForm:
    """Symplectic quadratic form, stored by its basis values."""

    genus: int
    basis_values: Bits

    def __post_init__(self) -> None:
        if len(self.basis_values) != 2 * self.genus:
            raise ValueError("need one basis value per basis vector")

    def __call__(self, v: Bits) -> int:
        return evaluate_form(self, v)


def evaluate_form(form: SpForm, v: Bits) -> int:
    """w(sum of basis vectors) via the quadratic expansion; order-free."""
    if len(v) != 2 * form.genus:
        raise ValueError("class length does not match the form's genus")
    total = sum(form.basis_values[i] for i in range(len(v)) if v[i])
    for l in range(form.genus):
        total += v[2 * l] * v[2 * l + 1]
    return total % 2


def arf(form: SpForm) -> int:
    """Sum of w(a_i) w(b_i) over the symplectic basis."""
    return sum(form.basis_values[2 * i] * form.basis_values[2 * i + 1]
               for i in range(form.genus)) % 2


@dataclass(frozen=True)
class PsiTable:
    """All Arf-zero forms of one genus, in lexicographic basis-value order."""

    genus: int
    forms: tuple[SpForm, ...]

    def index(self, form: SpForm) -> int:
        return self.forms.index(form)

    def __len__(self) -> int:
        return len(self.forms)


@lru_cache(maxsize=None)
def enumerate_psi(g: int) -> PsiTable:
    if g < 1:
        raise ValueError("genus must be >= 1")
    forms = tuple(
        form
        for values in itertools.product((0, 1), repeat=2 * g)
        if arf(form := SpForm(g, values)) == 0
    )
    return PsiTable(g, forms)


@dataclass(frozen=True)
class BooleanFunction:
    """GF(2)-valued function on Psi, as a truth table in Psi order."""

    genus: int
    table: Bits

    def __post_init__(self) -> None:
        if len(self.table) != len(enumerate_psi(self.genus)):
            raise ValueError("truth table length must equal |Psi|")

    def __add__(self, other: "BooleanFunction") -> "BooleanFunction":
        return fn_add(self, other)

    def __mul__(self, other: "BooleanFunction") -> "BooleanFunction":
        return fn_mul(self, other)

    @property
    def is_constant_one(self) -> bool:
        return all(b == 1 for b in self.table)

    @property
    def is_constant_zero(self) -> bool:
        return all(b == 0 for b in self.table)


def _check_same_table(f: BooleanFunction, g: BooleanFunction) -> None:
    if f.genus != g.genus or len(f.table) != len(g.table):
        raise ValueError("functions live on different Psi tables")


def fn_add(f: BooleanFunction, g: BooleanFunction) -> BooleanFunction:
    _check_same_table(f, g)
    return BooleanFunction(f.genus, tuple((x + y) % 2 for x, y in zip(f.table, g.table)))


def fn_mul(f: BooleanFunction, g: BooleanFunction) -> BooleanFunction:
    _check_same_table(f, g)
    return BooleanFunction(f.genus, tuple(x * y for x, y in zip(f.table, g.table)))


def fn_const(bit: int, psi: PsiTable) -> BooleanFunction:
    return BooleanFunction(psi.genus, (bit % 2,) * len(psi))


def bar(v: Bits, psi: PsiTable) -> BooleanFunction:
    """The evaluation function w -> w(v) on Psi."""
    if len(v) != 2 * psi.genus:
        raise ValueError("class length does not match the table's genus")
    return BooleanFunction(psi.genus, tuple(evaluate_form(w, v) for w in psi.forms))


@dataclass(frozen=True)
class SeparatingTwistSpec:
    """Separating curve bounding a one-holed torus spanned by classes a, b."""

    a: Bits
    b: Bits

    def __post_init__(self) -> None:
        if mod2_pairing(self.a, self.b) != 1:
            raise ValueError("spec requires intersection a.b = 1 mod 2")

    @property
    def genus(self) -> int:
        return len(self.a) // 2


TwistWord = tuple[tuple[SeparatingTwistSpec, int], ...]


def sigma_separating(spec: SeparatingTwistSpec, psi: PsiTable) -> BooleanFunction:
    """Obstruction function of a single separating twist: bar(a) * bar(b)."""
    return fn_mul(bar(spec.a, psi), bar(spec.b, psi))


def sigma_twist_word(word: Sequence[tuple[SeparatingTwistSpec, int]],
                     psi: PsiTable) -> BooleanFunction:
    """Sum of the per-twist contributions, with exponents taken mod 2."""
    total = fn_const(0, psi)
    for spec, exp in word:
        if exp % 2:
            total = fn_add(total, sigma_separating(spec, psi))
    return total


@dataclass(frozen=True)
class NonExtensionCertificate:
    """Machine-checkable record that a twist word extends over no handlebody."""

    word: TwistWord
    sigma: BooleanFunction
    verdict: bool

    def __post_init__(self) -> None:
        if self.verdict != self.sigma.is_constant_one:
            raise ValueError("verdict must equal 'sigma is constant 1'")

    @property
    def genus(self) -> int:
        return self.sigma.genus

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "non_extension_certificate",
            "genus": self.genus,
            "psi_ordering": PSI_ORDERING,
            "twist_word": [
                {"a": bits_str(spec.a), "b": bits_str(spec.b), "exponent": exp}
                for spec, exp in self.word
            ],
            "sigma": bits_str(self.sigma.table),
            "verdict": self.verdict,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def certify_non_extension(word: Sequence[tuple[SeparatingTwistSpec, int]],
                          psi: PsiTable) -> NonExtensionCertificate:
    sigma = sigma_twist_word(word, psi)
    return NonExtensionCertificate(tuple(word), sigma, sigma.is_constant_one)


def verify_certificate(data: dict) -> bool:
    """Recompute sigma from a serialized certificate and confirm its claims."""
    if data.get("psi_ordering") != PSI_ORDERING:
        raise ValueError("unknown Psi ordering tag")
    psi = enumerate_psi(data["genus"])
    word = tuple(
        (SeparatingTwistSpec(bits(e["a"]), bits(e["b"])), int(e["exponent"]))
        for e in data["twist_word"]
    )
    sigma = sigma_twist_word(word, psi)
    return (bits_str(sigma.table) == data["sigma"]
            and sigma.is_constant_one == bool(data["verdict"]))


def odd_power_certificate(cert: NonExtensionCertificate, n: int) -> NonExtensionCertificate:
    """Certificate for the n-th power of a certified word, n odd."""
    if n % 2 == 0:
        raise ValueError("only odd powers inherit the certificate")
    if not cert.verdict:
        raise ValueError("base certificate has a false verdict")
    powered = cert.word * abs(n)
    return NonExtensionCertificate(powered, cert.sigma, cert.verdict)


# --- the bundled genus-2 catalog ---------------------------------------------


def _data_text(name: str) -> str:
    return resources.files("corank.data").joinpath(name).read_text()


def _parse_catalog(text: str) -> tuple[tuple[str, SeparatingTwistSpec, str], ...]:
    entries = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, a_bits, b_bits, poly = (part.strip() for part in line.split("|"))
        entries.append((name, SeparatingTwistSpec(bits(a_bits), bits(b_bits)), poly))
    return tuple(entries)


@lru_cache(maxsize=None)
def separating_twist_catalog(path: str | None = None
                             ) -> tuple[tuple[str, SeparatingTwistSpec, str], ...]:
    """Ten bundled genus-2 specs with their published obstruction polynomials."""
    if path is None:
        text = _data_text("separating_twists.txt")
    else:
        with open(path) as fh:
            text = fh.read()
    return _parse_catalog(text)


def catalog_specs() -> tuple[SeparatingTwistSpec, ...]:
    return tuple(spec for _, spec, _ in separating_twist_catalog())


_MONOMIAL_FACTOR = re.compile(r"([ab])(\d+)|1")


def parse_sigma_polynomial(text: str, psi: PsiTable) -> BooleanFunction:
    """Evaluate a polynomial in the dual classes a1, b1, ... to a truth table.

    Syntax: monomials joined by '+'; a monomial is a juxtaposition of
    factors a<i>, b<i> (the bar functions of basis vectors) or the literal 1.
    """
    total = fn_const(0, psi)
    for monomial in text.split("+"):
        monomial = monomial.replace(" ", "")
        if not monomial:
            raise ValueError("empty monomial")
        product = fn_const(1, psi)
        pos = 0
        while pos < len(monomial):
            match = _MONOMIAL_FACTOR.match(monomial, pos)
            if match is None:
                raise ValueError(f"bad factor at {monomial[pos:]!r}")
            if match.group(1) is not None:
                letter, index = match.group(1), int(match.group(2))
                if not 1 <= index <= psi.genus:
                    raise ValueError(f"basis index {index} out of range")
                basis = [0] * (2 * psi.genus)
                basis[2 * (index - 1) + (0 if letter == "a" else 1)] = 1
                product = fn_mul(product, bar(tuple(basis), psi))
            pos = match.end()
        total = fn_add(total, product)
    return total


def constant_one_in_product_span(g: int
                                 ) -> tuple[bool, tuple[tuple[Bits, Bits], ...]]:
    """Whether constant 1 lies in the GF(2) span of {bar(a)bar(b) : a.b = 1}.

    Returns (True, witness pairs summing to 1) or (False, pairs whose
    products form a basis of the span).
    """
    psi = enumerate_psi(g)
    n = 2 * g
    classes = [v for v in itertools.product((0, 1), repeat=n) if any(v)]
    bar_masks = {v: _table_mask(bar(v, psi)) for v in classes}
    pairs = [(a, b) for a in classes for b in classes if mod2_pairing(a, b) == 1]

    # row reduce product tables, remembering each pivot row's pair combination
    pivots: dict[int, tuple[int, int]] = {}  # pivot bit -> (row mask, combo mask)
    basis_pairs: list[tuple[Bits, Bits]] = []
    for idx, (a, b) in enumerate(pairs):
        row = bar_masks[a] & bar_masks[b]
        combo = 1 << idx
        row, combo = _eliminate(row, combo, pivots)
        if row:
            pivots[row.bit_length() - 1] = (row, combo)
            basis_pairs.append((a, b))

    target = (1 << len(psi)) - 1
    row, combo = _eliminate(target, 0, pivots)
    if row:
        return False, tuple(basis_pairs)
    witness = tuple(pairs[i] for i in range(len(pairs)) if combo >> i & 1)
    return True, witness


def _table_mask(fn: BooleanFunction) -> int:
    mask = 0
    for i, bit in enumerate(fn.table):
        mask |= bit << i
    return mask


def _eliminate(row: int, combo: int, pivots: dict[int, tuple[int, int]]) -> tuple[int, int]:
    while row:
        top = row.bit_length() - 1
        if top not in pivots:
            break
        prow, pcombo = pivots[top]
        row ^= prow
        combo ^= pcombo
    return row, combo
