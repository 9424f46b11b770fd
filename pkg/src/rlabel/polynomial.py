"""Noncommutative integer polynomials in {a, b} and {c, d}.

Monomials are plain strings over the alphabet ("abba", "cdc"); the empty
string is the constant monomial. Coefficients are Python ints and zero
coefficients are never stored.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from fractions import Fraction
from functools import lru_cache

from .flag import FlagVector
from .poset import GradedPoset, maximal_chains

__all__ = [
    "NotExpressible",
    "AbPolynomial",
    "CdPolynomial",
    "ab_index_from_flag_h",
    "ab_index_from_assignment",
    "expand_cd",
    "cd_monomials",
    "to_cd_index",
]


class NotExpressible(ValueError):
    """The ab-polynomial is not in the span of the cd-monomials."""


class _NCPolynomial:
    alphabet: str = ""
    weights: Mapping[str, int] = {}

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[str, int] | None = None):
        clean: dict[str, int] = {}
        for word, coeff in (terms or {}).items():
            if any(ch not in self.alphabet for ch in word):
                raise ValueError(f"{word!r} is not a word over {self.alphabet!r}")
            coeff = int(coeff)
            if coeff:
                clean[word] = clean.get(word, 0) + coeff
        self._terms = {w: c for w, c in sorted(clean.items()) if c}

    @classmethod
    def var(cls, letter: str):
        return cls({letter: 1})

    @classmethod
    def one(cls):
        return cls({"": 1})

    @property
    def terms(self) -> dict[str, int]:
        return dict(self._terms)

    def __iter__(self) -> Iterator[tuple[str, int]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __getitem__(self, word: str) -> int:
        return self._terms.get(word, 0)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self._terms
        if type(other) is not type(self):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash((type(self).__name__, tuple(self._terms.items())))

    def _combine(self, other, sign: int):
        if type(other) is not type(self):
            return NotImplemented
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out.get(w, 0) + sign * c
        return type(self)(out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return type(self)({w: -c for w, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return type(self)({w: c * other for w, c in self._terms.items()})
        if type(other) is not type(self):
            return NotImplemented
        out: dict[str, int] = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return type(self)(out)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not defined")
        result, base = type(self).one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def word_degree(self, word: str) -> int:
        return sum(self.weights[ch] for ch in word)

    def degrees(self) -> set[int]:
        return {self.word_degree(w) for w in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int:
        """Largest degree of a monomial; -1 for the zero polynomial."""
        return max(self.degrees(), default=-1)

    def to_json(self) -> dict[str, int]:
        return dict(self._terms)

    @classmethod
    def from_json(cls, data: Mapping[str, int]):
        return cls(data)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self._terms!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for w, c in self._terms.items():
            body = w or "1"
            if abs(c) != 1 or not w:
                body = f"{abs(c)}{w}" if w else str(abs(c))
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


class AbPolynomial(_NCPolynomial):
    alphabet = "ab"
    weights = {"a": 1, "b": 1}
    __slots__ = ()


class CdPolynomial(_NCPolynomial):
    """Polynomial in c (degree 1) and d (degree 2)."""

    alphabet = "cd"
    weights = {"c": 1, "d": 2}
    __slots__ = ()


def ab_index_from_flag_h(h: FlagVector) -> AbPolynomial:
    """Sum of h_S u_S, where u_S has b at the positions in S and a elsewhere."""
    m = h.n - 1
    if m < 0:
        return AbPolynomial()
    terms = {}
    for mask, value in h.items():
        terms["".join("b" if mask >> i & 1 else "a" for i in range(m))] = value
    return AbPolynomial(terms)


def ab_index_from_assignment(p: GradedPoset, tau) -> AbPolynomial:
    """Sum over maximal chains of the word of triplet letters along each chain.

    ``tau`` is a :class:`~rlabel.labeling.TripleAssignment` on p.
    """
    out: dict[str, int] = {}
    for c in maximal_chains(p):
        w = tau.word(c)
        out[w] = out.get(w, 0) + 1
    return AbPolynomial(out)


_C = AbPolynomial({"a": 1, "b": 1})
_D = AbPolynomial({"ab": 1, "ba": 1})


@lru_cache(maxsize=None)
def _expand_word(word: str) -> AbPolynomial:
    if not word:
        return AbPolynomial.one()
    head = _C if word[0] == "c" else _D
    return head * _expand_word(word[1:])


def expand_cd(q: CdPolynomial) -> AbPolynomial:
    """Substitute c = a + b, d = ab + ba and expand."""
    out = AbPolynomial()
    for word, coeff in q:
        out = out + _expand_word(word) * coeff
    return out


@lru_cache(maxsize=None)
def cd_monomials(m: int) -> tuple[str, ...]:
    """All cd-words of weighted degree m, in lexicographic order."""
    if m < 0:
        return ()
    if m == 0:
        return ("",)
    words = ["c" + w for w in cd_monomials(m - 1)]
    words += ["d" + w for w in cd_monomials(m - 2)]
    return tuple(sorted(words))


def _solve_exact(columns: list[dict[str, int]], target: dict[str, int]) -> list[Fraction] | None:
    """Solve sum_j x_j columns[j] = target over the rationals.

    Rows are indexed by ab-words. Returns None when the system is
    inconsistent. The columns are assumed linearly independent.
    """
    rows = sorted({w for col in columns for w in col} | set(target))
    ncols = len(columns)
    matrix = [
        [Fraction(col.get(w, 0)) for col in columns] + [Fraction(target.get(w, 0))]
        for w in rows
    ]
    pivot_rows = []
    r = 0
    for j in range(ncols):
        pivot = next((i for i in range(r, len(matrix)) if matrix[i][j] != 0), None)
        if pivot is None:
            continue
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        lead = matrix[r][j]
        matrix[r] = [v / lead for v in matrix[r]]
        for i in range(len(matrix)):
            if i != r and matrix[i][j] != 0:
                factor = matrix[i][j]
                matrix[i] = [a - factor * b for a, b in zip(matrix[i], matrix[r])]
        pivot_rows.append(j)
        r += 1
    if any(row[-1] != 0 for row in matrix[r:]):
        return None
    solution = [Fraction(0)] * ncols
    for i, j in enumerate(pivot_rows):
        solution[j] = matrix[i][-1]
    return solution


def to_cd_index(p: AbPolynomial) -> CdPolynomial:
    """Rewrite a homogeneous ab-polynomial in terms of c = a + b and d = ab + ba.

    Raises :class:`NotExpressible` when no cd-polynomial expands to p.
    """
    if not p:
        return CdPolynomial()
    if not p.is_homogeneous():
        raise ValueError(f"ab-polynomial is not homogeneous: degrees {sorted(p.degrees())}")
    m = p.degree
    monomials = cd_monomials(m)
    columns = [_expand_word(w).terms for w in monomials]
    solution = _solve_exact(columns, p.terms)
    if solution is None:
        raise NotExpressible(f"{p} is not in the span of the degree-{m} cd-monomials")
    if any(x.denominator != 1 for x in solution):
        raise NotExpressible(f"{p} has only a non-integral cd-preimage")
    q = CdPolynomial({w: int(x) for w, x in zip(monomials, solution)})
    if expand_cd(q) != p:
        raise NotExpressible(f"cd-preimage of {p} failed the expansion check")
    return q
