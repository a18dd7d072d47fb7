"""Exact symbolic arithmetic in Leavitt and Cohn algebras.

The Leavitt algebra L_d is the universal complex algebra on generators
s_1..s_d, t_1..t_d with t_j s_j = 1, t_j s_k = 0 (j != k) and
sum_j s_j t_j = 1.  The Cohn algebra C_d drops the last relation, and
L_inf has countably many generators and no sum relation.  Every element
is a linear combination of monomials s_alpha t_beta indexed by pairs of
words, and for L_d a canonical basis is obtained by excluding monomials
where alpha and beta are both nonempty and both end in the letter d;
the reduction rule

    s_{alpha d} t_{beta d} = s_alpha t_beta - sum_{j<d} s_{alpha j} t_{beta j}

rewrites any element into that basis.  Coefficients are exact complex
rationals, so equality of elements is decidable and exact.

All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

Word = tuple  # tuple of generator indices (ints >= 1); () is the empty word


class QC:
    """Exact complex rational: a pair of Fractions (re, im).

    Floats are rejected unless they are integral, keeping the symbolic
    layer free of rounding.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("QC is immutable")

    @staticmethod
    def of(value) -> "QC":
        if isinstance(value, QC):
            return value
        if isinstance(value, complex):
            return QC(_as_fraction(value.real), _as_fraction(value.imag))
        return QC(_as_fraction(value))

    def __add__(self, other):
        other = QC.of(other)
        return QC(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return QC(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-QC.of(other))

    def __rsub__(self, other):
        return QC.of(other) + (-self)

    def __mul__(self, other):
        other = QC.of(other)
        return QC(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = QC.of(other)
        den = other.re * other.re + other.im * other.im
        if den == 0:
            raise ZeroDivisionError("division by zero scalar")
        return QC(
            (self.re * other.re + self.im * other.im) / den,
            (self.im * other.re - self.re * other.im) / den,
        )

    def conjugate(self) -> "QC":
        return QC(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (QC, int, Fraction, complex)):
            other = QC.of(other)
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    def __repr__(self):
        return f"QC({self.re!r}, {self.im!r})"


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        if value.is_integer():
            return Fraction(int(value))
        raise TypeError(
            f"non-integral float {value!r} not allowed in the exact layer; "
            "pass a Fraction or a rational string"
        )
    raise TypeError(f"cannot build an exact scalar from {value!r}")


QC_ZERO = QC(0)
QC_ONE = QC(1)


@dataclass(frozen=True)
class AlgebraKind:
    """Which algebra the element lives in: L_d, C_d, or L_inf."""

    family: str  # "leavitt" | "cohn" | "linf"
    d: int | None

    def __post_init__(self):
        if self.family not in ("leavitt", "cohn", "linf"):
            raise ValueError(f"unknown algebra family {self.family!r}")
        if self.family == "linf":
            if self.d is not None:
                raise ValueError("L_inf has no generator bound d")
        elif self.d is None or self.d < 2:
            raise ValueError("finite Leavitt/Cohn algebras need d >= 2")

    def check_letter(self, j: int):
        if not isinstance(j, int) or j < 1:
            raise ValueError(f"generator index {j!r} must be a positive integer")
        if self.d is not None and j > self.d:
            raise ValueError(f"generator index {j} exceeds d = {self.d}")

    @property
    def has_sum_relation(self) -> bool:
        return self.family == "leavitt"

    def __str__(self):
        if self.family == "linf":
            return "L_inf"
        return ("L_" if self.family == "leavitt" else "C_") + str(self.d)


def leavitt(d: int) -> AlgebraKind:
    return AlgebraKind("leavitt", d)


def cohn(d: int) -> AlgebraKind:
    return AlgebraKind("cohn", d)


def leavitt_infinity() -> AlgebraKind:
    return AlgebraKind("linf", None)


def term_sort_key(key):
    alpha, beta = key
    return (len(alpha) + len(beta), alpha, beta)


def _reducible(key, d: int) -> bool:
    alpha, beta = key
    return bool(alpha) and bool(beta) and alpha[-1] == d and beta[-1] == d


def _reduce_term_dict(terms: dict, d: int, pop_order=None) -> dict:
    """Rewrite a raw term dict into the canonical L_d basis, in place.

    pop_order, when given, permutes the worklist before each pop; the
    result is the same for every order (the redex of a monomial is
    unique, so the rewriting is confluent), which the tests exercise.
    """
    work = [k for k in terms if _reducible(k, d)]
    while work:
        if pop_order is not None:
            pop_order(work)
        key = work.pop()
        coeff = terms.pop(key, None)
        if coeff is None or coeff.is_zero():
            continue
        alpha, beta = key
        head = (alpha[:-1], beta[:-1])
        updates = [(head, coeff)]
        updates.extend(
            ((alpha[:-1] + (j,), beta[:-1] + (j,)), -coeff) for j in range(1, d)
        )
        for k2, delta in updates:
            acc = terms.get(k2, QC_ZERO) + delta
            if acc.is_zero():
                terms.pop(k2, None)
            else:
                terms[k2] = acc
                if _reducible(k2, d):
                    work.append(k2)
    return terms


class AlgebraElement:
    """A finite linear combination of monomials s_alpha t_beta.

    Stored as a mapping (alpha, beta) -> nonzero QC.  The ``canonical``
    flag records whether the L_d reduction rule has been exhausted
    (always true for Cohn and L_inf elements).
    """

    __slots__ = ("kind", "terms", "canonical")
    __hash__ = None

    def __init__(self, kind: AlgebraKind, terms, _trusted=False):
        if _trusted:
            clean = terms
        else:
            clean = {}
            for (alpha, beta), coeff in dict(terms).items():
                alpha, beta = tuple(alpha), tuple(beta)
                for j in itertools.chain(alpha, beta):
                    kind.check_letter(j)
                coeff = QC.of(coeff)
                acc = clean.get((alpha, beta), QC_ZERO) + coeff
                if acc.is_zero():
                    clean.pop((alpha, beta), None)
                else:
                    clean[(alpha, beta)] = acc
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "terms", clean)
        canonical = not kind.has_sum_relation or not any(
            _reducible(k, kind.d) for k in clean
        )
        object.__setattr__(self, "canonical", canonical)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    # -- basic structure -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: term_sort_key(kv[0]))

    def coefficient(self, alpha, beta) -> QC:
        return self.terms.get((tuple(alpha), tuple(beta)), QC_ZERO)

    def degrees(self):
        return sorted({len(a) - len(b) for (a, b) in self.terms})

    def t_depth(self) -> int:
        """Largest l(beta) over the terms (0 for the zero element)."""
        return max((len(b) for (_, b) in self.terms), default=0)

    def s_height(self) -> int:
        return max((len(a) for (a, _) in self.terms), default=0)

    # -- arithmetic ------------------------------------------------------

    def _require_same_kind(self, other):
        if self.kind != other.kind:
            raise ValueError(f"kind mismatch: {self.kind} vs {other.kind}")

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._require_same_kind(other)
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            acc = terms.get(key, QC_ZERO) + coeff
            if acc.is_zero():
                terms.pop(key, None)
            else:
                terms[key] = acc
        return AlgebraElement(self.kind, terms, _trusted=True)

    def __neg__(self):
        return AlgebraElement(
            self.kind, {k: -c for k, c in self.terms.items()}, _trusted=True
        )

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self + (-other)

    def scale(self, scalar) -> "AlgebraElement":
        scalar = QC.of(scalar)
        if scalar.is_zero():
            return AlgebraElement(self.kind, {}, _trusted=True)
        return AlgebraElement(
            self.kind, {k: c * scalar for k, c in self.terms.items()}, _trusted=True
        )

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, QC)):
            return self.scale(other)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QC)):
            return self.scale(other)
        if isinstance(other, AlgebraElement):
            return mul(self, other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if self.kind != other.kind:
            return False
        return normal_form(self).terms == normal_form(other).terms

    def __repr__(self):
        from .grammar import format_element

        return f"<{self.kind}: {format_element(self)}>"


# -- element constructors ----------------------------------------------


def zero(kind: AlgebraKind) -> AlgebraElement:
    return AlgebraElement(kind, {})


def unit(kind: AlgebraKind) -> AlgebraElement:
    return AlgebraElement(kind, {((), ()): QC_ONE})


def monomial(kind: AlgebraKind, alpha, beta, coeff=1) -> AlgebraElement:
    return AlgebraElement(kind, {(tuple(alpha), tuple(beta)): coeff})


def gen_s(kind: AlgebraKind, j: int) -> AlgebraElement:
    return monomial(kind, (j,), ())


def gen_t(kind: AlgebraKind, j: int) -> AlgebraElement:
    return monomial(kind, (), (j,))


def words(d: int, n: int):
    """All words of length n on {1..d}, in lexicographic order."""
    return [tuple(w) for w in itertools.product(range(1, d + 1), repeat=n)]


# -- operations --------------------------------------------------------


def _mul_words(beta: Word, gamma: Word):
    """Contract t_beta s_gamma by prefix matching.

    Returns ("s", rest) when gamma = beta.rest, ("t", rest) when
    beta = gamma.rest, and None when the product is zero.
    """
    if len(beta) <= len(gamma):
        if gamma[: len(beta)] == beta:
            return ("s", gamma[len(beta):])
    else:
        if beta[: len(gamma)] == gamma:
            return ("t", beta[len(gamma):])
    return None


def _mul_term_dicts(a_terms: dict, b_terms: dict) -> dict:
    terms: dict = {}
    for (alpha, beta), ca in a_terms.items():
        for (gamma, delta), cb in b_terms.items():
            hit = _mul_words(beta, gamma)
            if hit is None:
                continue
            side, rest = hit
            if side == "s":
                key = (alpha + rest, delta)
            else:
                key = (alpha, delta + rest)
            acc = terms.get(key, QC_ZERO) + ca * cb
            if acc.is_zero():
                terms.pop(key, None)
            else:
                terms[key] = acc
    return terms


def mul_raw(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Product with monomial contraction only, no basis reduction."""
    a._require_same_kind(b)
    return AlgebraElement(a.kind, _mul_term_dicts(a.terms, b.terms), _trusted=True)


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Canonical product, via (s_a t_b)(s_g t_d) contraction."""
    a._require_same_kind(b)
    terms = _mul_term_dicts(a.terms, b.terms)
    if a.kind.has_sum_relation:
        _reduce_term_dict(terms, a.kind.d)
    return AlgebraElement(a.kind, terms, _trusted=True)


def normal_form(a: AlgebraElement, _pop_order=None) -> AlgebraElement:
    """Canonical form of a; idempotent, the identity off Leavitt kinds."""
    if a.canonical and _pop_order is None:
        return a
    if not a.kind.has_sum_relation:
        return a
    terms = _reduce_term_dict(dict(a.terms), a.kind.d, pop_order=_pop_order)
    return AlgebraElement(a.kind, terms, _trusted=True)


def star(a: AlgebraElement) -> AlgebraElement:
    """Conjugate-linear antimultiplicative involution, s_j* = t_j."""
    return AlgebraElement(
        a.kind,
        {(b, al): c.conjugate() for (al, b), c in a.terms.items()},
        _trusted=True,
    )


def prime(a: AlgebraElement) -> AlgebraElement:
    """Linear antimultiplicative involution, s_j' = t_j."""
    return AlgebraElement(
        a.kind, {(b, al): c for (al, b), c in a.terms.items()}, _trusted=True
    )


def graded_components(a: AlgebraElement) -> dict:
    """Split a canonical element by degree l(alpha) - l(beta)."""
    if not a.canonical:
        raise ValueError("graded_components expects a canonical element")
    parts: dict = {}
    for (alpha, beta), coeff in a.terms.items():
        parts.setdefault(len(alpha) - len(beta), {})[(alpha, beta)] = coeff
    return {
        k: AlgebraElement(a.kind, terms, _trusted=True)
        for k, terms in sorted(parts.items())
    }


@dataclass(frozen=True)
class SameLengthForm:
    """Joint rewriting of several elements with one right length n.

    coefficients[k] maps (alpha, beta) with alpha in alphas and beta of
    length n to the exact coefficient of s_alpha t_beta in the k-th
    element.
    """

    n: int
    alphas: tuple
    coefficients: tuple

    def rebuild(self, kind: AlgebraKind, k: int) -> AlgebraElement:
        return AlgebraElement(kind, dict(self.coefficients[k]))


def same_length_form(elements, n_min: int = 0) -> SameLengthForm:
    """Express elements of one L_d with all t-words of a common length.

    Pads each monomial s_alpha t_beta with sum_{gamma in W_l} s_gamma
    t_gamma on the right, l = n - l(beta); n is the largest t-word
    length across the inputs (or n_min if that is larger).
    """
    elements = list(elements)
    if not elements:
        raise ValueError("need at least one element")
    kind = elements[0].kind
    if kind.family != "leavitt":
        raise ValueError("same-length expansion needs a finite Leavitt algebra")
    for e in elements:
        e._require_same_kind(elements[0])
    canon = [normal_form(e) for e in elements]
    n = max(n_min, max((e.t_depth() for e in canon), default=0))
    d = kind.d
    alphas = set()
    tables = []
    for e in canon:
        table: dict = {}
        for (alpha, beta), coeff in e.terms.items():
            pad = n - len(beta)
            for gamma in words(d, pad):
                key = (alpha + gamma, beta + gamma)
                acc = table.get(key, QC_ZERO) + coeff
                if acc.is_zero():
                    table.pop(key, None)
                else:
                    table[key] = acc
        alphas.update(alpha for (alpha, _) in table)
        tables.append(table)
    return SameLengthForm(
        n=n,
        alphas=tuple(sorted(alphas)),
        coefficients=tuple(tables),
    )


def matrix_unit_embed(kind: AlgebraKind, m: int, table) -> AlgebraElement:
    """Image of a d^m x d^m coefficient table under e_{alpha,beta} -> s_alpha t_beta.

    ``table`` is either a mapping (alpha, beta) -> scalar with word keys
    of length m, or a square array indexed by words(d, m) in
    lexicographic order.
    """
    if kind.family != "leavitt":
        raise ValueError("matrix units of this size live in a finite Leavitt algebra")
    d = kind.d
    word_list = words(d, m)
    terms = {}
    if hasattr(table, "items"):
        items = []
        for (alpha, beta), coeff in table.items():
            alpha, beta = tuple(alpha), tuple(beta)
            if len(alpha) != m or len(beta) != m:
                raise ValueError("index words of wrong length")
            items.append(((alpha, beta), coeff))
    else:
        rows = list(table)
        if len(rows) != len(word_list):
            raise ValueError("index words of wrong length")
        items = []
        for i, row in enumerate(rows):
            row = list(row)
            if len(row) != len(word_list):
                raise ValueError("index words of wrong length")
            for j, coeff in enumerate(row):
                items.append(((word_list[i], word_list[j]), coeff))
    for key, coeff in items:
        coeff = QC.of(coeff)
        if coeff.is_zero():
            continue
        acc = terms.get(key, QC_ZERO) + coeff
        if acc.is_zero():
            terms.pop(key, None)
        else:
            terms[key] = acc
    return normal_form(AlgebraElement(kind, terms, _trusted=True))


def linear_comb_s(kind: AlgebraKind, lam) -> AlgebraElement:
    """s_lambda = sum_j lambda_j s_j (lambda finitely supported)."""
    lam = list(lam)
    if kind.d is not None and len(lam) > kind.d:
        raise ValueError(f"coefficient vector longer than d = {kind.d}")
    terms = {}
    for j, value in enumerate(lam, start=1):
        coeff = QC.of(value)
        if not coeff.is_zero():
            terms[((j,), ())] = coeff
    return AlgebraElement(kind, terms, _trusted=True)


def linear_comb_t(kind: AlgebraKind, lam) -> AlgebraElement:
    """t_lambda = sum_j lambda_j t_j."""
    lam = list(lam)
    if kind.d is not None and len(lam) > kind.d:
        raise ValueError(f"coefficient vector longer than d = {kind.d}")
    terms = {}
    for j, value in enumerate(lam, start=1):
        coeff = QC.of(value)
        if not coeff.is_zero():
            terms[((), (j,))] = coeff
    return AlgebraElement(kind, terms, _trusted=True)


def word_element(kind: AlgebraKind, letters, kind_of_gen: str) -> AlgebraElement:
    """s_alpha or t_alpha for a word alpha (products of generators)."""
    letters = tuple(letters)
    if kind_of_gen == "s":
        return monomial(kind, letters, ())
    if kind_of_gen == "t":
        return monomial(kind, (), letters)
    raise ValueError("generator family must be 's' or 't'")
