"""The quantum torus: exponent-vector algebra twisted by a skew form.

Monomials X^e for e in Z^m multiply by X^e X^f = q^(L(e,f)/2) X^(e+f)
where L is a skew-symmetric bilinear form with 2L integral.  In w-units
the twist is w^(2L(e,f)), always an integer exponent, so elements are
finite maps from exponent vectors to coefficients in either the formal
ring or a quartic specialization (see exactring).

Elements are immutable; two elements combine only when they share the
same form and the same coefficient ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import _matrix as mx
from ._matrix import Matrix
from .exactring import FORMAL, LaurentW, QuarticNumber, render_w_terms


@dataclass(frozen=True)
class SkewForm:
    """Skew-symmetric form on Z^m stored doubled: entries are 2L."""

    two_lambda: Matrix

    def __post_init__(self):
        m = len(self.two_lambda)
        if mx.shape(self.two_lambda) != (m, m):
            raise ValueError("skew form matrix must be square")
        for i in range(m):
            for j in range(m):
                if not isinstance(self.two_lambda[i][j], int):
                    raise ValueError("2L must be an integral matrix")
                if self.two_lambda[i][j] != -self.two_lambda[j][i]:
                    raise ValueError(f"2L is not skew-symmetric at ({i},{j})")

    @property
    def size(self) -> int:
        return len(self.two_lambda)

    def entries(self) -> Matrix:
        """The form itself, as exact rationals (possibly half-integers)."""
        return tuple(tuple(Fraction(x, 2) for x in row) for row in self.two_lambda)


def form_eval(form: SkewForm, e, f) -> int:
    """2L(e, f): the w-exponent of the twist between X^e and X^f."""
    e, f = tuple(e), tuple(f)
    m = form.size
    if len(e) != m or len(f) != m:
        raise ValueError(f"form of size {m} applied to vectors of length {len(e)}, {len(f)}")
    two = form.two_lambda
    return sum(e[i] * two[i][j] * f[j] for i in range(m) for j in range(m))


class TorusElement:
    """Finite sum of coefficient * X^e over a fixed form and ring."""

    __slots__ = ("form", "ring", "_terms")

    def __init__(self, form: SkewForm, ring, terms=None):
        self.form = form
        self.ring = ring
        clean = {}
        if terms:
            for e, c in dict(terms).items():
                e = tuple(int(x) for x in e)
                if len(e) != form.size:
                    raise ValueError(f"exponent vector {e} has length {len(e)}, expected {form.size}")
                c = ring.coerce(c)
                if not c.is_zero:
                    clean[e] = c
        self._terms = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def monomial(cls, form: SkewForm, ring, exponent, coeff=1) -> TorusElement:
        return cls(form, ring, {tuple(exponent): ring.coerce(coeff)})

    @classmethod
    def unit(cls, form: SkewForm, ring) -> TorusElement:
        return cls.monomial(form, ring, (0,) * form.size)

    @classmethod
    def zero(cls, form: SkewForm, ring) -> TorusElement:
        return cls(form, ring)

    # -- queries ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def items(self):
        return sorted(self._terms.items())

    def coefficient(self, exponent):
        return self._terms.get(tuple(exponent), self.ring.zero())

    def _compatible(self, other: TorusElement):
        if self.form != other.form:
            raise ValueError("torus elements live over different skew forms")
        if self.ring != other.ring:
            raise ValueError("torus elements live over different coefficient rings")

    # -- module structure -------------------------------------------------

    def __add__(self, other: TorusElement) -> TorusElement:
        if not isinstance(other, TorusElement):
            return NotImplemented
        self._compatible(other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return TorusElement(self.form, self.ring, terms)

    def __neg__(self) -> TorusElement:
        return TorusElement(self.form, self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: TorusElement) -> TorusElement:
        if not isinstance(other, TorusElement):
            return NotImplemented
        return self + (-other)

    def scaled(self, scalar) -> TorusElement:
        scalar = self.ring.coerce(scalar)
        return TorusElement(self.form, self.ring, {e: c * scalar for e, c in self._terms.items()})

    # -- the twisted product ------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, LaurentW, QuarticNumber)):
            return self.scaled(other)
        if not isinstance(other, TorusElement):
            return NotImplemented
        self._compatible(other)
        terms: dict[tuple, object] = {}
        for e, ce in self._terms.items():
            for f, cf in other._terms.items():
                key = tuple(a + b for a, b in zip(e, f))
                c = ce * cf * self.ring.w_pow(form_eval(self.form, e, f))
                terms[key] = terms[key] + c if key in terms else c
        return TorusElement(self.form, self.ring, terms)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, LaurentW, QuarticNumber)):
            return self.scaled(other)
        return NotImplemented

    def __pow__(self, n: int) -> TorusElement:
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = TorusElement.unit(self.form, self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- equality and display ------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, TorusElement):
            return NotImplemented
        return (
            self.form == other.form
            and self.ring == other.ring
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.form, self.ring, tuple(sorted(self._terms.items(), key=lambda t: t[0]))))

    def render(self) -> str:
        """Canonical text: terms in lexicographic exponent order."""
        if not self._terms:
            return "0"
        chunks = []
        for e, c in self.items():
            coef = str(c)
            if " " in coef:
                coef = f"({coef})"
            chunks.append(f"{coef} * X[{','.join(str(x) for x in e)}]")
        return " + ".join(chunks)

    __str__ = render

    def __repr__(self):
        return f"TorusElement<{self.render()}>"


def torus_mul(a: TorusElement, b: TorusElement) -> TorusElement:
    return a * b


def torus_commutator(a: TorusElement, b: TorusElement, t=1) -> TorusElement:
    """[a, b]_t = a*b - t*(b*a); t defaults to the plain commutator."""
    return a * b - (b * a).scaled(t)


def standard_basis(m: int, k: int) -> tuple[int, ...]:
    """The exponent vector e_k in Z^m (0-based k)."""
    if not 0 <= k < m:
        raise ValueError(f"basis index {k} out of range for Z^{m}")
    return tuple(1 if i == k else 0 for i in range(m))
