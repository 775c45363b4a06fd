"""Exact coefficient arithmetic in the formal quarter power w = q^(1/4).

Everything downstream of this module measures exponents in *w-units*:
the symbol w satisfies w**4 = q, so v = w**2 and q = w**4.  A v-degree k
is stored as w-exponent 2k and a q-degree k as w-exponent 4k.  Keeping a
single integral exponent unit avoids all fractional-exponent bookkeeping,
since every twist appearing in the torus and Hall multiplications is an
integer multiple of 1/4 in q-degrees.

Two coefficient domains live here:

* :class:`LaurentW` -- Laurent polynomials in w over the rationals, the
  universal ring in which formal identities are checked;
* :class:`QuarticNumber` -- the quotient Q[w]/(w**4 - q) for a fixed
  prime q, used when counting representations over F_q.  Primality makes
  w**4 - q irreducible (Eisenstein), so the quotient is a field and zero
  testing is coefficient-wise.

Coefficients are :class:`fractions.Fraction` throughout; there is no
floating point anywhere in the package.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _coerce_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def render_w_terms(pairs) -> str:
    """Render (w_exponent, coefficient) pairs as a Laurent polynomial in v.

    Integer v-exponents print as ``v``, ``v^2``, ``v^-1``; odd w-exponents
    are half-integer v-powers and print in braces, e.g. ``v^{1/2}``.
    This is the canonical coefficient format of all report output.
    """
    pairs = [(k, c) for k, c in pairs if c != 0]
    if not pairs:
        return "0"
    pairs.sort()
    chunks = []
    for k, c in pairs:
        if k == 0:
            body = str(abs(c))
        else:
            if k % 2 == 0:
                j = k // 2
                power = "v" if j == 1 else f"v^{j}"
            else:
                power = f"v^{{{k}/2}}"
            body = power if abs(c) == 1 else f"{abs(c)}*{power}"
        if not chunks:
            chunks.append(body if c > 0 else f"-{body}")
        else:
            chunks.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(chunks)


class LaurentW:
    """Laurent polynomial in w with rational coefficients.

    Immutable; the term map never stores a zero coefficient, so equality
    is exact dict equality.  Arithmetic accepts int and Fraction scalars.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for k, c in dict(terms).items():
                c = _coerce_fraction(c)
                if c != 0:
                    clean[int(k)] = c
        self._terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> LaurentW:
        return cls()

    @classmethod
    def one(cls) -> LaurentW:
        return cls({0: 1})

    @classmethod
    def from_rational(cls, c) -> LaurentW:
        return cls({0: _coerce_fraction(c)})

    @classmethod
    def w_pow(cls, k: int, coeff=1) -> LaurentW:
        return cls({k: _coerce_fraction(coeff)})

    @classmethod
    def v_pow(cls, k: int, coeff=1) -> LaurentW:
        return cls({2 * k: _coerce_fraction(coeff)})

    @classmethod
    def q_pow(cls, k: int, coeff=1) -> LaurentW:
        return cls({4 * k: _coerce_fraction(coeff)})

    # -- queries ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, w_exponent: int) -> Fraction:
        return self._terms.get(w_exponent, Fraction(0))

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self._terms))

    def items(self):
        return sorted(self._terms.items())

    def bar(self) -> LaurentW:
        """The involution w -> w**-1 (exponent negation)."""
        return LaurentW({-k: c for k, c in self._terms.items()})

    # -- ring operations ----------------------------------------------

    def _coerced(self, other):
        if isinstance(other, LaurentW):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentW.from_rational(other)
        return None

    def __add__(self, other):
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for k, c in other._terms.items():
            terms[k] = terms.get(k, Fraction(0)) + c
        return LaurentW(terms)

    __radd__ = __add__

    def __neg__(self) -> LaurentW:
        return LaurentW({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LaurentW({k: c * other for k, c in self._terms.items()})
        if not isinstance(other, LaurentW):
            return NotImplemented
        terms = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                k = k1 + k2
                terms[k] = terms.get(k, Fraction(0)) + c1 * c2
        return LaurentW(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentW:
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = LaurentW.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def exact_div(self, other: LaurentW) -> LaurentW:
        """Divide by another Laurent polynomial, requiring zero remainder."""
        if not isinstance(other, LaurentW) or other.is_zero:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if self.is_zero:
            return LaurentW.zero()
        # Shift both operands to ordinary polynomials in w, long-divide,
        # then shift back.
        lo_n = min(self._terms)
        lo_d = min(other._terms)
        num = {k - lo_n: c for k, c in self._terms.items()}
        den = {k - lo_d: c for k, c in other._terms.items()}
        deg_d = max(den)
        lead = den[deg_d]
        quot: dict[int, Fraction] = {}
        while num:
            deg_n = max(num)
            if deg_n < deg_d:
                raise ValueError("inexact Laurent division")
            k = deg_n - deg_d
            c = num[deg_n] / lead
            quot[k] = c
            for kd, cd in den.items():
                key = kd + k
                val = num.get(key, Fraction(0)) - c * cd
                if val == 0:
                    num.pop(key, None)
                else:
                    num[key] = val
        shift = lo_n - lo_d
        return LaurentW({k + shift: c for k, c in quot.items()})

    # -- equality and display -------------------------------------------

    def __eq__(self, other) -> bool:
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(sorted(self._terms.items())))

    def __str__(self) -> str:
        return render_w_terms(self._terms.items())

    def __repr__(self) -> str:
        return f"LaurentW({dict(sorted(self._terms.items()))!r})"


class QuarticNumber:
    """Element of Q[w]/(w**4 - q) for a fixed prime q.

    Stored as four rational coordinates (c0, c1, c2, c3) meaning
    c0 + c1*w + c2*w**2 + c3*w**3; multiplication reduces w**4 -> q
    eagerly.  Negative powers of w use w**-1 = w**3/q.
    """

    __slots__ = ("coeffs", "q")

    def __init__(self, coeffs, q: int):
        if not is_prime(q):
            raise ValueError(f"specialization modulus {q} is not prime")
        coeffs = tuple(_coerce_fraction(c) for c in coeffs)
        if len(coeffs) != 4:
            raise ValueError("a quartic number has exactly four coordinates")
        self.coeffs = coeffs
        self.q = q

    @classmethod
    def zero(cls, q: int) -> QuarticNumber:
        return cls((0, 0, 0, 0), q)

    @classmethod
    def one(cls, q: int) -> QuarticNumber:
        return cls((1, 0, 0, 0), q)

    @classmethod
    def from_rational(cls, c, q: int) -> QuarticNumber:
        return cls((_coerce_fraction(c), 0, 0, 0), q)

    @classmethod
    def w_pow(cls, k: int, q: int, coeff=1) -> QuarticNumber:
        r = k % 4
        a = (k - r) // 4
        c = _coerce_fraction(coeff) * Fraction(q) ** a
        coords = [Fraction(0)] * 4
        coords[r] = c
        return cls(coords, q)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _check(self, other) -> QuarticNumber | None:
        if isinstance(other, QuarticNumber):
            if other.q != self.q:
                raise ValueError(f"mixed specializations q={self.q} and q={other.q}")
            return other
        if isinstance(other, (int, Fraction)):
            return QuarticNumber.from_rational(other, self.q)
        return None

    def __add__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return QuarticNumber(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.q)

    __radd__ = __add__

    def __neg__(self) -> QuarticNumber:
        return QuarticNumber(tuple(-c for c in self.coeffs), self.q)

    def __sub__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuarticNumber(tuple(c * other for c in self.coeffs), self.q)
        if not isinstance(other, QuarticNumber):
            return NotImplemented
        other = self._check(other)
        out = [Fraction(0)] * 4
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b == 0:
                    continue
                k = i + j
                if k >= 4:
                    out[k - 4] += a * b * self.q
                else:
                    out[k] += a * b
        return QuarticNumber(out, self.q)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        other = self._check(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.q))

    def __str__(self) -> str:
        return render_w_terms(enumerate(self.coeffs))

    def __repr__(self) -> str:
        return f"QuarticNumber({self.coeffs!r}, q={self.q})"


# -- coefficient-ring handles -----------------------------------------

class FormalRing:
    """Handle for the formal ring: coefficients are LaurentW values."""

    def zero(self):
        return LaurentW.zero()

    def one(self):
        return LaurentW.one()

    def w_pow(self, k: int):
        return LaurentW.w_pow(k)

    def from_rational(self, c):
        return LaurentW.from_rational(c)

    def coerce(self, x):
        if isinstance(x, LaurentW):
            return x
        if isinstance(x, (int, Fraction)):
            return LaurentW.from_rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into the formal ring")

    def __eq__(self, other):
        return isinstance(other, FormalRing)

    def __hash__(self):
        return hash(FormalRing)

    def __repr__(self):
        return "FormalRing()"


class QuarticRing:
    """Handle for Q[w]/(w**4 - q) at a fixed prime q."""

    def __init__(self, q: int):
        if not is_prime(q):
            raise ValueError(f"specialization modulus {q} is not prime")
        self.q = q

    def zero(self):
        return QuarticNumber.zero(self.q)

    def one(self):
        return QuarticNumber.one(self.q)

    def w_pow(self, k: int):
        return QuarticNumber.w_pow(k, self.q)

    def from_rational(self, c):
        return QuarticNumber.from_rational(c, self.q)

    def coerce(self, x):
        if isinstance(x, QuarticNumber):
            if x.q != self.q:
                raise ValueError(f"mixed specializations q={self.q} and q={x.q}")
            return x
        if isinstance(x, (int, Fraction)):
            return QuarticNumber.from_rational(x, self.q)
        if isinstance(x, LaurentW):
            return specialize_at_prime(x, self.q)
        raise TypeError(f"cannot coerce {type(x).__name__} into the quartic ring")

    def __eq__(self, other):
        return isinstance(other, QuarticRing) and other.q == self.q

    def __hash__(self):
        return hash((QuarticRing, self.q))

    def __repr__(self):
        return f"QuarticRing({self.q})"


FORMAL = FormalRing()


# -- quantum combinatorics --------------------------------------------

def quantum_integer(a: int, d: int = 1) -> LaurentW:
    """The balanced quantum integer [a] at v_d = v**d.

    [a] = (v**a - v**-a)/(v - v**-1) evaluated with exponents scaled by d,
    i.e. the symmetric sum of v**(d*(a-1-2j)) for 0 <= j < a.
    """
    if a <= 0:
        raise ValueError(f"quantum integer needs a >= 1, got {a}")
    if d <= 0:
        raise ValueError(f"valuation scale must be positive, got {d}")
    return LaurentW({2 * d * (a - 1 - 2 * j): 1 for j in range(a)})


@lru_cache(maxsize=None)
def _quantum_factorial(m: int, d: int) -> LaurentW:
    out = LaurentW.one()
    for i in range(1, m + 1):
        out = out * quantum_integer(i, d)
    return out


@lru_cache(maxsize=None)
def gauss_binomial(m: int, t: int, d: int = 1) -> LaurentW:
    """Balanced Gaussian binomial [m t] at v_d; bar-symmetric in w."""
    if m < 0 or t < 0:
        raise ValueError("binomial arguments must be nonnegative")
    if t > m:
        raise ValueError(f"binomial with t={t} > m={m}")
    if d <= 0:
        raise ValueError(f"valuation scale must be positive, got {d}")
    if t == 0 or t == m:
        return LaurentW.one()
    num = LaurentW.one()
    for i in range(m - t + 1, m + 1):
        num = num * quantum_integer(i, d)
    return num.exact_div(_quantum_factorial(t, d))


def _one_param_integer(a: int, d: int) -> LaurentW:
    # (q**(d*a) - 1)/(q**d - 1) = 1 + q**d + ... + q**(d*(a-1))
    return LaurentW({4 * d * j: 1 for j in range(a)})


@lru_cache(maxsize=None)
def bracket_binomial(m: int, t: int, d: int = 1) -> LaurentW:
    """One-parameter binomial in q**d built from (q**(d*a)-1)/(q**d-1) factors.

    Related to the balanced binomial by an overall shift:
    bracket_binomial(m, t, d) == w**(2*d*t*(m-t)) * gauss_binomial(m, t, d).
    """
    if m < 0 or t < 0:
        raise ValueError("binomial arguments must be nonnegative")
    if t > m:
        raise ValueError(f"binomial with t={t} > m={m}")
    if d <= 0:
        raise ValueError(f"valuation scale must be positive, got {d}")
    if t == 0 or t == m:
        return LaurentW.one()
    num = LaurentW.one()
    for i in range(m - t + 1, m + 1):
        num = num * _one_param_integer(i, d)
    den = LaurentW.one()
    for i in range(1, t + 1):
        den = den * _one_param_integer(i, d)
    return num.exact_div(den)


def specialize_at_prime(x: LaurentW, q: int) -> QuarticNumber:
    """Ring homomorphism sending w to its class in Q[w]/(w**4 - q)."""
    if not isinstance(x, LaurentW):
        raise TypeError("specialize_at_prime expects a LaurentW value")
    out = QuarticNumber.zero(q)
    for k, c in x.items():
        out = out + QuarticNumber.w_pow(k, q, c)
    return out
