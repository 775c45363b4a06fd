"""Quantum seeds, mutation, special compatible forms, and relation checks.

A seed is a pair (L, B~) of a skew form on Z^m and an m x n exchange
matrix whose upper block is skew-symmetrizable.  Mutation transforms the
pair in a chosen direction; one-step mutation also produces the two-term
torus elements y_k whose alternating sums this module verifies.

Relation kinds
--------------
``verify_torus_relation`` evaluates one of six alternating-sum families
in the quantum torus attached to (L, B~) and reports whether it vanishes:

* ``twisted-serre`` / ``twisted-high-serre``: hold for every form with
  B~^t L = (D | 0), D the symmetrizer; the coefficients carry the
  correction exponents from :class:`TwistExponents`.
* ``fundamental`` / ``fundamental-high``: the plain-coefficient families,
  theorems for the block form built by :func:`lambda1_build`.
* ``qca-serre`` / ``qca-high-serre``: the quantum-Serre-shaped families,
  theorems for the principal-coefficient form from :func:`lambda0_build`.

The verifier computes the sum with whatever form it is given; passing a
form outside a family's hypothesis simply yields a nonzero witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import _matrix as mx
from ._matrix import Matrix
from .cartan import FrameData, euler_form
from .exactring import FORMAL, gauss_binomial, bracket_binomial
from .qtorus import SkewForm, TorusElement, form_eval


class ParameterError(ValueError):
    """A relation was queried with arguments outside its hypotheses."""


def skew_symmetrizer(b: Matrix) -> tuple[int, ...] | None:
    """Positive integer diagonal D with DB skew-symmetric, or None.

    Found by propagating d_i * b_ij = -d_j * b_ji along the support graph
    of B and clearing denominators per connected component.
    """
    n = len(b)
    if n and mx.shape(b) != (n, n):
        return None
    d: list[Fraction | None] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        component = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if b[i][j] == 0 and b[j][i] == 0:
                    continue
                if (b[i][j] == 0) != (b[j][i] == 0) or b[i][j] * b[j][i] > 0:
                    return None  # cannot be made skew by any positive diagonal
                if b[i][j] == 0:
                    continue
                expected = -d[i] * Fraction(b[i][j], b[j][i])
                if expected <= 0:
                    return None
                if d[j] is None:
                    d[j] = expected
                    stack.append(j)
                    component.append(j)
                elif d[j] != expected:
                    return None
        lcm = 1
        for i in component:
            lcm = lcm * d[i].denominator // _gcd(lcm, d[i].denominator)
        for i in component:
            d[i] = d[i] * lcm
    return tuple(int(x) for x in d)


def _gcd(a: int, b: int) -> int:
    from math import gcd

    return gcd(a, b)


@dataclass(frozen=True)
class QuantumSeed:
    """A compatible-pair candidate: skew form plus m x n exchange matrix."""

    form: SkewForm
    exchange: Matrix

    def __post_init__(self):
        m = self.form.size
        rows, n = mx.shape(self.exchange)
        if rows != m or n > m:
            raise ValueError(f"exchange matrix {rows}x{n} does not fit a form of size {m}")
        upper = tuple(self.exchange[i][:n] for i in range(n))
        if skew_symmetrizer(upper) is None:
            raise ValueError("upper block of the exchange matrix is not skew-symmetrizable")

    @property
    def m(self) -> int:
        return self.form.size

    @property
    def n(self) -> int:
        return mx.shape(self.exchange)[1]


@dataclass(frozen=True)
class CompatibilityResult:
    """Outcome of the (D | 0) block test for B~^t L."""

    ok: bool
    diag: tuple[int, ...] | None = None
    witness: tuple[int, int, Fraction] | None = None


def check_compatible(form: SkewForm, b_tilde: Matrix) -> CompatibilityResult:
    """Test B~^t L = (D | 0) with D a positive integer diagonal."""
    m, n = mx.shape(b_tilde)
    if m != form.size:
        raise ValueError(f"exchange matrix has {m} rows but the form has size {form.size}")
    prod = mx.matmul(mx.transpose(b_tilde), form.two_lambda)  # = 2 * B~^t L
    for i in range(n):
        for j in range(m):
            val = Fraction(prod[i][j], 2)
            if j == i:
                if prod[i][j] <= 0 or prod[i][j] % 2:
                    return CompatibilityResult(False, witness=(i, j, val))
            elif val != 0:
                return CompatibilityResult(False, witness=(i, j, val))
    return CompatibilityResult(True, diag=tuple(prod[i][i] // 2 for i in range(n)))


def mutation_matrix(b_tilde: Matrix, k: int) -> Matrix:
    """The elementary matrix H implementing mutation of the form at k."""
    m, n = mx.shape(b_tilde)
    if not 0 <= k < n:
        raise ValueError(f"mutation direction {k} out of range 0..{n - 1}")
    h = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    for i in range(m):
        h[i][k] = -1 if i == k else max(0, -b_tilde[i][k])
    return mx.mat(h)


def _exchange_mutation(b_tilde: Matrix, k: int) -> Matrix:
    m, n = mx.shape(b_tilde)
    out = []
    for i in range(m):
        row = []
        for j in range(n):
            if i == k or j == k:
                row.append(-b_tilde[i][j])
            else:
                bik, bkj = b_tilde[i][k], b_tilde[k][j]
                row.append(b_tilde[i][j] + (abs(bik) * bkj + bik * abs(bkj)) // 2)
        out.append(tuple(row))
    return tuple(out)


def mutate_seed(seed: QuantumSeed, k: int) -> QuantumSeed:
    """Mutate (L, B~) in direction k; an involution on seeds.

    When the input pair is compatible, the mutated pair is verified to be
    compatible with the same diagonal.
    """
    if not 0 <= k < seed.n:
        raise ValueError(f"mutation direction {k} out of range 0..{seed.n - 1}")
    h = mutation_matrix(seed.exchange, k)
    new_two_lambda = mx.matmul(mx.transpose(h), mx.matmul(seed.form.two_lambda, h))
    new_form = SkewForm(new_two_lambda)
    new_exchange = _exchange_mutation(seed.exchange, k)
    before = check_compatible(seed.form, seed.exchange)
    if before.ok:
        after = check_compatible(new_form, new_exchange)
        if not after.ok or after.diag != before.diag:
            raise RuntimeError("mutation failed to preserve compatibility")
    return QuantumSeed(new_form, new_exchange)


def one_step_variable(seed: QuantumSeed, k: int, ring=FORMAL) -> TorusElement:
    """The two-term cluster variable obtained by one mutation at k."""
    if not 0 <= k < seed.n:
        raise ValueError(f"direction {k} out of range 0..{seed.n - 1}")
    m = seed.m
    pos = [0] * m
    neg = [0] * m
    for i in range(m):
        pos[i] = max(0, seed.exchange[i][k])
        neg[i] = max(0, -seed.exchange[i][k])
    pos[k] -= 1
    neg[k] -= 1
    return TorusElement(seed.form, ring, {tuple(pos): 1, tuple(neg): 1})


def lambda1_build(b: Matrix, d) -> SkewForm:
    """The block form (0, -D; D, -DB) attached to an exchange block B."""
    d = tuple(d)
    n = len(d)
    if mx.shape(b) != (n, n):
        raise ValueError("exchange block and diagonal sizes disagree")
    db = mx.matmul(mx.diag(d), b)
    if db != mx.neg(mx.transpose(db)):
        raise ValueError("DB is not skew-symmetric")
    two_d = mx.diag(tuple(2 * x for x in d))
    top = mx.hstack(mx.zeros(n, n), mx.neg(two_d))
    bottom = mx.hstack(two_d, mx.neg(mx.scale(2, db)))
    return SkewForm(mx.vstack(top, bottom))


@dataclass(frozen=True)
class PrincipalForms:
    """The change-of-basis data for the principal-coefficient form.

    theta is the 2n x 2n base-change matrix, gamma the doubled-Euler block
    form; lambda0 = (theta^-1)^t gamma theta^-1 and lambda2 = lambda0 / 2.
    """

    theta: Matrix
    theta_inv: Matrix
    gamma: Matrix
    lambda0_matrix: Matrix
    lambda0: SkewForm
    lambda2: SkewForm


def lambda0_build(e: Matrix, d) -> PrincipalForms:
    """Build Theta, Gamma and the forms lambda0, lambda2 from the Euler matrix.

    Requires the quiver to be acyclic so that E^t is invertible over the
    integers after clearing the symmetrizer; every intermediate product
    is checked to be integral.
    """
    d = tuple(d)
    n = len(d)
    if mx.shape(e) != (n, n):
        raise ValueError("Euler matrix and diagonal sizes disagree")
    et = mx.transpose(e)
    d_inv_e = _integral(_divide_rows(e, d), "D^-1 E")
    d_inv_et = _integral(_divide_rows(et, d), "D^-1 E^t")
    theta = mx.vstack(
        mx.hstack(mx.neg(d_inv_e), mx.neg(d_inv_et)),
        mx.hstack(mx.identity(n), mx.zeros(n, n)),
    )
    try:
        theta_inv_frac = mx.inverse(theta)
    except ValueError as exc:
        raise ValueError("base-change matrix is singular (is the quiver acyclic?)") from exc
    theta_inv = _integral(theta_inv_frac, "Theta^-1")
    gamma = mx.vstack(
        mx.hstack(mx.sub(et, e), mx.neg(mx.add(et, e))),
        mx.hstack(mx.add(et, e), mx.sub(et, e)),
    )
    lam0 = mx.matmul(mx.transpose(theta_inv), mx.matmul(gamma, theta_inv))
    return PrincipalForms(
        theta=theta,
        theta_inv=theta_inv,
        gamma=gamma,
        lambda0_matrix=lam0,
        lambda0=SkewForm(mx.scale(2, lam0)),
        lambda2=SkewForm(lam0),
    )


def _divide_rows(a: Matrix, d) -> Matrix:
    return tuple(tuple(Fraction(x, d[i]) for x in row) for i, row in enumerate(a))


def _integral(a, label: str) -> Matrix:
    try:
        return mx.as_int_matrix(a)
    except ValueError as exc:
        raise ValueError(f"{label} is not an integer matrix: {exc}") from exc


@dataclass(frozen=True)
class TwistExponents:
    """The correction exponents appearing in the twisted relation families.

    All values are returned in w-units (four units per q-degree, two per
    v-degree), so half-integer v-exponents stay integral.
    """

    frame: FrameData
    form: SkewForm

    def _euler(self, i: int, j: int) -> int:
        return self.frame.euler[i][j]

    def _form_ee(self, i: int, j: int) -> int:
        ei = tuple(row[i] for row in self.frame.e_tilde)
        ej = tuple(row[j] for row in self.frame.e_tilde)
        return form_eval(self.form, ei, ej)  # = 2 L(E~ e_i, E~ e_j)

    def a_w(self, i: int, j: int, l: int, t: int) -> int:
        """Twist for the high families: 2 * (<j,i> - <i,j> - 2L(E~e_i,E~e_j)) * l * t."""
        return (2 * self._euler(j, i) - 2 * self._euler(i, j) - 2 * self._form_ee(i, j)) * l * t

    def w_w(self, i: int, j: int, t: int) -> int:
        """Twist for the degree-(1 - c_ij) family: a_w at l = 1."""
        return self.a_w(i, j, 1, t)

    def s_w(self, i: int, j: int, p: int, l: int, t: int) -> int:
        """Accumulated twist of the full monomial rewrite at position t."""
        d = self.frame.quiver.valuations
        return (
            p * (p + 1) * d[i]
            + l * (l - 1) * d[j]
            + 2 * (p + 1 - t) * l * self._euler(i, j)
            + 2 * l * t * self._euler(j, i)
            + (p + 1 - 2 * t) * l * self._form_ee(i, j)
        )


def twist_exponents(frame: FrameData, form: SkewForm) -> TwistExponents:
    if form.size != frame.m:
        raise ValueError(f"form size {form.size} does not match frame size {frame.m}")
    return TwistExponents(frame, form)


RELATION_KINDS = (
    "fundamental",
    "fundamental-high",
    "twisted-serre",
    "twisted-high-serre",
    "qca-serre",
    "qca-high-serre",
)

_HIGH_KINDS = {"fundamental-high", "twisted-high-serre", "qca-high-serre"}


@dataclass(frozen=True)
class RelationOutcome:
    kind: str
    params: dict
    passed: bool
    witness: TorusElement | None

    def witness_text(self) -> str:
        return "" if self.witness is None else self.witness.render()


def verify_torus_relation(
    kind: str,
    frame: FrameData,
    form: SkewForm,
    i: int,
    j: int,
    l: int | None = None,
    p: int | None = None,
    eps: int | None = None,
    ring=FORMAL,
) -> RelationOutcome:
    """Evaluate one alternating-sum relation; pass iff it is exactly zero."""
    if kind not in RELATION_KINDS:
        raise ParameterError(f"unknown relation kind {kind!r}")
    n = frame.n
    if not (0 <= i < n and 0 <= j < n):
        raise ParameterError(f"vertex pair ({i},{j}) out of range 0..{n - 1}")
    if i == j:
        raise ParameterError("relation requires two distinct vertices")
    if form.size != frame.m:
        raise ParameterError(f"form size {form.size} does not match frame size {frame.m}")
    compat = check_compatible(form, frame.b_tilde)
    if not compat.ok or compat.diag != frame.quiver.valuations:
        raise ParameterError("form is not compatible with the frame's exchange matrix")

    d_i = frame.quiver.valuations[i]
    c_ij = frame.cartan[i][j]
    b_ij = frame.b_tilde[i][j]
    tw = TwistExponents(frame, form)

    if kind in _HIGH_KINDS:
        if l is None or p is None or eps is None:
            raise ParameterError(f"kind {kind!r} needs l, p and eps")
        if l < 1 or p < 1:
            raise ParameterError("l and p must be positive integers")
        if eps not in (1, -1):
            raise ParameterError("eps must be +1 or -1")
        if kind == "fundamental-high":
            bound = l * abs(b_ij)
        else:
            bound = -l * c_ij
        if p < bound:
            raise ParameterError(f"kind {kind!r} needs p >= {bound}, got {p}")
        top = p + 1
        power_j = l
    else:
        if kind == "fundamental":
            top = 1 + abs(b_ij)
        else:
            top = 1 - c_ij
        power_j = 1

    def coefficient(t: int):
        sign = -1 if t % 2 else 1
        if kind == "twisted-high-serre":
            w_exp = 2 * d_i * eps * (p + l * c_ij) * t - tw.a_w(i, j, l, t)
            return sign * ring.coerce(gauss_binomial(p + 1, t, d_i)) * ring.w_pow(w_exp)
        if kind == "twisted-serre":
            w_exp = -tw.w_w(i, j, t)
            return sign * ring.coerce(gauss_binomial(top, t, d_i)) * ring.w_pow(w_exp)
        if kind == "fundamental-high":
            if b_ij <= 0:
                x = (eps * p + eps * l * b_ij - l * b_ij) * t
            else:
                x = (eps * p - eps * l * b_ij - l * b_ij) * t
            return sign * ring.coerce(gauss_binomial(p + 1, t, d_i)) * ring.w_pow(2 * d_i * x)
        if kind == "fundamental":
            if b_ij <= 0:
                q_exp = t * (t - 1) // 2
            else:
                q_exp = t * (t - 1) // 2 - t * b_ij
            return sign * ring.coerce(bracket_binomial(top, t, d_i)) * ring.w_pow(4 * d_i * q_exp)
        if kind == "qca-high-serre":
            w_exp = 2 * d_i * eps * (p + l * c_ij) * t
            return sign * ring.coerce(gauss_binomial(p + 1, t, d_i)) * ring.w_pow(w_exp)
        # qca-serre
        return sign * ring.coerce(gauss_binomial(top, t, d_i))

    seed = QuantumSeed(form, frame.b_tilde)
    y_i = one_step_variable(seed, i, ring)
    y_j = one_step_variable(seed, j, ring)
    yj_l = y_j ** power_j
    powers = [TorusElement.unit(form, ring)]
    for _ in range(top):
        powers.append(powers[-1] * y_i)

    total = TorusElement.zero(form, ring)
    for t in range(top + 1):
        total = total + (powers[top - t] * yj_l * powers[t]).scaled(coefficient(t))

    params = {"i": i, "j": j}
    if kind in _HIGH_KINDS:
        params.update({"l": l, "p": p, "eps": eps})
    return RelationOutcome(kind, params, total.is_zero, None if total.is_zero else total)
