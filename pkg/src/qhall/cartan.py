"""Valued quivers, Cartan data, the Euler form, and principal frames.

A valued quiver on n vertices is stored through its n x n extension
matrix R with r[i][j] = dim over End(S_i) of Ext^1(S_j, S_i); an arrow
j -> i contributes to r[i][j].  The transposed-side matrix R' is always
derived as D^-1 R^t D, never supplied, which removes one inconsistency
channel.  Vertex indices are 0-based throughout the library; the CLI
accepts the 1-based convention and converts at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random

from . import _matrix as mx
from ._matrix import Matrix


class InvalidQuiver(ValueError):
    """Raised when quiver data violates an invariant; `code` says which."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class ValuedQuiver:
    """A loop-free valued quiver: vertex count, valuations, extension matrix."""

    n: int
    valuations: tuple[int, ...]
    ext_matrix: Matrix

    @classmethod
    def from_arrows(cls, n: int, arrows, valuations=None) -> ValuedQuiver:
        """Shorthand for trivially valued quivers: arrows are (src, tgt[, mult])."""
        valuations = tuple(valuations) if valuations is not None else (1,) * n
        if any(d != 1 for d in valuations):
            raise InvalidQuiver(
                "bad-valuation", "arrow lists are only defined for trivial valuations"
            )
        r = [[0] * n for _ in range(n)]
        for arrow in arrows:
            src, tgt, *rest = arrow
            mult = rest[0] if rest else 1
            if not (0 <= src < n and 0 <= tgt < n):
                raise InvalidQuiver("shape", f"arrow ({src},{tgt}) out of range")
            r[tgt][src] += mult
        return cls(n, valuations, mx.mat(r))

    def rprime(self) -> Matrix:
        """D^-1 R^t D; integrality is the symmetrizability condition."""
        d = self.valuations
        rt = mx.transpose(self.ext_matrix)
        out = []
        for i in range(self.n):
            row = []
            for j in range(self.n):
                val = Fraction(rt[i][j] * d[j], d[i])
                if val.denominator != 1:
                    raise InvalidQuiver(
                        "non-symmetrizable",
                        f"entry ({i},{j}) of D^-1 R^t D is {val}, not an integer",
                    )
                row.append(int(val))
            out.append(tuple(row))
        return tuple(out)

    def topological_order(self) -> tuple[int, ...] | None:
        """Vertex order with all arrows pointing forward, or None if cyclic."""
        r = self.ext_matrix
        targets: list[list[int]] = [[] for _ in range(self.n)]
        for i in range(self.n):
            for j in range(self.n):
                if r[i][j]:
                    # arrow j -> i
                    targets[j].append(i)
        indeg = [0] * self.n
        for j in range(self.n):
            for i in targets[j]:
                indeg[i] += 1
        ready = [v for v in range(self.n) if indeg[v] == 0]
        order = []
        while ready:
            v = ready.pop()
            order.append(v)
            for i in targets[v]:
                indeg[i] -= 1
                if indeg[i] == 0:
                    ready.append(i)
        return tuple(order) if len(order) == self.n else None

    @property
    def is_acyclic(self) -> bool:
        return self.topological_order() is not None


def validate_quiver(raw: ValuedQuiver) -> ValuedQuiver:
    """Check every quiver invariant, returning the quiver when all hold."""
    n = raw.n
    if n <= 0:
        raise InvalidQuiver("shape", f"vertex count must be positive, got {n}")
    if len(raw.valuations) != n:
        raise InvalidQuiver("shape", "valuation list does not match vertex count")
    for i, d in enumerate(raw.valuations):
        if not isinstance(d, int) or d <= 0:
            raise InvalidQuiver("bad-valuation", f"valuation d_{i} = {d} must be a positive integer")
    r = raw.ext_matrix
    if mx.shape(r) != (n, n):
        raise InvalidQuiver("shape", f"extension matrix must be {n}x{n}")
    for i in range(n):
        for j in range(n):
            if not isinstance(r[i][j], int) or r[i][j] < 0:
                raise InvalidQuiver("shape", f"entry r[{i}][{j}] = {r[i][j]} must be a nonnegative integer")
    for i in range(n):
        if r[i][i]:
            raise InvalidQuiver("loop", f"vertex {i} carries a loop (r[{i}][{i}] = {r[i][i]})")
    for i in range(n):
        for j in range(i + 1, n):
            if r[i][j] and r[j][i]:
                raise InvalidQuiver("two-cycle", f"vertices {i} and {j} form a two-cycle")
    raw.rprime()  # raises "non-symmetrizable" on failure
    return raw


def arrow_list(quiver: ValuedQuiver) -> tuple[tuple[int, int], ...]:
    """Canonical arrow sequence (src, tgt) with multiplicity, sorted."""
    arrows = []
    r = quiver.ext_matrix
    for tgt in range(quiver.n):
        for src in range(quiver.n):
            arrows.extend([(src, tgt)] * r[tgt][src])
    arrows.sort()
    return tuple(arrows)


def cartan_data(quiver: ValuedQuiver) -> tuple[Matrix, Matrix]:
    """The generalized Cartan matrix C and its symmetrizer D."""
    n = quiver.n
    r = quiver.ext_matrix
    rp = quiver.rprime()
    c = tuple(
        tuple(2 if i == j else -r[i][j] - rp[i][j] for j in range(n))
        for i in range(n)
    )
    return c, mx.diag(quiver.valuations)


def euler_matrix(quiver: ValuedQuiver) -> Matrix:
    """Matrix of the Euler form: (I - R^t) D, which equals D (I - R')."""
    n = quiver.n
    d = mx.diag(quiver.valuations)
    left = mx.matmul(mx.sub(mx.identity(n), mx.transpose(quiver.ext_matrix)), d)
    right = mx.matmul(d, mx.sub(mx.identity(n), quiver.rprime()))
    if left != right:
        raise InvalidQuiver("non-symmetrizable", "the two Euler-matrix products disagree")
    return left


def euler_form(e: Matrix, alpha, beta) -> int:
    """<alpha, beta> = alpha^t E beta (dim Hom - dim Ext^1 on classes)."""
    alpha, beta = tuple(alpha), tuple(beta)
    n, m = mx.shape(e)
    if len(alpha) != n or len(beta) != m:
        raise ValueError(f"form of size {n}x{m} applied to vectors of length {len(alpha)}, {len(beta)}")
    return sum(alpha[i] * e[i][j] * beta[j] for i in range(n) for j in range(m))


def sym_form(e: Matrix, alpha, beta) -> int:
    """(alpha, beta) = <alpha, beta> + <beta, alpha>."""
    return euler_form(e, alpha, beta) + euler_form(e, beta, alpha)


@dataclass(frozen=True)
class FrameData:
    """The 2n x n principal-extension frame of a valued quiver.

    Holds the stacked matrices R~ = (R; 0), R~' = (R'; I), E~' = I~ - R~,
    E~ = I~ - R~', B~ = R~' - R~, together with the base quiver's Euler
    matrix E, Cartan matrix C, and the doubled valuation list.
    """

    quiver: ValuedQuiver
    r_tilde: Matrix
    r_tilde_prime: Matrix
    e_tilde: Matrix
    e_tilde_prime: Matrix
    b_tilde: Matrix
    euler: Matrix
    cartan: Matrix
    valuations: tuple[int, ...]  # length 2n; d_{n+i} = d_i

    @property
    def n(self) -> int:
        return self.quiver.n

    @property
    def m(self) -> int:
        return 2 * self.quiver.n


def principal_frame(quiver: ValuedQuiver) -> FrameData:
    """Attach one frozen vertex per mutable vertex, with an arrow n+i -> i."""
    validate_quiver(quiver)
    n = quiver.n
    r = quiver.ext_matrix
    rp = quiver.rprime()
    r_tilde = mx.vstack(r, mx.zeros(n, n))
    r_tilde_prime = mx.vstack(rp, mx.identity(n))
    i_tilde = mx.vstack(mx.identity(n), mx.zeros(n, n))
    e_tilde_prime = mx.sub(i_tilde, r_tilde)
    e_tilde = mx.sub(i_tilde, r_tilde_prime)
    b_tilde = mx.sub(r_tilde_prime, r_tilde)
    c, _ = cartan_data(quiver)
    return FrameData(
        quiver=quiver,
        r_tilde=r_tilde,
        r_tilde_prime=r_tilde_prime,
        e_tilde=e_tilde,
        e_tilde_prime=e_tilde_prime,
        b_tilde=b_tilde,
        euler=euler_matrix(quiver),
        cartan=c,
        valuations=quiver.valuations + quiver.valuations,
    )


def random_valued_quiver(
    rng: Random,
    n_max: int = 3,
    d_max: int = 2,
    r_max: int = 2,
    trivial_valuation: bool = False,
) -> ValuedQuiver:
    """A random acyclic valued quiver with |R| entries bounded by r_max.

    Arrows are laid down along a random vertex order, so the result is
    acyclic by construction.  Each arrow's total dimension is a multiple
    of lcm(d_src, d_tgt), which makes D^-1 R^t D integral automatically.
    """
    n = rng.randint(1, n_max)
    if trivial_valuation:
        d = (1,) * n
    else:
        d = tuple(rng.randint(1, d_max) for _ in range(n))
    order = list(range(n))
    rng.shuffle(order)
    r = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < 0.6:
                src, tgt = order[a], order[b]
                unit = _lcm(d[src], d[tgt])
                # keep both r and r' entries within r_max
                cap = min(r_max * d[tgt], r_max * d[src]) // unit
                if cap >= 1:
                    total = unit * rng.randint(1, cap)
                    r[tgt][src] = total // d[tgt]
    return validate_quiver(ValuedQuiver(n, d, mx.mat(r)))


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)
