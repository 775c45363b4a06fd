"""Hall algebra products, the quantum cluster character, and the maps
between them.

Basis elements u_M are indexed by iso-class handles from repfq; the
coefficient of the plain product u_M . u_N at u_L is the extension count
|Ext^1(M,N)_L| / |Hom(M,N)|, computed through the subobject census as
g * a_M * a_N / a_L where g counts subobjects of L isomorphic to N with
quotient isomorphic to M.  That classical conversion is cross-validated
against :func:`ext_coefficient_oracle`, which builds every extension's
middle term explicitly.

Four product twists are supported (all coefficients live in the quartic
ring at the context's prime):

* ``plain``  -- the bare extension-counting product;
* ``v``      -- multiplied by v^<m,n> (the Ringel twist);
* ``lambda`` -- multiplied by v^(L(E~m,E~n) + 2<m,n>), needs a skew form
  and a frame;
* ``q``      -- multiplied by q^<m,n>.

The character map sends u_M to the Grassmannian generating sum X_M in the
quantum torus; psi, rho and phi package it into the homomorphisms whose
multiplicativity the verifier checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product

from .cartan import FrameData, euler_form
from ._matrix import matvec
from .exactring import QuarticRing, gauss_binomial
from .qtorus import SkewForm, TorusElement, form_eval
from .repfq import FqRep, Handle, RepContext, arrow_list, hom_dim, rep_context
from .seedlab import ParameterError, QuantumSeed, RelationOutcome, one_step_variable

HALL_MODES = ("plain", "v", "lambda", "q")

HALL_RELATION_KINDS = ("serre", "high-serre", "psi-hom", "rho-iso", "star-closed-form")


class HallElement:
    """Finite linear combination of iso classes over Q[w]/(w^4 - q)."""

    __slots__ = ("context", "_terms")

    def __init__(self, context: RepContext, terms=None):
        self.context = context
        ring = QuarticRing(context.q)
        clean = {}
        if terms:
            for handle, c in dict(terms).items():
                c = ring.coerce(c)
                if not c.is_zero:
                    clean[handle] = c
        self._terms = clean

    @property
    def ring(self) -> QuarticRing:
        return QuarticRing(self.context.q)

    @classmethod
    def basis(cls, context: RepContext, handle: Handle) -> HallElement:
        return cls(context, {handle: 1})

    @classmethod
    def simple(cls, context: RepContext, vertex: int) -> HallElement:
        return cls.basis(context, context.simple_handle(vertex))

    @classmethod
    def zero(cls, context: RepContext) -> HallElement:
        return cls(context)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def items(self):
        return sorted(self._terms.items())

    def _compatible(self, other: HallElement):
        if self.context is not other.context:
            raise ValueError("Hall elements belong to different contexts")

    def __add__(self, other: HallElement) -> HallElement:
        if not isinstance(other, HallElement):
            return NotImplemented
        self._compatible(other)
        terms = dict(self._terms)
        for h, c in other._terms.items():
            terms[h] = terms[h] + c if h in terms else c
        return HallElement(self.context, terms)

    def __neg__(self) -> HallElement:
        return HallElement(self.context, {h: -c for h, c in self._terms.items()})

    def __sub__(self, other: HallElement) -> HallElement:
        if not isinstance(other, HallElement):
            return NotImplemented
        return self + (-other)

    def scaled(self, scalar) -> HallElement:
        scalar = self.ring.coerce(scalar)
        return HallElement(self.context, {h: c * scalar for h, c in self._terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, HallElement):
            return NotImplemented
        return self.context is other.context and self._terms == other._terms

    def __hash__(self):
        return hash((id(self.context), tuple(self.items())))

    def render(self) -> str:
        if not self._terms:
            return "0"
        chunks = []
        for (dim, idx), c in self.items():
            coef = str(c)
            if " " in coef:
                coef = f"({coef})"
            chunks.append(f"{coef} * u[{','.join(str(x) for x in dim)};{idx}]")
        return " + ".join(chunks)

    __str__ = render

    def __repr__(self):
        return f"HallElement<{self.render()}>"


def hall_coefficient(ctx: RepContext, m: Handle, n: Handle, l: Handle) -> Fraction:
    """|Ext^1(M,N)_L| / |Hom(M,N)| via the subobject conversion."""
    if tuple(a + b for a, b in zip(m[0], n[0])) != l[0]:
        raise ValueError("dimension vectors do not add up")
    g = ctx.census(l).get((n, m), 0)
    if g == 0:
        return Fraction(0)
    return Fraction(g * ctx.aut_order(m) * ctx.aut_order(n), ctx.aut_order(l))


def ext_coefficient_oracle(ctx: RepContext, m: Handle, n: Handle, l: Handle) -> Fraction:
    """Independent route: enumerate every cocycle and classify middle terms.

    A cocycle is one matrix per arrow in Hom(M_src, N_tgt); its middle
    term places N in the top-left block.  Extension classes are cosets of
    the coboundary image, whose size is q^rank of the intertwiner system.
    """
    if sum(m[0]) + sum(n[0]) > 4:
        raise ValueError("oracle is limited to total dimension 4")
    if tuple(a + b for a, b in zip(m[0], n[0])) != l[0]:
        raise ValueError("dimension vectors do not add up")
    q = ctx.q
    rep_m = ctx.representative(m)
    rep_n = ctx.representative(n)
    arrows = arrow_list(ctx.quiver)
    slots = [(rep_n.dim[tgt], rep_m.dim[src]) for src, tgt in arrows]
    total = sum(r * c for r, c in slots)
    hom = hom_dim(rep_m, rep_n)
    ext = total - (sum(a * b for a, b in zip(rep_m.dim, rep_n.dim)) - hom)
    coboundary = q ** (total - ext)
    count = 0
    mid_dim = l[0]
    for flat in iter_product(range(q), repeat=total):
        pos = 0
        mid_maps = []
        for idx, ((src, tgt), (rows, cols)) in enumerate(zip(arrows, slots)):
            block = flat[pos : pos + rows * cols]
            pos += rows * cols
            z = tuple(tuple(block[i * cols + j] for j in range(cols)) for i in range(rows))
            na, ma = rep_n.maps[idx], rep_m.maps[idx]
            top = tuple(row_n + z[i] for i, row_n in enumerate(na))
            bottom = tuple((0,) * rep_n.dim[src] + row_m for row_m in ma)
            mid_maps.append(top + bottom)
        mid = FqRep(ctx.quiver, q, mid_dim, tuple(mid_maps))
        if ctx.class_of(mid) == l:
            count += 1
    return Fraction(count, coboundary * q**hom)


def _twist_exponent(mode: str, ctx: RepContext, mdim, ndim, form, frame) -> int:
    """w-exponent of the chosen twist between dimension vectors m and n."""
    pairing = euler_form(ctx.euler, mdim, ndim)
    if mode == "plain":
        return 0
    if mode == "v":
        return 2 * pairing
    if mode == "q":
        return 4 * pairing
    if mode == "lambda":
        if form is None or frame is None:
            raise ValueError("lambda twist needs a skew form and a frame")
        em = matvec(frame.e_tilde, mdim)
        en = matvec(frame.e_tilde, ndim)
        return form_eval(form, em, en) + 4 * pairing
    raise ValueError(f"unknown Hall product mode {mode!r}")


def hall_product(
    x: HallElement,
    y: HallElement,
    mode: str = "plain",
    form: SkewForm | None = None,
    frame: FrameData | None = None,
) -> HallElement:
    """Bilinear extension of the twisted structure-constant product."""
    x._compatible(y)
    ctx = x.context
    ring = x.ring
    out: dict[Handle, object] = {}
    for hm, cm in x._terms.items():
        for hn, cn in y._terms.items():
            scale = cm * cn * ring.w_pow(_twist_exponent(mode, ctx, hm[0], hn[0], form, frame))
            target = tuple(a + b for a, b in zip(hm[0], hn[0]))
            table = ctx.table(target)
            for index in range(len(table.classes)):
                hl = (target, index)
                coeff = hall_coefficient(ctx, hm, hn, hl)
                if coeff:
                    c = scale * coeff
                    out[hl] = out[hl] + c if hl in out else c
    return HallElement(ctx, out)


def grassmannian_profile(ctx: RepContext, handle: Handle) -> dict[tuple[int, ...], int]:
    """|Gr_e(M)| for every sub-dimension vector e with a nonzero count."""
    profile: dict[tuple[int, ...], int] = {}
    for (sub, _quot), count in ctx.census(handle).items():
        profile[sub[0]] = profile.get(sub[0], 0) + count
    return profile


def cc_character(
    ctx: RepContext, handle: Handle, form: SkewForm, frame: FrameData
) -> TorusElement:
    """The Grassmannian generating sum X_M in the quantum torus at q."""
    ring = QuarticRing(ctx.q)
    mdim = handle[0]
    terms: dict[tuple[int, ...], object] = {}
    for e, count in grassmannian_profile(ctx, handle).items():
        rest = tuple(a - b for a, b in zip(mdim, e))
        w_exp = -2 * euler_form(ctx.euler, e, rest)
        exponent = tuple(
            -a - b
            for a, b in zip(matvec(frame.e_tilde_prime, e), matvec(frame.e_tilde, rest))
        )
        c = ring.w_pow(w_exp) * count
        terms[exponent] = terms[exponent] + c if exponent in terms else c
    return TorusElement(form, ring, terms)


def simple_character(frame: FrameData, vertex: int, form: SkewForm, ring) -> TorusElement:
    """X of a simple object, valid for arbitrary valued quivers.

    A simple has exactly the two forced submodules, so its character is
    the two-term sum with unit coefficients regardless of the valuation.
    """
    n = frame.n
    if not 0 <= vertex < n:
        raise ValueError(f"vertex {vertex} out of range 0..{n - 1}")
    col_e = tuple(-row[vertex] for row in frame.e_tilde)
    col_ep = tuple(-row[vertex] for row in frame.e_tilde_prime)
    out = TorusElement.monomial(form, ring, col_e)
    return out + TorusElement.monomial(form, ring, col_ep)


def psi_map(x: HallElement, form: SkewForm, frame: FrameData) -> TorusElement:
    """Linear extension of u_M -> X_M."""
    ctx = x.context
    ring = QuarticRing(ctx.q)
    out = TorusElement.zero(form, ring)
    for handle, c in x.items():
        out = out + cc_character(ctx, handle, form, frame).scaled(c)
    return out


def rho_rescale(x: HallElement) -> HallElement:
    """Rescale each basis term by v^(<m,m>/2), i.e. w^<m,m>."""
    ctx = x.context
    ring = x.ring
    terms = {
        h: c * ring.w_pow(euler_form(ctx.euler, h[0], h[0])) for h, c in x._terms.items()
    }
    return HallElement(ctx, terms)


def phi_map(ctx: RepContext, vertex: int, form: SkewForm, frame: FrameData) -> TorusElement:
    """The generator image v_i^(1/2) (q_i - 1)^-1 y_i in the torus at q."""
    d_i = ctx.quiver.valuations[vertex]
    ring = QuarticRing(ctx.q)
    y = one_step_variable(QuantumSeed(form, frame.b_tilde), vertex, ring)
    return y.scaled(ring.w_pow(d_i) * Fraction(1, ctx.q**d_i - 1))


# -- relation verification ----------------------------------------------

def _word_product(terms, mode, form, frame) -> HallElement:
    out = terms[0]
    for t in terms[1:]:
        out = hall_product(out, t, mode, form, frame)
    return out


def _class_pairs(ctx: RepContext, max_total: int):
    """All ordered pairs of handles with total dimension <= max_total."""
    n = ctx.quiver.n
    dims = [
        dim
        for dim in iter_product(range(max_total + 1), repeat=n)
        if 0 < sum(dim) <= max_total
    ]
    for mdim in dims:
        for ndim in dims:
            if sum(mdim) + sum(ndim) > max_total:
                continue
            for mi in range(len(ctx.table(mdim).classes)):
                for ni in range(len(ctx.table(ndim).classes)):
                    yield (mdim, mi), (ndim, ni)


def verify_hall_relation(
    kind: str,
    ctx: RepContext,
    i: int | None = None,
    j: int | None = None,
    l: int | None = None,
    p: int | None = None,
    eps: int | None = None,
    form: SkewForm | None = None,
    frame: FrameData | None = None,
    mode: str = "lambda",
    bound: int = 3,
) -> RelationOutcome:
    """Check one Hall-side identity exactly, coefficientwise at the prime.

    ``serre``/``high-serre`` evaluate alternating sums of simple-object
    words in the Ringel twist.  ``psi-hom``, ``rho-iso`` and
    ``star-closed-form`` sweep all iso-class pairs of total dimension up
    to `bound`; the first failing pair is returned as the witness.
    """
    if kind not in HALL_RELATION_KINDS:
        raise ParameterError(f"unknown Hall relation kind {kind!r}")
    ring = QuarticRing(ctx.q)
    n = ctx.quiver.n

    if kind in ("serre", "high-serre"):
        if i is None or j is None:
            raise ParameterError(f"kind {kind!r} needs vertices i and j")
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise ParameterError(f"bad vertex pair ({i},{j})")
        d_i = ctx.quiver.valuations[i]
        c_ij = -ctx.quiver.ext_matrix[i][j] - ctx.quiver.rprime()[i][j]
        if kind == "serre":
            top, power_j = 1 - c_ij, 1
        else:
            if l is None or p is None or eps is None:
                raise ParameterError("high-serre needs l, p and eps")
            if l < 1 or p < 1:
                raise ParameterError("l and p must be positive integers")
            if eps not in (1, -1):
                raise ParameterError("eps must be +1 or -1")
            if p < -l * c_ij:
                raise ParameterError(f"high-serre needs p >= {-l * c_ij}, got {p}")
            top, power_j = p + 1, l
        ctx.raise_bound(top + power_j)
        unit = HallElement.basis(ctx, ((0,) * n, 0))
        u_i = HallElement.simple(ctx, i)
        u_j = HallElement.simple(ctx, j)
        uj_l = unit
        for _ in range(power_j):
            uj_l = hall_product(uj_l, u_j, "v")
        powers = [unit]
        for _ in range(top):
            powers.append(hall_product(powers[-1], u_i, "v"))

        total = HallElement.zero(ctx)
        for t in range(top + 1):
            sign = -1 if t % 2 else 1
            coef = ring.coerce(gauss_binomial(top, t, d_i))
            if kind == "high-serre":
                coef = coef * ring.w_pow(2 * d_i * eps * (p + l * c_ij) * t)
            word = hall_product(hall_product(powers[top - t], uj_l, "v"), powers[t], "v")
            total = total + word.scaled(sign * coef)
        params = {"i": i, "j": j}
        if kind == "high-serre":
            params.update({"l": l, "p": p, "eps": eps})
        return RelationOutcome(kind, params, total.is_zero, None if total.is_zero else total)

    if frame is None:
        raise ParameterError(f"kind {kind!r} needs the principal frame")
    ctx.raise_bound(bound)

    if kind == "psi-hom":
        if form is None:
            raise ParameterError("psi-hom needs a skew form")
        for hm, hn in _class_pairs(ctx, bound):
            left = psi_map(hall_product(HallElement.basis(ctx, hm), HallElement.basis(ctx, hn), mode, form, frame), form, frame)
            right = psi_map(HallElement.basis(ctx, hm), form, frame) * psi_map(HallElement.basis(ctx, hn), form, frame)
            if left != right:
                return RelationOutcome(kind, {"M": hm, "N": hn, "mode": mode}, False, left - right)
        return RelationOutcome(kind, {"bound": bound, "mode": mode}, True, None)

    if kind == "rho-iso":
        if form is None:
            raise ParameterError("rho-iso needs a skew form")
        for hm, hn in _class_pairs(ctx, bound):
            um, un = HallElement.basis(ctx, hm), HallElement.basis(ctx, hn)
            left = rho_rescale(hall_product(um, un, "v"))
            right = hall_product(rho_rescale(um), rho_rescale(un), "lambda", form, frame)
            if left != right:
                return RelationOutcome(kind, {"M": hm, "N": hn}, False, left - right)
        return RelationOutcome(kind, {"bound": bound}, True, None)

    # star-closed-form
    if form is None:
        raise ParameterError("star-closed-form needs a skew form")
    for hm, hn in _class_pairs(ctx, bound):
        um, un = HallElement.basis(ctx, hm), HallElement.basis(ctx, hn)
        left = hall_product(um, un, "lambda", form, frame)
        shift = euler_form(ctx.euler, hn[0], hm[0]) + 3 * euler_form(ctx.euler, hm[0], hn[0])
        right = hall_product(um, un, "plain").scaled(ring.w_pow(shift))
        if left != right:
            return RelationOutcome(kind, {"M": hm, "N": hn}, False, left - right)
    return RelationOutcome(kind, {"bound": bound}, True, None)
