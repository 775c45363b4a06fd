"""Brute-force representation theory of acyclic quivers over F_q.

A representation assigns a matrix over F_q to every arrow; the base
change group prod_v GL(m_v, F_q) acts, and isomorphism classes are its
orbits.  This module enumerates orbits exhaustively (flood fill with
elementary generators), so every count downstream -- automorphism
orders, subobject censuses, Grassmannian cardinalities -- is correct by
construction rather than by classification theorems.

Restrictions: trivial valuations (d_i = 1) and acyclic quivers, so all
representations are nilpotent and the category is hereditary with the
standard two-step projective resolution.  The matrix/torus side of the
package has no such restriction.

States are flat tuples of field elements (row-major per arrow, arrows in
the canonical order of :func:`qhall.cartan.arrow_list`); the canonical
representative of an orbit is its lexicographically least state.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

from .cartan import ValuedQuiver, arrow_list, euler_form, euler_matrix, validate_quiver
from .exactring import is_prime

Handle = tuple[tuple[int, ...], int]  # (dimension vector, class index)


class BoundExceeded(ValueError):
    """The requested computation is above the configured size bound."""


# -- F_p matrices (tuples of row tuples, entries reduced mod p) -------

def _zero(r: int, c: int):
    return tuple((0,) * c for _ in range(r))


def _mmul(a, b, p: int):
    if not a or not a[0]:
        return _zero(len(a), len(b[0]) if b else 0)
    if not b:
        return _zero(len(a), 0)
    cols = len(b[0])
    inner = len(b)
    return tuple(
        tuple(sum(row[k] * b[k][j] for k in range(inner)) % p for j in range(cols))
        for row in a
    )


def _rref(rows, p: int):
    """Row-reduce over F_p; returns (reduced rows, pivot columns)."""
    work = [list(r) for r in rows]
    n_cols = len(work[0]) if work else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot = next((k for k in range(r, len(work)) if work[k][c]), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = pow(work[r][c], p - 2, p)
        work[r] = [(x * inv) % p for x in work[r]]
        for k in range(len(work)):
            if k != r and work[k][c]:
                f = work[k][c]
                work[k] = [(x - f * y) % p for x, y in zip(work[k], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return [row for row in work[:r]], pivots


def _rank(rows, p: int) -> int:
    return len(_rref(rows, p)[0])


def _inv(a, p: int):
    n = len(a)
    work = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    reduced, pivots = _rref(work, p)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix not invertible")
    return tuple(tuple(row[n:]) for row in reduced)


@lru_cache(maxsize=None)
def _subspaces(m: int, k: int, p: int):
    """All k-dimensional subspaces of F_p^m as RREF row-basis tuples."""
    if k == 0:
        return ((),)
    out = []
    for pivots in combinations(range(m), k):
        free = []
        for r in range(k):
            for c in range(pivots[r] + 1, m):
                if c not in pivots:
                    free.append((r, c))
        for values in product(range(p), repeat=len(free)):
            rows = [[0] * m for _ in range(k)]
            for r in range(k):
                rows[r][pivots[r]] = 1
            for (r, c), val in zip(free, values):
                rows[r][c] = val
            out.append(tuple(tuple(r) for r in rows))
    return tuple(out)


def all_subspaces(m: int, p: int):
    for k in range(m + 1):
        yield from _subspaces(m, k, p)


def _in_rowspan(vec, rref_rows, p: int) -> bool:
    v = list(vec)
    for row in rref_rows:
        c = next(i for i, x in enumerate(row) if x)
        if v[c]:
            f = v[c]
            v = [(x - f * y) % p for x, y in zip(v, row)]
    return not any(v)


def gl_order(k: int, q: int) -> int:
    out = 1
    for i in range(k):
        out *= q**k - q**i
    return out


@lru_cache(maxsize=None)
def _primitive_root(p: int) -> int:
    for u in range(2, p):
        seen, x = set(), 1
        for _ in range(p - 1):
            x = x * u % p
            seen.add(x)
        if len(seen) == p - 1:
            return u
    return 1


# -- representations ---------------------------------------------------

@dataclass(frozen=True)
class FqRep:
    """One matrix per arrow of an acyclic, trivially valued quiver."""

    quiver: ValuedQuiver
    q: int
    dim: tuple[int, ...]
    maps: tuple  # aligned with arrow_list(quiver)

    def __post_init__(self):
        if not is_prime(self.q):
            raise ValueError(f"field order {self.q} is not prime")
        if any(d != 1 for d in self.quiver.valuations):
            raise ValueError("representation side requires trivial valuations")
        if not self.quiver.is_acyclic:
            raise ValueError("representation side requires an acyclic quiver")
        if len(self.dim) != self.quiver.n or any(d < 0 for d in self.dim):
            raise ValueError("bad dimension vector")
        arrows = arrow_list(self.quiver)
        if len(self.maps) != len(arrows):
            raise ValueError(f"expected {len(arrows)} arrow maps, got {len(self.maps)}")
        for (src, tgt), mat in zip(arrows, self.maps):
            r, c = len(mat), len(mat[0]) if mat else 0
            if r != self.dim[tgt] or (r and c != self.dim[src]):
                raise ValueError(f"arrow ({src},{tgt}) map has shape {r}x{c}")

    @classmethod
    def simple(cls, quiver: ValuedQuiver, vertex: int, q: int) -> FqRep:
        dim = tuple(int(v == vertex) for v in range(quiver.n))
        return cls.from_state(quiver, q, dim, ())

    @classmethod
    def from_state(cls, quiver: ValuedQuiver, q: int, dim, state) -> FqRep:
        dim = tuple(dim)
        maps = []
        pos = 0
        for src, tgt in arrow_list(quiver):
            r, c = dim[tgt], dim[src]
            block = state[pos : pos + r * c]
            pos += r * c
            maps.append(tuple(tuple(block[i * c + j] for j in range(c)) for i in range(r)))
        return cls(quiver, q, dim, tuple(maps))

    def state(self) -> tuple[int, ...]:
        flat = []
        for mat in self.maps:
            for row in mat:
                flat.extend(row)
        return tuple(flat)


@dataclass(frozen=True)
class IsoClass:
    dim: tuple[int, ...]
    index: int
    canonical_state: tuple[int, ...]
    orbit_size: int
    aut_order: int


@dataclass(frozen=True)
class IsoClassTable:
    """Orbit decomposition of all representations with one dimension vector."""

    quiver: ValuedQuiver
    q: int
    dim: tuple[int, ...]
    classes: tuple[IsoClass, ...]
    lookup: dict  # state -> class index
    total: int  # number of matrix tuples

    def handle(self, index: int) -> Handle:
        return (self.dim, index)

    def representative(self, index: int) -> FqRep:
        return FqRep.from_state(self.quiver, self.q, self.dim, self.classes[index].canonical_state)


def _generators(quiver: ValuedQuiver, dim, q: int):
    """Base-change generators as cheap row/column edits on flat states.

    Each generator is a unit transvection or a one-slot scaling at a
    vertex; together they generate prod_v GL(m_v) under closure.
    """
    arrows = arrow_list(quiver)
    offsets = []
    pos = 0
    for src, tgt in arrows:
        offsets.append(pos)
        pos += dim[tgt] * dim[src]
    total_len = pos
    u = _primitive_root(q)

    def make_apply(vertex, kind, r, s, scale):
        affected = []
        for idx, (src, tgt) in enumerate(arrows):
            rows, cols = dim[tgt], dim[src]
            if tgt == vertex:
                affected.append((offsets[idx], rows, cols, "left"))
            if src == vertex:
                affected.append((offsets[idx], rows, cols, "right"))

        def apply(state):
            out = list(state)
            for off, rows, cols, side in affected:
                if kind == "transvect":
                    if side == "left":
                        # rows of g . M: row r += scale * row s
                        a, b = off + r * cols, off + s * cols
                        for c in range(cols):
                            out[a + c] = (out[a + c] + scale * state[b + c]) % q
                    else:
                        # M . g^-1: col s -= scale * col r
                        a, b = off + s, off + r
                        for c in range(rows):
                            out[a + c * cols] = (out[a + c * cols] - scale * state[b + c * cols]) % q
                else:  # scale slot 0
                    if side == "left":
                        a = off + r * cols
                        for c in range(cols):
                            out[a + c] = out[a + c] * scale % q
                    else:
                        inv = pow(scale, q - 2, q)
                        a = off + r
                        for c in range(rows):
                            out[a + c * cols] = out[a + c * cols] * inv % q
            return tuple(out)

        return apply

    gens = []
    for v in range(quiver.n):
        k = dim[v]
        for r in range(k):
            for s in range(k):
                if r != s:
                    gens.append(make_apply(v, "transvect", r, s, 1))
        if q > 2 and k >= 1:
            gens.append(make_apply(v, "scale", 0, 0, u))
    return gens, total_len


class RepContext:
    """Cached tables and censuses for one (quiver, q) pair.

    Size guard: any dimension vector with total above `bound` raises
    BoundExceeded.  The bound is configuration, not a hard limit.
    """

    def __init__(self, quiver: ValuedQuiver, q: int, bound: int = 5):
        validate_quiver(quiver)
        if not is_prime(q):
            raise ValueError(f"field order {q} is not prime")
        if any(d != 1 for d in quiver.valuations):
            raise ValueError("representation side requires trivial valuations")
        if not quiver.is_acyclic:
            raise ValueError("representation side requires an acyclic quiver")
        self.quiver = quiver
        self.q = q
        self.bound = bound
        self.euler = euler_matrix(quiver)
        self.arrows = arrow_list(quiver)
        self._tables: dict[tuple[int, ...], IsoClassTable] = {}
        self._censuses: dict[Handle, dict] = {}
        self.topo = quiver.topological_order()

    def raise_bound(self, bound: int) -> None:
        """Opt in to larger dimension vectors (the guard is configuration)."""
        if bound > self.bound:
            self.bound = bound

    # -- orbit tables ----------------------------------------------------

    def table(self, dim) -> IsoClassTable:
        dim = tuple(dim)
        if dim not in self._tables:
            self._tables[dim] = self._build_table(dim)
        return self._tables[dim]

    def _build_table(self, dim) -> IsoClassTable:
        if len(dim) != self.quiver.n or any(d < 0 for d in dim):
            raise ValueError(f"bad dimension vector {dim}")
        if sum(dim) > self.bound:
            raise BoundExceeded(f"total dimension {sum(dim)} exceeds bound {self.bound}")
        q = self.q
        gens, total_len = _generators(self.quiver, dim, q)
        group_order = 1
        for v in range(self.quiver.n):
            group_order *= gl_order(dim[v], q)
        lookup: dict[tuple[int, ...], int] = {}
        canon: list[tuple[int, ...]] = []
        sizes: list[int] = []
        for state in product(range(q), repeat=total_len):
            if state in lookup:
                continue
            orbit = {state}
            frontier = [state]
            while frontier:
                cur = frontier.pop()
                for g in gens:
                    new = g(cur)
                    if new not in orbit:
                        orbit.add(new)
                        frontier.append(new)
            index = len(canon)
            canon.append(min(orbit))
            sizes.append(len(orbit))
            for member in orbit:
                lookup[member] = index
        # reorder classes by canonical state for determinism
        order = sorted(range(len(canon)), key=lambda i: canon[i])
        remap = {old: new for new, old in enumerate(order)}
        classes = []
        for new, old in enumerate(order):
            if group_order % sizes[old]:
                raise RuntimeError("orbit size does not divide the group order")
            classes.append(
                IsoClass(dim, new, canon[old], sizes[old], group_order // sizes[old])
            )
        lookup = {s: remap[i] for s, i in lookup.items()}
        return IsoClassTable(self.quiver, q, dim, tuple(classes), lookup, q**total_len)

    def class_of(self, rep: FqRep) -> Handle:
        if rep.quiver != self.quiver or rep.q != self.q:
            raise ValueError("representation belongs to a different context")
        table = self.table(rep.dim)
        return (rep.dim, table.lookup[rep.state()])

    def representative(self, handle: Handle) -> FqRep:
        dim, index = handle
        return self.table(dim).representative(index)

    def aut_order(self, handle: Handle) -> int:
        dim, index = handle
        return self.table(dim).classes[index].aut_order

    def simple_handle(self, vertex: int) -> Handle:
        return self.class_of(FqRep.simple(self.quiver, vertex, self.q))

    # -- subobject census -------------------------------------------------

    def census(self, handle: Handle) -> dict:
        """Counts of subrepresentation/quotient class pairs of one object."""
        if handle not in self._censuses:
            self._censuses[handle] = self._build_census(handle)
        return self._censuses[handle]

    def _build_census(self, handle: Handle) -> dict:
        rep = self.representative(handle)
        q = self.q
        n = self.quiver.n
        dim = rep.dim
        arrows = self.arrows
        into = [[] for _ in range(n)]  # arrows grouped by target
        for idx, (src, tgt) in enumerate(arrows):
            into[tgt].append((idx, src))
        counts: dict[tuple[Handle, Handle], int] = {}
        topo = self.topo

        def recurse(pos: int, chosen: dict):
            if pos == n:
                key = self._classify_pair(rep, chosen)
                counts[key] = counts.get(key, 0) + 1
                return
            v = topo[pos]
            for sub in all_subspaces(dim[v], q):
                ok = True
                for idx, src in into[v]:
                    if src not in chosen:
                        continue  # arrow from a later vertex cannot occur (topo order)
                    mat = rep.maps[idx]
                    for row in chosen[src]:
                        image = tuple(
                            sum(mat[i][k] * row[k] for k in range(dim[src])) % q
                            for i in range(dim[v])
                        )
                        if not _in_rowspan(image, sub, q):
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    chosen[v] = sub
                    recurse(pos + 1, chosen)
                    del chosen[v]

        recurse(0, {})
        return counts

    def _classify_pair(self, rep: FqRep, chosen: dict) -> tuple[Handle, Handle]:
        """Iso classes of the subrepresentation spanned by `chosen` and its quotient."""
        q = self.q
        n = self.quiver.n
        sub_dim = tuple(len(chosen[v]) for v in range(n))
        quot_dim = tuple(rep.dim[v] - sub_dim[v] for v in range(n))
        basis = {}
        basis_inv = {}
        for v in range(n):
            rows = chosen[v]
            pivots = [next(i for i, x in enumerate(row) if x) for row in rows]
            complement = [c for c in range(rep.dim[v]) if c not in pivots]
            cols = [tuple(row) for row in rows] + [
                tuple(int(i == c) for i in range(rep.dim[v])) for c in complement
            ]
            full = tuple(tuple(cols[j][i] for j in range(len(cols))) for i in range(rep.dim[v]))
            basis[v] = full
            basis_inv[v] = _inv(full, q) if rep.dim[v] else ()
        sub_maps = []
        quot_maps = []
        for idx, (src, tgt) in enumerate(self.arrows):
            t = _mmul(basis_inv[tgt], _mmul(rep.maps[idx], basis[src], q), q)
            k_t, k_s = sub_dim[tgt], sub_dim[src]
            sub_maps.append(tuple(row[:k_s] for row in t[:k_t]))
            quot_maps.append(tuple(row[k_s:] for row in t[k_t:]))
        sub = FqRep(self.quiver, q, sub_dim, tuple(sub_maps))
        quot = FqRep(self.quiver, q, quot_dim, tuple(quot_maps))
        return (self.class_of(sub), self.class_of(quot))


@lru_cache(maxsize=None)
def rep_context(quiver: ValuedQuiver, q: int) -> RepContext:
    """One shared cache of tables and censuses per (quiver, q)."""
    return RepContext(quiver, q)


# -- spec-level operations ---------------------------------------------

def enumerate_iso_classes(quiver: ValuedQuiver, dim, q: int, bound: int = 5) -> IsoClassTable:
    ctx = rep_context(quiver, q)
    ctx.raise_bound(bound)
    return ctx.table(tuple(dim))


def iso_class_of(rep: FqRep, table: IsoClassTable) -> int:
    if rep.quiver != table.quiver or rep.q != table.q or rep.dim != table.dim:
        raise ValueError("representation does not match the table")
    return table.lookup[rep.state()]


def _hom_system_rank(m: FqRep, n: FqRep) -> tuple[int, int, int]:
    """(rank, n_vars, n_eqs) of the intertwiner system f_t M_a = N_a f_s."""
    if m.quiver != n.quiver or m.q != n.q:
        raise ValueError("representations live over different quivers or fields")
    p = m.q
    quiver = m.quiver
    arrows = arrow_list(quiver)
    var_offset = []
    pos = 0
    for v in range(quiver.n):
        var_offset.append(pos)
        pos += n.dim[v] * m.dim[v]  # f_v is n_v x m_v
    n_vars = pos
    rows = []
    for idx, (src, tgt) in enumerate(arrows):
        ma, na = m.maps[idx], n.maps[idx]
        for i in range(n.dim[tgt]):
            for j in range(m.dim[src]):
                row = [0] * n_vars
                # (f_tgt . M_a)_{ij} = sum_k f_tgt[i][k] M_a[k][j]
                for k in range(m.dim[tgt]):
                    row[var_offset[tgt] + i * m.dim[tgt] + k] = (
                        row[var_offset[tgt] + i * m.dim[tgt] + k] + ma[k][j]
                    ) % p
                # -(N_a . f_src)_{ij} = -sum_k N_a[i][k] f_src[k][j]
                for k in range(n.dim[src]):
                    row[var_offset[src] + k * m.dim[src] + j] = (
                        row[var_offset[src] + k * m.dim[src] + j] - na[i][k]
                    ) % p
                rows.append(tuple(row))
    n_eqs = len(rows)
    rank = _rank(rows, p) if rows and n_vars else 0
    return rank, n_vars, n_eqs


def hom_dim(m: FqRep, n: FqRep) -> int:
    """dim Hom(M, N): solution space of the intertwining linear system."""
    rank, n_vars, _ = _hom_system_rank(m, n)
    return n_vars - rank


def ext_dim(m: FqRep, n: FqRep) -> int:
    """dim Ext^1(M, N) via heredity: hom_dim minus the Euler form."""
    e = euler_matrix(m.quiver)
    value = hom_dim(m, n) - euler_form(e, m.dim, n.dim)
    if value < 0:
        raise RuntimeError("negative Ext dimension; Euler data inconsistent")
    return value


def ext_dim_direct(m: FqRep, n: FqRep) -> int:
    """dim Ext^1(M, N) as the cokernel of the standard resolution's map."""
    rank, _, n_eqs = _hom_system_rank(m, n)
    return n_eqs - rank


def aut_order(m: FqRep, bound: int = 5) -> int:
    """|Aut(M)| through the orbit table (orbit-stabilizer)."""
    ctx = rep_context(m.quiver, m.q)
    ctx.raise_bound(bound)
    return ctx.aut_order(ctx.class_of(m))


def subobject_census(l: FqRep, ctx: RepContext | None = None) -> dict:
    """Map (sub class, quotient class) -> number of such subrepresentations."""
    if ctx is None:
        ctx = rep_context(l.quiver, l.q)
    return ctx.census(ctx.class_of(l))


def grassmannian_count(l: FqRep, e, ctx: RepContext | None = None) -> int:
    """Number of subrepresentations of L with dimension vector e."""
    e = tuple(e)
    census = subobject_census(l, ctx)
    return sum(
        count for (sub, _quot), count in census.items() if sub[0] == e
    )
