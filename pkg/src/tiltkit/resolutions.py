"""Projective covers, minimal resolutions, Ext groups, injective
coresolutions, and endomorphism algebras of module direct sums.

Conventions
-----------
Modules are right modules written with row vectors, so a map applies as
``v @ F`` and "f then g" is ``F @ G``.  Endomorphism rings multiply by
``x * y = x after y``: the matrix of the product is ``W_y @ W_x``.  With this
product ``Hom(T, E)`` is a right module over ``End(T)`` via ``f * x = f after x``
and the total module ``T`` is a left module via ``x * t = t @ W_x``.

Injective coresolutions are computed by duality: dualise, take the minimal
projective resolution over the opposite algebra, and dualise back.
"""

from dataclasses import dataclass
from itertools import product as iter_product
from typing import Optional, Sequence

from .algebra import FinDimAlgebra
from .linalg import Matrix, Subspace
from .modules import (
    Module,
    ModuleMap,
    direct_sum,
    dual_module,
    find_isomorphism,
    hom_space,
    indecomposable_projective,
    simple_module,
    zero_module,
)

RESOLUTION_CAP = 10
LOCAL_RING_ENUM_CAP = 4096

_OPPOSITE_CACHE: dict = {}


def _opposite_of(algebra: FinDimAlgebra) -> FinDimAlgebra:
    cached = _OPPOSITE_CACHE.get(algebra.key)
    if cached is None:
        cached = algebra.opposite()
        _OPPOSITE_CACHE[algebra.key] = cached
    return cached


def _flatten(mat: Matrix) -> tuple:
    return tuple(x for row in mat.rows for x in row)


def _coord_solver(field, rows: Sequence[Sequence], ambient: int):
    """Coordinates with respect to a fixed list of independent row vectors.

    Unlike :meth:`Subspace.coords`, which reads off the echelonised basis, the
    returned callable expresses vectors in the *given* row order; it raises
    ``ValueError`` for vectors outside the span.
    """
    mat = Matrix(field, rows, ambient)
    res = mat.rref()

    def coords(vec):
        y = [field.zero] * mat.nrows
        residual = list(vec)
        for r, p in enumerate(res.pivots):
            c = residual[p]
            if c != field.zero:
                y[r] = c
                residual = [field.sub(x, field.mul(c, v)) for x, v in zip(residual, res.matrix.row(r))]
        if any(x != field.zero for x in residual):
            raise ValueError("vector lies outside the declared span")
        return tuple((Matrix(field, [y], mat.nrows) @ res.transform).row(0))

    return coords


# ---------------------------------------------------------------------------
# projective covers and minimal resolutions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cover:
    """A projective cover: ``map`` is a surjection ``module -> target`` whose
    kernel lies in the radical; ``vertices`` lists the idempotent position of
    each indecomposable summand of ``module``."""

    module: Module
    map: ModuleMap
    vertices: tuple


def projective_cover(m: Module) -> Cover:
    """The projective cover of ``m``, built from lifts of a basis of the top."""
    alg = m.algebra
    f = alg.field
    if m.dim == 0:
        z = zero_module(alg)
        return Cover(z, ModuleMap.zero(z, m), ())
    rad = m.radical_subspace()
    lifts = []  # (vertex position, vector of m generating a top basis element)
    span = rad
    for gi in range(len(alg.idempotent_indices)):
        image = m.idempotent_image(gi)
        for r in range(image.dim):
            v = image.basis.row(r)
            if not span.contains_vector(v):
                lifts.append((gi, v))
                span = Subspace.from_rows(f, m.dim, list(span.basis.rows) + [list(v)])
    if span.dim != m.dim:
        raise ValueError("top of the module is not spanned by idempotent images")

    cache: dict = {}
    summands = []
    for gi, _ in lifts:
        if gi not in cache:
            cache[gi] = indecomposable_projective(alg, gi)
        summands.append(cache[gi])
    total, _, _ = direct_sum([p for p, _ in summands])
    rows = []
    for (gi, v), (proj, incl) in zip(lifts, summands):
        for r in range(proj.dim):
            coords = incl.matrix.row(r)  # the algebra element this basis row is
            rows.append((Matrix(f, [v]) @ m.action_of(coords)).row(0))
    cover_map = ModuleMap(total, m, Matrix(f, rows), check=True)
    if not cover_map.is_surjective():
        raise ValueError("projective cover construction failed to surject")
    return Cover(total, cover_map, tuple(gi for gi, _ in lifts))


@dataclass(frozen=True)
class Resolution:
    """A finite minimal projective resolution of ``target``.

    ``maps[0]`` is the augmentation ``terms[0] -> target``; ``maps[i]`` for
    ``i >= 1`` is the differential ``terms[i] -> terms[i-1]``.
    """

    target: Module
    terms: tuple
    maps: tuple
    covers: tuple

    @property
    def augmentation(self) -> ModuleMap:
        return self.maps[0]

    @property
    def length(self) -> int:
        return len(self.terms) - 1


def minimal_projective_resolution(m: Module, cap: int = RESOLUTION_CAP) -> Resolution:
    """Iterated projective covers of syzygies, until the kernel vanishes."""
    alg = m.algebra
    if m.dim == 0:
        z = zero_module(alg)
        zmap = ModuleMap.zero(z, m)
        return Resolution(m, (z,), (zmap,), (Cover(z, zmap, ()),))
    terms = []
    maps = []
    covers = []
    current = m
    incl_prev: Optional[ModuleMap] = None
    for step in range(cap + 2):
        if step > cap:
            raise ValueError(f"resolution exceeds the length cap {cap}")
        cover = projective_cover(current)
        covers.append(cover)
        terms.append(cover.module)
        if incl_prev is None:
            maps.append(cover.map)
        else:
            maps.append(cover.map.compose(then=incl_prev))
        kernel, incl = cover.map.kernel()
        if kernel.dim == 0:
            return Resolution(m, tuple(terms), tuple(maps), tuple(covers))
        current = kernel
        incl_prev = incl
    raise ValueError(f"resolution exceeds the length cap {cap}")


def projective_dimension(m: Module, cap: int = RESOLUTION_CAP) -> int:
    """Length of the minimal projective resolution (-1 for the zero module)."""
    if m.dim == 0:
        return -1
    return minimal_projective_resolution(m, cap).length


def global_dimension(algebra: FinDimAlgebra, cap: int = RESOLUTION_CAP) -> int:
    """Maximum projective dimension of the simple modules."""
    return max(
        projective_dimension(simple_module(algebra, gi), cap)
        for gi in range(len(algebra.idempotent_indices))
    )


# ---------------------------------------------------------------------------
# Ext groups, two engines
# ---------------------------------------------------------------------------

def _hom_span(basis: Sequence[ModuleMap], src_dim: int, tgt_dim: int, field) -> Subspace:
    return Subspace.from_rows(field, src_dim * tgt_dim, [_flatten(h.matrix) for h in basis])


def _cochain_rank(basis_from, span_to, transform) -> int:
    """Rank of a map between hom spaces; ``transform(h)`` is the image map."""
    if not basis_from or span_to.dim == 0:
        return 0
    rows = [span_to.coords(_flatten(transform(h).matrix)) for h in basis_from]
    return Matrix(span_to.field, rows).rank()


def ext_group(m: Module, n: Module, i: int, cap: int = RESOLUTION_CAP) -> int:
    """dim Ext^i(m, n), computed from a minimal projective resolution of m."""
    if i < 0 or m.dim == 0 or n.dim == 0:
        return 0
    res = minimal_projective_resolution(m, cap)
    if i > res.length:
        return 0
    basis_i = hom_space(res.terms[i], n)
    if i < res.length:
        span_next = _hom_span(
            hom_space(res.terms[i + 1], n), res.terms[i + 1].dim, n.dim, n.algebra.field
        )
        rank_out = _cochain_rank(
            basis_i, span_next, lambda h: res.maps[i + 1].compose(then=h)
        )
    else:
        rank_out = 0
    kernel_dim = len(basis_i) - rank_out
    if i == 0:
        return kernel_dim
    span_i = _hom_span(basis_i, res.terms[i].dim, n.dim, n.algebra.field)
    rank_in = _cochain_rank(
        hom_space(res.terms[i - 1], n), span_i, lambda h: res.maps[i].compose(then=h)
    )
    return kernel_dim - rank_in


def ext_group_injective(m: Module, n: Module, i: int, cap: int = RESOLUTION_CAP) -> int:
    """dim Ext^i(m, n), computed from an injective coresolution of n.

    An independent engine: it resolves the second argument over the opposite
    algebra, so it shares no resolution data with :func:`ext_group`.
    """
    if i < 0 or m.dim == 0 or n.dim == 0:
        return 0
    cores = injective_coresolution(n, cap)
    top = len(cores.terms) - 1
    if i > top:
        return 0
    basis_i = hom_space(m, cores.terms[i])
    field = m.algebra.field
    if i < top:
        span_next = _hom_span(hom_space(m, cores.terms[i + 1]), m.dim, cores.terms[i + 1].dim, field)
        rank_out = _cochain_rank(basis_i, span_next, lambda h: h.compose(then=cores.maps[i]))
    else:
        rank_out = 0
    kernel_dim = len(basis_i) - rank_out
    if i == 0:
        return kernel_dim
    span_i = _hom_span(basis_i, m.dim, cores.terms[i].dim, field)
    rank_in = _cochain_rank(
        hom_space(m, cores.terms[i - 1]), span_i, lambda h: h.compose(then=cores.maps[i - 1])
    )
    return kernel_dim - rank_in


# ---------------------------------------------------------------------------
# injective coresolutions by duality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Coresolution:
    """A finite injective coresolution ``target >-> terms[0] -> terms[1] -> ...``;
    ``maps[s]`` is the differential ``terms[s] -> terms[s+1]``."""

    target: Module
    terms: tuple
    maps: tuple
    augmentation: ModuleMap


def injective_coresolution(e: Module, cap: int = RESOLUTION_CAP) -> Coresolution:
    """Dualise, resolve minimally over the opposite algebra, dualise back."""
    alg = e.algebra
    aop = _opposite_of(alg)
    res = minimal_projective_resolution(dual_module(e, aop), cap)
    terms = tuple(dual_module(t, alg) for t in res.terms)
    maps = tuple(
        ModuleMap(terms[s], terms[s + 1], res.maps[s + 1].matrix.transpose(), check=True)
        for s in range(len(terms) - 1)
    )
    augmentation = ModuleMap(e, terms[0], res.maps[0].matrix.transpose(), check=True)
    return Coresolution(e, terms, maps, augmentation)


# ---------------------------------------------------------------------------
# endomorphism algebras
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomOverEnd:
    """``Hom(T, E)`` as a right module over ``End(T)``, with its map basis and
    a solver expressing arbitrary maps in that basis."""

    module: Module
    basis: tuple
    coords: object  # callable: flattened map matrix -> coordinates in `basis`


@dataclass(frozen=True)
class EndData:
    """An endomorphism algebra ``A = End(T)`` of a direct sum ``T``, with the
    translation data that makes modules move between the two sides."""

    algebra: FinDimAlgebra
    total: Module
    summands: tuple
    inclusions: tuple
    projections: tuple
    endo_maps: tuple  # ModuleMap T -> T realising each algebra basis element
    coords: object    # callable: flattened endo matrix -> algebra coordinates

    def coords_of_endo(self, endo: ModuleMap) -> tuple:
        """Coordinates in the algebra basis of an endomorphism of the total."""
        return self.coords(_flatten(endo.matrix))

    def left_action(self, coords: Sequence) -> Matrix:
        """Matrix ``W_x`` of the left action ``x * t = t @ W_x`` on the total."""
        f = self.algebra.field
        out = Matrix.zeros(f, self.total.dim, self.total.dim)
        for c, endo in zip(coords, self.endo_maps):
            c = f.coerce(c)
            if c != f.zero:
                out = out + endo.matrix.scale(c)
        return out

    def hom_module(self, e: Module) -> HomOverEnd:
        """``Hom(T, e)`` as a right module over the endomorphism algebra."""
        f = self.algebra.field
        basis = tuple(hom_space(self.total, e))
        dim = len(basis)
        if dim == 0:
            empty = Matrix(f, [])
            mod = Module(self.algebra, 0, [empty] * self.algebra.dim, check=False)
            return HomOverEnd(mod, (), lambda vec: ())
        solver = _coord_solver(f, [_flatten(h.matrix) for h in basis], self.total.dim * e.dim)
        action = []
        for endo in self.endo_maps:
            rows = [solver(_flatten(endo.matrix @ h.matrix)) for h in basis]
            action.append(Matrix(f, rows, dim))
        return HomOverEnd(Module(self.algebra, dim, action, check=True), basis, solver)

    def hom_induced(self, g: ModuleMap, src: HomOverEnd, tgt: HomOverEnd) -> ModuleMap:
        """The module map ``Hom(T, g): Hom(T, source g) -> Hom(T, target g)``."""
        f = self.algebra.field
        if src.module.dim == 0 or tgt.module.dim == 0:
            return ModuleMap.zero(src.module, tgt.module)
        rows = [tgt.coords(_flatten(h.matrix @ g.matrix)) for h in src.basis]
        return ModuleMap(src.module, tgt.module, Matrix(f, rows, tgt.module.dim), check=True)


def _local_radical_rows(end_basis: Sequence[ModuleMap], enum_cap: int) -> list:
    """Flattened matrices spanning the radical of a local endomorphism ring.

    Enumerates the whole ring (bounded by ``enum_cap``), collects the singular
    elements, and certifies they form a hyperplane not containing the identity.
    """
    if not end_basis:
        raise ValueError("summand has no endomorphisms; is it the zero module?")
    f = end_basis[0].matrix.field
    d = len(end_basis)
    if f.order ** d > enum_cap:
        raise ValueError(
            f"endomorphism ring too large to certify local ({f.order}^{d} elements)"
        )
    dim_t = end_basis[0].source.dim
    singular = []
    for combo in iter_product(f.elements(), repeat=d):
        w = Matrix.zeros(f, dim_t, dim_t)
        for c, h in zip(combo, end_basis):
            if c != f.zero:
                w = w + h.matrix.scale(c)
        if w.rank() < dim_t:
            singular.append(_flatten(w))
    span = Subspace.from_rows(f, dim_t * dim_t, singular)
    if span.dim != d - 1:
        raise ValueError(
            "summand endomorphism ring is not split local; use indecomposable "
            "summands over a splitting field"
        )
    if span.contains_vector(_flatten(Matrix.identity(f, dim_t))):
        raise ValueError("identity endomorphism lies in the singular span")
    return [list(span.basis.row(r)) for r in range(span.dim)]


def endomorphism_algebra(
    summands: Sequence[Module],
    labels: Optional[Sequence[str]] = None,
    enum_cap: int = LOCAL_RING_ENUM_CAP,
) -> EndData:
    """``End(T)`` for ``T`` the direct sum of pairwise non-isomorphic
    indecomposable summands, as a validated split basic algebra.

    Basis element ``t`` is realised by ``endo_maps[t]``; the piece ``e_i A e_j``
    corresponds to maps from summand ``j`` to summand ``i``.
    """
    summands = list(summands)
    if not summands:
        raise ValueError("need at least one summand")
    alg0 = summands[0].algebra
    for s in summands:
        if s.algebra.key != alg0.key:
            raise ValueError("summands live over different algebras")
        if s.dim == 0:
            raise ValueError("zero summands are not allowed")
    if labels is None:
        labels = tuple(f"T{i}" for i in range(len(summands)))
    labels = tuple(labels)
    if len(labels) != len(summands) or len(set(labels)) != len(labels):
        raise ValueError("labels must be distinct and match the summands")
    for i in range(len(summands)):
        for j in range(i + 1, len(summands)):
            if find_isomorphism(summands[i], summands[j]) is not None:
                raise ValueError(
                    f"summands {labels[i]} and {labels[j]} are isomorphic; "
                    "use a multiplicity-free sum"
                )

    f = alg0.field
    total, incls, projs = direct_sum(summands)
    r = len(summands)

    basis_maps = []
    basis_labels = []
    for i in range(r):
        basis_maps.append(
            ModuleMap(total, total, projs[i].matrix @ incls[i].matrix, check=False)
        )
        basis_labels.append(f"e_{labels[i]}")

    radical_start = r
    counter = 0
    for i in range(r):
        local = hom_space(summands[i], summands[i])
        for row in _local_radical_rows(local, enum_cap):
            h = Matrix(f, [row[t * summands[i].dim:(t + 1) * summands[i].dim] for t in range(summands[i].dim)])
            basis_maps.append(
                ModuleMap(total, total, projs[i].matrix @ h @ incls[i].matrix, check=False)
            )
            basis_labels.append(f"w{counter}_{labels[i]}_{labels[i]}")
            counter += 1
    for i in range(r):
        for j in range(r):
            if i == j:
                continue
            for h in hom_space(summands[j], summands[i]):
                basis_maps.append(
                    ModuleMap(total, total, projs[j].matrix @ h.matrix @ incls[i].matrix, check=False)
                )
                basis_labels.append(f"w{counter}_{labels[i]}_{labels[j]}")
                counter += 1

    flat_rows = [_flatten(w.matrix) for w in basis_maps]
    if Matrix(f, flat_rows, total.dim * total.dim).rank() != len(basis_maps):
        raise ValueError("endomorphism basis candidates are linearly dependent")
    if len(basis_maps) != len(hom_space(total, total)):
        raise ValueError("endomorphism basis candidates do not span End(T)")
    solver = _coord_solver(f, flat_rows, total.dim * total.dim)

    dim = len(basis_maps)
    structure = []
    for s in range(dim):
        row = []
        for t in range(dim):
            composite = basis_maps[t].matrix @ basis_maps[s].matrix  # apply t, then s
            row.append(solver(_flatten(composite)))
        structure.append(row)
    radical_rows = [
        [f.one if c == t else f.zero for c in range(dim)] for t in range(radical_start, dim)
    ]
    algebra = FinDimAlgebra(
        f,
        basis_labels,
        structure,
        tuple(range(r)),
        radical_rows,
    )
    return EndData(
        algebra,
        total,
        tuple(summands),
        tuple(incls),
        tuple(projs),
        tuple(basis_maps),
        solver,
    )
