"""Bounded cochain complexes of right modules.

Differentials raise the degree; a map of modules is a row-convention matrix,
so "f then g" is ``F @ G`` and the square condition for a chain map reads
``F_i @ d_target = d_source @ F_{i+1}``.

Cohomology carries a genuine module structure: cocycles form a submodule,
boundaries an invariant subspace inside it, and the quotient is validated.
Projective replacements are built by descending kernel covers (the kernel of
each mapping-cone differential is covered by a projective); injective
replacements arise from them by duality.
"""

from dataclasses import dataclass
from typing import Dict, Optional, Sequence

from .algebra import FinDimAlgebra
from .linalg import Matrix, Subspace, left_kernel_basis
from .modules import (
    Module,
    ModuleMap,
    direct_sum,
    dual_module,
    hom_space,
    submodule_module,
    quotient_module,
    zero_module,
)
from .resolutions import RESOLUTION_CAP, _opposite_of, projective_cover


@dataclass(frozen=True)
class CohomologyData:
    """One cohomology module of a complex, with translation helpers.

    ``to_class`` maps a cocycle (term coordinates) to its class; it raises for
    vectors that are not cocycles.  ``representative`` is a section picking a
    cocycle for each class.
    """

    module: Module
    cocycles: Subspace
    section: Matrix          # class coordinates -> a representative cocycle
    class_projection: Matrix # cocycle coordinates (in the cocycle basis) -> class

    def to_class(self, vector: Sequence) -> tuple:
        coords = self.cocycles.coords(vector)
        if self.module.dim == 0:
            return ()
        return (Matrix(self.module.algebra.field, [coords], self.class_projection.nrows)
                @ self.class_projection).row(0)

    def representative(self, coords: Sequence) -> tuple:
        return (Matrix(self.module.algebra.field, [list(coords)], self.section.nrows)
                @ self.section).row(0)


class BoundedComplex:
    """A bounded complex of modules over one algebra.

    ``terms[t]`` sits in degree ``min_degree + t``; ``diffs[t]`` maps it one
    degree up.  Zero terms at either end are trimmed on construction.
    """

    def __init__(
        self,
        algebra: FinDimAlgebra,
        min_degree: int,
        terms: Sequence[Module],
        diffs: Sequence[ModuleMap],
        check: bool = True,
    ) -> None:
        self.algebra = algebra
        terms = list(terms)
        diffs = list(diffs)
        if len(diffs) != max(len(terms) - 1, 0):
            raise ValueError("need exactly one differential between adjacent terms")
        if check:
            for t, m in enumerate(terms):
                if m.algebra.key != algebra.key:
                    raise ValueError("complex terms over different algebras")
            for t, d in enumerate(diffs):
                if d.source != terms[t] or d.target != terms[t + 1]:
                    raise ValueError(f"differential {t} does not match adjacent terms")
            for t in range(len(diffs) - 1):
                if not (diffs[t].matrix @ diffs[t + 1].matrix).is_zero():
                    raise ValueError(f"d o d is nonzero between degrees {min_degree + t} and {min_degree + t + 2}")
        while terms and terms[0].dim == 0:
            terms.pop(0)
            if diffs:
                diffs.pop(0)
            min_degree += 1
        while terms and terms[-1].dim == 0:
            terms.pop()
            if diffs:
                diffs.pop()
        if not terms:
            min_degree = 0
        self.min_degree = min_degree
        self.terms = tuple(terms)
        self.diffs = tuple(diffs)
        self._coh_cache: Dict[int, CohomologyData] = {}

    # -- construction ---------------------------------------------------------
    @staticmethod
    def from_module(m: Module, degree: int = 0) -> "BoundedComplex":
        return BoundedComplex(m.algebra, degree, [m], [])

    @staticmethod
    def zero(algebra: FinDimAlgebra) -> "BoundedComplex":
        return BoundedComplex(algebra, 0, [], [])

    # -- access ---------------------------------------------------------------
    @property
    def max_degree(self) -> int:
        return self.min_degree + len(self.terms) - 1

    def term(self, i: int) -> Module:
        t = i - self.min_degree
        if 0 <= t < len(self.terms):
            return self.terms[t]
        return zero_module(self.algebra)

    def diff(self, i: int) -> ModuleMap:
        t = i - self.min_degree
        if 0 <= t < len(self.diffs):
            return self.diffs[t]
        return ModuleMap.zero(self.term(i), self.term(i + 1))

    def degrees(self) -> range:
        return range(self.min_degree, self.max_degree + 1)

    def __repr__(self) -> str:
        if not self.terms:
            return "BoundedComplex(zero)"
        dims = ", ".join(str(m.dim) for m in self.terms)
        return f"BoundedComplex(degrees {self.min_degree}..{self.max_degree}, dims [{dims}])"

    # -- cohomology -----------------------------------------------------------
    def cohomology(self, i: int) -> CohomologyData:
        cached = self._coh_cache.get(i)
        if cached is not None:
            return cached
        f = self.algebra.field
        term = self.term(i)
        cocycles = self.diff(i).kernel_subspace()
        kmod, _ = submodule_module(term, cocycles)
        image = self.diff(i - 1).image_subspace()
        boundary_rows = [cocycles.coords(image.basis.row(r)) for r in range(image.dim)]
        inside = Subspace.from_rows(f, cocycles.dim, boundary_rows)
        hmod, proj = quotient_module(kmod, inside)
        free = inside.nonpivot_columns()
        section_rows = [cocycles.basis.row(c) for c in free]
        data = CohomologyData(
            hmod,
            cocycles,
            Matrix(f, section_rows, term.dim),
            proj.matrix,
        )
        self._coh_cache[i] = data
        return data

    def cohomology_dims(self) -> tuple:
        return tuple(self.cohomology(i).module.dim for i in self.degrees())

    def is_exact(self) -> bool:
        return all(
            self.term(i).dim - self.diff(i).rank() == self.diff(i - 1).rank()
            for i in self.degrees()
        )


class ChainMap:
    """A degreewise map of complexes commuting with the differentials."""

    def __init__(self, source: BoundedComplex, target: BoundedComplex, components: Dict[int, ModuleMap]) -> None:
        if source.algebra.key != target.algebra.key:
            raise ValueError("chain map between complexes over different algebras")
        self.source = source
        self.target = target
        comps = dict(components)
        for i, comp in comps.items():
            if comp.source != source.term(i) or comp.target != target.term(i):
                raise ValueError(f"component at degree {i} does not match the complexes")
        self.components = comps
        lo = min(source.min_degree, target.min_degree) - 1
        hi = max(source.max_degree, target.max_degree) + 1
        for i in range(lo, hi):
            left = self.component(i).matrix @ target.diff(i).matrix
            right = source.diff(i).matrix @ self.component(i + 1).matrix
            if left != right:
                raise ValueError(f"chain map squares do not commute at degree {i}")

    def component(self, i: int) -> ModuleMap:
        comp = self.components.get(i)
        if comp is not None:
            return comp
        return ModuleMap.zero(self.source.term(i), self.target.term(i))

    def compose(self, then: "ChainMap") -> "ChainMap":
        if self.target is not then.source and self.target.terms != then.source.terms:
            raise ValueError("chain maps do not compose")
        lo = min(self.source.min_degree, then.target.min_degree)
        hi = max(self.source.max_degree, then.target.max_degree)
        comps = {}
        for i in range(lo, hi + 1):
            if self.source.term(i).dim and then.target.term(i).dim:
                comps[i] = ModuleMap(
                    self.source.term(i),
                    then.target.term(i),
                    self.component(i).matrix @ then.component(i).matrix,
                    check=False,
                )
        return ChainMap(self.source, then.target, comps)

    def induced_cohomology_map(self, i: int) -> ModuleMap:
        hsrc = self.source.cohomology(i)
        htgt = self.target.cohomology(i)
        f = self.source.algebra.field
        rows = []
        for t in range(hsrc.module.dim):
            unit = tuple(f.one if s == t else f.zero for s in range(hsrc.module.dim))
            rep = hsrc.representative(unit)
            image = (Matrix(f, [rep], self.source.term(i).dim) @ self.component(i).matrix).row(0)
            rows.append(htgt.to_class(image))
        return ModuleMap(hsrc.module, htgt.module, Matrix(f, rows, htgt.module.dim), check=True)


def shift(x: BoundedComplex, k: int) -> BoundedComplex:
    """The shifted complex ``x[k]`` with ``x[k]^i = x^{i+k}`` and twisted sign."""
    if not x.terms:
        return x
    f = x.algebra.field
    sign = f.coerce((-1) ** (k % 2))
    diffs = [
        ModuleMap(d.source, d.target, d.matrix.scale(sign), check=False) for d in x.diffs
    ]
    return BoundedComplex(x.algebra, x.min_degree - k, list(x.terms), diffs, check=False)


def truncate_above(x: BoundedComplex, j: int):
    """The truncation keeping cohomology in degrees <= j, with its inclusion.

    Terms below ``j`` are kept; the degree-``j`` term becomes the kernel of
    the outgoing differential.
    """
    if j >= x.max_degree:
        ident = {
            i: ModuleMap.identity(x.term(i)) for i in x.degrees() if x.term(i).dim
        }
        return x, ChainMap(x, x, ident)
    if j < x.min_degree:
        t = BoundedComplex.zero(x.algebra)
        return t, ChainMap(t, x, {})
    f = x.algebra.field
    kernel_mod, incl = x.diff(j).kernel()
    terms = [x.term(i) for i in range(x.min_degree, j)] + [kernel_mod]
    diffs = [x.diff(i) for i in range(x.min_degree, j - 1)]
    if j > x.min_degree:
        d_prev = x.diff(j - 1)
        ker = incl.image_subspace()
        rows = [ker.coords(d_prev.matrix.row(r)) for r in range(d_prev.source.dim)]
        diffs.append(ModuleMap(x.term(j - 1), kernel_mod, Matrix(f, rows, kernel_mod.dim), check=False))
    trunc = BoundedComplex(x.algebra, x.min_degree, terms, diffs, check=False)
    comps = {i: ModuleMap.identity(x.term(i)) for i in range(x.min_degree, j) if x.term(i).dim}
    if kernel_mod.dim:
        comps[j] = ModuleMap(trunc.term(j), x.term(j), incl.matrix, check=False)
    return trunc, ChainMap(trunc, x, comps)


def mapping_cone(f: ChainMap) -> BoundedComplex:
    """``cone(f)^i = target^i (+) source^{i+1}`` with the usual differential."""
    x, y = f.source, f.target
    alg = x.algebra
    fld = alg.field
    lo = min(y.min_degree, x.min_degree - 1)
    hi = max(y.max_degree, x.max_degree - 1)
    if hi < lo:
        return BoundedComplex.zero(alg)
    terms = []
    for i in range(lo, hi + 1):
        total, _, _ = direct_sum([y.term(i), x.term(i + 1)])
        terms.append(total)
    diffs = []
    for t, i in enumerate(range(lo, hi)):
        y_i, x_i1 = y.term(i), x.term(i + 1)
        y_i1, x_i2 = y.term(i + 1), x.term(i + 2)
        top = y.diff(i).matrix.hstack(Matrix.zeros(fld, y_i.dim, x_i2.dim))
        bottom = f.component(i + 1).matrix.hstack(x.diff(i + 1).matrix.scale(fld.coerce(-1)))
        diffs.append(ModuleMap(terms[t], terms[t + 1], top.vstack(bottom), check=False))
    return BoundedComplex(alg, lo, terms, diffs, check=True)


def is_quasi_iso(f: ChainMap) -> bool:
    return mapping_cone(f).is_exact()


def complex_dual(x: BoundedComplex, opposite_algebra: FinDimAlgebra) -> BoundedComplex:
    """The dual complex over the opposite algebra: term i becomes term -i."""
    if not x.terms:
        return BoundedComplex.zero(opposite_algebra)
    terms = []
    diffs = []
    for i in range(-x.max_degree, -x.min_degree + 1):
        terms.append(dual_module(x.term(-i), opposite_algebra))
    for t, i in enumerate(range(-x.max_degree, -x.min_degree)):
        d = x.diff(-i - 1)
        diffs.append(ModuleMap(terms[t], terms[t + 1], d.matrix.transpose(), check=False))
    return BoundedComplex(opposite_algebra, -x.max_degree, terms, diffs, check=False)


def projective_replacement(x: BoundedComplex, cap: int = RESOLUTION_CAP):
    """A quasi-isomorphism from a bounded complex of projectives onto ``x``.

    Working down from the top degree, the kernel of each mapping-cone
    differential is covered by a projective; the cone of the resulting chain
    map is exact by construction.
    """
    alg = x.algebra
    fld = alg.field
    if not x.terms:
        z = BoundedComplex.zero(alg)
        return z, ChainMap(z, x, {})
    qterms: Dict[int, Module] = {}
    qdiffs: Dict[int, ModuleMap] = {}
    pis: Dict[int, ModuleMap] = {}
    i = x.max_degree
    lowest = x.max_degree + 1
    while True:
        if i < x.min_degree - cap:
            raise ValueError(f"projective replacement exceeds the length cap {cap}")
        d_i = x.term(i)
        q_next = qterms.get(i + 1, zero_module(alg))
        cs, _, projs = direct_sum([d_i, q_next])
        pi_next = pis.get(i + 1)
        dq_next = qdiffs.get(i + 1)
        d_next = x.term(i + 1)
        q_after = qterms.get(i + 2, zero_module(alg))
        top = x.diff(i).matrix.hstack(Matrix.zeros(fld, d_i.dim, q_after.dim))
        pi_block = pi_next.matrix if pi_next is not None else Matrix.zeros(fld, q_next.dim, d_next.dim)
        dq_block = (
            dq_next.matrix.scale(fld.coerce(-1))
            if dq_next is not None
            else Matrix.zeros(fld, q_next.dim, q_after.dim)
        )
        delta = top.vstack(pi_block.hstack(dq_block))
        z_space = left_kernel_basis(delta)
        zmod, zincl = submodule_module(cs, z_space)
        if zmod.dim == 0:
            if i < x.min_degree:
                break
            i -= 1
            continue
        cover = projective_cover(zmod)
        into_cs = cover.map.matrix @ zincl.matrix
        qterms[i] = cover.module
        lowest = i
        pis[i] = ModuleMap(cover.module, d_i, into_cs @ projs[0].matrix, check=False)
        if q_next.dim:
            qdiffs[i] = ModuleMap(
                cover.module, q_next, (into_cs @ projs[1].matrix).scale(fld.coerce(-1)), check=False
            )
        i -= 1
    if not qterms:
        q = BoundedComplex.zero(alg)
        return q, ChainMap(q, x, {})
    degs = range(lowest, x.max_degree + 1)
    terms = [qterms.get(d, zero_module(alg)) for d in degs]
    diffs = []
    for d in degs:
        if d == x.max_degree:
            break
        stored = qdiffs.get(d)
        if stored is not None:
            diffs.append(stored)
        else:
            diffs.append(ModuleMap.zero(qterms.get(d, zero_module(alg)), qterms.get(d + 1, zero_module(alg))))
    q = BoundedComplex(alg, lowest, terms, diffs, check=True)
    comps = {d: pis[d] for d in degs if d in pis and pis[d].source.dim}
    return q, ChainMap(q, x, comps)


def derived_hom_dim(x: BoundedComplex, y: BoundedComplex, degree: int = 0, cap: int = RESOLUTION_CAP) -> int:
    """Dimension of the degree-``degree`` morphism space from ``x`` to ``y`` in
    the bounded derived category.

    Replaces ``x`` by a bounded complex of projectives ``q`` and counts chain
    maps ``q -> y[degree]`` modulo chain homotopies: the chain-map space is the
    kernel of the equivariance-and-commutation system over the flattened
    component entries; the homotopy boundaries are spanned by ``dh + hd`` for
    module-map homotopy components one degree down.  For module stalks this
    reproduces the Ext groups, and it is invariant under quasi-isomorphism and
    simultaneous shifts.
    """
    if x.algebra.key != y.algebra.key:
        raise ValueError("derived hom needs complexes over the same algebra")
    alg = x.algebra
    f = alg.field
    q, _ = projective_replacement(x, cap)
    z = shift(y, degree)
    if not q.terms or not z.terms:
        return 0
    lo = min(q.min_degree, z.min_degree) - 1
    hi = max(q.max_degree, z.max_degree) + 1
    degs = range(lo, hi + 1)
    offsets: Dict[int, int] = {}
    total = 0
    for i in degs:
        offsets[i] = total
        total += q.term(i).dim * z.term(i).dim
    if total == 0:
        return 0

    def slot(i: int, r: int, c: int) -> int:
        return offsets[i] + r * z.term(i).dim + c

    columns = []  # each column is one scalar constraint over the flattened entries

    def new_column():
        col = [f.zero] * total
        columns.append(col)
        return col

    for i in degs:
        qi, zi = q.term(i), z.term(i)
        if qi.dim and zi.dim:
            # module-map equivariance of the degree-i component
            for g in alg.generator_indices:
                qa, za = qi.action[g], zi.action[g]
                for r in range(qi.dim):
                    for c in range(zi.dim):
                        col = new_column()
                        for k in range(qi.dim):
                            if qa.entry(r, k) != f.zero:
                                col[slot(i, k, c)] = col[slot(i, k, c)] + qa.entry(r, k)
                        for k in range(zi.dim):
                            if za.entry(k, c) != f.zero:
                                col[slot(i, r, k)] = col[slot(i, r, k)] - za.entry(k, c)
        # commutation with the differentials between degrees i and i+1
        zi1 = z.term(i + 1)
        if qi.dim and zi1.dim:
            dq, dz = q.diff(i).matrix, z.diff(i).matrix
            for r in range(qi.dim):
                for c in range(zi1.dim):
                    col = new_column()
                    for k in range(z.term(i).dim):
                        if dz.entry(k, c) != f.zero:
                            col[slot(i, r, k)] = col[slot(i, r, k)] + dz.entry(k, c)
                    for k in range(q.term(i + 1).dim):
                        if dq.entry(r, k) != f.zero:
                            col[slot(i + 1, k, c)] = col[slot(i + 1, k, c)] - dq.entry(r, k)

    if columns:
        system = Matrix(f, [[col[r] for col in columns] for r in range(total)])
        chain_maps = left_kernel_basis(system)
    else:
        chain_maps = Subspace.from_rows(
            f, total, [[f.one if j == i else f.zero for j in range(total)] for i in range(total)]
        )

    boundary_rows = []
    for i in degs:
        for h in hom_space(q.term(i), z.term(i - 1)):
            vec = [f.zero] * total
            hd = h.matrix @ z.diff(i - 1).matrix
            for r in range(q.term(i).dim):
                for c in range(z.term(i).dim):
                    if hd.entry(r, c) != f.zero:
                        vec[slot(i, r, c)] = vec[slot(i, r, c)] + hd.entry(r, c)
            if i - 1 in offsets and q.term(i - 1).dim:
                dh = q.diff(i - 1).matrix @ h.matrix
                for r in range(q.term(i - 1).dim):
                    for c in range(z.term(i - 1).dim):
                        if dh.entry(r, c) != f.zero:
                            vec[slot(i - 1, r, c)] = vec[slot(i - 1, r, c)] + dh.entry(r, c)
            boundary_rows.append(vec)
    boundaries = Subspace.from_rows(f, total, boundary_rows)
    for r in range(boundaries.dim):
        if not chain_maps.contains_vector(boundaries.basis.row(r)):
            raise ValueError("internal: a homotopy boundary is not a chain map")
    return chain_maps.dim - boundaries.dim


def injective_replacement(x: BoundedComplex, cap: int = RESOLUTION_CAP):
    """A quasi-isomorphism from ``x`` into a bounded complex of injectives,
    obtained by dualising a projective replacement of the dual complex."""
    alg = x.algebra
    aop = _opposite_of(alg)
    dx = complex_dual(x, aop)
    qd, pi = projective_replacement(dx, cap)
    j = complex_dual(qd, alg)
    comps = {}
    for s in range(qd.min_degree, qd.max_degree + 1):
        comp = pi.component(s)
        if comp.source.dim == 0 and comp.target.dim == 0:
            continue
        i = -s
        if x.term(i).dim and j.term(i).dim:
            comps[i] = ModuleMap(x.term(i), j.term(i), comp.matrix.transpose(), check=False)
    return j, ChainMap(x, j, comps)
