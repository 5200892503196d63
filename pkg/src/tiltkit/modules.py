"""Right modules over a validated finite-dimensional algebra.

A module is a tuple of action matrices, one per algebra basis element, acting
on row vectors: ``v · b_l = v @ action[l]``.  Over a path algebra this is the
same thing as a covariant quiver representation — the component at vertex
``i`` is ``M e_i``, and an arrow ``a: i -> j`` acts from the ``i`` component
to the ``j`` component.

Maps go ``v ↦ v @ F`` with ``F`` a ``dim source × dim target`` matrix, so
"f then g" is ``F @ G``; kernels of maps are left null spaces.

Isomorphism testing and submodule/module enumeration are *bounded exact*
procedures: within their caps they are exhaustive and their positive answers
carry witnesses; beyond the caps they raise rather than guess.
"""

from __future__ import annotations

from itertools import product as iter_product
from typing import Dict, Iterable, Optional, Sequence

from .algebra import FinDimAlgebra
from .linalg import (
    Field,
    Matrix,
    Subspace,
    kernel_basis,
    left_kernel_basis,
    subspace_sum,
)

ISO_SEARCH_CAP = 6  # combinations searched: |field|^ISO_SEARCH_CAP
SUBMODULE_DIM_CAP = 8


class Module:
    """A right module: one action matrix per algebra basis element."""

    __slots__ = ("algebra", "dim", "action", "_key", "_vertex_dims")

    def __init__(self, algebra: FinDimAlgebra, dim: int, action: Sequence[Matrix], check: bool = True) -> None:
        self.algebra = algebra
        self.dim = dim
        self.action = tuple(action)
        self._key = None
        self._vertex_dims = None
        if len(self.action) != algebra.dim:
            raise ValueError(
                f"need {algebra.dim} action matrices (one per basis element), got {len(self.action)}"
            )
        for a in self.action:
            if a.nrows != dim or a.ncols != dim:
                raise ValueError("action matrices must be dim x dim")
            if a.field is not algebra.field:
                raise ValueError("action matrices over the wrong field")
        if check:
            self._validate()

    def _validate(self) -> None:
        alg = self.algebra
        f = alg.field
        unit = self.action_of(alg.unit_coords)
        if unit != Matrix.identity(f, self.dim):
            raise ValueError("unit does not act as the identity")
        for i in range(alg.dim):
            for j in range(alg.dim):
                produced = self.action[i] @ self.action[j]
                expected = self.action_of(alg.structure[i][j])
                if produced != expected:
                    raise ValueError(
                        f"action violates structure constants at basis pair ({i},{j})"
                    )

    def action_of(self, coords: Sequence) -> Matrix:
        """The action matrix of an arbitrary algebra element (by coordinates)."""
        f = self.algebra.field
        out = Matrix.zeros(f, self.dim, self.dim)
        for l, c in enumerate(coords):
            if c != f.zero:
                out = out + self.action[l].scale(c)
        return out

    def is_zero(self) -> bool:
        return self.dim == 0

    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.dim, tuple(a.rows for a in self.action))
        return self._key

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Module)
            and self.algebra.key == other.algebra.key
            and self.action == other.action
        )

    def __hash__(self) -> int:
        return hash((self.algebra.key, self.key()))

    def __repr__(self) -> str:
        return f"Module(dim {self.dim} over {self.algebra!r})"

    # -- structure ------------------------------------------------------------
    def idempotent_image(self, position: int) -> Subspace:
        """The component M·e_i as a subspace."""
        ei = self.algebra.idempotent_indices[position]
        return Subspace.from_rows(self.algebra.field, self.dim, self.action[ei].rows)

    def vertex_dims(self) -> tuple:
        if self._vertex_dims is None:
            self._vertex_dims = tuple(
                self.idempotent_image(g).dim for g in range(len(self.algebra.idempotent_indices))
            )
        return self._vertex_dims

    def radical_subspace(self) -> Subspace:
        """M·J, the radical of the module."""
        f = self.algebra.field
        total = Subspace.zero(f, self.dim)
        J = self.algebra.radical
        for r in range(J.dim):
            img = Subspace.from_rows(f, self.dim, self.action_of(J.basis.row(r)).rows)
            total = subspace_sum(total, img)
        return total

    def submodule_closure(self, rows: Iterable[Sequence]) -> Subspace:
        """Smallest action-invariant subspace containing the given row vectors."""
        f = self.algebra.field
        current = Subspace.from_rows(f, self.dim, [list(r) for r in rows])
        while True:
            new_rows = list(current.basis.rows)
            for i in range(current.dim):
                v = Matrix(f, [current.basis.row(i)])
                for a in self.action:
                    new_rows.append((v @ a).row(0))
            bigger = Subspace.from_rows(f, self.dim, new_rows)
            if bigger.dim == current.dim:
                return bigger
            current = bigger

    def is_invariant(self, subspace: Subspace) -> bool:
        f = self.algebra.field
        for i in range(subspace.dim):
            v = Matrix(f, [subspace.basis.row(i)])
            for a in self.action:
                if not subspace.contains_vector((v @ a).row(0)):
                    return False
        return True

    def to_representation(self) -> tuple:
        """(vertex_dims, arrow label -> matrix, basis change U).

        U is invertible with rows listing an adapted basis (grouped by
        idempotent); the arrow matrices are written in that basis.  Requires a
        quiver presentation on the algebra.
        """
        alg = self.algebra
        if alg.path_info is None or alg.quiver_presentation is None:
            raise ValueError("algebra has no quiver presentation")
        quiver = alg.quiver_presentation[0]
        blocks = [self.idempotent_image(g) for g in range(len(alg.idempotent_indices))]
        rows = [row for b in blocks for row in b.basis.rows]
        u = Matrix(alg.field, rows) if rows else Matrix(alg.field, [])
        if u.nrows != self.dim:
            raise ValueError("idempotent images do not decompose the module")
        dims = tuple(b.dim for b in blocks)
        offsets = [0]
        for d in dims:
            offsets.append(offsets[-1] + d)
        arrows = {}
        uinv = u.inverse() if self.dim else u
        for label, src, tgt in quiver.arrows:
            si = quiver.vertex_index(src)
            ti = quiver.vertex_index(tgt)
            if dims[si] == 0 or dims[ti] == 0:
                continue
            l = alg.basis_labels.index(label)
            full = u @ self.action[l] @ uinv
            arrows[label] = full.submatrix(
                range(offsets[si], offsets[si + 1]), range(offsets[ti], offsets[ti + 1])
            )
        return dims, arrows, u


class ModuleMap:
    """A homomorphism of right modules, as a source-dim × target-dim matrix."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: Module, target: Module, matrix: Matrix, check: bool = True) -> None:
        self.source = source
        self.target = target
        self.matrix = matrix
        if matrix.nrows != source.dim or matrix.ncols != target.dim:
            raise ValueError("map matrix has wrong shape")
        if check and source.algebra.key != target.algebra.key:
            raise ValueError("map between modules over different algebras")
        if check:
            for l in range(source.algebra.dim):
                if source.action[l] @ matrix != matrix @ target.action[l]:
                    raise ValueError(f"matrix does not intertwine basis element {l}")

    @staticmethod
    def identity(m: Module) -> "ModuleMap":
        return ModuleMap(m, m, Matrix.identity(m.algebra.field, m.dim), check=False)

    @staticmethod
    def zero(source: Module, target: Module) -> "ModuleMap":
        return ModuleMap(source, target, Matrix.zeros(source.algebra.field, source.dim, target.dim), check=False)

    def compose(self, then: "ModuleMap") -> "ModuleMap":
        """self followed by ``then``."""
        if then.source.dim != self.target.dim:
            raise ValueError("composition shape mismatch")
        return ModuleMap(self.source, then.target, self.matrix @ then.matrix, check=False)

    def apply(self, vector: Sequence) -> tuple:
        return (Matrix(self.matrix.field, [vector]) @ self.matrix).row(0)

    def image_subspace(self) -> Subspace:
        return Subspace.from_rows(self.matrix.field, self.target.dim, self.matrix.rows)

    def kernel_subspace(self) -> Subspace:
        return left_kernel_basis(self.matrix)

    def rank(self) -> int:
        return self.matrix.rank()

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def is_isomorphism(self) -> bool:
        return self.source.dim == self.target.dim and self.rank() == self.source.dim

    def inverse(self) -> "ModuleMap":
        if not self.is_isomorphism():
            raise ValueError("map is not invertible")
        return ModuleMap(self.target, self.source, self.matrix.inverse(), check=False)

    def kernel(self) -> tuple:
        """(kernel module, inclusion into the source)."""
        return submodule_module(self.source, self.kernel_subspace())

    def image(self) -> tuple:
        """(image module, inclusion into target, corestriction source -> image)."""
        sub = self.image_subspace()
        img, incl = submodule_module(self.target, sub)
        rows = [sub.coords(self.matrix.row(i)) for i in range(self.source.dim)]
        corestriction = ModuleMap(self.source, img, Matrix(self.matrix.field, rows, img.dim), check=True)
        return img, incl, corestriction

    def cokernel(self) -> tuple:
        """(cokernel module, projection from the target)."""
        return quotient_module(self.target, self.image_subspace())

    def restrict(self, source_sub: Subspace, target_sub: Subspace) -> "ModuleMap":
        """Restriction to invariant subspaces (given in ambient coordinates)."""
        smod, _ = submodule_module(self.source, source_sub)
        tmod, _ = submodule_module(self.target, target_sub)
        rows = []
        f = self.matrix.field
        for i in range(source_sub.dim):
            img = (Matrix(f, [source_sub.basis.row(i)]) @ self.matrix).row(0)
            rows.append(target_sub.coords(img))
        return ModuleMap(smod, tmod, Matrix(f, rows, target_sub.dim), check=True)

    def __repr__(self) -> str:
        return f"ModuleMap({self.source.dim} -> {self.target.dim})"


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------

def zero_module(algebra: FinDimAlgebra) -> Module:
    return Module(algebra, 0, [Matrix(algebra.field, []) for _ in range(algebra.dim)], check=False)


def regular_module(algebra: FinDimAlgebra) -> Module:
    """The algebra as a right module over itself."""
    action = [algebra.right_mult_matrix(algebra.basis_coords(l)) for l in range(algebra.dim)]
    return Module(algebra, algebra.dim, action)


def simple_module(algebra: FinDimAlgebra, position: int) -> Module:
    """The simple at the given idempotent (algebras here are split basic)."""
    f = algebra.field
    action = [
        Matrix(f, [[algebra.simple_scalar(position, l)]]) for l in range(algebra.dim)
    ]
    return Module(algebra, 1, action)


def indecomposable_projective(algebra: FinDimAlgebra, position: int) -> tuple:
    """(e_i A as a module, inclusion into the regular module)."""
    reg = regular_module(algebra)
    ei = algebra.idempotent_indices[position]
    span = Subspace.from_rows(
        algebra.field, algebra.dim, algebra.left_mult_matrix(algebra.basis_coords(ei)).rows
    )
    return submodule_module(reg, span)


def direct_sum(modules: Sequence[Module]) -> tuple:
    """(sum, inclusions, projections)."""
    if not modules:
        raise ValueError("direct_sum needs at least one module")
    alg = modules[0].algebra
    f = alg.field
    total = sum(m.dim for m in modules)
    offsets = [0]
    for m in modules:
        if m.algebra.key != alg.key:
            raise ValueError("direct sum of modules over different algebras")
        offsets.append(offsets[-1] + m.dim)
    action = []
    for l in range(alg.dim):
        rows = []
        for idx, m in enumerate(modules):
            for i in range(m.dim):
                row = [f.zero] * total
                for j in range(m.dim):
                    row[offsets[idx] + j] = m.action[l].entry(i, j)
                rows.append(row)
        action.append(Matrix(f, rows, total))
    out = Module(alg, total, action, check=False)
    incls = []
    projs = []
    for idx, m in enumerate(modules):
        inc_rows = []
        for i in range(m.dim):
            row = [f.zero] * total
            row[offsets[idx] + i] = f.one
            inc_rows.append(row)
        inc = ModuleMap(m, out, Matrix(f, inc_rows, total), check=False)
        pr_rows = []
        for i in range(total):
            row = [f.zero] * m.dim
            if offsets[idx] <= i < offsets[idx + 1]:
                row[i - offsets[idx]] = f.one
            pr_rows.append(row)
        pr = ModuleMap(out, m, Matrix(f, pr_rows, m.dim), check=False)
        incls.append(inc)
        projs.append(pr)
    return out, incls, projs


def from_representation(algebra: FinDimAlgebra, vertex_dims: Sequence[int], arrow_matrices: Dict) -> Module:
    """Build a module over a quiver-presented algebra from representation data.

    ``vertex_dims[i]`` is the dimension at the i-th vertex; ``arrow_matrices``
    maps arrow labels to (source-dim × target-dim) matrices or row lists.
    Omitted arrows act by zero.  The total space is ordered vertex block by
    vertex block.
    """
    if algebra.path_info is None or algebra.quiver_presentation is None:
        raise ValueError("algebra has no quiver presentation")
    quiver = algebra.quiver_presentation[0]
    f = algebra.field
    dims = list(vertex_dims)
    if len(dims) != len(quiver.vertices):
        raise ValueError("vertex_dims length does not match quiver")
    offsets = [0]
    for d in dims:
        offsets.append(offsets[-1] + d)
    total = offsets[-1]

    mats = {}
    for label, src, tgt in quiver.arrows:
        si, ti = quiver.vertex_index(src), quiver.vertex_index(tgt)
        raw = arrow_matrices.get(label)
        if raw is None:
            mats[label] = Matrix.zeros(f, dims[si], dims[ti])
        else:
            m = raw if isinstance(raw, Matrix) else Matrix(f, raw)
            if (m.nrows, m.ncols) != (dims[si], dims[ti]):
                raise ValueError(
                    f"arrow {label!r} needs a {dims[si]}x{dims[ti]} matrix, got {m.nrows}x{m.ncols}"
                )
            mats[label] = m
    for label in arrow_matrices:
        if label not in mats:
            raise ValueError(f"unknown arrow {label!r}")

    def path_matrix(info) -> Matrix:
        src, tgt, arrows = info
        si, ti = quiver.vertex_index(src), quiver.vertex_index(tgt)
        block = Matrix.identity(f, dims[si])
        for lab in arrows:
            block = block @ mats[lab]
        out = [[f.zero] * total for _ in range(total)]
        for i in range(dims[si]):
            for j in range(dims[ti]):
                out[offsets[si] + i][offsets[ti] + j] = block.entry(i, j)
        return Matrix(f, out)

    action = [path_matrix(algebra.path_info[l]) for l in range(algebra.dim)]
    return Module(algebra, total, action)


def submodule_module(m: Module, subspace: Subspace) -> tuple:
    """(the subspace as a module in its own coordinates, inclusion map)."""
    if subspace.ambient_dim != m.dim:
        raise ValueError("subspace ambient dimension mismatch")
    if not m.is_invariant(subspace):
        raise ValueError("subspace is not action invariant")
    f = m.algebra.field
    action = []
    for a in m.action:
        rows = []
        for i in range(subspace.dim):
            img = (Matrix(f, [subspace.basis.row(i)]) @ a).row(0)
            rows.append(subspace.coords(img))
        action.append(Matrix(f, rows, subspace.dim))
    sub = Module(m.algebra, subspace.dim, action, check=False)
    incl = ModuleMap(sub, m, subspace.basis, check=False)
    return sub, incl


def quotient_module(m: Module, subspace: Subspace) -> tuple:
    """(quotient by an invariant subspace, projection map).

    Quotient coordinates are the non-pivot columns of the subspace basis.
    """
    if subspace.ambient_dim != m.dim:
        raise ValueError("subspace ambient dimension mismatch")
    if not m.is_invariant(subspace):
        raise ValueError("subspace is not action invariant")
    f = m.algebra.field
    free = subspace.nonpivot_columns()
    qdim = len(free)

    def project(vector) -> tuple:
        red = subspace.reduce(vector)
        return tuple(red[c] for c in free)

    action = []
    for a in m.action:
        rows = []
        for c in free:
            unit = [f.zero] * m.dim
            unit[c] = f.one
            img = (Matrix(f, [unit]) @ a).row(0)
            rows.append(project(img))
        action.append(Matrix(f, rows, qdim))
    quot = Module(m.algebra, qdim, action, check=False)
    proj_rows = [project(tuple(f.one if j == i else f.zero for j in range(m.dim))) for i in range(m.dim)]
    proj = ModuleMap(m, quot, Matrix(f, proj_rows, qdim), check=False)
    return quot, proj


def dual_module(m: Module, opposite_algebra: FinDimAlgebra) -> Module:
    """Hom_k(M, k) as a module over the opposite algebra (transposed actions)."""
    if opposite_algebra.dim != m.algebra.dim:
        raise ValueError("opposite algebra has wrong dimension")
    return Module(opposite_algebra, m.dim, [a.transpose() for a in m.action])


# ---------------------------------------------------------------------------
# hom spaces and isomorphisms
# ---------------------------------------------------------------------------

def hom_space(m: Module, n: Module) -> list:
    """A basis of Hom(m, n), as ModuleMaps, from the intertwining equations.

    Uses the algebra's generator set: for monomial bases (path algebras), the
    equations for trivial paths and arrows imply the rest; abstract algebras
    declare every basis element a generator.
    """
    if m.algebra.key != n.algebra.key:
        raise ValueError("hom between modules over different algebras")
    f = m.algebra.field
    if m.dim == 0 or n.dim == 0:
        return []
    unknowns = m.dim * n.dim
    rows = []
    for g in m.algebra.generator_indices:
        am = m.action[g]
        an = n.action[g]
        # equation (i, j): sum_k am[i,k] F[k,j] - sum_k F[i,k] an[k,j] = 0
        for i in range(m.dim):
            for j in range(n.dim):
                row = [f.zero] * unknowns
                for k in range(m.dim):
                    row[k * n.dim + j] = f.add(row[k * n.dim + j], am.entry(i, k))
                for k in range(n.dim):
                    row[i * n.dim + k] = f.sub(row[i * n.dim + k], an.entry(k, j))
                rows.append(row)
    ker = kernel_basis(Matrix(f, rows))
    out = []
    for r in range(ker.dim):
        v = ker.basis.row(r)
        mat = Matrix(f, [v[i * n.dim:(i + 1) * n.dim] for i in range(m.dim)])
        out.append(ModuleMap(m, n, mat, check=True))
    return out


def _fingerprint(m: Module) -> tuple:
    dims = [m.vertex_dims()]
    rad = m.radical_subspace()
    series = []
    current = rad
    while current.dim:
        series.append(current.dim)
        sub, _ = submodule_module(m, current)
        nxt = sub.radical_subspace()
        rows = []
        ffield = m.algebra.field
        for i in range(nxt.dim):
            v = Matrix(ffield, [nxt.basis.row(i)]) @ current.basis
            rows.append(v.row(0))
        current = Subspace.from_rows(ffield, m.dim, rows)
    return (m.dim, tuple(dims), tuple(series))


def find_isomorphism(m: Module, n: Module, cap: int = ISO_SEARCH_CAP) -> Optional[ModuleMap]:
    """An isomorphism m -> n, or None; exhaustive within |k|^cap combinations.

    Raises ValueError if the Hom space is too large to search exhaustively —
    a bounded procedure must fail loudly, never guess.
    """
    if m.algebra.key != n.algebra.key:
        return None
    if m.dim != n.dim:
        return None
    if m.dim == 0:
        return ModuleMap(m, n, Matrix(m.algebra.field, []), check=False)
    if _fingerprint(m) != _fingerprint(n):
        return None
    basis = hom_space(m, n)
    if len(hom_space(n, m)) != len(basis):
        return None
    f = m.algebra.field
    if f.order is None:
        raise ValueError("isomorphism search requires a finite field")
    if f.order ** len(basis) > f.order ** cap:
        raise ValueError(
            f"isomorphism search cap exceeded: Hom space has dimension {len(basis)} "
            f"(> {cap}); raise the cap explicitly if this is intended"
        )
    for coeffs in iter_product(range(f.order), repeat=len(basis)):
        if all(c == 0 for c in coeffs):
            continue
        mat = Matrix.zeros(f, m.dim, n.dim)
        for c, h in zip(coeffs, basis):
            if c:
                mat = mat + h.matrix.scale(c)
        if mat.rank() == m.dim:
            return ModuleMap(m, n, mat, check=False)
    return None


def modules_isomorphic(m: Module, n: Module, cap: int = ISO_SEARCH_CAP) -> bool:
    return find_isomorphism(m, n, cap=cap) is not None


def random_hom(m: Module, n: Module, rng) -> ModuleMap:
    """A random element of Hom(m, n) (zero map if the Hom space is zero)."""
    basis = hom_space(m, n)
    f = m.algebra.field
    mat = Matrix.zeros(f, m.dim, n.dim)
    for h in basis:
        c = rng.randrange(f.order) if f.order else rng.randint(-3, 3)
        if c:
            mat = mat + h.matrix.scale(c)
    return ModuleMap(m, n, mat, check=False)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def enumerate_submodules(m: Module, dim_cap: int = SUBMODULE_DIM_CAP) -> list:
    """All submodules (as subspaces), exactly: cyclic closures + sum closure.

    Exhaustive because every submodule is a sum of cyclic ones.  Bounded by
    ambient dimension (the vector sweep is |k|^dim); raises beyond the cap.
    """
    f = m.algebra.field
    if f.order is None:
        raise ValueError("submodule enumeration requires a finite field")
    if m.dim > dim_cap:
        raise ValueError(
            f"submodule enumeration cap exceeded: dim {m.dim} > {dim_cap}"
        )
    zero = Subspace.zero(f, m.dim)
    cyclic = set()
    for coords in iter_product(range(f.order), repeat=m.dim):
        if all(c == 0 for c in coords):
            continue
        v = tuple(f.coerce(c) for c in coords)
        cyclic.add(m.submodule_closure([v]))
    found = {zero} | cyclic
    frontier = set(found)
    while frontier:
        new = set()
        for a in frontier:
            for b in cyclic:
                s = subspace_sum(a, b)
                if s not in found:
                    new.add(s)
        found |= new
        frontier = new
    return sorted(found, key=lambda s: s.key())


_ENUM_CACHE: dict = {}


def enumerate_modules(algebra: FinDimAlgebra, max_total_dim: int, raw_cap: int = 2**20) -> list:
    """All modules of total dimension <= max_total_dim, up to isomorphism.

    Enumerates Peirce-graded action assignments (idempotents act as block
    identities, every non-idempotent graded basis element gets a free block),
    keeps those satisfying the structure constants, and deduplicates with the
    bounded isomorphism search.  Deterministic output order.
    """
    cache_key = (hash(algebra.key), max_total_dim)
    if cache_key in _ENUM_CACHE:
        return _ENUM_CACHE[cache_key]
    f = algebra.field
    if f.order is None:
        raise ValueError("module enumeration requires a finite field")
    r = len(algebra.idempotent_indices)
    idem_set = set(algebra.idempotent_indices)
    free_elements = [l for l in range(algebra.dim) if l not in idem_set]

    out: list = []

    def dim_vectors(total_max: int):
        for total in range(total_max + 1):
            for split in iter_product(range(total + 1), repeat=r):
                if sum(split) == total:
                    yield split

    for dims in dim_vectors(max_total_dim):
        offsets = [0]
        for d in dims:
            offsets.append(offsets[-1] + d)
        total = offsets[-1]
        shapes = []
        exponent = 0
        for l in free_elements:
            gi, gj = algebra.basis_piece(l)
            shapes.append((l, dims[gi], dims[gj], gi, gj))
            exponent += dims[gi] * dims[gj]
        if f.order**exponent > raw_cap:
            raise ValueError(
                f"module enumeration raw space too large at dim vector {dims}"
            )

        def block_to_full(block_rows, gi, gj):
            rows = [[f.zero] * total for _ in range(total)]
            for i in range(dims[gi]):
                for j in range(dims[gj]):
                    rows[offsets[gi] + i][offsets[gj] + j] = block_rows[i][j]
            return Matrix(f, rows)

        idem_mats = {}
        for g, ei in enumerate(algebra.idempotent_indices):
            rows = [[f.zero] * total for _ in range(total)]
            for i in range(dims[g]):
                rows[offsets[g] + i][offsets[g] + i] = f.one
            idem_mats[ei] = Matrix(f, rows)

        entry_count = exponent
        for bits in iter_product(range(f.order), repeat=entry_count):
            action = [None] * algebra.dim
            for ei, mat in idem_mats.items():
                action[ei] = mat
            pos = 0
            for l, dsrc, dtgt, gi, gj in shapes:
                block = [
                    [f.coerce(bits[pos + i * dtgt + j]) for j in range(dtgt)]
                    for i in range(dsrc)
                ]
                pos += dsrc * dtgt
                action[l] = block_to_full(block, gi, gj)
            ok = True
            for i in range(algebra.dim):
                ai = action[i]
                for j in range(algebra.dim):
                    produced = ai @ action[j]
                    expected = Matrix.zeros(f, total, total)
                    for k, c in enumerate(algebra.structure[i][j]):
                        if c != f.zero:
                            expected = expected + action[k].scale(c)
                    if produced != expected:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            candidate = Module(algebra, total, action, check=False)
            # Hom spaces between dim-`total` modules have dimension <= total^2,
            # so this cap keeps the dedup search exhaustive (never a guess).
            dedup_cap = max(ISO_SEARCH_CAP, total * total)
            if not any(
                _fingerprint(prev) == _fingerprint(candidate)
                and modules_isomorphic(prev, candidate, cap=dedup_cap)
                for prev in out
                if prev.dim == total
            ):
                out.append(candidate)

    out.sort(key=lambda m: (m.dim, m.vertex_dims(), m.key()))
    _ENUM_CACHE[cache_key] = out
    return out
