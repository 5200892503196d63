"""Tilting modules and the pair of derived functors they induce.

A tilting module ``T`` over a finite-dimensional algebra consists of pairwise
non-isomorphic indecomposable summands with

* finite projective dimension ``n`` (the maximum over the summands),
* no self-extensions in degrees ``1..n``, and
* an exact coresolution ``0 -> algebra -> T^0 -> ... -> T^m -> 0`` whose terms
  are finite direct sums of the summands (``m <= n``).

:func:`validate_tilting` checks all three axioms constructively and returns a
:class:`TiltingData` carrying the endomorphism algebra ``A = End(T)`` and the
two functors that realise the derived equivalence:

* the hom side sends a base-algebra module ``e`` to the complex
  ``Hom(T, I^*)`` over ``A`` built on an injective coresolution ``e >-> I^*``
  (its cohomology in degree ``i`` is ``Ext^i(T, e)``);
* the tensor side sends an ``A``-module ``m`` to ``P^* (x)_A T`` over the base
  algebra, built on the minimal projective resolution of ``m`` and placed in
  degrees ``-length..0`` (its cohomology in degree ``-j`` is ``Tor_j(m, T)``).

Roundtrip reports certify on concrete inputs that the two functors are
mutually inverse, via an explicit evaluation chain map
``Hom(T, I^s) (x) T -> I^s`` and cohomology-level isomorphisms.  The
filtration ``F^0 E <= F^{-1} E <= ... <= F^{-n} E = E`` obtained by composing
the tensor side with truncations of the hom side is exposed by
:meth:`TiltingData.spectral_filtration`.
"""

from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

from .algebra import FinDimAlgebra
from .complexes import (
    BoundedComplex,
    ChainMap,
    injective_replacement,
    is_quasi_iso,
    projective_replacement,
    truncate_above,
)
from .linalg import Matrix, Subspace
from .modules import (
    Module,
    ModuleMap,
    direct_sum,
    find_isomorphism,
    hom_space,
    quotient_module,
    regular_module,
    submodule_module,
    zero_module,
)
from .resolutions import (
    Coresolution,
    EndData,
    HomOverEnd,
    LOCAL_RING_ENUM_CAP,
    RESOLUTION_CAP,
    _flatten,
    endomorphism_algebra,
    ext_group,
    injective_coresolution,
    minimal_projective_resolution,
    projective_dimension,
)


class TiltingError(ValueError):
    """A tilting axiom fails, or an argument lives on the wrong side."""


# ---------------------------------------------------------------------------
# add-T arithmetic
# ---------------------------------------------------------------------------

def _split_pair(t: Module, m: Module):
    """A pair ``(f, g)`` with ``f: t -> m``, ``g: m -> t`` and ``f`` then ``g``
    invertible, or None.

    When ``End(t)`` is local such a pair exists exactly when ``t`` is a direct
    summand of ``m``: writing ``id_t`` as a sum of composites ``g_a . f_b``
    over hom bases forces at least one single composite to be a unit.
    """
    if t.dim == 0 or t.dim > m.dim:
        return None
    maps_in = hom_space(t, m)
    if not maps_in:
        return None
    maps_out = hom_space(m, t)
    for f_in in maps_in:
        for g_out in maps_out:
            if (f_in.matrix @ g_out.matrix).rank() == t.dim:
                return f_in, g_out
    return None


def add_t_decompose(summands: Sequence[Module], m: Module) -> Optional[tuple]:
    """Multiplicities ``(c_0, ...)`` with ``m`` isomorphic to the direct sum of
    ``summands[i]`` with multiplicity ``c_i``, or None when no such splitting
    exists.

    Complete whenever every summand has a local endomorphism ring, which holds
    for the validated indecomposable summands of a tilting module.  Each found
    pair peels off one genuine copy (the complement is the kernel of the
    associated retraction), so a returned answer is always correct.
    """
    counts = [0] * len(summands)
    current = m
    while current.dim:
        for idx, t in enumerate(summands):
            pair = _split_pair(t, current)
            if pair is None:
                continue
            f_in, g_out = pair
            unit = f_in.matrix @ g_out.matrix
            retraction = ModuleMap(
                current, t, g_out.matrix @ unit.inverse(), check=False
            )
            complement, _ = retraction.kernel()
            counts[idx] += 1
            current = complement
            break
        else:
            return None
    return tuple(counts)


def _left_approximation(
    summands: Sequence[Module], pair_homs, m: Module
) -> Tuple[ModuleMap, tuple]:
    """A minimal left approximation ``m -> X`` with ``X`` a sum of summands.

    Start from every hom-basis map into every summand (jointly, every map from
    ``m`` into the additive closure factors through this bundle) and drop any
    candidate lying in the span of the composites of the remaining candidates
    with maps between summands; dropping such a candidate preserves the
    factoring property, and what survives has no superfluous component.
    The kernel is unchanged by the drops, so injectivity of the result is
    equivalent to ``m`` embedding into the additive closure at all.
    """
    f = m.algebra.field
    cands = []
    for idx, t in enumerate(summands):
        for h in hom_space(m, t):
            cands.append((idx, h))
    changed = True
    while changed and len(cands) > 1:
        changed = False
        for pos in range(len(cands)):
            idx, h = cands[pos]
            t = summands[idx]
            rows = []
            for pos2, (idx2, h2) in enumerate(cands):
                if pos2 == pos:
                    continue
                for beta in pair_homs[idx2][idx]:
                    rows.append(_flatten(h2.matrix @ beta.matrix))
            span = Subspace.from_rows(f, m.dim * t.dim, rows)
            if span.contains_vector(_flatten(h.matrix)):
                del cands[pos]
                changed = True
                break
    counts = [0] * len(summands)
    for idx, _h in cands:
        counts[idx] += 1
    pieces = [summands[idx] for idx, _h in cands]
    target = direct_sum(pieces)[0] if pieces else zero_module(m.algebra)
    if m.dim == 0 or not cands:
        return ModuleMap.zero(m, target), tuple(counts)
    mat = cands[0][1].matrix
    for _idx, h in cands[1:]:
        mat = mat.hstack(h.matrix)
    return ModuleMap(m, target, mat, check=True), tuple(counts)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AddTCoresolution:
    """``0 -> regular -> terms[0] -> ... -> terms[-1] -> 0`` with every term a
    sum of the tilting summands.

    ``maps[0]`` is the (injective) augmentation from the regular module;
    ``maps[s]`` for ``s >= 1`` is the differential ``terms[s-1] -> terms[s]``;
    the image of each map is the kernel of the next and the last map is
    surjective.  ``multiplicities[s]`` records how often each summand occurs
    in ``terms[s]``.
    """

    terms: tuple
    maps: tuple
    multiplicities: tuple


def _coresolve(algebra, summands, pair_homs, cap: int) -> AddTCoresolution:
    terms = []
    mults = []
    maps = []
    current = regular_module(algebra)
    carry: Optional[ModuleMap] = None
    for step in range(cap + 2):
        if current.dim == 0 and carry is not None:
            break  # the previous approximation was already surjective
        dec = add_t_decompose(summands, current)
        if dec is not None:
            terms.append(current)
            mults.append(dec)
            maps.append(carry if carry is not None else ModuleMap.identity(current))
            break
        phi, counts = _left_approximation(summands, pair_homs, current)
        kdim = phi.kernel_subspace().dim
        if kdim:
            raise TiltingError(
                f"coresolution fails at step {step}: the minimal map into the "
                f"additive closure has kernel dimension {kdim}, so the module "
                "does not embed"
            )
        terms.append(phi.target)
        mults.append(counts)
        maps.append(phi if carry is None else carry.compose(then=phi))
        current, carry = phi.cokernel()
    else:
        raise TiltingError(f"coresolution does not terminate within {cap} steps")
    return AddTCoresolution(tuple(terms), tuple(maps), tuple(mults))


def validate_tilting(
    algebra: FinDimAlgebra,
    summands: Sequence[Module],
    labels: Optional[Sequence[str]] = None,
    expected_n: Optional[int] = None,
    res_cap: int = RESOLUTION_CAP,
    enum_cap: int = LOCAL_RING_ENUM_CAP,
) -> "TiltingData":
    """Check the tilting axioms for the direct sum of ``summands`` and return
    the validated :class:`TiltingData`.

    Raises :class:`TiltingError` when an axiom fails (infinite or undeclared
    projective dimension, a self-extension, or no exact coresolution by sums
    of the summands) and ``ValueError`` when the summands are not pairwise
    non-isomorphic indecomposables.
    """
    summands = tuple(summands)
    if not summands:
        raise TiltingError("a tilting module needs at least one summand")
    for t in summands:
        if t.algebra.key != algebra.key:
            raise TiltingError("summand over a different algebra")
        if t.dim == 0:
            raise TiltingError("summands must be nonzero")
    end = endomorphism_algebra(summands, labels=labels, enum_cap=enum_cap)
    if labels is None:
        labels = tuple(f"T{i}" for i in range(len(summands)))
    try:
        pds = [projective_dimension(t, res_cap) for t in summands]
    except ValueError as exc:
        raise TiltingError(f"projective dimension out of reach: {exc}") from exc
    n = max(pds)
    if expected_n is not None and expected_n != n:
        raise TiltingError(
            f"declared homological dimension {expected_n} does not match the "
            f"computed projective dimension {n}"
        )
    for ia, ta in enumerate(summands):
        for ib, tb in enumerate(summands):
            for i in range(1, n + 1):
                d = ext_group(ta, tb, i, res_cap)
                if d:
                    raise TiltingError(
                        f"self-extension: Ext^{i}({labels[ia]}, {labels[ib]}) "
                        f"has dimension {d}"
                    )
    pair_homs = [[hom_space(ti, tj) for tj in summands] for ti in summands]
    cores = _coresolve(algebra, summands, pair_homs, res_cap)
    length = len(cores.terms) - 1
    if length > n:
        raise TiltingError(
            f"coresolution has length {length}, exceeding the projective "
            f"dimension {n}"
        )
    return TiltingData(algebra, summands, tuple(labels), end, n, cores, res_cap)


# ---------------------------------------------------------------------------
# result containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CohomologyLabel:
    """Evidence for a membership verdict: which functor was applied ("phi"
    for the hom side, "psi" for the tensor side) and the tuple of cohomology
    dimensions it produced."""

    kind: str
    dims: tuple


@dataclass(frozen=True)
class TensorTerm:
    """``m (x)_A T`` over the base algebra: the quotient of the plain tensor
    product by the bilinearity relations ``(m.x) (x) t - m (x) (x.t)``.

    ``free`` lists the ambient indices whose images form the quotient basis;
    the unit vector at such an index is a genuine representative of the
    corresponding quotient basis vector.
    """

    source: Module
    ambient: Module
    relations: Subspace
    module: Module
    projection: ModuleMap
    free: tuple


@dataclass(frozen=True)
class RoundtripReport:
    """Outcome of applying one derived functor after the other.

    ``complex`` is the computed composite; ``iso`` identifies its only
    cohomology with the original module when ``passed`` is True.
    """

    passed: bool
    complex: BoundedComplex
    iso: Optional[ModuleMap]


@dataclass(frozen=True)
class SpectralFiltration:
    """The filtration ``F^0 <= F^{-1} <= ... <= F^{-n} = module`` by images of
    the truncated hom side pushed back through the tensor side.

    ``steps[j]`` is ``F^{-j}`` as an invariant subspace of ``module``;
    ``factors[0] = F^0`` and ``factors[j] = F^{-j} / F^{-(j-1)}``.  For
    ``n = 2``, ``middle_dims`` compares the middle factor with the degree
    ``-1`` tensor cohomology of the degree ``1`` hom cohomology and
    ``middle_iso`` realises the identification when nonzero.
    """

    module: Module
    steps: tuple
    factors: tuple
    middle_dims: Optional[tuple]
    middle_iso: Optional[ModuleMap]


@dataclass(frozen=True)
class _PhiData:
    cores: Coresolution
    icx: BoundedComplex
    homs: tuple
    phicx: BoundedComplex
    aug_iso: ModuleMap  # module -> H^0 of the coresolution complex


def _subquotient(e: Module, outer: Subspace, inner: Subspace) -> Module:
    """``outer / inner`` as a module, for nested invariant subspaces of e."""
    mod_out, _ = submodule_module(e, outer)
    f = e.algebra.field
    rows = [outer.coords(inner.basis.row(r)) for r in range(inner.dim)]
    inside = Subspace.from_rows(f, outer.dim, rows)
    return quotient_module(mod_out, inside)[0]


# ---------------------------------------------------------------------------
# the validated tilting module with its two functors
# ---------------------------------------------------------------------------

class TiltingData:
    """A validated tilting module together with its derived functors.

    Hom-side methods (``phi_*``, ``spectral_filtration``, ``d_invariant``)
    take modules over the base algebra; tensor-side methods (``psi_*``,
    ``tensor_*``) take modules over the endomorphism algebra.  All results are
    computed exactly; expensive intermediates are cached per input module.
    """

    def __init__(
        self,
        algebra: FinDimAlgebra,
        summands: tuple,
        labels: tuple,
        end: EndData,
        n: int,
        coresolution: AddTCoresolution,
        res_cap: int = RESOLUTION_CAP,
    ) -> None:
        self.algebra = algebra
        self.summands = summands
        self.labels = labels
        self.end = end
        self.n = n
        self.coresolution = coresolution
        self.res_cap = res_cap
        self._phi_cache: Dict[tuple, _PhiData] = {}
        self._ev_cache: Dict[tuple, tuple] = {}
        self._tensor_cache: Dict[tuple, TensorTerm] = {}
        self._psi_cache: Dict[tuple, BoundedComplex] = {}
        self._edge_cache: Dict[tuple, ModuleMap] = {}

    # -- side guards --------------------------------------------------------
    def _require_base(self, m: Module, what: str) -> None:
        if not isinstance(m, Module) or m.algebra.key != self.algebra.key:
            raise TiltingError(f"{what} must be a module over the base algebra")

    def _require_end(self, m: Module, what: str) -> None:
        if not isinstance(m, Module) or m.algebra.key != self.end.algebra.key:
            raise TiltingError(
                f"{what} must be a module over the endomorphism algebra"
            )

    # -- hom side -------------------------------------------------------------
    def _phi_data(self, e: Module) -> _PhiData:
        self._require_base(e, "hom-functor input")
        key = e.key()
        hit = self._phi_cache.get(key)
        if hit is not None:
            return hit
        f = self.algebra.field
        if e.dim == 0:
            icx = BoundedComplex.zero(self.algebra)
            phicx = BoundedComplex.zero(self.end.algebra)
            aug = ModuleMap(e, icx.cohomology(0).module, Matrix(f, [], 0), check=False)
            data = _PhiData(None, icx, (), phicx, aug)
        else:
            cores = injective_coresolution(e, self.res_cap)
            icx = BoundedComplex(
                self.algebra, 0, list(cores.terms), list(cores.maps), check=True
            )
            homs = tuple(self.end.hom_module(t) for t in cores.terms)
            hdiffs = [
                self.end.hom_induced(cores.maps[s], homs[s], homs[s + 1])
                for s in range(len(cores.terms) - 1)
            ]
            phicx = BoundedComplex(
                self.end.algebra, 0, [h.module for h in homs], hdiffs, check=True
            )
            h0 = icx.cohomology(0)
            rows = [
                h0.to_class(cores.augmentation.matrix.row(r)) for r in range(e.dim)
            ]
            aug = ModuleMap(e, h0.module, Matrix(f, rows, h0.module.dim), check=True)
            if h0.module.dim != e.dim or aug.rank() != e.dim:
                raise TiltingError(
                    "internal: augmentation fails to identify the module with "
                    "the degree-0 cohomology of its coresolution"
                )
            data = _PhiData(cores, icx, homs, phicx, aug)
        self._phi_cache[key] = data
        return data

    def phi_complex(self, e: Module) -> BoundedComplex:
        """``Hom(T, I^*)`` over the endomorphism algebra, degrees ``0..``."""
        return self._phi_data(e).phicx

    def phi_cohomology(self, e: Module, i: int) -> Module:
        """Degree-``i`` cohomology of the hom side, i.e. ``Ext^i(T, e)``."""
        return self._phi_data(e).phicx.cohomology(i).module

    def phi_dims(self, e: Module) -> tuple:
        """Cohomology dimensions of the hom side in degrees ``0..n``."""
        cx = self._phi_data(e).phicx
        dims = tuple(cx.cohomology(i).module.dim for i in range(self.n + 1))
        for i in cx.degrees():
            if i > self.n and cx.cohomology(i).module.dim:
                raise TiltingError(
                    "internal: hom-side cohomology outside degrees 0..n"
                )
        return dims

    def d_invariant(self, e: Module) -> int:
        """Dimension of the degree-1 hom-side cohomology (0 when n = 0)."""
        if self.n == 0:
            return 0
        return self.phi_dims(e)[1]

    def phi_of_complex(self, x: BoundedComplex) -> BoundedComplex:
        """The hom side of a bounded complex, via an injective replacement."""
        if not isinstance(x, BoundedComplex) or x.algebra.key != self.algebra.key:
            raise TiltingError(
                "hyper hom-functor input must be a bounded complex over the "
                "base algebra"
            )
        if not x.terms:
            return BoundedComplex.zero(self.end.algebra)
        j, _unit = injective_replacement(x, self.res_cap)
        if not j.terms:
            return BoundedComplex.zero(self.end.algebra)
        degs = list(j.degrees())
        homs = {i: self.end.hom_module(j.term(i)) for i in degs}
        diffs = [
            self.end.hom_induced(j.diff(i), homs[i], homs[i + 1]) for i in degs[:-1]
        ]
        return BoundedComplex(
            self.end.algebra,
            j.min_degree,
            [homs[i].module for i in degs],
            diffs,
            check=True,
        )

    # -- tensor side ------------------------------------------------------------
    def tensor_module(self, m: Module) -> TensorTerm:
        """``m (x)_A T`` as a module over the base algebra."""
        self._require_end(m, "tensor-functor input")
        key = m.key()
        hit = self._tensor_cache.get(key)
        if hit is not None:
            return hit
        f = self.algebra.field
        total = self.end.total
        tdim = total.dim
        amb_dim = m.dim * tdim
        if amb_dim == 0:
            z = zero_module(self.algebra)
            out = TensorTerm(
                m, z, Subspace.zero(f, 0), z, ModuleMap.zero(z, z), ()
            )
            self._tensor_cache[key] = out
            return out
        eye = Matrix.identity(f, m.dim)
        ambient = Module(
            self.algebra,
            amb_dim,
            [eye.kron(a) for a in total.action],
            check=False,
        )
        rel_rows = []
        for l in range(self.end.algebra.dim):
            w = self.end.endo_maps[l].matrix
            ma = m.action[l]
            for r in range(m.dim):
                mrow = ma.row(r)
                for s in range(tdim):
                    wrow = w.row(s)
                    vec = [f.zero] * amb_dim
                    for rp in range(m.dim):
                        c = mrow[rp]
                        if c != f.zero:
                            i = rp * tdim + s
                            vec[i] = f.add(vec[i], c)
                    for sp in range(tdim):
                        c = wrow[sp]
                        if c != f.zero:
                            i = r * tdim + sp
                            vec[i] = f.sub(vec[i], c)
                    if any(x != f.zero for x in vec):
                        rel_rows.append(vec)
        relations = Subspace.from_rows(f, amb_dim, rel_rows)
        quot, proj = quotient_module(ambient, relations)
        out = TensorTerm(
            m, ambient, relations, quot, proj, relations.nonpivot_columns()
        )
        self._tensor_cache[key] = out
        return out

    def tensor_map(self, g: ModuleMap, src: TensorTerm, tgt: TensorTerm) -> ModuleMap:
        """The induced map ``g (x) T`` between tensor terms."""
        if g.source.key() != src.source.key() or g.target.key() != tgt.source.key():
            raise TiltingError(
                "tensor_map endpoints do not match the given tensor terms"
            )
        f = self.algebra.field
        tdim = self.end.total.dim
        if src.module.dim == 0 or tgt.module.dim == 0:
            return ModuleMap.zero(src.module, tgt.module)
        rows = []
        for c in src.free:
            r, s = divmod(c, tdim)
            grow = g.matrix.row(r)
            vec = [f.zero] * (tgt.source.dim * tdim)
            for rp in range(tgt.source.dim):
                coeff = grow[rp]
                if coeff != f.zero:
                    vec[rp * tdim + s] = coeff
            rows.append(
                (Matrix(f, [vec], len(vec)) @ tgt.projection.matrix).row(0)
            )
        return ModuleMap(
            src.module, tgt.module, Matrix(f, rows, tgt.module.dim), check=True
        )

    def _tensor_complex(self, x: BoundedComplex):
        """Termwise tensor of a complex over the endomorphism algebra."""
        parts: Dict[int, TensorTerm] = {}
        degs = list(x.degrees())
        if not degs:
            return BoundedComplex.zero(self.algebra), parts
        for i in degs:
            parts[i] = self.tensor_module(x.term(i))
        terms = [parts[i].module for i in degs]
        diffs = [
            self.tensor_map(x.diff(i), parts[i], parts[i + 1]) for i in degs[:-1]
        ]
        return BoundedComplex(self.algebra, x.min_degree, terms, diffs, check=True), parts

    def psi_complex(self, m: Module) -> BoundedComplex:
        """``P^* (x)_A T`` over the minimal projective resolution of ``m``,
        in degrees ``-length..0``."""
        self._require_end(m, "tensor-functor input")
        key = m.key()
        hit = self._psi_cache.get(key)
        if hit is not None:
            return hit
        if m.dim == 0:
            cx = BoundedComplex.zero(self.algebra)
        else:
            res = minimal_projective_resolution(m, self.res_cap)
            ln = res.length
            acx = BoundedComplex(
                self.end.algebra,
                -ln,
                [res.terms[ln - k] for k in range(ln + 1)],
                [res.maps[ln - k] for k in range(ln)],
                check=True,
            )
            cx = self._tensor_complex(acx)[0]
        self._psi_cache[key] = cx
        return cx

    def psi_cohomology(self, m: Module, j: int) -> Module:
        """Degree-``j`` cohomology of the tensor side, i.e. ``Tor_{-j}(m, T)``."""
        return self.psi_complex(m).cohomology(j).module

    def psi_dims(self, m: Module) -> tuple:
        """Cohomology dimensions of the tensor side in degrees ``-n..0``."""
        cx = self.psi_complex(m)
        dims = tuple(cx.cohomology(j).module.dim for j in range(-self.n, 1))
        for j in cx.degrees():
            if j < -self.n and cx.cohomology(j).module.dim:
                raise TiltingError(
                    "internal: tensor-side cohomology outside degrees -n..0"
                )
        return dims

    # -- evaluation and roundtrips ---------------------------------------------
    def _ev_data(self, e: Module) -> tuple:
        """Tensor terms and evaluation maps ``Hom(T, I^s) (x) T -> I^s``."""
        self._require_base(e, "hom-functor input")
        key = e.key()
        hit = self._ev_cache.get(key)
        if hit is not None:
            return hit
        data = self._phi_data(e)
        tensors: Dict[int, TensorTerm] = {}
        evs: Dict[int, ModuleMap] = {}
        if data.cores is not None:
            for s, hom in enumerate(data.homs):
                tt = self.tensor_module(hom.module)
                tensors[s] = tt
                evs[s] = self._evaluation_map(hom, tt, data.cores.terms[s])
        out = (tensors, evs)
        self._ev_cache[key] = out
        return out

    def _evaluation_map(
        self, hom: HomOverEnd, tt: TensorTerm, target: Module
    ) -> ModuleMap:
        """``h (x) t -> h(t)``, verified to kill the bilinearity relations."""
        f = self.algebra.field
        tdim = self.end.total.dim
        if tt.module.dim == 0 or target.dim == 0:
            return ModuleMap.zero(tt.module, target)
        amb_rows = []
        for h in hom.basis:
            for s in range(tdim):
                amb_rows.append(h.matrix.row(s))
        amb = Matrix(f, amb_rows, target.dim)
        for rr in range(tt.relations.dim):
            img = Matrix(f, [tt.relations.basis.row(rr)], tt.ambient.dim) @ amb
            if any(x != f.zero for x in img.row(0)):
                raise TiltingError(
                    "internal: evaluation does not respect the tensor relations"
                )
        rows = [amb.row(c) for c in tt.free]
        return ModuleMap(
            tt.module, target, Matrix(f, rows, target.dim), check=True
        )

    def _ev_chain(self, e: Module, q: BoundedComplex, to_phi: Dict[int, ModuleMap]):
        """The chain map ``q (x) T -> I^*`` with components ``ev . (to_phi (x) T)``."""
        data = self._phi_data(e)
        tensors, evs = self._ev_data(e)
        qt, qparts = self._tensor_complex(q)
        comps: Dict[int, ModuleMap] = {}
        for i in q.degrees():
            comp = to_phi.get(i)
            if comp is None or comp.source.dim == 0 or comp.target.dim == 0:
                continue
            if i not in tensors or tensors[i].module.dim == 0:
                continue
            step = self.tensor_map(comp, qparts[i], tensors[i])
            comps[i] = step.compose(then=evs[i])
        return ChainMap(qt, data.icx, comps), qt

    def roundtrip_unit(self, e: Module) -> RoundtripReport:
        """Tensor side applied to the hom side of ``e``: certifies that the
        composite is quasi-isomorphic to ``e`` via the evaluation chain map,
        returning the explicit degree-0 isomorphism."""
        self._require_base(e, "roundtrip input")
        if e.dim == 0:
            z = zero_module(self.algebra)
            return RoundtripReport(
                True, BoundedComplex.zero(self.algebra), find_isomorphism(z, e)
            )
        data = self._phi_data(e)
        q, pi = projective_replacement(data.phicx, self.res_cap)
        to_phi = {i: pi.component(i) for i in q.degrees()}
        chain, qt = self._ev_chain(e, q, to_phi)
        ok = is_quasi_iso(chain)
        iso = None
        if ok:
            induced = chain.induced_cohomology_map(0)
            back = data.aug_iso.matrix.inverse()
            cand = ModuleMap(induced.source, e, induced.matrix @ back, check=True)
            if cand.source.dim == e.dim and cand.rank() == e.dim:
                iso = cand
            else:
                ok = False
        return RoundtripReport(ok, qt, iso)

    def roundtrip_counit(self, m: Module, iso_cap: int = ISO_SEARCH_CAP) -> RoundtripReport:
        """Hom side applied to the tensor side of ``m``: certifies that the
        composite has cohomology concentrated in degree 0 and isomorphic to
        ``m``.  ``iso_cap`` bounds the exhaustive isomorphism search (the Hom
        space between large decomposable modules can exceed the default)."""
        self._require_end(m, "roundtrip input")
        if m.dim == 0:
            z = zero_module(self.end.algebra)
            return RoundtripReport(
                True, BoundedComplex.zero(self.end.algebra), find_isomorphism(z, m)
            )
        back = self.phi_of_complex(self.psi_complex(m))
        concentrated = all(
            back.cohomology(i).module.dim == 0 for i in back.degrees() if i != 0
        )
        iso = None
        if concentrated:
            iso = find_isomorphism(back.cohomology(0).module, m, cap=iso_cap)
        return RoundtripReport(concentrated and iso is not None, back, iso)

    # -- concentration classes ---------------------------------------------------
    def class_membership(self, obj, kind: str, i: int) -> tuple:
        """Whether ``obj`` lies in the requested concentration class, with the
        cohomology-dimension evidence.

        Kinds: ``"X"`` (hom side concentrated in degree ``i``), ``"B"`` (hom
        side vanishes in degree ``i``), ``"XD"`` (hom side of a bounded
        complex concentrated in degree ``i``), ``"Y"`` (tensor side
        concentrated in degree ``i``), ``"C"`` (tensor side vanishes in degree
        ``i``).
        """
        kind = kind.upper()
        if kind == "XD":
            if not isinstance(obj, BoundedComplex):
                raise TiltingError("XD membership takes a bounded complex")
            cx = self.phi_of_complex(obj)
            degs = list(cx.degrees())
            dims = tuple(cx.cohomology(d).module.dim for d in degs)
            ok = all(dim == 0 for d, dim in zip(degs, dims) if d != i)
            return ok, CohomologyLabel("phi", dims)
        if isinstance(obj, BoundedComplex):
            raise TiltingError(f"{kind} membership takes a module, not a complex")
        if kind in ("X", "B"):
            self._require_base(obj, "membership input")
            dims = self.phi_dims(obj)
            if kind == "X":
                ok = all(d == 0 for j, d in enumerate(dims) if j != i)
            else:
                ok = (dims[i] if 0 <= i < len(dims) else 0) == 0
            return ok, CohomologyLabel("phi", dims)
        if kind in ("Y", "C"):
            self._require_end(obj, "membership input")
            dims = self.psi_dims(obj)
            if kind == "Y":
                ok = all(d == 0 for j, d in enumerate(dims) if j - self.n != i)
            else:
                idx = i + self.n
                ok = (dims[idx] if 0 <= idx < len(dims) else 0) == 0
            return ok, CohomologyLabel("psi", dims)
        raise TiltingError(f"unknown class kind {kind!r}")

    # -- the filtration by truncated images ---------------------------------------
    def truncation_edge(self, e: Module, j: int) -> ModuleMap:
        """The canonical map into ``e`` from the degree-0 cohomology of the
        tensor side of the hom side truncated above degree ``j``.

        For ``j = 0`` the source is the degree-0 round trip of ``e`` and the map
        is the counit-style evaluation; its image is the bottom filtration step.
        """
        self._require_base(e, "filtration input")
        key = (e.key(), j)
        hit = self._edge_cache.get(key)
        if hit is not None:
            return hit
        edge = self._build_truncation_edge(e, j)
        self._edge_cache[key] = edge
        return edge

    def _build_truncation_edge(self, e: Module, j: int) -> ModuleMap:
        zero_src = ModuleMap.zero(zero_module(self.algebra), e)
        if e.dim == 0:
            return zero_src
        data = self._phi_data(e)
        trunc, incl = truncate_above(data.phicx, j)
        if not trunc.terms:
            return zero_src
        q, pi = projective_replacement(trunc, self.res_cap)
        if not q.terms:
            return zero_src
        to_phi = {}
        for i in q.degrees():
            to_phi[i] = pi.component(i).compose(then=incl.component(i))
        chain, qt = self._ev_chain(e, q, to_phi)
        if qt.cohomology(0).module.dim == 0:
            return zero_src
        induced = chain.induced_cohomology_map(0)
        back = data.aug_iso.matrix.inverse()
        return ModuleMap(induced.source, e, induced.matrix @ back, check=True)

    def spectral_filtration(self, e: Module) -> SpectralFiltration:
        """The exhaustive filtration of ``e`` by images of truncations of the
        hom side pushed back through the tensor side, with its factors."""
        self._require_base(e, "filtration input")
        f = self.algebra.field
        if e.dim == 0:
            z = Subspace.zero(f, 0)
            zm = zero_module(self.algebra)
            return SpectralFiltration(
                e,
                tuple(z for _ in range(self.n + 1)),
                tuple(zm for _ in range(self.n + 1)),
                (0, 0) if self.n == 2 else None,
                None,
            )
        data = self._phi_data(e)
        steps = [self.truncation_edge(e, j).image_subspace() for j in range(self.n + 1)]
        for j in range(self.n):
            for r in range(steps[j].dim):
                if not steps[j + 1].contains_vector(steps[j].basis.row(r)):
                    raise TiltingError("internal: filtration steps fail to nest")
        if steps[-1].dim != e.dim:
            raise TiltingError("internal: the filtration does not exhaust the module")
        factors = [submodule_module(e, steps[0])[0]]
        for j in range(1, self.n + 1):
            factors.append(_subquotient(e, steps[j], steps[j - 1]))
        middle_dims = None
        middle_iso = None
        if self.n == 2:
            mid = factors[1]
            phi1 = data.phicx.cohomology(1).module
            psi_m1 = self.psi_cohomology(phi1, -1)
            middle_dims = (mid.dim, psi_m1.dim)
            if mid.dim and mid.dim == psi_m1.dim:
                middle_iso = find_isomorphism(mid, psi_m1)
        return SpectralFiltration(e, tuple(steps), tuple(factors), middle_dims, middle_iso)
