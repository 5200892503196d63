"""Class membership tests and torsion-pair filtrations for a tilting module.

Given a validated :class:`~tiltkit.tilting.TiltingData` with homological
dimension ``n``, every module ``E`` over the base algebra carries canonical
filtrations whose factors are controlled by the derived functors:

* the *refining filtration* (``n = 2``): iterate the two-step image
  filtration on middle factors until the middle is concentrated in degree 1;
  the factors below the middle are quotients of degree-0-concentrated
  objects, the factors above are kernels of maps from degree-2-concentrated
  objects onto degree-0-concentrated objects;
* the *three-step filtration* (``n = 2``): torsion part for the degree-2
  vanishing class, refined once more inside the torsion part;
* the *general filtration* (any ``n``): peel torsion parts for the nested
  extension-closed classes ``T(n) ⊇ ... ⊇ T(1)``, where ``T(i)`` is the
  extension closure of quotients of modules whose cohomology vanishes in all
  degrees ``i..n``.

Class tests come in two kinds.  *Exact* tests decide membership outright.
*Bounded* tests search for an explicit witness within configurable bounds and
are three-valued: ``yes`` (with a witness), ``no`` (with a violated exact
necessary condition), or ``unknown`` (bounds exhausted) -- a bounded test
never guesses.  Every returned :class:`Membership` carries a re-checkable
certificate.  Filtration steps are always re-validated for nesting,
invariance and exhaustion before they are returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iter_product
from typing import Callable, List, Optional

from .linalg import Matrix, Subspace, subspace_sum
from .modules import (
    Module,
    ModuleMap,
    enumerate_modules,
    enumerate_submodules,
    hom_space,
    quotient_module,
    submodule_module,
)
from .tilting import TiltingData, TiltingError, _subquotient

__all__ = [
    "ClassDescriptor",
    "Filtration",
    "FiltrationError",
    "Membership",
    "bracket_class",
    "filter_general",
    "filter_jms",
    "filter_three_step",
    "in_K0",
    "in_K1",
    "in_K2",
    "in_bracket_class",
    "intersection_class",
    "membership",
    "named_class",
    "perp_class",
    "subquotient",
    "torsion_part",
]

#: default ceiling on the total dimension of searched witness objects
DIM_BOUND_DEFAULT = 6
#: default exponent cap for coefficient sweeps over the base field
COMB_CAP_DEFAULT = 6


class FiltrationError(ValueError):
    """A malformed filtration request, or an internal invariant violation."""


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------

_INDEXED_NAMES = ("X", "B", "Y", "C")
_PLAIN_NAMES = ("K0", "K1", "K2")


@dataclass(frozen=True)
class ClassDescriptor:
    """A module class that membership tests and filtrations can refer to.

    ``exact`` distinguishes exactly decidable classes from bounded ones whose
    tests may return ``unknown``.
    """

    kind: str  # "named" | "bracket" | "perp" | "intersection"
    name: str
    exact: bool
    params: tuple = ()

    def __and__(self, other: "ClassDescriptor") -> "ClassDescriptor":
        return intersection_class(self, other)


def named_class(name: str, i: Optional[int] = None) -> ClassDescriptor:
    """A concentration/vanishing class (``X``, ``B``, ``Y``, ``C`` with a
    degree index) or one of the kernel/quotient classes (``K0``, ``K1``,
    ``K2``)."""
    if name in _INDEXED_NAMES:
        if i is None:
            raise FiltrationError(f"class {name!r} needs a degree index")
        return ClassDescriptor("named", f"{name}({i})", True, (name, i))
    if name in _PLAIN_NAMES:
        if i is not None:
            raise FiltrationError(f"class {name!r} takes no degree index")
        return ClassDescriptor("named", name, name != "K2", (name,))
    raise FiltrationError(f"unknown class name {name!r}")


def bracket_class(tilt: TiltingData, i: int) -> ClassDescriptor:
    """``T(i)``: the extension closure of quotients of modules whose hom-side
    cohomology vanishes in all degrees ``i..n``; ``T(n+1)`` is everything."""
    n = tilt.n
    if not 1 <= i <= n + 1:
        raise FiltrationError(f"bracket index {i} out of range 1..{n + 1}")
    # exact when the class collapses to a vanishing class (i >= n) or when the
    # quotient test for the factors is itself exact (n = 2, i = 1)
    exact = i >= n or (n == 2 and i == 1)
    return ClassDescriptor("bracket", f"T({i})", exact, (i,))


def perp_class(inner: ClassDescriptor) -> ClassDescriptor:
    """Modules with no nonzero submodule in ``inner`` (the torsion-free class
    of a quotient- and extension-closed ``inner``)."""
    if inner.kind == "bracket":
        name = f"F({inner.params[0]})"
    else:
        name = f"{inner.name}-perp"
    return ClassDescriptor("perp", name, inner.exact, (inner,))


def intersection_class(*parts: ClassDescriptor) -> ClassDescriptor:
    flat: List[ClassDescriptor] = []
    for p in parts:
        if p.kind == "intersection":
            flat.extend(p.params)
        else:
            flat.append(p)
    if not flat:
        raise FiltrationError("intersection of no classes")
    return ClassDescriptor(
        "intersection",
        " & ".join(p.name for p in flat),
        all(p.exact for p in flat),
        tuple(flat),
    )


@dataclass(frozen=True)
class Membership:
    """A three-valued membership answer with a re-checkable certificate."""

    verdict: str  # "yes" | "no" | "unknown"
    descriptor: ClassDescriptor
    certificate: tuple = ()
    note: str = ""


@dataclass(frozen=True)
class Filtration:
    """An ascending chain of invariant subspaces with labelled factors.

    ``steps`` runs from the zero subspace to the full space; factor ``i`` is
    ``steps[i+1] / steps[i]`` and carries ``labels[i]`` with
    ``certificates[i]`` as recomputed (never transported) evidence.
    """

    module: Module
    steps: tuple
    labels: tuple
    certificates: tuple

    @property
    def step_dims(self) -> tuple:
        return tuple(s.dim for s in self.steps)

    def factor(self, i: int) -> Module:
        return _subquotient(self.module, self.steps[i + 1], self.steps[i])


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def subquotient(e: Module, outer: Subspace, inner: Subspace) -> Module:
    """``outer / inner`` as a module, for nested invariant subspaces of ``e``."""
    if not _sub_contains(outer, inner):
        raise FiltrationError("subquotient: inner subspace not inside the outer one")
    return _subquotient(e, outer, inner)


def _sub_contains(outer: Subspace, inner: Subspace) -> bool:
    return all(outer.contains_vector(inner.basis.row(r)) for r in range(inner.dim))


def _require_n2(tilt: TiltingData, what: str) -> None:
    if tilt.n != 2:
        raise FiltrationError(
            f"{what} requires homological dimension 2 (this tilt has {tilt.n})"
        )


def _class_cache(tilt: TiltingData) -> dict:
    cache = getattr(tilt, "_class_membership_cache", None)
    if cache is None:
        cache = {}
        tilt._class_membership_cache = cache
    return cache


def _subquotient_lifter(e: Module, outer: Subspace, inner: Subspace) -> Callable:
    """A map from subspaces of ``outer/inner`` (in quotient coordinates) to
    subspaces of ``e`` containing ``inner``.

    Quotient coordinates index the non-pivot columns of ``inner`` inside
    ``outer``, and a unit vector at a non-pivot column is a genuine coset
    representative, so representatives can be read off positionally.
    """
    f = e.algebra.field
    rows = [outer.coords(inner.basis.row(r)) for r in range(inner.dim)]
    inside = Subspace.from_rows(f, outer.dim, rows)
    free = inside.nonpivot_columns()

    def lift(sub: Subspace) -> Subspace:
        lifted = [inner.basis.row(r) for r in range(inner.dim)]
        for r in range(sub.dim):
            srow = sub.basis.row(r)
            amb = [f.zero] * outer.dim
            for c, val in zip(free, srow):
                amb[c] = val
            lifted.append((Matrix(f, [amb]) @ outer.basis).row(0))
        out = Subspace.from_rows(f, e.dim, lifted)
        if out.dim != inner.dim + sub.dim:
            raise FiltrationError("internal: lifted subspace has the wrong dimension")
        return out

    return lift


def _push_subspace(local: Subspace, ambient: Subspace, e: Module) -> Subspace:
    """A subspace given in the coordinates of ``ambient`` (a submodule of
    ``e``), expressed in the coordinates of ``e``."""
    f = e.algebra.field
    if local.dim == 0:
        return Subspace.zero(f, e.dim)
    mat = local.basis @ ambient.basis
    return Subspace.from_rows(f, e.dim, [mat.row(r) for r in range(mat.nrows)])


def _validate_filtration(filt: Filtration) -> None:
    e = filt.module
    if len(filt.labels) != len(filt.steps) - 1 or len(filt.certificates) != len(filt.labels):
        raise FiltrationError("internal: filtration shape mismatch")
    if filt.steps[0].dim != 0 or filt.steps[-1].dim != e.dim:
        raise FiltrationError("internal: filtration does not run from zero to the module")
    for below, above in zip(filt.steps, filt.steps[1:]):
        if not _sub_contains(above, below):
            raise FiltrationError("internal: filtration steps fail to nest")
    for s in filt.steps:
        if not e.is_invariant(s):
            raise FiltrationError("internal: a filtration step is not action invariant")


# ---------------------------------------------------------------------------
# membership dispatch
# ---------------------------------------------------------------------------

def membership(
    tilt: TiltingData,
    m: Module,
    descriptor: ClassDescriptor,
    *,
    dim_bound: int = DIM_BOUND_DEFAULT,
    comb_cap: int = COMB_CAP_DEFAULT,
) -> Membership:
    """Decide whether ``m`` belongs to the described class.

    Exact descriptors yield a definite answer; bounded ones may return
    ``unknown`` once the witness search bounds are exhausted.  Results are
    cached per tilt, module and bounds.
    """
    cache = _class_cache(tilt)
    key = (descriptor, m.algebra.key, m.key(), dim_bound, comb_cap)
    hit = cache.get(key)
    if hit is None:
        hit = _membership_uncached(tilt, m, descriptor, dim_bound, comb_cap)
        cache[key] = hit
    return hit


def _membership_uncached(tilt, m, descriptor, dim_bound, comb_cap) -> Membership:
    if descriptor.kind == "named":
        name = descriptor.params[0]
        if name in _INDEXED_NAMES:
            ok, label = tilt.class_membership(m, name, descriptor.params[1])
            return Membership(
                "yes" if ok else "no",
                descriptor,
                (("side", label.kind), ("dims", label.dims)),
            )
        if name == "K0":
            return _in_k0_impl(tilt, m, descriptor)
        if name == "K1":
            return _in_k1_impl(tilt, m, descriptor)
        if name == "K2":
            return _in_k2_impl(tilt, m, descriptor, dim_bound, comb_cap)
        raise FiltrationError(f"unknown named class {name!r}")
    if descriptor.kind == "bracket":
        return _bracket_impl(tilt, m, descriptor, dim_bound, comb_cap)
    if descriptor.kind == "perp":
        return _perp_impl(tilt, m, descriptor, dim_bound, comb_cap)
    if descriptor.kind == "intersection":
        evidence = []
        worst = "yes"
        failing = ""
        for part in descriptor.params:
            got = membership(tilt, m, part, dim_bound=dim_bound, comb_cap=comb_cap)
            evidence.append((part.name, got))
            if got.verdict == "no" and worst != "no":
                worst = "no"
                failing = part.name
            elif got.verdict == "unknown" and worst == "yes":
                worst = "unknown"
        note = f"fails {failing}" if worst == "no" else ""
        return Membership(worst, descriptor, tuple(evidence), note)
    raise FiltrationError(f"unknown descriptor kind {descriptor.kind!r}")


# ---------------------------------------------------------------------------
# the kernel/quotient classes (homological dimension 2)
# ---------------------------------------------------------------------------

def in_K0(tilt: TiltingData, e: Module) -> Membership:
    """Is ``e`` a quotient of a degree-0-concentrated module?  Exact test:
    degree-2 cohomology vanishes, the canonical degree-0 map covers ``e``,
    and its kernel is concentrated in degree 2.  A ``yes`` certificate is the
    resulting short exact presentation."""
    return membership(tilt, e, named_class("K0"))


def in_K1(tilt: TiltingData, e: Module) -> Membership:
    """Is ``e`` concentrated in degree 1?  Exact."""
    return membership(tilt, e, named_class("K1"))


def in_K2(
    tilt: TiltingData,
    e: Module,
    *,
    dim_bound: int = DIM_BOUND_DEFAULT,
    comb_cap: int = COMB_CAP_DEFAULT,
) -> Membership:
    """Is ``e`` the kernel of a map from a degree-2-concentrated module onto a
    degree-0-concentrated module?  Bounded three-valued test: exact necessary
    conditions first, then a witness search up to the given bounds."""
    return membership(tilt, e, named_class("K2"), dim_bound=dim_bound, comb_cap=comb_cap)


def _in_k0_impl(tilt, e, desc) -> Membership:
    _require_n2(tilt, "the quotient-generated class")
    if e.dim == 0:
        return Membership("yes", desc, (), "zero module")
    dims = tilt.phi_dims(e)
    if dims[2] != 0:
        return Membership(
            "no", desc, (("phi_dims", dims),), "degree-2 cohomology does not vanish"
        )
    edge = tilt.truncation_edge(e, 0)
    if not edge.is_surjective():
        return Membership(
            "no",
            desc,
            (("phi_dims", dims), ("edge_rank", edge.rank()), ("edge", edge)),
            "the canonical degree-0 map does not cover the module",
        )
    ker_mod, _incl = edge.kernel()
    ker_dims = tilt.phi_dims(ker_mod)
    if ker_dims[0] or ker_dims[1]:
        return Membership(
            "no",
            desc,
            (("kernel_phi_dims", ker_dims), ("edge", edge)),
            "the kernel of the canonical map is not concentrated in degree 2",
        )
    mid_dims = tilt.phi_dims(edge.source)
    if mid_dims[1] or mid_dims[2]:
        raise FiltrationError(
            "internal: the canonical degree-0 source is not concentrated in degree 0"
        )
    cert = (
        ("middle_dim", edge.source.dim),
        ("middle_phi_dims", mid_dims),
        ("kernel_dim", ker_mod.dim),
        ("kernel_phi_dims", ker_dims),
        ("edge", edge),
    )
    return Membership("yes", desc, cert)


def _in_k1_impl(tilt, e, desc) -> Membership:
    _require_n2(tilt, "the middle concentration class")
    ok, label = tilt.class_membership(e, "X", 1)
    return Membership("yes" if ok else "no", desc, (("phi_dims", label.dims),))


def _in_k2_impl(tilt, e, desc, dim_bound, comb_cap) -> Membership:
    _require_n2(tilt, "the kernel-generated class")
    if e.dim == 0:
        return Membership("yes", desc, (), "zero module")
    dims = tilt.phi_dims(e)
    if dims[0] != 0:
        return Membership(
            "no", desc, (("phi_dims", dims),), "degree-0 cohomology does not vanish"
        )
    phi1 = tilt.phi_cohomology(e, 1)
    if phi1.dim and not tilt.class_membership(phi1, "Y", 0)[0]:
        return Membership(
            "no",
            desc,
            (("phi_dims", dims), ("degree1_psi_dims", tilt.psi_dims(phi1))),
            "the degree-1 cohomology fails its tensor-side concentration",
        )
    phi2 = tilt.phi_cohomology(e, 2)
    if phi2.dim and not tilt.class_membership(phi2, "Y", -2)[0]:
        return Membership(
            "no",
            desc,
            (("phi_dims", dims), ("degree2_psi_dims", tilt.psi_dims(phi2))),
            "the degree-2 cohomology fails its tensor-side concentration",
        )
    if dims[1] == 0:
        # concentrated in degree 2: the kernel of the map onto the zero module
        return Membership(
            "yes", desc, (("phi_dims", dims),), "concentrated in degree 2"
        )
    # bounded witness search: an embedding into a degree-2-concentrated module
    # whose cokernel is concentrated in degree 0
    f = tilt.algebra.field
    capped = False
    for g in enumerate_modules(tilt.algebra, dim_bound):
        if g.dim < e.dim:
            continue
        gdims = tilt.phi_dims(g)
        if gdims[0] or gdims[1]:
            continue
        basis = hom_space(e, g)
        if not basis:
            continue
        if f.order is None or f.order ** len(basis) > f.order ** comb_cap:
            capped = True
            continue
        for coeffs in iter_product(range(f.order), repeat=len(basis)):
            mat = Matrix.zeros(f, e.dim, g.dim)
            for c, h in zip(coeffs, basis):
                if c:
                    mat = mat + h.matrix.scale(c)
            if mat.rank() != e.dim:
                continue
            emb = ModuleMap(e, g, mat, check=False)
            coker = quotient_module(g, emb.image_subspace())[0]
            cdims = tilt.phi_dims(coker)
            if cdims[1] == 0 and cdims[2] == 0:
                cert = (
                    ("phi_dims", dims),
                    ("witness_dim", g.dim),
                    ("embedding", emb),
                    ("cokernel_phi_dims", cdims),
                )
                return Membership("yes", desc, cert)
    note = "no witness within the bounds"
    if capped:
        note += " (some Hom sweeps exceeded the coefficient cap)"
    return Membership(
        "unknown",
        desc,
        (("phi_dims", dims), ("dim_bound", dim_bound), ("comb_cap", comb_cap)),
        note,
    )


# ---------------------------------------------------------------------------
# extension closures of quotient classes
# ---------------------------------------------------------------------------

def in_bracket_class(
    tilt: TiltingData,
    e: Module,
    i: int,
    *,
    dim_bound: int = DIM_BOUND_DEFAULT,
    comb_cap: int = COMB_CAP_DEFAULT,
) -> Membership:
    """Does ``e`` admit a filtration whose factors are quotients of modules
    with hom-side cohomology vanishing in degrees ``i..n``?"""
    return membership(
        tilt, e, bracket_class(tilt, i), dim_bound=dim_bound, comb_cap=comb_cap
    )


def _bracket_impl(tilt, e, desc, dim_bound, comb_cap) -> Membership:
    i = desc.params[0]
    n = tilt.n
    if not 1 <= i <= n + 1:
        raise FiltrationError(f"bracket index {i} out of range 1..{n + 1}")
    if i == n + 1:
        return Membership("yes", desc, (), "every module belongs")
    if e.dim == 0:
        return Membership("yes", desc, (), "zero module")
    if i == n:
        # the degree-n vanishing class is already closed under quotients and
        # extensions, so the closure adds nothing
        ok, label = tilt.class_membership(e, "B", n)
        return Membership("yes" if ok else "no", desc, (("dims", label.dims),))
    if n == 2 and i == 1:
        factor_test = lambda q: membership(
            tilt, q, named_class("K0"), dim_bound=dim_bound, comb_cap=comb_cap
        )
    else:
        factor_test = lambda q: _bounded_quotient_test(tilt, q, i, dim_bound, comb_cap)
    return _extension_dp(tilt, e, desc, factor_test)


def _extension_dp(tilt, e, desc, factor_test) -> Membership:
    """Reachability over the submodule lattice: a subspace is good when some
    good proper subspace sits under it with a good factor.  Complete because
    submodule enumeration is exhaustive."""
    subs = sorted(enumerate_submodules(e), key=lambda s: (s.dim, s.key()))
    zero_key = subs[0].key()
    full_key = subs[-1].key()
    yes_keys = {zero_key}
    parents: dict = {}
    saw_unknown = False
    for w in subs:
        wk = w.key()
        if wk == zero_key:
            continue
        for v in subs:
            if v.dim >= w.dim:
                break
            if v.key() not in yes_keys or not _sub_contains(w, v):
                continue
            got = factor_test(_subquotient(e, w, v))
            if got.verdict == "yes":
                yes_keys.add(wk)
                parents[wk] = (v, w, got)
                break
            if got.verdict == "unknown":
                saw_unknown = True
    if full_key in yes_keys:
        chain = []
        key = full_key
        lookup = {s.key(): s for s in subs}
        while key != zero_key:
            below, here, got = parents[key]
            chain.append((below, lookup[key], got))
            key = below.key()
        chain.reverse()
        return Membership("yes", desc, (("chain", tuple(chain)),))
    if saw_unknown:
        # a second, permissive pass: reachable through unknown factors?
        maybe = set(yes_keys)
        for w in subs:
            wk = w.key()
            if wk in maybe:
                continue
            for v in subs:
                if v.dim >= w.dim:
                    break
                if v.key() not in maybe or not _sub_contains(w, v):
                    continue
                if factor_test(_subquotient(e, w, v)).verdict in ("yes", "unknown"):
                    maybe.add(wk)
                    break
        if full_key in maybe:
            return Membership(
                "unknown",
                desc,
                (("submodules", len(subs)),),
                "a filtration chain exists only through factors the bounded "
                "test could not resolve",
            )
    return Membership(
        "no",
        desc,
        (("submodules", len(subs)),),
        "no filtration chain over the factor class",
    )


def _bounded_quotient_test(tilt, q, i, dim_bound, comb_cap) -> Membership:
    """Is ``q`` a quotient of a module whose cohomology vanishes in degrees
    ``i..n``?  Bounded three-valued search (used when no exact test applies)."""
    desc = ClassDescriptor("named", f"Q({i})", False, ("Q", i))
    n = tilt.n
    if q.dim == 0:
        return Membership("yes", desc, (), "zero module")
    dims = tilt.phi_dims(q)
    # exact necessary condition: top-degree vanishing survives quotients
    if dims[n] != 0:
        return Membership(
            "no", desc, (("phi_dims", dims),), "top-degree cohomology does not vanish"
        )
    if all(dims[j] == 0 for j in range(i, n + 1)):
        return Membership("yes", desc, (("phi_dims", dims),), "lies in the core class")
    f = tilt.algebra.field
    capped = False
    for g in enumerate_modules(tilt.algebra, dim_bound):
        if g.dim < q.dim:
            continue
        gdims = tilt.phi_dims(g)
        if any(gdims[j] for j in range(i, n + 1)):
            continue
        basis = hom_space(g, q)
        if not basis:
            continue
        if f.order is None or f.order ** len(basis) > f.order ** comb_cap:
            capped = True
            continue
        for coeffs in iter_product(range(f.order), repeat=len(basis)):
            mat = Matrix.zeros(f, g.dim, q.dim)
            for c, h in zip(coeffs, basis):
                if c:
                    mat = mat + h.matrix.scale(c)
            if mat.rank() == q.dim:
                cert = (("source_dim", g.dim), ("surjection", ModuleMap(g, q, mat, check=False)))
                return Membership("yes", desc, cert)
    note = "no surjection witness within the bounds"
    if capped:
        note += " (some Hom sweeps exceeded the coefficient cap)"
    return Membership(
        "unknown", desc, (("dim_bound", dim_bound), ("comb_cap", comb_cap)), note
    )


# ---------------------------------------------------------------------------
# torsion parts and perpendicular classes
# ---------------------------------------------------------------------------

def _is_torsion_class(tilt, descriptor) -> bool:
    if descriptor.kind == "bracket":
        return True
    if descriptor.kind == "named" and descriptor.params[0] == "B":
        # only the top-degree vanishing class is quotient closed
        return descriptor.params[1] == tilt.n
    if descriptor.kind == "named" and descriptor.params[0] == "C":
        # degree-0 tensor cohomology is right exact, so its vanishing class
        # is closed under quotients; the long exact sequence gives extensions
        return descriptor.params[1] == 0
    return False


def torsion_part(
    tilt: TiltingData,
    e: Module,
    descriptor: ClassDescriptor,
    *,
    dim_bound: int = DIM_BOUND_DEFAULT,
    comb_cap: int = COMB_CAP_DEFAULT,
) -> tuple:
    """The largest submodule of ``e`` in the given quotient- and
    extension-closed class, with a membership certificate for it.

    Computed as the span of all class submodules from the exhaustive lattice
    enumeration; the result is re-verified to lie in the class, and the
    quotient is re-verified to contain no nonzero class submodule.  If some
    submodule test is ``unknown`` at the bounds, the returned part is only a
    lower bound and the certificate says so.
    """
    if not _is_torsion_class(tilt, descriptor):
        raise FiltrationError(
            f"class {descriptor.name} is not quotient and extension closed; "
            "its torsion part is undefined"
        )
    f = e.algebra.field
    total = Subspace.zero(f, e.dim)
    gens: List[Subspace] = []
    unknowns = 0
    subs = enumerate_submodules(e) if e.dim else []
    for s in subs:
        if s.dim == 0:
            continue
        got = membership(
            tilt, submodule_module(e, s)[0], descriptor,
            dim_bound=dim_bound, comb_cap=comb_cap,
        )
        if got.verdict == "yes":
            gens.append(s)
            total = subspace_sum(total, s)
        elif got.verdict == "unknown":
            unknowns += 1
    part_mem = membership(
        tilt, submodule_module(e, total)[0], descriptor,
        dim_bound=dim_bound, comb_cap=comb_cap,
    )
    if part_mem.verdict == "no":
        raise FiltrationError(
            "internal: the span of class submodules left the class"
        )
    # the quotient must have no nonzero class submodule: submodules of the
    # quotient are exactly the subspaces between the part and the module
    for u in subs:
        if u.dim <= total.dim or not _sub_contains(u, total):
            continue
        over = membership(
            tilt, _subquotient(e, u, total), descriptor,
            dim_bound=dim_bound, comb_cap=comb_cap,
        )
        if over.verdict == "yes" and unknowns == 0:
            raise FiltrationError(
                "internal: the quotient by the torsion part still has a class submodule"
            )
    verdict = "unknown" if unknowns else part_mem.verdict
    note = part_mem.note
    if unknowns:
        note = (
            f"{unknowns} submodule tests unresolved at the bounds; "
            "the part is a verified lower bound"
        )
    cert = Membership(
        verdict,
        descriptor,
        (
            ("generators", tuple(gens)),
            ("part_dim", total.dim),
            ("unresolved_submodules", unknowns),
        ),
        note,
    )
    return total, cert


def _perp_impl(tilt, m, desc, dim_bound, comb_cap) -> Membership:
    inner = desc.params[0]
    if not _is_torsion_class(tilt, inner):
        raise FiltrationError(
            f"perpendicular of {inner.name} is not supported: the inner class "
            "is not quotient closed, so submodule emptiness does not "
            "characterise Hom vanishing"
        )
    if m.dim == 0:
        return Membership("yes", desc, (), "zero module")
    unknowns = 0
    checked = 0
    for s in enumerate_submodules(m):
        if s.dim == 0:
            continue
        checked += 1
        got = membership(
            tilt, submodule_module(m, s)[0], inner,
            dim_bound=dim_bound, comb_cap=comb_cap,
        )
        if got.verdict == "yes":
            return Membership(
                "no",
                desc,
                (("witness", s), ("witness_membership", got)),
                "a nonzero submodule lies in the inner class",
            )
        if got.verdict == "unknown":
            unknowns += 1
    if unknowns:
        return Membership(
            "unknown",
            desc,
            (("submodules_checked", checked), ("unresolved", unknowns)),
            "some submodule tests were unresolved at the bounds",
        )
    return Membership("yes", desc, (("submodules_checked", checked),))


# ---------------------------------------------------------------------------
# the refining filtration (homological dimension 2)
# ---------------------------------------------------------------------------

def filter_jms(tilt: TiltingData, e: Module) -> Filtration:
    """Refine the two-step image filtration until the middle factor is
    concentrated in degree 1.

    Produces ``0 = Z_0 <= ... <= Z_m <= Y_m <= ... <= Y_0 = E`` with bottom
    factors in the quotient class, the middle in the degree-1 concentration
    class and top factors in the kernel class.  The degree-1 dimension of the
    middle strictly decreases each round, which forces termination; a
    non-decreasing round raises instead of looping.
    """
    _require_n2(tilt, "the refining filtration")
    f = e.algebra.field
    zs = [Subspace.zero(f, e.dim)]
    ys = [Subspace.full(f, e.dim)]
    prev_d: Optional[int] = None
    while True:
        mid = _subquotient(e, ys[-1], zs[-1])
        if membership(tilt, mid, named_class("K1")).verdict == "yes":
            break
        d_cur = tilt.d_invariant(mid)
        if prev_d is not None and d_cur >= prev_d:
            raise FiltrationError(
                "internal: refinement failed to make progress — the degree-1 "
                f"dimension went {prev_d} -> {d_cur} on a middle factor not "
                "concentrated in degree 1"
            )
        prev_d = d_cur
        sf = tilt.spectral_filtration(mid)
        lift = _subquotient_lifter(e, ys[-1], zs[-1])
        zs.append(lift(sf.steps[0]))
        ys.append(lift(sf.steps[1]))
        if len(zs) > e.dim + 2:
            raise FiltrationError("internal: refinement failed to terminate")
    steps = tuple(zs + list(reversed(ys)))
    rounds = len(zs) - 1
    labels = tuple(
        [named_class("K0")] * rounds
        + [named_class("K1")]
        + [named_class("K2")] * rounds
    )
    certificates = []
    for idx, lab in enumerate(labels):
        got = membership(tilt, _subquotient(e, steps[idx + 1], steps[idx]), lab)
        if got.verdict == "no":
            raise FiltrationError(
                f"internal: a filtration factor fails its {lab.name} certificate"
            )
        certificates.append(got)
    filt = Filtration(e, steps, labels, tuple(certificates))
    _validate_filtration(filt)
    return filt


# ---------------------------------------------------------------------------
# the three-step filtration (homological dimension 2)
# ---------------------------------------------------------------------------

def filter_three_step(tilt: TiltingData, e: Module) -> Filtration:
    """``0 <= E_1 <= E_2 <= E``: the torsion part for the degree-2 vanishing
    class, refined once inside the torsion part.

    ``E_2`` is the largest submodule with vanishing degree-2 cohomology;
    ``E_1`` is the bottom of the refining filtration of ``E_2`` (inside the
    torsion part the kernel-class layers vanish, which is re-checked).  The
    factors land in the extension closure of the quotient class, the degree-1
    concentration class, and the perpendicular of the degree-2 vanishing
    class respectively.
    """
    _require_n2(tilt, "the three-step filtration")
    f = e.algebra.field
    b2 = named_class("B", 2)
    tsub, _tcert = torsion_part(tilt, e, b2)
    tmod, _incl = submodule_module(e, tsub)
    inner = filter_jms(tilt, tmod)
    rounds = sum(1 for l in inner.labels if l.name == "K0")
    if inner.steps[rounds + 1].dim != tmod.dim:
        raise FiltrationError(
            "internal: kernel-class layers inside the torsion part do not vanish"
        )
    e1 = _push_subspace(inner.steps[rounds], tsub, e)
    steps = (Subspace.zero(f, e.dim), e1, tsub, Subspace.full(f, e.dim))
    labels = (bracket_class(tilt, 1), named_class("X", 1), perp_class(b2))
    certificates = []
    for idx, lab in enumerate(labels):
        got = membership(tilt, _subquotient(e, steps[idx + 1], steps[idx]), lab)
        if got.verdict == "no":
            raise FiltrationError(
                f"internal: a three-step factor fails its {lab.name} certificate"
            )
        certificates.append(got)
    filt = Filtration(e, steps, labels, tuple(certificates))
    _validate_filtration(filt)
    return filt


# ---------------------------------------------------------------------------
# the general filtration (any homological dimension)
# ---------------------------------------------------------------------------

def filter_general(
    tilt: TiltingData,
    e: Module,
    *,
    dim_bound: int = DIM_BOUND_DEFAULT,
    comb_cap: int = COMB_CAP_DEFAULT,
) -> Filtration:
    """``0 = E_0 <= E_1 <= ... <= E_{n+1} = E`` by descending torsion parts.

    ``E_i`` is the torsion part of ``E_{i+1}`` for the bracket class ``T(i)``;
    factor ``i`` lies in ``T(i)`` and, for ``i > 1``, is torsion free for
    ``T(i-1)``.  For homological dimension 2 this agrees step by step with
    :func:`filter_three_step`, which the tests exploit as a dual route.
    """
    n = tilt.n
    f = e.algebra.field
    chain = [Subspace.full(f, e.dim)]
    current = chain[0]
    for i in range(n, 0, -1):
        cmod, _ = submodule_module(e, current)
        local, _cert = torsion_part(
            tilt, cmod, bracket_class(tilt, i),
            dim_bound=dim_bound, comb_cap=comb_cap,
        )
        current = _push_subspace(local, current, e)
        chain.append(current)
    steps = tuple([Subspace.zero(f, e.dim)] + list(reversed(chain)))
    labels = []
    for idx in range(len(steps) - 1):
        i = idx + 1  # the torsion index of this factor
        if i == n + 1 and n >= 1:
            labels.append(perp_class(bracket_class(tilt, n)))
        elif i == 1:
            labels.append(bracket_class(tilt, 1))
        else:
            labels.append(
                intersection_class(
                    bracket_class(tilt, i), perp_class(bracket_class(tilt, i - 1))
                )
            )
    certificates = []
    for idx, lab in enumerate(labels):
        got = membership(
            tilt, _subquotient(e, steps[idx + 1], steps[idx]), lab,
            dim_bound=dim_bound, comb_cap=comb_cap,
        )
        if got.verdict == "no":
            raise FiltrationError(
                f"internal: a torsion factor fails its {lab.name} certificate"
            )
        certificates.append(got)
    filt = Filtration(e, steps, tuple(labels), tuple(certificates))
    _validate_filtration(filt)
    return filt
