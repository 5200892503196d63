"""Quivers, path algebras with admissible relations, and validated
finite-dimensional algebras.

Composition is diagrammatic throughout: the product ``p·q`` of two paths
means "traverse p, then q", so an arrow ``a: i -> j`` satisfies
``e_i · a · e_j = a``.  Right modules over a path algebra are then exactly
covariant quiver representations: the arrow ``a`` acts by a linear map from
the vertex-``i`` component to the vertex-``j`` component (see
``tiltkit.modules``).

A :class:`FinDimAlgebra` is abstract (basis + structure constants) and is
validated hard on construction: associativity, a complete orthogonal set of
primitive idempotents among the basis elements, a basis graded by the Peirce
decomposition, and a caller-supplied radical that is checked to be a
nilpotent two-sided ideal exhibiting the algebra as split basic
(every ``e_i A e_i / (J ∩ e_i A e_i)`` one-dimensional, off-diagonal pieces
inside ``J``).  All algebras tiltkit constructs — path algebras and
endomorphism algebras of multiplicity-free summand decompositions — satisfy
these axioms, and the validation is what keeps every downstream certificate
trustworthy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .linalg import Field, Matrix, Subspace, subspace_intersect

_NAME_FORBIDDEN = set(" \t.*+-:,()[]<>|/\\\"'")


def _check_name(label: str, kind: str) -> None:
    if not label or any(ch in _NAME_FORBIDDEN for ch in label):
        raise ValueError(f"invalid {kind} label {label!r}")


@dataclass(frozen=True)
class Quiver:
    """A finite quiver: ordered vertex labels and labeled arrows."""

    vertices: tuple
    arrows: tuple  # of (label, source, target)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(tuple(a) for a in self.arrows))
        seen = set()
        for v in self.vertices:
            _check_name(v, "vertex")
            if v in seen:
                raise ValueError(f"duplicate vertex label {v!r}")
            seen.add(v)
        labels = set()
        for label, src, tgt in self.arrows:
            _check_name(label, "arrow")
            if label in labels or label in seen:
                raise ValueError(f"duplicate label {label!r}")
            labels.add(label)
            if src not in seen or tgt not in seen:
                raise ValueError(f"arrow {label!r} references unknown vertex")

    def vertex_index(self, v) -> int:
        return self.vertices.index(v)

    def arrow(self, label) -> tuple:
        for a in self.arrows:
            if a[0] == label:
                return a
        raise ValueError(f"unknown arrow {label!r}")

    def reversed(self) -> "Quiver":
        return Quiver(self.vertices, tuple((lab, tgt, src) for lab, src, tgt in self.arrows))


def parse_path_expression(quiver: Quiver, text: str) -> list:
    """Parse ``"2*a.b - c.d"`` into [(coeff, arrow-label tuple), ...].

    Paths are written in traversal order and must be composable; coefficients
    are integers or fractions.
    """
    arrows = {a[0]: a for a in quiver.arrows}
    terms = []
    buf = ""
    signs = []
    chunks = []
    sign = 1
    for ch in text:
        if ch in "+-" and buf.strip():
            chunks.append((sign, buf.strip()))
            sign = 1 if ch == "+" else -1
            buf = ""
        elif ch in "+-" and not buf.strip():
            sign = sign * (1 if ch == "+" else -1)
        else:
            buf += ch
    if buf.strip():
        chunks.append((sign, buf.strip()))
    if not chunks:
        raise ValueError(f"empty path expression {text!r}")
    del signs
    for sgn, chunk in chunks:
        if "*" in chunk:
            coeff_text, path_text = chunk.split("*", 1)
            coeff = Fraction(coeff_text.strip())
        else:
            coeff, path_text = Fraction(1), chunk
        coeff = coeff * sgn
        labels = tuple(p.strip() for p in path_text.split("."))
        if not labels or any(not lab for lab in labels):
            raise ValueError(f"malformed path {chunk!r}")
        for lab in labels:
            if lab not in arrows:
                raise ValueError(f"unknown arrow {lab!r} in {text!r}")
        for first, second in zip(labels, labels[1:]):
            if arrows[first][2] != arrows[second][1]:
                raise ValueError(
                    f"path {'.'.join(labels)!r} is not composable at {first!r}->{second!r}"
                )
        coeff_out = int(coeff) if coeff.denominator == 1 else coeff
        terms.append((coeff_out, labels))
    return terms


class FinDimAlgebra:
    """A finite-dimensional algebra given by structure constants.

    ``structure[i][j]`` is the coordinate vector of ``b_i · b_j``.  The basis
    must contain a complete orthogonal set of idempotents (``idempotent_indices``)
    and be graded by the Peirce decomposition; ``radical_rows`` spans the
    Jacobson radical (verified: nilpotent two-sided ideal, split basic).
    """

    def __init__(
        self,
        field: Field,
        basis_labels: Sequence[str],
        structure: Sequence[Sequence[Sequence]],
        idempotent_indices: Sequence[int],
        radical_rows: Sequence[Sequence],
        quiver_presentation: Optional[tuple] = None,
        generator_indices: Optional[Sequence[int]] = None,
        path_info: Optional[Sequence] = None,
    ) -> None:
        self.field = field
        self.basis_labels = tuple(basis_labels)
        d = len(self.basis_labels)
        self.dim = d
        if len(set(self.basis_labels)) != d:
            raise ValueError("duplicate basis labels")
        self.structure = tuple(
            tuple(tuple(field.coerce(x) for x in structure[i][j]) for j in range(d))
            for i in range(d)
        )
        for i in range(d):
            for j in range(d):
                if len(self.structure[i][j]) != d:
                    raise ValueError("structure constant vector of wrong length")
        self.idempotent_indices = tuple(idempotent_indices)
        if not self.idempotent_indices or len(set(self.idempotent_indices)) != len(self.idempotent_indices):
            raise ValueError("idempotent indices must be a nonempty set")
        self.quiver_presentation = quiver_presentation
        self.generator_indices = (
            tuple(generator_indices) if generator_indices is not None else tuple(range(d))
        )
        self.path_info = tuple(path_info) if path_info is not None else None

        self._mul_cache: dict = {}
        self._validate_associativity()
        self._validate_idempotents()
        self.unit_coords = self._compute_unit()
        self._pieces = self._validate_graded_basis()
        self.radical = Subspace.from_rows(field, d, [list(r) for r in radical_rows])
        self._radical_powers: Optional[list] = None
        self._validate_radical()
        self._right_mult_cache: dict = {}
        self._left_mult_cache: dict = {}
        self.key = self._content_key()

    # -- core arithmetic ------------------------------------------------------
    def basis_coords(self, i: int) -> tuple:
        f = self.field
        return tuple(f.one if j == i else f.zero for j in range(self.dim))

    def mul_coords(self, x: Sequence, y: Sequence) -> tuple:
        f = self.field
        out = [f.zero] * self.dim
        for i, xi in enumerate(x):
            if xi == f.zero:
                continue
            for j, yj in enumerate(y):
                if yj == f.zero:
                    continue
                coeff = f.mul(xi, yj)
                struct = self.structure[i][j]
                for k, c in enumerate(struct):
                    if c != f.zero:
                        out[k] = f.add(out[k], f.mul(coeff, c))
        return tuple(out)

    def right_mult_matrix(self, x: Sequence) -> Matrix:
        """Matrix of b ↦ b·x in the basis (rows are images of basis elements)."""
        key = tuple(x)
        if key not in self._right_mult_cache:
            rows = [self.mul_coords(self.basis_coords(l), key) for l in range(self.dim)]
            self._right_mult_cache[key] = Matrix(self.field, rows)
        return self._right_mult_cache[key]

    def left_mult_matrix(self, x: Sequence) -> Matrix:
        """Matrix of b ↦ x·b in the basis."""
        key = tuple(x)
        if key not in self._left_mult_cache:
            rows = [self.mul_coords(key, self.basis_coords(l)) for l in range(self.dim)]
            self._left_mult_cache[key] = Matrix(self.field, rows)
        return self._left_mult_cache[key]

    # -- validation -----------------------------------------------------------
    def _validate_associativity(self) -> None:
        d = self.dim
        for i in range(d):
            for j in range(d):
                ij = self.structure[i][j]
                for k in range(d):
                    left = self.mul_coords(ij, self.basis_coords(k))
                    right = self.mul_coords(self.basis_coords(i), self.structure[j][k])
                    if left != right:
                        raise ValueError(
                            f"structure constants not associative at basis triple ({i},{j},{k})"
                        )

    def _validate_idempotents(self) -> None:
        f = self.field
        for i in self.idempotent_indices:
            for j in self.idempotent_indices:
                prod = self.mul_coords(self.basis_coords(i), self.basis_coords(j))
                expected = self.basis_coords(i) if i == j else tuple([f.zero] * self.dim)
                if prod != expected:
                    raise ValueError("idempotent set is not orthogonal idempotent")

    def _compute_unit(self) -> tuple:
        f = self.field
        u = [f.zero] * self.dim
        for i in self.idempotent_indices:
            u[i] = f.add(u[i], f.one)
        u = tuple(u)
        for i in range(self.dim):
            b = self.basis_coords(i)
            if self.mul_coords(u, b) != b or self.mul_coords(b, u) != b:
                raise ValueError("idempotents do not sum to a unit")
        return u

    def _validate_graded_basis(self) -> tuple:
        f = self.field
        zero = tuple([f.zero] * self.dim)
        pieces = []
        for l in range(self.dim):
            b = self.basis_coords(l)
            found = None
            total = [f.zero] * self.dim
            for gi, ei in enumerate(self.idempotent_indices):
                left = self.mul_coords(self.basis_coords(ei), b)
                if left == zero:
                    continue
                for gj, ej in enumerate(self.idempotent_indices):
                    part = self.mul_coords(left, self.basis_coords(ej))
                    if part == zero:
                        continue
                    if found is not None:
                        raise ValueError(f"basis element {l} is not Peirce-graded")
                    found = (gi, gj)
                    total = [f.add(a, x) for a, x in zip(total, part)]
            if found is None or tuple(total) != b:
                raise ValueError(f"basis element {l} is not Peirce-graded")
            pieces.append(found)
        return tuple(pieces)

    def basis_piece(self, l: int) -> tuple:
        """(i, j) positions (into the idempotent list) with b_l ∈ e_i A e_j."""
        return self._pieces[l]

    def piece_basis_indices(self, gi: int, gj: int) -> tuple:
        return tuple(l for l in range(self.dim) if self._pieces[l] == (gi, gj))

    def _validate_radical(self) -> None:
        f = self.field
        J = self.radical
        for i in self.idempotent_indices:
            if J.contains_vector(self.basis_coords(i)):
                raise ValueError("radical contains an idempotent")
        # two-sided ideal
        for r in range(J.dim):
            jrow = J.basis.row(r)
            for i in range(self.dim):
                b = self.basis_coords(i)
                if not J.contains_vector(self.mul_coords(b, jrow)):
                    raise ValueError("radical is not a left ideal")
                if not J.contains_vector(self.mul_coords(jrow, b)):
                    raise ValueError("radical is not a right ideal")
        # nilpotency (and the power filtration, cached)
        powers = [J]
        while not powers[-1].is_zero():
            prev = powers[-1]
            rows = []
            for r in range(prev.dim):
                for s in range(J.dim):
                    rows.append(self.mul_coords(prev.basis.row(r), J.basis.row(s)))
            nxt = Subspace.from_rows(f, self.dim, rows)
            if nxt.dim >= prev.dim and prev.dim > 0:
                raise ValueError("provided radical is not nilpotent")
            powers.append(nxt)
            if len(powers) > self.dim + 2:
                raise ValueError("provided radical is not nilpotent")
        self._radical_powers = powers
        # split basic: diagonal pieces have one-dimensional semisimple quotient,
        # off-diagonal pieces are inside the radical
        for gi in range(len(self.idempotent_indices)):
            for gj in range(len(self.idempotent_indices)):
                idx = self.piece_basis_indices(gi, gj)
                piece = Subspace.from_rows(f, self.dim, [self.basis_coords(l) for l in idx])
                inside = subspace_intersect(piece, J)
                if gi == gj:
                    if piece.dim != inside.dim + 1:
                        raise ValueError(
                            "algebra is not split basic: diagonal Peirce piece "
                            f"{gi} has semisimple part of dimension {piece.dim - inside.dim}"
                        )
                else:
                    if piece.dim != inside.dim:
                        raise ValueError(
                            "algebra is not split basic: off-diagonal Peirce piece "
                            f"({gi},{gj}) not inside the radical"
                        )

    # -- radical filtration ----------------------------------------------------
    @property
    def radical_dim(self) -> int:
        return self.radical.dim

    def radical_power(self, k: int) -> Subspace:
        """J^k as a subspace (k >= 1)."""
        assert self._radical_powers is not None
        if k < 1:
            raise ValueError("radical power needs k >= 1")
        if k - 1 < len(self._radical_powers):
            return self._radical_powers[k - 1]
        return Subspace.zero(self.field, self.dim)

    def radical_power_dim(self, k: int) -> int:
        return self.radical_power(k).dim

    def simple_scalar(self, idempotent_position: int, basis_index: int):
        """The scalar by which basis element ``b`` acts on the simple at ``e_i``:
        the residue of ``e_i b e_i`` in ``e_i A e_i / (J ∩ e_i A e_i) ≅ k``."""
        f = self.field
        ei = self.idempotent_indices[idempotent_position]
        v = self.mul_coords(
            self.mul_coords(self.basis_coords(ei), self.basis_coords(basis_index)),
            self.basis_coords(ei),
        )
        # v = λ·e_i + (radical part): solve in span{e_i} + J
        mat = Matrix(self.field, [self.basis_coords(ei)] + [list(r) for r in self.radical.basis.rows])
        sol = mat.solve_left(Matrix.from_row(f, v))
        if sol is None:
            raise ValueError("Peirce piece not spanned by idempotent and radical")
        return sol.entry(0, 0)

    # -- derived constructions ---------------------------------------------------
    def opposite(self) -> "FinDimAlgebra":
        """The opposite algebra: same basis, transposed structure constants."""
        d = self.dim
        structure = [[self.structure[j][i] for j in range(d)] for i in range(d)]
        return FinDimAlgebra(
            self.field,
            self.basis_labels,
            structure,
            self.idempotent_indices,
            [list(r) for r in self.radical.basis.rows],
            quiver_presentation=None,
            generator_indices=self.generator_indices,
            path_info=None,
        )

    def _content_key(self) -> tuple:
        return (
            self.field.key,
            self.basis_labels,
            self.structure,
            self.idempotent_indices,
            self.radical.basis.rows,
        )

    def __repr__(self) -> str:
        return f"FinDimAlgebra(dim {self.dim} over {self.field})"


def _enumerate_paths(quiver: Quiver, length: int, by_length: dict) -> list:
    """All paths of the given length as (source, target, arrows) triples."""
    if length == 0:
        return [(v, v, ()) for v in quiver.vertices]
    out = []
    for src, tgt, arrows in by_length[length - 1]:
        for lab, a_src, a_tgt in quiver.arrows:
            if a_src == tgt:
                out.append((src, a_tgt, arrows + (lab,)))
    return out


def _path_label(path: tuple) -> str:
    src, tgt, arrows = path
    return f"e_{src}" if not arrows else ".".join(arrows)


def path_algebra(quiver: Quiver, relations: Sequence, field: Field) -> FinDimAlgebra:
    """The path algebra kQ modulo length-homogeneous admissible relations.

    Each relation is a string (or pre-parsed term list) combining parallel
    paths of one common length >= 2.  The quotient must be finite dimensional
    (guaranteed for acyclic quivers; otherwise the relations must kill all
    long paths), else a ValueError explains the failure.
    """
    parsed = []
    for rel in relations:
        terms = parse_path_expression(quiver, rel) if isinstance(rel, str) else list(rel)
        if not terms:
            raise ValueError("empty relation")
        arrows = {a[0]: a for a in quiver.arrows}
        lengths = {len(t[1]) for t in terms}
        if len(lengths) != 1:
            raise ValueError(f"relation {rel!r} mixes path lengths {sorted(lengths)}")
        (length,) = lengths
        if length < 2:
            raise ValueError(f"relation {rel!r} has length {length} < 2: not admissible")
        endpoints = {(arrows[t[1][0]][1], arrows[t[1][-1]][2]) for t in terms}
        if len(endpoints) != 1:
            raise ValueError(f"relation {rel!r} combines non-parallel paths")
        parsed.append((length, endpoints.pop(), terms))

    max_rel_len = max((lng for lng, _, _ in parsed), default=0)
    length_cap = 4 * (len(quiver.vertices) + len(quiver.arrows) + max_rel_len) + 8

    by_length: dict = {}
    basis_paths: list = []  # (source, target, arrows)
    reduction: dict = {}  # (source, arrows-tuple) -> list[(coeff, basis index)]
    length = 0
    while True:
        paths = _enumerate_paths(quiver, length, by_length)
        by_length[length] = paths
        if not paths:
            break
        if length == 0:
            for p in paths:
                reduction[(p[0], p[2])] = [(field.one, len(basis_paths))]
                basis_paths.append(p)
            length += 1
            continue
        # ideal component at this length: p · relation · q
        index = {p[2]: t for t, p in enumerate(paths)}
        gens = []
        for rel_len, (rel_src, rel_tgt), terms in parsed:
            if rel_len > length:
                continue
            for a in range(length - rel_len + 1):
                b = length - rel_len - a
                prefixes = [p for p in by_length[a] if p[1] == rel_src]
                suffixes = [q for q in by_length[b] if q[0] == rel_tgt]
                for pre in prefixes:
                    for suf in suffixes:
                        vec = [field.zero] * len(paths)
                        for coeff, rel_arrows in terms:
                            full = pre[2] + rel_arrows + suf[2]
                            vec[index[full]] = field.add(vec[index[full]], field.coerce(coeff))
                        gens.append(vec)
        ideal = Subspace.from_rows(field, len(paths), gens)
        kept: list = []
        span = ideal
        for t, p in enumerate(paths):
            unit = [field.zero] * len(paths)
            unit[t] = field.one
            if not span.contains_vector(unit):
                kept.append(t)
                span = Subspace.from_rows(
                    field, len(paths), [list(span.basis.row(i)) for i in range(span.dim)] + [unit]
                )
        if not kept:
            # homogeneous relations: once a whole length dies, all longer lengths die
            break
        base_index = len(basis_paths)
        kept_rows = []
        for t in kept:
            unit = [field.zero] * len(paths)
            unit[t] = field.one
            kept_rows.append(unit)
        solver = Matrix(field, kept_rows + [list(ideal.basis.row(i)) for i in range(ideal.dim)])
        for t, p in enumerate(paths):
            unit = [field.zero] * len(paths)
            unit[t] = field.one
            sol = solver.solve_left(Matrix.from_row(field, unit))
            if sol is None:
                raise ValueError("internal error: path outside basis+ideal span")
            reduction[(p[0], p[2])] = [
                (sol.entry(0, i), base_index + i)
                for i in range(len(kept))
                if sol.entry(0, i) != field.zero
            ]
        for t in kept:
            basis_paths.append(paths[t])
        length += 1
        if length > length_cap:
            raise ValueError(
                "path algebra is infinite dimensional (or relations not admissible): "
                f"paths survive beyond length {length_cap}"
            )

    known_lengths = {len(p[2]) for p in basis_paths}
    max_len = max(known_lengths)
    d = len(basis_paths)
    zero_vec = tuple([field.zero] * d)

    def product_coords(p: tuple, q: tuple) -> tuple:
        if p[1] != q[0]:
            return zero_vec
        arrows = p[2] + q[2]
        key = (p[0], arrows)
        if len(arrows) > max_len or key not in reduction:
            return zero_vec
        out = [field.zero] * d
        for coeff, idx in reduction[key]:
            out[idx] = field.add(out[idx], coeff)
        return tuple(out)

    structure = [[product_coords(p, q) for q in basis_paths] for p in basis_paths]
    labels = [_path_label(p) for p in basis_paths]
    idempotent_indices = tuple(range(len(quiver.vertices)))
    radical_rows = []
    for i, p in enumerate(basis_paths):
        if p[2]:
            row = [field.zero] * d
            row[i] = field.one
            radical_rows.append(row)
    generator_indices = tuple(i for i, p in enumerate(basis_paths) if len(p[2]) <= 1)
    return FinDimAlgebra(
        field,
        labels,
        structure,
        idempotent_indices,
        radical_rows,
        quiver_presentation=(quiver, tuple(relations)),
        generator_indices=generator_indices,
        path_info=basis_paths,
    )
