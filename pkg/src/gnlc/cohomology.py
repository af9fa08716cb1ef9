"""Chevalley-Eilenberg cohomology of the negative part with module coefficients.

Cochain spaces C^k(g-, V) are filtered by homogeneity: a basis cochain
w^{-t_1} ^ ... ^ w^{-t_k} (x) v has homogeneity t_1 + ... + t_k + deg(v).
The differential preserves homogeneity, so every computation happens in one
(degree, homogeneity) cell at a time.

Dimensions are computed from ranks of the differential alone; harmonic
representatives are an optional second pass that requires an invariant
inner product (and agreement of the two dimension counts is asserted).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .linalg import (
    Matrix,
    Rational,
    SubspaceBasis,
    ZERO,
    ONE,
    image_basis,
    kernel_basis,
    quotient_coordinates,
    rank,
    rat,
    row_space_basis,
    rref,
    solve,
    subspace_contains,
    subspace_intersection,
)
from .lie_core import (
    GradedLieAlgebra,
    InnerProduct,
    ModuleMap,
    Representation,
    StructureError,
    quotient_module,
)
from .catalog import SymbolPackage


class CohomologyError(ValueError):
    pass


class ProductError(CohomologyError):
    """An inner product fails the required invariance."""


# ---------------------------------------------------------------------------
# cochain spaces
# ---------------------------------------------------------------------------

class CochainSpace:
    """C^k(g-, V) in a fixed homogeneity, with an ordered monomial basis."""

    def __init__(self, k: int, module: Representation, h: int):
        if k < 0:
            raise CohomologyError("cochain degree must be nonnegative")
        self.k = k
        self.module = module
        self.h = h
        alg = module.algebra
        self.args = alg.negative_indices
        self._depth = {a: -alg.degree(a) for a in self.args}
        basis: list[tuple[tuple[int, ...], int]] = []
        for idx_tuple in combinations(self.args, k):
            d = sum(self._depth[a] for a in idx_tuple)
            for v in range(module.dim):
                if d + module.module_degree(v) == h:
                    basis.append((idx_tuple, v))
        self.basis = basis
        self.dim = len(basis)
        self.pos = {bv: i for i, bv in enumerate(basis)}
        self._by_args: dict[tuple[int, ...], list[tuple[int, int]]] = {}
        for i, (idx_tuple, v) in enumerate(basis):
            self._by_args.setdefault(idx_tuple, []).append((v, i))

    def arg_tuples(self) -> list[tuple[int, ...]]:
        return list(self._by_args.keys())

    def items_with_args(self, idx_tuple: tuple[int, ...]) -> list[tuple[int, int]]:
        return self._by_args.get(idx_tuple, [])

    def zero(self) -> "Cochain":
        return Cochain(self, [ZERO] * self.dim)

    def __repr__(self):
        return f"CochainSpace(k={self.k}, h={self.h}, dim={self.dim}, module={self.module.name})"


@dataclass
class Cochain:
    space: CochainSpace
    coords: list

    def __post_init__(self):
        if len(self.coords) != self.space.dim:
            raise CohomologyError("coordinate length mismatch")
        self.coords = [rat(c) for c in self.coords]

    @classmethod
    def from_sparse(cls, space: CochainSpace, entries: dict) -> "Cochain":
        coords = [ZERO] * space.dim
        for i, c in entries.items():
            coords[i] = rat(c)
        return cls(space, coords)

    def sparse(self) -> dict:
        return {i: c for i, c in enumerate(self.coords) if c}

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def add(self, other: "Cochain") -> "Cochain":
        if other.space is not self.space:
            raise CohomologyError("cochain space mismatch")
        return Cochain(self.space, [a + b for a, b in zip(self.coords, other.coords)])

    def scale(self, c) -> "Cochain":
        c = rat(c)
        return Cochain(self.space, [c * x for x in self.coords])


def add_monomial(entries: dict, space: CochainSpace, idx_tuple, v: int, coef) -> None:
    """Accumulate coef * (w_args (x) e_v) into `entries`, sorting the arguments.

    A repeated argument contributes nothing; out-of-order arguments pick up
    the sign of the sorting permutation.
    """
    coef = rat(coef)
    if not coef:
        return
    args = list(idx_tuple)
    if len(set(args)) != len(args):
        return
    sign = 1
    for i in range(len(args)):
        for j in range(len(args) - 1 - i):
            if args[j] > args[j + 1]:
                args[j], args[j + 1] = args[j + 1], args[j]
                sign = -sign
    key = (tuple(args), v)
    p = space.pos.get(key)
    if p is None:
        raise CohomologyError(
            f"monomial {key} has homogeneity different from {space.h}"
        )
    nv = entries.get(p, ZERO) + sign * coef
    if nv:
        entries[p] = nv
    else:
        entries.pop(p, None)


# ---------------------------------------------------------------------------
# the differential
# ---------------------------------------------------------------------------

def _action_columns(module: Representation) -> list[dict]:
    """For each algebra index, a dict: module index v -> sparse column of rho."""
    cols = []
    for a in range(module.algebra.dim):
        mat = module.action[a]
        col: dict = {}
        for w, row in enumerate(mat._rows):
            for v, c in row.items():
                col.setdefault(v, {})[w] = c
        cols.append(col)
    return cols


def _bracket_preimages(alg: GradedLieAlgebra) -> dict:
    """c -> list of ((a, b), coef) with a < b negative and [b_a, b_b] having c-coefficient coef."""
    out: dict = {}
    neg = alg.negative_indices
    for ai in range(len(neg)):
        for bi in range(ai + 1, len(neg)):
            a, b = neg[ai], neg[bi]
            for c, coef in alg.bracket_basis(a, b).items():
                out.setdefault(c, []).append(((a, b), coef))
    return out


def apply_differential(space: CochainSpace, vec: dict, target: CochainSpace,
                       cols: Optional[list] = None, preim: Optional[dict] = None) -> dict:
    """Sparse application of the Chevalley-Eilenberg differential.

    (d phi)(x_0,...,x_k) = sum_i (-1)^i rho(x_i) phi(..x^_i..)
                         + sum_{i<j} (-1)^{i+j} phi([x_i,x_j], ..x^_i..x^_j..)
    """
    module = space.module
    if cols is None:
        cols = _action_columns(module)
    if preim is None:
        preim = _bracket_preimages(module.algebra)
    out: dict = {}
    for p, coef in vec.items():
        if not coef:
            continue
        idx_tuple, v = space.basis[p]
        # action terms: insert a new argument a at its sorted position i
        for a in space.args:
            if a in idx_tuple:
                continue
            i = sum(1 for x in idx_tuple if x < a)
            sign = -ONE if i % 2 else ONE
            new_args = tuple(sorted(idx_tuple + (a,)))
            for w, c in cols[a].get(v, {}).items():
                add_monomial(out, target, new_args, w, sign * c * coef)
        # bracket terms: replace one argument c by a preimage pair (a, b)
        for t, c_arg in enumerate(idx_tuple):
            rest = idx_tuple[:t] + idx_tuple[t + 1:]
            # phi(x_c, rest) = eps * phi(sorted); eps accounted by add_monomial
            # on the source side: here phi is a basis monomial, so we need the
            # sign of moving x_c to the front of idx_tuple, which is (-1)^t
            front_sign = -ONE if t % 2 else ONE
            for (a, b), coef_c in preim.get(c_arg, []):
                if a in rest or b in rest:
                    continue
                # position signs of a and b inside the new tuple J
                new_args = tuple(sorted(rest + (a, b)))
                i = new_args.index(a)
                j = new_args.index(b)
                pair_sign = -ONE if (i + j) % 2 else ONE
                # phi([a,b], rest): rest keeps its order; the sign of sorting
                # (rest) back is handled because rest is already ascending
                add_monomial(out, target, new_args,
                             v, pair_sign * front_sign * coef_c * coef)
    return out


def differential(space: CochainSpace, target: Optional[CochainSpace] = None) -> Matrix:
    """Matrix of the differential C^k_h -> C^{k+1}_h on the monomial bases."""
    if target is None:
        target = CochainSpace(space.k + 1, space.module, space.h)
    cols = _action_columns(space.module)
    preim = _bracket_preimages(space.module.algebra)
    rows = [dict() for _ in range(target.dim)]
    for src in range(space.dim):
        img = apply_differential(space, {src: ONE}, target, cols, preim)
        for tgt, c in img.items():
            rows[tgt][src] = c
    return Matrix(target.dim, space.dim, rows)


# ---------------------------------------------------------------------------
# inner products on cochains and the codifferential
# ---------------------------------------------------------------------------

def _negative_action_matrices(alg: GradedLieAlgebra, indices) -> list[Matrix]:
    """ad action of the given algebra elements restricted to the negative part."""
    neg = alg.negative_indices
    pos_of = {a: i for i, a in enumerate(neg)}
    out = []
    for x in indices:
        rows = [dict() for _ in neg]
        for col, a in enumerate(neg):
            for c, coef in alg.bracket_basis(x, a).items():
                r = pos_of.get(c)
                if r is None:
                    raise CohomologyError("degree-zero element does not preserve g-")
                rows[r][col] = coef
        out.append(Matrix(len(neg), len(neg), rows))
    return out


def check_invariant_products(module: Representation, arg_gram: InnerProduct,
                             module_gram: InnerProduct) -> None:
    """Raise ProductError unless both products are invariant under g0."""
    alg = module.algebra
    g0 = alg.indices_of_degree(0)
    if not arg_gram.is_invariant_under(_negative_action_matrices(alg, g0)):
        raise ProductError("argument product is not g0-invariant")
    if not module_gram.is_invariant_under([module.action[x] for x in g0]):
        raise ProductError("module product is not g0-invariant")


def _minor_det(gram: Matrix, rows: tuple, cols: tuple) -> Rational:
    k = len(rows)
    if k == 0:
        return ONE
    if k == 1:
        return gram.entry(rows[0], cols[0])
    tot = ZERO
    sign = ONE
    for i, r in enumerate(rows):
        v = gram.entry(r, cols[0])
        if v:
            tot += sign * v * _minor_det(gram, rows[:i] + rows[i + 1:], cols[1:])
        sign = -sign
    return tot


def cochain_gram(space: CochainSpace, arg_gram: InnerProduct,
                 module_gram: InnerProduct) -> Matrix:
    """Induced product: <w_I (x) v, w_J (x) w> = det(G_args[I,J]) G_V[v,w]."""
    alg = space.module.algebra
    neg = alg.negative_indices
    arg_pos = {a: i for i, a in enumerate(neg)}
    rows = [dict() for _ in range(space.dim)]
    tuples = space.arg_tuples()
    for ti, I in enumerate(tuples):
        ri = tuple(arg_pos[a] for a in I)
        for J in tuples[ti:]:
            rj = tuple(arg_pos[a] for a in J)
            d = _minor_det(arg_gram.gram, ri, rj)
            if not d:
                continue
            for v, p in space.items_with_args(I):
                for w, q in space.items_with_args(J):
                    g = module_gram.gram.entry(v, w)
                    if g:
                        rows[p][q] = d * g
                        rows[q][p] = d * g
    return Matrix(space.dim, space.dim, rows)


def codifferential(space: CochainSpace, arg_gram: InnerProduct,
                   module_gram: InnerProduct) -> Matrix:
    """Adjoint of the differential: a matrix C^k_h -> C^{k-1}_h."""
    if space.k == 0:
        return Matrix.zeros(0, space.dim)
    check_invariant_products(space.module, arg_gram, module_gram)
    prev = CochainSpace(space.k - 1, space.module, space.h)
    d_prev = differential(prev, space)
    g_prev = cochain_gram(prev, arg_gram, module_gram)
    g_here = cochain_gram(space, arg_gram, module_gram)
    from .linalg import inverse
    return inverse(g_prev) * d_prev.transpose() * g_here


# ---------------------------------------------------------------------------
# cohomology cells
# ---------------------------------------------------------------------------

@dataclass
class CohomologyCell:
    degree: int
    homogeneity: int
    space: CochainSpace
    dim_kernel: int
    dim_image_in: int
    dim_H: int
    kernel: SubspaceBasis
    image: SubspaceBasis
    representatives: SubspaceBasis
    harmonic: Optional[SubspaceBasis] = None

    def class_projector(self) -> Matrix:
        """Canonical coordinates on C^k_h / im d; classes compare equal there."""
        return quotient_coordinates(self.image)


def _independent_rows(m: Matrix) -> list[int]:
    pivots, _ = rref(m.transpose())
    return pivots


def cohomology_cell(module: Representation, k: int, h: int,
                    with_harmonic: bool = False,
                    arg_gram: Optional[InnerProduct] = None,
                    module_gram: Optional[InnerProduct] = None) -> CohomologyCell:
    space = CochainSpace(k, module, h)
    d = differential(space)
    ker = kernel_basis(d)
    if k == 0:
        img = SubspaceBasis(space.dim, [])
    else:
        prev = CochainSpace(k - 1, module, h)
        d_prev = differential(prev, space)
        img = image_basis(d_prev)
    dim_h = ker.dim - img.dim
    proj = quotient_coordinates(img)
    if ker.dim:
        projected = Matrix.from_rows([proj.apply(v) for v in ker.vectors])
        reps = SubspaceBasis(space.dim, [ker.vectors[i] for i in _independent_rows(projected)])
    else:
        reps = SubspaceBasis(space.dim, [])
    if reps.dim != dim_h:
        raise CohomologyError("representative extraction disagrees with rank count")
    harmonic = None
    if with_harmonic:
        if arg_gram is None or module_gram is None:
            raise CohomologyError("harmonic pass needs both inner products")
        check_invariant_products(module, arg_gram, module_gram)
        if k == 0:
            harmonic = ker
        else:
            g_here = cochain_gram(space, arg_gram, module_gram)
            d_prev = differential(CochainSpace(k - 1, module, h), space)
            stacked = d.stack_below(d_prev.transpose() * g_here)
            harmonic = kernel_basis(stacked)
        if harmonic.dim != dim_h:
            raise CohomologyError(
                f"harmonic dimension {harmonic.dim} differs from rank count {dim_h}"
            )
    return CohomologyCell(
        degree=k, homogeneity=h, space=space,
        dim_kernel=ker.dim, dim_image_in=img.dim, dim_H=dim_h,
        kernel=ker, image=img, representatives=reps, harmonic=harmonic,
    )


def homogeneity_scan(module: Representation, k: int) -> range:
    """All h with possibly nonzero C^k(g-, V)_h."""
    alg = module.algebra
    depth = max((-alg.degree(a) for a in alg.negative_indices), default=0)
    degs = [module.module_degree(i) for i in range(module.dim)]
    if not degs:
        return range(0)
    return range(min(degs) + k, max(degs) + k * depth + 1)


def g0_cochain_action(space: CochainSpace, x: int) -> Matrix:
    """(X.phi)(a_1..a_k) = rho(X)phi(a..) - sum_i phi(a_1,..,[X,a_i],..,a_k)."""
    module = space.module
    alg = module.algebra
    if alg.degree(x) != 0:
        raise CohomologyError("cochain action is defined for degree-0 elements")
    cols = _action_columns(module)
    rows = [dict() for _ in range(space.dim)]

    def put(tgt_key, src, coef):
        p = space.pos.get(tgt_key)
        if p is None:
            raise CohomologyError("degree-0 action broke homogeneity")
        nv = rows[p].get(src, ZERO) + coef
        if nv:
            rows[p][src] = nv
        else:
            rows[p].pop(src, None)

    # arg slots transform by the dual of ad(x): the monomial with argument a
    # picks up contributions from monomials with argument b where [x, b] has
    # an a-component
    into: dict[int, list] = {}
    for b in space.args:
        for a, coef in alg.bracket_basis(x, b).items():
            into.setdefault(a, []).append((b, coef))
    for src, (idx_tuple, v) in enumerate(space.basis):
        for w, c in cols[x].get(v, {}).items():
            put((idx_tuple, w), src, c)
        for t, a in enumerate(idx_tuple):
            rest = idx_tuple[:t] + idx_tuple[t + 1:]
            for b, coef in into.get(a, []):
                if b in rest:
                    continue
                new_args = tuple(sorted(rest[:t] + (b,) + rest[t:]))
                # sign of sorting b into the remaining ascending arguments
                eps = -ONE if sum(1 for y in rest if y < b) % 2 != t % 2 else ONE
                put((new_args, v), src, -eps * coef)
    return Matrix(space.dim, space.dim, rows)


# ---------------------------------------------------------------------------
# subquotients and the connecting homomorphism
# ---------------------------------------------------------------------------

@dataclass
class SubquotientModule:
    """A stable subspace W of a module V with the quotient V/W and a section."""

    big: Representation
    sub: Representation
    incl: Matrix          # W coordinates -> V coordinates
    quot: Representation
    proj: Matrix          # V -> V/W
    section: Matrix       # V/W -> V, proj * section = id


def subquotient(big: Representation, w: SubspaceBasis, name: str = "W") -> SubquotientModule:
    quot, qmap = quotient_module(big, w)
    proj = qmap.matrix
    # canonical right inverse of proj, column by column
    cols = []
    for j in range(quot.dim):
        e = [ONE if i == j else ZERO for i in range(quot.dim)]
        s = solve(proj, e)
        if s is None:
            raise CohomologyError("projection is not surjective")
        cols.append(s)
    section = Matrix.from_columns(cols)
    incl = Matrix.from_columns(w.vectors)
    sub_action = []
    sub_basis = []
    for r, vec in enumerate(w.vectors):
        degs = {big.module_degree(i) for i, c in enumerate(vec) if c}
        if len(degs) != 1:
            raise CohomologyError("subspace basis vector mixes degrees")
        sub_basis.append((f"{name}{r}", degs.pop()))
    from .linalg import coordinates_in
    for x in range(big.algebra.dim):
        acted = []
        for vec in w.vectors:
            img = big.act(x, vec)
            coords = coordinates_in(w, img)
            if coords is None:
                raise CohomologyError("subspace is not stable")
            acted.append(coords)
        sub_action.append(Matrix.from_columns(acted))
    sub = Representation(big.algebra, sub_basis, sub_action, name=f"{big.name} sub")
    return SubquotientModule(big=big, sub=sub, incl=incl, quot=quot,
                             proj=proj, section=section)


def map_cochain(space_src: CochainSpace, space_tgt: CochainSpace,
                module_map: Matrix, vec: dict) -> dict:
    """Push a cochain through a linear map of coefficient modules."""
    out: dict = {}
    for p, coef in vec.items():
        idx_tuple, v = space_src.basis[p]
        for w in range(module_map.rows):
            c = module_map.entry(w, v)
            if c:
                add_monomial(out, space_tgt, idx_tuple, w, c * coef)
    return out


def cochain_map_matrix(space_src: CochainSpace, space_tgt: CochainSpace,
                       module_map: Matrix) -> Matrix:
    rows = [dict() for _ in range(space_tgt.dim)]
    for src in range(space_src.dim):
        img = map_cochain(space_src, space_tgt, module_map, {src: ONE})
        for tgt, c in img.items():
            rows[tgt][src] = c
    return Matrix(space_tgt.dim, space_src.dim, rows)


def connecting_hom(sq: SubquotientModule, cochain: Cochain,
                   lift_perturbation: Optional[Cochain] = None) -> Cochain:
    """The long-exact-sequence connecting map on a representative cochain.

    Lifts a closed C^k(g-, V/W) cochain to C^k(g-, V), applies the
    differential and reads the result off in W coordinates.  Raises when the
    input is not closed modulo W.  An optional W-valued perturbation is added
    to the lift; the class of the output must not depend on it.
    """
    k, h = cochain.space.k, cochain.space.h
    if cochain.space.module is not sq.quot:
        raise CohomologyError("cochain must live in the quotient module")
    space_v = CochainSpace(k, sq.big, h)
    lifted = map_cochain(cochain.space, space_v, sq.section, cochain.sparse())
    if lift_perturbation is not None:
        if lift_perturbation.space.module is not sq.sub:
            raise CohomologyError("perturbation must be W-valued")
        pert = map_cochain(lift_perturbation.space, space_v, sq.incl,
                           lift_perturbation.sparse())
        for p, c in pert.items():
            nv = lifted.get(p, ZERO) + c
            if nv:
                lifted[p] = nv
            else:
                lifted.pop(p, None)
    target_v = CochainSpace(k + 1, sq.big, h)
    dv = apply_differential(space_v, lifted, target_v)
    # closedness mod W: the projection of d(lift) must vanish
    target_q = CochainSpace(k + 1, sq.quot, h)
    if map_cochain(target_v, target_q, sq.proj, dv):
        raise CohomologyError("cochain is not closed modulo the subspace")
    target_w = CochainSpace(k + 1, sq.sub, h)
    out: dict = {}
    by_args: dict = {}
    for p, c in dv.items():
        idx_tuple, v = target_v.basis[p]
        by_args.setdefault(idx_tuple, {})[v] = c
    for idx_tuple, comp in by_args.items():
        vec = [comp.get(v, ZERO) for v in range(sq.big.dim)]
        wc = solve(sq.incl, vec)
        if wc is None:
            raise CohomologyError("differential of the lift left the subspace")
        for wi, c in enumerate(wc):
            if c:
                add_monomial(out, target_w, idx_tuple, wi, c)
    return Cochain.from_sparse(target_w, out)


# ---------------------------------------------------------------------------
# the pair g inside the envelope
# ---------------------------------------------------------------------------

def envelope_pair(pkg: SymbolPackage) -> SubquotientModule:
    """The envelope over g with the embedded g as the stable subspace."""
    big = pkg.envelope_module()
    vectors = []
    for gi in pkg.embedding:
        v = [ZERO] * big.dim
        v[gi] = ONE
        vectors.append(v)
    return subquotient(big, SubspaceBasis(big.dim, vectors), name="g")


def class_coordinates(cell: CohomologyCell, vec) -> list:
    """Coordinates of a cochain's class modulo im d (zero iff exact)."""
    return cell.class_projector().apply(list(vec))


def class_space(cell: CohomologyCell) -> SubspaceBasis:
    """The cohomology space in class coordinates."""
    proj = cell.class_projector()
    if not cell.representatives.dim:
        return SubspaceBasis(proj.rows, [])
    return row_space_basis(Matrix.from_rows([proj.apply(v) for v in cell.representatives.vectors]))


@dataclass
class SplitCell:
    homogeneity: int
    dim_h1_quot: int          # dim H^1_h(g-, V/W)
    dim_h1_big: int           # dim H^1_h(g-, V)
    dim_q_part: int           # dim H^1_h(quot) / im pi_1
    dim_h2_big: int           # dim H^2_h(g-, V)
    dim_ker_pi2: int          # dim ker pi_2 inside H^2_h(g-, V)
    dim_h2_sub: int           # dim H^2_h(g-, W)
    ok: bool                  # dim_h2_sub == dim_q_part + dim_ker_pi2


@dataclass
class SplitReport:
    cells: list
    # totals over positive homogeneity
    total_q_part: int = 0
    total_ker_pi2: int = 0
    total_h2_sub: int = 0

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.cells)


def _induced_class_map(src_cell: CohomologyCell, tgt_cell: CohomologyCell,
                       cochain_map: Matrix) -> Matrix:
    """Matrix of the induced map on cohomology.

    Columns: images of src representatives, written in the class coordinates
    of the target cell.  Column order matches src_cell.representatives.
    """
    proj = tgt_cell.class_projector()
    cols = []
    for v in src_cell.representatives.vectors:
        cols.append(proj.apply(cochain_map.apply(list(v))))
    if not cols:
        return Matrix.zeros(proj.rows, 0)
    return Matrix.from_columns(cols)


def theorem3_split(pkg: SymbolPackage, homogeneities=(1, 2, 3, 4)) -> SplitReport:
    """The two-part decomposition of H^2_{>0}(g-, g).

    Per homogeneity h, computes Q_h = H^1_h(g-, V/W)/im(pi_1) and
    ker(pi_2) inside H^2_h(g-, V), and asserts
    dim H^2_h(g-, W) = dim Q_h + dim ker(pi_2).
    """
    sq = envelope_pair(pkg)
    cells = []
    tq = tk = th = 0
    for h in homogeneities:
        c_q1 = cohomology_cell(sq.quot, 1, h)
        c_b1 = cohomology_cell(sq.big, 1, h)
        c_b2 = cohomology_cell(sq.big, 2, h)
        c_q2 = cohomology_cell(sq.quot, 2, h)
        c_s2 = cohomology_cell(sq.sub, 2, h)

        pi1 = cochain_map_matrix(c_b1.space, c_q1.space, sq.proj)
        m1 = _induced_class_map(c_b1, c_q1, pi1)
        dim_q = c_q1.dim_H - rank(m1)

        pi2 = cochain_map_matrix(c_b2.space, c_q2.space, sq.proj)
        m2 = _induced_class_map(c_b2, c_q2, pi2)
        dim_ker_pi2 = c_b2.dim_H - rank(m2)

        ok = c_s2.dim_H == dim_q + dim_ker_pi2
        cells.append(SplitCell(
            homogeneity=h,
            dim_h1_quot=c_q1.dim_H, dim_h1_big=c_b1.dim_H, dim_q_part=dim_q,
            dim_h2_big=c_b2.dim_H, dim_ker_pi2=dim_ker_pi2,
            dim_h2_sub=c_s2.dim_H, ok=ok,
        ))
        tq += dim_q
        tk += dim_ker_pi2
        th += c_s2.dim_H
    return SplitReport(cells=cells, total_q_part=tq, total_ker_pi2=tk, total_h2_sub=th)


# ---------------------------------------------------------------------------
# long exact sequence of the pair, per homogeneity
# ---------------------------------------------------------------------------

@dataclass
class ExactnessNode:
    homogeneity: int
    node: str
    dim_image_in: int
    dim_kernel_out: int
    ok: bool


def _delta_class_map(sq: SubquotientModule, src_cell: CohomologyCell,
                     tgt_cell: CohomologyCell) -> Matrix:
    """Connecting map on classes: H^k(quot) representatives -> H^{k+1}(sub) class coords."""
    proj = tgt_cell.class_projector()
    cols = []
    for v in src_cell.representatives.vectors:
        img = connecting_hom(sq, Cochain(src_cell.space, list(v)))
        cols.append(proj.apply(img.coords))
    if not cols:
        return Matrix.zeros(proj.rows, 0)
    return Matrix.from_columns(cols)


def long_exact_sequence_nodes(pkg: SymbolPackage, h: int) -> list[ExactnessNode]:
    """Exactness checks at H^1(V), H^1(V/W), H^2(W), H^2(V), H^2(V/W)."""
    sq = envelope_pair(pkg)
    cW1 = cohomology_cell(sq.sub, 1, h)
    cV1 = cohomology_cell(sq.big, 1, h)
    cQ1 = cohomology_cell(sq.quot, 1, h)
    cW2 = cohomology_cell(sq.sub, 2, h)
    cV2 = cohomology_cell(sq.big, 2, h)
    cQ2 = cohomology_cell(sq.quot, 2, h)
    cW3 = cohomology_cell(sq.sub, 3, h)

    i1 = _induced_class_map(cW1, cV1, cochain_map_matrix(cW1.space, cV1.space, sq.incl))
    p1 = _induced_class_map(cV1, cQ1, cochain_map_matrix(cV1.space, cQ1.space, sq.proj))
    d1 = _delta_class_map(sq, cQ1, cW2)
    i2 = _induced_class_map(cW2, cV2, cochain_map_matrix(cW2.space, cV2.space, sq.incl))
    p2 = _induced_class_map(cV2, cQ2, cochain_map_matrix(cV2.space, cQ2.space, sq.proj))
    d2 = _delta_class_map(sq, cQ2, cW3)

    nodes = []

    def check(name, incoming_cols: Matrix, src_reps: CohomologyCell,
              outgoing: Matrix, node_cell: CohomologyCell):
        # image of the incoming map and kernel of the outgoing map, both as
        # subspaces of the node's class coordinates
        img = image_basis(incoming_cols)
        proj = node_cell.class_projector()
        ker_cols = kernel_basis(outgoing)
        # kernel vectors are coordinates w.r.t. node representatives
        vecs = []
        for kv in ker_cols.vectors:
            acc = [ZERO] * node_cell.space.dim
            for ci, c in enumerate(kv):
                if c:
                    rep = node_cell.representatives.vectors[ci]
                    acc = [a + c * b for a, b in zip(acc, rep)]
            vecs.append(proj.apply(acc))
        ker = row_space_basis(Matrix.from_rows(vecs)) if vecs else SubspaceBasis(proj.rows, [])
        ok = img.dim == ker.dim and all(subspace_contains(ker, v) for v in img.vectors)
        nodes.append(ExactnessNode(h, name, img.dim, ker.dim, ok))

    check("H1(V)", i1, cW1, p1, cV1)
    check("H1(V/W)", p1, cV1, d1, cQ1)
    check("H2(W)", d1, cQ1, i2, cW2)
    check("H2(V)", i2, cW2, p2, cV2)
    check("H2(V/W)", p2, cV2, d2, cQ2)
    return nodes


# ---------------------------------------------------------------------------
# Spencer split of the torsion space
# ---------------------------------------------------------------------------

@dataclass
class SpencerSplit:
    dim_tor: int
    kernel_dim: int           # first prolongation of g0; zero for the catalog
    image: SubspaceBasis      # im(delta) inside Tor
    complement: SubspaceBasis # orthogonal complement, the invariant torsion choice


def spencer_split(pkg: SymbolPackage) -> SpencerSplit:
    """Tor = g- (x) Lambda^2 g-* split as im(delta) + orthogonal complement.

    delta phi (x, y) = [phi(x), y] - [phi(y), x] for phi: g- -> g0.
    """
    g = pkg.g
    neg = g.negative_indices
    g0 = g.indices_of_degree(0)
    nn = len(neg)
    arg_pairs = list(combinations(range(nn), 2))
    tor_dim = nn * len(arg_pairs)
    tor_pos = {}
    for pi_, (i, j) in enumerate(arg_pairs):
        for v in range(nn):
            tor_pos[(i, j, v)] = pi_ * nn + v
    rows = [dict() for _ in range(tor_dim)]
    col = 0
    for x in g0:
        for a_ in range(nn):
            # phi = x (x) e_a*: delta phi (e_i, e_j) = delta_{ia}[x, e_j] - delta_{ja}[x, e_i]
            for pi_, (i, j) in enumerate(arg_pairs):
                acc: dict = {}
                if i == a_:
                    for c, coef in g.bracket_basis(x, neg[j]).items():
                        acc[c] = acc.get(c, ZERO) + coef
                if j == a_:
                    for c, coef in g.bracket_basis(x, neg[i]).items():
                        acc[c] = acc.get(c, ZERO) - coef
                for c, coef in acc.items():
                    if coef:
                        rows[tor_pos[(i, j, neg.index(c))]][col] = coef
            col += 1
    delta = Matrix(tor_dim, len(g0) * nn, rows)
    ker = kernel_basis(delta)
    img = image_basis(delta)
    from .linalg import orthogonal_complement
    comp = orthogonal_complement(img, Matrix.identity(tor_dim))
    return SpencerSplit(dim_tor=tor_dim, kernel_dim=ker.dim, image=img, complement=comp)


# ---------------------------------------------------------------------------
# explicit generator cochains for the catalog families
# ---------------------------------------------------------------------------

@dataclass
class GeneratorSet:
    """Closed degree-2 generator cochains valued in g, with optional partners.

    A partner is a degree-1 cochain valued in the quotient module whose
    connecting-map image equals the generator exactly.  Families:
    "hom1" and "hom2" (free), "hom2" (contact), "h2part" (free rank 3 only).
    """

    pair: SubquotientModule
    families: dict


def _build_cochain(space: CochainSpace, terms) -> Cochain:
    out: dict = {}
    for val, args, coef in terms:
        for vi, vc in val.items():
            add_monomial(out, space, args, vi, rat(coef) * rat(vc))
    return Cochain.from_sparse(space, out)


def _free_generator_set(pkg: SymbolPackage) -> GeneratorSet:
    m = pkg.param
    sq = envelope_pair(pkg)
    gmod = pkg.adjoint_module()
    env = pkg.envelope
    npairs = m * (m - 1) // 2
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    ppos = {p: k for k, p in enumerate(pairs)}
    sym_pairs = [(a, b) for a in range(m) for b in range(a, m)]
    spos = {p: k for k, p in enumerate(sym_pairs)}

    def e1(i):
        return npairs + i

    def e2(i, j):
        # (index, sign) of the second-layer element e_[ij]; None on the diagonal
        if i == j:
            return None
        return (ppos[(i, j)], 1) if i < j else (ppos[(j, i)], -1)

    def s_elt(i, j):
        # s^i_j: the g0 rotation mapping e_i to e_j
        if i == j:
            return None
        base = npairs + m
        return (base + ppos[(i, j)], 1) if i < j else (base + ppos[(j, i)], -1)

    def a_envelope(i, j):
        # envelope coordinates of the gl(m) matrix unit E_ij
        base0 = npairs + m
        if i == j:
            return {base0 + npairs + spos[(i, i)]: ONE}
        if i < j:
            return {base0 + ppos[(i, j)]: rat("-1/2"),
                    base0 + npairs + spos[(i, j)]: rat("1/2")}
        return {base0 + ppos[(j, i)]: rat("1/2"),
                base0 + npairs + spos[(j, i)]: rat("1/2")}

    def f_envelope(q):
        return {npairs + m + npairs + m * (m + 1) // 2 + q: ONE}

    def to_quot(envdict):
        vec = [ZERO] * env.dim
        for i, c in envdict.items():
            vec[i] = c
        out = sq.proj.apply(vec)
        return {i: c for i, c in enumerate(out) if c}

    sp_a1 = CochainSpace(2, gmod, 1)
    sp_b1 = CochainSpace(1, sq.quot, 1)
    sp_a2 = CochainSpace(2, gmod, 2)
    sp_b2 = CochainSpace(1, sq.quot, 2)

    def alpha1(i, j, k):
        terms = [({e1(j): 1}, (e1(i), e1(k)), 1), ({e1(i): 1}, (e1(j), e1(k)), 1)]
        for t in range(m):
            a = e2(j, t)
            b = e2(i, t)
            if a and b:
                terms.append(({a[0]: a[1]}, (b[0], e1(k)), b[1]))
                terms.append(({b[0]: b[1]}, (a[0], e1(k)), a[1]))
        return _build_cochain(sp_a1, terms)

    def beta1(i, j, k):
        # (E_ij + E_ji) (x) e_k*, with the sign that makes delta(beta) = alpha
        val: dict = {}
        for d in (a_envelope(j, i), a_envelope(i, j)):
            for a, c in to_quot(d).items():
                val[a] = val.get(a, ZERO) - c
        return _build_cochain(sp_b1, [(val, (e1(k),), 1)])

    def alpha2(p, q):
        terms = []
        for t in range(m):
            a = e2(t, p)
            if a:
                terms.append(({e1(t): 1}, (a[0], e1(q)), a[1]))
            b = e2(t, q)
            if b:
                terms.append(({e1(t): 1}, (b[0], e1(p)), b[1]))
        for t in range(m):
            for r in range(m):
                v = e2(t, r)
                a = e2(t, p)
                b = e2(q, r)
                if v and a and b:
                    terms.append(({v[0]: v[1]}, (a[0], b[0]), a[1] * b[1]))
        return _build_cochain(sp_a2, terms)

    def beta2(p, q):
        terms = [(to_quot(f_envelope(q)), (e1(p),), rat("1/2")),
                 (to_quot(f_envelope(p)), (e1(q),), rat("1/2"))]
        for i in range(m):
            a = e2(p, i)
            if a:
                terms.append((to_quot(a_envelope(i, q)), (a[0],), rat("-1/2") * a[1]))
            b = e2(q, i)
            if b:
                terms.append((to_quot(a_envelope(i, p)), (b[0],), rat("-1/2") * b[1]))
        return _build_cochain(sp_b2, terms)

    fam_hom1 = []
    for i in range(m):
        for j in range(i, m):
            for k in range(m):
                nm = f"alpha1[{i + 1},{j + 1};{k + 1}]"
                fam_hom1.append((nm, alpha1(i, j, k), beta1(i, j, k)))
    fam_hom2 = []
    for p in range(m):
        for q in range(p, m):
            nm = f"alpha2[{p + 1},{q + 1}]"
            fam_hom2.append((nm, alpha2(p, q), beta2(p, q)))

    families = {"hom1": fam_hom1, "hom2": fam_hom2}

    if m == 3:
        from itertools import permutations

        def perm_sign(p):
            s = 1
            p = list(p)
            for a in range(len(p)):
                for b in range(a + 1, len(p)):
                    if p[a] > p[b]:
                        s = -s
            return s

        sp3 = CochainSpace(2, gmod, 3)
        terms = []
        for (i, j, k) in permutations(range(3)):
            sv = s_elt(i, j)
            a = e2(j, k)
            terms.append(({sv[0]: sv[1]}, (e1(j), a[0]), -perm_sign((i, j, k)) * a[1]))
        for (i, j, k) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            a = e2(i, j)
            b = e2(i, k)
            terms.append(({e1(i): 1}, (a[0], b[0]), a[1] * b[1]))
        families["h2part"] = [("h2gen", _build_cochain(sp3, terms), None)]

    return GeneratorSet(pair=sq, families=families)


def _contact_generator_set(pkg: SymbolPackage) -> GeneratorSet:
    n = pkg.param
    sq = envelope_pair(pkg)
    gmod = pkg.adjoint_module()
    g = pkg.g
    nn = 2 * n

    def garg(r):
        return 1 + r

    def jmap(r):
        # J e_r as (index, sign) in the first-layer basis e_1..e_n, Je_1..Je_n
        return ((r + n), 1) if r < n else ((r - n), -1)

    g0idx = [i for i in range(g.dim) if g.degree(i) == 0]
    cols = []
    for x in g0idx:
        op = [[ZERO] * nn for _ in range(nn)]
        for a in range(nn):
            for c, coef in g.bracket_basis(x, garg(a)).items():
                op[c - 1][a] = coef
        cols.append([op[i][j] for i in range(nn) for j in range(nn)])
    act = Matrix.from_columns(cols)

    def op_coords(op):
        flat = [op[i][j] for i in range(nn) for j in range(nn)]
        sol = solve(act, flat)
        if sol is None:
            raise CohomologyError("operator does not lie in g0")
        return {g0idx[k]: c for k, c in enumerate(sol) if c}

    j_op = [[ZERO] * nn for _ in range(nn)]
    for r in range(nn):
        jr, s = jmap(r)
        j_op[jr][r] = rat(s)
    j_coords = op_coords(j_op)

    def wedge_j(u, v):
        # e_u ^_J e_v as a g0 operator: e_u^e_v + Je_u^Je_v + <Je_u, e_v> J
        op = [[ZERO] * nn for _ in range(nn)]
        ju, su = jmap(u)
        jv, sv = jmap(v)
        op[v][u] += ONE
        op[u][v] -= ONE
        op[jv][ju] += rat(su * sv)
        op[ju][jv] -= rat(su * sv)
        out = op_coords(op)
        if ju == v:
            for a, c in j_coords.items():
                out[a] = out.get(a, ZERO) + rat(su) * c
        return out

    sp = CochainSpace(2, gmod, 2)

    def alpha(p, q):
        terms = []
        for t in range(nn):
            terms.append((wedge_j(p, t), (garg(t), garg(q)), 1))
            terms.append((wedge_j(q, t), (garg(t), garg(p)), 1))
        jp, sp_ = jmap(p)
        jq, sq_ = jmap(q)
        # the z-term coefficient reflects the z = [e_i, J e_i] normalization
        terms.append(({garg(jp): sp_}, (garg(q), 0), 2))
        terms.append(({garg(jq): sq_}, (garg(p), 0), 2))
        return _build_cochain(sp, terms)

    fam = []
    for p in range(nn):
        for q in range(p, nn):
            fam.append((f"alpha[{p + 1},{q + 1}]", alpha(p, q), None))
    return GeneratorSet(pair=sq, families={"hom2": fam})


def generator_cochains(pkg: SymbolPackage) -> GeneratorSet:
    """Explicit generating cochains of the two-part decomposition."""
    if pkg.family == "free":
        return _free_generator_set(pkg)
    if pkg.family == "contact":
        return _contact_generator_set(pkg)
    raise CohomologyError(f"no generators for family {pkg.family!r}")
