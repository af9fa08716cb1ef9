"""Tanaka prolongation of a nonpositively graded Lie algebra, degree by degree.

A degree-p element (p >= 1) is a degree-p map f on the negative part
satisfying f([x, y]) = [f(x), y] + [x, f(y)].  Since the negative part is
generated in degree -1, f is determined by its restriction to the first
layer; the restrictions are the unknowns of a linear system whose kernel is
the degree-p prolongation space.

After the dimensions stabilize (two consecutive zero degrees, or the given
bound is reached) the full prolonged algebra is assembled and Jacobi-checked.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import Matrix, SubspaceBasis, ZERO, ONE, kernel_basis, rat, solve
from .lie_core import GradedLieAlgebra, validate


class ProlongationError(ValueError):
    pass


@dataclass
class ProlongationResult:
    dims_by_degree: dict
    algebra: GradedLieAlgebra        # the assembled prolongation
    stabilized: bool                 # True when two consecutive degrees vanished

    @property
    def total_dim(self) -> int:
        return self.algebra.dim


class _Prolongation:
    """Working state: layers of the prolongation with their action profiles.

    A layer of degree d <= 0 is spanned by the g basis elements of that
    degree.  A layer of degree p >= 1 is spanned by computed elements, each
    stored as an action profile: negative basis index -> coordinate vector
    in the layer of degree p + deg(index).
    """

    def __init__(self, g: GradedLieAlgebra):
        self.g = g
        if any(d > 0 for _, d in g.basis):
            raise ProlongationError("input must be nonpositively graded")
        self.depth = g.depth()
        self.neg1 = g.indices_of_degree(-1)
        self.layers: dict[int, list] = {}
        for d in range(-self.depth, 1):
            self.layers[d] = g.indices_of_degree(d)
        # generated in degree -1: each deeper layer is spanned by brackets
        self.decomp: dict[int, list] = {}
        self.relations: dict[int, SubspaceBasis] = {}
        self._prepare_generation()

    # -- generation of the negative part ------------------------------------

    def _layer_dim(self, d: int) -> int:
        if d >= 1:
            return len(self.layers.get(d, []))
        return len(self.layers.get(d, []))

    def _gcoords(self, d: int, vec: dict) -> list:
        """Restrict a sparse g-coordinate dict to the degree-d block."""
        idxs = self.layers[d]
        pos = {gi: r for r, gi in enumerate(idxs)}
        out = [ZERO] * len(idxs)
        for gi, c in vec.items():
            if self.g.degree(gi) != d:
                raise ProlongationError("bracket left its degree block")
            out[pos[gi]] = c
        return out

    def _prepare_generation(self):
        """Decompose every layer g_{-d}, d >= 2, as [g_{-1}, g_{-(d-1)}].

        Stores, per depth d, a canonical decomposition of each basis element
        and a basis of the relations among the spanning brackets.
        """
        g = self.g
        for d in range(2, self.depth + 1):
            prev = self.layers[-(d - 1)]
            tgt = self.layers[-d]
            pairs = [(a, w) for a in self.neg1 for w in prev]
            cols = []
            for a, w in pairs:
                cols.append(self._gcoords(-d, g.bracket_basis(a, w)))
            if not pairs:
                raise ProlongationError("negative part not generated in degree -1")
            span = Matrix.from_columns(cols)
            decomp = []
            for r in range(len(tgt)):
                e = [ONE if i == r else ZERO for i in range(len(tgt))]
                mu = solve(span, e)
                if mu is None:
                    raise ProlongationError("negative part not generated in degree -1")
                decomp.append([(pairs[i], c) for i, c in enumerate(mu) if c])
            self.decomp[d] = decomp
            self.relations[d] = kernel_basis(span)
            self._gen_pairs = getattr(self, "_gen_pairs", {})
            self._gen_pairs[d] = pairs

    # -- brackets of layer elements with negative basis elements ------------

    def bracket_matrix(self, r: int, y: int) -> Matrix:
        """Matrix of w -> [w, b_y] from layer r to layer r + deg(y)."""
        g = self.g
        d = g.degree(y)
        tgt = r + d
        if tgt < -self.depth:
            return Matrix.zeros(0, self._layer_dim(r))
        cols = []
        if r >= 1:
            for prof in self.layers[r]:
                cols.append(prof.get(y, [ZERO] * self._layer_dim(tgt)))
        else:
            for gi in self.layers[r]:
                cols.append(self._gcoords(tgt, g.bracket_basis(gi, y)))
        if not cols:
            return Matrix.zeros(self._layer_dim(tgt), 0)
        return Matrix.from_columns(cols)

    # -- one prolongation step ----------------------------------------------

    def extend(self, p: int) -> int:
        """Compute the degree-p layer; returns its dimension."""
        n1 = len(self.neg1)
        prev_dim = self._layer_dim(p - 1)
        nunk = n1 * prev_dim
        if nunk == 0:
            self.layers[p] = []
            return 0

        def selector(ai: int) -> Matrix:
            rows = [
                {ai * prev_dim + i: ONE} for i in range(prev_dim)
            ]
            return Matrix(prev_dim, nunk, rows)

        # linear expressions for f on every negative layer
        exprs: dict[int, Matrix] = {}
        for ai, a in enumerate(self.neg1):
            exprs[a] = selector(ai)
        constraints: list[Matrix] = []
        for d in range(2, self.depth + 1):
            # f on g_{-d} via the canonical decomposition z = sum mu [x_a, w]
            tgt_dim = self._layer_dim(p - d)
            lay_rows = []
            for terms in self.decomp[d]:
                acc = Matrix.zeros(tgt_dim, nunk)
                for (a, w), mu in terms:
                    acc = acc + self._pair_expr(p, a, w, exprs).scale(mu)
                lay_rows.append(acc)
            for gi, mat in zip(self.layers[-d], lay_rows):
                exprs[gi] = mat
            # relations among the spanning brackets must map to zero
            pairs = self._gen_pairs[d]
            for lam in self.relations[d].vectors:
                acc = Matrix.zeros(tgt_dim, nunk)
                for i, c in enumerate(lam):
                    if c:
                        a, w = pairs[i]
                        acc = acc + self._pair_expr(p, a, w, exprs).scale(c)
                constraints.append(acc)
        # full derivation property on all pairs of negative basis elements
        neg = self.g.negative_indices
        for i in range(len(neg)):
            for j in range(i + 1, len(neg)):
                x, y = neg[i], neg[j]
                dx, dy = self.g.degree(x), self.g.degree(y)
                tgt = p + dx + dy
                if tgt < -self.depth:
                    continue
                acc = self._pair_expr_general(p, x, y, exprs)
                br = self.g.bracket_basis(x, y)
                if br:
                    fz = Matrix.zeros(self._layer_dim(tgt), nunk)
                    for gi, c in br.items():
                        fz = fz + exprs[gi].scale(c)
                    acc = acc - fz
                if not acc.is_zero():
                    constraints.append(acc)

        if constraints:
            stacked = constraints[0]
            for c in constraints[1:]:
                stacked = stacked.stack_below(c)
            ker = kernel_basis(stacked)
        else:
            ker = SubspaceBasis(nunk, [[ONE if i == j else ZERO for j in range(nunk)]
                                       for i in range(nunk)])
        basis = []
        for vec in ker.vectors:
            prof: dict = {}
            for gi in neg:
                prof[gi] = exprs[gi].apply(list(vec))
            basis.append(prof)
        self.layers[p] = basis
        return len(basis)

    def _pair_expr(self, p: int, a: int, w: int, exprs: dict) -> Matrix:
        """[f(x_a), b_w] + [x_a, f(b_w)] as a linear expression in the unknowns."""
        da, dw = self.g.degree(a), self.g.degree(w)
        left = self.bracket_matrix(p + da, w) * exprs[a]
        right = self.bracket_matrix(p + dw, a) * exprs[w]
        return left - right

    def _pair_expr_general(self, p: int, x: int, y: int, exprs: dict) -> Matrix:
        return self._pair_expr(p, x, y, exprs)


def _layer_coords(pro: _Prolongation, p: int, prof: dict) -> list:
    """Coordinates of a degree-p (p>=1) action profile in the layer basis."""
    basis = pro.layers[p]
    cols = []
    flat_tgt: list = []
    for f in basis:
        flat = []
        for a in pro.neg1:
            flat.extend(f[a])
        cols.append(flat)
    for a in pro.neg1:
        flat_tgt.extend(prof[a])
    if not basis:
        if any(c != 0 for c in flat_tgt):
            raise ProlongationError("bracket left the prolongation span")
        return []
    sol = solve(Matrix.from_columns(cols), flat_tgt)
    if sol is None:
        raise ProlongationError("bracket left the prolongation span")
    return sol


def prolong(g: GradedLieAlgebra, max_degree: int = 4) -> ProlongationResult:
    """Prolongation dims per degree, with the assembled algebra Jacobi-checked."""
    pro = _Prolongation(g)
    dims = {d: len(pro.layers[d]) for d in range(-pro.depth, 1)}
    zeros = 0
    top = 0
    for p in range(1, max_degree + 1):
        n = pro.extend(p)
        dims[p] = n
        top = p
        zeros = zeros + 1 if n == 0 else 0
        if zeros >= 2:
            break
    stabilized = zeros >= 2
    algebra = _assemble(pro, top)
    report = validate(algebra)
    if not report.ok:
        raise ProlongationError(
            "assembled prolongation fails validation: " + "; ".join(report.violations[:3])
        )
    return ProlongationResult(dims_by_degree=dims, algebra=algebra, stabilized=stabilized)


def _assemble(pro: _Prolongation, top: int) -> GradedLieAlgebra:
    g = pro.g
    names: list[tuple[str, int]] = list(g.basis)
    offsets: dict[int, int] = {}
    for p in range(1, top + 1):
        offsets[p] = len(names)
        for i in range(len(pro.layers[p])):
            names.append((f"p{p}_{i}", p))

    def glob(p: int, coords) -> dict:
        """Layer coordinates -> global sparse coordinates."""
        if p >= 1:
            return {offsets[p] + i: c for i, c in enumerate(coords) if c}
        idxs = pro.layers[p]
        return {idxs[i]: c for i, c in enumerate(coords) if c}

    memo: dict = {}

    def bracket(p: int, i: int, q: int, j: int) -> dict:
        """[element i of layer p, element j of layer q] as global coords."""
        if p < q or (p == q and i > j):
            return {k: -c for k, c in bracket(q, j, p, i).items()}
        key = (p, i, q, j)
        if key in memo:
            return memo[key]
        if p <= 0:
            gi, gj = pro.layers[p][i], pro.layers[q][j]
            out = dict(g.bracket_basis(gi, gj))
        elif q < 0:
            gj = pro.layers[q][j]
            prof = pro.layers[p][i]
            tgt = p + q
            if tgt < -pro.depth:
                out = {}
            else:
                out = glob(tgt, prof[gj])
        else:
            # q >= 0, p >= 1: determine the result by its action on g_{-1}
            tgt = p + q
            prof: dict = {}
            for a in pro.neg1:
                acc: dict = {}
                # [[f,h],a] = [f,[h,a]] - [h,[f,a]]
                fa = bracket_elem(p, i, -1, a)
                ha = bracket_elem(q, j, -1, a)
                for (r, coords, other_p, other_i, sign) in (
                    (q - 1, ha, p, i, 1),
                    (p - 1, fa, q, j, -1),
                ):
                    for li, c in enumerate(coords):
                        if c:
                            inner = bracket(other_p, other_i, r, li)
                            for kk, vv in inner.items():
                                nv = acc.get(kk, ZERO) + sign * c * vv
                                if nv:
                                    acc[kk] = nv
                                else:
                                    acc.pop(kk, None)
                prof[a] = acc
            out = _global_from_neg1_action(pro, tgt, prof, glob)
        memo[key] = out
        return out

    def bracket_elem(p: int, i: int, q_deg: int, g_index: int) -> list:
        """[layer-p element i, negative basis g_index] as layer coordinates."""
        tgt = p + q_deg
        if p >= 1:
            prof = pro.layers[p][i]
            return prof[g_index]
        gi = pro.layers[p][i]
        if tgt < -pro.depth:
            return []
        return pro._gcoords(tgt, g.bracket_basis(gi, g_index))

    def _global_from_neg1_action(pro, tgt, prof, glob) -> dict:
        """Identify an element of layer tgt from its bracket with g_{-1}."""
        if tgt >= 1:
            if not pro.layers.get(tgt):
                if any(prof[a] for a in pro.neg1):
                    raise ProlongationError("bracket left the prolongation span")
                return {}
            coords = _layer_coords(pro, tgt, {a: [prof[a].get(k, ZERO)
                                                  for k in _layer_globals(pro, tgt - 1, glob)]
                                              for a in pro.neg1})
            return glob(tgt, coords)
        # tgt <= 0: solve against the ad action of the degree-tgt block of g
        idxs = pro.layers[tgt]
        cols = []
        for gi in idxs:
            flat = []
            for a in pro.neg1:
                vec = g.bracket_basis(gi, a)
                flat.extend(pro._gcoords(tgt - 1, vec))
            cols.append(flat)
        flat_tgt = []
        low = pro.layers[tgt - 1]
        for a in pro.neg1:
            acc = prof[a]
            flat_tgt.extend([acc.get(k, ZERO) for k in low])
        if not idxs:
            if any(c != 0 for c in flat_tgt):
                raise ProlongationError("bracket left the prolongation span")
            return {}
        sol = solve(Matrix.from_columns(cols), flat_tgt)
        if sol is None:
            raise ProlongationError("bracket left the prolongation span")
        return glob(tgt, sol)

    def _layer_globals(pro, r, glob) -> list:
        """Global indices of the layer-r basis, in layer order."""
        if r >= 1:
            return [offsets[r] + i for i in range(len(pro.layers[r]))]
        return list(pro.layers[r])

    dim = len(names)
    table = {}
    sizes = {p: len(pro.layers[p]) for p in pro.layers}
    # global index -> (layer, position)
    where: dict[int, tuple[int, int]] = {}
    for p in range(-pro.depth, 1):
        for i, gi in enumerate(pro.layers[p]):
            where[gi] = (p, i)
    for p in range(1, top + 1):
        for i in range(sizes[p]):
            where[offsets[p] + i] = (p, i)
    for gi in range(dim):
        for gj in range(gi + 1, dim):
            p, i = where[gi]
            q, j = where[gj]
            vec = bracket(p, i, q, j)
            if vec:
                table[(gi, gj)] = vec
    return GradedLieAlgebra(f"prolongation({g.name})", names, table)
