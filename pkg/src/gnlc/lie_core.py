"""Graded Lie algebras given by exact structure constants, and graded modules.

An algebra is a list of named basis elements with integer degrees plus the
bracket table [b_i, b_j] in basis coordinates.  Validation checks
antisymmetry, the Jacobi identity and compatibility of the bracket with the
grading, all exactly.  Modules over an algebra are stored as explicit action
matrices so that submodules and quotients are uniform.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .linalg import (
    Matrix,
    Rational,
    SubspaceBasis,
    ZERO,
    ONE,
    gram_is_spd,
    kernel_basis,
    quotient_coordinates,
    rat,
    solve,
)


class StructureError(ValueError):
    pass


def _sparse_vec(coords) -> dict:
    if isinstance(coords, dict):
        return {k: rat(v) for k, v in coords.items() if rat(v) != 0}
    return {i: rat(v) for i, v in enumerate(coords) if rat(v) != 0}


class GradedLieAlgebra:
    """Finite-dimensional graded Lie algebra by structure constants."""

    def __init__(self, name: str, basis: Sequence[tuple[str, int]], table: dict):
        """`table` maps (i, j) with i < j to the coordinates of [b_i, b_j].

        Coordinates may be dense sequences or {index: value} dicts; the
        antisymmetric part is filled in automatically.
        """
        self.name = name
        self.basis = [(str(n), int(d)) for n, d in basis]
        self.dim = len(self.basis)
        self._table = [[{} for _ in range(self.dim)] for _ in range(self.dim)]
        for (i, j), coords in table.items():
            if i == j:
                raise StructureError("diagonal bracket entries must be omitted")
            vec = _sparse_vec(coords)
            self._table[i][j] = vec
            self._table[j][i] = {k: -v for k, v in vec.items()}
        self._ad_cache: dict[int, Matrix] = {}

    # -- basic queries -----------------------------------------------------

    def degree(self, i: int) -> int:
        return self.basis[i][1]

    def basis_name(self, i: int) -> str:
        return self.basis[i][0]

    def index_of(self, name: str) -> int:
        for i, (n, _) in enumerate(self.basis):
            if n == name:
                return i
        raise KeyError(name)

    def indices_of_degree(self, d: int) -> list[int]:
        return [i for i, (_, deg) in enumerate(self.basis) if deg == d]

    def degrees(self) -> list[int]:
        return sorted({d for _, d in self.basis})

    @property
    def negative_indices(self) -> list[int]:
        return [i for i, (_, d) in enumerate(self.basis) if d < 0]

    def depth(self) -> int:
        return max((-d for _, d in self.basis if d < 0), default=0)

    # -- bracket -----------------------------------------------------------

    def bracket_basis(self, i: int, j: int) -> dict:
        """[b_i, b_j] as a sparse coordinate dict."""
        return self._table[i][j]

    def bracket(self, u: Sequence, v: Sequence) -> list[Rational]:
        out = [ZERO] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                for k, c in self._table[i][j].items():
                    out[k] += a * b * c
        return out

    def ad_matrix(self, i: int) -> Matrix:
        """Matrix of ad(b_i) acting on coordinates."""
        m = self._ad_cache.get(i)
        if m is None:
            rows = [dict() for _ in range(self.dim)]
            for j in range(self.dim):
                for k, c in self._table[i][j].items():
                    rows[k][j] = c
            m = Matrix(self.dim, self.dim, rows)
            self._ad_cache[i] = m
        return m

    def subalgebra(self, indices: Sequence[int], name: str) -> "GradedLieAlgebra":
        """Subalgebra spanned by the given basis indices (must be closed)."""
        indices = list(indices)
        pos = {gi: li for li, gi in enumerate(indices)}
        table = {}
        for a, gi in enumerate(indices):
            for b, gj in enumerate(indices):
                if a >= b:
                    continue
                vec = {}
                for k, c in self._table[gi][gj].items():
                    if k not in pos:
                        raise StructureError(
                            f"span of {name} is not closed under the bracket: "
                            f"[{self.basis_name(gi)}, {self.basis_name(gj)}] leaves it"
                        )
                    vec[pos[k]] = c
                if vec:
                    table[(a, b)] = vec
        return GradedLieAlgebra(name, [self.basis[i] for i in indices], table)

    def __repr__(self):
        return f"GradedLieAlgebra({self.name}, dim={self.dim})"


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass
class ValidationReport:
    algebra: str
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(a: GradedLieAlgebra, symbol_algebra: bool = False) -> ValidationReport:
    """Check antisymmetry, grading compatibility and the Jacobi identity.

    With `symbol_algebra` set, additionally checks that the negative part is
    generated by the degree -1 component.  Violations are collected, not
    raised; the report names the first offending tuple of each kind.
    """
    report = ValidationReport(a.name)
    n = a.dim

    for i in range(n):
        for j in range(i, n):
            lhs = a.bracket_basis(i, j)
            rhs = {k: -v for k, v in a.bracket_basis(j, i).items()}
            if lhs != rhs:
                report.violations.append(
                    f"antisymmetry fails on ({a.basis_name(i)}, {a.basis_name(j)})"
                )

    for i in range(n):
        for j in range(i + 1, n):
            d = a.degree(i) + a.degree(j)
            for k, v in a.bracket_basis(i, j).items():
                if v and a.degree(k) != d:
                    report.violations.append(
                        f"grading fails on [{a.basis_name(i)}, {a.basis_name(j)}]: "
                        f"component {a.basis_name(k)} has degree {a.degree(k)} != {d}"
                    )
                    break

    def _acc(acc: dict, left: dict, k: int, sign: int):
        # acc += sign * [vector `left`, b_k]
        for t, c in left.items():
            for s, d in a.bracket_basis(t, k).items():
                nv = acc.get(s, ZERO) + sign * c * d
                if nv:
                    acc[s] = nv
                else:
                    acc.pop(s, None)

    for i in range(n):
        for j in range(i + 1, n):
            bij = a.bracket_basis(i, j)
            for k in range(j + 1, n):
                acc: dict = {}
                _acc(acc, bij, k, 1)
                _acc(acc, a.bracket_basis(j, k), i, 1)
                _acc(acc, a.bracket_basis(k, i), j, 1)
                if acc:
                    report.violations.append(
                        f"Jacobi fails on ({a.basis_name(i)}, {a.basis_name(j)}, {a.basis_name(k)})"
                    )

    if symbol_algebra:
        neg = a.negative_indices
        depth = a.depth()
        generated = {i for i in neg if a.degree(i) == -1}
        span = SubspaceBasis(a.dim, [_unit(a.dim, i) for i in sorted(generated)])
        for _ in range(depth):
            new_vecs = list(span.vectors)
            for i in a.indices_of_degree(-1):
                for v in span.vectors:
                    new_vecs.append(a.bracket(_unit(a.dim, i), v))
            from .linalg import row_space_basis
            span = row_space_basis(Matrix.from_rows(new_vecs))
        for i in neg:
            from .linalg import subspace_contains
            if not subspace_contains(span, _unit(a.dim, i)):
                report.violations.append(
                    f"negative part is not generated in degree -1: {a.basis_name(i)}"
                )
                break
    return report


def _unit(n: int, i: int) -> list[Rational]:
    v = [ZERO] * n
    v[i] = ONE
    return v


# ---------------------------------------------------------------------------
# Killing form and grading element
# ---------------------------------------------------------------------------

def killing_form(a: GradedLieAlgebra) -> Matrix:
    """B(x, y) = trace(ad x . ad y) on basis coordinates."""
    n = a.dim
    ads = [a.ad_matrix(i) for i in range(n)]
    rows = [dict() for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            tr = ZERO
            for k, row in enumerate(ads[i]._rows):
                for t, v in row.items():
                    w = ads[j]._rows[t].get(k)
                    if w:
                        tr += v * w
            if tr:
                rows[i][j] = tr
                if i != j:
                    rows[j][i] = tr
    return Matrix(n, n, rows)


def grading_element(a: GradedLieAlgebra) -> Optional[list[Rational]]:
    """Coordinates of E with [E, x] = deg(x) x for all x, or None."""
    n = a.dim
    cols = []
    for i in range(n):
        col = []
        ad = a.ad_matrix(i)
        for j in range(n):
            col.extend(ad.column(j))
        cols.append(col)
    m = Matrix.from_columns(cols)
    rhs = []
    for j in range(n):
        for k in range(n):
            rhs.append(rat(a.degree(j)) if k == j else ZERO)
    return solve(m, rhs)


# ---------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------

class Representation:
    """A graded module over `algebra`, one action matrix per algebra basis element."""

    def __init__(
        self,
        algebra: GradedLieAlgebra,
        module_basis: Sequence[tuple[str, int]],
        action: Sequence[Matrix],
        name: str = "",
    ):
        self.algebra = algebra
        self.module_basis = [(str(n), int(d)) for n, d in module_basis]
        self.dim = len(self.module_basis)
        self.action = list(action)
        self.name = name or f"module over {algebra.name}"
        if len(self.action) != algebra.dim:
            raise StructureError("need one action matrix per algebra basis element")
        for m in self.action:
            if m.rows != self.dim or m.cols != self.dim:
                raise StructureError("action matrix shape mismatch")

    def module_degree(self, i: int) -> int:
        return self.module_basis[i][1]

    def module_indices_of_degree(self, d: int) -> list[int]:
        return [i for i, (_, deg) in enumerate(self.module_basis) if deg == d]

    def act(self, alg_index: int, vec: Sequence) -> list[Rational]:
        return self.action[alg_index].apply(list(vec))

    def act_sparse(self, alg_index: int, vec: dict) -> dict:
        out: dict = {}
        mat = self.action[alg_index]
        for j, c in vec.items():
            for i, row in enumerate(mat._rows):
                v = row.get(j)
                if v:
                    nv = out.get(i, ZERO) + c * v
                    if nv:
                        out[i] = nv
                    else:
                        out.pop(i, None)
        return out

    def check(self) -> list[str]:
        """Exact homomorphism and degree checks; returns violation messages."""
        errs = []
        a = self.algebra
        for i in range(a.dim):
            for j in range(i + 1, a.dim):
                lhs = Matrix.zeros(self.dim, self.dim)
                for k, c in a.bracket_basis(i, j).items():
                    lhs = lhs + self.action[k].scale(c)
                rhs = self.action[i] * self.action[j] - self.action[j] * self.action[i]
                if lhs != rhs:
                    errs.append(
                        f"action is not a homomorphism on ({a.basis_name(i)}, {a.basis_name(j)})"
                    )
        for i in range(a.dim):
            di = a.degree(i)
            mat = self.action[i]
            for j in range(self.dim):
                dj = self.module_degree(j)
                for k in range(self.dim):
                    if mat.entry(k, j) and self.module_degree(k) != dj + di:
                        errs.append(
                            f"action of {a.basis_name(i)} does not shift degree by {di}"
                        )
                        break
        return errs

    def __repr__(self):
        return f"Representation({self.name}, dim={self.dim})"


@dataclass
class ModuleMap:
    """A linear map of modules intertwining the algebra action."""

    source: Representation
    target: Representation
    matrix: Matrix

    def check(self) -> list[str]:
        errs = []
        for i in range(self.source.algebra.dim):
            if self.matrix * self.source.action[i] != self.target.action[i] * self.matrix:
                errs.append(f"map does not intertwine {self.source.algebra.basis_name(i)}")
        return errs


@dataclass
class InnerProduct:
    """Symmetric positive-definite Gram matrix on a declared basis."""

    gram: Matrix

    def check_spd(self) -> bool:
        return gram_is_spd(self.gram)

    def check_graded_orthogonal(self, degrees: Sequence[int]) -> bool:
        for i in range(self.gram.rows):
            for j in range(self.gram.cols):
                if degrees[i] != degrees[j] and self.gram.entry(i, j):
                    return False
        return True

    def is_invariant_under(self, matrices: Sequence[Matrix]) -> bool:
        """<Xa, b> + <a, Xb> = 0 for every action matrix X."""
        for m in matrices:
            if not (m.transpose() * self.gram + self.gram * m).is_zero():
                return False
        return True


def restricted_adjoint(
    ambient: GradedLieAlgebra, sub_indices: Sequence[int], sub_name: str = "sub"
) -> Representation:
    """The ambient algebra as a module over the subalgebra it contains.

    `sub_indices` must span a subalgebra (coordinate subspace of the ambient
    basis); the action is the restricted adjoint action.
    """
    sub = ambient.subalgebra(sub_indices, sub_name)
    action = [ambient.ad_matrix(gi) for gi in sub_indices]
    return Representation(sub, ambient.basis, action, name=f"{ambient.name} over {sub_name}")


def quotient_module(
    v: Representation, w: SubspaceBasis
) -> tuple[Representation, ModuleMap]:
    """Quotient of `v` by the stable graded subspace spanned by `w`.

    Raises StructureError when `w` is not stable under the algebra action or
    is not spanned by vectors of pure degree.
    """
    if w.ambient_dim != v.dim:
        raise StructureError("submodule ambient dimension mismatch")
    proj = quotient_coordinates(w)
    for i in range(v.algebra.dim):
        for vec in w.vectors:
            img = v.act(i, vec)
            if any(x != 0 for x in proj.apply(img)):
                raise StructureError(
                    f"subspace is not stable under {v.algebra.basis_name(i)}"
                )

    # quotient coordinates are the non-pivot module coordinates; they inherit
    # the degree of the corresponding module basis element provided w is graded
    for vec in w.vectors:
        degs = {v.module_degree(i) for i, x in enumerate(vec) if x != 0}
        if len(degs) > 1:
            raise StructureError("submodule basis vector mixes degrees")

    n = v.dim
    q = proj.rows
    # section: include the free coordinates back (proj * section = identity)
    pivot_free = []
    for r in range(q):
        # each row of proj has exactly one entry 1 in its own free column
        free_col = None
        for c in range(n):
            if proj.entry(r, c) == 1 and all(
                proj.entry(rr, c) == 0 for rr in range(q) if rr != r
            ):
                free_col = c
                break
        pivot_free.append(free_col)
    section = Matrix.from_columns(
        [[ONE if i == fc else ZERO for i in range(n)] for fc in pivot_free]
    )
    qaction = [proj * v.action[i] * section for i in range(v.algebra.dim)]
    qbasis = [
        (v.module_basis[fc][0] + "~", v.module_basis[fc][1]) for fc in pivot_free
    ]
    quotient = Representation(v.algebra, qbasis, qaction, name=f"{v.name} quotient")
    return quotient, ModuleMap(v, quotient, proj)


def submodule_span(v: Representation, vectors: Sequence[Sequence]) -> SubspaceBasis:
    """Canonical basis of the span of `vectors` inside the module of `v`."""
    from .linalg import row_space_basis

    if not vectors:
        return SubspaceBasis(v.dim, [])
    return row_space_basis(Matrix.from_rows([[rat(x) for x in vec] for vec in vectors]))
