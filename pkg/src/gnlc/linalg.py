"""Dense exact rational linear algebra.

Everything downstream (structure-constant validation, cohomology dimension
counts, invariant subspaces) relies on these routines being exact, so all
arithmetic is done with arbitrary-precision rationals (gmpy2.mpq).  All
elimination is deterministic: identical inputs give bit-for-bit identical
bases.  Reduced row echelon form is canonical, so the kernel/row-space bases
returned here do not depend on internal pivot choices.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from gmpy2 import mpq

Rational = mpq

ZERO = mpq(0)
ONE = mpq(1)


def rat(value) -> Rational:
    """Coerce an int, string like "3/4", or rational to an exact rational."""
    if isinstance(value, mpq):
        return value
    return mpq(value)


class LinalgError(ValueError):
    pass


class Matrix:
    """Immutable exact rational matrix.

    Stored as one sparse dict per row ({col: nonzero rational}); the logical
    shape is rows x cols regardless of sparsity.  Treat instances as frozen.
    """

    __slots__ = ("rows", "cols", "_rows")

    def __init__(self, rows: int, cols: int, row_dicts: list[dict] | None = None):
        self.rows = rows
        self.cols = cols
        self._rows = row_dicts if row_dicts is not None else [dict() for _ in range(rows)]

    @classmethod
    def from_rows(cls, entries: Sequence[Sequence]) -> "Matrix":
        nrows = len(entries)
        ncols = len(entries[0]) if nrows else 0
        rows = []
        for r in entries:
            if len(r) != ncols:
                raise LinalgError("ragged rows")
            rows.append({j: rat(v) for j, v in enumerate(r) if rat(v) != 0})
        return cls(nrows, ncols, rows)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [{i: ONE} for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "Matrix":
        """Build a matrix whose columns are the given coordinate vectors."""
        ncols = len(cols)
        nrows = len(cols[0]) if ncols else 0
        rows = [dict() for _ in range(nrows)]
        for j, c in enumerate(cols):
            for i, v in enumerate(c):
                v = rat(v)
                if v != 0:
                    rows[i][j] = v
        return cls(nrows, ncols, rows)

    def entry(self, i: int, j: int) -> Rational:
        return self._rows[i].get(j, ZERO)

    def __getitem__(self, ij) -> Rational:
        return self.entry(*ij)

    def row(self, i: int) -> list[Rational]:
        r = self._rows[i]
        return [r.get(j, ZERO) for j in range(self.cols)]

    def column(self, j: int) -> list[Rational]:
        return [r.get(j, ZERO) for r in self._rows]

    def to_lists(self) -> list[list[Rational]]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        rows = [dict() for _ in range(self.cols)]
        for i, r in enumerate(self._rows):
            for j, v in r.items():
                rows[j][i] = v
        return Matrix(self.cols, self.rows, rows)

    def is_zero(self) -> bool:
        return all(not r for r in self._rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self._rows == other._rows
        )

    def __hash__(self):
        raise TypeError("Matrix is not hashable")

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise LinalgError(f"shape mismatch {self.rows}x{self.cols} * {other.rows}x{other.cols}")
        rows = []
        for r in self._rows:
            acc: dict = {}
            for k, v in r.items():
                for j, w in other._rows[k].items():
                    nv = acc.get(j, ZERO) + v * w
                    if nv:
                        acc[j] = nv
                    else:
                        acc.pop(j, None)
            rows.append(acc)
        return Matrix(self.rows, other.cols, rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise LinalgError("shape mismatch in addition")
        rows = []
        for r1, r2 in zip(self._rows, other._rows):
            acc = dict(r1)
            for j, v in r2.items():
                nv = acc.get(j, ZERO) + v
                if nv:
                    acc[j] = nv
                else:
                    acc.pop(j, None)
            rows.append(acc)
        return Matrix(self.rows, self.cols, rows)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(-1)

    def scale(self, c) -> "Matrix":
        c = rat(c)
        if c == 0:
            return Matrix.zeros(self.rows, self.cols)
        return Matrix(self.rows, self.cols, [{j: c * v for j, v in r.items()} for r in self._rows])

    def apply(self, vec: Sequence) -> list[Rational]:
        """Matrix-vector product, vec of length cols."""
        if len(vec) != self.cols:
            raise LinalgError("vector length mismatch")
        out = []
        for r in self._rows:
            s = ZERO
            for j, v in r.items():
                x = vec[j]
                if x:
                    s += v * x
            out.append(s)
        return out

    def stack_below(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise LinalgError("column mismatch in vertical stack")
        rows = [dict(r) for r in self._rows] + [dict(r) for r in other._rows]
        return Matrix(self.rows + other.rows, self.cols, rows)

    def stack_right(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise LinalgError("row mismatch in horizontal stack")
        rows = []
        for r1, r2 in zip(self._rows, other._rows):
            r = dict(r1)
            for j, v in r2.items():
                r[j + self.cols] = v
            rows.append(r)
        return Matrix(self.rows, self.cols + other.cols, rows)

    def is_symmetric(self) -> bool:
        t = self.transpose()
        return self == t

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols})"


class SubspaceBasis:
    """A list of linearly independent coordinate vectors in a fixed ambient space."""

    __slots__ = ("ambient_dim", "vectors")

    def __init__(self, ambient_dim: int, vectors: Sequence[Sequence]):
        self.ambient_dim = ambient_dim
        self.vectors = [[rat(x) for x in v] for v in vectors]
        for v in self.vectors:
            if len(v) != ambient_dim:
                raise LinalgError("vector length != ambient_dim")

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def as_matrix(self) -> Matrix:
        """Vectors as columns (ambient_dim x dim)."""
        if not self.vectors:
            return Matrix.zeros(self.ambient_dim, 0)
        return Matrix.from_columns(self.vectors)

    def __repr__(self):
        return f"SubspaceBasis(dim={self.dim}, ambient={self.ambient_dim})"


# ---------------------------------------------------------------------------
# elimination core
# ---------------------------------------------------------------------------

def _sparse_rows(m: Matrix) -> list[dict]:
    return [dict(r) for r in m._rows]


def _eliminate(rows: list[dict], ncols: int, reduced: bool):
    """In-place sparse Gaussian elimination over the rationals.

    Columns are processed in natural order; among the remaining rows with a
    nonzero entry in the pivot column, the sparsest one (ties by original row
    index) is chosen to limit fill-in.  When `reduced` is set the result is
    normalized to reduced row echelon form, which is canonical and therefore
    independent of the pivot-row heuristic.

    Returns (pivot_cols, pivot_rows) where pivot_rows[k] is the dict for the
    row with pivot in pivot_cols[k].
    """
    remaining = list(range(len(rows)))
    pivot_cols: list[int] = []
    pivot_rows: list[dict] = []
    for col in range(ncols):
        best = None
        for ri in remaining:
            v = rows[ri].get(col)
            if v:
                key = (len(rows[ri]), ri)
                if best is None or key < best[0]:
                    best = (key, ri)
        if best is None:
            continue
        ri = best[1]
        remaining.remove(ri)
        piv = rows[ri]
        pv = piv[col]
        if pv != 1:
            piv = {c: v / pv for c, v in piv.items()}
            rows[ri] = piv
        for rj in remaining:
            r2 = rows[rj]
            f = r2.get(col)
            if f:
                for c, v in piv.items():
                    nv = r2.get(c, ZERO) - f * v
                    if nv:
                        r2[c] = nv
                    else:
                        r2.pop(c, None)
        pivot_cols.append(col)
        pivot_rows.append(piv)
    if reduced:
        for k in range(len(pivot_cols) - 1, -1, -1):
            col = pivot_cols[k]
            piv = pivot_rows[k]
            for j in range(k):
                r2 = pivot_rows[j]
                f = r2.get(col)
                if f:
                    for c, v in piv.items():
                        nv = r2.get(c, ZERO) - f * v
                        if nv:
                            r2[c] = nv
                        else:
                            r2.pop(c, None)
    return pivot_cols, pivot_rows


def rank(m: Matrix) -> int:
    """Exact rank."""
    rows = _sparse_rows(m)
    pivot_cols, _ = _eliminate(rows, m.cols, reduced=False)
    return len(pivot_cols)


def rref(m: Matrix) -> tuple[list[int], list[dict]]:
    """Canonical reduced row echelon form as (pivot columns, sparse pivot rows)."""
    rows = _sparse_rows(m)
    return _eliminate(rows, m.cols, reduced=True)


def kernel_basis(m: Matrix) -> SubspaceBasis:
    """Canonical basis of the right kernel {x : m x = 0}."""
    pivot_cols, pivot_rows = rref(m)
    pivot_set = set(pivot_cols)
    free_cols = [c for c in range(m.cols) if c not in pivot_set]
    vectors = []
    for fc in free_cols:
        v = [ZERO] * m.cols
        v[fc] = ONE
        for pc, row in zip(pivot_cols, pivot_rows):
            w = row.get(fc)
            if w:
                v[pc] = -w
        vectors.append(v)
    return SubspaceBasis(m.cols, vectors)


def row_space_basis(m: Matrix) -> SubspaceBasis:
    """Canonical basis of the row space (the nonzero RREF rows)."""
    pivot_cols, pivot_rows = rref(m)
    vectors = [[row.get(j, ZERO) for j in range(m.cols)] for row in pivot_rows]
    return SubspaceBasis(m.cols, vectors)


def image_basis(m: Matrix) -> SubspaceBasis:
    """Canonical basis of the column space."""
    return row_space_basis(m.transpose())


def solve(m: Matrix, b: Sequence) -> list[Rational] | None:
    """One exact solution of m x = b, or None when inconsistent."""
    aug = m.stack_right(Matrix.from_columns([list(b)]))
    pivot_cols, pivot_rows = rref(aug)
    bcol = m.cols
    x = [ZERO] * m.cols
    for pc, row in zip(pivot_cols, pivot_rows):
        if pc == bcol:
            return None
        x[pc] = row.get(bcol, ZERO)
    return x


def solve_many(m: Matrix, bs: Sequence[Sequence]) -> list[list[Rational]] | None:
    """Exact solutions of m x = b for several right-hand sides at once.

    Returns one solution per right-hand side, or None when any is
    inconsistent; a single elimination serves all of them.
    """
    bs = [list(b) for b in bs]
    if not bs:
        return []
    aug = m.stack_right(Matrix.from_columns(bs))
    pivot_cols, pivot_rows = rref(aug)
    bcol = m.cols
    xs = [[ZERO] * m.cols for _ in bs]
    for pc, row in zip(pivot_cols, pivot_rows):
        if pc >= bcol:
            return None
        for j in range(len(bs)):
            xs[j][pc] = row.get(bcol + j, ZERO)
    return xs


# ---------------------------------------------------------------------------
# subspace operations
# ---------------------------------------------------------------------------

def _check_ambient(a: SubspaceBasis, b: SubspaceBasis):
    if a.ambient_dim != b.ambient_dim:
        raise LinalgError("ambient dimension mismatch")


def subspace_sum(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    _check_ambient(a, b)
    if not a.vectors and not b.vectors:
        return SubspaceBasis(a.ambient_dim, [])
    stacked = Matrix.from_rows(a.vectors + b.vectors) if (a.vectors or b.vectors) else None
    return row_space_basis(stacked)


def subspace_intersection(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    """Zassenhaus-style intersection via the kernel of [A | B]."""
    _check_ambient(a, b)
    if not a.vectors or not b.vectors:
        return SubspaceBasis(a.ambient_dim, [])
    amat = a.as_matrix()
    bmat = b.as_matrix()
    ker = kernel_basis(amat.stack_right(bmat))
    vectors = []
    for k in ker.vectors:
        coeffs = k[: a.dim]
        v = [ZERO] * a.ambient_dim
        for c, vec in zip(coeffs, a.vectors):
            if c:
                for i, x in enumerate(vec):
                    if x:
                        v[i] += c * x
        vectors.append(v)
    if not vectors:
        return SubspaceBasis(a.ambient_dim, [])
    return row_space_basis(Matrix.from_rows(vectors))


def subspace_contains(s: SubspaceBasis, vector: Sequence) -> bool:
    vec = [rat(x) for x in vector]
    if len(vec) != s.ambient_dim:
        raise LinalgError("vector length != ambient_dim")
    if all(x == 0 for x in vec):
        return True
    if not s.vectors:
        return False
    return solve(s.as_matrix(), vec) is not None


def coordinates_in(s: SubspaceBasis, vector: Sequence) -> list[Rational] | None:
    """Coordinates of `vector` in the basis `s`, or None if outside the span."""
    if not s.vectors:
        return [] if all(rat(x) == 0 for x in vector) else None
    return solve(s.as_matrix(), [rat(x) for x in vector])


def quotient_coordinates(w: SubspaceBasis) -> Matrix:
    """Coordinate map ambient -> ambient/span(w).

    Returns a ((ambient - dim w) x ambient) matrix Q with ker Q = span(w);
    the quotient coordinates are the non-pivot ambient coordinates after
    reduction modulo the RREF of w, so the map is canonical.
    """
    n = w.ambient_dim
    if not w.vectors:
        return Matrix.identity(n)
    pivot_cols, pivot_rows = rref(w.as_matrix().transpose())
    pivot_set = set(pivot_cols)
    free_cols = [c for c in range(n) if c not in pivot_set]
    rows = []
    for fc in free_cols:
        r = {fc: ONE}
        for pc, prow in zip(pivot_cols, pivot_rows):
            v = prow.get(fc)
            if v:
                r[pc] = -v
        rows.append(r)
    return Matrix(len(free_cols), n, rows)


def gram_is_spd(gram: Matrix) -> bool:
    """Exact symmetric positive-definiteness test via rational LDL^T."""
    if gram.rows != gram.cols or not gram.is_symmetric():
        return False
    n = gram.rows
    rows = _sparse_rows(gram)
    for k in range(n):
        pivot = rows[k].get(k, ZERO)
        if pivot <= 0:
            return False
        prow = rows[k]
        for i in range(k + 1, n):
            f = rows[i].get(k)
            if f:
                f = f / pivot
                for c, v in prow.items():
                    if c < k:
                        continue
                    nv = rows[i].get(c, ZERO) - f * v
                    if nv:
                        rows[i][c] = nv
                    else:
                        rows[i].pop(c, None)
    return True


def orthogonal_complement(s: SubspaceBasis, gram: Matrix) -> SubspaceBasis:
    """Basis of {x : x^T gram v = 0 for all v in s} for an SPD gram."""
    if gram.rows != s.ambient_dim or gram.cols != s.ambient_dim:
        raise LinalgError("gram shape mismatch")
    if not gram_is_spd(gram):
        raise LinalgError("gram matrix is not symmetric positive-definite")
    if not s.vectors:
        return SubspaceBasis(s.ambient_dim, [[ONE if i == j else ZERO for j in range(s.ambient_dim)] for i in range(s.ambient_dim)])
    constraints = Matrix.from_rows(s.vectors) * gram
    return kernel_basis(constraints)
