"""Constructors for the two symbol families and their envelopes.

Both families are built from explicit matrix realizations with exact
rational (or complex-rational) arithmetic:

* contact family: Heisenberg symbol g- = R z + C^n with [u, v] = omega(u,v) z,
  g0 = u(n), envelope su(n+1,1) realized as 3x3-block complex matrices;
* free two-step family: g- = R^m + so(m)-shaped second layer,
  g0 = so(m), envelope so(m+1,m) realized as 3x3-block real matrices.

Structure constants are obtained by commutators in the realization and
coordinates are read off block by block, so the bracket tables agree with
the matrix realization entry for entry by construction; the test suite
re-derives the same commutators independently.

Basis ordering is fixed (second layer lexicographic, then first layer, then
g0, then the remaining degree-0 part, then positive degrees) so that g sits
as a coordinate prefix inside the envelope and outputs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .linalg import Matrix, Rational, SubspaceBasis, ZERO, ONE, rat
from .lie_core import GradedLieAlgebra, InnerProduct, Representation, restricted_adjoint


class CatalogError(ValueError):
    pass


# ---------------------------------------------------------------------------
# complex-rational matrices (pairs of exact real matrices)
# ---------------------------------------------------------------------------

class CMatrix:
    """Complex matrix with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Matrix, im: Matrix):
        if (re.rows, re.cols) != (im.rows, im.cols):
            raise CatalogError("re/im shape mismatch")
        self.re = re
        self.im = im

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "CMatrix":
        m = n if m is None else m
        return cls(Matrix.zeros(n, m), Matrix.zeros(n, m))

    @classmethod
    def from_entries(cls, entries: dict[tuple[int, int], tuple], n: int) -> "CMatrix":
        re_rows = [dict() for _ in range(n)]
        im_rows = [dict() for _ in range(n)]
        for (i, j), (a, b) in entries.items():
            a, b = rat(a), rat(b)
            if a:
                re_rows[i][j] = a
            if b:
                im_rows[i][j] = b
        return cls(Matrix(n, n, re_rows), Matrix(n, n, im_rows))

    def __add__(self, other):
        return CMatrix(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return CMatrix(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        return CMatrix(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def commutator(self, other):
        return self * other - other * self

    def scale(self, a, b=0):
        a, b = rat(a), rat(b)
        return CMatrix(self.re.scale(a) - self.im.scale(b), self.re.scale(b) + self.im.scale(a))

    def conj_transpose(self):
        return CMatrix(self.re.transpose(), self.im.transpose().scale(-1))

    def entry(self, i, j):
        return (self.re.entry(i, j), self.im.entry(i, j))

    def is_zero(self):
        return self.re.is_zero() and self.im.is_zero()

    def __eq__(self, other):
        return isinstance(other, CMatrix) and self.re == other.re and self.im == other.im

    def frobenius(self, other) -> Rational:
        """Re tr(self . other^dagger); invariant under the compact part."""
        tot = ZERO
        for mat_a, mat_b in ((self.re, other.re), (self.im, other.im)):
            for i, row in enumerate(mat_a._rows):
                for j, v in row.items():
                    w = mat_b._rows[i].get(j)
                    if w:
                        tot += v * w
        return tot


def _real_frobenius(a: Matrix, b: Matrix) -> Rational:
    tot = ZERO
    for i, row in enumerate(a._rows):
        for j, v in row.items():
            w = b._rows[i].get(j)
            if w:
                tot += v * w
    return tot


# ---------------------------------------------------------------------------
# package container
# ---------------------------------------------------------------------------

@dataclass
class SymbolPackage:
    """One catalog entry: symbol, its metric extension g, and the envelope."""

    family: str                      # "contact" | "free"
    param: int                       # n (contact) or m (free)
    symbol: GradedLieAlgebra         # g-
    g: GradedLieAlgebra              # g- + g0
    envelope: GradedLieAlgebra       # the ambient graded algebra
    embedding: list[int]             # envelope indices of the g basis (coordinate inclusion)
    metric: InnerProduct             # on g- (declared basis orthonormal)
    envelope_gram: InnerProduct      # g0-invariant product on the envelope basis
    complex_structure: Optional[Matrix]   # J on the first layer (contact only)
    realization: list                # matrix per envelope basis element (CMatrix or Matrix)

    @property
    def dim_symbol(self) -> int:
        return self.symbol.dim

    @property
    def g0_indices(self) -> list[int]:
        """Envelope indices of g0 (the non-negative part of the embedded g)."""
        return [gi for gi in self.embedding if self.envelope.degree(gi) == 0]

    @property
    def negative_indices(self) -> list[int]:
        return [gi for gi in self.embedding if self.envelope.degree(gi) < 0]

    def identifier(self) -> str:
        return f"{'heisenberg' if self.family == 'contact' else 'free'}:{self.param}"

    def envelope_module(self) -> Representation:
        """The envelope as a module over the embedded g."""
        return restricted_adjoint(self.envelope, self.embedding, sub_name=f"g[{self.identifier()}]")

    def adjoint_module(self) -> Representation:
        """g as a module over itself."""
        return restricted_adjoint(self.g, list(range(self.g.dim)), sub_name=f"g[{self.identifier()}]")

    def g_gram(self) -> InnerProduct:
        """Restriction of the envelope product to the embedded g."""
        rows = []
        for gi in self.embedding:
            rows.append({k: self.envelope_gram.gram.entry(gi, gj) for k, gj in enumerate(self.embedding)})
        rows = [{k: v for k, v in r.items() if v} for r in rows]
        return InnerProduct(Matrix(self.g.dim, self.g.dim, rows))


# ---------------------------------------------------------------------------
# contact family: Heisenberg symbol inside su(n+1,1)
# ---------------------------------------------------------------------------

def _su_basis(n: int) -> list[CMatrix]:
    """Standard basis of su(n): E_jk - E_kj, i(E_jk + E_kj) (j<k), i(E_jj - E_(j+1)(j+1))."""
    out = []
    for j in range(n):
        for k in range(j + 1, n):
            out.append(CMatrix.from_entries({(j, k): (1, 0), (k, j): (-1, 0)}, n))
    for j in range(n):
        for k in range(j + 1, n):
            out.append(CMatrix.from_entries({(j, k): (0, 1), (k, j): (0, 1)}, n))
    for j in range(n - 1):
        out.append(CMatrix.from_entries({(j, j): (0, 1), (j + 1, j + 1): (0, -1)}, n))
    return out


def _su_coords(a: CMatrix, n: int) -> list[Rational]:
    """Coordinates of a traceless anti-Hermitian matrix in the _su_basis order."""
    coords = []
    for j in range(n):
        for k in range(j + 1, n):
            coords.append(a.re.entry(j, k))
    for j in range(n):
        for k in range(j + 1, n):
            coords.append(a.im.entry(j, k))
    prefix = ZERO
    for j in range(n - 1):
        prefix += a.im.entry(j, j)
        coords.append(prefix)
    return coords


def _contact_element(n: int, *, alpha=0, x_re=None, x_im=None, su=None, mu=0, lam=0,
                     y_re=None, y_im=None, beta=0) -> CMatrix:
    """Assemble an su(n+1,1) element in its standard block presentation."""
    N = n + 2
    x_re = x_re or [0] * n
    x_im = x_im or [0] * n
    y_re = y_re or [0] * n
    y_im = y_im or [0] * n
    entries: dict = {}
    lam, mu, alpha, beta = rat(lam), rat(mu), rat(alpha), rat(beta)
    entries[(0, 0)] = (lam, mu)
    entries[(N - 1, N - 1)] = (-lam, mu)
    entries[(N - 1, 0)] = (0, alpha)
    entries[(0, N - 1)] = (0, beta)
    for j in range(n):
        xr, xi = rat(x_re[j]), rat(x_im[j])
        if xr or xi:
            entries[(j + 1, 0)] = (xr, xi)
            # -x^* in the bottom row
            entries[(N - 1, j + 1)] = (-xr, xi)
        yr, yi = rat(y_re[j]), rat(y_im[j])
        if yr or yi:
            entries[(j + 1, N - 1)] = (yr, yi)
            entries[(0, j + 1)] = (-yr, yi)
    m = CMatrix.from_entries(entries, N)
    # middle block: A - (2i/n) mu I with A in su(n)
    shift = mu * rat(2) / rat(n)
    mid: dict = {}
    if su is not None:
        for (j, k), (a, b) in su.items():
            mid[(j + 1, k + 1)] = (rat(a), rat(b))
    m2 = CMatrix.from_entries(mid, N)
    m = m + m2
    if shift:
        diag = {(j + 1, j + 1): (0, -shift) for j in range(n)}
        m = m + CMatrix.from_entries(diag, N)
    return m


def heisenberg_contact(n: int) -> SymbolPackage:
    """Maximally symmetric contact symbol of dimension 2n+1 inside su(n+1,1)."""
    if n < 1:
        raise CatalogError("contact family needs n >= 1")
    N = n + 2
    su = _su_basis(n)

    def xvec(j, imag):
        v = [0] * n
        v[j] = 1
        return _contact_element(n, x_re=None if imag else v, x_im=v if imag else None)

    def yvec(j, imag):
        v = [0] * n
        v[j] = 1
        return _contact_element(n, y_re=None if imag else v, y_im=v if imag else None)

    e_mats = [xvec(j, False) for j in range(n)]
    je_mats = [xvec(j, True) for j in range(n)]
    z_mat = e_mats[0].commutator(je_mats[0])

    su_mats = []
    for b in su:
        entries = {(j, k): b.entry(j, k) for j in range(n) for k in range(n)}
        su_mats.append(_contact_element(n, su=entries))
    mu_mat = _contact_element(n, mu=1)
    e_grading = _contact_element(n, lam=1)
    f_mats = [yvec(j, False) for j in range(n)]
    jf_mats = [yvec(j, True) for j in range(n)]
    beta_mat = _contact_element(n, beta=1)

    names: list[tuple[str, int]] = [("z", -2)]
    mats: list[CMatrix] = [z_mat]
    for j in range(n):
        names.append((f"e{j + 1}", -1))
        mats.append(e_mats[j])
    for j in range(n):
        names.append((f"Je{j + 1}", -1))
        mats.append(je_mats[j])
    su_names = []
    for j in range(n):
        for k in range(j + 1, n):
            su_names.append(f"F{j + 1}{k + 1}")
    for j in range(n):
        for k in range(j + 1, n):
            su_names.append(f"G{j + 1}{k + 1}")
    for j in range(n - 1):
        su_names.append(f"H{j + 1}")
    for nm, m in zip(su_names, su_mats):
        names.append((nm, 0))
        mats.append(m)
    names.append(("mu", 0))
    mats.append(mu_mat)
    names.append(("E", 0))
    mats.append(e_grading)
    for j in range(n):
        names.append((f"f{j + 1}", 1))
        mats.append(f_mats[j])
    for j in range(n):
        names.append((f"Jf{j + 1}", 1))
        mats.append(jf_mats[j])
    names.append(("beta", 2))
    mats.append(beta_mat)

    z_alpha = z_mat.entry(N - 1, 0)[1]
    if z_alpha == 0:
        raise CatalogError("degenerate central element")

    def coords(m: CMatrix) -> dict:
        out: dict = {}
        alpha = m.entry(N - 1, 0)[1]
        if alpha:
            out[0] = alpha / z_alpha
        for j in range(n):
            xr, xi = m.entry(j + 1, 0)
            if xr:
                out[1 + j] = xr
            if xi:
                out[1 + n + j] = xi
        lam, mu = m.entry(0, 0)
        shift = mu * rat(2) / rat(n)
        a_entries = {}
        for j in range(n):
            for k in range(n):
                ar, ai = m.entry(j + 1, k + 1)
                if j == k:
                    ai = ai + shift
                a_entries[(j, k)] = (ar, ai)
        a_mat = CMatrix.from_entries(a_entries, n)
        base = 1 + 2 * n
        for idx, c in enumerate(_su_coords(a_mat, n)):
            if c:
                out[base + idx] = c
        nsu = len(su)
        if mu:
            out[base + nsu] = mu
        if lam:
            out[base + nsu + 1] = lam
        for j in range(n):
            yr, yi = m.entry(j + 1, N - 1)
            if yr:
                out[base + nsu + 2 + j] = yr
            if yi:
                out[base + nsu + 2 + n + j] = yi
        beta = m.entry(0, N - 1)[1]
        if beta:
            out[base + nsu + 2 + 2 * n] = beta
        return out

    envelope = _algebra_from_realization(f"su({n + 1},1)", names, mats, coords)

    dim_g = 1 + 2 * n + n * n
    embedding = list(range(dim_g))
    g = envelope.subalgebra(embedding, f"heisenberg:{n} g")
    symbol = envelope.subalgebra(list(range(1 + 2 * n)), f"heisenberg:{n} symbol")

    # z = [e_i, J e_i] must not depend on i
    for j in range(1, n):
        if not e_mats[j].commutator(je_mats[j]).__eq__(z_mat):
            raise CatalogError("central element depends on the index")

    j_rows = [dict() for _ in range(2 * n)]
    for j in range(n):
        j_rows[n + j][j] = ONE       # J e_j = Je_j
        j_rows[j][n + j] = -ONE      # J (Je_j) = -e_j
    jmat = Matrix(2 * n, 2 * n, j_rows)

    gram = _frobenius_gram(mats)
    return SymbolPackage(
        family="contact",
        param=n,
        symbol=symbol,
        g=g,
        envelope=envelope,
        embedding=embedding,
        metric=InnerProduct(Matrix.identity(symbol.dim)),
        envelope_gram=InnerProduct(gram),
        complex_structure=jmat,
        realization=mats,
    )


def _frobenius_gram(mats) -> Matrix:
    dim = len(mats)
    rows = [dict() for _ in range(dim)]
    for i in range(dim):
        for j in range(i, dim):
            if isinstance(mats[i], CMatrix):
                v = mats[i].frobenius(mats[j])
            else:
                v = _real_frobenius(mats[i], mats[j])
            if v:
                rows[i][j] = v
                if i != j:
                    rows[j][i] = v
    return Matrix(dim, dim, rows)


def _algebra_from_realization(name, names, mats, coords) -> GradedLieAlgebra:
    dim = len(mats)
    table = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            if isinstance(mats[i], CMatrix):
                c = mats[i].commutator(mats[j])
                if c.is_zero():
                    continue
            else:
                c = mats[i] * mats[j] - mats[j] * mats[i]
                if c.is_zero():
                    continue
            vec = coords(c)
            # extraction is verified by reconstructing the matrix
            recon = None
            for k, v in vec.items():
                term = mats[k].scale(v)
                recon = term if recon is None else recon + term
            if recon is None or not (recon.__eq__(c) if isinstance(c, CMatrix) else recon == c):
                raise CatalogError(f"{name}: commutator of {names[i][0]}, {names[j][0]} "
                                   "does not lie in the basis span")
            table[(i, j)] = vec
    return GradedLieAlgebra(name, names, table)


# ---------------------------------------------------------------------------
# free two-step family: symbol inside so(m+1,m)
# ---------------------------------------------------------------------------

def _skew_pairs(m: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(m) for j in range(i + 1, m)]


def _free_block(m: int, *, A=None, X=None, Y=None, Z=None, T=None) -> Matrix:
    """so(m+1,m) block matrix [[A, X, Y], [Z, 0, -X^t], [T, -Z^t, -A^t]]."""
    n = 2 * m + 1
    rows = [dict() for _ in range(n)]
    if A is not None:
        for (i, j), v in A.items():
            v = rat(v)
            if v:
                rows[i][j] = rows[i].get(j, ZERO) + v
                rows[m + 1 + j][m + 1 + i] = rows[m + 1 + j].get(m + 1 + i, ZERO) - v
    if X is not None:
        for i, v in enumerate(X):
            v = rat(v)
            if v:
                rows[i][m] = v
                rows[m][m + 1 + i] = -v
    if Z is not None:
        for j, v in enumerate(Z):
            v = rat(v)
            if v:
                rows[m][j] = v
                rows[m + 1 + j][m] = -v
    if Y is not None:
        for (i, j), v in Y.items():
            v = rat(v)
            if v:
                rows[i][m + 1 + j] = rows[i].get(m + 1 + j, ZERO) + v
    if T is not None:
        for (i, j), v in T.items():
            v = rat(v)
            if v:
                rows[m + 1 + i][j] = rows[m + 1 + i].get(j, ZERO) + v
    rows = [{k: v for k, v in r.items() if v} for r in rows]
    return Matrix(n, n, rows)


def free_two_step(m: int) -> SymbolPackage:
    """Free two-step symbol of rank m inside so(m+1,m)."""
    if m < 3:
        raise CatalogError("free family needs m >= 3")
    pairs = _skew_pairs(m)

    # second layer: [e_i, e_j] = e_[ij]; commutator gives Y = E_ji - E_ij
    e2_mats = [_free_block(m, Y={(j, i): 1, (i, j): -1}) for (i, j) in pairs]
    e1_mats = [_free_block(m, X=[1 if k == i else 0 for k in range(m)]) for i in range(m)]
    s_mats = [_free_block(m, A={(j, i): 1, (i, j): -1}) for (i, j) in pairs]
    sym_pairs = [(i, j) for i in range(m) for j in range(i, m)]
    sym_mats = []
    for (i, j) in sym_pairs:
        if i == j:
            sym_mats.append(_free_block(m, A={(i, i): 1}))
        else:
            sym_mats.append(_free_block(m, A={(i, j): 1, (j, i): 1}))
    f_mats = [_free_block(m, Z=[1 if k == j else 0 for k in range(m)]) for j in range(m)]
    t_mats = [_free_block(m, T={(j, i): 1, (i, j): -1}) for (i, j) in pairs]

    names: list[tuple[str, int]] = []
    mats: list[Matrix] = []
    for (i, j) in pairs:
        names.append((f"e[{i + 1},{j + 1}]", -2))
    mats.extend(e2_mats)
    for i in range(m):
        names.append((f"e{i + 1}", -1))
    mats.extend(e1_mats)
    for (i, j) in pairs:
        names.append((f"s[{i + 1},{j + 1}]", 0))
    mats.extend(s_mats)
    for (i, j) in sym_pairs:
        names.append((f"m[{i + 1},{j + 1}]", 0))
    mats.extend(sym_mats)
    for j in range(m):
        names.append((f"f{j + 1}", 1))
    mats.extend(f_mats)
    for (i, j) in pairs:
        names.append((f"F[{i + 1},{j + 1}]", 2))
    mats.extend(t_mats)

    npairs = len(pairs)
    pair_pos = {p: k for k, p in enumerate(pairs)}
    sym_pos = {p: k for k, p in enumerate(sym_pairs)}

    def coords(mat: Matrix) -> dict:
        out: dict = {}
        for (i, j), k in pair_pos.items():
            v = mat.entry(j, m + 1 + i)      # Y[j][i]
            if v:
                out[k] = v
        for i in range(m):
            v = mat.entry(i, m)
            if v:
                out[npairs + i] = v
        base0 = npairs + m
        for (i, j), k in pair_pos.items():
            a_ij = mat.entry(i, j)
            a_ji = mat.entry(j, i)
            skew = (a_ji - a_ij) / 2
            symv = (a_ij + a_ji) / 2
            if skew:
                out[base0 + k] = skew
            if symv:
                out[base0 + npairs + sym_pos[(i, j)]] = symv
        for i in range(m):
            v = mat.entry(i, i)
            if v:
                out[base0 + npairs + sym_pos[(i, i)]] = v
        base1 = base0 + npairs + len(sym_pairs)
        for j in range(m):
            v = mat.entry(m, j)
            if v:
                out[base1 + j] = v
        for (i, j), k in pair_pos.items():
            v = mat.entry(m + 1 + j, i)      # T[j][i]
            if v:
                out[base1 + m + k] = v
        return out

    envelope = _algebra_from_realization(f"so({m + 1},{m})", names, mats, coords)

    dim_g = npairs + m + npairs
    embedding = list(range(dim_g))
    g = envelope.subalgebra(embedding, f"free:{m} g")
    symbol = envelope.subalgebra(list(range(npairs + m)), f"free:{m} symbol")

    gram = _frobenius_gram(mats)
    return SymbolPackage(
        family="free",
        param=m,
        symbol=symbol,
        g=g,
        envelope=envelope,
        embedding=embedding,
        metric=InnerProduct(Matrix.identity(symbol.dim)),
        envelope_gram=InnerProduct(gram),
        complex_structure=None,
        realization=mats,
    )


# ---------------------------------------------------------------------------
# filtration submodules and catalog identifiers
# ---------------------------------------------------------------------------

def filtration_submodule(pkg: SymbolPackage, i: int) -> SubspaceBasis:
    """Envelope subspace g + bar(g)_1 + ... + bar(g)_i, i >= -1, as unit vectors."""
    top = max(pkg.envelope.degree(k) for k in range(pkg.envelope.dim))
    if i < -1 or i > top:
        raise CatalogError(f"filtration index {i} out of range [-1, {top}]")
    indices = list(pkg.embedding)
    for k in range(pkg.envelope.dim):
        d = pkg.envelope.degree(k)
        if 0 <= d <= i and k not in indices:
            indices.append(k)
        elif d == 0 and k not in indices and i >= 0:
            indices.append(k)
    indices = sorted(set(indices))
    vectors = []
    for k in indices:
        v = [ZERO] * pkg.envelope.dim
        v[k] = ONE
        vectors.append(v)
    return SubspaceBasis(pkg.envelope.dim, vectors)


def from_identifier(identifier: str) -> SymbolPackage:
    """Parse `heisenberg:<n>` or `free:<m>`."""
    try:
        kind, num = identifier.split(":")
        num = int(num)
    except ValueError as exc:
        raise CatalogError(f"bad catalog identifier {identifier!r}") from exc
    if kind == "heisenberg":
        return heisenberg_contact(num)
    if kind == "free":
        return free_two_step(num)
    raise CatalogError(f"unknown catalog family {kind!r}")


# ---------------------------------------------------------------------------
# filtered deformations (homogeneous models)
# ---------------------------------------------------------------------------

@dataclass
class FilteredDeformation:
    """A filtered Lie bracket on the vector space of g whose graded part is g."""

    base: SymbolPackage
    label: str
    parameter: Rational              # deformation scale (t^2 coefficient with sign)
    table: list                      # table[i][j]: sparse coords of deformed [b_i, b_j]

    def bracket_basis(self, i: int, j: int) -> dict:
        return self.table[i][j]

    def jacobi_violations(self) -> list[str]:
        g = self.base.g
        n = g.dim
        errs = []

        def acc(out, left, k, sign):
            for t, c in left.items():
                for s, d in self.table[t][k].items():
                    nv = out.get(s, ZERO) + sign * c * d
                    if nv:
                        out[s] = nv
                    else:
                        out.pop(s, None)

        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    out: dict = {}
                    acc(out, self.table[i][j], k, 1)
                    acc(out, self.table[j][k], i, 1)
                    acc(out, self.table[k][i], j, 1)
                    if out:
                        errs.append(f"Jacobi fails on ({g.basis_name(i)}, {g.basis_name(j)}, {g.basis_name(k)})")
        return errs

    def filtration_violations(self) -> list[str]:
        """[F_i, F_j] subset F_(i+j) with F_d spanned by degrees >= d."""
        g = self.base.g
        errs = []
        for i in range(g.dim):
            for j in range(g.dim):
                d = g.degree(i) + g.degree(j)
                for k, v in self.table[i][j].items():
                    if v and g.degree(k) < d:
                        errs.append(
                            f"filtration fails on [{g.basis_name(i)}, {g.basis_name(j)}]"
                        )
                        break
        return errs

    def leading_term_violations(self) -> list[str]:
        """The degree (i+j)-component of the deformed bracket must be the graded one."""
        g = self.base.g
        errs = []
        for i in range(g.dim):
            for j in range(g.dim):
                d = g.degree(i) + g.degree(j)
                lead = {k: v for k, v in self.table[i][j].items() if g.degree(k) == d}
                if lead != dict(g.bracket_basis(i, j)):
                    errs.append(
                        f"leading term differs on [{g.basis_name(i)}, {g.basis_name(j)}]"
                    )
        return errs


def _pair_mats(a, b):
    return (a, b)


def _free_model_deformation(pkg: SymbolPackage, epsilon: int, t: Rational, label: str) -> FilteredDeformation:
    """Deformed bracket from so(m+1) (+) so(m) (epsilon=+1) or so(1,m) (+) so(m)."""
    m = pkg.param
    pairs = _skew_pairs(m)
    t = rat(t)
    t2 = t * t

    def mv(v):
        # [[0, -eps v^t], [v, 0]] in the (1+m)-block form
        rows = [dict() for _ in range(m + 1)]
        for i, x in enumerate(v):
            x = rat(x)
            if x:
                rows[0][1 + i] = -epsilon * x
                rows[1 + i][0] = x
        return Matrix(m + 1, m + 1, rows)

    def emb(a: Matrix):
        rows = [dict() for _ in range(m + 1)]
        for i, r in enumerate(a._rows):
            for j, v in r.items():
                rows[1 + i][1 + j] = v
        return Matrix(m + 1, m + 1, rows)

    def skew(i, j):
        return Matrix(m, m, [({j: ONE} if r == i else ({i: -ONE} if r == j else {})) for r in range(m)])

    # lifted basis, ordered exactly like the g basis of the catalog
    lifts = []
    for (i, j) in pairs:   # second layer: -eps t^2 / 2 * (W_ij, -W_ij), W_ij = E_ij - E_ji
        w = skew(i, j)
        lifts.append(_pair_mats(emb(w).scale(-rat(epsilon) * t2 / 2), w.scale(rat(epsilon) * t2 / 2)))
    for i in range(m):
        v = [1 if k == i else 0 for k in range(m)]
        lifts.append(_pair_mats(mv(v).scale(t), Matrix.zeros(m, m)))
    for (i, j) in pairs:   # g0: s[i,j] has A = E_ji - E_ij, embedded diagonally
        w = skew(j, i)
        lifts.append(_pair_mats(emb(w), w))

    pair_pos = {p: k for k, p in enumerate(pairs)}
    npairs = len(pairs)

    def decompose(p: Matrix, q: Matrix) -> dict:
        out: dict = {}
        v = [p.entry(1 + i, 0) / t for i in range(m)]
        p1 = p - mv([x for x in v]).scale(t)
        for i, x in enumerate(v):
            if x:
                out[npairs + i] = x
        a1 = Matrix(m, m, [{j - 1: w for j, w in p1._rows[1 + i].items() if j >= 1} for i in range(m)])
        # a1 = C + (-eps t^2/2) D, q = C + (eps t^2/2) D
        d = (q - a1).scale(rat(epsilon) / t2)
        c = (q + a1).scale(rat("1/2"))
        for (i, j), k in pair_pos.items():
            w = d.entry(i, j)
            if w:
                out[k] = w
            w2 = c.entry(j, i)
            if w2:
                out[npairs + m + k] = w2
        return out

    return _deformation_from_lifts(pkg, label, rat(epsilon) * t2, lifts, decompose,
                                   lambda a, b: (a[0] * b[0] - b[0] * a[0], a[1] * b[1] - b[1] * a[1]),
                                   lambda a: a[0].is_zero() and a[1].is_zero())


def _contact_model_deformation(pkg: SymbolPackage, epsilon: int, t: Rational, label: str) -> FilteredDeformation:
    """Deformed bracket from u(n+1) (epsilon=+1) or u(1,n)."""
    n = pkg.param
    t = rat(t)
    t2 = t * t

    def vmat(w_re, w_im):
        entries = {}
        for i in range(n):
            a, b = rat(w_re[i]), rat(w_im[i])
            if a or b:
                entries[(1 + i, 0)] = (a, b)
                entries[(0, 1 + i)] = (-epsilon * a, epsilon * b)
        return CMatrix.from_entries(entries, n + 1)

    def uemb(u: CMatrix):
        entries = {}
        for i in range(n):
            for j in range(n):
                a, b = u.entry(i, j)
                if a or b:
                    entries[(1 + i, 1 + j)] = (a, b)
        return CMatrix.from_entries(entries, n + 1)

    # complex form of the catalog g0 action on the first layer
    g0_indices = pkg.g0_indices
    g0_complex = []
    for gi in g0_indices:
        # action on g_{-1}: read off [b, e_j] and [b, Je_j] from the envelope table
        u_entries = {}
        for j in range(n):
            vec = pkg.envelope.bracket_basis(gi, 1 + j)  # [b, e_j]
            for k, c in vec.items():
                if 1 <= k <= n:
                    a0, b0 = u_entries.get((k - 1, j), (ZERO, ZERO))
                    u_entries[(k - 1, j)] = (a0 + c, b0)
                elif n + 1 <= k <= 2 * n:
                    a0, b0 = u_entries.get((k - 1 - n, j), (ZERO, ZERO))
                    u_entries[(k - 1 - n, j)] = (a0, b0 + c)
                else:
                    raise CatalogError("g0 does not preserve the first layer")
        g0_complex.append(CMatrix.from_entries(u_entries, n))

    def ebasis(j, imag):
        v = [0] * n
        v[j] = 1
        return vmat([0] * n if imag else v, v if imag else [0] * n)

    zc = ebasis(0, False).commutator(ebasis(0, True))
    # m-part of z: strip the u(n) block
    z_u = CMatrix.from_entries({(i, j): zc.entry(1 + i, 1 + j) for i in range(n) for j in range(n)}, n)
    z_m = zc - uemb(z_u)

    lifts: list[CMatrix] = [z_m.scale(t2)]
    for j in range(n):
        lifts.append(ebasis(j, False).scale(t))
    for j in range(n):
        lifts.append(ebasis(j, True).scale(t))
    for u in g0_complex:
        lifts.append(uemb(u))

    z_scale = z_m.entry(0, 0)[1] * t2   # imaginary part of the top-left entry of L(z)
    if z_scale == 0:
        raise CatalogError("degenerate contact deformation")

    # matrix that sends g0 coordinates to stacked (re, im) entries of U
    g0_cols = []
    for u in g0_complex:
        col = []
        for i in range(n):
            for j in range(n):
                a, b = u.entry(i, j)
                col.extend([a, b])
        g0_cols.append(col)
    g0_mat = Matrix.from_columns(g0_cols)

    from .linalg import solve as _solve

    def decompose(x: CMatrix) -> dict:
        out: dict = {}
        for i in range(n):
            a, b = x.entry(1 + i, 0)
            a, b = a / t, b / t
            if a:
                out[1 + i] = a
            if b:
                out[1 + n + i] = b
        w_re = [x.entry(1 + i, 0)[0] / t for i in range(n)]
        w_im = [x.entry(1 + i, 0)[1] / t for i in range(n)]
        x1 = x - vmat(w_re, w_im).scale(t)
        u_part = CMatrix.from_entries({(i, j): x1.entry(1 + i, 1 + j) for i in range(n) for j in range(n)}, n)
        target = []
        for i in range(n):
            for j in range(n):
                a, b = u_part.entry(i, j)
                target.extend([a, b])
        sol = _solve(g0_mat, target)
        if sol is None:
            raise CatalogError("deformation bracket leaves the model span")
        for k, v in enumerate(sol):
            if v:
                out[1 + 2 * n + k] = v
        x2 = x1 - uemb(u_part)
        zc_val = x2.entry(0, 0)[1]
        if zc_val:
            out[0] = zc_val / z_scale
        residual = x2 - z_m.scale(t2).scale(zc_val / z_scale)
        if not residual.is_zero():
            raise CatalogError("deformation bracket leaves the model span")
        return out

    return _deformation_from_lifts(pkg, label, rat(epsilon) * t2, lifts, decompose,
                                   lambda a, b: a.commutator(b),
                                   lambda a: a.is_zero())


def _deformation_from_lifts(pkg, label, parameter, lifts, decompose, comm, is_zero) -> FilteredDeformation:
    dim = pkg.g.dim
    table = [[{} for _ in range(dim)] for _ in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            c = comm(lifts[i], lifts[j])
            if is_zero(c):
                continue
            if isinstance(c, tuple):
                vec = decompose(c[0], c[1])
            else:
                vec = decompose(c)
            table[i][j] = vec
            table[j][i] = {k: -v for k, v in vec.items()}
    return FilteredDeformation(base=pkg, label=label, parameter=parameter, table=table)


def flat_deformation(pkg: SymbolPackage) -> FilteredDeformation:
    dim = pkg.g.dim
    table = [[dict(pkg.g.bracket_basis(i, j)) for j in range(dim)] for i in range(dim)]
    return FilteredDeformation(base=pkg, label="model:flat", parameter=ZERO, table=table)


def model_deformations(pkg: SymbolPackage, t: Rational | int = 1) -> list[FilteredDeformation]:
    """The catalog homogeneous models: flat, compact and split forms."""
    t = rat(t)
    if pkg.family == "free":
        return [
            flat_deformation(pkg),
            _free_model_deformation(pkg, +1, t, "model:compact"),
            _free_model_deformation(pkg, -1, t, "model:split"),
        ]
    if pkg.family == "contact":
        return [
            flat_deformation(pkg),
            _contact_model_deformation(pkg, +1, t, "model:compact"),
            _contact_model_deformation(pkg, -1, t, "model:split"),
        ]
    raise CatalogError(f"no models for family {pkg.family!r}")
