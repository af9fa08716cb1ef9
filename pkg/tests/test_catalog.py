import pytest
import sympy as sp

from gnlc.catalog import (
    CatalogError,
    filtration_submodule,
    from_identifier,
    model_deformations,
)
from gnlc.lie_core import validate
from gnlc.linalg import rat


def test_identifier_parsing():
    assert from_identifier("heisenberg:2").identifier() == "heisenberg:2"
    assert from_identifier("free:3").identifier() == "free:3"
    with pytest.raises(CatalogError):
        from_identifier("nope")
    with pytest.raises(CatalogError):
        from_identifier("heisenberg")


@pytest.mark.parametrize("n", (2, 3))
def test_contact_dimensions(packages, n):
    pkg = packages[f"heisenberg:{n}"]
    assert pkg.symbol.dim == 2 * n + 1
    assert pkg.g.dim == 2 * n + 1 + n * n          # g- + u(n)
    assert pkg.envelope.dim == (n + 2) ** 2 - 1    # su(n+1,1)
    assert pkg.complex_structure is not None
    j = pkg.complex_structure
    assert (j * j).scale(-1).is_zero() is False    # J^2 = -1, not 0
    from gnlc.linalg import Matrix
    assert j * j == Matrix.identity(2 * n).scale(-1)


@pytest.mark.parametrize("m", (3, 4, 5))
def test_free_dimensions(packages, m):
    pkg = packages[f"free:{m}"]
    assert pkg.symbol.dim == m + m * (m - 1) // 2
    assert pkg.g.dim == pkg.symbol.dim + m * (m - 1) // 2   # g- + so(m)
    assert pkg.envelope.dim == m * (2 * m + 1)              # so(m+1, m)


def test_all_algebras_validate(packages):
    for pkg in packages.values():
        assert validate(pkg.symbol, symbol_algebra=True).ok
        assert validate(pkg.g).ok
        assert validate(pkg.envelope).ok


def test_metric_and_envelope_gram(packages):
    for pkg in packages.values():
        assert pkg.metric.check_spd()
        mats = [pkg.envelope.ad_matrix(i) for i in pkg.g0_indices]
        assert pkg.envelope_gram.is_invariant_under(mats)


def test_filtration_submodule_dims(packages):
    pkg = packages["heisenberg:2"]
    env = pkg.envelope
    base = filtration_submodule(pkg, -1)
    assert base.dim == pkg.g.dim
    prev = base.dim
    for i in range(0, max(env.degrees()) + 1):
        cur = filtration_submodule(pkg, i).dim
        assert cur >= prev
        prev = cur
    assert prev == env.dim


def test_model_deformations_are_filtered_lie_brackets(packages):
    for pkg in packages.values():
        defs = model_deformations(pkg)
        assert [d.label for d in defs] == ["model:flat", "model:compact", "model:split"]
        for d in defs:
            assert d.jacobi_violations() == []
            assert d.filtration_violations() == []
            assert d.leading_term_violations() == []


def test_flat_deformation_is_graded(packages):
    pkg = packages["free:3"]
    flat = model_deformations(pkg)[0]
    g = pkg.g
    for i in range(g.dim):
        for j in range(g.dim):
            assert flat.bracket_basis(i, j) == g.bracket_basis(i, j)


def test_free_compact_mixes_layers(packages):
    # the deformed bracket of two first-layer elements gains a degree-0 part
    pkg = packages["free:3"]
    compact = model_deformations(pkg)[1]
    g = pkg.g
    i = g.index_of("e1")
    j = g.index_of("e2")
    degs = {g.degree(t) for t in compact.bracket_basis(i, j)}
    assert degs == {-2, 0}


# ---------------------------------------------------------------------------
# independent oracle: structure constants from matrix commutators via sympy
# ---------------------------------------------------------------------------

def _sympy_matrices(pkg):
    out = []
    for mat in pkg.realization:
        if hasattr(mat, "re"):  # complex block pair
            re, im = mat.re, mat.im
            out.append(sp.ImmutableMatrix(
                re.rows, re.cols,
                lambda i, j: sp.Rational(str(re.entry(i, j)))
                + sp.I * sp.Rational(str(im.entry(i, j)))))
        else:
            out.append(sp.ImmutableMatrix(
                mat.rows, mat.cols, lambda i, j: sp.Rational(str(mat.entry(i, j)))))
    return out


def _flatten(m):
    return [sp.re(x) for x in m] + [sp.im(x) for x in m]


@pytest.mark.parametrize("ident", ("heisenberg:2", "heisenberg:3",
                                   "free:3", "free:4", "free:5"))
def test_structure_constants_match_sympy_commutators(packages, ident):
    pkg = packages[ident]
    env = pkg.envelope
    mats = _sympy_matrices(pkg)
    # the realization matrices are linearly independent, so the expansion of
    # each commutator in terms of them is unique
    basis_matrix = sp.Matrix([_flatten(sp.expand(m)) for m in mats]).T
    assert basis_matrix.rank() == env.dim
    for i in range(env.dim):
        for j in range(i + 1, env.dim):
            comm = sp.expand(mats[i] * mats[j] - mats[j] * mats[i])
            claimed = sp.zeros(*comm.shape)
            for k, c in env.bracket_basis(i, j).items():
                claimed += sp.Rational(str(c)) * sp.Matrix(mats[k])
            assert comm == sp.expand(sp.ImmutableMatrix(claimed)), (
                f"{ident}: bracket ({env.basis_name(i)}, {env.basis_name(j)})"
            )
