import pytest

from gnlc.linalg import Matrix, SubspaceBasis, rat
from gnlc.lie_core import (
    GradedLieAlgebra,
    StructureError,
    grading_element,
    killing_form,
    quotient_module,
    restricted_adjoint,
    submodule_span,
    validate,
)


def heisenberg3():
    # [x, y] = z with degrees (-1, -1, -2)
    return GradedLieAlgebra(
        "h3", [("x", -1), ("y", -1), ("z", -2)], {(0, 1): {2: 1}}
    )


def test_basic_queries():
    a = heisenberg3()
    assert a.dim == 3
    assert a.depth() == 2
    assert a.negative_indices == [0, 1, 2]
    assert a.indices_of_degree(-1) == [0, 1]
    assert a.index_of("z") == 2
    assert a.bracket_basis(1, 0) == {2: rat(-1)}
    assert a.bracket([1, 0, 0], [0, 1, 0]) == [rat(0), rat(0), rat(1)]


def test_validate_ok_and_symbol_condition():
    a = heisenberg3()
    assert validate(a).ok
    assert validate(a, symbol_algebra=True).ok


def test_validate_catches_broken_jacobi():
    # [e1,e2]=z and [e3,z]=-u leave Jacobi(e1,e2,e3) with an uncancelled u
    bad = GradedLieAlgebra(
        "bad",
        [("e1", -1), ("e2", -1), ("e3", -1), ("z", -2), ("u", -3)],
        {(0, 1): {3: 1}, (2, 3): {4: -1}},
    )
    report = validate(bad)
    assert not report.ok
    assert any("jacobi" in v.lower() for v in report.violations)


def test_validate_catches_grading_violation():
    bad = GradedLieAlgebra("bad", [("x", -1), ("y", -1), ("z", -3)], {(0, 1): {2: 1}})
    report = validate(bad)
    assert not report.ok


def test_subalgebra_closure_enforced():
    a = heisenberg3()
    sub = a.subalgebra([0, 1, 2], "all")
    assert sub.dim == 3
    with pytest.raises(StructureError):
        a.subalgebra([0, 1], "not closed")


def test_killing_form_symmetric_and_zero_for_nilpotent():
    a = heisenberg3()
    k = killing_form(a)
    assert k.is_symmetric()
    assert k.is_zero()


def test_grading_element(packages):
    env = packages["heisenberg:2"].envelope
    e = grading_element(env)
    assert e is not None
    for i in range(env.dim):
        v = [0] * env.dim
        v[i] = 1
        assert env.bracket(e, v) == [rat(env.degree(i)) * c for c in map(rat, v)]
    # nilpotent algebras have no grading element
    assert grading_element(heisenberg3()) is None


def test_restricted_adjoint_is_representation(packages):
    pkg = packages["heisenberg:2"]
    module = pkg.envelope_module()
    assert module.check() == []


def test_quotient_module_and_stability():
    a = heisenberg3()
    module = restricted_adjoint(a, [0, 1, 2], "h3")
    w = submodule_span(module, [[0, 0, 1]])  # the center, stable
    assert w.dim == 1
    quot, proj = quotient_module(module, w)
    assert quot.dim == 2
    assert proj.check() == []
    # a non-stable subspace is rejected
    with pytest.raises(StructureError):
        quotient_module(module, SubspaceBasis(3, [[1, 0, 0]]))


def test_submodule_span_is_canonical():
    a = heisenberg3()
    module = restricted_adjoint(a, [0, 1, 2], "h3")
    w = submodule_span(module, [[2, 0, 0], [1, 0, 0], [1, 1, 0]])
    assert w.dim == 2
    assert list(w.vectors[0]) == [rat(1), rat(0), rat(0)]


def test_inner_products(packages):
    pkg = packages["heisenberg:2"]
    assert pkg.metric.check_spd()
    g0 = pkg.g.indices_of_degree(0)
    mats = [pkg.g.ad_matrix(i) for i in g0]
    assert pkg.g_gram().is_invariant_under(mats)
