import pytest

from gnlc.lie_core import GradedLieAlgebra, validate
from gnlc.prolongation import ProlongationError, prolong


def test_rejects_positive_degrees():
    bad = GradedLieAlgebra("bad", [("x", -1), ("y", 1)], {})
    with pytest.raises(ProlongationError):
        prolong(bad)


def test_requires_generation_in_first_layer():
    # the layer at depth 2 is not spanned by brackets of the first layer
    bad = GradedLieAlgebra("bad", [("x", -1), ("z", -2)], {})
    with pytest.raises(ProlongationError):
        prolong(bad)


def test_metric_symbols_are_rigid(packages):
    # g = g- + u(n) and g = g- + so(m) admit no first prolongation
    for pkg in packages.values():
        res = prolong(pkg.g, max_degree=3)
        assert res.dims_by_degree[1] == 0
        assert res.stabilized
        assert res.total_dim == pkg.g.dim


@pytest.mark.parametrize("ident,expect_plus,total", (
    ("heisenberg:2", {1: 4, 2: 1}, 15),
    ("heisenberg:3", {1: 6, 2: 1}, 24),
    ("free:3", {1: 3, 2: 3}, 21),
    ("free:4", {1: 4, 2: 6}, 36),
    ("free:5", {1: 5, 2: 10}, 55),
))
def test_full_prolongation_recovers_envelope_dims(packages, ident, expect_plus, total):
    pkg = packages[ident]
    env = pkg.envelope
    nonpos = [i for i in range(env.dim) if env.degree(i) <= 0]
    res = prolong(env.subalgebra(nonpos, "nonpositive"), max_degree=4)
    for p, d in expect_plus.items():
        assert res.dims_by_degree[p] == d
    assert res.dims_by_degree[3] == 0
    assert res.dims_by_degree[4] == 0
    assert res.stabilized
    assert res.total_dim == total == env.dim


def test_assembled_prolongation_validates(packages):
    pkg = packages["heisenberg:2"]
    env = pkg.envelope
    nonpos = [i for i in range(env.dim) if env.degree(i) <= 0]
    res = prolong(env.subalgebra(nonpos, "nonpositive"), max_degree=4)
    report = validate(res.algebra)
    assert report.ok
    # degrees of the assembled basis match the computed layer dimensions
    for p, d in res.dims_by_degree.items():
        assert len(res.algebra.indices_of_degree(p)) == d
