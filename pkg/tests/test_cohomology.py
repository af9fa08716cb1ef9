import pytest

from gnlc.linalg import Matrix, ONE, rank
from gnlc.cohomology import (
    Cochain,
    CochainSpace,
    CohomologyError,
    apply_differential,
    class_coordinates,
    cohomology_cell,
    connecting_hom,
    differential,
    envelope_pair,
    g0_cochain_action,
    generator_cochains,
    homogeneity_scan,
    long_exact_sequence_nodes,
    spencer_split,
    theorem3_split,
)


def test_cochain_space_homogeneity_partition(packages):
    # the homogeneity cells partition the full k-cochain space
    module = packages["heisenberg:2"].envelope_module()
    nneg = len(module.algebra.negative_indices)
    for k in (0, 1, 2):
        pairs = 1 if k == 0 else [5, 10][k - 1]
        total = sum(CochainSpace(k, module, h).dim for h in homogeneity_scan(module, k))
        from math import comb
        assert total == comb(nneg, k) * module.dim


def test_add_monomial_rejects_wrong_homogeneity(packages):
    from gnlc.cohomology import add_monomial
    module = packages["heisenberg:2"].envelope_module()
    space = CochainSpace(1, module, 1)
    args, v = space.basis[0]
    wrong = CochainSpace(1, module, 2)
    with pytest.raises(CohomologyError):
        add_monomial({}, wrong, args, v, ONE)


def test_differential_squares_to_zero_spot(packages):
    module = packages["free:3"].envelope_module()
    for h in (1, 2, 3):
        s1 = CochainSpace(1, module, h)
        s2 = CochainSpace(2, module, h)
        s3 = CochainSpace(3, module, h)
        assert (differential(s2, s3) * differential(s1, s2)).is_zero()


def test_sparse_apply_matches_matrix(packages):
    module = packages["heisenberg:2"].envelope_module()
    s = CochainSpace(1, module, 2)
    t = CochainSpace(2, module, 2)
    d = differential(s, t)
    for p in range(s.dim):
        sparse = apply_differential(s, {p: ONE}, t)
        col = {r: row[p] for r, row in enumerate(d._rows) if p in row}
        assert sparse == col


def test_cell_dims_contact(packages):
    pkg = packages["heisenberg:2"]
    sq = envelope_pair(pkg)
    # first cohomology of the quotient: zero at homogeneity 1, Sym^2 at 2
    assert cohomology_cell(sq.quot, 1, 1).dim_H == 0
    assert cohomology_cell(sq.quot, 1, 2).dim_H == 10


def test_cell_dims_free(packages):
    pkg = packages["free:3"]
    module = pkg.envelope_module()
    dims = {h: cohomology_cell(module, 2, h).dim_H
            for h in homogeneity_scan(module, 2) if h > 0}
    assert sum(dims.values()) == 27
    assert dims[3] == 27


def test_harmonic_dimension_agreement(packages):
    pkg = packages["heisenberg:2"]
    module = pkg.envelope_module()
    for h in (1, 2):
        cell = cohomology_cell(module, 2, h, with_harmonic=True,
                               arg_gram=pkg.metric, module_gram=pkg.envelope_gram)
        assert cell.harmonic is not None
        assert cell.harmonic.dim == cell.dim_H


def test_g0_action_commutes_with_differential(packages):
    pkg = packages["free:3"]
    module = pkg.adjoint_module()
    alg = module.algebra
    for h in (1, 2):
        s = CochainSpace(1, module, h)
        t = CochainSpace(2, module, h)
        d = differential(s, t)
        for x in alg.indices_of_degree(0):
            lhs = d * g0_cochain_action(s, x)
            rhs = g0_cochain_action(t, x) * d
            assert (lhs - rhs).is_zero()


def test_connecting_hom_gives_closed_cochain(packages):
    pkg = packages["free:3"]
    gs = generator_cochains(pkg)
    sq = gs.pair
    name, alpha, beta = gs.families["hom2"][0]
    conn = connecting_hom(sq, beta)
    d = differential(conn.space)
    assert all(c == 0 for c in d.apply(conn.coords))
    # lift perturbations do not change the class
    cell = cohomology_cell(sq.sub, conn.space.k, conn.space.h)
    pert_space = CochainSpace(1, sq.sub, beta.space.h)
    pert = Cochain.from_sparse(pert_space, {0: ONE})
    conn2 = connecting_hom(sq, beta, lift_perturbation=pert)
    assert class_coordinates(cell, conn.coords) == class_coordinates(cell, conn2.coords)


def test_split_identity(packages):
    for ident in ("heisenberg:2", "free:3"):
        rep = theorem3_split(packages[ident])
        assert rep.ok
        for cell in rep.cells:
            assert cell.dim_h2_sub == cell.dim_q_part + cell.dim_ker_pi2


def test_long_exact_sequence(packages):
    for ident in ("heisenberg:2", "free:3"):
        for h in (1, 2, 3):
            for node in long_exact_sequence_nodes(packages[ident], h):
                assert node.ok, (ident, h, node)


def test_spencer_split_dims(packages):
    sp = spencer_split(packages["free:3"])
    assert (sp.dim_tor, sp.kernel_dim, sp.image.dim, sp.complement.dim) == (90, 0, 18, 72)


def test_generators_closed_and_independent(packages):
    pkg = packages["heisenberg:2"]
    gens = generator_cochains(pkg).families["hom2"]
    assert len(gens) == 10
    space = gens[0][1].space
    d = differential(space)
    for _, coch, _ in gens:
        assert all(c == 0 for c in d.apply(coch.coords))
    cell = cohomology_cell(space.module, space.k, space.h)
    cls = Matrix.from_rows([class_coordinates(cell, g[1].coords) for g in gens])
    assert rank(cls) == 10
