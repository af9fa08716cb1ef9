"""Invariant curvature spaces and homogeneous-model classification.

The harmonic curvature of a filtered geometry with a fixed symbol takes
values in the degree-0-invariant part of H^2(g-, g).  This module computes
that invariant part cell by cell, evaluates the curvature of the catalog
model deformations, and reports which invariant classes the models realize.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import Matrix, SubspaceBasis, ZERO, kernel_basis, rank, solve, solve_many
from .lie_core import Representation
from .catalog import FilteredDeformation, SymbolPackage, model_deformations
from .cohomology import (
    Cochain,
    CochainSpace,
    CohomologyCell,
    CohomologyError,
    add_monomial,
    class_coordinates,
    cohomology_cell,
    differential,
    g0_cochain_action,
    homogeneity_scan,
)


class ModelError(ValueError):
    pass


# ---------------------------------------------------------------------------
# invariants of the degree-0 action on cohomology
# ---------------------------------------------------------------------------

@dataclass
class InvariantCell:
    """The degree-0-invariant part of one cohomology cell."""

    degree: int
    homogeneity: int
    dim_H: int
    dim_invariant: int
    cell: CohomologyCell
    representatives: SubspaceBasis       # invariant classes, cochain coordinates

    def class_matrix(self) -> Matrix:
        """Columns: class coordinates of the invariant representatives."""
        proj = self.cell.class_projector()
        return Matrix.from_columns([proj.apply(v) for v in self.representatives.vectors])


@dataclass
class InvariantReport:
    identifier: str
    cells: list

    @property
    def total_invariant_dim(self) -> int:
        return sum(c.dim_invariant for c in self.cells)

    def cell_at(self, h: int) -> InvariantCell:
        for c in self.cells:
            if c.homogeneity == h:
                return c
        raise ModelError(f"no invariant cell at homogeneity {h}")


def _induced_action(cell: CohomologyCell, x: int) -> Matrix:
    """Matrix of the degree-0 element x on H, in the representative basis."""
    act = g0_cochain_action(cell.space, x)
    proj = cell.class_projector()
    reps = cell.representatives.vectors
    basis = Matrix.from_columns([proj.apply(v) for v in reps])
    images = [proj.apply(act.apply(list(v))) for v in reps]
    cols = solve_many(basis, images)
    if cols is None:
        raise ModelError("degree-0 action does not descend to cohomology")
    return Matrix.from_columns(cols)


def g0_invariants(cell: CohomologyCell, pkg: SymbolPackage) -> InvariantCell:
    """Joint kernel of the induced degree-0 action on ker d / im d."""
    alg = cell.space.module.algebra
    zero_indices = alg.indices_of_degree(0)
    n = cell.dim_H
    if n == 0 or not zero_indices:
        inv = SubspaceBasis(cell.space.dim, list(cell.representatives.vectors))
        return InvariantCell(cell.degree, cell.homogeneity, n, inv.dim, cell, inv)
    stacked = None
    for x in zero_indices:
        m = _induced_action(cell, x)
        stacked = m if stacked is None else stacked.stack_below(m)
    ker = kernel_basis(stacked)
    reps = []
    for coeff in ker.vectors:
        vec = [ZERO] * cell.space.dim
        for j, c in enumerate(coeff):
            if c:
                rv = cell.representatives.vectors[j]
                vec = [a + c * b for a, b in zip(vec, rv)]
        reps.append(vec)
    inv = SubspaceBasis(cell.space.dim, reps)
    return InvariantCell(cell.degree, cell.homogeneity, n, inv.dim, cell, inv)


def invariant_report(pkg: SymbolPackage, degree: int = 2) -> InvariantReport:
    """Invariant part of H^degree(g-, g) over all positive homogeneities."""
    module = pkg.adjoint_module()
    cells = []
    for h in homogeneity_scan(module, degree):
        if h <= 0:
            continue
        cell = cohomology_cell(module, degree, h)
        if cell.space.dim == 0:
            continue
        cells.append(g0_invariants(cell, pkg))
    return InvariantReport(identifier=pkg.identifier(), cells=cells)


# ---------------------------------------------------------------------------
# curvature of a filtered deformation
# ---------------------------------------------------------------------------

@dataclass
class Curvature:
    """kappa(X, Y) = [X, Y]_deformed - [X, Y]_graded on the negative part.

    Stored per homogeneity; the homogeneity-0 part cancels by the symbol
    compatibility of the deformation, so every component is positive.
    """

    label: str
    components: dict            # homogeneity -> Cochain in C^2(g-, g)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components.values())

    def leading(self):
        """(homogeneity, component) of lowest homogeneity, or None if zero.

        Only the leading component is a cocycle and has a well-defined class;
        higher components are tied to it by the deformed Jacobi identity.
        """
        for h in sorted(self.components):
            if not self.components[h].is_zero():
                return h, self.components[h]
        return None


def deformation_curvature(defm: FilteredDeformation,
                          module: Representation | None = None) -> Curvature:
    pkg = defm.base
    g = pkg.g
    if module is None:
        module = pkg.adjoint_module()
    neg = g.negative_indices
    spaces: dict[int, CochainSpace] = {}
    entries: dict[int, dict] = {}
    for a_pos in range(len(neg)):
        for b_pos in range(a_pos + 1, len(neg)):
            a, b = neg[a_pos], neg[b_pos]
            diff = dict(defm.bracket_basis(a, b))
            for t, c in g.bracket_basis(a, b).items():
                nv = diff.get(t, ZERO) - c
                if nv:
                    diff[t] = nv
                else:
                    diff.pop(t, None)
            for t, c in diff.items():
                h = -g.degree(a) - g.degree(b) + g.degree(t)
                if h <= 0:
                    raise ModelError(
                        f"deformation {defm.label}: leading term survives at "
                        f"homogeneity {h} on pair ({a}, {b})"
                    )
                if h not in spaces:
                    spaces[h] = CochainSpace(2, module, h)
                    entries[h] = {}
                add_monomial(entries[h], spaces[h], (a, b), t, c)
    components = {h: Cochain.from_sparse(spaces[h], entries[h]) for h in sorted(spaces)}
    return Curvature(label=defm.label, components=components)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass
class ModelCurvature:
    label: str
    curvature: Curvature
    invariant_coords: dict      # homogeneity -> coords in the invariant basis

    def flat_vector(self, report: InvariantReport) -> list:
        """Coordinates in the total invariant space, cells concatenated."""
        out = []
        for cell in report.cells:
            out.extend(self.invariant_coords.get(cell.homogeneity,
                                                 [ZERO] * cell.dim_invariant))
        return out


@dataclass
class ClassificationReport:
    identifier: str
    invariants: InvariantReport
    models: list
    realized_dim: int

    @property
    def uncovered_dim(self) -> int:
        return self.invariants.total_invariant_dim - self.realized_dim


def _invariant_coords(report: InvariantReport, h: int, cochain: Cochain) -> list:
    """Coordinates of a closed cochain's class in the invariant cell basis."""
    cell = None
    for c in report.cells:
        if c.homogeneity == h:
            cell = c
            break
    if cell is None:
        if cochain.is_zero():
            return []
        raise ModelError(f"curvature class at homogeneity {h} outside computed cells")
    cls = class_coordinates(cell.cell, cochain.coords)
    if cell.dim_invariant == 0:
        if any(c != 0 for c in cls):
            raise ModelError("curvature class outside the invariant subspace")
        return []
    sol = solve(cell.class_matrix(), cls)
    if sol is None:
        raise ModelError("curvature class outside the invariant subspace")
    return sol


def classify(pkg: SymbolPackage, t=1) -> ClassificationReport:
    """Invariant space of H^2_{>0}(g-, g) and the classes the models realize."""
    report = invariant_report(pkg, 2)
    module = pkg.adjoint_module()
    models = []
    realized = []
    for defm in model_deformations(pkg, t):
        kappa = deformation_curvature(defm, module)
        coords = {}
        lead = kappa.leading()
        if lead is not None:
            h, comp = lead
            d = differential(comp.space)
            if any(c != 0 for c in d.apply(comp.coords)):
                raise ModelError(f"leading curvature of {defm.label} is not closed")
            coords[h] = _invariant_coords(report, h, comp)
        mc = ModelCurvature(label=defm.label, curvature=kappa, invariant_coords=coords)
        models.append(mc)
        vec = mc.flat_vector(report)
        if any(c != 0 for c in vec):
            realized.append(vec)
    realized_dim = rank(Matrix.from_rows(realized)) if realized else 0
    return ClassificationReport(
        identifier=pkg.identifier(),
        invariants=report,
        models=models,
        realized_dim=realized_dim,
    )
