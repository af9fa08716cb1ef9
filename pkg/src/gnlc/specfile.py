"""Line-oriented JSON file format for graded Lie algebras.

Each line is one JSON object with a "type" field:

    {"type": "header", "format": "gnlc-algebra", "version": 1, "name": "..."}
    {"type": "basis", "name": "e1", "degree": -1}
    {"type": "bracket", "left": "e1", "right": "e2", "value": [["e3", "1/2"]]}
    {"type": "g0", "basis": ["s1", "s2"]}                             (optional)
    {"type": "metric", "diagonal": [["e1", "1"], ["e2", "1"]]}        (optional)
    {"type": "module-basis", "name": "v1", "degree": 0}               (optional)
    {"type": "module-action", "element": "e1",
     "entries": [["v1", "v2", "1"]]}                                  (optional)

Coefficients are exact rationals serialized as strings, never floats.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .linalg import Matrix, ZERO, rat
from .lie_core import GradedLieAlgebra, InnerProduct, Representation


class SpecFileError(ValueError):
    """The file is not a well-formed algebra description."""


@dataclass
class ParsedFile:
    algebra: GradedLieAlgebra
    metric: Optional[InnerProduct]
    module: Optional[Representation]
    g0_names: Optional[list]


def _coeff(s, where: str):
    if isinstance(s, float):
        raise SpecFileError(f"{where}: floats are not accepted, use rational strings")
    try:
        return rat(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecFileError(f"{where}: bad rational {s!r} ({exc})") from exc


def loads(text: str, name_hint: str = "algebra") -> ParsedFile:
    header_name = None
    basis: list[tuple[str, int]] = []
    brackets: list[tuple[str, str, list]] = []
    g0_names = None
    metric_diag = None
    mod_basis: list[tuple[str, int]] = []
    mod_actions: dict[str, list] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        where = f"line {lineno}"
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SpecFileError(f"{where}: invalid JSON ({exc})") from exc
        if not isinstance(rec, dict) or "type" not in rec:
            raise SpecFileError(f"{where}: expected an object with a 'type' field")
        t = rec["type"]
        try:
            if t == "header":
                if rec.get("format") != "gnlc-algebra":
                    raise SpecFileError(f"{where}: unknown format {rec.get('format')!r}")
                header_name = str(rec.get("name", name_hint))
            elif t == "basis":
                basis.append((str(rec["name"]), int(rec["degree"])))
            elif t == "bracket":
                brackets.append((str(rec["left"]), str(rec["right"]), rec["value"]))
            elif t == "g0":
                g0_names = [str(n) for n in rec["basis"]]
            elif t == "metric":
                metric_diag = rec["diagonal"]
            elif t == "module-basis":
                mod_basis.append((str(rec["name"]), int(rec["degree"])))
            elif t == "module-action":
                mod_actions.setdefault(str(rec["element"]), []).extend(rec["entries"])
            else:
                raise SpecFileError(f"{where}: unknown record type {t!r}")
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, SpecFileError):
                raise
            raise SpecFileError(f"{where}: malformed {t!r} record ({exc})") from exc
    if not basis:
        raise SpecFileError("no basis records")
    names = [n for n, _ in basis]
    if len(set(names)) != len(names):
        raise SpecFileError("duplicate basis names")
    index = {n: i for i, n in enumerate(names)}

    table: dict = {}
    for left, right, value in brackets:
        if left not in index or right not in index:
            raise SpecFileError(f"bracket references unknown basis name {left!r}/{right!r}")
        i, j = index[left], index[right]
        if i == j:
            raise SpecFileError(f"bracket of {left!r} with itself")
        vec: dict = {}
        for item in value:
            if not isinstance(item, (list, tuple)) or len(item) != 2:
                raise SpecFileError(f"bracket [{left},{right}]: entries must be [name, coeff] pairs")
            tgt, c = item
            if tgt not in index:
                raise SpecFileError(f"bracket [{left},{right}]: unknown target {tgt!r}")
            vec[index[tgt]] = _coeff(c, f"bracket [{left},{right}]")
        key, sign = ((i, j), 1) if i < j else ((j, i), -1)
        if key in table:
            raise SpecFileError(f"duplicate bracket for pair ({left}, {right})")
        table[key] = {k: sign * v for k, v in vec.items()}
    algebra = GradedLieAlgebra(header_name or name_hint, basis, table)

    metric = None
    if metric_diag is not None:
        rows = [dict() for _ in range(algebra.dim)]
        for item in metric_diag:
            if not isinstance(item, (list, tuple)) or len(item) != 2:
                raise SpecFileError("metric: entries must be [name, coeff] pairs")
            nm, c = item
            if nm not in index:
                raise SpecFileError(f"metric: unknown basis name {nm!r}")
            rows[index[nm]][index[nm]] = _coeff(c, "metric")
        for i in range(algebra.dim):
            if i not in rows[i]:
                raise SpecFileError(f"metric: missing diagonal entry for {names[i]!r}")
        metric = InnerProduct(Matrix(algebra.dim, algebra.dim, rows))

    module = None
    if mod_basis:
        mnames = [n for n, _ in mod_basis]
        if len(set(mnames)) != len(mnames):
            raise SpecFileError("duplicate module basis names")
        mindex = {n: i for i, n in enumerate(mnames)}
        action = []
        for i, gname in enumerate(names):
            rows = [dict() for _ in range(len(mod_basis))]
            for item in mod_actions.get(gname, []):
                if not isinstance(item, (list, tuple)) or len(item) != 3:
                    raise SpecFileError("module-action: entries must be [to, from, coeff]")
                to, frm, c = item
                if to not in mindex or frm not in mindex:
                    raise SpecFileError(f"module-action: unknown module name {to!r}/{frm!r}")
                rows[mindex[to]][mindex[frm]] = _coeff(c, f"module-action {gname}")
            action.append(Matrix(len(mod_basis), len(mod_basis), rows))
        unknown = set(mod_actions) - set(names)
        if unknown:
            raise SpecFileError(f"module-action references unknown elements {sorted(unknown)}")
        module = Representation(algebra, mod_basis, action, name=f"{algebra.name} module")

    if g0_names is not None:
        for nm in g0_names:
            if nm not in index:
                raise SpecFileError(f"g0: unknown basis name {nm!r}")
            if algebra.degree(index[nm]) != 0:
                raise SpecFileError(f"g0: {nm!r} does not have degree 0")
    return ParsedFile(algebra=algebra, metric=metric, module=module, g0_names=g0_names)


def load(path: str) -> ParsedFile:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecFileError(f"cannot read {path}: {exc}") from exc
    return loads(text, name_hint=path)


def dumps(algebra: GradedLieAlgebra, metric: Optional[InnerProduct] = None) -> str:
    """Serialize an algebra (and optional diagonal metric) to the line format."""
    lines = [json.dumps({"type": "header", "format": "gnlc-algebra",
                         "version": 1, "name": algebra.name}, sort_keys=True)]
    for name, degree in algebra.basis:
        lines.append(json.dumps({"type": "basis", "name": name, "degree": degree},
                                sort_keys=True))
    for i in range(algebra.dim):
        for j in range(i + 1, algebra.dim):
            vec = algebra.bracket_basis(i, j)
            if not vec:
                continue
            value = [[algebra.basis_name(k), str(vec[k])] for k in sorted(vec)]
            lines.append(json.dumps({"type": "bracket",
                                     "left": algebra.basis_name(i),
                                     "right": algebra.basis_name(j),
                                     "value": value}, sort_keys=True))
    if metric is not None:
        diag = [[algebra.basis_name(i), str(metric.gram.entry(i, i))]
                for i in range(algebra.dim)]
        lines.append(json.dumps({"type": "metric", "diagonal": diag}, sort_keys=True))
    return "\n".join(lines) + "\n"
