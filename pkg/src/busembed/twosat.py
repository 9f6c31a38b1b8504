"""Linear-time 2-SAT through strongly connected components of the implication graph.

Literals use the DIMACS convention: variable ``v`` (1-based) is ``v`` when
true and ``-v`` when negated.  A unit clause ``(a)`` is stored as ``(a, a)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import _kernels


class FormulaError(ValueError):
    pass


class TwoSatFormula:
    """``num_vars`` Boolean variables and an ``(m, 2)`` array of literal pairs."""

    def __init__(
        self,
        num_vars: int,
        clauses: Union[np.ndarray, Iterable[Sequence[int]]] = (),
        names: Optional[Sequence[str]] = None,
    ):
        if isinstance(clauses, np.ndarray):
            arr = clauses.astype(np.int64, copy=False).reshape(-1, 2)
        else:
            rows = []
            for cl in clauses:
                cl = tuple(int(v) for v in cl)
                if len(cl) == 1:
                    cl = (cl[0], cl[0])
                if len(cl) != 2:
                    raise FormulaError(f"clause {cl} does not have one or two literals")
                rows.append(cl)
            arr = np.array(rows, dtype=np.int64).reshape(-1, 2)
        if arr.size and (np.any(arr == 0) or np.abs(arr).max() > num_vars):
            raise FormulaError("clause references a variable outside 1..num_vars")
        self.num_vars = int(num_vars)
        self.array = arr
        self.names = list(names) if names is not None else [str(i + 1) for i in range(num_vars)]

    @property
    def clauses(self) -> List[Tuple[int, ...]]:
        return [(int(a),) if a == b else (int(a), int(b)) for a, b in self.array]

    def __len__(self) -> int:
        return int(self.array.shape[0])

    def evaluate(self, assignment: Sequence[bool]) -> bool:
        vals = np.asarray(assignment, dtype=bool)
        a, b = self.array[:, 0], self.array[:, 1]

        def lit(x):
            v = vals[np.abs(x) - 1]
            return np.where(x > 0, v, ~v)

        return bool(np.all(lit(a) | lit(b)))

    def to_dimacs(self, out: Optional[IO[str]] = None) -> str:
        lines = [f"c var {i + 1} = {name}" for i, name in enumerate(self.names)]
        lines.append(f"p cnf {self.num_vars} {len(self)}")
        lines.extend(" ".join(str(v) for v in cl) + " 0" for cl in self.clauses)
        text = "\n".join(lines) + "\n"
        if out is not None:
            out.write(text)
        return text


@dataclass
class Unsatisfiable:
    """A variable whose two literals share a strongly connected component."""

    variable: int

    def __bool__(self) -> bool:
        return False


def implication_graph(formula: TwoSatFormula) -> Tuple[np.ndarray, np.ndarray]:
    """CSR adjacency over nodes ``2i`` (x_{i+1}) and ``2i+1`` (not x_{i+1})."""
    arr = formula.array
    num_nodes = 2 * formula.num_vars

    def node(lit):
        return 2 * (np.abs(lit) - 1) + (lit < 0)

    a, b = node(arr[:, 0]), node(arr[:, 1])
    # (a or b): not a -> b, not b -> a
    src = np.concatenate([a ^ 1, b ^ 1])
    dst = np.concatenate([b, a])
    counts = np.bincount(src, minlength=num_nodes)
    ptr = np.zeros(num_nodes + 1, dtype=np.int64)
    np.cumsum(counts, out=ptr[1:])
    order = np.argsort(src, kind="stable")
    return ptr, dst[order].astype(np.int64)


def solve_2sat(formula: TwoSatFormula) -> Union[List[bool], Unsatisfiable]:
    """Satisfying assignment (list indexed by variable - 1) or ``Unsatisfiable``."""
    if formula.num_vars == 0:
        return []
    ptr, adj = implication_graph(formula)
    comp = _kernels.scc_tarjan(2 * formula.num_vars, ptr, adj)
    pos, neg = comp[0::2], comp[1::2]
    clash = np.nonzero(pos == neg)[0]
    if clash.size:
        return Unsatisfiable(int(clash[0]) + 1)
    # components are numbered in reverse topological order
    return [bool(v) for v in pos < neg]
