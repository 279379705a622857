"""The three-valued satisfiability check and the epsilon-halving driver.

`checksat` returns a nonempty subset of {True, False}: a singleton is a
proven verdict for every parameter value in P, while {True, False} means
the current refinement cannot decide.  The driver halves the refinement
parameter until a singleton appears or the iteration budget runs out;
non-robust sentences stay undecided forever, which is the honest answer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .evaluation import IneqBand, eval_env, ineq_band, positive_lower_bound
from .formulas import (And, Atom, Eq, Exists, ForAll, Formula, Or, block_parts,
                       free_vars, validate_class_b)
from .geometry import BoxComplex, grid_cover
from .intervals import EMPTY_BOX, Precision, RatBox, box, ival, rat
from .degree import degree
from . import terms as T

TriValue = frozenset
TRI_T: TriValue = frozenset((True,))
TRI_F: TriValue = frozenset((False,))
TRI_TF: TriValue = frozenset((True, False))


def tri_and(u: TriValue, v: TriValue) -> TriValue:
    return frozenset(a and b for a in u for b in v)


def tri_or(u: TriValue, v: TriValue) -> TriValue:
    return frozenset(a or b for a in u for b in v)


def prec_for(r: Fraction) -> Precision:
    """Precision with transcendental slack <= r/8."""
    need = Fraction(8) / r
    p = 1
    while (1 << p) < need:
        p += 1
    return Precision(p)


@dataclass
class IterationRecord:
    iteration: int
    eps: Fraction
    result: TriValue
    complexes: int = 0
    degrees: list[Optional[int]] = field(default_factory=list)


@dataclass
class Verdict:
    outcome: str  # "TRUE" | "FALSE" | "UNKNOWN"
    iterations: int
    final_eps: Fraction
    certificate: Optional[Fraction]
    trace: list[IterationRecord]


class _Context:
    def __init__(self, degree_budget: int = 1000, workers: int = 1):
        self.degree_budget = degree_budget
        self.workers = max(1, workers)
        self.record: Optional[IterationRecord] = None


def _min_cert(a: Optional[Fraction], b: Optional[Fraction]) -> Optional[Fraction]:
    if a is None or b is None:
        return None
    return min(a, b)


def _checksat(
    s: Formula, pnames: tuple[str, ...], p_box: RatBox, r: Fraction, ctx: _Context
) -> tuple[TriValue, Optional[Fraction]]:
    if isinstance(s, (Exists, Atom)):
        return _soei(s, pnames, p_box, r, ctx)
    if isinstance(s, ForAll):
        return _univ(s, pnames, p_box, r, ctx)
    if isinstance(s, And):
        return _combine(s, pnames, p_box, r, ctx, tri_and)
    assert isinstance(s, Or)
    return _combine(s, pnames, p_box, r, ctx, tri_or)


def checksat(s: Formula, p_box: RatBox, r, pnames: Sequence[str] = ()) -> TriValue:
    """Three-valued check of s over the parameter box (free variables in
    quantification order); a singleton answer holds for every parameter
    value in the box."""
    r = rat(r)
    if r <= 0:
        raise ValueError("refinement parameter must be positive")
    report = validate_class_b(s)
    if not report.in_class:
        raise ValueError("; ".join(report.violations))
    return _checksat(s, tuple(pnames), p_box, r, _Context())[0]


# ---------------------------------------------------------------------------
# existential blocks


def _soei(
    s: Formula, pnames: tuple[str, ...], p_box: RatBox, r: Fraction, ctx: _Context
) -> tuple[TriValue, Optional[Fraction]]:
    if isinstance(s, Atom):  # a ground atom is a block with no variables
        s = Exists((), EMPTY_BOX, s)
    eqs, ineqs = block_parts(s)
    names = pnames + s.vars
    m, n = len(s.vars), len(eqs)
    prec = prec_for(r)
    grid = grid_cover(s.bounds, r)

    all_refuted = True
    separation: Optional[Fraction] = None
    unrefuted: list[tuple[int, ...]] = []
    track_cells = n > 0 and n == m
    for idx, cell in grid.cells():
        full = p_box.product(cell)
        env = dict(zip(names, full.intervals))
        bound = _refutation_bound(eqs, ineqs, env, prec)
        if bound is not None:
            separation = bound if separation is None else min(separation, bound)
            continue
        all_refuted = False
        if n == 0:
            lb = positive_lower_bound(ineqs, full, names, prec)
            if lb is not None:  # every inequality strictly positive here
                return TRI_T, lb
        elif track_cells:
            unrefuted.append(idx)
    if all_refuted:
        return TRI_F, separation
    if not track_cells:  # n = 0 undecided, or underdetermined n > m
        return TRI_TF, None
    return _soei_degree_phase(s, eqs, ineqs, pnames, p_box, r, prec, grid,
                              unrefuted, ctx)


def _refutation_bound(
    eqs: Sequence[T.Term], ineqs: Sequence[T.Term],
    env: dict, prec: Precision,
) -> Optional[Fraction]:
    """A positive separation bound when the cell admits no solution;
    None when the cell stays plausible."""
    for f in eqs:
        enc = eval_env(f, env, prec)
        if enc.lo > 0:
            return enc.lo
        if enc.hi < 0:
            return -enc.hi
    for g in ineqs:
        enc = eval_env(g, env, prec)
        if enc.hi < 0:
            return -enc.hi
    return None


def _soei_degree_phase(
    s: Exists, eqs, ineqs, pnames, p_box: RatBox, r: Fraction,
    prec: Precision, grid, unrefuted: list[tuple[int, ...]], ctx: _Context,
) -> tuple[TriValue, Optional[Fraction]]:
    """Zero-face merging plus the degree test on candidate complexes."""
    names = pnames + s.vars

    parent: dict[tuple[int, ...], tuple[int, ...]] = {}

    def find(i):
        root = i
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(i, i) != i:
            parent[i], i = root, parent[i]
        return root

    doomed: set[tuple[int, ...]] = set()
    members: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for face in grid.faces():
        full = p_box.product(face.box)
        env = dict(zip(names, full.intervals))
        if not _zero_face(eqs, env, prec):
            continue
        if face.on_boundary:
            doomed.update(face.incident_cells)
        else:
            parent[find(face.lower_cell)] = find(face.upper_cell)

    doomed_roots = {find(i) for i in doomed}
    candidates: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for idx in set(unrefuted) | set(parent):
        members.setdefault(find(idx), []).append(idx)
    keep_unrefuted = set(unrefuted)
    for root, cells in sorted(members.items()):
        if root in doomed_roots or not (set(cells) & keep_unrefuted):
            # a complex of refuted cells has no zero, hence degree 0
            continue
        candidates[root] = sorted(cells)

    p0 = dict(zip(pnames, p_box.center))
    fs = [T.substitute(f, p0) for f in eqs] if pnames else list(eqs)
    for root in sorted(candidates):
        complex = BoxComplex(tuple(grid.cell(i) for i in candidates[root]))
        result = degree(fs, s.vars, complex, prec, ctx.degree_budget)
        if ctx.record is not None:
            ctx.record.complexes += 1
            ctx.record.degrees.append(None if result is None else result.value)
        if result is None or result.value == 0:
            continue
        cert: Optional[Fraction] = result.boundary_min_lb
        if ineqs:
            ok = True
            for idx in candidates[root]:
                full = p_box.product(grid.cell(idx))
                lb = positive_lower_bound(ineqs, full, names, prec)
                if lb is None:
                    ok = False
                    break
                cert = min(cert, lb)
            if not ok:
                continue
        return TRI_T, cert
    return TRI_TF, None


def _zero_face(eqs: Sequence[T.Term], env: dict, prec: Precision) -> bool:
    return all(eval_env(f, env, prec).contains_zero for f in eqs)


# ---------------------------------------------------------------------------
# universal quantification and connectives


def _univ(
    s: ForAll, pnames: tuple[str, ...], p_box: RatBox, r: Fraction, ctx: _Context
) -> tuple[TriValue, Optional[Fraction]]:
    count = max(1, math.ceil(s.bound.width / r))
    acc = TRI_T
    cert: Optional[Fraction] = None
    first = True
    for i in range(count):
        lo = s.bound.lo + s.bound.width * i / count
        hi = s.bound.lo + s.bound.width * (i + 1) / count
        sub, sub_cert = _checksat(s.body, pnames + (s.var,),
                                  p_box.product(box(ival(lo, hi))), r, ctx)
        acc = tri_and(acc, sub)
        if acc == TRI_F:
            # one definitely-false slice falsifies the universal
            return TRI_F, sub_cert if sub == TRI_F else None
        cert = sub_cert if first else _min_cert(cert, sub_cert)
        first = False
    return acc, cert if acc == TRI_T else None


def _combine(
    s, pnames: tuple[str, ...], p_box: RatBox, r: Fraction, ctx: _Context, op
) -> tuple[TriValue, Optional[Fraction]]:
    results = []
    certs = []
    for side in (s.left, s.right):
        fv = free_vars(side)
        keep = [i for i, nm in enumerate(pnames) if nm in fv]
        sub_names = tuple(pnames[i] for i in keep)
        sub_box = RatBox(tuple(p_box[i] for i in keep))
        res, cert = _checksat(side, sub_names, sub_box, r, ctx)
        results.append(res)
        certs.append(cert)
    combined = op(results[0], results[1])
    if len(combined) != 1:
        return combined, None
    # the verdict's certificate combines the sides that forced it
    decisive = [c for res, c in zip(results, certs) if res == combined]
    if not decisive or any(c is None for c in decisive):
        return combined, None
    return combined, min(decisive)


# ---------------------------------------------------------------------------
# driver


def quasi_decide(
    s: Formula,
    budget: int = 20,
    eps: Fraction = Fraction(1),
    degree_budget: int = 1000,
    workers: int = 1,
) -> Verdict:
    """Halve the refinement parameter until checksat returns a singleton;
    report UNKNOWN when the iteration budget runs out."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    eps = rat(eps)
    if eps <= 0:
        raise ValueError("initial epsilon must be positive")
    if free_vars(s):
        raise ValueError(
            f"not a sentence; free variables: {sorted(free_vars(s))}")
    report = validate_class_b(s)
    if not report.in_class:
        raise ValueError("; ".join(report.violations))

    ctx = _Context(degree_budget=degree_budget, workers=workers)
    trace: list[IterationRecord] = []
    for i in range(1, budget + 1):
        record = IterationRecord(i, eps, TRI_TF)
        ctx.record = record
        result, cert = _checksat(s, (), EMPTY_BOX, eps, ctx)
        record.result = result
        trace.append(record)
        if len(result) == 1:
            outcome = "TRUE" if True in result else "FALSE"
            return Verdict(outcome, i, eps, cert, trace)
        eps = eps / 2
    return Verdict("UNKNOWN", budget, eps * 2, None, trace)
