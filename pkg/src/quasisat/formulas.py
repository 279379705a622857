"""First-order formulas over the reals with bounded quantifiers.

Atoms are normalized: ``t1 = t2`` is stored as ``Eq(t1 - t2)`` (meaning
term = 0) and ``t1 >= t2`` as ``Geq(t1 - t2)`` (term >= 0).  Quantifier
bodies are arbitrary formulas; the solvable fragment (existential blocks
whose body is a conjunction of atoms, with at least as many equations as
variables or none at all, composed under forall/and/or) is checked by
`validate_class_b`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping

from .intervals import RatBox, RatInterval
from . import terms as T


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Eq(Formula):
    """term = 0"""
    term: T.Term


@dataclass(frozen=True)
class Geq(Formula):
    """term >= 0"""
    term: T.Term


@dataclass(frozen=True)
class Exists(Formula):
    vars: tuple[str, ...]
    bounds: RatBox
    body: Formula

    def __post_init__(self) -> None:
        if len(self.vars) != self.bounds.dim:
            raise ValueError("variable count and bounds dimension differ")
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("duplicate variable in one exists block")


@dataclass(frozen=True)
class ForAll(Formula):
    var: str
    bound: RatInterval
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


Atom = (Eq, Geq)

# an ordered parameter assignment: (name, exact rational value) pairs,
# in quantification order
ParamEnv = tuple[tuple[str, Fraction], ...]


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return T.free_vars(f.term)
    if isinstance(f, Exists):
        return free_vars(f.body) - frozenset(f.vars)
    if isinstance(f, ForAll):
        return free_vars(f.body) - frozenset((f.var,))
    return free_vars(f.left) | free_vars(f.right)


def bound_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset()
    if isinstance(f, Exists):
        return bound_vars(f.body) | frozenset(f.vars)
    if isinstance(f, ForAll):
        return bound_vars(f.body) | frozenset((f.var,))
    return bound_vars(f.left) | bound_vars(f.right)


def bind(f: Formula, env: ParamEnv | Mapping[str, Fraction]) -> Formula:
    """Substitute exact rational values for free variables of f."""
    mapping = dict(env)
    fv = free_vars(f)
    for name in mapping:
        if name not in fv:
            raise ValueError(f"variable {name!r} is not free in the formula")
    return _subst(f, mapping)


def _subst(f: Formula, env: dict[str, Fraction]) -> Formula:
    if isinstance(f, Atom):
        return type(f)(T.substitute(f.term, env))
    if isinstance(f, Exists):
        inner = {k: v for k, v in env.items() if k not in f.vars}
        return Exists(f.vars, f.bounds, _subst(f.body, inner))
    if isinstance(f, ForAll):
        inner = {k: v for k, v in env.items() if k != f.var}
        return ForAll(f.var, f.bound, _subst(f.body, inner))
    return type(f)(_subst(f.left, env), _subst(f.right, env))


# ---------------------------------------------------------------------------
# solvable-fragment validation


@dataclass(frozen=True)
class BlockShape:
    """(m, n, k) of one exists block: variables, equations, inequalities."""
    m: int
    n: int
    k: int


@dataclass(frozen=True)
class ClassBReport:
    in_class: bool
    blocks: tuple[BlockShape, ...] = ()
    violations: tuple[str, ...] = ()


def _conjunct_atoms(f: Formula) -> list[Formula] | None:
    """Flatten an and-tree of atoms; None if anything else appears."""
    if isinstance(f, Atom):
        return [f]
    if isinstance(f, And):
        left = _conjunct_atoms(f.left)
        right = _conjunct_atoms(f.right)
        if left is None or right is None:
            return None
        return left + right
    return None


def validate_class_b(f: Formula) -> ClassBReport:
    """Check membership in the solvable fragment: exists blocks are
    conjunctions of equations and inequalities with n >= m or n = 0,
    composed under forall, and, or."""
    blocks: list[BlockShape] = []
    violations: list[str] = []

    def walk(g: Formula, seen: frozenset[str]) -> None:
        if isinstance(g, Atom):
            blocks.append(BlockShape(0, 1 if isinstance(g, Eq) else 0,
                                     1 if isinstance(g, Geq) else 0))
            return
        if isinstance(g, (And, Or)):
            walk(g.left, seen)
            walk(g.right, seen)
            return
        if isinstance(g, ForAll):
            if g.var in seen:
                violations.append(f"variable {g.var!r} shadows an outer binding")
            walk(g.body, seen | {g.var})
            return
        assert isinstance(g, Exists)
        clash = set(g.vars) & seen
        if clash:
            violations.append(
                f"variable {sorted(clash)[0]!r} shadows an outer binding")
        atoms = _conjunct_atoms(g.body)
        if atoms is None:
            violations.append(
                "exists body must be a conjunction of equations and "
                "inequalities")
            walk(g.body, seen | set(g.vars))
            return
        m = len(g.vars)
        n = sum(1 for a in atoms if isinstance(a, Eq))
        k = len(atoms) - n
        blocks.append(BlockShape(m, n, k))
        if n != 0 and n < m:
            violations.append(
                f"exists block has {n} equation(s) for {m} variable(s); "
                "need n >= m or n = 0")

    walk(f, frozenset())
    return ClassBReport(not violations, tuple(blocks), tuple(violations))


def block_parts(b: Exists) -> tuple[tuple[T.Term, ...], tuple[T.Term, ...]]:
    """Equation terms and inequality terms of a conjunctive exists block."""
    atoms = _conjunct_atoms(b.body)
    if atoms is None:
        raise ValueError("exists body is not a conjunction of atoms")
    eqs = tuple(a.term for a in atoms if isinstance(a, Eq))
    ineqs = tuple(a.term for a in atoms if isinstance(a, Geq))
    return eqs, ineqs


# ---------------------------------------------------------------------------
# structural comparison (terms are ignored, everything else must match)


def same_structure(f: Formula, g: Formula) -> bool:
    if type(f) is not type(g):
        return False
    if isinstance(f, Atom):
        return True
    if isinstance(f, Exists):
        return (f.vars == g.vars and f.bounds == g.bounds
                and same_structure(f.body, g.body))
    if isinstance(f, ForAll):
        return (f.var == g.var and f.bound == g.bound
                and same_structure(f.body, g.body))
    return same_structure(f.left, g.left) and same_structure(f.right, g.right)


def aligned_terms(
    f: Formula, g: Formula
) -> Iterator[tuple[T.Term, T.Term, tuple[str, ...], RatBox]]:
    """Positionally paired atom terms of two same-structure formulas,
    each with the quantified variables in scope and their box."""
    from .intervals import box as make_box

    def walk(a: Formula, b: Formula, names: tuple[str, ...], bx: RatBox):
        if isinstance(a, Atom):
            yield a.term, b.term, names, bx
        elif isinstance(a, Exists):
            yield from walk(a.body, b.body, names + a.vars,
                            bx.product(a.bounds))
        elif isinstance(a, ForAll):
            yield from walk(a.body, b.body, names + (a.var,),
                            bx.product(make_box(a.bound)))
        else:
            yield from walk(a.left, b.left, names, bx)
            yield from walk(a.right, b.right, names, bx)

    yield from walk(f, g, (), RatBox(()))


# ---------------------------------------------------------------------------
# printing


def formula_text(f: Formula, _parent: int = 0) -> str:
    """Render in the concrete grammar; reparses to an equal AST."""
    if isinstance(f, Eq):
        return f"{T.term_text(f.term)} = 0"
    if isinstance(f, Geq):
        return f"{T.term_text(f.term)} >= 0"
    if isinstance(f, Exists):
        binders = ", ".join(
            f"{v} in [{_rat(iv.lo)},{_rat(iv.hi)}]"
            for v, iv in zip(f.vars, f.bounds.intervals))
        s = f"exists {binders} . {formula_text(f.body)}"
        return f"({s})" if _parent else s
    if isinstance(f, ForAll):
        iv = f.bound
        s = f"forall {f.var} in [{_rat(iv.lo)},{_rat(iv.hi)}] . {formula_text(f.body)}"
        return f"({s})" if _parent else s
    if isinstance(f, And):
        s = f"{formula_text(f.left, 2)} and {formula_text(f.right, 2)}"
        return f"({s})" if _parent >= 2 else s
    s = f"{formula_text(f.left, 1)} or {formula_text(f.right, 1)}"
    return f"({s})" if _parent else s


def _rat(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
