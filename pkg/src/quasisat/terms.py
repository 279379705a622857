"""Expression trees over the fixed function-symbol set.

Nodes: exact rational constants, pi, variables, + - * / (guarded),
natural powers, exp, sin, cos and sqrt (guarded).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Const(Term):
    value: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class Pi(Term):
    pass


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Add(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Sub(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Neg(Term):
    arg: Term


@dataclass(frozen=True)
class Mul(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Div(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Pow(Term):
    base: Term
    exponent: int

    def __post_init__(self) -> None:
        if self.exponent < 0:
            raise ValueError("only natural exponents are allowed")


@dataclass(frozen=True)
class Sin(Term):
    arg: Term


@dataclass(frozen=True)
class Cos(Term):
    arg: Term


@dataclass(frozen=True)
class Exp(Term):
    arg: Term


@dataclass(frozen=True)
class Sqrt(Term):
    arg: Term


def free_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, (Const, Pi)):
        return frozenset()
    if isinstance(t, (Add, Sub, Mul, Div)):
        return free_vars(t.left) | free_vars(t.right)
    if isinstance(t, Pow):
        return free_vars(t.base)
    return free_vars(t.arg)  # Neg, Sin, Cos, Exp, Sqrt


def substitute(t: Term, env: Mapping[str, Fraction]) -> Term:
    """Replace variables by exact rational constants."""
    if isinstance(t, Var):
        if t.name in env:
            return Const(env[t.name])
        return t
    if isinstance(t, (Const, Pi)):
        return t
    if isinstance(t, (Add, Sub, Mul, Div)):
        return type(t)(substitute(t.left, env), substitute(t.right, env))
    if isinstance(t, Pow):
        return Pow(substitute(t.base, env), t.exponent)
    return type(t)(substitute(t.arg, env))


def is_polynomial(t: Term) -> bool:
    if isinstance(t, (Const, Var)):
        return True
    if isinstance(t, (Pi, Sin, Cos, Exp, Sqrt)):
        return False
    if isinstance(t, (Add, Sub, Mul, Div)):
        return is_polynomial(t.left) and is_polynomial(t.right)
    if isinstance(t, Pow):
        return is_polynomial(t.base)
    return is_polynomial(t.arg)  # Neg


def exact_eval(t: Term, env: Mapping[str, Fraction]) -> Fraction:
    """Exact rational evaluation; fails on transcendental nodes."""
    if isinstance(t, Const):
        return t.value
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Add):
        return exact_eval(t.left, env) + exact_eval(t.right, env)
    if isinstance(t, Sub):
        return exact_eval(t.left, env) - exact_eval(t.right, env)
    if isinstance(t, Neg):
        return -exact_eval(t.arg, env)
    if isinstance(t, Mul):
        return exact_eval(t.left, env) * exact_eval(t.right, env)
    if isinstance(t, Div):
        return exact_eval(t.left, env) / exact_eval(t.right, env)
    if isinstance(t, Pow):
        return exact_eval(t.base, env) ** t.exponent
    raise ValueError(f"not exactly evaluable: {type(t).__name__}")


def float_eval(t: Term, env: Mapping[str, float]) -> float:
    """Non-rigorous float evaluation (test oracles only)."""
    if isinstance(t, Const):
        return float(t.value)
    if isinstance(t, Pi):
        return math.pi
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Add):
        return float_eval(t.left, env) + float_eval(t.right, env)
    if isinstance(t, Sub):
        return float_eval(t.left, env) - float_eval(t.right, env)
    if isinstance(t, Neg):
        return -float_eval(t.arg, env)
    if isinstance(t, Mul):
        return float_eval(t.left, env) * float_eval(t.right, env)
    if isinstance(t, Div):
        return float_eval(t.left, env) / float_eval(t.right, env)
    if isinstance(t, Pow):
        return float_eval(t.base, env) ** t.exponent
    if isinstance(t, Sin):
        return math.sin(float_eval(t.arg, env))
    if isinstance(t, Cos):
        return math.cos(float_eval(t.arg, env))
    if isinstance(t, Exp):
        return math.exp(float_eval(t.arg, env))
    return math.sqrt(float_eval(t.arg, env))


_Monomial = tuple["Term", ...]  # sorted atomic factors, with multiplicity


def _expand(t: Term) -> dict[_Monomial, Fraction] | None:
    """Polynomial form of t over atomic factors; None when t contains a
    division by a non-constant."""
    if isinstance(t, Const):
        return {(): t.value} if t.value else {}
    if isinstance(t, (Add, Sub)):
        left = _expand(t.left)
        right = _expand(t.right)
        if left is None or right is None:
            return None
        sign = 1 if isinstance(t, Add) else -1
        out = dict(left)
        for mono, c in right.items():
            got = out.get(mono, Fraction(0)) + sign * c
            if got:
                out[mono] = got
            else:
                out.pop(mono, None)
        return out
    if isinstance(t, Neg):
        inner = _expand(t.arg)
        if inner is None:
            return None
        return {m: -c for m, c in inner.items()}
    if isinstance(t, Mul):
        left = _expand(t.left)
        right = _expand(t.right)
        if left is None or right is None:
            return None
        return _convolve(left, right)
    if isinstance(t, Div):
        num = _expand(t.left)
        den = _expand(t.right)
        if num is None or den is None:
            return None
        if len(den) == 1 and () in den:
            return {m: c / den[()] for m, c in num.items()}
        return None
    if isinstance(t, Pow):
        base = _expand(t.base)
        if base is None:
            return None
        out: dict[_Monomial, Fraction] = {(): Fraction(1)}
        for _ in range(t.exponent):
            out = _convolve(out, base)
        return out
    return {(t,): Fraction(1)}  # Var, Pi, Sin, Cos, Exp, Sqrt are atomic


def _convolve(
    a: dict[_Monomial, Fraction], b: dict[_Monomial, Fraction]
) -> dict[_Monomial, Fraction]:
    out: dict[_Monomial, Fraction] = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            mono = tuple(sorted(ma + mb, key=term_text))
            got = out.get(mono, Fraction(0)) + ca * cb
            if got:
                out[mono] = got
            else:
                out.pop(mono, None)
    return out


def expand_normal(t: Term) -> Term:
    """Canonical sum-of-monomials form over atomic subterms, so that
    syntactically common parts of differences cancel exactly.  Terms with
    non-constant divisors are returned unchanged."""
    poly = _expand(t)
    if poly is None:
        return t
    total: Term | None = None
    for mono in sorted(poly, key=lambda m: (len(m), tuple(map(term_text, m)))):
        c = poly[mono]
        factor: Term | None = None if c == 1 and mono else Const(c)
        for atom in mono:
            factor = atom if factor is None else Mul(factor, atom)
        total = factor if total is None else Add(total, factor)
    return total if total is not None else Const(Fraction(0))


_PREC_ADD, _PREC_MUL, _PREC_UNARY, _PREC_POW = 1, 2, 3, 4


def term_text(t: Term, _parent: int = 0) -> str:
    """Canonical ASCII rendering; reparses to a structurally equal term."""
    if isinstance(t, Const):
        v = t.value
        if v.denominator == 1:
            s = str(v.numerator)
            return f"({s})" if v < 0 and _parent > _PREC_ADD else s
        # a fraction literal is itself a division, so treat it like one
        s = f"{v.numerator}/{v.denominator}"
        return f"({s})" if _parent > _PREC_MUL else s
    if isinstance(t, Pi):
        return "pi"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, (Add, Sub)):
        op = " + " if isinstance(t, Add) else " - "
        s = term_text(t.left, _PREC_ADD) + op + term_text(t.right, _PREC_ADD + 1)
        return f"({s})" if _parent > _PREC_ADD else s
    if isinstance(t, Neg):
        s = "-" + term_text(t.arg, _PREC_UNARY)
        return f"({s})" if _parent >= _PREC_MUL else s
    if isinstance(t, (Mul, Div)):
        op = "*" if isinstance(t, Mul) else "/"
        s = term_text(t.left, _PREC_MUL) + op + term_text(t.right, _PREC_MUL + 1)
        return f"({s})" if _parent > _PREC_MUL else s
    if isinstance(t, Pow):
        s = term_text(t.base, _PREC_POW + 1) + f"^{t.exponent}"
        return f"({s})" if _parent > _PREC_POW else s
    name = type(t).__name__.lower()
    return f"{name}({term_text(t.arg)})"
