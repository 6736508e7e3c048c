"""Syntactic unification, deterministic renaming-apart, and variant checks.

Renaming is index bumping: a scope hands out strictly increasing indices, so
rules renamed under successive scope states are variable-disjoint by
construction and the whole pipeline stays reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ctrs import Condition, Rule, rule_vars
from .terms import Fun, Subst, Term, Var, apply_subst, compose, iter_vars


@dataclass(frozen=True)
class RenamingScope:
    next_index: int = 0

    def __post_init__(self) -> None:
        if self.next_index < 0:
            raise ValueError("renaming indices are natural numbers")


def _occurs(v: Var, t: Term) -> bool:
    if isinstance(t, Var):
        return t == v
    return any(_occurs(v, a) for a in t.args)


def mgu(s: Term, t: Term) -> Subst | None:
    """Most general unifier of s and t, or None (occurs-check included).

    Recursive descent with eager composition: every popped pair is rewritten
    by the substitution built so far, so the result is idempotent.
    """
    sigma = Subst()
    stack: list[tuple[Term, Term]] = [(s, t)]
    while stack:
        a, b = stack.pop()
        a = apply_subst(a, sigma)
        b = apply_subst(b, sigma)
        if a == b:
            continue
        if isinstance(a, Var):
            if _occurs(a, b):
                return None
            sigma = compose(sigma, Subst({a: b}))
        elif isinstance(b, Var):
            if _occurs(b, a):
                return None
            sigma = compose(sigma, Subst({b: a}))
        elif a.symbol == b.symbol:
            stack.extend(zip(a.args, b.args))
        else:
            return None
    return sigma


def _freshen(occurrences, scope: RenamingScope) -> tuple[Subst, RenamingScope]:
    mapping: dict[Var, Term] = {}
    nxt = scope.next_index
    for v in occurrences:
        if v not in mapping:
            mapping[v] = Var(v.name, nxt)
            nxt += 1
    return Subst(mapping), RenamingScope(nxt)


def rename_term_apart(t: Term, scope: RenamingScope) -> tuple[Term, RenamingScope]:
    """Injectively rename the variables of t to fresh indices from the scope."""
    ren, scope = _freshen(iter_vars(t), scope)
    return apply_subst(t, ren), scope


def rename_apart(rule: Rule, scope: RenamingScope) -> tuple[Rule, RenamingScope]:
    """A variant of the rule over fresh variables, plus the advanced scope."""
    ren, scope = _freshen(rule_vars(rule), scope)
    renamed = Rule(
        apply_subst(rule.lhs, ren),
        apply_subst(rule.rhs, ren),
        tuple(
            Condition(apply_subst(c.lhs, ren), apply_subst(c.rhs, ren))
            for c in rule.conds
        ),
    )
    return renamed, scope


class _NotVariant(Exception):
    pass


def _variant_walk(a: Term, b: Term, fwd: dict[Var, Var], bwd: dict[Var, Var]) -> None:
    if isinstance(a, Var) and isinstance(b, Var):
        if fwd.setdefault(a, b) != b or bwd.setdefault(b, a) != a:
            raise _NotVariant
        return
    if isinstance(a, Fun) and isinstance(b, Fun) and a.symbol == b.symbol:
        for xa, xb in zip(a.args, b.args):
            _variant_walk(xa, xb, fwd, bwd)
        return
    raise _NotVariant


def is_term_variant(a: Term, b: Term) -> bool:
    """True iff some injective variable renaming maps a onto b."""
    try:
        _variant_walk(a, b, {}, {})
        return True
    except _NotVariant:
        return False


def is_variant(r1: Rule, r2: Rule) -> bool:
    """True iff an injective renaming maps r1 onto r2, condition order kept."""
    if len(r1.conds) != len(r2.conds):
        return False
    fwd: dict[Var, Var] = {}
    bwd: dict[Var, Var] = {}
    try:
        _variant_walk(r1.lhs, r2.lhs, fwd, bwd)
        _variant_walk(r1.rhs, r2.rhs, fwd, bwd)
        for c1, c2 in zip(r1.conds, r2.conds):
            _variant_walk(c1.lhs, c2.lhs, fwd, bwd)
            _variant_walk(c1.rhs, c2.rhs, fwd, bwd)
        return True
    except _NotVariant:
        return False
