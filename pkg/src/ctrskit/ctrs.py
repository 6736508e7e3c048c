"""Conditional rewrite systems and their syntactic health checks.

A rule is `lhs -> rhs` guarded by an ordered list of oriented conditions
`s == t`, each read as reachability: an instance fires only if every
instantiated condition left-hand side rewrites to the corresponding
right-hand side.  The checks in this module (variable classification,
proper orientedness, right-stability, left-linearity) are the syntactic
prerequisites the confluence verdict in `analysis` relies on.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .terms import (
    Fun,
    Symbol,
    Term,
    Var,
    is_constructor_term,
    is_ground,
    is_linear,
    iter_vars,
    match,
    render_term,
    subterms,
    vars_of,
)


@dataclass(frozen=True)
class Condition:
    lhs: Term
    rhs: Term

    def __str__(self) -> str:
        return f"{render_term(self.lhs)} == {render_term(self.rhs)}"


@dataclass(frozen=True)
class Rule:
    lhs: Term
    rhs: Term
    conds: tuple[Condition, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "conds", tuple(self.conds))
        if isinstance(self.lhs, Var):
            raise ValueError(f"rule left-hand side may not be a variable: {self.lhs}")

    def __str__(self) -> str:
        base = f"{render_term(self.lhs)} -> {render_term(self.rhs)}"
        if not self.conds:
            return base
        return base + " | " + ", ".join(str(c) for c in self.conds)


def rule_vars(r: Rule) -> Iterable[Var]:
    """Variable occurrences of a rule, left to right: lhs, rhs, conditions."""
    yield from iter_vars(r.lhs)
    yield from iter_vars(r.rhs)
    for c in r.conds:
        yield from iter_vars(c.lhs)
        yield from iter_vars(c.rhs)


@dataclass(frozen=True)
class Ctrs:
    symbols: frozenset[Symbol]
    rules: tuple[Rule, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "symbols", frozenset(self.symbols))
        object.__setattr__(self, "rules", tuple(self.rules))
        for rule in self.rules:
            for t in (rule.lhs, rule.rhs) + tuple(
                side for c in rule.conds for side in (c.lhs, c.rhs)
            ):
                for sub in subterms(t):
                    if isinstance(sub, Fun) and sub.symbol not in self.symbols:
                        raise ValueError(
                            f"symbol {sub.symbol.name!r} not in the declared signature"
                        )

    @classmethod
    def from_rules(cls, rules: Iterable[Rule], extra_symbols: Iterable[Symbol] = ()) -> "Ctrs":
        rules = tuple(rules)
        syms = set(extra_symbols)
        for rule in rules:
            for t in (rule.lhs, rule.rhs) + tuple(
                side for c in rule.conds for side in (c.lhs, c.rhs)
            ):
                for sub in subterms(t):
                    if isinstance(sub, Fun):
                        syms.add(sub.symbol)
        return cls(frozenset(syms), rules)

    @property
    def defined_symbols(self) -> frozenset[Symbol]:
        return frozenset(r.lhs.symbol for r in self.rules if isinstance(r.lhs, Fun))

    @property
    def constructor_symbols(self) -> frozenset[Symbol]:
        return self.symbols - self.defined_symbols


@dataclass(frozen=True)
class Witness:
    """Evidence for a failed property: the offending rule plus an explanation."""

    rule_index: int | None
    detail: str


@dataclass(frozen=True)
class PropertyReport:
    name: str
    holds: bool
    witnesses: tuple[Witness, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "witnesses", tuple(self.witnesses))
        if not self.holds and not self.witnesses:
            raise ValueError(f"failing property {self.name!r} must carry a witness")


def classify_type(system: Ctrs) -> int:
    """Smallest class in 1..4 by where extra variables are allowed.

    1: no extra variables anywhere; 2: rhs variables all bound by the lhs;
    3: rhs variables bound by lhs or conditions; 4: anything else.
    """
    t = 1
    for rule in system.rules:
        lv = vars_of(rule.lhs)
        cv = frozenset().union(
            *(vars_of(c.lhs) | vars_of(c.rhs) for c in rule.conds)
        ) if rule.conds else frozenset()
        rv = vars_of(rule.rhs)
        if rv <= lv and cv <= lv:
            continue
        if rv <= lv:
            t = max(t, 2)
        elif rv <= lv | cv:
            t = max(t, 3)
        else:
            return 4
    return t


def underlying_trs(system: Ctrs) -> list[tuple[Term, Term]]:
    """The unconditional rule pairs obtained by erasing every condition."""
    return [(r.lhs, r.rhs) for r in system.rules]


def is_ground_normal_form_ru(t: Term, system: Ctrs) -> bool:
    """Ground, and no condition-erased rule matches any subterm."""
    if not is_ground(t):
        return False
    lhss = [lhs for lhs, _ in underlying_trs(system)]
    for sub in subterms(t):
        for lhs in lhss:
            if match(lhs, sub) is not None:
                return False
    return True


def check_left_linear(system: Ctrs) -> PropertyReport:
    witnesses = []
    for idx, rule in enumerate(system.rules):
        dups = [v for v, n in Counter(iter_vars(rule.lhs)).items() if n > 1]
        if dups:
            names = ", ".join(sorted(str(v) for v in dups))
            witnesses.append(
                Witness(idx, f"variable(s) {names} repeated in left-hand side {rule.lhs}")
            )
    return PropertyReport("left-linear", not witnesses, tuple(witnesses))


def check_properly_oriented(system: Ctrs) -> PropertyReport:
    """Condition left-hand sides only use variables already determined.

    For rules whose rhs introduces extra variables, condition i may only use
    variables of the lhs and of earlier condition right-hand sides.  Rules
    without extra rhs variables are exempt.
    """
    witnesses = []
    for idx, rule in enumerate(system.rules):
        if vars_of(rule.rhs) <= vars_of(rule.lhs):
            continue
        bound = set(vars_of(rule.lhs))
        for i, cond in enumerate(rule.conds):
            loose = vars_of(cond.lhs) - bound
            if loose:
                names = ", ".join(sorted(str(v) for v in loose))
                witnesses.append(
                    Witness(
                        idx,
                        f"condition {i + 1} left-hand side {render_term(cond.lhs)} "
                        f"uses variable(s) {names} not bound by the rule lhs or "
                        f"earlier condition rhss",
                    )
                )
            bound |= vars_of(cond.rhs)
    return PropertyReport("properly-oriented", not witnesses, tuple(witnesses))


def check_right_stable(system: Ctrs) -> PropertyReport:
    """Condition right-hand sides are fresh and match-only.

    Each condition rhs must be variable-disjoint from the rule lhs, all
    earlier conditions, and its own lhs; and it must be a linear constructor
    term or a ground normal form of the condition-erased system.
    """
    defined = system.defined_symbols
    witnesses = []
    for idx, rule in enumerate(system.rules):
        seen = set(vars_of(rule.lhs))
        for i, cond in enumerate(rule.conds):
            seen |= vars_of(cond.lhs)
            shared = seen & vars_of(cond.rhs)
            if shared:
                names = ", ".join(sorted(str(v) for v in shared))
                witnesses.append(
                    Witness(
                        idx,
                        f"condition {i + 1} right-hand side {render_term(cond.rhs)} "
                        f"shares variable(s) {names} with earlier parts of the rule",
                    )
                )
            ok_shape = (
                is_linear(cond.rhs) and is_constructor_term(cond.rhs, defined)
            ) or is_ground_normal_form_ru(cond.rhs, system)
            if not ok_shape:
                witnesses.append(
                    Witness(
                        idx,
                        f"condition {i + 1} right-hand side {render_term(cond.rhs)} "
                        f"is neither a linear constructor term nor a ground normal "
                        f"form of the condition-erased system",
                    )
                )
            seen |= vars_of(cond.rhs)
    return PropertyReport("right-stable", not witnesses, tuple(witnesses))
