"""Bounded executable semantics for conditional rewriting.

The conditional rewrite relation is stratified by levels: level 0 rewrites
nothing, and a rule instance fires at level n+1 when all its instantiated
conditions are solved by rewriting at level n.  On top of the level-indexed
one-step and many-step relations this module implements parallel steps over
multihole contexts: a step at level n replaces the contents of each hole
either by a conditional root step at level n or by an arbitrary rewrite
sequence at level n-1.

All searches are bounded (sequence length and visited-set size), so answers
are sound but complete only up to the bounds; whenever a cap cuts a search
short the result says so via its `truncated` flag.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .ctrs import Condition, Ctrs, Rule
from .mctxt import HOLE, Mctxt, MFun, fill, of_term
from .terms import (
    Fun,
    Subst,
    Term,
    apply_subst,
    compose,
    function_positions,
    is_ground,
    match,
    replace_at,
    subterm_at,
    term_key,
    vars_of,
)


class EngineError(RuntimeError):
    """A rule cannot be executed by left-to-right condition solving."""


@dataclass(frozen=True)
class Bounds:
    """Caps for the bounded searches.

    max_level caps the level arguments accepted from the command line,
    max_depth caps rewrite-sequence length, and max_terms caps the number of
    distinct terms a single search may collect.  Results are monotone in each
    bound: enlarging a bound never removes an answer.
    """

    max_level: int = 8
    max_depth: int = 8
    max_terms: int = 4096

    def __post_init__(self) -> None:
        if min(self.max_level, self.max_depth, self.max_terms) < 0:
            raise ValueError("bounds must be non-negative")


KIND_ROOT = "root"
KIND_BELOW = "below"


@dataclass(frozen=True)
class ReachSet:
    """Terms reachable within the bounds, plus whether the search was cut."""

    terms: frozenset[Term]
    truncated: bool

    def __contains__(self, t: Term) -> bool:
        return t in self.terms

    def __iter__(self):
        return iter(sorted(self.terms, key=term_key))

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class EparStep:
    """Witness of a parallel step: context, hole contents, per-hole kind.

    The endpoints are recovered by filling the context with the sources and
    with the targets; `kinds[i]` records whether hole i did a conditional
    root step at the step's level or a rewrite sequence one level below.
    """

    ctx: Mctxt
    sources: tuple[Term, ...]
    targets: tuple[Term, ...]
    kinds: tuple[str, ...]

    def endpoints(self) -> tuple[Term, Term]:
        return fill(self.ctx, self.sources), fill(self.ctx, self.targets)


def trivial_step(t: Term) -> EparStep:
    """The zero-hole step witnessing t related to itself."""
    return EparStep(of_term(t), (), (), ())


@dataclass(frozen=True)
class EparSet:
    """All parallel-step successors found, each with one witness."""

    pairs: tuple[tuple[Term, EparStep], ...]
    truncated: bool

    @cached_property
    def terms(self) -> frozenset[Term]:
        return frozenset(t for t, _ in self.pairs)

    @cached_property
    def _by_term(self) -> dict[Term, EparStep]:
        return dict(self.pairs)

    def witness(self, t: Term) -> EparStep | None:
        return self._by_term.get(t)

    def __contains__(self, t: Term) -> bool:
        return t in self.terms

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


def _check_solvable(rule: Rule, index: int) -> None:
    """Reject rules whose conditions cannot be solved left to right."""
    bound = set(vars_of(rule.lhs))
    for i, cond in enumerate(rule.conds):
        loose = vars_of(cond.lhs) - bound
        if loose:
            names = ", ".join(sorted(str(v) for v in loose))
            raise EngineError(
                f"rule {index + 1} is not solvable left-to-right: condition "
                f"{i + 1} left-hand side {cond.lhs} uses variable(s) {names} "
                f"bound by neither the rule lhs nor earlier condition rhss"
            )
        bound |= vars_of(cond.rhs)


def _solve_conditions(
    conds: tuple[Condition, ...],
    sigma: Subst,
    n: int,
    system: Ctrs,
    bounds: Bounds,
    frozen: frozenset,
) -> tuple[frozenset[Subst], bool]:
    partial: set[Subst] = {sigma}
    truncated = False
    for cond in conds:
        nxt: set[Subst] = set()
        for s in partial:
            lhs_inst = apply_subst(cond.lhs, s)
            if not is_ground(lhs_inst):
                raise EngineError(
                    f"condition left-hand side {lhs_inst} is not ground after "
                    f"substitution; left-to-right solving requires ground goals"
                )
            rhs_inst = apply_subst(cond.rhs, s)
            reach = _cstep_star(lhs_inst, n, system, bounds)
            truncated |= reach.truncated
            for u in reach.terms:
                theta = match(rhs_inst, u)
                if theta is None:
                    continue
                # variables of the subject being rewritten are rigid: a
                # binding for one would claim an instance, not the term itself
                if any(v in frozen for v in theta.domain):
                    continue
                nxt.add(compose(s, theta))
        partial = nxt
        if not partial:
            break
    return frozenset(partial), truncated


def solve_conditions(
    conds,
    sigma: Subst,
    n: int,
    system: Ctrs,
    bounds: Bounds,
    frozen: frozenset = frozenset(),
) -> frozenset[Subst]:
    """All extensions of sigma solving the conditions left to right at level n.

    Each condition's instantiated lhs is rewritten (bounded, level n) and the
    reducts are matched against the instantiated rhs; matches bind the rhs's
    fresh variables.  An empty result means nothing was found within bounds.
    """
    sols, _ = _solve_conditions(tuple(conds), sigma, n, system, bounds, frozen)
    return sols


@lru_cache(maxsize=None)
def _root_steps(t: Term, n: int, system: Ctrs, bounds: Bounds) -> tuple[frozenset[Term], bool]:
    if n <= 0:
        return frozenset(), False
    out: set[Term] = set()
    truncated = False
    rigid = frozenset(vars_of(t))
    for index, rule in enumerate(system.rules):
        sigma = match(rule.lhs, t)
        if sigma is None:
            continue
        _check_solvable(rule, index)
        sols, flag = _solve_conditions(rule.conds, sigma, n - 1, system, bounds, rigid)
        truncated |= flag
        for s in sols:
            out.add(apply_subst(rule.rhs, s))
    return frozenset(out), truncated


def root_steps(t: Term, n: int, system: Ctrs, bounds: Bounds) -> frozenset[Term]:
    """Reducts of t by one conditional root step at level n.

    Level 0 rewrites nothing.  At level n+1 a rule fires when its lhs matches
    t exactly and all conditions are solved at level n.  Sound always;
    complete only up to the bounds used for condition solving.
    """
    steps, _ = _root_steps(t, n, system, bounds)
    return steps


@lru_cache(maxsize=None)
def _cstep_n(t: Term, n: int, system: Ctrs, bounds: Bounds) -> tuple[frozenset[Term], bool]:
    out: set[Term] = set()
    truncated = False
    for pos in function_positions(t):
        sub = subterm_at(t, pos)
        steps, flag = _root_steps(sub, n, system, bounds)
        truncated |= flag
        for u in steps:
            out.add(replace_at(t, pos, u))
    return frozenset(out), truncated


def cstep_n(t: Term, n: int, system: Ctrs, bounds: Bounds) -> frozenset[Term]:
    """All one-step reducts of t at level n (root steps under any context)."""
    steps, _ = _cstep_n(t, n, system, bounds)
    return steps


@lru_cache(maxsize=None)
def _cstep_star(t: Term, n: int, system: Ctrs, bounds: Bounds) -> ReachSet:
    if n <= 0:
        return ReachSet(frozenset({t}), False)
    visited: set[Term] = {t}
    frontier: list[Term] = [t]
    truncated = False
    capped = False
    for _ in range(bounds.max_depth):
        new: list[Term] = []
        for u in sorted(frontier, key=term_key):
            succ, flag = _cstep_n(u, n, system, bounds)
            truncated |= flag
            for v in sorted(succ, key=term_key):
                if v in visited:
                    continue
                if len(visited) >= bounds.max_terms:
                    capped = True
                    break
                visited.add(v)
                new.append(v)
            if capped:
                break
        frontier = new
        if capped or not frontier:
            break
    if capped:
        truncated = True
    elif frontier:
        # depth ran out with a live frontier: flag if more was reachable
        for u in frontier:
            succ, _ = _cstep_n(u, n, system, bounds)
            if succ - visited:
                truncated = True
                break
    return ReachSet(frozenset(visited), truncated)


def cstep_star(t: Term, n: int, system: Ctrs, bounds: Bounds) -> ReachSet:
    """Terms reachable from t by at most max_depth level-n steps.

    Breadth-first by step count, so results do not depend on traversal luck;
    always contains t itself.
    """
    return _cstep_star(t, n, system, bounds)


@lru_cache(maxsize=None)
def _epar_successors(t: Term, n: int, system: Ctrs, bounds: Bounds) -> EparSet:
    if n <= 0:
        # the level-0 parallel relation is the identity
        return EparSet(((t, trivial_step(t)),), False)

    found: dict[Term, EparStep] = {t: trivial_step(t)}
    truncated = False
    capped = False

    def add(u: Term, step: EparStep) -> None:
        nonlocal capped
        if u in found:
            return
        if len(found) >= bounds.max_terms:
            capped = True
            return
        found[u] = step

    roots, flag = _root_steps(t, n, system, bounds)
    truncated |= flag
    for u in sorted(roots, key=term_key):
        add(u, EparStep(HOLE, (t,), (u,), (KIND_ROOT,)))

    below = _cstep_star(t, n - 1, system, bounds)
    truncated |= below.truncated
    for u in sorted(below.terms, key=term_key):
        add(u, EparStep(HOLE, (t,), (u,), (KIND_BELOW,)))

    if isinstance(t, Fun) and t.args and not capped:
        arg_sets = [_epar_successors(a, n, system, bounds) for a in t.args]
        truncated |= any(s.truncated for s in arg_sets)
        for combo in itertools.product(*(s.pairs for s in arg_sets)):
            u = Fun(t.symbol, tuple(term for term, _ in combo))
            steps = [step for _, step in combo]
            witness = EparStep(
                MFun(t.symbol, tuple(s.ctx for s in steps)),
                tuple(src for s in steps for src in s.sources),
                tuple(tgt for s in steps for tgt in s.targets),
                tuple(k for s in steps for k in s.kinds),
            )
            add(u, witness)
            if capped:
                break

    truncated |= capped
    pairs = tuple(sorted(found.items(), key=lambda it: term_key(it[0])))
    return EparSet(pairs, truncated)


def epar_successors(t: Term, n: int, system: Ctrs, bounds: Bounds) -> EparSet:
    """Successors of t under one parallel step at level n, with witnesses.

    A successor replaces the contents of the holes of some multihole context
    over t, each hole independently doing a level-n conditional root step or
    a level-(n-1) rewrite sequence.  Level 0 relates t only to itself.
    """
    return _epar_successors(t, n, system, bounds)


def epar_check(s: Term, u: Term, n: int, system: Ctrs, bounds: Bounds) -> EparStep | None:
    """A witness that s steps to u in parallel at level n, or None.

    None means "not found within bounds", never a proof of absence.
    """
    return _epar_successors(s, n, system, bounds).witness(u)


def verify_epar_step(step: EparStep, n: int, system: Ctrs, bounds: Bounds) -> bool:
    """Replay a witness: refill the context and recheck every hole."""
    if not len(step.sources) == len(step.targets) == len(step.kinds):
        return False
    for src, tgt, kind in zip(step.sources, step.targets, step.kinds):
        if kind == KIND_ROOT:
            if tgt not in root_steps(src, n, system, bounds):
                return False
        elif kind == KIND_BELOW:
            if tgt not in cstep_star(src, n - 1, system, bounds).terms:
                return False
        else:
            return False
    try:
        step.endpoints()
    except ValueError:
        return False
    return True


def clear_caches() -> None:
    """Drop all memoized search results (mainly useful in long test runs)."""
    _root_steps.cache_clear()
    _cstep_n.cache_clear()
    _cstep_star.cache_clear()
    _epar_successors.cache_clear()
