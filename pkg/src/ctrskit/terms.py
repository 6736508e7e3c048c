"""First-order terms, positions, substitutions, matching, and basic predicates.

Terms are immutable values with structural equality.  A variable carries a
base name plus an optional natural-number index; renaming machinery only ever
bumps the index, so parser-made variables (index ``None``) never collide with
renamed ones.  Positions are 1-indexed paths, the root being the empty tuple.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Union


class PositionError(ValueError):
    """A position does not exist in the term it was used on."""


@dataclass(frozen=True)
class Symbol:
    name: str
    arity: int

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("symbol name must be non-empty")
        if self.arity < 0:
            raise ValueError(f"symbol {self.name!r} has negative arity")


@dataclass(frozen=True)
class Var:
    name: str
    index: Optional[int] = None

    def __str__(self) -> str:
        return self.name if self.index is None else f"{self.name}#{self.index}"


@dataclass(frozen=True)
class Fun:
    symbol: Symbol
    args: tuple["Term", ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) != self.symbol.arity:
            raise ValueError(
                f"symbol {self.symbol.name!r} has arity {self.symbol.arity}, "
                f"got {len(self.args)} argument(s)"
            )

    def __str__(self) -> str:
        return render_term(self)


Term = Union[Var, Fun]
Position = tuple[int, ...]


def render_term(t: Term) -> str:
    """Concrete syntax: ``f(x, a)`` for applications, bare name for leaves."""
    if isinstance(t, Var):
        return str(t)
    if not t.args:
        return t.symbol.name
    return f"{t.symbol.name}({', '.join(render_term(a) for a in t.args)})"


class Subst:
    """A finite map from variables to terms, the identity outside its domain.

    Bindings that map a variable to itself are dropped, so two substitutions
    are equal exactly when they act the same on every term.
    """

    __slots__ = ("_map",)

    def __init__(self, mapping: Mapping[Var, Term] | None = None):
        m: dict[Var, Term] = {}
        if mapping:
            for v, t in mapping.items():
                if t != v:
                    m[v] = t
        object.__setattr__(self, "_map", m)

    def get(self, v: Var) -> Term:
        return self._map.get(v, v)

    @property
    def domain(self) -> frozenset[Var]:
        return frozenset(self._map)

    def items(self) -> Iterable[tuple[Var, Term]]:
        return self._map.items()

    def __len__(self) -> int:
        return len(self._map)

    def __bool__(self) -> bool:
        return bool(self._map)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subst):
            return NotImplemented
        return self._map == other._map

    def __hash__(self) -> int:
        return hash(frozenset(self._map.items()))

    def __repr__(self) -> str:
        inner = ", ".join(
            f"{v} -> {render_term(t)}"
            for v, t in sorted(self._map.items(), key=lambda it: term_key(it[0]))
        )
        return "{" + inner + "}"


def iter_vars(t: Term) -> Iterator[Var]:
    """Left-to-right occurrences of variables, with repetitions."""
    if isinstance(t, Var):
        yield t
    else:
        for a in t.args:
            yield from iter_vars(a)


def vars_of(t: Term) -> frozenset[Var]:
    return frozenset(iter_vars(t))


def is_linear(t: Term) -> bool:
    """True iff no variable occurs twice in t."""
    seen: set[Var] = set()
    for v in iter_vars(t):
        if v in seen:
            return False
        seen.add(v)
    return True


def is_ground(t: Term) -> bool:
    if isinstance(t, Var):
        return False
    return all(is_ground(a) for a in t.args)


def is_constructor_term(t: Term, defined: frozenset[Symbol] | set[Symbol]) -> bool:
    """True iff no function node of t carries a symbol from `defined`."""
    if isinstance(t, Var):
        return True
    if t.symbol in defined:
        return False
    return all(is_constructor_term(a, defined) for a in t.args)


def subterm_at(t: Term, p: Position) -> Term:
    cur = t
    for depth, i in enumerate(p):
        if isinstance(cur, Var):
            raise PositionError(
                f"position {list(p)} traverses variable {cur} at depth {depth}"
            )
        if not 1 <= i <= len(cur.args):
            raise PositionError(
                f"position {list(p)}: index {i} exceeds arity of {cur.symbol.name}"
            )
        cur = cur.args[i - 1]
    return cur


def replace_at(t: Term, p: Position, u: Term) -> Term:
    if not p:
        return u
    if isinstance(t, Var):
        raise PositionError(f"position {list(p)} traverses variable {t}")
    i = p[0]
    if not 1 <= i <= len(t.args):
        raise PositionError(f"index {i} exceeds arity of {t.symbol.name}")
    args = list(t.args)
    args[i - 1] = replace_at(args[i - 1], p[1:], u)
    return Fun(t.symbol, tuple(args))


def positions(t: Term) -> list[Position]:
    """All positions of t, root first, arguments left to right."""
    out: list[Position] = []

    def walk(u: Term, prefix: Position) -> None:
        out.append(prefix)
        if isinstance(u, Fun):
            for i, a in enumerate(u.args, start=1):
                walk(a, prefix + (i,))

    walk(t, ())
    return out


def function_positions(t: Term) -> list[Position]:
    """Positions whose subterm is a function application, in left-outer order."""
    out: list[Position] = []

    def walk(u: Term, prefix: Position) -> None:
        if isinstance(u, Fun):
            out.append(prefix)
            for i, a in enumerate(u.args, start=1):
                walk(a, prefix + (i,))

    walk(t, ())
    return out


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, Fun):
        for a in t.args:
            yield from subterms(a)


def apply_subst(t: Term, s: Subst) -> Term:
    if isinstance(t, Var):
        return s.get(t)
    if not s:
        return t
    return Fun(t.symbol, tuple(apply_subst(a, s) for a in t.args))


def match(pattern: Term, subject: Term) -> Subst | None:
    """A substitution s with apply_subst(pattern, s) == subject, or None.

    Matching is purely syntactic; repeated pattern variables must match
    structurally equal subjects.
    """
    bindings: dict[Var, Term] = {}
    stack: list[tuple[Term, Term]] = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if isinstance(p, Var):
            bound = bindings.get(p)
            if bound is None:
                bindings[p] = s
            elif bound != s:
                return None
        elif isinstance(s, Fun) and s.symbol == p.symbol:
            stack.extend(zip(p.args, s.args))
        else:
            return None
    return Subst(bindings)


def compose(s1: Subst, s2: Subst) -> Subst:
    """The substitution acting as s1 followed by s2."""
    m: dict[Var, Term] = {v: apply_subst(t, s2) for v, t in s1.items()}
    for v, t in s2.items():
        m.setdefault(v, t)
    return Subst(m)


def term_size(t: Term) -> int:
    """Number of nodes, variables included."""
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(a) for a in t.args)


def term_key(t: Term):
    """A total-order key on terms, used wherever deterministic output matters."""
    if isinstance(t, Var):
        return (0, t.name, -1 if t.index is None else t.index)
    return (1, t.symbol.name, t.symbol.arity, tuple(term_key(a) for a in t.args))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    # all tuples of `parts` positive integers summing to `total`
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def ground_terms(symbols: Iterable[Symbol], max_size: int) -> list[Term]:
    """All ground terms over `symbols` with at most `max_size` nodes.

    Deterministic order: by size, then by symbol name, then argument choices.
    """
    syms = sorted(set(symbols), key=lambda f: (f.name, f.arity))
    by_size: list[list[Term]] = [[] for _ in range(max_size + 1)]
    for k in range(1, max_size + 1):
        bucket = by_size[k]
        for f in syms:
            if f.arity == 0:
                if k == 1:
                    bucket.append(Fun(f))
                continue
            for split in _compositions(k - 1, f.arity):
                pools = [by_size[sz] for sz in split]
                if any(not pool for pool in pools):
                    continue
                for combo in itertools.product(*pools):
                    bucket.append(Fun(f, combo))
    out: list[Term] = []
    for bucket in by_size:
        out.extend(bucket)
    return out
