"""One-counter systems, configurations, transition sequences and paths.

States are dense integer indices ``0..n-1``; display names only matter at the
I/O boundary.  A transition carries its guard: ``"pos"`` transitions fire when
the counter is positive, ``"zero"`` transitions (zero tests) fire when it is
zero.  ``"neg"`` is used only by one-Z-counter systems.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .errors import NotFireable, PreconditionError

POS = "pos"
ZERO = "zero"
NEG = "neg"
GUARDS = (POS, ZERO, NEG)


class Transition(NamedTuple):
    src: int
    eff: int
    dst: int
    guard: str = POS


class Config(NamedTuple):
    state: int
    counter: int


TransitionSeq = Sequence[Transition]


def _triples(items: Iterable, effects: tuple[int, ...], n: int, what: str) -> tuple:
    out = set()
    for item in items:
        src, eff, dst = (int(x) for x in item)
        if not (0 <= src < n and 0 <= dst < n):
            raise ValueError(f"{what} transition {(src, eff, dst)} references a state outside 0..{n - 1}")
        if eff not in effects:
            raise ValueError(f"{what} transition {(src, eff, dst)} has effect outside {effects}")
        out.add((src, eff, dst))
    return tuple(sorted(out))


@dataclass(frozen=True)
class Ocs:
    """A one-counter system.

    ``t_pos`` holds the non-zero transitions (effects in {-1, 0, 1}) and
    ``t_zero`` the zero tests (effects in {0, 1}).  Both are stored as sorted,
    duplicate-free tuples of ``(src, eff, dst)`` triples, so two systems built
    from the same sets compare equal.
    """

    n: int
    t_pos: tuple = ()
    t_zero: tuple = ()
    names: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("an OCS needs at least one state")
        object.__setattr__(self, "t_pos", _triples(self.t_pos, (-1, 0, 1), self.n, "non-zero"))
        object.__setattr__(self, "t_zero", _triples(self.t_zero, (0, 1), self.n, "zero-test"))
        names = tuple(self.names) if self.names else tuple(f"q{i}" for i in range(self.n))
        if len(names) != self.n or len(set(names)) != self.n:
            raise ValueError("state names must be distinct and one per state")
        object.__setattr__(self, "names", names)

    @cached_property
    def transitions(self) -> tuple[Transition, ...]:
        """Canonical transition list: non-zero transitions, then zero tests."""
        return tuple(Transition(s, e, d, POS) for s, e, d in self.t_pos) + tuple(
            Transition(s, e, d, ZERO) for s, e, d in self.t_zero
        )

    @cached_property
    def transition_index(self) -> dict[Transition, int]:
        return {t: i for i, t in enumerate(self.transitions)}

    @cached_property
    def pos_out(self) -> tuple[tuple[tuple[int, int, int], ...], ...]:
        """Per state, ``(eff, dst, transition index)`` of its non-zero transitions."""
        return self._out(POS)

    @cached_property
    def zero_out(self) -> tuple[tuple[tuple[int, int, int], ...], ...]:
        return self._out(ZERO)

    def _out(self, guard):
        out = [[] for _ in range(self.n)]
        for i, t in enumerate(self.transitions):
            if t.guard == guard:
                out[t.src].append((t.eff, t.dst, i))
        return tuple(tuple(x) for x in out)

    @cached_property
    def _name_index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def index(self, name: str) -> int:
        try:
            return self._name_index[name]
        except KeyError:
            raise KeyError(f"unknown state {name!r}") from None

    def config(self, name: str, counter: int) -> Config:
        return Config(self.index(name), counter)

    def has(self, t: Transition) -> bool:
        return t in self.transition_index

    def __repr__(self):
        return f"Ocs(n={self.n}, |T>0|={len(self.t_pos)}, |T=0|={len(self.t_zero)})"


@dataclass(frozen=True)
class Path:
    """``configs[i]`` fires ``transitions[i]`` to reach ``configs[i + 1]``."""

    configs: tuple[Config, ...]
    transitions: tuple[Transition, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "configs", tuple(Config(*c) for c in self.configs))
        object.__setattr__(self, "transitions", tuple(Transition(*t) for t in self.transitions))
        if len(self.configs) != len(self.transitions) + 1:
            raise ValueError("a path has exactly one more configuration than transitions")

    def __len__(self):
        return len(self.transitions)

    @property
    def src(self) -> Config:
        return self.configs[0]

    @property
    def targ(self) -> Config:
        return self.configs[-1]

    @property
    def proj(self) -> tuple[Transition, ...]:
        return self.transitions

    @property
    def steps(self) -> list[tuple[Config, Transition]]:
        return list(zip(self.configs, self.transitions))

    @property
    def effect(self) -> int:
        return self.targ.counter - self.src.counter

    @property
    def max_counter(self) -> int:
        return max(c.counter for c in self.configs)

    @property
    def zeros(self) -> int:
        """Number of intermediate configurations with counter zero."""
        return sum(1 for c in self.configs[1:-1] if c.counter == 0)

    def __add__(self, other: Path) -> Path:
        if self.targ != other.src:
            raise PreconditionError(f"cannot concatenate: {self.targ} != {other.src}")
        return Path(self.configs + other.configs[1:], self.transitions + other.transitions)


def empty_path(gamma: Config) -> Path:
    return Path((Config(*gamma),), ())


def concat(*paths: Path) -> Path:
    out = paths[0]
    for p in paths[1:]:
        out = out + p
    return out


def effect(sigma: Iterable[Transition]) -> int:
    return sum(t[1] for t in sigma)


def is_consistent(sigma: Sequence[Transition]) -> bool:
    return all(sigma[i].dst == sigma[i + 1].src for i in range(len(sigma) - 1))


def guard_allows(guard: str, counter: int) -> bool:
    if guard == POS:
        return counter > 0
    if guard == ZERO:
        return counter == 0
    return counter < 0


def fire(gamma: Config, t: Transition) -> Config:
    """Fire ``t`` at ``gamma`` under one-counter semantics (counter stays in N)."""
    state, counter = gamma
    if t.src != state:
        raise NotFireable(f"{t} does not start in state {state}")
    if t.guard not in (POS, ZERO) or not guard_allows(t.guard, counter):
        raise NotFireable(f"{t} is not fireable at counter {counter}")
    if counter + t.eff < 0:
        raise NotFireable(f"{t} would make the counter negative")
    return Config(t.dst, counter + t.eff)


def fasten(gamma: Config, sigma: Sequence[Transition]) -> Path:
    """The unique path from ``gamma`` whose projection is ``sigma``."""
    configs = [Config(*gamma)]
    for i, t in enumerate(sigma):
        try:
            configs.append(fire(configs[-1], t))
        except NotFireable as exc:
            raise NotFireable(f"step {i}: {exc}", step=i) from None
    return Path(tuple(configs), tuple(sigma))


class Violation(NamedTuple):
    step: int
    rule: str
    detail: str


def validate_path(rho: Path, ocs: Ocs | None = None) -> list[Violation]:
    """Check every path invariant; an empty list means the path is valid.

    With ``ocs`` given, each transition must also belong to the system.
    """
    out = []
    for i, c in enumerate(rho.configs):
        if c.counter < 0:
            out.append(Violation(i, "nonnegative", f"counter {c.counter} at configuration {i}"))
    for i, (gamma, t) in enumerate(zip(rho.configs, rho.transitions)):
        nxt = rho.configs[i + 1]
        if ocs is not None and not ocs.has(t):
            out.append(Violation(i, "membership", f"{t} is not a transition of the system"))
        if t.src != gamma.state:
            out.append(Violation(i, "source", f"{t} fired in state {gamma.state}"))
        if t.guard not in (POS, ZERO) or not guard_allows(t.guard, gamma.counter):
            out.append(Violation(i, "guard", f"{t.guard} transition at counter {gamma.counter}"))
        if nxt != (t.dst, gamma.counter + t.eff):
            out.append(Violation(i, "result", f"{t} at {tuple(gamma)} does not yield {tuple(nxt)}"))
    return out


def remove_repeats(rho: Path) -> Path:
    """Excise loops between equal configurations until none repeats.

    Leftmost first: for the earliest configuration that occurs again, jump to
    its last occurrence.  Kept positions are original positions, so a single
    left-to-right pass reaches the fixpoint.
    """
    last = {c: i for i, c in enumerate(rho.configs)}
    m = len(rho.transitions)
    configs, trans = [], []
    i = 0
    while True:
        i = last[rho.configs[i]]
        configs.append(rho.configs[i])
        if i == m:
            break
        trans.append(rho.transitions[i])
        i += 1
    return Path(tuple(configs), tuple(trans))


def split_arcs(rho: Path) -> list[Path]:
    """Cut a zero-to-zero path at each configuration with counter zero."""
    if rho.src.counter != 0 or rho.targ.counter != 0:
        raise PreconditionError("split_arcs needs a path from and to counter value zero")
    out = []
    start = 0
    for i in range(1, len(rho.configs)):
        if rho.configs[i].counter == 0:
            out.append(Path(rho.configs[start : i + 1], rho.transitions[start:i]))
            start = i
    return out


def is_arc(rho: Path) -> bool:
    return (
        rho.src.counter == 0
        and rho.targ.counter == 0
        and all(c.counter > 0 for c in rho.configs[1:-1])
    )


def is_low(rho: Path, n: int) -> bool:
    """All configurations, the target included, stay strictly below ``5n``."""
    return all(c.counter < 5 * n for c in rho.configs)
