"""Exact finite groups and their actions on finite configuration spaces.

Elements are indices into the owning group. Cyclic groups and symmetric
groups compose by closed-form rules; groups given by a Cayley table or
generated by permutations keep an explicit table up to ``TABLE_LIMIT``
elements and compose lazily beyond that.
"""

from __future__ import annotations

import itertools
import math
import random
from collections.abc import Callable, Hashable, Iterable, Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GroupMismatchError, QRFError

TABLE_LIMIT = 4096


@dataclass(frozen=True, eq=False)
class GroupElement:
    group: FiniteGroup
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.group.order:
            raise DomainError(f"index {self.index} out of range for {self.group.group_id}")

    @property
    def group_id(self) -> str:
        return self.group.group_id

    @property
    def label(self):
        return self.group.label(self.index)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.group_id != self.group_id:
            raise GroupMismatchError(f"cannot compare elements of {self.group_id} and {other.group_id}")
        return self.index == other.index

    def __hash__(self):
        return hash((self.group_id, self.index))

    def __mul__(self, other):
        return compose(self, other)

    def __repr__(self):
        return f"{self.group_id}[{self.label!r}]"


class FiniteGroup:
    """Abstract finite group over element indices ``0 .. order-1``."""

    group_id: str
    order: int
    identity_index: int = 0

    def compose_index(self, i: int, j: int) -> int:
        raise NotImplementedError

    def inverse_index(self, i: int) -> int:
        raise NotImplementedError

    def label(self, i: int) -> Hashable:
        return i

    def index_of(self, label) -> int:
        if isinstance(label, (int, np.integer)) and 0 <= label < self.order:
            return int(label)
        raise DomainError(f"{label!r} is not an element of {self.group_id}")

    def __call__(self, label) -> GroupElement:
        return GroupElement(self, self.index_of(label))

    def element(self, index: int) -> GroupElement:
        return GroupElement(self, index)

    @property
    def identity(self) -> GroupElement:
        return GroupElement(self, self.identity_index)

    def elements(self) -> Iterator[GroupElement]:
        for i in range(self.order):
            yield GroupElement(self, i)

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"<{type(self).__name__} {self.group_id} order={self.order}>"


class CyclicGroup(FiniteGroup):
    """Z_n under addition mod n; labels are the residues themselves."""

    def __init__(self, n: int):
        if n < 1:
            raise DomainError("cyclic group modulus must be positive")
        self.n = n
        self.order = n
        self.group_id = f"Z{n}"

    def compose_index(self, i, j):
        return (i + j) % self.n

    def inverse_index(self, i):
        return (-i) % self.n


class TableGroup(FiniteGroup):
    """Group given by an explicit Cayley table ``table[i, j] = i * j``."""

    def __init__(self, table, labels: Sequence | None = None, group_id: str = "T", check: bool = True):
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n):
            raise DomainError("Cayley table must be square")
        if n > TABLE_LIMIT:
            raise DomainError(f"explicit tables are limited to {TABLE_LIMIT} elements")
        self.table = table
        self.order = n
        self.group_id = group_id
        self.labels = list(labels) if labels is not None else list(range(n))
        self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        ids = [e for e in range(n) if all(table[e, i] == i and table[i, e] == i for i in range(n))]
        if not ids:
            raise DomainError("table has no two-sided identity")
        self.identity_index = ids[0]
        self._inv = np.full(n, -1, dtype=np.int64)
        for i in range(n):
            hits = np.nonzero(table[i] == self.identity_index)[0]
            for j in hits:
                if table[j, i] == self.identity_index:
                    self._inv[i] = j
                    break
        if (self._inv < 0).any():
            raise DomainError("table has an element without a two-sided inverse")
        if check:
            bad = associativity_violations(self)
            if bad:
                raise DomainError(f"table is not associative, e.g. at {bad[0]}")

    def compose_index(self, i, j):
        return int(self.table[i, j])

    def inverse_index(self, i):
        return int(self._inv[i])

    def label(self, i):
        return self.labels[i]

    def index_of(self, label):
        try:
            return self._label_index[label]
        except (KeyError, TypeError):
            raise DomainError(f"{label!r} is not an element of {self.group_id}") from None


def compose_perm(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """(p∘q)(x) = p(q(x))."""
    return tuple(p[x] for x in q)


def invert_perm(p: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, pi in enumerate(p):
        inv[pi] = i
    return tuple(inv)


def is_perm(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(len(p)))


def perm_from_cycles(n: int, cycles: Iterable[Sequence[int]]) -> tuple[int, ...]:
    perm = list(range(n))
    for cyc in cycles:
        for k, x in enumerate(cyc):
            if perm[x] != x:
                raise DomainError("cycles must be disjoint")
            perm[x] = cyc[(k + 1) % len(cyc)]
    return tuple(perm)


def perm_cycles(p: Sequence[int]) -> list[tuple[int, ...]]:
    seen, out = set(), []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = p[x]
        out.append(tuple(cyc))
    return out


class SymmetricGroup(FiniteGroup):
    """S_n with elements ranked by Lehmer code; composition is rule-backed."""

    def __init__(self, n: int):
        self.n = n
        self.degree = n
        self.order = math.factorial(n)
        self.group_id = f"S{n}"
        self.identity_index = 0

    def unrank(self, r: int) -> tuple[int, ...]:
        items = list(range(self.n))
        out = []
        for k in range(self.n, 0, -1):
            f = math.factorial(k - 1)
            q, r = divmod(r, f)
            out.append(items.pop(q))
        return tuple(out)

    def rank(self, p: Sequence[int]) -> int:
        items = list(range(self.n))
        r = 0
        for k, x in enumerate(p):
            q = items.index(x)
            r += q * math.factorial(self.n - 1 - k)
            items.pop(q)
        return r

    def compose_index(self, i, j):
        return self.rank(compose_perm(self.unrank(i), self.unrank(j)))

    def inverse_index(self, i):
        return self.rank(invert_perm(self.unrank(i)))

    def label(self, i):
        return self.unrank(i)

    def index_of(self, label):
        p = tuple(label) if not isinstance(label, (int, np.integer)) else None
        if p is None or len(p) != self.n or not is_perm(p):
            raise DomainError(f"{label!r} is not a permutation of {self.n} points")
        return self.rank(p)

    def cycles(self, *cycles) -> GroupElement:
        return self(perm_from_cycles(self.n, cycles))


class PermutationGroup(FiniteGroup):
    """Subgroup of S_degree generated by the given permutations.

    Elements are enumerated by closure and sorted, so indices do not depend on
    generator order. A Cayley table is built when the order is at most
    ``TABLE_LIMIT``; larger groups compose permutations and look the result up.
    """

    def __init__(self, generators: Iterable[Sequence[int]], degree: int | None = None,
                 group_id: str | None = None, max_order: int = 1_000_000):
        gens = [tuple(g) for g in generators]
        if degree is None:
            if not gens:
                raise DomainError("degree required when no generators are given")
            degree = len(gens[0])
        for g in gens:
            if len(g) != degree or not is_perm(g):
                raise DomainError(f"{g} is not a permutation of {degree} points")
        self.degree = degree
        self.generators = gens
        ident = tuple(range(degree))
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for p in frontier:
                for g in gens:
                    r = compose_perm(g, p)
                    if r not in seen:
                        seen.add(r)
                        nxt.append(r)
                        if len(seen) > max_order:
                            raise QRFError(f"generated group exceeds {max_order} elements")
            frontier = nxt
        self.perms = sorted(seen)
        self._index = {p: i for i, p in enumerate(self.perms)}
        self.order = len(self.perms)
        self.identity_index = self._index[ident]
        self.group_id = group_id or f"Perm{degree}<{';'.join(','.join(map(str, g)) for g in sorted(gens))}>"
        self.table = None
        if self.order <= TABLE_LIMIT and degree <= 15:
            self.table = self._build_table()

    def _build_table(self):
        # perms are sorted lexicographically, which equals numeric order of base-degree codes
        P = np.array(self.perms, dtype=np.int64).reshape(self.order, self.degree)
        weights = self.degree ** np.arange(self.degree - 1, -1, -1, dtype=np.int64)
        codes = P @ weights
        table = np.empty((self.order, self.order), dtype=np.int64)
        for i in range(self.order):
            table[i] = np.searchsorted(codes, P[i][P] @ weights)
        return table

    def compose_index(self, i, j):
        if self.table is not None:
            return int(self.table[i, j])
        return self._index[compose_perm(self.perms[i], self.perms[j])]

    def inverse_index(self, i):
        return self._index[invert_perm(self.perms[i])]

    def label(self, i):
        return self.perms[i]

    def index_of(self, label):
        try:
            return self._index[tuple(label)]
        except (KeyError, TypeError):
            raise DomainError(f"{label!r} is not an element of {self.group_id}") from None

    def cycles(self, *cycles) -> GroupElement:
        return self(perm_from_cycles(self.degree, cycles))


def _check_same(g: GroupElement, h: GroupElement):
    if g.group_id != h.group_id:
        raise GroupMismatchError(f"{g!r} and {h!r} belong to different groups")


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    _check_same(g, h)
    return GroupElement(g.group, g.group.compose_index(g.index, h.index))


def inverse(g: GroupElement) -> GroupElement:
    return GroupElement(g.group, g.group.inverse_index(g.index))


def associativity_violations(group: FiniteGroup, samples: int = 20000, seed: int = 0, exhaustive_limit: int = 64):
    """Triples (i, j, k) where (ij)k != i(jk); exhaustive for small groups."""
    n = group.order
    c = group.compose_index
    if n <= exhaustive_limit:
        triples = itertools.product(range(n), repeat=3)
    else:
        rng = random.Random(seed)
        triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(samples))
    return [(i, j, k) for i, j, k in triples if c(c(i, j), k) != c(i, c(j, k))]


class ConfigSpace:
    """Finite point set X with a left action of ``group``.

    ``action(index, x)`` receives the element index, not the element object,
    so builders can stay cheap.
    """

    def __init__(self, group: FiniteGroup, points: Iterable[Hashable],
                 action: Callable[[int, Hashable], Hashable], name: str = "X"):
        self.group = group
        self.points = tuple(points)
        self._point_set = frozenset(self.points)
        self._position = {x: i for i, x in enumerate(self.points)}
        self._action = action
        self.name = name

    def __contains__(self, x):
        try:
            return x in self._point_set
        except TypeError:
            return False

    def __len__(self):
        return len(self.points)

    def position(self, x) -> int:
        """Index of ``x`` in ``points`` (basis ordering for state vectors)."""
        self.check_point(x)
        return self._position[x]

    def check_point(self, x):
        if x not in self:
            raise DomainError(f"{x!r} is not a point of {self.name}")

    def act(self, g: GroupElement, x):
        if g.group_id != self.group.group_id:
            raise GroupMismatchError(f"{g!r} does not act on {self.name}")
        self.check_point(x)
        return self._action(g.index, x)

    def act_index(self, i: int, x):
        return self._action(i, x)

    def orbit(self, x) -> frozenset:
        self.check_point(x)
        return frozenset(self._action(i, x) for i in range(self.group.order))

    def stabiliser(self, x) -> frozenset[GroupElement]:
        self.check_point(x)
        return frozenset(GroupElement(self.group, i) for i in range(self.group.order) if self._action(i, x) == x)

    def is_transitive(self) -> bool:
        if not self.points:
            return True
        return self.orbit(self.points[0]) == self._point_set

    def is_free(self) -> bool:
        return all(len(self.stabiliser(x)) == 1 for x in self.points)

    def is_regular(self) -> bool:
        return self.is_transitive() and self.is_free()

    def __repr__(self):
        return f"<ConfigSpace {self.name} |X|={len(self.points)} under {self.group.group_id}>"

    @classmethod
    def regular(cls, group: FiniteGroup) -> ConfigSpace:
        """G acting on itself by left multiplication; points are element labels."""
        if isinstance(group, CyclicGroup):
            n = group.n
            return cls(group, range(n), lambda i, x: (i + x) % n, name=f"{group.group_id}-regular")
        labels = [group.label(i) for i in range(group.order)]
        return cls(group, labels, lambda i, x: group.label(group.compose_index(i, group.index_of(x))),
                   name=f"{group.group_id}-regular")

    @classmethod
    def dial(cls, group: CyclicGroup, n: int) -> ConfigSpace:
        """Z_m acting on an n-valued dial by addition mod n (n must divide m)."""
        if group.n % n:
            raise DomainError(f"dial size {n} must divide {group.n}")
        return cls(group, range(n), lambda i, x: (i + x) % n, name=f"dial{n}")

    @classmethod
    def trivial(cls, group: FiniteGroup, points: Iterable[Hashable]) -> ConfigSpace:
        return cls(group, points, lambda i, x: x, name="trivial")

    @classmethod
    def permutation(cls, group: PermutationGroup | SymmetricGroup) -> ConfigSpace:
        """Natural action of a permutation group on ``range(degree)``."""
        return cls(group, range(group.degree), lambda i, x: group.label(i)[x], name=f"{group.group_id}-natural")


def act(space: ConfigSpace, g: GroupElement, x):
    return space.act(g, x)


def stabiliser(x, space: ConfigSpace) -> frozenset[GroupElement]:
    return space.stabiliser(x)


def is_regular(space: ConfigSpace) -> bool:
    return space.is_regular()
