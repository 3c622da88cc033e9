"""Space of models X^N, its orbits under the diagonal action, sections and
the counterpart relation they induce."""

from __future__ import annotations

import random
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import AmbiguityError, DomainError, GroupMismatchError, QRFError
from .groups import ConfigSpace, GroupElement, compose, inverse


@dataclass(frozen=True, order=True)
class Model:
    configs: tuple
    tags: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if not isinstance(self.configs, tuple):
            object.__setattr__(self, "configs", tuple(self.configs))

    def __len__(self):
        return len(self.configs)

    def __getitem__(self, i):
        return self.configs[i]

    def __repr__(self):
        return f"Model{self.configs!r}"


@dataclass(frozen=True, order=True)
class OrbitLabel:
    canonical: Model

    def __repr__(self):
        return f"Orbit{self.canonical.configs!r}"


class ModelSpace:
    """N subsystems, each with configuration space ``space``; G acts diagonally."""

    def __init__(self, space: ConfigSpace, n_subsystems: int):
        if n_subsystems < 1:
            raise DomainError("need at least one subsystem")
        self.space = space
        self.n = n_subsystems
        self.group = space.group
        self._orbit = lru_cache(maxsize=65536)(self._orbit_uncached)

    def __repr__(self):
        return f"<ModelSpace {self.space.name}^{self.n}>"

    def model(self, *configs) -> Model:
        if len(configs) == 1 and isinstance(configs[0], (tuple, list, Model)):
            configs = configs[0]
        m = configs if isinstance(configs, Model) else Model(tuple(configs))
        self.validate(m)
        return m

    def validate(self, m: Model):
        if len(m.configs) != self.n:
            raise DomainError(f"model {m!r} has {len(m.configs)} subsystems, expected {self.n}")
        for x in m.configs:
            self.space.check_point(x)

    def act(self, g: GroupElement, m: Model) -> Model:
        if g.group_id != self.group.group_id:
            raise GroupMismatchError(f"{g!r} does not act on {self!r}")
        self.validate(m)
        return self._act_index(g.index, m)

    def _act_index(self, i: int, m: Model) -> Model:
        a = self.space.act_index
        return Model(tuple(a(i, x) for x in m.configs), m.tags)

    def _orbit_uncached(self, configs: tuple) -> dict:
        # maps each orbit member to the element indices reaching it from `configs`
        m = Model(configs)
        out: dict[tuple, list[int]] = {}
        for i in range(self.group.order):
            out.setdefault(self._act_index(i, m).configs, []).append(i)
        return out

    def orbit(self, m: Model) -> frozenset[Model]:
        self.validate(m)
        return frozenset(Model(c) for c in self._orbit(m.configs))

    def orbit_label(self, m: Model) -> OrbitLabel:
        self.validate(m)
        return OrbitLabel(Model(min(self._orbit(m.configs))))

    def stabiliser(self, m: Model) -> frozenset[GroupElement]:
        self.validate(m)
        return frozenset(GroupElement(self.group, i) for i in self._orbit(m.configs)[m.configs])

    def relating_elements(self, m1: Model, m2: Model) -> list[GroupElement]:
        """All g with act(g, m1) == m2 (empty when the orbits differ)."""
        self.validate(m1)
        self.validate(m2)
        return [GroupElement(self.group, i) for i in self._orbit(m1.configs).get(m2.configs, ())]

    def relating_element(self, m1: Model, m2: Model) -> GroupElement | None:
        cands = self.relating_elements(m1, m2)
        if len(cands) > 1:
            raise AmbiguityError(f"{len(cands)} elements map {m1!r} to {m2!r}", cands)
        return cands[0] if cands else None

    # section builders

    def origin_section(self, subsystem: int, point=None, name: str | None = None) -> Section:
        """Section placing ``subsystem`` at ``point`` (default: the first point of X).

        This is the section picked out by choosing that subsystem as the frame.
        """
        if not 0 <= subsystem < self.n:
            raise DomainError(f"subsystem {subsystem} out of range")
        if point is None:
            point = self.space.points[0]
        self.space.check_point(point)

        def choose(label: OrbitLabel) -> Model:
            hits = {c for c in self._orbit(label.canonical.configs) if c[subsystem] == point}
            if not hits:
                raise DomainError(f"no model in {label!r} has subsystem {subsystem} at {point!r}")
            if len(hits) > 1:
                raise AmbiguityError(f"{len(hits)} models in {label!r} put subsystem {subsystem} at {point!r}",
                                     [Model(c) for c in sorted(hits)])
            return Model(hits.pop())

        return Section(self, name or f"origin{subsystem}", choose,
                       rule={"rule": "origin", "subsystem": subsystem, "point": point})

    def canonical_section(self) -> Section:
        return Section(self, "canonical", lambda label: label.canonical, rule={"rule": "canonical"})

    def random_section(self, seed: int, name: str | None = None) -> Section:
        """Arbitrary section: each orbit's representative drawn from a per-orbit seeded RNG."""

        def choose(label: OrbitLabel) -> Model:
            members = sorted(self._orbit(label.canonical.configs))
            rng = random.Random(f"{seed}:{label.canonical.configs!r}")
            return Model(rng.choice(members))

        return Section(self, name or f"random{seed}", choose, rule={"rule": "random", "seed": seed})

    def table_section(self, table: Mapping[OrbitLabel, Model], name: str = "table") -> Section:
        table = dict(table)
        for lab, rep in table.items():
            if self.orbit_label(rep) != lab:
                raise DomainError(f"representative {rep!r} is not in {lab!r}")

        def choose(label):
            try:
                return table[label]
            except KeyError:
                raise DomainError(f"section {name!r} is undefined on {label!r}") from None

        return Section(self, name, choose, rule={"table": table})

    def section_from_dict(self, doc: Mapping) -> Section:
        name = doc.get("name")
        if "table" in doc:
            table = {}
            for canon, rep in doc["table"]:
                table[OrbitLabel(self.model(_tuplify(canon)))] = self.model(_tuplify(rep))
            return self.table_section(table, name or "table")
        rule = doc.get("rule")
        if rule == "origin":
            point = doc.get("point")
            return self.origin_section(doc["subsystem"], None if point is None else _tuplify(point), name)
        if rule == "canonical":
            return self.canonical_section()
        if rule == "random":
            return self.random_section(doc["seed"], name)
        raise DomainError(f"unknown section rule {rule!r}")


def _tuplify(x):
    return tuple(_tuplify(v) for v in x) if isinstance(x, list) else x


class Section:
    """Representational convention: one representative model per orbit.

    Results are memoised, so a section is deterministic even when its chooser
    is expensive.
    """

    def __init__(self, space: ModelSpace, name: str, chooser: Callable[[OrbitLabel], Model], rule: dict | None = None):
        self.space = space
        self.name = name
        self._chooser = chooser
        self.rule = rule or {}
        self._cache: dict[OrbitLabel, Model] = {}

    def __call__(self, label: OrbitLabel) -> Model:
        rep = self._cache.get(label)
        if rep is None:
            rep = self._chooser(label)
            if self.space.orbit_label(rep) != label:
                raise QRFError(f"section {self.name!r} picked {rep!r} outside {label!r}")
            self._cache[label] = rep
        return rep

    chooser = __call__

    def contains(self, m: Model) -> bool:
        return self(self.space.orbit_label(m)) == m

    def to_dict(self) -> dict:
        if "table" in self.rule:
            rows = sorted((lab.canonical.configs, rep.configs) for lab, rep in self.rule["table"].items())
            return {"name": self.name, "table": [[list(a), list(b)] for a, b in rows]}
        return {"name": self.name, **self.rule}

    def __repr__(self):
        return f"<Section {self.name}>"


def orbit_label(space: ModelSpace, m: Model) -> OrbitLabel:
    return space.orbit_label(m)


def relating_element(space: ModelSpace, m1: Model, m2: Model) -> GroupElement | None:
    return space.relating_element(m1, m2)


def lowering_element(s: Section, m: Model) -> GroupElement:
    """g_s(m): the unique element taking ``m`` onto the section."""
    space = s.space
    g = space.relating_element(m, s(space.orbit_label(m)))
    assert g is not None
    return g


def counter(s: Section, m1: Model, m2: Model) -> GroupElement:
    """Counterpart element g_s(m2)^-1 ∘ g_s(m1)."""
    return compose(inverse(lowering_element(s, m2)), lowering_element(s, m1))


def convention_change(s: Section, s_tilde: Section, label: OrbitLabel) -> GroupElement:
    """Element taking s's representative of an orbit to s_tilde's."""
    if s.space is not s_tilde.space:
        raise DomainError("sections live on different model spaces")
    g = s.space.relating_element(s(label), s_tilde(label))
    assert g is not None
    return g

