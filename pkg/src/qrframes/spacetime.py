"""Superpositions of discretised spacetimes.

A branch geometry is a finite set of point labels ``0 .. n-1`` carrying named
reference-field sets (four scalars per point), named scalar observables and
named worldlines. Diffeomorphisms are permutations of the labels. Field
values are scaled integers so that matching points by field values is exact.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DegenerateFrameError, DomainError, PreconditionError, QRFError
from .groups import compose_perm, invert_perm, is_perm

OBS_TOL = 1e-12

Tuple4 = tuple[int, int, int, int]


@dataclass(frozen=True)
class ReferenceFields:
    """Joint values of four scalar fields, ``values[p]`` at point ``p``.

    Entries are integers; the real field value is ``entry / scale``.
    """

    values: tuple[Tuple4, ...]
    scale: int = 1

    def __post_init__(self):
        vals = tuple(tuple(int(v) for v in t) for t in self.values)
        if any(len(t) != 4 for t in vals):
            raise DomainError("reference fields need exactly four components per point")
        if self.scale < 1:
            raise DomainError("scale must be a positive integer")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_reals(cls, values: Iterable[Sequence[float]], scale: int = 1) -> ReferenceFields:
        out = []
        for t in values:
            enc = []
            for v in t:
                x = Fraction(v).limit_denominator(10**9) * scale
                if x.denominator != 1:
                    raise DomainError(f"value {v} is not representable at scale {scale}")
                enc.append(int(x))
            out.append(tuple(enc))
        return cls(tuple(out), scale)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, p) -> Tuple4:
        return self.values[p]

    def real(self, p) -> tuple[float, ...]:
        return tuple(v / self.scale for v in self.values[p])

    def value_set(self) -> frozenset:
        return frozenset(self.values)

    def inverse_map(self) -> dict[Tuple4, int]:
        report = detect_degenerate_frame(self)
        if report.groups:
            raise DegenerateFrameError(f"fields repeat values at {report.groups}", report)
        return {t: p for p, t in enumerate(self.values)}

    def pulled_back(self, perm: Sequence[int]) -> ReferenceFields:
        return ReferenceFields(_move(self.values, perm), self.scale)


def _move(values: Sequence, perm: Sequence[int]) -> tuple:
    # value formerly at p is read at perm[p]
    out = [None] * len(values)
    for p, v in enumerate(values):
        out[perm[p]] = v
    return tuple(out)


@dataclass(frozen=True)
class DegeneracyReport:
    groups: tuple[tuple[int, ...], ...]
    values: tuple[Tuple4, ...]

    @property
    def perfect(self) -> bool:
        return not self.groups

    def to_dict(self) -> dict:
        return {"perfect": self.perfect, "groups": [list(g) for g in self.groups],
                "values": [list(v) for v in self.values]}


def detect_degenerate_frame(f: ReferenceFields) -> DegeneracyReport:
    """Groups of points that share a field 4-tuple; empty for a perfect frame."""
    buckets: dict[Tuple4, list[int]] = {}
    for p, t in enumerate(f.values):
        buckets.setdefault(t, []).append(p)
    hits = sorted((tuple(ps), t) for t, ps in buckets.items() if len(ps) > 1)
    return DegeneracyReport(tuple(g for g, _ in hits), tuple(t for _, t in hits))


@dataclass(frozen=True)
class BranchGeometry:
    n_points: int
    fields: Mapping[str, ReferenceFields] = field(default_factory=dict)
    observables: Mapping[str, tuple[float, ...]] = field(default_factory=dict)
    worldlines: Mapping[str, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        n = self.n_points
        for name, f in self.fields.items():
            if len(f) != n:
                raise DomainError(f"field set {name!r} has {len(f)} points, expected {n}")
        obs = {k: tuple(float(v) for v in vals) for k, vals in self.observables.items()}
        for name, vals in obs.items():
            if len(vals) != n:
                raise DomainError(f"observable {name!r} has {len(vals)} points, expected {n}")
        wls = {k: tuple(int(p) for p in line) for k, line in self.worldlines.items()}
        for name, line in wls.items():
            if any(not 0 <= p < n for p in line):
                raise DomainError(f"worldline {name!r} leaves the point set")
        object.__setattr__(self, "fields", dict(self.fields))
        object.__setattr__(self, "observables", obs)
        object.__setattr__(self, "worldlines", wls)

    def field_set(self, name: str) -> ReferenceFields:
        try:
            return self.fields[name]
        except KeyError:
            raise DomainError(f"no field set named {name!r}") from None

    def observable(self, name: str) -> tuple[float, ...]:
        try:
            return self.observables[name]
        except KeyError:
            raise DomainError(f"no observable named {name!r}") from None

    def worldline(self, name: str) -> tuple[int, ...]:
        try:
            return self.worldlines[name]
        except KeyError:
            raise DomainError(f"no worldline named {name!r}") from None

    def pulled_back(self, perm: Sequence[int]) -> BranchGeometry:
        """Geometry after moving points by ``perm``: everything at p now sits at perm[p]."""
        if len(perm) != self.n_points or not is_perm(perm):
            raise DomainError(f"{perm} is not a permutation of {self.n_points} points")
        return BranchGeometry(
            self.n_points,
            {k: f.pulled_back(perm) for k, f in self.fields.items()},
            {k: _move(v, perm) for k, v in self.observables.items()},
            {k: tuple(perm[p] for p in line) for k, line in self.worldlines.items()},
        )

    def to_dict(self) -> dict:
        scales = {f.scale for f in self.fields.values()}
        if len(scales) > 1:
            raise QRFError("document encoding needs one scale shared by all field sets")
        return {
            "points": self.n_points,
            "scale": scales.pop() if scales else 1,
            "fields": {k: [list(t) for t in f.values] for k, f in sorted(self.fields.items())},
            "observables": {k: list(v) for k, v in sorted(self.observables.items())},
            "worldlines": {k: list(v) for k, v in sorted(self.worldlines.items())},
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> BranchGeometry:
        scale = int(doc.get("scale", 1))
        return cls(
            int(doc["points"]),
            {k: ReferenceFields(tuple(tuple(t) for t in v), scale) for k, v in doc.get("fields", {}).items()},
            {k: tuple(v) for k, v in doc.get("observables", {}).items()},
            {k: tuple(v) for k, v in doc.get("worldlines", {}).items()},
        )


@dataclass(frozen=True)
class GeometrySuperposition:
    branches: tuple[tuple[complex, BranchGeometry], ...]

    def __post_init__(self):
        br = tuple((complex(a), g) for a, g in self.branches)
        if not br:
            raise QRFError("superposition needs at least one branch")
        norm = sum(abs(a) ** 2 for a, _ in br)
        if abs(norm - 1) > 1e-9:
            raise QRFError(f"amplitudes have squared norm {norm}, expected 1")
        if len({g.n_points for _, g in br}) > 1:
            raise DomainError("all branch geometries must have the same number of points")
        object.__setattr__(self, "branches", br)

    @classmethod
    def equal_weights(cls, geometries: Sequence[BranchGeometry]) -> GeometrySuperposition:
        a = 1 / math.sqrt(len(geometries))
        return cls(tuple((a, g) for g in geometries))

    def __len__(self):
        return len(self.branches)

    def __getitem__(self, i) -> BranchGeometry:
        return self.branches[i][1]

    @property
    def geometries(self) -> tuple[BranchGeometry, ...]:
        return tuple(g for _, g in self.branches)

    @property
    def n_points(self) -> int:
        return self.branches[0][1].n_points

    def to_dict(self) -> dict:
        return {"branches": [{"amplitude": [a.real, a.imag], "geometry": g.to_dict()} for a, g in self.branches]}

    @classmethod
    def from_dict(cls, doc: Mapping) -> GeometrySuperposition:
        return cls(tuple((complex(*b.get("amplitude", [1, 0])), BranchGeometry.from_dict(b["geometry"]))
                         for b in doc["branches"]))


@dataclass(frozen=True)
class ComparisonMap:
    """Bijection from branch-1 points to branch-2 points, ``image[p] = q``."""

    image: tuple[int, ...]
    provenance: str = ""

    def __post_init__(self):
        img = tuple(int(q) for q in self.image)
        if not is_perm(img):
            raise DomainError("comparison map must be a bijection on the shared point set")
        object.__setattr__(self, "image", img)

    def __call__(self, p: int) -> int:
        return self.image[p]

    def __len__(self):
        return len(self.image)

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple(enumerate(self.image))

    def is_identity(self) -> bool:
        return self.image == tuple(range(len(self.image)))

    def inverse(self) -> ComparisonMap:
        return ComparisonMap(invert_perm(self.image), self.provenance)

    def same_map(self, other: ComparisonMap) -> bool:
        return self.image == other.image

    @classmethod
    def identity(cls, n: int, provenance: str = "") -> ComparisonMap:
        return cls(tuple(range(n)), provenance)


@dataclass(frozen=True)
class QuantumDiffeo:
    """One permutation of point labels per branch."""

    perms: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        perms = tuple(tuple(int(x) for x in p) for p in self.perms)
        for p in perms:
            if not is_perm(p):
                raise DomainError(f"{p} is not a permutation")
        object.__setattr__(self, "perms", perms)

    def __len__(self):
        return len(self.perms)

    def __getitem__(self, i):
        return self.perms[i]

    @classmethod
    def identity(cls, n_branches: int, n_points: int) -> QuantumDiffeo:
        return cls(tuple(tuple(range(n_points)) for _ in range(n_branches)))

    def inverse(self) -> QuantumDiffeo:
        return QuantumDiffeo(tuple(invert_perm(p) for p in self.perms))


def build_comparison(g1: BranchGeometry, g2: BranchGeometry, field_name: str) -> ComparisonMap:
    """Map p -> q exactly when the named fields agree: chi1(p) == chi2(q)."""
    f1, f2 = g1.field_set(field_name), g2.field_set(field_name)
    if f1.scale != f2.scale:
        raise DomainError(f"field {field_name!r} uses scale {f1.scale} in one branch and {f2.scale} in the other")
    inv2 = f2.inverse_map()
    f1.inverse_map()
    missing = sorted(f1.value_set() ^ f2.value_set())
    if missing:
        raise DomainError(f"field {field_name!r} value sets differ; unmatched tuples {missing}")
    return ComparisonMap(tuple(inv2[t] for t in f1.values), field_name)


def base_comparisons(s: GeometrySuperposition, field_name: str) -> tuple[ComparisonMap, ...]:
    """Comparison maps from branch 1 to every later branch."""
    base = s[0]
    return tuple(build_comparison(base, g, field_name) for g in s.geometries[1:])


def apply_quantum_diffeo(s: GeometrySuperposition, d: QuantumDiffeo) -> GeometrySuperposition:
    if len(d) != len(s):
        raise DomainError(f"diffeo has {len(d)} permutations for {len(s)} branches")
    return GeometrySuperposition(tuple((a, g.pulled_back(p)) for (a, g), p in zip(s.branches, d.perms)))


def transform_comparison(c: ComparisonMap, d: QuantumDiffeo) -> ComparisonMap:
    """d2 ∘ c ∘ d1^-1."""
    if len(d) != 2:
        raise DomainError("transforming a comparison map needs exactly two branch permutations")
    d1, d2 = d.perms
    if len(d1) != len(c) or len(d2) != len(c):
        raise DomainError("permutation size does not match the comparison map")
    return ComparisonMap(compose_perm(d2, compose_perm(c.image, invert_perm(d1))), c.provenance)


def aligning_diffeo(s: GeometrySuperposition, field_name: str, target: ReferenceFields) -> QuantumDiffeo:
    """Per-branch permutations that make the named fields equal ``target``."""
    t_inv = target.inverse_map()
    perms = []
    for i, g in enumerate(s.geometries):
        f = g.field_set(field_name)
        if f.scale != target.scale:
            raise DomainError(f"branch {i}: field scale {f.scale} differs from target scale {target.scale}")
        try:
            f.inverse_map()
        except DegenerateFrameError as exc:
            raise DomainError(f"branch {i}: field {field_name!r} is degenerate, no aligning permutation") from exc
        if f.value_set() != target.value_set():
            raise DomainError(f"branch {i}: field {field_name!r} value set differs from target; no aligning permutation")
        perms.append(tuple(t_inv[t] for t in f.values))
    return QuantumDiffeo(tuple(perms))


def qrf_change_to(s: GeometrySuperposition, field_name: str, target: ReferenceFields) -> tuple[GeometrySuperposition, ComparisonMap]:
    """Align ``field_name`` to ``target`` in every branch.

    Returns the transformed superposition and the comparison map the aligned
    fields induce from branch 1 to branch 2 (the identity by construction;
    a single-branch input yields the identity on its points).
    """
    d = aligning_diffeo(s, field_name, target)
    out = apply_quantum_diffeo(s, d)
    if len(out) == 1:
        return out, ComparisonMap.identity(out.n_points, field_name)
    cmap = build_comparison(out[0], out[1], field_name)
    if not cmap.is_identity():
        raise QRFError("aligned fields did not induce the identity comparison")
    return out, cmap


def is_localised(p: int, q: int, c: ComparisonMap) -> bool:
    return c(p) == q


@dataclass(frozen=True)
class EventCandidate:
    points: tuple[int, ...]
    lines: tuple[str, str]
    order: int = 0


def crossings(g: BranchGeometry, line_a: str, line_b: str) -> tuple[int, ...]:
    """Points visited by both worldlines, in ``line_a`` order, without repeats."""
    on_b = set(g.worldline(line_b))
    seen, out = set(), []
    for p in g.worldline(line_a):
        if p in on_b and p not in seen:
            seen.add(p)
            out.append(p)
    return tuple(out)


def find_events(g1: BranchGeometry, g2: BranchGeometry, line_a: str, line_b: str) -> list[EventCandidate]:
    c1, c2 = crossings(g1, line_a, line_b), crossings(g2, line_a, line_b)
    if len(c1) != len(c2):
        raise QRFError(f"worldlines cross {len(c1)} times in branch 1 but {len(c2)} times in branch 2")
    return [EventCandidate((p, q), (line_a, line_b), k) for k, (p, q) in enumerate(zip(c1, c2))]


@dataclass(frozen=True)
class RelationalObservable:
    """Per-branch map from field 4-tuples to observable values."""

    observable: str
    field_name: str
    maps: tuple[Mapping[Tuple4, float], ...]

    @property
    def domain(self) -> frozenset:
        return frozenset(self.maps[0])

    def at(self, x: Sequence[int]) -> tuple[float, ...]:
        x = tuple(x)
        out = []
        for i, m in enumerate(self.maps):
            if x not in m:
                raise DomainError(f"{x} is not a value of field {self.field_name!r} in branch {i}")
            out.append(m[x])
        return tuple(out)

    def definite(self, x: Sequence[int], tol: float = OBS_TOL) -> bool:
        vals = self.at(x)
        return all(abs(v - vals[0]) <= tol for v in vals[1:])


def dress(geometries: GeometrySuperposition | Sequence[BranchGeometry], observable_name: str, field_name: str) -> RelationalObservable:
    """O^(i) ∘ (chi^(i))^-1 for every branch i."""
    geos = geometries.geometries if isinstance(geometries, GeometrySuperposition) else tuple(geometries)
    maps = []
    for g in geos:
        f = g.field_set(field_name)
        vals = g.observable(observable_name)
        inv = f.inverse_map()
        maps.append({t: vals[p] for t, p in inv.items()})
    return RelationalObservable(observable_name, field_name, tuple(maps))


def definite_at(observable_name: str, p: int, q: int, c: ComparisonMap, g1: BranchGeometry, g2: BranchGeometry,
                tol: float = OBS_TOL) -> bool:
    if not is_localised(p, q, c):
        raise PreconditionError(f"pair ({p}, {q}) is not localised under the {c.provenance or 'given'} comparison")
    return abs(g2.observable(observable_name)[q] - g1.observable(observable_name)[p]) <= tol


def localisation_scan(s: GeometrySuperposition, frame: str, new_frame: str, target: ReferenceFields | None = None) -> list[dict]:
    """Track every pair (p, C_frame(p)) through a frame change to ``new_frame``.

    Rows give the moved pair and whether it stays localised under the
    transformed ``frame`` comparison and under the new frame's comparison.
    """
    if len(s) != 2:
        raise DomainError("localisation scan needs two branches")
    c = build_comparison(s[0], s[1], frame)
    target = target or s[0].field_set(new_frame)
    d = aligning_diffeo(s, new_frame, target)
    moved, c_new = qrf_change_to(s, new_frame, target)
    c_old = transform_comparison(c, d)
    rows = []
    for p in range(s.n_points):
        p2, q2 = d[0][p], d[1][c(p)]
        rows.append({
            "point": p,
            "counterpart": c(p),
            "moved_pair": [p2, q2],
            f"localised_{frame}": is_localised(p2, q2, c_old),
            f"localised_{new_frame}": is_localised(p2, q2, c_new),
        })
    return rows


def observable_scan(s: GeometrySuperposition, observable_name: str, field_name: str) -> list[dict]:
    """Observable at each label in both branches, flagged by whether the same
    label is its own counterpart under the named fields."""
    c = build_comparison(s[0], s[1], field_name)
    o1, o2 = s[0].observable(observable_name), s[1].observable(observable_name)
    return [{"point": p, "branch1_value": o1[p], "branch2_value": o2[p], "localised": is_localised(p, p, c)}
            for p in range(s.n_points)]


CURVATURE_NAMES = ("Riem2", "Weyl2", "BoxR", "Ric2", "BoxWeyl2")


def curvature_geometry(rows: Sequence[Sequence[float]], scale: int = 10, worldlines=None) -> BranchGeometry:
    """Geometry whose points carry curvature scalars (Riem², Weyl², □R, Ric², □Weyl²).

    Two field sets are derived from them:
    ``R``  = (Riem² − Weyl², □R, Ric², □Weyl²) and
    ``Rt`` = (Riem², □R, Ric², □Weyl²).
    """
    obs = {name: tuple(r[k] for r in rows) for k, name in enumerate(CURVATURE_NAMES)}
    R = [(r[0] - r[1], r[2], r[3], r[4]) for r in rows]
    Rt = [(r[0], r[2], r[3], r[4]) for r in rows]
    return BranchGeometry(
        len(rows),
        {"R": ReferenceFields.from_reals(R, scale), "Rt": ReferenceFields.from_reals(Rt, scale)},
        obs,
        worldlines or {},
    )


def curvature_example() -> tuple[GeometrySuperposition, int, int]:
    """Two-branch curvature scenario; returns (superposition, p, q).

    At p in branch 1 and q in branch 2 the R-fields read (1, 2, 3, 4), so the
    pair is localised under C_R. Riem² reads 1 at p and 2 at q (Weyl² reads
    0 and 1), so under C_Rt p is matched with a different point q'.
    """
    #          Riem2 Weyl2 BoxR Ric2 BoxWeyl2
    branch1 = [(1.0, 0.0, 2, 3, 4),   # p
               (2.0, 1.5, 2, 3, 4),
               (3.0, 1.0, 6, 7, 8),
               (4.0, 2.0, 9, 1, 5)]
    branch2 = [(1.0, 0.5, 2, 3, 4),   # q'
               (2.0, 1.0, 2, 3, 4),   # q
               (4.0, 2.0, 9, 1, 5),
               (3.0, 1.0, 6, 7, 8)]
    lines1 = {"a": (0, 2), "b": (3, 0)}
    lines2 = {"a": (1, 3), "b": (2, 1)}
    sup = GeometrySuperposition.equal_weights([
        curvature_geometry(branch1, worldlines=lines1),
        curvature_geometry(branch2, worldlines=lines2),
    ])
    return sup, 0, 1
