"""Seeded property campaigns over every module's algebraic laws.

Randomness: each (seed, property, case) triple owns an independent numpy
``PCG64`` stream built from ``SeedSequence(seed, spawn_key=(crc32(name), case))``.
A failing case can therefore be replayed from its witness alone, and adding
or reordering properties never shifts another property's draws.
"""

from __future__ import annotations

import time
import zlib
from collections.abc import Callable
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import QRFError, ValidationError
from .groups import (
    ConfigSpace,
    CyclicGroup,
    PermutationGroup,
    SymmetricGroup,
    compose,
    inverse,
)
from .models import Model, ModelSpace, Section, convention_change, counter, lowering_element
from .reports import RunReport
from .spacetime import (
    BranchGeometry,
    GeometrySuperposition,
    QuantumDiffeo,
    ReferenceFields,
    apply_quantum_diffeo,
    build_comparison,
    definite_at,
    is_localised,
    qrf_change_to,
    transform_comparison,
)
from .states import controlled_transform, qrf_change, superpose
from .translation import relative_distance

CounterFn = Callable[[Section, Model, Model], object]


def case_rng(seed: int, name: str, case: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(zlib.crc32(name.encode()), case))
    return np.random.Generator(np.random.PCG64(ss))


# ---------------------------------------------------------------- generators

@lru_cache(maxsize=None)
def cyclic_model_space(n: int, particles: int) -> ModelSpace:
    return ModelSpace(ConfigSpace.regular(CyclicGroup(n)), particles)


@lru_cache(maxsize=None)
def _sym(k):
    return SymmetricGroup(k)


@lru_cache(maxsize=None)
def _cyc(n):
    return CyclicGroup(n)


def random_group(rng):
    kind = rng.integers(3)
    if kind == 0:
        return _cyc(int(rng.integers(1, 65)))
    if kind == 1:
        return _sym(int(rng.integers(1, 6)))
    deg = int(rng.integers(2, 7))
    gens = [tuple(int(x) for x in rng.permutation(deg)) for _ in range(int(rng.integers(1, 3)))]
    return PermutationGroup(gens, deg)


def random_space(rng) -> ConfigSpace:
    kind = rng.integers(4)
    if kind == 0:
        return ConfigSpace.regular(_cyc(int(rng.integers(1, 65))))
    if kind == 1:
        n = int(rng.integers(1, 13))
        return ConfigSpace.dial(_cyc(n * int(rng.integers(1, 5))), n)
    if kind == 2:
        return ConfigSpace.permutation(_sym(int(rng.integers(1, 6))))
    return ConfigSpace.regular(_sym(int(rng.integers(1, 5))))


def _element(rng, group):
    return group.element(int(rng.integers(group.order)))


def random_lattice_model(rng, n_max: int = 64, particles_max: int = 4):
    n = int(rng.integers(2, n_max + 1))
    k = int(rng.integers(1, particles_max + 1))
    space = cyclic_model_space(n, k)
    return space, Model(tuple(int(x) for x in rng.integers(0, n, size=k)))


def random_section(rng, space: ModelSpace) -> Section:
    kind = rng.integers(3)
    if kind == 0:
        return space.origin_section(int(rng.integers(space.n)), int(rng.integers(len(space.space))))
    if kind == 1:
        return space.random_section(int(rng.integers(2**31)))
    return space.canonical_section()


def random_state(rng, space: ModelSpace, frame: Section | None = None, branches_max: int = 3):
    """Random superposition with branches on distinct orbits (lying on ``frame`` if given)."""
    n = len(space.space)
    labels = {}
    for _ in range(int(rng.integers(1, branches_max + 1)) * 3):
        m = Model(tuple(int(x) for x in rng.integers(0, n, size=space.n)))
        labels.setdefault(space.orbit_label(m), m)
        if len(labels) >= branches_max:
            break
    entries = []
    for lab, m in labels.items():
        rep = frame(lab) if frame is not None else m
        entries.append((complex(rng.normal(), rng.normal()), rep))
    return superpose(space, entries)


def random_fields(rng, n: int, spread: int = 8) -> list[tuple[int, int, int, int]]:
    codes = rng.choice(spread**4, size=n, replace=False)
    return [tuple(int(c) // spread**k % spread for k in range(4)) for c in codes]


def random_superposition(rng, n_max: int = 64, branches: int = 2) -> GeometrySuperposition:
    """Branches share value sets for fields "chi" and "chi_tilde" but place them differently."""
    n = int(rng.integers(2, n_max + 1))
    chi, chit = random_fields(rng, n), random_fields(rng, n)
    geos = []
    for _ in range(branches):
        p1, p2 = rng.permutation(n), rng.permutation(n)
        geos.append(BranchGeometry(
            n,
            {"chi": ReferenceFields(tuple(chi[i] for i in p1)),
             "chi_tilde": ReferenceFields(tuple(chit[i] for i in p2))},
            {"O": tuple(float(v) for v in rng.integers(0, 3, size=n)),
             "first_chi": tuple(float(chi[i][0]) for i in p1)},
            {"a": tuple(int(x) for x in rng.integers(0, n, size=4)),
             "b": tuple(int(x) for x in rng.integers(0, n, size=4))},
        ))
    return GeometrySuperposition.equal_weights(geos)


def random_diffeo(rng, branches: int, n: int) -> QuantumDiffeo:
    return QuantumDiffeo(tuple(tuple(int(x) for x in rng.permutation(n)) for _ in range(branches)))


# ---------------------------------------------------------------- properties
# each property takes (rng, ctx) and returns None on success or a witness dict

def _assoc(rng, ctx):
    G = random_group(rng)
    g, h, k = (_element(rng, G) for _ in range(3))
    if compose(compose(g, h), k) != compose(g, compose(h, k)):
        return {"group": G.group_id, "g": g.label, "h": h.label, "k": k.label}


def _inverse(rng, ctx):
    G = random_group(rng)
    g = _element(rng, G)
    e = G.identity
    if not (compose(g, inverse(g)) == e == compose(inverse(g), g) and compose(e, g) == g == compose(g, e)):
        return {"group": G.group_id, "g": g.label}


def _action(rng, ctx):
    X = random_space(rng)
    G = X.group
    g, h = _element(rng, G), _element(rng, G)
    x = X.points[int(rng.integers(len(X)))]
    ok = (X.act(g, X.act(h, x)) == X.act(compose(g, h), x)
          and X.act(G.identity, x) == x
          and X.act(inverse(g), X.act(g, x)) == x)
    if not ok:
        return {"space": X.name, "g": g.label, "h": h.label, "x": x}


def _stab_conj(rng, ctx):
    X = random_space(rng)
    g = _element(rng, X.group)
    x = X.points[int(rng.integers(len(X)))]
    lhs = X.stabiliser(X.act(g, x))
    rhs = frozenset(compose(g, compose(h, inverse(g))) for h in X.stabiliser(x))
    if lhs != rhs:
        return {"space": X.name, "g": g.label, "x": x}


def _regular_unique(rng, ctx):
    X = random_space(rng)
    x, y = (X.points[int(rng.integers(len(X)))] for _ in range(2))
    count = sum(1 for g in X.group.elements() if X.act(g, x) == y)
    regular = X.is_regular()
    if regular and count != 1:
        return {"space": X.name, "x": x, "y": y, "count": count}
    if not regular and all(
        sum(1 for g in X.group.elements() if X.act(g, a) == b) == 1 for a in X.points for b in X.points
    ):
        return {"space": X.name, "claimed_regular": False}


def _orbit_label(rng, ctx):
    space, m = random_lattice_model(rng)
    g = _element(rng, space.group)
    lab = space.orbit_label(m)
    if space.orbit_label(space.act(g, m)) != lab or space.orbit_label(lab.canonical) != lab:
        return {"n": len(space.space), "m": m.configs, "g": g.label}


def _counter_setup(rng):
    space, m1 = random_lattice_model(rng)
    s = random_section(rng, space)
    return space, m1, s


def _witness(space, s, **kw):
    d = {"n": len(space.space), "particles": space.n, "section": s.to_dict()}
    d.update({k: (v.configs if isinstance(v, Model) else v.label if hasattr(v, "label") else v) for k, v in kw.items()})
    return d


def _counter_self(rng, ctx):
    space, m, s = _counter_setup(rng)
    c = ctx["counter"](s, m, m)
    if c != space.group.identity:
        return _witness(space, s, m=m, got=c)


def _counter_on_section(rng, ctx):
    space, m1, s = _counter_setup(rng)
    m2 = Model(tuple(int(x) for x in rng.integers(0, len(space.space), size=space.n)))
    r1, r2 = s(space.orbit_label(m1)), s(space.orbit_label(m2))
    c = ctx["counter"](s, r1, r2)
    if c != space.group.identity:
        return _witness(space, s, m1=r1, m2=r2, got=c)


def _counter_same_orbit(rng, ctx):
    space, m, s = _counter_setup(rng)
    g = _element(rng, space.group)
    c = ctx["counter"](s, m, space.act(g, m))
    if c != g:
        return _witness(space, s, m=m, g=g, got=c)


def _counter_composition(rng, ctx):
    space, m1, s = _counter_setup(rng)
    n = len(space.space)
    m2, m3 = (Model(tuple(int(x) for x in rng.integers(0, n, size=space.n))) for _ in range(2))
    cnt = ctx["counter"]
    if cnt(s, m1, m3) != compose(cnt(s, m2, m3), cnt(s, m1, m2)):
        return _witness(space, s, m1=m1, m2=m2, m3=m3)


def _counter_convention(rng, ctx):
    space, m1, s = _counter_setup(rng)
    st = random_section(rng, space)
    n = len(space.space)
    m2 = Model(tuple(int(x) for x in rng.integers(0, n, size=space.n)))
    c1 = convention_change(s, st, space.orbit_label(m1))
    c2 = convention_change(s, st, space.orbit_label(m2))
    rhs = compose(inverse(lowering_element(s, m2)), compose(inverse(c2), compose(c1, lowering_element(s, m1))))
    if ctx["counter"](st, m1, m2) != rhs:
        return _witness(space, s, m1=m1, m2=m2, other_section=st.to_dict())


def _state_setup(rng):
    n = int(rng.integers(4, 33))
    k = int(rng.integers(2, 5))
    space = cyclic_model_space(n, k)
    i, j = (int(x) for x in rng.choice(k, size=2, replace=k < 2))
    A = space.origin_section(i, 0, name=f"frame{i}")
    B = space.origin_section(j, 0, name=f"frame{j}")
    return space, A, B, random_state(rng, space, A)


def _state_norm(rng, ctx):
    space, A, B, st = _state_setup(rng)
    sel = {lab: _element(rng, space.group) for lab in st.orbit_labels()}
    out = controlled_transform(st, sel)
    if abs(out.norm() - 1) > 1e-9 or out.orbit_labels() != st.orbit_labels():
        return {"state": st.to_dict()}
    if abs(qrf_change(st, A, B).norm() - 1) > 1e-9:
        return {"state": st.to_dict(), "frames": [A.name, B.name]}


def _state_roundtrip(rng, ctx):
    space, A, B, st = _state_setup(rng)
    back = qrf_change(qrf_change(st, A, B), B, A)
    if not back.allclose(st, 1e-12):
        return {"state": st.to_dict(), "frames": [A.name, B.name]}


def _state_invariants(rng, ctx):
    space, A, B, st = _state_setup(rng)
    n = len(space.space)

    def dists(s):
        return [[relative_distance(m, i, j, n) for i in range(space.n) for j in range(space.n)] for m in s.models]

    before = dists(st)
    changed = qrf_change(st, A, B)
    sel = {lab: _element(rng, space.group) for lab in st.orbit_labels()}
    moved = controlled_transform(st, sel)
    # branch order is by orbit label, which both transforms preserve
    if dists(changed) != before or dists(moved) != before:
        return {"state": st.to_dict(), "frames": [A.name, B.name]}


def _state_factorizes(rng, ctx):
    space, A, B, st = _state_setup(rng)
    out = qrf_change(st, A, B)
    j = B.rule["subsystem"]
    if len({m[j] for m in out.models}) != 1:
        return {"state": st.to_dict(), "frames": [A.name, B.name]}


def _geo_case(rng):
    s = random_superposition(rng)
    return s, random_diffeo(rng, 2, s.n_points)


def _st_law(rng, ctx):
    s, d = _geo_case(rng)
    for f in ("chi", "chi_tilde"):
        c = build_comparison(s[0], s[1], f)
        moved = apply_quantum_diffeo(s, d)
        if not transform_comparison(c, d).same_map(build_comparison(moved[0], moved[1], f)):
            return {"superposition": s.to_dict(), "diffeo": [list(p) for p in d.perms], "field": f}


def _st_localisation(rng, ctx):
    s, d = _geo_case(rng)
    c = build_comparison(s[0], s[1], "chi")
    c2 = transform_comparison(c, d)
    n = s.n_points
    p, q = int(rng.integers(n)), int(rng.integers(n))
    d1, d2 = d.perms
    if is_localised(p, q, c) != is_localised(d1[p], d2[q], c2) or not is_localised(d1[p], d2[c(p)], c2):
        return {"superposition": s.to_dict(), "diffeo": [list(x) for x in d.perms], "pair": [p, q]}


def _st_alignment(rng, ctx):
    s = random_superposition(rng)
    base = s[0].field_set("chi_tilde").values
    target = ReferenceFields(tuple(base[int(i)] for i in rng.permutation(len(base))))
    out, cmap = qrf_change_to(s, "chi_tilde", target)
    if not cmap.is_identity() or any(g.field_set("chi_tilde") != target for g in out.geometries):
        return {"superposition": s.to_dict(), "target": [list(t) for t in target.values]}


def _st_definite(rng, ctx):
    s, d = _geo_case(rng)
    c = build_comparison(s[0], s[1], "chi")
    moved = apply_quantum_diffeo(s, d)
    c2 = transform_comparison(c, d)
    p = int(rng.integers(s.n_points))
    q = c(p)
    before = definite_at("O", p, q, c, s[0], s[1])
    after = definite_at("O", d[0][p], d[1][q], c2, moved[0], moved[1])
    if before != after:
        return {"superposition": s.to_dict(), "diffeo": [list(x) for x in d.perms], "p": p}


def _st_scalars(rng, ctx):
    s, d = _geo_case(rng)
    moved = apply_quantum_diffeo(s, d)
    for i in range(2):
        for name in ("O", "first_chi"):
            o, o2 = s[i].observable(name), moved[i].observable(name)
            if any(o2[d[i][p]] != o[p] for p in range(s.n_points)):
                return {"superposition": s.to_dict(), "diffeo": [list(x) for x in d.perms], "branch": i}


PROPERTIES: dict[str, Callable] = {
    "group.associativity": _assoc,
    "group.inverse_identity": _inverse,
    "action.compatibility": _action,
    "action.stabiliser_conjugation": _stab_conj,
    "action.regular_unique_element": _regular_unique,
    "orbit.label_invariance": _orbit_label,
    "counter.self_identity": _counter_self,
    "counter.on_section_identity": _counter_on_section,
    "counter.same_orbit_element": _counter_same_orbit,
    "counter.composition_law": _counter_composition,
    "counter.convention_change": _counter_convention,
    "state.norm_preservation": _state_norm,
    "state.qrf_roundtrip": _state_roundtrip,
    "state.invariant_quantities": _state_invariants,
    "state.frame_factorizes": _state_factorizes,
    "spacetime.comparison_transformation_law": _st_law,
    "spacetime.localisation_invariance": _st_localisation,
    "spacetime.alignment_identity": _st_alignment,
    "spacetime.definiteness_invariance": _st_definite,
    "spacetime.scalar_invariance": _st_scalars,
}


@dataclass
class CampaignResult:
    name: str
    cases: int
    passed: int
    witness: dict | None
    seconds: float


def run_property(name: str, seed: int, cases: int, ctx: dict | None = None) -> CampaignResult:
    ctx = {"counter": counter, **(ctx or {})}
    prop = PROPERTIES[name]
    t0 = time.perf_counter()
    passed, witness = 0, None
    for k in range(cases):
        try:
            w = prop(case_rng(seed, name, k), ctx)
        except QRFError as exc:
            w = {"error": f"{type(exc).__name__}: {exc}"}
        if w is None:
            passed += 1
        elif witness is None:
            witness = {"property": name, "seed": seed, "case": k, **w}
    return CampaignResult(name, cases, passed, witness, time.perf_counter() - t0)


def verify_suite(seed: int, case_count: int, counter_fn: CounterFn | None = None,
                 properties: list[str] | None = None) -> RunReport:
    """Run every registered property campaign; ``counter_fn`` swaps in an
    alternative counterpart implementation (used for mutation checks)."""
    if not isinstance(case_count, int) or case_count < 1:
        raise ValidationError("case_count must be a positive integer")
    ctx = {"counter": counter_fn} if counter_fn is not None else {}
    report = RunReport("property_suite", seed)
    for name in properties or PROPERTIES:
        res = run_property(name, seed, case_count, ctx)
        report.add(name, res.passed == res.cases, {"cases": res.cases, "passed": res.passed},
                   tolerance="exact", witness=res.witness)
        report.timings[name] = res.seconds
    return report
