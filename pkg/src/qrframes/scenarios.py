"""Scenario documents: validation and end-to-end execution."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from .errors import QRFError, ValidationError
from .models import counter
from .reports import RunReport
from .spacetime import (
    GeometrySuperposition,
    QuantumDiffeo,
    ReferenceFields,
    aligning_diffeo,
    build_comparison,
    curvature_example,
    definite_at,
    detect_degenerate_frame,
    find_events,
    is_localised,
    localisation_scan,
    observable_scan,
    qrf_change_to,
    transform_comparison,
)
from .states import frame_factorizes
from .suite import verify_suite
from .translation import (
    TranslationScenario,
    build_earth_particle,
    mass_frame_state,
    relative_distance,
    three_particle_report,
    to_mass_frame,
    to_probe_frame,
)

SCHEMA_VERSION = 1
AMP_TOL = 1e-12

_complex = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_seed = {"type": "integer", "minimum": 0, "maximum": 2**64 - 1}

PARAMETER_SCHEMAS = {
    "translation_two_body": {
        "type": "object",
        "properties": {
            "n": {"type": "integer", "minimum": 4},
            "a": {"type": "integer", "minimum": 1},
            "alpha": _complex,
            "beta": _complex,
        },
        "required": ["n", "a", "alpha", "beta"],
        "additionalProperties": False,
    },
    "translation_three_body": {
        "type": "object",
        "properties": {
            "n": {"type": "integer", "minimum": 4},
            "positions": {
                "type": "array", "minItems": 2, "maxItems": 2,
                "items": {"type": "array", "items": {"type": "integer"}, "minItems": 3, "maxItems": 3},
            },
            "alpha": _complex,
            "beta": _complex,
        },
        "required": ["n", "positions", "alpha", "beta"],
        "additionalProperties": False,
    },
    "spacetime_superposition": {
        "type": "object",
        "properties": {
            "builtin": {"enum": ["curvature"]},
            "superposition": {"type": "object", "required": ["branches"]},
            "frame_field": {"type": "string"},
            "new_frame_field": {"type": "string"},
            "target": {"type": "array", "items": {"type": "array", "items": {"type": "integer"},
                                                   "minItems": 4, "maxItems": 4}},
            "observables": {"type": "array", "items": {"type": "string"}},
            "events": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2},
        },
        "required": ["frame_field"],
        "oneOf": [{"required": ["builtin"]}, {"required": ["superposition"]}],
        "additionalProperties": False,
    },
    "property_suite": {
        "type": "object",
        "properties": {"seed": _seed, "cases": {"type": "integer", "minimum": 1}},
        "required": ["seed", "cases"],
        "additionalProperties": False,
    },
}

SCENARIO_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": sorted(PARAMETER_SCHEMAS)},
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "parameters": {"type": "object"},
    },
    "required": ["kind", "schema_version", "parameters"],
    "additionalProperties": False,
}


@dataclass
class ScenarioConfig:
    kind: str
    parameters: dict = field(default_factory=dict)
    name: str | None = None
    schema_version: int = SCHEMA_VERSION

    @classmethod
    def from_dict(cls, doc) -> ScenarioConfig:
        validate(doc)
        return cls(doc["kind"], doc["parameters"], doc.get("name"), doc["schema_version"])

    @property
    def label(self) -> str:
        return self.name or self.kind


def validate(doc):
    try:
        jsonschema.validate(doc, SCENARIO_SCHEMA)
        jsonschema.validate(doc["parameters"], PARAMETER_SCHEMAS[doc["kind"]])
    except jsonschema.ValidationError as exc:
        raise ValidationError(f"{'/'.join(map(str, exc.absolute_path)) or '<root>'}: {exc.message}") from None


def load_scenario(path) -> ScenarioConfig:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc})") from None
    return ScenarioConfig.from_dict(doc)


def _cx(pair) -> complex:
    return complex(pair[0], pair[1])


def _normalised(alpha, beta) -> tuple[complex, complex]:
    alpha, beta = _cx(alpha), _cx(beta)
    norm = math.hypot(abs(alpha), abs(beta))
    if norm == 0:
        raise ValidationError("alpha and beta are both zero")
    return alpha / norm, beta / norm


def _binary_entropy(p: float) -> float:
    return -sum(x * math.log2(x) for x in (p, 1 - p) if x > 0)


def run_two_body(cfg: ScenarioConfig, report: RunReport):
    p = cfg.parameters
    alpha, beta = _normalised(p["alpha"], p["beta"])
    try:
        sc = TranslationScenario(p["n"], p["a"], alpha, beta)
    except QRFError as exc:
        raise ValidationError(str(exc)) from None
    n, a = sc.n, sc.a
    psi_p = build_earth_particle(sc)
    psi_m = to_mass_frame(psi_p, sc)
    direct = mass_frame_state(sc)
    err = max((abs(x - y) for x, y in zip(psi_m.amplitudes, direct.amplitudes)), default=0.0)
    report.add("psi_M_reproduction", psi_m.same_configs(direct) and err <= AMP_TOL,
               {"configs_equal": psi_m.same_configs(direct), "max_amplitude_error": err,
                "branches": [[amp, list(m.configs)] for amp, m in psi_m.branches]}, AMP_TOL)
    back = to_probe_frame(psi_m, sc)
    report.add("round_trip", back.allclose(psi_p, AMP_TOL), {"configs_equal": back.same_configs(psi_p)}, AMP_TOL)
    d_before = [relative_distance(m, 1, 0, n) for m in psi_p.models]
    d_after = [relative_distance(m, 1, 0, n) for m in psi_m.models]
    # branches are ordered by orbit and the change preserves orbits, so compare branchwise
    report.add("relative_distance_invariance", d_before == d_after,
               {"d_MP_probe_frame": d_before, "d_MP_mass_frame": d_after}, "exact")
    flags = {"P_in_P_frame": frame_factorizes(psi_p, 0), "M_in_P_frame": frame_factorizes(psi_p, 1),
             "M_in_M_frame": frame_factorizes(psi_m, 1), "P_in_M_frame": frame_factorizes(psi_m, 0)}
    if len(psi_p) == 2:
        report.add("superposition_frame_dependence",
                   flags["P_in_P_frame"] and not flags["M_in_P_frame"] and flags["M_in_M_frame"] and not flags["P_in_M_frame"],
                   flags, "exact")
    if len(psi_m) == 2:
        by_amp = {m[0]: m for m in psi_m.models}
        phi, phi2 = by_amp[a % n], by_amp[-a % n]
        c_old = counter(sc.probe_frame(), phi, phi2)
        c_new = counter(sc.mass_frame(), phi, phi2)
        report.add("counterpart_after_change",
                   c_old.index == (-2 * a) % n and c_new == c_new.group.identity,
                   {"counter_probe_section": c_old.index, "expected": (-2 * a) % n,
                    "counter_mass_section": c_new.index}, "exact")


def run_three_body(cfg: ScenarioConfig, report: RunReport):
    p = cfg.parameters
    alpha, beta = _normalised(p["alpha"], p["beta"])
    rep = three_particle_report(p["n"], p["positions"], alpha, beta)
    report.tables["three_particle"] = [
        {"frame": f["frame"], "branch": b["branch"], "positions": b["positions"], "entropy_bits": f["entropy_bits"]}
        for f in rep["frames"] for b in f["branches"]
    ]
    f1, f2 = rep["frames"]
    expected = _binary_entropy(abs(alpha) ** 2) if len(f2["branches"]) == 2 else 0.0
    e1, e2 = f1["entropy_bits"]["2|3"], f2["entropy_bits"]["1|3"]
    report.add("frame1_entropy", abs(e1) <= 1e-9, {"entropy_bits": e1, "expected": 0.0}, 1e-9)
    report.add("frame2_entropy", abs(e2 - expected) <= 1e-9, {"entropy_bits": e2, "expected": expected}, 1e-9)
    report.add("frame_factorizes", f1["factorizes"]["1"] and f2["factorizes"]["2"],
               {"frame1": f1["factorizes"], "frame2": f2["factorizes"]}, "exact")


def run_spacetime(cfg: ScenarioConfig, report: RunReport):
    p = cfg.parameters
    if "builtin" in p:
        sup, _, _ = curvature_example()
    else:
        try:
            sup = GeometrySuperposition.from_dict(p["superposition"])
        except Exception as exc:
            raise ValidationError(f"superposition: {exc}") from None
    frame = p["frame_field"]
    for i, g in enumerate(sup.geometries):
        rep = detect_degenerate_frame(g.field_set(frame))
        report.add(f"frame_perfect.branch{i + 1}", rep.perfect, rep.to_dict(), "exact")
    if len(sup) < 2:
        return
    c = build_comparison(sup[0], sup[1], frame)
    same_fields = sup[0].field_set(frame) == sup[1].field_set(frame)
    report.add("comparison_map", c.is_identity() or not same_fields,
               {"image": list(c.image), "identity": c.is_identity(), "fields_equal": same_fields}, "exact")
    new = p.get("new_frame_field")
    if new:
        scale = sup[0].field_set(new).scale
        target = ReferenceFields(tuple(tuple(t) for t in p["target"]), scale) if "target" in p else sup[0].field_set(new)
        d = aligning_diffeo(sup, new, target)
        moved, c_new = qrf_change_to(sup, new, target)
        fields_equal = all(g.field_set(new) == target for g in moved.geometries)
        report.add("alignment_identity", c_new.is_identity() and fields_equal,
                   {"diffeo": [list(x) for x in d.perms], "identity": c_new.is_identity()}, "exact")
        c_law = transform_comparison(c, QuantumDiffeo(d.perms[:2]))
        rebuilt = build_comparison(moved[0], moved[1], frame)
        report.add("comparison_transformation_law", c_law.same_map(rebuilt),
                   {"transformed": list(c_law.image), "rebuilt": list(rebuilt.image)}, "exact")
        report.notes["old_frame_fields_equal_after_change"] = moved[0].field_set(frame) == moved[1].field_set(frame)
        rows = localisation_scan(sup, frame, new, target)
        report.tables["localisation"] = rows
        report.add("localisation_preserved_by_diffeo", all(r[f"localised_{frame}"] for r in rows),
                   {"pairs": len(rows), "delocalised_in_new_frame": sum(not r[f"localised_{new}"] for r in rows)},
                   "exact")
        if "events" in p:
            la, lb = p["events"]
            ev = find_events(sup[0], sup[1], la, lb)
            ev2 = find_events(moved[0], moved[1], la, lb)
            moved_ok = [e2.points == (d[0][e.points[0]], d[1][e.points[1]]) for e, e2 in zip(ev, ev2)]
            report.add("events", all(moved_ok), {
                "events": [list(e.points) for e in ev],
                "localised_before": [is_localised(*e.points, c) for e in ev],
                "moved_events": [list(e.points) for e in ev2],
                "localised_old_frame_after": [is_localised(*e.points, c_law) for e in ev2],
                "localised_new_frame_after": [is_localised(*e.points, c_new) for e in ev2],
            }, "exact")
        for obs in p.get("observables", []):
            c_alt = build_comparison(sup[0], sup[1], new)
            defs = [definite_at(obs, q, c(q), c, sup[0], sup[1]) for q in range(sup.n_points)]
            defs_after = [definite_at(obs, d[0][q], d[1][c(q)], c_law, moved[0], moved[1]) for q in range(sup.n_points)]
            defs_alt = [definite_at(obs, q, c_alt(q), c_alt, sup[0], sup[1]) for q in range(sup.n_points)]
            report.add(f"definiteness.{obs}", defs == defs_after,
                       {f"definite_{frame}": defs, f"definite_{new}": defs_alt}, 1e-12)
            report.tables[f"observable.{obs}"] = observable_scan(sup, obs, frame)


def run_scenario(cfg: ScenarioConfig | dict) -> RunReport:
    if isinstance(cfg, dict):
        cfg = ScenarioConfig.from_dict(cfg)
    if cfg.kind == "property_suite":
        t0 = time.perf_counter()
        report = verify_suite(cfg.parameters["seed"], cfg.parameters["cases"])
        report.scenario = cfg.label
        report.timings["total"] = time.perf_counter() - t0
        return report
    report = RunReport(cfg.label)
    t0 = time.perf_counter()
    {
        "translation_two_body": run_two_body,
        "translation_three_body": run_three_body,
        "spacetime_superposition": run_spacetime,
    }[cfg.kind](cfg, report)
    report.timings["total"] = time.perf_counter() - t0
    return report

