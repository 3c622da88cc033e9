import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qrframes.errors import DomainError, SameOrbitError
from qrframes.models import Model, counter
from qrframes.states import entanglement_entropy, frame_factorizes
from qrframes.translation import (
    TranslationScenario,
    build_earth_particle,
    mass_frame_state,
    relative_distance,
    three_particle_report,
    to_mass_frame,
    to_probe_frame,
)

R = 1 / math.sqrt(2)


def branches(st_):
    return {m.configs: amp for amp, m in st_.branches}


def test_probe_frame_state():
    sc = TranslationScenario()
    assert branches(build_earth_particle(sc)) == pytest.approx({(0, 13): R, (0, 3): R})


def test_separation_bounds():
    for a in (0, 8, 9):
        with pytest.raises(DomainError):
            TranslationScenario(16, a)
    with pytest.raises(DomainError):
        TranslationScenario(16, 3, 0.5, 0.5)


def test_single_branch_after_pruning():
    st_ = build_earth_particle(TranslationScenario(16, 3, 1, 0))
    assert len(st_) == 1 and st_.models == (Model((0, 13)),)


def test_mass_frame_reproduction():
    sc = TranslationScenario()
    psi_m = to_mass_frame(build_earth_particle(sc), sc)
    # alpha rides with M=-a in the probe frame, so with P=+a relative to M
    assert branches(psi_m) == pytest.approx({(3, 0): R, (13, 0): R})
    assert psi_m.allclose(mass_frame_state(sc))


def test_amplitudes_follow_their_branches():
    sc = TranslationScenario(16, 3, 0.6, 0.8j)
    psi_m = to_mass_frame(build_earth_particle(sc), sc)
    assert branches(psi_m) == pytest.approx({(3, 0): 0.6, (13, 0): 0.8j})


def test_round_trip():
    sc = TranslationScenario(20, 7, 0.6, -0.8)
    psi_p = build_earth_particle(sc)
    assert to_probe_frame(to_mass_frame(psi_p, sc), sc).allclose(psi_p, 1e-12)


def test_relative_distance_examples():
    assert relative_distance(Model((0, 3)), 1, 0, 16) == 3
    assert relative_distance(Model((5, 5)), 1, 0, 16) == 0
    assert relative_distance(Model((0, 13)), 1, 0, 16) == -3


def test_superposition_is_frame_dependent():
    sc = TranslationScenario()
    psi_p = build_earth_particle(sc)
    psi_m = to_mass_frame(psi_p, sc)
    assert frame_factorizes(psi_p, 0) and not frame_factorizes(psi_p, 1)
    assert frame_factorizes(psi_m, 1) and not frame_factorizes(psi_m, 0)


def test_counterpart_changes_with_frame():
    sc = TranslationScenario()
    psi_m = to_mass_frame(build_earth_particle(sc), sc)
    phi, phi2 = Model((3, 0)), Model((13, 0))
    assert set(psi_m.models) == {phi, phi2}
    assert counter(sc.probe_frame(), phi, phi2).index == (-2 * 3) % 16
    assert counter(sc.mass_frame(), phi, phi2).index == 0


def test_three_particle_report():
    rep = three_particle_report(16, [(0, 2, 7), (0, 5, 7)], R, R)
    f1, f2 = rep["frames"]
    assert f1["entropy_bits"]["2|3"] == pytest.approx(0, abs=1e-9)
    assert f2["entropy_bits"]["1|3"] == pytest.approx(1, abs=1e-9)
    assert f2["entropy_bits"]["2|13"] == pytest.approx(0, abs=1e-9)
    assert f1["factorizes"] == {"1": True, "2": False, "3": True}
    assert f2["factorizes"] == {"1": False, "2": True, "3": False}
    assert [b["positions"] for b in f2["branches"]] == [{"1": -2, "2": 0, "3": 5}, {"1": -5, "2": 0, "3": 2}]


def test_three_particle_unequal_weights():
    p = 0.25
    rep = three_particle_report(16, [(0, 2, 7), (0, 5, 7)], math.sqrt(p), math.sqrt(1 - p))
    assert rep["frames"][1]["entropy_bits"]["1|3"] == pytest.approx(0.8113, abs=1e-4)


def test_three_particle_rejects_repeated_orbit():
    with pytest.raises(SameOrbitError):
        three_particle_report(16, [(0, 4, 7), (0, 4, 7)], R, R)
    with pytest.raises(DomainError):
        three_particle_report(16, [(0, 4, 7), (1, 5, 7)], R, R)


def test_single_branch_has_no_entanglement():
    rep = three_particle_report(16, [(0, 2, 7), (0, 5, 7)], 1, 0)
    assert all(abs(v) < 1e-12 for f in rep["frames"] for v in f["entropy_bits"].values())


@given(st.integers(4, 64).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, (n - 1) // 2))),
       st.floats(0.05, 0.95), st.floats(0, 2 * math.pi))
def test_relative_distance_preserved(na, p, phase):
    n, a = na
    alpha = math.sqrt(p)
    beta = math.sqrt(1 - p) * complex(math.cos(phase), math.sin(phase))
    sc = TranslationScenario(n, a, alpha, beta)
    psi_p = build_earth_particle(sc)
    psi_m = to_mass_frame(psi_p, sc)
    before = [relative_distance(m, 1, 0, n) for m in psi_p.models]
    assert before == [relative_distance(m, 1, 0, n) for m in psi_m.models]
    assert sorted(before) == [-a, a]
    assert entanglement_entropy(psi_m, [0]) == pytest.approx(0, abs=1e-12)
