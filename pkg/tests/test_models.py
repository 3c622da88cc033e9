import pytest
from hypothesis import given
from hypothesis import strategies as st

from qrframes.errors import AmbiguityError, DomainError
from qrframes.groups import ConfigSpace, CyclicGroup, SymmetricGroup, compose, inverse
from qrframes.models import (
    Model,
    ModelSpace,
    convention_change,
    counter,
    lowering_element,
    orbit_label,
    relating_element,
)


def brute_relating(n, m1, m2):
    return [g for g in range(n) if tuple((x + g) % n for x in m1) == tuple(m2)]


def test_orbit_label_examples(lattice16):
    assert orbit_label(lattice16, Model((0, 3))).canonical == Model((0, 3))
    assert orbit_label(lattice16, Model((13, 0))).canonical == Model((0, 3))
    single = ModelSpace(ConfigSpace.regular(CyclicGroup(16)), 1)
    assert {orbit_label(single, Model((x,))).canonical for x in range(16)} == {Model((0,))}


def test_orbit_label_is_lexicographic_minimum(lattice16):
    m = Model((9, 4))
    assert orbit_label(lattice16, m).canonical == min(lattice16.orbit(m))


def test_relating_element_examples(lattice16, z16):
    assert relating_element(lattice16, Model((0, 3)), Model((5, 8))) == z16(5)
    m = Model((7, 2))
    assert relating_element(lattice16, m, m) == z16.identity
    assert relating_element(lattice16, Model((0, 3)), Model((0, 4))) is None


def test_relating_element_ambiguous_on_dial():
    z24 = CyclicGroup(24)
    space = ModelSpace(ConfigSpace.dial(z24, 12), 1)
    with pytest.raises(AmbiguityError) as exc:
        relating_element(space, Model((5,)), Model((6,)))
    assert {g.label for g in exc.value.candidates} == {1, 13}


def test_lowering_element(lattice16, z16):
    s = lattice16.origin_section(0)
    assert lowering_element(s, Model((0, 9))) == z16.identity
    assert lowering_element(s, Model((5, 8))) == z16(11)
    m0 = Model((0, 4))
    g = z16(6)
    assert lowering_element(s, lattice16.act(g, m0)) == inverse(g)


def test_counter_examples(lattice16, z16):
    s = lattice16.origin_section(0)
    assert counter(s, Model((5, 8)), Model((2, 9))) == compose(inverse(z16(14)), z16(11)) == z16(13)
    assert counter(s, Model((0, 3)), Model((0, 7))) == z16.identity
    for sec in (s, lattice16.origin_section(1), lattice16.canonical_section(), lattice16.random_section(3)):
        assert counter(sec, Model((1, 4)), Model((10, 13))) == z16(9)


def test_convention_change_is_orbit_dependent(lattice16, z16):
    s0, s1 = lattice16.origin_section(0), lattice16.origin_section(1)
    assert convention_change(s0, s1, orbit_label(lattice16, Model((0, 3)))) == z16(13)
    assert convention_change(s0, s1, orbit_label(lattice16, Model((0, 5)))) == z16(11)
    lab = orbit_label(lattice16, Model((2, 3)))
    assert convention_change(s0, s0, lab) == z16.identity


def test_sections_roundtrip_through_dict(lattice16):
    for s in (lattice16.origin_section(1, 4, name="p"), lattice16.canonical_section(), lattice16.random_section(11)):
        s2 = lattice16.section_from_dict(s.to_dict())
        for a in range(16):
            lab = orbit_label(lattice16, Model((0, a)))
            assert s(lab) == s2(lab)
    table = {orbit_label(lattice16, Model((0, a))): Model((3, (3 + a) % 16)) for a in range(16)}
    ts = lattice16.table_section(table)
    ts2 = lattice16.section_from_dict(ts.to_dict())
    assert all(ts(lab) == ts2(lab) for lab in table)


def test_table_section_errors(lattice16):
    with pytest.raises(DomainError):
        lattice16.table_section({orbit_label(lattice16, Model((0, 1))): Model((0, 2))})
    ts = lattice16.table_section({})
    with pytest.raises(DomainError):
        ts(orbit_label(lattice16, Model((0, 1))))


def test_model_validation(lattice16):
    with pytest.raises(DomainError):
        lattice16.validate(Model((0, 16)))
    with pytest.raises(DomainError):
        lattice16.validate(Model((0,)))


def test_tags_do_not_affect_equality():
    assert Model((1, 2), tags=("earth",)) == Model((1, 2))


models = st.integers(2, 24).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(0, n - 1), min_size=1, max_size=4))
)


@given(models, st.integers(0, 100))
def test_relating_matches_brute_force(case, g):
    n, xs = case
    space = ModelSpace(ConfigSpace.regular(CyclicGroup(n)), len(xs))
    m1 = Model(tuple(xs))
    m2 = Model(tuple((x + g) % n for x in xs))
    assert [h.index for h in space.relating_elements(m1, m2)] == brute_relating(n, m1.configs, m2.configs)


@given(models, st.integers(0, 100), st.integers(0, 2**16))
def test_counter_laws(case, g, seed):
    n, xs = case
    space = ModelSpace(ConfigSpace.regular(CyclicGroup(n)), len(xs))
    s = space.random_section(seed)
    m1 = Model(tuple(xs))
    gg = space.group(g % n)
    m2 = space.act(gg, m1)
    assert counter(s, m1, m1) == space.group.identity
    assert counter(s, m1, m2) == gg
    m3 = Model(tuple(reversed(xs)))
    assert counter(s, m1, m3) == compose(counter(s, m2, m3), counter(s, m1, m2))


@given(st.permutations(range(3)), st.permutations(range(3)))
def test_orbit_label_invariant_under_symmetric_action(p, q):
    s3 = SymmetricGroup(3)
    space = ModelSpace(ConfigSpace.permutation(s3), 3)
    m = Model(tuple(p))
    g = s3(tuple(q))
    assert space.orbit_label(space.act(g, m)) == space.orbit_label(m)
