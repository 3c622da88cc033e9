import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qrframes.errors import DomainError, PreconditionError, QRFError, SameOrbitError
from qrframes.groups import ConfigSpace, CyclicGroup
from qrframes.models import Model, ModelSpace
from qrframes.states import (
    ALLOW_SAME_ORBIT,
    MAX_BASIS,
    classical_transform,
    controlled_transform,
    embed_vector,
    entanglement_entropy,
    frame_factorizes,
    from_dict,
    qrf_change,
    reduced_density_matrix,
    superpose,
)

R = 1 / math.sqrt(2)


def dense_entropy(state, keep):
    """Oracle: partial trace of the full product-basis vector, then -tr rho log2 rho."""
    d, n = len(state.space.space), state.space.n
    psi = embed_vector(state).reshape((d,) * n)
    rest = [i for i in range(n) if i not in keep]
    psi = np.transpose(psi, list(keep) + rest).reshape(d ** len(keep), -1)
    rho = psi @ psi.conj().T
    w = np.linalg.eigvalsh(rho)
    w = w[w > 1e-12]
    return float(-(w * np.log2(w)).sum())


def test_single_branch(lattice16):
    s = superpose(lattice16, [(1, Model((0, 3)))])
    assert len(s) == 1 and s.amplitudes == (1,)


def test_two_branch_distinct_orbits(lattice16):
    s = superpose(lattice16, [(R, Model((0, 13))), (R, Model((0, 3)))])
    assert len(s) == 2
    assert s.norm() == pytest.approx(1, abs=1e-12)


def test_same_orbit_rejected(lattice16):
    with pytest.raises(SameOrbitError) as exc:
        superpose(lattice16, [(R, Model((0, 3))), (R, Model((1, 4)))])
    assert set(exc.value.branches) == {Model((0, 3)), Model((1, 4))}
    # explicitly opting in keeps both branches
    s = superpose(lattice16, [(R, Model((0, 3))), (R, Model((1, 4)))], policy=ALLOW_SAME_ORBIT)
    assert len(s) == 2


def test_zero_norm_rejected(lattice16):
    with pytest.raises(QRFError):
        superpose(lattice16, [(0, Model((0, 3)))])
    with pytest.raises(QRFError):
        superpose(lattice16, [(1, Model((0, 3))), (-1, Model((0, 3)))])


def test_controlled_transform_examples(lattice16, z16):
    s = superpose(lattice16, [(R, Model((0, 13))), (R, Model((0, 3)))])
    lab13, lab3 = lattice16.orbit_label(Model((0, 13))), lattice16.orbit_label(Model((0, 3)))
    out = controlled_transform(s, {lab13: z16(3), lab3: z16(13)})
    assert set(out.models) == {Model((3, 0)), Model((13, 0))}
    assert controlled_transform(s, lambda _: z16.identity) == s
    shifted = classical_transform(s, z16(2))
    assert set(shifted.models) == {Model((2, 15)), Model((2, 5))}
    with pytest.raises(DomainError):
        controlled_transform(s, {lab13: z16(3)})


def test_qrf_change_preconditions(lattice16):
    s0, s1 = lattice16.origin_section(0), lattice16.origin_section(1)
    st_ = superpose(lattice16, [(R, Model((0, 13))), (R, Model((0, 3)))])
    assert qrf_change(st_, s0, s0) == st_
    with pytest.raises(PreconditionError):
        qrf_change(superpose(lattice16, [(1, Model((2, 3)))]), s0, s1)


def test_three_particle_change_shifts_by_minus_q2():
    space = ModelSpace(ConfigSpace.regular(CyclicGroup(16)), 3)
    st_ = superpose(space, [(R, Model((0, 2, 7))), (R, Model((0, 5, 7)))])
    out = qrf_change(st_, space.origin_section(0), space.origin_section(1))
    assert set(out.models) == {Model((14, 0, 5)), Model((11, 0, 2))}


def test_embed_vector(lattice16):
    v = embed_vector(superpose(lattice16, [(1, Model((0, 3)))]))
    assert v.shape == (256,) and v[3] == 1 and np.count_nonzero(v) == 1
    v = embed_vector(superpose(lattice16, [(R, Model((0, 13))), (R, Model((0, 3)))]))
    assert np.allclose(v[[3, 13]], R) and np.count_nonzero(v) == 2


def test_embed_vector_overflow_guard():
    space = ModelSpace(ConfigSpace.regular(CyclicGroup(64)), 5)
    assert 64**5 > MAX_BASIS
    with pytest.raises(QRFError):
        embed_vector(superpose(space, [(1, Model((0,) * 5))]))


def test_entropy_subset_errors(lattice16):
    s = superpose(lattice16, [(1, Model((0, 3)))])
    with pytest.raises(DomainError):
        entanglement_entropy(s, [])
    with pytest.raises(DomainError):
        entanglement_entropy(s, [0, 1])


def test_product_state_has_zero_entropy(lattice16):
    s = superpose(lattice16, [(0.6, Model((0, 3))), (0.8, Model((0, 5)))])
    assert entanglement_entropy(s, [0]) == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize("p", [0.5, 0.25, 0.1])
def test_three_particle_entropies_match_dense_oracle(p):
    space = ModelSpace(ConfigSpace.regular(CyclicGroup(8)), 3)
    a, b = math.sqrt(p), math.sqrt(1 - p)
    st1 = superpose(space, [(a, Model((0, 2, 5))), (b, Model((0, 3, 5)))])
    st2 = qrf_change(st1, space.origin_section(0), space.origin_section(1))
    h = -(p * math.log2(p) + (1 - p) * math.log2(1 - p))
    assert entanglement_entropy(st1, [2]) == pytest.approx(0, abs=1e-9)
    assert entanglement_entropy(st2, [0]) == pytest.approx(h, abs=1e-9)
    for s in (st1, st2):
        for keep in ([0], [1], [2], [0, 2], [1, 2]):
            assert entanglement_entropy(s, keep) == pytest.approx(dense_entropy(s, keep), abs=1e-9)


def test_density_matrix_is_valid(lattice16):
    s = superpose(lattice16, [(0.6, Model((0, 3))), (0.8j, Model((1, 9)))])
    rho = reduced_density_matrix(s, [1]).check()
    assert rho.dimension == 2


def test_frame_factorizes(lattice16):
    s = superpose(lattice16, [(R, Model((0, 13))), (R, Model((0, 3)))])
    assert frame_factorizes(s, 0) and not frame_factorizes(s, 1)


def test_state_dict_roundtrip(lattice16):
    s = superpose(lattice16, [(0.6, Model((0, 3))), (0.8j, Model((1, 9)))])
    assert from_dict(lattice16, s.to_dict()).allclose(s)


amplitudes = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False).filter(lambda z: abs(z) > 1e-3)


@given(st.integers(4, 12), st.lists(st.tuples(amplitudes, st.integers(0, 11), st.integers(0, 11)), min_size=1, max_size=4),
       st.integers(0, 2), st.integers(0, 2))
def test_qrf_change_is_unitary_and_entropies_match_oracle(n, entries, i, j):
    space = ModelSpace(ConfigSpace.regular(CyclicGroup(n)), 3)
    A, B = space.origin_section(i), space.origin_section(j)
    picked = {}
    for amp, x, y in entries:
        rep = A(space.orbit_label(Model((0, x % n, y % n))))
        picked.setdefault(rep, amp)
    st_ = superpose(space, [(a, m) for m, a in picked.items()])
    out = qrf_change(st_, A, B)
    assert out.norm() == pytest.approx(1, abs=1e-9)
    assert abs(np.vdot(embed_vector(out), embed_vector(out)) - 1) < 1e-9
    assert frame_factorizes(out, j)
    assert qrf_change(out, B, A).allclose(st_)
    for keep in ([0], [1], [2]):
        assert entanglement_entropy(out, keep) == pytest.approx(dense_entropy(out, keep), abs=1e-9)
