"""Lattice-translation scenarios: a probe particle and a massive object in
superposition, and three particles whose subsystem split depends on the frame.

Positions live on Z_n with wraparound. Subsystem order for the two-body
scenario is (P, M): index 0 is the probe particle, index 1 the mass.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from .errors import DomainError, SameOrbitError
from .groups import ConfigSpace, CyclicGroup
from .models import Model, ModelSpace, Section
from .states import (
    BranchState,
    classical_transform,
    entanglement_entropy,
    frame_factorizes,
    qrf_change,
    superpose,
)

P, M = 0, 1


def lattice(n: int, particles: int) -> ModelSpace:
    return ModelSpace(ConfigSpace.regular(CyclicGroup(n)), particles)


@dataclass(frozen=True)
class TranslationScenario:
    n: int = 16
    a: int = 3
    alpha: complex = 1 / math.sqrt(2)
    beta: complex = 1 / math.sqrt(2)
    particle_count: int = 2

    def __post_init__(self):
        if self.n < 4:
            raise DomainError("lattice size must be at least 4")
        if not 0 < self.a < self.n / 2:
            raise DomainError(f"separation must satisfy 0 < a < n/2, got a={self.a}, n={self.n}")
        if abs(abs(self.alpha) ** 2 + abs(self.beta) ** 2 - 1) > 1e-9:
            raise DomainError("|alpha|^2 + |beta|^2 must equal 1")
        if self.particle_count != 2:
            raise DomainError("the two-body scenario has exactly two particles")

    @property
    def space(self) -> ModelSpace:
        return _space(self.n)

    def probe_frame(self) -> Section:
        return self.space.origin_section(P, 0, name="P")

    def mass_frame(self) -> Section:
        return self.space.origin_section(M, 0, name="M")


_spaces: dict[int, ModelSpace] = {}


def _space(n: int) -> ModelSpace:
    # one shared space per lattice size so sections and states agree on identity
    if n not in _spaces:
        _spaces[n] = lattice(n, 2)
    return _spaces[n]


def build_earth_particle(sc: TranslationScenario) -> BranchState:
    """P at the origin; M at -a (amplitude alpha) and +a (amplitude beta)."""
    n, a = sc.n, sc.a
    return superpose(sc.space, [(sc.alpha, Model((0, -a % n))), (sc.beta, Model((0, a % n)))])


def mass_frame_state(sc: TranslationScenario) -> BranchState:
    """Directly constructed state relative to M: P at +a (alpha) and -a (beta)."""
    n, a = sc.n, sc.a
    return superpose(sc.space, [(sc.alpha, Model((a % n, 0))), (sc.beta, Model((-a % n, 0)))])


def to_mass_frame(st: BranchState, sc: TranslationScenario) -> BranchState:
    return qrf_change(st, sc.probe_frame(), sc.mass_frame())


def to_probe_frame(st: BranchState, sc: TranslationScenario) -> BranchState:
    return qrf_change(st, sc.mass_frame(), sc.probe_frame())


def relative_distance(m: Model, i: int, j: int, n: int) -> int:
    """x_i - x_j reduced into (-n/2, n/2]."""
    d = (m[i] - m[j]) % n
    return d - n if d > n / 2 else d


def three_particle_state(n: int, positions: Sequence[Sequence[int]], alpha: complex, beta: complex) -> BranchState:
    """Two-branch state of three particles expressed in particle 1's frame.

    ``positions`` gives (q1, q2, q3) per branch; q1 must agree across
    branches. The state is shifted rigidly so particle 1 sits at 0.
    """
    if len(positions) != 2 or any(len(q) != 3 for q in positions):
        raise DomainError("need two branches of three positions")
    if positions[0][0] % n != positions[1][0] % n:
        raise DomainError("particle 1 must be at the same position in both branches")
    space = lattice(n, 3)
    m1, m2 = (Model(tuple(x % n for x in q)) for q in positions)
    if space.orbit_label(m1) == space.orbit_label(m2):
        # superpose would merge identical models silently; a repeated orbit is never a superposition here
        raise SameOrbitError("both branches lie in one orbit", (m1, m2))
    st = superpose(space, [(alpha, m1), (beta, m2)])
    return classical_transform(st, space.group(-positions[0][0] % n))


def three_particle_report(n: int, positions: Sequence[Sequence[int]], alpha: complex, beta: complex) -> dict:
    """Relative positions, factorisation and entanglement in frames 1 and 2.

    Particles are numbered from 1 in the report. For each frame the entropy
    of the non-frame pair's bipartition is the entropy of either member alone
    (the pair is in a pure state once the frame factorises out).
    """
    st1 = three_particle_state(n, positions, alpha, beta)
    space = st1.space
    frames = {k: space.origin_section(k - 1, 0, name=f"particle{k}") for k in (1, 2)}
    states = {1: st1, 2: qrf_change(st1, frames[1], frames[2])}
    out = []
    for k, st in states.items():
        others = [i for i in (1, 2, 3) if i != k]
        out.append({
            "frame": k,
            "branches": [
                {
                    "branch": b,
                    "amplitude": [amp.real, amp.imag],
                    "positions": {str(i + 1): relative_distance(m, i, k - 1, n) for i in range(3)},
                }
                for b, (amp, m) in enumerate(st.branches)
            ],
            "factorizes": {str(i): frame_factorizes(st, i - 1) for i in (1, 2, 3)},
            "entropy_bits": {
                f"{others[0]}|{others[1]}": entanglement_entropy(st, [others[0] - 1]),
                f"{k}|{others[0]}{others[1]}": entanglement_entropy(st, [k - 1]),
            },
        })
    return {"n": n, "frames": out}
