"""Superpositions of models, branch-controlled transformations, QRF changes
and entanglement diagnostics."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError, QRFError, SameOrbitError
from .groups import GroupElement
from .models import Model, ModelSpace, OrbitLabel, Section, convention_change

NORM_TOL = 1e-9
PRUNE_TOL = 1e-12
MAX_BASIS = 2**24

DISTINCT_ORBITS = "distinct_orbits"
ALLOW_SAME_ORBIT = "allow_same_orbit"


@dataclass(frozen=True)
class BranchState:
    """Normalised superposition of models, branches sorted by orbit label."""

    space: ModelSpace
    branches: tuple[tuple[complex, Model], ...]
    policy: str = DISTINCT_ORBITS

    def __len__(self):
        return len(self.branches)

    def __iter__(self):
        return iter(self.branches)

    @property
    def amplitudes(self) -> tuple[complex, ...]:
        return tuple(a for a, _ in self.branches)

    @property
    def models(self) -> tuple[Model, ...]:
        return tuple(m for _, m in self.branches)

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(a) ** 2 for a in self.amplitudes)))

    def orbit_labels(self) -> tuple[OrbitLabel, ...]:
        return tuple(self.space.orbit_label(m) for m in self.models)

    def same_configs(self, other: BranchState) -> bool:
        return self.models == other.models

    def allclose(self, other: BranchState, tol: float = 1e-12) -> bool:
        return self.same_configs(other) and all(
            abs(a - b) <= tol for a, b in zip(self.amplitudes, other.amplitudes)
        )

    def to_dict(self) -> dict:
        return {
            "policy": self.policy,
            "branches": [[a.real, a.imag, list(m.configs)] for a, m in self.branches],
        }


def _sorted_branches(space: ModelSpace, branches):
    return tuple(sorted(branches, key=lambda b: (space.orbit_label(b[1]), b[1])))


def superpose(space: ModelSpace, entries: Iterable[tuple[complex, Model]], policy: str = DISTINCT_ORBITS) -> BranchState:
    if policy not in (DISTINCT_ORBITS, ALLOW_SAME_ORBIT):
        raise DomainError(f"unknown policy {policy!r}")
    merged: dict[Model, complex] = {}
    for amp, m in entries:
        m = space.model(m)
        merged[m] = merged.get(m, 0j) + complex(amp)
    if not merged:
        raise QRFError("cannot superpose an empty list of branches")
    norm = np.sqrt(sum(abs(a) ** 2 for a in merged.values()))
    if norm <= PRUNE_TOL:
        raise QRFError("branch amplitudes have zero total norm")
    kept = {m: a / norm for m, a in merged.items() if abs(a / norm) > PRUNE_TOL}
    norm = np.sqrt(sum(abs(a) ** 2 for a in kept.values()))
    kept = {m: a / norm for m, a in kept.items()}
    if policy == DISTINCT_ORBITS:
        seen: dict[OrbitLabel, Model] = {}
        for m in kept:
            lab = space.orbit_label(m)
            if lab in seen:
                raise SameOrbitError(f"branches {seen[lab]!r} and {m!r} lie on the same orbit {lab!r}",
                                     (seen[lab], m))
            seen[lab] = m
    return BranchState(space, _sorted_branches(space, ((a, m) for m, a in kept.items())), policy)


def from_dict(space: ModelSpace, doc: Mapping) -> BranchState:
    entries = [(complex(re, im), space.model(_tuplify(cfg))) for re, im, cfg in doc["branches"]]
    return superpose(space, entries, doc.get("policy", DISTINCT_ORBITS))


def _tuplify(x):
    return tuple(_tuplify(v) for v in x) if isinstance(x, list) else x


def controlled_transform(st: BranchState, selector: Mapping[OrbitLabel, GroupElement] | Callable[[OrbitLabel], GroupElement]) -> BranchState:
    """Act on each branch with the element the selector assigns to its orbit."""
    space = st.space
    pick = selector.__getitem__ if isinstance(selector, Mapping) else selector
    out = []
    for amp, m in st.branches:
        lab = space.orbit_label(m)
        try:
            g = pick(lab)
        except KeyError:
            raise DomainError(f"selector is undefined on {lab!r}") from None
        if g is None:
            raise DomainError(f"selector is undefined on {lab!r}")
        out.append((amp, space.act(g, m)))
    return BranchState(space, _sorted_branches(space, out), st.policy)


def classical_transform(st: BranchState, g: GroupElement) -> BranchState:
    return controlled_transform(st, lambda _: g)


def qrf_change(st: BranchState, old_frame: Section, new_frame: Section) -> BranchState:
    """Re-express ``st`` (given on ``old_frame``) relative to ``new_frame``.

    Each branch is moved by the convention-change element of its own orbit,
    which lands it on ``new_frame``'s representative.
    """
    for _, m in st.branches:
        if not old_frame.contains(m):
            raise PreconditionError(f"branch {m!r} does not lie on section {old_frame.name!r}")
    return controlled_transform(st, lambda lab: convention_change(old_frame, new_frame, lab))


def basis_index(st: BranchState, configs: tuple) -> int:
    sp = st.space.space
    d = len(sp)
    idx = 0
    for x in configs:
        idx = idx * d + sp.position(x)
    return idx


def embed_vector(st: BranchState) -> np.ndarray:
    """Amplitude vector in the product basis, configuration tuples in row-major order."""
    d = len(st.space.space)
    size = d ** st.space.n
    if size > MAX_BASIS:
        raise QRFError(f"basis of {size} states exceeds the limit of {MAX_BASIS}")
    vec = np.zeros(size, dtype=complex)
    for amp, m in st.branches:
        vec[basis_index(st, m.configs)] += amp
    return vec


@dataclass(frozen=True)
class DensityMatrix:
    """Density matrix on the span of ``basis`` (configuration tuples)."""

    basis: tuple
    matrix: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def check(self, tol: float = NORM_TOL):
        m = self.matrix
        if not np.allclose(m, m.conj().T, atol=tol):
            raise QRFError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1) > tol:
            raise QRFError(f"density matrix trace {np.trace(m).real} != 1")
        if self.eigenvalues().min() < -tol:
            raise QRFError("density matrix has a negative eigenvalue")
        return self

    def entropy(self, cutoff: float = PRUNE_TOL) -> float:
        return von_neumann_bits(self.eigenvalues(), cutoff)


def von_neumann_bits(eigenvalues, cutoff: float = PRUNE_TOL) -> float:
    p = np.asarray(eigenvalues, dtype=float)
    p = p[p > cutoff]
    return max(0.0, float(-(p * np.log2(p)).sum()))


def _check_subsystems(st: BranchState, subsystems) -> tuple[int, ...]:
    keep = tuple(sorted(set(subsystems)))
    if not keep:
        raise DomainError("subsystem set is empty")
    if len(keep) == st.space.n:
        raise DomainError("subsystem set covers every subsystem")
    if keep[0] < 0 or keep[-1] >= st.space.n:
        raise DomainError(f"subsystem indices {keep} out of range")
    return keep


def reduced_density_matrix(st: BranchState, subsystems) -> DensityMatrix:
    """Partial trace computed branchwise: configuration basis states are
    orthonormal, so <B_j|B_k> is 1 exactly when the traced-out parts agree."""
    keep = _check_subsystems(st, subsystems)
    rest = tuple(i for i in range(st.space.n) if i not in keep)
    parts = [(amp, tuple(m[i] for i in keep), tuple(m[i] for i in rest)) for amp, m in st.branches]
    basis = tuple(sorted({a for _, a, _ in parts}))
    pos = {a: i for i, a in enumerate(basis)}
    rho = np.zeros((len(basis), len(basis)), dtype=complex)
    for amp_j, a_j, b_j in parts:
        for amp_k, a_k, b_k in parts:
            if b_j == b_k:
                rho[pos[a_j], pos[a_k]] += amp_j * np.conj(amp_k)
    return DensityMatrix(basis, rho)


def entanglement_entropy(st: BranchState, subsystems) -> float:
    """Von Neumann entropy in bits of the reduced state on ``subsystems``."""
    return reduced_density_matrix(st, subsystems).entropy()


def frame_factorizes(st: BranchState, frame_subsystem: int) -> bool:
    return len({m[frame_subsystem] for m in st.models}) == 1


def branch_values(st: BranchState, f: Callable[[Model], object]) -> tuple:
    """Per-branch values of a function of models, in branch order."""
    return tuple(f(m) for m in st.models)
