"""One period of the kicked Ising map, applied in place.

The period is ``U = U_K @ U_I``: the Ising phase acts first, then every qubit
receives the kick ``exp(-i (b_perp X + b_par Z))``.  ``hbar = 1`` and the kick
period is 1.

Bond ``j`` joins qubits ``j`` and ``(j + 1) % L``.  A bond equal to 0 is no
interaction at all, which is how the ring is cut into open segments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np
import scipy.linalg

from pairdecay import InvalidInput
from pairdecay.state import MAX_QUBITS, StateVector

# (b_perp, b_par)
PRESETS = {
    "integrable": (1.55, 0.0),
    "integrable-1.4": (1.4, 0.0),
    "intermediate": (1.89, 0.59),
    "chaotic": (1.4, 1.4),
}

ORACLE_MAX_QUBITS = 8
_CHUNK = 8  # bonds per phase lookup table

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class ChainSpec:
    num_qubits: int
    bonds: tuple
    b_perp: float
    b_par: float

    def __post_init__(self):
        bonds = tuple(float(b) for b in self.bonds)
        object.__setattr__(self, "bonds", bonds)
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise InvalidInput(f"num_qubits={self.num_qubits} outside [1, {MAX_QUBITS}]")
        if len(bonds) != self.num_qubits:
            raise InvalidInput(
                f"need {self.num_qubits} bonds, got {len(bonds)}")
        if not all(map(math.isfinite, bonds + (self.b_perp, self.b_par))):
            raise InvalidInput("couplings and fields must be finite")

    @classmethod
    def uniform(cls, num_qubits, J=1.0, b_perp=0.0, b_par=0.0):
        return cls(num_qubits, (J,) * num_qubits, b_perp, b_par)

    def bond_qubits(self, j: int) -> tuple[int, int]:
        return j, (j + 1) % self.num_qubits

    def components(self) -> list[set]:
        """Connected groups of qubits under the nonzero bonds."""
        parent = list(range(self.num_qubits))

        def find(q):
            while parent[q] != q:
                parent[q] = parent[parent[q]]
                q = parent[q]
            return q

        for j, J in enumerate(self.bonds):
            if J != 0.0:
                a, b = self.bond_qubits(j)
                parent[find(a)] = find(b)
        groups: dict[int, set] = {}
        for q in range(self.num_qubits):
            groups.setdefault(find(q), set()).add(q)
        return sorted(groups.values(), key=min)


def kick_matrix(b_perp: float, b_par: float) -> np.ndarray:
    """exp(-i (b_perp X + b_par Z)) in closed form."""
    theta = math.hypot(b_perp, b_par)
    if theta == 0.0:
        return np.eye(2, dtype=complex)
    n_dot_sigma = (b_perp * SIGMA_X + b_par * SIGMA_Z) / theta
    return math.cos(theta) * np.eye(2) - 1j * math.sin(theta) * n_dot_sigma


@dataclass(frozen=True)
class FloquetOp:
    """Precomputed pieces of one Floquet period.

    ``bond_phases[j] = (exp(-i J_j), exp(+i J_j))`` for aligned / anti-aligned
    spins on bond ``j``.  ``phase_tables`` folds those into per-byte lookup
    tables indexed by the anti-alignment pattern of 8 consecutive bonds.
    """

    num_qubits: int
    bond_phases: np.ndarray
    kick: np.ndarray
    phase_tables: np.ndarray = field(repr=False)


def compile_spec(spec: ChainSpec) -> FloquetOp:
    L = spec.num_qubits
    J = np.asarray(spec.bonds)
    bond_phases = np.stack([np.exp(-1j * J), np.exp(1j * J)], axis=1)

    n_chunks = -(-L // _CHUNK)
    tables = np.ones((n_chunks, 1 << _CHUNK), dtype=np.complex128)
    patterns = np.arange(1 << _CHUNK)
    for j in range(L):
        c, k = divmod(j, _CHUNK)
        anti = (patterns >> k) & 1
        tables[c] *= bond_phases[j, anti]
    return FloquetOp(L, bond_phases, kick_matrix(spec.b_perp, spec.b_par), tables)


@numba.njit(cache=True, nogil=True)
def _ising_pass(psi, num_qubits, tables):
    top = num_qubits - 1
    n_chunks = tables.shape[0]
    for i in range(psi.size):
        # bit j of ``anti`` is set when qubits j and j+1 (mod L) disagree
        anti = i ^ ((i >> 1) | ((i & 1) << top))
        ph = tables[0, anti & 0xFF]
        for c in range(1, n_chunks):
            ph *= tables[c, (anti >> (8 * c)) & 0xFF]
        psi[i] *= ph


@numba.njit(cache=True, nogil=True)
def _kick_pass(psi, num_qubits, k00, k01, k10, k11):
    half = psi.size >> 1
    for q in range(num_qubits):
        stride = 1 << q
        low = stride - 1
        for i in range(half):
            i0 = ((i & ~low) << 1) | (i & low)
            i1 = i0 | stride
            a = psi[i0]
            b = psi[i1]
            psi[i0] = k00 * a + k01 * b
            psi[i1] = k10 * a + k11 * b


def apply_step(state: StateVector, op: FloquetOp, steps: int = 1) -> None:
    """Advance ``state`` by ``steps`` Floquet periods, in place."""
    if state.num_qubits != op.num_qubits:
        raise InvalidInput(
            f"state has {state.num_qubits} qubits, operator {op.num_qubits}")
    psi = state.amplitudes
    k = op.kick
    for _ in range(steps):
        _ising_pass(psi, op.num_qubits, op.phase_tables)
        _kick_pass(psi, op.num_qubits, k[0, 0], k[0, 1], k[1, 0], k[1, 1])


def _on_qubit(single: np.ndarray, q: int, L: int) -> np.ndarray:
    # little-endian: qubit L-1 is the leftmost Kronecker factor
    return np.kron(np.kron(np.eye(1 << (L - 1 - q)), single), np.eye(1 << q))


def dense_oracle(spec: ChainSpec) -> np.ndarray:
    """Explicit 2^L x 2^L Floquet matrix built from Kronecker products.

    Kept deliberately naive: Hamiltonians are assembled as dense matrices and
    exponentiated with ``scipy.linalg.expm``.  Only meant for checking the
    in-place kernel.
    """
    L = spec.num_qubits
    if L > ORACLE_MAX_QUBITS:
        raise InvalidInput(f"dense oracle refuses L={L} > {ORACLE_MAX_QUBITS}")
    dim = 1 << L
    h_ising = np.zeros((dim, dim), dtype=complex)
    for j, J in enumerate(spec.bonds):
        a, b = spec.bond_qubits(j)
        h_ising += J * _on_qubit(SIGMA_Z, a, L) @ _on_qubit(SIGMA_Z, b, L)
    u_ising = scipy.linalg.expm(-1j * h_ising)

    u_kick_1 = scipy.linalg.expm(-1j * (spec.b_perp * SIGMA_X + spec.b_par * SIGMA_Z))
    u_kick = np.eye(1, dtype=complex)
    for _ in range(L):
        u_kick = np.kron(u_kick, u_kick_1)
    return u_kick @ u_ising
