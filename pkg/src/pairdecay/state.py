"""Full-chain pure states.

Qubit ``j`` is bit ``j`` of the basis-state index (bit 0 least significant).
Every routine in the package relies on this little-endian map.

Two-qubit vectors on the central pair (Bell states, 4x4 density matrices)
use the textbook order |00>, |01>, |10>, |11> with qubit 0 as the *left*
factor, i.e. local index ``2*b0 + b1``.  :func:`make_initial_state` does the
reordering when it embeds the pair into the chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from pairdecay import InvalidInput

MAX_QUBITS = 26
ORTHO_TOL = 1e-12

SeedLike = Union[int, np.random.SeedSequence, None]

KET0 = np.array([1.0, 0.0], dtype=complex)
KET1 = np.array([0.0, 1.0], dtype=complex)


@dataclass
class StateVector:
    """Amplitudes of an ``num_qubits``-qubit pure state.

    The array is owned by the instance and mutated in place by the Floquet
    kernel; everything else treats it as read-only.
    """

    amplitudes: np.ndarray
    num_qubits: int

    def __post_init__(self):
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise InvalidInput(
                f"num_qubits={self.num_qubits} outside [1, {MAX_QUBITS}]")
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.num_qubits,):
            raise InvalidInput(
                f"expected {1 << self.num_qubits} amplitudes, "
                f"got shape {self.amplitudes.shape}")

    @classmethod
    def basis(cls, index: int, num_qubits: int) -> "StateVector":
        amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps, num_qubits)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def qubit_bit(self, index: int, qubit: int) -> int:
        """Value of ``qubit`` in basis state ``index``."""
        return (index >> qubit) & 1

    def copy(self) -> "StateVector":
        return StateVector(self.amplitudes.copy(), self.num_qubits)


@dataclass(frozen=True)
class BellSpec:
    """Local orthonormal bases (mu_i, eta_i) of the two central qubits.

    The Bell state built from it is (|mu1 mu2> + |eta1 eta2>)/sqrt(2).
    """

    mu1: np.ndarray = KET0
    eta1: np.ndarray = KET1
    mu2: np.ndarray = KET0
    eta2: np.ndarray = KET1

    def validate(self):
        for name, (mu, eta) in (("1", (self.mu1, self.eta1)),
                                ("2", (self.mu2, self.eta2))):
            basis = np.array([mu, eta], dtype=complex)
            if basis.shape != (2, 2):
                raise InvalidInput(f"local basis {name} must be two 2-vectors")
            gram = basis.conj() @ basis.T
            if np.max(np.abs(gram - np.eye(2))) > ORTHO_TOL:
                raise InvalidInput(f"local basis {name} is not orthonormal")


def make_bell(spec: BellSpec | None = None) -> np.ndarray:
    """Bell vector in |00>,|01>,|10>,|11> order (qubit 0 on the left)."""
    spec = BellSpec() if spec is None else spec
    spec.validate()
    mu1, eta1, mu2, eta2 = (np.asarray(v, dtype=complex) for v in
                            (spec.mu1, spec.eta1, spec.mu2, spec.eta2))
    return (np.kron(mu1, mu2) + np.kron(eta1, eta2)) / np.sqrt(2.0)


def make_haar_random(n_qubits: int, seed: SeedLike = None) -> np.ndarray:
    """Haar-random pure state on ``n_qubits`` qubits (Gaussian, normalized).

    The same ``seed`` always gives the same amplitudes.
    """
    if n_qubits < 1:
        raise InvalidInput("n_qubits must be >= 1")
    if n_qubits > MAX_QUBITS:
        raise InvalidInput(f"n_qubits must be <= {MAX_QUBITS}")
    rng = np.random.default_rng(seed)
    dim = 1 << n_qubits
    amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return amps / np.linalg.norm(amps)


def _pair_to_little_endian(pair: np.ndarray) -> np.ndarray:
    # (b0, b1) row-major -> index b0 + 2*b1
    return pair.reshape(2, 2).T.reshape(4)


def make_initial_state(bell: np.ndarray,
                       env: np.ndarray | Sequence[np.ndarray]) -> StateVector:
    """Product state ``bell (x) env`` with the pair on qubits 0 and 1.

    ``env`` is either one fragment or a sequence of fragments.  Fragments are
    placed on consecutive qubits starting at 2, in the order given; each
    fragment uses the little-endian convention internally.
    """
    bell = np.asarray(bell, dtype=complex)
    if bell.shape != (4,):
        raise InvalidInput(f"bell vector must have 4 components, got {bell.shape}")
    fragments = [np.asarray(env, dtype=complex)] if isinstance(env, np.ndarray) \
        else [np.asarray(f, dtype=complex) for f in env]
    amps = _pair_to_little_endian(bell)
    n = 2
    for frag in fragments:
        k = frag.size.bit_length() - 1
        if frag.ndim != 1 or frag.size != 1 << k or k < 1:
            raise InvalidInput(
                f"environment fragment of size {frag.size} is not a qubit register")
        amps = np.kron(frag, amps)
        n += k
    if n > MAX_QUBITS:
        raise InvalidInput(f"total of {n} qubits exceeds {MAX_QUBITS}")
    return StateVector(amps, n)
