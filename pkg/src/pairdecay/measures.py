"""Central-pair reduction, purity, concurrence and the Werner family.

Density matrices of the pair are 4x4 in the order |00>,|01>,|10>,|11> with
qubit 0 as the left factor.
"""

from __future__ import annotations

import numpy as np

from pairdecay import InvalidInput, NumericalDegeneracy
from pairdecay.state import StateVector, make_bell

DEGENERACY_TOL = 1e-8
RANGE_TOL = 1e-12

_SY = np.array([[0, -1j], [1j, 0]])
SYSY = np.kron(_SY, _SY)


def reduce_to_pair(state: StateVector | np.ndarray) -> np.ndarray:
    """Trace out qubits 2..L-1, leaving the density matrix of qubits 0 and 1."""
    psi = state.amplitudes if isinstance(state, StateVector) else np.asarray(state)
    if psi.size < 4:
        raise InvalidInput("need at least two qubits to reduce to the pair")
    # little-endian index -> axes (env, b1, b0); rows become 2*b0 + b1
    m = psi.reshape(-1, 2, 2).transpose(2, 1, 0).reshape(4, -1)
    return m @ m.conj().T


def purity(rho: np.ndarray) -> float:
    """Tr rho^2, as the sum of squared moduli of the entries."""
    return float(np.sum(np.abs(rho) ** 2))


def spectrum(rho: np.ndarray) -> np.ndarray:
    """Eigenvalues of ``rho`` in non-increasing order."""
    return np.linalg.eigvalsh(rho)[::-1]


def _check_spin_flip_spectrum(rho: np.ndarray) -> None:
    ev = np.linalg.eigvals(rho @ (SYSY @ rho.conj() @ SYSY))
    if np.any(np.abs(ev.imag) > DEGENERACY_TOL) or np.any(ev.real < -DEGENERACY_TOL):
        raise NumericalDegeneracy(
            f"rho * rho~ has eigenvalues {ev}; input is not a valid density matrix")


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    The eigenvalues of ``rho @ rho~`` (``rho~`` the spin-flipped conjugate)
    are checked for validity, but the lambdas are taken as singular values of
    ``sqrt(rho) YY conj(sqrt(rho))``.  Those equal the square roots of the
    same eigenvalues, without the ~1e-8 error that a square root of a
    round-off-sized eigenvalue would introduce for nearly pure states.
    """
    rho = np.asarray(rho, dtype=complex)
    _check_spin_flip_spectrum(rho)
    w, v = np.linalg.eigh(rho)
    sqrt_rho = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    lam = np.linalg.svd(sqrt_rho @ SYSY @ sqrt_rho.conj(), compute_uv=False)
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))


def werner_state(alpha: float, bell: np.ndarray | None = None) -> np.ndarray:
    """(alpha/4) I + (1 - alpha) |bell><bell|."""
    if not 0.0 <= alpha <= 1.0:
        raise InvalidInput(f"alpha={alpha} outside [0, 1]")
    bell = make_bell() if bell is None else np.asarray(bell, dtype=complex)
    return alpha / 4 * np.eye(4) + (1 - alpha) * np.outer(bell, bell.conj())


def werner_concurrence_of_purity(p):
    """Concurrence of the Werner state with purity ``p``.

    Zero for ``p <= 1/3``, else ``(sqrt(12 p - 3) - 1) / 2``.  Accepts scalars
    or arrays; values within 1e-12 of the [1/4, 1] interval are clipped.
    """
    p_arr = np.asarray(p, dtype=float)
    if np.any(p_arr < 0.25 - RANGE_TOL) or np.any(p_arr > 1.0 + RANGE_TOL):
        raise InvalidInput(f"purity outside [1/4, 1]: {p}")
    p_arr = np.clip(p_arr, 0.25, 1.0)
    c = np.where(p_arr > 1 / 3, (np.sqrt(np.maximum(12 * p_arr - 3, 0.0)) - 1) / 2, 0.0)
    return float(c) if c.ndim == 0 else c
