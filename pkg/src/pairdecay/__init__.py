"""Two central qubits decohering inside a generalized kicked Ising chain."""

__version__ = "0.1.0"


class InvalidInput(ValueError):
    """Raised when an argument violates a documented precondition."""


class NumericalDegeneracy(ArithmeticError):
    """Raised when a density matrix is too far from physical to measure."""


class InsufficientData(ValueError):
    """Raised when a fit or deviation has too few usable points."""


from pairdecay.state import (  # noqa: E402
    MAX_QUBITS,
    BellSpec,
    StateVector,
    make_bell,
    make_haar_random,
    make_initial_state,
)
from pairdecay.floquet import (  # noqa: E402
    PRESETS,
    ChainSpec,
    FloquetOp,
    apply_step,
    compile_spec,
    dense_oracle,
)
from pairdecay.measures import (  # noqa: E402
    concurrence,
    purity,
    reduce_to_pair,
    spectrum,
    werner_concurrence_of_purity,
    werner_state,
)

__all__ = [
    "InvalidInput",
    "NumericalDegeneracy",
    "InsufficientData",
    "MAX_QUBITS",
    "BellSpec",
    "StateVector",
    "make_bell",
    "make_haar_random",
    "make_initial_state",
    "PRESETS",
    "ChainSpec",
    "FloquetOp",
    "apply_step",
    "compile_spec",
    "dense_oracle",
    "concurrence",
    "purity",
    "reduce_to_pair",
    "spectrum",
    "werner_concurrence_of_purity",
    "werner_state",
]
