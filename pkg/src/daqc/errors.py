"""Exception hierarchy for the compiler pipeline."""


class DAQCError(Exception):
    """Base class for all errors raised by :mod:`daqc`."""


class HamiltonianFormatError(DAQCError, ValueError):
    """Malformed Hamiltonian or schedule data (bad keys, indices, JSON)."""


class SizeMismatch(DAQCError, ValueError):
    pass


class NonZZSource(DAQCError, ValueError):
    """The source Hamiltonian carries a coupling other than ``zz``."""


class IncompatibleTopology(DAQCError, ValueError):
    """The problem couples a qubit pair the source leaves uncoupled."""

    def __init__(self, i: int, j: int):
        self.pair = (i, j)
        super().__init__(
            f"problem couples qubits ({i}, {j}) but the source has no zz coupling there"
        )


class DegenerateSample(DAQCError, RuntimeError):
    pass


class NotSymmetric(DAQCError, ValueError):
    pass


class NoConvergence(DAQCError, RuntimeError):
    pass


class ZeroEigenvector(DAQCError, ValueError):
    """Eigenvector passed to the decomposer is not unit-norm."""


class NotUnit(DAQCError, ValueError):
    pass


class TooLarge(DAQCError, ValueError):
    """Dense verification requested beyond the qubit-count guard."""


class DimensionMismatch(DAQCError, ValueError):
    pass
