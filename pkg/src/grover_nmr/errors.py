"""Exception types raised across the package."""


class ValidationError(ValueError):
    """Inputs violate a documented precondition (shape, unitarity, range)."""


class DefectiveMatrixError(ArithmeticError):
    """A 2x2 transfer matrix has a repeated eigenvalue and is not diagonalizable."""

    def __init__(self, eigenvalue: complex):
        self.eigenvalue = eigenvalue
        super().__init__(f"transfer matrix is defective (repeated eigenvalue {eigenvalue:.12g})")


class VanishingAmplitudeError(ValueError):
    """The preparation column has a (near) zero entry, so primed amplitudes are undefined."""

    def __init__(self, index: int, value: complex):
        self.index = index
        self.value = value
        super().__init__(
            f"|U[{index}, s]| = {abs(value):.3e} is below 1e-12; "
            "the amplitude recursion requires every U[i, s] to be nonzero"
        )


class UnsupportedTargetError(ValueError):
    """No pulse program is known for the requested operator."""


class NonUnitarySequenceError(ValueError):
    """A pulse sequence containing a gradient was asked for its unitary."""


class CalibrationError(RuntimeError):
    """The reference signal used for phase calibration vanished."""
