"""Exception types raised by qsarmap."""


class QsarmapError(Exception):
    """Base class for all errors raised by this package."""


class DatasetError(QsarmapError, ValueError):
    """Malformed or unusable descriptor table."""


class DegenerateLabelingError(QsarmapError, ValueError):
    """A separability metric was requested on single-class labels."""


class ConvergenceError(QsarmapError, RuntimeError):
    """An iterative solver hit its iteration cap.

    Attributes
    ----------
    residual : float
        The convergence measure at the point of giving up.
    """

    def __init__(self, message, residual):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


class TrainingDivergedError(QsarmapError, FloatingPointError):
    """Autoencoder training produced a non-finite loss or parameter."""

    def __init__(self, epoch):
        super().__init__(
            f"training diverged at epoch {epoch}; retry with a smaller learning rate"
        )
        self.epoch = epoch
