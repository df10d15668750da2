"""Exception hierarchy shared by all evaluators."""


class QMGError(Exception):
    """Base class for evaluation failures."""


class DomainError(QMGError, ValueError):
    """Argument outside the domain of an operation."""


class PoleError(QMGError):
    """A factor or divisor vanished below the pole threshold.

    ``location`` is the argument of the function being evaluated at which the
    singular factor was met.
    """

    def __init__(self, location, message=None):
        self.location = complex(location)
        if message is None:
            message = f"singular point near z = {_fmt(self.location)}"
        super().__init__(message)


class BudgetError(QMGError):
    """Term or continuation budget exhausted before the tolerance was met."""


def _fmt(z):
    return f"{z.real!r}{z.imag:+}j"
