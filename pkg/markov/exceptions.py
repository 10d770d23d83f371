# ErgoCert markov/exceptions.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.


class ErgoCertError(Exception):
    """Base class of every error raised by the markov app."""


class DimensionError(ErgoCertError, ValueError):
    pass


class ParameterError(ErgoCertError, ValueError):
    pass


class MarkovianityError(ErgoCertError):
    """An operator required to be Markov (or a projection required to be idempotent) is not."""


class InvarianceError(ErgoCertError):
    """T_t P != P, a required commutation fails, or Q is not dominated by P."""


class MethodError(ErgoCertError):
    """An exact method was asked for on an input lacking the structure it relies on."""


class GuardError(ErgoCertError):
    pass


class VerificationError(ErgoCertError):
    """A construction failed the check that is supposed to hold for it by theory."""


class DysonMismatchError(VerificationError):
    pass


class ScenarioError(ErgoCertError):
    """A scenario file failed to parse or validate.

    Parameters
    ----------
    message : str
        Summary of the failure.
    diagnostics : list of str, optional
        One entry per offending field, each prefixed with its dotted path.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = list(diagnostics or [])

    def __str__(self):
        if not self.diagnostics:
            return super().__str__()
        return '{}\n  {}'.format(super().__str__(), '\n  '.join(self.diagnostics))
