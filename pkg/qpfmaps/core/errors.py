"""Exceptions raised by the qpfmaps library.

Two families exist, and the command line maps them to exit codes:

    - :class:`ConfigurationError`: the input document or the family
      definition is unusable (exit code 2).
    - :class:`AnalysisError`: the computation ran but a numerical
      condition failed (exit code 1).

Per grid point conditions (escape, missing preimage) are never raised;
they are stored as flags on the returned samples.
"""


class QpfError(Exception):
    """Base class of every error raised by qpfmaps"""

    def __init__(self, message, *args, **kwargs):
        super().__init__(message, *args, **kwargs)
        self.message = message

    def __str__(self):
        return self.message


class ConfigurationError(QpfError):
    """Invalid configuration; optionally names the violated assumption

    Example:
        >>> str(ConfigurationError("ordering violated", assumption="(A3)"))
        '(A3) ordering violated'
    """

    def __init__(self, message, assumption=None, *args, **kwargs):
        if assumption:
            message = f"{assumption} {message}"
        super().__init__(message, *args, **kwargs)
        self.assumption = assumption


class ExpressionSyntaxError(ConfigurationError):
    def __init__(self, message, col=None, *args, **kwargs):
        super().__init__(message, None, *args, **kwargs)
        self.col = col

    def __repr__(self):
        if self.col:
            return "ExpressionSyntaxError: '%s' at position %s" % (
                self.message,
                self.col,
            )
        return "ExpressionSyntaxError: '%s'" % self.message

    def __str__(self):
        return self.__repr__()


class AnalysisError(QpfError):
    """A numerical condition failed during an analysis"""


class DomainError(AnalysisError):
    """Fibre coordinate outside the domain of the family"""


class NoPreimageError(AnalysisError):
    """Value outside the image of the fibre map"""


class OrbitEscapeError(AnalysisError):
    """Orbit left the configured fibre bounds"""


class EscapeFlagError(AnalysisError):
    """A graph with escaped points was used where a full graph is required"""


class OrderingError(AnalysisError):
    """Attractor found below the repeller"""


class NonConvexRegionError(AnalysisError):
    pass


class NotFoundError(AnalysisError):
    pass


class EmptyIntervalError(AnalysisError):
    pass


class NoAdmissibleMError(AnalysisError):
    pass


class HypothesisError(AnalysisError):
    pass


class PredicateConstantError(AnalysisError):
    """Bisection predicate has the same value on both ends of the bracket"""


class ProbeRangeError(AnalysisError):
    pass
