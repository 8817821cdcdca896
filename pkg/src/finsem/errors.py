"""Exception hierarchy shared by every module."""


class FinsemError(Exception):
    pass


class FormulaSyntaxError(FinsemError, ValueError):
    """Malformed formula or sequent text; ``position`` is a 0-based offset."""

    def __init__(self, message, text="", position=0):
        self.text = text
        self.position = position
        if text:
            message = f"{message} at position {position}: {text!r}"
        super().__init__(message)


class FragmentError(FinsemError, ValueError):
    """A formula or sequent uses connectives the operation does not accept."""


class UnsupportedFragmentError(FragmentError):
    """The fragment has no finite matrix semantics; use the prover instead."""

    def __init__(self, offending):
        self.offending = frozenset(offending)
        names = ",".join(sorted(c.value for c in self.offending))
        super().__init__(
            f"fragment containing {{{names}}} has no finite characteristic matrix; "
            "decide it with the intuitionistic prover (method 'oracle')"
        )


class PreconditionError(FinsemError, ValueError):
    pass


class MatrixError(FinsemError, ValueError):
    pass


class EvaluationError(FinsemError, ValueError):
    pass


class ResourceLimitError(FinsemError):
    """A configured bound on search or enumeration was exceeded."""

    def __init__(self, message, limit=None):
        self.limit = limit
        super().__init__(message)


class InvariantError(FinsemError, AssertionError):
    """An internal invariant that should hold for every valid input failed."""
