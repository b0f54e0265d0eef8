"""Exception types shared across the package."""


class CfrdfError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CfrdfError):
    """Malformed input text (N-Triples, grammar, query, nre or pattern files)."""

    def __init__(self, message, line=None, column=None, source=None):
        self.line = line
        self.column = column
        self.source = source
        where = []
        if source:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"col {column}")
        prefix = ":".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class ContractError(CfrdfError):
    """A caller violated a documented precondition (e.g. grammar not in norm
    form, or a relation solved against a different graph/grammar)."""


class EvaluationError(CfrdfError):
    """A query or pattern references something that cannot be resolved."""
