"""Exception types shared across the package."""


class SeqDfaError(Exception):
    """Base class for all errors raised by this package."""


class DataError(SeqDfaError):
    """Malformed or inconsistent input data (files, records, fixtures)."""


class UnknownSymbolError(DataError):
    """A symbol not present in the model's alphabet was supplied.

    DFAs have no out-of-vocabulary transition, so prediction-time symbols
    outside the training alphabet fail loudly instead of being misrouted.
    """

    def __init__(self, symbol):
        self.symbol = symbol
        super().__init__(f"unknown symbol: {symbol!r}")


class SchemaError(DataError):
    """A serialized model does not satisfy its schema."""


class InternalError(SeqDfaError):
    """An internal invariant was violated; indicates a bug, not bad input."""
