"""Exception hierarchy shared by every grossloss module."""


class GrossLossError(Exception):
    """Base class for all errors raised by this package."""


class DataError(GrossLossError):
    """Problem with the content or shape of input data."""


class SchemaError(DataError):
    """CSV header is missing, has unknown, or has duplicate columns."""


class RowError(DataError):
    """A data row could not be parsed or violates a record invariant."""

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class ParseError(DataError):
    """A metal cell does not match ``<karat>k-<code>``."""


class MixedTargetError(DataError):
    """Some records carry gross_loss and some do not."""


class AllMissingError(DataError):
    def __init__(self, column):
        self.column = column
        super().__init__(f"column {column!r} has no observed training value")


class WidthMismatchError(DataError):
    pass


class EmptySelectionError(DataError):
    pass


class DegenerateSplitError(DataError):
    pass


class SingularError(DataError):
    """Normal equations are rank deficient and no ridge was allowed."""


class InvalidKError(DataError):
    pass


class InvalidFoldsError(DataError):
    pass


class LengthMismatchError(DataError):
    pass


class EmptyError(DataError):
    pass


class ModelIOError(GrossLossError, OSError):
    """Reading or writing a model/report file failed."""


class FormatError(GrossLossError):
    """Model document is malformed."""


class VersionError(FormatError):
    """Model document has an unsupported format_version."""
