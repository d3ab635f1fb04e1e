"""Exception hierarchy.

Two branches matter to callers: ``InputError`` covers bad arguments, bad
files, and unsupported identifiers (CLI exit code 2), while ``ContractError``
covers violated data contracts such as decreasing counters or misaligned
windows (CLI exit code 3).
"""


class RegwaveError(Exception):
    pass


class InputError(RegwaveError):
    pass


class ContractError(RegwaveError):
    pass


class UnknownFamilyError(InputError):
    def __init__(self, family: str):
        super().__init__(f"unsupported wavelet family: {family!r}")
        self.family = family


class LengthError(InputError):
    pass


class PolicyError(InputError):
    pass


class FamilyMismatchError(InputError):
    pass


class InsufficientDataError(InputError):
    pass


class DataError(InputError):
    pass


class UndefinedMetricError(InputError):
    pass


class UnknownPortError(InputError):
    pass


class ParseError(InputError):
    """Malformed scenario or data file; carries the offending line number."""

    def __init__(self, message: str, path: str = "", line: int = 0):
        where = f"{path}:{line}: " if path else (f"line {line}: " if line else "")
        super().__init__(where + message)
        self.path = path
        self.line = line


class MonotonicityError(ContractError):
    pass


class AlignmentError(ContractError):
    pass
