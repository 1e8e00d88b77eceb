"""Exception types and enumeration caps shared by every module."""
from __future__ import annotations

import os
from dataclasses import dataclass


class SpecIndError(Exception):
    """Base class for all package errors."""


class CapExceeded(SpecIndError):
    """An exhaustive enumeration would exceed its configured limit."""

    def __init__(self, what: str, required: int, limit: int):
        self.what = what
        self.required = required
        self.limit = limit
        super().__init__(
            f"{what}: enumeration needs {required} entries but the cap is {limit}; "
            f"raise the cap to at least {required}"
        )


class InputError(SpecIndError, ValueError):
    """Malformed user input; ``line``/``column`` locate JSON and CSV problems when known."""

    def __init__(self, message: str, source: str = "<input>", line: int | None = None, column: int | None = None):
        self.source, self.line, self.column = source, line, column
        where = source if line is None else f"{source}:{line}" + ("" if column is None else f":{column}")
        super().__init__(f"{where}: {message}")


class InvalidPinning(SpecIndError):
    """The pinning has no extension in the support (Omega_tau is empty)."""


class DegenerateError(SpecIndError):
    """An object is undefined for the given input (e.g. a local walk on < 2 coordinates)."""


class NonSymmetricError(SpecIndError):
    pass


class ConvergenceError(SpecIndError):
    pass


class DetailedBalanceError(SpecIndError):
    pass


class NonErgodicError(SpecIndError):
    pass


class MatroidAxiomError(SpecIndError):
    """Raised by constructors given data that does not define a matroid."""

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message if witness is None else f"{message}; witness: {witness}")


@dataclass(frozen=True)
class Caps:
    """Enumeration limits; environment variables override the defaults."""

    max_states: int = 1 << 20
    max_pinnings: int = 10**6
    max_bases: int = 10**5
    max_subsets: int = 10**6

    @classmethod
    def from_env(cls) -> "Caps":
        def get(name: str, default: int) -> int:
            raw = os.environ.get(name)
            return int(raw) if raw else default

        base = cls()
        return cls(
            max_states=get("SPECIND_MAX_STATES", base.max_states),
            max_pinnings=get("SPECIND_MAX_PINNINGS", base.max_pinnings),
            max_bases=get("SPECIND_MAX_BASES", base.max_bases),
            max_subsets=get("SPECIND_MAX_SUBSETS", base.max_subsets),
        )


def default_caps() -> Caps:
    return Caps.from_env()
