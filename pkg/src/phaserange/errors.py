"""Exception types shared across the package.

Two failure families matter to callers (and to the CLI exit codes):
bad input and broken internal construction invariants.
"""


class InputError(ValueError):
    """Invalid user-supplied data: wavelengths, phases, config, files."""


class InternalCheckError(RuntimeError):
    """An exact construction invariant failed; indicates a bug, not bad input."""
