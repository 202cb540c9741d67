"""Exception types shared across the package.

The CLI maps these onto process exit codes; see cli.EXIT_CODES.
"""


class InputError(ValueError):
    """Malformed input: bad parameters, files, dimensions, or preconditions."""


class DegenerateSetError(InputError):
    """A point set with fewer than two distinct locations where two are required."""


class CapacityError(RuntimeError):
    """An enumeration or universe exceeded its configured cap."""


class SketchFailureError(RuntimeError):
    """Every sketch-backed recovery attempt failed (probability <= delta by construction)."""
