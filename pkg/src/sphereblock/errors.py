"""Exception hierarchy.

The CLI maps :class:`InputError` and its subclasses to exit code 2 and
:class:`ConsistencyError` to exit code 3.
"""


class SphereBlockError(Exception):
    """Base class for every error raised by this package."""


class InputError(SphereBlockError, ValueError):
    """Malformed or out-of-contract input."""


class ConfigError(InputError):
    """Unsupported root-system type, rank, family or lattice mode."""


class ResourceError(InputError):
    """A size guard was exceeded."""


class DomainError(InputError):
    """An argument lies outside the domain of a partial map."""


class GraphError(InputError):
    """The orbit graph is malformed (dangling ids, unreachable orbits, ...)."""


class ConsistencyError(SphereBlockError):
    """A guarantee of the theory failed on concrete data.

    Raised when an orbit generator or user supplied data produces something
    the combinatorics rules out, e.g. a weight that should lie in a lattice
    but does not.
    """
