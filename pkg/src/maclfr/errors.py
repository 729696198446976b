"""Exception taxonomy shared by every module.

The split mirrors how failures should be handled by callers:

* UsageError      -- the caller passed something malformed (wrong field, bad
                     subset, missing demand).  A bug on the calling side.
* DomainError     -- the values are well formed but outside the mathematical
                     domain of the operation (inverting zero, duplicate
                     interpolation points, parameters out of range).
* ResourceLimitError -- an exhaustive enumeration would exceed the configured
                     state cap.  Raised before any heavy work starts.
* IntegrityError  -- stored or transmitted data fails a structural check
                     (missing key share, undecodable coded block).
"""


class MaclfrError(Exception):
    """Base class for all library errors."""


class UsageError(MaclfrError):
    """Malformed arguments: mismatched fields, bad subsets, missing inputs."""


class DomainError(MaclfrError):
    """Arguments outside the mathematical domain of an operation."""


class ResourceLimitError(MaclfrError):
    """An enumeration would exceed the configured state cap."""


class IntegrityError(MaclfrError):
    """Stored or transmitted data fails a structural consistency check."""
