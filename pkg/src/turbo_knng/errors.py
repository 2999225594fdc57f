"""Exception hierarchy for turbo_knng.

Library code raises these; the command layer turns them into a nonzero exit
with a one-line diagnostic.
"""


class KnngError(Exception):
    """Base exception for all turbo_knng errors."""

    pass


class ParameterError(KnngError, ValueError):
    """An argument is out of range or inconsistent with its inputs."""

    pass


class DatasetFormatError(KnngError):
    """A dataset, labels or graph file does not match its on-disk format."""

    pass


class GraphInvariantError(KnngError):
    """A structural check on a neighbor graph failed."""

    pass
