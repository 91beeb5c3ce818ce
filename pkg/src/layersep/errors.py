"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so the split matters:
malformed inputs (bundles, corpora, configs) raise :class:`ValidationError`,
while structurally valid data that cannot support a computation (a class
with one member, a constant series) raises :class:`DegenerateDataError`.
"""


class LayersepError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(LayersepError):
    """Input failed validation: bad file format, inconsistent metadata, bad config."""


class DegenerateDataError(LayersepError):
    """Input is well-formed but degenerate for the requested computation."""
