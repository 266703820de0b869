"""Exception hierarchy shared across the workbench.

The CLI maps ``ConfigError`` to exit code 1 (validation) and every other
``WorkbenchError`` to exit code 2 (runtime); the service maps them to
HTTP 400 and 500 respectively.
"""


class WorkbenchError(Exception):
    """Base class for all workbench failures."""

    kind = "runtime"


class ConfigError(WorkbenchError):
    """Invalid arguments, invalid run configuration, or missing inputs."""

    kind = "validation"


class DataError(WorkbenchError):
    """Malformed or unusable data in an input file."""
