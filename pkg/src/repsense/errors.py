"""Exception hierarchy shared by the library and the CLI."""

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


class RepsenseError(Exception):
    """Base class for every error raised on purpose by repsense."""

    exit_code = EXIT_DATA


class ParameterError(RepsenseError, ValueError):
    """An argument or config value is outside its legal range."""

    exit_code = EXIT_USAGE


class DataError(RepsenseError):
    """Input files are malformed or inconsistent."""

    exit_code = EXIT_DATA

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(f"{where}{message}")


class SegmentationError(RepsenseError):
    """The energy curve does not support the requested cut count."""

    exit_code = EXIT_DATA


class CheckpointError(RepsenseError):
    """A checkpoint does not match the code or the config it is loaded into."""

    exit_code = EXIT_DATA


class MetricError(RepsenseError, ValueError):
    """An evaluation metric is undefined for the given inputs."""

    exit_code = EXIT_NUMERIC


class TrainingError(RepsenseError):
    """Training produced a non-finite loss or gradient."""

    exit_code = EXIT_NUMERIC

    def __init__(self, message: str, parameter: str | None = None):
        self.parameter = parameter
        suffix = f" (parameter: {parameter})" if parameter else ""
        super().__init__(f"{message}{suffix}")
