"""Custom exceptions for seedopt."""


class SeedOptError(Exception):
    """Base exception for seedopt."""

    def __init__(self, message, *args):
        """Initialize the exception.

        Args:
            message: Error message
            *args: Additional arguments
        """
        super(SeedOptError, self).__init__(message)
        self.message = message

    def __str__(self):
        """Return string representation."""
        return self.message


class GraphFormatError(SeedOptError):
    """Raised when parsing a graph, cost or embedding file fails."""

    def __init__(self, file_path, line_number=None, reason=None, *args):
        """Initialize the exception.

        Args:
            file_path: Path to the file that failed to parse
            line_number: Optional line number where the error occurred
            reason: Optional reason for the parsing error
            *args: Additional arguments
        """
        message = "Failed to parse file: %s" % file_path
        if line_number is not None:
            message += " at line %d" % line_number
        if reason:
            message += " (%s)" % reason
        super(GraphFormatError, self).__init__(message, *args)
        self.file_path = file_path
        self.line_number = line_number
        self.reason = reason


class EmptyGraphError(SeedOptError):
    """Raised when an edge list contains no edges."""

    def __init__(self, file_path, *args):
        message = "Edge list contains no edges: %s" % file_path
        super(EmptyGraphError, self).__init__(message, *args)
        self.file_path = file_path


class NodeIndexError(SeedOptError, IndexError):
    """Raised when a node id is outside [0, node_count)."""

    def __init__(self, node, node_count, *args):
        """Initialize the exception.

        Args:
            node: The offending node id
            node_count: Number of nodes in the graph
            *args: Additional arguments
        """
        message = "Node id %s out of range [0, %d)" % (node, node_count)
        super(NodeIndexError, self).__init__(message, *args)
        self.node = node
        self.node_count = node_count


class SeedSetError(SeedOptError):
    """Raised when a seed set violates |S| >= 1 or contains duplicates."""


class OracleLimitError(SeedOptError):
    """Raised when the exact expectation oracle refuses an instance."""


class EmbeddingError(SeedOptError):
    """Raised when an embedding table does not match its graph."""

    def __init__(self, reason, node=None, *args):
        message = reason if node is None else "%s: node %s" % (reason, node)
        super(EmbeddingError, self).__init__(message, *args)
        self.reason = reason
        self.node = node


class ConfigError(SeedOptError):
    """Raised when validating a configuration fails."""

    def __init__(self, errors, source=None, *args):
        """Initialize the exception.

        Args:
            errors: List of validation errors
            source: Optional path of the offending config file
            *args: Additional arguments
        """
        if isinstance(errors, str):
            errors = [errors]
        header = "Invalid configuration" if source is None else "Invalid configuration in %s" % source
        message = "%s:\n%s" % (header, "\n".join("- " + str(error) for error in errors))
        super(ConfigError, self).__init__(message, *args)
        self.errors = list(errors)
        self.source = source


class StatisticsError(SeedOptError):
    """Raised when a statistical test cannot be computed."""


class HypervolumeError(SeedOptError):
    """Raised when front points lie beyond the reference point."""

    def __init__(self, offenders, reference, *args):
        """Initialize the exception.

        Args:
            offenders: List of (index, point) pairs beyond the reference
            reference: The reference point
            *args: Additional arguments
        """
        listed = ", ".join("#%d %s" % (index, tuple(point)) for index, point in offenders)
        message = "Points beyond reference %s: %s" % (tuple(reference), listed)
        super(HypervolumeError, self).__init__(message, *args)
        self.offenders = offenders
        self.reference = reference


class DatasetNotFoundError(SeedOptError):
    """Raised when a dataset file is missing."""

    def __init__(self, path, *args):
        message = "Dataset not found: %s" % path
        super(DatasetNotFoundError, self).__init__(message, *args)
        self.path = path
