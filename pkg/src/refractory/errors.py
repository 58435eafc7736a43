"""Exception types shared across the package."""

from __future__ import annotations


class ParseError(ValueError):
    """Malformed text in an input file; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CapacityError(ValueError):
    """A sampling request asked for more patients than a class can supply."""


class ConvergenceError(RuntimeError):
    """An iterative fit ran out of iterations; carries the iteration count."""

    def __init__(self, message: str, iterations: int):
        super().__init__(message)
        self.iterations = iterations


class ConnectivityError(RuntimeError):
    """A neighborhood graph fell apart; carries the component count."""

    def __init__(self, n_components: int):
        super().__init__(
            f"neighborhood graph has {n_components} connected components; "
            "increase n_neighbors until the graph is connected"
        )
        self.n_components = n_components


class DependencyError(RuntimeError):
    """A pipeline stage is missing an artifact a prior subcommand produces."""
