"""
Utility functions for centralized exception handling.
"""

from contextlib import asynccontextmanager, contextmanager

from pydantic import ValidationError

from circulant_canon.models.errors import (
    CirculantError,
    GraphFormatError,
    InvalidInputError,
)


@contextmanager
def handle_input_errors(source: str):
    """
    Context manager translating parse and I/O failures into package errors.
    """
    try:
        yield
    except CirculantError:
        raise
    except FileNotFoundError:
        raise InvalidInputError("file not found", source)
    except PermissionError as e:
        raise InvalidInputError(f"Permission denied: {e}", source)
    except ValidationError as e:
        raise InvalidInputError(f"validation failed: {e.errors()[0]['msg']}", source)
    except ValueError as e:
        raise GraphFormatError(str(e), source)
    except Exception as e:
        raise InvalidInputError(f"An unexpected error occurred: {e}", source)


@asynccontextmanager
async def handle_tool_errors(source: str):
    """
    Async context manager for MCP tools, with the same translation rules.
    """
    try:
        yield
    except CirculantError:
        raise
    except ValidationError as e:
        raise InvalidInputError(f"validation failed: {e.errors()[0]['msg']}", source)
    except ValueError as e:
        raise GraphFormatError(str(e), source)
    except Exception as e:
        raise InvalidInputError(f"An unexpected error occurred: {e}", source)
