"""
Tests for the exception handling context managers.
"""

import pytest
from pydantic import BaseModel, Field

from circulant_canon.models.errors import (
    GraphFormatError,
    InvalidInputError,
    NotFirmError,
    OracleBoundExceededError,
)
from circulant_canon.utils.exception_handling import (
    handle_input_errors,
    handle_tool_errors,
)


class _Order(BaseModel):
    n: int = Field(ge=1)


def _validation_error() -> Exception:
    try:
        _Order(n=0)
    except ValueError as e:
        return e
    raise AssertionError("validation should have failed")


# Parametrized test data for handle_input_errors
input_error_scenarios = [
    (FileNotFoundError, InvalidInputError, "file not found", "graph.txt"),
    (
        PermissionError("Permission denied"),
        InvalidInputError,
        "Permission denied",
        "graph.txt",
    ),
    (_validation_error(), InvalidInputError, "validation failed", "--set"),
    (ValueError("expected '<n>: s1,s2,...'"), GraphFormatError, "expected", "--set"),
    (
        Exception("Some other error"),
        InvalidInputError,
        "An unexpected error occurred",
        "graph.txt",
    ),
]


@pytest.mark.parametrize(
    "raised_exception, expected_exception, exception_match, source",
    input_error_scenarios,
)
def test_handle_input_errors(
    raised_exception: Exception,
    expected_exception: type[Exception],
    exception_match: str,
    source: str,
):
    """
    Test the handle_input_errors context manager for different built-in exceptions.

    Verifies that parse, validation and I/O failures are raised again as package
    errors that carry the input source.
    """
    with pytest.raises(expected_exception, match=exception_match) as excinfo:
        with handle_input_errors(source):
            raise raised_exception

    assert excinfo.value.source == source


@pytest.mark.parametrize(
    "error",
    [
        OracleBoundExceededError("brute_automorphisms", 13, 12),
        NotFirmError(4, 24),
        GraphFormatError("bad header", "graph.txt", 1),
    ],
)
def test_handle_input_errors_passes_package_errors_through(error):
    with pytest.raises(type(error)) as excinfo:
        with handle_input_errors("graph.txt"):
            raise error
    assert excinfo.value is error


# Parametrized test data for handle_tool_errors
tool_error_scenarios = [
    (_validation_error(), InvalidInputError, "validation failed", "5: 1"),
    (ValueError("element 7 is not a non-zero residue"), GraphFormatError, "residue", "5: 7"),
    (
        Exception("Some other error"),
        InvalidInputError,
        "An unexpected error occurred",
        "5: 1",
    ),
]


@pytest.mark.asyncio
@pytest.mark.parametrize(
    "raised_exception, expected_exception, exception_match, source",
    tool_error_scenarios,
)
async def test_handle_tool_errors(
    raised_exception: Exception,
    expected_exception: type[Exception],
    exception_match: str,
    source: str,
):
    """
    Test the handle_tool_errors async context manager with the same translation rules.
    """
    with pytest.raises(expected_exception, match=exception_match) as excinfo:
        async with handle_tool_errors(source):
            raise raised_exception

    assert excinfo.value.source == source


@pytest.mark.asyncio
async def test_handle_tool_errors_passes_package_errors_through():
    error = OracleBoundExceededError("orbital_partition", 20, 12)
    with pytest.raises(OracleBoundExceededError) as excinfo:
        async with handle_tool_errors("20: 1"):
            raise error
    assert excinfo.value is error


def test_error_messages():
    assert str(GraphFormatError("bad header", "graph.txt", 3)) == "Invalid input graph.txt: bad header (line 3)"
    assert str(OracleBoundExceededError("brute_automorphisms", 13, 12)) == (
        "brute_automorphisms is limited to n <= 12, got n = 13"
    )
    assert "not firm" in str(NotFirmError(4, 24))
