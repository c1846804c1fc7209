# Copyright (c) 2024.
"""Class containing utility functions to emit CLI responses."""

import logging
from enum import IntEnum
from pathlib import Path
from typing import Any, Generic, Literal, TypeVar

import numpy as np
import orjson
import pandas as pd
import typer
from pydantic import BaseModel
from rich.console import Console
from rich.table import Table

from common.Reports import MeasureReport, SuiteReport

logger = logging.getLogger(__name__)

OutputFormat = Literal["json", "table", "csv"]


class ExitCode(IntEnum):
    """Stable process exit codes."""

    OK = 0
    CHECK_FAILED = 1
    INPUT_ERROR = 2


ResponseData = BaseModel | dict[str, Any] | list[Any]
T = TypeVar("T", bound=ResponseData | None)


class Response(BaseModel, Generic[T]):
    """Response structure for CLI output."""

    data: T | None = None
    message: str = ""
    success: bool = True


def _rows(data: ResponseData | None) -> list[dict[str, Any]]:
    """Flatten a payload into table rows."""
    match data:
        case MeasureReport():
            return [
                {"measure": key, **entry.model_dump()}
                for key, entry in data.entries.items()
            ]
        case SuiteReport():
            return [{"suite": data.suite, **c.model_dump()} for c in data.checks]
        case BaseModel():
            return [{"key": k, "value": v} for k, v in data.model_dump().items()]
        case dict():
            return [{"key": k, "value": v} for k, v in data.items()]
        case list():
            return [row for item in data for row in _rows(item)]
        case _:
            return []


class Responses(Generic[T]):
    """Class for rendering responses and mapping them to exit codes."""

    @staticmethod
    def success(data: T, message: str = "Success") -> Response[T]:
        """Wrap a successful payload."""
        return Response[T](data=data, message=message, success=True)

    @staticmethod
    def failure(message: str, data: T = None) -> Response[T]:
        """Wrap a failure, optionally with the partial payload."""
        return Response[T](data=data, message=message, success=False)

    @staticmethod
    def render(response: Response[T], fmt: OutputFormat = "json") -> str:
        """Render a response in the requested format

        Args:
            response: The response to render.
            fmt: json (the full envelope), csv or table (payload rows only).

        Returns:
            The rendered text

        """
        match fmt:
            case "json":
                return orjson.dumps(
                    response.model_dump(serialize_as_any=True),
                    default=_encode,
                    option=orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY,
                ).decode()
            case "csv":
                return pd.DataFrame(_rows(response.data)).to_csv(index=False)
            case "table":
                rows = _rows(response.data)
                table = Table(title=response.message or None)
                for column in rows[0] if rows else ["message"]:
                    table.add_column(str(column))
                for row in rows:
                    table.add_row(*(_cell(v) for v in row.values()))
                console = Console(width=120, record=True)
                with console.capture() as capture:
                    console.print(table)
                return capture.get()

    @staticmethod
    def emit(
        response: Response[T],
        fmt: OutputFormat = "json",
        out: Path | None = None,
    ) -> ExitCode:
        """Write a response to stdout or a file

        Args:
            response: The response to emit.
            fmt: Output format.
            out: Destination file; stdout when omitted.

        Returns:
            OK on success, CHECK_FAILED otherwise

        """
        text = Responses[T].render(response, fmt)
        if out is None:
            typer.echo(text)
        else:
            _ = out.write_text(text)
            logger.info(f"Wrote {fmt} output to {out}")
        return ExitCode.OK if response.success else ExitCode.CHECK_FAILED

    @staticmethod
    def input_error(error: Exception) -> ExitCode:
        """Report an input error on stderr and return its exit code."""
        logger.error(f"Input error: {error}")
        return ExitCode.INPUT_ERROR


def _encode(value: object) -> object:
    """orjson fallback: complex numbers become [re, im]."""
    if isinstance(value, complex | np.complexfloating):
        return [float(value.real), float(value.imag)]
    raise TypeError(f"Cannot serialize {type(value).__name__}")


def _cell(value: object) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)
