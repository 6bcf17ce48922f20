"""Located diagnostics shared by the loaders, the frontend and the extractor."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class Location:
    file: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    message: str
    severity: str = WARNING
    location: Optional[Location] = None

    def __str__(self) -> str:
        if self.location is None:
            return f"{self.severity}: {self.message}"
        return f"{self.location}: {self.severity}: {self.message}"


def warning(message: str, location: Optional[Location] = None) -> Diagnostic:
    return Diagnostic(message, WARNING, location)


def error(message: str, location: Optional[Location] = None) -> Diagnostic:
    return Diagnostic(message, ERROR, location)
