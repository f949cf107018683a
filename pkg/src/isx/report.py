"""Validation reports and error types shared across modules."""
from __future__ import annotations

from dataclasses import dataclass, field


class IsxError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(IsxError):
    """Input data violates a structural or mathematical requirement."""


class PreconditionError(IsxError):
    """An operation was called on inputs outside its domain."""


class ConsistencyError(IsxError):
    """An identity that must hold for valid inputs failed; indicates a bug or bad input."""


@dataclass(frozen=True)
class Failure:
    check: str
    degree: int | None = None
    detail: str = ""

    def __str__(self) -> str:
        where = f" in degree {self.degree}" if self.degree is not None else ""
        extra = f": {self.detail}" if self.detail else ""
        return f"{self.check}{where}{extra}"

    def to_dict(self) -> dict:
        return {"check": self.check, "degree": self.degree, "detail": self.detail}


@dataclass
class ValidationReport:
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, check: str, degree: int | None = None, detail: str = "") -> None:
        self.failures.append(Failure(check, degree, detail))

    def extend(self, other: "ValidationReport") -> None:
        self.failures.extend(other.failures)

    def __len__(self) -> int:
        return len(self.failures)

    def __iter__(self):
        return iter(self.failures)

    def to_dict(self) -> dict:
        return {"valid": self.ok, "failures": [f.to_dict() for f in self.failures]}

    def raise_if_failed(self, exc=ValidationError) -> None:
        if self.failures:
            raise exc("; ".join(str(f) for f in self.failures))
