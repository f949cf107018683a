"""A full input instance: tube datum, complement datum and optional approximations."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .approximation import Approximation
from .globalspace import GlobalDatum, validate_global
from .report import ValidationReport
from .tube import TubeDatum, validate_tube


@dataclass(frozen=True)
class Instance:
    name: str
    tube: TubeDatum
    glob: GlobalDatum
    approximations: Mapping[str, Approximation] = field(default_factory=dict)

    @property
    def N(self) -> int:
        return self.tube.N

    @property
    def witt(self) -> bool:
        return self.tube.witt

    @property
    def degree_range(self) -> tuple[int, int]:
        return self.tube.degree_range

    def validate(self) -> ValidationReport:
        report = validate_tube(self.tube)
        if report.ok:
            report.extend(validate_global(self.tube, self.glob))
        return report

    def __eq__(self, other) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.name == other.name and self.tube == other.tube and self.glob == other.glob
                and dict(self.approximations) == dict(other.approximations))

    __hash__ = None
