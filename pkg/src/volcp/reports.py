"""Result records shared by the tests and the CLI."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Literal


@dataclass
class TestReport:
    name: str
    raw_stat: float
    rescaled_stat: float
    critical_value: float
    decision: bool
    level: float
    critical_source: Literal["limit", "bootstrap", "threshold"] = "limit"
    p_value: float | None = None
    argmax_index: int | None = None
    details: dict[str, Any] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    __test__ = False  # not a pytest class

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["kind"] = type(self).__name__
        return d


@dataclass
class LocalTestReport(TestReport):
    k: int | None = None
    m: int | None = None
    truncation_u: float | None = None


@dataclass
class ChangePointResult:
    theta_hats: list[float]
    indices: list[int]
    clean_indices: list[int]
    iterations: int
    rounds: list[dict[str, Any]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["kind"] = "ChangePointResult"
        return d


def report_from_dict(d: dict[str, Any]):
    d = dict(d)
    kind = d.pop("kind", "TestReport")
    cls = {"TestReport": TestReport, "LocalTestReport": LocalTestReport,
           "ChangePointResult": ChangePointResult}[kind]
    return cls(**d)
