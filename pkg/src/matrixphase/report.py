"""Structured verdict records for algebraic claims."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

__all__ = ["ClaimReport", "write_reports", "read_reports"]

VERDICTS = ("holds", "fails", "recorded")


@dataclass(frozen=True)
class ClaimReport:
    """One machine-checked claim: residual, tolerance, and verdict.

    Asserted claims get verdict ``holds``/``fails`` from residual <= tol;
    ``recorded`` marks computed-but-not-asserted claims.
    """

    claim: str
    kind: str
    residual: float
    tolerance: float
    verdict: str
    inputs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"bad verdict {self.verdict!r}")
        if self.verdict == "holds" and not self.residual <= self.tolerance:
            raise ValueError("verdict 'holds' requires residual <= tolerance")

    @classmethod
    def checked(cls, claim, kind, residual, tolerance, inputs=None, assertive=True):
        if assertive:
            verdict = "holds" if residual <= tolerance else "fails"
        else:
            verdict = "recorded"
        return cls(
            claim=claim,
            kind=kind,
            residual=float(residual),
            tolerance=float(tolerance),
            verdict=verdict,
            inputs=dict(inputs or {}),
        )

    @property
    def ok(self) -> bool:
        """True unless an asserted claim failed."""
        return self.verdict != "fails"

    def to_line(self) -> str:
        payload = {
            "claim": self.claim,
            "kind": self.kind,
            "inputs": self.inputs,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
        }
        return json.dumps(payload, sort_keys=True, default=str)


def write_reports(reports, path) -> None:
    with open(path, "w") as fh:
        for r in reports:
            fh.write(r.to_line() + "\n")


def read_reports(path) -> list[ClaimReport]:
    out = []
    with open(path) as fh:
        for line in fh:
            d = json.loads(line)
            out.append(ClaimReport(**d))
    return out
