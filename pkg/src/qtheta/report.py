"""Verification outcome record shared by every checking operation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional


@dataclass
class VerificationReport:
    id: str
    status: str  # "pass" | "fail"
    truncation: Optional[int] = None
    first_mismatch: Optional[Fraction] = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "status": self.status,
        }
        if self.truncation is not None:
            out["truncation"] = self.truncation
        if self.first_mismatch is not None:
            out["first_mismatch"] = str(self.first_mismatch)
        if self.detail:
            out["detail"] = self.detail
        return out

    def __str__(self):
        extra = f" first_mismatch={self.first_mismatch}" if self.first_mismatch is not None else ""
        extra += f" ({self.detail})" if self.detail else ""
        return f"[{self.status.upper():4s}] {self.id}{extra}"
