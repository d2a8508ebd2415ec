"""Verification reports: per-axiom counts plus full witnesses for failures."""

from __future__ import annotations

from dataclasses import dataclass, field

MAX_WITNESSES = 100


@dataclass
class Witness:
    axiom: str
    context: tuple
    detail: str
    lhs: object = None
    rhs: object = None

    def to_json_dict(self):
        def conv(v):
            if v is None:
                return None
            if hasattr(v, "tolist"):
                return v.tolist()
            return v

        return {
            "axiom": self.axiom,
            "context": [str(c) for c in self.context],
            "detail": self.detail,
            "lhs": conv(self.lhs),
            "rhs": conv(self.rhs),
        }


@dataclass
class AxiomReport:
    """Counts of checks per axiom id and witnesses for every failure
    (witness storage is capped; the failure count is not)."""

    title: str
    counts: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)

    def record(self, axiom, ok, context=(), detail="", lhs=None, rhs=None):
        checked, failed = self.counts.get(axiom, (0, 0))
        self.counts[axiom] = (checked + 1, failed + (0 if ok else 1))
        if not ok and len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append(
                Witness(axiom=axiom, context=tuple(context), detail=detail, lhs=lhs, rhs=rhs)
            )

    @property
    def failures(self) -> int:
        return sum(f for _, f in self.counts.values())

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def axiom_rows(self):
        return [
            {"id": axiom, "checked": c, "failed": f}
            for axiom, (c, f) in sorted(self.counts.items())
        ]

    def to_json_dict(self):
        return {
            "family": self.title,
            "axioms": self.axiom_rows(),
            "witnesses": [w.to_json_dict() for w in self.witnesses],
        }

    def summary(self) -> str:
        rows = ", ".join(
            f"{a}:{c}/{f}" for a, (c, f) in sorted(self.counts.items())
        )
        return f"{self.title}: checked/failed {rows}"
