"""WER and its substitution / insertion / deletion decomposition."""
from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Iterable

from .align import AlignOp, Alignment

__all__ = ["ErrorCounts", "UndefinedWERError", "WerBreakdown", "aggregate_counts", "count_errors", "wer"]


class UndefinedWERError(ZeroDivisionError):
    """WER is undefined for an empty reference."""


@dataclass(frozen=True)
class ErrorCounts:
    n_ref: int = 0
    matches: int = 0
    subs: int = 0
    inss: int = 0
    dels: int = 0

    def __post_init__(self):
        if min(self.n_ref, self.matches, self.subs, self.inss, self.dels) < 0:
            raise ValueError("error counts must be non-negative")
        if self.n_ref != self.matches + self.subs + self.dels:
            raise ValueError(
                f"n_ref={self.n_ref} != matches+subs+dels={self.matches + self.subs + self.dels}"
            )

    @property
    def errors(self) -> int:
        return self.subs + self.inss + self.dels

    def __add__(self, other: "ErrorCounts") -> "ErrorCounts":
        return ErrorCounts(*(getattr(self, f.name) + getattr(other, f.name) for f in fields(self)))

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class WerBreakdown:
    wer: float
    sub_rate: float
    ins_rate: float
    del_rate: float

    def to_dict(self) -> dict:
        return {"wer": self.wer, "sub_rate": self.sub_rate, "ins_rate": self.ins_rate, "del_rate": self.del_rate}


def count_errors(a: Alignment) -> ErrorCounts:
    tally = {op: 0 for op in AlignOp}
    for e in a.entries:
        tally[e.op] += 1
    return ErrorCounts(
        n_ref=tally[AlignOp.MATCH] + tally[AlignOp.SUB] + tally[AlignOp.DEL],
        matches=tally[AlignOp.MATCH],
        subs=tally[AlignOp.SUB],
        inss=tally[AlignOp.INS],
        dels=tally[AlignOp.DEL],
    )


def wer(c: ErrorCounts) -> WerBreakdown:
    if c.n_ref == 0:
        raise UndefinedWERError("WER is undefined: reference has no tokens")
    n = c.n_ref
    return WerBreakdown(wer=c.errors / n, sub_rate=c.subs / n, ins_rate=c.inss / n, del_rate=c.dels / n)


def aggregate_counts(per_file: Iterable[ErrorCounts]) -> ErrorCounts:
    """Micro-aggregate: corpus WER comes from summed counts, not mean per-file WER."""
    total = ErrorCounts()
    for c in per_file:
        total = total + c
    return total
