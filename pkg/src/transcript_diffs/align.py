"""Word-level alignment of two token streams.

Alignment is a Levenshtein DP over normalized token strings.  When several
edit scripts share the minimum cost, the one chosen is fixed by the move
priority MATCH > SUB > DEL > INS applied from the start of the sequences,
so ``[she, will]`` vs ``[she'll]`` always comes out as SUB then DEL.

Before that positional priority applies, minimum-cost scripts with more
substitutions are preferred over ones that spend an insertion plus a deletion
instead.  That makes the (SUB, INS, DEL) counts a function of the unordered
pair under symmetric costs, so swapping reference and hypothesis swaps the
INS and DEL counts exactly.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .corpus import Token

__all__ = [
    "AlignEntry",
    "AlignOp",
    "Alignment",
    "AlignmentBudgetError",
    "CostModel",
    "DEFAULT_CELL_BUDGET",
    "align",
    "alignment_from_json",
    "alignment_to_json",
    "swap_roles",
]

DEFAULT_CELL_BUDGET = 4_000_000_000


class AlignOp(str, enum.Enum):
    MATCH = "MATCH"
    SUB = "SUB"
    INS = "INS"
    DEL = "DEL"


_CODE_TO_OP = {
    _kernels.MATCH: AlignOp.MATCH,
    _kernels.SUB: AlignOp.SUB,
    _kernels.DEL: AlignOp.DEL,
    _kernels.INS: AlignOp.INS,
}


class AlignmentBudgetError(RuntimeError):
    """The DP table would exceed the configured cell budget."""


@dataclass(frozen=True)
class CostModel:
    sub_cost: int = 1
    ins_cost: int = 1
    del_cost: int = 1

    def __post_init__(self):
        for name in ("sub_cost", "ins_cost", "del_cost"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")

    @classmethod
    def parse(cls, text: str) -> "CostModel":
        """Parse the ``S,I,D`` command-line form."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected S,I,D costs, got {text!r}")
        s, i, d = (int(p) for p in parts)
        return cls(sub_cost=s, ins_cost=i, del_cost=d)

    def swapped(self) -> "CostModel":
        return CostModel(self.sub_cost, ins_cost=self.del_cost, del_cost=self.ins_cost)

    @property
    def symmetric(self) -> bool:
        return self.ins_cost == self.del_cost


@dataclass(frozen=True)
class AlignEntry:
    op: AlignOp
    ref_index: int | None = None
    hyp_index: int | None = None


@dataclass(frozen=True)
class Alignment:
    ref: tuple[str, str]
    hyp: tuple[str, str]
    entries: tuple[AlignEntry, ...]
    cost: int
    costs: CostModel = field(default_factory=CostModel)

    def count(self, op: AlignOp) -> int:
        return sum(1 for e in self.entries if e.op is op)


def _norms(tokens: Sequence[Token | str]) -> list[str]:
    return [t.norm if isinstance(t, Token) else t for t in tokens]


def _encode(ref: list[str], hyp: list[str]) -> tuple[np.ndarray, np.ndarray]:
    vocab: dict[str, int] = {}
    a = np.fromiter((vocab.setdefault(w, len(vocab)) for w in ref), dtype=np.int64, count=len(ref))
    b = np.fromiter((vocab.setdefault(w, len(vocab)) for w in hyp), dtype=np.int64, count=len(hyp))
    return a, b


def align(
    ref_tokens: Sequence[Token | str],
    hyp_tokens: Sequence[Token | str],
    costs: CostModel | None = None,
    *,
    ref_key: tuple[str, str] = ("", ""),
    hyp_key: tuple[str, str] = ("", ""),
    cell_budget: int = DEFAULT_CELL_BUDGET,
    use_numba: bool | None = None,
) -> Alignment:
    """Minimum-cost alignment of two token lists (or plain norm strings)."""
    costs = costs or CostModel()
    ref, hyp = _norms(ref_tokens), _norms(hyp_tokens)
    if len(ref) * len(hyp) > cell_budget:
        raise AlignmentBudgetError(
            f"{len(ref)} x {len(hyp)} tokens exceeds the cell budget of {cell_budget}; "
            "split the transcripts and align the chunks separately"
        )
    a, b = _encode(ref, hyp)
    # scaled costs: same minimum, ties broken toward more substitutions
    scale = min(len(ref), len(hyp)) + 1
    _, ops = _kernels.edit_ops(
        a,
        b,
        costs.sub_cost * scale - 1,
        costs.ins_cost * scale,
        costs.del_cost * scale,
        use_numba=use_numba,
    )
    entries = []
    i = j = 0
    for code in ops.tolist():
        op = _CODE_TO_OP[code]
        if op is AlignOp.DEL:
            entries.append(AlignEntry(op, ref_index=i))
            i += 1
        elif op is AlignOp.INS:
            entries.append(AlignEntry(op, hyp_index=j))
            j += 1
        else:
            entries.append(AlignEntry(op, ref_index=i, hyp_index=j))
            i += 1
            j += 1
    return Alignment(tuple(ref_key), tuple(hyp_key), tuple(entries), _cost_of(entries, costs), costs)


def swap_roles(a: Alignment) -> Alignment:
    flip = {AlignOp.INS: AlignOp.DEL, AlignOp.DEL: AlignOp.INS}
    entries = tuple(
        AlignEntry(flip.get(e.op, e.op), ref_index=e.hyp_index, hyp_index=e.ref_index)
        for e in a.entries
    )
    costs = a.costs.swapped()
    return Alignment(a.hyp, a.ref, entries, _cost_of(entries, costs), costs)


def _cost_of(entries, costs: CostModel) -> int:
    per_op = {
        AlignOp.MATCH: 0,
        AlignOp.SUB: costs.sub_cost,
        AlignOp.INS: costs.ins_cost,
        AlignOp.DEL: costs.del_cost,
    }
    return sum(per_op[e.op] for e in entries)


def alignment_to_dict(a: Alignment) -> dict:
    entries = []
    for e in a.entries:
        d = {"op": e.op.value}
        if e.ref_index is not None:
            d["ref_index"] = e.ref_index
        if e.hyp_index is not None:
            d["hyp_index"] = e.hyp_index
        entries.append(d)
    return {
        "ref": list(a.ref),
        "hyp": list(a.hyp),
        "cost": a.cost,
        "costs": {"sub": a.costs.sub_cost, "ins": a.costs.ins_cost, "del": a.costs.del_cost},
        "entries": entries,
    }


def alignment_to_json(a: Alignment) -> str:
    return json.dumps(alignment_to_dict(a), ensure_ascii=False, indent=1) + "\n"


def alignment_from_json(text: str) -> Alignment:
    d = json.loads(text)
    c = d.get("costs", {})
    costs = CostModel(c.get("sub", 1), c.get("ins", 1), c.get("del", 1))
    entries = tuple(
        AlignEntry(AlignOp(e["op"]), e.get("ref_index"), e.get("hyp_index")) for e in d["entries"]
    )
    return Alignment(tuple(d["ref"]), tuple(d["hyp"]), entries, d["cost"], costs)
