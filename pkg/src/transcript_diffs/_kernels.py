"""Dynamic-programming kernels for word alignment.

Both kernels fill the *suffix* edit-distance table: ``D[i, j]`` is the cheapest
way to align ``ref[i:]`` with ``hyp[j:]``.  Filling it backwards lets the
trace run forwards from ``(0, 0)`` so that the fixed move priority
MATCH > SUB > DEL > INS resolves ties at the earliest position of the
sequences.  Only two cost rows are kept; the move chosen at every cell is
stored in a separate ``uint8`` table.

The numba path is used unless ``TRANSCRIPT_DIFFS_NUMBA=0`` is set in the
environment (or numba is not importable).  The pure-numpy path vectorises
each row, resolving the insertion recurrence with a reversed running minimum.
"""
from __future__ import annotations

import os

import numpy as np

MATCH, SUB, DEL, INS = 0, 1, 2, 3

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False


def numba_enabled() -> bool:
    flag = os.environ.get("TRANSCRIPT_DIFFS_NUMBA", "1").strip().lower()
    return HAVE_NUMBA and flag not in ("0", "false", "no", "off")


def suffix_dp_numpy(a, b, sub_cost, ins_cost, del_cost):
    """Return ``(cost, moves)`` for int-encoded sequences ``a`` and ``b``."""
    n, m = len(a), len(b)
    moves = np.empty((n + 1, m + 1), dtype=np.uint8)
    ks = np.arange(m + 1, dtype=np.int64)
    # bottom row: only insertions remain
    nxt = (m - ks) * ins_cost
    moves[n, :m] = INS
    moves[n, m] = MATCH
    for i in range(n - 1, -1, -1):
        eq = b == a[i]
        diag = nxt[1:] + np.where(eq, 0, sub_cost)
        dl = nxt + del_cost
        t = dl.copy()
        t[:m] = np.minimum(diag, dl[:m])
        u = t + ks * ins_cost
        cur = np.minimum.accumulate(u[::-1])[::-1] - ks * ins_cost
        row = np.full(m + 1, INS, dtype=np.uint8)
        row[dl == cur] = DEL
        take_diag = diag == cur[:m]
        row[:m][take_diag] = np.where(eq[take_diag], MATCH, SUB)
        moves[i] = row
        nxt = cur
    return int(nxt[0]), moves


def trace_numpy(moves):
    n, m = moves.shape[0] - 1, moves.shape[1] - 1
    ops = []
    i = j = 0
    while i < n or j < m:
        mv = int(moves[i, j])
        ops.append(mv)
        if mv == MATCH or mv == SUB:
            i += 1
            j += 1
        elif mv == DEL:
            i += 1
        else:
            j += 1
    return np.asarray(ops, dtype=np.uint8)


if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def suffix_dp_numba(a, b, sub_cost, ins_cost, del_cost):
        n, m = a.shape[0], b.shape[0]
        moves = np.empty((n + 1, m + 1), dtype=np.uint8)
        nxt = np.empty(m + 1, dtype=np.int64)
        cur = np.empty(m + 1, dtype=np.int64)
        for j in range(m + 1):
            nxt[j] = (m - j) * ins_cost
            moves[n, j] = INS
        moves[n, m] = MATCH
        for i in range(n - 1, -1, -1):
            cur[m] = nxt[m] + del_cost
            moves[i, m] = DEL
            ai = a[i]
            for j in range(m - 1, -1, -1):
                if ai == b[j]:
                    diag = nxt[j + 1]
                    dmove = MATCH
                else:
                    diag = nxt[j + 1] + sub_cost
                    dmove = SUB
                dl = nxt[j] + del_cost
                ins = cur[j + 1] + ins_cost
                best = diag
                mv = dmove
                if dl < best:
                    best = dl
                    mv = DEL
                if ins < best:
                    best = ins
                    mv = INS
                cur[j] = best
                moves[i, j] = mv
            nxt, cur = cur, nxt
        return nxt[0], moves

    @njit(cache=True, nogil=True)
    def trace_numba(moves):
        n, m = moves.shape[0] - 1, moves.shape[1] - 1
        ops = np.empty(n + m, dtype=np.uint8)
        k = 0
        i = 0
        j = 0
        while i < n or j < m:
            mv = moves[i, j]
            ops[k] = mv
            k += 1
            if mv == MATCH or mv == SUB:
                i += 1
                j += 1
            elif mv == DEL:
                i += 1
            else:
                j += 1
        return ops[:k]

else:  # pragma: no cover
    suffix_dp_numba = suffix_dp_numpy
    trace_numba = trace_numpy


def edit_ops(a, b, sub_cost=1, ins_cost=1, del_cost=1, use_numba=None):
    """Align two int sequences; returns ``(cost, ops)`` with ops coded MATCH/SUB/DEL/INS."""
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    if use_numba is None:
        use_numba = numba_enabled()
    if use_numba:
        cost, moves = suffix_dp_numba(a, b, np.int64(sub_cost), np.int64(ins_cost), np.int64(del_cost))
        return int(cost), trace_numba(moves)
    cost, moves = suffix_dp_numpy(a, b, sub_cost, ins_cost, del_cost)
    return cost, trace_numpy(moves)
