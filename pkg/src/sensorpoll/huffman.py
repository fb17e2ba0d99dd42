"""Binary Huffman codes over finite pattern distributions."""

from __future__ import annotations

import heapq
import itertools
import math
from typing import Sequence


def code_lengths(probs: Sequence[float]) -> dict[int, int]:
    """Huffman codeword length per symbol index.

    Zero-probability symbols get no codeword. A lone surviving symbol is
    given length 1 so the receiver still gets a (constant) reply.
    """
    live = [(p, k) for k, p in enumerate(probs) if p > 0]
    if not live:
        raise ValueError("distribution has no positive mass")
    if len(live) == 1:
        return {live[0][1]: 1}

    tie = itertools.count()
    heap = [(p, next(tie), [k]) for p, k in live]
    heapq.heapify(heap)
    lengths = {k: 0 for _, k in live}
    while len(heap) > 1:
        p1, _, a = heapq.heappop(heap)
        p2, _, b = heapq.heappop(heap)
        for k in a + b:
            lengths[k] += 1
        heapq.heappush(heap, (p1 + p2, next(tie), a + b))
    return lengths


def canonical_code(lengths: dict[int, int]) -> dict[int, str]:
    """Canonical prefix code (as bit strings) for the given lengths."""
    code: dict[int, str] = {}
    value = 0
    prev = 0
    for length, sym in sorted((l, s) for s, l in lengths.items()):
        value <<= length - prev
        code[sym] = format(value, f"0{length}b")
        value += 1
        prev = length
    return code


def huffman_code(probs: Sequence[float]) -> dict[int, str]:
    return canonical_code(code_lengths(probs))


def expected_length(probs: Sequence[float]) -> float:
    """Average Huffman codeword length under ``probs``."""
    lengths = code_lengths(probs)
    return math.fsum(probs[k] * l for k, l in lengths.items())


def decode_stream(code: dict[int, str], bits: str) -> list[int]:
    """Split a concatenation of codewords back into symbols."""
    inverse = {w: s for s, w in code.items()}
    out, cur = [], ""
    for bit in bits:
        cur += bit
        if cur in inverse:
            out.append(inverse[cur])
            cur = ""
    if cur:
        raise ValueError(f"trailing bits {cur!r} do not form a codeword")
    return out
