"""Exhaustive subset enumeration over bitmasks (the brute-force oracles)."""

from __future__ import annotations

import numpy as np


def subset_sums(values) -> np.ndarray:
    """Sum of ``values`` over every subset; index ``m`` is the subset with bitmask ``m``."""
    sums = np.zeros(1, dtype=np.int64)
    for v in values:
        sums = np.concatenate([sums, sums + int(v)])
    return sums


def lex_min_mask(masks: np.ndarray) -> int:
    """Among bitmasks, the one whose sorted bit positions form the smallest tuple.

    A proper prefix sorts first, so at each step a mask with no bits left
    above the shared prefix wins outright; otherwise keep the masks whose
    next bit is lowest.
    """
    masks = np.asarray(masks, dtype=np.int64)
    prefix = np.int64(0)
    while True:
        rest = masks & ~prefix
        if np.any(rest == 0):
            return int(prefix)
        low = rest & -rest
        nxt = low.min()
        masks = masks[low == nxt]
        prefix |= nxt


def mask_members(mask: int, ordered_ids) -> list:
    return [ordered_ids[i] for i in range(len(ordered_ids)) if mask >> i & 1]
