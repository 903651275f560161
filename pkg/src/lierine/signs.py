"""Permutation-sign bookkeeping for alternating forms and wedge products."""

from __future__ import annotations

from typing import Optional, Sequence, Tuple


def sort_with_sign(indices: Sequence[int]) -> Optional[Tuple[Tuple[int, ...], int]]:
    """Sort an index tuple, returning (sorted, sign) or None on a repeat.

    The sign is the parity of the permutation that sorts the sequence,
    which is what evaluating an alternating form on permuted arguments
    picks up.
    """
    items = list(indices)
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
        if j > 0 and items[j - 1] == items[j]:
            return None
    return tuple(items), sign


def merge_sign(left: Sequence[int], right: Sequence[int]) -> Optional[Tuple[Tuple[int, ...], int]]:
    """Merge two sorted disjoint index tuples, with the shuffle sign.

    Returns (merged, sign) where sign is the parity of the permutation
    taking the concatenation left+right to sorted order, or None when the
    tuples overlap.  This is the sign of e_left wedge e_right relative to
    the sorted basis monomial.
    """
    if set(left) & set(right):
        return None
    merged = []
    sign = 1
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] < right[j]:
            merged.append(left[i])
            i += 1
        else:
            # right[j] jumps over the remaining entries of left
            if (len(left) - i) % 2:
                sign = -sign
            merged.append(right[j])
            j += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    return tuple(merged), sign
