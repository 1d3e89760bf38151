"""
Words in a surface-group alphabet and conjugacy-class keys.

Letters are signed integers: ``k`` is the k-th generator and ``-k`` its
inverse. Alphabet order is 1, -1, 2, -2, ... and every lexicographic
tie-break in the package uses that order.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

import numpy as np

Word = Tuple[int, ...]

# Closures larger than this are truncated; lengths still guard dedup.
MAX_SWAP_CLOSURE = 4096


def letter_key(letter: int) -> int:
    return 2 * letter - 2 if letter > 0 else -2 * letter - 1


def word_key(word: Sequence[int]) -> Tuple[int, ...]:
    return tuple(letter_key(x) for x in word)


def invert(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def free_reduce(word: Iterable[int]) -> Word:
    out: List[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word: Iterable[int]) -> Word:
    """Free reduction followed by cancelling inverse pairs at the two ends."""
    w = free_reduce(word)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[i:j + 1]


def rotations(word: Word) -> List[Word]:
    return [word[i:] + word[:i] for i in range(len(word))] or [word]


def min_rotation(word: Word) -> Word:
    return min(rotations(word), key=word_key)


def is_cyclically_reduced(word: Sequence[int]) -> bool:
    if any(word[i] == -word[i + 1] for i in range(len(word) - 1)):
        return False
    return len(word) < 2 or word[0] != -word[-1]


def homology(word: Sequence[int], rank: int) -> Tuple[int, ...]:
    """Abelianisation: signed letter counts per generator."""
    counts = [0] * rank
    for x in word:
        counts[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(counts)


def homology_matrix(words: Sequence[Sequence[int]], rank: int) -> np.ndarray:
    out = np.zeros((len(words), rank), dtype=np.int64)
    for row, word in enumerate(words):
        out[row] = homology(word, rank)
    return out


def primitive_decompose(word: Sequence[int]) -> Tuple[Word, int]:
    """Smallest period root with ``word == root ** k``."""
    w = tuple(word)
    n = len(w)
    if n == 0:
        raise ValueError("Cannot decompose the empty word")
    for period in range(1, n + 1):
        if n % period == 0 and w == w[:period] * (n // period):
            return w[:period], n // period
    return w, 1


@lru_cache(maxsize=32)
def _relator_tables(relator: Word) -> Tuple[Dict[Word, Word], Dict[Word, Word]]:
    """Replacement tables for subwords of cyclic permutations of r and r^-1.

    Returns (long, half): ``long`` maps subwords strictly longer than half the
    relator to the inverse of their complement, ``half`` does the same for
    subwords of exactly half length (length preserving swaps).
    """
    long_table: Dict[Word, Word] = {}
    half_table: Dict[Word, Word] = {}
    size = len(relator)
    if size == 0:
        return long_table, half_table
    for base in (relator, invert(relator)):
        for rot in rotations(base):
            for k in range(size // 2, size + 1):
                u, v = rot[:k], rot[k:]
                replacement = invert(v)
                if 2 * k > size:
                    long_table.setdefault(u, replacement)
                elif 2 * k == size:
                    half_table.setdefault(u, replacement)
    return long_table, half_table


def _cyclic_subword(word: Word, start: int, k: int) -> Word:
    n = len(word)
    if start + k <= n:
        return word[start:start + k]
    return word[start:] + word[:start + k - n]


def _rest_after(word: Word, start: int, k: int) -> Word:
    """The cyclic complement of the subword at [start, start+k)."""
    n = len(word)
    begin = (start + k) % n
    return _cyclic_subword(word, begin, n - k) if k < n else ()


def dehn_reduce(word: Sequence[int], relator: Word) -> Word:
    """Cyclic Dehn reduction: replace any cyclic subword longer than half the
    relator by its shorter complement until no such subword remains."""
    w = cyclic_reduce(word)
    long_table, _ = _relator_tables(tuple(relator))
    if not long_table:
        return w
    size = len(relator)
    changed = True
    while changed and w:
        changed = False
        n = len(w)
        for start in range(n):
            for k in range(min(size, n), size // 2, -1):
                sub = _cyclic_subword(w, start, k)
                replacement = long_table.get(sub)
                if replacement is not None:
                    w = cyclic_reduce(replacement + _rest_after(w, start, k))
                    changed = True
                    break
            if changed:
                break
    return w


def contains_long_relator_piece(word: Sequence[int], relator: Word) -> bool:
    """True when a (linear) subword is more than half of a relator permutation."""
    long_table, _ = _relator_tables(tuple(relator))
    if not long_table:
        return False
    w = tuple(word)
    size = len(relator)
    for k in range(size // 2 + 1, min(size, len(w)) + 1):
        for start in range(len(w) - k + 1):
            if w[start:start + k] in long_table:
                return True
    return False


def swap_closure(word: Word, relator: Word) -> FrozenSet[Word]:
    """Dehn-reduced cyclic words reachable by half-relator swaps.

    A swap that lets the word shorten restarts the search from the shorter
    word, so every member of the result has the same (minimal) length.
    """
    w = dehn_reduce(word, relator)
    _, half_table = _relator_tables(tuple(relator))
    if not half_table or not w:
        return frozenset([min_rotation(w)])
    size = len(relator)
    half = size // 2
    while True:
        seen = {min_rotation(w)}
        frontier = [w]
        shorter = None
        while frontier and shorter is None and len(seen) < MAX_SWAP_CLOSURE:
            current = frontier.pop()
            n = len(current)
            if n < half:
                break
            for start in range(n):
                sub = _cyclic_subword(current, start, half)
                replacement = half_table.get(sub)
                if replacement is None:
                    continue
                candidate = dehn_reduce(replacement + _rest_after(current, start, half), relator)
                if len(candidate) < len(w):
                    shorter = candidate
                    break
                key = min_rotation(candidate)
                if key not in seen:
                    seen.add(key)
                    frontier.append(candidate)
        if shorter is None:
            return frozenset(seen)
        w = shorter


def canonical_cyclic(word: Sequence[int], relator: Word) -> Word:
    """Conjugacy-class key: lexicographically least rotation over the swap closure."""
    return min(swap_closure(tuple(word), tuple(relator)), key=word_key)


def canonical_with_power(word: Sequence[int], relator: Word) -> Tuple[Word, Word, int]:
    """(canonical word, primitive root word, power) for a nonempty class.

    The power is the largest period exponent found among the closure
    members, so a proper power is recognised even when its lexicographic
    minimum is not itself periodic.
    """
    closure = swap_closure(tuple(word), tuple(relator))
    canon = min(closure, key=word_key)
    best_root, best_power = primitive_decompose(canon)
    for member in sorted(closure, key=word_key):
        root, power = primitive_decompose(member)
        if power > best_power:
            best_root, best_power = root, power
    return canon, best_root, best_power
