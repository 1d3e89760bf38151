"""
Closed-geodesic enumeration.

Oriented conjugacy classes come either from a pruned walk over the orbit of
i (models with a known Dirichlet domain) or from word shells, one word
length at a time. Both canonicalise cyclic words and recompute each length
from the canonical word.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from src.config.settings import get_settings
from src.core.exceptions import EnumerationBudgetExceeded, NonHyperbolic
from src.core.fuchsian import length_from_trace
from src.core.surfaces import SurfacePresentation
from src.core.words import (
    Word,
    canonical_with_power,
    contains_long_relator_piece,
    homology,
    letter_key,
    word_key,
)
from src.utils.logger import get_logger

logger = get_logger(__name__)

MAX_SHELLS = 64
LENGTH_TOLERANCE = 1e-9


@dataclass(frozen=True)
class GeodesicRecord:
    """One oriented closed geodesic."""

    canon: Word
    length: float
    primitive_length: float
    power: int
    homology: Tuple[int, ...]

    def __post_init__(self):
        if self.power < 1:
            raise ValueError(f"Power must be >= 1: {self.power}")
        if abs(self.length - self.power * self.primitive_length) > LENGTH_TOLERANCE * max(1.0, self.length):
            raise ValueError("length must equal power * primitive_length")

    @property
    def is_primitive(self) -> bool:
        return self.power == 1

    def key(self, decimals: int = 6) -> Tuple[Word, float]:
        return self.canon, round(self.length, decimals)


@dataclass(frozen=True)
class GeodesicTable:
    """Length spectrum up to ``cutoff`` with provenance.

    Records are sorted by (length, canonical word). Every class with length
    at most ``complete_below`` is present exactly once.
    """

    model_digest: bytes
    cutoff: float
    complete_below: float
    records: Tuple[GeodesicRecord, ...]
    rank: int
    kind: str = field(default="unknown", compare=False)

    def __post_init__(self):
        if len(self.model_digest) != 32:
            raise ValueError("model_digest must be 32 bytes")
        ordered = tuple(sorted(self.records, key=lambda r: (r.length, word_key(r.canon))))
        object.__setattr__(self, "records", ordered)
        seen = set()
        for rec in ordered:
            if rec.length > self.cutoff + LENGTH_TOLERANCE:
                raise ValueError(f"Record length {rec.length} beyond cutoff {self.cutoff}")
            if len(rec.homology) != self.rank:
                raise ValueError("Homology vector rank mismatch")
            key = rec.key()
            if key in seen:
                raise ValueError(f"Duplicate canonical key {key}")
            seen.add(key)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[GeodesicRecord]:
        return iter(self.records)

    @cached_property
    def lengths(self) -> np.ndarray:
        return np.array([r.length for r in self.records], dtype=float)

    @cached_property
    def primitive_lengths(self) -> np.ndarray:
        return np.array([r.primitive_length for r in self.records], dtype=float)

    @cached_property
    def powers(self) -> np.ndarray:
        return np.array([r.power for r in self.records], dtype=np.int64)

    @cached_property
    def homology_matrix(self) -> np.ndarray:
        if not self.records:
            return np.zeros((0, self.rank), dtype=np.int64)
        return np.array([r.homology for r in self.records], dtype=np.int64)

    @property
    def systole(self) -> Optional[float]:
        return self.records[0].length if self.records else None

    def window(self, center: float, halfwidth: float) -> np.ndarray:
        """Indices of records with |length - center| <= halfwidth."""
        lo = np.searchsorted(self.lengths, center - halfwidth, side="left")
        hi = np.searchsorted(self.lengths, center + halfwidth, side="right")
        return np.arange(lo, hi)

    def primitive(self) -> GeodesicTable:
        return GeodesicTable(
            self.model_digest, self.cutoff, self.complete_below,
            tuple(r for r in self.records if r.is_primitive), self.rank, self.kind,
        )

    def restricted(self, cutoff: float) -> GeodesicTable:
        """Sub-table of lengths <= cutoff (completeness radius shrinks accordingly)."""
        cutoff = min(cutoff, self.cutoff)
        return GeodesicTable(
            self.model_digest, cutoff, min(cutoff, self.complete_below),
            tuple(r for r in self.records if r.length <= cutoff), self.rank, self.kind,
        )

    def homology_total(self) -> np.ndarray:
        return self.homology_matrix.sum(axis=0)

    def is_inversion_closed(self, decimals: int = 6) -> bool:
        """Every record has a partner with negated homology and equal length."""
        pool: Dict[Tuple[Tuple[int, ...], float], int] = {}
        for r in self.records:
            k = (r.homology, round(r.length, decimals))
            pool[k] = pool.get(k, 0) + 1
        return all(
            pool.get((tuple(-h for h in hom), length), 0) == count
            for (hom, length), count in pool.items()
        )


# ------------------------------------------------------------ enumeration

def _alphabet(rank: int) -> List[int]:
    letters = []
    for k in range(1, rank + 1):
        letters.extend((k, -k))
    return letters


def _canon_length(model: SurfacePresentation, canon: Word) -> float:
    """Length recomputed from the canonical word, so both walks agree to the bit."""
    m = model.evaluate(canon).matrix
    return length_from_trace(abs(m[0, 0] + m[1, 1]))


def _make_record(model: SurfacePresentation, canon: Word, power: int, cutoff: float) -> Optional[GeodesicRecord]:
    try:
        length = _canon_length(model, canon)
    except NonHyperbolic:
        return None
    if length > cutoff:
        return None
    return GeodesicRecord(
        canon=canon,
        length=length,
        primitive_length=length / power,
        power=power,
        homology=homology(canon, model.rank),
    )


def ball_radius(cutoff: float, domain_radius: float) -> float:
    """Basepoint displacement reached by a class of length <= cutoff whose
    axis crosses a domain of the given circumradius.

    A point at distance r from the axis of g moves by d with
    sinh(d/2) = cosh(r) sinh(length/2).
    """
    return 2.0 * math.asinh(math.cosh(domain_radius) * math.sinh(cutoff / 2.0))


def certified_length(radius: float, domain_radius: float) -> float:
    """Inverse of :func:`ball_radius`."""
    return 2.0 * math.asinh(math.sinh(radius / 2.0) / math.cosh(domain_radius))


def orbit_estimate(radius: float, volume: float) -> float:
    """Expected number of orbit points of i in a ball of the given radius."""
    return 2.0 * math.pi * (math.cosh(radius) - 1.0) / volume


# Orbit points of i are binned on four unit grids offset by half a cell. Two
# copies of one point agree on at least one grid; distinct points of a
# surface group orbit lie more than 4 apart and never share a bin.
_GRID_SHIFTS = ((0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.5, 0.5))
_CODE_BITS = 27
_CODE_OFFSET = 1 << (_CODE_BITS - 1)


def _orbit_points(mats: np.ndarray) -> np.ndarray:
    """Spatial hyperboloid coordinates of g.i, read off g g^T."""
    a, b, c, d = mats[:, 0, 0], mats[:, 0, 1], mats[:, 1, 0], mats[:, 1, 1]
    return np.column_stack((0.5 * (a * a + b * b - c * c - d * d), a * c + b * d))


def _orbit_codes(points: np.ndarray) -> np.ndarray:
    codes = np.empty((len(points), len(_GRID_SHIFTS)), dtype=np.int64)
    for k, (sx, sy) in enumerate(_GRID_SHIFTS):
        kx = np.floor(points[:, 0] + sx).astype(np.int64) + _CODE_OFFSET
        ky = np.floor(points[:, 1] + sy).astype(np.int64) + _CODE_OFFSET
        codes[:, k] = (k << (2 * _CODE_BITS)) | (kx << _CODE_BITS) | ky
    return codes


@dataclass
class _OrbitLevel:
    mats: np.ndarray
    parent: np.ndarray
    step: np.ndarray
    first: np.ndarray
    codes: np.ndarray


def _orbit_ball(model: SurfacePresentation, radius: float, max_words: int,
                suggested: float) -> List[_OrbitLevel]:
    """Level-by-level walk over side pairings, pruned to the ball of ``radius``
    about i.

    The tiles met by the segment from i to g.i all have centres at most
    d(i, g.i) from i, so the pruned walk still reaches every orbit point in
    the ball. A child at level k+1 can only repeat an element of level k-1
    or k.
    """
    letters = np.array(_alphabet(model.rank), dtype=np.int64)
    gens = np.stack([model.letter(int(x)).matrix for x in letters])
    bound = math.cosh(radius) * (1.0 + 1e-9)

    root = np.eye(2)[None]
    levels = [_OrbitLevel(root, np.array([-1]), np.array([0]), np.array([0]),
                          _orbit_codes(_orbit_points(root)).ravel())]
    previous_codes = np.empty(0, dtype=np.int64)
    total = 1
    while len(levels[-1].mats):
        cur = levels[-1]
        children = np.einsum("nij,kjl->nkil", cur.mats, gens).reshape(-1, 2, 2)
        parent = np.repeat(np.arange(len(cur.mats)), len(letters))
        step = np.tile(letters, len(cur.mats))

        keep = 0.5 * np.einsum("nij,nij->n", children, children) <= bound
        children, parent, step = children[keep], parent[keep], step[keep]
        codes = _orbit_codes(_orbit_points(children))
        known = np.concatenate((previous_codes, cur.codes))
        fresh = ~np.isin(codes, known).any(axis=1)
        children, parent, step, codes = children[fresh], parent[fresh], step[fresh], codes[fresh]
        for k in range(len(_GRID_SHIFTS)):
            _, idx = np.unique(codes[:, k], return_index=True)
            idx.sort()
            children, parent, step, codes = children[idx], parent[idx], step[idx], codes[idx]

        first = step.copy() if len(levels) == 1 else cur.first[parent]
        total += len(children)
        if total > max_words:
            raise EnumerationBudgetExceeded(
                f"Word budget {max_words} exhausted at word length {len(levels)}; "
                f"try cutoff_L <= {suggested:.3f}",
                suggested_cutoff=suggested,
            )
        previous_codes = cur.codes
        levels.append(_OrbitLevel(children, parent, step, first, codes.ravel()))
        logger.debug(f"Orbit level {len(levels) - 1}: {len(children)} new elements")
    return levels


def _orbit_word(levels: List[_OrbitLevel], level: int, index: int) -> Word:
    word = []
    while level > 0:
        word.append(int(levels[level].step[index]))
        index = int(levels[level].parent[index])
        level -= 1
    return tuple(reversed(word))


def _canonicalise_orbit(levels: List[_OrbitLevel], picks: List[Tuple[int, int]],
                        relator: Word) -> List[Tuple[Word, int]]:
    out = []
    for level, index in picks:
        canon, _, power = canonical_with_power(_orbit_word(levels, level, index), relator)
        out.append((canon, power))
    return out


def _enumerate_orbit(model: SurfacePresentation, cutoff: float, threads: int,
                     max_words: int, decimals: int) -> Tuple[Dict, float]:
    """Orbit-ball walk for models with a known Dirichlet domain about i."""
    domain = model.domain_radius
    radius = ball_radius(cutoff, domain) + 1e-9
    if model.volume:
        budget_radius = math.acosh(1.0 + max_words * model.volume / (2.0 * math.pi))
        suggested = min(cutoff, certified_length(budget_radius, domain))
        expected = orbit_estimate(radius, model.volume)
        if expected > max_words or math.cosh(radius) >= _CODE_OFFSET // 2:
            raise EnumerationBudgetExceeded(
                f"Ball of radius {radius:.3f} holds about {expected:.3g} orbit points, "
                f"over the word budget {max_words}; try cutoff_L <= {suggested:.3f}",
                suggested_cutoff=suggested,
            )
    else:
        suggested = 0.0
    levels = _orbit_ball(model, radius, max_words, suggested)

    # hyperbolic elements of length <= cutoff whose axis passes within the
    # domain radius of i; every class has one
    trace_cap = 2.0 * math.cosh(cutoff / 2.0) * (1.0 + 1e-12)
    reach = math.cosh(domain) * (1.0 + 1e-9)
    groups: Dict[int, List[Tuple[int, int]]] = {}
    for level, lv in enumerate(levels[1:], start=1):
        m = lv.mats
        t = np.abs(m[:, 0, 0] + m[:, 1, 1])
        x0 = 0.5 * np.einsum("nij,nij->n", m, m)
        hyperbolic = (t > 2.0) & (t <= trace_cap)
        half_length = np.sqrt(np.maximum(0.25 * t * t - 1.0, 0.0))
        near = np.sqrt(0.5 * (x0 - 1.0)) <= reach * half_length
        for index in np.flatnonzero(hyperbolic & near):
            groups.setdefault(int(lv.first[index]), []).append((level, int(index)))

    results = Parallel(n_jobs=threads, prefer="threads")(
        delayed(_canonicalise_orbit)(levels, picks, model.relator) for picks in groups.values()
    )
    found: Dict[Tuple[Word, float], GeodesicRecord] = {}
    seen = set()
    for batch in results:
        for canon, power in batch:
            if canon in seen:
                continue
            seen.add(canon)
            record = _make_record(model, canon, power, cutoff)
            if record is not None:
                found.setdefault(record.key(decimals), record)
    walked = sum(len(lv.mats) for lv in levels)
    logger.debug(f"Orbit ball radius {radius:.3f}: {walked} elements in {len(levels) - 1} levels")
    return found, min(cutoff, certified_length(radius, domain))


# word-shell walk: the reference strategy, and the only one for models
# without a known domain

def _is_least_rotation(word: Word) -> bool:
    key = word_key(word)
    n = len(word)
    return all(key <= key[i:] + key[:i] for i in range(1, n))


def _shell_words(model: SurfacePresentation, first: int, depth: int, letters: Sequence[int],
                 cutoff: float):
    """Depth-first traversal of the admissible words of exact length ``depth``
    starting with ``first``. Returns the shell minimum, the words with
    trace length <= cutoff, and the number of words visited."""
    mats = {x: model.letter(x).matrix for x in letters}
    floor = letter_key(first)
    shell_min = math.inf
    short: List[Word] = []
    visited = 0
    stack: List[Tuple[Word, np.ndarray]] = [((first,), mats[first])]
    while stack:
        word, m = stack.pop()
        visited += 1
        if len(word) == depth:
            if (depth > 1 and word[0] == -word[-1]) or not _is_least_rotation(word):
                continue
            t = abs(m[0, 0] + m[1, 1])
            if t <= 2.0:
                continue
            length = length_from_trace(t)
            shell_min = min(shell_min, length)
            if length <= cutoff:
                short.append(word)
            continue
        for x in reversed(letters):
            if x == -word[-1] or letter_key(x) < floor:
                continue
            child = word + (x,)
            if model.relator and contains_long_relator_piece(child[-len(model.relator):], model.relator):
                continue
            stack.append((child, m @ mats[x]))
    return shell_min, short, visited


def _enumerate_shells(model: SurfacePresentation, cutoff: float, threads: int,
                      max_words: int, decimals: int) -> Tuple[Dict, float]:
    """Shell-by-shell walk over cyclically reduced words.

    Stops once two consecutive shells have no length at or below the cutoff.
    If the shell cap is hit first, only lengths below the last two shell
    minima are certified.
    """
    letters = _alphabet(model.rank)
    found: Dict[Tuple[Word, float], GeodesicRecord] = {}
    shell_minima: List[float] = []
    words_seen = 0
    stopped = False
    for n in range(1, MAX_SHELLS + 1):
        results = Parallel(n_jobs=threads, prefer="threads")(
            delayed(_shell_words)(model, x, n, letters, cutoff) for x in letters
        )
        words_seen += sum(visited for _, _, visited in results)
        shell_min = min(m for m, _, _ in results)
        shell_minima.append(shell_min)
        for _, short, _ in results:
            for word in short:
                canon, _, power = canonical_with_power(word, model.relator)
                if len(canon) < len(word):
                    continue
                record = _make_record(model, canon, power, cutoff)
                if record is not None:
                    found.setdefault(record.key(decimals), record)
        logger.debug(f"Shell {n}: min length {shell_min:.6f}, {words_seen} words so far")

        if n >= 2 and shell_minima[-1] > cutoff and shell_minima[-2] > cutoff:
            stopped = True
            break
        if words_seen > max_words:
            achieved = min(shell_minima[-2:])
            raise EnumerationBudgetExceeded(
                f"Word budget {max_words} exhausted at word length {n}; "
                f"try cutoff_L <= {achieved:.3f}",
                suggested_cutoff=achieved,
            )
    if stopped:
        return found, float(cutoff)
    achieved = min(cutoff, min(shell_minima[-2:]))
    logger.warning(f"Shell cap {MAX_SHELLS} reached before the stop rule; certified below {achieved:.6f} only")
    return found, achieved


def enumerate_geodesics(
    model: SurfacePresentation,
    cutoff: float,
    strategy: str = "bfs",
    threads: Optional[int] = None,
    max_words: Optional[int] = None,
) -> GeodesicTable:
    """Enumerate oriented closed geodesics of ``model`` with length <= cutoff.

    ``bfs`` walks the orbit of i inside the ball that every class of length
    <= cutoff must reach, when the model carries a Dirichlet domain radius,
    and falls back to word shells otherwise. ``dfs`` always uses word shells.
    """
    if not cutoff > 0:
        raise ValueError(f"cutoff must be positive, got {cutoff}")
    if strategy not in ("bfs", "dfs"):
        raise ValueError(f"Unknown enumeration strategy: {strategy}")
    settings = get_settings()
    threads = threads or settings.threads
    max_words = max_words or settings.max_words
    decimals = settings.length_key_decimals

    logger.info(f"Enumerating {model.kind} geodesics up to L={cutoff} ({strategy}, {threads} threads)")
    if strategy == "bfs" and model.domain_radius is not None:
        found, complete_below = _enumerate_orbit(model, cutoff, threads, max_words, decimals)
    else:
        found, complete_below = _enumerate_shells(model, cutoff, threads, max_words, decimals)

    table = GeodesicTable(
        model_digest=model.digest(),
        cutoff=float(cutoff),
        complete_below=float(complete_below),
        records=tuple(found.values()),
        rank=model.rank,
        kind=model.kind,
    )
    logger.info(f"Enumerated {len(table)} geodesics, systole {table.systole}, complete below {table.complete_below}")
    return table
