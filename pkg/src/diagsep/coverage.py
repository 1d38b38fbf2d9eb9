"""Orbit density statistics: how much of the admissible language a finite
orbit visits, for a single map and for the product map on pairs.

A coverage scan walks an orbit for N steps, reads the length-L window at
every step, and reports which admissible words (or word pairs) were seen and
when.  Scans may be partitioned into contiguous segments whose visit maps are
merged; the merged result does not depend on the partition.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import kernels
from .errors import DomainMismatchError, ParameterError, ResolutionError
from .symbolic import (
    CHACON,
    FULLSHIFT2,
    ODOMETER2,
    CantorPoint,
    SubshiftSystem,
    chacon_prefix,
    language,
    point_at,
    odometer_point,
    random_word,
)


@dataclass(frozen=True)
class CoverageReport:
    """Summary of one coverage scan.

    ``steps_used`` is the step at which the last new item appeared when the
    scan reached full coverage, and the whole step budget otherwise; both
    readings are independent of how the scan was partitioned.
    """

    depth: int
    total: int
    visited: int
    fraction: Fraction
    steps_used: int
    plateau: tuple[tuple[int, Fraction], ...]

    def __post_init__(self) -> None:
        if self.visited > self.total:
            raise ParameterError("visited exceeds total")
        if self.fraction != Fraction(self.visited, self.total):
            raise ParameterError("fraction must equal visited/total")
        last = Fraction(0)
        for _, frac in self.plateau:
            if frac < last:
                raise ParameterError("plateau fractions must be nondecreasing")
            last = frac

    @property
    def complete(self) -> bool:
        return self.visited == self.total


def _codes_of(words: list[str]) -> np.ndarray:
    return np.array([int(w, 2) for w in words], dtype=np.int64)


def _report_from_firsts(firsts: np.ndarray, admissible: np.ndarray, depth: int, steps: int) -> CoverageReport:
    total = len(admissible)
    seen = firsts[admissible]
    seen = seen[seen >= 0]
    seen.sort()
    visited = len(seen)
    plateau = tuple(
        (int(step), Fraction(i + 1, total)) for i, step in enumerate(seen)
    )
    steps_used = int(seen[-1]) if visited == total else steps
    return CoverageReport(
        depth=depth,
        total=total,
        visited=visited,
        fraction=Fraction(visited, total),
        steps_used=steps_used,
        plateau=plateau,
    )


def _segment_bounds(steps: int, workers: int) -> list[tuple[int, int]]:
    """Split observations 0..steps into contiguous inclusive ranges."""
    workers = max(1, min(workers, steps + 1))
    cuts = np.linspace(0, steps + 1, workers + 1).astype(np.int64)
    return [(int(cuts[i]), int(cuts[i + 1]) - 1) for i in range(workers) if cuts[i] <= cuts[i + 1] - 1]


def _merge_firsts(dest: np.ndarray, src: np.ndarray, offset: int) -> None:
    has = src >= 0
    shifted = src + offset
    take = has & ((dest < 0) | (shifted < dest))
    dest[take] = shifted[take]


def orbit_coverage(
    start: CantorPoint,
    steps: int,
    word_len: int,
    direction: str = "fwd",
    workers: int = 1,
) -> CoverageReport:
    """Fraction of admissible length-L words visited along an orbit.

    The orbit is followed forward (repeated map applications) or backward
    (repeated inverse applications), reading the window at every step
    including step 0.
    """
    if steps < 1:
        raise ParameterError("steps must be >= 1")
    if direction not in ("fwd", "bwd"):
        raise ParameterError(f"direction must be 'fwd' or 'bwd', got {direction!r}")
    system = start.system
    words = sorted(language(system, word_len))
    total = len(words)
    admissible = _codes_of(words)
    forward = direction == "fwd"

    if system.kind == ODOMETER2:
        if start.resolution < word_len:
            raise ResolutionError("odometer prefix shorter than the scan word length")
        state = int(start.code[:word_len][::-1], 2)
        first_seen = np.full(1 << word_len, -1, dtype=np.int64)
        for lo, hi in _segment_bounds(steps, workers):
            seg_state = (state + (lo if forward else -lo)) % (1 << word_len)
            part, _ = kernels.counter_first_visits(
                seg_state, hi - lo, word_len, forward, 0 if workers > 1 else total
            )
            _merge_firsts(first_seen, part, lo)
            if workers == 1:
                break
        return _report_from_firsts(first_seen, admissible, word_len, steps)

    if start.word is None:
        raise ResolutionError("coverage scans need a generator-backed start point")
    word = start.word
    base = start.index - word_len // 2
    if forward:
        lo_pos, hi_pos = base, base + steps + word_len
    else:
        lo_pos, hi_pos = base - steps, base + word_len
    if lo_pos < 0 or hi_pos > len(word):
        raise ResolutionError(
            f"orbit scan needs generator positions [{lo_pos},{hi_pos}), have [0,{len(word)})"
        )
    first_seen = np.full(1 << word_len, -1, dtype=np.int64)
    for lo, hi in _segment_bounds(steps, workers):
        seg_start = start.index + (lo if forward else -lo)
        part, _ = kernels.window_first_visits(
            word, seg_start, hi - lo, word_len, forward, 0 if workers > 1 else total
        )
        _merge_firsts(first_seen, part, lo)
        if workers == 1:
            break
    return _report_from_firsts(first_seen, admissible, word_len, steps)


def product_orbit_coverage(
    seed_a: CantorPoint,
    seed_b: CantorPoint,
    steps: int,
    word_len: int,
    workers: int = 1,
) -> CoverageReport:
    """Fraction of admissible word pairs visited by the simultaneous orbit
    (map applied to both coordinates at once)."""
    if steps < 1:
        raise ParameterError("steps must be >= 1")
    if seed_a.system != seed_b.system:
        raise DomainMismatchError("product seeds must share a system")
    system = seed_a.system
    words = sorted(language(system, word_len))
    total = len(words)

    if system.kind == ODOMETER2:
        if min(seed_a.resolution, seed_b.resolution) < word_len:
            raise ResolutionError("odometer prefixes shorter than the scan word length")
        sa = int(seed_a.code[:word_len][::-1], 2)
        sb = int(seed_b.code[:word_len][::-1], 2)
        first_seen = np.full(total * total, -1, dtype=np.int64)
        for lo, hi in _segment_bounds(steps, workers):
            size = 1 << word_len
            part, _ = kernels.counter_pair_first_visits(
                (sa + lo) % size, (sb + lo) % size, hi - lo, word_len,
                0 if workers > 1 else total * total,
            )
            _merge_firsts(first_seen, part, lo)
            if workers == 1:
                break
        pair_ids = np.arange(total * total, dtype=np.int64)
        return _report_from_firsts(first_seen, pair_ids, word_len, steps)

    if seed_a.word is None or seed_b.word is None:
        raise ResolutionError("product scans need generator-backed seeds")
    if seed_a.word is not seed_b.word:
        raise ParameterError("product seeds must index into the same generator word")
    word = seed_a.word
    dense = np.full(1 << word_len, -1, dtype=np.int32)
    dense[_codes_of(words)] = np.arange(total, dtype=np.int32)
    for s in (seed_a, seed_b):
        base = s.index - word_len // 2
        if base < 0 or base + steps + word_len > len(word):
            raise ResolutionError("generator word too short for the product scan")
    first_seen = np.full(total * total, -1, dtype=np.int64)
    for lo, hi in _segment_bounds(steps, workers):
        part, _ = kernels.window_pair_first_visits(
            word, seed_a.index + lo, seed_b.index + lo, hi - lo, word_len,
            dense, total, 0 if workers > 1 else total * total,
        )
        _merge_firsts(first_seen, part, lo)
        if workers == 1:
            break
    pair_ids = np.arange(total * total, dtype=np.int64)
    return _report_from_firsts(first_seen, pair_ids, word_len, steps)


# ---------------------------------------------------------------------------
# canonical scan starts and the product seed search


def orbit_start(
    system: SubshiftSystem,
    direction: str,
    steps: int,
    word_len: int,
    seed: int = 0,
    radius: Optional[int] = None,
) -> CantorPoint:
    """Deterministic generator-backed start point for orbit_coverage."""
    if system.kind == ODOMETER2:
        return odometer_point(system, "0" * max(word_len, 1))
    radius = radius or max(1, word_len // 2 + 1)
    pad = 2 * (word_len + radius) + 4
    need = steps + pad
    if system.kind == CHACON:
        word = chacon_prefix(need)
    elif system.kind == FULLSHIFT2:
        word = random_word(need, seed)
    else:
        raise ParameterError(f"no orbit generator for {system.kind}")
    if direction == "fwd":
        index = radius + word_len
    else:
        index = len(word) - radius - word_len - 1
    return point_at(system, index, radius, word=word)


def product_seed_pair(
    system: SubshiftSystem,
    lag: int,
    steps: int,
    word_len: int,
    seed: int = 0,
    word: Optional[np.ndarray] = None,
) -> tuple[CantorPoint, CantorPoint]:
    """Two seeds on one generator word, the second `lag` steps ahead."""
    if lag < 0:
        raise ParameterError("lag must be >= 0")
    if system.kind == ODOMETER2:
        a = odometer_point(system, "0" * max(word_len, 1))
        digits = format(lag % (1 << word_len), f"0{word_len}b")[::-1]
        return a, odometer_point(system, digits)
    radius = max(1, word_len // 2 + 1)
    pad = 2 * (word_len + radius) + 4
    if word is None:
        need = steps + lag + pad
        if system.kind == CHACON:
            word = chacon_prefix(need)
        elif system.kind == FULLSHIFT2:
            word = random_word(need, seed)
        else:
            raise ParameterError(f"no orbit generator for {system.kind}")
    index = radius + word_len
    return (
        point_at(system, index, radius, word=word),
        point_at(system, index + lag, radius, word=word),
    )


@dataclass(frozen=True)
class SeedSearchResult:
    lag: int
    probe: CoverageReport


def search_product_seed(
    system: SubshiftSystem,
    word_len: int,
    probe_steps: int = 50_000,
    max_lag: int = 256,
    seed: int = 0,
    workers: int = 1,
) -> SeedSearchResult:
    """Scan seed offsets (lags along one orbit) for the best product coverage.

    Every lag in 1..max_lag is probed for probe_steps steps; the winner has
    the highest fraction, then the fewest steps to reach it, then the
    smallest lag.  Deterministic for a fixed seed.
    """
    word = None
    if system.kind == CHACON:
        word = chacon_prefix(probe_steps + max_lag + 4 * word_len + 16)
    elif system.kind == FULLSHIFT2:
        word = random_word(probe_steps + max_lag + 4 * word_len + 16, seed)
    best: Optional[tuple] = None
    best_result: Optional[SeedSearchResult] = None
    for lag in range(1, max_lag + 1):
        pa, pb = product_seed_pair(system, lag, probe_steps, word_len, seed=seed, word=word)
        report = product_orbit_coverage(pa, pb, probe_steps, word_len, workers=workers)
        key = (-report.fraction, report.steps_used, lag)
        if best is None or key < best:
            best = key
            best_result = SeedSearchResult(lag=lag, probe=report)
    assert best_result is not None
    return best_result
