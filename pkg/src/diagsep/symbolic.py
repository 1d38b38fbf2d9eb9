"""Concrete Cantor-set homeomorphisms with exact finite-resolution arithmetic.

Three systems are provided:

* ``chacon``    -- the two-sided subshift generated by the substitution
                   0 -> 0010, 1 -> 1 (minimal, topologically weakly mixing),
                   moved by the left shift;
* ``odometer2`` -- the binary add-one-with-carry map on one-sided digit
                   strings, least-significant digit first (minimal, not
                   weakly mixing; the control system);
* ``fullshift2`` -- the full binary two-sided shift (the easy control).

Points are finite-resolution codes: a central symbol window for the
two-sided systems, a digit prefix for the odometer.  A point may carry a
generator word (a long admissible symbol sequence plus an index into it), in
which case shifting re-reads the window and loses no resolution.  All
distances are exact: the metric between two codes is 2^-j where j is the
least window offset at which they disagree.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from .errors import (
    DomainMismatchError,
    ParameterError,
    ResolutionError,
    check_budget,
)

CHACON = "chacon"
ODOMETER2 = "odometer2"
FULLSHIFT2 = "fullshift2"

CHACON_RULES = (("0", "0010"), ("1", "1"))

# Hard ceiling on word length for language enumeration; the per-call budget
# check below is the real guard, this only bounds the substitution iteration.
_MAX_WORD_LEN = 512


@dataclass(frozen=True)
class SubshiftSystem:
    """A named symbolic system together with its substitution rules (if any)."""

    kind: str
    rules: Optional[tuple[tuple[str, str], ...]] = None
    alphabet: int = 2

    def __post_init__(self) -> None:
        if self.kind not in (CHACON, ODOMETER2, FULLSHIFT2):
            raise ParameterError(f"unknown system kind {self.kind!r}")
        if self.rules is not None:
            for letter, image in self.rules:
                if len(image) == 0:
                    raise ParameterError(f"substitution image of {letter!r} is empty")

    @property
    def two_sided(self) -> bool:
        return self.kind in (CHACON, FULLSHIFT2)


def chacon() -> SubshiftSystem:
    return SubshiftSystem(CHACON, rules=CHACON_RULES)


def odometer2() -> SubshiftSystem:
    return SubshiftSystem(ODOMETER2)


def fullshift2() -> SubshiftSystem:
    return SubshiftSystem(FULLSHIFT2)


# ---------------------------------------------------------------------------
# substitution machinery


def _expand(word: np.ndarray) -> np.ndarray:
    """One substitution step 0 -> 0010, 1 -> 1 on a uint8 symbol array."""
    lens = np.where(word == 0, 4, 1).astype(np.int64)
    starts = np.concatenate([[0], np.cumsum(lens)[:-1]])
    out = np.empty(int(lens.sum()), dtype=np.uint8)
    z = starts[word == 0]
    out[z] = 0
    out[z + 1] = 0
    out[z + 2] = 1
    out[z + 3] = 0
    out[starts[word == 1]] = 1
    return out


@functools.lru_cache(maxsize=8)
def _chacon_prefix_cached(min_len: int) -> np.ndarray:
    word = np.array([0], dtype=np.uint8)
    while len(word) < min_len:
        word = _expand(word)
    word.setflags(write=False)
    return word


def chacon_prefix(min_len: int) -> np.ndarray:
    """Shortest substitution iterate of '0' whose length is >= min_len.

    Consecutive iterates are nested prefixes, so indexing into the result is
    indexing into the one-sided fixed point.
    """
    # round the cache key up to the iterate boundary so repeated calls share
    n = 1
    while n < min_len:
        n = 4 * n  # next iterate length is 3n+1 <= 4n; over-asking is harmless
    return _chacon_prefix_cached(n)


def random_word(length: int, seed: int = 0) -> np.ndarray:
    """Deterministic pseudo-random binary word used to seed full-shift orbits."""
    rng = np.random.default_rng(seed)
    word = rng.integers(0, 2, size=length, dtype=np.int64).astype(np.uint8)
    word.setflags(write=False)
    return word


def _window_set(word: np.ndarray, length: int) -> frozenset[str]:
    if len(word) < length:
        return frozenset()
    view = np.lib.stride_tricks.sliding_window_view(word, length)
    uniq = np.unique(view, axis=0)
    return frozenset("".join(str(int(b)) for b in row) for row in uniq)


@functools.lru_cache(maxsize=None)
def _language_cached(kind: str, length: int) -> frozenset[str]:
    if kind in (ODOMETER2, FULLSHIFT2):
        check_budget(2 ** length, f"language({kind},{length})")
        return frozenset(
            format(v, f"0{length}b") for v in range(2 ** length)
        )
    # chacon: factors of the substitution fixed point.  The factor sets of
    # successive iterates are nested; once two consecutive iterates give the
    # same factor set the sequence has stabilised (each new factor set is a
    # function of the previous one), so that set is the full language.
    if length > _MAX_WORD_LEN:
        raise ParameterError(f"word length {length} exceeds enumeration cap {_MAX_WORD_LEN}")
    word = np.array([0], dtype=np.uint8)
    while len(word) < max(2 * length, 64):
        word = _expand(word)
    prev = _window_set(word, length)
    while True:
        word = _expand(word)
        cur = _window_set(word, length)
        if cur == prev:
            check_budget(len(cur), f"language(chacon,{length})")
            return cur
        prev = cur


def language(system: SubshiftSystem, length: int) -> frozenset[str]:
    """Exact set of admissible words of the given length.

    For the full shift and the odometer this is every binary word; for the
    chacon system it is the factor set of the substitution fixed point.
    """
    if length < 1:
        raise ParameterError("word length must be >= 1")
    return _language_cached(system.kind, length)


def write_language_file(system: SubshiftSystem, length: int, path) -> int:
    """Persist a language enumeration: header `system,length,count`, one word per line."""
    words = sorted(language(system, length))
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{system.kind},{length},{len(words)}\n")
        for w in words:
            fh.write(w + "\n")
    return len(words)


def read_language_file(path) -> tuple[str, int, frozenset[str]]:
    """Read a file produced by write_language_file, verifying its header count."""
    with open(path, "r", encoding="ascii") as fh:
        kind, length_s, count_s = fh.readline().strip().split(",")
        words = frozenset(line.strip() for line in fh if line.strip())
    if len(words) != int(count_s):
        raise ParameterError(f"language file {path} header count mismatch")
    return kind, int(length_s), words


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class CantorPoint:
    """A finite-resolution point: a symbol window plus optional generator.

    ``code`` is a central window of radius k (length 2k+1) for two-sided
    systems and a digit prefix of length k for the odometer.  ``word`` and
    ``index``, when present, record a generator sequence and the position of
    the window's center in it; shifts then re-read the window exactly.
    Equality and hashing use only (system, code): two points with the same
    window denote the same finite-resolution cylinder.
    """

    system: SubshiftSystem
    code: str
    word: Optional[np.ndarray] = field(default=None, compare=False, repr=False)
    index: Optional[int] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not self.code or any(c not in "01" for c in self.code):
            raise ParameterError(f"bad code {self.code!r}")
        if self.system.two_sided and len(self.code) % 2 == 0:
            raise ParameterError("two-sided codes must have odd length")
        if (self.word is None) != (self.index is None):
            raise ParameterError("generator word and index must be given together")

    @property
    def resolution(self) -> int:
        """Usable window radius (two-sided) or prefix length (one-sided)."""
        if self.system.two_sided:
            return (len(self.code) - 1) // 2
        return len(self.code)

    def is_admissible(self) -> bool:
        return self.code in language(self.system, len(self.code))


def _read_window(word: np.ndarray, index: int, radius: int) -> str:
    lo, hi = index - radius, index + radius + 1
    if lo < 0 or hi > len(word):
        raise ResolutionError(
            f"window [{lo},{hi}) out of generator range [0,{len(word)})"
        )
    return "".join(str(int(b)) for b in word[lo:hi])


def point_from_code(system: SubshiftSystem, code: str) -> CantorPoint:
    """Build a windowed point with no generator; the code must be admissible."""
    p = CantorPoint(system, code)
    if not p.is_admissible():
        raise ParameterError(f"code {code!r} is not admissible for {system.kind}")
    return p


def point_at(
    system: SubshiftSystem,
    index: int,
    radius: int,
    word: Optional[np.ndarray] = None,
) -> CantorPoint:
    """Generator-backed point of a two-sided system at a word position.

    For the chacon system the generator defaults to a substitution prefix long
    enough to cover the window.
    """
    if not system.two_sided:
        raise ParameterError("point_at is for two-sided systems; use odometer_point")
    if radius < 1:
        raise ParameterError("radius must be >= 1")
    if word is None:
        if system.kind != CHACON:
            raise ParameterError(f"{system.kind} needs an explicit generator word")
        word = chacon_prefix(index + radius + 1)
    code = _read_window(word, index, radius)
    return CantorPoint(system, code, word=word, index=index)


def odometer_point(system: SubshiftSystem, digits: str) -> CantorPoint:
    """Odometer point from a least-significant-first digit prefix."""
    if system.kind != ODOMETER2:
        raise ParameterError("odometer_point needs the odometer2 system")
    return CantorPoint(system, digits)


def _odometer_add(code: str, delta: int) -> str:
    k = len(code)
    value = int(code[::-1], 2)  # code is LSB first
    value = (value + delta) % (1 << k)
    return format(value, f"0{k}b")[::-1]


def step(point: CantorPoint) -> CantorPoint:
    """Apply the system map once: shift left (subshifts) or add one (odometer).

    Generator-backed windows keep their resolution; windowed-only two-sided
    points lose one unit of radius per step and are rejected once the usable
    radius would drop below 1.
    """
    sys_ = point.system
    if sys_.kind == ODOMETER2:
        return CantorPoint(sys_, _odometer_add(point.code, +1))
    if point.word is not None:
        k = point.resolution
        idx = point.index + 1
        try:
            code = _read_window(point.word, idx, k)
        except ResolutionError:
            raise ResolutionError("generator word exhausted stepping forward") from None
        return CantorPoint(sys_, code, word=point.word, index=idx)
    if point.resolution < 2:
        raise ResolutionError("window exhausted and no generator available")
    # center moves right by one: the two leftmost symbols fall outside the
    # new symmetric window
    return CantorPoint(sys_, point.code[2:])


def step_inverse(point: CantorPoint) -> CantorPoint:
    """Inverse of step; exact on odometer prefixes and generator windows."""
    sys_ = point.system
    if sys_.kind == ODOMETER2:
        return CantorPoint(sys_, _odometer_add(point.code, -1))
    if point.word is not None:
        k = point.resolution
        idx = point.index - 1
        try:
            code = _read_window(point.word, idx, k)
        except ResolutionError:
            raise ResolutionError("generator word exhausted stepping backward") from None
        return CantorPoint(sys_, code, word=point.word, index=idx)
    if point.resolution < 2:
        raise ResolutionError("window exhausted and no generator available")
    return CantorPoint(sys_, point.code[:-2])


def shared_resolution(p: CantorPoint, q: CantorPoint) -> int:
    return min(p.resolution, q.resolution)


def metric_exponent(p: CantorPoint, q: CantorPoint) -> Optional[int]:
    """Least |offset| at which the codes disagree, or None if they agree
    throughout the shared window."""
    if p.system != q.system:
        raise DomainMismatchError(f"{p.system.kind} vs {q.system.kind}")
    if p.system.two_sided:
        k = shared_resolution(p, q)
        cp, cq = (len(p.code) - 1) // 2, (len(q.code) - 1) // 2
        for j in range(k + 1):
            if (
                p.code[cp + j] != q.code[cq + j]
                or p.code[cp - j] != q.code[cq - j]
            ):
                return j
        return None
    k = shared_resolution(p, q)
    for j in range(k):
        if p.code[j] != q.code[j]:
            return j
    return None


def cantor_metric(p: CantorPoint, q: CantorPoint) -> Fraction:
    """2-adic window metric: 2^-j at the least disagreeing offset, else 0."""
    j = metric_exponent(p, q)
    if j is None:
        return Fraction(0)
    return Fraction(1, 1 << j)


def words_by_core(system: SubshiftSystem, length: int, core_radius: int) -> dict[str, list[str]]:
    """Group admissible words of odd length 2k+1 by their central sub-window.

    Two words share a group exactly when their metric is <= 2^-(core_radius+1).
    """
    k = (length - 1) // 2
    if not (0 <= core_radius <= k):
        raise ParameterError("core radius out of range")
    groups: dict[str, list[str]] = {}
    for w in sorted(language(system, length)):
        core = w[k - core_radius : k + core_radius + 1]
        groups.setdefault(core, []).append(w)
    return groups


def iter_codes(system: SubshiftSystem, length: int) -> Iterator[str]:
    yield from sorted(language(system, length))
