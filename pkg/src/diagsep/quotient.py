"""The cylinder over a Cantor system and its mapping-torus quotient.

``CylPoint`` lives on C x [0,1]; the quotient space glues (p, 1) to
(f(p), 0), with ``TorusPoint`` holding the canonical representative (height
in [0,1)).  A ``NetGraph`` is a finite approximation of the quotient: nodes
are (admissible word, height level) cells, vertical edges step 1/m in
height, horizontal edges join words that agree on the central core, and the
top level is glued to level 0 along the one-step word extensions.  Shortest
paths on the net, in exact fixed-point units, serve as the computable
surrogate for a metric on the quotient.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import kernels
from .errors import DomainMismatchError, ParameterError, ResolutionError, check_budget
from .symbolic import (
    ODOMETER2,
    CantorPoint,
    SubshiftSystem,
    cantor_metric,
    language,
    step,
)


@dataclass(frozen=True)
class CylPoint:
    """A point (p, s) of the cylinder, heights as exact rationals in [0,1]."""

    base: CantorPoint
    height: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "height", Fraction(self.height))
        if not 0 <= self.height <= 1:
            raise ParameterError(f"cylinder height {self.height} outside [0,1]")


@dataclass(frozen=True)
class TorusPoint:
    """Canonical representative of a quotient point: height in [0,1)."""

    base: CantorPoint
    height: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "height", Fraction(self.height))
        if not 0 <= self.height < 1:
            raise ParameterError(f"canonical height {self.height} outside [0,1)")


@dataclass(frozen=True)
class ProductPrePoint:
    """A pair of cylinder points ((p,s),(q,t)), both over the same system."""

    first: CylPoint
    second: CylPoint

    def __post_init__(self) -> None:
        if self.first.base.system != self.second.base.system:
            raise DomainMismatchError("product components must share a system")


def canonicalize(x: CylPoint) -> TorusPoint:
    """Quotient representative: identity below height 1, (f(p), 0) at height 1."""
    if x.height < 1:
        return TorusPoint(x.base, x.height)
    return TorusPoint(step(x.base), Fraction(0))


def rho(a: CylPoint, b: CylPoint) -> Fraction:
    """Pre-quotient metric: window metric on bases plus height gap."""
    if a.base.system != b.base.system:
        raise DomainMismatchError("rho needs points of one system")
    return cantor_metric(a.base, b.base) + abs(a.height - b.height)


def sigma(z: ProductPrePoint) -> tuple[TorusPoint, TorusPoint]:
    """Componentwise quotient map on a product pre-point."""
    return canonicalize(z.first), canonicalize(z.second)


# ---------------------------------------------------------------------------
# finite nets


def _word_metric_exp(w1: str, w2: str, two_sided: bool) -> int:
    """Least disagreeing offset between equal-length admissible words, -1 if equal."""
    if w1 == w2:
        return -1
    if two_sided:
        k = (len(w1) - 1) // 2
        for j in range(k + 1):
            if w1[k + j] != w2[k + j] or w1[k - j] != w2[k - j]:
                return j
        raise AssertionError("distinct windows must disagree somewhere")
    for j in range(len(w1)):
        if w1[j] != w2[j]:
            return j
    raise AssertionError("distinct prefixes must disagree somewhere")


class NetGraph:
    """Identification-merged net of the mapping torus at depth k, m levels.

    Node ids are word_index * levels + level.  All edge weights are integers
    in units of 1/(levels * 2**depth); ``scale`` converts back to rationals.
    """

    def __init__(self, system: SubshiftSystem, depth: int, levels: int) -> None:
        if depth < 1:
            raise ParameterError("net depth must be >= 1")
        if levels < 2:
            raise ParameterError("net needs at least 2 height levels")
        word_len = 2 * depth + 1 if system.two_sided else depth
        words = sorted(language(system, word_len))
        check_budget(len(words) * levels, f"net({system.kind},k={depth},m={levels})")
        self.system = system
        self.depth = depth
        self.levels = levels
        self.words = tuple(words)
        self.word_index = {w: i for i, w in enumerate(words)}
        self.scale = levels << depth
        self.n_nodes = len(words) * levels

        if system.kind == ODOMETER2:
            succ = []
            for w in words:
                value = int(w[::-1], 2)
                nxt = format((value + 1) % (1 << depth), f"0{depth}b")[::-1]
                succ.append((self.word_index[nxt],))
        else:
            lang = set(words)
            succ = []
            for w in words:
                succ.append(
                    tuple(self.word_index[w[1:] + a] for a in "01" if w[1:] + a in lang)
                )
        self.successors = tuple(succ)
        if any(len(s) == 0 for s in succ):
            raise ParameterError("a word has no admissible extension; language broken")
        self.merge = np.array([s[0] for s in succ], dtype=np.int64)

        # word metric exponents, -1 on the diagonal
        W = len(words)
        exps = np.full((W, W), -1, dtype=np.int64)
        for i in range(W):
            for j in range(i + 1, W):
                e = _word_metric_exp(words[i], words[j], system.two_sided)
                exps[i, j] = exps[j, i] = e
        self.word_exps = exps

        m = levels
        vertical_w = 1 << depth  # 1/m in scale units
        edges: dict[tuple[int, int], int] = {}

        def add(u: int, v: int, w: int) -> None:
            if u == v:
                return
            key = (u, v) if u < v else (v, u)
            prev = edges.get(key)
            if prev is None or w < prev:
                edges[key] = w

        for wi in range(W):
            for lev in range(m - 1):
                add(wi * m + lev, wi * m + lev + 1, vertical_w)
            for vi in succ[wi]:
                add(wi * m + (m - 1), vi * m, vertical_w)
        horiz_cut = depth - 1  # metric <= 2^-(k-1) means exponent >= k-1
        for i in range(W):
            for j in range(i + 1, W):
                e = exps[i, j]
                if e >= horiz_cut:
                    w = m << (depth - e)
                    for lev in range(m):
                        add(i * m + lev, j * m + lev, w)

        order = sorted(edges)
        deg = np.zeros(self.n_nodes + 1, dtype=np.int64)
        for u, v in order:
            deg[u + 1] += 1
            deg[v + 1] += 1
        indptr = np.cumsum(deg)
        nbrs = np.empty(indptr[-1], dtype=np.int32)
        wts = np.empty(indptr[-1], dtype=np.int64)
        cursor = indptr[:-1].copy()
        for u, v in order:
            w = edges[(u, v)]
            nbrs[cursor[u]] = v
            wts[cursor[u]] = w
            cursor[u] += 1
            nbrs[cursor[v]] = u
            wts[cursor[v]] = w
            cursor[v] += 1
        self.indptr = indptr
        self.nbrs = nbrs
        self.wts = wts
        self.n_edges = len(order)
        self._dist: Optional[np.ndarray] = None

    # -- derived quantities ------------------------------------------------

    @property
    def mesh(self) -> Fraction:
        return Fraction(1, 1 << (self.depth - 1)) + Fraction(1, self.levels)

    @property
    def distances(self) -> np.ndarray:
        """All-pairs shortest-path matrix in scale units (int64, lazy)."""
        if self._dist is None:
            self._dist = kernels.dijkstra_all(self.indptr, self.nbrs, self.wts)
        return self._dist

    def node_of(self, word_idx: int, level: int) -> int:
        return word_idx * self.levels + level

    def node_word(self, node: int) -> int:
        return node // self.levels

    def node_level(self, node: int) -> int:
        return node % self.levels

    def word_metric(self, i: int, j: int) -> Fraction:
        e = int(self.word_exps[i, j])
        return Fraction(0) if e < 0 else Fraction(1, 1 << e)

    def is_connected(self) -> bool:
        return int(self.distances.max()) < int(kernels.INF64)

    # -- snapping and distances ---------------------------------------------

    def _snap_word(self, point: CantorPoint) -> int:
        if point.system != self.system:
            raise DomainMismatchError("point system does not match the net")
        if self.system.two_sided:
            k = self.depth
            if point.resolution < k:
                raise ResolutionError(
                    f"snapping needs window radius >= {k}, point has {point.resolution}"
                )
            c = (len(point.code) - 1) // 2
            word = point.code[c - k : c + k + 1]
        else:
            if point.resolution < self.depth:
                raise ResolutionError("odometer prefix shorter than net depth")
            word = point.code[: self.depth]
        return self.word_index[word]

    def snap(self, point: TorusPoint) -> int:
        """Nearest node: exact word window, then nearest level (ties go down)."""
        wi = self._snap_word(point.base)
        x = point.height * self.levels
        q, r = divmod(x.numerator, x.denominator)
        level = int(q) + (1 if 2 * r > x.denominator else 0)
        if level >= self.levels:
            return self.node_of(int(self.merge[wi]), 0)
        return self.node_of(wi, level)

    def quotient_distance(self, a: TorusPoint, b: TorusPoint):
        """Shortest-path distance between snapped nodes, as an exact rational.

        Returns math.inf when the nodes are not connected (a connected net
        never produces this; tests treat it as failure).
        """
        d = int(self.distances[self.snap(a), self.snap(b)])
        if d >= int(kernels.INF64):
            return float("inf")
        return Fraction(d, self.scale)

    def modulus(self, delta: Fraction) -> Fraction:
        """Largest snapped quotient distance over pre-quotient pairs closer
        than 2*delta in rho; one third of the derived neighborhood radius.

        The scan runs over extended node representatives: every (word, level)
        cell including height exactly 1, the latter mapped through the glue.
        """
        delta = Fraction(delta)
        if delta <= 0:
            raise ParameterError("delta must be positive")
        W = len(self.words)
        m = self.levels
        ew = np.repeat(np.arange(W, dtype=np.int64), m + 1)
        el = np.tile(np.arange(m + 1, dtype=np.int64), W)
        enode = ew * m + el
        top = el == m
        enode[top] = self.merge[ew[top]] * m
        # metric part in scale units: 0 when words equal, else m * 2^(k-e)
        exps = self.word_exps[ew[:, None], ew[None, :]]
        metric_scaled = np.where(exps < 0, 0, np.int64(m) << np.maximum(self.depth - exps, 0))
        gap_scaled = np.abs(el[:, None] - el[None, :]) << self.depth
        rho_scaled = metric_scaled + gap_scaled
        near = rho_scaled * delta.denominator < 2 * delta.numerator * self.scale
        dmat = self.distances[enode[:, None], enode[None, :]]
        if not near.any():
            return Fraction(0)
        return Fraction(int(dmat[near].max()), self.scale)

    def balls(self, radius: Fraction) -> tuple[np.ndarray, np.ndarray]:
        """CSR lists of nodes within the given distance, self included."""
        radius = Fraction(radius)
        # floor-divide keeps the comparison exact and avoids multiplying the
        # unreachable sentinel
        threshold = (radius.numerator * self.scale) // radius.denominator
        within = self.distances <= threshold
        counts = within.sum(axis=1)
        indptr = np.zeros(self.n_nodes + 1, dtype=np.int64)
        indptr[1:] = np.cumsum(counts)
        ids = np.nonzero(within)[1].astype(np.int32)
        return indptr, ids

    def export_edge_list(self, path) -> None:
        """Write the merged net as a node table plus `u v w` edge lines."""
        with open(path, "w", encoding="ascii") as fh:
            fh.write(
                f"# net {self.system.kind} depth {self.depth} levels {self.levels} "
                f"nodes {self.n_nodes} edges {self.n_edges}\n"
            )
            for node in range(self.n_nodes):
                fh.write(
                    f"# node {node} {self.words[self.node_word(node)]} {self.node_level(node)}\n"
                )
            seen = set()
            for u in range(self.n_nodes):
                for e in range(self.indptr[u], self.indptr[u + 1]):
                    v = int(self.nbrs[e])
                    if (min(u, v), max(u, v)) in seen:
                        continue
                    seen.add((min(u, v), max(u, v)))
                    w = Fraction(int(self.wts[e]), self.scale)
                    fh.write(f"{min(u, v)} {max(u, v)} {w.numerator}/{w.denominator}\n")


def build_net(system: SubshiftSystem, depth: int, levels: int) -> NetGraph:
    """Construct the identification net of the mapping torus of a system."""
    return NetGraph(system, depth, levels)
