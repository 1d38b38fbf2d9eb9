"""Finite approximation of the quotient square and its connectivity checks.

Product nodes are ordered pairs of base-net nodes; two nodes are adjacent
when both coordinates sit within the threshold theta in the surrogate
metric.  Each node carries the tube classification of its canonical
pre-quotient representative, evaluated at word resolution (seam predicates
go through the net's glue image of the word).  The checks:

* ``k_components``    -- connected components of the core-labeled subgraph;
* ``sandwich_check``  -- every diagonal pre-image cell is tube-labeled, and
                         every tube-labeled cell has its image pair within
                         the derived radius eps_hat;
* ``cw_connect_probe`` -- path search between far-from-diagonal nodes after
                         removing a diagonal neighborhood.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import kernels
from .errors import ParameterError, check_budget
from .quotient import NetGraph, TorusPoint
from .separation import SeparationParams


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _min_exponent_below(delta: Fraction) -> int:
    """Smallest e with 2^-e < delta."""
    e = 0
    while Fraction(1, 1 << e) >= delta:
        e += 1
        if e > 62:
            raise ParameterError("delta too small for the word metric range")
    return e


@dataclass(frozen=True)
class ComponentReport:
    """Connected-component summary; labels are numbered by minimum node id."""

    count: int
    sizes: tuple[int, ...]
    representatives: tuple[int, ...]
    node_count: int
    edge_count: int
    elapsed_s: float
    labels: np.ndarray = field(compare=False, repr=False)

    def __post_init__(self) -> None:
        if sum(self.sizes) != self.node_count:
            raise ParameterError("component sizes must sum to the node count")


class ProductNet:
    """Square of a base net with tube labels and threshold adjacency."""

    def __init__(self, base: NetGraph, theta: Fraction, params: SeparationParams) -> None:
        theta = Fraction(theta)
        if theta < base.mesh:
            raise ParameterError(
                f"theta {theta} is below the net mesh {base.mesh}; edges would drop walks"
            )
        check_budget(base.n_nodes * base.n_nodes, "product net")
        self.base = base
        self.theta = theta
        self.params = params
        self.n_base = base.n_nodes
        self.n_nodes = base.n_nodes * base.n_nodes
        self.ball_indptr, self.ball_ids = base.balls(theta)
        self.labels = self._classify_nodes()
        self._diag_dist: Optional[np.ndarray] = None

    # -- labels --------------------------------------------------------------

    def _tube_tables(self, levels: np.ndarray) -> tuple[np.ndarray, ...]:
        """Word nearness and level threshold tables for the tube predicates."""
        net, delta = self.base, self.params.delta
        e_min = _min_exponent_below(delta)
        exps = net.word_exps
        near_words = (exps < 0) | (exps >= e_min)
        near_fwd = near_words[:, net.merge]  # near_fwd[p, q] : p close to glue(q)
        m = net.levels
        num, den = delta.numerator, delta.denominator
        low = levels * den < num * m            # level/m < delta
        high = (m - levels) * den < num * m     # level/m > 1 - delta
        gap_ok = np.abs(levels[:, None] - levels[None, :]) * den < num * m
        return near_words, near_fwd, low, high, gap_ok

    def _classify_nodes(self) -> np.ndarray:
        net = self.base
        m = net.levels
        levels = np.arange(m, dtype=np.int64)
        near_words, near_fwd, low, high, gap_ok = self._tube_tables(levels)
        node_w = np.repeat(np.arange(len(net.words), dtype=np.int64), m)
        node_l = np.tile(levels, len(net.words))
        wa, wb = node_w[:, None], node_w[None, :]
        la, lb = node_l[:, None], node_l[None, :]
        diag = near_words[wa, wb] & gap_ok[la, lb]
        fwd = near_fwd[wa, wb] & low[la] & high[lb]
        bwd = near_fwd[wb, wa] & high[la] & low[lb]
        labels = (
            diag.astype(np.uint8)
            | (fwd.astype(np.uint8) << 1)
            | (bwd.astype(np.uint8) << 2)
        )
        return labels.reshape(-1)

    # -- views ---------------------------------------------------------------

    @property
    def kept_core(self) -> np.ndarray:
        return (self.labels == 0).astype(np.uint8)

    def node_id(self, a: int, b: int) -> int:
        return a * self.n_base + b

    def snap_pair(self, pair: tuple[TorusPoint, TorusPoint]) -> int:
        return self.node_id(self.base.snap(pair[0]), self.base.snap(pair[1]))

    def edge_total(self) -> int:
        """Number of unordered adjacent product-node pairs (all labels)."""
        ball_sizes = np.diff(self.ball_indptr)
        s = int(ball_sizes.sum())
        return (s * s - self.n_nodes) // 2

    @property
    def diag_dist(self) -> np.ndarray:
        """Surrogate distance of every product node to the exact diagonal."""
        if self._diag_dist is None:
            self._diag_dist = kernels.min_max_to_diagonal(self.base.distances)
        return self._diag_dist


def build_product_net(net: NetGraph, theta: Fraction, params: SeparationParams) -> ProductNet:
    return ProductNet(net, theta, params)


def k_components(pnet: ProductNet) -> ComponentReport:
    """Connected components of the core-labeled subgraph of the product net."""
    t0 = time.perf_counter()
    labels, count, edges = kernels.pair_graph_components(
        pnet.ball_indptr, pnet.ball_ids, pnet.kept_core, pnet.n_base
    )
    idx = np.nonzero(labels >= 0)[0]
    lab = labels[idx]
    sizes = np.bincount(lab, minlength=int(count)).astype(np.int64)
    _, first = np.unique(lab, return_index=True)
    reps = idx[first]
    return ComponentReport(
        count=int(count),
        sizes=tuple(int(x) for x in sizes),
        representatives=tuple(int(x) for x in reps),
        node_count=int(len(idx)),
        edge_count=int(edges),
        elapsed_s=time.perf_counter() - t0,
        labels=labels,
    )


@dataclass(frozen=True)
class SandwichReport:
    """Exhaustive scan over extended cells (heights 0..1 inclusive, the top
    height routed through the glue)."""

    cells: int
    diag_preimages: int
    tube_cells: int
    label_violations: tuple[tuple[int, int], ...]
    radius_violations: tuple[tuple[int, int], ...]
    eps_hat: Fraction

    @property
    def ok(self) -> bool:
        return not self.label_violations and not self.radius_violations


def sandwich_check(pnet: ProductNet, params: Optional[SeparationParams] = None) -> SandwichReport:
    """Verify the two-sided bracket at net resolution.

    (i) every extended cell pair whose quotient images coincide must be
    tube-labeled; (ii) every tube-labeled cell pair must have its image pair
    within eps_hat in the surrogate metric.
    """
    params = params or pnet.params
    if params.eps_hat is None:
        raise ParameterError("sandwich_check needs params with a derived eps_hat")
    net = pnet.base
    W, m = len(net.words), net.levels
    levels_ext = np.arange(m + 1, dtype=np.int64)
    near_words, near_fwd, low, high, gap_ok = pnet._tube_tables(levels_ext)
    ew = np.repeat(np.arange(W, dtype=np.int64), m + 1)
    el = np.tile(levels_ext, W)
    can_w = np.where(el == m, net.merge[ew], ew)
    can_l = np.where(el == m, 0, el)
    can_node = can_w * m + can_l

    wa, wb = ew[:, None], ew[None, :]
    la, lb = el[:, None], el[None, :]
    diag = near_words[wa, wb] & gap_ok[la, lb]
    fwd = near_fwd[wa, wb] & low[la] & high[lb]
    bwd = near_fwd[wb, wa] & high[la] & low[lb]
    excluded = diag | fwd | bwd

    same_image = (can_w[:, None] == can_w[None, :]) & (can_l[:, None] == can_l[None, :])
    label_bad = same_image & ~excluded

    eps = params.eps_hat
    threshold = _ceil_div(eps.numerator * net.scale, eps.denominator)
    dist = net.distances[can_node[:, None], can_node[None, :]]
    radius_bad = excluded & (dist >= threshold)

    def _pairs(mask: np.ndarray, cap: int = 64) -> tuple[tuple[int, int], ...]:
        ii, jj = np.nonzero(mask)
        return tuple((int(a), int(b)) for a, b in zip(ii[:cap], jj[:cap]))

    return SandwichReport(
        cells=int(excluded.size),
        diag_preimages=int(same_image.sum()),
        tube_cells=int(excluded.sum()),
        label_violations=_pairs(label_bad),
        radius_violations=_pairs(radius_bad),
        eps_hat=eps,
    )


@dataclass(frozen=True)
class ProbeResult:
    connected: bool
    path: Optional[tuple[int, ...]]
    eta: Fraction
    kept_count: int
    removed_count: int
    src_component_size: Optional[int] = None
    dst_component_size: Optional[int] = None


def cw_connect_probe(
    pnet: ProductNet,
    a: tuple[TorusPoint, TorusPoint],
    b: tuple[TorusPoint, TorusPoint],
    eta: Fraction,
) -> ProbeResult:
    """Search for a product-net path between a and b that keeps every node at
    surrogate distance at least eta from the diagonal.

    Returns the path when one exists; otherwise reports the sizes of the two
    separated components.
    """
    eta = Fraction(eta)
    if eta <= 0:
        raise ParameterError("eta must be positive")
    net = pnet.base
    threshold = _ceil_div(eta.numerator * net.scale, eta.denominator)
    kept = (pnet.diag_dist >= threshold).astype(np.uint8)
    src = pnet.snap_pair(a)
    dst = pnet.snap_pair(b)
    for name, node in (("a", src), ("b", dst)):
        if not kept[node]:
            raise ParameterError(f"probe endpoint {name} is within eta of the diagonal")
    parents = kernels.bfs_route(
        pnet.ball_indptr, pnet.ball_ids, kept, pnet.n_base, src, dst
    )
    kept_count = int(kept.sum())
    removed = pnet.n_nodes - kept_count
    if parents[dst] != -2:
        path = [dst]
        while path[-1] != src:
            path.append(int(parents[path[-1]]))
        return ProbeResult(
            connected=True,
            path=tuple(reversed(path)),
            eta=eta,
            kept_count=kept_count,
            removed_count=removed,
        )
    labels, _, _ = kernels.pair_graph_components(
        pnet.ball_indptr, pnet.ball_ids, kept, pnet.n_base
    )
    sizes = np.bincount(labels[labels >= 0])
    return ProbeResult(
        connected=False,
        path=None,
        eta=eta,
        kept_count=kept_count,
        removed_count=removed,
        src_component_size=int(sizes[labels[src]]),
        dst_component_size=int(sizes[labels[dst]]),
    )
