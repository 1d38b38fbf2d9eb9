"""The sin(1/x) curve as a concrete chainable compactification.

The curve W is the ray {(x, sin(1/x)) : 0 < x <= 1} together with the
remainder segment {0} x [-1, 1].  This module samples W at a declared mesh,
builds an explicit audited map of W onto [0,1] with small fibers, runs the
sign-change obstruction on discrete chains in W^2 joining (p,q) to (q,p),
and demonstrates discrete separation of the square minus a diagonal tube.

Chains and the product graph use adjacency along the curve (consecutive
samples plus the single truncation seam joining the ray tail to the
remainder): W is not locally connected, so plain ambient-distance adjacency
would connect different oscillation strands and misrepresent its
subcontinua.

Coordinates are rationals on a 1e-9 grid; every float comparison carries
that slack.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import kernels
from .errors import ParameterError, check_budget
from .productnet import ComponentReport

TAU_CURVE = Fraction(1, 10 ** 9)
_GRID = 10 ** 9
_TWO_PI = 2 * math.pi


def _snap_rational(v: float) -> Fraction:
    return Fraction(round(v * _GRID), _GRID)


@dataclass(frozen=True)
class PlanarPoint:
    """A sampled point of the curve; on_arc marks the remainder segment."""

    x: Fraction
    y: Fraction
    on_arc: bool

    def __post_init__(self) -> None:
        if self.on_arc:
            if self.x != 0 or not -1 <= self.y <= 1:
                raise ParameterError("remainder points live on {0} x [-1,1]")
        else:
            if not 0 < self.x <= 1:
                raise ParameterError("ray points need 0 < x <= 1")
            xf = float(self.x)
            expected = math.sin(1 / xf)
            # both coordinates sit on the 1e-9 grid; the grid error in x is
            # amplified by the local slope bound 1/x^2
            if abs(float(self.y) - expected) > 2e-9 * (1.0 + 1.0 / (xf * xf)):
                raise ParameterError("ray point is off the curve beyond tolerance")


def _dist(x1: float, y1: float, x2: float, y2: float) -> float:
    return math.hypot(x1 - x2, y1 - y2)


class CurveSample:
    """Mesh sample of the curve: ray indices first (x = 1 downward), then the
    remainder from y = 1 down to y = -1; one seam edge joins ray tail to the
    nearest remainder sample."""

    def __init__(self, mesh: Fraction, tail_depth: int) -> None:
        if tail_depth < 1:
            raise ParameterError("tail_depth must be >= 1")
        mesh = Fraction(mesh)
        if not 0 < mesh <= Fraction(1, 4):
            raise ParameterError("mesh must lie in (0, 1/4]")
        self.mesh = mesh
        self.tail_depth = tail_depth
        self.x_min = _snap_rational(1 / (_TWO_PI * tail_depth + math.pi / 2))

        mesh_f = float(mesh)
        x_min_f = float(self.x_min)
        xs = [1.0]
        ys = [math.sin(1.0)]
        while xs[-1] > x_min_f:
            x = xs[-1]
            y = ys[-1]
            h = mesh_f * 0.9 * min(1.0, x * x)
            while True:
                xn = max(x - h, x_min_f)
                yn = math.sin(1 / xn)
                if _dist(x, y, xn, yn) <= mesh_f * 0.999:
                    break
                h /= 2
            xs.append(xn)
            ys.append(yn)
        self.n_ray = len(xs)

        # remainder: step mesh/2 at most, hitting 1, 0, -1 exactly
        arc_count = 2 * int(math.ceil(2 / (mesh_f / 2)))
        arc_fracs = [Fraction(1) - Fraction(2 * i, arc_count) for i in range(arc_count + 1)]

        self.fx: list[Fraction] = [_snap_rational(v) for v in xs] + [Fraction(0)] * len(arc_fracs)
        self.fy: list[Fraction] = [_snap_rational(v) for v in ys] + arc_fracs
        self.n_total = len(self.fx)
        self.on_arc = np.zeros(self.n_total, dtype=bool)
        self.on_arc[self.n_ray :] = True
        self.xs = np.array([float(v) for v in self.fx])
        self.ys = np.array([float(v) for v in self.fy])

        tail_y = self.ys[self.n_ray - 1]
        self.hop_arc_index = self.n_ray + int(
            np.argmin(np.abs(self.ys[self.n_ray :] - tail_y))
        )
        self.hop_length = _dist(
            self.xs[self.n_ray - 1],
            tail_y,
            0.0,
            self.ys[self.hop_arc_index],
        )

        steps = np.hypot(np.diff(self.xs[: self.n_ray]), np.diff(self.ys[: self.n_ray]))
        self.max_ray_step = float(steps.max()) if len(steps) else 0.0

        # intrinsic adjacency (self included) as CSR for the pair kernels
        nbrs: list[list[int]] = [[i] for i in range(self.n_total)]
        for i in range(self.n_total - 1):
            if i == self.n_ray - 1:
                continue  # ray tail and remainder head are not curve-adjacent
            nbrs[i].append(i + 1)
            nbrs[i + 1].append(i)
        a, b = self.n_ray - 1, self.hop_arc_index
        nbrs[a].append(b)
        nbrs[b].append(a)
        counts = np.array([len(sorted_) for sorted_ in nbrs], dtype=np.int64)
        self.nbr_indptr = np.zeros(self.n_total + 1, dtype=np.int64)
        self.nbr_indptr[1:] = np.cumsum(counts)
        self.nbr_ids = np.array(
            [v for lst in nbrs for v in sorted(lst)], dtype=np.int32
        )

    def point(self, index: int) -> PlanarPoint:
        return PlanarPoint(self.fx[index], self.fy[index], bool(self.on_arc[index]))

    def distance(self, i: int, j: int) -> float:
        return _dist(self.xs[i], self.ys[i], self.xs[j], self.ys[j])

    def index_path(self, i: int, j: int) -> np.ndarray:
        """Indices of the intrinsic walk from i to j (inclusive)."""

        def seg(a: int, b: int) -> np.ndarray:
            stride = 1 if b >= a else -1
            return np.arange(a, b + stride, stride, dtype=np.int64)

        if self.on_arc[i] == self.on_arc[j]:
            return seg(i, j)
        if self.on_arc[i]:
            left = seg(i, self.hop_arc_index)
            right = seg(self.n_ray - 1, j)
        else:
            left = seg(i, self.n_ray - 1)
            right = seg(self.hop_arc_index, j)
        return np.concatenate([left, right])


def sample_curve(n: int, tail_depth: int) -> CurveSample:
    """Sample the curve at mesh 1/n: arclength-paced ray points down to
    x_min = 1/(2*pi*tail_depth + pi/2) plus a uniform remainder ladder."""
    if n < 2:
        raise ParameterError("n must be >= 2")
    return CurveSample(Fraction(1, n), tail_depth)


# ---------------------------------------------------------------------------
# the audited map onto [0,1]


@dataclass(frozen=True)
class EpsMap:
    """Piecewise map of the sampled curve onto [0,1].

    Left of the cut (x <= cut_x, and the whole remainder) the value is affine
    in the height: value_share * (y+1)/2.  Right of the cut the value climbs
    affinely in arclength from the junction value up to 1 at (1, sin 1).  The
    cut sits where the curve enters the slab at its top, so both pieces give
    exactly the junction value there; declared fiber bound: cut_x + eps/2.
    """

    eps: Fraction
    cut_x: Fraction
    cut_index: int
    junction_value: Fraction
    value_share: Fraction
    value_tol: Fraction
    sample: CurveSample = field(compare=False, repr=False)
    values: tuple[Fraction, ...] = field(compare=False, repr=False)
    values_f: np.ndarray = field(compare=False, repr=False, default=None)

    def __post_init__(self) -> None:
        if self.values_f is None:
            object.__setattr__(
                self, "values_f", np.array([float(v) for v in self.values])
            )
        s = self.sample
        best = Fraction(0)
        for i in range(s.n_total - 1):
            if i == s.n_ray - 1:
                continue
            best = max(best, abs(self.values[i + 1] - self.values[i]))
        best = max(best, abs(self.values[s.hop_arc_index] - self.values[s.n_ray - 1]))
        object.__setattr__(self, "_edge_gap", best)

    @property
    def fiber_bound(self) -> Fraction:
        return self.cut_x + self.eps / 2

    def value(self, index: int) -> Fraction:
        return self.values[index]

    def values_float(self) -> np.ndarray:
        return self.values_f

    def edge_value_gap(self) -> Fraction:
        """Largest value change across one intrinsic adjacency step."""
        return self._edge_gap


def build_eps_map(
    eps: Fraction,
    sample: CurveSample,
    value_share: Fraction = Fraction(1, 5),
) -> EpsMap:
    """Construct the map for a tolerance eps in (0, 1/2).

    The cut abscissa is the largest 1/(2*pi*N + pi/2) strictly below eps/2,
    so a value slice meets several oscillation strands only inside a slab of
    width cut_x < eps/2.
    """
    eps = Fraction(eps)
    if not 0 < eps < Fraction(1, 2):
        raise ParameterError("eps must lie in (0, 1/2)")
    if not 0 < value_share < 1:
        raise ParameterError("value_share must lie in (0, 1)")
    n_cut = 1
    while True:
        cut = _snap_rational(1 / (_TWO_PI * n_cut + math.pi / 2))
        if cut < eps / 2:
            break
        n_cut += 1
        if n_cut > 10 ** 6:
            raise ParameterError("no valid cut below eps/2")
    xs = sample.xs
    cut_index = int(np.searchsorted(-xs[: sample.n_ray], -float(cut), side="left"))
    if cut_index >= sample.n_ray - 1:
        raise ParameterError(
            "sample tail does not enter the slab; increase tail_depth"
        )
    junction = value_share * (sample.fy[cut_index] + 1) / 2

    # horizontal piece: affine in arclength measured from the junction sample
    seg = np.hypot(np.diff(xs[: cut_index + 1]), np.diff(sample.ys[: cut_index + 1]))
    arclen = np.concatenate([np.cumsum(seg[::-1])[::-1], [0.0]])
    total = float(arclen[0])
    values: list[Fraction] = []
    for i in range(sample.n_total):
        if i <= cut_index:
            ratio = _snap_rational(arclen[i] / total)
            values.append(junction + (1 - junction) * ratio)
        else:
            values.append(value_share * (sample.fy[i] + 1) / 2)
    return EpsMap(
        eps=eps,
        cut_x=cut,
        cut_index=cut_index,
        junction_value=junction,
        value_share=value_share,
        value_tol=eps / 100,
        sample=sample,
        values=tuple(values),
    )


@dataclass(frozen=True)
class FiberReport:
    max_diameter: float
    pair_count: int
    worst_pair: tuple[int, int]
    value_tol: Fraction
    eps: Fraction
    declared_bound: Fraction

    @property
    def within_eps(self) -> bool:
        return self.max_diameter < float(self.eps) + 2e-9

    @property
    def within_declared_bound(self) -> bool:
        return self.max_diameter < float(self.declared_bound) + 2e-9


def fiber_audit(emap: EpsMap, value_tol: Optional[Fraction] = None) -> FiberReport:
    """Largest planar distance among sample pairs with values within the
    tolerance; the ideal-map fiber diameter bound plus the tolerance window."""
    tol = Fraction(value_tol) if value_tol is not None else emap.value_tol
    vals = emap.values_float()
    order = np.argsort(vals, kind="stable")
    max_d, count, i, j = kernels.fiber_scan(
        vals[order],
        emap.sample.xs[order],
        emap.sample.ys[order],
        float(tol) + 1e-12,
    )
    return FiberReport(
        max_diameter=float(max_d),
        pair_count=int(count),
        worst_pair=(int(order[int(i)]), int(order[int(j)])),
        value_tol=tol,
        eps=emap.eps,
        declared_bound=emap.fiber_bound,
    )


# ---------------------------------------------------------------------------
# chains and the sign-change obstruction


class DiscreteChain:
    """A finite chain in the square of the sampled curve.

    Steps are index moves; the mesh is the largest per-coordinate planar
    step, rounded up to the coordinate grid.
    """

    def __init__(self, sample: CurveSample, idx_first, idx_second) -> None:
        idx_first = np.asarray(idx_first, dtype=np.int64)
        idx_second = np.asarray(idx_second, dtype=np.int64)
        if idx_first.shape != idx_second.shape or idx_first.ndim != 1:
            raise ParameterError("chain needs two equal-length index arrays")
        if len(idx_first) < 2:
            raise ParameterError("chain needs at least two links")
        self.sample = sample
        self.idx_first = idx_first
        self.idx_second = idx_second
        worst = 0.0
        for idx in (idx_first, idx_second):
            dx = sample.xs[idx[1:]] - sample.xs[idx[:-1]]
            dy = sample.ys[idx[1:]] - sample.ys[idx[:-1]]
            if len(dx):
                worst = max(worst, float(np.max(np.hypot(dx, dy))))
        self.mesh = Fraction(math.ceil(worst * _GRID), _GRID)

    def __len__(self) -> int:
        return len(self.idx_first)

    def endpoint_indices(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (
            (int(self.idx_first[0]), int(self.idx_second[0])),
            (int(self.idx_first[-1]), int(self.idx_second[-1])),
        )

    def link(self, i: int) -> tuple[PlanarPoint, PlanarPoint]:
        return (
            self.sample.point(int(self.idx_first[i])),
            self.sample.point(int(self.idx_second[i])),
        )


def _pad_to(path: np.ndarray, length: int) -> np.ndarray:
    if len(path) >= length:
        return path
    pad = np.full(length - len(path), path[-1], dtype=np.int64)
    return np.concatenate([path, pad])


def random_swapped_chain(
    sample: CurveSample,
    emap: EpsMap,
    rng: np.random.Generator,
    min_value_gap: Optional[Fraction] = None,
) -> DiscreteChain:
    """Random chain from (p,q) to (q,p) with distinct endpoint values.

    Styles: move one coordinate at a time (in either order), route the first
    coordinate through a random waypoint, or move both coordinates in
    parallel so the chain hugs the diagonal.
    """
    if min_value_gap is None:
        min_value_gap = 4 * emap.edge_value_gap()
    gap_f = float(min_value_gap) + 1e-12
    vf = emap.values_float()
    n = sample.n_total
    for _ in range(10_000):
        p = int(rng.integers(0, n))
        q = int(rng.integers(0, n))
        if abs(vf[p] - vf[q]) > gap_f:
            break
    else:
        raise ParameterError("could not find endpoints with distinct values")
    style = int(rng.integers(0, 4))
    if style == 0:
        a = sample.index_path(p, q)          # first coordinate walks p -> q
        b = sample.index_path(q, p)          # then second walks q -> p
        first = np.concatenate([a, np.full(len(b), q, dtype=np.int64)])
        second = np.concatenate([np.full(len(a), q, dtype=np.int64), b])
    elif style == 1:
        b = sample.index_path(q, p)
        a = sample.index_path(p, q)
        first = np.concatenate([np.full(len(b), p, dtype=np.int64), a])
        second = np.concatenate([b, np.full(len(a), p, dtype=np.int64)])
    elif style == 2:
        w = int(rng.integers(0, n))
        a1 = sample.index_path(p, w)
        b = sample.index_path(q, p)
        a2 = sample.index_path(w, q)
        first = np.concatenate(
            [a1, np.full(len(b), w, dtype=np.int64), a2]
        )
        second = np.concatenate(
            [np.full(len(a1), q, dtype=np.int64), b, np.full(len(a2), p, dtype=np.int64)]
        )
    else:
        a = sample.index_path(p, q)
        b = sample.index_path(q, p)
        length = max(len(a), len(b))
        first = _pad_to(a, length)
        second = _pad_to(b, length)
    return DiscreteChain(sample, first, second)


@dataclass(frozen=True)
class ObstructionWitness:
    index: int
    value_gap: Fraction
    first: PlanarPoint
    second: PlanarPoint
    separation: float
    bound: Fraction

    @property
    def within_bound(self) -> bool:
        return self.separation < float(self.bound) + 2e-9


def diagonal_obstruction(chain: DiscreteChain, emap: EpsMap) -> ObstructionWitness:
    """Locate the sign change of value(first) - value(second) along the chain
    and report how close the chain comes to the diagonal there.

    The chain must join (p,q) to (q,p) with p distinct from q; the discrete
    intermediate value argument then forces a vanishing or sign flip, and the
    witness pair must sit within eps + 2*mesh of the diagonal.
    """
    (a0, b0), (a1, b1) = chain.endpoint_indices()
    if a0 != b1 or b0 != a1:
        raise ParameterError("chain endpoints are not a swapped pair")
    if a0 == b0:
        raise ParameterError("endpoints coincide; need p distinct from q")
    vals = emap.values
    # locate candidates in float, confirm them exactly: a true flip or zero
    # is either visible in float or hides below the 1e-12 band
    vf = emap.values_float()
    gf = vf[chain.idx_first] - vf[chain.idx_second]
    pos = gf > 0
    candidates = np.nonzero((pos[:-1] != pos[1:]) | (np.abs(gf[:-1]) <= 1e-12))[0]
    if len(candidates) == 0 or abs(gf[-1]) <= 1e-12:
        candidates = np.concatenate([candidates, [len(gf) - 1]])

    def exact_g(i: int) -> Fraction:
        return vals[int(chain.idx_first[i])] - vals[int(chain.idx_second[i])]

    witness = None
    g_at = None
    for c in candidates:
        c = int(c)
        gc = exact_g(c)
        if gc == 0:
            witness, g_at = c, gc
            break
        if c + 1 < len(gf):
            gn = exact_g(c + 1)
            if gn == 0 or (gc > 0) != (gn > 0):
                if gn == 0 or abs(gn) < abs(gc):
                    witness, g_at = c + 1, gn
                else:
                    witness, g_at = c, gc
                break
    if witness is None:
        raise ParameterError("no sign change found; endpoints not truly swapped")
    first, second = chain.link(witness)
    separation = chain.sample.distance(
        int(chain.idx_first[witness]), int(chain.idx_second[witness])
    )
    return ObstructionWitness(
        index=witness,
        value_gap=g_at,
        first=first,
        second=second,
        separation=separation,
        bound=emap.eps + 2 * chain.mesh,
    )


# ---------------------------------------------------------------------------
# discrete separation of the square minus a diagonal tube


@dataclass(frozen=True)
class PairVerdict:
    p_index: int
    q_index: int
    forward_component: int
    swapped_component: int

    @property
    def separated(self) -> bool:
        return self.forward_component != self.swapped_component


@dataclass(frozen=True)
class DemoReport:
    components: ComponentReport
    eta: Fraction
    mesh: Fraction
    kept_count: int
    removed_count: int
    pair_verdicts: tuple[PairVerdict, ...]
    same_sign_pairs: int
    same_sign_connected: int

    @property
    def all_separated(self) -> bool:
        return all(v.separated for v in self.pair_verdicts)


def separation_demo(
    eta: Fraction,
    mesh: Fraction,
    tail_depth: int = 4,
    eps: Fraction = Fraction(1, 10),
    n_pairs: int = 8,
    seed: int = 0,
) -> DemoReport:
    """Remove the diagonal tube {d(x,y) < 2*eta} from the sampled square and
    check that swapped pairs land in different components.

    Nodes are index pairs with intrinsic adjacency in each coordinate; kept
    nodes have planar distance at least 2*eta between their coordinates.
    Also reports how often pairs on the same value side stay connected.
    """
    eta = Fraction(eta)
    mesh = Fraction(mesh)
    if eta <= mesh:
        raise ParameterError("eta must exceed the mesh")
    n = int(math.ceil(1 / float(mesh)))
    sample = sample_curve(n, tail_depth)
    emap = build_eps_map(eps, sample)
    nb = sample.n_total
    check_budget(nb * nb, "curve square demo")
    import time as _time

    t0 = _time.perf_counter()
    dx = sample.xs[:, None] - sample.xs[None, :]
    dy = sample.ys[:, None] - sample.ys[None, :]
    dist = np.hypot(dx, dy)
    kept = (dist >= 2 * float(eta) - 1e-9).astype(np.uint8).reshape(-1)
    labels, count, edges = kernels.pair_graph_components(
        sample.nbr_indptr, sample.nbr_ids, kept, nb
    )
    idx = np.nonzero(labels >= 0)[0]
    lab = labels[idx]
    sizes = np.bincount(lab, minlength=int(count)).astype(np.int64)
    _, first = np.unique(lab, return_index=True)
    components = ComponentReport(
        count=int(count),
        sizes=tuple(int(x) for x in sizes),
        representatives=tuple(int(x) for x in idx[first]),
        node_count=int(len(idx)),
        edge_count=int(edges),
        elapsed_s=_time.perf_counter() - t0,
        labels=labels,
    )

    rng = np.random.default_rng(seed)
    floor = 2 * float(eta) + 0.01
    verdicts = []
    tries = 0
    while len(verdicts) < n_pairs and tries < 100_000:
        tries += 1
        p = int(rng.integers(0, nb))
        q = int(rng.integers(0, nb))
        if sample.distance(p, q) <= floor:
            continue
        cf = int(labels[p * nb + q])
        cs = int(labels[q * nb + p])
        verdicts.append(PairVerdict(p, q, cf, cs))
    if len(verdicts) < n_pairs:
        raise ParameterError("could not find enough far pairs for the demo")

    same_sign = 0
    same_sign_connected = 0
    vals = emap.values
    tries = 0
    while same_sign < n_pairs and tries < 100_000:
        tries += 1
        p1 = int(rng.integers(0, nb))
        q1 = int(rng.integers(0, nb))
        p2 = int(rng.integers(0, nb))
        q2 = int(rng.integers(0, nb))
        if sample.distance(p1, q1) <= floor or sample.distance(p2, q2) <= floor:
            continue
        if (vals[p1] > vals[q1]) != (vals[p2] > vals[q2]):
            continue
        same_sign += 1
        if labels[p1 * nb + q1] == labels[p2 * nb + q2]:
            same_sign_connected += 1

    return DemoReport(
        components=components,
        eta=eta,
        mesh=sample.mesh,
        kept_count=int(kept.sum()),
        removed_count=nb * nb - int(kept.sum()),
        pair_verdicts=tuple(verdicts),
        same_sign_pairs=same_sign,
        same_sign_connected=same_sign_connected,
    )
