"""Region decomposition of the cylinder square and explicit connecting paths.

For a tolerance delta < 1/10 the square of the cylinder splits into three
open tubes around the glued diagonal plus their complement, the core:

* ``diag``     -- bases within delta of each other, heights within delta;
* ``seam_fwd`` -- first base within delta of the image of the second base,
                  first height under delta, second height over 1 - delta;
* ``seam_bwd`` -- the mirror tube with the roles of the coordinates swapped.

The quotient image of the core is the candidate separating continuum.  Every
core point is joined to the anchor band (heights (0, 1/2)) by a short chain
of height-affine segments that provably stays in the core; seam-crossing
segment pairs continue anchor points along the simultaneous orbit, and a
bridge strings those crossings along a product orbit with good coverage.
Audits sample every segment on a rational grid and classify each sample
exactly.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import CaseError, ParameterError
from .quotient import CylPoint, NetGraph, ProductPrePoint, TorusPoint, canonicalize, sigma
from .symbolic import CantorPoint, SubshiftSystem, cantor_metric, point_at, step


@dataclass(frozen=True)
class SeparationParams:
    """Tube width delta (must be below 1/10) and the derived neighborhood
    radius eps_hat = 3 * modulus(net, delta), when a net is attached."""

    delta: Fraction
    eps_hat: Optional[Fraction] = None
    net: Optional[NetGraph] = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "delta", Fraction(self.delta))
        if not 0 < self.delta < Fraction(1, 10):
            raise ParameterError(f"delta must lie in (0, 1/10), got {self.delta}")

    @classmethod
    def for_net(cls, net: NetGraph, delta: Fraction) -> "SeparationParams":
        delta = Fraction(delta)
        probe = cls(delta)  # range check before the expensive scan
        eps_hat = 3 * net.modulus(probe.delta)
        return cls(delta, eps_hat=eps_hat, net=net)


@dataclass(frozen=True)
class RegionLabel:
    diag: bool
    seam_fwd: bool
    seam_bwd: bool

    @property
    def excluded(self) -> bool:
        return self.diag or self.seam_fwd or self.seam_bwd

    @property
    def core(self) -> bool:
        return not self.excluded


def classify(z: ProductPrePoint, params: SeparationParams) -> RegionLabel:
    """Exact tube membership of a pre-quotient pair."""
    delta = params.delta
    p, q = z.first.base, z.second.base
    s, t = z.first.height, z.second.height
    diag = abs(t - s) < delta and cantor_metric(p, q) < delta
    seam_fwd = s < delta and t > 1 - delta and cantor_metric(p, step(q)) < delta
    seam_bwd = t < delta and s > 1 - delta and cantor_metric(step(p), q) < delta
    return RegionLabel(diag, seam_fwd, seam_bwd)


def anchor_point(p: CantorPoint, q: CantorPoint) -> ProductPrePoint:
    """The anchor-band point ((p, 0), (q, 1/2)); membership in the core is
    re-checked by callers, not assumed."""
    return ProductPrePoint(CylPoint(p, Fraction(0)), CylPoint(q, Fraction(1, 2)))


class SegmentKind(enum.Enum):
    DESCEND = "descend_keep_gap"
    CENTER = "center_second"
    RETRACT = "retract_second"
    LIFT = "lift_first_over_seam"
    CLIMB_SECOND = "climb_second_over_seam"
    CLIMB_FIRST = "climb_first_over_seam"


@dataclass(frozen=True)
class PathSegment:
    """A curve of pre-quotient pairs with fixed bases and height functions
    affine in the parameter: height_i(r) = coeff_i[0] * r + coeff_i[1].

    ``reverse`` marks traversal from the high parameter end when the segment
    sits inside a route; ``swapped`` marks segments generated through the
    coordinate-swap symmetry (first/second refer to the mirrored roles).
    """

    kind: SegmentKind
    first_base: CantorPoint
    second_base: CantorPoint
    first_coeff: tuple[Fraction, Fraction]
    second_coeff: tuple[Fraction, Fraction]
    domain: tuple[Fraction, Fraction] = (Fraction(0), Fraction(1))
    reverse: bool = False
    # produced by the coordinate-swap symmetry; fields are already in true
    # component order, the flag is informational
    swapped: bool = False

    def sample(self, r: Fraction) -> ProductPrePoint:
        r = Fraction(r)
        lo, hi = self.domain
        if not lo <= r <= hi:
            raise ParameterError(f"parameter {r} outside segment domain [{lo},{hi}]")
        h1 = self.first_coeff[0] * r + self.first_coeff[1]
        h2 = self.second_coeff[0] * r + self.second_coeff[1]
        return ProductPrePoint(
            CylPoint(self.first_base, h1), CylPoint(self.second_base, h2)
        )

    def start(self) -> ProductPrePoint:
        return self.sample(self.domain[1] if self.reverse else self.domain[0])

    def end(self) -> ProductPrePoint:
        return self.sample(self.domain[0] if self.reverse else self.domain[1])

    def grid(self, count: int) -> list[Fraction]:
        if count < 2:
            raise ParameterError("segment grids need at least both endpoints")
        lo, hi = self.domain
        pts = [lo + (hi - lo) * Fraction(i, count - 1) for i in range(count)]
        return pts[::-1] if self.reverse else pts

    def swap(self) -> "PathSegment":
        return PathSegment(
            self.kind,
            self.second_base,
            self.first_base,
            self.second_coeff,
            self.first_coeff,
            self.domain,
            self.reverse,
            not self.swapped,
        )


def _heights(z: ProductPrePoint) -> tuple[Fraction, Fraction]:
    return z.first.height, z.second.height


def descend_segment(z: ProductPrePoint) -> PathSegment:
    """Lower both heights to the floor keeping the gap: at r the heights are
    (r*s, r*t + (1-r)*(t-s)); r=1 is z, r=0 is ((p,0),(q,t-s))."""
    s, t = _heights(z)
    return PathSegment(
        SegmentKind.DESCEND,
        z.first.base,
        z.second.base,
        (s, Fraction(0)),
        (s, t - s),
        reverse=True,
    )


def center_segment(z: ProductPrePoint) -> PathSegment:
    """First height pinned at 0, second moves from t-s (r=1) to 1/2 (r=0)."""
    s, t = _heights(z)
    return PathSegment(
        SegmentKind.CENTER,
        z.first.base,
        z.second.base,
        (Fraction(0), Fraction(0)),
        (t - s - Fraction(1, 2), Fraction(1, 2)),
        reverse=True,
    )


def retract_segment(z: ProductPrePoint, params: SeparationParams) -> PathSegment:
    """Second height from t (r=0) down to 1 - delta (r=1), first pinned at s."""
    s, t = _heights(z)
    return PathSegment(
        SegmentKind.RETRACT,
        z.first.base,
        z.second.base,
        (Fraction(0), s),
        (1 - params.delta - t, t),
    )


def lift_segment(p: CantorPoint, q: CantorPoint) -> PathSegment:
    """((p, 1/2 + r), (q, r)) for r in [0, 1/2]: carries ((p,1/2),(q,0)) to
    ((p,1),(q,1/2)), whose quotient image continues at ((f(p),0),(q,1/2))."""
    return PathSegment(
        SegmentKind.LIFT,
        p,
        q,
        (Fraction(1), Fraction(1, 2)),
        (Fraction(1), Fraction(0)),
        domain=(Fraction(0), Fraction(1, 2)),
    )


def seam_shift_segments(p: CantorPoint, q: CantorPoint) -> tuple[PathSegment, PathSegment]:
    """Two segments whose quotient image joins the anchor points of (p, q)
    and of (f(p), f(q)).

    The first runs ((p,r),(q,1/2+r)); at its top the second coordinate sits
    on the seam, so the chain continues with the second base already shifted:
    ((p,1/2+r),(f(q),r)).  The junction is an identity of quotient points.
    """
    fq = step(q)
    left = PathSegment(
        SegmentKind.CLIMB_SECOND,
        p,
        q,
        (Fraction(1), Fraction(0)),
        (Fraction(1), Fraction(1, 2)),
        domain=(Fraction(0), Fraction(1, 2)),
    )
    right = PathSegment(
        SegmentKind.CLIMB_FIRST,
        p,
        fq,
        (Fraction(1), Fraction(1, 2)),
        (Fraction(1), Fraction(0)),
        domain=(Fraction(0), Fraction(1, 2)),
    )
    return left, right


def route_interior(z: ProductPrePoint, params: SeparationParams) -> list[PathSegment]:
    """Core route for s <= t away from the seam: descend, then center.

    Requires 2*delta <= s or t <= 1 - delta; other core points go through
    route_near_seam.
    """
    s, t = _heights(z)
    if not classify(z, params).core:
        raise CaseError("route_interior needs a core point")
    if s > t:
        raise CaseError("route_interior needs s <= t")
    if not (2 * params.delta <= s or t <= 1 - params.delta):
        raise CaseError("near-seam point; use route_near_seam")
    return [descend_segment(z), center_segment(z)]


def route_near_seam(z: ProductPrePoint, params: SeparationParams) -> list[PathSegment]:
    """Core route for s <= t hugging the seam (s < 2*delta < 1-delta < t):
    retract the second height below the seam, then run the interior route."""
    s, t = _heights(z)
    if not classify(z, params).core:
        raise CaseError("route_near_seam needs a core point")
    if s > t:
        raise CaseError("route_near_seam needs s <= t")
    if not (s < 2 * params.delta and t > 1 - params.delta):
        raise CaseError("interior point; use route_interior")
    cap = retract_segment(z, params)
    z0 = cap.end()
    if not classify(z0, params).core:
        # analytically impossible for delta < 1/10; a hit means a broken build
        raise RuntimeError("retract target escaped the core")
    return [cap] + route_interior(z0, params)


def _dispatch_route(z: ProductPrePoint, params: SeparationParams) -> list[PathSegment]:
    s, t = _heights(z)
    if 2 * params.delta <= s or t <= 1 - params.delta:
        return route_interior(z, params)
    return route_near_seam(z, params)


def route_to_anchor(z: ProductPrePoint, params: SeparationParams) -> list[PathSegment]:
    """Join a core point to the quotient image of the anchor band.

    For s <= t the route ends at ((p,0),(q,1/2)).  Otherwise the mirrored
    route ends at ((p,1/2),(q,0)) and a final lift carries it to
    ((p,1),(q,1/2)), equal in the quotient to ((f(p),0),(q,1/2)).  Ties
    s == t take the first branch.
    """
    if not classify(z, params).core:
        raise ParameterError("route_to_anchor needs a core point")
    s, t = _heights(z)
    if s <= t:
        return _dispatch_route(z, params)
    mirrored = _dispatch_route(ProductPrePoint(z.second, z.first), params)
    segments = [seg.swap() for seg in mirrored]
    segments.append(lift_segment(z.first.base, z.second.base))
    return segments


def route_endpoints_chain(segments: Sequence[PathSegment]) -> bool:
    """True when consecutive segment endpoints agree exactly."""
    for a, b in zip(segments, segments[1:]):
        if a.end() != b.start():
            return False
    return True


# ---------------------------------------------------------------------------
# bridge along a product orbit


@dataclass(frozen=True)
class OrbitBridge:
    """Seam crossings strung along the simultaneous orbit of a seed pair."""

    seed: tuple[CantorPoint, CantorPoint]
    segments: tuple[PathSegment, ...]
    count: int


def orbit_bridge(
    seed_a: CantorPoint, seed_b: CantorPoint, n_max: int, params: SeparationParams
) -> OrbitBridge:
    """Chain n_max seam crossings: crossing n joins the anchor points of
    (f^(n-1) a, f^(n-1) b) and (f^n a, f^n b); consecutive quotient endpoints
    coincide by construction."""
    if n_max < 1:
        raise ParameterError("bridge needs at least one crossing")
    segments: list[PathSegment] = []
    p, q = seed_a, seed_b
    for _ in range(n_max):
        left, right = seam_shift_segments(p, q)
        segments.extend((left, right))
        p, q = step(p), step(q)
    return OrbitBridge(seed=(seed_a, seed_b), segments=tuple(segments), count=n_max)


def bridge_chains_exactly(bridge: OrbitBridge) -> bool:
    """Every crossing junction and every crossing-to-crossing handoff must be
    an exact quotient-point identity."""
    segs = bridge.segments
    for i in range(0, len(segs), 2):
        left, right = segs[i], segs[i + 1]
        if sigma(left.end()) != sigma(right.start()):
            return False
        if i + 2 < len(segs) and sigma(right.end()) != sigma(segs[i + 2].start()):
            return False
    return True


# ---------------------------------------------------------------------------
# audits


@dataclass(frozen=True)
class AuditViolation:
    kind: str
    swapped: bool
    parameter: Fraction
    tube: str


@dataclass(frozen=True)
class RouteAudit:
    total_samples: int
    violations: tuple[AuditViolation, ...]
    boundary_hits: int

    @property
    def clean(self) -> bool:
        return not self.violations


def _audit_segment(
    seg: PathSegment,
    params: SeparationParams,
    count: int,
    tol: Fraction,
    violations: list[AuditViolation],
) -> tuple[int, int]:
    """Classify the grid samples of one segment; returns (samples, boundary).

    Heights along the grid are affine integer series over one common
    denominator, so every predicate is an exact int64 comparison; segments
    whose magnitudes could overflow take the plain rational path instead.
    """
    import math as _math

    delta = params.delta
    p, q = seg.first_base, seg.second_base
    near_pq = cantor_metric(p, q) < delta
    near_p_fq = cantor_metric(p, step(q)) < delta
    near_fp_q = cantor_metric(step(p), q) < delta
    lo, hi = seg.domain
    span = (hi - lo) / (count - 1)
    series = []
    for a, b in (seg.first_coeff, seg.second_coeff):
        slope = a * span
        inter = a * lo + b
        series.append((slope, inter))
    den = _math.lcm(*(c.denominator for pair in series for c in pair))
    (sl1, in1), (sl2, in2) = series
    a1 = sl1.numerator * (den // sl1.denominator)
    b1 = in1.numerator * (den // in1.denominator)
    a2 = sl2.numerator * (den // sl2.denominator)
    b2 = in2.numerator * (den // in2.denominator)
    nd, dd = delta.numerator, delta.denominator
    tn, td = tol.numerator, tol.denominator
    peak = max(abs(a1) * count + abs(b1), abs(a2) * count + abs(b2))
    if (2 * peak * dd + nd * den) * td >= 1 << 62:
        return _audit_segment_rational(
            seg, params, count, tol, violations, near_pq, near_p_fq, near_fp_q
        )
    i = np.arange(count, dtype=np.int64)
    h1 = a1 * i + b1
    h2 = a2 * i + b2
    gap = np.abs(h2 - h1)
    diag = near_pq & (gap * dd < nd * den)
    fwd = near_p_fq & (h1 * dd < nd * den) & (h2 * dd > (dd - nd) * den)
    bwd = near_fp_q & (h2 * dd < nd * den) & (h1 * dd > (dd - nd) * den)
    bad = diag | fwd | bwd
    if bad.any():
        for idx in np.nonzero(bad)[0]:
            tube = "diag" if diag[idx] else ("seam_fwd" if fwd[idx] else "seam_bwd")
            violations.append(
                AuditViolation(seg.kind.value, seg.swapped, lo + span * int(idx), tube)
            )
    lim = tn * dd * den
    near_edge = np.abs(gap * dd - nd * den) * td <= lim
    for h in (h1, h2):
        near_edge |= np.abs(h * dd - nd * den) * td <= lim
        near_edge |= np.abs(h * dd - (dd - nd) * den) * td <= lim
    return count, int(near_edge.sum())


def _audit_segment_rational(
    seg: PathSegment,
    params: SeparationParams,
    count: int,
    tol: Fraction,
    violations: list[AuditViolation],
    near_pq: bool,
    near_p_fq: bool,
    near_fp_q: bool,
) -> tuple[int, int]:
    delta = params.delta
    boundary = 0
    for r in seg.grid(count):
        h1 = seg.first_coeff[0] * r + seg.first_coeff[1]
        h2 = seg.second_coeff[0] * r + seg.second_coeff[1]
        gap = abs(h2 - h1)
        tube = None
        if near_pq and gap < delta:
            tube = "diag"
        elif near_p_fq and h1 < delta and h2 > 1 - delta:
            tube = "seam_fwd"
        elif near_fp_q and h2 < delta and h1 > 1 - delta:
            tube = "seam_bwd"
        if tube is not None:
            violations.append(AuditViolation(seg.kind.value, seg.swapped, r, tube))
        if (
            abs(gap - delta) <= tol
            or abs(h1 - delta) <= tol
            or abs(h2 - delta) <= tol
            or abs(h1 - (1 - delta)) <= tol
            or abs(h2 - (1 - delta)) <= tol
        ):
            boundary += 1
    return count, boundary


def audit_route(
    segments: Sequence[PathSegment],
    params: SeparationParams,
    samples_per_segment: int = 101,
    boundary_tol: Optional[Fraction] = None,
) -> RouteAudit:
    """Classify every grid sample of every segment; core membership is the
    expectation, any tube hit is recorded with its parameter and tube name.

    Samples whose height predicates sit within boundary_tol of a threshold
    are counted separately (they pass or fail exactly; the count just flags
    how adversarial the route is).  boundary_tol defaults to 2^-resolution
    of the segment bases.
    """
    if samples_per_segment < 2:
        raise ParameterError("audits need both endpoints, give >= 2 samples")
    violations: list[AuditViolation] = []
    boundary = 0
    total = 0
    for seg in segments:
        tol = boundary_tol
        if tol is None:
            tol = Fraction(
                1, 1 << min(seg.first_base.resolution, seg.second_base.resolution)
            )
        n, b = _audit_segment(seg, params, samples_per_segment, tol, violations)
        total += n
        boundary += b
    return RouteAudit(
        total_samples=total, violations=tuple(violations), boundary_hits=boundary
    )


# ---------------------------------------------------------------------------
# deterministic random samplers for audits and tests


def _height_from_grid(rng: np.random.Generator, grid: int = 720) -> Fraction:
    return Fraction(int(rng.integers(0, grid + 1)), grid)


def random_pre_point(
    system: SubshiftSystem,
    rng: np.random.Generator,
    radius: int,
    word: np.ndarray,
    height_grid: int = 720,
    heights: Optional[tuple[Fraction, Fraction]] = None,
) -> ProductPrePoint:
    """Random pair over generator-backed bases with grid-rational heights."""
    lo, hi = radius + 1, len(word) - radius - 2
    i = int(rng.integers(lo, hi))
    j = int(rng.integers(lo, hi))
    if heights is None:
        s, t = _height_from_grid(rng, height_grid), _height_from_grid(rng, height_grid)
    else:
        s, t = heights
    return ProductPrePoint(
        CylPoint(point_at(system, i, radius, word=word), s),
        CylPoint(point_at(system, j, radius, word=word), t),
    )


def sample_core_point(
    system: SubshiftSystem,
    params: SeparationParams,
    rng: np.random.Generator,
    radius: int,
    word: np.ndarray,
    condition: Optional[Callable[[Fraction, Fraction], bool]] = None,
    height_sampler: Optional[Callable[[np.random.Generator], tuple[Fraction, Fraction]]] = None,
    max_tries: int = 100_000,
) -> ProductPrePoint:
    """Rejection-sample a core pre-point, optionally constrained on heights."""
    for _ in range(max_tries):
        hs = height_sampler(rng) if height_sampler is not None else None
        z = random_pre_point(system, rng, radius, word, heights=hs)
        s, t = z.first.height, z.second.height
        if condition is not None and not condition(s, t):
            continue
        if classify(z, params).core:
            return z
    raise ParameterError("core sampler exhausted its tries; condition too tight")


def interior_heights(params: SeparationParams, grid: int = 720):
    """Height sampler for the descend/center case (s <= t, seam cleared)."""

    def draw(rng: np.random.Generator) -> tuple[Fraction, Fraction]:
        while True:
            s, t = _height_from_grid(rng, grid), _height_from_grid(rng, grid)
            if s > t:
                s, t = t, s
            if 2 * params.delta <= s or t <= 1 - params.delta:
                return s, t

    return draw


def near_seam_heights(params: SeparationParams, grid: int = 720):
    """Height sampler for the retract case (s < 2*delta, t > 1 - delta)."""
    delta = params.delta

    def draw(rng: np.random.Generator) -> tuple[Fraction, Fraction]:
        while True:
            s = Fraction(int(rng.integers(0, grid + 1)), grid)
            t = Fraction(int(rng.integers(0, grid + 1)), grid)
            if s < 2 * delta and t > 1 - delta and s <= t:
                return s, t

    return draw


def make_diagonal_preimage(
    kind: str, point: CantorPoint, height: Fraction
) -> ProductPrePoint:
    """Pre-quotient pairs whose quotient image lies on the diagonal.

    kind 'plain': ((p,s),(p,s)); 'seam_fwd': ((f(q),0),(q,1)); 'seam_bwd':
    ((p,1),(f(p),0)).
    """
    if kind == "plain":
        return ProductPrePoint(CylPoint(point, height), CylPoint(point, height))
    if kind == "seam_fwd":
        return ProductPrePoint(
            CylPoint(step(point), Fraction(0)), CylPoint(point, Fraction(1))
        )
    if kind == "seam_bwd":
        return ProductPrePoint(
            CylPoint(point, Fraction(1)), CylPoint(step(point), Fraction(0))
        )
    raise ParameterError(f"unknown diagonal pre-image kind {kind!r}")
