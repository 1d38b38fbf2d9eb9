"""Command line front end: one subcommand per experiment.

Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 bad configuration,
3 resource budget exceeded (partial report still written).
"""
from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__, kernels
from .arclike import (
    build_eps_map,
    diagonal_obstruction,
    fiber_audit,
    random_swapped_chain,
    sample_curve,
    separation_demo,
)
from .coverage import (
    orbit_coverage,
    orbit_start,
    product_orbit_coverage,
    product_seed_pair,
    search_product_seed,
)
from .errors import DiagsepError, ParameterError, ResourceBudgetError, check_budget
from .productnet import build_product_net, cw_connect_probe, k_components, sandwich_check
from .quotient import TorusPoint, build_net
from .reporting import Report
from .separation import (
    SeparationParams,
    audit_route,
    bridge_chains_exactly,
    interior_heights,
    near_seam_heights,
    orbit_bridge,
    route_to_anchor,
    sample_core_point,
)
from .symbolic import (
    CHACON,
    FULLSHIFT2,
    ODOMETER2,
    SubshiftSystem,
    chacon,
    chacon_prefix,
    fullshift2,
    language,
    odometer2,
    point_from_code,
    random_word,
    write_language_file,
)

_SYSTEMS = {CHACON: chacon, ODOMETER2: odometer2, FULLSHIFT2: fullshift2}


@dataclass
class RunConfig:
    system: str = CHACON
    depth: int = 6
    levels: int = 16
    delta: Fraction = Fraction(2, 25)
    theta: Optional[Fraction] = None
    eta: Fraction = Fraction(1, 20)
    eps: Fraction = Fraction(1, 10)
    orbit_len: Optional[int] = None
    word_len: Optional[int] = None
    seed: int = 0
    out: Path = Path("runs")
    workers: int = 0

    def __post_init__(self) -> None:
        if self.system not in _SYSTEMS:
            raise ParameterError(f"unknown system {self.system!r}")
        if self.depth < 1 or self.levels < 2:
            raise ParameterError("depth must be >= 1 and levels >= 2")
        for name in ("delta", "eta", "eps"):
            value = getattr(self, name)
            if value <= 0:
                raise ParameterError(f"{name} must be positive")
        if self.delta >= Fraction(1, 10):
            raise ParameterError("delta must be below 1/10")
        if self.orbit_len is not None and self.orbit_len < 1:
            raise ParameterError("orbit length must be >= 1")
        if self.word_len is not None and self.word_len < 1:
            raise ParameterError("word length must be >= 1")
        if self.word_len is not None and self.word_len > 26:
            # the scan tables index the raw 2^L code space
            raise ParameterError("word length beyond the enumeration budget")
        if self.workers == 0:
            self.workers = os.cpu_count() or 1
        if self.workers < 1:
            raise ParameterError("workers must be >= 1")

    @property
    def theta_value(self) -> Fraction:
        if self.theta is not None:
            return self.theta
        return 2 * (Fraction(1, 1 << (self.depth - 1)) + Fraction(1, self.levels))

    def make_system(self) -> SubshiftSystem:
        return _SYSTEMS[self.system]()

    def echo(self, command_defaults: dict) -> list[tuple[str, object]]:
        pairs: list[tuple[str, object]] = [
            ("version", __version__),
            ("kernel-lane", kernels.ACTIVE_LANE),
            ("system", self.system),
            ("depth", self.depth),
            ("levels", self.levels),
            ("delta", self.delta),
            ("theta", self.theta_value),
            ("eta", self.eta),
            ("eps", self.eps),
            ("seed", self.seed),
            ("workers", self.workers),
        ]
        pairs.extend(sorted(command_defaults.items()))
        return pairs


def _coverage_section(report: Report, name: str, cov) -> None:
    report.add_section(
        name,
        [
            ("word-length", cov.depth),
            ("total", cov.total),
            ("visited", cov.visited),
            ("fraction", cov.fraction),
            ("steps-used", cov.steps_used),
        ],
    )
    report.add_csv(
        name,
        ["step", "visited", "fraction"],
        [(s, i + 1, f) for i, (s, f) in enumerate(cov.plateau)],
    )


def run_orbit_stats(cfg: RunConfig) -> Report:
    """Single-orbit coverage, forward and backward."""
    word_len = cfg.word_len or 8
    steps = cfg.orbit_len or 10 ** 6
    system = cfg.make_system()
    check_budget(2 ** word_len, "scan code space")
    report = Report("orbit-stats", cfg.echo({"orbit-len": steps, "word-len": word_len}))
    t0 = time.perf_counter()
    lang_path = Path(cfg.out) / f"{system.kind}_L{word_len}.lang"
    lang_path.parent.mkdir(parents=True, exist_ok=True)
    count = write_language_file(system, word_len, lang_path)
    report.add_section("language", [("words", count), ("file", lang_path.name)])
    for direction in ("fwd", "bwd"):
        start = orbit_start(system, direction, steps, word_len, seed=cfg.seed)
        cov = orbit_coverage(start, steps, word_len, direction, workers=cfg.workers)
        _coverage_section(report, f"coverage-{direction}", cov)
        report.add_verdict(f"coverage-{direction}-full", cov.fraction == 1)
    report.add_timing("total", time.perf_counter() - t0)
    return report


def run_mixing_test(cfg: RunConfig) -> Report:
    """Product-orbit coverage after a seed (lag) search."""
    word_len = cfg.word_len or 4
    steps = cfg.orbit_len or 10 ** 7
    system = cfg.make_system()
    report = Report("mixing-test", cfg.echo({"orbit-len": steps, "word-len": word_len}))
    report.add_section(
        "note",
        [("coverage-proxy", "pair coverage of the simultaneous orbit at finite word length")],
    )
    t0 = time.perf_counter()
    search = search_product_seed(
        system, word_len, probe_steps=min(50_000, steps), seed=cfg.seed, workers=cfg.workers
    )
    report.add_section(
        "seed-search",
        [("lag", search.lag), ("probe-fraction", search.probe.fraction),
         ("probe-steps-used", search.probe.steps_used)],
    )
    seed_a, seed_b = product_seed_pair(system, search.lag, steps, word_len, seed=cfg.seed)
    cov = product_orbit_coverage(seed_a, seed_b, steps, word_len, workers=cfg.workers)
    _coverage_section(report, "pair-coverage", cov)
    if system.kind == ODOMETER2:
        bound = Fraction(2, 1 << word_len)
        report.add_verdict("pair-coverage-control-bounded", cov.fraction <= bound)
    else:
        report.add_verdict("pair-coverage-full", cov.fraction == 1)
    report.add_timing("total", time.perf_counter() - t0)
    return report


def run_separation(cfg: RunConfig) -> Report:
    """Core connectivity and the two-sided diagonal bracket on the net."""
    system = cfg.make_system()
    report = Report("separation", cfg.echo({}))
    t0 = time.perf_counter()
    net = build_net(system, cfg.depth, cfg.levels)
    report.add_section(
        "net",
        [("words", len(net.words)), ("nodes", net.n_nodes), ("edges", net.n_edges),
         ("mesh", net.mesh), ("connected", net.is_connected())],
    )
    t1 = time.perf_counter()
    params = SeparationParams.for_net(net, cfg.delta)
    report.add_section("derived", [("eps-hat", params.eps_hat)])
    pnet = build_product_net(net, cfg.theta_value, params)
    excluded = int((pnet.labels != 0).sum())
    report.add_section(
        "product-net",
        [("nodes", pnet.n_nodes), ("edges", pnet.edge_total()),
         ("tube-nodes", excluded), ("core-nodes", pnet.n_nodes - excluded)],
    )
    t2 = time.perf_counter()
    comps = k_components(pnet)
    report.add_section(
        "core-components",
        [("count", comps.count), ("sizes-top", comps.sizes[:8]),
         ("edges", comps.edge_count)],
    )
    report.add_csv("components", ["label", "size", "representative"],
                   list(zip(range(comps.count), comps.sizes, comps.representatives)))
    t3 = time.perf_counter()
    sandwich = sandwich_check(pnet, params)
    report.add_section(
        "sandwich",
        [("cells", sandwich.cells), ("diag-preimages", sandwich.diag_preimages),
         ("tube-cells", sandwich.tube_cells),
         ("label-violations", len(sandwich.label_violations)),
         ("radius-violations", len(sandwich.radius_violations))],
    )
    report.add_verdict("core-single-component", comps.count == 1)
    report.add_verdict("diagonal-absorbed", not sandwich.label_violations)
    report.add_verdict("tube-within-radius", not sandwich.radius_violations)
    report.add_timing("net-build", t1 - t0)
    report.add_timing("product-build", t2 - t1)
    report.add_timing("components", t3 - t2)
    report.add_timing("total", time.perf_counter() - t0)
    return report


def run_path_audit(cfg: RunConfig, routes_per_case: int = 10_000, bridge_len: int = 50) -> Report:
    """Grid audits of the connecting segments, the mirrored branch, the seam
    crossings, the bridge, and adversarial near-threshold heights."""
    system = cfg.make_system()
    if system.kind == ODOMETER2:
        raise ParameterError("path audits run on the two-sided systems")
    params = SeparationParams(cfg.delta)
    radius = max(cfg.depth, 6)
    word = (
        chacon_prefix(200_000)
        if system.kind == CHACON
        else random_word(200_000, cfg.seed)
    )
    rng = np.random.default_rng(cfg.seed)
    report = Report("path-audit", cfg.echo({"routes-per-case": routes_per_case,
                                            "bridge-crossings": bridge_len}))
    t0 = time.perf_counter()

    def audit_batch(name: str, height_sampler, count: int, samples: int = 101) -> None:
        violations = 0
        boundary = 0
        total = 0
        recursion_ok = 0
        for _ in range(count):
            z = sample_core_point(
                system, params, rng, radius, word, height_sampler=height_sampler
            )
            segs = route_to_anchor(z, params)
            recursion_ok += 1  # construction re-checks the retract target
            audit = audit_route(segs, params, samples_per_segment=samples)
            violations += len(audit.violations)
            boundary += audit.boundary_hits
            total += audit.total_samples
        report.add_section(
            f"audit-{name}",
            [("routes", count), ("samples", total), ("tube-hits", violations),
             ("boundary-flags", boundary), ("recursion-checks", recursion_ok)],
        )
        report.add_verdict(f"{name}-clean", violations == 0)

    audit_batch("generic", None, routes_per_case)
    audit_batch("interior", interior_heights(params), routes_per_case // 2)
    audit_batch("near-seam", near_seam_heights(params), routes_per_case // 2)
    audit_batch("adversarial", _boundary_heights(params, cfg.depth), routes_per_case // 4)

    seed_a, seed_b = _bridge_seed(system, bridge_len, cfg.seed)
    bridge = orbit_bridge(seed_a, seed_b, bridge_len, params)
    chained = bridge_chains_exactly(bridge)
    audit = audit_route(bridge.segments, params, samples_per_segment=101)
    report.add_section(
        "bridge",
        [("crossings", bridge.count), ("segments", len(bridge.segments)),
         ("samples", audit.total_samples), ("tube-hits", len(audit.violations)),
         ("chained", chained)],
    )
    report.add_verdict("bridge-clean", audit.clean and chained)
    report.add_timing("total", time.perf_counter() - t0)
    return report


def _boundary_heights(params: SeparationParams, depth: int):
    """Heights a hair away from the tube thresholds, on both sides."""
    delta = params.delta
    eps = Fraction(1, 1 << depth)
    anchors = [delta, 2 * delta, 1 - delta, Fraction(1, 2)]
    offsets = [-2 * eps, -eps, 0, eps, 2 * eps]
    grid = sorted(
        {min(max(a + o, Fraction(0)), Fraction(1)) for a in anchors for o in offsets}
    )

    def draw(rng: np.random.Generator):
        s = grid[int(rng.integers(0, len(grid)))]
        t = grid[int(rng.integers(0, len(grid)))]
        return s, t

    return draw


def _bridge_seed(system: SubshiftSystem, crossings: int, seed: int):
    radius = 8
    need = crossings + 4 * radius + 8
    word = chacon_prefix(need) if system.kind == CHACON else random_word(need, seed)
    from .symbolic import point_at

    return (
        point_at(system, radius + 1, radius, word=word),
        point_at(system, radius + 2, radius, word=word),
    )


def run_arclike(cfg: RunConfig, chains: int = 1000, deep_tail: int = 16, demo_tail: int = 4) -> Report:
    """Fiber audit, obstruction witnesses, discrete separation demo, and the
    mapping-torus contrast probe."""
    mesh = cfg.eta / 4
    n = int(1 / float(mesh)) if mesh <= Fraction(1, 4) else 4
    report = Report("arclike", cfg.echo({"chains": chains, "mesh": mesh,
                                         "deep-tail": deep_tail, "demo-tail": demo_tail}))
    t0 = time.perf_counter()
    deep = sample_curve(n, deep_tail)
    emap = build_eps_map(cfg.eps, deep)
    report.add_section(
        "eps-map",
        [("samples", deep.n_total), ("cut-x", emap.cut_x),
         ("junction-value", emap.junction_value),
         ("fiber-bound", emap.fiber_bound), ("edge-value-gap", emap.edge_value_gap())],
    )
    fiber = fiber_audit(emap)
    report.add_section(
        "fiber-audit",
        [("pairs", fiber.pair_count), ("max-diameter", fiber.max_diameter),
         ("value-tol", fiber.value_tol)],
    )
    report.add_verdict("fibers-within-eps", fiber.within_eps)
    report.add_verdict("fiber-pairs-enough", fiber.pair_count >= 10 ** 5)

    t1 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    witnesses = []
    bounded = 0
    for _ in range(chains):
        chain = random_swapped_chain(deep, emap, rng)
        witness = diagonal_obstruction(chain, emap)
        witnesses.append(witness)
        bounded += witness.within_bound
    report.add_section(
        "obstruction",
        [("chains", chains), ("witnesses-bounded", bounded),
         ("max-separation", max(w.separation for w in witnesses)),
         ("max-mesh", max(float(w.bound - cfg.eps) / 2 for w in witnesses))],
    )
    report.add_verdict("witnesses-within-bound", bounded == chains)
    report.add_csv(
        "witnesses",
        ["index", "value_gap", "separation", "bound"],
        [(w.index, w.value_gap, w.separation, w.bound) for w in witnesses],
    )

    t2 = time.perf_counter()
    demo = separation_demo(cfg.eta, mesh, tail_depth=demo_tail, eps=cfg.eps, seed=cfg.seed)
    report.add_section(
        "separation-demo",
        [("components", demo.components.count), ("kept", demo.kept_count),
         ("removed", demo.removed_count),
         ("pairs-separated", sum(v.separated for v in demo.pair_verdicts)),
         ("pairs-total", len(demo.pair_verdicts)),
         ("same-sign-pairs", demo.same_sign_pairs),
         ("same-sign-connected", demo.same_sign_connected)],
    )
    report.add_verdict("square-minus-tube-splits", demo.components.count >= 2 and demo.all_separated)

    t3 = time.perf_counter()
    system = cfg.make_system()
    if system.kind == ODOMETER2:
        report.add_verdict("torus-contrast-connected", False)
    else:
        net = build_net(system, cfg.depth, cfg.levels)
        params = SeparationParams.for_net(net, cfg.delta)
        pnet = build_product_net(net, cfg.theta_value, params)
        probe_ok, probe_count = _contrast_probes(pnet, cfg.eta)
        report.add_section(
            "torus-contrast",
            [("probes", probe_count), ("connected", probe_ok)],
        )
        report.add_verdict("torus-contrast-connected", probe_ok == probe_count and probe_count > 0)
    report.add_csv(
        "curve",
        ["x", "y", "value"],
        [(deep.fx[i], deep.fy[i], emap.values[i]) for i in range(deep.n_total)],
    )
    report.add_timing("fiber", t1 - t0)
    report.add_timing("obstruction", t2 - t1)
    report.add_timing("demo", t3 - t2)
    report.add_timing("total", time.perf_counter() - t0)
    return report


def _contrast_probes(pnet, eta: Fraction, count: int = 3) -> tuple[int, int]:
    """Probe swapped far word pairs on the torus square; count successes."""
    net = pnet.base
    words = net.words
    ok = 0
    done = 0
    for i in range(len(words)):
        if done >= count:
            break
        for j in range(i + 1, len(words)):
            if net.word_exps[i, j] == 0:  # windows differ at the center
                a = TorusPoint(point_from_code(net.system, words[i]), Fraction(0))
                b = TorusPoint(point_from_code(net.system, words[j]), Fraction(0))
                try:
                    result = cw_connect_probe(pnet, (a, b), (b, a), eta)
                except ParameterError:
                    continue
                done += 1
                ok += result.connected
                break
    return ok, done


_COMMANDS = {
    "orbit-stats": run_orbit_stats,
    "mixing-test": run_mixing_test,
    "separation": run_separation,
    "path-audit": run_path_audit,
    "arclike": run_arclike,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diagsep",
        description="Finite-resolution diagonal separation workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__)
        p.add_argument("--system", default=CHACON, choices=sorted(_SYSTEMS))
        p.add_argument("--depth", type=int, default=6)
        p.add_argument("--levels", type=int, default=16)
        p.add_argument("--delta", type=Fraction, default=Fraction(2, 25))
        p.add_argument("--theta", type=Fraction, default=None)
        p.add_argument("--eta", type=Fraction, default=Fraction(1, 20))
        p.add_argument("--eps", type=Fraction, default=Fraction(1, 10))
        p.add_argument("--orbit-len", type=int, default=None)
        p.add_argument("--word-len", type=int, default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", type=Path, default=Path("runs"))
        p.add_argument("--workers", type=int, default=0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        cfg = RunConfig(
            system=args.system,
            depth=args.depth,
            levels=args.levels,
            delta=args.delta,
            theta=args.theta,
            eta=args.eta,
            eps=args.eps,
            orbit_len=args.orbit_len,
            word_len=args.word_len,
            seed=args.seed,
            out=args.out,
            workers=args.workers,
        )
        report = _COMMANDS[args.command](cfg)
    except ParameterError as exc:
        print(f"diagsep: parameter error: {exc}", file=sys.stderr)
        return 2
    except ResourceBudgetError as exc:
        partial = Report(args.command, [("error", str(exc))])
        partial.add_section("error", [("resource-budget", str(exc))])
        partial.write(args.out)
        print(f"diagsep: resource budget exceeded: {exc}", file=sys.stderr)
        return 3
    except DiagsepError as exc:
        print(f"diagsep: error: {exc}", file=sys.stderr)
        return 2
    path = report.write(cfg.out)
    for name, ok in report.verdicts:
        print(f"{name}: {'PASS' if ok else 'FAIL'}")
    print(f"report: {path}")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
