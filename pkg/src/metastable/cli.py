"""Command-line pipeline: classify, rate, sweep, verify, simulate, tabulate.

Every command loads a potential (built-in name or JSON file), runs the
corresponding library modules, and writes data-only artifacts (JSON/CSV) plus
a ``manifest.json`` into the output directory.  Reruns of the same manifest
produce byte-identical outputs.

Exit codes: 0 success, 1 usage or specification error, 2 numerical
non-convergence, 3 invariant violation (capacity ordering, excessive
censoring).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .capacity import capacity_1d_exact, default_box, dirichlet_upper_bound, fiber_lower_bound
from .crossover import CROSSOVER_FUNCTIONS, evaluate
from .landscape import (
    SaddleClass,
    SaddleTag,
    StationaryPoint,
    Verdict,
    classification_report,
    classify,
    codim2_form,
    find_stationary_points,
)
from .potentials import PotentialModel, load_potential
from .rates import (
    SWEEP_FIELDS,
    Codim2,
    MinimumSpec,
    PitchforkLongitudinal,
    PitchforkTransverse,
    Quadratic,
    RateResult,
    SaddleSpec,
    ek_classical,
    ek_codim2,
    pitchfork_longitudinal_time,
    pitchfork_transverse_time,
    sweep_doublezero,
    sweep_longitudinal,
    sweep_sombrero,
    sweep_transverse,
)
from .sampling import (
    Ball,
    SimulationConfig,
    default_dt,
    default_radius,
    estimate_json,
    simulate_first_hitting,
    validate,
    write_times_csv,
)

__all__ = ["main", "run_manifest"]


class UsageError(Exception):
    """Malformed invocation or specification: exit code 1."""


class InvariantViolation(Exception):
    """A module invariant failed on real data: exit code 3."""


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1 (argparse defaults to 2, which this tool reserves
    # for numerical non-convergence)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# small parsers


def _parse_params(text: str | None) -> dict:
    out: dict = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise UsageError(f"--params entries must look like key=value, got {item!r}")
        key, raw = item.split("=", 1)
        try:
            value: object = int(raw)
        except ValueError:
            try:
                value = float(raw)
            except ValueError:
                value = raw
        out[key.strip()] = value
    return out


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"could not parse float list {text!r}: {exc}") from None


def _parse_vector(text: str) -> np.ndarray:
    vals = _parse_floats(text)
    if not vals:
        raise UsageError("empty vector")
    return np.array(vals)


def _parse_seeds(text: str | None) -> list[np.ndarray]:
    if not text:
        return []
    return [_parse_vector(part) for part in text.split(";") if part.strip()]


def _parse_grid(text: str) -> list[float]:
    """Either ``start:stop:count`` (inclusive linspace) or a comma list."""
    if ":" in text:
        pieces = text.split(":")
        if len(pieces) != 3:
            raise UsageError(f"grid must be start:stop:count, got {text!r}")
        try:
            start, stop, count = float(pieces[0]), float(pieces[1]), int(pieces[2])
        except ValueError as exc:
            raise UsageError(f"could not parse grid {text!r}: {exc}") from None
        if count < 1:
            raise UsageError("grid count must be at least 1")
        return [float(v) for v in np.linspace(start, stop, count)]
    return _parse_floats(text)


# ---------------------------------------------------------------------------
# artifacts


def _write_json(path: Path, doc) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])


def _write_manifest(out: Path, ns: argparse.Namespace, argv: list[str], outputs: list[str]) -> None:
    doc = {
        "command": ns.command,
        "potential": getattr(ns, "potential", None),
        "params": getattr(ns, "params", None),
        "eps": getattr(ns, "eps", None),
        "seed": getattr(ns, "seed", None),
        "outputs": sorted(outputs),
        "version": __version__,
        "argv": argv,
    }
    _write_json(out / "manifest.json", doc)


def run_manifest(path) -> int:
    """Re-execute the command recorded in a manifest (byte-identical outputs)."""
    doc = json.loads(Path(path).read_text())
    return main(list(doc["argv"]))


def _out_dir(ns) -> Path:
    out = Path(ns.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_model(ns) -> PotentialModel:
    if not getattr(ns, "potential", None):
        raise UsageError("--potential is required")
    try:
        return load_potential(ns.potential, _parse_params(ns.params))
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"could not load potential: {exc}") from exc


def _converge(model: PotentialModel, seed: np.ndarray, what: str) -> StationaryPoint:
    pts = find_stationary_points(model, [seed])
    if not pts:
        raise RuntimeError(f"{what} seed {seed.tolist()} did not converge to a stationary point")
    return pts[0]


# ---------------------------------------------------------------------------
# classification -> rate-formula specs


def _saddle_spec(
    model: PotentialModel, saddle: StationaryPoint, fail: type[Exception]
) -> tuple[SaddleSpec, SaddleClass]:
    """Map a classified saddle onto the regime the rate formulas expect."""
    sc = classify(model, saddle)
    if sc.verdict is not Verdict.SADDLE:
        raise fail(
            f"seed classified as {sc.tag.value}/{sc.verdict.value}; "
            "closed-form rates need a saddle"
        )
    evs = saddle.eigenvalues
    zeros = set(saddle.zero_indices)
    positive = tuple(float(v) for i, v in enumerate(evs) if i not in zeros and v > 0)

    if sc.tag is SaddleTag.NONDEGENERATE_SADDLE:
        regime, unstable = Quadratic(), -float(evs[0])
    elif sc.tag is SaddleTag.CODIM1:
        soft = float(evs[sc.detail.soft_index])
        quartic = float(sc.detail.C4)
        if quartic > 0:
            regime, unstable = PitchforkTransverse(lambda2=soft, quartic=quartic), -float(evs[0])
        else:
            regime, unstable = PitchforkLongitudinal(lambda1=soft, quartic=-quartic), None
    elif sc.tag is SaddleTag.CODIM2:
        nf2 = codim2_form(model, saddle)
        regime, unstable = Codim2(angular=nf2.k_phi), -float(evs[0])
    else:
        raise fail(f"no closed-form rate is wired up for tag {sc.tag.value}")
    spec = SaddleSpec(
        value=saddle.value,
        regime=regime,
        stable_eigenvalues=positive,
        unstable_eigenvalue=unstable,
    )
    return spec, sc


def _rate_specs(
    model: PotentialModel, minimum: StationaryPoint, saddle: StationaryPoint
) -> tuple[MinimumSpec, SaddleSpec, SaddleClass]:
    if any(v <= 0 for v in minimum.eigenvalues) or minimum.zero_indices:
        raise UsageError("the minimum seed converged to a non-minimum stationary point")
    min_spec = MinimumSpec(
        value=minimum.value, eigenvalues=tuple(float(v) for v in minimum.eigenvalues)
    )
    spec, sc = _saddle_spec(model, saddle, UsageError)
    return min_spec, spec, sc


_RATE_OPS = {
    Quadratic: ek_classical,
    PitchforkTransverse: pitchfork_transverse_time,
    PitchforkLongitudinal: pitchfork_longitudinal_time,
    Codim2: ek_codim2,
}


def _closed_rate(min_spec: MinimumSpec, spec: SaddleSpec, eps: float) -> RateResult:
    return _RATE_OPS[type(spec.regime)](min_spec, spec, eps)


def _rate_row(result: RateResult) -> dict:
    return {
        "regime_tag": result.regime_tag,
        "eps": result.eps,
        "barrier": result.barrier,
        "saddle_value": result.saddle_value,
        "prefactor": result.prefactor,
        "expected_time": result.expected_time,
        "capacity_prefactor": result.capacity_prefactor,
        "capacity": result.capacity,
        "dimension": result.dimension,
        "error_order": result.error_order,
        "notes": list(result.notes),
    }


# ---------------------------------------------------------------------------
# subcommands


def _cmd_classify(ns, argv) -> int:
    model = _load_model(ns)
    seeds = _parse_seeds(ns.seeds)
    if not seeds:
        raise UsageError("--seeds must list at least one point")
    out = _out_dir(ns)
    points = find_stationary_points(model, seeds, tol=ns.tol)
    if not points:
        raise RuntimeError("no seed converged to a stationary point")
    rows = [classification_report(p, classify(model, p)) for p in points]
    _write_json(out / "classify.json", rows)
    _write_manifest(out, ns, argv, ["classify.json"])
    return 0


def _cmd_rate(ns, argv) -> int:
    model = _load_model(ns)
    if not ns.eps:
        raise UsageError("--eps is required")
    out = _out_dir(ns)
    minimum = _converge(model, _parse_vector(ns.minimum_seed), "minimum")
    saddle = _converge(model, _parse_vector(ns.saddle_seed), "saddle")
    min_spec, spec, sc = _rate_specs(model, minimum, saddle)
    doc = {
        "classification": {"tag": sc.tag.value, "verdict": sc.verdict.value},
        "results": [_rate_row(_closed_rate(min_spec, spec, e)) for e in _parse_floats(ns.eps)],
    }
    _write_json(out / "rate.json", doc)
    _write_manifest(out, ns, argv, ["rate.json"])
    return 0


_SWEEPS = {
    "transverse": (sweep_transverse, 0.5),
    "longitudinal": (sweep_longitudinal, 0.5),
    "doublezero": (sweep_doublezero, None),
    "sombrero": (sweep_sombrero, 0.125),
}


def _cmd_sweep(ns, argv) -> int:
    if not ns.eps:
        raise UsageError("--eps is required")
    out = _out_dir(ns)
    values = _parse_grid(ns.grid)
    rows: list[tuple] = []
    fn, default_quartic = _SWEEPS[ns.scenario]
    for eps in _parse_floats(ns.eps):
        kwargs: dict = {}
        if ns.scenario in ("transverse", "longitudinal", "sombrero"):
            kwargs["quartic"] = ns.quartic if ns.quartic is not None else default_quartic
        if ns.scenario == "doublezero":
            kwargs["angular"] = ns.angular
        if ns.scenario == "sombrero":
            kwargs["gate_pairs"] = ns.gate_pairs
        rows.extend(fn(eps, values, **kwargs))
    outputs = []
    if ns.format == "csv":
        _write_csv(out / "sweep.csv", SWEEP_FIELDS, ([row[f] for f in SWEEP_FIELDS] for row in rows))
        outputs.append("sweep.csv")
    else:
        _write_json(out / "sweep.json", rows)
        outputs.append("sweep.json")
    _write_manifest(out, ns, argv, outputs)
    return 0


def _cmd_verify(ns, argv) -> int:
    model = _load_model(ns)
    if model.dim > 3:
        raise UsageError("capacity quadrature supports dimensions 1 to 3")
    if not ns.eps:
        raise UsageError("--eps is required")
    out = _out_dir(ns)
    saddle = _converge(model, _parse_vector(ns.saddle_seed), "saddle")
    spec, sc = _saddle_spec(model, saddle, RuntimeError)
    rows = []
    violation = None
    for eps in _parse_floats(ns.eps):
        box = default_box(model, saddle, eps, scale=ns.box_scale)
        upper = dirichlet_upper_bound(model, saddle, box, grid=ns.grid_nodes)
        lower = fiber_lower_bound(model, saddle, box, grid=ns.grid_nodes)
        closed = _closed_rate(_UNIT_MINIMUM, spec, eps).capacity
        row = {
            "eps": eps,
            "closed_form": closed,
            "upper": upper.value,
            "lower": lower.value,
            "ratios": {
                "upper_over_closed": upper.value / closed,
                "lower_over_closed": lower.value / closed,
                "lower_over_upper": lower.value / upper.value,
            },
            "grid": list(upper.grid_shape),
            "box": box.as_dict(),
        }
        if model.dim == 1:
            exact = capacity_1d_exact(
                lambda t: model.value(np.array([t])), -box.delta1, box.delta1, eps
            )
            row["exact_1d"] = exact.value
        rows.append(row)
        if lower.value > upper.value * (1 + 1e-12):
            violation = f"fiber lower bound {lower.value} exceeds Dirichlet upper bound {upper.value} at eps={eps}"
    doc = {"classification": {"tag": sc.tag.value, "verdict": sc.verdict.value}, "results": rows}
    _write_json(out / "verify.json", doc)
    _write_manifest(out, ns, argv, ["verify.json"])
    if violation:
        raise InvariantViolation(violation)
    return 0


# capacities depend only on the gate; a unit placeholder minimum feeds the
# closed-form evaluator when the starting well is irrelevant
_UNIT_MINIMUM = MinimumSpec(value=0.0, hessian_det=1.0)


def _cmd_simulate(ns, argv) -> int:
    model = _load_model(ns)
    if not ns.eps:
        raise UsageError("--eps is required")
    eps_list = _parse_floats(ns.eps)
    if len(eps_list) != 1:
        raise UsageError("simulate takes exactly one eps")
    eps = eps_list[0]
    out = _out_dir(ns)
    start = _parse_vector(ns.start)
    center = _parse_vector(ns.target)
    radius = ns.radius if ns.radius is not None else default_radius(eps)
    dt = ns.dt if ns.dt is not None else default_dt(model, eps, [start, center])
    try:
        config = SimulationConfig(
            eps=eps,
            dt=dt,
            max_time=ns.max_time,
            replicas=ns.replicas,
            seed=ns.seed,
            start=start,
            target=Ball(center, radius),
            keep_times=bool(ns.times_csv),
        )
        estimate = simulate_first_hitting(model, config)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    doc = {"estimate": estimate_json(estimate), "dt": dt, "radius": radius}
    outputs = ["simulate.json"]
    if ns.times_csv:
        write_times_csv(estimate, out / "times.csv")
        outputs.append("times.csv")

    prediction = None
    if ns.saddle_seed:
        minimum = _converge(model, start, "minimum (from start)")
        saddle = _converge(model, _parse_vector(ns.saddle_seed), "saddle")
        min_spec, spec, _ = _rate_specs(model, minimum, saddle)
        prediction = _closed_rate(min_spec, spec, eps)
        doc["prediction"] = _rate_row(prediction)

    if estimate.censored_fraction > 0.10:
        doc["error"] = (
            f"censored fraction {estimate.censored_fraction:.1%} exceeds 10%; "
            "mean over hits is biased -- extend --max-time"
        )
        _write_json(out / "simulate.json", doc)
        _write_manifest(out, ns, argv, outputs)
        raise InvariantViolation(doc["error"])

    if prediction is not None:
        report = validate(estimate, prediction)
        doc["validation"] = {
            "ratio": report.ratio,
            "z_score": report.z_score,
            "verdict": report.verdict,
            "tolerance": report.tolerance,
        }
    _write_json(out / "simulate.json", doc)
    _write_manifest(out, ns, argv, outputs)
    return 0


def _cmd_tabulate(ns, argv) -> int:
    out = _out_dir(ns)
    alphas = _parse_grid(ns.alphas)
    rows = []
    for name in sorted(CROSSOVER_FUNCTIONS):
        for alpha in alphas:
            ev = evaluate(name, alpha, route=ns.route)
            rows.append((name, ev.alpha, ev.value, ev.route))
    outputs = []
    if ns.format == "json":
        _write_json(
            out / "special.json",
            [dict(zip(("function", "alpha", "value", "route"), r)) for r in rows],
        )
        outputs.append("special.json")
    else:
        _write_csv(out / "special.csv", ("function", "alpha", "value", "route"), rows)
        outputs.append("special.csv")
    _write_manifest(out, ns, argv, outputs)
    return 0


# ---------------------------------------------------------------------------
# wiring


def _build_parser() -> _Parser:
    parser = _Parser(prog="metastable", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p: _Parser, potential=True) -> None:
        if potential:
            p.add_argument("--potential", help="built-in name (chain|rotated2|double_well) or JSON file")
            p.add_argument("--params", help="comma-separated key=value family parameters")
        p.add_argument("--eps", help="comma-separated noise intensities")
        p.add_argument("--out", default=".", help="output directory (default: current)")
        p.add_argument("--seed", type=int, default=0, help="64-bit random seed")
        p.add_argument("--format", choices=("json", "csv"), default=None)

    p = sub.add_parser("classify", help="locate and classify stationary points")
    common(p)
    p.add_argument("--seeds", help="semicolon-separated start points, e.g. '0,0;1,1'")
    p.add_argument("--tol", type=float, default=1e-9, help="gradient-norm tolerance")

    p = sub.add_parser("rate", help="closed-form expected transition times")
    common(p)
    p.add_argument("--minimum-seed", required=True, help="seed for the starting minimum")
    p.add_argument("--saddle-seed", required=True, help="seed for the gate saddle")

    p = sub.add_parser("sweep", help="prefactor curves along a control parameter")
    common(p, potential=False)
    p.add_argument("--scenario", required=True, choices=sorted(_SWEEPS))
    p.add_argument("--grid", required=True, help="control values: start:stop:count or comma list")
    p.add_argument("--quartic", type=float, default=None)
    p.add_argument("--angular", type=float, default=0.5)
    p.add_argument("--gate-pairs", type=int, default=3)

    p = sub.add_parser("verify", help="quadrature capacity bounds vs closed form")
    common(p)
    p.add_argument("--saddle-seed", required=True)
    p.add_argument("--grid-nodes", type=int, default=65, help="initial Simpson nodes per axis")
    p.add_argument("--box-scale", type=float, default=1.0, help="multiplier on default box widths")

    p = sub.add_parser("simulate", help="Monte Carlo first-hitting times")
    common(p)
    p.add_argument("--start", required=True)
    p.add_argument("--target", required=True, help="target ball center")
    p.add_argument("--radius", type=float, default=None, help="target radius (default 3 sqrt(eps))")
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--max-time", type=float, required=True)
    p.add_argument("--replicas", type=int, required=True)
    p.add_argument("--times-csv", action="store_true", help="also write per-replica times.csv")
    p.add_argument("--saddle-seed", default=None, help="validate against the closed-form rate")

    p = sub.add_parser("tabulate-special", help="crossover-function table")
    common(p, potential=False)
    p.add_argument("--alphas", default="0:5:51", help="alpha grid: start:stop:count or comma list")
    p.add_argument("--route", choices=("auto", "closed_form", "quadrature"), default="auto")

    return parser


_HANDLERS = {
    "classify": _cmd_classify,
    "rate": _cmd_rate,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
    "simulate": _cmd_simulate,
    "tabulate-special": _cmd_tabulate,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    ns = parser.parse_args(argv)
    if ns.format is None:
        ns.format = "csv" if ns.command in ("sweep", "tabulate-special") else "json"
    if ns.format == "csv" and ns.command not in ("sweep", "tabulate-special"):
        print(f"metastable {ns.command}: csv format applies to sweep/tabulate-special only", file=sys.stderr)
        return 1
    try:
        return _HANDLERS[ns.command](ns, argv)
    except UsageError as exc:
        print(f"metastable {ns.command}: error: {exc}", file=sys.stderr)
        return 1
    except InvariantViolation as exc:
        print(f"metastable {ns.command}: invariant violation: {exc}", file=sys.stderr)
        return 3
    except RuntimeError as exc:
        print(f"metastable {ns.command}: did not converge: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
