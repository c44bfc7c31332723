"""Command-line surface: region sweeps, bound checks, references, resource algebra.

Every command echoes its effective configuration as a JSON line; rerunning
with the same configuration reproduces byte-identical artifacts (floats are
serialized shortest-round-trip, and all randomness is seed-derived).

Exit codes: 0 success, 2 usage error, 3 numerical-invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .entropy import binary_entropy, coherent_information, mutual_information, von_neumann
from .geometry import EmptyRegionError, RateRegion, region_to_dict
from .models import (bell_state, dephasing_reference, erased_state_reference,
                     maximally_entangled, parse_model_spec)
from .optimizer import SweepConfig, boundary_curve, max_coherent_information, sweep_casr, sweep_cef
from .quantum import InvariantError, apply_isometry, isometric_extension, purify
from .rilang import RIParseError, RIRateError, derivable, net_rate, parse, print_expr
from .sigma import build_sigma_dynamic, build_sigma_static, ensemble_from_json, instrument_from_json
from .tradeoff import (BOUND_PREDICATES, assemble_region, cef_point, ea_vs_tp_gap,
                       tensor_copies)
from .units import octant_bound_check, unit_coefficients, unit_region

MAX_FACET_POINTS = 16


class UsageError(ValueError):
    pass


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _echo_config(command: str, cfg: dict):
    print("config: " + json.dumps({"command": command, **cfg}, sort_keys=True))


def _parse_point(text: str) -> np.ndarray:
    parts = [p for p in text.replace("(", "").replace(")", "").split(",") if p.strip()]
    if len(parts) != 3:
        raise UsageError(f"expected a point C,Q,E, got {text!r}")
    return np.array([float(p) for p in parts])


def _out_base(path: str) -> Path:
    p = Path(path)
    return p.with_suffix("") if p.suffix == ".json" else p


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------

def cmd_unit_region(args) -> int:
    cfg = {"format": args.format, "point": args.point}
    _echo_config("unit-region", cfg)
    region = unit_region()
    if args.format == "json":
        sys.stdout.write(_dump_json(region_to_dict(region)))
        return 0
    if args.format == "facets":
        fd = region.facet_description()
        for a, b in fd.inequalities:
            terms = " + ".join(f"{v:g}{n}" for v, n in zip(a, ("C", "Q", "E")) if abs(v) > 1e-12)
            print(f"{terms} <= {b:g}")
        return 0
    if args.point is None:
        raise UsageError("--format check needs --point C,Q,E")
    x = _parse_point(args.point)
    inside = region.contains(x)
    coeff = unit_coefficients(x)
    verdict = octant_bound_check(x)
    print(f"point ({x[0]:g}, {x[1]:g}, {x[2]:g}): {'inside' if inside else 'outside'}")
    print(f"coefficients (TP, SD, ED): ({coeff.alpha + 0.0:.12g}, {coeff.beta + 0.0:.12g}, "
          f"{coeff.gamma + 0.0:.12g}) -> {'feasible' if coeff.feasible else 'infeasible'}")
    for label, val in (("C+Q+E", x.sum()), ("Q+E", x[1] + x[2]), ("C+2Q", x[0] + 2 * x[1])):
        state = "ok" if val <= 1e-9 else "VIOLATED"
        print(f"facet {label} <= 0: {val:.12g} {state}")
    for line in verdict.lines():
        print(line)
    return 0


def cmd_region(args) -> int:
    spec = parse_model_spec(args.model)
    cfg = SweepConfig(seed=args.seed, samples=args.samples,
                      max_outcomes=args.max_outcomes, refine_iters=args.refine_iters,
                      grid=args.grid)
    echo = {"mode": args.mode, "model": str(spec), "k": args.k, "out": str(args.out),
            **cfg.to_dict()}
    _echo_config("region", echo)

    resource = spec.build()
    if args.mode == "dynamic":
        if spec.kind != "channel":
            raise UsageError(f"model {spec} is a state; dynamic sweeps need a channel")
        resource = tensor_copies(resource, args.k)
        points = sweep_cef(resource, cfg, k=args.k)
    else:
        if spec.kind != "state":
            raise UsageError(f"model {spec} is a channel; static sweeps need a state")
        resource = tensor_copies(resource, args.k)
        points = sweep_casr(resource, cfg, k=args.k)

    region = assemble_region(points)
    base = _out_base(args.out)
    base.parent.mkdir(parents=True, exist_ok=True)
    region_path = base.with_suffix(".json")
    points_path = base.parent / (base.name + ".points.csv")
    report_path = base.parent / (base.name + ".report.json")

    include_facets = len(region.points) <= MAX_FACET_POINTS
    region_path.write_text(_dump_json(region_to_dict(region, include_facets=include_facets)))
    csv_lines = ["kind,k,C,Q,E,provenance"] + [p.csv_row() for p in points]
    points_path.write_text("\n".join(csv_lines) + "\n")
    report = {
        "config": {"command": "region", **echo},
        "kind": args.mode,
        "model": str(spec),
        "n_points": len(points),
        "region_json": region_path.name,
        "points_csv": points_path.name,
    }
    report_path.write_text(_dump_json(report))
    print(f"wrote {region_path} ({len(region.points)} generator points, "
          f"{len(region.rays)} rays), {points_path}, {report_path}")
    return 0


def cmd_bounds(args) -> int:
    octant = args.octant.replace(",", "").replace("(", "").replace(")", "")
    if octant not in BOUND_PREDICATES:
        raise UsageError(f"no converse predicate for octant {args.octant!r}; "
                         f"have {sorted(BOUND_PREDICATES)}")
    spec = parse_model_spec(args.model)
    x = _parse_point(args.point)
    echo = {"octant": octant, "model": str(spec), "point": args.point,
            "ensemble": args.ensemble, "instrument": args.instrument}
    _echo_config("bounds", echo)

    if octant == "--+":
        if spec.kind != "state":
            raise UsageError("the (-,-,+) static bounds need a state model")
        if not args.instrument:
            raise UsageError("the (-,-,+) static bounds need --instrument FILE")
        inst = instrument_from_json(json.loads(Path(args.instrument).read_text()))
        sigma = build_sigma_static(spec.build(), inst)
    else:
        if spec.kind != "channel":
            raise UsageError(f"the {octant} dynamic bounds need a channel model")
        if not args.ensemble:
            raise UsageError(f"the {octant} dynamic bounds need --ensemble FILE")
        ens = ensemble_from_json(json.loads(Path(args.ensemble).read_text()))
        sigma = build_sigma_dynamic(spec.build(), ens)

    verdict = BOUND_PREDICATES[octant](sigma, x)
    print(verdict.name)
    for line in verdict.lines():
        print(line)
    print("verdict: " + ("PASS" if verdict.passed else "FAIL"))
    return 0


def cmd_ri(args) -> int:
    if args.ri_command == "parse":
        _echo_config("ri parse", {"expr": args.expr})
        expr = parse(args.expr)
        print("canonical:", print_expr(expr))
        try:
            net = net_rate(expr)
            c, q, e = net.triple
            print(f"net rate (C, Q, E): ({c:g}, {q:g}, {e:g})"
                  + (f"  [noisy resource <{net.noisy}>]" if net.noisy else ""))
        except RIRateError as exc:
            print(f"no net rate: {exc}")
        return 0
    _echo_config("ri derive", {"target": args.target, "using": args.using})
    result = derivable(args.target, args.using)
    print("derivable:", "yes" if result.ok else "no")
    if result.ok:
        for proto, w in zip(args.using, result.coefficients):
            print(f"  {w:.12g} x ({print_expr(parse(proto))})")
        print(f"  waste (C, Q, E): ({result.waste[0]:.12g}, {result.waste[1]:.12g}, "
              f"{result.waste[2]:.12g})")
    else:
        print(f"  best residual {result.residual:.3e}")
    return 0


def _reference_rows(spec):
    rows = []
    if spec.name in ("erased", "erasure"):
        eps = spec.params["eps"]
        ref = erased_state_reference(eps)
        from .models import erased_state

        rho = erased_state(eps)
        psi = purify(rho, "E'").to_density()
        computed = {
            "H(A)": von_neumann(rho, "A"),
            "H(B)": von_neumann(rho, "B"),
            "H(AB)": von_neumann(rho, ("A", "B")),
            "I(A>B)": coherent_information(rho, "A", "B"),
            "I(A;B)/2": 0.5 * mutual_information(rho, "A", "B"),
            "I(A;E)/2": 0.5 * mutual_information(psi, "A", "E'"),
        }
        for name, closed in ref.rows():
            rows.append((name, closed, computed[name]))
        return rows
    if spec.name == "dephasing":
        p = spec.params["p"]
        ref = dephasing_reference(p)
        channel = spec.build()
        iso = isometric_extension(channel)
        psi = apply_isometry(iso, bell_state("A", "A'"), on="A'").to_density()
        rows.append(("quantum capacity", ref.quantum_capacity,
                     max_coherent_information(channel)))
        rows.append(("env entropy on Bell input", ref.env_entropy_on_bell,
                     von_neumann(psi, "E")))
        from .sigma import single_state_ensemble

        pt = cef_point(channel, single_state_ensemble(np.eye(2).reshape(-1) / np.sqrt(2), 2, 2))
        h2 = binary_entropy(p / 2.0)
        for axis, closed, got in zip("CQE", (0.0, 1 - h2 / 2, -h2 / 2), pt.triple):
            rows.append((f"Bell-input one-shot {axis}", closed, float(got)))
        return rows
    # bell
    rho = bell_state().to_density()
    rows.append(("H(A)", 1.0, von_neumann(rho, "A")))
    rows.append(("H(AB)", 0.0, von_neumann(rho, ("A", "B"))))
    rows.append(("I(A;B)", 2.0, mutual_information(rho, "A", "B")))
    return rows


def cmd_reference(args) -> int:
    spec = parse_model_spec(args.model)
    _echo_config("reference", {"model": str(spec)})
    rows = _reference_rows(spec)
    width = max(len(name) for name, _, _ in rows)
    print(f"{'quantity'.ljust(width)}  {'closed form':>20}  {'computed':>20}  {'delta':>10}")
    for name, closed, got in rows:
        print(f"{name.ljust(width)}  {closed:>20.12f}  {got:>20.12f}  {got - closed:>10.2e}")
    return 0


def cmd_ea_gap(args) -> int:
    spec = parse_model_spec(args.model)
    if spec.kind != "channel":
        raise UsageError("ea-gap needs a channel model")
    cfg = SweepConfig(seed=args.seed, samples=args.samples, grid=args.grid)
    echo = {"model": str(spec), "rate": args.rate, "out": str(args.out), **cfg.to_dict()}
    _echo_config("ea-gap", echo)
    points = sweep_cef(spec.build(), cfg)
    result = ea_vs_tp_gap(points, quantum_rate=args.rate)

    base = _out_base(args.out)
    base.parent.mkdir(parents=True, exist_ok=True)
    curve = boundary_curve(points, "*+-", drop="C")
    curve_path = base.parent / (base.name + ".curve.csv")
    curve_path.write_text("\n".join(curve.csv_lines()) + "\n")
    tp_region = RateRegion([np.zeros(3)], [[-2.0, 1.0, -1.0]])
    tp_curve = boundary_curve(tp_region, "*+-", drop="C")
    tp_path = base.parent / (base.name + ".tp.csv")
    tp_path.write_text("\n".join(tp_curve.csv_lines()) + "\n")
    gap_path = base.parent / (base.name + ".gap.json")
    gap_path.write_text(_dump_json({
        "config": {"command": "ea-gap", **echo},
        "gap": result.gap,
        "quantum_rate": result.quantum_rate,
        "coding_ebits": result.coding_ebits,
        "teleport_ebits": result.teleport_ebits,
        "capacity_estimate": result.capacity_estimate,
    }))
    print(f"gap {result.gap:.6f} ebits/use at quantum rate {result.quantum_rate:g} "
          f"(coding {result.coding_ebits:.6f} vs teleportation {result.teleport_ebits:.6f})")
    print(f"wrote {curve_path}, {tp_path}, {gap_path}")
    return 0


# ---------------------------------------------------------------------------
# Parser wiring
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tripletrade",
        description="Rate regions trading classical communication, quantum "
                    "communication, and entanglement.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("unit-region", help="exact region reachable from unit protocols")
    p.add_argument("--format", choices=("json", "facets", "check"), default="facets")
    p.add_argument("--point", help="C,Q,E triple for --format check")
    p.set_defaults(func=cmd_unit_region)

    p = sub.add_parser("region", help="sweep a model and assemble its achievable region")
    p.add_argument("mode", choices=("dynamic", "static"))
    p.add_argument("--model", required=True, help="e.g. dephasing:p=0.2, erased:eps=0.25")
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, choices=(1, 2), default=1)
    p.add_argument("--grid", type=int, default=None,
                   help="structured-family resolution for qubit channels")
    p.add_argument("--max-outcomes", type=int, default=4)
    p.add_argument("--refine-iters", type=int, default=0)
    p.add_argument("--out", required=True, help="region JSON path (base for csv/report)")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("bounds", help="evaluate an octant's converse bounds at a point")
    p.add_argument("--octant", required=True, help="one of ++-, -+-, +--, --+")
    p.add_argument("--model", required=True)
    p.add_argument("--point", required=True, help="C,Q,E")
    p.add_argument("--ensemble", help="ensemble JSON (dynamic octants)")
    p.add_argument("--instrument", help="instrument JSON (static octant)")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("ri", help="resource-inequality expressions")
    risub = p.add_subparsers(dest="ri_command", required=True)
    rp = risub.add_parser("parse")
    rp.add_argument("expr")
    rp.set_defaults(func=cmd_ri)
    rd = risub.add_parser("derive")
    rd.add_argument("--target", required=True)
    rd.add_argument("--using", action="append", required=True)
    rd.set_defaults(func=cmd_ri)

    p = sub.add_parser("reference", help="closed-form values vs computed, side by side")
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_reference)

    p = sub.add_parser("ea-gap", help="entanglement cost: coding vs pure teleportation")
    p.add_argument("--model", required=True)
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--rate", type=float, default=None, help="matched quantum rate")
    p.add_argument("--out", required=True, help="output base path")
    p.set_defaults(func=cmd_ea_gap)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvariantError as exc:
        print(f"numerical invariant violated: {exc}", file=sys.stderr)
        return 3
    except (UsageError, RIParseError, RIRateError, EmptyRegionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
