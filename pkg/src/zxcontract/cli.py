"""Command-line driver: ``zxcontract run | bench | eval``.

Exit codes: 0 success, 1 usage or input error, 2 verification mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import __version__, oracle, simplify, twtools
from .circuit import CircuitError, parse_circuit, parse_grid, random_grid_circuit

VERIFY_TOL = 1e-9
CSV_HEADER = ["stage", "depth", "method", "seed", "cost", "width", "nodes", "edges"]
METHODS = ("standard", "zx-unoptimized", "zx-optimized")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, depth_list: bool = False) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--circuit", type=Path, help="circuit file")
    src.add_argument("--grid", help="random grid circuit of shape RxC")
    if depth_list:
        p.add_argument("--depths", default="4,6,8", help="comma-separated depths")
    else:
        p.add_argument("--depth", type=int, default=8)
    p.add_argument("--seed", type=int, default=0, help="single source of randomness")
    p.add_argument("--bitstring", help="output bitstring x of <x|C|0> (default all zeros)")
    p.add_argument("--out", type=Path, help="directory for report files")


def _planning(p: argparse.ArgumentParser) -> None:
    p.add_argument("--steps", type=int, default=100, help="annealing steps")
    p.add_argument("--mode", choices=[m.value for m in simplify.Mode], default="anneal")
    p.add_argument("--cost-fn", choices=[c.value for c in simplify.CostFn], default="quicktw")
    p.add_argument("--trials", type=int, default=4, help="order-finding trials")
    p.add_argument("--bb-budget-ms", type=float, default=None,
                   help="time budget per branch and bound (default: fixed expansion budget)")
    p.add_argument("--target-rank", type=int, default=26)
    p.add_argument("--deterministic", action="store_true", help="single worker everywhere")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zxcontract", description="ZX-based tensor-network contraction of circuit amplitudes")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="full pipeline on one circuit")
    _common(run)
    _planning(run)
    run.add_argument("--verify", action="store_true", help="compare with the statevector oracle")

    bench = sub.add_parser("bench", help="standard vs zx-unoptimized vs zx-optimized sweep")
    _common(bench, depth_list=True)
    _planning(bench)

    ev = sub.add_parser("eval", help="statevector amplitude only")
    _common(ev)
    return p


# ---------------------------------------------------------------------------


def _load(args, depth: int | None = None):
    if args.circuit is not None:
        try:
            text = args.circuit.read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {args.circuit}: {exc.strerror}") from exc
        return parse_circuit(text)
    try:
        rows, cols = parse_grid(args.grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    d = args.depth if depth is None else depth
    try:
        return random_grid_circuit(rows, cols, d, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _bitstring(args, n: int) -> str:
    x = args.bitstring if args.bitstring is not None else "0" * n
    if len(x) != n or set(x) - {"0", "1"}:
        raise UsageError(f"bitstring must be {n} characters of 0/1")
    return x


def _configs(args):
    if args.steps < 0 or args.trials < 1 or args.target_rank < 1:
        raise UsageError("steps must be >= 0, trials and target rank >= 1")
    cfg = simplify.AnnealConfig(nb_steps=args.steps, seed=args.seed, cost_fn=args.cost_fn, mode=args.mode)
    pcfg = simplify.PlanConfig(
        trials=args.trials,
        seeds=[args.seed + i for i in range(args.trials)],
        bb_budget_ms=args.bb_budget_ms,
        target_rank=args.target_rank,
        workers=1 if args.deterministic else args.trials,
    )
    return cfg, pcfg


def _complex(z) -> list[float] | None:
    return None if z is None else [float(z.real), float(z.imag)]


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(rows)
    return buf.getvalue()


def _write(out: Path | None, files: dict[str, str]) -> None:
    if out is None:
        return
    out.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (out / name).write_text(text, encoding="utf-8")


def _row(stage, depth, method, seed, res) -> list:
    g = res.network.graph()
    width = twtools.quick_tw(g)
    return [stage, depth, method, seed, res.plan.predicted_cost, width, g.number_of_nodes(), g.number_of_edges()]


def cmd_run(args) -> int:
    c = _load(args)
    x = _bitstring(args, c.num_qubits)
    if args.verify and c.num_qubits > oracle.MAX_QUBITS:
        raise UsageError(f"--verify needs at most {oracle.MAX_QUBITS} qubits")
    cfg, pcfg = _configs(args)
    res = simplify.pipeline(c, cfg, pcfg, x=x)
    depth = args.depth if args.circuit is None else ""
    report = {
        "input_digest": simplify.circuit_digest(c),
        "config": {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(vars(args).items())},
        "bitstring": x,
        "stages": res.stages,
        "timings": res.timings,
        "anneal": {
            "initial_cost": res.anneal_report.initial_cost,
            "best_cost": res.anneal_report.best_cost,
            "best_step": res.anneal_report.best_step,
            "trace": [r.cost for r in res.anneal_report.rows],
        },
        "plan": {
            "predicted_cost": res.plan.predicted_cost,
            "slices": res.plan.slices,
            "max_rank": res.plan.max_rank,
            "subtasks": res.subtasks,
            "measured_cost": res.measured_cost,
        },
        "amplitude": _complex(res.amplitude),
    }
    status = 0
    if args.verify:
        ref = oracle.statevector_amplitude(c, x)
        err = abs(ref - res.amplitude)
        ok = err <= VERIFY_TOL
        report["verify"] = {"oracle": _complex(ref), "abs_error": err, "ok": ok}
        if not ok:
            print(f"verification FAILED: |error| = {err:.3e}", file=sys.stderr)
            status = 2
    rows = [
        [stage, depth, "zx-optimized" if args.steps else "zx-unoptimized", args.seed, "", "",
         st["nodes"], st["edges"]]
        for stage, st in res.stages.items()
    ]
    rows.append(_row("plan", depth, rows[0][2], args.seed, res))
    _write(args.out, {
        "report.json": json.dumps(report, indent=1, sort_keys=True) + "\n",
        "plan.json": res.plan.dump(),
        "anneal.csv": res.anneal_report.to_csv(),
        "stages.csv": _csv(rows),
    })
    a = res.amplitude
    print(f"amplitude {a.real:.16g} {a.imag:+.16g}i")
    print(f"predicted_cost {res.plan.predicted_cost} subtasks {res.subtasks}")
    if args.verify:
        print("verify " + ("ok" if status == 0 else "MISMATCH"))
    return status


def cmd_bench(args) -> int:
    try:
        depths = [int(d) for d in args.depths.split(",") if d.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --depths {args.depths!r}") from exc
    if not depths:
        raise UsageError("--depths needs at least one depth")
    cfg, pcfg = _configs(args)
    rows = []
    for depth in depths:
        c = _load(args, depth)
        x = _bitstring(args, c.num_qubits)
        results = {
            "standard": simplify.standard_pipeline(c, pcfg, x=x, contract=False),
            "zx-unoptimized": simplify.pipeline(c, None, pcfg, x=x, contract=False),
            "zx-optimized": simplify.pipeline(c, cfg, pcfg, x=x, contract=False),
        }
        for method in METHODS:
            rows.append(_row("bench", depth, method, args.seed, results[method]))
            print(",".join(str(v) for v in rows[-1]))
    _write(args.out, {"bench.csv": _csv(rows)})
    return 0


def cmd_eval(args) -> int:
    c = _load(args)
    x = _bitstring(args, c.num_qubits)
    if c.num_qubits > oracle.MAX_QUBITS:
        raise UsageError(f"the statevector oracle handles at most {oracle.MAX_QUBITS} qubits")
    a = oracle.statevector_amplitude(c, x)
    _write(args.out, {"eval.json": json.dumps(
        {"input_digest": simplify.circuit_digest(c), "bitstring": x, "amplitude": _complex(a)},
        indent=1, sort_keys=True) + "\n"})
    print(f"amplitude {a.real:.16g} {a.imag:+.16g}i")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"run": cmd_run, "bench": cmd_bench, "eval": cmd_eval}[args.command]
    try:
        return handler(args)
    except (UsageError, CircuitError) as exc:
        print(f"zxcontract: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
