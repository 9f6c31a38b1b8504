"""Command line entry point.

Exit codes: 0 feasible or success, 1 infeasible (or an invalid layout for
``validate``), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from . import io as bio
from .model import BusLayout, Infeasible, validate_planarity

EXIT_OK, EXIT_INFEASIBLE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load_instance(args):
    instance, policy = bio.read_instance(_read(args.instance), args.instance)
    eps = policy.epsilon if getattr(args, "epsilon", None) is None else args.epsilon
    return instance, eps


def _stats_json(stats: dict) -> dict:
    out = {}
    for key, value in stats.items():
        if isinstance(value, (list, tuple)):
            value = [str(v) for v in value]
        elif isinstance(value, dict):
            value = {str(k): v for k, v in value.items()}
        out[key] = value
    return out


def _emit_result(result, args) -> int:
    if isinstance(result, Infeasible):
        payload = result.to_json()
        if result.stats:
            payload["stats"] = _stats_json(result.stats)
        _write(getattr(args, "out", None), bio.dumps(payload))
        return EXIT_INFEASIBLE
    payload = result.to_json()
    payload["feasible"] = True
    if result.stats:
        payload["stats"] = _stats_json(result.stats)
    _write(getattr(args, "out", None), bio.dumps(payload))
    return EXIT_OK


def cmd_solve(args) -> int:
    instance, eps = _load_instance(args)
    if args.variant in ("sqcap", "sqcup"):
        if eps:
            raise UsageError("the sqcap and sqcup variants ignore epsilon; drop --epsilon")
        from .sweep import solve_sqcap, solve_sqcup

        result = (solve_sqcap if args.variant == "sqcap" else solve_sqcup)(instance)
    elif args.variant == "halfbus":
        from .halfbus import build_clauses, solve_halfbep

        formula = build_clauses(instance)
        if args.dump_cnf:
            Path(args.dump_cnf).write_text(formula.to_dimacs(), encoding="utf-8")
        result = solve_halfbep(instance, formula)
    elif args.oracle:
        from .exact import enumerate_orders_oracle, minimize_ink_global

        result = (minimize_ink_global if args.minimize_ink else enumerate_orders_oracle)(instance, eps)
    else:
        from .exact import minimize_ink, solve_bep

        result = solve_bep(instance, eps)
        if result and args.minimize_ink:
            layout = minimize_ink(instance, result.order(), eps)
            result = BusLayout(layout.bus_y, instance, dict(result.stats))
    if result:
        from .model import ink

        result.stats["ink"] = str(ink(instance, result))
    return _emit_result(result, args)


def cmd_solve_order(args) -> int:
    from .order import solve_with_order

    instance, eps = _load_instance(args)
    names = {str(c): c for c in instance.colors}
    order = [s.strip() for s in args.order.split(",") if s.strip()]
    unknown = [s for s in order if s not in names]
    if unknown or sorted(order) != sorted(names):
        raise UsageError(f"--order must list every color exactly once (unknown: {unknown})")
    return _emit_result(solve_with_order(instance, [names[s] for s in order], eps), args)


def cmd_diagonal(args) -> int:
    from .diagonal import diagonal_instance, pushall_sort, word_to_layout

    try:
        pi = [int(v) for v in args.pi.split(",")]
    except ValueError:
        raise UsageError(f"--pi must be comma-separated integers, got {args.pi!r}") from None
    word = pushall_sort(pi)
    if not word:
        _write(None, bio.dumps({"sortable": False, "reason": word.reason}))
        return EXIT_INFEASIBLE
    layout = word_to_layout(word, pi)
    payload = {"sortable": True, "permutation": pi}
    if args.emit_word:
        payload["word"] = str(word)
    payload.update(layout.to_json())
    if args.emit_svg:
        from .svg import render_svg

        Path(args.emit_svg).write_text(render_svg(diagonal_instance(pi), layout), encoding="utf-8")
    _write(None, bio.dumps(payload))
    return EXIT_OK


def cmd_export_ilp(args) -> int:
    from .ilp import build_model, write_lp

    instance, _ = _load_instance(args)
    _write(args.out, write_lp(build_model(instance)))
    return EXIT_OK


def cmd_gadget(args) -> int:
    import json

    from .gadgets import GadgetError, build_instance, dedupe_coordinates, load_formula

    sidecar = _read(args.layout) if args.layout else None
    try:
        layout = load_formula(_read(args.formula), sidecar)
        instance, policy = build_instance(layout, center_main=args.center_main)
    except json.JSONDecodeError as exc:
        raise bio.InputFormatError(exc.msg, (exc.lineno, exc.colno), args.layout) from None
    except GadgetError as exc:
        raise UsageError(str(exc)) from None
    if args.dedupe:
        instance = dedupe_coordinates(instance)
    _write(args.out, bio.dumps(bio.instance_to_json(instance, policy)))
    return EXIT_OK


def _int_list(text: str) -> List[int]:
    out = []
    for part in text.split(","):
        if "-" in part:
            lo, hi = part.split("-")
            out += list(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def cmd_experiment(args) -> int:
    from .experiment import ExperimentConfig, default_seed, run_experiment, to_csv

    try:
        cfg = ExperimentConfig(
            k_values=tuple(_int_list(args.k)),
            l_values=tuple(_int_list(args.l)),
            trials=args.trials,
            area=tuple(int(v) for v in args.area.lower().split("x")),
            seed=default_seed() if args.seed is None else args.seed,
            workers=args.workers,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cells = run_experiment(cfg)
    _write(args.out, to_csv(cells, cfg))
    return EXIT_OK


def cmd_render(args) -> int:
    from .svg import render_svg

    instance, eps = _load_instance(args)
    layout = bio.read_layout(_read(args.layout), instance, args.layout) if args.layout else None
    try:
        svg = render_svg(instance, layout, eps, allow_invalid=args.allow_invalid)
    except ValueError as exc:
        raise UsageError(f"{exc}; pass --allow-invalid to draw it anyway") from None
    _write(args.out, svg)
    return EXIT_OK


def cmd_validate(args) -> int:
    instance, eps = _load_instance(args)
    layout = bio.read_layout(_read(args.layout), instance, args.layout)
    missing = [str(c) for c in instance.colors if c not in layout]
    if missing:
        raise UsageError(f"layout has no bus for {missing}")
    report = validate_planarity(instance, layout, eps)
    _write(None, bio.dumps({"valid": not report, "violations": [v.to_json() for v in report]}))
    return EXIT_OK if not report else EXIT_INFEASIBLE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="busembed", description="Bus embeddings of colored point sets.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def with_instance(sp, eps=True):
        sp.add_argument("--instance", required=True, help="instance JSON file ('-' for stdin)")
        if eps:
            sp.add_argument("--epsilon", type=str, default=None, help="override the instance's epsilon")
        sp.add_argument("--out", default=None, help="output file (default stdout)")

    s = sub.add_parser("solve", help="decide BEP and print a layout")
    with_instance(s)
    s.add_argument("--variant", choices=("general", "sqcap", "sqcup", "halfbus"), default="general")
    s.add_argument("--minimize-ink", action="store_true", help="least total connection length")
    s.add_argument("--oracle", action="store_true", help="enumerate all orders instead of the DP")
    s.add_argument("--dump-cnf", default=None, help="write the half-bus 2-SAT formula (DIMACS)")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("solve-order", help="place buses in a given bottom-to-top order")
    with_instance(s)
    s.add_argument("--order", required=True, help="comma-separated colors, bottom first")
    s.set_defaults(func=cmd_solve_order)

    s = sub.add_parser("diagonal", help="diagonal instance of a permutation via two-stack sorting")
    s.add_argument("--pi", required=True, help="permutation such as 3,2,1,4")
    s.add_argument("--emit-word", action="store_true")
    s.add_argument("--emit-svg", default=None)
    s.set_defaults(func=cmd_diagonal)

    s = sub.add_parser("export-ilp", help="write the ink-minimizing ILP in LP format")
    with_instance(s, eps=False)
    s.set_defaults(func=cmd_export_ilp)

    s = sub.add_parser("gadget", help="instance from a planar 3-CNF formula")
    s.add_argument("formula", help="DIMACS CNF file")
    s.add_argument("--layout", default=None, help="JSON sidecar: variable_order, sides, nesting")
    s.add_argument("--center-main", action="store_true", help="main points on opposite sides of the main bus")
    s.add_argument("--dedupe", action="store_true", help="move points into general position")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_gadget)

    s = sub.add_parser("experiment", help="feasibility rates of random instances (CSV)")
    s.add_argument("--k", default="3-12", help="colors, e.g. 3-12 or 3,5,7")
    s.add_argument("--l", default="2,3,4", help="points per color")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--area", default="1024x768")
    s.add_argument("--seed", type=int, default=None, help="default: $BUSEMBED_SEED or 0")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_experiment)

    s = sub.add_parser("render", help="draw an instance and optionally a layout as SVG")
    with_instance(s)
    s.add_argument("--layout", default=None)
    s.add_argument("--allow-invalid", action="store_true", help="draw violations in red instead of failing")
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("validate", help="check a layout for planarity")
    with_instance(s)
    s.add_argument("--layout", required=True)
    s.set_defaults(func=cmd_validate)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "epsilon", None) is not None:
        from ._exact import exact

        try:
            args.epsilon = exact(args.epsilon)
        except (TypeError, ValueError):
            parser.print_usage(sys.stderr)
            print(f"busembed: --epsilon is not a number: {args.epsilon!r}", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, bio.InputFormatError) as exc:
        print(f"busembed: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
