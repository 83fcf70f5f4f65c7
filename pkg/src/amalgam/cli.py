"""Command-line front end.

One subcommand per workbench operation, a stable text report on stdout, and
a three-way exit convention: 0 when the computation succeeded and every
checked property holds, 1 when a checked property is false, 2 for usage or
input errors (reported on stderr).  `--format json` emits the same content
machine-readably.  The environment variable AMALGAM_BUDGET overrides the
default enumeration caps.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import control as ctl
from . import counterexample as cx
from . import generic as gen
from . import msmeasure as ms
from . import predimension as pd
from . import szemeredi as sz
from .budget import BudgetExceeded
from .structures import (
    FinStruct,
    Signature,
    check_points,
    free_amalgam,
    parse_structure,
    serialize,
)


def _read_text(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _read_structure(path: str) -> FinStruct:
    return parse_structure(_read_text(path))


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _parse_points(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise ValueError(f"bad point list {text!r}; expected comma-separated integers") from None


def _subset(s: FinStruct, text: str | None, default_all: bool = False) -> frozenset[int]:
    if text is None:
        return frozenset(s.points()) if default_all else frozenset()
    return check_points(s, _parse_points(text))


def _parse_signature(text: str) -> Signature:
    relations = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        name, _, arity = part.partition(":")
        if not name or not arity:
            raise ValueError(f"bad signature entry {part!r}; expected Name:arity")
        relations.append((name, int(arity)))
    if not relations:
        raise ValueError("signature needs at least one relation")
    return Signature.of(*relations)


def _control(args: argparse.Namespace) -> ctl.ControlFunction:
    return ctl.parse_control(args.control, read_file=_read_text)


def _json_ready(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (frozenset, set)):
        return sorted(value)
    if isinstance(value, tuple):
        return list(value)
    return value


def _flag(value: bool) -> str:
    return "PASS" if value else "FAIL"


def _emit(args: argparse.Namespace, lines: list[str], payload: dict) -> None:
    if getattr(args, "format", "text") == "json":
        clean = {k: _json_ready(v) for k, v in payload.items()}
        print(json.dumps(clean, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


# ---------------------------------------------------------------------------
# predimension subcommands


def cmd_delta(args: argparse.Namespace) -> int:
    s = _read_structure(args.structure)
    xs = _subset(s, args.subset, default_all=True)
    value = pd.delta(s, xs)
    _emit(args, [str(value)], {"delta": value, "subset": xs})
    return 0


def cmd_selfsuff(args: argparse.Namespace) -> int:
    s = _read_structure(args.structure)
    xs = _subset(s, args.subset)
    verdict = pd.is_self_sufficient(s, xs, max_points=args.max_points)
    _emit(
        args,
        ["true" if verdict else "false"],
        {"self_sufficient": verdict, "subset": xs},
    )
    return 0 if verdict else 1


def cmd_closure(args: argparse.Namespace) -> int:
    s = _read_structure(args.structure)
    xs = _subset(s, args.subset)
    result = pd.closure(s, xs, method=args.method, max_points=args.max_points)
    points = " ".join(map(str, sorted(result.points)))
    _emit(
        args,
        [f"closure: {points}", f"dimension: {result.dimension}"],
        {"closure": result.points, "dimension": result.dimension, "subset": xs},
    )
    return 0


def cmd_dim(args: argparse.Namespace) -> int:
    s = _read_structure(args.structure)
    xs = _subset(s, args.subset)
    value = pd.dim(s, xs, method=args.method)
    _emit(args, [str(value)], {"dim": value, "subset": xs})
    return 0


# ---------------------------------------------------------------------------
# control-function subcommands


def cmd_kf(args: argparse.Namespace) -> int:
    s = _read_structure(args.structure)
    f = _control(args)
    result = ctl.kf_member(s, f, max_points=args.max_points)
    lines = [f"control: {ctl.describe(f)}", f"member: {'true' if result.member else 'false'}"]
    payload: dict = {"control": ctl.describe(f), "member": result.member}
    if result.witness is not None:
        witness_delta = pd.delta(s, result.witness)
        bound = ctl.threshold(f, len(result.witness))
        lines.append(
            f"witness: {' '.join(map(str, result.witness))} "
            f"(delta {witness_delta} < required {bound})"
        )
        payload["witness"] = result.witness
        payload["witness_delta"] = witness_delta
        payload["required"] = bound
    _emit(args, lines, payload)
    return 0 if result.member else 1


def cmd_goodf(args: argparse.Namespace) -> int:
    f = _control(args)
    report = ctl.good_f_report(f)
    lines = [
        f"control: {ctl.describe(f)}",
        f"CHECK free_amalgamation {_flag(report.free_amalgamation)}",
        f"CHECK dim_theorem {_flag(report.dim_theorem)}",
        f"CHECK slow_growth {_flag(report.slow_growth)}",
        f"authoritative: {'true' if report.authoritative else 'false'}",
    ]
    payload = {
        "control": ctl.describe(f),
        "free_amalgamation": report.free_amalgamation,
        "dim_theorem": report.dim_theorem,
        "slow_growth": report.slow_growth,
        "authoritative": report.authoritative,
    }
    _emit(args, lines, payload)
    return 0 if report.free_amalgamation else 1


# ---------------------------------------------------------------------------
# construction subcommands


def cmd_amalgam(args: argparse.Namespace) -> int:
    left = _read_structure(args.left)
    right = _read_structure(args.right)
    common = _read_structure(args.common)
    into_left = _parse_points(args.into_left)
    into_right = _parse_points(args.into_right)
    result = free_amalgam(left, right, common, into_left, into_right)
    text = serialize(result.structure)
    if args.out:
        _write_text(args.out, text)
    lines = [
        f"points: {result.structure.size}",
        f"into_left: {' '.join(map(str, result.into_left))}",
        f"into_right: {' '.join(map(str, result.into_right))}",
    ]
    if args.out:
        lines.append(f"written: {args.out}")
    else:
        lines.extend(["", text.rstrip("\n")])
    _emit(
        args,
        lines,
        {
            "points": result.structure.size,
            "into_left": result.into_left,
            "into_right": result.into_right,
            "structure": text,
        },
    )
    return 0


def cmd_generic_build(args: argparse.Namespace) -> int:
    f = _control(args)
    signature = _parse_signature(args.signature)
    chain = gen.new_chain(f, signature)
    chain = gen.grow_chain(
        chain,
        rounds=args.rounds,
        max_base=args.max_base,
        max_new=args.max_new,
        seed=args.seed,
        budget=args.budget,
        max_points=args.max_points,
    )
    gen.save_chain(chain, args.out)
    sizes = [stage.size for stage in chain.stages]
    lines = [
        f"control: {ctl.describe(f)}",
        f"seed: {args.seed}",
        f"stages: {len(chain.stages)}",
        f"sizes: {' '.join(map(str, sizes))}",
        f"written: {args.out}",
    ]
    payload = {
        "control": ctl.describe(f),
        "seed": args.seed,
        "stages": len(chain.stages),
        "sizes": sizes,
        "out": args.out,
    }
    _emit(args, lines, payload)
    return 0


def _flower_params(args: argparse.Namespace) -> cx.FlowerParams:
    return cx.FlowerParams(args.n, args.base)


def _emit_structure(args: argparse.Namespace, s: FinStruct, stats: dict) -> None:
    text = serialize(s)
    if args.out:
        _write_text(args.out, text)
    lines = [f"{key}: {value}" for key, value in stats.items()]
    if args.out:
        lines.append(f"written: {args.out}")
    else:
        lines.extend(["", text.rstrip("\n")])
    _emit(args, lines, {**stats, "structure": text})


def cmd_flower(args: argparse.Namespace) -> int:
    params = _flower_params(args)
    s = cx.build_flower(params, max_points=args.max_points)
    _emit_structure(
        args,
        s,
        {
            "points": s.size,
            "petals": params.petals,
            "delta": params.flower_delta,
        },
    )
    return 0


def cmd_glued(args: argparse.Namespace) -> int:
    params = _flower_params(args)
    s = cx.build_glued(params, max_points=args.max_points)
    _emit_structure(
        args,
        s,
        {
            "points": s.size,
            "copies": params.n,
            "delta": params.glued_delta,
        },
    )
    return 0


def cmd_verify_hrcon(args: argparse.Namespace) -> int:
    report = cx.verify_hrcon(args.n, args.base)
    _emit(args, report.text_lines(), report.to_json())
    return 0 if report.overall else 1


def cmd_tech_f(args: argparse.Namespace) -> int:
    c_struct = _read_structure(args.left)
    t_struct = _read_structure(args.right)
    common = _read_structure(args.common)
    into_c = _parse_points(args.into_left)
    into_t = _parse_points(args.into_right)
    targets = _parse_points(args.targets)
    f = _control(args)
    result = cx.build_tech_F(
        c_struct,
        t_struct,
        common,
        into_c,
        into_t,
        args.point,
        targets,
        max_points=args.max_points,
    )
    report = cx.verify_tech_F(result, f, max_points=args.max_points)
    delta_f = pd.delta(result.structure)
    identity = pd.delta(c_struct) + pd.delta(t_struct) - pd.delta(common)
    if args.out:
        _write_text(args.out, serialize(result.structure))
    lines = [
        f"points: {result.structure.size}",
        f"delta: {delta_f}",
        f"CHECK delta_identity {delta_f} == {identity} {_flag(delta_f == identity)}",
        f"CHECK base_selfsuff {_flag(report.base_selfsuff)}",
        f"CHECK left_selfsuff {_flag(report.left_selfsuff)}",
        f"CHECK right_selfsuff {_flag(report.right_selfsuff)}",
        f"CHECK in_class {_flag(report.in_class.member)}",
    ]
    if args.out:
        lines.append(f"written: {args.out}")
    payload = {
        "points": result.structure.size,
        "delta": delta_f,
        "delta_identity": delta_f == identity,
        "base_selfsuff": report.base_selfsuff,
        "left_selfsuff": report.left_selfsuff,
        "right_selfsuff": report.right_selfsuff,
        "in_class": report.in_class.member,
        "bridges": result.bridge_points,
    }
    _emit(args, lines, payload)
    ok = report.all_good and delta_f == identity
    return 0 if ok else 1


def cmd_cor23_search(args: argparse.Namespace) -> int:
    if (args.chain is None) == (args.structure is None):
        raise ValueError("give exactly one of --chain or --struct")
    if args.chain is not None:
        stage = gen.load_chain(args.chain)
    else:
        stage = _read_structure(args.structure)
    params = _flower_params(args)
    report = cx.cor23_search(stage, params, max_points=args.max_points)
    lines = [
        f"embeddings: {report.embeddings}",
        f"stage points: {report.stage_size}",
        f"solutions: {report.solutions}",
        f"max dimension: {report.max_dim} (target {report.target_dim})",
    ]
    _emit(args, lines, report.to_json())
    return 0


# ---------------------------------------------------------------------------
# harness subcommands


def cmd_szemeredi(args: argparse.Namespace) -> int:
    members = _parse_points(args.set)
    inst = sz.CyclicInstance.of(args.modulus, args.len, members)
    e_set = sz.build_E(inst, budget=args.budget)
    hyp = sz.verify_main_hypotheses(inst, e_set, samples=args.samples, seed=args.seed)
    solutions = sz.solve_amalgamation(inst, e_set, budget=args.budget)
    total, valid, nondegenerate = sz.survey_solutions(inst, solutions)
    lemma = sz.lemma26_checks(inst, e_set, samples=args.samples, seed=args.seed)
    shown = []
    for tup in solutions.iter_tuples():
        if len(shown) >= args.show:
            break
        prog = sz.extract_progression(inst, tup)
        terms = ", ".join(map(str, prog.terms))
        shown.append(f"AP {prog.start} {prog.step} : {terms}")
    ok = hyp.all_hold and lemma.all_hold and valid == total
    lines = [
        f"instance: modulus {inst.modulus} length {inst.length} "
        f"set size {len(inst.members)}",
        f"seed: {args.seed}",
        f"constraint tuples: {len(e_set)}",
        f"projection measure: {hyp.projection_measure}",
        f"fibre bound: {hyp.fibre_bound}",
        f"comparison constant: {hyp.c_constant}",
        f"max sampled ratio: {hyp.max_ratio}",
        f"solutions: {total}",
        f"valid progressions: {valid}",
        f"nondegenerate: {nondegenerate}",
        f"projection checks: {lemma.checks_run} run, {len(lemma.violations)} violations",
        *shown,
        f"OVERALL {'PASS' if ok else 'FAIL'}",
    ]
    payload = {
        "modulus": inst.modulus,
        "length": inst.length,
        "set_size": len(inst.members),
        "seed": args.seed,
        "constraint_tuples": len(e_set),
        "projection_measure": hyp.projection_measure,
        "fibre_bound": hyp.fibre_bound,
        "comparison_constant": hyp.c_constant,
        "max_sampled_ratio": hyp.max_ratio,
        "solutions": total,
        "valid_progressions": valid,
        "nondegenerate": nondegenerate,
        "projection_checks": lemma.checks_run,
        "violations": len(lemma.violations),
        "shown": shown,
        "overall": ok,
    }
    _emit(args, lines, payload)
    return 0 if ok else 1


def cmd_ms_check(args: argparse.Namespace) -> int:
    catalog = ms.parse_catalog(_read_text(args.catalog))
    reports = ms.run_all_checks(catalog)
    overall = all(report.all_pass for report in reports)
    lines = []
    for report in reports:
        lines.extend(report.text_lines())
    lines.append(f"OVERALL {'PASS' if overall else 'FAIL'}")
    _emit(
        args,
        lines,
        {"overall": overall, "reports": [report.to_json() for report in reports]},
    )
    return 0 if overall else 1


# ---------------------------------------------------------------------------
# parser assembly


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amalgam",
        description="Verification workbench for predimension constructions.",
        epilog="AMALGAM_BUDGET overrides the default enumeration caps.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("text", "json"), default="text", help="output format"
    )

    def add(name: str, handler, help_text: str, parents=(common,)):
        p = sub.add_parser(name, parents=list(parents), help=help_text)
        p.set_defaults(func=handler)
        return p

    p = add("delta", cmd_delta, "predimension of a structure or subset")
    p.add_argument("structure", help="structure file")
    p.add_argument("--subset", help="comma-separated points (default: all)")

    p = add("selfsuff", cmd_selfsuff, "is the subset self-sufficient?")
    p.add_argument("structure")
    p.add_argument("--subset", help="comma-separated points (default: empty)")
    p.add_argument("--max-points", type=int, default=None)

    p = add("closure", cmd_closure, "self-sufficient closure of a subset")
    p.add_argument("structure")
    p.add_argument("--subset")
    p.add_argument("--method", choices=("auto", "oracle", "mincut", "definition"), default="auto")
    p.add_argument("--max-points", type=int, default=None)

    p = add("dim", cmd_dim, "dimension of a subset")
    p.add_argument("structure")
    p.add_argument("--subset")
    p.add_argument("--method", choices=("auto", "oracle", "mincut", "definition"), default="auto")

    p = add("kf", cmd_kf, "growth-class membership under a control function")
    p.add_argument("structure")
    p.add_argument("--control", required=True, help="log:<base> or table:<path>")
    p.add_argument("--max-points", type=int, default=20)

    p = add("goodf", cmd_goodf, "certified properties of a control function")
    p.add_argument("--control", required=True)

    p = add("amalgam", cmd_amalgam, "free amalgam of two structures over a common part")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--common", required=True, help="common-part structure file")
    p.add_argument("--into-left", required=True, help="common points in the left factor")
    p.add_argument("--into-right", required=True, help="common points in the right factor")
    p.add_argument("--out", help="write the amalgam to this file")

    p = add("generic-build", cmd_generic_build, "grow and save a self-sufficient chain")
    p.add_argument("--control", required=True)
    p.add_argument("--signature", default="R:3", help="relations as Name:arity,...")
    p.add_argument("--rounds", type=int, default=3)
    p.add_argument("--max-base", type=int, default=2)
    p.add_argument("--max-new", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--max-points", type=int, default=None)
    p.add_argument("--out", required=True, help="directory for stages and manifest")

    p = add("flower", cmd_flower, "hub-and-petal structure for given n and base")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--base", type=int, required=True)
    p.add_argument("--max-points", type=int, default=None)
    p.add_argument("--out")

    p = add("glued", cmd_glued, "glued copies witnessing the dimension drop")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--base", type=int, required=True)
    p.add_argument("--max-points", type=int, default=None)
    p.add_argument("--out")

    p = add("verify-hrcon", cmd_verify_hrcon, "arithmetic contradiction certificate")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--base", type=int, required=True)

    p = add("tech-f", cmd_tech_f, "bridge-extension gadget and its certificate")
    p.add_argument("left", help="structure containing the distinguished point")
    p.add_argument("right", help="structure containing the target points")
    p.add_argument("--common", required=True)
    p.add_argument("--into-left", required=True)
    p.add_argument("--into-right", required=True)
    p.add_argument("--point", type=int, required=True, help="distinguished left point")
    p.add_argument("--targets", required=True, help="independent right points")
    p.add_argument("--control", required=True)
    p.add_argument("--max-points", type=int, default=None)
    p.add_argument("--out")

    p = add("cor23-search", cmd_cor23_search, "pattern survey over a chain tail")
    p.add_argument("--chain", help="chain directory (from generic-build)")
    p.add_argument("--struct", dest="structure", help="single structure file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--base", type=int, required=True)
    p.add_argument("--max-points", type=int, default=None)

    p = add("szemeredi", cmd_szemeredi, "cyclic progression harness")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--len", type=int, required=True, help="progression length")
    p.add_argument("--set", required=True, help="comma-separated residues")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--show", type=int, default=3, help="progressions to print")
    p.add_argument("--budget", type=int, default=None)

    p = add("ms-check", cmd_ms_check, "dimension-measure catalog axioms")
    p.add_argument("catalog", help="catalog file")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
