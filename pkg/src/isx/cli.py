"""Command-line front end.

Exit codes: 0 success, 1 invalid data or failed precondition, 2 usage error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .approximation import (
    Approximation,
    check_approximation,
    cone_data,
    default_approximation,
    obstructions_vanish,
    witt_approximation,
)
from .fixtures import FIXTURES, emit_fixture
from .generate import GenProfile, generate_instance
from .globalspace import intersection_space
from .instance import Instance
from .linalg import format_fraction
from .pairing import signature_report
from .report import IsxError
from .tube import dual


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _Usage()


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("file", help="instance JSON file, or - for standard input")
    data.add_argument("--witt-approx", action="store_true",
                      help="use the annihilator approximation instead of the default one")

    p = _Parser(prog="isx", description="Algebraic intersection spaces as exact linear algebra.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("validate", parents=[common, data], help="check the tube and complement data")
    sub.add_parser("approx", parents=[common, data], help="emit the approximation(s) used")
    sub.add_parser("obstructions", parents=[common, data], help="local duality obstructions per degree")
    sub.add_parser("homology", parents=[common, data], help="per-degree dimensions of the intersection space")
    sub.add_parser("signature", parents=[common, data], help="middle pairing signature against Novikov")
    g = sub.add_parser("gen", parents=[common], help="generate a random valid instance")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--dimension", type=int, required=True)
    g.add_argument("--adversarial", action="store_true")
    g.add_argument("--non-witt", action="store_true")
    g.add_argument("--out")
    f = sub.add_parser("fixture", parents=[common], help="emit an embedded instance")
    f.add_argument("name", choices=FIXTURES)
    f.add_argument("--out")
    return p


def _read(path: str) -> Instance:
    if path == "-":
        text = sys.stdin.read()
    else:
        p = Path(path)
        if not p.is_file():
            raise FileNotFoundError(f"file not found: {path}")
        text = p.read_text()
    return io.loads_instance(text)


def _approximations(inst: Instance, witt_approx: bool) -> dict[str, Approximation]:
    t = inst.tube
    if witt_approx:
        a = witt_approximation(t)
        return {"p": a, "q": a}
    out = {}
    for x in t.perversities:
        out[x] = inst.approximations.get(x) or default_approximation(t, x)
    if t.witt:
        out["q"] = out["p"]
    return out


def _require_valid(inst: Instance) -> None:
    inst.validate().raise_if_failed()
    for a in inst.approximations.values():
        check_approximation(inst.tube, a).raise_if_failed()


def _table(header: list[str], rows: list[list]) -> str:
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells) + "\n"


def _cmd_validate(args, inst: Instance):
    report = inst.validate()
    if report.ok:
        for x, a in sorted(inst.approximations.items()):
            for f in check_approximation(inst.tube, a):
                report.add(f"approximation {x}: {f.check}", f.degree, f.detail)
    data = {"name": inst.name, **report.to_dict()}
    text = f"{inst.name}: valid\n" if report.ok else \
        f"{inst.name}: invalid\n" + "".join(f"  {f}\n" for f in report)
    return data, text, 0 if report.ok else 1


def _cmd_approx(args, inst: Instance):
    _require_valid(inst)
    approx = _approximations(inst, args.witt_approx)
    data = {"approximations": io.approximations_to_dict(inst.witt, approx)}
    lines = []
    for x in inst.tube.perversities:
        a = approx[x]
        lines.append(f"perversity {x}: dims {list(a.space.dims)}")
        for i in a.space.degrees():
            blk = a.f.block(i)
            if blk.cols:
                rows = "; ".join(" ".join(format_fraction(v) for v in row) for row in blk.tolist())
                lines.append(f"  f[{i}] = [{rows}]")
    return data, "\n".join(lines) + "\n", 0


def _cmd_obstructions(args, inst: Instance):
    _require_valid(inst)
    approx = _approximations(inst, args.witt_approx)
    rep = obstructions_vanish(inst.tube, approx["p"], approx["q"])
    rows = [[r, "yes" if d.diagram_method else "no", "yes" if d.pairing_method else "no"]
            for r, d in rep.degrees.items()]
    text = _table(["degree", "diagram commutes", "pairing vanishes"], rows)
    text += f"obstructions vanish: {'yes' if rep.vanish else 'no'}\n"
    return rep.to_dict(), text, 0


def _cmd_homology(args, inst: Instance):
    _require_valid(inst)
    t, N = inst.tube, inst.N
    approx = _approximations(inst, args.witt_approx)
    ix = {x: intersection_space(t, inst.glob, approx[x]) for x in t.perversities}
    cones = {x: cone_data(t, approx[x]).H_cf for x in t.perversities}
    rows, degrees = [], []
    for r in t.B.degrees():
        entry = {"degree": r}
        row = [r]
        for x in t.perversities:
            partner = ix[x if t.witt else dual(x)].space.dim(N - r)
            entry[x] = {"H_cf": cones[x].dim(r), "H_ix": ix[x].space.dim(r), "dual_H_ix": partner}
            row += [cones[x].dim(r), ix[x].space.dim(r), partner]
        rows.append(row)
        degrees.append(entry)
    header = ["degree"]
    for x in t.perversities:
        tag = "" if t.witt else f"({x})"
        header += [f"H_cf{tag}", f"H_ix{tag}", f"H_ix{tag} at N-r" if t.witt else f"H_ix({dual(x)}) at N-r"]
    return {"name": inst.name, "dimension": N, "degrees": degrees}, _table(header, rows), 0


def _cmd_signature(args, inst: Instance):
    _require_valid(inst)
    approx = _approximations(inst, args.witt_approx)
    rep = signature_report(inst.tube, inst.glob, approx["p"])
    text = (f"sigma_ix = {rep.sigma_ix}\nsigma_novikov = {rep.sigma_novikov}\n"
            f"equal = {rep.equal}\nsymmetric = {rep.symmetric}\nblock form = {rep.block_form}\n"
            f"novikov block match = {rep.novikov_match}\nuntwisted = {rep.untwisted}\n"
            f"middle gram size = {rep.gram_ix.rows}\n")
    return rep.to_dict(), text, 0 if rep.equal else 1


def _emit(args, inst: Instance):
    text = io.dump_instance(inst)
    if args.out:
        Path(args.out).write_text(text)
        return {"written": args.out}, f"wrote {args.out}\n", 0
    return io.instance_to_dict(inst), text, 0


def _cmd_gen(args, _):
    profile = GenProfile.random(args.seed, args.dimension, args.adversarial, not args.non_witt)
    return _emit(args, generate_instance(profile))


def _cmd_fixture(args, _):
    return _emit(args, emit_fixture(args.name))


COMMANDS = {
    "validate": _cmd_validate, "approx": _cmd_approx, "obstructions": _cmd_obstructions,
    "homology": _cmd_homology, "signature": _cmd_signature, "gen": _cmd_gen, "fixture": _cmd_fixture,
}


def run(argv: list[str] | None = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except _Usage:
        return 2
    except SystemExit as e:  # --help
        return int(e.code or 0)
    try:
        inst = _read(args.file) if hasattr(args, "file") else None
        data, text, code = COMMANDS[args.command](args, inst)
    except FileNotFoundError as e:
        print(f"isx: error: {e}", file=sys.stderr)
        return 1
    except (IsxError, ValueError) as e:
        print(f"isx: error: {e}", file=sys.stderr)
        return 1
    if args.format == "json" and not (args.command in ("gen", "fixture") and not getattr(args, "out", None)):
        sys.stdout.write(io.dumps(data))
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())
