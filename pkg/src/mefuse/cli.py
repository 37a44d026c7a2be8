"""Command-line front end.

Subcommands:
  fuse        fuse a stack of LDR images into one output image
  simulate1   synthesise stacks from HDR radiance maps, fuse with and
              without enhancement, and score both against the input
  simulate2   the same scoring harness for directly captured LDR stacks

Every flag can also be supplied through a key=value configuration file
(--config); explicit flags win over the file.  MEFUSE_THREADS caps worker
parallelism.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .enhance import worker_threads
from .fuse import BACKENDS, fuse
from .hdrio import HdrFormatError, load_image, read_rgbe, save_ldr, synth_exposures
from .imgcore import ExposureStack, PipelineConfig, luminance_of
from .metrics import score_report, write_csv
from .tonemap import build_enhanced_stack

_LDR_SUFFIXES = (".png", ".ppm")


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # exit code 1 with usage plus a one-line diagnostic, not argparse's 2
    def error(self, message):
        raise _CliError(f"{self.format_usage()}{self.prog}: {message}")


def _ev_list(text: str):
    try:
        evs = tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad EV list {text!r}")
    if not evs:
        raise argparse.ArgumentTypeError("EV list is empty")
    return evs


def _add_pipeline_flags(parser):
    parser.add_argument("--config", metavar="FILE",
                        help="key=value file of flag defaults (flags win)")
    parser.add_argument("--sigma-spatial", type=float, default=16.0,
                        help="spatial sigma of the bilateral filter (pixels)")
    parser.add_argument("--sigma-range", type=float, default=3.0 / 255.0,
                        help="range sigma of the bilateral filter")
    parser.add_argument("--key", type=float, default=0.18,
                        help="middle-gray anchor for exposure compensation")
    parser.add_argument("--epsilon", type=float, default=1e-6,
                        help="luminance floor guarding logs and divisions")
    parser.add_argument("--backend", default="mertens", choices=sorted(BACKENDS),
                        help="fusion backend")
    parser.add_argument("--depth", type=int, default=None,
                        help="pyramid depth (default: floor(log2(min(w,h))))")


def _config_from(parser, argv):
    """Pre-scan argv for --config and fold the file into parser defaults."""
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None:
        return
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise _CliError(f"cannot read config file: {exc}")
    raw = {}
    for lineno, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise _CliError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        raw[key.replace("-", "_")] = value
    by_dest = {a.dest: a for a in parser._actions}
    defaults = {}
    for key, value in raw.items():
        action = by_dest.get(key)
        if action is None:
            raise _CliError(f"{path}: unknown option {key!r}")
        if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            defaults[key] = value.lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            try:
                defaults[key] = action.type(value)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise _CliError(f"{path}: bad value for {key}: {exc}")
        else:
            defaults[key] = value
    parser.set_defaults(**defaults)


def _pipeline_config(args) -> PipelineConfig:
    try:
        return PipelineConfig(
            sigma_spatial=args.sigma_spatial,
            sigma_range=args.sigma_range,
            key=args.key,
            epsilon=args.epsilon,
            backend=args.backend,
            pyramid_depth=args.depth,
            ev_offsets=getattr(args, "evs", (-1.0, 0.0, 1.0)),
        )
    except ValueError as exc:
        raise _CliError(str(exc))


def _load_stack(paths) -> ExposureStack:
    """Load LDR images and order them darkest first by mean luminance."""
    images = [load_image(p) for p in paths]
    order = sorted(range(len(images)),
                   key=lambda i: float(luminance_of(images[i]).mean()))
    return ExposureStack(images=tuple(images[i] for i in order))


def _open_report(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _dump_stack(stack, outdir, stem, tag):
    for k, img in enumerate(stack.images, start=1):
        save_ldr(img, Path(outdir) / f"{stem}-{tag}-{k}.png")


# --- subcommands -------------------------------------------------------------

def _cmd_fuse(args) -> int:
    if not args.inputs:
        args.parser.error("at least one input image is required")
    cfg = _pipeline_config(args)
    stack = _load_stack(args.inputs)
    if not args.skip_enhance:
        stack = build_enhanced_stack(stack, cfg)
    save_ldr(fuse(stack, cfg), args.output)
    return 0


def _score_rows(stem, stack, original, proposed):
    j = (stack.n + 2) // 2
    rows = score_report([(stem, stack.images[j - 1])], method_id="input")
    rows += score_report([(stem, original)], method_id="original")
    rows += score_report([(stem, proposed)], method_id="proposed")
    return rows


def _run_harness(args, jobs) -> int:
    """Shared simulate1/simulate2 loop: jobs yield (stem, stack)."""
    cfg = _pipeline_config(args)
    rows = []
    failures = 0
    total = 0
    for stem, build in jobs:
        total += 1
        try:
            stack = build()
            original = fuse(stack, cfg)
            enhanced = build_enhanced_stack(stack, cfg)
            proposed = fuse(enhanced, cfg)
            outdir = Path(args.outdir)
            outdir.mkdir(parents=True, exist_ok=True)
            save_ldr(original, outdir / f"{stem}-original.png")
            save_ldr(proposed, outdir / f"{stem}-proposed.png")
            if args.dump_stacks:
                _dump_stack(stack, outdir, stem, "input")
                _dump_stack(enhanced, outdir, stem, "enhanced")
            rows += _score_rows(stem, stack, original, proposed)
        except (OSError, ValueError) as exc:
            failures += 1
            print(f"error: {stem}: {exc}", file=sys.stderr)
    if rows:
        stream, close = _open_report(args.report)
        try:
            write_csv(rows, stream)
        finally:
            if close:
                stream.close()
    return 1 if failures == total else 0


def _cmd_simulate1(args) -> int:
    if not args.inputs:
        args.parser.error("at least one HDR input is required")

    def make_job(path):
        def build():
            with open(path, "rb") as fh:
                hdr = read_rgbe(fh.read())
            return synth_exposures(hdr, args.evs, args.anchor_key,
                                   epsilon=args.epsilon)
        return Path(path).stem, build

    return _run_harness(args, [make_job(p) for p in args.inputs])


def _iter_stack_groups(inputs):
    """Directories become one stack each; loose files form a single stack."""
    loose = []
    for item in inputs:
        if os.path.isdir(item):
            members = sorted(
                str(p) for p in Path(item).iterdir()
                if p.suffix.lower() in _LDR_SUFFIXES
            )
            yield Path(item).name, members
        else:
            loose.append(item)
    if loose:
        yield Path(loose[0]).stem, loose


def _cmd_simulate2(args) -> int:
    if not args.inputs:
        args.parser.error("at least one LDR stack (directory or files) is required")
    jobs = []
    for stem, members in _iter_stack_groups(args.inputs):
        def build(members=members, stem=stem):
            if not members:
                raise ValueError("no LDR images in stack")
            return _load_stack(members)
        jobs.append((stem, build))
    return _run_harness(args, jobs)


# --- entry point --------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="mefuse",
                     description="Multi-exposure fusion with exposure compensation")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p_fuse = sub.add_parser("fuse", help="fuse a stack of LDR images",
                            description="Fuse LDR images (ordered by brightness "
                                        "internally) into a single image.")
    p_fuse.add_argument("inputs", nargs="*", metavar="IMAGE")
    p_fuse.add_argument("-o", "--output", default="fused.png",
                        help="output path (.png or .ppm)")
    p_fuse.add_argument("--skip-enhance", action="store_true",
                        help="fuse the raw inputs without the enhancement chain")
    _add_pipeline_flags(p_fuse)
    p_fuse.set_defaults(func=_cmd_fuse, parser=p_fuse)

    p_s1 = sub.add_parser("simulate1", help="HDR-driven evaluation harness",
                          description="Synthesise exposure stacks from HDR "
                                      "radiance maps, fuse them raw (original) and "
                                      "enhanced (proposed), and score both.")
    p_s1.add_argument("inputs", nargs="*", metavar="HDR")
    p_s1.add_argument("--evs", type=_ev_list, default=(-1.0, 0.0, 1.0),
                      help="comma-separated EV offsets, e.g. --evs=-1,0,1 "
                           "(the default)")
    p_s1.add_argument("--anchor-key", type=float, default=0.18,
                      help="geometric-mean luminance of the 0 EV rendering")
    p_s1.add_argument("--report", default="-", help="CSV output path ('-' = stdout)")
    p_s1.add_argument("--outdir", default=".", help="directory for fused images")
    p_s1.add_argument("--dump-stacks", action="store_true",
                      help="also write the input and enhanced stack members")
    _add_pipeline_flags(p_s1)
    p_s1.set_defaults(func=_cmd_simulate1, parser=p_s1)

    p_s2 = sub.add_parser("simulate2", help="LDR-stack evaluation harness",
                          description="Score original vs proposed fusion for "
                                      "directly captured LDR stacks (each "
                                      "directory is one stack; loose files form "
                                      "a single stack).")
    p_s2.add_argument("inputs", nargs="*", metavar="STACK")
    p_s2.add_argument("--report", default="-", help="CSV output path ('-' = stdout)")
    p_s2.add_argument("--outdir", default=".", help="directory for fused images")
    p_s2.add_argument("--dump-stacks", action="store_true",
                      help="also write the enhanced stack members")
    _add_pipeline_flags(p_s2)
    p_s2.set_defaults(func=_cmd_simulate2, parser=p_s2)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        worker_threads()  # validate MEFUSE_THREADS before doing any work
        ns = parser.parse_args(argv)
        if getattr(ns, "func", None) is None:
            parser.print_usage(sys.stderr)
            print("mefuse: a command is required", file=sys.stderr)
            return 1
        if getattr(ns, "config", None):
            # fold the config file into the defaults, then reparse so that
            # explicitly given flags win
            _config_from(_subparser_for(parser, ns.command), argv[1:])
            ns = parser.parse_args(argv)
        return ns.func(ns)
    except _CliError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (HdrFormatError, OSError, ValueError) as exc:
        print(f"mefuse: {exc}", file=sys.stderr)
        return 1


def _subparser_for(parser, command):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]
    raise KeyError(command)


if __name__ == "__main__":
    raise SystemExit(main())
