"""Command-line front end: ``tpictm segment | compare | gen``.

Exit codes: 0 converged, 1 error, 2 stopped at ``--max-iter`` without converging.
"""

import argparse
import json
import logging
from pathlib import Path
import sys

from . import io
from .scenes import RNG_ALGORITHM, SCENES, SyntheticSpec, generate, initial_mask
from .solver import CSV_FIELDS, ParameterError, SolverParams, run
from .topology import ConnectivityPair

EXIT_CONVERGED = 0
EXIT_ERROR = 1
EXIT_MAX_ITER = 2

log = logging.getLogger("tpictm")


class UsageError(ValueError):
    pass


def _add_run_args(p):
    p.add_argument("--input", required=True, type=Path, help="image to segment (PNG/PGM/PPM)")
    init = p.add_mutually_exclusive_group(required=True)
    init.add_argument("--init", type=Path, help="initial mask image")
    init.add_argument("--init-shape", metavar="NAME:ARGS",
                      help="named initializer, e.g. circle:0.5,0.5,0.3")
    p.add_argument("--model", choices=("cv", "lif"), default="cv")
    p.add_argument("--tau1", type=float, default=0.0)
    p.add_argument("--tau2", type=float, default=1e-3)
    p.add_argument("--lambda", dest="lam", type=float, default=0.01)
    p.add_argument("--delta", type=float, default=1e-3)
    p.add_argument("--lambda1", type=float, default=1.0)
    p.add_argument("--lambda2", type=float, default=1.0)
    p.add_argument("--eps", type=float, default=1e-8)
    p.add_argument("--tol", type=int, default=0)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--connectivity", default="4-8", help="foreground-background adjacency, 4-8 or 8-4")
    p.add_argument("--no-topology", action="store_true", help="plain ICTM without the topology check")
    p.add_argument("--snapshot-every", type=int, default=0, metavar="N")
    p.add_argument("--out", type=Path, default=Path("."))
    p.add_argument("--energy-csv", type=Path)
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(prog="tpictm", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    seg = sub.add_parser("segment", help="run TP-ICTM (or plain ICTM) on one image")
    _add_run_args(seg)

    cmp_ = sub.add_parser("compare", help="run with and without topology preservation")
    _add_run_args(cmp_)

    gen = sub.add_parser("gen", help="write a synthetic scene and its ground truth")
    gen.add_argument("--scene", choices=SCENES, required=True)
    gen.add_argument("--size", type=int, default=128)
    gen.add_argument("--sigma", type=float, default=0.0, help="Gaussian noise level")
    gen.add_argument("--density", type=float, default=0.05, help="hole density for pattern-interior")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", type=Path, default=Path("."))
    return parser


def _params(args, topology=None):
    try:
        pair = ConnectivityPair.parse(args.connectivity)
    except ValueError as exc:
        raise UsageError(f"--connectivity: {exc}")
    if args.snapshot_every < 0:
        raise UsageError("--snapshot-every must be >= 0")
    try:
        return SolverParams(
            tau1=args.tau1, tau2=args.tau2, lam=args.lam, tol=args.tol,
            max_iter=args.max_iter, pair=pair,
            topology=(not args.no_topology) if topology is None else topology,
            model=args.model, delta=args.delta, lambda1=args.lambda1,
            lambda2=args.lambda2, eps=args.eps,
        )
    except ParameterError as exc:
        raise UsageError(f"--{exc.name.replace('_', '-')}: {exc}")


def _inputs(args):
    image = io.load_image(args.input)
    if args.init is not None:
        u0 = io.load_mask(args.init)
        if u0.shape != image.shape:
            raise UsageError(f"--init: mask shape {u0.shape} differs from image {image.shape}")
    else:
        try:
            u0 = initial_mask(args.init_shape, image.shape)
        except ValueError as exc:
            raise UsageError(f"--init-shape: {exc}")
    return image, u0


def _solve(image, u0, params, out, csv_path, snapshot_every):
    out.mkdir(parents=True, exist_ok=True)

    def observer(k, mask, rec):
        if snapshot_every and (k + 1) % snapshot_every == 0:
            io.save_overlay(image, mask, out / f"snapshot_{k + 1:05d}.png")

    result = run(image, u0, params, observer=observer)
    io.save_mask(result.mask, out / "mask.png")
    io.write_energy_csv(result.trace, csv_path, CSV_FIELDS)
    return result


def _summary(label, result):
    last = result.trace[-1] if len(result.trace) else None
    energy = f"{last.total:.10g}" if last else "nan"
    fg = last.fg_components if last else 0
    bg = last.bg_components if last else 0
    return (
        f"{label}: iterations={result.iterations} energy={energy} "
        f"fg_components={fg} bg_components={bg} status={result.stop_reason}"
    )


def _metadata(args, params, extra=None):
    meta = {
        "command": args.command,
        "input": str(args.input),
        "init": str(args.init) if args.init else args.init_shape,
        "params": {
            "model": params.model, "tau1": params.tau1, "tau2": params.tau2,
            "lambda": params.lam, "delta": params.delta, "lambda1": params.lambda1,
            "lambda2": params.lambda2, "eps": params.eps, "tol": params.tol,
            "max_iter": params.max_iter, "connectivity": str(params.pair),
        },
        "seed": args.seed,
        "rng": RNG_ALGORITHM,
    }
    meta.update(extra or {})
    return meta


def segment_command(args):
    params = _params(args)
    image, u0 = _inputs(args)
    csv_path = args.energy_csv or args.out / "energy.csv"
    result = _solve(image, u0, params, args.out, csv_path, args.snapshot_every)
    meta = _metadata(args, params, {"topology": params.topology, "status": result.stop_reason,
                                    "iterations": result.iterations})
    (args.out / "run.json").write_text(json.dumps(meta, indent=2))
    print(_summary("tp-ictm" if params.topology else "ictm", result))
    return EXIT_CONVERGED if result.converged else EXIT_MAX_ITER


def compare_command(args):
    image, u0 = _inputs(args)
    results = {}
    for label, topology in (("tp-ictm", True), ("ictm", False)):
        params = _params(args, topology=topology)
        out = args.out / label
        if args.energy_csv is not None:
            csv_path = args.energy_csv.with_name(f"{args.energy_csv.stem}_{label}{args.energy_csv.suffix}")
        else:
            csv_path = out / "energy.csv"
        results[label] = _solve(image, u0, params, out, csv_path, args.snapshot_every)
        print(_summary(label, results[label]))
    meta = _metadata(args, params, {
        label: {"status": r.stop_reason, "iterations": r.iterations} for label, r in results.items()
    })
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "run.json").write_text(json.dumps(meta, indent=2))
    return EXIT_CONVERGED if all(r.converged for r in results.values()) else EXIT_MAX_ITER


def gen_command(args):
    try:
        spec = SyntheticSpec(args.scene, args.size, args.sigma, args.density, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc))
    image, truth = generate(spec)
    args.out.mkdir(parents=True, exist_ok=True)
    io.save_image(image, args.out / "image.png")
    io.save_mask(truth, args.out / "truth.png")
    meta = {"scene": spec.scene, "size": spec.size, "sigma": spec.sigma,
            "density": spec.density, "seed": spec.seed, "rng": RNG_ALGORITHM}
    (args.out / "scene.json").write_text(json.dumps(meta, indent=2))
    print(f"wrote {args.out / 'image.png'} and {args.out / 'truth.png'}")
    return EXIT_CONVERGED


COMMANDS = {"segment": segment_command, "compare": compare_command, "gen": gen_command}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, io.ImageFormatError, FileNotFoundError, ValueError) as exc:
        print(f"tpictm: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
