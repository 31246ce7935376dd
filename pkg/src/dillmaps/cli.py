"""Command-line front end.

Exit codes: 0 success, 2 precondition or hypothesis violation, 3 budget
exhausted (including conjugation timeouts), 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import conjugation, dill, enumeration, recognizer, spectra, substitution
from .config import RunConfig
from .errors import BudgetExceeded, DillError, ParseError, PreconditionError
from .substitution import Substitution, load_substitution

EXIT_OK, EXIT_INTERNAL, EXIT_PRECONDITION, EXIT_BUDGET = 0, 1, 2, 3


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def text(self, s: str):
        if self.fmt == "text":
            self.stream.write(s if s.endswith("\n") else s + "\n")

    def record(self, **kw):
        if self.fmt == "json":
            self.stream.write(json.dumps(kw, sort_keys=True) + "\n")


# --- commands ----------------------------------------------------------------

def cmd_analyze(cfg: RunConfig, out: Output) -> int:
    s = load_substitution(cfg.inputs[0])
    m = s.matrix
    poly = spectra.char_poly(m)
    primitive = substitution.is_primitive(s)
    info = {
        "substitution": str(s),
        "matrix": [list(r) for r in m],
        "char_poly": str(poly),
        "uniform": substitution.is_uniform(s),
        "injective": substitution.is_injective(s),
        "primitive": primitive,
        "pisot": spectra.is_pisot(m),
        "pisot_strict": spectra.is_pisot(m, strict=True),
    }
    if primitive:
        lam = spectra.dominant_eigenvalue(m)
        info["lambda"] = str(lam)
        info["lambda_lower"] = float(lam.lower)
        info["lambda_upper"] = float(lam.upper)
        info["aperiodic_heuristic"] = substitution.is_aperiodic_heuristic(s)
        rep = dill.invariants(dill.from_substitution(s), cfg.horizon, cfg.threshold)
        info.update(Z=rep.Z_estimate, D_observed=rep.D_observed, D_bounded=rep.D_bounded)
        if info["aperiodic_heuristic"]:
            r = recognizer.build_recognizer(s, max(cfg.max_radius, 16), cfg.coverage_factor)
            info["recognizer_radius"] = r.radius
        else:
            info["recognizer_radius"] = None
    out.record(command="analyze", **info)
    lines = [f"{k}: {v}" for k, v in info.items() if k not in ("lambda_lower", "lambda_upper")]
    out.text("\n".join(lines))
    return EXIT_OK


def cmd_language(cfg: RunConfig, out: Output) -> int:
    s = load_substitution(cfg.inputs[0])
    n = cfg.max_radius
    words = sorted(substitution.language(s, n))
    fmt = s.alphabet.format
    out.record(command="language", length=n, count=len(words), words=[fmt(w) for w in words])
    out.text("\n".join([fmt(w) for w in words] + [f"count={len(words)} length={n}"]))
    return EXIT_OK


def cmd_invert(cfg: RunConfig, out: Output) -> int:
    s = load_substitution(cfg.inputs[0])
    table = dill.almost_inverse(s, max_radius=max(cfg.max_radius, 16), coverage_factor=cfg.coverage_factor)
    out.record(command="invert", table=table.dumps(), in_radius=table.in_radius, hash=table.fingerprint())
    out.text(table.dumps())
    return EXIT_OK


def cmd_recognize(cfg: RunConfig, out: Output, word: str | None) -> int:
    s = load_substitution(cfg.inputs[0])
    r = recognizer.build_recognizer(s, max(cfg.max_radius, 16), cfg.coverage_factor)
    if word is None:
        out.record(command="recognize", radius=r.radius, table=r.dumps())
        out.text(r.dumps())
    else:
        decoded = s.alphabet.format(recognizer.decode(r, s.alphabet.parse(word)))
        out.record(command="recognize", radius=r.radius, word=word, decoded=decoded)
        out.text(decoded)
    return EXIT_OK


def _load_map(path: str, tau: Substitution, rho: Substitution) -> dill.DillTable:
    return dill.parse_table(Path(path).read_text(encoding="utf-8"), tau, rho)


def cmd_conjugate(cfg: RunConfig, out: Output) -> int:
    tau = load_substitution(cfg.inputs[0])
    rho = load_substitution(cfg.inputs[1])
    f = _load_map(cfg.inputs[2], tau, rho)
    t = conjugation.trajectory(f, tau, rho, cfg.steps, horizon=min(cfg.horizon, 2000), tol=cfg.tolerance)
    for i, (table, rep) in enumerate(t.steps):
        out.record(command="conjugate", step=i, I=table.in_radius, O=table.out_radius,
                   Z=rep.Z_estimate, D=rep.D_observed, hash=table.fingerprint())
    out.text(t.report().rstrip("\n"))
    if t.cycle is None:
        if cfg.steps == 0:
            return EXIT_OK
        out.record(command="conjugate", timeout=True)
        return EXIT_BUDGET
    out.record(command="conjugate", cycle_entry=t.cycle[0], cycle_period=t.cycle[1],
               D_ceiling=t.D_ceiling, I_ceiling=t.I_ceiling)
    rep = conjugation.reduce_to_representative(t, cfg.prefix_len, cfg.shift_bound)
    out.record(command="conjugate", k=rep.k, direction=rep.direction, representative=rep.g.dumps())
    out.text(f"representative: {rep}\n{rep.g.dumps()}")
    return EXIT_OK


def _class_report(cs: enumeration.MorphismClassSet, command: str, out: Output):
    for c, rep in enumerate(cs.representatives):
        out.record(command=command, cls=c, size=cs.class_size(c), min_radius=cs.min_radius(c),
                   verified_to=cs.verify_len, table=rep.dumps())
    per_radius = {r: sum(1 for c in range(len(cs)) if cs.min_radius(c) <= r) for r in range(cs.radius + 1)}
    out.record(command=command, classes=len(cs), radius=cs.radius, verified_to=cs.verify_len,
               per_radius={str(k): v for k, v in per_radius.items()})
    out.text(cs.report().rstrip("\n"))
    out.text("per-radius classes: " + " ".join(f"r{r}={n}" for r, n in per_radius.items()))


def cmd_endos(cfg: RunConfig, out: Output) -> int:
    s = load_substitution(cfg.inputs[0])
    cs = enumeration.enumerate_block_maps(s, s, cfg.max_radius, cfg.verify_len, cfg.node_budget)
    _class_report(cs, "endos", out)
    return EXIT_OK


def cmd_morphisms(cfg: RunConfig, out: Output, allow_mismatch: bool) -> int:
    tau = load_substitution(cfg.inputs[0])
    rho = load_substitution(cfg.inputs[1])
    ok, _ = spectra.eigenvalues_match(tau.matrix, rho.matrix, cfg.tolerance)
    if not ok:
        msg = "dominant eigenvalues differ; block maps between these subshifts are not expected"
        if not allow_mismatch:
            raise PreconditionError(msg + " (pass --allow-eigenvalue-mismatch to search anyway)")
        print(f"warning: {msg}", file=sys.stderr)
    cs = enumeration.enumerate_block_maps(tau, rho, cfg.max_radius, cfg.verify_len, cfg.node_budget)
    _class_report(cs, "morphisms", out)
    return EXIT_OK


def cmd_example_family(cfg: RunConfig, out: Output, m: int, n: int, variant: str, skip_endos: bool) -> int:
    try:
        s = enumeration.build_example_family(m, n, variant)
    except ValueError as exc:
        raise PreconditionError(str(exc)) from None
    out.record(command="example-family", m=m, n=n, variant=variant, substitution=s.dumps())
    out.text(s.dumps())
    if not skip_endos:
        cs = enumeration.enumerate_block_maps(s, s, cfg.max_radius, cfg.verify_len, cfg.node_budget)
        _class_report(cs, "example-family", out)
    return EXIT_OK


# --- argument parsing --------------------------------------------------------------

def _add_knobs(p: argparse.ArgumentParser, **defaults):
    base = RunConfig()
    p.add_argument("--format", dest="output_format", choices=["text", "json"], default="text",
                   help="text, or json-lines")
    p.add_argument("--horizon", type=int, default=base.horizon)
    p.add_argument("--verify-len", dest="verify_len", type=int, default=None)
    p.add_argument("--max-radius", dest="max_radius", type=int, default=defaults.get("max_radius", base.max_radius))
    p.add_argument("--shift-bound", dest="shift_bound", type=int, default=base.shift_bound)
    p.add_argument("--coverage-factor", dest="coverage_factor", type=int, default=base.coverage_factor)
    p.add_argument("--tolerance", type=float, default=base.tolerance)
    p.add_argument("--steps", type=int, default=base.steps)
    p.add_argument("--node-budget", dest="node_budget", type=int, default=base.node_budget)
    p.add_argument("--threshold", type=float, default=base.threshold)
    p.add_argument("--prefix-len", dest="prefix_len", type=int, default=base.prefix_len)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dillmaps", description="Morphisms between substitution subshifts.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="matrix, spectrum, structural predicates, balance, recognizer")
    p.add_argument("subst")
    _add_knobs(p)

    p = sub.add_parser("language", help="factors of a given length")
    p.add_argument("subst")
    p.add_argument("-n", "--length", type=int, required=True)
    _add_knobs(p)

    p = sub.add_parser("invert", help="almost inverse table of a substitution")
    p.add_argument("subst")
    _add_knobs(p)

    p = sub.add_parser("recognize", help="recognizer table, or decode a word")
    p.add_argument("subst")
    p.add_argument("--word")
    _add_knobs(p)

    p = sub.add_parser("conjugate", help="conjugation trajectory of a block map")
    p.add_argument("tau")
    p.add_argument("rho")
    p.add_argument("map", help="table file ('radius: r' or 'in_radius: I' header)")
    _add_knobs(p)

    p = sub.add_parser("endos", help="endomorphisms up to shift")
    p.add_argument("subst")
    _add_knobs(p)

    p = sub.add_parser("morphisms", help="block maps between two subshifts up to shift")
    p.add_argument("tau")
    p.add_argument("rho")
    p.add_argument("--allow-eigenvalue-mismatch", action="store_true")
    _add_knobs(p)

    p = sub.add_parser("example-family", help="emit a family substitution and its endomorphisms")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--variant", choices=["uniform", "nonuniform"], default="uniform")
    p.add_argument("--skip-endos", action="store_true")
    _add_knobs(p, max_radius=None)
    return parser


def _config(args) -> RunConfig:
    inputs = [getattr(args, k) for k in ("subst", "tau", "rho", "map") if getattr(args, k, None)]
    knobs = {k: getattr(args, k) for k in (
        "horizon", "verify_len", "max_radius", "shift_bound", "coverage_factor", "tolerance",
        "steps", "node_budget", "threshold", "prefix_len", "output_format")}
    if args.command == "language":
        knobs["max_radius"] = args.length
    if args.command == "example-family" and knobs["max_radius"] is None:
        knobs["max_radius"] = args.n
    return RunConfig(command=args.command, inputs=inputs, **knobs)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    out = Output(cfg.output_format)
    try:
        if cfg.command == "analyze":
            return cmd_analyze(cfg, out)
        if cfg.command == "language":
            return cmd_language(cfg, out)
        if cfg.command == "invert":
            return cmd_invert(cfg, out)
        if cfg.command == "recognize":
            return cmd_recognize(cfg, out, args.word)
        if cfg.command == "conjugate":
            return cmd_conjugate(cfg, out)
        if cfg.command == "endos":
            return cmd_endos(cfg, out)
        if cfg.command == "morphisms":
            return cmd_morphisms(cfg, out, args.allow_eigenvalue_mismatch)
        if cfg.command == "example-family":
            return cmd_example_family(cfg, out, args.m, args.n, args.variant, args.skip_endos)
    except (PreconditionError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (DillError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_INTERNAL  # pragma: no cover - argparse restricts commands


if __name__ == "__main__":
    sys.exit(main())
