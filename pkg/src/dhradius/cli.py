"""Command-line interface: ``dhradius {validate,radius,backward-error,bench,robust,generate}``.

Exit codes: 0 success, 1 I/O error, 2 invalid input, 3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import logging
import math
import os
import sys as _sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import io
from . import omega as om
from .backward_error import eta_s
from .estimators import compute_radius
from .exceptions import (
    AllEvaluationsFailed,
    DHRadiusError,
    IllConditioned,
    NotAsymptoticallyStable,
    NotPositiveDefinite,
    NotStableError,
    ShapeError,
    NotHermitianError,
    InvalidOverride,
)
from .robust import optimal_representation, representation_from_factor
from .system import brake_squeal, random_dh, validate

log = logging.getLogger("dhradius")

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_SOLVER = 0, 1, 2, 3
CLASSES = ("unstructured", "s", "si", "sd")
FAST_GRID = 101
FAST_MULTISTART = 3


class CLIError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def parse_int_list(text: str) -> list[int]:
    """``"3..9"``, ``"100..200:20"`` (step 20) or ``"2,3,5"``; pieces may be mixed with commas."""
    out: list[int] = []
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        if ".." in piece:
            rng, _, step = piece.partition(":")
            a, b = rng.split("..")
            step_i = int(step) if step else 1
            if step_i <= 0:
                raise ValueError(f"step must be positive in {piece!r}")
            out.extend(range(int(a), int(b) + 1, step_i))
        else:
            out.append(int(piece))
    if not out:
        raise ValueError(f"empty list {text!r}")
    return out


def parse_complex(text: str) -> complex:
    parts = [p for p in text.replace(" ", "").split(",") if p != ""]
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise ValueError(f"expected 're,im', got {text!r}")


def _emit(args, payload, manifest):
    text = io.dump_payload(payload, manifest)
    if getattr(args, "output", None):
        manifest.outputs.append(str(args.output))
        text = io.dump_payload(payload, manifest)
        io.atomic_write_text(args.output, text + "\n")
    else:
        print(text)


def _load_system(path):
    try:
        return io.load_system(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise CLIError(f"cannot read system file {path}: {exc}", EXIT_IO) from exc
    except (ValueError, TypeError, KeyError) as exc:
        raise CLIError(f"invalid system file {path}: {exc}", EXIT_INVALID) from exc


def _interval(args):
    lo, hi = getattr(args, "omega_min", None), getattr(args, "omega_max", None)
    if lo is None and hi is None:
        return None
    if lo is None or hi is None:
        raise CLIError("--omega-min and --omega-max must be given together", EXIT_INVALID)
    if not lo < hi:
        raise CLIError(f"empty frequency window [{lo}, {hi}]", EXIT_INVALID)
    return (lo, hi)


def cmd_validate(args):
    sys = _load_system(args.input)
    rep = validate(sys)
    status = "valid" if rep.is_dh else "invalid"
    stab = "asymptotically stable" if rep.asymptotically_stable else "not asymptotically stable"
    print(f"{status}, {stab}", file=_sys.stderr)
    for msg in rep.failures():
        print(f"  {msg}", file=_sys.stderr)
    _emit(args, {"report": rep.as_dict()}, io.RunManifest("validate", str(args.input)))
    return EXIT_OK if rep.is_dh else EXIT_INVALID


def cmd_radius(args):
    sys = _load_system(args.input)
    rep = validate(sys)
    if not rep.is_dh:
        raise CLIError("not a DH system: " + "; ".join(rep.failures()), EXIT_INVALID)
    kinds = CLASSES if args.cls == "all" else (args.cls,)
    opts = dict(grid_points=args.grid, interval=_interval(args), refine_tol=args.tol, tol=args.scf_tol)
    manifest = io.RunManifest("radius", str(args.input), options=dict(opts, cls=args.cls))
    rows, certs = [], {}
    for kind in kinds:
        t0 = time.perf_counter()
        res = compute_radius(sys, kind, **opts)
        manifest.timings[kind] = time.perf_counter() - t0
        rows.append(io.result_to_dict(res))
        if res.certificate is not None:
            certs[kind] = io.pair_to_dict(res.certificate)
    if args.certificate:
        if not certs:
            log.warning("no certificate available for class %s", args.cls)
        cpay = {"certificates": certs, "omega_star": {r["class"]: r["omega_star"] for r in rows}}
        io.atomic_write_text(args.certificate, io.dump_payload(cpay, manifest) + "\n")
        manifest.outputs.append(str(args.certificate))
    payload = rows[0] if len(rows) == 1 else {"results": rows}
    _emit(args, payload, manifest)
    return EXIT_OK


def cmd_backward_error(args):
    sys = _load_system(args.input)
    rep = validate(sys)
    if not rep.is_dh:
        raise CLIError("not a DH system: " + "; ".join(rep.failures()), EXIT_INVALID)
    try:
        lam = parse_complex(args.lam)
    except ValueError as exc:
        raise CLIError(str(exc), EXIT_INVALID) from exc
    t0 = time.perf_counter()
    r = eta_s(sys, lam)
    manifest = io.RunManifest("backward-error", str(args.input), options={"lambda": [lam.real, lam.imag]},
                              timings={"eta_s": time.perf_counter() - t0})
    payload = {"eta": r.eta, "t0": float(r.t[0]), "t1": float(r.t[1]), "g_star": r.g_star,
               "status": r.status, "lambda": [lam.real, lam.imag]}
    _emit(args, payload, manifest)
    return EXIT_OK


def bench_row(suite: str, n: int, seed: int, fast: bool = False) -> dict:
    """All four radii of one benchmark system, with wall times and the ordering check."""
    if suite == "random":
        sys = random_dh(n, seed)
    elif suite == "brake":
        if n % 2:
            raise ValueError(f"brake systems have even size, got {n}")
        sys = brake_squeal(n // 2, seed)
    else:
        raise ValueError(f"unknown suite {suite!r}")
    opts = {"grid_points": FAST_GRID if fast else om.DEFAULT_GRID}
    if fast:
        opts["multistart"] = FAST_MULTISTART
    row: dict = {"n": n, "seed": seed}
    vals = {}
    for kind in CLASSES:
        t0 = time.perf_counter()
        res = compute_radius(sys, kind, certificate=False, **opts)
        row[f"t_{kind}"] = time.perf_counter() - t0
        vals[kind] = res
    r, rs, rsi, rsd = (vals[k].value for k in CLASSES)
    row.update({"r": r, "r_S": rs, "r_Si": rsi, "r_Si_qualifier": "" if vals["si"].is_exact else "l.b.",
                "r_Sd": rsd})
    slack = 1e-6
    if vals["si"].is_exact:
        ok = r <= rs + slack and rs <= rsi + slack and rsi <= rsd + slack
    else:
        # a lower bound on r^{S_i} need not dominate r^S
        ok = r <= rs + slack and rs <= rsd + slack and rsi <= rsd + slack
    row["chain_ok"] = bool(ok)
    return row


BENCH_COLUMNS = ["n", "seed", "r", "r_S", "r_Si", "r_Si_qualifier", "r_Sd", "chain_ok",
                 "t_unstructured", "t_s", "t_si", "t_sd"]


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.15g}"
    return str(v)


def rows_to_csv(rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_COLUMNS)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in BENCH_COLUMNS])
    return buf.getvalue()


def _threads():
    try:
        return max(1, int(os.environ.get("DHRADIUS_THREADS", "1")))
    except ValueError:
        return 1


def cmd_bench(args):
    try:
        sizes = parse_int_list(args.sizes)
        seeds = parse_int_list(args.seeds)
    except ValueError as exc:
        raise CLIError(str(exc), EXIT_INVALID) from exc
    if args.suite == "brake" and any(n % 2 for n in sizes):
        raise CLIError("brake suite sizes must be even (system size 2m)", EXIT_INVALID)
    jobs = [(args.suite, n, s, args.fast) for n in sizes for s in seeds]
    t0 = time.perf_counter()
    workers = min(_threads(), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(bench_row, *zip(*jobs)))
    else:
        rows = [bench_row(*j) for j in jobs]
    out = Path(args.out)
    csv_path = out / f"{args.suite}.csv"
    io.atomic_write_text(csv_path, rows_to_csv(rows))
    manifest = io.RunManifest("bench", None, options={"suite": args.suite, "sizes": sizes, "seeds": seeds,
                                                      "fast": args.fast, "workers": workers},
                              outputs=[str(csv_path)], timings={"total": time.perf_counter() - t0})
    io.atomic_write_text(out / f"{args.suite}.manifest.json", io.dump_payload({}, manifest) + "\n")
    bad = [r for r in rows if not r["chain_ok"]]
    for r in bad:
        print(f"ordering chain violated: n={r['n']} seed={r['seed']}", file=_sys.stderr)
    print(f"wrote {csv_path} ({len(rows)} rows, {len(bad)} violations)", file=_sys.stderr)
    return EXIT_OK


def cmd_robust(args):
    try:
        A = io.load_matrix(args.matrix)
    except (OSError, json.JSONDecodeError) as exc:
        raise CLIError(f"cannot read matrix file {args.matrix}: {exc}", EXIT_IO) from exc
    except (ValueError, TypeError) as exc:
        raise CLIError(f"invalid matrix file {args.matrix}: {exc}", EXIT_INVALID) from exc
    manifest = io.RunManifest("robust", str(args.matrix),
                              options={"epsilon": args.epsilon, "compare_z": args.compare_z, "seed": args.seed})
    t0 = time.perf_counter()
    rep = optimal_representation(A, args.epsilon)
    sys = rep.system
    radii = {k: compute_radius(sys, k, certificate=False).value for k in CLASSES}
    manifest.timings["optimal"] = time.perf_counter() - t0
    payload = {"mu": rep.mu, "epsilon": rep.epsilon, "J": rep.J, "R": rep.R, "X": rep.X,
               "radii": radii, "diagnostics": rep.diagnostics}
    if args.compare_z:
        t0 = time.perf_counter()
        rng = np.random.default_rng(args.seed)
        n = A.shape[0]
        comp = []
        for _ in range(args.compare_z):
            Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
            try:
                zr = representation_from_factor(A, Z)
            except NotPositiveDefinite:
                continue
            comp.append(compute_radius(zr.system, "unstructured").value)
        manifest.timings["compare"] = time.perf_counter() - t0
        payload["comparison_unstructured_radii"] = comp
        payload["optimal_dominates"] = bool(all(radii["unstructured"] >= c - 1e-6 for c in comp))
    _emit(args, payload, manifest)
    return EXIT_OK


def cmd_generate(args):
    if args.kind == "random":
        sys = random_dh(args.n, args.seed)
    else:
        sys = brake_squeal(args.n, args.seed)
    text = json.dumps(io.system_to_dict(sys), indent=1)
    if args.output:
        io.atomic_write_text(args.output, text + "\n")
    else:
        print(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dhradius", description="Stability radii of dissipative-Hamiltonian systems.")
    p.add_argument("-v", "--verbose", action="store_true", help="log solver warnings")
    sub = p.add_subparsers(dest="command", required=True)

    def add_out(sp):
        sp.add_argument("-o", "--output", type=Path, help="write JSON here instead of stdout")

    sp = sub.add_parser("validate", help="check DH structure and asymptotic stability")
    sp.add_argument("input", type=Path)
    add_out(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("radius", help="compute stability radii")
    sp.add_argument("input", type=Path)
    sp.add_argument("--class", dest="cls", choices=CLASSES + ("all",), default="all")
    sp.add_argument("--tol", type=float, default=1e-10, help="relative frequency refinement tolerance")
    sp.add_argument("--scf-tol", type=float, default=1e-10, help="SCF residual tolerance (sd)")
    sp.add_argument("--grid", type=int, default=om.DEFAULT_GRID, help="frequency grid points")
    sp.add_argument("--omega-min", type=float)
    sp.add_argument("--omega-max", type=float)
    sp.add_argument("--certificate", type=Path, help="write optimal perturbations to this JSON file")
    add_out(sp)
    sp.set_defaults(func=cmd_radius)

    sp = sub.add_parser("backward-error", help="eigenvalue backward error at a shift")
    sp.add_argument("input", type=Path)
    sp.add_argument("--lambda", dest="lam", required=True, help="shift as re,im; write --lambda=-1,0 for a negative real part")
    add_out(sp)
    sp.set_defaults(func=cmd_backward_error)

    sp = sub.add_parser("bench", help="benchmark table over generated systems")
    sp.add_argument("--suite", choices=("random", "brake"), default="random")
    sp.add_argument("--sizes", default="3..9", help="e.g. 3..9, 100..200:20 or 2,3,5 (brake: system size 2m)")
    sp.add_argument("--seeds", default="0")
    sp.add_argument("--out", type=Path, default=Path("bench_out"))
    sp.add_argument("--fast", action="store_true", help=f"{FAST_GRID}-point grid and {FAST_MULTISTART} SCF starts")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("robust", help="optimally robust DH representation of a stable matrix")
    sp.add_argument("--matrix", type=Path, required=True)
    sp.add_argument("--epsilon", type=float, default=1e-8)
    sp.add_argument("--compare-z", type=int, default=0, help="number of random Z representations to compare")
    sp.add_argument("--seed", type=int, default=0)
    add_out(sp)
    sp.set_defaults(func=cmd_robust)

    sp = sub.add_parser("generate", help="write a random or brake-squeal system as JSON")
    sp.add_argument("kind", choices=("random", "brake"))
    sp.add_argument("--n", type=int, default=4, help="system size (random) or block size m (brake)")
    sp.add_argument("--seed", type=int, default=0)
    add_out(sp)
    sp.set_defaults(func=cmd_generate)
    return p


_INVALID = (ShapeError, NotHermitianError, NotStableError, NotAsymptoticallyStable, InvalidOverride,
            IllConditioned, NotPositiveDefinite)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.verbose else logging.ERROR,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"dhradius: {exc}", file=_sys.stderr)
        return exc.code
    except _INVALID as exc:
        print(f"dhradius: invalid input: {exc}", file=_sys.stderr)
        return EXIT_INVALID
    except (AllEvaluationsFailed, DHRadiusError, np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"dhradius: solver failure: {exc}", file=_sys.stderr)
        return EXIT_SOLVER
    except (ValueError, TypeError) as exc:
        print(f"dhradius: invalid input: {exc}", file=_sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"dhradius: I/O error: {exc}", file=_sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    _sys.exit(main())
