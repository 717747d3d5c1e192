"""Command-line driver: ``solve``, ``assemble-rfm`` and ``spectrum``.

Exit codes: 0 success, 2 bad input or configuration, 3 solver failure
(rank-deficient QR preconditioner, SVD non-convergence).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import mmio
from .config import ConfigError, load_pde_config
from .precond import RankDeficient
from .report import BenchReport, RunConfig, report_row, run_method, singular_spectra, write_spectrum_csv
from .sketch import DEFAULT_GAMMA, make_rng
from .sparse import SvdNonConvergence

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 2, 3
SEED_ENV = "SKETCHLSQ_SEED"


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags already; keep that, but route through our code
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def synthetic_rhs(A, seed: int) -> np.ndarray:
    """``b = A x*`` with ``x*`` standard normal from the package RNG."""
    return A @ make_rng(seed).standard_normal(A.cols)


def load_rhs(spec: str, A) -> tuple[np.ndarray, dict]:
    if spec.startswith("synthetic:"):
        try:
            seed = int(spec.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad synthetic rhs spec {spec!r}; expected synthetic:<int>") from None
        return synthetic_rhs(A, seed), {"kind": "synthetic", "seed": seed}
    b = mmio.read_vector(spec)
    if b.size != A.rows:
        raise ConfigError(f"rhs has {b.size} entries but the matrix has {A.rows} rows")
    return b, {"kind": "file", "path": spec}


def _pde_error(manifest_path, coef):
    """Rebuild the RFM problem recorded in a manifest and evaluate the solution error."""
    from .config import PdeConfig

    with open(manifest_path) as fh:
        man = json.load(fh)
    cfg = dict(man["config"])
    cfg.pop("Q", None)
    cfg["domain"] = tuple(cfg["domain"])
    return PdeConfig(**cfg).build().relative_l2_error(coef)


def cmd_solve(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    cfg = RunConfig(
        methods=args.method,
        gamma=args.gamma,
        rcond=args.rcond,
        tau=args.tau,
        max_iter=args.max_iter,
        seed=seed,
        warm_start=args.warm_start,
        kappa=args.kappa,
        history=args.history,
        spectrum=args.spectrum is not None,
    )
    A = mmio.read_matrix_market(args.matrix)
    b, rhs_info = load_rhs(args.rhs, A)
    config_echo = {
        "matrix": str(args.matrix),
        "rhs": rhs_info,
        "methods": list(cfg.methods),
        "gamma": cfg.gamma,
        "rcond": cfg.rcond,
        "tau": cfg.tau,
        "max_iter": cfg.max_iter,
        "seed": cfg.seed,
        "warm_start": cfg.warm_start,
    }
    report = BenchReport(config=config_echo)
    for method in cfg.methods:
        rep = run_method(method, A, b, cfg)
        pde_err = _pde_error(args.manifest, rep.x) if args.manifest else None
        report.rows.append(report_row(rep, A, pde_err))
        if cfg.history:
            report.histories[method] = list(map(float, rep.residual_history))
    out = args.report or (sys.stdout if args.out == "json" else None)
    if out is sys.stdout:
        print(report.to_json())
    elif out is None:
        raise ConfigError("--out csv needs --report <path>")
    else:
        report.write(out, args.out)
    if args.spectrum:
        write_spectrum_csv(singular_spectra(A, cfg.gamma, cfg.rcond or 1e-12, cfg.seed), args.spectrum)
    return EXIT_OK


def cmd_assemble(args) -> int:
    pcfg = load_pde_config(args.pde)
    problem = pcfg.build()
    A, b = problem.assemble()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    mmio.write_matrix_market(A, out / "A.mtx")
    mmio.write_vector(b, out / "b.mtx")
    c = problem.colloc
    manifest = {
        "config": pcfg.to_dict(),
        "rows": A.rows,
        "cols": A.cols,
        "nnz": A.nnz,
        "interior_points": int(len(c.interior)),
        "boundary_points": int(len(c.boundary)),
        "interface_points": int(len(c.interface_points)),
        "lambda_interior": c.lambda_interior,
        "lambda_boundary": c.lambda_boundary,
        "lambda_interface": c.lambda_interface,
    }
    with open(out / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    print(f"wrote {A.rows}x{A.cols} system ({A.nnz} nonzeros) to {out}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    A = mmio.read_matrix_market(args.matrix)
    spectra = singular_spectra(A, args.gamma, args.rcond, seed)
    write_spectrum_csv(spectra, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sketchlsq", description="Sketch-preconditioned sparse least squares.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="solve min ||Ax - b|| and write a report")
    s.add_argument("--matrix", required=True, help="Matrix Market coordinate file")
    s.add_argument("--rhs", required=True, help="rhs file, or synthetic:<seed> for b = A x*")
    s.add_argument("--method", default="csqrp", help="csqrp, cssvdp, csqr_p, cssvd_p, lsqr, direct (comma list ok)")
    s.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    s.add_argument("--rcond", type=float, default=None)
    s.add_argument("--tau", type=float, default=1e-8)
    s.add_argument("--max-iter", type=int, default=None)
    s.add_argument("--seed", type=int, default=None, help=f"sketch seed (default ${SEED_ENV} or 0)")
    s.add_argument("--warm-start", action="store_true")
    s.add_argument("--kappa", action="store_true", help="report cond(B) (densifies)")
    s.add_argument("--history", action="store_true", help="record residual history")
    s.add_argument("--out", choices=("json", "csv"), default="json")
    s.add_argument("--report", help="report path (default: JSON to stdout)")
    s.add_argument("--spectrum", help="also write singular spectra CSV here")
    s.add_argument("--manifest", help="assemble-rfm manifest; adds the PDE error column")
    s.set_defaults(func=cmd_solve)

    a = sub.add_parser("assemble-rfm", help="assemble an RFM system from a PDE config")
    a.add_argument("--pde", required=True, help="INI config with a [pde] section")
    a.add_argument("--out-dir", required=True)
    a.set_defaults(func=cmd_assemble)

    g = sub.add_parser("spectrum", help="singular values of A, AR^-1 and AP as CSV")
    g.add_argument("--matrix", required=True)
    g.add_argument("--out", required=True)
    g.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    g.add_argument("--rcond", type=float, default=1e-12)
    g.add_argument("--seed", type=int, default=None)
    g.set_defaults(func=cmd_spectrum)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (RankDeficient, SvdNonConvergence) as exc:
        print(f"solver failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ConfigError, mmio.MatrixMarketError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
