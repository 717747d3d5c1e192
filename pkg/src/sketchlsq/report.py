"""Run configuration, benchmark reports and singular-spectrum diagnostics."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import precond as pc
from . import solvers as sv
from .sketch import DEFAULT_GAMMA, apply_left, default_sketch_size, new_count_sketch
from .sparse import CsrMatrix, SvdNonConvergence, singular_values

__all__ = [
    "RunConfig",
    "BenchReport",
    "REPORT_FIELDS",
    "TIMING_FIELDS",
    "run_method",
    "report_row",
    "singular_spectra",
    "write_spectrum_csv",
    "SPECTRUM_SIZE_LIMIT",
]

SCHEMA = "sketchlsq.bench/1"
SVD_METHODS = ("cssvdp", "cssvd_p")
SKETCH_METHODS = ("csqrp", "cssvdp", "csqr_p", "cssvd_p")

#: column order of a report row; the CSV header and JSON key order follow it
REPORT_FIELDS = (
    "method",
    "m",
    "n",
    "nnz",
    "PCPU",
    "CPU",
    "TCPU",
    "IT",
    "rel_ls_error",
    "RR",
    "kappa_B",
    "effective_rank",
    "converged",
    "stop_reason",
    "pde_error",
)
TIMING_FIELDS = ("PCPU", "CPU", "TCPU")

SPECTRUM_SIZE_LIMIT = 5e7


@dataclass
class RunConfig:
    """Solver choice and knobs for one CLI run; ``methods`` may list several solvers."""

    methods: tuple[str, ...] = ("csqrp",)
    gamma: float = DEFAULT_GAMMA
    rcond: Optional[float] = None
    tau: float = 1e-8
    max_iter: Optional[int] = None
    seed: int = 0
    warm_start: bool = False
    kappa: bool = False
    history: bool = False
    spectrum: bool = False

    def __post_init__(self):
        if isinstance(self.methods, str):
            self.methods = tuple(m.strip() for m in self.methods.split(",") if m.strip())
        self.methods = tuple(self.methods)
        if not self.methods:
            raise ValueError("no method given")
        for m in self.methods:
            if m not in sv.METHODS:
                raise ValueError(f"unknown method {m!r}; choose from {', '.join(sv.METHODS)}")
        if self.rcond is not None:
            if not any(m in SVD_METHODS for m in self.methods):
                raise ValueError("rcond only applies to the SVD methods (cssvdp, cssvd_p)")
            if not 0 < self.rcond < 1:
                raise ValueError("rcond must lie in (0, 1)")
        if not self.gamma > 1:
            raise ValueError("gamma must exceed 1")
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if self.max_iter is not None and self.max_iter < 1:
            raise ValueError("max_iter must be positive")

    def solve_options(self, initial=None) -> sv.SolveOptions:
        return sv.SolveOptions(tau=self.tau, max_iter=self.max_iter, initial=initial, record_history=self.history)


def run_method(method: str, A: CsrMatrix, b, cfg: RunConfig) -> sv.SolveReport:
    """Dispatch one solver with the knobs from ``cfg``."""
    if method == "direct":
        return sv.direct_dense_ls(A, b)
    if method == "lsqr":
        rep = sv.plain_lsqr(A, b, cfg.solve_options())
        if cfg.kappa:
            from .sparse import condition_number

            rep.kappa_B = condition_number(A.toarray())
        return rep
    kwargs = dict(
        gamma=cfg.gamma, seed=cfg.seed, opts=cfg.solve_options(),
        warm_start=cfg.warm_start, compute_kappa=cfg.kappa,
    )
    if method in SVD_METHODS:
        kwargs["rcond"] = cfg.rcond if cfg.rcond is not None else pc.DEFAULT_RCOND
    return sv.METHODS[method](A, b, **kwargs)


def report_row(rep: sv.SolveReport, A: CsrMatrix, pde_error: float | None = None) -> dict:
    row = {
        "method": rep.method,
        "m": A.rows,
        "n": A.cols,
        "nnz": A.nnz,
        "PCPU": rep.precond_time,
        "CPU": rep.solve_time,
        "TCPU": rep.total_time,
        "IT": rep.iterations,
        "rel_ls_error": rep.relative_ls_error,
        "RR": rep.relative_residual,
        "kappa_B": rep.kappa_B,
        "effective_rank": rep.effective_rank,
        "converged": rep.converged,
        "stop_reason": rep.stop_reason,
        "pde_error": pde_error,
    }
    return {k: row[k] for k in REPORT_FIELDS}


@dataclass
class BenchReport:
    config: dict
    rows: list = field(default_factory=list)
    histories: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"schema": SCHEMA, "config": self.config, "rows": self.rows}
        if self.histories:
            out["residual_history"] = self.histories
        return out

    def to_json(self) -> str:
        # json writes floats with repr(), which round-trips exactly
        return json.dumps(self.to_dict(), indent=2, allow_nan=True)

    def write(self, path, fmt: str | None = None) -> None:
        fmt = fmt or ("csv" if str(path).endswith(".csv") else "json")
        if fmt == "json":
            with open(path, "w") as fh:
                fh.write(self.to_json() + "\n")
        elif fmt == "csv":
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(REPORT_FIELDS)
                for row in self.rows:
                    w.writerow(["" if row[k] is None else _fmt(row[k]) for k in REPORT_FIELDS])
        else:
            raise ValueError(f"unknown report format {fmt!r}")


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def singular_spectra(
    A: CsrMatrix, gamma: float = DEFAULT_GAMMA, rcond: float = pc.DEFAULT_RCOND, seed: int = 0
) -> dict[str, np.ndarray]:
    """Singular values of ``A``, ``A R^{-1}`` and ``A P`` for one shared sketch.

    ``A R^{-1}`` is empty when the QR preconditioner is rank deficient; the
    ``A P`` spectrum has ``effective_rank`` entries.
    """
    if A.rows * A.cols > SPECTRUM_SIZE_LIMIT:
        raise ValueError(f"matrix too large to densify for spectra ({A.rows} x {A.cols})")
    s = default_sketch_size(A.cols, gamma)
    if s >= A.rows:
        raise ValueError(f"sketch size s={s} must be smaller than m={A.rows}")
    SA = apply_left(new_count_sketch(s, A.rows, seed), A)
    out = {"A": singular_values(A.toarray())}
    try:
        out["AR"] = singular_values(pc.form_explicit(A, pc.build_qr_precond(SA)))
    except pc.RankDeficient:
        out["AR"] = np.zeros(0)
    out["AP"] = singular_values(pc.form_explicit(A, pc.build_svd_precond(SA, rcond)))
    return out


def write_spectrum_csv(spectra: dict[str, np.ndarray], path) -> None:
    """Three columns ``sigma_A, sigma_AR, sigma_AP``; shorter columns are padded with blanks."""
    keys = ("A", "AR", "AP")
    depth = max(len(spectra[k]) for k in keys)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["sigma_A", "sigma_AR", "sigma_AP"])
        for i in range(depth):
            w.writerow([repr(float(spectra[k][i])) if i < len(spectra[k]) else "" for k in keys])


def read_spectrum_csv(path) -> dict[str, np.ndarray]:
    cols = {"A": [], "AR": [], "AP": []}
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        next(r)
        for row in r:
            for k, v in zip(("A", "AR", "AP"), row):
                if v != "":
                    cols[k].append(float(v))
    return {k: np.asarray(v) for k, v in cols.items()}
