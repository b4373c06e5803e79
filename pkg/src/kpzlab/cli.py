"""Command-line front end.

Exit status: 0 on success, 2 on invalid input, 3 when a numerical accuracy
check fails (including failing verification checks).
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import groupavg, kpz_scaling, montecarlo, opuc, painleve2, verify
from ._format import write_csv
from .combinat import SymmetryClass
from .errors import DomainError
from .specfun import PRECISION_ENV

EXIT_OK = 0
EXIT_FAILED_CHECKS = 3
EXIT_USAGE = 2
EXIT_ACCURACY = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass
class RunConfig:
    """Parsed command: the subcommand path plus its validated parameters."""

    command: tuple
    params: dict = field(default_factory=dict)
    output: str | None = None
    fmt: str = "csv"


def _positive_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kpzlab", description="Exact, asymptotic and simulated longest-path distributions.")
    p.add_argument("--precision-bits", type=int, help=f"working precision (overrides {PRECISION_ENV})")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt_choices=("csv",)):
        sp.add_argument("--out", "-o", help="output file (default: stdout)")
        sp.add_argument("--format", choices=fmt_choices, default=fmt_choices[0])

    ex = sub.add_parser("exact", help="exact CDF tables").add_subparsers(dest="kind", required=True,
                                                                        parser_class=_Parser)
    e = ex.add_parser("hammersley")
    e.add_argument("--lambda", dest="lam", type=float, required=True)
    e.add_argument("--lmin", type=_positive_int, default=0)
    e.add_argument("--lmax", type=_positive_int, required=True)
    e.add_argument("--workers", type=int, default=1)
    common(e)
    e = ex.add_parser("symmetrized")
    e.add_argument("--z", type=float, required=True)
    e.add_argument("--alpha", type=float, default=0.0)
    e.add_argument("--beta", type=float, default=0.0)
    e.add_argument("--symmetry", default="diag", choices=[c.value for c in SymmetryClass])
    e.add_argument("--lmin", type=_positive_int, default=0)
    e.add_argument("--lmax", type=_positive_int, required=True)
    e.add_argument("--workers", type=int, default=1)
    common(e)
    e = ex.add_parser("boundary")
    e.add_argument("--t", type=float, required=True)
    e.add_argument("--alpha-plus", type=float, required=True)
    e.add_argument("--alpha-minus", type=float, required=True)
    e.add_argument("--with-origin", action="store_true")
    e.add_argument("--lmin", type=_positive_int, default=0)
    e.add_argument("--lmax", type=_positive_int, required=True)
    common(e)

    sm = sub.add_parser("sim", help="Monte Carlo simulation").add_subparsers(dest="kind", required=True,
                                                                            parser_class=_Parser)
    for name in ("hammersley", "png", "boundary", "johansson"):
        s = sm.add_parser(name)
        s.add_argument("--trials", type=_positive_int, required=True)
        s.add_argument("--seed", type=_positive_int, required=True)
        s.add_argument("--workers", type=int, default=1)
        s.add_argument("--summary", action="store_true", help="write the empirical CDF instead of the trials")
        common(s)
        if name == "hammersley":
            s.add_argument("--lambda", dest="lam", type=float, required=True, help="lambda (or z)")
            s.add_argument("--symmetry", default="plain", choices=[c.value for c in SymmetryClass])
            s.add_argument("--alpha", type=float, default=0.0)
            s.add_argument("--beta", type=float, default=0.0)
        elif name == "png":
            s.add_argument("--T", dest="T", type=float, required=True)
        elif name == "boundary":
            s.add_argument("--t", type=float, required=True)
            s.add_argument("--alpha-plus", type=float, required=True)
            s.add_argument("--alpha-minus", type=float, required=True)
            s.add_argument("--with-origin", action="store_true")
        else:
            s.add_argument("--a", type=_floats, required=True, help="comma-separated a_0..a_n")
            s.add_argument("--b", type=_floats, required=True, help="comma-separated b_0..b_n")

    tw = sub.add_parser("tw", help="Tracy-Widom tables").add_subparsers(dest="kind", required=True,
                                                                       parser_class=_Parser)
    t = tw.add_parser("table")
    t.add_argument("--smin", type=float, default=-6.0)
    t.add_argument("--smax", type=float, default=4.0)
    t.add_argument("--step", type=float, default=0.1)
    common(t)

    kz = sub.add_parser("kpz", help="Baik-Rains family").add_subparsers(dest="kind", required=True,
                                                                       parser_class=_Parser)
    k = kz.add_parser("baik-rains")
    k.add_argument("--y", type=float, required=True)
    k.add_argument("--step", type=float, default=None, help="output spacing in s (multiple of 0.01)")
    k.add_argument("--moments", help="also write the moments JSON to this file")
    common(k, ("csv", "json"))

    v = sub.add_parser("verify", help="run the invariant suite")
    v.add_argument("--level", choices=("quick", "full"), default="quick")
    v.add_argument("--fault", choices=("r1_sign",), default=None, help=argparse.SUPPRESS)
    v.add_argument("--out", "-o")
    return p


def parse(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    params = {k: v for k, v in vars(ns).items() if k not in ("command", "kind", "out", "format")}
    command = (ns.command,) + ((ns.kind,) if getattr(ns, "kind", None) else ())
    return RunConfig(command, params, getattr(ns, "out", None), getattr(ns, "format", "csv"))


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def _emit(text: str, dest: str | None):
    if dest is None:
        sys.stdout.write(text)
    else:
        with open(dest, "w", encoding="ascii", newline="") as fh:
            fh.write(text)


def _exact(cfg: RunConfig) -> str:
    p = cfg.params
    kind = cfg.command[1]
    if kind == "hammersley":
        tab = groupavg.dist_table("hammersley", p["lam"], p["lmax"], l_min=p["lmin"], workers=p["workers"])
    elif kind == "symmetrized":
        tab = groupavg.dist_table("symmetrized", p["z"], p["lmax"], alpha=p["alpha"], beta=p["beta"],
                                  symmetry=p["symmetry"], l_min=p["lmin"], workers=p["workers"])
    else:
        if p["lmax"] < p["lmin"]:
            raise DomainError("lmax must be at least lmin")
        seq = opuc.discrete_p2(p["t"], max(p["lmax"] + 2, 2))
        rows = [(l, opuc.boundary_cdf(p["t"], p["alpha_plus"], p["alpha_minus"], l,
                                      with_origin=p["with_origin"], seq=seq))
                for l in range(p["lmin"], p["lmax"] + 1)]
        sym = "boundary_origin" if p["with_origin"] else "boundary"
        tab = groupavg.DistTable(p["t"], p["alpha_plus"], p["alpha_minus"], sym, rows).check()
    return tab.to_csv()


def _sim(cfg: RunConfig) -> str:
    p = cfg.params
    kind = cfg.command[1]
    if kind == "hammersley":
        batch = montecarlo.simulate_hammersley(p["lam"], p["trials"], p["seed"], p["symmetry"], p["alpha"],
                                               p["beta"], workers=p["workers"])
    elif kind == "png":
        batch = montecarlo.simulate_png(p["T"], p["trials"], p["seed"], workers=p["workers"])
    elif kind == "boundary":
        batch = montecarlo.sample_boundary(p["t"], p["alpha_plus"], p["alpha_minus"], p["with_origin"],
                                           trials=p["trials"], seed=p["seed"], workers=p["workers"])
    else:
        batch = montecarlo.simulate_johansson(p["a"], p["b"], p["trials"], p["seed"], workers=p["workers"])
    if p["summary"]:
        return montecarlo.empirical_cdf(batch).to_csv()
    return batch.to_csv()


def tw_table(s_min: float, s_max: float, step: float) -> str:
    """CSV of ``F_GUE``, ``F_GOE``, ``F_GSE`` on ``s_min, s_min + step, ..., s_max``."""
    if not step > 0 or s_max < s_min:
        raise DomainError("need step > 0 and smax >= smin")
    if s_min < painleve2.DEFAULT_S_MIN:
        raise DomainError(f"smin must be at least {painleve2.DEFAULT_S_MIN}")
    grid = painleve2.default_grid()
    if s_max > grid.s_max:
        grid = painleve2.hastings_mcleod(painleve2.DEFAULT_S_MIN, float(math.ceil(s_max)))
    n = int(math.floor((s_max - s_min) / step + 1e-9))
    s = s_min + step * np.arange(n + 1)
    gue = grid.f_gue(s)
    goe, gse = grid.f_goe_gse(s)
    return write_csv(("s", "f_gue", "f_goe", "f_gse"), zip(s, gue, goe, gse))


def _kpz(cfg: RunConfig):
    p = cfg.params
    if abs(p["y"]) > kpz_scaling.Y_LIMIT:
        raise DomainError(f"|y| <= {kpz_scaling.Y_LIMIT} supported")
    tab = kpz_scaling.baik_rains_table(p["y"])
    moments = tab.moments_json() + "\n"
    if p["moments"]:
        _emit(moments, p["moments"])
    return moments if cfg.fmt == "json" else tab.to_csv(step=p["step"])


def execute(cfg: RunConfig) -> int:
    bits = cfg.params.get("precision_bits")
    if bits is not None:
        if bits < 53:
            raise DomainError("--precision-bits must be at least 53")
        os.environ[PRECISION_ENV] = str(bits)
    head = cfg.command[0]
    if head == "verify":
        report = verify.run_checks(cfg.params["level"], fault=cfg.params["fault"])
        _emit(report.to_json() + "\n", cfg.output)
        if not report.passed:
            print("failed checks: " + ", ".join(report.failed), file=sys.stderr)
            return EXIT_FAILED_CHECKS
        return EXIT_OK
    if head == "exact":
        text = _exact(cfg)
    elif head == "sim":
        text = _sim(cfg)
    elif head == "tw":
        text = tw_table(cfg.params["smin"], cfg.params["smax"], cfg.params["step"])
    else:
        text = _kpz(cfg)
    _emit(text, cfg.output)
    return EXIT_OK


def main(argv=None) -> int:
    try:
        cfg = parse(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return execute(cfg)
    except ArithmeticError as exc:
        print(f"kpzlab: numerical accuracy error: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except ValueError as exc:
        print(f"kpzlab: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
