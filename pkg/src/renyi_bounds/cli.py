"""Batch front end: figure sweeps as CSV/JSON, single-shot bound queries,
and the verification command.

Output files are reproducible byte for byte under a fixed seed: a single
`#` header comment records tool version, command and seed (no
timestamps), numbers are printed with 12 significant digits, newlines
are Unix.  Exit codes: 0 success, 1 failed verification, 2 invalid
invocation.
"""

import argparse
import json
import math
import os
import sys
from typing import List, Optional, Sequence

from . import __version__
from .distributions import GaussianMagnitude, Lognormal, PointMass, TwoPoint
from .entropy_bounds import entropy_bound
from .errors import RenyiBoundsError
from .mi_bounds import (
    ScaleMixtureChannel,
    chi2_mi_bound,
    mi_oracle,
    prop8_bound,
    prop9_bound,
)
from .moment_core import Support
from .quadrature import NumericsConfig
from .sweeps import fig1_rows, fig2_rows, fig3_rows
from .verify import run_verification

DEFAULT_SEED = NumericsConfig().rng_seed
SEED_ENV_VAR = "RENYI_BOUNDS_SEED"


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _write(path: Optional[str], text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _render(command: str, cfg: NumericsConfig, columns: List[str], rows, fmt: str) -> str:
    config = {
        "seed": cfg.rng_seed,
        "rel_tol": cfg.rel_tol,
        "abs_tol": cfg.abs_tol,
        "max_subdivisions": cfg.max_subdivisions,
        "mc_samples": cfg.mc_samples,
    }
    if fmt == "json":
        doc = {
            "meta": {"tool": "renyi-bounds", "version": __version__,
                     "command": command, **config},
            "columns": columns,
            "rows": [list(row) for row in rows],
        }
        return json.dumps(doc, indent=1) + "\n"
    header = f"# renyi-bounds {__version__} command={command} " + " ".join(
        f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}" for k, v in config.items()
    )
    lines = [header, ",".join(columns)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _floats(text: str) -> List[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad float list {text!r}") from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="renyi-bounds",
        description="Two-moment Renyi-entropy and mutual-information bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=None,
                        help=f"RNG seed (default {DEFAULT_SEED}; ${SEED_ENV_VAR} overrides)")
        sp.add_argument("--tol", type=float, default=1e-9, help="relative quadrature tolerance")
        sp.add_argument("--out", default="-", help="output path ('-' = stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("fig1", help="lognormal gaps vs r for several sigma2")
    sp.add_argument("--r-grid", type=_floats, default=None)
    sp.add_argument("--sigma2", type=_floats, default=None)
    common(sp)

    sp = sub.add_parser("fig2", help="Gaussian gaps vs dimension at fixed r")
    sp.add_argument("--r", type=float, default=0.1)
    sp.add_argument("--n-max", type=int, default=256)
    common(sp)

    sp = sub.add_parser("fig3", help="MI bounds for the two-point scalar mixture")
    sp.add_argument("--eps-grid", type=_floats, default=None)
    sp.add_argument("--p", type=float, default=0.0)
    sp.add_argument("--q", type=float, default=2.0)
    common(sp)

    sp = sub.add_parser("entropy-bound", help="one evaluation of the entropy bound")
    sp.add_argument("--family", choices=("lognormal", "gaussian"), required=True)
    sp.add_argument("--mu", type=float, default=0.0)
    sp.add_argument("--sigma2", type=float, default=1.0)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--q", type=float, required=True)
    common(sp)

    sp = sub.add_parser("mi-bound", help="MI oracle and upper bounds for one channel")
    sp.add_argument("--channel", choices=("awgn-gaussian", "two-point-mixture"),
                    required=True)
    sp.add_argument("--sigma2", type=float, default=1.0, help="input variance (awgn-gaussian)")
    sp.add_argument("--eps", type=float, default=0.1, help="mixture weight (two-point-mixture)")
    sp.add_argument("--a", type=float, default=None,
                    help="second mixing atom (default 1 + 1/sqrt(eps))")
    sp.add_argument("--p", type=float, default=0.0)
    sp.add_argument("--q", type=float, default=2.0)
    sp.add_argument("--r", type=float, default=0.5)
    common(sp)

    sp = sub.add_parser("verify", help="run the oracle cross-check suite")
    common(sp)
    return parser


def _config(args) -> NumericsConfig:
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get(SEED_ENV_VAR, DEFAULT_SEED))
    return NumericsConfig(rel_tol=args.tol, rng_seed=seed)


def _cmd_entropy_bound(args, cfg):
    if args.family == "lognormal":
        d = Lognormal(args.mu, args.sigma2)
        sup, n = Support.positive_half_line(), 1
    else:
        d = GaussianMagnitude(args.n)
        sup, n = Support.euclidean(args.n), args.n
    rep = entropy_bound(d, sup, n, args.r, args.p, args.q)
    cols = ["r", "p", "q", "n", "bound_nats", "entropy_nats", "gap_nats"]
    rows = [(rep.r, rep.p, rep.q, rep.n, rep.bound,
             math.nan if rep.entropy is None else rep.entropy,
             math.nan if rep.gap is None else rep.gap)]
    return cols, rows


def _cmd_mi_bound(args, cfg):
    if args.channel == "awgn-gaussian":
        ch, given = ScaleMixtureChannel(PointMass(args.sigma2)), "X"
    else:
        a = args.a if args.a is not None else 1.0 + 1.0 / math.sqrt(args.eps)
        ch, given = ScaleMixtureChannel(TwoPoint(args.eps, a)), "U"
    cols = ["mi_oracle", "prop8_bound", "prop9_bound", "chi2_bound"]
    rows = [(
        mi_oracle(ch, given, cfg),
        prop8_bound(ch, args.r, given, cfg),
        prop9_bound(ch, args.p, args.q, given, cfg),
        chi2_mi_bound(ch, given, cfg),
    )]
    return cols, rows


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        if args.command == "fig1":
            cols, rows = fig1_rows(args.r_grid or (), args.sigma2 or (), cfg)
        elif args.command == "fig2":
            cols, rows = fig2_rows(args.r, args.n_max, cfg)
        elif args.command == "fig3":
            cols, rows = fig3_rows(args.eps_grid or (), args.p, args.q, cfg)
        elif args.command == "entropy-bound":
            cols, rows = _cmd_entropy_bound(args, cfg)
        elif args.command == "mi-bound":
            cols, rows = _cmd_mi_bound(args, cfg)
        else:  # verify
            results = run_verification(cfg)
            cols = ["check", "passed", "detail"]
            rows = [(r.name, bool(r.passed), r.detail.replace(",", ";")) for r in results]
            _write(args.out, _render(args.command, cfg, cols, rows, args.format))
            failed = [r for r in results if not r.passed]
            if failed:
                for r in failed:
                    print(f"FAILED {r.name}: {r.detail}", file=sys.stderr)
                return 1
            return 0
    except RenyiBoundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _write(args.out, _render(args.command, cfg, cols, rows, args.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
