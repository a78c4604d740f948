"""Command-line front-end: runs checks, sweeps, and emits reports.

Exit status: 0 when every verdict passes, 1 when any check fails or is
inconclusive, 2 on usage errors (bad flags, malformed symbol text).
JSON is the canonical report format (17 significant digits, byte-stable
for identical configurations); CSV is a lossy two-column convenience view
of remainder curves.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import harness, numeric, symdsl
from .harness import ExpansionReport, render_json
from .numeric import SampledSymbol, gauss_hermite
from .symbolic import FormalSymbol
from .symdsl import NotPolynomialError, SymbolError

DEFAULT_SEED = 12345


@dataclass
class RunConfig:
    """Parsed invocation: one subcommand plus its numeric and symbol knobs."""

    subcommand: str
    n: int = 1
    cutoff: int = 40
    quad_order: int = 40
    k: int = 1
    tstart: float = 0.2
    tratio: float = 0.5
    tcount: int = 5
    f_text: Optional[str] = None
    g_text: Optional[str] = None
    out: Optional[str] = None
    format: str = "json"
    seed: int = DEFAULT_SEED
    deg: int = 3
    trials: int = 50
    max_p: int = 12
    degmax: Optional[int] = None
    t: Optional[float] = None
    z: Optional[str] = None

    def validate(self) -> None:
        if self.n < 1:
            raise ValueError("--n must be >= 1")
        if self.cutoff < 1:
            raise ValueError("--N must be >= 1")
        if not 1 <= self.quad_order <= 200:
            raise ValueError("--Q must be in 1..200")
        if self.k < 0:
            raise ValueError("--k must be >= 0")
        if self.tstart <= 0:
            raise ValueError("--tstart must be positive")
        if not 0 < self.tratio < 1:
            raise ValueError("--tratio must be in (0, 1)")
        if self.tcount < 1:
            raise ValueError("--tcount must be >= 1")
        if self.format not in ("json", "csv"):
            raise ValueError("--format must be json or csv")
        if self.trials < 1:
            raise ValueError("--trials must be >= 1")
        if self.deg < 0:
            raise ValueError("--deg must be >= 0")
        if self.max_p < 0:
            raise ValueError("--max must be >= 0")
        if self.degmax is not None and self.degmax < 0:
            raise ValueError("--degmax must be >= 0")
        if self.t is not None and self.t <= 0:
            raise ValueError("--t must be positive")

    def t_grid(self) -> list[float]:
        return harness.default_t_grid(self.tstart, self.tratio, self.tcount)


# ----- symbol handling ---------------------------------------------------------


def parse_symbol(text: str, n: int):
    """Parse symbol text, preferring the exact polynomial form.

    Returns a FormalSymbol when the expression is polynomial and a
    SampledSymbol otherwise.
    """
    node = symdsl.parse(text, n)
    try:
        return symdsl.lower_formal(node, n)
    except NotPolynomialError:
        return symdsl.lower_sampled(node, n)


def require_formal(symbol, flag: str) -> FormalSymbol:
    if not isinstance(symbol, FormalSymbol):
        raise SymbolError(f"{flag} must be a polynomial symbol for this subcommand")
    return symbol


def parse_point(text: str, n: int) -> tuple[complex, ...]:
    """Parse a comma-separated complex point like '0.3+0.2i,-0.1i'."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != n:
        raise SymbolError(f"--z needs {n} comma-separated components, got {len(parts)}")
    values = []
    for part in parts:
        try:
            values.append(complex(part.replace("i", "j")))
        except ValueError as exc:
            raise SymbolError(f"bad complex component {part!r}") from exc
    return tuple(values)


# ----- output ------------------------------------------------------------------


def emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
        print(f"wrote {out}", file=sys.stderr)


def emit_report(report: ExpansionReport, config: RunConfig) -> int:
    if config.format == "csv":
        emit(report.to_csv(), config.out)
    else:
        emit(report.to_json(), config.out)
    return 0 if report.verdict == "pass" else 1


def emit_table(table: dict, config: RunConfig) -> int:
    if config.format == "csv":
        raise SymbolError("csv format applies only to remainder-curve reports")
    emit(render_json(table), config.out)
    return 0 if table.get("verdict") == "pass" else 1


# ----- subcommand handlers -------------------------------------------------------


def cmd_verify_product(config: RunConfig, dims: Sequence[int]) -> int:
    table = harness.product_suite(
        trials=config.trials, max_degree=config.deg, seed=config.seed, dims=dims
    )
    return emit_table(table, config)


def cmd_verify_comb(config: RunConfig) -> int:
    return emit_table(harness.comb_suite(config.max_p), config)


def cmd_verify_moments(config: RunConfig) -> int:
    degmax = config.degmax
    if degmax is None:
        degmax = 8 if config.n == 1 else 4
    table = harness.moment_suite(
        n=config.n, degmax=degmax, quad_order=config.quad_order
    )
    return emit_table(table, config)


def cmd_verify_sharp(config: RunConfig) -> int:
    f = require_formal(parse_symbol(config.f_text, config.n), "--f")
    g = require_formal(parse_symbol(config.g_text, config.n), "--g")
    table = harness.sharp_consistency(f, g, quad_order=config.quad_order)
    return emit_table(table, config)


def cmd_expand(config: RunConfig) -> int:
    f = parse_symbol(config.f_text, config.n)
    g = f if config.g_text == config.f_text else parse_symbol(config.g_text, config.n)
    report = harness.product_expansion_curve(
        f, g, config.k, cutoff=config.cutoff, quad_order=config.quad_order,
        t_grid=config.t_grid(),
    )
    return emit_report(report, config)


def cmd_commutator(config: RunConfig) -> int:
    f = parse_symbol(config.f_text, config.n)
    g = f if config.g_text == config.f_text else parse_symbol(config.g_text, config.n)
    report = harness.commutator_bracket_curve(
        f, g, cutoff=config.cutoff, quad_order=config.quad_order, t_grid=config.t_grid()
    )
    return emit_report(report, config)


def cmd_intertwine(config: RunConfig) -> int:
    f = parse_symbol(config.f_text, config.n)
    g = f if config.g_text == config.f_text else parse_symbol(config.g_text, config.n)
    if isinstance(f, FormalSymbol) and isinstance(g, FormalSymbol):
        valuation = harness.intertwining_valuation(f, g, config.k)
        required = config.k + 1
        passed = valuation == float("inf") or valuation >= required
        table = {
            "check": "intertwining-formal",
            "k": config.k,
            "n": config.n,
            "valuation": "inf" if valuation == float("inf") else float(valuation),
            "required": required,
            "verdict": "pass" if passed else "fail",
        }
        return emit_table(table, config)
    report = harness.intertwining_curve(
        f, g, config.k, quad_order=config.quad_order, t_grid=config.t_grid()
    )
    return emit_report(report, config)


def cmd_heat(config: RunConfig) -> int:
    f = parse_symbol(config.f_text, config.n)
    if config.t is not None:
        point = parse_point(config.z, config.n) if config.z else (0j,) * config.n
        fs = f if isinstance(f, SampledSymbol) else numeric.sampled_from_formal(f)
        rule = gauss_hermite(config.quad_order)
        value = numeric.heat_numeric(fs, point, config.t, rule)
        table = {
            "check": "heat-point",
            "n": config.n,
            "Q": config.quad_order,
            "t": config.t,
            "z": [[w.real, w.imag] for w in point],
            "value": [value.real, value.imag],
        }
        if config.format == "csv":
            raise SymbolError("csv format applies only to remainder-curve reports")
        emit(render_json(table), config.out)
        return 0
    report = harness.heat_expansion_curve(
        f, config.k, quad_order=config.quad_order, t_grid=config.t_grid()
    )
    return emit_report(report, config)


def cmd_ccr(config: RunConfig) -> int:
    t = config.t if config.t is not None else 1.0
    table = harness.ccr_table(config.n, t, cutoff=config.cutoff)
    return emit_table(table, config)


# ----- argument parsing ----------------------------------------------------------


def _add_grid_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--N", dest="cutoff", type=int, default=40, help="basis cutoff degree")
    p.add_argument("--Q", dest="quad_order", type=int, default=40, help="quadrature order per axis")
    p.add_argument("--tstart", type=float, default=0.2)
    p.add_argument("--tratio", type=float, default=0.5)
    p.add_argument("--tcount", type=int, default=5)
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fockcalc",
        description="Verification suite for the weighted-shift operator calculus.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    verify = sub.add_parser("verify", help="exact and quadrature identity suites")
    vsub = verify.add_subparsers(dest="verify_what", required=True)

    vp = vsub.add_parser("product", help="random-polynomial exact product expansion")
    vp.add_argument("--n", type=int, default=0, help="dimension (0 = mix 1 and 2)")
    vp.add_argument("--deg", type=int, default=3)
    vp.add_argument("--trials", type=int, default=50)
    vp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    vp.add_argument("--out", default=None)

    vc = vsub.add_parser("comb", help="summed binomial identity")
    vc.add_argument("--max", dest="max_p", type=int, default=12)
    vc.add_argument("--out", default=None)

    vm = vsub.add_parser("moments", help="pairing moments: closed form vs series vs quadrature")
    vm.add_argument("--n", type=int, default=1)
    vm.add_argument("--degmax", type=int, default=None)
    vm.add_argument("--Q", dest="quad_order", type=int, default=30)
    vm.add_argument("--out", default=None)

    vs = vsub.add_parser("sharp-integral", help="sharp product vs pairing integral")
    vs.add_argument("--f", dest="f_text", required=True)
    vs.add_argument("--g", dest="g_text", required=True)
    vs.add_argument("--n", type=int, default=1)
    vs.add_argument("--Q", dest="quad_order", type=int, default=24)
    vs.add_argument("--out", default=None)

    ex = sub.add_parser("expand", help="product expansion remainder curve")
    ex.add_argument("--f", dest="f_text", required=True)
    ex.add_argument("--g", dest="g_text", required=True)
    ex.add_argument("--k", type=int, default=1)
    ex.add_argument("--n", type=int, default=1)
    _add_grid_flags(ex)

    co = sub.add_parser("commutator", help="commutator vs Poisson bracket curve")
    co.add_argument("--f", dest="f_text", required=True)
    co.add_argument("--g", dest="g_text", required=True)
    co.add_argument("--n", type=int, default=1)
    _add_grid_flags(co)

    it = sub.add_parser("intertwine", help="heat transform vs expansion orders")
    it.add_argument("--f", dest="f_text", required=True)
    it.add_argument("--g", dest="g_text", required=True)
    it.add_argument("--k", type=int, default=1)
    it.add_argument("--n", type=int, default=1)
    _add_grid_flags(it)

    he = sub.add_parser("heat", help="heat-transform expansion curve or point value")
    he.add_argument("--f", dest="f_text", required=True)
    he.add_argument("--k", type=int, default=1)
    he.add_argument("--n", type=int, default=1)
    he.add_argument("--t", type=float, default=None, help="evaluate at this t instead of sweeping")
    he.add_argument("--z", default=None, help="comma-separated complex point, e.g. '0.3+0.2i'")
    _add_grid_flags(he)

    cc = sub.add_parser("ccr", help="canonical commutation residual table")
    cc.add_argument("--n", type=int, default=1)
    cc.add_argument("--t", type=float, default=1.0)
    cc.add_argument("--N", dest="cutoff", type=int, default=20)
    cc.add_argument("--out", default=None)
    cc.add_argument("--format", choices=("json", "csv"), default="json")

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    subcommand = args.subcommand
    if subcommand == "verify":
        subcommand = f"verify-{args.verify_what}"
    fields_present = {
        name: getattr(args, name)
        for name in (
            "n", "cutoff", "quad_order", "k", "tstart", "tratio", "tcount",
            "f_text", "g_text", "out", "format", "seed", "deg", "trials",
            "max_p", "degmax", "t", "z",
        )
        if hasattr(args, name) and getattr(args, name) is not None
    }
    config = RunConfig(subcommand=subcommand, **fields_present)
    if subcommand == "verify-product" and config.n == 0:
        # 0 is the "mix dimensions 1 and 2" sentinel; the dims tuple is
        # derived from the raw flag in main()
        config.n = 1
    config.validate()
    return config


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 2
    try:
        config = config_from_args(args)
        if config.subcommand == "verify-product":
            dims = (args.n,) if args.n >= 1 else (1, 2)
            return cmd_verify_product(config, dims)
        if config.subcommand == "verify-comb":
            return cmd_verify_comb(config)
        if config.subcommand == "verify-moments":
            return cmd_verify_moments(config)
        if config.subcommand == "verify-sharp-integral":
            return cmd_verify_sharp(config)
        if config.subcommand == "expand":
            return cmd_expand(config)
        if config.subcommand == "commutator":
            return cmd_commutator(config)
        if config.subcommand == "intertwine":
            return cmd_intertwine(config)
        if config.subcommand == "heat":
            return cmd_heat(config)
        if config.subcommand == "ccr":
            return cmd_ccr(config)
        print(f"unknown subcommand {config.subcommand!r}", file=sys.stderr)
        return 2
    except (SymbolError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
