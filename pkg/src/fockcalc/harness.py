"""Identity-level checkers: remainder curves, slope fits, and residual tables.

Each checker measures the defect of an order-k expansion on a decreasing
t-grid and fits the convergence order as the least-squares slope of
log(remainder) against log(t).  Exact polynomial inputs short-circuit to
decidable zero/valuation statements; sampled inputs go through truncated
matrices and quadrature with explicit truncation diagnostics.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from . import fock, numeric, symbolic
from .fock import OperatorMatrix, TruncatedBasis
from .multiindex import degree, enumerate_upto, factorial, unit
from .numeric import QuadratureRule, SampledSymbol, gauss_hermite
from .symbolic import (
    ANTIHOLOMORPHIC,
    HOLOMORPHIC,
    FormalSymbol,
    GR_I,
    GaussianRational,
)

EXACT_ZERO = "exact-zero"
ZERO_THRESHOLD = 1e-14
TRUNCATION_TOLERANCE = 1e-3
SLOPE_MARGIN = 0.5
MATRIX_RULE_MARGIN = 25


# ----- reports --------------------------------------------------------------


@dataclass
class ExpansionReport:
    """Remainder curve of an order-k expansion plus its fitted convergence order."""

    check: str
    k: int
    n: int
    cutoff: int
    quad_order: int
    t_grid: list[float]
    remainders: list[float]
    slope: Union[float, str]
    verdict: str
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "k": self.k,
            "n": self.n,
            "N": self.cutoff,
            "Q": self.quad_order,
            "t": list(self.t_grid),
            "remainder": list(self.remainders),
            "slope": self.slope,
            "verdict": self.verdict,
            "diagnostics": dict(self.diagnostics),
        }

    def to_json(self) -> str:
        return render_json(self.to_dict())

    def to_csv(self) -> str:
        lines = ["t,remainder"]
        for t, r in zip(self.t_grid, self.remainders):
            lines.append(f"{format_float(t)},{format_float(r)}")
        return "\n".join(lines) + "\n"


def parse_report(text: str) -> ExpansionReport:
    raw = json.loads(text)
    return ExpansionReport(
        check=raw["check"],
        k=int(raw["k"]),
        n=int(raw["n"]),
        cutoff=int(raw["N"]),
        quad_order=int(raw["Q"]),
        t_grid=[float(v) for v in raw["t"]],
        remainders=[float(v) for v in raw["remainder"]],
        slope=raw["slope"] if isinstance(raw["slope"], str) else float(raw["slope"]),
        verdict=raw["verdict"],
        diagnostics=raw.get("diagnostics", {}),
    )


def format_float(v: float) -> str:
    """17-significant-digit decimal, enough to round-trip a double exactly."""
    return format(float(v), ".17g")


def render_json(value, indent: int = 0) -> str:
    """Deterministic JSON with 17-significant-digit floats and stable key order."""
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        rows = [
            f'{pad}  {json.dumps(str(k))}: {render_json(v, indent + 1)}'
            for k, v in value.items()
        ]
        return "{\n" + ",\n".join(rows) + f"\n{pad}}}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        rows = [f"{pad}  {render_json(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(rows) + f"\n{pad}]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    if value is None:
        return "null"
    return json.dumps(str(value))


# ----- grids and fits --------------------------------------------------------


def default_t_grid(start: float = 0.2, ratio: float = 0.5, count: int = 5) -> list[float]:
    if not (start > 0 and 0 < ratio < 1 and count >= 1):
        raise ValueError("need start > 0, ratio in (0,1), count >= 1")
    return [start * ratio**j for j in range(count)]


def default_z_grid(n: int, points_per_axis: int = 5, radius: float = 1.0) -> list[tuple[complex, ...]]:
    """Uniform points_per_axis^2 grid over [-radius, radius]^2 per complex dimension."""
    axis = np.linspace(-radius, radius, points_per_axis)
    single = [complex(x, y) for x in axis for y in axis]
    grid: list[tuple[complex, ...]] = [()]
    for _ in range(n):
        grid = [prefix + (w,) for prefix in grid for w in single]
    return grid


def slope_fit(points: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of log(remainder) against log(t).

    Requires at least 4 points with strictly decreasing t and positive
    remainders; curves that hit exact zero belong to the exact-zero path,
    not here.
    """
    if len(points) < 4:
        raise ValueError("slope fit needs at least 4 points")
    ts = [p[0] for p in points]
    rs = [p[1] for p in points]
    if any(t2 >= t1 for t1, t2 in zip(ts, ts[1:])):
        raise ValueError("t values must be strictly decreasing")
    if any(r <= 0 for r in rs):
        raise ValueError("remainders must be positive for a log-log fit")
    coeffs = np.polyfit(np.log(ts), np.log(rs), 1)
    return float(coeffs[0])


def _fit_and_verdict(
    t_grid: Sequence[float], remainders: Sequence[float], threshold: float
) -> tuple[Union[float, str], str]:
    if all(r < ZERO_THRESHOLD for r in remainders):
        return EXACT_ZERO, "pass"
    positive = [(t, r) for t, r in zip(t_grid, remainders) if r >= ZERO_THRESHOLD]
    if len(positive) < 4:
        # a mixed curve that dips to exact zero is an order win, not a failure
        return EXACT_ZERO, "pass"
    slope = slope_fit(positive)
    return slope, ("pass" if slope >= threshold else "fail")


# ----- shared machinery ------------------------------------------------------


def truncation_buffer(cutoff: int, t: float) -> int:
    """Extra basis degrees so a product of truncated Toeplitz matrices is faithful.

    Toeplitz matrices of bounded smooth symbols couple degree alpha to
    alpha +- j with weights ~ (sqrt(cutoff * t)/2)^j / j!, so a buffer of a
    few multiples of sqrt(cutoff * t) makes the discarded coupling smaller
    than double-precision noise.
    """
    return max(12, math.ceil(4.0 * math.sqrt(max(cutoff * t, 1.0))) + 8)


def matrix_rule(cutoff: int, floor_order: int = 0) -> QuadratureRule:
    """Quadrature rule adequate for matrix entries at the given basis cutoff.

    Entries integrate u^alpha conj(u)^beta times an analytic symbol, so the
    rule must be exact well past per-axis degree 2 * cutoff.
    """
    return gauss_hermite(min(200, max(floor_order, cutoff + MATRIX_RULE_MARGIN)))


def product_block(
    f: SampledSymbol, g: SampledSymbol, cutoff: int, t: float, floor_order: int = 0
) -> tuple[np.ndarray, np.ndarray, int, int]:
    """Faithful blocks of T_f T_g and T_g T_f on the cutoff basis.

    Builds both factors on an enlarged basis (cutoff + buffer) and restricts
    the product to the requested block, so the entries match the true
    (untruncated) product to double-precision noise instead of being
    corrupted by the cut.  Returns (fg_block, gf_block, buffer, rule_order).
    """
    buffer = truncation_buffer(cutoff, t)
    big = TruncatedBasis(f.n, cutoff + buffer, t)
    rule = matrix_rule(big.cutoff, floor_order)
    tf = fock.toeplitz_matrix_sampled(f, big, rule)
    tg = tf if g is f else fock.toeplitz_matrix_sampled(g, big, rule)
    m = TruncatedBasis(f.n, cutoff, t).size
    fg = (tf.entries @ tg.entries)[:m, :m]
    gf = fg if g is f else (tg.entries @ tf.entries)[:m, :m]
    return fg, gf, buffer, rule.order


def _block_consistency(full: np.ndarray, half: np.ndarray, scale: float) -> float:
    """Relative disagreement between a defect matrix restricted to the half
    basis and the same defect recomputed at the half cutoff.

    Any truncation-corrupted entry shows up here at full size, while a
    faithful computation agrees to double-precision noise.
    """
    m = half.shape[0]
    diff = float(np.linalg.norm(full[:m, :m] - half, 2))
    return diff / max(scale, ZERO_THRESHOLD)


def _coeff_sharp(order: int) -> float:
    return (-1.0) ** order / math.factorial(order)


# ----- product expansion -----------------------------------------------------


def _formal_defect_curve(
    check: str,
    defect,  # FormalOperator
    margin: int,
    k: int,
    n: int,
    cutoff: int,
    t_grid: Sequence[float],
    threshold: float,
) -> ExpansionReport:
    inner = cutoff - margin
    if inner < 0:
        raise ValueError(f"cutoff {cutoff} is smaller than the interior margin {margin}")
    if defect.is_zero_upto(inner):
        remainders = [0.0 for _ in t_grid]
    else:
        remainders = []
        for t in t_grid:
            mat = fock.operator_matrix(defect, TruncatedBasis(n, inner, t))
            remainders.append(fock.spectral_norm(mat))
    slope, verdict = _fit_and_verdict(t_grid, remainders, threshold)
    diagnostics = {
        "mode": "formal",
        "interior_margin": margin,
        "exact": True,
    }
    return ExpansionReport(
        check=check,
        k=k,
        n=n,
        cutoff=cutoff,
        quad_order=0,
        t_grid=list(t_grid),
        remainders=remainders,
        slope=slope,
        verdict=verdict,
        diagnostics=diagnostics,
    )


def _sampled_defect_curve(
    check: str,
    defect_at,  # callable (cutoff, t) -> np.ndarray defect block
    k: int,
    n: int,
    cutoff: int,
    quad_order: int,
    t_grid: Sequence[float],
    threshold: float,
    extra_diagnostics: Optional[dict] = None,
) -> ExpansionReport:
    remainders: list[float] = []
    half_remainders: list[float] = []
    consistency: list[float] = []
    half = max(cutoff // 2, 1)
    for t in t_grid:
        full_block = defect_at(cutoff, t)
        half_block = defect_at(half, t)
        r = float(np.linalg.svd(full_block, compute_uv=False)[0])
        r_half = float(np.linalg.svd(half_block, compute_uv=False)[0])
        remainders.append(r)
        half_remainders.append(r_half)
        consistency.append(_block_consistency(full_block, half_block, r))
    worst = max(consistency)
    flagged = worst > TRUNCATION_TOLERANCE
    slope, verdict = _fit_and_verdict(t_grid, remainders, threshold)
    if flagged:
        verdict = "inconclusive"
    diagnostics = {
        "mode": "sampled",
        "interior_margin": 0,
        "half_cutoff": half,
        "half_cutoff_remainder": half_remainders,
        "half_cutoff_block_consistency": consistency,
        "half_cutoff_norm_reldiff": [
            abs(r - rh) / max(r, ZERO_THRESHOLD)
            for r, rh in zip(remainders, half_remainders)
        ],
        "truncation_dominated": flagged,
    }
    if extra_diagnostics:
        diagnostics.update(extra_diagnostics)
    return ExpansionReport(
        check=check,
        k=k,
        n=n,
        cutoff=cutoff,
        quad_order=quad_order,
        t_grid=list(t_grid),
        remainders=remainders,
        slope=slope,
        verdict=verdict,
        diagnostics=diagnostics,
    )


def product_expansion_curve(
    f,
    g,
    k: int,
    cutoff: int = 40,
    quad_order: int = 40,
    t_grid: Optional[Sequence[float]] = None,
) -> ExpansionReport:
    """Operator-norm remainder of T_f T_g minus the order-k expansion.

    The expansion is sum over |alpha| <= k of ((-t)^|alpha|/alpha!) times
    the Toeplitz operator of (d^alpha f)(dbar^alpha g).  Exact polynomial
    symbols go through the exact monomial action (interior margin = total
    degree, remainders exactly zero once the expansion terminates); sampled
    symbols go through faithful truncated products with an N/2 consistency
    diagnostic.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    t_grid = list(t_grid) if t_grid is not None else default_t_grid()
    threshold = k + SLOPE_MARGIN
    if isinstance(f, FormalSymbol) and isinstance(g, FormalSymbol):
        n = f.n
        margin = min(cutoff, f.total_degree() + g.total_degree())
        inner = cutoff - margin
        composed = fock.compose_formal(fock.toeplitz_formal(f), fock.toeplitz_formal(g), inner)
        defect = composed
        for alpha in enumerate_upto(n, k):
            term_symbol = f.differentiate(alpha, HOLOMORPHIC) * g.differentiate(alpha, ANTIHOLOMORPHIC)
            term = fock.toeplitz_formal(term_symbol).scaled(
                GaussianRational.of(Fraction((-1) ** degree(alpha), factorial(alpha))),
                extra_spow=2 * degree(alpha),
            )
            defect = defect - term
        return _formal_defect_curve(
            "product-expansion", defect, margin, k, n, cutoff, t_grid, threshold
        )

    fs = _as_sampled(f)
    gs = fs if g is f else _as_sampled(g)
    n = fs.n
    terms = []
    for alpha in enumerate_upto(n, k):
        sym = numeric.sampled_product(
            fs.derivative_symbol(alpha, (0,) * n), gs.derivative_symbol((0,) * n, alpha)
        )
        terms.append((degree(alpha), Fraction(1, factorial(alpha)), sym))

    def defect_at(block_cutoff: int, t: float) -> np.ndarray:
        fg, _, _, rule_order = product_block(fs, gs, block_cutoff, t, floor_order=quad_order)
        basis = TruncatedBasis(n, block_cutoff, t)
        rule = matrix_rule(block_cutoff, quad_order)
        out = fg.copy()
        for d, frac, sym in terms:
            coeff = float(frac) * (-t) ** d
            out -= coeff * fock.toeplitz_matrix_sampled(sym, basis, rule).entries
        return out

    return _sampled_defect_curve(
        "product-expansion", defect_at, k, n, cutoff, quad_order, t_grid, threshold
    )


def _as_sampled(sym) -> SampledSymbol:
    if isinstance(sym, SampledSymbol):
        return sym
    if isinstance(sym, FormalSymbol):
        return numeric.sampled_from_formal(sym)
    raise TypeError(f"expected a symbol, got {type(sym).__name__}")


# ----- commutator against the Poisson bracket --------------------------------


def commutator_bracket_curve(
    f,
    g,
    cutoff: int = 40,
    quad_order: int = 40,
    t_grid: Optional[Sequence[float]] = None,
) -> ExpansionReport:
    """Remainder of [T_f, T_g] - i t T_{{f,g}} in operator norm per t.

    The Poisson bracket is {f,g} = i sum_j (d_j f dbar_j g - dbar_j f d_j g);
    the remainder should vanish faster than t as t -> 0 (threshold 1.5).
    """
    t_grid = list(t_grid) if t_grid is not None else default_t_grid()
    threshold = 1.0 + SLOPE_MARGIN
    if isinstance(f, FormalSymbol) and isinstance(g, FormalSymbol):
        n = f.n
        bracket = symbolic.poisson_bracket(f, g)
        margin = min(cutoff, f.total_degree() + g.total_degree())
        inner = cutoff - margin
        tf = fock.toeplitz_formal(f)
        tg = fock.toeplitz_formal(g)
        defect = fock.compose_formal(tf, tg, inner) - fock.compose_formal(tg, tf, inner)
        defect = defect - fock.toeplitz_formal(bracket).scaled(GR_I, extra_spow=2)
        return _formal_defect_curve(
            "commutator-bracket", defect, margin, 1, n, cutoff, t_grid, threshold
        )

    fs = _as_sampled(f)
    gs = _as_sampled(g)
    n = fs.n
    bracket = poisson_bracket_sampled(fs, gs)

    def defect_at(block_cutoff: int, t: float) -> np.ndarray:
        fg, gf, _, rule_order = product_block(fs, gs, block_cutoff, t, floor_order=quad_order)
        basis = TruncatedBasis(n, block_cutoff, t)
        rule = matrix_rule(block_cutoff, quad_order)
        tb = fock.toeplitz_matrix_sampled(bracket, basis, rule).entries
        return fg - gf - 1j * t * tb

    return _sampled_defect_curve(
        "commutator-bracket", defect_at, 1, n, cutoff, quad_order, t_grid, threshold
    )


def poisson_bracket_sampled(f: SampledSymbol, g: SampledSymbol) -> SampledSymbol:
    """{f,g} = i sum_j (d_j f dbar_j g - dbar_j f d_j g) for sampled symbols."""
    if f.n != g.n:
        raise ValueError("dimension mismatch")
    n = f.n
    zero = (0,) * n
    total: Optional[SampledSymbol] = None
    for j in range(n):
        e = unit(n, j + 1)
        plus = numeric.sampled_product(f.derivative_symbol(e, zero), g.derivative_symbol(zero, e))
        minus = numeric.sampled_product(f.derivative_symbol(zero, e), g.derivative_symbol(e, zero))
        piece = numeric.sampled_sum(plus, numeric.sampled_scale(minus, -1.0))
        total = piece if total is None else numeric.sampled_sum(total, piece)
    return numeric.sampled_scale(total, 1j)


# ----- heat-transform intertwining -------------------------------------------


def _intertwining_sides_formal(
    f: FormalSymbol, g: FormalSymbol, k: int
) -> tuple[FormalSymbol, FormalSymbol]:
    n = f.n
    lhs = FormalSymbol.zero(n)
    rhs = FormalSymbol.zero(n)
    hf = symbolic.heat_transform_formal(f)
    hg = symbolic.heat_transform_formal(g)
    for alpha in enumerate_upto(n, k):
        d = degree(alpha)
        coeff = GaussianRational.of(Fraction((-1) ** d, factorial(alpha)))
        inner = f.differentiate(alpha, HOLOMORPHIC) * g.differentiate(alpha, ANTIHOLOMORPHIC)
        lhs = lhs + symbolic.heat_transform_formal(inner).scaled(coeff, extra_spow=2 * d)
        coeff_rhs = GaussianRational.of(Fraction(1, factorial(alpha)))
        rhs = rhs + (
            hf.differentiate(alpha, ANTIHOLOMORPHIC) * hg.differentiate(alpha, HOLOMORPHIC)
        ).scaled(coeff_rhs, extra_spow=2 * d)
    return lhs, rhs


def intertwining_valuation(f: FormalSymbol, g: FormalSymbol, k: int) -> Union[Fraction, float]:
    """t-valuation of the defect between the two order-k star expansions.

    The heat transform of the order-k sharp expansion of (f, g) agrees with
    the order-k Berezin star expansion of the heat transforms up to a defect
    of valuation >= k+1; this returns that valuation exactly (+inf when the
    defect vanishes identically).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    lhs, rhs = _intertwining_sides_formal(f, g, k)
    return (lhs - rhs).t_valuation()


def intertwining_curve(
    f,
    g,
    k: int,
    quad_order: int = 40,
    t_grid: Optional[Sequence[float]] = None,
    z_grid: Optional[Sequence[Sequence[complex]]] = None,
) -> ExpansionReport:
    """Sup-norm defect over a z-grid between the two order-k star expansions.

    LHS: sum_{|alpha|<=k} ((-t)^|alpha|/alpha!) * heat((d^alpha f)(dbar^alpha g));
    RHS: sum_{|alpha|<=k} (t^|alpha|/alpha!) * (dbar^alpha heat f)(d^alpha heat g),
    with every heat transform evaluated by quadrature.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    fs = _as_sampled(f)
    gs = _as_sampled(g)
    n = fs.n
    t_grid = list(t_grid) if t_grid is not None else default_t_grid()
    z_grid = list(z_grid) if z_grid is not None else default_z_grid(n)
    rule = gauss_hermite(quad_order)
    zero = (0,) * n
    lhs_terms = []
    rhs_terms = []
    for alpha in enumerate_upto(n, k):
        d = degree(alpha)
        c = Fraction(1, factorial(alpha))
        inner = numeric.sampled_product(
            fs.derivative_symbol(alpha, zero), gs.derivative_symbol(zero, alpha)
        )
        lhs_terms.append((d, c, inner))
        rhs_terms.append((d, c, fs.derivative_symbol(zero, alpha), gs.derivative_symbol(alpha, zero)))

    remainders = []
    for t in t_grid:
        worst = 0.0
        for z in z_grid:
            lhs = 0j
            for d, c, sym in lhs_terms:
                lhs += float(c) * (-t) ** d * numeric.heat_numeric(sym, z, t, rule)
            rhs = 0j
            for d, c, dfs, dgs in rhs_terms:
                rhs += (
                    float(c)
                    * t**d
                    * numeric.heat_numeric(dfs, z, t, rule)
                    * numeric.heat_numeric(dgs, z, t, rule)
                )
            worst = max(worst, abs(lhs - rhs))
        remainders.append(worst)
    slope, verdict = _fit_and_verdict(t_grid, remainders, k + SLOPE_MARGIN)
    return ExpansionReport(
        check="intertwining-sampled",
        k=k,
        n=n,
        cutoff=0,
        quad_order=quad_order,
        t_grid=t_grid,
        remainders=remainders,
        slope=slope,
        verdict=verdict,
        diagnostics={"mode": "sampled", "z_grid_size": len(z_grid)},
    )


# ----- heat-transform expansion ----------------------------------------------


def heat_expansion_curve(
    f,
    k: int,
    quad_order: int = 40,
    t_grid: Optional[Sequence[float]] = None,
    z_grid: Optional[Sequence[Sequence[complex]]] = None,
) -> ExpansionReport:
    """Sup-norm defect of the order-k heat-transform expansion over a z-grid.

    remainder(t) = max_z | heat(f)(z) - sum_{|alpha|<=k} (t^|alpha|/alpha!)
    (d^alpha dbar^alpha f)(z) |, heat transform by quadrature.

    Exact polynomial symbols use the exact heat transform instead, so a
    terminating expansion (degree <= 2k) yields literal zeros.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if isinstance(f, FormalSymbol):
        return _heat_expansion_formal(f, k, t_grid, z_grid)
    fs = _as_sampled(f)
    n = fs.n
    t_grid = list(t_grid) if t_grid is not None else default_t_grid()
    z_grid = list(z_grid) if z_grid is not None else default_z_grid(n)
    rule = gauss_hermite(quad_order)
    terms = []
    for alpha in enumerate_upto(n, k):
        terms.append((degree(alpha), Fraction(1, factorial(alpha)), fs.derivative_symbol(alpha, alpha)))
    remainders = []
    for t in t_grid:
        worst = 0.0
        for z in z_grid:
            heat = numeric.heat_numeric(fs, z, t, rule)
            partial = 0j
            for d, c, sym in terms:
                partial += float(c) * t**d * sym.at_point(z)
            worst = max(worst, abs(heat - partial))
        remainders.append(worst)
    slope, verdict = _fit_and_verdict(t_grid, remainders, k + SLOPE_MARGIN)
    return ExpansionReport(
        check="heat-expansion",
        k=k,
        n=n,
        cutoff=0,
        quad_order=quad_order,
        t_grid=t_grid,
        remainders=remainders,
        slope=slope,
        verdict=verdict,
        diagnostics={"mode": "sampled", "z_grid_size": len(z_grid)},
    )


def _heat_expansion_formal(
    f: FormalSymbol,
    k: int,
    t_grid: Optional[Sequence[float]],
    z_grid: Optional[Sequence[Sequence[complex]]],
) -> ExpansionReport:
    n = f.n
    t_grid = list(t_grid) if t_grid is not None else default_t_grid()
    z_grid = list(z_grid) if z_grid is not None else default_z_grid(n)
    defect = symbolic.heat_transform_formal(f)
    for alpha in enumerate_upto(n, k):
        d = degree(alpha)
        coeff = GaussianRational.of(Fraction(1, factorial(alpha)))
        term = f.differentiate(alpha, HOLOMORPHIC).differentiate(alpha, ANTIHOLOMORPHIC)
        defect = defect - term.scaled(coeff, extra_spow=2 * d)
    if defect.is_zero():
        remainders = [0.0 for _ in t_grid]
    else:
        remainders = [max(abs(defect.evaluate(z, t)) for z in z_grid) for t in t_grid]
    slope, verdict = _fit_and_verdict(t_grid, remainders, k + SLOPE_MARGIN)
    return ExpansionReport(
        check="heat-expansion",
        k=k,
        n=n,
        cutoff=0,
        quad_order=0,
        t_grid=t_grid,
        remainders=remainders,
        slope=slope,
        verdict=verdict,
        diagnostics={"mode": "formal", "z_grid_size": len(z_grid), "exact": True},
    )


# ----- canonical commutation relations ----------------------------------------


def position_symbol(n: int, j: int) -> FormalSymbol:
    """q_j = Re(z_j) = (z_j + conj(z_j)) / 2."""
    return (FormalSymbol.z(n, j) + FormalSymbol.zbar(n, j)).scaled(Fraction(1, 2))


def momentum_symbol(n: int, j: int) -> FormalSymbol:
    """p_j = Im(z_j) = (z_j - conj(z_j)) / (2i)."""
    return (FormalSymbol.z(n, j) - FormalSymbol.zbar(n, j)).scaled(
        GaussianRational.of(0, Fraction(-1, 2))
    )


def ccr_table(n: int, t: float, cutoff: int = 20) -> dict:
    """Residuals of the canonical commutation relations on the interior block.

    Builds the truncated matrices of T_{p_j} and T_{q_j}, forms all
    commutators, and measures (with margin-1 interior blocks)
    ||[T_p_j, T_p_k]||, ||[T_q_j, T_q_k]||, and
    ||[T_p_j, T_q_k] - (i t / 2) delta_jk I||.
    """
    basis = TruncatedBasis(n, cutoff, t)
    tp = [fock.toeplitz_matrix_formal(momentum_symbol(n, j + 1), basis) for j in range(n)]
    tq = [fock.toeplitz_matrix_formal(position_symbol(n, j + 1), basis) for j in range(n)]
    ident = fock.identity_matrix(basis)

    def residual(a: OperatorMatrix, b: OperatorMatrix, delta: bool) -> float:
        c = fock.commutator(a, b)
        if delta:
            c = fock.matrix_subtract(c, fock.matrix_scale(ident, 0.5j * t))
        return fock.spectral_norm(fock.interior_block(c, 1))

    pp = [[residual(tp[j], tp[k], False) for k in range(n)] for j in range(n)]
    qq = [[residual(tq[j], tq[k], False) for k in range(n)] for j in range(n)]
    pq = [[residual(tp[j], tq[k], j == k) for k in range(n)] for j in range(n)]
    worst = max(
        max(max(row) for row in pp), max(max(row) for row in qq), max(max(row) for row in pq)
    )
    return {
        "check": "ccr",
        "n": n,
        "N": cutoff,
        "t": t,
        "pp": pp,
        "qq": qq,
        "pq": pq,
        "max_residual": worst,
        "verdict": "pass" if worst <= 1e-10 else "fail",
    }


# ----- exact identity suites ---------------------------------------------------


def product_identity_exact(f: FormalSymbol, g: FormalSymbol, monomial_degree: int = 8) -> bool:
    """Whether T_f T_g equals its full finite expansion on all monomials up
    to the given degree, in exact arithmetic."""
    from .multiindex import comp_min, iter_box

    composed = fock.compose_formal(
        fock.toeplitz_formal(f), fock.toeplitz_formal(g), monomial_degree
    )
    total = None
    box = comp_min(f.max_z_exponent(), g.max_zbar_exponent())
    for alpha in iter_box(box):
        term_symbol = f.differentiate(alpha, HOLOMORPHIC) * g.differentiate(
            alpha, ANTIHOLOMORPHIC
        )
        term = fock.toeplitz_formal(term_symbol).scaled(
            GaussianRational.of(Fraction((-1) ** degree(alpha), factorial(alpha))),
            extra_spow=2 * degree(alpha),
        )
        total = term if total is None else total + term
    return fock.equal_on(composed, total, monomial_degree)


def product_suite(
    trials: int = 50,
    max_degree: int = 3,
    seed: int = 12345,
    dims: Sequence[int] = (1, 2),
    monomial_degree: int = 8,
) -> dict:
    """Random-polynomial suite for the exact finite product expansion."""
    import random

    rng = random.Random(seed)
    failures = []
    for trial in range(trials):
        n = dims[rng.randrange(len(dims))]
        f = symbolic.random_polynomial(rng, n, max_degree)
        g = symbolic.random_polynomial(rng, n, max_degree)
        if not product_identity_exact(f, g, monomial_degree):
            failures.append(trial)
    return {
        "check": "product-exact",
        "trials": trials,
        "max_degree": max_degree,
        "monomial_degree": monomial_degree,
        "seed": seed,
        "failures": failures,
        "verdict": "pass" if not failures else "fail",
    }


def comb_suite(max_p: int = 12) -> dict:
    """Exact big-integer check of the summed binomial identity over
    0 <= p <= q <= max_p, 0 <= l <= max_p."""
    failures = []
    for q in range(max_p + 1):
        for p in range(q + 1):
            for l in range(max_p + 1):
                if symbolic.comb_sum(p, q, l) != symbolic.comb_closed(p, q, l):
                    failures.append([p, q, l])
    return {
        "check": "comb",
        "max": max_p,
        "failures": failures,
        "verdict": "pass" if not failures else "fail",
    }


def moment_suite(
    n: int = 1,
    degmax: int = 8,
    quad_degmax: int = 3,
    quad_order: int = 30,
    quad_tol: float = 1e-6,
) -> dict:
    """Closed form vs series vs quadrature for the double pairing moments."""
    exact_failures = []
    indices = enumerate_upto(n, degmax)
    for a in indices:
        for b in indices:
            for c in indices:
                for e in indices:
                    if symbolic.moment_double_closed(a, b, c, e) != symbolic.moment_double_series(
                        a, b, c, e
                    ):
                        exact_failures.append([list(a), list(b), list(c), list(e)])
    worst_quad = 0.0
    if n == 1 and quad_degmax >= 0:
        rule = gauss_hermite(quad_order)
        small = enumerate_upto(1, quad_degmax)
        for a in small:
            for b in small:
                for c in small:
                    for e in small:
                        closed = complex(symbolic.moment_double_closed(a, b, c, e))
                        quad = numeric.moment_double_quadrature(a, b, c, e, rule)
                        worst_quad = max(worst_quad, abs(quad - closed))
    ok = not exact_failures and worst_quad <= quad_tol
    return {
        "check": "moments",
        "n": n,
        "degmax": degmax,
        "quad_degmax": quad_degmax if n == 1 else -1,
        "Q": quad_order,
        "exact_failures": exact_failures,
        "worst_quadrature_error": worst_quad,
        "verdict": "pass" if ok else "fail",
    }


def sharp_consistency(
    f: FormalSymbol,
    g: FormalSymbol,
    quad_order: int = 24,
    tol: float = 1e-6,
    t_grid: Optional[Sequence[float]] = None,
    z_grid: Optional[Sequence[Sequence[complex]]] = None,
    monomial_degree: int = 8,
) -> dict:
    """Exact and numeric consistency of the sharp product with the heat transform.

    Exact parts: (a) with F = heat(f), G = heat(g), the operator identity
    T_F T_G = T_{F sharp G} on all monomials up to monomial_degree; (b) the
    intertwining identity heat(f sharp g) = Berezin-star(heat f, heat g) as
    polynomial symbols.  Numeric part: the double pairing integral of (f, g)
    matches the sharp product of the heat transforms at sample points.
    """
    n = f.n
    t_grid = list(t_grid) if t_grid is not None else default_t_grid()
    z_grid = list(z_grid) if z_grid is not None else default_z_grid(n, points_per_axis=3)
    hf = symbolic.heat_transform_formal(f)
    hg = symbolic.heat_transform_formal(g)
    sharp_heats = symbolic.sharp_formal(hf, hg)
    composed = fock.compose_formal(
        fock.toeplitz_formal(hf), fock.toeplitz_formal(hg), monomial_degree
    )
    operator_ok = fock.equal_on(
        composed, fock.toeplitz_formal(sharp_heats), monomial_degree
    )
    lhs = symbolic.heat_transform_formal(symbolic.sharp_formal(f, g))
    rhs = symbolic.star_berezin(hf, hg)
    star_ok = (lhs - rhs).is_zero()
    rule = gauss_hermite(quad_order)
    fs = numeric.sampled_from_formal(f)
    gs = numeric.sampled_from_formal(g)
    worst = 0.0
    for t in t_grid:
        for z in z_grid:
            integral = numeric.sharp_integral_numeric(fs, gs, z, t, rule)
            target = sharp_heats.evaluate(z, t)
            worst = max(worst, abs(integral - target))
    ok = operator_ok and star_ok and worst <= tol
    return {
        "check": "sharp-integral",
        "n": n,
        "Q": quad_order,
        "monomial_degree": monomial_degree,
        "exact_operator_identity": operator_ok,
        "exact_heat_star_identity": star_ok,
        "worst_integral_error": worst,
        "tolerance": tol,
        "verdict": "pass" if ok else "fail",
    }
