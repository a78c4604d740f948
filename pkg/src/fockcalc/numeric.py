"""Quadrature engine for smooth bounded symbols.

Gauss-Hermite tensor rules over the 2n real coordinates of C^n evaluate the
Gaussian integrals of the calculus: the heat transform, the coupled double
integral behind the sharp product, and Toeplitz matrix entries.  Smooth
symbols are black boxes (SampledSymbol) carrying an evaluation callback and,
optionally, analytic derivative callbacks; central finite differences cover
derivatives up to total order two when callbacks are absent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial.hermite import hermgauss

from .multiindex import MultiIndex, add as mi_add, degree, validate
from .symbolic import FormalSymbol

FD_STEP = 1e-5
FD_MAX_ORDER = 2

ValueFn = Callable[[np.ndarray], np.ndarray]
DerivativeFactory = Callable[[MultiIndex, MultiIndex], ValueFn]


class QuadratureSampleError(ValueError):
    """A symbol produced a non-finite sample; carries the offending node."""

    def __init__(self, message: str, node=None):
        super().__init__(message)
        self.node = node


class IllConditionedQuadrature(RuntimeError):
    """The quadrature rule cannot resolve the requested computation."""


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights for the weight e^(-x^2) on the real line."""

    order: int
    nodes: np.ndarray
    weights: np.ndarray
    log_weights: np.ndarray


def gauss_hermite(order: int) -> QuadratureRule:
    """Physicists' Gauss-Hermite rule with the given number of nodes.

    Integrates x^j e^(-x^2) exactly for j <= 2*order - 1; the weights sum
    to sqrt(pi).
    """
    if not isinstance(order, int) or isinstance(order, bool) or not 1 <= order <= 200:
        raise ValueError(f"order must be an int in [1, 200], got {order!r}")
    nodes, weights = hermgauss(order)
    total = float(np.sum(weights))
    if abs(total - math.sqrt(math.pi)) > 1e-12 * math.sqrt(math.pi):
        raise IllConditionedQuadrature(
            f"weight sum {total!r} deviates from sqrt(pi); rule of order {order} is unusable"
        )
    return QuadratureRule(order, nodes, weights, np.log(weights))


def tensor_nodes(rule: QuadratureRule, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Tensor the 1-d rule over the 2n real coordinates of C^n.

    Returns (u, logw): u has shape (n, order^(2n)) with u_j = x_j + i y_j,
    and logw is the summed log-weight per node column.
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    axes = np.meshgrid(*([rule.nodes] * (2 * n)), indexing="ij")
    flat = np.stack([a.reshape(-1) for a in axes])
    logs = np.meshgrid(*([rule.log_weights] * (2 * n)), indexing="ij")
    logw = sum(a.reshape(-1) for a in logs)
    u = flat[0::2] + 1j * flat[1::2]
    return u, logw


# ----- sampled symbols ----------------------------------------------------


@dataclass
class SampledSymbol:
    """Black-box smooth symbol on C^n.

    value maps an (n, K) array of points to a (K,) array of samples;
    derivative, when present, maps a pair of multi-indices (holomorphic
    order, antiholomorphic order) to such a callback for the corresponding
    Wirtinger derivative.  Without callbacks, derivatives up to total order
    two fall back to central finite differences with step 1e-5.
    """

    n: int
    value: ValueFn
    derivative: Optional[DerivativeFactory] = None
    sup_bound: Optional[float] = None
    label: str = ""

    def values(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=np.complex128)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.shape[0] != self.n:
            raise ValueError(f"points have dimension {pts.shape[0]}, symbol has {self.n}")
        out = np.asarray(self.value(pts), dtype=np.complex128)
        return np.broadcast_to(out, (pts.shape[1],)).copy() if out.ndim == 0 else out

    def at_point(self, z: Sequence[complex]) -> complex:
        pts = np.asarray([complex(w) for w in z], dtype=np.complex128)[:, None]
        return complex(self.values(pts)[0])

    def derivative_symbol(self, hol: Sequence[int], anti: Sequence[int]) -> "SampledSymbol":
        """The Wirtinger derivative d^hol dbar^anti of this symbol."""
        hol = validate(hol)
        anti = validate(anti)
        if len(hol) != self.n or len(anti) != self.n:
            raise ValueError("derivative order dimension mismatch")
        if degree(hol) == 0 and degree(anti) == 0:
            return self
        if self.derivative is not None:
            fn = self.derivative(hol, anti)
            parent = self.derivative

            def shifted_factory(h2: MultiIndex, a2: MultiIndex) -> ValueFn:
                return parent(mi_add(hol, h2), mi_add(anti, a2))

            return SampledSymbol(
                self.n,
                fn,
                derivative=shifted_factory,
                label=_dlabel(self.label, hol, anti),
            )
        if degree(hol) + degree(anti) > FD_MAX_ORDER:
            raise ValueError(
                f"finite differences support total derivative order <= {FD_MAX_ORDER}; "
                "provide analytic derivative callbacks for higher orders"
            )
        fn = self.value
        for axis, reps in enumerate(hol):
            for _ in range(reps):
                fn = _fd_wirtinger(fn, axis, antiholomorphic=False)
        for axis, reps in enumerate(anti):
            for _ in range(reps):
                fn = _fd_wirtinger(fn, axis, antiholomorphic=True)
        return SampledSymbol(self.n, fn, label=_dlabel(self.label, hol, anti))


def _dlabel(label: str, hol: MultiIndex, anti: MultiIndex) -> str:
    return f"d{list(hol)}dbar{list(anti)}({label})" if label else ""


def _fd_wirtinger(fn: ValueFn, axis: int, antiholomorphic: bool) -> ValueFn:
    """One central-difference Wirtinger derivative along the given axis."""
    sign = 1.0 if antiholomorphic else -1.0

    def derived(pts: np.ndarray) -> np.ndarray:
        h = FD_STEP
        shift = np.zeros((pts.shape[0], 1), dtype=np.complex128)
        shift[axis, 0] = h
        ishift = np.zeros_like(shift)
        ishift[axis, 0] = 1j * h
        re_part = np.asarray(fn(pts + shift)) - np.asarray(fn(pts - shift))
        im_part = np.asarray(fn(pts + ishift)) - np.asarray(fn(pts - ishift))
        return (re_part + sign * 1j * im_part) / (4.0 * h)

    return derived


# ----- combinators ---------------------------------------------------------


def sampled_constant(n: int, c: complex) -> SampledSymbol:
    cval = complex(c)

    def value(pts: np.ndarray) -> np.ndarray:
        return np.full(pts.shape[1], cval, dtype=np.complex128)

    def factory(hol: MultiIndex, anti: MultiIndex) -> ValueFn:
        if degree(hol) == 0 and degree(anti) == 0:
            return value
        return lambda pts: np.zeros(pts.shape[1], dtype=np.complex128)

    return SampledSymbol(n, value, derivative=factory, sup_bound=abs(cval), label=repr(c))


def sampled_scale(f: SampledSymbol, c: complex) -> SampledSymbol:
    cval = complex(c)
    factory = None
    if f.derivative is not None:
        parent = f.derivative

        def factory(hol: MultiIndex, anti: MultiIndex) -> ValueFn:
            fn = parent(hol, anti)
            return lambda pts: cval * np.asarray(fn(pts))

    bound = None if f.sup_bound is None else abs(cval) * f.sup_bound
    return SampledSymbol(
        f.n, lambda pts: cval * f.values(pts), derivative=factory, sup_bound=bound,
        label=f"{cval!r}*({f.label})" if f.label else "",
    )


def sampled_sum(f: SampledSymbol, g: SampledSymbol) -> SampledSymbol:
    if f.n != g.n:
        raise ValueError("dimension mismatch")
    factory = None
    if f.derivative is not None and g.derivative is not None:
        pf, pg = f.derivative, g.derivative

        def factory(hol: MultiIndex, anti: MultiIndex) -> ValueFn:
            a, b = pf(hol, anti), pg(hol, anti)
            return lambda pts: np.asarray(a(pts)) + np.asarray(b(pts))

    bound = None
    if f.sup_bound is not None and g.sup_bound is not None:
        bound = f.sup_bound + g.sup_bound
    return SampledSymbol(
        f.n, lambda pts: f.values(pts) + g.values(pts), derivative=factory,
        sup_bound=bound, label=f"({f.label})+({g.label})" if f.label and g.label else "",
    )


def sampled_product(f: SampledSymbol, g: SampledSymbol) -> SampledSymbol:
    """Pointwise product; derivatives follow the Leibniz rule when available."""
    if f.n != g.n:
        raise ValueError("dimension mismatch")
    factory = None
    if f.derivative is not None and g.derivative is not None:
        n = f.n

        def factory(hol: MultiIndex, anti: MultiIndex) -> ValueFn:
            parts = []
            for hsub in _subindices(hol):
                hrem = tuple(a - b for a, b in zip(hol, hsub))
                ch = _multi_binomial(hol, hsub)
                for asub in _subindices(anti):
                    arem = tuple(a - b for a, b in zip(anti, asub))
                    c = ch * _multi_binomial(anti, asub)
                    parts.append(
                        (c, f.derivative(hsub, asub), g.derivative(hrem, arem))
                    )

            def value(pts: np.ndarray) -> np.ndarray:
                total = np.zeros(pts.shape[1], dtype=np.complex128)
                for c, a, b in parts:
                    total += c * np.asarray(a(pts)) * np.asarray(b(pts))
                return total

            return value

    bound = None
    if f.sup_bound is not None and g.sup_bound is not None:
        bound = f.sup_bound * g.sup_bound
    return SampledSymbol(
        f.n, lambda pts: f.values(pts) * g.values(pts), derivative=factory,
        sup_bound=bound, label=f"({f.label})*({g.label})" if f.label and g.label else "",
    )


def _subindices(alpha: MultiIndex) -> list[MultiIndex]:
    out = [()]
    for cap in alpha:
        out = [prefix + (j,) for prefix in out for j in range(cap + 1)]
    return out


def _multi_binomial(alpha: MultiIndex, beta: MultiIndex) -> int:
    out = 1
    for a, b in zip(alpha, beta):
        out *= math.comb(a, b)
    return out


def sampled_from_formal(f: FormalSymbol) -> SampledSymbol:
    """Present an exact polynomial symbol as a sampled one (exact derivatives).

    The symbol must be free of the weight variable s, since a sampled
    symbol is a function of z alone.
    """
    if f.has_s():
        raise ValueError("symbol depends on the weight parameter; substitute t first")

    def make_value(sym: FormalSymbol) -> ValueFn:
        terms = [
            (complex(c), ze, zb) for (ze, zb, _), c in sym.canonical_terms()
        ]

        def value(pts: np.ndarray) -> np.ndarray:
            total = np.zeros(pts.shape[1], dtype=np.complex128)
            for c, ze, zb in terms:
                term = np.full(pts.shape[1], c, dtype=np.complex128)
                for j, e in enumerate(ze):
                    if e:
                        term *= pts[j] ** e
                for j, e in enumerate(zb):
                    if e:
                        term *= np.conj(pts[j]) ** e
                total += term
            return total

        return value

    def factory(hol: MultiIndex, anti: MultiIndex) -> ValueFn:
        from .symbolic import ANTIHOLOMORPHIC, HOLOMORPHIC

        return make_value(f.differentiate(hol, HOLOMORPHIC).differentiate(anti, ANTIHOLOMORPHIC))

    return SampledSymbol(f.n, make_value(f), derivative=factory, label="polynomial")


# ----- built-in smooth families --------------------------------------------


def complex_exponential(
    n: int, a: Sequence[float], b: Sequence[float]
) -> SampledSymbol:
    """The symbol exp(i * (a . Re z + b . Im z)): bounded with all derivatives bounded.

    Wirtinger derivatives multiply by (i a_j + b_j)/2 per holomorphic order
    and (i a_j - b_j)/2 per antiholomorphic order in axis j.
    """
    avec = np.asarray([float(v) for v in a], dtype=np.float64)
    bvec = np.asarray([float(v) for v in b], dtype=np.float64)
    if avec.shape != (n,) or bvec.shape != (n,):
        raise ValueError("frequency vectors must have length n")

    def value(pts: np.ndarray) -> np.ndarray:
        phase = avec @ pts.real + bvec @ pts.imag
        return np.exp(1j * phase)

    def factory(hol: MultiIndex, anti: MultiIndex) -> ValueFn:
        mult = 1.0 + 0j
        for j in range(n):
            mult *= ((1j * avec[j] + bvec[j]) / 2.0) ** hol[j]
            mult *= ((1j * avec[j] - bvec[j]) / 2.0) ** anti[j]
        return lambda pts: mult * value(pts)

    return SampledSymbol(
        n, value, derivative=factory, sup_bound=1.0,
        label=f"exp(i({list(avec)}.x+{list(bvec)}.y))",
    )


def cos_re(n: int = 1, axis: int = 1, freq: float = 1.0) -> SampledSymbol:
    """cos(freq * Re z_axis) as a sampled symbol with analytic derivatives."""
    e_plus = complex_exponential(n, _axis_vec(n, axis, freq), [0.0] * n)
    e_minus = complex_exponential(n, _axis_vec(n, axis, -freq), [0.0] * n)
    out = sampled_scale(sampled_sum(e_plus, e_minus), 0.5)
    out.sup_bound = 1.0
    out.label = f"cos({freq}*re(z{axis}))" if freq != 1.0 else f"cos(re(z{axis}))"
    return out


def sin_im(n: int = 1, axis: int = 1, freq: float = 1.0) -> SampledSymbol:
    """sin(freq * Im z_axis) as a sampled symbol with analytic derivatives."""
    e_plus = complex_exponential(n, [0.0] * n, _axis_vec(n, axis, freq))
    e_minus = complex_exponential(n, [0.0] * n, _axis_vec(n, axis, -freq))
    out = sampled_scale(sampled_sum(e_plus, sampled_scale(e_minus, -1.0)), -0.5j)
    out.sup_bound = 1.0
    out.label = f"sin({freq}*im(z{axis}))" if freq != 1.0 else f"sin(im(z{axis}))"
    return out


def _axis_vec(n: int, axis: int, v: float) -> list[float]:
    if not 1 <= axis <= n:
        raise ValueError(f"axis must lie in [1, {n}]")
    out = [0.0] * n
    out[axis - 1] = v
    return out


def gaussian_bump(
    n: int, center: Sequence[complex] = None, decay: float = 1.0
) -> SampledSymbol:
    """exp(-decay * |z - center|^2), with analytic derivatives of every order.

    Derivatives are polynomials in (z - center, conj(z - center)) times the
    bump; the polynomial recursion d_j (P f) = (d_j P - decay * wbar_j P) f
    is carried exactly in a small coefficient table.
    """
    if decay <= 0:
        raise ValueError("decay must be positive")
    z0 = np.zeros(n, dtype=np.complex128) if center is None else np.asarray(
        [complex(w) for w in center], dtype=np.complex128
    )
    if z0.shape != (n,):
        raise ValueError("center must have length n")

    def bump(pts: np.ndarray) -> np.ndarray:
        w = pts - z0[:, None]
        return np.exp(-decay * np.sum(np.abs(w) ** 2, axis=0))

    # polynomial prefactor as {(ze, zb): complex coefficient} in w = z - center
    def poly_value(poly: dict, pts: np.ndarray) -> np.ndarray:
        w = pts - z0[:, None]
        total = np.zeros(pts.shape[1], dtype=np.complex128)
        for (ze, zb), c in poly.items():
            term = np.full(pts.shape[1], c, dtype=np.complex128)
            for j, e in enumerate(ze):
                if e:
                    term *= w[j] ** e
            for j, e in enumerate(zb):
                if e:
                    term *= np.conj(w[j]) ** e
            total += term
        return total

    def d_poly(poly: dict, axis: int, antiholomorphic: bool) -> dict:
        out: dict = {}
        for (ze, zb), c in poly.items():
            src = zb if antiholomorphic else ze
            # derivative of the polynomial factor
            if src[axis] > 0:
                smaller = list(src)
                smaller[axis] -= 1
                key = (ze, tuple(smaller)) if antiholomorphic else (tuple(smaller), zb)
                out[key] = out.get(key, 0j) + c * src[axis]
            # chain term from the bump: -decay * (conjugate coordinate)
            other = ze if antiholomorphic else zb
            bigger = list(other)
            bigger[axis] += 1
            key = (tuple(bigger), zb) if antiholomorphic else (ze, tuple(bigger))
            out[key] = out.get(key, 0j) - decay * c
        return {k: v for k, v in out.items() if v != 0}

    zero = (0,) * n

    def factory(hol: MultiIndex, anti: MultiIndex) -> ValueFn:
        poly = {(zero, zero): 1.0 + 0j}
        for axis, reps in enumerate(hol):
            for _ in range(reps):
                poly = d_poly(poly, axis, antiholomorphic=False)
        for axis, reps in enumerate(anti):
            for _ in range(reps):
                poly = d_poly(poly, axis, antiholomorphic=True)
        return lambda pts: poly_value(poly, pts) * bump(pts)

    return SampledSymbol(
        n, bump, derivative=factory, sup_bound=1.0,
        label=f"exp(-{decay}|z-{list(z0)}|^2)",
    )


# ----- Gaussian integrals ---------------------------------------------------


def heat_numeric(
    f: SampledSymbol, z: Sequence[complex], t: float, rule: QuadratureRule
) -> complex:
    """Heat transform pi^-n * Int f(sqrt(t) w + z) e^(-|w|^2) dv(w) by tensor quadrature."""
    if not t > 0:
        raise ValueError("t must be positive")
    if len(z) != f.n:
        raise ValueError("point dimension mismatch")
    u, logw = tensor_nodes(rule, f.n)
    center = np.asarray([complex(w) for w in z], dtype=np.complex128)[:, None]
    samples = f.values(math.sqrt(t) * u + center)
    _ensure_finite(samples, u)
    return complex(np.sum(samples * np.exp(logw)) / math.pi ** f.n)


def _ensure_finite(samples: np.ndarray, nodes: np.ndarray) -> None:
    finite = np.isfinite(samples)
    if not np.all(finite):
        bad = int(np.argmax(~finite))
        raise QuadratureSampleError(
            f"symbol sample is not finite at quadrature node {nodes[:, bad]!r}",
            node=nodes[:, bad],
        )


_KERNEL_CACHE: dict = {}


def pairing_kernel(rule: QuadratureRule, n: int) -> np.ndarray:
    """Weighted kernel exp(-conj(v).w + logw_v + logw_w) over node pairs (cached for n=1).

    Folding the log-weights into the exponent keeps every entry at most 1 in
    magnitude (since Re(conj(v).w) >= -|v||w| and the Gaussian weights decay
    like e^(-|v|^2)), so the kernel never overflows.
    """
    key = (rule.order, n)
    if n == 1 and key in _KERNEL_CACHE:
        return _KERNEL_CACHE[key]
    v, logv = tensor_nodes(rule, n)
    expo = -np.conj(v).T @ v + logv[:, None] + logv[None, :]
    kernel = np.exp(expo)
    if n == 1:
        _KERNEL_CACHE[key] = kernel
    return kernel


def _double_pairing(fvals: np.ndarray, gvals: np.ndarray, rule: QuadratureRule, n: int) -> complex:
    kernel = pairing_kernel(rule, n)
    return complex(fvals @ kernel @ gvals / math.pi ** (2 * n))


def sharp_integral_numeric(
    f: SampledSymbol,
    g: SampledSymbol,
    z: Sequence[complex],
    t: float,
    rule: QuadratureRule,
) -> complex:
    """The coupled double integral
    pi^(-2n) * Int Int f(sqrt(t) v + z) g(sqrt(t) w + z) e^(-conj(v).w - |v|^2 - |w|^2)
    by tensor quadrature over 4n real variables.

    For polynomial f and g this equals the sharp product of the heat
    transforms of f and g evaluated at (z, t).
    """
    if f.n != g.n:
        raise ValueError("dimension mismatch")
    if not t > 0:
        raise ValueError("t must be positive")
    if len(z) != f.n:
        raise ValueError("point dimension mismatch")
    u, _ = tensor_nodes(rule, f.n)
    center = np.asarray([complex(w) for w in z], dtype=np.complex128)[:, None]
    pts = math.sqrt(t) * u + center
    fvals = f.values(pts)
    _ensure_finite(fvals, u)
    gvals = g.values(pts)
    _ensure_finite(gvals, u)
    return _double_pairing(fvals, gvals, rule, f.n)


def moment_double_quadrature(
    alpha: MultiIndex,
    beta: MultiIndex,
    gamma: MultiIndex,
    epsilon: MultiIndex,
    rule: QuadratureRule,
) -> complex:
    """pi^(-2n) * Int Int v^alpha conj(v)^beta w^gamma conj(w)^epsilon
    e^(-conj(v).w - |v|^2 - |w|^2), the quadrature route to the pair moment."""
    alpha = validate(alpha)
    beta = validate(beta)
    gamma = validate(gamma)
    epsilon = validate(epsilon)
    n = len(alpha)
    if {len(beta), len(gamma), len(epsilon)} != {n}:
        raise ValueError("all four multi-indices must share one dimension")
    u, _ = tensor_nodes(rule, n)

    def monomial(ze: MultiIndex, zb: MultiIndex) -> np.ndarray:
        out = np.ones(u.shape[1], dtype=np.complex128)
        for j, e in enumerate(ze):
            if e:
                out *= u[j] ** e
        for j, e in enumerate(zb):
            if e:
                out *= np.conj(u[j]) ** e
        return out

    return _double_pairing(monomial(alpha, beta), monomial(gamma, epsilon), rule, n)
