"""Exact symbol calculus: polynomials in z, conj(z) and the weight parameter.

Coefficients are Gaussian rationals (complex numbers with rational real and
imaginary parts), so every operation here is exact and symbol equality is
decidable.  The weight parameter t of the Gaussian measure is carried as a
formal variable s with s**2 = t; half-integer powers of t produced by
orthonormal-basis matrix elements then stay polynomial.

Besides the ring operations the module provides the symbol-level calculus
(Wirtinger derivatives, heat transform, sharp and Berezin star products,
Poisson bracket) and the exact combinatorial quantities that back them: a
factorial identity checked two ways and the coupled two-variable Gaussian
monomial pairing, again computed by two independent routes.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .multiindex import (
    MultiIndex,
    add as mi_add,
    comp_min,
    degree,
    enumerate_upto,
    factorial,
    falling_factorial,
    iter_box,
    try_subtract,
    unit,
    validate,
)

HOLOMORPHIC = "holomorphic"
ANTIHOLOMORPHIC = "antiholomorphic"

Rationalish = Union[int, Fraction, "GaussianRational"]


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex scalar with rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @staticmethod
    def of(re: Union[int, str, Fraction] = 0, im: Union[int, str, Fraction] = 0) -> "GaussianRational":
        for part in (re, im):
            if isinstance(part, (float, complex)) or isinstance(part, bool):
                raise TypeError(
                    f"exact value required (int, str or Fraction), got {type(part).__name__}"
                )
        return GaussianRational(Fraction(re), Fraction(im))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __add__(self, other: Rationalish) -> "GaussianRational":
        o = coerce_coeff(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: Rationalish) -> "GaussianRational":
        o = coerce_coeff(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: Rationalish) -> "GaussianRational":
        return coerce_coeff(other) - self

    def __mul__(self, other):
        if isinstance(other, FormalSymbol):
            return NotImplemented
        o = coerce_coeff(other)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other: Rationalish) -> "GaussianRational":
        o = coerce_coeff(other)
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return self * GaussianRational(o.re / den, -o.im / den)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __pow__(self, power: int) -> "GaussianRational":
        if power < 0:
            raise ValueError("negative powers not supported")
        out = GR_ONE
        base = self
        k = power
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __str__(self) -> str:
        return f"({self.re} + {self.im} i)"


GR_ZERO = GaussianRational()
GR_ONE = GaussianRational(Fraction(1), Fraction(0))
GR_I = GaussianRational(Fraction(0), Fraction(1))


def coerce_coeff(value: Rationalish) -> GaussianRational:
    """Coerce an exact scalar; floats are rejected to keep coefficients exact."""
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(value, (int, Fraction)):
        return GaussianRational(Fraction(value), Fraction(0))
    raise TypeError(f"exact coefficient required (int, Fraction or GaussianRational), got {type(value).__name__}")


TermKey = tuple[MultiIndex, MultiIndex, int]


class FormalSymbol:
    """Polynomial in z_1..z_n, conj(z_1)..conj(z_n) and s, with s**2 = t.

    Stored as a map (z exponents, conj-z exponents, s power) -> coefficient
    with no zero coefficients; instances are treated as immutable values.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[Mapping[TermKey, Rationalish]] = None):
        if n < 1:
            raise ValueError("dimension must be >= 1")
        clean: dict[TermKey, GaussianRational] = {}
        for key, raw in (terms or {}).items():
            ze, zb, sp = key
            ze = validate(ze)
            zb = validate(zb)
            if len(ze) != n or len(zb) != n:
                raise ValueError(f"exponent dimension mismatch for symbol over C^{n}: {key!r}")
            if not isinstance(sp, int) or sp < 0:
                raise ValueError(f"s power must be a nonnegative int, got {sp!r}")
            c = coerce_coeff(raw)
            if c.is_zero():
                continue
            k = (ze, zb, sp)
            prev = clean.get(k)
            if prev is not None:
                c = prev + c
                if c.is_zero():
                    del clean[k]
                    continue
            clean[k] = c
        self.n = n
        self.terms = clean

    # ----- constructors -------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "FormalSymbol":
        return cls(n)

    @classmethod
    def constant(cls, n: int, value: Rationalish) -> "FormalSymbol":
        zeros = (0,) * n
        return cls(n, {(zeros, zeros, 0): value})

    @classmethod
    def one(cls, n: int) -> "FormalSymbol":
        return cls.constant(n, 1)

    @classmethod
    def z(cls, n: int, j: int = 1) -> "FormalSymbol":
        zeros = (0,) * n
        return cls(n, {(unit(n, j), zeros, 0): 1})

    @classmethod
    def zbar(cls, n: int, j: int = 1) -> "FormalSymbol":
        zeros = (0,) * n
        return cls(n, {(zeros, unit(n, j), 0): 1})

    @classmethod
    def s(cls, n: int, power: int = 1) -> "FormalSymbol":
        zeros = (0,) * n
        return cls(n, {(zeros, zeros, power): 1})

    @classmethod
    def monomial(
        cls,
        n: int,
        ze: Sequence[int],
        zb: Sequence[int],
        spow: int = 0,
        coeff: Rationalish = 1,
    ) -> "FormalSymbol":
        return cls(n, {(tuple(ze), tuple(zb), spow): coeff})

    # ----- ring operations ----------------------------------------------

    def _check_dim(self, other: "FormalSymbol") -> None:
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, FormalSymbol):
            return NotImplemented
        self._check_dim(other)
        acc = dict(self.terms)
        for key, c in other.terms.items():
            _accumulate(acc, key, c)
        return _wrap(self.n, acc)

    def __sub__(self, other):
        if not isinstance(other, FormalSymbol):
            return NotImplemented
        self._check_dim(other)
        acc = dict(self.terms)
        for key, c in other.terms.items():
            _accumulate(acc, key, -c)
        return _wrap(self.n, acc)

    def __neg__(self) -> "FormalSymbol":
        return _wrap(self.n, {k: -c for k, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, FormalSymbol):
            self._check_dim(other)
            acc: dict[TermKey, GaussianRational] = {}
            for (ze1, zb1, sp1), c1 in self.terms.items():
                for (ze2, zb2, sp2), c2 in other.terms.items():
                    key = (mi_add(ze1, ze2), mi_add(zb1, zb2), sp1 + sp2)
                    _accumulate(acc, key, c1 * c2)
            return _wrap(self.n, acc)
        return self.scaled(other)

    def __rmul__(self, other):
        return self.scaled(other)

    def scaled(self, coeff: Rationalish, extra_spow: int = 0) -> "FormalSymbol":
        """Multiply by an exact scalar times s**extra_spow."""
        c0 = coerce_coeff(coeff)
        if c0.is_zero():
            return FormalSymbol.zero(self.n)
        if extra_spow < 0:
            raise ValueError("s power must be nonnegative")
        return _wrap(
            self.n,
            {(ze, zb, sp + extra_spow): c * c0 for (ze, zb, sp), c in self.terms.items()},
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalSymbol):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    __hash__ = None  # mutable dict inside; value semantics via ==

    def is_zero(self) -> bool:
        return not self.terms

    # ----- structure ----------------------------------------------------

    def conjugate(self) -> "FormalSymbol":
        return _wrap(self.n, {(zb, ze, sp): c.conjugate() for (ze, zb, sp), c in self.terms.items()})

    def differentiate(self, alpha: Sequence[int], kind: str) -> "FormalSymbol":
        """Apply the order-alpha Wirtinger derivative of the given kind.

        kind "holomorphic" differentiates in z, "antiholomorphic" in conj(z);
        s powers pass through untouched.
        """
        alpha = validate(alpha)
        if len(alpha) != self.n:
            raise ValueError(f"dimension mismatch: {len(alpha)} vs {self.n}")
        if kind not in (HOLOMORPHIC, ANTIHOLOMORPHIC):
            raise ValueError(f"kind must be {HOLOMORPHIC!r} or {ANTIHOLOMORPHIC!r}")
        hol = kind == HOLOMORPHIC
        acc: dict[TermKey, GaussianRational] = {}
        for (ze, zb, sp), c in self.terms.items():
            src = ze if hol else zb
            rem = try_subtract(src, alpha)
            if rem is None:
                continue
            mult = falling_factorial(src, alpha)
            key = (rem, zb, sp) if hol else (ze, rem, sp)
            _accumulate(acc, key, c * mult)
        return _wrap(self.n, acc)

    def d(self, j: int, kind: str) -> "FormalSymbol":
        """Single Wirtinger derivative along axis j (1-based)."""
        return self.differentiate(unit(self.n, j), kind)

    def t_valuation(self) -> Union[Fraction, float]:
        """Smallest power of t appearing (s power / 2); +inf for the zero symbol."""
        if not self.terms:
            return math.inf
        return Fraction(min(sp for (_, _, sp) in self.terms), 2)

    def z_degree(self) -> int:
        return max((degree(ze) for (ze, _, _) in self.terms), default=0)

    def zbar_degree(self) -> int:
        return max((degree(zb) for (_, zb, _) in self.terms), default=0)

    def total_degree(self) -> int:
        return max((degree(ze) + degree(zb) for (ze, zb, _) in self.terms), default=0)

    def max_z_exponent(self) -> MultiIndex:
        out = [0] * self.n
        for (ze, _, _) in self.terms:
            for j, e in enumerate(ze):
                out[j] = max(out[j], e)
        return tuple(out)

    def max_zbar_exponent(self) -> MultiIndex:
        out = [0] * self.n
        for (_, zb, _) in self.terms:
            for j, e in enumerate(zb):
                out[j] = max(out[j], e)
        return tuple(out)

    def has_s(self) -> bool:
        return any(sp for (_, _, sp) in self.terms)

    # ----- evaluation ---------------------------------------------------

    def evaluate(self, z: Sequence[complex], t: float) -> complex:
        """Numeric value at the point z with weight parameter t > 0."""
        if len(z) != self.n:
            raise ValueError(f"point dimension mismatch: {len(z)} vs {self.n}")
        if not t > 0:
            raise ValueError("t must be positive")
        pt = [complex(w) for w in z]
        s = math.sqrt(t)
        total = 0j
        for (ze, zb, sp), c in self.terms.items():
            v = complex(c) * s**sp
            for w, e in zip(pt, ze):
                v *= w**e
            for w, e in zip(pt, zb):
                v *= w.conjugate() ** e
            total += v
        return total

    def substitute_t(self, t_value: Union[int, Fraction]) -> "FormalSymbol":
        """Replace t = s**2 by an exact rational; requires even s powers."""
        tv = Fraction(t_value)
        acc: dict[TermKey, GaussianRational] = {}
        for (ze, zb, sp), c in self.terms.items():
            if sp % 2:
                raise ValueError("cannot substitute t into an odd power of s")
            _accumulate(acc, (ze, zb, 0), c * tv ** (sp // 2))
        return _wrap(self.n, acc)

    def shifted(self, shift: Sequence[Rationalish]) -> "FormalSymbol":
        """The symbol z -> f(z + a) for an exact shift vector a."""
        if len(shift) != self.n:
            raise ValueError(f"shift dimension mismatch: {len(shift)} vs {self.n}")
        a = [coerce_coeff(v) for v in shift]
        ab = [v.conjugate() for v in a]
        acc: dict[TermKey, GaussianRational] = {}
        for (ze, zb, sp), c in self.terms.items():
            partial: dict[tuple[MultiIndex, MultiIndex], GaussianRational] = {((), ()): c}
            for j in range(self.n):
                nxt: dict[tuple[MultiIndex, MultiIndex], GaussianRational] = {}
                for (pz, pb), pc in partial.items():
                    for i in range(ze[j] + 1):
                        wz = pc * math.comb(ze[j], i) * a[j] ** (ze[j] - i)
                        for ib in range(zb[j] + 1):
                            w = wz * math.comb(zb[j], ib) * ab[j] ** (zb[j] - ib)
                            if w.is_zero():
                                continue
                            key2 = (pz + (i,), pb + (ib,))
                            prev = nxt.get(key2)
                            nxt[key2] = w if prev is None else prev + w
                partial = nxt
            for (pz, pb), pc in partial.items():
                _accumulate(acc, (pz, pb, sp), pc)
        return _wrap(self.n, acc)

    def canonical_terms(self) -> list[tuple[TermKey, GaussianRational]]:
        """Terms in the fixed serialization order."""
        return sorted(
            self.terms.items(),
            key=lambda kv: (degree(kv[0][0]) + degree(kv[0][1]), kv[0][0], kv[0][1], kv[0][2]),
        )

    def __repr__(self) -> str:
        return f"FormalSymbol({self.n}, {format_symbol(self)!r})"


def _accumulate(acc: dict[TermKey, GaussianRational], key: TermKey, c: GaussianRational) -> None:
    prev = acc.get(key)
    if prev is None:
        if not c.is_zero():
            acc[key] = c
        return
    s = prev + c
    if s.is_zero():
        del acc[key]
    else:
        acc[key] = s


def _wrap(n: int, terms: dict[TermKey, GaussianRational]) -> FormalSymbol:
    # internal fast path: terms are already validated/clean
    out = FormalSymbol.__new__(FormalSymbol)
    out.n = n
    out.terms = {k: c for k, c in terms.items() if not c.is_zero()}
    return out


# ----- calculus ---------------------------------------------------------


def heat_transform_formal(f: FormalSymbol, t_value: Union[int, Fraction, None] = None) -> FormalSymbol:
    """Heat transform sum_gamma t^|gamma|/gamma! d^gamma dbar^gamma f, exact.

    With t_value=None the weight enters as s**2 per derivative order;
    passing an exact rational substitutes that value instead.  Existing s
    powers pass through linearly.
    """
    tv = None if t_value is None else Fraction(t_value)
    acc: dict[TermKey, GaussianRational] = {}
    for (ze, zb, sp), c in f.terms.items():
        cap = comp_min(ze, zb)
        for gamma in iter_box(cap):
            w = Fraction(falling_factorial(ze, gamma) * falling_factorial(zb, gamma), factorial(gamma))
            coeff = c * w
            tz = tuple(a - g for a, g in zip(ze, gamma))
            tb = tuple(b - g for b, g in zip(zb, gamma))
            if tv is None:
                _accumulate(acc, (tz, tb, sp + 2 * degree(gamma)), coeff)
            else:
                _accumulate(acc, (tz, tb, sp), coeff * tv ** degree(gamma))
    return _wrap(f.n, acc)


def sharp_formal(f: FormalSymbol, g: FormalSymbol) -> FormalSymbol:
    """Sharp product sum_alpha (-t)^|alpha|/alpha! (d^alpha f)(dbar^alpha g).

    Finite for polynomial symbols; the alpha range is capped by the z
    degrees of f and the conj-z degrees of g.
    """
    f._check_dim(g)
    cap = comp_min(f.max_z_exponent(), g.max_zbar_exponent())
    total = FormalSymbol.zero(f.n)
    for alpha in iter_box(cap):
        df = f.differentiate(alpha, HOLOMORPHIC)
        if df.is_zero():
            continue
        dg = g.differentiate(alpha, ANTIHOLOMORPHIC)
        if dg.is_zero():
            continue
        d = degree(alpha)
        coeff = Fraction((-1) ** d, factorial(alpha))
        total = total + (df * dg).scaled(coeff, extra_spow=2 * d)
    return total


def partial_product_expansion(f: FormalSymbol, g: FormalSymbol, order: int) -> FormalSymbol:
    """The partial sum of sharp_formal over |alpha| <= order."""
    if order < 0:
        raise ValueError("order must be >= 0")
    f._check_dim(g)
    total = FormalSymbol.zero(f.n)
    for alpha in enumerate_upto(f.n, order):
        df = f.differentiate(alpha, HOLOMORPHIC)
        if df.is_zero():
            continue
        dg = g.differentiate(alpha, ANTIHOLOMORPHIC)
        if dg.is_zero():
            continue
        d = degree(alpha)
        coeff = Fraction((-1) ** d, factorial(alpha))
        total = total + (df * dg).scaled(coeff, extra_spow=2 * d)
    return total


def star_berezin(f: FormalSymbol, g: FormalSymbol, order: Optional[int] = None) -> FormalSymbol:
    """Berezin star product sum_alpha t^|alpha|/alpha! (dbar^alpha f)(d^alpha g).

    order=None runs the full (finite) sum for polynomial symbols; an int
    caps the sum at |alpha| <= order.
    """
    f._check_dim(g)
    if order is None:
        alphas: Iterable[MultiIndex] = iter_box(comp_min(f.max_zbar_exponent(), g.max_z_exponent()))
    else:
        if order < 0:
            raise ValueError("order must be >= 0")
        alphas = enumerate_upto(f.n, order)
    total = FormalSymbol.zero(f.n)
    for alpha in alphas:
        df = f.differentiate(alpha, ANTIHOLOMORPHIC)
        if df.is_zero():
            continue
        dg = g.differentiate(alpha, HOLOMORPHIC)
        if dg.is_zero():
            continue
        coeff = Fraction(1, factorial(alpha))
        total = total + (df * dg).scaled(coeff, extra_spow=2 * degree(alpha))
    return total


def poisson_bracket(f: FormalSymbol, g: FormalSymbol) -> FormalSymbol:
    """{f, g} = i sum_j (d_j f dbar_j g - dbar_j f d_j g), exact."""
    f._check_dim(g)
    total = FormalSymbol.zero(f.n)
    for j in range(1, f.n + 1):
        total = total + f.d(j, HOLOMORPHIC) * g.d(j, ANTIHOLOMORPHIC)
        total = total - f.d(j, ANTIHOLOMORPHIC) * g.d(j, HOLOMORPHIC)
    return total.scaled(GR_I)


# ----- serialization and random inputs ----------------------------------


def _spow_text(sp: int) -> str:
    if sp % 2 == 0:
        half = sp // 2
        return "t" if half == 1 else f"t^{half}"
    return "s" if sp == 1 else f"s^{sp}"


def format_symbol(f: FormalSymbol) -> str:
    """Canonical text form: terms in a fixed order, exact coefficients.

    Each term renders as "(re + im i) * z1^p * zbar1^q * t^r"; half powers
    of t appear through s (s**2 = t), and ^1 factors drop the exponent.
    """
    if not f.terms:
        return "0"
    parts = []
    for (ze, zb, sp), c in f.canonical_terms():
        factors = [str(c)]
        for j, e in enumerate(ze, start=1):
            if e:
                factors.append(f"z{j}" if e == 1 else f"z{j}^{e}")
        for j, e in enumerate(zb, start=1):
            if e:
                factors.append(f"zbar{j}" if e == 1 else f"zbar{j}^{e}")
        if sp:
            factors.append(_spow_text(sp))
        parts.append(" * ".join(factors))
    return " + ".join(parts)


def random_polynomial(
    rng: random.Random,
    n: int,
    max_degree: int,
    max_terms: int = 4,
    allow_imag: bool = True,
) -> FormalSymbol:
    """Seeded random polynomial symbol with small Gaussian-rational coefficients."""
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    terms: dict[TermKey, GaussianRational] = {}
    for _ in range(rng.randint(1, max_terms)):
        while True:
            ze = tuple(rng.randint(0, max_degree) for _ in range(n))
            zb = tuple(rng.randint(0, max_degree) for _ in range(n))
            if degree(ze) + degree(zb) <= max_degree:
                break
        num = rng.randint(-4, 4) or 1
        re = Fraction(num, rng.randint(1, 4))
        im = Fraction(0)
        if allow_imag and rng.random() < 0.5:
            im = Fraction(rng.randint(-4, 4), rng.randint(1, 4))
        _accumulate(terms, (ze, zb, 0), GaussianRational(re, im))
    sym = _wrap(n, terms)
    if sym.is_zero():
        return FormalSymbol.one(n)
    return sym


# ----- combinatorial identities and Gaussian pair moments ---------------


def comb_sum(p: int, q: int, l: int) -> Fraction:
    """sum_{m=0}^{p} (-1)^m (q - m + l)! / (m! (p-m)! (q-m)!), term by term.

    Requires p <= q so every factorial argument is nonnegative.
    """
    _check_pql(p, q, l)
    total = Fraction(0)
    for m in range(p + 1):
        total += Fraction(
            (-1) ** m * math.factorial(q - m + l),
            math.factorial(m) * math.factorial(p - m) * math.factorial(q - m),
        )
    return total


def comb_closed(p: int, q: int, l: int) -> Fraction:
    """Closed form of comb_sum: 0 for l < p, else l!(l+q-p)!/(q!p!(l-p)!)."""
    _check_pql(p, q, l)
    if l < p:
        return Fraction(0)
    return Fraction(
        math.factorial(l) * math.factorial(l + q - p),
        math.factorial(q) * math.factorial(p) * math.factorial(l - p),
    )


def _check_pql(p: int, q: int, l: int) -> None:
    for name, v in (("p", p), ("q", q), ("l", l)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise ValueError(f"{name} must be a nonnegative int, got {v!r}")
    if p > q:
        raise ValueError(f"need p <= q, got p={p}, q={q}")


def moment_double_closed(
    alpha: MultiIndex, beta: MultiIndex, gamma: MultiIndex, epsilon: MultiIndex
) -> GaussianRational:
    """Coefficient of the two-variable Gaussian pairing of monomials, closed form.

    For u^alpha conj(u)^beta paired with w^gamma conj(w)^epsilon under the
    coupled kernel, the value is (-1)^{|alpha|-|beta|} alpha! epsilon! /
    (alpha-beta)! when alpha >= beta, gamma <= epsilon and alpha - beta =
    epsilon - gamma, else zero.  The result is rational (imaginary part 0);
    it is returned as a GaussianRational for uniformity with series code.
    """
    alpha, beta, gamma, epsilon = _check_quadruple(alpha, beta, gamma, epsilon)
    diff_ab = try_subtract(alpha, beta)
    diff_eg = try_subtract(epsilon, gamma)
    if diff_ab is None or diff_eg is None or diff_ab != diff_eg:
        return GR_ZERO
    sign = (-1) ** (degree(alpha) - degree(beta))
    value = Fraction(sign * factorial(alpha) * factorial(epsilon), factorial(diff_ab))
    return GaussianRational(value, Fraction(0))


def moment_double_series(
    alpha: MultiIndex, beta: MultiIndex, gamma: MultiIndex, epsilon: MultiIndex
) -> GaussianRational:
    """Same pairing as moment_double_closed via the triple factorization sum.

    Splits alpha = lambda + mu and epsilon over nu, keeping the terms where
    the Gaussian moments pin mu = beta and nu = gamma, and accumulates
    (-1)^{|lambda|} alpha! beta! gamma! epsilon! / (lambda! mu! nu!) with
    mu! = beta!, nu! = gamma!.  Independent of the closed form.
    """
    alpha, beta, gamma, epsilon = _check_quadruple(alpha, beta, gamma, epsilon)
    total = Fraction(0)
    for mu in iter_box(alpha):
        lam = try_subtract(alpha, mu)
        assert lam is not None
        nu = try_subtract(epsilon, lam)
        if nu is None:
            continue
        if mu != beta or nu != gamma:
            continue
        total += Fraction(
            (-1) ** degree(lam) * factorial(alpha) * factorial(beta) * factorial(gamma) * factorial(epsilon),
            factorial(lam) * factorial(mu) * factorial(nu),
        )
    return GaussianRational(total, Fraction(0))


def _check_quadruple(
    alpha: MultiIndex, beta: MultiIndex, gamma: MultiIndex, epsilon: MultiIndex
) -> tuple[MultiIndex, MultiIndex, MultiIndex, MultiIndex]:
    alpha = validate(alpha)
    beta = validate(beta)
    gamma = validate(gamma)
    epsilon = validate(epsilon)
    dims = {len(alpha), len(beta), len(gamma), len(epsilon)}
    if len(dims) != 1:
        raise ValueError("all four multi-indices must share one dimension")
    return alpha, beta, gamma, epsilon
