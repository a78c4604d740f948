"""Toeplitz operators on the Fock space over C^n.

Two operator representations live here.  FormalOperator keeps the exact
action on the monomial basis {z^alpha} with Gaussian-rational coefficients
times powers of s (s**2 = t), so operator identities for polynomial symbols
are decidable with no truncation error.  OperatorMatrix is the numeric
compression to the orthonormal basis e_alpha = z^alpha / sqrt(alpha! t^|alpha|)
with |alpha| <= cutoff, which supports norms and spectra.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .multiindex import (
    MultiIndex,
    add as mi_add,
    count_upto,
    degree,
    enumerate_upto,
    factorial,
    falling_factorial,
    try_subtract,
    validate,
)
from .numeric import (
    IllConditionedQuadrature,
    QuadratureRule,
    QuadratureSampleError,
    SampledSymbol,
    tensor_nodes,
)
from .symbolic import FormalSymbol, GaussianRational, coerce_coeff

# action of an operator on one monomial: map (target exponent, s power) -> coefficient
ActionTerms = dict[tuple[MultiIndex, int], GaussianRational]


@dataclass(frozen=True)
class TruncatedBasis:
    """Orthonormal monomial basis of the Fock space truncated at a degree cutoff."""

    n: int
    cutoff: int
    t: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("dimension must be >= 1")
        if self.cutoff < 0:
            raise ValueError("cutoff must be >= 0")
        if not self.t > 0:
            raise ValueError("t must be positive")

    @property
    def indices(self) -> list[MultiIndex]:
        return enumerate_upto(self.n, self.cutoff)

    @property
    def size(self) -> int:
        return count_upto(self.n, self.cutoff)

    def position(self) -> dict[MultiIndex, int]:
        return {alpha: i for i, alpha in enumerate(self.indices)}


@dataclass
class OperatorMatrix:
    """Dense matrix of an operator in a TruncatedBasis; entry (beta, alpha) row-major."""

    basis: TruncatedBasis
    entries: np.ndarray

    def __post_init__(self) -> None:
        m = self.basis.size
        if self.entries.shape != (m, m):
            raise ValueError(f"matrix shape {self.entries.shape} does not match basis size {m}")
        self.entries = np.asarray(self.entries, dtype=np.complex128)

    def _check_basis(self, other: "OperatorMatrix") -> None:
        if self.basis != other.basis:
            raise ValueError("basis mismatch between operator matrices")


class FormalOperator:
    """Exact linear operator on the monomial basis, defined by its action on z^alpha.

    Backed by a generator function alpha -> ActionTerms with memoization, so
    Toeplitz operators with polynomial symbols (whose action is finite on
    every monomial) are represented without truncation.  A degree_cap of
    None means the action is defined for every alpha; composed operators
    carry the cap of their restriction.
    """

    __slots__ = ("n", "_apply", "_cache", "degree_cap")

    def __init__(
        self,
        n: int,
        apply_fn: Callable[[MultiIndex], ActionTerms],
        degree_cap: Optional[int] = None,
    ):
        if n < 1:
            raise ValueError("dimension must be >= 1")
        self.n = n
        self._apply = apply_fn
        self._cache: dict[MultiIndex, ActionTerms] = {}
        self.degree_cap = degree_cap

    def apply(self, alpha: Sequence[int]) -> ActionTerms:
        alpha = validate(alpha)
        if len(alpha) != self.n:
            raise ValueError(f"dimension mismatch: {len(alpha)} vs {self.n}")
        if self.degree_cap is not None and degree(alpha) > self.degree_cap:
            raise ValueError(f"operator action only defined for |alpha| <= {self.degree_cap}")
        hit = self._cache.get(alpha)
        if hit is None:
            hit = self._apply(alpha)
            self._cache[alpha] = hit
        return hit

    def _merge_cap(self, other: "FormalOperator") -> Optional[int]:
        caps = [c for c in (self.degree_cap, other.degree_cap) if c is not None]
        return min(caps) if caps else None

    def __add__(self, other: "FormalOperator") -> "FormalOperator":
        if self.n != other.n:
            raise ValueError("dimension mismatch")

        def apply_fn(alpha: MultiIndex) -> ActionTerms:
            out = dict(self.apply(alpha))
            for key, c in other.apply(alpha).items():
                _acc(out, key, c)
            return out

        return FormalOperator(self.n, apply_fn, self._merge_cap(other))

    def __sub__(self, other: "FormalOperator") -> "FormalOperator":
        return self + other.scaled(-1)

    def scaled(self, coeff, extra_spow: int = 0) -> "FormalOperator":
        c0 = coerce_coeff(coeff)
        if extra_spow < 0:
            raise ValueError("s power must be nonnegative")

        def apply_fn(alpha: MultiIndex) -> ActionTerms:
            out: ActionTerms = {}
            for (beta, sp), c in self.apply(alpha).items():
                _acc(out, (beta, sp + extra_spow), c * c0)
            return out

        return FormalOperator(self.n, apply_fn, self.degree_cap)

    def is_zero_upto(self, max_degree: int) -> bool:
        return all(not self.apply(alpha) for alpha in enumerate_upto(self.n, max_degree))


def _acc(acc: ActionTerms, key: tuple[MultiIndex, int], c: GaussianRational) -> None:
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


def identity_operator(n: int) -> FormalOperator:
    return FormalOperator(n, lambda alpha: {(alpha, 0): coerce_coeff(1)})


def project_monomial(p: Sequence[int], q: Sequence[int]) -> FormalSymbol:
    """Orthogonal projection of z^p conj(z)^q onto the holomorphic side.

    Equals (p!/(p-q)!) t^|q| z^(p-q) when p >= q componentwise, else 0;
    t is rendered as s**2.
    """
    p = validate(p)
    q = validate(q)
    if len(p) != len(q):
        raise ValueError("dimension mismatch")
    rem = try_subtract(p, q)
    n = len(p)
    if rem is None:
        return FormalSymbol.zero(n)
    coeff = falling_factorial(p, q)
    return FormalSymbol.monomial(n, rem, (0,) * n, spow=2 * degree(q), coeff=coeff)


def toeplitz_formal(f: FormalSymbol) -> FormalOperator:
    """Exact Toeplitz operator with polynomial symbol, acting on monomials.

    z^alpha maps to the projection of f * z^alpha, computed termwise; the
    action on every monomial is a finite sum, so no truncation occurs.
    """
    terms = list(f.terms.items())
    n = f.n

    def apply_fn(alpha: MultiIndex) -> ActionTerms:
        out: ActionTerms = {}
        for (ze, zb, sp), c in terms:
            p = mi_add(alpha, ze)
            rem = try_subtract(p, zb)
            if rem is None:
                continue
            coeff = c * falling_factorial(p, zb)
            _acc(out, (rem, sp + 2 * degree(zb)), coeff)
        return out

    return FormalOperator(n, apply_fn)


def compose_formal(a: FormalOperator, b: FormalOperator, cap: int) -> FormalOperator:
    """Exact composition a . b tabulated on inputs |alpha| <= cap.

    b's outputs are fed through a exactly, so every retained action is the
    true composite action (no truncation error on inputs within the cap).
    """
    if a.n != b.n:
        raise ValueError("dimension mismatch")
    if cap < 0:
        raise ValueError("cap must be >= 0")
    if b.degree_cap is not None and b.degree_cap < cap:
        raise ValueError("inner operator cap is smaller than requested cap")
    table: dict[MultiIndex, ActionTerms] = {}
    for alpha in enumerate_upto(a.n, cap):
        out: ActionTerms = {}
        for (beta, sp1), c1 in b.apply(alpha).items():
            for (target, sp2), c2 in a.apply(beta).items():
                _acc(out, (target, sp1 + sp2), c1 * c2)
        table[alpha] = out

    return FormalOperator(a.n, lambda alpha: table[alpha], degree_cap=cap)


def equal_on(a: FormalOperator, b: FormalOperator, max_degree: int) -> bool:
    """Exact equality of actions on every monomial with |alpha| <= max_degree."""
    if a.n != b.n:
        raise ValueError("dimension mismatch")
    return all(a.apply(alpha) == b.apply(alpha) for alpha in enumerate_upto(a.n, max_degree))


def operator_matrix(op: FormalOperator, basis: TruncatedBasis) -> OperatorMatrix:
    """Orthonormal-basis matrix of an exact operator action.

    Entry (beta, alpha) = coeff * t^(sp/2) * sqrt(beta!/alpha!) * t^((|beta|-|alpha|)/2).
    Each entry comes from exact integers and one square root, so there is no
    cancellation beyond the exact arithmetic already done upstream.
    """
    if op.n != basis.n:
        raise ValueError("dimension mismatch")
    if op.degree_cap is not None and op.degree_cap < basis.cutoff:
        raise ValueError("operator cap is smaller than the basis cutoff")
    idx = basis.indices
    pos = basis.position()
    t = basis.t
    m = basis.size
    out = np.zeros((m, m), dtype=np.complex128)
    fact: dict[MultiIndex, int] = {alpha: factorial(alpha) for alpha in idx}
    for col, alpha in enumerate(idx):
        da = degree(alpha)
        for (beta, sp), c in op.apply(alpha).items():
            row = pos.get(beta)
            if row is None:
                continue
            ratio = Fraction(fact[beta], fact[alpha])
            scale = math.sqrt(ratio) * t ** (Fraction(sp + degree(beta) - da, 2))
            out[row, col] += complex(c) * scale
    return OperatorMatrix(basis, out)


def toeplitz_matrix_formal(f: FormalSymbol, basis: TruncatedBasis) -> OperatorMatrix:
    """Truncated Toeplitz matrix for an exact polynomial symbol.

    For a term c * z^gamma conj(z)^delta s^sp the entry at (beta, alpha) with
    beta = alpha + gamma - delta is
    c * sqrt(ff(alpha+gamma, gamma) * ff(alpha+gamma, delta)) * t^((|gamma|+|delta|+sp)/2),
    where ff is the falling factorial; entries are exact up to one sqrt.
    """
    if f.n != basis.n:
        raise ValueError("dimension mismatch")
    idx = basis.indices
    pos = basis.position()
    t = basis.t
    m = basis.size
    out = np.zeros((m, m), dtype=np.complex128)
    for col, alpha in enumerate(idx):
        for (gamma, delta, sp), c in f.terms.items():
            p = mi_add(alpha, gamma)
            beta = try_subtract(p, delta)
            if beta is None:
                continue
            row = pos.get(beta)
            if row is None:
                continue
            big = falling_factorial(p, gamma) * falling_factorial(p, delta)
            scale = math.sqrt(big) * t ** (Fraction(degree(gamma) + degree(delta) + sp, 2))
            out[row, col] += complex(c) * scale
    return OperatorMatrix(basis, out)


def toeplitz_matrix_sampled(
    f: SampledSymbol, basis: TruncatedBasis, rule: QuadratureRule
) -> OperatorMatrix:
    """Truncated Toeplitz matrix for a sampled symbol by tensor Gauss-Hermite.

    Entry (beta, alpha) = pi^-n * Int f(sqrt(t) u) u^alpha conj(u)^beta
    / sqrt(alpha! beta!) e^(-|u|^2) dv(u).  The rule must resolve monomials
    up to twice the basis cutoff per axis or the result is unreliable; when
    f carries a sup bound, entries larger than 10x that bound raise
    IllConditionedQuadrature (a Toeplitz matrix entry never exceeds sup|f|).
    """
    if f.n != basis.n:
        raise ValueError("dimension mismatch")
    u, logw = tensor_nodes(rule, f.n)
    k = u.shape[1]
    idx = basis.indices
    pos = basis.position()
    m = basis.size
    # normalized monomial table V[j, i] = u_j^alpha_i / sqrt(alpha_i!)
    v = np.empty((k, m), dtype=np.complex128)
    v[:, 0] = 1.0
    for i, alpha in enumerate(idx):
        if i == 0:
            continue
        axis = next(j for j, e in enumerate(alpha) if e > 0)
        parent = tuple(e - 1 if j == axis else e for j, e in enumerate(alpha))
        v[:, i] = v[:, pos[parent]] * u[axis] / math.sqrt(alpha[axis])
    samples = f.values(u * math.sqrt(basis.t))
    finite = np.isfinite(samples)
    if not np.all(finite):
        bad = int(np.argmax(~finite))
        raise QuadratureSampleError(
            f"symbol sample is not finite at quadrature node {u[:, bad]!r}", node=u[:, bad]
        )
    weighted = samples * np.exp(logw) / math.pi ** f.n
    entries = np.einsum("k,ki,kj->ij", weighted, np.conj(v), v, optimize=True)
    if f.sup_bound is not None:
        top = float(np.max(np.abs(entries)))
        if top > 10.0 * f.sup_bound:
            raise IllConditionedQuadrature(
                f"entry magnitude {top:.3e} exceeds 10x the symbol sup bound {f.sup_bound:.3e}; "
                "the quadrature rule cannot resolve this basis cutoff"
            )
    return OperatorMatrix(basis, entries)


# ----- dense matrix algebra ----------------------------------------------


def matrix_compose(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    a._check_basis(b)
    return OperatorMatrix(a.basis, a.entries @ b.entries)


def matrix_add(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    a._check_basis(b)
    return OperatorMatrix(a.basis, a.entries + b.entries)


def matrix_subtract(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    a._check_basis(b)
    return OperatorMatrix(a.basis, a.entries - b.entries)


def matrix_scale(a: OperatorMatrix, factor: complex) -> OperatorMatrix:
    return OperatorMatrix(a.basis, a.entries * factor)


def commutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    a._check_basis(b)
    return OperatorMatrix(a.basis, a.entries @ b.entries - b.entries @ a.entries)


def identity_matrix(basis: TruncatedBasis) -> OperatorMatrix:
    return OperatorMatrix(basis, np.eye(basis.size, dtype=np.complex128))


def adjoint(a: OperatorMatrix) -> OperatorMatrix:
    return OperatorMatrix(a.basis, a.entries.conj().T)


def spectral_norm(a: OperatorMatrix) -> float:
    """Largest singular value of the matrix."""
    if not np.all(np.isfinite(a.entries)):
        raise ValueError("matrix has non-finite entries")
    if a.basis.size == 0:
        return 0.0
    return float(np.linalg.svd(a.entries, compute_uv=False)[0])


def interior_block(a: OperatorMatrix, margin: int) -> OperatorMatrix:
    """Restrict rows and columns to |alpha| <= cutoff - margin.

    Because the basis enumeration is graded, the restriction is a prefix
    block of the matrix.
    """
    if margin < 0 or margin > a.basis.cutoff:
        raise ValueError(f"margin must lie in [0, {a.basis.cutoff}]")
    sub = TruncatedBasis(a.basis.n, a.basis.cutoff - margin, a.basis.t)
    m = sub.size
    return OperatorMatrix(sub, a.entries[:m, :m].copy())


# ----- serialization ------------------------------------------------------


def dump_operator_matrix(
    a: OperatorMatrix, path: str, symbol_text: str = "", mode: str = "formal"
) -> None:
    """Write a matrix as a JSON header line plus CSV rows (row, col, re, im).

    Numbers use 17 significant digits, which round-trips complex128 exactly
    through decimal.
    """
    header = {
        "n": a.basis.n,
        "N": a.basis.cutoff,
        "t": a.basis.t,
        "symbol": symbol_text,
        "mode": mode,
    }
    lines = [json.dumps(header, sort_keys=True)]
    lines.append("row,col,re,im")
    m = a.basis.size
    for i in range(m):
        for j in range(m):
            e = a.entries[i, j]
            lines.append(f"{i},{j},{e.real:.17g},{e.imag:.17g}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_operator_matrix(path: str) -> tuple[OperatorMatrix, dict]:
    """Read a matrix written by dump_operator_matrix; returns (matrix, header)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.strip() for line in fh if line.strip()]
    header = json.loads(lines[0])
    basis = TruncatedBasis(int(header["n"]), int(header["N"]), float(header["t"]))
    out = np.zeros((basis.size, basis.size), dtype=np.complex128)
    for line in lines[2:]:
        i_s, j_s, re_s, im_s = line.split(",")
        out[int(i_s), int(j_s)] = complex(float(re_s), float(im_s))
    return OperatorMatrix(basis, out), header
