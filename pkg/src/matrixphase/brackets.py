"""Brackets on matrix-valued symbols.

Three brackets: the matrix Poisson bracket, the symmetrized anticommutator
("extended") bracket, and the Moyal bracket built from a covariant star
product.  Index pairing is covariant throughout: x^nu with p_nu, nu = 0..3.
Also houses the Lie-axiom claim suite with its finite-difference oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .polyfield import (
    Field,
    PhasePoint,
    P_VARS,
    X_VARS,
    random_field,
    zero_field,
)
from .report import ClaimReport

__all__ = [
    "BracketKind",
    "StarResult",
    "poisson_bracket",
    "extended_bracket",
    "star_product",
    "moyal_bracket",
    "apply_bracket",
    "leading_expansion_check",
    "axiom_suite",
    "fd_bracket",
]


@dataclass(frozen=True)
class BracketKind:
    tag: str
    hbar: float | None = None

    def __post_init__(self):
        if self.tag not in ("poisson", "extended", "moyal"):
            raise ValueError(f"unknown bracket kind {self.tag!r}")
        if self.tag == "moyal":
            if self.hbar is None or not self.hbar > 0:
                raise ValueError("moyal bracket needs hbar > 0")

    @classmethod
    def poisson(cls):
        return cls("poisson")

    @classmethod
    def extended(cls):
        return cls("extended")

    @classmethod
    def moyal(cls, hbar: float):
        return cls("moyal", hbar)

    def label(self) -> str:
        return self.tag if self.hbar is None else f"{self.tag}(hbar={self.hbar})"


def poisson_bracket(k: Field, w: Field) -> Field:
    """sum_nu dK/dp_nu dW/dx^nu - dW/dp_nu dK/dx^nu, matrix-ordered."""
    out = zero_field()
    for nu in range(4):
        out = out + k.diff(P_VARS[nu]) * w.diff(X_VARS[nu])
        out = out - w.diff(P_VARS[nu]) * k.diff(X_VARS[nu])
    return out


def extended_bracket(k: Field, w: Field) -> Field:
    """Symmetrized variant: both operand orders in each derivative pair."""
    out = zero_field()
    for nu in range(4):
        kp, wx = k.diff(P_VARS[nu]), w.diff(X_VARS[nu])
        kx, wp = k.diff(X_VARS[nu]), w.diff(P_VARS[nu])
        out = out + (kp * wx + wx * kp) - (kx * wp + wp * kx)
    return out


@dataclass(frozen=True)
class StarResult:
    field: Field
    exact: bool
    order: int


def _p_degree(f: Field) -> int:
    return max(
        (sum(e[v] for v in P_VARS) for poly in f.terms.values() for e in poly),
        default=0,
    )


class _DerivCache:
    """Iterated partial derivatives of one field, keyed by 8-var multi-index."""

    def __init__(self, f: Field):
        self._store = {(0,) * 8: f}

    def get(self, mi: tuple) -> Field:
        if mi in self._store:
            return self._store[mi]
        for v in range(8):
            if mi[v] > 0:
                parent = mi[:v] + (mi[v] - 1,) + mi[v + 1 :]
                out = self.get(parent).diff(v)
                break
        self._store[mi] = out
        return out


def _kernel_power(fc: _DerivCache, gc: _DerivCache, n: int) -> Field:
    """Pi^n: the antisymmetric bidifferential kernel applied n times.

    Pi^n(F,G) = sum over multi-indices a, b (4 slots each, |a|+|b| = n) of
    n!/(a! b!) (-1)^{|b|} [d_x^a d_p^b F] [d_p^a d_x^b G]; F-derivatives
    multiply from the left.
    """
    out = zero_field()
    for bars in itertools.combinations(range(n + 7), 7):
        edges = (-1,) + bars + (n + 7,)
        mi = tuple(edges[i + 1] - edges[i] - 1 for i in range(8))
        a, b = mi[:4], mi[4:]
        coeff = math.factorial(n)
        for m in mi:
            coeff //= math.factorial(m)
        sign = -1 if sum(b) % 2 else 1
        df = fc.get(a + b)  # x-derivatives a, p-derivatives b
        if df.is_zero():
            continue
        dg = gc.get(b + a)  # x-derivatives b, p-derivatives a
        if dg.is_zero():
            continue
        out = out + (sign * coeff) * (df * dg)
    return out


def star_product(f: Field, g: Field, hbar: float, max_order: int = 16) -> StarResult:
    """F * G = sum_n (1/n!) (i hbar / 2)^n Pi^n(F, G).

    The series terminates at n = pdeg(F) + pdeg(G) for polynomial momentum
    dependence; beyond max_order the result is flagged approximate.
    """
    if max_order < 0:
        raise ValueError("max_order must be >= 0")
    n_term = _p_degree(f) + _p_degree(g)
    top = min(max_order, n_term)
    fc, gc = _DerivCache(f), _DerivCache(g)
    out = zero_field()
    for n in range(top + 1):
        pi_n = _kernel_power(fc, gc, n)
        if pi_n.is_zero():
            continue
        out = out + ((0.5j * hbar) ** n / math.factorial(n)) * pi_n
    return StarResult(field=out, exact=n_term <= max_order, order=top)


def moyal_bracket(k: Field, w: Field, hbar: float, max_order: int = 16) -> StarResult:
    """(K * W - W * K) / (i hbar)."""
    if not hbar > 0:
        raise ValueError("hbar must be positive")
    kw = star_product(k, w, hbar, max_order)
    wk = star_product(w, k, hbar, max_order)
    return StarResult(
        field=(1.0 / (1j * hbar)) * (kw.field - wk.field),
        exact=kw.exact and wk.exact,
        order=max(kw.order, wk.order),
    )


def apply_bracket(kind: BracketKind, a: Field, b: Field) -> Field:
    if kind.tag == "poisson":
        return poisson_bracket(a, b)
    if kind.tag == "extended":
        return extended_bracket(a, b)
    return moyal_bracket(a, b, kind.hbar).field


def leading_expansion_check(k: Field, w: Field, hbar: float) -> ClaimReport:
    """Compare the Moyal series at orders 1/hbar and hbar^0 with the
    commutator-plus-symmetrized-derivative expansion."""
    fc, gc = _DerivCache(k), _DerivCache(w)
    rc, sc = _DerivCache(w), _DerivCache(k)
    # order hbar^{-1}: Pi^0 difference / i
    series_m1 = _kernel_power(fc, gc, 0) - _kernel_power(rc, sc, 0)
    displayed_m1 = k * w - w * k
    res1 = (series_m1 - displayed_m1).norm()
    # order hbar^0: (i/2)(Pi^1(K,W) - Pi^1(W,K)) / i
    series_0 = 0.5 * (_kernel_power(fc, gc, 1) - _kernel_power(rc, sc, 1))
    displayed_0 = zero_field()
    for nu in range(4):
        kx, wp = k.diff(X_VARS[nu]), w.diff(P_VARS[nu])
        kp, wx = k.diff(P_VARS[nu]), w.diff(X_VARS[nu])
        displayed_0 = displayed_0 + 0.5 * ((kx * wp + wp * kx) - (kp * wx + wx * kp))
    res0 = (series_0 - displayed_0).norm()
    return ClaimReport.checked(
        claim="moyal_leading_expansion",
        kind=f"moyal(hbar={hbar})",
        residual=max(res1, res0),
        tolerance=1e-12,
        inputs={"hbar": hbar},
    )


# -- finite-difference oracle ---------------------------------------------


def _fd_partial(f: Field, var: int, pt: PhasePoint, h: float) -> np.ndarray:
    coords = pt.coords()
    up, dn = coords.copy(), coords.copy()
    up[var] += h
    dn[var] -= h
    pu = PhasePoint(x=tuple(up[:4]), p=tuple(up[4:]))
    pd = PhasePoint(x=tuple(dn[:4]), p=tuple(dn[4:]))
    return (f.evaluate(pu) - f.evaluate(pd)) / (2 * h)


def fd_bracket(kind: BracketKind, k: Field, w: Field, pt: PhasePoint, h: float = 1e-5) -> np.ndarray:
    """Central-difference evaluation of the defining bracket formula.

    Independent of the exact symbolic path; only valid for the poisson and
    extended kinds, whose definitions are first order in derivatives.
    """
    if kind.tag == "moyal":
        raise ValueError("the FD oracle covers first-order brackets only")
    out = np.zeros((4, 4), dtype=complex)
    for nu in range(4):
        kp = _fd_partial(k, P_VARS[nu], pt, h)
        wx = _fd_partial(w, X_VARS[nu], pt, h)
        kx = _fd_partial(k, X_VARS[nu], pt, h)
        wp = _fd_partial(w, P_VARS[nu], pt, h)
        if kind.tag == "poisson":
            out += kp @ wx - wp @ kx
        else:
            out += (kp @ wx + wx @ kp) - (kx @ wp + wp @ kx)
    return out


def _rel(residual: float, *fields: Field) -> float:
    scale = 1.0
    for f in fields:
        scale = max(scale, f.norm())
    return residual / scale


def axiom_suite(
    kind: BracketKind,
    seeds=(0, 1, 2),
    degree: int = 2,
    hbar: float | None = None,
) -> list[ClaimReport]:
    """Lie-algebra axiom reports on seeded random fields.

    Antisymmetry and bilinearity are asserted; Jacobi, the two Leibniz
    rules, and the trace-derivation property are computed and recorded.
    """
    label = kind.label()
    reports = []
    for seed in seeds:
        rng = np.random.default_rng(seed + 7919)
        a = random_field(seed * 3 + 1, degree=degree)
        b = random_field(seed * 3 + 2, degree=degree)
        c = random_field(seed * 3 + 3, degree=degree)
        br = lambda u, v: apply_bracket(kind, u, v)

        anti = (br(a, b) + br(b, a)).norm()
        reports.append(
            ClaimReport.checked(
                "antisymmetry", label, _rel(anti, a, b), 1e-12, {"seed": seed}
            )
        )
        ca, cb = rng.uniform(-2, 2), rng.uniform(-2, 2)
        bil = (br(ca * a + cb * b, c) - ca * br(a, c) - cb * br(b, c)).norm()
        reports.append(
            ClaimReport.checked(
                "bilinearity", label, _rel(bil, a, b, c), 1e-12, {"seed": seed}
            )
        )
        jac = (br(br(a, b), c) + br(br(c, a), b) + br(br(b, c), a)).norm()
        reports.append(
            ClaimReport.checked(
                "jacobi", label, _rel(jac, a, b, c), 1e-10,
                {"seed": seed}, assertive=False,
            )
        )
        lei_l = (br(a * b, c) - br(a, c) * b - a * br(b, c)).norm()
        reports.append(
            ClaimReport.checked(
                "leibniz_left", label, _rel(lei_l, a, b, c), 1e-10,
                {"seed": seed}, assertive=False,
            )
        )
        lei_r = (br(a, b * c) - br(a, b) * c - b * br(a, c)).norm()
        reports.append(
            ClaimReport.checked(
                "leibniz_right", label, _rel(lei_r, a, b, c), 1e-10,
                {"seed": seed}, assertive=False,
            )
        )
        tr_res = (
            br(a, b * c).trace() - (br(a, b) * c).trace() - (b * br(a, c)).trace()
        ).norm()
        reports.append(
            ClaimReport.checked(
                "trace_derivation", label, _rel(tr_res, a, b, c), 1e-10,
                {"seed": seed}, assertive=False,
            )
        )
        # cross-check against an independent evaluation at 3 random points
        worst = 0.0
        exact_ab = br(a, b)
        for _ in range(3):
            pt = PhasePoint(x=tuple(rng.uniform(-1, 1, 4)), p=tuple(rng.uniform(-1, 1, 4)))
            got = exact_ab.evaluate(pt)
            if kind.tag == "moyal":
                # independent check: evaluated antisymmetry at the point
                other = br(b, a).evaluate(pt)
                worst = max(worst, float(np.abs(got + other).max()))
            else:
                oracle = fd_bracket(kind, a, b, pt)
                scale = max(1.0, float(np.abs(oracle).max()))
                worst = max(worst, float(np.abs(got - oracle).max()) / scale)
        reports.append(
            ClaimReport.checked(
                "pointwise_oracle", label, worst, 1e-6, {"seed": seed}
            )
        )
    return reports
