"""Exact calculus on matrix-valued phase-spacetime symbols.

A Field is a finite sum of terms, each a polynomial in the eight variables
(x^0..x^3, p_0..p_3) with 4x4 complex matrix coefficients, multiplied by a
plane-wave factor exp(i k_nu x^nu).  Fields are closed under addition,
non-commutative multiplication, and differentiation, and evaluate exactly
at phase points.  x^0 is ct; the p slots hold covariant components p_mu.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import TermBudgetError

__all__ = [
    "NVARS",
    "X_VARS",
    "P_VARS",
    "VAR_NAMES",
    "PhasePoint",
    "Field",
    "zero_field",
    "constant_field",
    "coordinate_field",
    "plane_wave_field",
    "random_field",
]

NVARS = 8
X_VARS = (0, 1, 2, 3)
P_VARS = (4, 5, 6, 7)
VAR_NAMES = ("x0", "x1", "x2", "x3", "p0", "p1", "p2", "p3")

TERM_CAP = 100_000
DEGREE_CAP = 16

_ZERO_EXP = (0,) * NVARS


@dataclass(frozen=True)
class PhasePoint:
    """A point (x^0..x^3, p_0..p_3) of phase-spacetime."""

    x: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    p: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)

    def coords(self) -> np.ndarray:
        return np.array(list(self.x) + list(self.p), dtype=float)


def _is_zero(c: np.ndarray) -> bool:
    return not np.any(c)


class Field:
    """Immutable matrix-valued symbol on phase-spacetime.

    terms maps a wavevector (4 covariant reals) to a polynomial, stored as
    a dict from 8-tuple exponents to a 4x4 complex coefficient matrix.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        clean: dict = {}
        nmono = 0
        for k, poly in (terms or {}).items():
            kept = {}
            for exps, coeff in poly.items():
                coeff = np.asarray(coeff, dtype=complex)
                if coeff.shape != (4, 4):
                    raise ValueError("coefficients must be 4x4 matrices")
                if _is_zero(coeff):
                    continue
                if sum(exps) > DEGREE_CAP:
                    raise TermBudgetError(
                        f"monomial degree {sum(exps)} exceeds cap {DEGREE_CAP}"
                    )
                c = coeff.copy()
                c.setflags(write=False)
                kept[tuple(exps)] = c
            nmono += len(kept)
            if kept:
                clean[tuple(float(v) for v in k)] = kept
        if nmono > TERM_CAP:
            raise TermBudgetError(f"{nmono} monomials exceeds cap {TERM_CAP}")
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("Field is immutable")

    # -- basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def norm(self) -> float:
        """Maximum absolute value over all coefficient entries."""
        m = 0.0
        for poly in self.terms.values():
            for coeff in poly.values():
                m = max(m, float(np.abs(coeff).max()))
        return m

    @property
    def max_degree(self) -> int:
        return max(
            (sum(e) for poly in self.terms.values() for e in poly),
            default=0,
        )

    @property
    def n_monomials(self) -> int:
        return sum(len(poly) for poly in self.terms.values())

    def __repr__(self) -> str:
        return f"Field({self.n_monomials} monomials, {len(self.terms)} waves)"

    # -- algebra ----------------------------------------------------------

    def __add__(self, other: "Field") -> "Field":
        if not isinstance(other, Field):
            return NotImplemented
        terms = {k: dict(p) for k, p in self.terms.items()}
        for k, poly in other.terms.items():
            dst = terms.setdefault(k, {})
            for exps, coeff in poly.items():
                if exps in dst:
                    dst[exps] = dst[exps] + coeff
                else:
                    dst[exps] = coeff
        return Field(terms)

    def __sub__(self, other: "Field") -> "Field":
        return self + (-other)

    def __neg__(self) -> "Field":
        return self.scale(-1.0)

    def scale(self, s: complex) -> "Field":
        return Field(
            {
                k: {e: s * c for e, c in poly.items()}
                for k, poly in self.terms.items()
            }
        )

    def __mul__(self, other):
        if np.isscalar(other):
            return self.scale(other)
        if not isinstance(other, Field):
            return NotImplemented
        terms: dict = {}
        for k1, poly1 in self.terms.items():
            for k2, poly2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                dst = terms.setdefault(k, {})
                for e1, c1 in poly1.items():
                    for e2, c2 in poly2.items():
                        e = tuple(a + b for a, b in zip(e1, e2))
                        prod = c1 @ c2
                        if e in dst:
                            dst[e] = dst[e] + prod
                        else:
                            dst[e] = prod
        return Field(terms)

    def __rmul__(self, other):
        if np.isscalar(other):
            return self.scale(other)
        return NotImplemented

    def matmul_left(self, m: np.ndarray) -> "Field":
        """Left-multiply every coefficient by a constant matrix."""
        return Field(
            {k: {e: m @ c for e, c in poly.items()} for k, poly in self.terms.items()}
        )

    def matmul_right(self, m: np.ndarray) -> "Field":
        """Right-multiply every coefficient by a constant matrix."""
        return Field(
            {k: {e: c @ m for e, c in poly.items()} for k, poly in self.terms.items()}
        )

    # -- calculus ---------------------------------------------------------

    def diff(self, var: int) -> "Field":
        """Exact partial derivative with respect to one of the 8 variables.

        For x-variables the plane-wave factor contributes i*k_nu per term.
        """
        if not 0 <= var < NVARS:
            raise ValueError(f"variable index {var} out of range")
        terms: dict = {}
        for k, poly in self.terms.items():
            dst: dict = {}
            for exps, coeff in poly.items():
                n = exps[var]
                if n > 0:
                    e = exps[:var] + (n - 1,) + exps[var + 1 :]
                    dst[e] = dst.get(e, 0) + n * coeff
            if var in X_VARS and k[var] != 0.0:
                ik = 1j * k[var]
                for exps, coeff in poly.items():
                    dst[exps] = dst.get(exps, 0) + ik * coeff
            if dst:
                terms[k] = dst
        return Field(terms)

    def evaluate(self, pt: PhasePoint) -> np.ndarray:
        """Exact numeric value at a phase point."""
        coords = pt.coords()
        out = np.zeros((4, 4), dtype=complex)
        for k, poly in self.terms.items():
            phase = np.exp(1j * float(np.dot(k, coords[:4])))
            for exps, coeff in poly.items():
                mono = 1.0
                for v, e in enumerate(exps):
                    if e:
                        mono *= coords[v] ** e
                out += (phase * mono) * coeff
        return out

    # -- structure maps ---------------------------------------------------

    def dagger(self) -> "Field":
        """Plain Hermitian conjugate as a function: coefficients daggered,
        wavevectors negated (the phase-space variables are real)."""
        return Field(
            {
                tuple(-v for v in k): {e: c.conj().T for e, c in poly.items()}
                for k, poly in self.terms.items()
            }
        )

    def dirac_adj(self, gamma0: np.ndarray) -> "Field":
        """Dirac adjoint gamma^0 F^dagger gamma^0 as a Field."""
        return Field(
            {
                tuple(-v for v in k): {
                    e: gamma0 @ c.conj().T @ gamma0 for e, c in poly.items()
                }
                for k, poly in self.terms.items()
            }
        )

    def trace(self) -> "Field":
        """Normalized trace tr(F)/4 times the identity (a scalar symbol
        kept in matrix form)."""
        eye = np.eye(4)
        return Field(
            {
                k: {e: np.trace(c) / 4.0 * eye for e, c in poly.items()}
                for k, poly in self.terms.items()
            }
        )

    def substitute_linear(self, mx: np.ndarray, mp: np.ndarray) -> "Field":
        """Compose with the linear change of variables x -> mx @ x', p -> mp @ p'.

        Each old variable is replaced by the corresponding linear form in the
        new variables; wavevectors pick up the transpose of mx.
        """
        mx = np.asarray(mx, dtype=float)
        mp = np.asarray(mp, dtype=float)
        lin = []
        for nu in range(4):
            lin.append(
                Field(
                    {
                        (0.0,) * 4: {
                            _unit_exp(mu): mx[nu, mu] * np.eye(4)
                            for mu in range(4)
                            if mx[nu, mu] != 0.0
                        }
                    }
                )
            )
        for nu in range(4):
            lin.append(
                Field(
                    {
                        (0.0,) * 4: {
                            _unit_exp(4 + mu): mp[nu, mu] * np.eye(4)
                            for mu in range(4)
                            if mp[nu, mu] != 0.0
                        }
                    }
                )
            )
        out = zero_field()
        for k, poly in self.terms.items():
            knew = tuple(float(v) for v in mx.T @ np.array(k))
            for exps, coeff in poly.items():
                term = plane_wave_field(coeff, knew)
                for v, e in enumerate(exps):
                    for _ in range(e):
                        term = term * lin[v]
                out = out + term
        return out


def _unit_exp(var: int) -> tuple:
    return tuple(1 if i == var else 0 for i in range(NVARS))


# -- constructors ---------------------------------------------------------


def zero_field() -> Field:
    return Field({})


def constant_field(m: np.ndarray) -> Field:
    return Field({(0.0,) * 4: {_ZERO_EXP: m}})


def coordinate_field(var: int, coeff: np.ndarray | None = None) -> Field:
    """coeff * v for a single variable v; coeff defaults to the identity."""
    if coeff is None:
        coeff = np.eye(4)
    return Field({(0.0,) * 4: {_unit_exp(var): coeff}})


def plane_wave_field(coeff: np.ndarray, k: tuple) -> Field:
    """coeff * exp(i k_nu x^nu)."""
    return Field({tuple(float(v) for v in k): {_ZERO_EXP: coeff}})


def random_field(seed: int, degree: int = 2, waves: int = 0) -> Field:
    """Deterministic pseudo-random Field with coefficient entries in [-1, 1].

    One zero-wavevector term plus `waves` plane-wave terms, each carrying a
    polynomial of total degree up to `degree`.
    """
    if degree < 0 or waves < 0:
        raise ValueError("degree and waves must be non-negative")
    rng = np.random.default_rng(seed)
    terms: dict = {}
    for w in range(waves + 1):
        if w == 0:
            k = (0.0,) * 4
        else:
            k = tuple(float(v) for v in rng.integers(-2, 3, size=4))
        poly: dict = {}
        n_mono = 1 + min(degree, 3)
        for _ in range(n_mono):
            exps = [0] * NVARS
            total = int(rng.integers(0, degree + 1))
            for _ in range(total):
                exps[int(rng.integers(0, NVARS))] += 1
            coeff = rng.uniform(-1, 1, (4, 4)) + 1j * rng.uniform(-1, 1, (4, 4))
            key = tuple(exps)
            poly[key] = poly.get(key, 0) + 0.5 * coeff
        terms[k] = poly
    return Field(terms)
