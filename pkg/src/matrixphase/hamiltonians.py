"""Matrix Hamiltonians as exact Fields.

Free and gauge-coupled super-Hamiltonians in both the covariant (gamma)
and time-split (gamma^0-multiplied) forms, gauge potentials, the field
tensor, mass-shell and energy-projector utilities.  The energy slot of the
time-split form is the phase-space coordinate c*p_0 itself; no energy
branch is selected.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clifford import GammaSet
from .polyfield import (
    Field,
    P_VARS,
    X_VARS,
    constant_field,
    coordinate_field,
    zero_field,
)

__all__ = [
    "PhysParams",
    "GaugePotential",
    "zero_potential",
    "landau_potential",
    "k_free",
    "kcal_free",
    "k_em",
    "kcal_em",
    "field_tensor",
    "slash",
    "mass_shell_check",
    "energy_projectors",
    "random_onshell_momentum",
]

_EYE = np.eye(4)


@dataclass(frozen=True)
class PhysParams:
    """Physical constants; natural units by default."""

    m: float = 1.0
    q: float = 1.0
    c: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.m < 0 or self.c <= 0 or self.hbar <= 0:
            raise ValueError("need m >= 0, c > 0, hbar > 0")


def _check_x_only_scalar(f: Field) -> None:
    for poly in f.terms.values():
        for exps, coeff in poly.items():
            if any(exps[v] for v in P_VARS):
                raise ValueError("gauge potentials must depend on x only")
            if not np.allclose(coeff, coeff[0, 0] * _EYE, atol=0.0):
                raise ValueError("gauge potential coefficients must be scalar")


@dataclass(frozen=True)
class GaugePotential:
    """Four scalar polynomial components A_mu(x)."""

    a: tuple[Field, Field, Field, Field]
    label: str = "custom"

    def __post_init__(self):
        if len(self.a) != 4:
            raise ValueError("need exactly four components")
        for comp in self.a:
            _check_x_only_scalar(comp)


def zero_potential() -> GaugePotential:
    return GaugePotential(a=tuple(zero_field() for _ in range(4)), label="zero")


def landau_potential(b: float) -> GaugePotential:
    """A = (0, 0, B x, 0): constant magnetic field B along z."""
    return GaugePotential(
        a=(
            zero_field(),
            zero_field(),
            coordinate_field(X_VARS[1], b * _EYE),
            zero_field(),
        ),
        label=f"landau(B={b})",
    )


def k_free(params: PhysParams, gset: GammaSet) -> Field:
    """c gamma^mu p_mu - m c^2."""
    out = constant_field(-params.m * params.c**2 * _EYE)
    for mu in range(4):
        out = out + coordinate_field(P_VARS[mu], params.c * gset.gamma[mu])
    return out


def kcal_free(params: PhysParams, gset: GammaSet) -> Field:
    """c gamma^0 gamma^mu p_mu - m c^2 gamma^0 (equals gamma^0 times k_free)."""
    return k_free(params, gset).matmul_left(gset.gamma0)


def _coupling(params: PhysParams, pot: GaugePotential, left: np.ndarray | None, gset: GammaSet) -> Field:
    out = zero_field()
    for mu in range(4):
        comp = pot.a[mu]
        if comp.is_zero():
            continue
        m = gset.gamma[mu] if left is None else left @ gset.gamma[mu]
        out = out + params.q * comp.matmul_left(m)
    return out


def k_em(params: PhysParams, pot: GaugePotential, gset: GammaSet) -> Field:
    """gamma^mu (c p_mu - q A_mu(x)) - m c^2."""
    return k_free(params, gset) - _coupling(params, pot, None, gset)


def kcal_em(params: PhysParams, pot: GaugePotential, gset: GammaSet) -> Field:
    """Time-split form: kcal_free - q gamma^0 gamma^mu A_mu(x)."""
    return kcal_free(params, gset) - _coupling(params, pot, gset.gamma0, gset)


def field_tensor(pot: GaugePotential) -> list[list[Field]]:
    """F_{mu nu} = d_mu A_nu - d_nu A_mu as scalar Fields."""
    return [
        [
            pot.a[nu].diff(X_VARS[mu]) - pot.a[mu].diff(X_VARS[nu])
            for nu in range(4)
        ]
        for mu in range(4)
    ]


def mass_shell_check(p, params: PhysParams) -> float:
    """p^mu p_mu - m^2 c^2 for covariant components p_mu."""
    p = np.asarray(p, dtype=float)
    return float(p[0] ** 2 - p[1] ** 2 - p[2] ** 2 - p[3] ** 2 - (params.m * params.c) ** 2)


def slash(p, gset: GammaSet) -> np.ndarray:
    """gamma^mu p_mu for covariant components p_mu."""
    p = np.asarray(p, dtype=float)
    return sum(p[mu] * gset.gamma[mu] for mu in range(4))


def energy_projectors(p, params: PhysParams, gset: GammaSet):
    """(Lam+, Lam-) with Lam± = (mc ± gamma^mu p_mu) / (2 mc).

    Requires timelike on-shell-compatible p (p^mu p_mu > 0) and m > 0.
    """
    p = np.asarray(p, dtype=float)
    if params.m == 0:
        raise ValueError("projectors need m > 0")
    if p[0] ** 2 - p[1] ** 2 - p[2] ** 2 - p[3] ** 2 <= 0:
        raise ValueError("projectors need timelike p")
    mc = params.m * params.c
    ps = slash(p, gset)
    plus = (mc * _EYE + ps) / (2 * mc)
    minus = (mc * _EYE - ps) / (2 * mc)
    return plus, minus


def random_onshell_momentum(rng: np.random.Generator, params: PhysParams, branch: int = +1):
    """Covariant on-shell p with p_0 = branch * sqrt(|p_vec|^2 + m^2 c^2)."""
    pv = rng.uniform(-1, 1, 3)
    p0 = branch * np.sqrt(float(pv @ pv) + (params.m * params.c) ** 2)
    return np.array([p0, *pv])
