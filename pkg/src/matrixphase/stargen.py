"""Star-eigenvalue residual evaluation.

Residuals of K * W = eps W (left) and W * K = eps W (right) under the exact
star engine, the projector family of exact solutions, the Landau-gauge
printed-display versus general-engine comparison, and the bracket-vanishing
implication check.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .clifford import GammaSet
from .brackets import moyal_bracket, star_product
from .hamiltonians import (
    PhysParams,
    k_em,
    k_free,
    kcal_em,
    kcal_free,
    landau_potential,
    random_onshell_momentum,
)
from .polyfield import (
    Field,
    P_VARS,
    PhasePoint,
    X_VARS,
    constant_field,
    coordinate_field,
    random_field,
    zero_field,
)
from .report import ClaimReport

__all__ = [
    "StargenCase",
    "projector_field",
    "hamiltonian_field",
    "stargen_residual",
    "stargen_report",
    "landau_stargen_residual",
    "moyal_zero_bracket_check",
    "onshell_points",
    "case_from_dict",
]

SIDES = ("left", "right", "both")

HAMILTONIANS = ("free_k", "free_kcal", "landau_k", "landau_kcal")


@dataclass(frozen=True)
class StargenCase:
    """One residual evaluation: K * W - eps W and/or W * K - eps W.

    When eval_points is nonempty the residual is the max matrix norm of the
    residual field at those phase points; otherwise it is the coefficient
    norm of the whole field.  Solutions built from momentum projectors only
    satisfy the relation on the mass shell, so they carry on-shell points.
    """

    hamiltonian: str
    w: Field
    epsilon: float
    side: str = "both"
    b: float = 0.0
    eval_points: tuple = ()
    label: str = ""

    def __post_init__(self):
        if self.side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}")
        if self.hamiltonian not in HAMILTONIANS:
            raise ValueError(f"unknown hamiltonian {self.hamiltonian!r}")
        if not np.isfinite(self.epsilon):
            raise ValueError("epsilon must be finite")


def hamiltonian_field(selector: str, params: PhysParams, gset: GammaSet, b: float = 0.0) -> Field:
    if selector == "free_k":
        return k_free(params, gset)
    if selector == "free_kcal":
        return kcal_free(params, gset)
    pot = landau_potential(b)
    if selector == "landau_k":
        return k_em(params, pot, gset)
    if selector == "landau_kcal":
        return kcal_em(params, pot, gset)
    raise ValueError(f"unknown hamiltonian {selector!r}")


def projector_field(params: PhysParams, gset: GammaSet, branch: int = +1) -> Field:
    """Lam_pm = (mc +- gamma^mu p_mu) / (2mc) as a symbolic momentum Field."""
    if params.m == 0:
        raise ValueError("projector fields need m > 0")
    mc = params.m * params.c
    out = constant_field(0.5 * np.eye(4))
    for mu in range(4):
        out = out + coordinate_field(P_VARS[mu], branch * gset.gamma[mu] / (2 * mc))
    return out


def _residual_value(res: Field, eval_points: tuple) -> float:
    if not eval_points:
        return res.norm()
    worst = 0.0
    for pt in eval_points:
        worst = max(worst, float(np.abs(res.evaluate(pt)).max()))
    return worst


def stargen_residual(case: StargenCase, params: PhysParams, gset: GammaSet) -> float:
    """Max residual over the requested sides; exact star engine throughout."""
    k = hamiltonian_field(case.hamiltonian, params, gset, case.b)
    eps_w = case.epsilon * case.w
    vals = []
    if case.side in ("left", "both"):
        sr = star_product(k, case.w, params.hbar)
        vals.append(_residual_value(sr.field - eps_w, case.eval_points))
    if case.side in ("right", "both"):
        sr = star_product(case.w, k, params.hbar)
        vals.append(_residual_value(sr.field - eps_w, case.eval_points))
    return max(vals)


def stargen_report(case: StargenCase, params: PhysParams, gset: GammaSet,
                   tol: float = 1e-12, assertive: bool = True) -> ClaimReport:
    res = stargen_residual(case, params, gset)
    return ClaimReport.checked(
        "stargen_residual",
        case.label or case.hamiltonian,
        res,
        tol,
        inputs={
            "hamiltonian": case.hamiltonian,
            "epsilon": case.epsilon,
            "side": case.side,
            "n_points": len(case.eval_points),
        },
        assertive=assertive,
    )


def _printed_landau_lhs(
    w: Field, b: float, variant: str, params: PhysParams, gset: GammaSet
) -> Field:
    """Left side of the Landau-gauge display exactly as printed.

    The momentum derivative appears with index 2 in the display; the general
    engine produces index 1 for the vector potential A_2 = B x^1.  Both are
    computed so the discrepancy is measured, never silently repaired.
    """
    if variant not in ("gamma", "kcal"):
        raise ValueError(f"unknown variant {variant!r}")
    left = np.eye(4) if variant == "gamma" else gset.gamma0
    ih2 = 0.5j * params.hbar
    out = w.matmul_left(-params.m * params.c**2 * left)
    for mu in range(4):
        mat = left @ gset.gamma[mu]
        out = out + coordinate_field(P_VARS[mu], params.c * mat) * w
        out = out - ih2 * params.c * w.diff(X_VARS[mu]).matmul_left(mat)
    g2 = left @ gset.gamma[2]
    out = out - coordinate_field(X_VARS[1], params.q * b * g2) * w
    out = out - ih2 * params.q * b * w.diff(P_VARS[2]).matmul_left(g2)
    return out


def landau_stargen_residual(
    w: Field,
    epsilon: float,
    b: float,
    variant: str,
    params: PhysParams,
    gset: GammaSet,
    eval_points: tuple = (),
) -> dict:
    """Printed-display and general-engine residuals with their difference."""
    selector = "landau_k" if variant == "gamma" else "landau_kcal"
    k = hamiltonian_field(selector, params, gset, b)
    eps_w = epsilon * w
    general_field = star_product(k, w, params.hbar).field - eps_w
    printed_field = _printed_landau_lhs(w, b, variant, params, gset) - eps_w
    diff = printed_field - general_field
    return {
        "printed": _residual_value(printed_field, eval_points),
        "general": _residual_value(general_field, eval_points),
        "difference": _residual_value(diff, eval_points),
        "difference_norm": diff.norm(),
    }


def moyal_zero_bracket_check(
    k: Field,
    w: Field,
    epsilon: float,
    params: PhysParams,
    eval_points: tuple = (),
    tol: float = 1e-12,
) -> ClaimReport:
    """If K * W = eps W = W * K to tolerance, the Moyal bracket must vanish.

    The implication is one-way: a vanishing bracket does not certify the
    eigenvalue relation, and cases where the premise fails are reported as
    not applicable rather than asserted.
    """
    eps_w = epsilon * w
    left = _residual_value(star_product(k, w, params.hbar).field - eps_w, eval_points)
    right = _residual_value(star_product(w, k, params.hbar).field - eps_w, eval_points)
    bnorm = _residual_value(moyal_bracket(k, w, params.hbar).field, eval_points)
    applicable = left <= tol and right <= tol
    inputs = {
        "left_residual": left,
        "right_residual": right,
        "epsilon": epsilon,
        "applicable": applicable,
        "note": "one-way implication"
        if applicable
        else "premise fails; bracket value recorded only",
    }
    return ClaimReport.checked(
        "moyal_zero_bracket",
        "implication",
        bnorm,
        2 * tol / params.hbar,
        inputs=inputs,
        assertive=applicable,
    )


def onshell_points(
    seed: int, params: PhysParams, n: int = 5, branch: int = +1
) -> tuple:
    """Deterministic on-shell phase points (random x, mass-shell p)."""
    rng = np.random.default_rng(seed)
    pts = []
    for _ in range(n):
        x = rng.uniform(-1, 1, 4)
        p = random_onshell_momentum(rng, params, branch)
        pts.append(PhasePoint(x=tuple(x), p=tuple(p)))
    return tuple(pts)


def case_from_dict(d: dict, params: PhysParams, gset: GammaSet) -> StargenCase:
    """Build a case from a plain record (as parsed from a config file).

    The W constructor is one of: {"projector": +1 or -1},
    {"random": {"seed": int, "degree": int}}, or {"zero": true}.
    """
    ctor = d.get("w", {"zero": True})
    eval_points = ()
    if "projector" in ctor:
        branch = int(ctor["projector"])
        w = projector_field(params, gset, branch)
        eval_points = onshell_points(int(d.get("seed", 0)), params, branch=branch)
    elif "random" in ctor:
        spec = ctor["random"]
        w = random_field(int(spec.get("seed", 0)), degree=int(spec.get("degree", 2)))
    elif "zero" in ctor:
        w = zero_field()
    else:
        raise ValueError(f"unknown W constructor {ctor!r}")
    return StargenCase(
        hamiltonian=d.get("hamiltonian", "free_k"),
        w=w,
        epsilon=float(d.get("epsilon", 0.0)),
        side=d.get("side", "both"),
        b=float(d.get("b", 0.0)),
        eval_points=eval_points,
        label=d.get("label", ""),
    )
