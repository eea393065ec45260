"""Batch front door: claim suites, oracle checks, stargen cases, evolutions.

Every command reads one YAML config, writes deterministic artifacts into an
output directory (line-delimited claim reports, CSV series, SVG plots,
binary grids), and finishes by writing a manifest naming every file it
produced.  A run that dies early leaves no manifest.  Reports carry no
timestamps so identical config and seed give byte-identical files.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np
import yaml

from .clifford import (
    GammaRep,
    algebra_reports,
    build_gamma_set,
    dirac_adjoint,
    gamma_set_from_matrices,
)
from .brackets import BracketKind, axiom_suite
from .dynamics import evolve_anticomm, evolve_free, evolve_landau_moyal
from .errors import CFLError, GridError, TermBudgetError
from .gridfield import AxisSpec, GridField, GridSpec, sample_to_grid, write_gridfield
from .hamiltonians import PhysParams, k_free
from .polyfield import P_VARS, X_VARS, plane_wave_field
from .report import ClaimReport
from . import dirac_oracle, stargen

EXIT_OK = 0
EXIT_CLAIM_FAILED = 1
EXIT_BAD_SELECTOR = 2
EXIT_GRID = 3
EXIT_CFL = 4
EXIT_IO = 5

CONFIG_TEMPLATE = """\
# Run configuration.  Every value shown is the default.
representation: dirac        # dirac | chiral | both
seed: 0                      # master seed; --seed overrides
out: runs                    # output directory; --out overrides

params:
  m: 1.0                     # mass
  q: 1.0                     # charge
  c: 1.0                     # speed of light
  hbar: 1.0
  b: 0.7                     # magnetic field strength (landau runs)

tolerances:
  asserted: 1.0e-12          # asserted claims fail above this
  oracle: 1.0e-6             # finite-difference oracle agreement

brackets:                    # selectors for bracket-claims
  kinds: [poisson, extended, moyal]
  n_seeds: 20
  degree: 2

oracle:
  n_states: 20               # seeded single-wave massless states
  superposition: true        # also run a two-wave superposition

stargen:
  cases:
    - {label: projector_plus, hamiltonian: free_k, w: {projector: 1},
       epsilon: 0.0, seed: 0}
    - {label: projector_minus, hamiltonian: free_k, w: {projector: -1},
       epsilon: -2.0, seed: 1}

evolve:
  kind: free                 # free | landau | anticomm
  n: 32                      # points per grid axis
  extent: 6.283185307179586  # axis length (2*pi)
  dt: 0.01
  t_total: 1.0
  mode_k: [2.0, 0.0, 0.0]    # spatial wavevector of the initial mode
  strict_cfl: false          # abort instead of warn on step-size bound
  svg: true                  # also plot the residual series

# Negative control: corrupt one gamma matrix before the algebra checks.
# gamma_override: {mu: 1, scale: 1.5}
gamma_override: null
"""


def _fail(msg: str, code: int):
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


def _load_config(path, seed, out) -> dict:
    defaults = yaml.safe_load(CONFIG_TEMPLATE)
    cfg = dict(defaults)
    if path is not None:
        try:
            with open(path) as fh:
                user = yaml.safe_load(fh) or {}
        except OSError as exc:
            _fail(f"cannot read config: {exc}", EXIT_IO)
        for key, val in user.items():
            if isinstance(val, dict) and isinstance(cfg.get(key), dict):
                merged = dict(cfg[key])
                merged.update(val)
                cfg[key] = merged
            else:
                cfg[key] = val
    if seed is not None:
        cfg["seed"] = seed
    if out is not None:
        cfg["out"] = out
    for name, tol in cfg["tolerances"].items():
        if not tol > 0:
            _fail(f"tolerance {name!r} must be positive", EXIT_BAD_SELECTOR)
    return cfg


def _params(cfg) -> PhysParams:
    p = cfg["params"]
    return PhysParams(m=p["m"], q=p["q"], c=p["c"], hbar=p["hbar"])


def _reps(cfg) -> list[GammaRep]:
    sel = cfg["representation"]
    if sel == "both":
        return [GammaRep.DIRAC, GammaRep.CHIRAL]
    try:
        return [GammaRep(sel)]
    except ValueError:
        _fail(f"unknown representation {sel!r}", EXIT_BAD_SELECTOR)


def _gamma_set(rep: GammaRep, cfg):
    gset = build_gamma_set(rep)
    override = cfg.get("gamma_override")
    if override:
        mu = int(override["mu"])
        scale = float(override.get("scale", 1.0))
        gamma = list(gset.gamma)
        gamma[mu] = scale * np.asarray(gamma[mu])
        gset = gamma_set_from_matrices(gamma, rep)
    return gset


def _promote(reports: list[ClaimReport], strict: bool) -> list[ClaimReport]:
    """--strict turns every recorded claim into an asserted one."""
    if not strict:
        return reports
    out = []
    for r in reports:
        if r.verdict == "recorded":
            out.append(
                ClaimReport.checked(r.claim, r.kind, r.residual, r.tolerance, r.inputs)
            )
        else:
            out.append(r)
    return out


def _write_reports(reports, path: Path):
    with open(path, "w") as fh:
        for r in reports:
            fh.write(r.to_line() + "\n")


def _write_csv(path: Path, columns: dict):
    keys = list(columns)
    n = len(next(iter(columns.values())))
    with open(path, "w") as fh:
        fh.write(",".join(keys) + "\n")
        for i in range(n):
            fh.write(",".join(f"{columns[k][i]:.12e}" for k in keys) + "\n")


def _write_svg(path: Path, xs, ys, title: str):
    """Minimal static line plot; fixed formatting keeps output byte-stable."""
    w, h, pad = 640, 400, 50
    xs = [float(v) for v in xs]
    ys = [float(v) for v in ys]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    xr = (x1 - x0) or 1.0
    yr = (y1 - y0) or 1.0
    pts = " ".join(
        f"{pad + (x - x0) / xr * (w - 2 * pad):.2f},"
        f"{h - pad - (y - y0) / yr * (h - 2 * pad):.2f}"
        for x, y in zip(xs, ys)
    )
    body = (
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}">\n'
        f'<rect width="{w}" height="{h}" fill="white"/>\n'
        f'<text x="{w // 2}" y="24" text-anchor="middle" font-size="14">{title}</text>\n'
        f'<line x1="{pad}" y1="{h - pad}" x2="{w - pad}" y2="{h - pad}" stroke="black"/>\n'
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{h - pad}" stroke="black"/>\n'
        f'<text x="{pad}" y="{h - pad + 20}" font-size="11">{x0:.3e}</text>\n'
        f'<text x="{w - pad}" y="{h - pad + 20}" text-anchor="end" font-size="11">{x1:.3e}</text>\n'
        f'<text x="{pad - 4}" y="{h - pad}" text-anchor="end" font-size="11">{y0:.3e}</text>\n'
        f'<text x="{pad - 4}" y="{pad + 4}" text-anchor="end" font-size="11">{y1:.3e}</text>\n'
        f'<polyline points="{pts}" fill="none" stroke="steelblue" stroke-width="1.5"/>\n'
        "</svg>\n"
    )
    path.write_text(body)


def _finish(outdir: Path, command: str, files: list[Path], reports):
    """Write the manifest last and exit with the claim verdict."""
    manifest = {
        "command": command,
        "files": sorted(str(f.relative_to(outdir)) for f in files),
    }
    try:
        with open(outdir / "manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        _fail(f"cannot write manifest: {exc}", EXIT_IO)
    failed = [r for r in reports if not r.ok]
    for r in reports:
        status = {"holds": "pass", "fails": "FAIL", "recorded": "info"}[r.verdict]
        click.echo(f"[{status}] {r.claim} ({r.kind}) residual={r.residual:.3e}")
    if failed:
        names = ", ".join(f"{r.claim} ({r.kind})" for r in failed)
        _fail(f"asserted claim failed: {names}", EXIT_CLAIM_FAILED)
    sys.exit(EXIT_OK)


def _outdir(cfg) -> Path:
    outdir = Path(cfg["out"])
    try:
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        _fail(f"cannot create output directory: {exc}", EXIT_IO)
    return outdir


_common = [
    click.option("--config", "config_path", type=click.Path(), default=None,
                 help="YAML config file (defaults used when omitted)."),
    click.option("--seed", type=int, default=None, help="Override the config seed."),
    click.option("--out", type=click.Path(), default=None, help="Override output directory."),
    click.option("--strict", is_flag=True, help="Promote recorded claims to asserted."),
]


def _with_common(f):
    for opt in reversed(_common):
        f = opt(f)
    return f


@click.group()
def main():
    """Claim suites and transport runs for matrix-valued phase-space fields."""


@main.command()
@click.option("--config", "config_path", type=click.Path(), default="config.yaml",
              show_default=True, help="Where to write the template.")
def init(config_path):
    """Write a fully commented default config file."""
    try:
        Path(config_path).write_text(CONFIG_TEMPLATE)
    except OSError as exc:
        _fail(f"cannot write config: {exc}", EXIT_IO)
    click.echo(f"wrote {config_path}")


@main.command("algebra-report")
@_with_common
def cmd_algebra_report(config_path, seed, out, strict):
    """Check the defining matrix-algebra relations for each representation."""
    cfg = _load_config(config_path, seed, out)
    outdir = _outdir(cfg)
    reports = []
    for rep in _reps(cfg):
        gset = _gamma_set(rep, cfg)
        reports.extend(algebra_reports(gset))
    reports = _promote(reports, strict)
    path = outdir / "algebra_reports.jsonl"
    _write_reports(reports, path)
    _finish(outdir, "algebra-report", [path], reports)


@main.command("bracket-claims")
@_with_common
def cmd_bracket_claims(config_path, seed, out, strict):
    """Run the bracket axiom suites (antisymmetry, Leibniz, Jacobi, ...)."""
    cfg = _load_config(config_path, seed, out)
    outdir = _outdir(cfg)
    params = _params(cfg)
    bc = cfg["brackets"]
    base = int(cfg["seed"])
    seeds = tuple(base + i for i in range(int(bc["n_seeds"])))
    reports = []
    for name in bc["kinds"]:
        if name == "poisson":
            kind = BracketKind.poisson()
        elif name == "extended":
            kind = BracketKind.extended()
        elif name == "moyal":
            kind = BracketKind.moyal(params.hbar)
        else:
            _fail(f"unknown bracket kind {name!r}", EXIT_BAD_SELECTOR)
        reports.extend(axiom_suite(kind, seeds=seeds, degree=int(bc["degree"])))
    reports = _promote(reports, strict)
    path = outdir / "bracket_reports.jsonl"
    _write_reports(reports, path)
    _finish(outdir, "bracket-claims", [path], reports)


@main.command("oracle")
@_with_common
def cmd_oracle(config_path, seed, out, strict):
    """Plane-wave spinor states: transport residuals and the lemma chain."""
    cfg = _load_config(config_path, seed, out)
    outdir = _outdir(cfg)
    params = _params(cfg)
    gset = build_gamma_set(_reps(cfg)[0])
    tol = float(cfg["tolerances"]["asserted"])
    rng = np.random.default_rng(int(cfg["seed"]))
    reports = []
    for j in range(int(cfg["oracle"]["n_states"])):
        kv = rng.uniform(-1, 1, 3)
        k0 = float(np.linalg.norm(kv))
        if k0 < 1e-3:
            kv = np.array([1.0, 0.0, 0.0])
            k0 = 1.0
        p = np.array([k0, *kv])
        sol = dirac_oracle.make_solution(p, "positive", 0.0, gset, params=params)
        w = dirac_oracle.wbar_field([(sol, 1.0)], gset)
        _, res = dirac_oracle.anticomm_residual(w, gset)
        reports.append(
            ClaimReport.checked(
                "single_wave_anticomm", "massless", res, tol, inputs={"state": j}
            )
        )
    if cfg["oracle"]["superposition"]:
        ka = np.array([1.0, 1.0, 0.0, 0.0])
        kb = np.array([1.5, 0.0, 1.5, 0.0])
        sols = [
            (dirac_oracle.make_solution(ka, "positive", 0.0, gset, params=params), 1.0),
            (dirac_oracle.make_solution(kb, "positive", 0.0, gset, params=params), 0.5 + 0.25j),
        ]
        w2 = dirac_oracle.wbar_field(sols, gset)
        _, res2 = dirac_oracle.anticomm_residual(w2, gset)
        reports.append(
            ClaimReport.checked(
                "superposition_anticomm", "massless", res2, tol, assertive=False
            )
        )
        reports.extend(dirac_oracle.hermiticity_lemma_checks(sols, gset))
        reports.extend(dirac_oracle.bracket_consistency_reports(w2, params, gset))
    reports = _promote(reports, strict)
    path = outdir / "oracle_reports.jsonl"
    _write_reports(reports, path)
    _finish(outdir, "oracle", [path], reports)


@main.command("stargen")
@_with_common
def cmd_stargen(config_path, seed, out, strict):
    """Evaluate star-eigenvalue residual cases from the config."""
    cfg = _load_config(config_path, seed, out)
    outdir = _outdir(cfg)
    params = _params(cfg)
    gset = build_gamma_set(_reps(cfg)[0])
    tol = float(cfg["tolerances"]["asserted"])
    reports = []
    for record in cfg["stargen"]["cases"]:
        try:
            case = stargen.case_from_dict(record, params, gset)
        except ValueError as exc:
            _fail(str(exc), EXIT_BAD_SELECTOR)
        except TermBudgetError as exc:
            _fail(str(exc), EXIT_GRID)
        reports.append(stargen.stargen_report(case, params, gset, tol=tol))
        if "projector" in record.get("w", {}):
            k = stargen.hamiltonian_field(case.hamiltonian, params, gset, case.b)
            reports.append(
                stargen.moyal_zero_bracket_check(
                    k, case.w, case.epsilon, params, case.eval_points, tol=tol
                )
            )
    reports = _promote(reports, strict)
    path = outdir / "stargen_reports.jsonl"
    _write_reports(reports, path)
    _finish(outdir, "stargen", [path], reports)


def _free_initial(cfg, gset) -> GridField:
    n = int(cfg["evolve"]["n"])
    extent = float(cfg["evolve"]["extent"])
    kx = [float(v) for v in cfg["evolve"]["mode_k"]]
    spec = GridSpec(
        axes=(AxisSpec(var=X_VARS[1], extent=extent, n=n),),
        fixed={X_VARS[0]: 0.0, X_VARS[2]: 0.0, X_VARS[3]: 0.0,
               P_VARS[0]: 0.0, P_VARS[1]: 0.0, P_VARS[2]: 0.0, P_VARS[3]: 0.0},
    )
    rng = np.random.default_rng(int(cfg["seed"]))
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    m = m + dirac_adjoint(m, gset.gamma0)
    k4 = (0.0, kx[0], kx[1] if len(kx) > 1 else 0.0, kx[2] if len(kx) > 2 else 0.0)
    f = plane_wave_field(m, k4) + plane_wave_field(
        dirac_adjoint(m, gset.gamma0), tuple(-v for v in k4)
    )
    return sample_to_grid(f, spec)


def _landau_initial(cfg, gset) -> GridField:
    n = int(cfg["evolve"]["n"])
    extent = float(cfg["evolve"]["extent"])
    spec = GridSpec(
        axes=(
            AxisSpec(var=X_VARS[1], extent=extent, n=n),
            AxisSpec(var=P_VARS[2], extent=extent, n=n, origin=-extent / 2),
        ),
        fixed={X_VARS[0]: 0.0, X_VARS[2]: 0.0, X_VARS[3]: 0.0,
               P_VARS[0]: 0.0, P_VARS[1]: 0.0, P_VARS[3]: 0.0},
    )
    xs, ps = spec.meshes()
    rng = np.random.default_rng(int(cfg["seed"]))
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    m = m + dirac_adjoint(m, gset.gamma0)
    envelope = np.exp(-(ps**2)) * (1.0 + 0.5 * np.cos(2 * np.pi * xs / extent))
    samples = envelope[..., None, None] * m
    return GridField(spec=spec, samples=samples.astype(complex))


@main.command("evolve")
@_with_common
def cmd_evolve(config_path, seed, out, strict):
    """Run one transport evolution and emit its series, plot, and final grid."""
    cfg = _load_config(config_path, seed, out)
    outdir = _outdir(cfg)
    params = _params(cfg)
    gset = build_gamma_set(_reps(cfg)[0])
    ev = cfg["evolve"]
    kind = ev["kind"]
    files = []
    try:
        if kind == "free":
            w0 = _free_initial(cfg, gset)
            rep = evolve_free(w0, float(ev["t_total"]), params, gset)
            res_tol = 1e-8
        elif kind == "landau":
            w0 = _landau_initial(cfg, gset)
            rep = evolve_landau_moyal(
                w0, params, float(cfg["params"]["b"]), gset,
                float(ev["dt"]), float(ev["t_total"]),
                strict_cfl=bool(ev["strict_cfl"]),
            )
            res_tol = None
        elif kind == "anticomm":
            w0 = _free_initial(cfg, gset)
            rep = evolve_anticomm(
                w0, params, gset, float(ev["dt"]), float(ev["t_total"])
            )
            res_tol = None
        else:
            _fail(f"unknown evolve kind {kind!r}", EXIT_BAD_SELECTOR)
    except CFLError as exc:
        _fail(str(exc), EXIT_CFL)
    except (GridError, TermBudgetError) as exc:
        _fail(str(exc), EXIT_GRID)
    except ValueError as exc:
        _fail(str(exc), EXIT_BAD_SELECTOR)

    columns = {
        "time": rep.times,
        "trace_re": [t.real for t in rep.trace_series],
        "trace_im": [t.imag for t in rep.trace_series],
        "herm_deviation": rep.herm_series,
        "residual": rep.residual_series,
    }
    if "printed_vs_general_diff" in rep.extras:
        columns["printed_vs_general_diff"] = rep.extras["printed_vs_general_diff"]
    csv_path = outdir / f"evolve_{kind}_series.csv"
    _write_csv(csv_path, columns)
    files.append(csv_path)
    grid_path = outdir / f"evolve_{kind}_final.mpgf"
    write_gridfield(rep.final, grid_path)
    files.append(grid_path)
    if ev["svg"]:
        svg_path = outdir / f"evolve_{kind}_residual.svg"
        _write_svg(svg_path, rep.times, rep.residual_series, f"{kind} residual")
        files.append(svg_path)
    reports = []
    if res_tol is not None:
        reports.append(
            ClaimReport.checked(
                "final_transport_residual", kind, rep.residual_series[-1], res_tol
            )
        )
    drift = max(abs(t - rep.trace_series[0]) for t in rep.trace_series)
    reports.append(
        ClaimReport.checked("trace_conservation", kind, drift, 1e-6,
                            assertive=kind != "anticomm")
    )
    reports = _promote(reports, strict)
    rep_path = outdir / f"evolve_{kind}_reports.jsonl"
    _write_reports(reports, rep_path)
    files.append(rep_path)
    _finish(outdir, "evolve", files, reports)


if __name__ == "__main__":
    main()
