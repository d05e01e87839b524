"""Command-line front end: ``magnon-qrm {spectrum,dynamics,pert,fit,estimate}``.

Exit codes: 0 success, 2 configuration error, 3 convergence or stability
error, 4 intersection not found / ambiguous / singular denominator.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import dynamics, model, perturbation, spectrum
from .config import (ConfigError, RunConfig, energy_wq, load_config, material_params, model_params,
                     parse_energy)
from .errors import (AmbiguityError, ConvergenceError, DomainError, InsufficientSpanError,
                     NotFoundError, ParameterError, SingularityError)

EXIT_CODES = (
    (ConfigError, 2),
    (ParameterError, 2),
    (ConvergenceError, 3),
    (DomainError, 3),
    (NotFoundError, 4),
    (AmbiguityError, 4),
    (SingularityError, 4),
    (InsufficientSpanError, 4),
)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


class _Output:
    def __init__(self, out_dir: str | None):
        self.dir = Path(out_dir) if out_dir else None
        if self.dir:
            self.dir.mkdir(parents=True, exist_ok=True)

    def write(self, name: str, text: str):
        if self.dir:
            (self.dir / name).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)


def _check(cfg: RunConfig) -> bool:
    return cfg.section("run").get("check", True)


def _parse_states(text: str):
    refs = []
    for part in text.split(";"):
        labels = tuple(s.strip() for s in part.split("+") if s.strip())
        if not labels:
            raise ConfigError(f"bad states specification {text!r}")
        refs.append(labels)
    if len(refs) != 2:
        raise ConfigError(f"states needs two references separated by ';', got {text!r}")
    return refs


def cmd_spectrum(cfg: RunConfig, args, out: _Output) -> None:
    run = cfg.section("run")
    p = model_params(cfg, n_max=args.n_max)
    lo = energy_wq(cfg, cfg.require("run", "omega0_min"), "[run] omega0_min")
    hi = energy_wq(cfg, cfg.require("run", "omega0_max"), "[run] omega0_max")
    sw = spectrum.sweep(p, (lo, hi), run.get("n_points", 301), run.get("n_levels", 16),
                        threads=args.threads or run.get("threads", 1), check=_check(cfg))
    out.write("spectrum.csv", sw.to_csv())
    features = []
    for name, gap in cfg.gaps:
        window = [energy_wq(cfg, e, f"[{name}] window") for e in gap.get("window", [])]
        if len(window) != 2:
            raise ConfigError(f"[{name}] window needs two energies")
        refs = _parse_states(gap.get("states", "1,ggg; 0,eee"))
        thr = energy_wq(cfg, gap["threshold"], f"[{name}] threshold") if "threshold" in gap \
            else spectrum.CROSSING_THRESHOLD
        feat = spectrum.find_gap(p, tuple(window), refs=refs, threshold=thr, check=_check(cfg))
        features.append({"name": name.split(":", 1)[-1].strip(), **feat.to_dict()})
    out.write("gaps.json", _dumps(features))


def cmd_dynamics(cfg: RunConfig, args, out: _Output) -> None:
    run = cfg.section("run")
    base = model_params(cfg, n_max=args.n_max)
    spec = run.get("omega0", "auto")
    if spec == "auto":
        if base.n_qubits == 3 and any(q.g_CR for q in base.qubits):
            _, w0 = spectrum.extract_geff(base, check=_check(cfg))
        else:
            w0 = 3.0 * base.qubits[0].omega_q
    else:
        w0 = energy_wq(cfg, parse_energy(spec, "[run] omega0"), "[run] omega0")
    p = base.with_omega0(w0)
    n_points = run.get("n_points", 4096)
    geff = abs(spectrum.rabi_pair(p)[0]) if p.n_qubits == 3 else 0.0
    if geff > 0:
        times = np.linspace(0.0, run.get("periods", 2.2) * math.pi / geff, n_points)
    else:
        times = np.linspace(0.0, run.get("periods", 2.2) * 2.0 * math.pi / p.qubits[0].omega_q, n_points)
    target = dynamics.ghz_target(p, 1.0) if p.n_qubits == 3 else None
    if geff > 0 and spectrum.rabi_pair(p)[0] < 0:
        target = dynamics.ghz_target(p, -1.0)
    trace = dynamics.evolve(p, run.get("initial", "1,ggg"), times, target=target, check=_check(cfg))
    out.write("dynamics.csv", trace.to_csv())
    summary = {"omega0": w0, "geff": geff, "period": None, "t_star": None, "fidelity": None}
    if geff > 0:
        try:
            summary["period"] = dynamics.rabi_period(trace)
        except InsufficientSpanError:
            pass
        t_star, fid = dynamics.ghz_fidelity_peak(p, check=_check(cfg))
        summary.update(t_star=t_star, fidelity=fid)
    out.write("dynamics_summary.json", _dumps(summary))


def cmd_pert(cfg: RunConfig, args, out: _Output) -> None:
    p = model_params(cfg)
    if p.n_qubits != 3:
        raise ConfigError("pert needs n_qubits = 3")
    q0 = p.qubits[0]
    res = perturbation.breakdown(q0.g_R, q0.g_CR, q0.omega_q)
    families = {k[3:]: v for k, v in res.terms.items() if k.startswith("g5_")}
    record = {
        "g3": None,
        "g3_general": None,
        "g5": res.terms["g5"],
        "g5_families": families,
        "g3_shifted": res.terms["g3_shifted"],
        "total": res.value,
        "omega0_crossing": res.omega0_crossing,
        "empirical_fit": (q0.g_CR * q0.g_R**4 - 0.3 * q0.g_CR**3 * q0.g_R**2) / q0.omega_q**4,
    }
    w0 = p.omega0
    if "omega0" in cfg.section("run"):
        w0 = energy_wq(cfg, parse_energy(cfg.section("run")["omega0"], "[run] omega0"))
    inp = perturbation.PertInputs(w0, tuple(q.omega_q for q in p.qubits),
                                  tuple(q.g_R for q in p.qubits), tuple(q.g_CR for q in p.qubits))
    record["omega0"] = w0
    record["g3_general"] = perturbation.geff3_general(inp)
    if inp.is_identical:
        record["g3"] = perturbation.geff3_identical(w0, q0.omega_q, q0.g_R, q0.g_CR)
    out.write("pert.json", _dumps(record))


def cmd_fit(cfg: RunConfig, args, out: _Output) -> None:
    run = cfg.section("run")
    p = model_params(cfg, n_max=args.n_max)
    default = [0.06, 0.08, 0.10, 0.12]
    gR = [energy_wq(cfg, e, "[run] gr_grid") for e in run["gr_grid"]] if "gr_grid" in run else default
    gCR = [energy_wq(cfg, e, "[run] gcr_grid") for e in run["gcr_grid"]] if "gcr_grid" in run else default
    fit = spectrum.fit_geff_surface(p, gR, gCR, threads=args.threads or run.get("threads", 1),
                                    check=run.get("check", False))
    out.write("fit.json", _dumps({
        "c1": fit.c1, "c2": fit.c2, "residual": fit.residual,
        "points": [{"g_r": a, "g_cr": b, "geff": g} for a, b, g in fit.points],
        "skipped": [{"g_r": a, "g_cr": b, "reason": r} for a, b, r in fit.skipped],
        "perturbative": {"c1": 9 / 8, "c2": -9 / 32},
        "empirical_fit": {"c1": 1.0, "c2": -0.3},
    }))


def cmd_estimate(cfg: RunConfig, args, out: _Output) -> None:
    mat_cfg = cfg.section("material")
    coup = cfg.section("coupling")
    mono = coup.get("monolayers")
    n_int = coup.get("n_int", 100)
    if "n_f" not in mat_cfg and mono is not None:
        # film as thick as the qubit layer
        cfg.sections["material"] = {**mat_cfg, "n_f": mono * n_int}
    try:
        m = material_params(cfg)
    except ParameterError as exc:
        raise ConfigError(str(exc)) from None
    A, B = model.anisotropy_to_AB(m)
    sq = model.bogoliubov(A, B)
    if "psi2" in coup:
        psi2 = coup["psi2"]
    elif mono is not None:
        psi2 = 1.0 / (mono * n_int)
    else:
        raise ConfigError("[coupling] needs psi2 or monolayers")
    j_int = cfg.require("coupling", "j_int").in_mev()
    c = model.dress(model.bare_coupling(j_int, n_int, psi2, m.S, m.N_F), sq)
    record = {
        "units": "meV",
        "a": A, "b": B, "omega0": sq.omega0, "r": sq.r,
        "g": c.g, "g_r": c.g_R, "g_cr": c.g_CR, "delta_omega_q": c.delta_omega_q,
        "g_ghz": c.g * model.MEV_TO_GHZ,
        "g_angular_ghz": 2.0 * math.pi * c.g * model.MEV_TO_GHZ,
        "g_over_j_int": c.g / j_int if j_int else None,
        "mode_spacing": None, "single_mode_ok": None,
        "assumptions": [f"psi2 = {psi2:.6g}", f"N_F = {m.N_F}", f"S = {m.S}",
                        "GHz values are cyclic (E/h); angular = 2 pi x cyclic"],
        "reference": {"g_over_j_int": 0.005, "g_ghz": 80.0},
    }
    if "l" in mat_cfg:
        spacing, ok = model.check_single_mode(m, mat_cfg["l"], c.g_R, c.g_CR)
        record.update(mode_spacing=spacing, single_mode_ok=ok)
    out.write("estimate.json", _dumps(record))


COMMANDS = {"spectrum": cmd_spectrum, "dynamics": cmd_dynamics, "pert": cmd_pert,
            "fit": cmd_fit, "estimate": cmd_estimate}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="magnon-qrm", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="INI configuration file")
    parser.add_argument("--out", help="output directory (default: stdout)")
    parser.add_argument("--n-max", type=int, dest="n_max", help="Fock cutoff override")
    parser.add_argument("--threads", type=int, default=0, help="worker threads for sweeps")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        COMMANDS[args.command](cfg, args, _Output(args.out))
    except tuple(cls for cls, _ in EXIT_CODES) as exc:
        for cls, code in EXIT_CODES:
            if isinstance(exc, cls):
                print(f"magnon-qrm {args.command}: {exc}", file=sys.stderr)
                return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
