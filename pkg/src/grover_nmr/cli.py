"""Command-line entry point: ``grover-nmr {run,solve,nmr,compile}``.

Exit codes: 0 success, 1 a requested verification failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .cases import EPR_NAMES, get_case
from .config import FORMATS, ExperimentConfig, load_config
from .errors import DefectiveMatrixError, UnsupportedTargetError, ValidationError, VanishingAmplitudeError
from .experiment import run_epr_experiment, run_reference
from .grover import fidelity, run_iterations, success_probability
from .pulses import TARGETS, compile_target
from .recursion import amplitudes_at, averages_at, find_target_iteration, power_period, transfer_matrix, weights
from .spectra import emit_spectrum, spectra_to_csv, spectra_to_json

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
FIDELITY_TOL = 1e-10
AUTO_N_MAX = 100


class UsageError(Exception):
    pass


def _c(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _fmt_c(z) -> str:
    z = complex(z)
    return f"{z.real:+.12f}{z.imag:+.12f}j"


# ---------------------------------------------------------------- commands


def cmd_run(config: ExperimentConfig) -> tuple[dict, bool]:
    U = config.unitary()
    n = config.iterations
    if n == "auto":
        found = find_target_iteration(U, config.source_index, config.marked, config.beta, config.gamma, AUTO_N_MAX)
        if found is None:
            raise UsageError(f"no iteration in [1, {AUTO_N_MAX}] drives the unmarked amplitudes to zero")
        n = found[0]
    state = run_iterations(U, config.source_index, config.marked, config.beta, config.gamma, n)
    report = {
        "command": "run",
        "case": config.case,
        "dim": config.dim,
        "source_index": config.source_index,
        "marked": list(config.marked),
        "beta": config.beta,
        "gamma": config.gamma,
        "iterations": n,
        "amplitudes": [_c(a) for a in state],
        "probabilities": [float(abs(a) ** 2) for a in state],
        "success_probability": success_probability(state, config.marked),
    }
    ok = True
    if config.case is not None and n == get_case(config.case).iterations:
        f = fidelity(get_case(config.case).target_state, state)
        report["target_fidelity"] = f
        ok = f >= 1 - FIDELITY_TOL
    report["verified"] = ok
    return report, ok


def cmd_solve(config: ExperimentConfig) -> tuple[dict, bool]:
    U = config.unitary()
    n_max = config.iterations if isinstance(config.iterations, int) else AUTO_N_MAX
    # surfaces a vanishing U[i, s] before any matrix algebra
    amplitudes_at(U, config.source_index, config.marked, config.beta, config.gamma, 0)
    w = weights(U, config.source_index, config.marked)
    tm = transfer_matrix(config.beta, config.gamma, w)
    rows = []
    for n in range(n_max + 1):
        kbar, lbar = averages_at(tm, n)
        rows.append({"n": n, "kbar": _c(kbar), "lbar": _c(lbar)})
    found = find_target_iteration(U, config.source_index, config.marked, config.beta, config.gamma, max(n_max, 1))
    period = power_period(tm)
    report = {
        "command": "solve",
        "case": config.case,
        "weights": {"marked": w.marked, "unmarked": w.unmarked},
        "transfer_matrix": [[_c(x) for x in row] for row in tm.matrix],
        "eigenvalues": [_c(x) for x in tm.eigenvalues],
        "eigenvalue_phases_over_pi": [math.atan2(x.imag, x.real) / math.pi for x in map(complex, tm.eigenvalues)],
        "table": rows,
        "target_iteration": None if found is None else found[0],
        "target_state": None if found is None else [_c(a) for a in found[1]],
        "period": None if period is None else {"length": period[0], "factor": _c(period[1])},
        "period_3": period is not None and period[0] == 3,
        "verified": True,
    }
    return report, True


def _stage(name: str, fn, *args):
    try:
        return fn(*args)
    except Exception as exc:  # noqa: BLE001 - re-raised with the stage name attached
        raise RuntimeError(f"stage {name!r} failed: {exc}") from exc


def cmd_nmr(config: ExperimentConfig, case_name: str | None) -> tuple[dict, bool, list[dict]]:
    sys_ = config.spin_system
    if case_name in (None, "reference"):
        ref = _stage("reference", run_reference, sys_)
        spectra = [emit_spectrum(ref.carbon_peaks, sys_), emit_spectrum(ref.proton_peaks, sys_)]
        nonzero = [sum(p.magnitude > 1e-12 for p in ref.carbon_peaks), sum(p.magnitude > 1e-12 for p in ref.proton_peaks)]
        ok = ref.readout_error < 1e-9 and nonzero == [1, 1]
        report = {
            "command": "nmr",
            "case": "reference",
            "pseudo_pure_scale": ref.scale,
            "carbon_readout": ref.carbon_readout.real.tolist(),
            "proton_readout": ref.proton_readout.real.tolist(),
            "readout_error": ref.readout_error,
            "peaks_per_spectrum": {"carbon": nonzero[0], "proton": nonzero[1]},
            "spectra": spectra,
            "verified": ok,
        }
        return report, ok, spectra

    case = get_case(case_name)
    if case.name not in EPR_NAMES:
        raise UsageError(f"nmr needs one of {EPR_NAMES} or 'reference', got {case_name!r}")
    exp = _stage("experiment", run_epr_experiment, case, sys_)
    spectra = [emit_spectrum(exp.carbon_peaks, sys_), emit_spectrum(exp.proton_peaks, sys_)]
    ok = (
        exp.classification == case.name
        and exp.readout_error < 1e-9
        and min(exp.pseudo_pure_fidelity, exp.state_fidelity, exp.target_fidelity) > 1 - 1e-8
    )
    report = {
        "command": "nmr",
        "case": case.name,
        "pseudo_pure_scale": exp.scale,
        "fidelities": {
            "pseudo_pure": exp.pseudo_pure_fidelity,
            "compiled_vs_statevector": exp.state_fidelity,
            "target": exp.target_fidelity,
        },
        "compiled_events": len(exp.compiled.sequence),
        "max_observable_before_readout": exp.max_unread_observable,
        "readout": exp.readout.real.tolist(),
        "readout_error": exp.readout_error,
        "classification": exp.classification,
        "spectra": spectra,
        "verified": ok,
    }
    return report, ok, spectra


def cmd_compile(target: str) -> tuple[dict, bool]:
    compiled = compile_target(target)
    report = {
        "command": "compile",
        "target": target,
        "label": compiled.sequence.label,
        "events": len(compiled.sequence),
        "sequence": compiled.sequence.to_text(),
        "global_phase": _c(compiled.global_phase),
        "max_error": compiled.error,
        "verified": compiled.error < 1e-8,
    }
    return report, report["verified"]


# ---------------------------------------------------------------- rendering


def _render_text(report: dict) -> str:
    lines = []
    for key, value in report.items():
        if key == "sequence":
            lines.append("sequence:")
            lines.extend("  " + ln for ln in value.splitlines())
        elif key == "table":
            lines.append("  n  kbar                                lbar")
            lines.extend(f"{r['n']:3d}  {_fmt_c(complex(*r['kbar']))}  {_fmt_c(complex(*r['lbar']))}" for r in value)
        elif key == "amplitudes":
            lines.append("amplitudes:")
            lines.extend(f"  |{i}>  {_fmt_c(complex(*a))}" for i, a in enumerate(value))
        elif key == "spectra":
            for rec in value:
                for pk in rec["peaks"]:
                    ph = "   n/a" if pk["phase_deg"] is None else f"{pk['phase_deg']:+7.1f}"
                    lines.append(
                        f"peak {rec['nucleus']:6s} {pk['freq_hz']:.1f} Hz  |a|={pk['magnitude']:.6f}  phase={ph}  element={pk['element']}"
                    )
        else:
            lines.append(f"{key}: {json.dumps(value)}")
    return "\n".join(lines) + "\n"


def _render_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if "table" in report:
        w.writerow(["n", "kbar_re", "kbar_im", "lbar_re", "lbar_im"])
        for r in report["table"]:
            w.writerow([r["n"], *map(repr, r["kbar"]), *map(repr, r["lbar"])])
    elif "amplitudes" in report:
        w.writerow(["index", "re", "im", "probability"])
        for i, (a, p) in enumerate(zip(report["amplitudes"], report["probabilities"])):
            w.writerow([i, repr(a[0]), repr(a[1]), repr(p)])
    elif "spectra" in report:
        return spectra_to_csv(report["spectra"])
    else:
        w.writerow(["index", "event"])
        for i, line in enumerate(ln for ln in report["sequence"].splitlines() if not ln.startswith("#")):
            w.writerow([i, line])
    return buf.getvalue()


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    if fmt == "csv":
        return _render_csv(report)
    return _render_text(report)


# ---------------------------------------------------------------- argparse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grover-nmr", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, n_help):
        p.add_argument("--config", help="JSON experiment config")
        p.add_argument("--case", help="preset: psi1..psi4 (or ψ1..ψ4), grover4")
        p.add_argument("--n", type=int, help=n_help)
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--format", choices=FORMATS, help="output format")

    common(sub.add_parser("run", help="state-vector simulation"), "number of Grover iterations")
    common(sub.add_parser("solve", help="closed-form recursion solution"), "last iteration in the table")
    p = sub.add_parser("nmr", help="full NMR pipeline with predicted spectra")
    common(p, "ignored (one iteration)")
    p = sub.add_parser("compile", help="emit and verify a pulse program")
    p.add_argument("--target", help=f"one of {sorted(TARGETS)}")
    p.add_argument("--case", help="compile the full iteration for a case")
    p.add_argument("--emit", help="write the pulse program text to this file")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=FORMATS, default="text")
    return parser


def _resolve_config(args) -> ExperimentConfig:
    config = load_config(args.config) if args.config else None
    if args.case and not (args.command == "nmr" and args.case == "reference"):
        preset = ExperimentConfig.for_case(args.case)
        config = preset if config is None else config.with_overrides(
            dim=preset.dim, source_index=preset.source_index, marked=preset.marked, beta=preset.beta,
            gamma=preset.gamma, prep=preset.prep, iterations=preset.iterations, case=preset.case,
        )
    if config is None:
        config = ExperimentConfig()
    return config.with_overrides(iterations=args.n, output=args.format)


def _write(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "compile":
            target = args.target or args.case
            if not target:
                raise UsageError("compile needs --target or --case")
            report, ok = cmd_compile(target)
            if args.emit:
                Path(args.emit).write_text(report["sequence"])
            _write(render(report, args.format), args.out)
            return EXIT_OK if ok else EXIT_FAILED

        config = _resolve_config(args)
        if args.command == "run":
            report, ok = cmd_run(config)
        elif args.command == "solve":
            report, ok = cmd_solve(config)
        else:
            case_name = args.case or config.case
            report, ok, spectra = cmd_nmr(config, case_name)
            if args.out:
                text = spectra_to_csv(spectra) if config.output == "csv" else spectra_to_json(spectra)
                Path(args.out).write_text(text)
            fmt = "json" if config.output == "json" else "text"
            sys.stdout.write(render(report, fmt))
            return EXIT_OK if ok else EXIT_FAILED
        _write(render(report, config.output), args.out)
        return EXIT_OK if ok else EXIT_FAILED
    except (UsageError, ValidationError, UnsupportedTargetError, VanishingAmplitudeError) as exc:
        print(f"grover-nmr {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RuntimeError, DefectiveMatrixError) as exc:
        print(f"grover-nmr {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
