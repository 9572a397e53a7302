"""Command-line front end.

Subcommands: spectrum, wavefunction, potential, verify, degeneracy,
cases.  Case parameters travel as repeatable --param key=value pairs
validated against the per-case schemas, so the flag grammar never
changes when a case is added.  Output is CSV (17 significant digits,
newline line ends, fixed headers) or JSON (flat objects mirroring the
CSV rows); identical configurations produce byte-identical files.

Exit codes: 0 success, 1 validation error, 2 verification beyond
tolerance, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import json
import math
import os
import sys
from dataclasses import asdict
from typing import Optional

import numpy as np

from .errors import NumericalError, PctlabError, ValidationError
from .model import Parity, QuantumNumbers, degeneracy_ladder
from .pct import effective_potential_q, z_of_r
from .spectra import (
    CaseId,
    CaseSpec,
    Flag,
    FLAGGED_CASES,
    MASS_PARAM_SCHEMA,
    PARAM_SCHEMAS,
    POWER_LAW_CASES,
    closed_form_energy,
    closed_form_wavefunction,
    make_case,
    target_potential,
)
from .verify import Tolerances, verify_sweep

VERIFY_HEADER = (
    "case,n_r,ell,d,param_hash,E_closed,E_numeric,abs_err,rel_err,"
    "residual_l2,norm_defect,flag,passed"
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_VERIFY_FAIL = 2
EXIT_NUMERICAL = 3


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _param_hash(case: CaseSpec) -> str:
    payload = {
        "case": case.case_id.value,
        "alpha": case.mass.alpha,
        "gamma": case.mass.gamma,
        "params": dict(sorted(case.params.items())),
    }
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha1(blob).hexdigest()[:12]


def _emit(rows: list[dict], header: list[str], args) -> None:
    if args.format == "json":
        text = json.dumps(rows, indent=2) + "\n"
    else:
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_fmt(row[k]) for k in header))
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_params(pairs: Optional[list[str]]) -> dict[str, float]:
    out: dict[str, float] = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise ValidationError(f"--param expects key=value, got {pair!r}")
        key, _, val = pair.partition("=")
        try:
            out[key.strip()] = float(val)
        except ValueError:
            raise ValidationError(f"parameter {key!r} has a non-numeric value {val!r}")
    return out


def _parity(args) -> Optional[Parity]:
    if getattr(args, "parity", None) is None:
        return None
    return Parity(args.parity)


def _case_from_args(args) -> CaseSpec:
    params = _parse_params(args.param)
    gamma = args.gamma
    case_id = CaseId(args.case)
    if case_id in POWER_LAW_CASES and gamma is None:
        gamma = 0.0
    return make_case(case_id, alpha=args.alpha, gamma=gamma, **params)


def _flag_arg(args) -> Optional[object]:
    raw = getattr(args, "flag", None)
    if raw in (None, "both"):
        return "both" if raw == "both" else None
    return Flag(raw)


def _single_flags(case: CaseSpec, args) -> list[Optional[Flag]]:
    """Flag settings for direct-evaluation commands (spectrum etc.)."""
    raw = getattr(args, "flag", None)
    if not case.flagged:
        return [None]
    if raw == "both":
        return [Flag.AS_PRINTED, Flag.RE_DERIVED]
    if raw is None:
        return [Flag.RE_DERIVED]
    return [Flag(raw)]


def _flag_name(case: CaseSpec, fl: Optional[Flag]) -> str:
    return fl.value if (case.flagged and fl is not None) else "-"


def cmd_cases(args) -> int:
    rows = []
    for cid in CaseId:
        schema = PARAM_SCHEMAS[cid]
        rows.append(
            {
                "case": cid.value,
                "mass": (
                    "alpha*r^gamma" if cid in POWER_LAW_CASES
                    else "alpha/r^2" if cid.value.endswith("gm2")
                    else "alpha/(4 r (1+r)^2)" if cid is CaseId.POSCHL_TELLER
                    else "1/(alpha^2 (r+1)^2)"
                ),
                "params": " ".join(sorted(schema)) or "-",
                "flagged": cid in FLAGGED_CASES,
                "index_base": 1 if cid is CaseId.HULTHEN else 0,
            }
        )
    if args.format == "json":
        _emit(rows, list(rows[0].keys()), args)
    else:
        _emit(rows, ["case", "mass", "params", "flagged", "index_base"], args)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    case = _case_from_args(args)
    parity = _parity(args)
    rows = []
    h = _param_hash(case)
    for fl in _single_flags(case, args):
        for n_r in range(case.index_base, args.nr_max + 1):
            qn = QuantumNumbers(n_r=n_r, ell=args.ell, d=args.d, parity=parity)
            rows.append(
                {
                    "case": case.case_id.value,
                    "n_r": n_r,
                    "ell": args.ell,
                    "d": args.d,
                    "param_hash": h,
                    "E_closed": closed_form_energy(case, qn, fl),
                    "flag": _flag_name(case, fl),
                }
            )
    _emit(rows, ["case", "n_r", "ell", "d", "param_hash", "E_closed", "flag"], args)
    return EXIT_OK


def cmd_wavefunction(args) -> int:
    case = _case_from_args(args)
    parity = _parity(args)
    qn = QuantumNumbers(n_r=args.nr, ell=args.ell, d=args.d, parity=parity)
    rows = []
    for fl in _single_flags(case, args):
        sol = closed_form_wavefunction(case, qn, fl)
        lo = case.r_domain[0]
        r = lo + np.geomspace(args.r_min, args.r_max, args.points)
        vals = sol.R(r)
        name = _flag_name(case, fl)
        for ri, vi in zip(r, vals):
            rows.append({"r": float(ri), "R": float(vi), "flag": name})
    _emit(rows, ["r", "R", "flag"], args)
    return EXIT_OK


def cmd_potential(args) -> int:
    case = _case_from_args(args)
    parity = _parity(args)
    qn = QuantumNumbers(n_r=case.index_base, ell=args.ell, d=args.d, parity=parity)
    rows = []
    for fl in _single_flags(case, args):
        lo = case.r_domain[0]
        r = lo + np.geomspace(args.r_min, args.r_max, args.points)
        v = target_potential(case, qn, r, flag=fl)
        q = z_of_r(case.mass, r)
        w = effective_potential_q(case, qn, q, flag=fl)
        name = _flag_name(case, fl)
        for i in range(len(r)):
            rows.append(
                {"r": float(r[i]), "V_r": float(v[i]), "q": float(q[i]),
                 "W_q": float(w[i]), "flag": name}
            )
    _emit(rows, ["r", "V_r", "q", "W_q", "flag"], args)
    return EXIT_OK


def _verify_job(payload) -> list[dict]:
    case, nr_list, ell, d, parity, n, override, flag, tol = payload
    reports = verify_sweep(
        case, nr_list, ell=ell, d=d, parity=parity, n=n,
        override=override, flag=flag, tolerances=tol,
    )
    return [asdict(rep) for rep in reports]


def cmd_verify(args) -> int:
    case = _case_from_args(args)
    parity = _parity(args)
    tol = Tolerances(energy=args.tol_energy, norm=args.tol_norm)
    override = None
    if (args.q_min is None) != (args.q_max is None):
        raise ValidationError("give both --q-min and --q-max or neither")
    if args.q_min is not None:
        override = (args.q_min, args.q_max)
    nr_list = list(range(case.index_base, args.nr_max + 1))
    if not nr_list:
        raise ValidationError("--nr-max below the case's first state index")

    flag = _flag_arg(args) if case.flagged else None
    if case.flagged and flag is None:
        flag = "both"
    jobs = [(case, nr_list, args.ell, args.d, parity, args.grid_n, override, flag, tol)]

    if args.jobs > 1 and len(jobs) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = [row for chunk in pool.map(_verify_job, jobs) for row in chunk]
    else:
        results = [row for job in jobs for row in _verify_job(job)]

    results.sort(key=lambda r: (r["case_id"], r["d"], r["ell"], r["n_r"], r["flag"]))
    h = _param_hash(case)
    rows = [
        {
            "case": r["case_id"],
            "n_r": r["n_r"],
            "ell": r["ell"],
            "d": r["d"],
            "param_hash": h,
            "E_closed": r["e_closed"],
            "E_numeric": r["e_numeric"],
            "abs_err": r["abs_err"],
            "rel_err": r["rel_err"],
            "residual_l2": r["residual_l2"],
            "norm_defect": r["norm_defect"],
            "flag": r["flag"],
            "passed": r["passed"],
        }
        for r in results
    ]
    _emit(rows, VERIFY_HEADER.split(","), args)

    if any(r["error"] for r in results):
        return EXIT_NUMERICAL
    if case.flagged:
        # adjudication: at least one flag setting must clear every state
        by_flag: dict[str, bool] = {}
        for r in results:
            by_flag[r["flag"]] = by_flag.get(r["flag"], True) and r["passed"]
        if not any(by_flag.values()):
            return EXIT_VERIFY_FAIL
        return EXIT_OK
    if not all(r["passed"] for r in results):
        return EXIT_VERIFY_FAIL
    return EXIT_OK


def cmd_degeneracy(args) -> int:
    case = _case_from_args(args)
    if case.case_id not in POWER_LAW_CASES:
        raise ValidationError("the degeneracy ladder applies to the power-law cases")
    h = _param_hash(case)
    rows = []
    all_hold = True
    for n_r in range(0, args.nr_max + 1):
        ladder = degeneracy_ladder(n_r, args.ell, args.d)
        energies = [
            closed_form_energy(case, QuantumNumbers(n_r=n_r, ell=l2, d=d2))
            for l2, d2 in ladder
        ]
        spread = max(energies) - min(energies)
        holds = spread <= 1e-12
        all_hold = all_hold and holds
        for (l2, d2), e in zip(ladder, energies):
            rows.append(
                {
                    "case": case.case_id.value,
                    "n_r": n_r,
                    "ell": args.ell,
                    "d": args.d,
                    "param_hash": h,
                    "rung_ell": l2,
                    "rung_d": d2,
                    "E_closed": e,
                    "max_abs_diff": spread,
                    "holds": holds,
                }
            )
    _emit(
        rows,
        ["case", "n_r", "ell", "d", "param_hash", "rung_ell", "rung_d",
         "E_closed", "max_abs_diff", "holds"],
        args,
    )
    return EXIT_OK if all_hold else EXIT_VERIFY_FAIL


def _load_config(path: str) -> dict:
    """Flat key=value file; later lines win, '#' starts a comment."""
    single: dict[str, str] = {}
    params: list[str] = []
    try:
        with open(path) as fh:
            for raw in fh:
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ValidationError(f"config line without '=': {line!r}")
                key, _, val = line.partition("=")
                key = key.strip().replace("-", "_")
                if key == "param":
                    params.append(val.strip())
                else:
                    single[key] = val.strip()
    except OSError as exc:
        raise ValidationError(f"cannot read config file: {exc}")
    out: dict = dict(single)
    if params:
        out["param"] = params
    return out


_FLOAT_KEYS = {"alpha", "gamma", "tol_energy", "tol_norm", "q_min", "q_max",
               "r_min", "r_max"}
_INT_KEYS = {"d", "ell", "nr", "nr_max", "grid_n", "points", "jobs"}


def _merge_config(args: argparse.Namespace, argv: list[str]) -> None:
    if not getattr(args, "config", None):
        return
    cfg = _load_config(args.config)
    given = {a.split("=")[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
    for key, val in cfg.items():
        if key in given:
            continue  # explicit flags override the file
        if not hasattr(args, key):
            raise ValidationError(f"unknown config key {key!r}")
        if key == "param":
            merged = list(val) + list(args.param or [])
            setattr(args, "param", merged)
        elif key in _FLOAT_KEYS:
            setattr(args, key, float(val))
        elif key in _INT_KEYS:
            setattr(args, key, int(val))
        else:
            setattr(args, key, val)


def _env_tol_energy() -> float:
    raw = os.environ.get("PCTLAB_TOL_ENERGY")
    if raw is None:
        return Tolerances().energy
    try:
        return float(raw)
    except ValueError:
        raise ValidationError(f"PCTLAB_TOL_ENERGY is not a number: {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pctlab",
        description="Closed-form spectra of variable-mass radial problems, "
        "with independent grid verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output to this path instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--config", help="flat key=value file; flags override it")

    csel = argparse.ArgumentParser(add_help=False)
    csel.add_argument("--case", required=True, choices=[c.value for c in CaseId])
    csel.add_argument("--alpha", type=float, default=1.0, help=MASS_PARAM_SCHEMA["alpha"])
    csel.add_argument("--gamma", type=float, default=None, help=MASS_PARAM_SCHEMA["gamma"])
    csel.add_argument("--param", action="append", metavar="KEY=VALUE",
                      help="case parameter, repeatable")
    csel.add_argument("--d", type=int, default=3)
    csel.add_argument("--ell", type=int, default=0)
    csel.add_argument("--parity", choices=("even", "odd"), default=None,
                      help="required when d = 1")
    csel.add_argument("--flag", choices=("as-printed", "re-derived", "both"),
                      default=None, help="reading of a flagged case")

    p = sub.add_parser("cases", parents=[common], help="list the nine cases")
    p.set_defaults(func=cmd_cases)

    p = sub.add_parser("spectrum", parents=[common, csel],
                       help="closed-form energies for n_r = base..nr-max")
    p.add_argument("--nr-max", type=int, required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("wavefunction", parents=[common, csel],
                       help="sample the normalised R(r) on a log grid")
    p.add_argument("--nr", type=int, required=True)
    p.add_argument("--r-min", type=float, default=1e-3,
                   help="offset from the domain start")
    p.add_argument("--r-max", type=float, default=30.0)
    p.add_argument("--points", type=int, default=400)
    p.set_defaults(func=cmd_wavefunction)

    p = sub.add_parser("potential", parents=[common, csel],
                       help="tabulate V(r) and the effective W(q)")
    p.add_argument("--r-min", type=float, default=1e-3)
    p.add_argument("--r-max", type=float, default=30.0)
    p.add_argument("--points", type=int, default=400)
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("verify", parents=[common, csel],
                       help="grid verification reports for a channel")
    p.add_argument("--nr-max", type=int, required=True)
    p.add_argument("--grid-n", type=int, default=4000)
    p.add_argument("--q-min", type=float, default=None)
    p.add_argument("--q-max", type=float, default=None)
    p.add_argument("--tol-energy", type=float, default=_env_tol_energy())
    p.add_argument("--tol-norm", type=float, default=Tolerances().norm)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("degeneracy", parents=[common, csel],
                       help="interdimensional ladder checks")
    p.add_argument("--nr-max", type=int, required=True)
    p.set_defaults(func=cmd_degeneracy)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # argparse exits 2 on bad flags; remap
            return EXIT_OK if exc.code in (0, None) else EXIT_VALIDATION
        _merge_config(args, argv)
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except PctlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
