"""Command-line front end.

Configuration files are JSON with rationals written as strings, e.g.

    {"family": {"alpha": "1/2", "beta": "1/3",
                "R": {"1": ["1", "1"], "3": ["1", "2/3", "1/3", "1"]},
                "S": {"1": ["1/2", "1"]}},
     "bilinear": {"kappa": ["1", "1"], "tau": ["1"], "mode": "generic"}}

"family" may also be a path to a separate file.  The krall command reads
{"krall": {"alpha": 1, "beta": 1, "m1": 1, "m2": 1, "a": ["3"], "b": ["2"]}}.

Exit codes: 0 success, 1 configuration error, 2 degenerate family,
3 a checked property failed.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .bilinear import GENERIC, SOBOLEV, BilinearConfig, Pairing
from .exact import Poly, format_rational, to_rational
from .family import DegenerateFamily, FamilyConfig, qsequence
from .spectral import (KrallSpec, algebra_scan, divisibility_family, krall_build, measure_fit,
                       recurrence_table, three_term_check)

EXIT_OK, EXIT_CONFIG, EXIT_DEGENERATE, EXIT_VIOLATION = 0, 1, 2, 3

TAGS = {
    "qpoly": "iquss",
    "orth-check": {GENERIC: "thoj", SOBOLEV: "tho2j"},
    "recurrence": "qrr",
    "algebra-scan": "t6.9",
    "krall": "pel1/pel2,ttrr,kjm3",
}


class ConfigError(Exception):
    pass


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def load_family(data, base: Path) -> FamilyConfig:
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object")
    fam = data.get("family", data)
    if isinstance(fam, str):
        fam = _load_json(str(base / fam))
        if isinstance(fam, dict) and "family" in fam:
            fam = fam["family"]
    if not isinstance(fam, dict):
        raise ConfigError("'family' must be an object or a path")
    try:
        return FamilyConfig.from_json(fam)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_bilinear(data, cfg: FamilyConfig, mode: Optional[str]) -> BilinearConfig:
    raw = data.get("bilinear") if isinstance(data, dict) else None
    try:
        if raw is None:
            bcfg = BilinearConfig.ones(cfg, mode or GENERIC)
        else:
            if mode is not None:
                raw = dict(raw, mode=mode)
            bcfg = BilinearConfig.from_json(raw)
        bcfg.validate(cfg)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bilinear configuration: {exc}") from exc
    return bcfg


def parse_window(text: str) -> Tuple[int, int]:
    try:
        a, b = text.split(":")
        lo, hi = int(a), int(b)
    except ValueError as exc:
        raise ConfigError(f"window must look like A:B, got {text!r}") from exc
    if lo < 0 or hi < lo:
        raise ConfigError(f"bad window {text!r}")
    return lo, hi


def parse_poly(text: str) -> Poly:
    try:
        return Poly([to_rational(c.strip()) for c in text.split(",") if c.strip()])
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad coefficient list {text!r}") from exc


def _rats(values) -> List[str]:
    return [format_rational(v) for v in values]


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_qpoly(cfg: FamilyConfig, n: int) -> Tuple[dict, int]:
    if n < 0:
        raise ConfigError("--n must be nonnegative")
    seq = qsequence(cfg)
    rec = seq.record(n)
    return {"n": n, "lambda": format_rational(rec.lam), "beta": _rats(rec.betas),
            "regularized": rec.regularized, "q": _rats(seq.q(n).coeffs)}, EXIT_OK


def cmd_orth_check(cfg: FamilyConfig, bcfg: BilinearConfig, max_n: int) -> Tuple[dict, int]:
    pairing = Pairing(cfg, bcfg)
    seq = qsequence(cfg)
    rows, failures = [], []
    for n in range(cfg.m, max_n + 1):
        qn = seq.q(n)
        for i in range(n + 1):
            val = pairing(qn, seq.q(i))
            zero = val.is_zero()
            ok = zero if i < n else not zero
            rows.append({"n": n, "i": i, "zero": zero, "ok": ok})
            if not ok:
                failures.append({"n": n, "i": i, "value": val.to_json()})
    report = {"max_n": max_n, "pairs": rows, "all_pass": not failures, "failures": failures}
    return report, EXIT_OK if not failures else EXIT_VIOLATION


def cmd_recurrence(cfg: FamilyConfig, Q: Poly, window) -> Tuple[dict, int]:
    if Q.is_zero():
        raise ConfigError("Q must be nonzero")
    return recurrence_table(Q, window, cfg).to_json(), EXIT_OK


def cmd_algebra_scan(cfg: FamilyConfig, max_deg: int, window, mode: str) -> Tuple[dict, int]:
    if max_deg < 0:
        raise ConfigError("--max-deg must be nonnegative")
    basis = algebra_scan(max_deg, window, cfg)
    family = divisibility_family(max_deg, cfg, mode)
    return {"max_deg": max_deg, "window": list(window), "certificate": "window",
            "basis": [_rats(p.coeffs) for p in basis],
            "divisibility_family": [_rats(p.coeffs) for p in family]}, EXIT_OK


def cmd_krall(spec: KrallSpec, window, max_n: int) -> Tuple[dict, int]:
    cfg = krall_build(spec)
    lams = qsequence(cfg).audit(max(window[1], max_n) + 1)
    verdict = three_term_check(cfg, window)
    fit = measure_fit(cfg, fit_max=min(6, max_n), verify_max=max_n) if verdict.holds else None
    report = {"spec": spec.to_json(), "family": cfg.to_json(), "lambda": _rats(lams),
              "three_term": verdict.to_json(),
              "measure_fit": fit.to_json() if fit is not None else None}
    ok = verdict.holds and fit is not None and fit.consistent and fit.verified
    return report, EXIT_OK if ok else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# Rendering and dispatch
# ---------------------------------------------------------------------------

def _render_text(obj, indent: int = 0) -> List[str]:
    pad = "  " * indent
    lines: List[str] = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
    elif isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            lines.append(pad + ", ".join(str(v) for v in obj))
        else:
            for v in obj:
                lines.append(f"{pad}-")
                lines.extend(_render_text(v, indent + 1))
    else:
        lines.append(pad + str(obj))
    return lines


def render(report: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    return "\n".join(_render_text(report)) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jacobitype",
                                     description="Exact computations for Jacobi-type polynomials.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="JSON configuration file")
        p.add_argument("--mode", choices=[GENERIC, SOBOLEV], default=None)
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="as_json", action="store_true", default=True)
        fmt.add_argument("--text", dest="as_json", action="store_false")
        p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("qpoly", help="q_n, its Jacobi coefficients and Lambda(n)")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p = sub.add_parser("orth-check", help="orthogonality table for q_n, m <= n <= max-n")
    common(p)
    p.add_argument("--max-n", type=int, default=12)
    p = sub.add_parser("recurrence", help="gamma_{n,j} for Q(x) q_n over a window")
    common(p)
    p.add_argument("--q", required=True, help="ascending coefficients of Q, comma separated")
    p.add_argument("--window", default="5:25")
    p = sub.add_parser("algebra-scan", help="polynomials Q with a banded recurrence")
    common(p)
    p.add_argument("--max-deg", type=int, required=True)
    p.add_argument("--window", default="5:30")
    p = sub.add_parser("krall", help="build a Krall-Jacobi family and check it")
    common(p)
    p.add_argument("--window", default="0:15")
    p.add_argument("--max-n", type=int, default=14)
    return parser


def run(args) -> Tuple[dict, int]:
    config_path = Path(args.config)
    data = _load_json(str(config_path))
    base = config_path.parent
    report = {"command": args.command}
    if args.command == "krall":
        if not isinstance(data, dict) or "krall" not in data:
            raise ConfigError("krall needs a 'krall' object in the configuration")
        try:
            spec = KrallSpec.from_json(data["krall"])
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        window = parse_window(args.window)
        body, code = cmd_krall(spec, window, args.max_n)
        report.update(config={"krall": spec.to_json()}, thm=TAGS["krall"], result=body)
        return report, code
    cfg = load_family(data, base)
    echo = {"family": cfg.to_json()}
    if args.command == "qpoly":
        body, code = cmd_qpoly(cfg, args.n)
        tag = TAGS["qpoly"]
    elif args.command == "orth-check":
        bcfg = load_bilinear(data, cfg, args.mode)
        echo["bilinear"] = bcfg.to_json()
        body, code = cmd_orth_check(cfg, bcfg, args.max_n)
        tag = TAGS["orth-check"][bcfg.mode]
    elif args.command == "recurrence":
        body, code = cmd_recurrence(cfg, parse_poly(args.q), parse_window(args.window))
        tag = TAGS["recurrence"]
    else:
        mode = args.mode or (data.get("bilinear") or {}).get("mode", GENERIC)
        if mode not in (GENERIC, SOBOLEV):
            raise ConfigError(f"unknown mode {mode!r}")
        echo["mode"] = mode
        body, code = cmd_algebra_scan(cfg, args.max_deg, parse_window(args.window), mode)
        tag = TAGS["algebra-scan"]
    report.update(config=echo, thm=tag, result=body)
    return report, code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, code = run(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DegenerateFamily as exc:
        print(f"degenerate family: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    text = render(report, args.as_json)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
