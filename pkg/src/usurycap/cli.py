"""Command-line loan screening.

    usurycap classify --loan loan.json --cap 60%
    usurycap joint --loan loan.json --floor 3% --cap 60% --json
    usurycap irr --loan loan.json
    usurycap oracle-check --loan loan.json --cap 60% --grid 20000

Exit codes: 0 legal, 2 bad input, 3 usurious, 4 approximate and no
violation found (indeterminate).
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from . import oracle
from .caps import (
    Decision,
    DominatingPureLoan,
    JointDecision,
    Mode,
    ViolatingRateBracket,
    in_cap_minus,
    in_cap_plus,
    in_weak_cap,
    joint_classify,
)
from .cashflow import CashFlowStream, normalize
from .discounting import Effective, LogFloat, RateSpec, parse_percent
from .errors import InvalidConfig, UsuryCapError
from .irr import IrrKind, IrrValue, classify_stream, irr, refinement_minus, refinement_plus

SCHEMA = 1

EXIT_LEGAL = 0
EXIT_INPUT = 2
EXIT_USURIOUS = 3
EXIT_INDETERMINATE = 4

CONVENTIONS = ("RationalTimes", "ACT365F")
_LOAN_KEYS = {"schema", "currency", "convention", "transactions"}
_TX_KEYS = {"t", "amount"}
_CONFIG_KEYS = {"schema", "cap_effective", "floor_effective", "compounding_period"}


class InputError(Exception):
    """Malformed loan document, configuration or flag value."""


# ---------------------------------------------------------------------------
# loan documents


def _exact(value: Any, what: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise InputError(f"{what} must be a string or an integer, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise InputError(f"{what} must be a string, got {type(value).__name__}")
    try:
        return Fraction(value.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{what}: cannot read {value!r} as an exact number") from None


def _date(value: Any) -> _dt.date:
    if not isinstance(value, str):
        raise InputError(f"date must be a YYYY-MM-DD string, got {value!r}")
    try:
        return _dt.date.fromisoformat(value)
    except ValueError:
        raise InputError(f"bad date {value!r}") from None


def parse_loan_doc(doc: Any) -> CashFlowStream:
    if not isinstance(doc, dict):
        raise InputError("loan document must be a JSON object")
    extra = set(doc) - _LOAN_KEYS
    if extra:
        raise InputError(f"unknown loan fields: {sorted(extra)}")
    if doc.get("schema", SCHEMA) != SCHEMA:
        raise InputError(f"unsupported loan schema {doc.get('schema')!r}")
    convention = doc.get("convention", "RationalTimes")
    if convention not in CONVENTIONS:
        raise InputError(f"convention must be one of {CONVENTIONS}")
    txs = doc.get("transactions")
    if not isinstance(txs, list):
        raise InputError("'transactions' must be a list")
    raw = []
    for i, tx in enumerate(txs):
        if not isinstance(tx, dict):
            raise InputError(f"transaction {i} must be an object")
        if set(tx) != _TX_KEYS:
            raise InputError(f"transaction {i} needs exactly the fields 't' and 'amount'")
        raw.append((tx["t"], _exact(tx["amount"], f"transaction {i} amount")))
    if convention == "ACT365F":
        dates = [_date(t) for t, _ in raw]
        if not dates:
            return CashFlowStream()
        start = min(dates)
        pairs = [(Fraction((d - start).days, 365), a) for d, (_, a) in zip(dates, raw)]
    else:
        pairs = [(_exact(t, f"transaction {i} time"), a) for i, (t, a) in enumerate(raw)]
    for t, _ in pairs:
        if t < 0:
            raise InputError(f"negative time {t}")
    return normalize(pairs)


def parse_loan(path: str) -> CashFlowStream:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return parse_loan_doc(doc)


def serialize_loan(x: CashFlowStream) -> Dict[str, Any]:
    """Canonical form: rational strings, ascending times, no zero amounts."""
    return {
        "convention": "RationalTimes",
        "transactions": [{"t": str(t), "amount": str(a)} for t, a in x.transactions],
    }


# ---------------------------------------------------------------------------
# configuration


def _percent(text: Any, what: str) -> Fraction:
    if not isinstance(text, str):
        raise InputError(f"{what} must be a percent string such as '60%'")
    try:
        value = parse_percent(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{what}: cannot parse {text!r}") from None
    if value <= -1:
        raise InputError(f"{what} must exceed -100%")
    return value


def load_config(path: Optional[str]) -> Dict[str, Any]:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg})") from None
    if not isinstance(cfg, dict):
        raise InputError("config must be a JSON object")
    extra = set(cfg) - _CONFIG_KEYS
    if extra:
        raise InputError(f"unknown config fields: {sorted(extra)}")
    if cfg.get("compounding_period", "annual") != "annual":
        raise InputError("only 'annual' compounding is supported")
    return cfg


def _rate(rho: Fraction, mode: str) -> RateSpec:
    if mode == "float":
        return LogFloat(math.log1p(float(rho)))
    return Effective(rho)


# ---------------------------------------------------------------------------
# report building


def _num(v: float) -> Optional[float]:
    return v if math.isfinite(v) else None


def _frac(v: Optional[Fraction]) -> Optional[str]:
    return None if v is None else str(v)


def irr_json(v: Optional[IrrValue]) -> Optional[Dict[str, Any]]:
    if v is None:
        return None
    out: Dict[str, Any] = {"kind": v.kind.value}
    if v.kind is IrrKind.FINITE:
        lo, hi = v.u_bracket
        out.update(
            log_rate=v.log_rate,
            effective_rate=v.effective_rate,
            u_bracket=[str(lo), str(hi)],
            q=v.q,
        )
    return out


def rate_json(rate: RateSpec) -> Dict[str, Any]:
    if isinstance(rate, Effective):
        return {"effective": str(rate.rho), "log_rate": rate.log_rate}
    return {"log_rate": rate.log_rate}


def witness_json(w) -> Optional[Dict[str, Any]]:
    if w is None:
        return None
    if isinstance(w, DominatingPureLoan):
        return {"type": "DominatingPureLoan", "loan": serialize_loan(w.loan)}
    assert isinstance(w, ViolatingRateBracket)
    return {
        "type": "ViolatingRateBracket",
        "npv_sign": "Positive" if w.sign > 0 else "Negative",
        "s_interval": [_num(w.s_lo), _num(w.s_hi)],
        "s_sample": _num(w.s_sample),
        "npv_at_sample": _num(w.npv_at_sample),
        "u_interval": [_frac(w.u_lo), _frac(w.u_hi)] if w.u_lo is not None else None,
        "u_sample": _frac(w.u_sample),
        "q": w.q,
    }


def decision_json(d: Decision) -> Dict[str, Any]:
    out = {
        "legal": d.legal,
        "rule": d.rule.value,
        "rate": rate_json(d.rate),
        "mode": d.mode.value,
        "witness": witness_json(d.witness),
    }
    if d.relative:
        out["relative"] = True
        out["audit"] = d.audit
    return out


def joint_json(j: JointDecision) -> Dict[str, Any]:
    return {
        "legal": j.legal,
        "oriented_side": j.oriented_side.value,
        "at_fault": j.at_fault.value,
        "mode": j.mode.value,
    }


def exit_code(d: Decision) -> int:
    """Exit status as a function of the cap-plus decision alone."""
    if not d.legal:
        return EXIT_USURIOUS
    if d.mode is Mode.APPROXIMATE:
        return EXIT_INDETERMINATE
    return EXIT_LEGAL


def _joint_exit(j: JointDecision) -> int:
    if not j.legal:
        return EXIT_USURIOUS
    return EXIT_INDETERMINATE if j.mode is Mode.APPROXIMATE else EXIT_LEGAL


def _hierarchy(x: CashFlowStream) -> Dict[str, Any]:
    return {
        "stream_class": classify_stream(x).value,
        "irr": irr_json(irr(x)),
        "refinement_minus": irr_json(refinement_minus(x)),
        "refinement_plus": irr_json(refinement_plus(x)),
    }


def _span(rate: RateSpec, s_max: Optional[float]) -> float:
    s = rate.log_rate
    top = s_max if s_max is not None else max(10.0, 2 * s)
    return max(top - s, 10.0)


def run_classify(x: CashFlowStream, cap: RateSpec, grid: int, s_max: Optional[float]):
    cp = in_cap_plus(x, cap, grid=grid, span=_span(cap, s_max))
    report = {"schema": SCHEMA, "loan": serialize_loan(x)}
    report.update(_hierarchy(x))
    report.update(
        cap_plus=decision_json(cp),
        cap_minus=decision_json(in_cap_minus(x, cap)),
        weak_cap=decision_json(in_weak_cap(x, cap)),
        joint=None,
        witness=witness_json(cp.witness),
        mode=cp.mode.value,
    )
    return report, exit_code(cp)


def run_irr(x: CashFlowStream):
    report = {"schema": SCHEMA, "loan": serialize_loan(x)}
    report.update(_hierarchy(x))
    report["mode"] = Mode.EXACT.value
    return report, EXIT_LEGAL


def run_joint(x: CashFlowStream, floor: RateSpec, cap: RateSpec):
    j = joint_classify(x, floor, cap)
    checks = {k: decision_json(v) for k, v in j.checks.items()}
    report = {
        "schema": SCHEMA,
        "loan": serialize_loan(x),
        "stream_class": classify_stream(x).value,
        "joint": joint_json(j),
        "checks": checks,
        "mode": j.mode.value,
    }
    return report, _joint_exit(j)


def run_oracle(x: CashFlowStream, cap: Optional[RateSpec], grid: int, s_max: Optional[float]):
    top = s_max
    if top is None:
        top = max(10.0, 2 * cap.log_rate) if cap is not None else 10.0
    cfg = oracle.ScanConfig(s_lo=0.0, s_hi=top, grid_points=grid)
    brackets = oracle.bracket_roots(x, cfg)
    report: Dict[str, Any] = {
        "schema": SCHEMA,
        "loan": serialize_loan(x),
        "scan": {"s_lo": cfg.s_lo, "s_hi": cfg.s_hi, "grid_points": cfg.grid_points},
        "root_brackets": [[lo, hi] for lo, hi in brackets],
        "mode": Mode.APPROXIMATE.value,
    }
    code = EXIT_LEGAL
    if cap is not None:
        found = oracle.oracle_in_cap_plus(x, cap.log_rate, cfg)
        exact = in_cap_plus(x, cap, grid=grid, span=_span(cap, s_max))
        report["oracle_cap_plus"] = (
            {"violation": True, "s": found.s, "npv": found.npv}
            if isinstance(found, oracle.ViolationFound)
            else {"violation": False}
        )
        report["cap_plus"] = decision_json(exact)
        report["agree"] = isinstance(found, oracle.ViolationFound) == (not exact.legal)
        report["witness"] = witness_json(exact.witness)
        code = exit_code(exact)
    return report, code


# ---------------------------------------------------------------------------
# text output


def _fmt_irr(v: Optional[Dict[str, Any]]) -> str:
    if v is None:
        return "undefined"
    if v["kind"] != "Finite":
        return "+inf" if v["kind"] == "PlusInfinity" else "-inf"
    return f"{v['effective_rate']:.10g} effective ({v['log_rate']:.10g} log)"


def _fmt_decision(d: Dict[str, Any]) -> str:
    verdict = "legal" if d["legal"] else "USURIOUS"
    if d["mode"] == Mode.APPROXIMATE.value:
        verdict += " (approximate)"
    w = d.get("witness")
    if w and w["type"] == "ViolatingRateBracket":
        lo, hi = w["s_interval"]
        hi_txt = "inf" if hi is None else f"{hi:.6g}"
        verdict += f"; NPV {w['npv_sign'].lower()} for log rates in [{lo:.6g}, {hi_txt}]"
    return verdict


def render_text(report: Dict[str, Any]) -> str:
    lines = []
    for key in ("stream_class",):
        if key in report:
            lines.append(f"class:            {report[key]}")
    if "irr" in report:
        lines.append(f"irr:              {_fmt_irr(report['irr'])}")
    for key in ("refinement_minus", "refinement_plus"):
        if key in report:
            lines.append(f"{key + ':':18}{_fmt_irr(report[key])}")
    for key in ("cap_plus", "cap_minus", "weak_cap"):
        if key in report:
            lines.append(f"{key + ':':18}{_fmt_decision(report[key])}")
    if report.get("joint"):
        j = report["joint"]
        state = "legal" if j["legal"] else "USURIOUS"
        lines.append(f"joint:            {state}, side {j['oriented_side']}, at fault {j['at_fault']}")
    if "root_brackets" in report:
        lines.append(f"oracle roots:     {len(report['root_brackets'])}")
        for lo, hi in report["root_brackets"]:
            lines.append(f"  s in [{lo:.12g}, {hi:.12g}]")
    if "agree" in report:
        lines.append(f"oracle agrees:    {report['agree']}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# entry point


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 2:
        raise argparse.ArgumentTypeError("need at least 2")
    return v


def _finite_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError("must be finite")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="usurycap", description="Screen loan cash flows against interest-rate caps.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_text in (
        ("classify", "cap decisions with witnesses, plus the IRR class"),
        ("irr", "IRR hierarchy and refinements only"),
        ("joint", "floor and cap together, with the party at fault"),
        ("oracle-check", "float scan of NPV roots, compared with the exact decision"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--loan", action="append", required=True, metavar="PATH",
                       help="loan JSON document; repeat to screen several")
        p.add_argument("--cap", help="cap as an effective annual percent, e.g. 60%%")
        p.add_argument("--floor", help="floor as an effective annual percent")
        p.add_argument("--config", metavar="PATH", help="jurisdiction config JSON")
        p.add_argument("--mode", choices=("exact", "float"), default="exact")
        p.add_argument("--json", action="store_true", help="emit JSON reports")
        p.add_argument("--grid", type=_positive_int, default=10_000)
        p.add_argument("--s-max", type=_finite_float, default=None, dest="s_max")
    return parser


def _resolve_rates(args, cfg):
    cap_text = args.cap if args.cap is not None else cfg.get("cap_effective")
    floor_text = args.floor if args.floor is not None else cfg.get("floor_effective")
    cap = _percent(cap_text, "cap") if cap_text is not None else None
    floor = _percent(floor_text, "floor") if floor_text is not None else None
    if floor is not None and floor < 0:
        raise InputError("floor must be nonnegative")
    if floor is not None and cap is not None and floor > cap:
        raise InputError("floor exceeds cap")
    return cap, floor


def _run_one(args, x: CashFlowStream, cap, floor):
    if args.command == "irr":
        return run_irr(x)
    if args.command == "oracle-check":
        return run_oracle(x, None if cap is None else _rate(cap, args.mode), args.grid, args.s_max)
    if cap is None:
        raise InputError(f"{args.command} needs --cap (or cap_effective in --config)")
    if args.command == "classify":
        return run_classify(x, _rate(cap, args.mode), args.grid, args.s_max)
    if floor is None:
        raise InputError("joint needs --floor (or floor_effective in --config)")
    return run_joint(x, _rate(floor, args.mode), _rate(cap, args.mode))


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        cap, floor = _resolve_rates(args, cfg)
        loans = [parse_loan(path) for path in args.loan]
        results = [_run_one(args, x, cap, floor) for x in loans]
    except (InputError, InvalidConfig, UsuryCapError) as exc:
        print(f"usurycap: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    codes: List[int] = [code for _, code in results]
    for path, (report, _) in zip(args.loan, results):
        if args.json:
            print(json.dumps(report, sort_keys=True))
        else:
            if len(results) > 1:
                print(f"== {path}")
            print(render_text(report))
    if EXIT_USURIOUS in codes:
        return EXIT_USURIOUS
    if EXIT_INDETERMINATE in codes:
        return EXIT_INDETERMINATE
    return EXIT_LEGAL


if __name__ == "__main__":
    sys.exit(main())
