"""Command-line front end: ``qfrac eval | verify | table``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from qfrac.exprparse import GRAMMAR, EvaluationError, ParseError, to_integrand
from qfrac.identities import IDENTITIES, run_identity_suite
from qfrac.jackson import Integrand
from qfrac.operators import (
    OperatorSpec,
    frac_derivative_result,
    frac_integral,
    power_rule_closed_form,
)
from qfrac.qcore import DomainError, QContext, Truncation

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NONCONVERGED = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    q: float = 0.5
    p: float = 0.0
    alpha: float = 1.0
    lower: float = 0.0
    points: tuple[float, ...] = (1.0,)
    integrand: str = "1"
    tol: float = 1e-12
    max_terms: int = 10_000
    output: str | None = None
    format: str = "csv"
    derivative: bool = False
    suite: str = "all"
    lam: float = 0.0

    @property
    def ctx(self) -> QContext:
        return QContext(self.q, self.p)

    @property
    def trunc(self) -> Truncation:
        return Truncation(self.tol, self.max_terms)


# {{{ parsing helpers


def parse_points(text: str) -> tuple[float, ...]:
    """``"0.5,1,2"`` or a geometric range ``"start:stop:count"``."""
    text = text.strip()
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            n = int(count)
            if n < 1 or not (float(start) > 0.0 and float(stop) > 0.0):
                raise ConfigError(f"bad geometric range {text!r}")
            pts = tuple(float(v) for v in np.geomspace(float(start), float(stop), n))
        else:
            pts = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"cannot read points {text!r}: {exc}") from None
    if not pts:
        raise ConfigError("no evaluation points given")
    if not all(x > 0.0 and math.isfinite(x) for x in pts):
        raise ConfigError(f"points must be positive and finite, got {text!r}")
    return pts


def _truthy(text: str) -> bool:
    v = text.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off", ""):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


# key in config file / flag dest -> (RunConfig field, converter)
_KEYS: dict[str, tuple[str, Any]] = {
    "q": ("q", float),
    "p": ("p", float),
    "alpha": ("alpha", float),
    "lower": ("lower", float),
    "points": ("points", parse_points),
    "f": ("integrand", str),
    "tol": ("tol", float),
    "max_terms": ("max_terms", int),
    "output": ("output", str),
    "format": ("format", str),
    "derivative": ("derivative", _truthy),
    "suite": ("suite", str),
    "lambda": ("lam", float),
}


def read_config_file(path: str) -> dict[str, Any]:
    """Flat ``key = value`` lines; ``#`` starts a comment. Keys match the long flags."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc.strerror}") from None

    values: dict[str, Any] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in _KEYS:
            raise ConfigError(f"{path}:{lineno}: expected one of the flag names as key=value")
        name, conv = _KEYS[key]
        try:
            values[name] = conv(value.strip())
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from None
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    values: dict[str, Any] = {}
    if args.config is not None:
        values.update(read_config_file(args.config))
    for key, (name, conv) in _KEYS.items():
        raw = getattr(args, key, None)
        if raw is None:
            continue
        values[name] = conv(raw) if isinstance(raw, str) and conv is not str else raw

    known = {f.name for f in fields(RunConfig)}
    cfg = RunConfig(command=args.command, **{k: v for k, v in values.items() if k in known})
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {cfg.format!r}")
    # domain checks surface here as exit-2 errors rather than mid-table
    _ = (cfg.ctx, cfg.trunc)
    return cfg


# }}}


# {{{ output


def fmt_number(v: float) -> str:
    return f"{v:.17g}"


def _csv_field(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_number(v)
    s = str(v)
    if any(c in s for c in ',"\n'):
        s = '"' + s.replace('"', '""') + '"'
    return s


def _json_value(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_number(v) if math.isfinite(v) else "null"
    if isinstance(v, int):
        return str(v)
    return json.dumps(v)


def render(header: Sequence[str], rows: Sequence[Sequence[Any]], fmt: str) -> str:
    if fmt == "csv":
        lines = [",".join(header)] + [",".join(_csv_field(v) for v in row) for row in rows]
        return "\n".join(lines) + "\n"
    objs = [
        "  {" + ", ".join(f"{json.dumps(k)}: {_json_value(v)}" for k, v in zip(header, row)) + "}"
        for row in rows
    ]
    return "[\n" + ",\n".join(objs) + "\n]\n" if objs else "[]\n"


def emit(text: str, cfg: RunConfig) -> None:
    if cfg.output is None or cfg.output == "-":
        sys.stdout.write(text)
    else:
        Path(cfg.output).write_text(text, encoding="utf-8", newline="\n")


# }}}


# {{{ commands


def cmd_eval(cfg: RunConfig) -> int:
    f = to_integrand(cfg.integrand)
    spec = OperatorSpec(cfg.alpha, cfg.ctx, cfg.lower, cfg.trunc)
    if not cfg.derivative and not cfg.alpha > 0.0:
        raise DomainError(f"integral order must be positive, got {cfg.alpha!r}")

    rows = []
    for x in cfg.points:
        r = frac_derivative_result(f, x, spec) if cfg.derivative else frac_integral(f, x, spec)
        rows.append((x, r.value, r.terms_used, r.est_tail, r.converged))
    emit(render(("x", "value", "terms_used", "est_tail", "converged"), rows, cfg.format), cfg)
    return EXIT_OK if all(row[-1] for row in rows) else EXIT_NONCONVERGED


def _format_params(params: dict[str, Any]) -> str:
    return ";".join(f"{k}={fmt_number(v) if isinstance(v, float) else v}" for k, v in params.items())


def cmd_verify(cfg: RunConfig) -> int:
    names = None if cfg.suite == "all" else [s.strip() for s in cfg.suite.split(",") if s.strip()]
    if names is not None:
        unknown = [n for n in names if n not in IDENTITIES]
        if unknown or not names:
            raise ConfigError(
                f"unknown identity {', '.join(unknown) or repr(cfg.suite)}; choose from: all, "
                + ", ".join(IDENTITIES)
            )
    reports = run_identity_suite(names, q=cfg.q, p=cfg.p)

    rows = []
    for rep in reports:
        for cell in rep.cells:
            passed = cell.ok and cell.rel_err <= rep.threshold
            rows.append((rep.identity_name, _format_params(cell.params), cell.abs_err, cell.rel_err, rep.threshold, passed))
    emit(render(("identity", "params", "abs_err", "rel_err", "threshold", "pass"), rows, cfg.format), cfg)
    for rep in reports:
        for cell in rep.cells:
            if cell.error:
                print(f"qfrac: {rep.identity_name} [{_format_params(cell.params)}]: {cell.error}", file=sys.stderr)
    return EXIT_OK if all(rep.passed for rep in reports) else EXIT_FAIL


def cmd_table(cfg: RunConfig) -> int:
    if not cfg.lam > -1.0:
        raise ConfigError(f"--lambda must exceed -1, got {cfg.lam!r}")
    ctx = cfg.ctx
    spec = OperatorSpec(cfg.alpha, ctx, 0.0, cfg.trunc)
    if not cfg.alpha > 0.0:
        raise DomainError(f"integral order must be positive, got {cfg.alpha!r}")
    f = Integrand.power(cfg.lam * (ctx.p + 1.0))

    rows, converged = [], True
    for x in cfg.points:
        r = frac_integral(f, x, spec)
        closed = power_rule_closed_form(x, cfg.alpha, cfg.lam, ctx, trunc=cfg.trunc)
        converged &= r.converged
        rows.append((x, r.value, closed, abs(r.value - closed) / abs(closed)))
    emit(render(("x", "numeric", "closed_form", "rel_err"), rows, cfg.format), cfg)
    return EXIT_OK if converged else EXIT_NONCONVERGED


COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "table": cmd_table}

# }}}


_EPILOG = f"""\
integrand expressions (--f) are arithmetic in one variable t:

{GRAMMAR}

'^' is right-associative and -t^2 means -(t^2); there are no functions.

examples:
  qfrac eval --q 0.5 --p 1 --alpha 0.5 --f "t^2 + 3*t" --points 0.1:1:5
  qfrac eval --derivative --alpha 0.5 --f "1 - t" --points 0.5,1 --format json
  qfrac verify --suite semigroup,power-rule --q 0.5 --p 1
  qfrac table --lambda 1 --alpha 0.5 --q 0.5 --p 1

exit codes: 0 ok, 1 identity check failed, 2 usage/config/parse error,
3 a series did not converge within --max-terms
"""


def make_parser() -> argparse.ArgumentParser:
    formatter = argparse.RawDescriptionHelpFormatter
    parser = argparse.ArgumentParser(
        prog="qfrac",
        description="Generalized q-fractional integrals and derivatives on Jackson grids.",
        epilog=_EPILOG,
        formatter_class=formatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="{eval,verify,table}")

    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("parameters (defaults apply when neither flag nor config sets them)")
    g.add_argument("--q", type=float, help="base q in (0, 1) [0.5]")
    g.add_argument("--p", type=float, help="exponent parameter p > -1 [0]")
    g.add_argument("--tol", type=float, help="relative truncation tolerance [1e-12]")
    g.add_argument("--max-terms", dest="max_terms", type=int, help="term cap per series [10000]")
    g.add_argument("--output", help="output file (default: standard output)")
    g.add_argument("--format", choices=("csv", "json"), help="table format [csv]")
    g.add_argument("--config", help="file of key=value lines; flags win on conflict")

    ev = sub.add_parser("eval", parents=[common], help="evaluate J^alpha f or D^alpha f at points",
                        epilog=_EPILOG, formatter_class=formatter)
    ev.add_argument("--alpha", type=float, help="order [1]")
    ev.add_argument("--lower", type=float, help="lower limit a >= 0 [0]")
    ev.add_argument("--points", help="comma list or geometric start:stop:count [1]")
    ev.add_argument("--f", help='integrand expression in t ["1"]')
    ev.add_argument("--derivative", action="store_const", const=True, help="evaluate D^alpha instead of J^alpha")

    ve = sub.add_parser("verify", parents=[common], help="run identity checks",
                        epilog="identities: all, " + ", ".join(IDENTITIES), formatter_class=formatter)
    ve.add_argument("--suite", help="'all' or a comma list of identity names [all]")

    ta = sub.add_parser("table", parents=[common], help="power rule: numeric vs closed form",
                        formatter_class=formatter)
    ta.add_argument("--lambda", dest="lambda", type=float, help="power lambda > -1 of t^(lambda (p+1)) [0]")
    ta.add_argument("--alpha", type=float, help="order [1]")
    ta.add_argument("--points", help="comma list or geometric start:stop:count [1]")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        return COMMANDS[cfg.command](cfg)
    except (ConfigError, ParseError, EvaluationError, DomainError) as exc:
        print(f"qfrac: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
