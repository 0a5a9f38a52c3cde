"""
Command-line front end.

    python -m xop moments --family lag3 --alpha -0.5 --count 10 --check
    python -m xop poly --family jacobi --alpha 2 --beta 4 --degree 3
    python -m xop verify --family lag1 --alpha 1.5 --max-degree 6 --x2-flag

Exit codes: 0 success, 1 failed check or solve, 2 invalid parameters.
"""

from __future__ import annotations

import argparse
import dataclasses
import csv
import io
import sys
from dataclasses import dataclass
from typing import Optional

from .detrep import SingularMatrixError, exceptional_polynomial
from .families import DegreeError, Kind, ParameterError, make_family
from .moments import MOMENT_SPEC, RecursionError_, generate_moments, moment_by_quadrature
from .specfun import QuadratureError
from .verify import dumps, verify_family

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
ORACLE_TOL = 1e-8


@dataclass(frozen=True)
class CliConfig:
    command: str
    family: str
    alpha: float
    beta: Optional[float]
    count: int
    degree: int
    max_degree: int
    fmt: str
    output: Optional[str]
    tol: Optional[float]
    check: bool
    x2_flag: bool

    def descriptor(self):
        return make_family(Kind(self.family), self.alpha, self.beta)

    def quad_spec(self):
        if self.tol is None:
            return MOMENT_SPEC
        return dataclasses.replace(MOMENT_SPEC, rel_tol=self.tol)


def _params(family):
    return family.params


def _csv(rows, header):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if v is None else ("%.17g" % v if isinstance(v, float) else v) for v in row])
    return buf.getvalue()


def cmd_moments(cfg: CliConfig):
    family = cfg.descriptor()
    table = generate_moments(family, cfg.count)
    status = EXIT_OK
    rows = table.rows()
    if cfg.check:
        spec = cfg.quad_spec()
        checked = []
        for k, value, source, _ in rows:
            q, err = moment_by_quadrature(family, k, spec)
            if abs(value - q) > ORACLE_TOL * (1.0 + abs(q)):
                print(f"moment {k}: recursion {value!r} vs quadrature {q!r}", file=sys.stderr)
                status = EXIT_FAIL
            checked.append((k, value, source, err))
        rows = checked
    if cfg.fmt == "csv":
        text = _csv(rows, ["k", "value", "source", "error_estimate"])
    else:
        text = dumps({
            "family": family.kind.value,
            "params": _params(family),
            "moments": [{"k": k, "value": v, "source": s, "error_estimate": e} for k, v, s, e in rows],
        })
    return status, text


def cmd_poly(cfg: CliConfig):
    family = cfg.descriptor()
    result = exceptional_polynomial(family, cfg.degree)
    shifted = list(result.poly.array(cfg.degree + 1))
    mono = list(result.monomial().array(cfg.degree + 1))
    if cfg.fmt == "csv":
        text = _csv([(i, s, m) for i, (s, m) in enumerate(zip(shifted, mono))],
                    ["i", "shifted_coeff", "monomial_coeff"])
    else:
        text = dumps({
            "family": family.kind.value,
            "parameters": _params(family),
            "degree": cfg.degree,
            "center": family.xi,
            "shifted_coeffs": shifted,
            "monomial_coeffs": mono,
            "condition_estimate": result.condition,
        })
    return EXIT_OK, text


def cmd_verify(cfg: CliConfig):
    family = cfg.descriptor()
    report = verify_family(family, cfg.max_degree, x2=cfg.x2_flag, spec=cfg.quad_spec())
    if cfg.fmt == "csv":
        d = report.to_dict()
        text = _csv([(c["name"], c["paper_anchor"], c["status"], c["residual"], c["tolerance"], c["note"])
                     for c in d["checks"]], ["name", "paper_anchor", "status", "residual", "tolerance", "note"])
    else:
        text = report.to_json()
    return (EXIT_OK if report.passed else EXIT_FAIL), text


COMMANDS = {"moments": cmd_moments, "poly": cmd_poly, "verify": cmd_verify}


def build_parser():
    parser = argparse.ArgumentParser(prog="xop", description="X1 exceptional orthogonal polynomials from moments.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("moments", "adjusted moments (recursion; --check compares with quadrature)"),
        ("poly", "exceptional polynomial of a given degree"),
        ("verify", "run the verification suite"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--family", required=True, choices=[k.value for k in Kind])
        p.add_argument("--alpha", type=float, required=True)
        p.add_argument("--beta", type=float)
        p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
        p.add_argument("--output", "-o")
        p.add_argument("--tol", type=float, help="quadrature relative tolerance")
        if name == "moments":
            p.add_argument("--count", type=int, default=10)
            p.add_argument("--check", action="store_true")
        if name == "poly":
            p.add_argument("--degree", type=int, required=True)
        if name == "verify":
            p.add_argument("--max-degree", type=int, default=6)
            p.add_argument("--x2-flag", action="store_true")
    return parser


def parse_config(argv=None) -> CliConfig:
    ns = build_parser().parse_args(argv)
    return CliConfig(
        command=ns.command,
        family=ns.family,
        alpha=ns.alpha,
        beta=ns.beta,
        count=getattr(ns, "count", 0),
        degree=getattr(ns, "degree", 0),
        max_degree=getattr(ns, "max_degree", 0),
        fmt=ns.fmt,
        output=ns.output,
        tol=ns.tol,
        check=getattr(ns, "check", False),
        x2_flag=getattr(ns, "x2_flag", False),
    )


def _validate(cfg: CliConfig):
    if cfg.tol is not None and not cfg.tol > 0:
        raise ParameterError("--tol must be positive")
    if cfg.command == "moments" and cfg.count < 2:
        raise ParameterError("--count must be at least 2")
    if cfg.command == "verify" and cfg.max_degree < 2:
        raise ParameterError("--max-degree must be at least 2")
    if cfg.family == "jacobi" and cfg.beta is None:
        raise ParameterError("jacobi needs --beta")
    if cfg.family != "jacobi" and cfg.beta is not None:
        raise ParameterError("--beta applies to jacobi only")


def main(argv=None) -> int:
    cfg = parse_config(argv)
    try:
        _validate(cfg)
        status, text = COMMANDS[cfg.command](cfg)
    except (ParameterError, DegreeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SingularMatrixError, QuadratureError, RecursionError_) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
