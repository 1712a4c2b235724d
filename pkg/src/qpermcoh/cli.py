"""Command-line front end: ``qpermcoh <command> [options]``.

Exit codes: 0 computed and every check passed, 2 a check failed (the
report carries the witness), 3 the degree window is too small, 4 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cocycle import (
    DEFAULT_WINDOW,
    certify_h2_vanishing,
    character,
    counit,
    delta1,
    primitive,
    verify_coboundary,
    word_table,
)
from .errors import (
    CheckFailed,
    DimensionMismatch,
    IllFormed,
    InsufficientCompletion,
    NotAnAutomorphism,
    NotSquare,
    ParseError,
    QPermError,
    WindowTooSmall,
)
from .lowcoh import low_degree_cohomology
from .presentations import (
    MatrixSpec,
    automorphisms,
    build_ahp,
    build_as,
    build_asd,
    cycle_graph_adjacency,
    hopf_well_definedness,
    matrix_from_json,
    permutation_character,
    quotient,
)
from .rewrite import RewriteSystem, complete

EXIT_OK, EXIT_FAILED, EXIT_WINDOW, EXIT_INPUT = 0, 2, 3, 4
COMMANDS = ("certify-h2", "cohomology", "hopf-check", "complete", "primitive-roundtrip")
ALGEBRAS = ("as_n", "as_nd", "ahp")


class InputError(QPermError):
    pass


@dataclass(frozen=True)
class JobConfig:
    command: str
    algebra: str
    n: int | None = None
    p: int | None = None
    matrix_path: str | None = None
    cycles: tuple | None = None
    degree: int | None = None
    output: str | None = None
    format: str = "json"
    threads: int = 1
    with_h2: bool = False

    def validate(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.algebra not in ALGEBRAS:
            raise InputError(f"unknown algebra {self.algebra!r}")
        if self.format not in ("json", "markdown"):
            raise InputError(f"unknown format {self.format!r}")
        has_matrix = self.matrix_path is not None or self.cycles is not None
        if self.algebra == "as_nd" and not has_matrix:
            raise InputError("as_nd needs --matrix or --cycles")
        if self.algebra != "as_nd" and has_matrix:
            raise InputError("--matrix and --cycles only apply to as_nd")
        if self.matrix_path is not None and self.cycles is not None:
            raise InputError("give either --matrix or --cycles, not both")
        if self.algebra == "ahp" and not self.p:
            raise InputError("ahp needs --p")
        if self.algebra != "as_nd" and not self.n:
            raise InputError(f"{self.algebra} needs --n")
        if self.degree is not None and self.degree < 2:
            raise WindowTooSmall(f"degree window {self.degree} is below 2")
        if self.threads < 1:
            raise InputError("--threads must be positive")


# ---------------------------------------------------------------------------
# matrices


def _locate(text: str, literal: str):
    """Line and column (1-based) of the first occurrence of a JSON literal."""
    m = re.search(re.escape(literal), text)
    if m is None:
        return None, None
    line = text.count("\n", 0, m.start()) + 1
    col = m.start() - (text.rfind("\n", 0, m.start()) + 1) + 1
    return line, col


def validate_matrix(path) -> MatrixSpec:
    """Parse a matrix document ``{"n": ..., "entries": [[...]], "source": ...}``."""
    text = Path(path).read_text()
    try:
        return matrix_from_json(text)
    except ParseError as exc:
        if exc.line is not None:
            raise
        line = col = None
        m = re.search(r"entry \[(\d+)\]\[(\d+)\]", str(exc))
        if m:
            data = json.loads(text)
            value = data["entries"][int(m.group(1))][int(m.group(2))]
            line, col = _locate(text, json.dumps(value))
        raise ParseError(str(exc), line, col) from None


def _parse_cycles(text: str) -> tuple:
    try:
        n, p = (int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"--cycles expects 'n,p', got {text!r}") from None
    if n < 1 or p < 1:
        raise InputError("--cycles needs positive n and p")
    return n, p


def build_presentation(cfg: JobConfig):
    if cfg.algebra == "as_n":
        return build_as(cfg.n)
    if cfg.algebra == "ahp":
        return build_ahp(cfg.n, cfg.p)
    if cfg.cycles is not None:
        d = cycle_graph_adjacency(*cfg.cycles)
    else:
        d = validate_matrix(cfg.matrix_path)
    if cfg.n is not None and cfg.n != d.n:
        raise DimensionMismatch(f"--n {cfg.n} but the matrix is {d.n}x{d.n}")
    return build_asd(d.n, d)


# ---------------------------------------------------------------------------
# pipelines; each returns (report dict, markdown text, exit code)


def _run_cohomology(cfg, P, H):
    D = cfg.degree or 3
    rep = low_degree_cohomology(P, D, check_stability=True, with_h2=cfg.with_h2)
    out = rep.to_dict()
    ok = rep.h0 == 1 and rep.stable
    out["status"] = "pass" if ok else "fail"
    code = EXIT_OK if ok else EXIT_WINDOW
    return out, _markdown("Low-degree cohomology", out), code


def _run_certify(cfg, P, H):
    if cfg.algebra == "ahp":
        raise InputError("certify-h2 applies to as_n and as_nd")
    D = cfg.degree or max(DEFAULT_WINDOW, P.max_relator_degree + 2)
    cert = certify_h2_vanishing(P, D, strict=False)
    code = EXIT_OK if cert.verified else EXIT_FAILED
    out = {**cert.to_dict(), "status": "pass" if cert.verified else "fail"}
    return out, cert.to_markdown(), code


def _run_hopf(cfg, P, H):
    D = cfg.degree or max(DEFAULT_WINDOW, P.max_relator_degree)
    rep = hopf_well_definedness(P, H, D, strict=False)
    out = rep.to_dict()
    return out, _markdown("Hopf well-definedness", out), EXIT_OK if rep.passed else EXIT_FAILED


def _run_complete(cfg, P, H):
    D = cfg.degree or DEFAULT_WINDOW
    if D < P.max_relator_degree:
        raise InsufficientCompletion(f"window {D} below relator degree {P.max_relator_degree}")
    rs, cert = complete(RewriteSystem.from_relators(P.relators, P.generators), D)
    bad = rs.check_local_confluence(D)
    out = {
        "algebra": P.label,
        "degree_window": D,
        "certificate": cert.to_dict(),
        "local_confluence": "pass" if not bad else "fail",
        "normal_words": [len(rs.normal_words(k)) for k in range(D + 1)],
        "rules": [str(r) for r in rs.rules],
    }
    if bad:
        out["witness"] = [str(x) for x in bad[:5]]
    out["status"] = out["local_confluence"]
    return out, _markdown("Completed rewrite system", out), EXIT_OK if not bad else EXIT_FAILED


def _run_roundtrip(cfg, P, H):
    if cfg.algebra == "ahp":
        raise InputError("primitive-roundtrip applies to as_n and as_nd")
    D = cfg.degree or DEFAULT_WINDOW
    A = quotient(P, D)
    T = word_table(A, D)
    low = T.lengths <= min(3, D)
    eps = counit(A)
    identity = tuple(range(1, P.n + 1))
    rows = []
    for sigma in automorphisms(P):
        if sigma == identity:
            continue
        psi0 = character(A, permutation_character(P, sigma), "π") - eps
        c = delta1(psi0)
        phi = primitive(A, c)
        agree = bool(np.all((-phi).vector(T)[low] == psi0.vector(T)[low]))
        verdict = verify_coboundary(c, -phi, A, D)
        row = {"sigma": list(sigma), "primitive_matches": agree, "coboundary": bool(verdict),
               "status": "pass" if agree and verdict else "fail"}
        if not verdict:
            row["witness"] = verdict.witness
        rows.append(row)
    ok = all(r["status"] == "pass" for r in rows)
    out = {"algebra": P.label, "degree_window": D, "automorphisms": len(rows),
           "status": "pass" if ok else "fail", "cases": rows}
    return out, _markdown("Primitive round-trip", out), EXIT_OK if ok else EXIT_FAILED


PIPELINES = {
    "cohomology": _run_cohomology,
    "certify-h2": _run_certify,
    "hopf-check": _run_hopf,
    "complete": _run_complete,
    "primitive-roundtrip": _run_roundtrip,
}


def _markdown(title: str, data: dict) -> str:
    lines = [f"# {title}", ""]
    for key, value in data.items():
        if isinstance(value, list) and value and isinstance(value[0], dict):
            cols = list(value[0])
            lines += ["", f"## {key}", "", "| " + " | ".join(cols) + " |",
                      "|" + "---|" * len(cols)]
            for row in value:
                lines.append("| " + " | ".join(_cell(row.get(c)) for c in cols) + " |")
            lines.append("")
        else:
            lines.append(f"- **{key}**: {_cell(value)}")
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if isinstance(v, (dict, list)):
        return "`" + json.dumps(v, ensure_ascii=False) + "`"
    return str(v)


# ---------------------------------------------------------------------------
# entry points


def run(cfg: JobConfig, stdout=None) -> int:
    """Execute one job; writes the report and returns the exit code."""
    stdout = stdout or sys.stdout
    try:
        cfg.validate()
        P, H = build_presentation(cfg)
        report, md, code = PIPELINES[cfg.command](cfg, P, H)
    except (WindowTooSmall, InsufficientCompletion) as exc:
        report, code = {"status": "fail", "error": type(exc).__name__, "message": str(exc)}, EXIT_WINDOW
        md = _markdown("Window too small", report)
    except (InputError, ParseError, NotSquare, DimensionMismatch, NotAnAutomorphism, IllFormed,
            OSError, ValueError) as exc:
        report = {"status": "fail", "error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, ParseError) and exc.line is not None:
            report.update(line=exc.line, column=exc.column)
        code = EXIT_INPUT
        md = _markdown("Input error", report)
    except CheckFailed as exc:
        report, code = {"status": "fail", "error": "CheckFailed", "message": str(exc)}, EXIT_FAILED
        md = _markdown("Check failed", report)
    report = {"command": cfg.command, "threads": cfg.threads, **report}
    text = md if cfg.format == "markdown" else json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        stdout.write(text)
    return code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qpermcoh", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--algebra", choices=ALGEBRAS, default="as_n")
    parser.add_argument("--n", type=int)
    parser.add_argument("--p", type=int)
    parser.add_argument("--matrix", dest="matrix_path")
    parser.add_argument("--cycles", help="n,p: n disjoint oriented p-cycles")
    parser.add_argument("--degree", type=int)
    parser.add_argument("--output")
    parser.add_argument("--format", choices=("json", "markdown"), default="json")
    parser.add_argument("--threads", type=int, help="worker cap (default: $HHL_THREADS or 1)")
    parser.add_argument("--with-h2", action="store_true", help="add the windowed H^2 diagnostic")
    return parser


def config_from_args(argv=None) -> JobConfig:
    args = make_parser().parse_args(argv)
    threads = args.threads
    if threads is None:
        env = os.environ.get("HHL_THREADS", "1")
        try:
            threads = int(env)
        except ValueError:
            raise InputError(f"HHL_THREADS must be an integer, got {env!r}") from None
    cycles = _parse_cycles(args.cycles) if args.cycles else None
    return JobConfig(args.command, args.algebra, args.n, args.p, args.matrix_path, cycles,
                     args.degree, args.output, args.format, threads, args.with_h2)


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except InputError as exc:
        print(f"qpermcoh: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
