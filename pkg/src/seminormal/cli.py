"""Command-line interface.

Every subcommand reads JSON documents (ring descriptors and matrix files)
and writes a deterministic report.  ``run`` executes a job file that bundles
the command, its documents and its options.

Exit codes: 0 success or factored, 2 a negative mathematical answer
(obstructed, not rank 1), 3 invalid input, 4 a resource cap was hit.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .core import QQ
from .engine import closure_tower, factor_rank1_seminormal
from .errors import InvariantViolation, ResourceLimitError, SeminormalError
from .gcd import poly_gcd
from .idempotents import DEFAULT_MAX_LEAVES
from .matrix import (
    Matrix,
    certify_rank1,
    check_idempotent,
    matrix_document,
    matrix_from_document,
    newton_lift,
    rank_polynomial,
    schanuel_matrix,
)
from .poly import PolynomialRing
from .rings import SemigroupRing, _AmbientSubring, ring_from_descriptor

EXIT_OK = 0
EXIT_NEGATIVE = 2
EXIT_INVALID = 3
EXIT_RESOURCE = 4

COMMANDS = ("check", "factor", "schanuel", "newton", "gcd", "close")


class UsageError(SeminormalError, ValueError):
    """The job is missing a document or option."""


@dataclass
class Job:
    command: str
    ring: object = None  # descriptor document or short name
    matrix: dict | None = None
    options: dict = field(default_factory=dict)

    @classmethod
    def from_document(cls, doc):
        if not isinstance(doc, dict) or doc.get("command") not in COMMANDS:
            raise UsageError(f"job command must be one of {', '.join(COMMANDS)}")
        unknown = set(doc) - {"command", "ring", "matrix", "options"}
        if unknown:
            raise UsageError(f"unknown job keys: {', '.join(sorted(unknown))}")
        options = doc.get("options", {})
        if not isinstance(options, dict):
            raise UsageError("job options must be an object")
        return cls(doc["command"], doc.get("ring"), doc.get("matrix"), dict(options))

    def coefficient_ring(self, default=None):
        if self.ring is not None:
            return ring_from_descriptor(self.ring)
        if self.matrix is not None and "ring" in self.matrix:
            return ring_from_descriptor(self.matrix["ring"])
        if default is not None:
            return default
        raise UsageError("no ring given")

    def load_matrix(self) -> Matrix:
        if self.matrix is None:
            raise UsageError(f"{self.command} needs a matrix")
        ring = ring_from_descriptor(self.ring) if self.ring is not None else None
        return matrix_from_document(self.matrix, ring)

    @property
    def max_leaves(self):
        return int(self.options.get("max_leaves", DEFAULT_MAX_LEAVES))


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# commands; each returns (text, exit code)


def cmd_check(job: Job):
    P = job.load_matrix()
    R = P.ring
    if not check_idempotent(P):
        return "idempotent: no\n", EXIT_NEGATIVE
    tr = R.to_str(P.trace())
    r = rank_polynomial(P)
    terms = list(r.terms.items())
    if len(terms) == 1 and r.ring.is_one(terms[0][1]):
        rank = str(terms[0][0][0])
    else:
        rank = "varies"
    lines = [f"idempotent: yes; rank: {rank}; trace: {tr}", f"rank polynomial: {r}"]
    try:
        cert = certify_rank1(P)
    except SeminormalError as exc:
        reason = str(exc).split(": ", 1)[1] if ": " in str(exc) else str(exc)
        lines.append(f"rank-1: no ({reason})")
        return "\n".join(lines) + "\n", EXIT_NEGATIVE
    lines.append(f"rank-1: yes (minors checked: {len(cert.minors_checked)})")
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_factor(job: Job):
    P = job.load_matrix()
    R = P.ring
    A = R.base if isinstance(R, PolynomialRing) else R
    result = factor_rank1_seminormal(A, P, max_leaves=job.max_leaves)
    doc = result.document(with_trace=bool(job.options.get("trace")))
    return _dumps(doc), EXIT_OK if result.factored else EXIT_NEGATIVE


def _smallest_square_cube_gap(S: SemigroupRing):
    for k in S.gaps:
        if S.contains_exponent(2 * k) and S.contains_exponent(3 * k):
            return k
    raise UsageError(f"{S} has no gap k with 2k and 3k in the semigroup")


def cmd_schanuel(job: Job):
    opts = job.options
    var = opts.get("var", "X")
    if "semigroup" in opts:
        gens = opts["semigroup"]
        if isinstance(gens, str):
            gens = [int(x) for x in gens.split(",") if x.strip()]
        A = SemigroupRing(job.coefficient_ring(QQ), tuple(gens))
        k = _smallest_square_cube_gap(A)
        a = A.ambient()(f"{A.var}^{k}")
        P = schanuel_matrix(a, a**3, a**2, subring=A, var=var)
    else:
        for key in ("a", "b", "c"):
            if key not in opts:
                raise UsageError(f"schanuel needs --semigroup or all of --a, --b, --c (missing {key})")
        A = job.coefficient_ring(QQ)
        K = A.ambient() if isinstance(A, _AmbientSubring) else A
        a, b, c = (K(str(opts[key])) for key in ("a", "b", "c"))
        P = schanuel_matrix(a, b, c, subring=A if K is not A else None, var=var)
    return _dumps(matrix_document(P)), EXIT_OK


def cmd_newton(job: Job):
    P = job.load_matrix()
    steps = newton_lift(P, history=True)
    return _dumps({"iterations": len(steps) - 1, "matrix": matrix_document(steps[-1])}), EXIT_OK


def cmd_gcd(job: Job):
    opts = job.options
    polys = opts.get("polys") or []
    if len(polys) < 2:
        raise UsageError("gcd needs at least two polynomials")
    vars = opts.get("vars", "X")
    if isinstance(vars, str):
        vars = [v.strip() for v in vars.split(",") if v.strip()]
    base = job.coefficient_ring(None) if job.ring is not None else ring_from_descriptor("ZZ")
    R = PolynomialRing(base, tuple(vars))
    values = [R.parse(str(p)) for p in polys]
    g = values[0]
    for p in values[1:]:
        g = poly_gcd(g, p)
    return R.to_str(g) + "\n", EXIT_OK


def cmd_close(job: Job):
    P = job.load_matrix()
    R = P.ring
    A = R.base if isinstance(R, PolynomialRing) else R
    tower, fac = closure_tower(A, P, max_leaves=job.max_leaves)
    steps = []
    for s in tower.steps:
        amb = s.previous.ambient()
        steps.append({"element": amb.to_str(s.element), "square": amb.to_str(s.square), "cube": amb.to_str(s.cube)})
    doc = {"base": str(A), "tower": tower.strings(), "steps": steps, "top": str(tower.top)}
    if job.options.get("trace"):
        doc["f"] = fac.f_strings()
        doc["g"] = fac.g_strings()
    return _dumps(doc), EXIT_OK


HANDLERS = {
    "check": cmd_check,
    "factor": cmd_factor,
    "schanuel": cmd_schanuel,
    "newton": cmd_newton,
    "gcd": cmd_gcd,
    "close": cmd_close,
}


def execute(job: Job):
    """Run a job; returns ``(stdout_text, stderr_text, exit_code)``."""
    try:
        text, code = HANDLERS[job.command](job)
        return text, "", code
    except ResourceLimitError as exc:
        return "", f"error: resource limit: {exc}\n", EXIT_RESOURCE
    except InvariantViolation:
        # an internal inconsistency is a bug, not bad input
        raise
    except (SeminormalError, ValueError) as exc:
        return "", f"error: {exc}\n", EXIT_INVALID


# ---------------------------------------------------------------------------
# argument handling


def _read_json(path, what):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {what} {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} {path} is not valid JSON: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _ring_argument(text):
    """A ring file, inline JSON, or a short name such as ``ZZ``."""
    if text is None:
        return None
    if Path(text).is_file():
        return _read_json(text, "ring file")
    if text.lstrip().startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"inline ring descriptor is not valid JSON: {exc.msg}") from exc
    return text


def build_parser():
    parser = argparse.ArgumentParser(prog="seminormal", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, matrix=True):
        p.add_argument("--ring", help="ring descriptor file, inline JSON, or short name")
        if matrix:
            p.add_argument("--matrix", help="matrix document file")
        p.add_argument("--trace", action="store_true", help="include the computation trace")
        p.add_argument("--max-leaves", type=int, default=DEFAULT_MAX_LEAVES)
        p.add_argument("--out", help="write the report here instead of stdout")

    for name in ("check", "factor", "newton", "close"):
        common(sub.add_parser(name))
    p = sub.add_parser("schanuel")
    common(p, matrix=False)
    p.add_argument("--semigroup", help="comma-separated generators, e.g. 2,3")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--c")
    p.add_argument("--var", default="X")
    p = sub.add_parser("gcd")
    common(p, matrix=False)
    p.add_argument("--vars", default="X")
    p.add_argument("polys", nargs="+")
    p = sub.add_parser("run", help="execute a job file")
    p.add_argument("job")
    p.add_argument("--out")
    return parser


def _job_from_args(args) -> Job:
    if args.command == "run":
        return Job.from_document(_read_json(args.job, "job file"))
    options = {"trace": args.trace, "max_leaves": args.max_leaves}
    for key in ("semigroup", "a", "b", "c", "var", "vars"):
        value = getattr(args, key, None)
        if value is not None:
            options[key] = value
    if args.command == "gcd":
        options["polys"] = args.polys
    matrix = getattr(args, "matrix", None)
    return Job(
        args.command,
        _ring_argument(args.ring),
        _read_json(matrix, "matrix file") if matrix else None,
        options,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        job = _job_from_args(args)
    except SeminormalError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    out, err, code = execute(job)
    if err:
        sys.stderr.write(err)
    if out:
        if args.out:
            Path(args.out).write_text(out)
        else:
            sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
