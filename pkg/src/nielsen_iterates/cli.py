"""Command-line interface.

Exit codes: 0 success, 1 malformed input, 2 refused (a hypothesis fails or
a level is degenerate), 3 mismatch between independent computations.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field, fields
from math import gcd
from pathlib import Path

from .circle import CirclePair, circle_gcd_reducible, circle_report
from .cyclotomic import (
    IntPoly,
    cyclolemma_quotient,
    factor_index_sets,
    sigma,
)
from .errors import (
    InfiniteReidemeisterError,
    LevelError,
    NonCommutingError,
    PreconditionError,
)
from .geom_oracle import oracle_boost_check, oracle_mp
from .invariants import (
    WEAKLY_JIANG_ASSUMED,
    LevelReport,
    divisors,
    formula_hypotheses,
    level_reports,
    mobius_sum,
    nielsen_number,
    np_bounds,
    np_direct,
    np_mobius_formula,
)
from .klein import KleinPair, klein_nielsen, klein_np, klein_nphi
from .manifest import ERRATUM, FAIL, PASS, Check, manifest
from .reidemeister import TorusPair, reid_set

EXIT_OK, EXIT_INPUT, EXIT_REFUSED, EXIT_MISMATCH = 0, 1, 2, 3
UNSAFE_BANNER = "*** UNSAFE: hypotheses not verified; values below are formula arithmetic only ***"


class InputError(Exception):
    """Malformed or inconsistent input."""


class Refusal(Exception):
    """A hypothesis failed; the message says which."""


@dataclass
class JobSpec:
    space: str | None = None
    a: int | None = None
    b: int | None = None
    f: object = None
    g: object = None
    n: int | None = None
    k: int | None = None
    m: int | None = None
    output: str = "table"
    force_unsafe: bool = False
    oracle: bool = False


@dataclass
class Document:
    """Everything a command prints, in a form that renders as table, JSON or CSV."""

    space: str
    inputs: dict
    levels: list[dict] = field(default_factory=list)
    checks: list[dict] = field(default_factory=list)
    banner: str | None = None
    extra: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)  # extra JSON-only sections


# --- parsing -----------------------------------------------------------------


def parse_matrix(value) -> list[list[int]]:
    if isinstance(value, str):
        try:
            value = json.loads(value)
        except json.JSONDecodeError as exc:
            raise InputError(f"cannot parse matrix {value!r}: {exc}") from None
    if (
        not isinstance(value, list)
        or not value
        or not all(isinstance(row, list) and len(row) == len(value) for row in value)
        or not all(isinstance(x, int) and not isinstance(x, bool) for row in value for x in row)
    ):
        raise InputError(f"matrix must be a square list of integer rows, got {value!r}")
    return value


def parse_klein_map(value) -> tuple[int, int]:
    if isinstance(value, str):
        parts = value.replace("(", "").replace(")", "").split(",")
    else:
        parts = list(value)
    try:
        q, r = (int(x) for x in parts)
    except (TypeError, ValueError):
        raise InputError(f"Klein map must be 'q,r', got {value!r}") from None
    return q, r


def load_config(path: str) -> dict:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from None
    try:
        if p.suffix == ".toml":
            try:
                import tomllib
            except ModuleNotFoundError:  # Python < 3.11
                import tomli as tomllib
            data = tomllib.loads(text)
        else:
            data = json.loads(text)
    except ValueError as exc:
        raise InputError(f"cannot parse config {path}: {exc}") from None
    known = {f.name for f in fields(JobSpec)}
    data = {k.replace("-", "_"): v for k, v in data.items()}
    unknown = set(data) - known
    if unknown:
        raise InputError(f"unknown config fields: {sorted(unknown)}")
    return data


def job_from_args(args: argparse.Namespace) -> JobSpec:
    job = JobSpec(**load_config(args.config)) if getattr(args, "config", None) else JobSpec()
    for f in fields(JobSpec):
        value = getattr(args, f.name, None)
        if value is not None and value is not False:
            setattr(job, f.name, value)
    if args.json:
        job.output = "json"
    elif args.csv:
        job.output = "csv"
    if job.output not in ("table", "json", "csv"):
        raise InputError(f"output must be table, json or csv, got {job.output!r}")
    return job


def _require_level(job: JobSpec) -> int:
    if not isinstance(job.n, int) or isinstance(job.n, bool) or job.n < 1:
        raise InputError(f"n must be an integer >= 1, got {job.n!r}")
    return job.n


def _require_int(job: JobSpec, name: str) -> int:
    value = getattr(job, name)
    if not isinstance(value, int) or isinstance(value, bool):
        raise InputError(f"--{name} must be an integer, got {value!r}")
    return value


# --- rendering -----------------------------------------------------------------


def _num(x) -> str | None:
    return None if x is None else str(x)


def level_row(r: LevelReport, extra_flags: tuple[str, ...] = ()) -> dict:
    return {
        "m": str(r.m),
        "R": "infinite" if r.reid_order is None else str(r.reid_order),
        "N": str(r.nielsen),
        "NP": _num(r.np),
        "NPhi": _num(r.nphi),
        "flags": sorted(set(r.flags) | set(extra_flags)),
    }


def check_row(c: Check) -> dict:
    row = {"name": c.name, "expected": c.expected, "actual": c.actual, "status": c.status}
    if c.note:
        row["note"] = c.note
    return row


def render_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def document_dict(doc: Document) -> dict:
    out = {"space": doc.space, "inputs": doc.inputs, "levels": doc.levels, "checks": doc.checks}
    if doc.banner:
        out["banner"] = doc.banner
    if doc.extra:
        out["notes"] = doc.extra
    out.update(doc.data)
    return out


def render_table(doc: Document) -> str:
    lines = []
    if doc.banner:
        lines.append(doc.banner)
    lines.append(f"space: {doc.space}  " + "  ".join(f"{k}={v}" for k, v in doc.inputs.items()))
    if doc.levels:
        cols = ["m", "R", "N", "NP", "NPhi"]
        rows = [[("-" if row[c] is None else row[c]) for c in cols] + [",".join(row["flags"])] for row in doc.levels]
        header = cols + ["flags"]
        widths = [max(len(header[i]), *(len(r[i]) for r in rows)) for i in range(len(header))]
        lines.append("  ".join(h.rjust(w) if i < 5 else h for i, (h, w) in enumerate(zip(header, widths))))
        for r in rows:
            lines.append("  ".join(v.rjust(w) if i < 5 else v for i, (v, w) in enumerate(zip(r, widths))))
    for c in doc.checks:
        line = f"[{c['status']}] {c['name']}: expected {c['expected']}, got {c['actual']}"
        if c.get("note"):
            line += f" ({c['note']})"
        lines.append(line)
    lines.extend(doc.extra)
    return "\n".join(lines) + "\n"


def render_csv(doc: Document) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if doc.levels:
        w.writerow(["m", "R", "N", "NP", "NPhi", "flags"])
        for row in doc.levels:
            w.writerow([row["m"], row["R"], row["N"], row["NP"] or "", row["NPhi"] or "", ";".join(row["flags"])])
    if doc.checks:
        w.writerow(["name", "expected", "actual", "status"])
        for c in doc.checks:
            w.writerow([c["name"], c["expected"], c["actual"], c["status"]])
    return buf.getvalue()


def emit(doc: Document, output: str, out=None) -> None:
    out = out or sys.stdout
    if output == "json":
        out.write(render_json(document_dict(doc)))
    elif output == "csv":
        out.write(render_csv(doc))
    else:
        out.write(render_table(doc))


# --- commands --------------------------------------------------------------------


def _formula_checks(pair: TorusPair, n: int, force_unsafe: bool) -> list[dict]:
    """Closed-form NP against class counting at each divisor level."""
    checks = []
    for m in divisors(n):
        if nielsen_number(pair, m) == 0:
            continue
        direct = np_direct(pair, m)
        failures, _ = formula_hypotheses(pair, m)
        if not failures:
            value = np_mobius_formula(pair, m)
            checks.append(check_row(Check(f"Möbius NP_{m} = counted NP_{m}", str(direct), str(value), PASS if value == direct else FAIL)))
        elif force_unsafe:
            value = np_mobius_formula(pair, m)
            checks.append(check_row(Check(f"UNSAFE Möbius NP_{m}", str(direct), str(value), "UNSAFE", "; ".join(failures))))
        else:
            checks.append(check_row(Check(f"Möbius NP_{m}", str(direct), "refused", "REFUSED", "; ".join(failures))))
    lo, hi = np_bounds(pair, n)
    if nielsen_number(pair, n):
        direct = np_direct(pair, n)
        checks.append(check_row(Check(f"bounds on NP_{n}", f"{lo} <= NP <= {hi}", str(direct), PASS if lo <= direct <= hi else FAIL)))
    return checks


def compute_circle(job: JobSpec) -> tuple[Document, int]:
    n = _require_level(job)
    p = CirclePair(_require_int(job, "a"), _require_int(job, "b"))
    doc = Document("circle", {"a": str(p.a), "b": str(p.b), "n": str(n)})
    doc.levels = [level_row(r) for r in circle_report(p, n)]
    doc.checks = _formula_checks(p.torus(), n, job.force_unsafe)
    if not circle_gcd_reducible(p):
        doc.extra.append(f"gcd({p.a}, {p.b}) = {gcd(p.a, p.b)}: not reducible to the gcd")
    if job.force_unsafe:
        doc.banner = UNSAFE_BANNER
    code = EXIT_OK
    if job.oracle:
        code = _oracle_checks(p, n, doc)
    if any(c["status"] == FAIL for c in doc.checks):
        code = EXIT_MISMATCH
    return doc, code


def compute_torus(job: JobSpec) -> tuple[Document, int]:
    n = _require_level(job)
    if job.f is None or job.g is None:
        raise InputError("torus needs --f and --g")
    F, G = parse_matrix(job.f), parse_matrix(job.g)
    if len(F) != len(G):
        raise InputError(f"F is {len(F)}x{len(F)} but G is {len(G)}x{len(G)}")
    inputs = {"f": json.dumps(F), "g": json.dumps(G), "n": str(n)}
    try:
        pair = TorusPair.from_lists(F, G)
    except NonCommutingError as exc:
        if not job.force_unsafe:
            raise InputError(f"{exc}; boosts need FG = GF (use --force-unsafe for formula values)") from None
        return _unsafe_torus(TorusPair.from_lists(F, G, allow_noncommuting=True), n, inputs), EXIT_OK
    doc = Document("torus", inputs)
    doc.levels = [level_row(r) for r in level_reports(pair, n)]
    doc.checks = _formula_checks(pair, n, job.force_unsafe)
    if job.force_unsafe:
        doc.banner = UNSAFE_BANNER
    return doc, EXIT_MISMATCH if any(c["status"] == FAIL for c in doc.checks) else EXIT_OK


def _unsafe_torus(pair: TorusPair, n: int, inputs: dict) -> Document:
    doc = Document("torus", inputs, banner=UNSAFE_BANNER)
    doc.extra.append("F and G do not commute: boosts are undefined, NP and NPhi are the Möbius and toral formulas")
    for m in divisors(n):
        S = reid_set(pair, m)
        N = nielsen_number(pair, m)
        doc.levels.append(
            {
                "m": str(m),
                "R": "infinite" if S.order is None else str(S.order),
                "N": str(N),
                "NP": str(np_mobius_formula(pair, m)),
                "NPhi": str(N),
                "flags": sorted({WEAKLY_JIANG_ASSUMED, "unsafe"}),
            }
        )
    return doc


def compute_klein(job: JobSpec) -> tuple[Document, int]:
    n = _require_level(job)
    if job.f is None or job.g is None:
        raise InputError("klein needs --f q,r and --g q,r")
    try:
        p = KleinPair(parse_klein_map(job.f), parse_klein_map(job.g))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    doc = Document("klein", {"f": "{},{}".format(*p.f), "g": "{},{}".format(*p.g), "n": str(n)})
    gated = p.fibre_coprime and p.base_coprime
    if not gated and not job.force_unsafe:
        raise Refusal(
            f"Klein NP refused: gcd(a, b) = {gcd(p.f[0], p.g[0])}, gcd(c, d) = {gcd(p.f[1], p.g[1])}; "
            "both must be 1 for injectivity and reducibility to the gcd"
        )
    flags = {WEAKLY_JIANG_ASSUMED} | ({"gcd_reducible", "injective_boosts", "essentially_reducible"} if gated else {"unsafe"})
    for m in divisors(n):
        try:
            N = klein_nielsen(p, m)
        except ArithmeticError as exc:
            raise InputError(str(exc)) from None
        if N and gated:
            NP, NPhi = klein_np(p, m), klein_nphi(p, m)
        elif N and job.force_unsafe:
            NP, NPhi = mobius_sum(lambda k: klein_nielsen(p, k), m), N
        else:
            NP, NPhi = 0, None
        doc.levels.append(
            {"m": str(m), "R": None, "N": str(N), "NP": str(NP), "NPhi": _num(NPhi), "flags": sorted(flags)}
        )
    if not gated:
        doc.banner = UNSAFE_BANNER
    doc.extra.append("R is not computed: Klein bottle Reidemeister sets are non-abelian")
    return doc, EXIT_OK


def _oracle_checks(p: CirclePair, n: int, doc: Document) -> int:
    code = EXIT_OK
    for m in divisors(n):
        mp, direct = oracle_mp(p, m), np_direct(p.torus(), m)
        ok = mp == direct
        doc.checks.append(check_row(Check(f"level {m}: oracle MP vs counted NP", str(direct), str(mp), "MATCH" if ok else "MISMATCH")))
        code = code if ok else EXIT_MISMATCH
        for k in divisors(m)[:-1]:
            rep = oracle_boost_check(p, k, m)
            doc.checks.append(
                check_row(
                    Check(
                        f"boost square {k}->{m} over {rep.points_checked} points",
                        "0 failures",
                        f"{len(rep.failures)} failures",
                        "MATCH" if rep.passed else "MISMATCH",
                    )
                )
            )
            code = code if rep.passed else EXIT_MISMATCH
    return code


def cmd_compute(job: JobSpec) -> tuple[Document, int]:
    handlers = {"circle": compute_circle, "torus": compute_torus, "klein": compute_klein}
    if job.space not in handlers:
        raise InputError(f"space must be one of {sorted(handlers)}, got {job.space!r}")
    return handlers[job.space](job)


def cmd_oracle(job: JobSpec) -> tuple[Document, int]:
    if job.space not in (None, "circle"):
        raise InputError("the geometric oracle covers circle pairs only")
    n = _require_level(job)
    p = CirclePair(_require_int(job, "a"), _require_int(job, "b"))
    degenerate = [m for m in divisors(n) if p.a**m == p.b**m]
    if degenerate:
        raise Refusal(f"a^m = b^m at levels {degenerate}: coincidence sets are infinite")
    doc = Document("circle", {"a": str(p.a), "b": str(p.b), "n": str(n)})
    code = _oracle_checks(p, n, doc)
    return doc, code


def _poly_json(P: IntPoly) -> list[str]:
    return [str(c) for c in P.coeffs]


def cmd_cyclotomic(job: JobSpec) -> tuple[Document, int]:
    k, m = _require_int(job, "k"), _require_int(job, "m")
    if k < 1 or m < 1:
        raise InputError("k and m must be positive")
    if gcd(k, m) != 1:
        raise Refusal(f"gcd({k}, {m}) = {gcd(k, m)}: the quotient needs coprime levels")
    n = k * m
    p = cyclolemma_quotient(k, m)
    polys = {
        f"sigma_{k},{n}": sigma(k, n),
        f"sigma_{m},{n}": sigma(m, n),
        f"sigma_1,{n}": sigma(1, n),
        f"sigma_1,{k}": sigma(1, k),
        f"sigma_1,{m}": sigma(1, m),
        "p": p,
    }
    doc = Document("cyclotomic", {"k": str(k), "m": str(m), "n": str(n)})
    for name, P in polys.items():
        doc.extra.append(f"{name}(x) = {P}")
    identities = [
        (f"sigma_{k},{n} = p * sigma_1,{m}", sigma(k, n) == p * sigma(1, m)),
        (f"sigma_{m},{n} = p * sigma_1,{k}", sigma(m, n) == p * sigma(1, k)),
        (f"sigma_1,{n} = p * sigma_1,{k} * sigma_1,{m}", sigma(1, n) == p * sigma(1, k) * sigma(1, m)),
    ]
    R, S = factor_index_sets(k, m)
    identities.append(("cyclotomic index sets R = S", R == S))
    for name, ok in identities:
        doc.checks.append(check_row(Check(name, "true", str(ok).lower(), PASS if ok else FAIL)))
    if k == 1 or m == 1:
        doc.extra.append("degenerate case: one level is 1, so p(x) = " + str(p))
    doc.data["polynomials"] = {name: _poly_json(P) for name, P in polys.items()}
    return doc, EXIT_MISMATCH if any(c["status"] == FAIL for c in doc.checks) else EXIT_OK


def cmd_verify_paper() -> tuple[Document, int]:
    checks = manifest()
    doc = Document("manifest", {})
    doc.checks = [check_row(c) for c in checks]
    counts = {s: sum(c.status == s for c in checks) for s in (PASS, FAIL, ERRATUM)}
    doc.extra.append(f"{counts[PASS]} passed, {counts[FAIL]} failed, {counts[ERRATUM]} recorded errata")
    return doc, EXIT_MISMATCH if counts[FAIL] else EXIT_OK


# --- argparse --------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # malformed input exits 1, not argparse's default 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _output_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true", help="JSON output (integers as decimal strings)")
    g.add_argument("--csv", action="store_true", help="CSV output")
    p.add_argument("--config", help="JSON or TOML job file with the same field names as the flags")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nielsen-iterates", description="Coincidence invariants of iterates.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", help="per-divisor table of R, N, NP, NPhi")
    c.add_argument("space", nargs="?", choices=["circle", "torus", "klein"])
    c.add_argument("--a", type=int, help="degree of f (circle)")
    c.add_argument("--b", type=int, help="degree of g (circle)")
    c.add_argument("--f", help='matrix "[[..],[..]]" (torus) or "q,r" (klein)')
    c.add_argument("--g", help='matrix "[[..],[..]]" (torus) or "q,r" (klein)')
    c.add_argument("--n", type=int, help="level")
    c.add_argument("--force-unsafe", action="store_true", help="print formula values whose hypotheses fail")
    c.add_argument("--oracle", action="store_true", help="also run the geometric oracle (circle)")
    _output_flags(c)

    y = sub.add_parser("cyclotomic", help="boost polynomial quotient for coprime k, m")
    y.add_argument("--k", type=int)
    y.add_argument("--m", type=int)
    _output_flags(y)

    o = sub.add_parser("oracle", help="geometric oracle against class counting (circle)")
    o.add_argument("space", nargs="?", choices=["circle"])
    o.add_argument("--a", type=int)
    o.add_argument("--b", type=int)
    o.add_argument("--n", type=int)
    _output_flags(o)

    v = sub.add_parser("verify-paper", help="rerun the regression manifest of worked-example values")
    _output_flags(v)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        job = job_from_args(args)
        if args.command == "compute":
            doc, code = cmd_compute(job)
        elif args.command == "cyclotomic":
            doc, code = cmd_cyclotomic(job)
        elif args.command == "oracle":
            doc, code = cmd_oracle(job)
        else:
            doc, code = cmd_verify_paper()
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (Refusal, PreconditionError, InfiniteReidemeisterError) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (LevelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    emit(doc, job.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
