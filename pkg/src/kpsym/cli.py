"""Command-line front end.

Exit codes: 0 success/confirmed, 1 usage error, 2 mathematical mismatch.
Every flag can also be set through an environment variable ``KPSYM_<FLAG>``
(``--tol-u`` -> ``KPSYM_TOL_U``); explicit flags win.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Sequence

from . import autoinv, fusion, modular, search
from .weights import AlgebraSpec, check_weight, enumerate_weights

COMMANDS = ("weights", "smatrix", "tvector", "qdim", "fusion", "classify", "search", "verify", "galois")
ENV_PREFIX = "KPSYM_"


class UsageError(Exception):
    pass


class Mismatch(Exception):
    """A mathematical check failed; the message carries the finding."""

    def __init__(self, message: str, payload: str = ""):
        super().__init__(message)
        self.payload = payload


@dataclass(frozen=True)
class RunConfig:
    spec: AlgebraSpec
    command: str
    fmt: str | None
    tol_u: float
    tol_f: float
    bound: int
    out: str | None
    check: bool = False
    lam: str | None = None
    mu: str | None = None
    ell: int | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.fmt not in (None, "json", "csv", "text"):
            raise UsageError(f"unknown format {self.fmt!r}")
        if not self.tol_u > 0 or not self.tol_f > 0:
            raise UsageError("tolerances must be positive")
        if self.bound < 1:
            raise UsageError("--bound must be at least 1")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _env(name: str, default=None):
    return os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"), default)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--alg", default=_env("alg"), help="factors, e.g. a2 or a1,a1")
    common.add_argument("--level", default=_env("level"), help="levels, comma-aligned with --alg")
    common.add_argument("--format", dest="fmt", default=_env("format"), choices=("json", "csv", "text"))
    common.add_argument("--out", default=_env("out"), help="write output here instead of stdout")
    common.add_argument("--check", action="store_true", default=_env("check") in ("1", "true", "yes"))
    common.add_argument("--bound", type=int, default=int(_env("bound", search.DEFAULT_BOUND)))
    common.add_argument("--tol-u", type=float, default=float(_env("tol_u", modular.TOL_U)))
    common.add_argument("--tol-f", type=float, default=float(_env("tol_f", fusion.TOL_F)))
    parser = _Parser(prog="kpsym", description="Kac-Peterson modular data and automorphism invariants")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "fusion":
            p.add_argument("--lambda", dest="lam", default=None, help="weight as JSON, e.g. [[1,1]]")
            p.add_argument("--mu", default=None)
        if name == "galois":
            p.add_argument("--ell", type=int, default=None)
    return parser


def parse_config(argv: Sequence[str] | None = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    if not args.alg or not args.level:
        raise UsageError("--alg and --level are required")
    try:
        spec = AlgebraSpec.parse(args.alg, args.level)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return RunConfig(spec=spec, command=args.command, fmt=args.fmt, tol_u=args.tol_u,
                     tol_f=args.tol_f, bound=args.bound, out=args.out, check=args.check,
                     lam=getattr(args, "lam", None), mu=getattr(args, "mu", None),
                     ell=getattr(args, "ell", None))


# ---------------------------------------------------------------- formatting

def _num(x: float) -> float:
    return float(f"{x:.15g}") + 0.0


def _dump_json(obj) -> str:
    return json.dumps(obj) + "\n"


def _dump_csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _weight_json(w) -> list:
    return [list(lab) for lab in w]


def _parse_weight(spec: AlgebraSpec, text: str):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"cannot parse weight {text!r}: {exc}") from exc
    if raw and isinstance(raw[0], int):
        raw = [raw]
    try:
        return check_weight(spec, raw)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------- commands

def cmd_weights(cfg: RunConfig) -> str:
    table = enumerate_weights(cfg.spec)
    if cfg.fmt == "csv":
        return _dump_csv(["index", "weight"],
                         ([t, json.dumps(_weight_json(w))] for t, w in enumerate(table)))
    return _dump_json(table.to_json())


def cmd_smatrix(cfg: RunConfig) -> str:
    md = modular.modular_data(cfg.spec)
    if cfg.fmt == "csv":
        return _dump_csv([], ([f"{_num(z.real)!r}{_num(z.imag):+.15g}j" for z in row] for row in md.S))
    return _dump_json(modular.smatrix_json(md))


def cmd_tvector(cfg: RunConfig) -> str:
    md = modular.modular_data(cfg.spec)
    texp = modular.texp_strings(md)
    anomaly = [f"{x.numerator}/{x.denominator}" for x in md.anomaly]
    if cfg.fmt == "csv":
        return _dump_csv(["index", "texp", "anomaly"], zip(range(md.n), texp, anomaly))
    return _dump_json({"spec": cfg.spec.header(),
                       "weights": [_weight_json(w) for w in md.table],
                       "texp": texp, "anomaly": anomaly})


def cmd_qdim(cfg: RunConfig) -> str:
    md = modular.modular_data(cfg.spec)
    q = [_num(modular.q_dimension(md, w)) for w in md.table]
    if cfg.fmt == "csv":
        return _dump_csv(["index", "qdim"], ([t, repr(x)] for t, x in enumerate(q)))
    return _dump_json({"spec": cfg.spec.header(),
                       "weights": [_weight_json(w) for w in md.table], "qdim": q})


def cmd_fusion(cfg: RunConfig) -> str:
    spec = cfg.spec
    table = enumerate_weights(spec)
    lams = [table.index[_parse_weight(spec, cfg.lam)]] if cfg.lam else range(table.n)
    mus = [table.index[_parse_weight(spec, cfg.mu)]] if cfg.mu else range(table.n)
    ft = fusion.FusionTable(spec)
    entries = []
    for lam in lams:
        for mu in mus:
            for nu, c in sorted(ft.row(lam, mu).items()):
                entries.append({"lambda": _weight_json(table[lam]), "mu": _weight_json(table[mu]),
                                "nu": _weight_json(table[nu]), "N": c})
    if cfg.fmt == "csv":
        text = _dump_csv(["lambda", "mu", "nu", "N"],
                         ([json.dumps(e["lambda"]), json.dumps(e["mu"]), json.dumps(e["nu"]), e["N"]]
                          for e in entries))
    else:
        text = _dump_json(entries)
    if cfg.check:
        md = modular.modular_data(spec)
        S = md.S
        worst, count = 0.0, 0
        for lam in lams:
            for mu in mus:
                row = ft.row(lam, mu)
                vals = (S[lam] * S[mu] / S[0]) @ S.conj().T
                for nu in range(table.n):
                    worst = max(worst, abs(vals[nu] - row.get(nu, 0)))
                    count += 1
        msg = f"max |Verlinde - KacWalton| = {worst:.3e} over {count} triples"
        if worst > cfg.tol_f:
            raise Mismatch(msg + f" exceeds {cfg.tol_f}", text)
        print(msg, file=sys.stderr)
    return text


def _classified(cfg: RunConfig):
    return autoinv.classify(cfg.spec)


def cmd_classify(cfg: RunConfig) -> str:
    items = _classified(cfg)
    if cfg.fmt == "csv":
        return _dump_csv(["pi", "c", "a", "permutation"],
                         ([json.dumps(list(f.pi)), json.dumps(list(f.c)),
                           json.dumps([list(r) for r in f.a]), json.dumps(list(p))] for f, p in items))
    return _dump_json({"spec": cfg.spec.header(),
                       "invariants": [autoinv.invariant_json(cfg.spec, f, p) for f, p in items]})


def _run_search(cfg: RunConfig):
    md = modular.modular_data(cfg.spec)
    try:
        return search.search_all(md, bound=cfg.bound, tol=cfg.tol_u)
    except search.SearchBoundError as exc:
        raise UsageError(str(exc)) from exc


def cmd_search(cfg: RunConfig) -> str:
    found = _run_search(cfg)
    report = search.search_report(found, [p for _, p in _classified(cfg)])
    if cfg.fmt == "csv":
        return _dump_csv(["permutation"], ([json.dumps(list(p))] for p in found))
    payload = {"spec": cfg.spec.header(), "invariants": [list(p) for p in found],
               "report": _report_json(report)}
    text = _dump_json(payload)
    if not report["agree"]:
        raise Mismatch("search and classification disagree", text)
    return text


def _report_json(report: dict) -> dict:
    return {"agree": report["agree"], "search_count": report["search_count"],
            "classified_count": report["classified_count"],
            "unexplained": [list(p) for p in report["unexplained"]],
            "not_found": [list(p) for p in report["not_found"]]}


def cmd_verify(cfg: RunConfig) -> str:
    found = _run_search(cfg)
    report = search.search_report(found, [p for _, p in _classified(cfg)])
    problems = []
    if not report["agree"]:
        problems.append(f"{len(report['unexplained'])} unexplained, "
                        f"{len(report['not_found'])} not found")
    expected = None
    if cfg.spec.s == 1:
        r, k = cfg.spec.factors[0]
        expected = autoinv.closed_form_count(r, k)
        if expected != report["search_count"]:
            problems.append(f"count {report['search_count']} != 2^(c+p+t) = {expected}")
    n_inv = report["search_count"]
    msg = (f"{n_inv} invariants, classification confirmed" if not problems
           else f"{n_inv} invariants, MISMATCH: " + "; ".join(problems))
    if cfg.fmt in ("json", "csv"):
        payload = {"spec": cfg.spec.header(), "message": msg, "expected_count": expected,
                   "report": _report_json(report)}
        text = _dump_json(payload)
    else:
        text = msg + "\n"
    if problems:
        raise Mismatch(msg, text)
    return text


def cmd_galois(cfg: RunConfig) -> str:
    md = modular.modular_data(cfg.spec)
    M = modular.conductor(cfg.spec)
    if cfg.ell is not None:
        try:
            ga = modular.galois_action(md, cfg.ell)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        defect = modular.galois_defect(md, ga)
        text = _dump_json({"spec": cfg.spec.header(), "conductor": M, "ell": ga.ell,
                           "image": list(ga.image), "signs": list(ga.signs),
                           "defect": _num(defect)})
        worst = defect
    else:
        worst, checked = 0.0, 0
        for ell in range(1, M):
            if math.gcd(ell, M) == 1:
                worst = max(worst, modular.galois_defect(md, modular.galois_action(md, ell)))
                checked += 1
        text = _dump_json({"spec": cfg.spec.header(), "conductor": M, "checked": checked,
                           "max_defect": _num(worst)})
    if worst > cfg.tol_u:
        raise Mismatch(f"Galois identity defect {worst:.3e} exceeds {cfg.tol_u}", text)
    return text


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def _emit(cfg: RunConfig | None, text: str) -> None:
    if cfg is not None and cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    cfg = None
    try:
        try:
            cfg = parse_config(argv)
        except SystemExit as exc:  # argparse: --help or a usage error
            return exc.code if isinstance(exc.code, int) else 1
        _emit(cfg, HANDLERS[cfg.command](cfg))
        return 0
    except UsageError as exc:
        print(f"kpsym: error: {exc}", file=sys.stderr)
        return 1
    except Mismatch as exc:
        if exc.payload:
            _emit(cfg, exc.payload)
        print(f"kpsym: mismatch: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
