"""Command-line driver: ``eisfamily {vand,forms,family} ...``.

Every report is deterministic JSON carrying the run configuration and the
overconvergence constants as exact rationals.  Exit codes: 0 success,
1 usage, 2 bound or assertion violation, 3 precision exhaustion.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .arith import DirichletCharacter
from .family import (
    FamilyTable,
    WeightCharacter,
    c_prop34,
    c_thmA,
    classical_ratio,
    counterexample,
    formal_hauptmodul,
    formal_katz,
    formal_w_expansion,
    hauptmodul_constant,
    rescaled_reduction,
    u_matrix_weight_kappa,
    verify_bound,
)
from .forms import (
    InsufficientPrecision,
    eisenstein_level1,
    eisenstein_star_character,
    eisenstein_star_classical,
    katz_decompose,
    katz_required_precision,
    miller_basis,
)
from .qexp import GENUS_ZERO_PRIMES
from .vand import PrecisionExhausted, f_bound, max_v_S, optimal_set

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_PRECISION = 0, 1, 2, 3
OUTPUT_ENV = "EISFAMILY_OUTPUT_DIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _frac(x: Fraction):
    return {"num": x.numerator, "den": x.denominator}


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


@dataclass
class RunConfig:
    p: int
    q_precision: Optional[int] = None
    w_degree: Optional[int] = None
    padic_precision: Optional[int] = None
    katz_depth: Optional[int] = None
    output: Optional[str] = None
    format: str = "json"
    seed: int = 0

    def validate(self):
        if self.p < 5 or any(self.p % d == 0 for d in range(2, int(self.p**0.5) + 1)):
            raise UsageError(f"p={self.p} must be a prime >= 5")
        for name in ("q_precision", "w_degree", "padic_precision"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise UsageError(f"{name} must be >= 1, got {v}")
        if self.katz_depth is not None and self.katz_depth < 0:
            raise UsageError("katz_depth must be >= 0")
        if self.format not in ("json", "csv"):
            raise UsageError("format must be json or csv")
        return self


def constants(p: int):
    out = {"c_thmA": _frac(c_thmA(p)), "d_thmA": _frac(hauptmodul_constant(p, c_thmA(p)))}
    if p in (5, 7):
        out["c_prop34"] = _frac(c_prop34(p))
        out["d_prop34"] = _frac(hauptmodul_constant(p, c_prop34(p)))
    return out


def _report(cfg: RunConfig, result) -> str:
    body = {"config": asdict(cfg), "constants": constants(cfg.p), "result": result}
    return json.dumps(body, sort_keys=True, indent=1)


def _emit(cfg: RunConfig, result, out_path: Optional[Path] = None):
    text = _report(cfg, result)
    if out_path is not None:
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(text + "\n")
    print(text)


def _out_path(name: Optional[str], default: str) -> Path:
    if name:
        return Path(name)
    return Path(os.environ.get(OUTPUT_ENV, ".")) / default


def load_character(path: str, p: int):
    """Read a character spec file; returns (k0, chi).

    Either ``{"p": 5, "k0": 4, "generators": [[7, 0], [6, 1]]}`` giving zeta
    exponents of generator images, or ``{"p": 5, "k0": 4, "exponent": 1}``
    for the character trivial on mu_{p-1} with chi(1+p) = zeta^exponent.
    """
    try:
        spec = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read character spec {path}: {exc}") from None
    if int(spec.get("p", p)) != p:
        raise UsageError(f"character spec is for p={spec['p']}, run is for p={p}")
    k0 = int(spec.get("k0", p - 1))
    try:
        if "generators" in spec:
            chi = DirichletCharacter.from_generators(p, [tuple(g) for g in spec["generators"]])
        elif "exponent" in spec:
            chi = DirichletCharacter.from_exponent(p, int(spec["exponent"]))
        else:
            raise UsageError("character spec needs 'generators' or 'exponent'")
    except ValueError as exc:
        raise UsageError(f"invalid character: {exc}") from None
    if chi.conductor != p * p:
        raise UsageError("character must have conductor p^2")
    return k0, chi


# ---------------------------------------------------------------------------
# vand


def cmd_vand_f(args):
    cfg = RunConfig(args.p).validate()
    if args.n < 1:
        raise UsageError("n must be >= 1")
    print(f_bound(cfg.p, args.n))
    return EXIT_OK


def cmd_vand_check(args):
    cfg = RunConfig(args.p, seed=args.seed).validate()
    p = cfg.p
    failures = []
    for n in range(1, args.max_n + 1):
        got, want = max_v_S(p, optimal_set(p, n).nodes), f_bound(p, n)
        if got != want:
            failures.append({"suite": "optimal", "n": n, "max_v": got, "f": want})
    rng = random.Random(cfg.seed)
    for _ in range(args.trials):
        size = rng.randint(1, args.max_size)
        units = set()
        while len(units) < size:
            x = rng.randrange(1, p**args.digits)
            if x % p:
                units.add(x)
        S = sorted(units)
        if max_v_S(p, S) < f_bound(p, size):
            failures.append({"suite": "random", "set": S})
    result = {"max_n": args.max_n, "trials": args.trials, "failures": failures, "ok": not failures}
    _emit(cfg, result)
    return EXIT_OK if not failures else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# forms


def cmd_forms_eis(args):
    cfg = RunConfig(args.p, q_precision=args.prec).validate()
    if args.k < 4 or args.k % 2:
        raise UsageError("k must be even and >= 4")
    _emit(cfg, {"k": args.k, "series": eisenstein_level1(args.k, args.prec).to_json()})
    return EXIT_OK


def cmd_forms_estar(args):
    cfg = RunConfig(args.p, q_precision=args.prec).validate()
    if args.char_spec:
        k0, chi = load_character(args.char_spec, cfg.p)
        series = eisenstein_star_character(cfg.p, k0, chi, args.prec)
        weight = {"k0": k0, "chi": chi.to_json()}
    else:
        if args.k is None:
            raise UsageError("give --k or --char-spec")
        try:
            series = eisenstein_star_classical(cfg.p, args.k, args.prec)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        weight = {"k": args.k}
    _emit(cfg, {"weight": weight, "series": series.to_json()})
    return EXIT_OK


def cmd_forms_miller(args):
    cfg = RunConfig(args.p).validate()
    block = miller_basis(cfg.p, args.i, args.prec)
    _emit(cfg, {"i": args.i, "start": block.start, "stop": block.stop,
                "forms": [g.to_json() for g in block.forms]})
    return EXIT_OK


def cmd_forms_katz(args):
    cfg = RunConfig(args.p, katz_depth=args.depth).validate()
    if args.k % (cfg.p - 1) or args.k < 4:
        raise UsageError(f"k must be a positive multiple of {cfg.p - 1}, >= 4")
    need = katz_required_precision(cfg.p, args.depth)
    cfg.q_precision = need
    exp = katz_decompose(cfg.p, classical_ratio(cfg.p, args.k, need), args.depth)
    _emit(cfg, {"k": args.k, "katz": exp.to_json()})
    return EXIT_OK


# ---------------------------------------------------------------------------
# family


def cmd_family_table(args):
    cfg = RunConfig(args.p, args.rows, args.wdeg, args.prec, args.depth,
                    format=args.format).validate()
    if cfg.p not in GENUS_ZERO_PRIMES and args.basis == "hauptmodul":
        raise UsageError(f"hauptmodul basis needs p in {GENUS_ZERO_PRIMES}")
    if args.basis == "katz" and args.depth is None:
        raise UsageError("--basis katz needs --depth")
    table = formal_w_expansion(cfg.p, cfg.q_precision, cfg.w_degree, cfg.padic_precision,
                               workers=args.workers)
    if args.basis == "katz":
        table = formal_katz(table, cfg.katz_depth)
    elif args.basis == "hauptmodul":
        table = formal_hauptmodul(table, args.t_terms)
    if args.adjoin_counterexample:
        if cfg.p != 5:
            raise UsageError("the counterexample column is defined for p = 5")
        table = table.with_specialized(counterexample().column())
    out = _out_path(args.out, f"family_p{cfg.p}_N{cfg.q_precision}_J{cfg.w_degree}"
                              f"_M{cfg.padic_precision}_{table.basis}.json")
    cfg.output = str(out)
    body = {"config": asdict(cfg), "constants": constants(cfg.p), "table": table.to_json()}
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(body, sort_keys=True) + "\n")
    csv_path = out.with_suffix(".csv")
    csv_path.write_text(table.valuation_csv())
    if cfg.format == "csv":
        print(table.valuation_csv(), end="")
    else:
        print(json.dumps({"table": str(out), "valuations": str(csv_path), "rows": table.rows,
                          "w_degree": table.w_degree, "basis": table.basis}, sort_keys=True))
    return EXIT_OK


def cmd_family_verify(args):
    try:
        body = json.loads(Path(args.input).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read table {args.input}: {exc}") from None
    table = FamilyTable.from_json(body.get("table", body))
    cfg = RunConfig(**body["config"]) if "config" in body else RunConfig(table.p)
    try:
        rep = verify_bound(table, args.constant)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(cfg, rep.to_json(), Path(args.out) if args.out else None)
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_family_counterexample(args):
    cfg = RunConfig(args.p, q_precision=args.rows).validate()
    if cfg.p != 5:
        raise UsageError("the counterexample is defined for p = 5")
    rep = counterexample(cfg.p, args.rows, args.pi_prec)
    result = rep.to_json()
    line = f"v_5(a_10) = {rep.observed}"
    result["summary"] = line
    _emit(cfg, result)
    print(line)
    print(f"bound implied by c_p = 1: {rep.implied_bound}; refuted: {rep.refutes}")
    return EXIT_OK if rep.observed.exact and rep.observed.value == 1 and rep.refutes else EXIT_VIOLATION


def _weight(args, p: int) -> WeightCharacter:
    if args.char_spec:
        k0, chi = load_character(args.char_spec, p)
        return WeightCharacter.with_character(p, k0, chi)
    if args.weight is None:
        raise UsageError("give --weight K or --char-spec FILE")
    try:
        return WeightCharacter.classical(p, args.weight)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_family_umatrix(args):
    cfg = RunConfig(args.p, q_precision=args.p * args.size).validate()
    if cfg.p not in GENUS_ZERO_PRIMES:
        raise UsageError(f"p must be in {GENUS_ZERO_PRIMES}")
    kappa = _weight(args, cfg.p)
    try:
        mat = u_matrix_weight_kappa(kappa, args.r, args.size, slopes=args.slopes)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(cfg, mat.to_json())
    return EXIT_OK


def cmd_family_reduce(args):
    cfg = RunConfig(args.p, q_precision=args.n_max + 1).validate()
    if not args.char_spec:
        raise UsageError("reduce needs --char-spec")
    kappa = _weight(args, cfg.p)
    try:
        rep = rescaled_reduction(kappa, args.gamma, args.n_max)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(cfg, rep.to_json())
    return EXIT_OK if not rep.anomalies else EXIT_VIOLATION


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="eisfamily", description="Overconvergence experiments for the p-adic Eisenstein family.")
    top = ap.add_subparsers(dest="group", required=True, parser_class=_Parser)

    vand = top.add_parser("vand", help="inverse Vandermonde valuations").add_subparsers(dest="cmd", required=True)
    s = vand.add_parser("f", help="print f(n)")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_vand_f)
    s = vand.add_parser("check", help="optimal-set equality and random lower-bound suite")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--max-n", type=int, default=40)
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--max-size", type=int, default=12)
    s.add_argument("--digits", type=int, default=6, help="draw units below p^digits")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_vand_check)

    forms = top.add_parser("forms", help="Eisenstein series, Miller blocks, Katz expansions").add_subparsers(
        dest="cmd", required=True)
    s = forms.add_parser("eis", help="level-one E_k")
    s.add_argument("--p", type=int, default=5)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--prec", type=int, default=20)
    s.set_defaults(func=cmd_forms_eis)
    s = forms.add_parser("estar", help="E*_k, or E*_kappa for a character spec")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--k", type=int)
    s.add_argument("--char-spec")
    s.add_argument("--prec", type=int, default=20)
    s.set_defaults(func=cmd_forms_estar)
    s = forms.add_parser("miller", help="Miller block B_i")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--i", type=int, required=True)
    s.add_argument("--prec", type=int)
    s.set_defaults(func=cmd_forms_miller)
    s = forms.add_parser("katz", help="Katz expansion of E*_k / V(E*_k)")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--depth", type=int, required=True)
    s.set_defaults(func=cmd_forms_katz)

    fam = top.add_parser("family", help="two-variable family experiments").add_subparsers(dest="cmd", required=True)
    s = fam.add_parser("table", help="interpolate the family table")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--rows", type=int, required=True)
    s.add_argument("--wdeg", type=int, required=True)
    s.add_argument("--prec", type=int, required=True)
    s.add_argument("--basis", choices=("q", "katz", "hauptmodul"), default="q")
    s.add_argument("--depth", type=int, help="Katz depth I")
    s.add_argument("--t-terms", type=int, help="number of Hauptmodul coefficients")
    s.add_argument("--adjoin-counterexample", action="store_true")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--out")
    s.set_defaults(func=cmd_family_table)
    s = fam.add_parser("verify", help="check v(b_ij) >= c i - j on a saved table")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--constant", default="thmA", help="thmA, prop34 or a rational")
    s.add_argument("--out")
    s.set_defaults(func=cmd_family_verify)
    s = fam.add_parser("counterexample", help="t-expansion valuations at x^4 chi")
    s.add_argument("--p", type=int, default=5)
    s.add_argument("--rows", type=int, default=13)
    s.add_argument("--pi-prec", type=int, default=40)
    s.set_defaults(func=cmd_family_counterexample)
    s = fam.add_parser("umatrix", help="U_p matrix in the scaled Hauptmodul basis")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--size", type=int, required=True)
    s.add_argument("--weight", type=int)
    s.add_argument("--char-spec")
    s.add_argument("--r", type=_rational, default=Fraction(0))
    s.add_argument("--slopes", action="store_true")
    s.set_defaults(func=cmd_family_umatrix)
    s = fam.add_parser("reduce", help="rescaled reduction of the t-expansion")
    s.add_argument("--p", type=int, default=5)
    s.add_argument("--char-spec")
    s.add_argument("--weight", type=int)
    s.add_argument("--gamma", type=_rational)
    s.add_argument("--n-max", type=int, default=12)
    s.set_defaults(func=cmd_family_reduce)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"eisfamily: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PrecisionExhausted, InsufficientPrecision) as exc:
        stage = getattr(exc, "stage", "") or "q-expansion"
        print(json.dumps({"error": "precision_exhausted", "stage": stage, "message": str(exc)}, sort_keys=True))
        return EXIT_PRECISION


if __name__ == "__main__":
    sys.exit(main())
