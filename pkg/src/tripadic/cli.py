"""Command-line driver.

Exit codes: 0 success, 2 invalid input, 3 precondition violation,
4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .arith import DEFAULT_PREC, MIN_PRIME, format_rational
from .characters import DirichletCharacter
from .errors import PreconditionError, StageError, TripadicError, VerificationError
from .serialize import decode_value, dumps, encode_value, write_atomic

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_VERIFICATION = 0, 2, 3, 4


class InputError(Exception):
    """Malformed command-line or file input."""


# --------------------------------------------------------------------------
# argument helpers

def _char(spec: str) -> DirichletCharacter:
    try:
        return DirichletCharacter.from_spec(spec)
    except PreconditionError as exc:
        raise InputError(str(exc)) from exc


def _ints(text: str, n: int | None = None):
    try:
        vals = [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise InputError(f"expected comma-separated integers, got {text!r}") from exc
    if n is not None and len(vals) != n:
        raise InputError(f"expected {n} integers, got {text!r}")
    return vals


def _matrix(text: str):
    try:
        return [[Fraction(x) for x in row.split(",")] for row in text.split(";")]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad matrix {text!r}") from exc


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _check_common(args):
    if getattr(args, "p", None) is not None and args.p < MIN_PRIME:
        raise PreconditionError(f"p must be >= {MIN_PRIME}")
    if getattr(args, "trunc", None) is not None and args.trunc < 1:
        raise InputError("--trunc must be >= 1")


def _form(name: str, k, trunc: int):
    from . import qseries as qs
    if name == "delta":
        return qs.delta_cusp(trunc)
    if name == "eisenstein":
        if k is None:
            raise InputError("--form eisenstein needs --k")
        return qs.eisenstein(k, trunc)
    if name == "e2":
        return qs.eisenstein_e2(trunc)
    raise InputError(f"unknown form {name!r}")


# --------------------------------------------------------------------------
# commands; each returns (document, csv rows or None, exit code)

def cmd_qexp(args):
    from . import qseries as qs
    f = qs.eisenstein(args.eisenstein, args.trunc) if args.eisenstein else _form(args.form, args.k, args.trunc)
    op = args.op
    if op == "theta":
        f = qs.ramanujan_theta(f)
    elif op == "serre":
        f = qs.serre_operator(f)
    elif op == "delta":
        f = qs.shimura_delta_iterate(f, f.weight, args.r or 1)
    elif op == "u":
        f = qs.atkin_u(f, args.p)
    elif op == "v":
        f = qs.v_operator(f, args.p)
    elif op == "twist":
        if not args.char:
            raise InputError("--op twist needs --char")
        f = qs.twist(f, _char(args.char[0]), args.p, args.prec)
    doc = f.to_json()
    rows = None
    if f.is_holomorphic():
        doc["coefficients"] = [encode_value(a) for a in f.coefficient_list()]
        rows = [["n", "a_n"]] + [[n, format_rational(a) if not hasattr(a, "to_json") else json.dumps(a.to_json())]
                                 for n, a in enumerate(f.coefficient_list())]
    return doc, rows, EXIT_OK


def cmd_stabilize(args):
    from . import qseries as qs
    f = _form(args.form, args.k, args.trunc)
    psi = _char(args.char[0]) if args.char else None
    f0, prm = qs.p_stabilize(f, args.p, psi=psi, choose=args.choose, prec=args.prec)
    s1, s2 = prm.slopes()
    doc = {"f0": f0.to_json(),
           "params": {"p": prm.p, "a_p": encode_value(prm.a_p), "c": encode_value(prm.c),
                      "alpha1": encode_value(prm.alpha1), "alpha2": encode_value(prm.alpha2),
                      "slopes": [None if s == float("inf") else s for s in (s1, s2)]}}
    return doc, None, EXIT_OK


def _parse_S(text: str):
    try:
        return [[int(x) for x in row.split(",")] for row in text.split(";")]
    except ValueError as exc:
        raise InputError(f"bad 2T matrix {text!r}") from exc


def cmd_siegel_coeff(args):
    from .siegel import HalfIntegralMatrix, siegel_eisenstein_coeff
    from .siegel_series import local_siegel_polynomial
    from .arith import prime_divisors
    try:
        T = HalfIntegralMatrix(_parse_S(args.S))
    except PreconditionError as exc:
        raise InputError(str(exc)) from exc
    psi = _char(args.char[0]) if args.char else None
    c = siegel_eisenstein_coeff(T, args.k, args.r or 0, psi, args.N)
    doc = {"S": [list(r) for r in T.S], "k": args.k, "r": args.r or 0, "s": encode_value(c.s),
           "P": [[list(m), encode_value(v)] for m, v in c.P.sorted_terms()]}
    if T.is_positive_definite() and T.m % 2:
        doc["local"] = {str(l): local_siegel_polynomial(T, l) for l in prime_divisors(T.det2())}
    return doc, None, EXIT_OK


def _siegel_input(args):
    from .siegel import SiegelExpansion, siegel_eisenstein
    if args.input:
        try:
            return SiegelExpansion.from_json(_load(args.input))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed Siegel expansion: {exc}") from exc
    if args.k is None:
        raise InputError("need --in or --k")
    return siegel_eisenstein(3, args.k, args.trace, args.r or 0)


def cmd_twist(args):
    from .siegel import boecherer_twist
    chars = [_char(c) for c in (args.char or [])]
    if len(chars) != 3:
        raise InputError("twist needs three --char options")
    F = _siegel_input(args)
    return boecherer_twist(F, *chars).to_json(), None, EXIT_OK


def cmd_pullback(args):
    from .siegel import ibukiyama_pullback
    if not args.weights:
        raise InputError("pullback needs --weights")
    k1, k2, k3 = _ints(args.weights, 3)
    F = _siegel_input(args)
    return ibukiyama_pullback(F, k1, k2, k3, args.r or 0).to_json(), None, EXIT_OK


def _model_for(form: str, k, p: int, trunc: int):
    from . import qseries as qs
    from .spectral import operator_matrix
    # U_p of the width-N basis is compared on q^0..q^N, N >= p
    width = max(trunc, p)
    if form == "delta":
        D = qs.delta_cusp(width * p)
        return operator_matrix([D, qs.v_operator(D, p)], lambda f: qs.atkin_u(f, p),
                               basis_labels=["delta", "delta|V"])
    if form == "eisenstein":
        if k is None:
            raise InputError("--form eisenstein needs --k")
        E = qs.eisenstein(k, width * p)
        E0, _ = qs.p_stabilize(E, p)
        return operator_matrix([E0], lambda f: qs.atkin_u(f, p), basis_labels=[f"E{k},0"])
    raise InputError(f"no built-in model for {form!r}")


def cmd_slopes(args):
    from .spectral import fredholm_det, newton_polygon_slopes
    if args.matrix:
        from .spectral import model_from_matrix
        M = model_from_matrix(_matrix(args.matrix))
    else:
        M = _model_for(args.form, args.k, args.p, args.trunc)
    P = fredholm_det(M)
    slopes = newton_polygon_slopes(P, args.p)
    doc = {"p": args.p, "fredholm": [encode_value(c) for c in P],
           "slopes": [format_rational(s) for s in slopes], "matrix": M.to_json()}
    rows = [["slope"]] + [[format_rational(s)] for s in slopes]
    return doc, rows, EXIT_OK


def cmd_project(args):
    from .spectral import lambda_projection
    if not args.matrix or args.lam is None:
        raise InputError("project needs --matrix and --lambda")
    try:
        lam = Fraction(args.lam)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad --lambda {args.lam!r}") from exc
    return lambda_projection(_matrix(args.matrix), lam).to_json(), None, EXIT_OK


def cmd_representative(args):
    from .qseries import QExpansion
    from .spectral import representative
    if not args.input:
        raise InputError("representative needs --in")
    d = _load(args.input)
    try:
        E = QExpansion.from_json(d["E"])
        primal = [QExpansion.from_json(x) for x in d["primal"]]
        idx = [int(n) for n in d["dual_indices"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed representative input: {exc}") from exc
    duals = [(lambda n: (lambda f: f.a(n)))(n) for n in idx]
    Et, coords = representative(E, duals, primal)
    return {"representative": Et.to_json(), "coords": [encode_value(c) for c in coords]}, None, EXIT_OK


def cmd_admissible(args):
    from .measures import admissibility_check, synthetic_binomial
    vs = list(range(1, args.vmax + 1))
    if args.input:
        from .measures import Distribution
        d = _load(args.input)
        try:
            Phis = [Distribution.from_json(x) for x in d["phis"]]
            U = [[decode_value(x) for x in row] for row in d["rows"]]
            alpha = decode_value(d["alpha"])
            kappa = int(d.get("kappa", args.kappa))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed measure data: {exc}") from exc
    else:
        p = args.p
        kappa = args.kappa
        alpha = Fraction(p)
        U = [[Fraction(p), Fraction(0)], [Fraction(0), Fraction(1)]]
        h = kappa + 1
        Phis = synthetic_binomial(p, vs, args.N, 2, h)
        if args.corrupt:
            r, v, a = _ints(args.corrupt, 3)
            try:
                old = Phis[r].levels[v][a]
            except (IndexError, KeyError):
                raise InputError(f"no synthetic value at r={r}, v={v}, a={a}") from None
            Phis[r].levels[v][a] = [old[0], old[1] + 1]
    rep = admissibility_check(Phis, kappa, alpha, U, vs)
    rows = [["t", "a", "v", "valuation", "required"]] + [list(f) for f in rep.failures]
    return rep.to_json(), rows, EXIT_OK if rep.passed else EXIT_VERIFICATION


def cmd_mellin(args):
    from .measures import Distribution, WeightCharacter, bernoulli_measure, mellin_eval
    if args.input:
        d = _load(args.input)
        try:
            mu = Distribution.from_json(d)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed measure data: {exc}") from exc
    else:
        mu = bernoulli_measure(args.p, args.c, range(1, args.v + 1), args.N)
    chi = _char(args.char[0]) if args.char else None
    x = WeightCharacter(args.k or 0, chi, mu.p, args.prec)
    val = mellin_eval([mu], x, args.v, 1, args.target)
    return {"value": encode_value(val), "k": x.k, "v": args.v}, None, EXIT_OK


def cmd_pipeline(args):
    from .pipeline import phi_r_pipeline
    from .spectral import FiniteRankModel
    from .triple import TripleExpansion
    if not args.weights or not args.model:
        raise InputError("pipeline needs --weights and --model")
    weights = _ints(args.weights, 3)
    d = _load(args.model)
    try:
        basis = [TripleExpansion.from_json(b) for b in d["basis"]]
        rows = [[decode_value(x) for x in row] for row in d["rows"]]
        lam = decode_value(d["lambda"])
        f0 = d.get("f0", 0)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed model: {exc}") from exc
    chars = [_char(c) for c in (args.char or [])]
    chi = chars[0] if chars else DirichletCharacter.trivial()
    psis = tuple(chars[1:4]) if len(chars) >= 4 else None
    M = FiniteRankModel(basis, rows, "U_T", d.get("basis_labels", []))
    res = phi_r_pipeline(args.r or 0, chi, weights, args.p, args.N, M, lam, f0, psis,
                         args.trace, args.v)
    doc = {"value": encode_value(res.value), "coords": [encode_value(c) for c in res.coords],
           "projected": [encode_value(c) for c in res.projected],
           "pullback": res.pullback.to_json()}
    return doc, None, EXIT_OK


COMMANDS = {
    "qexp": cmd_qexp, "stabilize": cmd_stabilize, "siegel-coeff": cmd_siegel_coeff,
    "twist": cmd_twist, "pullback": cmd_pullback, "slopes": cmd_slopes, "project": cmd_project,
    "representative": cmd_representative, "admissible-check": cmd_admissible,
    "mellin": cmd_mellin, "pipeline": cmd_pipeline,
}
TABLE_COMMANDS = {"qexp", "slopes", "admissible-check"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=7)
    common.add_argument("--N", type=int, default=1)
    common.add_argument("--prec", type=int, default=DEFAULT_PREC)
    common.add_argument("--trunc", type=int, default=20)
    common.add_argument("--weights")
    common.add_argument("--char", action="append")
    common.add_argument("--r", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--out")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    parser = argparse.ArgumentParser(prog="tripadic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    q = sub.add_parser("qexp", parents=[common])
    q.add_argument("--eisenstein", type=int)
    q.add_argument("--form", default="delta")
    q.add_argument("--op", choices=("none", "theta", "serre", "delta", "u", "v", "twist"), default="none")
    s = sub.add_parser("stabilize", parents=[common])
    s.add_argument("--form", default="delta")
    s.add_argument("--choose", type=int, default=0)
    c = sub.add_parser("siegel-coeff", parents=[common])
    c.add_argument("--S", required=True, help='2T rows, e.g. "2,1,1;1,2,1;1,1,2"')
    for name in ("twist", "pullback"):
        t = sub.add_parser(name, parents=[common])
        t.add_argument("--in", dest="input")
        t.add_argument("--trace", type=int, default=3)
    sl = sub.add_parser("slopes", parents=[common])
    sl.add_argument("--form", default="delta")
    sl.add_argument("--matrix")
    pr = sub.add_parser("project", parents=[common])
    pr.add_argument("--matrix")
    pr.add_argument("--lambda", dest="lam")
    rp = sub.add_parser("representative", parents=[common])
    rp.add_argument("--in", dest="input")
    ad = sub.add_parser("admissible-check", parents=[common])
    ad.add_argument("--in", dest="input")
    ad.add_argument("--kappa", type=int, default=2)
    ad.add_argument("--vmax", type=int, default=3)
    ad.add_argument("--corrupt", help="r,v,a: perturb one synthetic value")
    me = sub.add_parser("mellin", parents=[common])
    me.add_argument("--in", dest="input")
    me.add_argument("--v", type=int, default=2)
    me.add_argument("--c", type=int, default=2)
    me.add_argument("--target", type=int, help="required p-adic digits")
    pl = sub.add_parser("pipeline", parents=[common])
    pl.add_argument("--model")
    pl.add_argument("--trace", type=int, default=3)
    pl.add_argument("--v", type=int, default=1)
    return parser


def _render(doc, rows, fmt: str, command: str) -> str:
    if fmt == "csv":
        if command not in TABLE_COMMANDS or rows is None:
            raise InputError(f"{command} has no tabular output")
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        return buf.getvalue()
    return dumps(doc)


def run_command(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        _check_common(args)
        doc, rows, code = COMMANDS[args.command](args)
        text = _render(doc, rows, args.format, args.command)
    except InputError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except StageError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_VERIFICATION if isinstance(exc.error, VerificationError) else EXIT_PRECONDITION
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=stderr)
        return EXIT_VERIFICATION
    except (PreconditionError, TripadicError) as exc:
        print(f"precondition: {exc}", file=stderr)
        return EXIT_PRECONDITION
    if args.out:
        write_atomic(args.out, text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run_command())
