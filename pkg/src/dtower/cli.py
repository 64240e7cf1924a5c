"""Command-line interface.

Operators are written in the inline expression syntax of the parser
(x, Dx, theta, integers, + - * / ^, parentheses); an argument of the
form @path reads the expression from a file.  Exit codes: 0 success,
1 mathematical "not found", 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .diffop import (DiffOperator, OperatorSyntaxError, adjoint, left_divide,
                     op_mul, parse_operator, parse_ratfunc, right_divide)
from .qx import Poly, RatFunc


class CliError(Exception):
    def __init__(self, message, code=2):
        super().__init__(message)
        self.code = code


def _read_arg(text: str) -> str:
    if text.startswith("@"):
        try:
            with open(text[1:]) as fh:
                return fh.read().strip()
        except OSError as e:
            raise CliError(f"cannot read {text[1:]}: {e}")
    return text


def _op(text: str) -> DiffOperator:
    try:
        return parse_operator(_read_arg(text))
    except OperatorSyntaxError as e:
        raise CliError(f"operator parse error: {e}")


def _rf(text: str) -> RatFunc:
    try:
        return parse_ratfunc(_read_arg(text))
    except OperatorSyntaxError as e:
        raise CliError(f"expression parse error: {e}")


def _poly(text: str) -> Poly:
    rf = _rf(text)
    if rf.den.degree != 0:
        raise CliError("polynomial expected")
    return rf.num / rf.den[0]


def _read_decomposition(path: str):
    """Decomposition file: 'r: <expr>' plus 'U1: ...', 'U2: ...' lines.

    The document printed by `build` and `extract` is itself readable.
    """
    from .tower import Decomposition
    r = None
    units = {}
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e}")
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if not line or ":" not in line:
            continue
        key, _, val = line.partition(":")
        key = key.strip()
        val = val.strip()
        if key == "r":
            r = _rf(val)
        elif key.startswith("U") and key[1:].isdigit():
            units[int(key[1:])] = _op(val)
    if r is None or not units:
        raise CliError(f"{path}: need an 'r:' line and at least one 'U<i>:' line")
    ordered = [units[i] for i in sorted(units)]
    if sorted(units) != list(range(1, len(units) + 1)):
        raise CliError(f"{path}: unit indices must be 1..n without gaps")
    try:
        return Decomposition(units=tuple(ordered), r=r)
    except ValueError as e:
        raise CliError(str(e))


def _load_series(path: str):
    from .diagonal import read_series_file
    try:
        return read_series_file(path)
    except (OSError, ValueError) as e:
        raise CliError(f"cannot read series {path}: {e}")


def cmd_adjoint(args):
    print(adjoint(_op(args.operator)))
    return 0


def cmd_mul(args):
    print(op_mul(_op(args.left), _op(args.right)))
    return 0


def cmd_divide(args):
    A, B = _op(args.left), _op(args.right)
    try:
        if args.side == "right":
            Q, R = right_divide(A, B)
        else:
            Q, R = left_divide(A, B)
    except (ValueError, ZeroDivisionError) as e:
        raise CliError(str(e))
    print(f"quotient: {Q}")
    print(f"remainder: {R}")
    return 0


def cmd_selfadjoint(args):
    from .selfadjoint import random_self_adjoint
    print(random_self_adjoint(args.order, args.degree, args.seed))
    return 0


def cmd_build(args):
    from .tower import build, decomposition_document
    dec = _read_decomposition(args.decomposition)
    trace = build(dec)
    print(decomposition_document(dec, trace))
    return 0


def cmd_extract(args):
    from .tower import (InvalidIntertwinerError, ReducibleTowerError,
                        decomposition_document, extract)
    try:
        dec, trace = extract(_op(args.operator), _op(args.intertwiner))
    except (InvalidIntertwinerError, ReducibleTowerError) as e:
        print(f"extraction failed: {e}", file=sys.stderr)
        return 1
    print(decomposition_document(dec, trace))
    return 0


def cmd_intertwine(args):
    from .homomorphisms import AnsatzBounds, intertwiner_search
    den = _poly(args.den) if args.den else None
    bounds = AnsatzBounds(args.order, args.deg, den)
    found = intertwiner_search(_op(args.operator), bounds)
    if not found:
        print("no intertwiner within bounds", file=sys.stderr)
        return 1
    for X in found:
        print(X)
    return 0


def cmd_transform(args):
    from .homomorphisms import transform_solutions
    try:
        Ltilde, cofactor = transform_solutions(_op(args.operator), _op(args.by))
    except (ValueError, ArithmeticError) as e:
        raise CliError(str(e))
    print(f"transformed: {Ltilde}")
    print(f"cofactor: {cofactor}")
    return 0


def cmd_sympow(args):
    from .systems import DimensionCapError, sym_power, sym_square
    try:
        if args.m == 2:
            op, full, drop = sym_square(_op(args.operator))
            print(f"operator: {op}")
            print(f"order: {op.order}")
            print(f"full_dimension: {full}")
            print(f"drop: {str(drop).lower()}")
        else:
            op = sym_power(_op(args.operator), args.m)
            print(f"operator: {op}")
            print(f"order: {op.order}")
    except (ValueError, DimensionCapError) as e:
        raise CliError(str(e))
    return 0


def cmd_extpow(args):
    from .systems import DimensionCapError, ext_square
    try:
        op, full, drop = ext_square(_op(args.operator))
    except (ValueError, DimensionCapError) as e:
        raise CliError(str(e))
    print(f"operator: {op}")
    print(f"order: {op.order}")
    print(f"full_dimension: {full}")
    print(f"drop: {str(drop).lower()}")
    return 0


def cmd_ratsols(args):
    from .ratsol import SolutionBounds, rational_solutions
    L = _op(args.operator)
    bounds = None
    if args.num_deg is not None or args.den is not None:
        if args.num_deg is None or args.den is None:
            raise CliError("--num-deg and --den must be given together")
        bounds = SolutionBounds(args.num_deg, _poly(args.den))
    try:
        result = rational_solutions(L, bounds)
    except ValueError as e:
        raise CliError(str(e))
    if result.bounded_search:
        print("# bounded search with caller-supplied bounds")
    if not result.basis:
        print("no rational solutions within bounds", file=sys.stderr)
        return 1
    for y in result.basis:
        print(y)
    return 0


def cmd_diag(args):
    from .diagonal import (TrivariateRational, diag_series_expand,
                           diag_series_multinomial)
    if args.num or args.den:
        if not (args.num and args.den):
            raise CliError("--num and --den must be given together")
        try:
            R = TrivariateRational.parse(args.num.replace("^", "**"),
                                         args.den.replace("^", "**"))
        except (ValueError, SyntaxError) as e:
            raise CliError(f"cannot parse rational function: {e}")
    else:
        from .fixtures import load
        R = load("generic").payload
    fn = diag_series_expand if args.method == "expand" else diag_series_multinomial
    try:
        s = fn(R, args.terms)
    except ValueError as e:
        raise CliError(str(e))
    for c in s.coeffs:
        print(c)
    return 0


def cmd_guess(args):
    from .diagonal import guess_operator
    s = _load_series(args.series)
    try:
        L = guess_operator(s, args.order, args.deg, args.margin)
    except ValueError as e:
        raise CliError(str(e))
    if L is None:
        print("no operator within bounds", file=sys.stderr)
        return 1
    print(L)
    return 0


def cmd_classify(args):
    from .tower import classify_family
    dec = _read_decomposition(args.decomposition)
    print(classify_family(dec))
    return 0


def cmd_verify_identities(args):
    import random

    from .selfadjoint import random_self_adjoint
    from .tower import verify_identity_suite
    rng = random.Random(args.seed)
    all_ok = True
    for t in range(args.n_random):
        order = 1 if t % 2 == 0 else 2
        ops = [random_self_adjoint(order, 1, rng.randrange(1 << 30))
               for _ in range(4)]
        r = RatFunc(Poly([Fraction(rng.randint(1, 5)), Fraction(rng.randint(1, 3))]))
        results = verify_identity_suite(*ops, r)
        bad = [k for k, v in results.items() if not v]
        status = "ok" if not bad else "FAIL " + ",".join(bad)
        print(f"tuple {t}: order {order}: {status}")
        all_ok = all_ok and not bad
    return 0 if all_ok else 1


def _build_parser():
    p = argparse.ArgumentParser(
        prog="dtower",
        description="Exact arithmetic, decompositions and power constructions "
                    "for linear differential operators over Q(x).")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("adjoint", help="parity-signed adjoint of an operator")
    q.add_argument("operator")
    q.set_defaults(fn=cmd_adjoint)

    q = sub.add_parser("mul", help="operator product (left * right)")
    q.add_argument("left")
    q.add_argument("right")
    q.set_defaults(fn=cmd_mul)

    q = sub.add_parser("divide", help="euclidean division")
    q.add_argument("left")
    q.add_argument("right")
    q.add_argument("--side", choices=("right", "left"), default="right")
    q.set_defaults(fn=cmd_divide)

    q = sub.add_parser("selfadjoint", help="deterministic random self-adjoint operator")
    q.add_argument("--order", type=int, required=True)
    q.add_argument("--seed", type=int, required=True)
    q.add_argument("--degree", type=int, default=2)
    q.set_defaults(fn=cmd_selfadjoint)

    q = sub.add_parser("build", help="build the operator of a decomposition file")
    q.add_argument("decomposition")
    q.set_defaults(fn=cmd_build)

    q = sub.add_parser("extract", help="recover a decomposition from operator + intertwiner")
    q.add_argument("operator")
    q.add_argument("intertwiner")
    q.set_defaults(fn=cmd_extract)

    q = sub.add_parser("intertwine", help="bounded search for intertwiners")
    q.add_argument("operator")
    q.add_argument("--order", type=int, required=True)
    q.add_argument("--deg", type=int, required=True)
    q.add_argument("--den", default=None, help="explicit polynomial denominator")
    q.set_defaults(fn=cmd_intertwine)

    q = sub.add_parser("transform", help="minimal annihilator of transformed solutions")
    q.add_argument("operator")
    q.add_argument("--by", required=True)
    q.set_defaults(fn=cmd_transform)

    q = sub.add_parser("sympow", help="symmetric power (reports drop for m=2)")
    q.add_argument("operator")
    q.add_argument("--m", type=int, default=2)
    q.set_defaults(fn=cmd_sympow)

    q = sub.add_parser("extpow", help="exterior square with drop report")
    q.add_argument("operator")
    q.set_defaults(fn=cmd_extpow)

    q = sub.add_parser("ratsols", help="basis of rational solutions")
    q.add_argument("operator")
    q.add_argument("--num-deg", type=int, default=None)
    q.add_argument("--den", default=None)
    q.set_defaults(fn=cmd_ratsols)

    q = sub.add_parser("diag", help="diagonal of a trivariate rational function")
    q.add_argument("--method", choices=("expand", "multinomial"), default="expand")
    q.add_argument("--terms", type=int, required=True)
    q.add_argument("--num", default=None)
    q.add_argument("--den", default=None)
    q.set_defaults(fn=cmd_diag)

    q = sub.add_parser("guess", help="guess an annihilating operator from a series file")
    q.add_argument("series")
    q.add_argument("--order", type=int, required=True)
    q.add_argument("--deg", type=int, required=True)
    q.add_argument("--margin", type=int, default=20)
    q.set_defaults(fn=cmd_guess)

    q = sub.add_parser("classify", help="family and genericity of a decomposition file")
    q.add_argument("decomposition")
    q.set_defaults(fn=cmd_classify)

    q = sub.add_parser("verify-identities", help="run the operator identity suite")
    q.add_argument("--n-random", type=int, default=10)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(fn=cmd_verify_identities)

    return p


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except (ValueError, ArithmeticError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
