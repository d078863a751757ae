#!/usr/bin/env python
"""
Two-Point Expansions - command line front end

Subcommands:
    expand          two-point Taylor coefficients and the Cassini oval
    laurent         two-point Laurent coefficients and the Cassini annulus
    taylor-laurent  Taylor-Laurent coefficients and its region
    region          region parameters (JSON) or boundary samples (CSV)
    eval            partial sums against direct evaluation
    verify          the built-in invariant suite
    confluence      A/B coefficients at coincident points

JSON/CSV goes to standard output (or --out); diagnostics go to standard
error. Exit codes: 0 success, 1 usage error, 2 math-domain error,
3 verification failure.
"""

import argparse
import logging
import sys
from typing import Dict, List, Optional

import pandas as pd

from modules import contour_oracle, regions, settings, two_point_laurent, two_point_taylor, verification
from modules.console import Colors, print_colored
from modules.errors import TwoPointError, UsageError
from modules.expressions import FunctionModel, pretty
from modules.serialization import (
    complex_columns,
    parse_complex,
    parse_complex_list,
    parse_pole_list,
    to_json,
    write_csv,
    write_text,
)

logger = logging.getLogger('main')

FAMILIES = ('taylor', 'laurent', 'taylor-laurent')


class CommandLineParser(argparse.ArgumentParser):
    """ArgumentParser that exits with code 1 on usage errors (2 is reserved for math-domain errors)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print_colored(f"✗ {self.prog}: error: {message}", Colors.RED)
        sys.exit(UsageError.exit_code)


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except UsageError as e:
        raise argparse.ArgumentTypeError(str(e))


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _nonnegative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {value}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def build_parser() -> CommandLineParser:
    parser = CommandLineParser(prog='main.py', description='Two-point Taylor, Laurent and Taylor-Laurent expansions')
    parser.add_argument('--verbose', action='store_true', help='Log progress (INFO)')
    parser.add_argument('--debug', action='store_true', help='Log engine details (DEBUG)')
    sub = parser.add_subparsers(dest='command', parser_class=CommandLineParser)

    def common(p, points=True, order=True):
        p.add_argument('--function', required=True, help='Expression in z, e.g. "exp(z)/(z+1)"')
        if points:
            p.add_argument('--z1', type=_complex_arg, required=True, help='First expansion point (a+bi)')
            p.add_argument('--z2', type=_complex_arg, required=True, help='Second expansion point (a+bi)')
        if order:
            p.add_argument('--order', type=_positive_int, required=True, help='Number of terms N')
        p.add_argument('--poles', default=None, help='Override pole list "loc:order,loc:order"')
        p.add_argument('--format', choices=('json', 'csv'), default='json', help='Output format')
        p.add_argument('--out', default=None, help='Write output to this path instead of stdout')

    p = sub.add_parser('expand', help='Two-point Taylor expansion')
    common(p)
    p.add_argument('--verify', action='store_true', help='Compare every coefficient with its contour integral')

    p = sub.add_parser('laurent', help='Two-point Laurent expansion')
    common(p)
    p.add_argument('--m1', type=_nonnegative_int, default=None, help='Pole order bound at z1')
    p.add_argument('--m2', type=_nonnegative_int, default=None, help='Pole order bound at z2')
    p.add_argument('--inner-poles', default=None, help='Extra poles enclosed with z1, z2 (comma-separated)')
    p.add_argument('--verify', action='store_true', help='Compare every coefficient with its contour integral')

    p = sub.add_parser('taylor-laurent', help='Taylor-Laurent expansion (pole at z1, regular at z2)')
    common(p)
    p.add_argument('--m', type=_nonnegative_int, default=None, help='Pole order bound at z1')
    p.add_argument('--inner-poles', default=None, help='Extra poles enclosed with z1 (comma-separated)')
    p.add_argument('--verify', action='store_true', help='Compare every coefficient with its contour integral')

    p = sub.add_parser('region', help='Convergence region parameters or boundary samples')
    common(p, order=False)
    p.add_argument('--family', choices=FAMILIES, default='taylor')
    p.add_argument('--inner-poles', default=None, help='Inner poles for the Laurent families')
    p.add_argument('--count', type=_positive_int, default=256, help='Boundary samples per curve')

    p = sub.add_parser('eval', help='Partial sums against direct evaluation')
    common(p)
    p.add_argument('--family', choices=FAMILIES, default='taylor')
    p.add_argument('--points', required=True, help='Evaluation points (comma-separated)')
    p.add_argument('--m1', type=_nonnegative_int, default=None)
    p.add_argument('--m2', type=_nonnegative_int, default=None)
    p.add_argument('--m', type=_nonnegative_int, default=None)
    p.add_argument('--inner-poles', default=None, help='Extra poles enclosed with the expansion points')

    p = sub.add_parser('verify', help='Run the invariant suite')
    p.add_argument('--function', default=None, help='Single function (default: the built-in corpus)')
    p.add_argument('--z1', type=_complex_arg, default=complex(-1))
    p.add_argument('--z2', type=_complex_arg, default=complex(1))
    p.add_argument('--order', type=_positive_int, default=8)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--tol', type=_positive_float, default=None)
    p.add_argument('--count', type=_positive_int, default=20, help='Interior points per reconstruction check')
    p.add_argument('--format', choices=('json', 'csv'), default='json')
    p.add_argument('--out', default=None)

    p = sub.add_parser('confluence', help='A_n, B_n at z1 = z2 = z0')
    common(p, points=False)
    p.add_argument('--z0', type=_complex_arg, required=True)
    p.add_argument('--method', choices=('jets', 'contour'), default='jets')
    return parser


def load_function(args) -> FunctionModel:
    poles = parse_pole_list(args.poles) if getattr(args, 'poles', None) else None
    return FunctionModel.from_text(args.function, poles=poles)


def _header(command: str, f: FunctionModel, z1: complex, z2: complex) -> Dict:
    return {'command': command, 'function': f.text, 'normalized': pretty(f.expr), 'z1': z1, 'z2': z2}


def _emit(payload: Dict, args, frame: Optional[pd.DataFrame] = None):
    if args.format == 'csv':
        if frame is None:
            raise UsageError(f"{args.command} has no CSV output")
        write_csv(frame, args.out)
    else:
        write_text(to_json(payload), args.out)


def _verification_block(family: str, f, z1, z2, N, inner=None) -> Dict:
    if family != 'taylor' and contour_oracle.enclosed_poles(f, z1, z2, inner):
        # coefficients are already contour integrals; check the remainder identity instead
        rows = verification.reconstruction_errors(family, f, z1, z2, N, inner)
        worst = max(row['error'] for row in rows)
        return {'tolerance': settings.REMAINDER_CHECK_TOL, 'max_relative_error': worst,
                'passed': worst <= settings.REMAINDER_CHECK_TOL, 'reconstruction': rows}
    rows = verification.coefficient_errors(family, f, z1, z2, N, inner)
    errors = [e for row in rows for e in (row['fwd_error'], row['rev_error']) if e is not None]
    return {'tolerance': settings.VERIFY_TOL, 'max_relative_error': max(errors, default=0.0),
            'passed': all(e <= settings.VERIFY_TOL for e in errors), 'coefficients': rows}


def _finish_verification(payload: Dict) -> int:
    block = payload.get('verification')
    if block is not None and not block['passed']:
        print_colored("✗ Expansion disagrees with its contour integrals", Colors.RED)
        return 3
    if block is not None:
        print_colored("✓ Expansion matches its contour integrals", Colors.GREEN)
    return 0


def run_expand(args) -> int:
    f = load_function(args)
    e = two_point_taylor.expand(f, args.z1, args.z2, args.order)
    ab = two_point_taylor.to_ab(e)
    terms = [{'n': n, 'a_fwd': fwd, 'a_rev': rev, 'A': A, 'B': B}
             for n, ((fwd, rev), (A, B)) in enumerate(zip(e.pairs, ab.terms))]
    payload = _header('expand', f, e.z1, e.z2)
    payload['coefficients'] = {'order': e.N, 'terms': terms}
    payload['region'] = regions.taylor_region(f, e.z1, e.z2).to_dict()
    if args.verify:
        payload['verification'] = _verification_block('taylor', f, e.z1, e.z2, e.N)
    frame = pd.DataFrame({'n': range(e.N)})
    frame = complex_columns(frame, 'a_fwd', [p[0] for p in e.pairs])
    frame = complex_columns(frame, 'a_rev', [p[1] for p in e.pairs])
    _emit(payload, args, frame)
    return _finish_verification(payload)


def run_laurent(args) -> int:
    f = load_function(args)
    inner = parse_complex_list(args.inner_poles)
    spec = None
    if args.m1 is not None or args.m2 is not None:
        m1 = args.m1 if args.m1 is not None else f.pole_order_at(args.z1)
        m2 = args.m2 if args.m2 is not None else f.pole_order_at(args.z2)
        spec = two_point_laurent.PoleSpec(m1, m2)
    e = contour_oracle.laurent_with_inner_poles(f, args.z1, args.z2, spec, args.order, inner)
    terms = [{'n': n, 'b_fwd': b[0], 'b_rev': b[1], 'c_fwd': c[0], 'c_rev': c[1]}
             for n, (b, c) in enumerate(zip(e.b_pairs, e.c_pairs))]
    payload = _header('laurent', f, e.z1, e.z2)
    payload['coefficients'] = {'order': e.N, 'm1': e.spec.m1, 'm2': e.spec.m2, 'terms': terms}
    payload['region'] = regions.laurent_region(f, e.z1, e.z2, inner).to_dict()
    if args.verify:
        payload['verification'] = _verification_block('laurent', f, e.z1, e.z2, e.N, inner)
    frame = pd.DataFrame({'n': range(e.N)})
    for name, values in (('b_fwd', [b[0] for b in e.b_pairs]), ('b_rev', [b[1] for b in e.b_pairs]),
                         ('c_fwd', [c[0] for c in e.c_pairs]), ('c_rev', [c[1] for c in e.c_pairs])):
        frame = complex_columns(frame, name, values)
    _emit(payload, args, frame)
    return _finish_verification(payload)


def run_taylor_laurent(args) -> int:
    f = load_function(args)
    inner = parse_complex_list(args.inner_poles)
    e = contour_oracle.taylor_laurent_with_inner_poles(f, args.z1, args.z2, args.m, args.order, inner)
    terms = [{'n': n, 'd_fwd': d[0], 'd_rev': d[1], 'e': c}
             for n, (d, c) in enumerate(zip(e.d_pairs, e.e_terms))]
    payload = _header('taylor-laurent', f, e.z1, e.z2)
    payload['coefficients'] = {'order': e.N, 'm': e.m, 'terms': terms}
    payload['region'] = regions.taylor_laurent_region(f, e.z1, e.z2, inner).to_dict()
    if args.verify:
        payload['verification'] = _verification_block('taylor-laurent', f, e.z1, e.z2, e.N, inner)
    frame = pd.DataFrame({'n': range(e.N)})
    for name, values in (('d_fwd', [d[0] for d in e.d_pairs]), ('d_rev', [d[1] for d in e.d_pairs]),
                         ('e', list(e.e_terms))):
        frame = complex_columns(frame, name, values)
    _emit(payload, args, frame)
    return _finish_verification(payload)


def run_region(args) -> int:
    f = load_function(args)
    inner = parse_complex_list(args.inner_poles)
    region = regions.region_for(args.family, f, args.z1, args.z2, inner)
    payload = _header('region', f, complex(args.z1), complex(args.z2))
    payload['region'] = regions.describe(region)
    frame = regions.boundary_frame(region, args.count) if args.format == 'csv' else None
    _emit(payload, args, frame)
    return 0


def _partial_sum_function(args, f: FunctionModel):
    if args.family == 'taylor':
        e = two_point_taylor.expand(f, args.z1, args.z2, args.order)
        return lambda z: two_point_taylor.evaluate(e, z)
    inner = parse_complex_list(args.inner_poles)
    if args.family == 'laurent':
        spec = None
        if args.m1 is not None or args.m2 is not None:
            spec = two_point_laurent.PoleSpec(
                args.m1 if args.m1 is not None else f.pole_order_at(args.z1),
                args.m2 if args.m2 is not None else f.pole_order_at(args.z2))
        e = contour_oracle.laurent_with_inner_poles(f, args.z1, args.z2, spec, args.order, inner)
        return lambda z: two_point_laurent.evaluate_laurent(e, z)
    e = contour_oracle.taylor_laurent_with_inner_poles(f, args.z1, args.z2, args.m, args.order, inner)
    return lambda z: two_point_laurent.evaluate_tl(e, z)


def run_eval(args) -> int:
    f = load_function(args)
    points = parse_complex_list(args.points)
    if not points:
        raise UsageError("--points needs at least one point")
    partial = _partial_sum_function(args, f)
    rows: List[Dict] = []
    for z in points:
        s = partial(z)
        direct = f.evaluate(z)
        rows.append({'z': z, 'partial_sum': s, 'direct_value': direct, 'abs_error': abs(s - direct)})
    payload = _header('eval', f, complex(args.z1), complex(args.z2))
    payload['evaluations'] = rows
    frame = pd.DataFrame(index=range(len(rows)))
    frame = complex_columns(frame, 'z', [r['z'] for r in rows])
    frame = complex_columns(frame, 'partial_sum', [r['partial_sum'] for r in rows])
    frame = complex_columns(frame, 'direct_value', [r['direct_value'] for r in rows])
    frame['abs_error'] = [r['abs_error'] for r in rows]
    _emit(payload, args, frame)
    return 0


def run_verify(args) -> int:
    functions = [args.function] if args.function else None
    report = verification.run_suite(functions, args.z1, args.z2, args.order, args.seed, args.tol, args.count)
    payload = {
        'command': 'verify',
        'function': args.function if args.function else 'corpus',
        'z1': complex(args.z1),
        'z2': complex(args.z2),
        'verification': report.to_dict(),
    }
    _emit(payload, args, report.to_frame())
    if report.ok:
        print_colored(f"✓ {report.passed} checks passed", Colors.GREEN)
        return 0
    print_colored(f"✗ {report.failed} of {len(report.results)} checks failed", Colors.RED)
    for r in report.results:
        if not r.passed:
            print_colored(f"  - {r.function} [{r.family}] {r.check}: {r.detail or r.max_error}", Colors.RED)
    return 3


def run_confluence(args) -> int:
    f = load_function(args)
    ab = two_point_taylor.ab_confluent(f, args.z0, args.order, method=args.method)
    payload = _header('confluence', f, ab.z1, ab.z2)
    payload['coefficients'] = {'order': ab.N, 'method': args.method,
                               'terms': [{'n': n, 'A': A, 'B': B} for n, (A, B) in enumerate(ab.terms)]}
    frame = pd.DataFrame({'n': range(ab.N)})
    frame = complex_columns(frame, 'A', [t[0] for t in ab.terms])
    frame = complex_columns(frame, 'B', [t[1] for t in ab.terms])
    _emit(payload, args, frame)
    return 0


COMMANDS = {
    'expand': run_expand,
    'laurent': run_laurent,
    'taylor-laurent': run_taylor_laurent,
    'region': run_region,
    'eval': run_eval,
    'verify': run_verify,
    'confluence': run_confluence,
}


def configure_logging(args):
    level = settings.LOG_LEVEL
    if args.verbose:
        level = 'INFO'
    if args.debug:
        level = 'DEBUG'
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help(sys.stderr)
        return UsageError.exit_code
    configure_logging(args)
    try:
        return COMMANDS[args.command](args)
    except TwoPointError as e:
        print_colored(f"✗ {type(e).__name__}: {e}", Colors.RED)
        return e.exit_code
    except OSError as e:
        print_colored(f"✗ Could not write output: {e}", Colors.RED)
        return 1
    except Exception as e:
        logger.exception("Unexpected error")
        print_colored(f"✗ Unexpected error: {e}", Colors.RED)
        return 1


if __name__ == "__main__":
    sys.exit(main())
