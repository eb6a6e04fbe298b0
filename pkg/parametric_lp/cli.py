#   Copyright 2024 The parametric_lp authors
#
#   Licensed under the Apache License, Version 2.0 (the "License");
#   you may not use this file except in compliance with the License.
#   You may obtain a copy of the License at
#
#       http://www.apache.org/licenses/LICENSE-2.0
#
#   Unless required by applicable law or agreed to in writing, software
#   distributed under the License is distributed on an "AS IS" BASIS,
#   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#   See the License for the specific language governing permissions and
#   limitations under the License.

"""
Command line front end ``parlp``.

JSON goes to stdout, diagnostics to stderr. Exit codes: 0 optimal,
1 error, 2 infeasible, 3 unbounded, 4 not optimal where optimality is
required. The environment variable ``PARLP_ENUM_CAP`` overrides the
enumeration cap.
"""

import argparse
import json
import sys
from typing import List, Sequence

from parametric_lp import __version__
from parametric_lp.analysis.classify import classify
from parametric_lp.analysis.continuity import (DEFAULT_NS, probe_family,
                                               run_example1)
from parametric_lp.analysis.sensitivity import (default_theta_grid,
                                                ray_interval, verify_interval)
from parametric_lp.exceptions import NotOptimal, ParametricLPError
from parametric_lp.lp.linalg import as_rational
from parametric_lp.lp.problem import (ObjectiveRay, RhsRay, parse_family,
                                      parse_problem, parse_vector)
from parametric_lp.lp.solver import Status, solve_optimal, solve

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_UNBOUNDED = 3
EXIT_NOT_OPTIMAL = 4

_STATUS_EXIT = {Status.OPTIMAL: EXIT_OK,
                Status.INFEASIBLE: EXIT_INFEASIBLE,
                Status.UNBOUNDED: EXIT_UNBOUNDED}


class _ArgumentParser(argparse.ArgumentParser):
    """``ArgumentParser`` exiting with ``EXIT_ERROR`` on bad usage."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _ns(text: str) -> List[int]:
    try:
        Ns = [int(token) for token in text.split(",") if token.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}")
    if not Ns or any(N < 1 for N in Ns):
        raise argparse.ArgumentTypeError(f"N must be >= 1, got {text!r}")
    return Ns


def _thetas(text: str) -> list:
    try:
        return [as_rational(token) for token in text.split(",")]
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err))


def _read(path: str) -> str:
    with open(path) as f:
        return f.read()


def _emit(document) -> None:
    sys.stdout.write(json.dumps(document, separators=(",", ":")) + "\n")


def cmd_solve(args) -> int:
    outcome = solve(parse_problem(_read(args.problem)))
    _emit(outcome.to_dict())
    return _STATUS_EXIT[outcome.status]


def cmd_sensitivity(args) -> int:
    problem = parse_problem(_read(args.problem))
    if args.rhs is not None:
        ray = RhsRay(parse_vector(_read(args.rhs), "delta_b"))
    else:
        ray = ObjectiveRay(parse_vector(_read(args.obj), "delta_p"))
    bp = solve_optimal(problem).representative
    interval = ray_interval(problem, ray, bp)
    if interval.degenerate:
        print("warning: degenerate basis, the interval may collapse to one "
              "side of zero", file=sys.stderr)
    thetas = (default_theta_grid(interval) if args.theta_grid is None
              else args.theta_grid)
    verification = verify_interval(problem, ray, interval, thetas)
    _emit({"interval": interval.to_dict(),
           "basic_point": bp.to_dict(),
           "verification": verification.to_dict()})
    return EXIT_OK


def cmd_classify(args) -> int:
    classification = classify(parse_problem(_read(args.problem)))
    _emit(classification.to_dict())
    return _STATUS_EXIT[classification.status]


def _emit_report(report, csv: bool) -> None:
    if csv:
        sys.stdout.write(report.to_csv())
    else:
        _emit(report.to_dict())


def cmd_probe(args) -> int:
    report = probe_family(parse_family(_read(args.family)), args.N)
    _emit_report(report, args.csv)
    return EXIT_OK


def cmd_example1(args) -> int:
    _emit_report(run_example1(args.N), args.csv)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="parlp",
        description="Exact parametric linear programming: solve, range, "
                    "classify and probe continuity.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    solve_parser = commands.add_parser("solve", help="solve a problem")
    solve_parser.add_argument("problem", help="problem JSON file")
    solve_parser.set_defaults(func=cmd_solve)

    sens_parser = commands.add_parser(
        "sensitivity", help="range the representative optimal basis")
    sens_parser.add_argument("problem", help="problem JSON file")
    direction = sens_parser.add_mutually_exclusive_group(required=True)
    direction.add_argument("--rhs", help="JSON file with delta_b")
    direction.add_argument("--obj", help="JSON file with delta_p")
    sens_parser.add_argument("--theta-grid", type=_thetas, default=None,
                             help="comma separated rationals to re-solve at, "
                                  "default {lo, lo/2, 0, hi/2, hi}")
    sens_parser.set_defaults(func=cmd_sensitivity)

    classify_parser = commands.add_parser("classify",
                                          help="classify a problem")
    classify_parser.add_argument("problem", help="problem JSON file")
    classify_parser.set_defaults(func=cmd_classify)

    default_ns = ",".join(str(N) for N in DEFAULT_NS)
    probe_parser = commands.add_parser("probe",
                                       help="probe continuity of a family")
    probe_parser.add_argument("family", help="family JSON file")
    probe_parser.add_argument("--N", type=_ns, default=list(DEFAULT_NS),
                              help=f"comma separated N, default {default_ns}")
    probe_parser.add_argument("--csv", action="store_true",
                              help="one CSV row per N instead of JSON")
    probe_parser.set_defaults(func=cmd_probe)

    example_parser = commands.add_parser(
        "example1", help="reproduce the discontinuous example family")
    example_parser.add_argument("--N", type=_ns, default=list(DEFAULT_NS),
                                help=f"comma separated N, default "
                                     f"{default_ns}")
    example_parser.add_argument("--csv", action="store_true",
                                help="one CSV row per N instead of JSON")
    example_parser.set_defaults(func=cmd_example1)
    return parser


def main(argv: Sequence[str] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotOptimal as err:
        print(f"parlp: not optimal: {err}", file=sys.stderr)
        return EXIT_NOT_OPTIMAL
    except (ParametricLPError, ValueError, OSError) as err:
        print(f"parlp: error: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
