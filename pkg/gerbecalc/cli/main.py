import sys
import json
import time
import argparse
import logging
from gerbecalc.data.utils import dump_json_string, save_json_file
from gerbecalc.hyper.hyper import HyperParameter
from gerbecalc.cli.jobs import ENGINES, run_holonomy, run_validate, run_wzw, run_freeboson
from gerbecalc.cli.suite import corpus_suite, CRITERIA

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)

PARSE_ERRORS = (ValueError, KeyError, OSError, json.JSONDecodeError, TypeError)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gerbecalc", description="Surface holonomies of bundle gerbes, brane and "
                                                                   "bi-brane checks for WZW and free boson models.")
    parser.add_argument("--tol", required=False, type=float, default=None,
                        help="Override validator and spread tolerances.")
    parser.add_argument("--seed", required=False, type=int, default=None, help="Random seed.")
    parser.add_argument("--samples", required=False, type=int, default=None, help="Number of samples or variants.")
    parser.add_argument("--out", required=False, default=None, help="Filepath to write the json report to.")
    parser.add_argument("--config", required=False, default=None,
                        help="Filepath to a tolerance config file (.yaml or .json).")
    commands = parser.add_subparsers(dest="command")
    commands.required = True

    holonomy = commands.add_parser("holonomy", help="Holonomy of local data with gauge or lift spread.")
    holonomy.add_argument("--engine", required=False, choices=ENGINES, default="deligne")
    holonomy.add_argument("--data", required=True, help="Local data fixture.")

    validate = commands.add_parser("validate", help="Validate brane, bi-brane, cocycle or Jandl data.")
    kinds = validate.add_mutually_exclusive_group(required=True)
    for kind in ["bibrane", "dbrane", "cocycle", "jandl"]:
        kinds.add_argument("--%s" % kind, default=None, help="Fixture with %s data." % kind)

    wzw = commands.add_parser("wzw", help="SU(2) WZW brane arithmetic.")
    wzw.add_argument("action", choices=["fusion-table", "check-bounds", "validate-forms", "jandl-census"])
    wzw.add_argument("--k", "--level", dest="k", required=False, type=int, default=None, help="Level.")
    wzw.add_argument("--group", required=False, default=None, help="Group of the Jandl census.")

    freeboson = commands.add_parser("freeboson", help="Free boson defect fusion.")
    freeboson.add_argument("action", choices=["fuse"])
    freeboson.add_argument("--radius", required=True, type=float, help="Compactification radius.")
    freeboson.add_argument("--bibrane", required=True, help="Bi-brane as fractions 'u,a'.")
    freeboson.add_argument("--target", required=True, help="'d0:u', 'd1:a' or 'bibrane:u,a'.")

    suite = commands.add_parser("suite", help="Run the numerical checks on the fixture corpus.")
    suite.add_argument("--only", required=False, nargs="+", default=None, choices=[n for n, _ in CRITERIA],
                       help="Run only these criteria.")
    return parser


def run(args: dict) -> dict:
    """Dispatch parsed arguments to a job and return its json report."""
    hyper = HyperParameter(args["config"]).set_tolerance(args["tol"])
    seed, samples = args["seed"], args["samples"]
    command = args["command"]
    if command == "holonomy":
        return run_holonomy(args["data"], engine=args["engine"], hyper=hyper, seed=seed, samples=samples)
    if command == "validate":
        kind = [k for k in ["bibrane", "dbrane", "cocycle", "jandl"] if args[k] is not None][0]
        return run_validate(kind, args[kind], hyper=hyper, seed=seed, samples=samples)
    if command == "wzw":
        return run_wzw(args["action"], k=args["k"], hyper=hyper, seed=seed, samples=samples, group=args["group"])
    if command == "freeboson":
        return run_freeboson(args["radius"], args["bibrane"], args["target"], hyper=hyper)
    if command == "suite":
        return corpus_suite(hyper, seed=seed, samples=samples, criteria=args["only"])
    raise ValueError("Unknown command '%s'." % command)


def main(argv: list = None) -> int:
    """Entry point of the `gerbecalc` command. Returns 0 on success, 1 for a failing report and 2 for invalid input.
    """
    args = vars(make_parser().parse_args(argv))
    start = time.time()
    try:
        report = run(args)
        if args["out"] is not None:
            save_json_file(report, args["out"])
    except PARSE_ERRORS as e:
        print("Error: %s" % e, file=sys.stderr)
        return 2
    module_logger.info("Command '%s' finished in %.2f s." % (args["command"], time.time() - start))
    print(dump_json_string(report))
    return 0 if report.get("passed", True) else 1


if __name__ == "__main__":
    sys.exit(main())
