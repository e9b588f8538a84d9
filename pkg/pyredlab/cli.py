"""Command line interface ``redlab``.

Subcommands::

    redlab stability <config> [--lambda L]
    redlab simulate <config> [--seed N] [--busy-periods N] [--lambda L]
    redlab trajectory <config> --horizon T [--out PATH] [--format F]
    redlab fluid <config> [--out PATH] [--format F]
    redlab table {2,3,4} [--out PATH]
    redlab sweep <config> [--out PATH]

JSON goes to stdout, CSV to stdout or ``--out``. Trajectories can also be
saved as json or pickle with ``--format``; the suffix of ``--out`` is then
replaced by the format's own. The exit code is 0 on success, 1 on
configuration errors and 2 on runtime errors.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

#
# Imports
#

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .config_file import ConfigFile
from .errors import ConfigurationError, RedlabError
from .experiments import (TABLE_COLUMNS, reproduce_table, sweep_mean_jobs,
                          write_csv, write_manifest)
from .fluid import server_mass, ub_drain_schedule
from .runners import run, run_trajectory
from .stability import analyze
from .util import rounded


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2

SAVE_FORMATS = ("csv", "json", "pickle")


def _print_json(obj):
    json.dump(rounded(obj), sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _write_table(table, out):
    """TrajectoryDictionary to ``out`` or stdout"""
    if out is None:
        table.to_csv(sys.stdout)
        return
    with open(out, "w", newline="") as csv_file:
        table.to_csv(csv_file)
    logger.info("wrote %d rows to %s", table.num_rows, out)


def _command_stability(args):
    config = ConfigFile.load(args.config)
    if config.topology is None:
        raise ConfigurationError("missing key", field="topology")
    service = config.sim.service if config.sim is not None else None
    _print_json(analyze(config.topology, service, args.lam).to_dict())


def _command_simulate(args):
    config = ConfigFile.load(args.config).sim_config(
        seed=args.seed, busy_periods=args.busy_periods, lam=args.lam)
    result = run(config)
    if result.diverged:
        logger.warning("run hit max_events=%d, reporting a lower bound",
                       config.max_events)
    _print_json(result.to_dict())


def _save(saveable, out, data_type):
    """json or pickle file next to ``out`` through ``saveable.save``"""
    if out is None:
        raise ConfigurationError("{} output needs --out".format(data_type),
                                 field="--format")
    out = Path(out)
    saved = saveable.save(filename=out.stem, path=out.parent,
                          data_type=data_type)
    logger.info("wrote %s", saved)


def _command_trajectory(args):
    if not args.horizon > 0:
        raise ConfigurationError("must be positive", field="--horizon")
    config = ConfigFile.load(args.config).sim_config(seed=args.seed,
                                                     lam=args.lam)
    result = run_trajectory(config, args.horizon)
    if args.format == "csv":
        _write_table(result.trajectory, args.out)
    else:
        _save(result.trajectory, args.out, args.format)


def _command_fluid(args):
    config = ConfigFile.load(args.config)
    if config.fluid is None:
        raise ConfigurationError("missing block", field="fluid")
    topology = config.topology
    if args.lam is not None:
        topology = topology.with_arrival_rate(args.lam)
    block = config.fluid
    if block.initial_mass is not None:
        masses = block.initial_mass
    else:
        masses = server_mass(topology, block.initial_types)
    trajectory = ub_drain_schedule(topology, masses, block.horizon)
    if args.format == "csv":
        _write_table(trajectory.to_trajectory_dictionary(), args.out)
    else:
        _save(trajectory, args.out, args.format)
    if args.out is not None:
        out = Path(args.out)
        events_path = out.with_name(out.stem + ".events.json")
        with open(events_path, "w") as events_file:
            json.dump(rounded({
                "events": [event.to_dict()
                           for event in trajectory.drain_events],
                "stalled_stage": trajectory.stalled_stage,
            }), events_file, indent=2, sort_keys=True)


def _command_table(args):
    rows = reproduce_table(args.table)
    columns = TABLE_COLUMNS[args.table]
    if args.out is None:
        write_csv(rows, stream=sys.stdout, columns=columns)
    else:
        write_csv(rows, path=args.out, columns=columns)


def _command_sweep(args):
    config = ConfigFile.load(args.config)
    if config.sweep is None:
        raise ConfigurationError("missing block", field="sweep")
    spec = config.sweep
    changes = {key: value for key, value in (
        ("seed", args.seed), ("busy_periods", args.busy_periods))
        if value is not None}
    if changes:
        spec = dataclasses.replace(spec, **changes)
    rows = sweep_mean_jobs(spec, threads=args.threads)
    if args.out is None:
        write_csv(rows, stream=sys.stdout)
        return
    write_csv(rows, path=args.out)
    out = Path(args.out)
    write_manifest(out.with_name(out.stem + ".manifest.json"), spec,
                   __version__, rows)


COMMANDS = {
    "stability": _command_stability,
    "simulate": _command_simulate,
    "trajectory": _command_trajectory,
    "fluid": _command_fluid,
    "table": _command_table,
    "sweep": _command_sweep,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="redlab",
        description="Stability regions and simulation of redundancy "
                    "systems.")
    parser.add_argument("--version", action="version",
                        version="%(prog)s " + __version__)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="count", default=0,
                           help="more logging (repeat for debug)")
    verbosity.add_argument("-q", "--quiet", action="store_true",
                           help="errors only")
    commands = parser.add_subparsers(dest="command", required=True)

    def config_command(name, help_text):
        command = commands.add_parser(name, help=help_text)
        command.add_argument("config", help="JSON config file")
        command.add_argument("--lambda", dest="lam", type=float,
                             help="override the arrival rate")
        return command

    config_command("stability", "print the stability report")
    simulate = config_command("simulate", "simulate and print the result")
    trajectory = config_command("trajectory",
                                "write the per-server copy counts")
    trajectory.add_argument("--horizon", type=float, required=True)
    fluid = config_command("fluid", "write the upper-bound fluid limit")
    sweep = commands.add_parser("sweep", help="write a mean-jobs sweep")
    sweep.add_argument("config", help="JSON config file")
    sweep.add_argument("--threads", type=int,
                       help="worker processes (default REDLAB_THREADS)")
    table = commands.add_parser("table", help="write a stability table")
    table.add_argument("table", type=int, choices=sorted(TABLE_COLUMNS))

    for command in (simulate, trajectory, sweep):
        command.add_argument("--seed", type=int)
    for command in (simulate, sweep):
        command.add_argument("--busy-periods", dest="busy_periods",
                             type=int)
    for command in (trajectory, fluid, table, sweep):
        command.add_argument("--out", help="output CSV (default stdout)")
    for command in (trajectory, fluid):
        command.add_argument("--format", choices=SAVE_FORMATS, default="csv",
                             help="file format of the trajectory")
    return parser


def _configure_logging(args):
    if args.quiet:
        level = logging.ERROR
    else:
        level = (logging.WARNING, logging.INFO,
                 logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def _fail(code, message):
    sys.stderr.write("redlab: error: {}\n".format(
        " ".join(str(message).split())))
    return code


def main(argv=None):
    """Run the command line and return the exit code."""
    args = build_parser().parse_args(argv)
    _configure_logging(args)
    try:
        COMMANDS[args.command](args)
    except ConfigurationError as error:
        return _fail(EXIT_CONFIG, error)
    except json.JSONDecodeError as error:
        return _fail(EXIT_CONFIG, "malformed JSON: {}".format(error))
    except OSError as error:
        return _fail(EXIT_CONFIG, "{}: {}".format(
            error.filename or "", error.strerror or error))
    except RedlabError as error:
        return _fail(EXIT_RUNTIME, error)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
