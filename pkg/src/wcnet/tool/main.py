import argparse
import logging
import sys
import traceback
from typing import List, Optional

from dotenv import load_dotenv
from wai.logging import init_logging, set_logging_level, add_logging_level

from wcnet.api import ConfigError, DataError, StageError, resolve_config, validate_config, run_pipeline, \
    config_params, params_to_parser, MODE_RUN, MODE_STATS, MODE_THRESHOLD, MANIFEST_FILE
from wcnet.core import ENV_WCNET_LOGLEVEL, EXIT_OK, EXIT_INTERNAL, EXIT_CONFIG, EXIT_DATA

WCNET = "wcnet"

COMMAND_RUN = "run"
COMMAND_VALIDATE = "validate"
COMMAND_STATS = "stats"
COMMAND_THRESHOLD = "threshold"

_logger = None


def logger() -> logging.Logger:
    """
    Returns the logger instance to use, initializes it if necessary.

    :return: the logger instance
    :rtype: logging.Logger
    """
    global _logger
    if _logger is None:
        _logger = logging.getLogger(WCNET)
    return _logger


def _create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=WCNET,
        description="Wavelet-coherence networks: builds clustered, directed networks of assets from the "
                    "band-averaged wavelet coherence of their log-returns.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands = [
        (COMMAND_RUN, "Runs the complete analysis for the full sample and all sub-periods."),
        (COMMAND_VALIDATE, "Checks the configuration and outputs all problems found."),
        (COMMAND_STATS, "Computes only the descriptive statistics and correlations."),
        (COMMAND_THRESHOLD, "Computes only the noise coherence thresholds."),
    ]
    for name, help_ in commands:
        cmd = sub.add_parser(name, help=help_, description=help_)
        cmd.add_argument("-c", "--config", metavar="FILE", help="The YAML configuration to load; flags override its values.", default=None, required=False)
        cmd.add_argument("--dotenv_path", metavar="FILE", help="The .env file with environment overrides, tries .env in the current directory if omitted.", default=None, required=False)
        add_logging_level(parser=cmd)
        params_to_parser(cmd, config_params())
    return parser


def _report(diagnostics: List[str]):
    for diagnostic in diagnostics:
        print("- %s" % diagnostic, file=sys.stderr)


def main(args: Optional[List[str]] = None) -> int:
    """
    Parses the command-line and executes the command.

    :param args: the command-line arguments, uses sys.argv if None
    :type args: list
    :return: the exit code
    :rtype: int
    """
    init_logging(env_var=ENV_WCNET_LOGLEVEL)
    parser = _create_parser()
    parsed = parser.parse_args(args=args)
    if parsed.command is None:
        parser.print_help()
        return EXIT_CONFIG
    set_logging_level(logger(), parsed.logging_level)

    if parsed.dotenv_path is None:
        load_dotenv()
    else:
        load_dotenv(dotenv_path=parsed.dotenv_path)

    try:
        config = resolve_config(parsed.config, parsed)
    except ConfigError as e:
        print(str(e), file=sys.stderr)
        _report(e.diagnostics)
        return EXIT_CONFIG

    if parsed.command == COMMAND_VALIDATE:
        diagnostics = validate_config(config)
        if len(diagnostics) == 0:
            print("Configuration is valid.")
            return EXIT_OK
        print("Found %d problem(s):" % len(diagnostics), file=sys.stderr)
        _report(diagnostics)
        return EXIT_CONFIG

    modes = {
        COMMAND_RUN: MODE_RUN,
        COMMAND_STATS: MODE_STATS,
        COMMAND_THRESHOLD: MODE_THRESHOLD,
    }
    try:
        manifest = run_pipeline(config, mode=modes[parsed.command], logger=logger())
        logger().info("Manifest: %s" % MANIFEST_FILE)
        print("%d artifacts written to: %s" % (len(manifest.artifacts), config.output_dir))
        return EXIT_OK
    except ConfigError as e:
        print(str(e), file=sys.stderr)
        _report(e.diagnostics)
        return EXIT_CONFIG
    except StageError as e:
        print(str(e), file=sys.stderr)
        if isinstance(e.cause, DataError):
            return EXIT_DATA
        if isinstance(e.cause, ConfigError):
            return EXIT_CONFIG
        return EXIT_INTERNAL


def sys_main() -> int:
    """
    Runs the main function using the system cli arguments, and
    returns a system error code.

    :return: 0 for success, 1 for failure, 2 for configuration errors, 3 for data errors
    :rtype: int
    """
    try:
        return main()
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == '__main__':
    sys.exit(sys_main())
