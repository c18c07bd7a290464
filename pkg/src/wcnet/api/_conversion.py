import argparse
import logging
import os.path
from typing import List, Tuple, Optional, Dict

from seppl import enumerate_plugins, is_help_requested, split_args, args_to_objects, Plugin, check_compatibility
from seppl.io import Reader, BatchFilter, MultiFilter, Writer, execute
from seppl.variables import load_user_defined_variables, expand_variables
from wai.logging import set_logging_level, LOGGING_LEVELS, LOGGING_WARNING

from ._errors import ConfigError
from ._help import CommandlineParameter, params_to_short, param_to_help, params_to_parser
from ._session import Session


def _default_params() -> List[CommandlineParameter]:
    return [
        CommandlineParameter(short_opt="-h", long_opt="--help", help="Show basic help message and exit.", action="store_true", is_help=True),
        CommandlineParameter(long_opt="--help-plugin", metavar="NAME", help="Show help message for plugin NAME and exit.", is_help=True),
        CommandlineParameter(short_opt="-l", long_opt="--logging_level", choices=LOGGING_LEVELS, help="The logging level to use (default: WARN).", default=LOGGING_WARNING),
        CommandlineParameter(long_opt="--variables", metavar="FILE", help="The file with variables for expanding paths (format: key=value)."),
    ]


def print_conversion_usage(prog: str, description: str, plugins: Dict[str, Dict[str, Plugin]]):
    """
    Prints the usage of the conversion tool to stdout.

    :param prog: the conversion executable
    :type prog: str
    :param description: the description of the executable
    :type description: str
    :param plugins: the readers, filters and writers, keyed by plugin type
    :type plugins: dict
    """
    params = _default_params()
    print(params_to_short(prog, params, additional="reader [filter ...] writer"))
    print()
    print(description)
    print()
    for kind in plugins:
        print("%s (%d):\n" % (kind, len(plugins[kind])) + enumerate_plugins(plugins[kind].keys(), prefix="   "))
    print()
    print("options:")
    for param in params:
        print(param_to_help(param))


def parse_conversion_args(args: List[str], prog: str, description: str,
                          readers: Dict[str, Plugin], filters: Dict[str, Plugin], writers: Dict[str, Plugin],
                          generate_plugin_usage=None) -> Optional[Tuple[Reader, Optional[BatchFilter], Writer, Session]]:
    """
    Turns the arguments into a reader, the (combined) filters and a writer.
    Returns None if only help was requested.

    :param args: the arguments to parse
    :type args: list
    :param prog: the conversion executable
    :type prog: str
    :param description: the description of the executable
    :type description: str
    :param readers: the available readers
    :type readers: dict
    :param filters: the available filters
    :type filters: dict
    :param writers: the available writers
    :type writers: dict
    :param generate_plugin_usage: the method for generating the usage of a single plugin
    :return: tuple of (reader, filter, writer, session), the filter can be None
    :rtype: tuple
    """
    all_plugins = dict()
    all_plugins.update(readers)
    all_plugins.update(filters)
    all_plugins.update(writers)

    help_requested, _, plugin_name = is_help_requested(args, handlers=list(all_plugins.keys()), partial=False)
    if help_requested:
        if (plugin_name is not None) and (generate_plugin_usage is not None):
            generate_plugin_usage(plugin_name)
        else:
            print_conversion_usage(prog, description, {"readers": readers, "filters": filters, "writers": writers})
        return None

    parsed = split_args(args, list(all_plugins.keys()), partial=False)
    plugins = args_to_objects(parsed, all_plugins, allow_global_options=True)
    readers_found = [x for x in plugins if isinstance(x, Reader)]
    writers_found = [x for x in plugins if isinstance(x, Writer)]
    filters_found = [x for x in plugins if isinstance(x, BatchFilter)]
    if len(readers_found) != 1:
        raise ConfigError("Exactly one reader required, found: %d" % len(readers_found))
    if len(writers_found) != 1:
        raise ConfigError("Exactly one writer required, found: %d" % len(writers_found))
    if len(filters_found) == 0:
        filter_ = None
    elif len(filters_found) == 1:
        filter_ = filters_found[0]
    else:
        filter_ = MultiFilter(filters=filters_found)
    try:
        check_compatibility([x for x in [readers_found[0], filter_, writers_found[0]] if x is not None])
    except Exception as e:
        raise ConfigError("Incompatible pipeline: %s" % str(e))

    parser = argparse.ArgumentParser()
    params_to_parser(parser, _default_params())
    session = Session(options=parser.parse_args(parsed[""] if ("" in parsed) else []), logger=logging.getLogger(prog))
    set_logging_level(session.logger, session.options.logging_level)
    if session.options.variables is not None:
        path = expand_variables(session.options.variables)
        if not os.path.exists(path):
            raise ConfigError("Variable file not found: %s" % path)
        session.logger.info("Loading variables from: %s" % path)
        load_user_defined_variables(path)

    return readers_found[0], filter_, writers_found[0], session


def perform_conversion(args: List[str], prog: str, description: str,
                       readers: Dict[str, Plugin], filters: Dict[str, Plugin], writers: Dict[str, Plugin],
                       generate_plugin_usage=None):
    """
    Parses the arguments and executes the plugin pipeline.

    :param args: the arguments to parse
    :type args: list
    :param prog: the conversion executable
    :type prog: str
    :param description: the description of the executable
    :type description: str
    :param readers: the available readers
    :type readers: dict
    :param filters: the available filters
    :type filters: dict
    :param writers: the available writers
    :type writers: dict
    :param generate_plugin_usage: the method for generating the usage of a single plugin
    """
    parsed = parse_conversion_args(args, prog, description, readers, filters, writers,
                                   generate_plugin_usage=generate_plugin_usage)
    if parsed is None:
        return
    reader, filter_, writer, session = parsed
    session.logger.info("options: %s" % str(args))
    execute(reader, filter_, writer, session)
