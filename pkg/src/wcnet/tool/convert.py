import sys
import traceback
from typing import List, Optional

from wai.logging import init_logging

from wcnet.api import perform_conversion, ConfigError, DataError
from wcnet.core import ENV_WCNET_LOGLEVEL, EXIT_OK, EXIT_INTERNAL, EXIT_CONFIG, EXIT_DATA
from wcnet.registry import available_readers, available_filters, available_writers, available_plugins

CONVERT = "wcnet-convert"

DESCRIPTION = "Assembles ad-hoc pipelines from the wavelet-coherence plugins, e.g., " \
              "from-prices-csv -p prices.csv clean-prices log-returns sub-periods band-coherence " \
              "gap-cluster --reference_mode uniform build-network to-artifacts -o out"


def _print_plugin_usage(plugin_name: str):
    """
    Outputs the help of the plugin.

    :param plugin_name: the name of the plugin
    :type plugin_name: str
    """
    plugins = available_plugins()
    if plugin_name not in plugins:
        raise ConfigError("Unknown plugin: %s" % plugin_name)
    plugins[plugin_name]._create_argparser().print_help()
    print()


def main(args: Optional[List[str]] = None) -> int:
    """
    Parses the command-line arguments and performs the conversion.

    :param args: the commandline arguments, uses sys.argv if not supplied
    :type args: list
    :return: the exit code
    :rtype: int
    """
    init_logging(env_var=ENV_WCNET_LOGLEVEL)
    _args = sys.argv[1:] if (args is None) else args
    try:
        perform_conversion(_args, CONVERT, DESCRIPTION,
                           available_readers(), available_filters(), available_writers(),
                           generate_plugin_usage=_print_plugin_usage)
        return EXIT_OK
    except ConfigError as e:
        print(str(e), file=sys.stderr)
        return EXIT_CONFIG
    except DataError as e:
        print(str(e), file=sys.stderr)
        return EXIT_DATA


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
