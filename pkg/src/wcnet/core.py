ENV_WCNET_LOGLEVEL = "WCNET_LOGLEVEL"
""" environment variable for the global default logging level. """

ENV_WCNET_OUTPUT_DIR = "WCNET_OUTPUT_DIR"
""" environment variable that overrides the output directory of the configuration. """

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_CONFIG = 2
EXIT_DATA = 3
