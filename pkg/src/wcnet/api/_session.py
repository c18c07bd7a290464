import logging

import seppl


class Session(seppl.Session):
    """
    Session object shared among reader, filter(s), writer.
    """
    logger: logging.Logger = logging.getLogger("wcnet")
    """ the global logger. """
