class WcnetError(Exception):
    """
    Ancestor for all errors raised by the wcnet library.
    """
    pass


class ConfigError(WcnetError):
    """
    Raised when the configuration is invalid.
    """

    def __init__(self, msg: str, diagnostics=None):
        """
        Initializes the error.

        :param msg: the error message
        :type msg: str
        :param diagnostics: the list of individual problems, if any
        :type diagnostics: list
        """
        super().__init__(msg)
        self.diagnostics = [] if diagnostics is None else list(diagnostics)


class DataError(WcnetError):
    """
    Raised when the input data cannot be read or is unusable.
    """
    pass


class StageError(WcnetError):
    """
    Raised by the pipeline when a stage fails, tags the failure with the stage name.
    """

    def __init__(self, stage: str, cause: Exception):
        """
        Initializes the error.

        :param stage: the name of the stage that failed
        :type stage: str
        :param cause: the underlying exception
        :type cause: Exception
        """
        super().__init__("Stage '%s' failed: %s" % (stage, str(cause)))
        self.stage = stage
        self.cause = cause
