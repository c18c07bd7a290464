import argparse
from dataclasses import dataclass
from typing import List, Any, Optional


OPTION_LIST_MAX = 72
DESCRIPTION_OFFSET = 24


@dataclass
class CommandlineParameter:
    """
    Definition of a command-line flag. Flags with a config_key mirror a value of the
    pipeline configuration (dotted path, e.g., 'gap.k_max') and override it when supplied.
    """
    short_opt: str = None
    long_opt: str = None
    metavar: str = None
    choices: List[str] = None
    help: str = None
    type: Any = None
    action: str = None
    const: Any = None
    required: bool = False
    default: Any = None
    is_help: bool = False  # handled outside argparse
    nargs: str = None
    config_key: str = None

    def dest(self) -> str:
        """
        Returns the attribute name argparse stores the value under.

        :return: the name
        :rtype: str
        """
        opt = self.long_opt if self.long_opt is not None else self.short_opt
        return opt.lstrip("-").replace("-", "_")


def param_to_short(param: CommandlineParameter) -> str:
    """
    Generates the compact representation of the flag for the usage line.

    :param param: the flag
    :type param: CommandlineParameter
    :return: the representation
    :rtype: str
    """
    result = param.short_opt if param.short_opt is not None else param.long_opt
    if param.choices is not None:
        result += " {%s}" % ",".join(param.choices)
    elif param.metavar is not None:
        result += " " + param.metavar
    return result if param.required else "[%s]" % result


def params_to_short(prog: str, params: List[CommandlineParameter], additional: str = None) -> str:
    """
    Generates the usage line(s), wrapped at OPTION_LIST_MAX characters.

    :param prog: the executable
    :type prog: str
    :param params: the flags
    :type params: list
    :param additional: optional text to append on a separate line
    :type additional: str
    :return: the usage
    :rtype: str
    """
    lines = []
    line = "usage: " + prog
    indent = " " * len(line)
    for param in params:
        short = param_to_short(param)
        if len(line) + len(short) + 1 > OPTION_LIST_MAX:
            lines.append(line)
            line = indent
        line += " " + short
    lines.append(line)
    if additional:
        lines.append(indent + " " + additional)
    return "\n".join(lines)


def param_to_help(param: CommandlineParameter) -> str:
    """
    Generates the help entry of the flag, the description aligned at DESCRIPTION_OFFSET.

    :param param: the flag
    :type param: CommandlineParameter
    :return: the help entry
    :rtype: str
    """
    if (param.short_opt is None) and (param.long_opt is None):
        raise Exception("Either short or long option flag needs to be provided: %s" % str(param))
    suffix = ""
    if param.choices is not None:
        suffix = " {%s}" % ",".join(param.choices)
    elif param.metavar is not None:
        suffix = " " + param.metavar
    flags = [x + suffix for x in [param.short_opt, param.long_opt] if x is not None]
    result = "  " + ", ".join(flags)
    description = param.help if param.help is not None else ""
    if param.config_key is not None:
        description += " [%s]" % param.config_key
    if len(result) < DESCRIPTION_OFFSET:
        return result.ljust(DESCRIPTION_OFFSET) + " " + description
    return result + "\n" + " " * DESCRIPTION_OFFSET + " " + description


def param_to_parser(parser: argparse.ArgumentParser, param: CommandlineParameter):
    """
    Adds the flag to the parser, unless it is a help flag.

    :param parser: the parser to extend
    :type parser: argparse.ArgumentParser
    :param param: the flag
    :type param: CommandlineParameter
    """
    if param.is_help:
        return
    args = [x for x in [param.short_opt, param.long_opt] if x is not None]
    kwargs = {"required": param.required, "default": param.default, "dest": param.dest()}
    for key in ["metavar", "choices", "help", "action", "type", "nargs", "const"]:
        value = getattr(param, key)
        if value is not None:
            kwargs[key] = value
    parser.add_argument(*args, **kwargs)


def params_to_parser(parser: argparse.ArgumentParser, params: Optional[List[CommandlineParameter]]):
    """
    Adds all the flags to the parser.

    :param parser: the parser to extend
    :type parser: argparse.ArgumentParser
    :param params: the flags, ignored if None
    :type params: list
    """
    for param in (params or []):
        param_to_parser(parser, param)
