import importlib
import inspect
from typing import Dict, List

from seppl import Plugin
from seppl.io import Reader, Filter, Writer

from wcnet.class_lister import list_classes

_CACHE = dict()


def _instantiate(superclass: str, base) -> Dict[str, Plugin]:
    """
    Imports the modules listed for the superclass and instantiates all concrete plugin classes found.

    :param superclass: the superclass key in the class lister
    :type superclass: str
    :param base: the class the plugins must be derived from
    :return: the plugins (name -> plugin)
    :rtype: dict
    """
    if superclass in _CACHE:
        return _CACHE[superclass]
    result = dict()
    for module_name in list_classes().get(superclass, []):
        module = importlib.import_module(module_name)
        for _, cls in inspect.getmembers(module, inspect.isclass):
            if not issubclass(cls, base) or inspect.isabstract(cls):
                continue
            plugin = cls()
            if plugin.name() in result:
                raise Exception("Duplicate plugin name '%s': %s and %s" % (plugin.name(), str(cls), str(type(result[plugin.name()]))))
            result[plugin.name()] = plugin
    _CACHE[superclass] = result
    return result


def available_readers() -> Dict[str, Plugin]:
    """
    Returns all available readers.

    :return: the dict of reader objects
    :rtype: dict
    """
    return _instantiate("seppl.io.Reader", Reader)


def available_filters() -> Dict[str, Plugin]:
    """
    Returns all available filters.

    :return: the dict of filter objects
    :rtype: dict
    """
    return _instantiate("seppl.io.Filter", Filter)


def available_writers() -> Dict[str, Plugin]:
    """
    Returns all available writers.

    :return: the dict of writer objects
    :rtype: dict
    """
    return _instantiate("seppl.io.Writer", Writer)


def available_plugins() -> Dict[str, Plugin]:
    """
    Returns all available plugins.

    :return: the dict of plugin objects
    :rtype: dict
    """
    result = dict()
    result.update(available_readers())
    result.update(available_filters())
    result.update(available_writers())
    return result


def plugin_names() -> List[str]:
    """
    Returns the sorted names of all plugins.

    :return: the names
    :rtype: list
    """
    return sorted(available_plugins().keys())
