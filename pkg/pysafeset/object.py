import importlib
import logging
from typing import Union, Type, TypeVar

log = logging.getLogger(__name__)

T = TypeVar('T')


def get_object(config_or_object: Union[dict, T, None], object_class: Type[T] = None, *args, **kwargs) -> T:
    """Returns a pluggable part (solver backend, input signal), building it first if a config is given.

    Args:
        config_or_object: Either a dict with a 'class' key and constructor parameters, or a ready object.
        object_class: If given, the result must be an instance of it.

    Returns:
        The object, or None for None.

    Raises:
        TypeError: If the result is not an instance of object_class.
    """
    if config_or_object is None:
        return None
    obj = create_object(config_or_object, *args, **kwargs) \
        if isinstance(config_or_object, dict) else config_or_object

    # type check
    if object_class is not None and not isinstance(obj, object_class):
        raise TypeError('Expected %s, got %s.' % (object_class.__name__, type(obj).__name__))
    return obj


def get_class_from_string(class_name: str) -> type:
    """Resolves a dotted name like 'pysafeset.sdp.CvxpySolver'.

    Raises:
        ValueError: If the class cannot be found.
    """
    module_name, _, name = class_name.rpartition('.')
    try:
        return getattr(importlib.import_module(module_name), name)
    except (ImportError, AttributeError, ValueError) as e:
        raise ValueError('Could not find class "%s".' % class_name) from e


def create_object(config: dict, *args, **kwargs):
    """Instantiates the class named in config['class'] with the remaining entries as keyword arguments."""
    params = dict(config)
    if 'class' not in params:
        raise ValueError('Missing "class" in %s.' % sorted(params.keys()))
    klass = get_class_from_string(params.pop('class'))
    log.debug('Creating %s with %s.', klass.__name__, sorted(params.keys()))
    return klass(*args, **params, **kwargs)


__all__ = ['get_object', 'get_class_from_string', 'create_object']
