import importlib
import inspect
from typing import Any, Callable, Mapping, Type, Union

from .config import Config
from .errors import InstantiationError

INSTANCE_KEYWORD: str = "_instance_"


def import_target(class_string: str) -> Type[Any]:
    """
    Import a class or function from its dotted path, e.g. "k3strata.kummer.NonProduct".
    """
    module_name, _, name = class_string.rpartition(".")
    if not module_name:
        raise InstantiationError(f"'{class_string}' is not a dotted path to a class or function.")
    try:
        module = importlib.import_module(module_name)
        return getattr(module, name)
    except (ImportError, AttributeError) as error:
        raise InstantiationError(f"Cannot import '{class_string}': {error}") from error


def is_instantiatable(value: Any, instance_keyword: str = INSTANCE_KEYWORD) -> bool:
    if isinstance(value, Config):
        return instance_keyword in value
    return isinstance(value, Mapping) and instance_keyword in value


def instantiate(config: Union[Config, Mapping], instance_keyword: str = INSTANCE_KEYWORD, **extra_kwargs) -> Any:
    """
    Build the object a config node describes.

    The node names its target under `_instance_`; every other key is passed as a keyword
    argument, after nested nodes that carry `_instance_` themselves have been built.

    Args:
        config (Config|dict): The node to build.
        **extra_kwargs: Keyword arguments that override or complete the node.

    Raises:
        InstantiationError: If the node has no `_instance_` key, the target cannot be
            imported, or required arguments are missing.
    """
    kwargs = dict(config.to_dict() if isinstance(config, Config) else config)

    for key, value in kwargs.items():
        if is_instantiatable(value, instance_keyword):
            kwargs[key] = instantiate(value, instance_keyword)
    kwargs.update(extra_kwargs)

    if instance_keyword not in kwargs:
        raise InstantiationError(f"No '{instance_keyword}' key found in config: {kwargs}")
    target = import_target(kwargs.pop(instance_keyword))
    return _instance(target, kwargs, config)


def _instance(target: Callable, kwargs: dict, config: Any) -> Any:
    obj_parameters = inspect.signature(target).parameters
    required_parameters = [
        name for name, param in obj_parameters.items()
        if param.default is param.empty and param.kind not in (param.VAR_KEYWORD, param.VAR_POSITIONAL)
    ]
    missing_parameters = [name for name in required_parameters if name not in kwargs]

    if missing_parameters:
        raise InstantiationError(
            f"Error in config: {config}. "
            + f"Missing {len(missing_parameters)} required argument(s): {', '.join(missing_parameters)}. "
            + "Add it to your config or provide as a keyword argument during instantiation."
        )
    try:
        return target(**kwargs)
    except TypeError as error:
        raise InstantiationError(f"Error in config: {config}. {error}") from error
