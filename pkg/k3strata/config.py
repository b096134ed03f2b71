"""
YAML settings for k3strata.

Settings files are plain YAML with three conventions:

- a top-level `defaults:` list names further YAML files, relative to the settings
  file, whose keys are merged in underneath the main file;
- a key written `$NAME: value` reads the environment variable NAME and falls back to
  value, parsed as a YAML scalar either way;
- nested mappings become nested Config objects with attribute access.
"""
import os
import warnings
from typing import Any, Dict, Optional, Union

import yaml

from .errors import ConfigError

DEFAULTS_KEYWORD: str = "defaults"
ENV_PREFIX: str = "$"
PACKAGE_CONFIG_DIR: str = os.path.join(os.path.dirname(os.path.abspath(__file__)), "conf")
DEFAULT_SETTINGS_NAME: str = "k3strata.yaml"
THREADS_KEY: str = "K3STRATA_THREADS"


class Config():
    def __init__(self, config_dict: dict):
        """
        Initializes the config from a dictionary; nested dictionaries become nested Configs.
        """
        if not isinstance(config_dict, dict):
            raise ConfigError("Supplied arg must be a dictionary")
        self._init_from_dict(config_dict)

    def update(self, update_config: Union[dict, "Config"]) -> "Config":
        """
        Place the values of update_config into this config, overwriting existing keys and
        creating missing ones.

        Args:
            update_config (dict|Config): The values to merge. Dictionary keys may use dot
                notation ("output.format") to reach nested configs.
        """
        if not isinstance(update_config, Config):
            update_config = config_to_nested_config(update_config)
        self._update_from_config(update_config)
        return self

    def _update_from_config(self, update_config: "Config"):
        for k, v in update_config.__dict__.items():
            if isinstance(v, Config):
                if not isinstance(self.__dict__.get(k), Config):
                    self[k] = Config({})
                self[k]._update_from_config(v)
            else:
                self[k] = v

    def _init_from_dict(self, dictionary: dict):
        for key, value in dictionary.items():
            if isinstance(value, dict):
                value = Config(value)
            self[key] = value

    def get(self, key: str, default: Any = None) -> Any:
        return self.__dict__.get(key, default)

    def __contains__(self, key: str) -> bool:
        return key in self.__dict__

    def __getitem__(self, key: str):
        return self.__getattribute__(key)

    def __setitem__(self, key: str, value):
        self.__setattr__(key, value)

    def __delitem__(self, key: str):
        self.__delattr__(key)

    def __str__(self):
        return self._subconfig_str(self, 0)[1:]

    def __repr__(self):
        return f"Config({self._subconfig_str(self, 1)})"

    def __getattr__(self, name):
        raise AttributeError(f"'Config' object has no attribute '{name}'. Please specify '{name}' in your settings yaml.")

    def _subconfig_str(self, subspace: "Config", tab_depth: int) -> str:
        s = ""
        for k, v in subspace.__dict__.items():
            s += "\n" + "  " * tab_depth + str(k) + ": "
            if isinstance(v, Config):
                s += "\n" + self._subconfig_str(v, tab_depth + 1)[1:]
            else:
                s += str(v)
        return s

    def to_dict(self) -> dict:
        return {k: v.to_dict() if isinstance(v, Config) else v for k, v in self.__dict__.items()}


def config_to_nested_config(flat: Union[dict, Config]) -> Config:
    """
    Convert a mapping with 'key1.keyn' formatted keys into a nested Config.
    """
    items = flat.to_dict() if isinstance(flat, Config) else flat
    nested_dict: Dict[str, Any] = {}
    for key, value in items.items():
        keys = str(key).split(".")
        current_dict = nested_dict
        for sub_key in keys[:-1]:
            current_dict = current_dict.setdefault(sub_key, {})
        current_dict[keys[-1]] = value
    return Config(nested_dict)


def add_yaml_extension(path: str) -> str:
    """
    Append '.yaml' to a path that has neither a '.yaml' nor a '.yml' extension.
    """
    if not path.endswith(".yaml") and not path.endswith(".yml"):
        path += ".yaml"
    return path


def find_yaml_path(file_path: str) -> str:
    """
    Return whichever of '<base>.yml' or '<base>.yaml' exists.

    Raises:
        FileNotFoundError: If neither exists.
    """
    base_path, _ = os.path.splitext(os.path.expanduser(file_path))
    for candidate in (base_path + ".yml", base_path + ".yaml"):
        if os.path.isfile(candidate):
            return candidate
    raise FileNotFoundError(f"No YAML file found with either '.yml' or '.yaml' extension for path: {base_path}.")


def open_yaml(path: str) -> dict:
    """
    Read and parse the YAML file at path; an empty file reads as an empty mapping.
    """
    with open(find_yaml_path(path), "r") as handle:
        content = yaml.safe_load(handle)
    if content is None:
        return {}
    if not isinstance(content, dict):
        raise ConfigError(f"The settings file {path} must contain a mapping at the top level.")
    return content


def resolve_environment(config_dict: dict) -> dict:
    """
    Replace every '$NAME: default' key, at any depth, by 'NAME: <env or default>'.
    """
    resolved = {}
    for key, value in config_dict.items():
        if isinstance(value, dict):
            value = resolve_environment(value)
        if isinstance(key, str) and key.startswith(ENV_PREFIX):
            key = key[len(ENV_PREFIX):]
            if key in os.environ:
                value = yaml.safe_load(os.environ[key])
        resolved[key] = value
    return resolved


def unpack_defaults(config: dict, config_dir: str) -> None:
    """
    Merge the files listed under 'defaults' into config without overwriting its keys.
    """
    default_paths = config.pop(DEFAULTS_KEYWORD)
    if isinstance(default_paths, str):
        default_paths = [default_paths]
    elif not isinstance(default_paths, list):
        warnings.warn(f"Ignoring '{DEFAULTS_KEYWORD}' entry of type {type(default_paths).__name__}; expected a list of paths.")
        return

    for default_path in default_paths:
        default_config = load_yaml_config(config_dir, add_yaml_extension(str(default_path)))
        config.update((key, value) for key, value in default_config.items() if key not in config)


def load_yaml_config(config_dir: str, config_name: str) -> dict:
    """
    Load a settings file and everything it pulls in through 'defaults'.

    Args:
        config_dir (str): Directory holding the file; defaults resolve relative to it.
        config_name (str): The file name, with or without extension.

    Returns:
        dict: The merged, environment-resolved settings.
    """
    config = open_yaml(os.path.join(config_dir, config_name))
    if DEFAULTS_KEYWORD in config:
        unpack_defaults(config, config_dir)
    return resolve_environment(config)


def load_settings(path: Optional[str] = None) -> Config:
    """
    The packaged settings, or the file at path when one is given.
    """
    if path is None:
        config_dir, config_name = PACKAGE_CONFIG_DIR, DEFAULT_SETTINGS_NAME
    else:
        path = os.path.abspath(path)
        config_dir, config_name = os.path.dirname(path), os.path.basename(path)
    return Config(load_yaml_config(config_dir, config_name))


def resolve_workers(threads: Optional[int]) -> int:
    """Worker count for batch maps; 0 or None means one per CPU."""
    if threads is None or int(threads) <= 0:
        return os.cpu_count() or 1
    return int(threads)


def settings_workers(settings: Config) -> int:
    return resolve_workers(settings.get(THREADS_KEY, 0))
