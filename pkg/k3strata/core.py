import argparse
import functools
import inspect
import os
import sys
from typing import Callable, List, Optional, Sequence, Tuple

from .config import add_yaml_extension, load_settings

BASE_CL_CONFIG_KEYWORD: str = "config"


def get_config_dir_path(config_path: str) -> str:
    """
    Convert a relative or absolute settings path to an absolute one. Relative paths are
    taken from the directory of the entry-point script, so examples run from anywhere.

    Args:
        config_path (str): The path to the settings file or its directory.

    Returns:
        str: The absolute path.
    """
    if os.path.isabs(config_path):
        return config_path

    main_file = getattr(sys.modules.get("__main__"), "__file__", None)
    path_from_main = os.path.dirname(os.path.abspath(main_file)) if main_file else os.getcwd()

    if config_path.startswith("./"):
        config_path = config_path[len("./"):]

    # Each leading "../" climbs one directory above the script.
    while config_path.startswith("../"):
        config_path = config_path[len("../"):]
        path_from_main = os.path.dirname(path_from_main)

    return os.path.join(path_from_main, config_path)


def parse_initial_args(argv: Sequence[str], config_argument_keyword: str = BASE_CL_CONFIG_KEYWORD) -> Tuple[Optional[str], List[str]]:
    """
    Pull `--<config_argument_keyword> PATH` out of argv.

    Returns:
        tuple: The settings path given on the command line (or None) and the remaining
            arguments, untouched and in order.
    """
    parser = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    parser.add_argument(f"--{config_argument_keyword}", type=str, default=None)
    args, remaining = parser.parse_known_args(list(argv))
    return getattr(args, config_argument_keyword), remaining


def unlock(config_name: Optional[str] = None, config_argument_keyword: str = BASE_CL_CONFIG_KEYWORD) -> Callable:
    """
    Create a decorator that loads settings and injects them into an entry point.

    The settings come from, in order of preference: `--config PATH` on the command line,
    config_name (relative to the entry-point script), or the packaged k3strata.yaml.

    Args:
        config_name (str): The settings file to load when none is given on the command line.
        config_argument_keyword (str): The command-line flag naming a settings file.

    Returns:
        Callable: A decorator. The decorated function is called as main(settings), or as
            main(settings, argv) when it declares an `argv` parameter, in which case it
            receives the arguments left over after the settings flag is removed.
    """
    def _parse_config(main: Callable):
        wants_argv = "argv" in inspect.signature(main).parameters

        @functools.wraps(main)
        def _inner_function(argv: Optional[Sequence[str]] = None, config: Optional[dict] = None):
            argv = sys.argv[1:] if argv is None else list(argv)
            command_line_path, remaining = parse_initial_args(argv, config_argument_keyword)

            if command_line_path is not None:
                path = os.path.abspath(add_yaml_extension(command_line_path))
            elif config_name is not None:
                path = get_config_dir_path(add_yaml_extension(config_name))
            else:
                path = None

            settings = load_settings(path)
            if config is not None:
                settings.update(config)

            if wants_argv:
                return main(settings, argv=remaining)
            return main(settings)

        return _inner_function

    return _parse_config
