import os

import pytest

from k3strata.config import (
    Config,
    config_to_nested_config,
    load_settings,
    load_yaml_config,
    open_yaml,
    resolve_workers,
    settings_workers,
)
from k3strata.core import get_config_dir_path, parse_initial_args, unlock
from k3strata.coverage import Family
from k3strata.errors import ConfigError, InstantiationError
from k3strata.instantiate import instantiate, is_instantiatable
from k3strata.kummer import MinEllipticIntersection, NonProduct


def write(path, text):
    path.write_text(text)
    return str(path)


def test_packaged_settings():
    settings = load_settings()
    assert settings.output.format == "json"
    assert settings.remark.n_min == 9
    assert settings.remark.n_max == 45
    assert settings.families.general.n == 9
    assert settings.families.odd.parts[0] == 1
    assert "defaults" not in settings


def test_thread_count_from_environment(monkeypatch):
    monkeypatch.delenv("K3STRATA_THREADS", raising=False)
    assert load_settings().K3STRATA_THREADS == 0
    monkeypatch.setenv("K3STRATA_THREADS", "3")
    settings = load_settings()
    assert settings.K3STRATA_THREADS == 3
    assert settings_workers(settings) == 3


def test_resolve_workers():
    assert resolve_workers(0) == (os.cpu_count() or 1)
    assert resolve_workers(None) == (os.cpu_count() or 1)
    assert resolve_workers(5) == 5


def test_missing_key_message():
    with pytest.raises(AttributeError, match="settings yaml"):
        load_settings().nothing_here


def test_update_with_dot_notation():
    config = Config({"a": {"one": 1, "two": 2}, "b": 3})
    config.update({"a.two": 20, "a.three.x": 30, "c": 4})
    assert config.to_dict() == {"a": {"one": 1, "two": 20, "three": {"x": 30}}, "b": 3, "c": 4}
    assert config.get("missing", "default") == "default"


def test_nested_config_and_round_trip():
    nested = config_to_nested_config({"output.format": "csv", "output.indent": 4})
    assert nested.output.format == "csv"
    assert Config(nested.to_dict()).to_dict() == nested.to_dict()
    with pytest.raises(ConfigError):
        Config(["not", "a", "dict"])


def test_defaults_are_merged_underneath(tmp_path):
    write(tmp_path / "extra.yaml", "shared: from_extra\nonly_extra: 1\n")
    write(tmp_path / "main.yaml", "defaults:\n  - extra\nshared: from_main\n")
    config = load_yaml_config(str(tmp_path), "main.yaml")
    assert config == {"shared": "from_main", "only_extra": 1}


def test_yml_extension_is_found(tmp_path):
    write(tmp_path / "settings.yml", "a: 1\n")
    assert load_settings(str(tmp_path / "settings.yaml")).a == 1


def test_bad_defaults_type_warns(tmp_path):
    write(tmp_path / "main.yaml", "defaults: 3\nkey: value\n")
    with pytest.warns(UserWarning):
        config = load_yaml_config(str(tmp_path), "main.yaml")
    assert config == {"key": "value"}


def test_non_mapping_yaml(tmp_path):
    path = write(tmp_path / "list.yaml", "- 1\n- 2\n")
    with pytest.raises(ConfigError):
        open_yaml(path)
    assert open_yaml(write(tmp_path / "empty.yaml", "")) == {}


def test_missing_yaml(tmp_path):
    with pytest.raises(FileNotFoundError):
        open_yaml(str(tmp_path / "absent.yaml"))


def test_instantiate_variant():
    assert instantiate({"_instance_": "k3strata.kummer.MinEllipticIntersection", "m": 3}) == MinEllipticIntersection(3)
    assert instantiate(Config({"_instance_": "k3strata.kummer.NonProduct"})) == NonProduct()


def test_instantiate_nested_family():
    family = instantiate(
        {
            "_instance_": "k3strata.coverage.Family",
            "name": "general",
            "n": 9,
            "dprime_min": 26,
            "part_bound": 4,
            "variant": {"_instance_": "k3strata.kummer.NonProduct"},
        }
    )
    assert isinstance(family, Family)
    assert family.variant == NonProduct()


def test_instantiate_extra_kwargs_override():
    variant = instantiate({"_instance_": "k3strata.kummer.MinEllipticIntersection", "m": 3}, m=7)
    assert variant.m == 7


@pytest.mark.parametrize(
    "node",
    [
        {"_instance_": "k3strata.kummer.MinEllipticIntersection"},
        {"_instance_": "k3strata.kummer.DoesNotExist"},
        {"_instance_": "nodots"},
        {"m": 3},
        {"_instance_": "k3strata.kummer.NonProduct", "unexpected": 1},
    ],
)
def test_instantiate_errors(node):
    with pytest.raises(InstantiationError):
        instantiate(node)


def test_is_instantiatable():
    assert is_instantiatable({"_instance_": "x.y"})
    assert is_instantiatable(Config({"_instance_": "x.y"}))
    assert not is_instantiatable({"m": 3})
    assert not is_instantiatable(3)


def test_parse_initial_args():
    path, remaining = parse_initial_args(["coverage", "--config", "a.yaml", "threshold", "--n", "9"])
    assert path == "a.yaml"
    assert remaining == ["coverage", "threshold", "--n", "9"]
    assert parse_initial_args(["--verbose"]) == (None, ["--verbose"])


def test_config_dir_path_absolute(tmp_path):
    assert get_config_dir_path(str(tmp_path)) == str(tmp_path)


def test_unlock_loads_command_line_settings(tmp_path):
    path = write(tmp_path / "custom.yaml", "output:\n  format: csv\nvalue: 1\n")

    @unlock()
    def entry(settings, argv):
        return settings, argv

    settings, argv = entry(["--config", path, "rest"], config={"value": 2, "output.indent": 8})
    assert settings.output.format == "csv"
    assert settings.output.indent == 8
    assert settings.value == 2
    assert argv == ["rest"]


def test_unlock_without_argv_parameter():
    @unlock()
    def entry(settings):
        return settings

    assert entry([]).output.format == "json"
