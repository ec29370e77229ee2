import os

from dotenv import dotenv_values

from primebound.constants import CONFIG_TYPES, DEFAULT_CONFIG
from primebound.errors import ConfigError

CONFIG_ENV_VAR = "PRIMEBOUND_CONFIG"

TRUE_VALUES = ("true", "1", "yes")
FALSE_VALUES = ("false", "0", "no")


def _convert(key, text):
    kind = CONFIG_TYPES[key]
    text = text.strip()
    if kind is bool:
        if text.lower() in TRUE_VALUES:
            return True
        if text.lower() in FALSE_VALUES:
            return False
        raise ConfigError("{} must be true or false, got {!r}".format(key.upper(), text))
    try:
        # Accept 1e6-style integers, but only when they are exact.
        if kind is int and ("e" in text.lower() or "." in text):
            value = float(text)
            if not value.is_integer():
                raise ValueError(text)
            return int(value)
        return kind(text)
    except ValueError as e:
        raise ConfigError(
            "{} must be {}, got {!r}".format(key.upper(), kind.__name__, text)
        ) from e


def _validate(config):
    for key in (
        "scan_limit",
        "segment_size",
        "sigma_table_budget",
        "node_budget",
        "sift_budget",
        "trial_division_bound",
        "audit_limit",
        "kishore_limit",
    ):
        if config[key] < 1:
            raise ConfigError("{} must be positive, got {}".format(key.upper(), config[key]))
    for key in ("spot_checks", "workers"):
        if config[key] < 0:
            raise ConfigError("{} must not be negative, got {}".format(key.upper(), config[key]))


def read_config_file(path):
    """Parse a key=value file into typed settings; unknown or empty keys are rejected."""
    if not os.path.isfile(path):
        raise ConfigError("configuration file {} does not exist".format(path))

    settings = {}
    for name, text in dotenv_values(path).items():
        key = name.lower()
        if key not in DEFAULT_CONFIG:
            raise ConfigError("unknown configuration key {} in {}".format(name, path))
        if text is None or text.strip() == "":
            raise ConfigError("configuration key {} in {} has no value".format(name, path))
        settings[key] = _convert(key, text)
    return settings


def load_config(path=None, overrides=None):
    """
    Effective configuration: defaults, then the file (path, or the
    PRIMEBOUND_CONFIG variable), then overrides whose value is not None.
    """
    config = dict(DEFAULT_CONFIG)
    path = path or os.environ.get(CONFIG_ENV_VAR)
    if path:
        config.update(read_config_file(path))
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in DEFAULT_CONFIG:
            raise ConfigError("unknown configuration key {}".format(key))
        config[key] = value
    _validate(config)
    return config
