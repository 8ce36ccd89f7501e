"""Layered defaults: packaged ``defaults.json`` < user config file < CLI flags.

The user file is located by ``--config`` or the ``BIZCYCLES_CONFIG``
environment variable and is merged key by key into the packaged defaults.
"""

from __future__ import annotations

import copy
import json
import math
import os
from importlib import resources

from .bandpass import CycleBand
from .errors import ConfigError
from .spectral import interpolate_threshold

ENV_VAR = "BIZCYCLES_CONFIG"


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def packaged_defaults() -> dict:
    text = resources.files("bizcycles").joinpath("defaults.json").read_text(encoding="utf-8")
    return json.loads(text)


def load_config(path: str | None = None) -> dict:
    cfg = packaged_defaults()
    path = path or os.environ.get(ENV_VAR)
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                user = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(user, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
        cfg = _merge(cfg, user)
    return cfg


def lambda_for_step(cfg: dict, step: float) -> float:
    for key, lam in cfg["lambda_by_step"].items():
        known = float(key)
        if abs(step - known) <= 1e-9 * known:
            return float(lam)
    raise ConfigError(f"no default lambda for step {step} years; pass --lambda")


def truncation_for_step(cfg: dict, step: float) -> int:
    if abs(step - 0.25) <= 1e-9:
        return int(cfg["truncation"]["quarterly"])
    return int(cfg["truncation"]["annual"])


def bands_from_config(cfg: dict) -> tuple[CycleBand, ...]:
    out = []
    for name, (lo, hi) in cfg["bands"].items():
        out.append(CycleBand(name, float(lo), math.inf if hi is None else float(hi)))
    return tuple(out)


def prominence_threshold(cfg: dict, n: int, setting=None) -> float:
    """Resolve ``"auto"`` to the white-noise calibrated ratio for length ``n``."""
    setting = cfg["spectrum"]["min_prominence"] if setting is None else setting
    if setting == "auto":
        return interpolate_threshold(n, cfg["white_noise_calibration"]["threshold_by_length"])
    try:
        return float(setting)
    except (TypeError, ValueError):
        raise ConfigError(f"min_prominence must be a number or 'auto', got {setting!r}") from None
