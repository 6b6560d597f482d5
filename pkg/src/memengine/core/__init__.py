from .config import ConfigError, EngineConfig, config_from_dict, load_config, validate_config
from .porter import porter_stem
from .tokens import approx_token_count, surface_tokens, tokenize
from .types import UNIT_NORM_TOL, Mau, ModalityKind, iso_to_ms, ms_to_iso

__all__ = [
    "ConfigError",
    "EngineConfig",
    "Mau",
    "ModalityKind",
    "UNIT_NORM_TOL",
    "approx_token_count",
    "config_from_dict",
    "iso_to_ms",
    "load_config",
    "ms_to_iso",
    "porter_stem",
    "surface_tokens",
    "tokenize",
    "validate_config",
]
