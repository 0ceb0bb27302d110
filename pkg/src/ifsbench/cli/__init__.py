"""Config-driven experiment runner."""

from .config import ConfigError, ExperimentConfig, config_from_dict, parse_config, serialize_config
from .runner import exit_code, report_body, run_experiment, run_task
from .emit import emit_report
from .builtins import BUILTINS, builtin_config
from .main import main
