"""Experiment driver, reporting, exhaustive oracle and LP export."""
from .experiment import (ExperimentConfig, ResultRow, load_config, parse_config, read_rows,
                         run_experiment)
from .lp_export import export_ip
from .oracle import brute_force_oracle
from .report import percentage_diff, summarise
