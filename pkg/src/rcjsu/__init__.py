"""Adaptive population-based simulated annealing for resource constrained
job scheduling with uncertain resource capacity."""
from .apsa import (ApsaParams, ApsaResult, Operator, OperatorProbs, adapt_probabilities,
                   beta_sampling, init_population, random_list, run_apsa, select_operator,
                   swap_all_job_pairs, swap_ops)
from .harness import brute_force_oracle, export_ip
from .instance import (Instance, InstanceError, Job, UncertaintyScenario, format_instance,
                       generate_scenario, parse_instance, read_instance, u_min, validate_instance)
from .metropolis import MhParams, metropolis_hastings, swap_jobs
from .scheduler import Evaluator, ObjectiveValue, Schedule, decode, evaluate, twt

__version__ = "0.1.0"
