from .config import ExperimentConfig, EXPERIMENTS, SCHEMA_VERSION
from .presets import PRESETS, list_presets, preset_gapset, preset_operator, synthetic_six_gap, synthetic_dyadic
from .report import ReportTable, Check, ExperimentResult
from .experiments import EXPERIMENT_REGISTRY, run_experiment
