"""
seqdesign library: pool-based sequential experiment design with Gaussian
processes, Expected Improvement and Bayesian model averaging.
"""

from .types import *
from .warnings import (
    CampaignError,
    DimensionError,
    EvaluationError,
    IngestionError,
    InvalidInputError,
    NumericalError,
    ScalingError,
    SchemaError,
    SeqDesignError,
    SpecError,
)
from .dataset import fit_scaling, load_table, partition, project, synth_table
from .gp import GpConfig, GpModel, fit, kernel, log_marginal_likelihood, predict
from .acquisition import expected_improvement, rank_pool, select_batch
from .bma import (
    BmaEnsemble,
    averaged_ei,
    compute_weights,
    fit_ensemble,
    mixture_ei,
    mixture_predict,
)
from .engine import CampaignConfig, derive_seed, run_campaign, run_repeated
from .evaluate import RunSummary, rmse, summarize, summarize_values
from .config import SpecConfig, load_specs
