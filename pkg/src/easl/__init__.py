"""Adaptive scalar annotation.

Elicit graded judgments efficiently: direct assessment (DA), online
pairwise ranking aggregation with Gaussian or bounded beta latent models
(RA), and the EASL hybrid that folds adaptively batched scalar scores into
per-item beta distributions. Includes match-quality-driven batch
scheduling, a simulated-annotator experiment harness, replayable
observation logs, and a live annotation HTTP service.
"""

from .metrics import (
    CorrelationResult,
    average_ranks,
    bin_histogram,
    bootstrap_ci,
    pearson,
    spearman,
    total_variation,
)
from .models import (
    InstanceState,
    Method,
    ModelConfig,
    ModelState,
    PairwiseOutcome,
    ScalarJudgment,
    ScoreRow,
    current_score,
    da_aggregate,
    easl_update,
    match_quality,
    ra_beta_update,
    ra_gaussian_update,
    rao_kupper_probs,
    scores_to_outcomes,
    state_location,
    state_variance,
    thurstone_win_prob,
    ts_v_tie,
    ts_v_win,
    ts_w_tie,
    ts_w_win,
)
from .persistence import (
    ItemRecord,
    ObservationLog,
    ObservationRecord,
    PersistenceError,
    append_observation,
    export_scores,
    load_items,
    read_log,
    replay,
    restore,
    snapshot,
    write_items,
)
from .scheduler import Hit, SchedulePlan, iteration_plan, sample_hits
from .simulator import (
    AnnotatorModel,
    ExperimentReport,
    Oracle,
    elicit_partial_ranking,
    elicit_scalar,
    make_oracle,
    make_system_latents,
    oracle_items,
    run_campaign,
    run_system_ranking,
)
from .statcore import (
    BetaParams,
    GaussianParams,
    beta_mode,
    beta_variance,
    std_normal_cdf,
    std_normal_pdf,
)

__version__ = "0.1.0"
