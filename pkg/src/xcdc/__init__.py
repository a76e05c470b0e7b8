"""Channel ranking and selection for epoched multichannel time series.

Ranks channels of a labelled two-class dataset by a cross-correlation
discriminant criterion, compares against Pearson-correlation (CCS) and CSP
coefficient baselines, evaluates rankings with a CSP + LDA classifier, and
selects the smallest channel subset meeting an accuracy constraint.
"""

__version__ = "0.1.0"

from .baselines import CspModel, ccs_rank, csp_fit, csp_rank
from .classify import (
    AccuracyCurve,
    MinimalSubsetReport,
    accuracy_curve,
    fit_classifier,
    minimal_subset,
    train_classifier,
)
from .dataset import (
    ChannelLayout,
    ChannelRanking,
    EpochedDataset,
    Trial,
    load_dataset,
    rank_by_scores,
    save_dataset,
)
from .preprocess import (
    BandpassSpec,
    butterworth_bandpass,
    crop,
    decimate,
    preprocess_dataset,
    zscore,
)
from .ranking import (
    DiscriminantResult,
    discriminant_score,
    rank_channels,
    select_lambda_cv,
    within_between,
)
from .synth import SynthConfig, generate_synthetic
from .topomap import TopomapGrid, normalize_scores, topomap_grid
from .xcorr import (
    LagSeries,
    SimilarityMatrix,
    pairwise_similarity,
    pairwise_similarity_naive,
    similarity,
    xcorr_full,
    xcorr_full_naive,
)

__all__ = [
    "AccuracyCurve",
    "BandpassSpec",
    "ChannelLayout",
    "ChannelRanking",
    "CspModel",
    "DiscriminantResult",
    "EpochedDataset",
    "LagSeries",
    "MinimalSubsetReport",
    "SimilarityMatrix",
    "SynthConfig",
    "TopomapGrid",
    "Trial",
    "accuracy_curve",
    "ccs_rank",
    "crop",
    "csp_fit",
    "csp_rank",
    "butterworth_bandpass",
    "decimate",
    "discriminant_score",
    "fit_classifier",
    "generate_synthetic",
    "load_dataset",
    "minimal_subset",
    "normalize_scores",
    "pairwise_similarity",
    "pairwise_similarity_naive",
    "preprocess_dataset",
    "rank_by_scores",
    "rank_channels",
    "save_dataset",
    "select_lambda_cv",
    "similarity",
    "topomap_grid",
    "train_classifier",
    "within_between",
    "xcorr_full",
    "xcorr_full_naive",
    "zscore",
]
