from .text_encoder import EMBED_DIM, cosine, encode_text, tokenize
from .features import FEATURE_DIM, KinematicFeatures, extract_features
from .codebook import (
    Codebook,
    CodebookKind,
    Prototype,
    default_location_codebook,
    default_pedestrian_motion_codebook,
    default_vehicle_motion_codebook,
    load_codebook,
    save_codebook,
)
from .projector import (
    Projector,
    TemporalFeature,
    aggregate,
    embed_trajectory,
    load_projector,
    save_projector,
)
from .loss import temporal_loss, temporal_loss_wrt_projector
from .oracle import oracle_label, oracle_location_label, oracle_motion_label
from .training import (
    ProjectorPair,
    TrainingConfig,
    TrainingExample,
    TrainingResult,
    family_of,
    seeded_pair,
    train_projectors,
)

__all__ = [
    "EMBED_DIM",
    "FEATURE_DIM",
    "tokenize",
    "encode_text",
    "cosine",
    "KinematicFeatures",
    "extract_features",
    "CodebookKind",
    "Prototype",
    "Codebook",
    "default_vehicle_motion_codebook",
    "default_pedestrian_motion_codebook",
    "default_location_codebook",
    "load_codebook",
    "save_codebook",
    "Projector",
    "TemporalFeature",
    "embed_trajectory",
    "aggregate",
    "save_projector",
    "load_projector",
    "temporal_loss",
    "temporal_loss_wrt_projector",
    "oracle_label",
    "oracle_motion_label",
    "oracle_location_label",
    "ProjectorPair",
    "TrainingConfig",
    "TrainingExample",
    "TrainingResult",
    "family_of",
    "seeded_pair",
    "train_projectors",
]
