"""Interactive similarity learning over mixed-type records.

Pairwise similarity labels drive per-attribute weight learning; the learned
weights feed a combined mixed-type distance used for candidate suggestion and
explainable k-nearest-neighbor retrieval.
"""

from .dataset import (
    MISSING,
    Attribute,
    AttributeKind,
    AttributeRole,
    Dataset,
    Instance,
    drop_sparse,
    is_missing,
    load_dataset,
    normalize,
)
from .distance import (
    combined_breakdown,
    combined_distance,
    goodall_distance,
    jaccard_weighted_distance,
    kronecker_distance,
    numeric_distance,
    weighted_euclidean_distance,
)
from .model import ModelState, SimilarityLabel, compute_weights, update_model, weight_ranking
from .active import SuggestionSet, suggest_candidates
from .retrieval import RetrievalResult, knn, search_instances, top_contributing_attributes
from .store import LabelLog, append_label, replay

__all__ = [
    "MISSING",
    "Attribute",
    "AttributeKind",
    "AttributeRole",
    "Dataset",
    "Instance",
    "LabelLog",
    "ModelState",
    "RetrievalResult",
    "SimilarityLabel",
    "SuggestionSet",
    "append_label",
    "combined_breakdown",
    "combined_distance",
    "compute_weights",
    "drop_sparse",
    "goodall_distance",
    "is_missing",
    "jaccard_weighted_distance",
    "knn",
    "kronecker_distance",
    "load_dataset",
    "normalize",
    "numeric_distance",
    "replay",
    "search_instances",
    "suggest_candidates",
    "top_contributing_attributes",
    "update_model",
    "weight_ranking",
    "weighted_euclidean_distance",
]

__version__ = "0.1.0"
