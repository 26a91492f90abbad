from .generate import PlantedHypergraphSpec, generate_planted, planted_labels
from .metrics import f1_score, set_scores
from .experiment import Observation, run_experiment, sample_observations

__all__ = [
    "PlantedHypergraphSpec",
    "generate_planted",
    "planted_labels",
    "f1_score",
    "set_scores",
    "Observation",
    "run_experiment",
    "sample_observations",
]
