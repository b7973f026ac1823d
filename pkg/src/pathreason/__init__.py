"""Training-free relation-path reasoning over sparse knowledge graphs."""

from .collect import PathStore, collect_paths, collect_paths_random_walk, dfs_state_count
from .distance import DistanceIndex, build_distance_index, distance
from .estimator import PathReasoner
from .evaluate import MetricsReport, evaluate, rank_of_answer
from .kg import DatasetSplits, KnowledgeGraph, Triple, load_dataset
from .reasoner import CandidateAnswer, Query, ReasonerConfig, answer_query
from .stats import (
    JointStats,
    RelationPathStats,
    compute_joint_probabilities,
    compute_path_probabilities,
    rank_relation_paths,
    traverse_path,
)

__version__ = "0.1.0"

__all__ = [
    "CandidateAnswer", "DatasetSplits", "DistanceIndex", "JointStats", "KnowledgeGraph",
    "MetricsReport", "PathReasoner", "PathStore", "Query", "ReasonerConfig",
    "RelationPathStats", "Triple", "answer_query", "build_distance_index", "collect_paths",
    "collect_paths_random_walk", "compute_joint_probabilities", "compute_path_probabilities",
    "dfs_state_count", "distance", "evaluate", "load_dataset", "rank_of_answer",
    "rank_relation_paths", "traverse_path",
]
