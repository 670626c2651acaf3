"""Individually fair clustering: LP relaxation with randomized rounding on top of vanilla centers."""

from .cost import CostConfig, Facility
from .dataset import Dataset, FeatureSpec, load_csv, sample
from .fair_assign import Assignment, RoundingConfig, brute_force_ifa, build_ifa_lp, lp_fair
from .pipeline import PipelineConfig, solve_ifc
from .similarity import SimilarityConfig, SimilarityGraph, build_graph

__all__ = ["Assignment", "CostConfig", "Dataset", "Facility", "FeatureSpec", "PipelineConfig",
           "RoundingConfig", "SimilarityConfig", "SimilarityGraph", "brute_force_ifa",
           "build_graph", "build_ifa_lp", "load_csv", "lp_fair", "sample", "solve_ifc"]
