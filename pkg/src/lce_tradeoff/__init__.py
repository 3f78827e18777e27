"""Time-space trade-offs for longest common extension queries on a read-only text."""
from .baseline import BaselineIndex, build_baseline
from .dc import DcStructure, build_dc, combined_query, dc_query, delta
from .derand import PhiTuple, build_derand_mc, count_b_id, count_b_phi, derandomize
from .det import DetStructure, build_det, det_query
from .fingerprint import PhiParams, pick_random_phi
from .mc import BitGeometry, McStructure, build_mc, mc_query
from .nearby import NearbyStructure, build_nearby, nearby_query
from .stats import QueryStats
from .structures import KINDS, build_structure
from .text import Text, generate, naive_lce, naive_lce_r, parse_generator
from .verify import VerificationReport, build_las_vegas, verify_phi

__version__ = "0.1.0"

__all__ = [
    "BaselineIndex", "build_baseline",
    "DcStructure", "build_dc", "combined_query", "dc_query", "delta",
    "PhiTuple", "build_derand_mc", "count_b_id", "count_b_phi", "derandomize",
    "DetStructure", "build_det", "det_query",
    "PhiParams", "pick_random_phi",
    "BitGeometry", "McStructure", "build_mc", "mc_query",
    "NearbyStructure", "build_nearby", "nearby_query",
    "QueryStats", "KINDS", "build_structure",
    "Text", "generate", "naive_lce", "naive_lce_r", "parse_generator",
    "VerificationReport", "build_las_vegas", "verify_phi",
]
