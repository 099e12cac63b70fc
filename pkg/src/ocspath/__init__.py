"""Exact reachability, shortest paths and path normalization for one-counter systems."""

from .core import Config, Ocs, Path, Transition, effect, fasten, fire, remove_repeats, split_arcs, validate_path
from .errors import InvariantError, NotFireable, PreconditionError, ResourceError, Unreachable
from .normal_form import NormalDecomposition, check_amortization, verify_normal
from .normalizer import Normalizer, choose_ab, normalize_arc, normalize_path, unpump_mod_gcd
from .reachability import (
    SearchCaps,
    build_lifted,
    capped_shortest_path,
    min_zero_path,
    shortest_low_arc,
    shortest_path,
)
from .scc import SccAnalysis, analyze, connective
from .words import Oca, shortest_word
from .zcounter import ZConfig, ZOcs, augmented, negate, signed_projection, z_shortest_path

__all__ = [
    "Config",
    "Ocs",
    "Path",
    "Transition",
    "effect",
    "fasten",
    "fire",
    "remove_repeats",
    "split_arcs",
    "validate_path",
    "InvariantError",
    "NotFireable",
    "PreconditionError",
    "ResourceError",
    "Unreachable",
    "NormalDecomposition",
    "check_amortization",
    "verify_normal",
    "Normalizer",
    "choose_ab",
    "normalize_arc",
    "normalize_path",
    "unpump_mod_gcd",
    "SearchCaps",
    "build_lifted",
    "capped_shortest_path",
    "min_zero_path",
    "shortest_low_arc",
    "shortest_path",
    "SccAnalysis",
    "analyze",
    "connective",
    "Oca",
    "shortest_word",
    "ZConfig",
    "ZOcs",
    "augmented",
    "negate",
    "signed_projection",
    "z_shortest_path",
]
