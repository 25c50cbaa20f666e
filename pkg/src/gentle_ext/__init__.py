"""Generic modules and Ext groups for gentle string algebras given by colored quivers."""
from .cocycle import ext1_cocycle_oracle, hom_dim
from .ext import (CrossCheckError, ExtReport, build_ext_graph, canonical_decomposition_report,
                  ext_between, ext_dims)
from .graph import UpDownGraph, build_updown_graph, classify_vertices, decompose
from .jobfile import JobFile, ParseError, format_job, parse_job
from .linalg import RATIONAL, Field, SparseMatrix
from .module import (BandParameters, ModuleError, Representation, build_module, default_parameters,
                     theta_epsilon_invariance)
from .quiver import (ColoredQuiver, ColoringError, NotFiniteDimensional, QuiverError, SignFunction,
                     canonical_sign, check_gentle, enumerate_sign_functions, infer_coloring)
from .ranks import RankMap, enumerate_maximal_rank_maps, is_maximal, validate_rank_map
from .resolution import Resolution, ResolutionError, build_resolution, verify_resolution

__version__ = "0.1.0"

__all__ = [
    "BandParameters", "ColoredQuiver", "ColoringError", "CrossCheckError", "ExtReport", "Field",
    "JobFile", "ModuleError", "NotFiniteDimensional", "ParseError", "QuiverError", "RATIONAL",
    "RankMap", "Representation", "Resolution", "ResolutionError", "SignFunction", "SparseMatrix",
    "UpDownGraph", "build_ext_graph", "build_module", "build_resolution", "build_updown_graph",
    "canonical_decomposition_report", "canonical_sign", "check_gentle", "classify_vertices",
    "decompose", "default_parameters", "enumerate_maximal_rank_maps", "enumerate_sign_functions",
    "ext1_cocycle_oracle", "ext_between", "ext_dims", "format_job", "hom_dim", "infer_coloring",
    "is_maximal", "parse_job", "theta_epsilon_invariance", "validate_rank_map", "verify_resolution",
]
