"""Prize-collecting Steiner tree and forest solvers for planar graphs."""

from .dp import solve_pcst
from .graph import RotationSystem, ValidationError, WeightedGraph, check_embedding
from .instance import PcInstance, SolutionForest, evaluate, normalize_terminals
from .io import ParseError, parse_instance, read_instance, serialize_instance, write_instance
from .pipeline import PipelineConfig, ptas_pcst, reduce_pcsf, solve_pcsf_reduced
from .primal_dual import solve_primal_dual, verify_dual

__version__ = "0.1.0"
