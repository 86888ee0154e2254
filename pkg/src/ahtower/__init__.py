"""Exact-arithmetic workbench for a recursive tower of homogeneous blocks,
the lattice shift action on it, and radius-of-comparison certificates."""

from .action import (LevelPermutation, check_equivariance, level_permutation,
                     outerness_witness, tower_permutations)
from .certificates import (LedgerRow, WitnessReport, search_witness,
                           verify_witness_json)
from .comparison import (ProjectionSymbol, SquareZeroPoly,
                         chern_min_embedding_rank, find_witness,
                         projection_pair, rank_obstruction_threshold,
                         stage_rc_upper)
from .crossed import (CrossedProjectionSymbol, build_crossed_stage,
                      check_crossed_sizes, check_upper_bound_gap,
                      crossed_connecting_map, crossed_find_witness,
                      crossed_projection_pair, crossed_rank_threshold,
                      crossed_rc_upper, crossed_trace_check)
from .diagram import (DiagramDocument, build_diagram_document,
                      diagram_from_json_obj, diagram_to_json_obj,
                      export_diagram, render_dot)
from .rational import ExtendedRational, parse_fraction
from .sequences import (GrowthTables, TargetParams, build_tables, choose_h,
                        derive_kappa, generate_d, generate_d_prime,
                        tables_from_cli, verify_tables)
from .tower import (ConnectingMap, StageSpec, build_connecting_map,
                    build_stage, check_unital, compose_multiplicities,
                    multiplicity_matrix, verify_tower)

__all__ = [
    "ConnectingMap",
    "CrossedProjectionSymbol",
    "DiagramDocument",
    "ExtendedRational",
    "GrowthTables",
    "LedgerRow",
    "LevelPermutation",
    "ProjectionSymbol",
    "SquareZeroPoly",
    "StageSpec",
    "TargetParams",
    "WitnessReport",
    "build_connecting_map",
    "build_crossed_stage",
    "build_diagram_document",
    "build_stage",
    "build_tables",
    "check_crossed_sizes",
    "check_equivariance",
    "check_unital",
    "check_upper_bound_gap",
    "chern_min_embedding_rank",
    "choose_h",
    "compose_multiplicities",
    "crossed_connecting_map",
    "crossed_find_witness",
    "crossed_projection_pair",
    "crossed_rank_threshold",
    "crossed_rc_upper",
    "crossed_trace_check",
    "derive_kappa",
    "diagram_from_json_obj",
    "diagram_to_json_obj",
    "export_diagram",
    "find_witness",
    "generate_d",
    "generate_d_prime",
    "level_permutation",
    "multiplicity_matrix",
    "outerness_witness",
    "parse_fraction",
    "projection_pair",
    "rank_obstruction_threshold",
    "render_dot",
    "search_witness",
    "stage_rc_upper",
    "tables_from_cli",
    "tower_permutations",
    "verify_tables",
    "verify_tower",
    "verify_witness_json",
]

__version__ = "0.1.0"
