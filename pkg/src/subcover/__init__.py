"""Network motifs as the building blocks of a minimal-information subgraph cover."""

__version__ = "0.1.0"

from .errors import (DensityError, DomainError, InfeasibleSpecError, ParseError,  # noqa: E402
                     SubcoverError, UndefinedProfileError, UnsupportedSizeError, ValidationError)
from .graph import Graph, load_edge_list, read_edge_list, underlying_undirected, write_edge_list  # noqa: E402
from .information import (CostModel, CoverSummary, InformationReport, c_score,  # noqa: E402
                          delta_sigma, edge_cover_information, entropy_S, entropy_stirling,
                          information_report, log2_placements, log_star, significance_profile,
                          total_information)
from .motifs import (MotifCatalog, MotifClass, automorphism_group, canonical_form,  # noqa: E402
                     effective_complexity, generate_catalog, is_biconnected, motif_class,
                     resolve_motif, single_edge_motif)
from .enumeration import (Instance, count_instances, enumerate_connected_vertex_sets,  # noqa: E402
                          find_instances)
from .solver import Cover, SolverConfig, efficiency, greedy_cover, role_sequence  # noqa: E402
from .generators import PlantSpec, PlantedResult, generate_bjr, realize_uniform_cover  # noqa: E402
