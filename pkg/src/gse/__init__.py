"""Graph Sylvester embeddings built on the edge-betweenness centrality graph."""

__version__ = "0.1.0"

from .centrality import CentralityGraph, build_centrality_graph, edge_betweenness
from .embedding import (
    DescriptorConfig,
    Embedding,
    edge_embed,
    gse,
    gse_embed,
    gsse_embed,
    spectral_kernel_descriptor,
    stacked_baseline_embed,
)
from .graph import Graph, affinity_matrix, graph_from_edge_list, normalized_laplacian
from .io import read_edge_list
from .sylvester import SylvesterProblem, solve_analytical, solve_kronecker_oracle
from .tasks import AlignmentProblem, FailureProblem, align, detect_failures, hypergeom_pvalue
