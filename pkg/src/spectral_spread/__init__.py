"""Spectral graph embeddings built on the edge-betweenness-centrality graph.

GSSE uses the zero-shifted spread trade-off pencil ``W_BE - beta L_BE``;
GSE composes the eigensystems of ``L_BE`` and ``W_BE`` through a Sylvester
equation with right-hand side ``rho I``. Both feed a wave-kernel descriptor.
"""

__version__ = "0.1.0"

from .centrality import EbcResult, VbcResult, betweenness, build_bcg, edge_betweenness, vertex_betweenness
from .datasets import karate_club
from .descriptors import EmbeddingMatrix, WksConfig, distance_matrix, edge_embedding, wks_features
from .graph import Graph, GraphError, LabeledGraph, build_laplacian, generate_barbell, generate_mirrored, load_edge_list
from .pipelines import PipelineConfig, embed, embed_baseline, embed_gse, embed_gsse
from .spectral import EigenSystem, build_pencil, eigh, q_beta, spd_shift
from .sylvester import GseConfig, compose_gse, solve_sylvester_dense

__all__ = [
    "EbcResult", "EigenSystem", "EmbeddingMatrix", "GseConfig", "Graph", "GraphError", "LabeledGraph",
    "PipelineConfig", "VbcResult", "WksConfig", "betweenness", "build_bcg", "build_laplacian", "build_pencil",
    "compose_gse", "distance_matrix", "edge_betweenness", "edge_embedding", "eigh", "embed", "embed_baseline",
    "embed_gse", "embed_gsse", "generate_barbell", "generate_mirrored", "karate_club", "load_edge_list",
    "q_beta", "solve_sylvester_dense", "spd_shift", "vertex_betweenness", "wks_features",
]
