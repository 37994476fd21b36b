"""Language networks induced from word embeddings."""
from .community import Partition, compare_partitions, louvain, modularity
from .embedding_store import (
    EmbeddingFormatError,
    EmbeddingMatrix,
    EmbeddingStats,
    Vocabulary,
    load_embeddings,
    random_baseline,
    save_embeddings,
    stats,
    synth_mixture,
    top_n,
)
from .estimators import KNNGraph, Louvain, NetworkProfiler, ProximityGraph
from .graph import (
    ComponentLabeling,
    UndirectedGraph,
    components,
    giant_component,
    induce_ego_graph,
    induce_knn_graph,
    induce_proximity_graph,
)
from .neighbors import (
    NeighborTable,
    euclidean_distance,
    knn_all,
    knn_for_queries,
    knn_oracle,
    radius_all,
)
from .netmetrics import (
    MetricsReport,
    SweepCurve,
    average_path_length_exact,
    average_path_length_sampled,
    clustering_coefficient,
    degree_distribution,
    er_baseline,
    network_report,
    pagerank,
    power_law_exponent,
    sweep_knn,
    sweep_proximity,
)

__version__ = "0.1.0"
