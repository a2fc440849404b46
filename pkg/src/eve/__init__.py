"""Explainable labeled concept embeddings from article-link and category graphs.

The package builds sparse vectors whose dimensions are human-readable article
and category names, evaluates them on intruder detection, clustering, and
ranking tasks, and produces per-task explanations from the labeled
dimensions.
"""

__version__ = "0.1.0"

from .dataset import Category, TaskDataset, TopicalType, load_dataset
from .embedder import (
    EmbedBatch,
    EveParams,
    article_scores,
    category_scores,
    embed_batch,
    embed_concept,
)
from .errors import (
    ConceptNotFoundError,
    DatasetError,
    DegenerateClusteringError,
    EveError,
    GraphLoadError,
    InvalidQueryError,
    MixedSpaceError,
    UndefinedMetricError,
    VectorFormatError,
    ZeroVectorError,
)
from .explain import (
    Explanation,
    ExplanationContext,
    explain_clusters,
    explain_intruder,
    explain_ranking,
)
from .graph import (
    ArticleRef,
    CategoryRef,
    WikiGraph,
    build_graph,
    default_stop_categories,
    load_graph,
    load_graph_dir,
    load_stop_categories,
    save_graph,
)
from .search import ConceptMatch, SearchIndex, build_search_index, resolve_concept, tokenize
from .tasks import (
    ClusterAssignment,
    IntruderQuery,
    RankingResult,
    accuracy,
    average_precision,
    between_cluster,
    ch_index,
    count_intruder_queries,
    detect_intruder,
    distance_matrix,
    gen_intruder_queries,
    precision_at_k,
    rank_items,
    sample_stream,
    within_cluster,
)
from .vectors import (
    DimensionKind,
    DimensionLabel,
    ExternalSpace,
    LabeledVector,
    article_label,
    category_label,
    cosine,
    dense_cosine,
    export_external,
    export_labeled,
    hadamard,
    import_external,
    import_labeled,
    mean,
    subtract,
    top_n,
)
