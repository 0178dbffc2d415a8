"""ca3d: deterministic text clustering on a 3D cellular automaton.

Documents are vectorized (bag of words or character n-grams, tf-idf), pruned
by chi-square or information-gain attribute selection, compared under a
choice of distance functions, and placed one by one into a cubic grid whose
transition rules pull similar documents into adjacent cells.  Connected
components of occupied cells are the clusters; entropy and F-measure score
them against reference categories.
"""

__version__ = "0.1.0"

from .ca_engine import CaConfig, ClusterAssignment, Grid, extract_clusters, grid_for, run
from .ingest import Corpus, RawDocument
from .pipeline import RunSpec, run_pipeline, run_sweep
from .proximity import ProximityMatrix, build_proximity, to_similarity

__all__ = [
    "CaConfig",
    "ClusterAssignment",
    "Corpus",
    "Grid",
    "ProximityMatrix",
    "RawDocument",
    "RunSpec",
    "__version__",
    "build_proximity",
    "extract_clusters",
    "grid_for",
    "run",
    "run_pipeline",
    "run_sweep",
    "to_similarity",
]
