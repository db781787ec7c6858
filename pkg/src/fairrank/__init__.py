"""Fair score-based ranking: offline region indexing, online nearest-satisfactory queries."""

from .data import Dataset, Item
from .dataio import (DatasetSpec, IndexFile, IngestError, IndexFormatError,
                     fingerprint, ingest, load_index, parse_oracle_config,
                     sample_uniform, save_index)
from .errors import Unsatisfiable
from .exchange import (AngleHyperplane, DegenerateExchange, WeightSpaceExchange,
                       dominates, exchange_angle_2d, hyperpolar,
                       weight_space_exchange)
from .fairness import (Constraint, Oracle, OracleConfig, Ranking, order_by,
                       oracle_from_config, oracle_from_predicate)
from .geometry import (angle_distance, to_cartesian, to_polar, unit_ray,
                       weight_angle_distance)
from .gridindex import (AnglePartition, CellIndex, build_cell_index, gamma_for,
                        partition)
from .planner2d import SatisfactoryRanges2D, online_2d, raysweep_2d
from .query import QueryResult, md_baseline, md_online, theorem7_bound

__version__ = "1.0.0"

__all__ = [
    "AngleHyperplane", "AnglePartition", "CellIndex", "Constraint", "Dataset",
    "DatasetSpec", "DegenerateExchange", "IndexFile", "IndexFormatError",
    "IngestError", "Item", "Oracle", "OracleConfig", "QueryResult", "Ranking",
    "SatisfactoryRanges2D", "Unsatisfiable", "WeightSpaceExchange",
    "angle_distance", "build_cell_index", "dominates", "exchange_angle_2d",
    "fingerprint", "gamma_for", "hyperpolar", "ingest", "load_index",
    "md_baseline", "md_online", "online_2d", "oracle_from_config",
    "oracle_from_predicate", "order_by", "parse_oracle_config", "partition",
    "raysweep_2d", "sample_uniform", "save_index", "theorem7_bound",
    "to_cartesian", "to_polar", "unit_ray", "weight_angle_distance",
    "weight_space_exchange",
]
