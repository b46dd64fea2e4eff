"""Bradfordizing: productivity re-ranking of search results and Bradford zone evaluation."""

from .bradfordizer import (
    BradfordizedRanking,
    RankEntry,
    Zone,
    ZoneMode,
    ZonePartition,
    bradfordize,
    core_documents,
    partition_zones,
)
from .corpus import (
    Document,
    DocType,
    KeyMode,
    Qrels,
    SourceKey,
    SourceKind,
    Topic,
    normalize_key,
    parse_documents,
    parse_qrels,
    parse_topics,
    source_key,
)
from .errors import (
    BradfordError,
    DataError,
    DegenerateVarianceError,
    DuplicateIdError,
    InsufficientDataError,
    NoInformationError,
    ParseError,
    PartitionError,
    UndefinedImprovementError,
)
from .federation import MergeReport, merge_result_sets
from .ir_eval import AggregateEvaluation, DoctypeClass, UnjudgedPolicy, ZoneEvaluation, aggregate, evaluate_topic, improvement_pct
from .scattering import ScatteringProfile, aggregate_profiles, loglog_points, scattering_profile
from .stat_tests import TestResult, paired_t_test, wilcoxon_signed_rank

__version__ = "0.1.0"
