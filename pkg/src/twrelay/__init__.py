"""Ranked decode-forward rate regions for the two-way multiple-relay channel."""
from .channel import (DiscreteChannel, GaussianNetwork, MITable, mi_cut, mi_node,
                      random_gaussian, symmetric_gaussian, tabulate)
from .geometry import Frontier, RatePentagon, RegionUnion, area, contains, equals
from .ranking import (PathPair, RankAssignment, ValidPairing, enumerate_valid,
                      extension_order, is_valid, lower_set, orthant_sets,
                      predecessors, ref_node, upstream)
from .region import (achievable_region, bmarc_cover_check, bmarc_select_index,
                     bmarc_subregion, cd_region, cutset_region, node_region,
                     scheme_region)
from .schedule import (DelayTable, build_schedule, compute_d, compute_f,
                       default_decoding, pipeline_latency, verify_causality)

__version__ = "0.1.0"
