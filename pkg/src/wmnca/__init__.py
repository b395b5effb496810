"""Interference estimation and CA performance prediction for multi-radio mesh networks."""

__version__ = "0.1.0"

from .model import (ChannelAssignment, LimitExceeded, LinkChannelMap, ParseError,
                    ValidationError, WmnGraph, build_link_channel_map, load_assignment,
                    load_network)
from .conflict import (build_conflict_graph, interference_degree, link_distance,
                       total_interference_degree)
from .estimators import cdal_cost, cxls_wt, enumerate_xls, xls_weight
from .evaluation import build_report, degree_of_confidence, error_in_sequence, order_cas
