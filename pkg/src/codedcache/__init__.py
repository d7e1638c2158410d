"""Coded placement / coded delivery caching for two files and K users."""

from codedcache.combinatorics import binom, enumerate_subsets, rank, unrank
from codedcache.model import (
    BroadcastMessage,
    CacheContent,
    Demand,
    FileId,
    ProblemInstance,
    canonicalize_demand,
    random_payload,
)
from codedcache.placement import build_caches, cache_index_set
from codedcache.delivery import (
    DecodeError,
    DeliveryPlan,
    SimulationReport,
    decode_user,
    evaluate_message,
    generate_messages,
    optimal_j,
    simulate,
)
from codedcache.rates import (
    RatePoint,
    achievable_points,
    chen_point,
    cutset_lower_bound,
    fmin_interpolate,
    fmin_k10,
    lower_hull,
    mn_rate,
    rate,
    rate_L,
    rate_with_j,
)
from codedcache.oracle import LinearSystem, build_user_system, decodable

__version__ = "0.1.0"
