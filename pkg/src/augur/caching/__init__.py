"""Cache eviction with next-arrival predictions."""

from .combiner import CombinedRun, eta, eta_over_opt, run_combined
from .marking import Marker, MarkerRun, Phase, PhaseLedger, clean_lower_bound, run_marker
from .policies import (LRU, CachePolicy, FurthestInFuture, belady, pfif, run_belady, run_lru,
                       run_pfif, simulate)
from .traces import (INF, RequestTrace, cyclic_trace, next_arrivals, noisy_predictions,
                     pfif_adversarial, random_trace, read_trace, reversed_predictions,
                     write_trace, zipf_trace)

__all__ = [
    "CachePolicy", "CombinedRun", "FurthestInFuture", "INF", "LRU", "Marker", "MarkerRun",
    "Phase", "PhaseLedger", "RequestTrace", "belady", "clean_lower_bound", "cyclic_trace",
    "eta", "eta_over_opt", "next_arrivals", "noisy_predictions", "pfif", "pfif_adversarial",
    "random_trace", "read_trace", "reversed_predictions", "run_belady", "run_combined",
    "run_lru", "run_marker", "run_pfif", "simulate", "write_trace", "zipf_trace",
]
